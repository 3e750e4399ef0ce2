//! Discriminant groups as modules over `Z[x]/c_n`, prime ideal generators
//! and unit classes modulo an ideal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{cyclotomic_poly, euler_phi, CnLattice, FieldElem};
use crate::exactmat::modp::{self, FpPoly};
use crate::exactmat::{self, num, IntMatrix, ZPoly};
use crate::finquad::DEFAULT_BOUND;
use crate::lattice::IntegralLattice;
use crate::{Error, Result};

/// The primary part of the discriminant at one prime `P = (p, φ(x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealFactor {
    pub p: u64,
    /// The monic factor of `c_n mod p` cutting out P.
    pub residue: FpPoly,
    pub generator: ZPoly,
    /// The module is `⊕ O_K/P^k` over these k, largest first.
    pub exponents: Vec<u32>,
}

impl IdealFactor {
    pub fn residue_degree(&self) -> usize {
        self.residue.len() - 1
    }
}

/// `D ≅ ⊕ O_K/P^k` over the listed factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscModule {
    pub n: u64,
    pub factors: Vec<IdealFactor>,
}

impl DiscModule {
    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.factors
            .iter()
            .map(|f| BigInt::from(f.p).pow(f.residue_degree() as u32 * f.exponents.iter().sum::<u32>()))
            .product()
    }

    /// True when every primary part is cyclic, i.e. `D ≅ O_K/I`.
    pub fn is_cyclic(&self) -> bool {
        self.factors.iter().all(|f| f.exponents.len() <= 1)
    }
}

fn kernel_order(a: &IntMatrix, d: &[BigInt]) -> BigInt {
    let k = d.len();
    let mut rows = a.to_rows();
    for (i, di) in d.iter().enumerate() {
        let mut r = vec![BigInt::zero(); k];
        r[i] = di.clone();
        rows.push(r);
    }
    let h = exactmat::span_hnf(&rows, k, None);
    (0..k).map(|i| h.get(i, i).abs()).product()
}

/// Exponents k of the summands `O/P^k` of the P-primary part of `D_L`, where
/// `P = (π)` has residue norm `norm` and `f` is an isometry of L.
pub fn module_exponents(l: &IntegralLattice, f: &IntMatrix, pi: &ZPoly, norm: &BigInt) -> Result<Vec<u32>> {
    let dg = l.disc_group();
    let d = dg.invariants().to_vec();
    if d.is_empty() {
        return Ok(Vec::new());
    }
    let e = dg.exponent();
    let pm = exactmat::poly_at(pi, f).to_rat();
    let mut rows = Vec::with_capacity(d.len());
    for g in dg.generators() {
        rows.push(dg.reduce(&pm.vec_mul(g)).map_err(|_| Error::Invalid("map does not preserve the dual lattice".into()))?);
    }
    let a = IntMatrix::from_rows(rows)?;
    let mut power = a.clone();
    let mut sizes = vec![BigInt::one()];
    loop {
        let s = kernel_order(&power, &d);
        if &s == sizes.last().expect("nonempty") {
            break;
        }
        sizes.push(s);
        power = IntMatrix::from_rows(power.mul(&a).to_rows().into_iter().map(|r| r.into_iter().map(|x| x.mod_floor(&e)).collect()).collect())?;
    }
    let mut counts = Vec::new();
    for w in sizes.windows(2) {
        let (q, r) = w[1].div_rem(&w[0]);
        let mut c = 0u32;
        let mut q = q;
        if !r.is_zero() {
            return Err(Error::Invalid("kernel orders are not nested".into()));
        }
        while q > BigInt::one() {
            let (q2, r2) = q.div_rem(norm);
            if !r2.is_zero() {
                return Err(Error::Invalid("kernel growth is not a power of the residue norm".into()));
            }
            q = q2;
            c += 1;
        }
        counts.push(c);
    }
    // counts[j] = number of summands with exponent > j
    let mut out = Vec::new();
    for (j, &c) in counts.iter().enumerate() {
        let next = counts.get(j + 1).copied().unwrap_or(0);
        for _ in next..c {
            out.push(j as u32 + 1);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Vectors of the given dimension with `Σ|c_i| = radius` and a positive last
/// nonzero entry, ordered by that position and then lexicographically.
pub(crate) fn l1_sphere(dim: usize, radius: u32) -> Vec<Vec<i64>> {
    fn fill(pos: usize, left: u32, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if pos == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=left as i64 {
            let signs: &[i64] = if v == 0 { &[1] } else { &[-1, 1] };
            for &s in signs {
                cur[pos - 1] = s * v;
                fill(pos - 1, left - v as u32, cur, out);
            }
        }
        cur[pos - 1] = 0;
    }
    let mut out = Vec::new();
    for top in 0..dim {
        for lead in 1..=radius as i64 {
            let mut cur = vec![0i64; dim];
            cur[top] = lead;
            fill(top, radius - lead as u32, &mut cur, &mut out);
        }
    }
    out
}

const SEARCH_RADIUS: u32 = 4;
const SEARCH_CAP: usize = 2_000_000;

/// A small generator in `Z[x]/c_n` of the prime `(p, φ(x))`.
pub fn prime_generator(n: u64, p: u64, residue: &FpPoly) -> Result<ZPoly> {
    let c = cyclotomic_poly(n);
    let d = c.deg();
    let f = residue.len().saturating_sub(1) as u32;
    let target = BigInt::from(p).pow(f);
    let test = |v: &[i64]| -> Option<ZPoly> {
        let h = ZPoly::from_i64(v);
        let hm = modp::reduce(h.coeffs(), p);
        if !hm.is_empty() && !modp::divrem(&hm, residue, p).1.is_empty() {
            return None;
        }
        if h.is_zero() {
            return None;
        }
        (c.resultant(&h).abs() == target).then_some(h)
    };
    for radius in 1..=SEARCH_RADIUS {
        for v in l1_sphere(d, radius) {
            if let Some(h) = test(&v) {
                return Ok(h);
            }
        }
    }
    // coefficient boxes [-b, b]^d
    for b in 2i64..=4 {
        let side = (2 * b + 1) as usize;
        if side.checked_pow(d as u32).map_or(true, |s| s > SEARCH_CAP) {
            break;
        }
        let mut v = vec![-b; d];
        loop {
            if let Some(h) = test(&v) {
                return Ok(h);
            }
            let mut i = 0;
            while i < d {
                v[i] += 1;
                if v[i] <= b {
                    break;
                }
                v[i] = -b;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    Err(Error::GeneratorNotFound(format!("prime above {p} of degree {f} in Q(ζ_{n})")))
}

/// Primary decomposition of `D_L` as a `Z[x]/c_n`-module, f acting with
/// minimal polynomial `c_n`.
pub fn disc_module_of(l: &IntegralLattice, f: &IntMatrix, n: u64) -> Result<DiscModule> {
    let phi = euler_phi(n);
    if !(1..=20).contains(&phi) {
        return Err(Error::OutOfRange(format!("φ({n}) = {phi}")));
    }
    let c = cyclotomic_poly(n);
    if !exactmat::poly_at(&c, f).is_zero() {
        return Err(Error::Invalid(format!("c_{n} does not annihilate the isometry")));
    }
    let order = l.det().abs();
    let ord = order.to_u64().ok_or_else(|| Error::OutOfRange("determinant".into()))?;
    let mut factors = Vec::new();
    for p in num::prime_divisors(ord) {
        for (res, _) in modp::factor(&modp::reduce(c.coeffs(), p), p) {
            let generator = prime_generator(n, p, &res)?;
            let norm = BigInt::from(p).pow(res.len() as u32 - 1);
            let exponents = module_exponents(l, f, &generator, &norm)?;
            if !exponents.is_empty() {
                factors.push(IdealFactor { p, residue: res, generator, exponents });
            }
        }
    }
    factors.sort_by(|a, b| (a.p, &a.residue).cmp(&(b.p, &b.residue)));
    let m = DiscModule { n, factors };
    if m.order() != order {
        return Err(Error::Invalid("discriminant is not a module over the cyclotomic integers".into()));
    }
    Ok(m)
}

/// `L₀(a)^∨/L₀(a) ≅ O_K/abO_K`, factored.
pub fn disc_module(l: &CnLattice) -> Result<DiscModule> {
    let n = l.n().ok_or_else(|| Error::Unsupported("discriminant module needs a cyclotomic lattice".into()))?;
    disc_module_of(l.lattice(), &l.x_action(), n)
}

fn reduce_mod(h: &IntMatrix, v: &mut [BigInt]) {
    for i in 0..v.len() {
        let q = v[i].div_floor(h.get(i, i));
        if !q.is_zero() {
            for j in i..v.len() {
                v[j] -= &q * h.get(i, j);
            }
        }
    }
}

/// Classes `[u]` of `(O_K/I)^×` with `u·σ(u) ≡ 1`, for `I = (g)`, as reduced
/// residues in the power basis.
pub fn aut_discmodule_units(n: u64, g: &ZPoly) -> Result<Vec<ZPoly>> {
    let c = cyclotomic_poly(n);
    let d = c.deg();
    let gq = g.to_q();
    let cq = c.to_q();
    let mult_rows = |h: &ZPoly| -> Vec<Vec<BigInt>> {
        let mut rows = Vec::with_capacity(d);
        let mut cur = h.to_q().rem(&cq);
        for _ in 0..d {
            rows.push((0..d).map(|i| cur.coeff(i).to_integer()).collect());
            cur = cur.mul(&crate::exactmat::QPoly::x()).rem(&cq);
        }
        rows
    };
    if gq.rem(&cq).is_zero() {
        return Err(Error::Invalid("zero ideal".into()));
    }
    let h = exactmat::span_hnf(&mult_rows(g), d, None);
    let size: BigInt = (0..d).map(|i| h.get(i, i).clone()).product();
    if size > BigInt::from(DEFAULT_BOUND) {
        return Err(Error::BoundExceeded(format!("|O_K/I| = {size}")));
    }
    if size.is_one() {
        return Ok(vec![ZPoly::one()]);
    }
    let diag: Vec<i64> = (0..d).map(|i| h.get(i, i).to_i64().expect("bounded")).collect();
    let mut out = Vec::new();
    let mut cur = vec![0i64; d];
    loop {
        let uz = ZPoly::from_i64(&cur);
        let mut rows = mult_rows(&uz);
        rows.extend(h.to_rows());
        let span = exactmat::span_hnf(&rows, d, None);
        if (0..d).all(|i| span.get(i, i).is_one()) {
            let u = FieldElem::new(&c, &uz.to_q())?;
            let w = u.mul(&u.sigma()).sub(&FieldElem::from_int(&c, 1)?);
            let mut w: Vec<BigInt> = w.coeffs().iter().map(|x| x.to_integer()).collect();
            reduce_mod(&h, &mut w);
            if w.iter().all(|x| x.is_zero()) {
                out.push(uz);
            }
        }
        // next residue in the box
        let mut i = 0;
        loop {
            if i == d {
                out.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
                return Ok(out);
            }
            cur[i] += 1;
            if cur[i] < diag[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Reduced residue of an element modulo `(g)` in `Z[x]/c_n`.
pub fn reduce_mod_ideal(n: u64, g: &ZPoly, h: &ZPoly) -> ZPoly {
    let c = cyclotomic_poly(n);
    let d = c.deg();
    let cq = c.to_q();
    let mut rows = Vec::with_capacity(d);
    let mut cur = g.to_q().rem(&cq);
    for _ in 0..d {
        rows.push((0..d).map(|i| cur.coeff(i).to_integer()).collect::<Vec<_>>());
        cur = cur.mul(&crate::exactmat::QPoly::x()).rem(&cq);
    }
    let hn = exactmat::span_hnf(&rows, d, None);
    let hr = h.to_q().rem(&cq);
    let mut v: Vec<BigInt> = (0..d).map(|i| hr.coeff(i).to_integer()).collect();
    reduce_mod(&hn, &mut v);
    ZPoly::new(v)
}
