//! Finite quadratic forms: discriminant forms of even lattices, local
//! invariants at odd primes, and brute-force isometry search for small groups.

mod normalize5;
mod subgroups;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmat::{self, num, IntMatrix};
use crate::lattice::IntegralLattice;
use crate::{Error, Result};

pub use normalize5::{normalize_f5_module_form, F5Normalization};
pub use subgroups::subgroups_of_order;

/// Default cap on group orders for exhaustive searches.
pub const DEFAULT_BOUND: u64 = 10_000;

/// A finite abelian group `⊕ Z/d_i` with a quadratic form. Values are kept
/// over the common denominator `den`: `q(g_i) = vals[i][i] / den mod 2` and
/// `b(g_i, g_j) = vals[i][j] / den mod 1`. When `even` is false only `b` is
/// meaningful and the diagonal is read mod 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionQuadraticForm {
    orders: Vec<i64>,
    den: i64,
    vals: Vec<Vec<i64>>,
    even: bool,
}

pub type Element = Vec<i64>;

fn lcm(a: i64, b: i64) -> i64 {
    a / num::gcd(a as u64, b as u64) as i64 * b
}

fn to_small(x: &BigInt, what: &str) -> Result<i64> {
    match x.to_i64() {
        Some(v) if v.abs() < (1i64 << 40) => Ok(v),
        _ => Err(Error::OutOfRange(format!("{what} {x} is too large for finite form arithmetic"))),
    }
}

impl TorsionQuadraticForm {
    pub fn new(orders: Vec<i64>, den: i64, vals: Vec<Vec<i64>>, even: bool) -> Result<Self> {
        let k = orders.len();
        if den <= 0 || den >= (1 << 40) {
            return Err(Error::Invalid(format!("bad denominator {den}")));
        }
        if vals.len() != k || vals.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension(format!("value matrix for {k} generators")));
        }
        if orders.iter().any(|&d| d <= 1 || d >= (1 << 40)) {
            return Err(Error::Invalid("generator orders must exceed 1".into()));
        }
        let mut f = TorsionQuadraticForm { orders, den, vals, even };
        for i in 0..k {
            for j in 0..k {
                if (f.vals[i][j] - f.vals[j][i]).rem_euclid(den) != 0 {
                    return Err(Error::Invalid("value matrix is not symmetric".into()));
                }
            }
        }
        f.reduce_vals();
        for i in 0..k {
            let d = f.orders[i];
            for j in 0..k {
                if (d as i128 * f.vals[i][j] as i128).rem_euclid(den as i128) != 0 {
                    return Err(Error::Invalid(format!("b(g{i}, g{j}) is not killed by the order of g{i}")));
                }
            }
            if even && (d as i128 * d as i128 * f.vals[i][i] as i128).rem_euclid(2 * den as i128) != 0 {
                return Err(Error::Invalid(format!("q is not well defined on g{i}")));
            }
        }
        Ok(f)
    }

    /// Rational values, diagonal read mod 2 (mod 1 when `even` is false).
    pub fn from_rational(orders: Vec<i64>, vals: &[Vec<BigRational>], even: bool) -> Result<Self> {
        let mut den = BigInt::one();
        for r in vals {
            for v in r {
                den = den.lcm(v.denom());
            }
        }
        let den = to_small(&den, "denominator")?;
        let ints = vals
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| to_small(&(v * BigRational::from_integer(den.into())).to_integer(), "value"))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders, den, ints, even)
    }

    /// Odd `p`: the form on `F_p^k` with Gram `p·b`, entries mod p.
    pub fn from_fp_gram(p: i64, gram: &[Vec<i64>]) -> Result<Self> {
        if p <= 2 || !num::is_prime(p as u64) {
            return Err(Error::Invalid(format!("{p} is not an odd prime")));
        }
        let k = gram.len();
        let mut vals = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let g = gram[i][j].rem_euclid(p);
                // q must have even numerator over p on an odd order element
                vals[i][j] = if i == j && g % 2 == 1 { g + p } else { g };
            }
        }
        Self::new(vec![p; k], p, vals, true)
    }

    pub fn trivial() -> Self {
        TorsionQuadraticForm { orders: Vec::new(), den: 1, vals: Vec::new(), even: true }
    }

    fn reduce_vals(&mut self) {
        let k = self.orders.len();
        for i in 0..k {
            for j in 0..k {
                let m = if i == j && self.even { 2 * self.den } else { self.den };
                self.vals[i][j] = self.vals[i][j].rem_euclid(m);
            }
        }
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn order(&self) -> BigInt {
        self.orders.iter().map(|&d| BigInt::from(d)).product()
    }

    fn order_bounded(&self, bound: u64) -> Result<u64> {
        let o = self.order();
        match o.to_u64() {
            Some(v) if v <= bound => Ok(v),
            _ => Err(Error::BoundExceeded(format!("group of order {o} exceeds the search bound {bound}"))),
        }
    }

    /// Same form over the denominator `den·t`.
    fn scaled(&self, t: i64) -> Self {
        let mut f = self.clone();
        f.den *= t;
        for r in f.vals.iter_mut() {
            for v in r.iter_mut() {
                *v *= t;
            }
        }
        f
    }

    pub fn negated(&self) -> Self {
        let mut f = self.clone();
        for r in f.vals.iter_mut() {
            for v in r.iter_mut() {
                *v = -*v;
            }
        }
        f.reduce_vals();
        f
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = lcm(self.den, other.den);
        let (a, b) = (self.scaled(n / self.den), other.scaled(n / other.den));
        let (k1, k2) = (a.rank(), b.rank());
        let mut vals = vec![vec![0i64; k1 + k2]; k1 + k2];
        for i in 0..k1 {
            for j in 0..k1 {
                vals[i][j] = a.vals[i][j];
            }
        }
        for i in 0..k2 {
            for j in 0..k2 {
                vals[k1 + i][k1 + j] = b.vals[i][j];
            }
        }
        let mut orders = a.orders.clone();
        orders.extend_from_slice(&b.orders);
        TorsionQuadraticForm { orders, den: n, vals, even: self.even && other.even }
    }

    pub fn reduce(&self, x: &[i64]) -> Element {
        x.iter().zip(&self.orders).map(|(c, d)| c.rem_euclid(*d)).collect()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.rank()]
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Element {
        x.iter().zip(y).zip(&self.orders).map(|((a, b), d)| (a + b).rem_euclid(*d)).collect()
    }

    pub fn neg(&self, x: &[i64]) -> Element {
        x.iter().zip(&self.orders).map(|(a, d)| (-a).rem_euclid(*d)).collect()
    }

    pub fn scalar(&self, a: i64, x: &[i64]) -> Element {
        x.iter()
            .zip(&self.orders)
            .map(|(c, d)| (a as i128 * *c as i128).rem_euclid(*d as i128) as i64)
            .collect()
    }

    pub fn element_order(&self, x: &[i64]) -> i64 {
        x.iter()
            .zip(&self.orders)
            .fold(1, |acc, (c, d)| lcm(acc, d / num::gcd(c.rem_euclid(*d) as u64, *d as u64) as i64))
    }

    /// Numerator of `q(x)` over `den`, in `[0, 2·den)`.
    pub fn q(&self, x: &[i64]) -> i64 {
        let m = if self.even { 2 * self.den as i128 } else { self.den as i128 };
        let mut s: i128 = 0;
        for i in 0..self.rank() {
            if x[i] == 0 {
                continue;
            }
            let xi = x[i] as i128;
            s = (s + xi * xi % m * self.vals[i][i] as i128) % m;
            for j in i + 1..self.rank() {
                if x[j] != 0 {
                    s = (s + 2 * (xi * x[j] as i128 % m) * self.vals[i][j] as i128) % m;
                }
            }
        }
        s.rem_euclid(m) as i64
    }

    /// Numerator of `b(x, y)` over `den`, in `[0, den)`.
    pub fn b(&self, x: &[i64], y: &[i64]) -> i64 {
        let m = self.den as i128;
        let mut s: i128 = 0;
        for i in 0..self.rank() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.rank() {
                if y[j] != 0 {
                    s = (s + (x[i] as i128 * y[j] as i128 % m) * self.vals[i][j] as i128) % m;
                }
            }
        }
        s.rem_euclid(m) as i64
    }

    pub fn q_value(&self, x: &[i64]) -> BigRational {
        BigRational::new(self.q(x).into(), self.den.into())
    }

    pub fn b_value(&self, x: &[i64], y: &[i64]) -> BigRational {
        BigRational::new(self.b(x, y).into(), self.den.into())
    }

    /// Value matrix as rationals, `q` on the diagonal.
    pub fn value_matrix(&self) -> Vec<Vec<BigRational>> {
        (0..self.rank())
            .map(|i| (0..self.rank()).map(|j| BigRational::new(self.vals[i][j].into(), self.den.into())).collect())
            .collect()
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self, bound: u64) -> Result<Vec<Element>> {
        let total = self.order_bounded(bound)?;
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = self.zero();
        loop {
            out.push(cur.clone());
            let mut i = self.rank();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.orders[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Primes dividing the group order.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.orders.iter().flat_map(|&d| num::prime_divisors(d as u64)).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// Isomorphism type of the group: sorted prime power orders.
    pub fn group_type(&self) -> Vec<i64> {
        let mut t: Vec<i64> = self
            .orders
            .iter()
            .flat_map(|&d| num::factor(d as u64).into_iter().map(|(p, e)| (p as i64).pow(e)))
            .collect();
        t.sort_unstable();
        t
    }

    /// The p-primary part and the coordinates of its generators here.
    pub fn primary_part(&self, p: u64) -> (Self, Vec<Element>) {
        let p = p as i64;
        let mut orders = Vec::new();
        let mut embed: Vec<Element> = Vec::new();
        let mut mult = Vec::new();
        for (i, &d) in self.orders.iter().enumerate() {
            let mut pp = 1;
            while d % (pp * p) == 0 {
                pp *= p;
            }
            if pp == 1 {
                continue;
            }
            let m = d / pp;
            let mut e = self.zero();
            e[i] = m;
            embed.push(e);
            orders.push(pp);
            mult.push(i);
        }
        let k = orders.len();
        let mut vals = vec![vec![0i64; k]; k];
        for a in 0..k {
            for c in 0..k {
                vals[a][c] = if a == c { self.q(&embed[a]) } else { self.b(&embed[a], &embed[c]) };
            }
        }
        let f = TorsionQuadraticForm { orders, den: self.den, vals, even: self.even };
        (f, embed)
    }

    /// True if every generator has order p.
    pub fn is_elementary(&self, p: u64) -> bool {
        self.orders.iter().all(|&d| d == p as i64)
    }

    /// Restriction to the subgroup generated by `gens`, on a Smith basis of
    /// that subgroup. Also returns the basis in ambient coordinates.
    pub fn subform(&self, gens: &[Element]) -> (Self, Vec<Element>) {
        let (orders, basis) = subgroup_basis(&self.orders, gens);
        let k = orders.len();
        let mut vals = vec![vec![0i64; k]; k];
        for a in 0..k {
            for c in 0..k {
                vals[a][c] = if a == c { self.q(&basis[a]) } else { self.b(&basis[a], &basis[c]) };
            }
        }
        (TorsionQuadraticForm { orders, den: self.den, vals, even: self.even }, basis)
    }

    /// The F_p Gram `p·b mod p` of an elementary p-part.
    pub fn fp_gram(&self, p: u64) -> Result<Vec<Vec<i64>>> {
        let (fp, _) = self.primary_part(p);
        if !fp.is_elementary(p) {
            return Err(Error::Unsupported(format!("{p}-part is not elementary")));
        }
        let p = p as i128;
        let den = fp.den as i128;
        let k = fp.rank();
        let mut g = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let v = fp.vals[i][j] as i128 * p;
                debug_assert!(v % den == 0);
                g[i][j] = (v / den).rem_euclid(p) as i64;
            }
        }
        Ok(g)
    }

    /// True if no nonzero element is orthogonal to everything.
    pub fn is_nondegenerate(&self, bound: u64) -> Result<bool> {
        let gens: Vec<Element> = (0..self.rank())
            .map(|i| {
                let mut e = self.zero();
                e[i] = 1;
                e
            })
            .collect();
        for x in self.elements(bound)?.iter().skip(1) {
            if gens.iter().all(|g| self.b(x, g) == 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Smith basis of the subgroup of `⊕ Z/orders` generated by `gens`:
/// returns the orders `e_i > 1` and generators `w_i`.
pub fn subgroup_basis(orders: &[i64], gens: &[Element]) -> (Vec<i64>, Vec<Element>) {
    let k = orders.len();
    if k == 0 {
        return (Vec::new(), Vec::new());
    }
    let modulus = orders.iter().fold(1, |a, &b| lcm(a, b));
    let mut rows: Vec<Vec<BigInt>> = gens.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
    for (i, &d) in orders.iter().enumerate() {
        let mut r = vec![BigInt::zero(); k];
        r[i] = BigInt::from(d);
        rows.push(r);
    }
    let bh = exactmat::span_hnf(&rows, k, Some(&BigInt::from(modulus)));
    let dmat = IntMatrix::diagonal(&orders.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>());
    let bh_inv = bh.to_rat().inverse().expect("full rank");
    let r = dmat.to_rat().mul(&bh_inv).to_int().expect("relations lie in the subgroup lattice");
    let (e, _u, v) = exactmat::snf(&r);
    let vinv = v.to_rat().inverse().expect("unimodular").to_int().expect("unimodular");
    let w = vinv.mul(&bh);
    let mut out_orders = Vec::new();
    let mut out = Vec::new();
    for (i, ei) in e.iter().enumerate() {
        let ei = ei.abs().to_i64().expect("divides the group order");
        if ei == 1 {
            continue;
        }
        let g: Element = (0..k)
            .map(|j| w.get(i, j).mod_floor(&BigInt::from(orders[j])).to_i64().expect("reduced"))
            .collect();
        out_orders.push(ei);
        out.push(g);
    }
    (out_orders, out)
}

/// The discriminant form of an even lattice; for odd lattices only `b` is
/// carried and the result is flagged as not even.
pub fn disc_form(l: &IntegralLattice) -> Result<TorsionQuadraticForm> {
    let d = l.disc_group();
    let orders = d.invariants().iter().map(|x| to_small(x, "invariant factor")).collect::<Result<Vec<_>>>()?;
    let gens = d.generators();
    let k = gens.len();
    let mut vals = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let v = l.inner_q(&gens[i], &gens[j]);
            vals[i][j] = v.clone();
            vals[j][i] = v;
        }
    }
    TorsionQuadraticForm::from_rational(orders, &vals, l.is_even())
}

/// Discriminant group coordinates (as machine integers) of `x ∈ L^∨`.
pub fn disc_coords(l: &IntegralLattice, x: &[BigRational]) -> Result<Element> {
    l.disc_group()
        .reduce(x)?
        .iter()
        .map(|c| to_small(c, "coordinate"))
        .collect()
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 0 || !num::is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not an odd prime")));
    }
    Ok(())
}

pub fn legendre(a: &BigInt, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    let r = a.mod_floor(&BigInt::from(p)).to_i64().expect("reduced");
    Ok(num::legendre_u64(r as i128, p))
}

fn det_mod_p(m: &[Vec<i64>], p: i64) -> i64 {
    let k = m.len();
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let mut det: i64 = 1;
    for c in 0..k {
        let Some(r) = (c..k).find(|&r| a[r][c] != 0) else { return 0 };
        if r != c {
            a.swap(r, c);
            det = (p - det) % p;
        }
        det = det * a[c][c] % p;
        let inv = exactmat::modp::inv_mod(a[c][c] as u64, p as u64) as i64;
        for r in c + 1..k {
            if a[r][c] == 0 {
                continue;
            }
            let f = a[r][c] * inv % p;
            for j in c..k {
                a[r][j] = (a[r][j] - f * a[c][j]).rem_euclid(p);
            }
        }
    }
    det
}

/// Legendre class of `det q_p` on an elementary p-part; +1 for a trivial part.
pub fn det_square_class(f: &TorsionQuadraticForm, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    let g = f.fp_gram(p)?;
    if g.is_empty() {
        return Ok(1);
    }
    match num::legendre_u64(det_mod_p(&g, p as i64) as i128, p) {
        0 => Err(Error::Degenerate),
        s => Ok(s),
    }
}

/// `dim·(p-1) + 4k_p mod 8` on an elementary p-part.
pub fn p_excess(f: &TorsionQuadraticForm, p: u64) -> Result<u8> {
    check_odd_prime(p)?;
    let (fp, _) = f.primary_part(p);
    if fp.rank() == 0 {
        return Ok(0);
    }
    let k = if det_square_class(f, p)? == -1 { 4 } else { 0 };
    Ok(((fp.rank() as u64 * (p - 1) + k) % 8) as u8)
}

/// Checks `sig + Σ_{p≥3} p-excess ≡ oddity (mod 8)` where the oddity is only
/// known to vanish for odd determinant.
pub fn oddity_check(l: &IntegralLattice) -> Result<bool> {
    if !l.is_even() {
        return Err(Error::Invalid("oddity check needs an even lattice".into()));
    }
    let f = disc_form(l)?;
    let (pos, neg) = l.signature();
    let mut total = pos as i64 - neg as i64;
    for p in f.primes() {
        if p == 2 {
            return Err(Error::Unsupported("oddity of a nontrivial 2-part".into()));
        }
        total += p_excess(&f, p)? as i64;
    }
    Ok(total.rem_euclid(8) == 0)
}

/// Backtracking search for maps on generators `g_i ↦ y_i` with
/// `q(y_i) = sign·q(g_i)`, `b(y_i, y_j) = sign·b(g_i, g_j)` and exact orders
/// preserved, which are injective. Results come in lexicographic order of the
/// image tuples.
pub fn isometric_embeddings(
    src: &TorsionQuadraticForm,
    dst: &TorsionQuadraticForm,
    sign: i64,
    first_only: bool,
    bound: u64,
) -> Result<Vec<Vec<Element>>> {
    src.order_bounded(bound)?;
    let n = lcm(src.den, dst.den);
    let (s, d) = (src.scaled(n / src.den), dst.scaled(n / dst.den));
    let elems = d.elements(bound)?;
    let qm = if s.even && d.even { 2 * n } else { n };
    let k = s.rank();
    let mut cands: Vec<Vec<usize>> = Vec::with_capacity(k);
    for i in 0..k {
        let want = (sign * s.vals[i][i]).rem_euclid(qm);
        cands.push(
            (0..elems.len())
                .filter(|&e| d.element_order(&elems[e]) == s.orders[i] && d.q(&elems[e]).rem_euclid(qm) == want)
                .collect(),
        );
    }
    let target = src.order();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    fn rec(
        s: &TorsionQuadraticForm,
        d: &TorsionQuadraticForm,
        sign: i64,
        elems: &[Element],
        cands: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        target: &BigInt,
        first_only: bool,
        out: &mut Vec<Vec<Element>>,
    ) {
        let i = chosen.len();
        if i == cands.len() {
            let imgs: Vec<Element> = chosen.iter().map(|&c| elems[c].clone()).collect();
            let (ord, _) = subgroup_basis(&d.orders, &imgs);
            if ord.iter().map(|&e| BigInt::from(e)).product::<BigInt>() == *target {
                out.push(imgs);
            }
            return;
        }
        for &c in &cands[i] {
            let ok = (0..i).all(|j| d.b(&elems[c], &elems[chosen[j]]) == (sign * s.vals[i][j]).rem_euclid(s.den));
            if !ok {
                continue;
            }
            chosen.push(c);
            rec(s, d, sign, elems, cands, chosen, target, first_only, out);
            chosen.pop();
            if first_only && !out.is_empty() {
                return;
            }
        }
    }
    rec(&s, &d, sign, &elems, &cands, &mut chosen, &target, first_only, &mut out);
    Ok(out)
}

fn brute_isomorphic(f: &TorsionQuadraticForm, g: &TorsionQuadraticForm, bound: u64) -> Result<bool> {
    match isometric_embeddings(f, g, 1, true, bound) {
        Ok(v) => Ok(!v.is_empty()),
        Err(Error::BoundExceeded(m)) => Err(Error::Undecided(m)),
        Err(e) => Err(e),
    }
}

/// Isomorphism of finite forms. Odd elementary parts are compared by
/// dimension and determinant class, everything else by exhaustive search.
pub fn forms_isomorphic(f: &TorsionQuadraticForm, g: &TorsionQuadraticForm, bound: u64) -> Result<bool> {
    if f.even != g.even {
        return Ok(false);
    }
    if f.group_type() != g.group_type() {
        return Ok(false);
    }
    for p in f.primes() {
        let (fp, _) = f.primary_part(p);
        let (gp, _) = g.primary_part(p);
        if p != 2 && fp.is_elementary(p) {
            if det_square_class(&fp, p)? != det_square_class(&gp, p)? {
                return Ok(false);
            }
        } else if !brute_isomorphic(&fp, &gp, bound)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All automorphisms of the group preserving q, each given by the images of
/// the generators.
pub fn orthogonal_group_q(f: &TorsionQuadraticForm, bound: u64) -> Result<Vec<Vec<Element>>> {
    isometric_embeddings(f, f, 1, false, bound)
}

/// Local data of an even lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusData {
    pub signature: (usize, usize),
    /// (p, dim, det class) for odd p with elementary p-part.
    pub odd_elementary: Vec<(u64, usize, i8)>,
    /// Remaining primary parts, kept as forms.
    pub other: Vec<(u64, TorsionQuadraticForm)>,
}

pub fn genus_data(l: &IntegralLattice) -> Result<GenusData> {
    if !l.is_even() {
        return Err(Error::Invalid("genus data needs an even lattice".into()));
    }
    let f = disc_form(l)?;
    let mut odd_elementary = Vec::new();
    let mut other = Vec::new();
    for p in f.primes() {
        let (fp, _) = f.primary_part(p);
        if p != 2 && fp.is_elementary(p) {
            odd_elementary.push((p, fp.rank(), det_square_class(&fp, p)?));
        } else {
            other.push((p, fp));
        }
    }
    Ok(GenusData { signature: l.signature(), odd_elementary, other })
}

/// Same signature and isomorphic discriminant forms.
pub fn genus_equal(l: &IntegralLattice, m: &IntegralLattice, bound: u64) -> Result<bool> {
    if !l.is_even() || !m.is_even() {
        return Err(Error::Invalid("genus comparison needs even lattices".into()));
    }
    if l.signature() != m.signature() {
        return Ok(false);
    }
    forms_isomorphic(&disc_form(l)?, &disc_form(m)?, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::rat;
    use crate::lattice::parse_lattice_expr;
    use proptest::prelude::*;

    fn lat(s: &str) -> IntegralLattice {
        parse_lattice_expr(s).unwrap()
    }

    #[test]
    fn disc_form_examples() {
        let f = disc_form(&lat("A1")).unwrap();
        assert_eq!(f.orders(), &[2]);
        assert_eq!(f.q_value(&[1]), rat(3, 2));
        let f = disc_form(&lat("U(5)")).unwrap();
        assert_eq!(f.orders(), &[5, 5]);
        let x = [1, 0];
        let y = [0, 1];
        assert_eq!(f.q_value(&x), rat(0, 1));
        assert_eq!(f.q_value(&y), rat(0, 1));
        // b is hyperbolic with entry ±1/5 (the Smith basis may flip a sign)
        let bxy = f.b_value(&x, &y);
        assert!(bxy == rat(1, 5) || bxy == rat(4, 5));
        assert_eq!(disc_form(&lat("E8")).unwrap().rank(), 0);
        assert!(!disc_form(&lat("(3)")).unwrap().is_even());
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(&BigInt::from(2), 19).unwrap(), -1);
        assert_eq!(legendre(&BigInt::from(-1), 5).unwrap(), 1);
        assert_eq!(legendre(&BigInt::from(0), 7).unwrap(), 0);
        assert!(legendre(&BigInt::from(1), 9).is_err());
        assert!(legendre(&BigInt::from(1), 2).is_err());
    }

    #[test]
    fn excess_and_det_class() {
        let t = TorsionQuadraticForm::trivial();
        assert_eq!(p_excess(&t, 5).unwrap(), 0);
        assert_eq!(det_square_class(&t, 5).unwrap(), 1);
        let hyp = TorsionQuadraticForm::from_fp_gram(7, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(det_square_class(&hyp, 7).unwrap(), legendre(&BigInt::from(-1), 7).unwrap());
        // (-38): 19-part generated by 2b/38, q = -4/38·... class computed by hand
        let f = disc_form(&lat("(-38)")).unwrap();
        let (f19, _) = f.primary_part(19);
        let g = f19.fp_gram(19).unwrap();
        // the 19-part generator is 2·(b/38) = b/19 with q = -38/361 = -2/19
        assert_eq!(g, vec![vec![(-2i64).rem_euclid(19)]]);
        let k = if legendre(&BigInt::from(-2), 19).unwrap() == -1 { 4 } else { 0 };
        assert_eq!(p_excess(&f, 19).unwrap() as u64, (18 + k) % 8);
        assert!(p_excess(&disc_form(&lat("(-18)")).unwrap(), 3).is_err());
    }

    #[test]
    fn oddity_examples() {
        for s in ["A2", "E8", "A4", "E6", "H5", "U(3)+A2", "2*U(5)", "U+4*A2"] {
            assert!(oddity_check(&lat(s)).unwrap(), "{s}");
        }
        assert!(matches!(oddity_check(&lat("A1")), Err(Error::Unsupported(_))));
        assert!(matches!(oddity_check(&lat("(-18)+(2)")), Err(Error::Unsupported(_))));
        assert!(oddity_check(&lat("(3)")).is_err());
    }

    #[test]
    fn isomorphism_examples() {
        let q12 = TorsionQuadraticForm::from_rational(vec![2], &[vec![rat(1, 2)]], true).unwrap();
        let q32 = TorsionQuadraticForm::from_rational(vec![2], &[vec![rat(3, 2)]], true).unwrap();
        assert!(!forms_isomorphic(&q12, &q32, DEFAULT_BOUND).unwrap());
        assert!(forms_isomorphic(&q12, &q12, DEFAULT_BOUND).unwrap());
        let f = disc_form(&lat("A2")).unwrap();
        let g = disc_form(&lat("A2+E8+U")).unwrap();
        assert!(forms_isomorphic(&f, &g, DEFAULT_BOUND).unwrap());
        assert!(!forms_isomorphic(&disc_form(&lat("A2")).unwrap(), &disc_form(&lat("A2(-1)")).unwrap(), DEFAULT_BOUND).unwrap());
        assert!(matches!(
            forms_isomorphic(&disc_form(&lat("4*A1")).unwrap(), &disc_form(&lat("4*A1")).unwrap(), 8),
            Err(Error::Undecided(_))
        ));
    }

    #[test]
    fn orthogonal_groups() {
        let f = TorsionQuadraticForm::from_fp_gram(5, &[vec![1]]).unwrap();
        assert_eq!(orthogonal_group_q(&f, DEFAULT_BOUND).unwrap().len(), 2);
        assert_eq!(orthogonal_group_q(&TorsionQuadraticForm::trivial(), DEFAULT_BOUND).unwrap().len(), 1);
        // U(2): q vanishes on both generators; swapping them is the only nontrivial map
        let f = disc_form(&lat("U(2)")).unwrap();
        assert_eq!(orthogonal_group_q(&f, DEFAULT_BOUND).unwrap().len(), brute_count(&f));
        let f = disc_form(&lat("D4")).unwrap();
        assert_eq!(orthogonal_group_q(&f, DEFAULT_BOUND).unwrap().len(), 6);
    }

    // all bijections of the element set that are additive and preserve q
    fn brute_count(f: &TorsionQuadraticForm) -> usize {
        let els = f.elements(100).unwrap();
        let n = els.len();
        let mut count = 0;
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let ok = (0..n).all(|i| f.q(&els[perm[i]]) == f.q(&els[i]))
                && (0..n).all(|i| {
                    (0..n).all(|j| {
                        let s = els.iter().position(|e| *e == f.add(&els[i], &els[j])).unwrap();
                        f.add(&els[perm[i]], &els[perm[j]]) == els[perm[s]]
                    })
                });
            if ok {
                count += 1;
            }
            // next permutation
            let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        count
    }

    #[test]
    fn genus_examples() {
        assert!(genus_equal(&lat("U+A2"), &lat("U+A2"), DEFAULT_BOUND).unwrap());
        assert!(!genus_equal(&lat("U"), &lat("U(5)"), DEFAULT_BOUND).unwrap());
        assert!(genus_equal(&lat("U+E8"), &lat("U(1)+E8"), DEFAULT_BOUND).unwrap());
        let m = IntegralLattice::from_i64(&[vec![2, 1], vec![1, -4]]);
        assert!(genus_equal(&m, &m, DEFAULT_BOUND).unwrap());
        assert!(!genus_equal(&m, &lat("(2)+(-18)"), DEFAULT_BOUND).unwrap());
    }

    #[test]
    fn subgroup_bases() {
        let (o, b) = subgroup_basis(&[2, 4], &[vec![0, 2]]);
        assert_eq!(o, vec![2]);
        assert_eq!(b.len(), 1);
        let (o, _) = subgroup_basis(&[6], &[vec![2], vec![3]]);
        assert_eq!(o, vec![6]);
        let (o, _) = subgroup_basis(&[5, 5], &[]);
        assert!(o.is_empty());
    }

    fn catalog_sum() -> impl Strategy<Value = IntegralLattice> {
        let names = vec!["A2", "A4", "E6", "E8", "U", "H5", "U(3)", "U(5)", "A2(5)", "A4(-1)", "U(7)", "E6(-1)", "A6"];
        prop::collection::vec(prop::sample::select(names), 1..4).prop_map(|v| lat(&v.join("+")))
    }

    fn small_form() -> impl Strategy<Value = TorsionQuadraticForm> {
        prop::sample::select(vec!["A2", "A1", "U(2)", "D4", "A3", "2*A1", "A2+A1", "(6)", "(-10)", "U(3)", "H5", "(2)+(-6)"])
            .prop_map(|s| disc_form(&lat(s)).unwrap())
    }

    proptest! {
        #[test]
        fn oddity_formula_holds(l in catalog_sum()) {
            prop_assert!(oddity_check(&l).unwrap());
        }

        #[test]
        fn q_homogeneous(f in small_form(), a in -7i64..8) {
            for x in f.elements(DEFAULT_BOUND).unwrap() {
                let ax = f.scalar(a, &x);
                let m = 2 * f.den() as i128;
                prop_assert_eq!(f.q(&ax) as i128, (a as i128 * a as i128 * f.q(&x) as i128).rem_euclid(m));
            }
        }

        #[test]
        fn isomorphism_equivalence(f in small_form(), g in small_form(), h in small_form()) {
            let iso = |x: &TorsionQuadraticForm, y: &TorsionQuadraticForm| forms_isomorphic(x, y, DEFAULT_BOUND).unwrap();
            prop_assert!(iso(&f, &f));
            prop_assert_eq!(iso(&f, &g), iso(&g, &f));
            if iso(&f, &g) && iso(&g, &h) {
                prop_assert!(iso(&f, &h));
            }
        }

        #[test]
        fn det_class_agrees_with_search(l in prop::sample::select(vec!["H5", "A4", "U(5)", "A4(-1)", "(10)", "(-10)", "(30)", "A4+(-10)", "U(5)+A4"]),
                                        m in prop::sample::select(vec!["H5", "A4", "U(5)", "A4(-1)", "(10)", "(-10)", "(30)", "A4+(-10)", "U(5)+A4"])) {
            let f = disc_form(&lat(l)).unwrap().primary_part(5).0;
            let g = disc_form(&lat(m)).unwrap().primary_part(5).0;
            let fast = forms_isomorphic(&f, &g, DEFAULT_BOUND).unwrap();
            let slow = f.group_type() == g.group_type() && brute_isomorphic(&f, &g, DEFAULT_BOUND).unwrap();
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn orthogonal_group_is_group(f in small_form()) {
            let os = orthogonal_group_q(&f, DEFAULT_BOUND).unwrap();
            let els = f.elements(DEFAULT_BOUND).unwrap();
            let apply = |m: &Vec<Element>, x: &Element| {
                let mut y = f.zero();
                for (c, img) in x.iter().zip(m) {
                    y = f.add(&y, &f.scalar(*c, img));
                }
                y
            };
            let gens: Vec<Element> = (0..f.rank()).map(|i| { let mut e = f.zero(); e[i] = 1; e }).collect();
            for a in &os {
                for x in &els {
                    prop_assert_eq!(f.q(&apply(a, x)), f.q(x));
                }
                let inv_found = os.iter().any(|b| gens.iter().all(|g| apply(b, &apply(a, g)) == *g));
                prop_assert!(inv_found);
                for b in &os {
                    let comp: Vec<Element> = gens.iter().map(|g| apply(b, &apply(a, g))).collect();
                    prop_assert!(os.contains(&comp));
                }
            }
        }
    }
}
