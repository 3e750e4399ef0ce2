//! Short vectors and roots of definite lattices, Vinberg's algorithm for
//! hyperbolic lattices, and the symmetry group of the resulting chamber.

mod enumerate;
mod polytope;
mod symmetry;

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmat::{self, IntMatrix, RatMatrix};
use crate::lattice::IntegralLattice;
use crate::{Error, Result};

use enumerate::{lex_positive, primitive, Ldl};

pub use symmetry::{chamber_symmetries, chamber_to_disc, ChamberSymmetryGroup, DiscImage, Permutation};

fn definite_form(l: &IntegralLattice) -> Result<IntMatrix> {
    let (p, q) = l.signature();
    let n = l.rank();
    if p == n {
        Ok(l.gram().clone())
    } else if q == n {
        Ok(l.gram().scale(&BigInt::from(-1)))
    } else {
        Err(Error::Invalid(format!("lattice of signature ({p}, {q}) is not definite")))
    }
}

/// All `v ≠ 0` with `|v²| ≤ bound`, one of each pair ±v (first nonzero
/// entry positive), ordered by `|v²|` and then lexicographically.
pub fn short_vectors(l: &IntegralLattice, bound: u64) -> Result<Vec<Vec<BigInt>>> {
    let q = definite_form(l)?;
    let ldl = Ldl::new(&q.to_rat())?;
    let n = l.rank();
    let mut out: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
    let zero = vec![BigRational::zero(); n];
    ldl.for_each_close(&zero, &BigRational::from_integer(bound.into()), |x, v| {
        if lex_positive(x) {
            out.push((v.to_integer(), x.to_vec()));
        }
    });
    out.sort();
    Ok(out.into_iter().map(|(_, v)| v).collect())
}

/// Does L contain a vector of norm ±2?
pub fn has_roots(l: &IntegralLattice) -> Result<bool> {
    let two = BigInt::from(2);
    Ok(short_vectors(l, 2)?.iter().any(|v| l.inner(v, v).abs() == two))
}

/// `2(e, L) ⊆ (e, e)Z`.
pub fn is_reflective(l: &IntegralLattice, e: &[BigInt]) -> bool {
    let n = l.inner(e, e);
    if n.is_zero() {
        return false;
    }
    let row = l.gram().vec_mul(e);
    row.iter().all(|x| (x * 2i32).is_multiple_of(&n))
}

/// The reflection `v ↦ v − 2(v,e)/(e,e)·e` as a matrix acting on rows.
pub fn reflection_matrix(l: &IntegralLattice, e: &[BigInt]) -> Result<IntMatrix> {
    let n = l.inner(e, e);
    if n.is_zero() {
        return Err(Error::Invalid("isotropic vector".into()));
    }
    let row = l.gram().vec_mul(e);
    let k = l.rank();
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        let c = BigRational::new(&row[i] * 2i32, n.clone());
        if !c.is_integer() {
            return Err(Error::Invalid("reflection is not integral".into()));
        }
        let c = c.to_integer();
        rows.push(
            (0..k)
                .map(|j| {
                    let d = if i == j { BigInt::one() } else { BigInt::zero() };
                    d - &c * &e[j]
                })
                .collect(),
        );
    }
    IntMatrix::from_rows(rows)
}

/// Primitive reflective vectors with the given norms.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub lattice: IntegralLattice,
    pub roots: Vec<Vec<BigInt>>,
    pub norms: Vec<BigInt>,
}

/// Even `k` dividing `2·exp(D_L)`, as positive integers.
pub fn default_root_norms(l: &IntegralLattice) -> Vec<u64> {
    let e = l.disc_group().exponent().to_u64().unwrap_or(1);
    (1..=2 * e).filter(|k| k % 2 == 0 && (2 * e) % k == 0).collect()
}

/// Roots of a definite lattice up to sign. Norms are given as absolute
/// values; `None` means [`default_root_norms`].
pub fn definite_roots(l: &IntegralLattice, norms: Option<&[u64]>) -> Result<RootSet> {
    let norms = norms.map(<[u64]>::to_vec).unwrap_or_else(|| default_root_norms(l));
    let max = norms.iter().copied().max().unwrap_or(0);
    let mut roots = Vec::new();
    let mut rn = Vec::new();
    for v in short_vectors(l, max)? {
        let n = l.inner(&v, &v);
        if norms.contains(&n.abs().to_u64().unwrap_or(0)) && primitive(&v) && is_reflective(l, &v) {
            roots.push(v);
            rn.push(n);
        }
    }
    Ok(RootSet { lattice: l.clone(), roots, norms: rn })
}

/// Options for [`vinberg_fundamental_roots`].
#[derive(Clone, Debug, Default)]
pub struct VinbergOptions {
    pub v0: Option<Vec<BigInt>>,
    /// Largest height `(e, v0)² / |e²|` searched, 400 by default. The search
    /// stops earlier once the polytope has finite volume.
    pub max_height: Option<BigRational>,
    /// Absolute values of the root norms, `[2]` by default.
    pub allowed_norms: Option<Vec<u64>>,
}

const AUTO_HEIGHT_CAP: i64 = 400;

/// Fundamental roots of a chamber containing `v0`, with the Coxeter data.
#[derive(Clone, Debug)]
pub struct Chamber {
    pub lattice: IntegralLattice,
    pub v0: Vec<BigInt>,
    pub roots: Vec<Vec<BigInt>>,
    pub heights: Vec<BigRational>,
    /// Inner products of the roots.
    pub gram: IntMatrix,
    /// The polytope has finite volume, so the list is complete.
    pub saturated: bool,
    pub searched_height: BigRational,
}

impl Chamber {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn norms(&self) -> Vec<BigInt> {
        (0..self.len()).map(|i| self.gram.get(i, i).clone()).collect()
    }

    pub fn spans(&self) -> bool {
        !self.roots.is_empty()
            && exactmat::rank(&IntMatrix::from_rows(self.roots.clone()).expect("rows")) == self.lattice.rank()
    }

    /// The dual graph: node label is the norm, edge label the inner product.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph chamber {\n");
        for i in 0..self.len() {
            let _ = writeln!(s, "  r{i} [label=\"{}\"];", self.gram.get(i, i));
        }
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let g = self.gram.get(i, j);
                if !g.is_zero() {
                    let _ = writeln!(s, "  r{i} -- r{j} [label=\"{g}\"];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

fn default_v0(l: &IntegralLattice) -> Option<Vec<BigInt>> {
    let g = l.gram();
    let n = l.rank();
    if n >= 2 && g.get(0, 0).is_zero() && g.get(1, 1).is_zero() && g.get(0, 1).is_positive() {
        let mut v = vec![BigInt::zero(); n];
        v[0] = BigInt::one();
        v[1] = BigInt::one();
        return Some(v);
    }
    // small positive vector, coordinates in {-1, 0, 1} on at most two places
    for i in 0..n {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::one();
        if l.inner(&v, &v).is_positive() {
            return Some(v);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for s in [1, -1] {
                let mut v = vec![BigInt::zero(); n];
                v[i] = BigInt::one();
                v[j] = BigInt::from(s);
                if l.inner(&v, &v).is_positive() {
                    return Some(v);
                }
            }
        }
    }
    None
}

/// `(g, x)` with `x·w = g = gcd(w)`.
fn bezout(w: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut x = vec![BigInt::zero(); w.len()];
    for (i, wi) in w.iter().enumerate() {
        if wi.is_zero() {
            continue;
        }
        let e = g.extended_gcd(wi);
        // e.gcd = e.x·g + e.y·wi
        for xj in x.iter_mut() {
            *xj *= &e.x;
        }
        x[i] = e.y.clone();
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        for xj in x.iter_mut() {
            *xj = -&*xj;
        }
    }
    (g, x)
}

/// Vectors `e` of L with `(e, v0) = −a` and `e² = −k`, sorted.
struct Shells {
    lattice: IntegralLattice,
    basis: IntMatrix,
    ldl: Ldl,
    g: BigInt,
    x1: Vec<BigInt>,
    c1: Vec<BigRational>,
    v0sq: BigRational,
}

impl Shells {
    fn new(l: &IntegralLattice, v0: &[BigInt]) -> Result<Shells> {
        let w = l.gram().vec_mul(v0);
        let (g, mut x1) = bezout(&w);
        if g.is_zero() {
            return Err(Error::Invalid("v0 is zero".into()));
        }
        for v in x1.iter_mut() {
            *v = -&*v;
        }
        let col = IntMatrix::from_rows(vec![w.clone()])?;
        let basis = exactmat::kernel_saturated(&col);
        let gr = l.gram();
        let q = basis.mul(gr).mul(&basis.transpose()).scale(&BigInt::from(-1));
        let ldl = Ldl::new(&q.to_rat())?;
        let v0sq = BigRational::from_integer(l.inner(v0, v0));
        // x1 = α v0 + c1·B with α = −g/v0²
        let alpha = BigRational::new(-g.clone(), l.inner(v0, v0));
        let y: Vec<BigRational> = x1
            .iter()
            .zip(v0)
            .map(|(a, b)| BigRational::from_integer(a.clone()) - &alpha * BigRational::from_integer(b.clone()))
            .collect();
        let c1 = if basis.rows() == 0 {
            Vec::new()
        } else {
            exactmat::solve_left(&basis.to_rat(), &y).ok_or_else(|| Error::Invalid("projection failed".into()))?
        };
        Ok(Shells { lattice: l.clone(), basis, ldl, g, x1, c1, v0sq })
    }

    fn shell(&self, a: &BigInt, k: &BigInt) -> Vec<Vec<BigInt>> {
        if !a.is_multiple_of(&self.g) {
            return Vec::new();
        }
        let s = a / &self.g;
        let sr = BigRational::from_integer(s.clone());
        let center: Vec<BigRational> = self.c1.iter().map(|c| c * &sr).collect();
        let target = BigRational::from_integer(a * a) / &self.v0sq + BigRational::from_integer(k.clone());
        let xa: Vec<BigInt> = self.x1.iter().map(|x| x * &s).collect();
        let mut out = Vec::new();
        let b = &self.basis;
        self.ldl.for_each_close(&center, &target, |x, val| {
            if *val != target {
                return;
            }
            let mut e = xa.clone();
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (j, ej) in e.iter_mut().enumerate() {
                    *ej += xi * b.get(i, j);
                }
            }
            out.push(e);
        });
        debug_assert!(out.iter().all(|e| self.lattice.inner(e, e) == -k.clone()));
        out.sort();
        out
    }
}

/// Simple roots of the finite root system `R`, positive meaning lexicographically positive.
fn simple_roots(l: &IntegralLattice, positive: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let set: std::collections::HashSet<&Vec<BigInt>> = positive.iter().collect();
    let mut out = Vec::new();
    for a in positive {
        let aa = l.inner(a, a);
        let simple = positive.iter().all(|b| {
            if b == a {
                return true;
            }
            let c = (l.inner(a, b) * 2i32) / &aa;
            let img: Vec<BigInt> = b.iter().zip(a).map(|(x, y)| x - &c * y).collect();
            set.contains(&img)
        });
        if simple {
            out.push(a.clone());
        }
    }
    out
}

/// Vinberg's algorithm: accept roots in order of height `(e, v0)²/|e²|`
/// whenever they pair nonnegatively with every root accepted so far.
pub fn vinberg_fundamental_roots(l: &IntegralLattice, opts: &VinbergOptions) -> Result<Chamber> {
    let n = l.rank();
    if l.signature() != (1, n - 1) || n < 2 {
        let (p, q) = l.signature();
        return Err(Error::Invalid(format!("lattice of signature ({p}, {q}) is not hyperbolic")));
    }
    let v0 = match &opts.v0 {
        Some(v) => {
            if v.len() != n {
                return Err(Error::Dimension(format!("v0 has {} entries, rank is {n}", v.len())));
            }
            v.clone()
        }
        None => default_v0(l).ok_or_else(|| Error::Invalid("no default v0; supply one".into()))?,
    };
    if !l.inner(&v0, &v0).is_positive() {
        return Err(Error::Invalid("v0 must have positive norm".into()));
    }
    let norms: Vec<BigInt> = opts
        .allowed_norms
        .clone()
        .unwrap_or_else(|| vec![2])
        .into_iter()
        .map(BigInt::from)
        .collect();
    let shells = Shells::new(l, &v0)?;
    let is_root = |e: &Vec<BigInt>| primitive(e) && is_reflective(l, e);

    // height zero
    let mut roots: Vec<Vec<BigInt>> = Vec::new();
    let mut heights: Vec<BigRational> = Vec::new();
    let mut positive = Vec::new();
    for k in &norms {
        for e in shells.shell(&BigInt::zero(), k) {
            if lex_positive(&e) && is_root(&e) {
                positive.push(e);
            }
        }
    }
    positive.sort();
    for e in simple_roots(l, &positive) {
        roots.push(e);
        heights.push(BigRational::zero());
    }

    let cap = opts.max_height.clone().unwrap_or_else(|| BigRational::from_integer(AUTO_HEIGHT_CAP.into()));
    // shells (height, a, k) up to the cap
    let mut plan: Vec<(BigRational, BigInt, BigInt)> = Vec::new();
    for k in &norms {
        let mut a = shells.g.clone();
        loop {
            let h = BigRational::new(&a * &a, k.clone());
            if h > cap {
                break;
            }
            plan.push((h, a.clone(), k.clone()));
            a += &shells.g;
        }
    }
    plan.sort();
    let mut searched = BigRational::zero();
    let mut complete = polytope::has_finite_volume(l, &roots);
    let mut idx = 0;
    while idx < plan.len() && !complete {
        let h = plan[idx].0.clone();
        let mut cands = Vec::new();
        while idx < plan.len() && plan[idx].0 == h {
            let (_, a, k) = &plan[idx];
            cands.extend(shells.shell(a, k).into_iter().filter(|e| is_root(e)));
            idx += 1;
        }
        cands.sort();
        let before = roots.len();
        for e in cands {
            if roots.iter().all(|f| !l.inner(&e, f).is_negative()) {
                roots.push(e);
                heights.push(h.clone());
            }
        }
        searched = h;
        if roots.len() > before {
            complete = polytope::has_finite_volume(l, &roots);
        }
    }
    let saturated = complete;
    let rm = IntMatrix::from_rows(roots.clone())?;
    let gram = if roots.is_empty() { IntMatrix::zeros(0, 0) } else { rm.mul(l.gram()).mul(&rm.transpose()) };
    Ok(Chamber {
        lattice: l.clone(),
        v0,
        roots,
        heights,
        gram,
        saturated,
        searched_height: searched,
    })
}

/// Rational coordinates of the roots' span; used for symmetry checks.
pub(crate) fn independent_rows(rows: &[Vec<BigInt>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut acc: Vec<Vec<BigInt>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        acc.push(r.clone());
        if exactmat::rank(&IntMatrix::from_rows(acc.clone()).expect("rows")) == acc.len() {
            chosen.push(i);
        } else {
            acc.pop();
        }
    }
    chosen
}

pub(crate) fn rat_rows(rows: &[Vec<BigInt>]) -> RatMatrix {
    RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect())
        .expect("rows")
}

#[cfg(test)]
mod tests;
