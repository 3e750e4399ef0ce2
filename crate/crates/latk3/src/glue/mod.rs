//! Primitive extensions `M ⊕ N ⊆ L` via glue maps between discriminant
//! groups, and gluing of isometries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmat::{self, int_rat, num, IntMatrix, RatMatrix, ZPoly};
use crate::finquad::{self, disc_form, Element, TorsionQuadraticForm};
use crate::lattice::IntegralLattice;
use crate::{Error, Result};

/// An anti-isometry `φ: G_M → G_N`. `source` is a Smith basis of `G_M` in
/// discriminant coordinates of M and `target[i] = φ(source[i])` in those of N.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GlueMap {
    pub source: Vec<Element>,
    pub source_orders: Vec<i64>,
    pub target: Vec<Element>,
}

impl GlueMap {
    pub fn trivial() -> Self {
        GlueMap { source: Vec::new(), source_orders: Vec::new(), target: Vec::new() }
    }

    pub fn order(&self) -> BigInt {
        self.source_orders.iter().map(|&d| BigInt::from(d)).product()
    }
}

#[derive(Clone, Debug)]
pub struct PrimitiveExtension {
    pub m: IntegralLattice,
    pub n: IntegralLattice,
    pub glue: GlueMap,
    /// Rows: basis of L in the coordinates of `M ⊕ N`, in Hermite form.
    pub basis: RatMatrix,
    pub overlattice: IntegralLattice,
}

/// All glue maps with `|G_M| = order`, sorted.
pub fn enumerate_glue_maps(m: &IntegralLattice, n: &IntegralLattice, order: u64, bound: u64) -> Result<Vec<GlueMap>> {
    let fm = disc_form(m)?;
    let fn_ = disc_form(n)?;
    for f in [&fm, &fn_] {
        if f.order() > BigInt::from(bound) {
            return Err(Error::BoundExceeded(format!("discriminant group of order {}", f.order())));
        }
    }
    if order == 1 {
        return Ok(vec![GlueMap::trivial()]);
    }
    let mut out = Vec::new();
    for gens in finquad::subgroups_of_order(&fm, order, bound)? {
        let (h, basis) = fm.subform(&gens);
        for imgs in finquad::isometric_embeddings(&h, &fn_, -1, false, bound)? {
            out.push(GlueMap { source: basis.clone(), source_orders: h.orders().to_vec(), target: imgs });
        }
    }
    out.sort();
    Ok(out)
}

fn check_glue(fm: &TorsionQuadraticForm, fn_: &TorsionQuadraticForm, g: &GlueMap) -> Result<()> {
    let k = g.source.len();
    if g.target.len() != k || g.source_orders.len() != k {
        return Err(Error::Invalid("glue map generator count mismatch".into()));
    }
    let bad = |msg: String| Err(Error::Invalid(msg));
    for i in 0..k {
        if g.source[i].len() != fm.rank() || g.target[i].len() != fn_.rank() {
            return bad(format!("glue generator {i} has wrong length"));
        }
        if fm.element_order(&g.source[i]) != g.source_orders[i] || fn_.element_order(&g.target[i]) != g.source_orders[i] {
            return bad(format!("glue generator {i} has the wrong order"));
        }
        let even = fm.is_even() && fn_.is_even();
        let qm = if even { fm.q_value(&g.source[i]) } else { fm.b_value(&g.source[i], &g.source[i]) };
        let qn = if even { fn_.q_value(&g.target[i]) } else { fn_.b_value(&g.target[i], &g.target[i]) };
        let modulus = if even { 2 } else { 1 };
        if !((qm + qn) / BigRational::from_integer(modulus.into())).is_integer() {
            return bad(format!("glue generator {i} is not isotropic"));
        }
        for j in 0..i {
            let s = fm.b_value(&g.source[i], &g.source[j]) + fn_.b_value(&g.target[i], &g.target[j]);
            if !s.is_integer() {
                return bad(format!("glue generators {j}, {i} are not orthogonal"));
            }
        }
    }
    let (src, _) = finquad::subgroup_basis(fm.orders(), &g.source);
    let (dst, _) = finquad::subgroup_basis(fn_.orders(), &g.target);
    let prod = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).product::<BigInt>();
    if prod(&src) != g.order() || prod(&dst) != g.order() {
        return bad("glue map is not injective on the given basis".into());
    }
    Ok(())
}

fn glue_lifts(m: &IntegralLattice, n: &IntegralLattice, g: &GlueMap) -> Vec<Vec<BigRational>> {
    let dm = m.disc_group();
    let dn = n.disc_group();
    let big = |e: &Element| e.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    g.source
        .iter()
        .zip(&g.target)
        .map(|(x, y)| {
            let mut v = dm.lift(&big(x));
            if v.is_empty() {
                v = vec![BigRational::zero(); m.rank()];
            }
            let mut w = dn.lift(&big(y));
            if w.is_empty() {
                w = vec![BigRational::zero(); n.rank()];
            }
            v.extend(w);
            v
        })
        .collect()
}

/// Basis in Hermite form of the lattice generated by `Z^dim` and `extra`.
fn overlattice_basis(dim: usize, extra: &[Vec<BigRational>]) -> RatMatrix {
    let mut den = BigInt::one();
    for v in extra {
        for x in v {
            den = den.lcm(x.denom());
        }
    }
    let dq = int_rat(&den);
    let rows: Vec<Vec<BigInt>> = extra.iter().map(|v| v.iter().map(|x| (x * &dq).to_integer()).collect()).collect();
    let h = exactmat::span_hnf(&rows, dim, Some(&den));
    let data: Vec<Vec<BigRational>> =
        h.to_rows().into_iter().map(|r| r.into_iter().map(|x| BigRational::new(x, den.clone())).collect()).collect();
    RatMatrix::from_rows(data).expect("square")
}

pub fn build_overlattice(m: &IntegralLattice, n: &IntegralLattice, g: &GlueMap) -> Result<PrimitiveExtension> {
    let fm = disc_form(m)?;
    let fn_ = disc_form(n)?;
    check_glue(&fm, &fn_, g)?;
    let mn = m.plus(n);
    let basis = overlattice_basis(mn.rank(), &glue_lifts(m, n, g));
    let gram = basis.mul(&mn.gram().to_rat()).mul(&basis.transpose());
    let gram = gram.to_int().ok_or_else(|| Error::Invalid("glue is not isotropic for b".into()))?;
    let overlattice = IntegralLattice::new(gram)?;
    if m.is_even() && n.is_even() && !overlattice.is_even() {
        return Err(Error::Invalid("glue is not isotropic for q".into()));
    }
    Ok(PrimitiveExtension { m: m.clone(), n: n.clone(), glue: g.clone(), basis, overlattice })
}

impl PrimitiveExtension {
    /// `[L : M ⊕ N] = |G_M|`.
    pub fn index(&self) -> BigInt {
        exactmat::det_rat(&self.basis).expect("square").recip().abs().to_integer()
    }

    /// `|D_M / G_M| · |D_N / G_N| = |det L|`.
    pub fn glue_estimate_check(&self) -> bool {
        let g = self.glue.order();
        let dm = self.m.det().abs();
        let dn = self.n.det().abs();
        if !dm.is_multiple_of(&g) || !dn.is_multiple_of(&g) {
            return false;
        }
        (dm / &g) * (dn / &g) == self.overlattice.det().abs()
    }

    /// Coordinates in L of a vector of `(M ⊕ N) ⊗ Q`, if it lies in L.
    pub fn coords_in_l(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        let x = exactmat::solve_left(&self.basis, v)?;
        x.iter().all(|c| c.is_integer()).then(|| x.iter().map(|c| c.to_integer()).collect())
    }
}

/// Outcome of [`glue_isometry`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluedIsometry {
    /// The matrix of `f_M ⊕ f_N` on the basis of L (row convention).
    Compatible(IntMatrix),
    /// `generator` indexes the glue generator whose image leaves Γ.
    Incompatible { generator: usize },
}

/// True iff `v ↦ v·f` preserves `l`, that is `f·G·fᵀ = G`.
pub fn is_isometry(l: &IntegralLattice, f: &IntMatrix) -> bool {
    f.rows() == l.rank() && f.cols() == l.rank() && f.mul(l.gram()).mul(&f.transpose()) == *l.gram()
}

pub fn glue_isometry(ext: &PrimitiveExtension, f_m: &IntMatrix, f_n: &IntMatrix) -> Result<GluedIsometry> {
    if !is_isometry(&ext.m, f_m) || !is_isometry(&ext.n, f_n) {
        return Err(Error::Invalid("not an isometry".into()));
    }
    let f = IntMatrix::block_diag(&[f_m, f_n]).to_rat();
    for (i, lift) in glue_lifts(&ext.m, &ext.n, &ext.glue).iter().enumerate() {
        let img = f.vec_mul(lift);
        if ext.coords_in_l(&img).is_none() {
            return Ok(GluedIsometry::Incompatible { generator: i });
        }
    }
    let binv = ext.basis.inverse()?;
    let fl = ext.basis.mul(&f).mul(&binv);
    Ok(GluedIsometry::Compatible(fl.to_int().expect("glue generators and M ⊕ N are preserved")))
}

/// Glue maps of the given order along which `f_M ⊕ f_N` extends.
pub fn enumerate_equivariant_glue_maps(
    m: &IntegralLattice,
    n: &IntegralLattice,
    f_m: &IntMatrix,
    f_n: &IntMatrix,
    order: u64,
    bound: u64,
) -> Result<Vec<GlueMap>> {
    let mut out = Vec::new();
    for g in enumerate_glue_maps(m, n, order, bound)? {
        let ext = build_overlattice(m, n, &g)?;
        if matches!(glue_isometry(&ext, f_m, f_n)?, GluedIsometry::Compatible(_)) {
            out.push(g);
        }
    }
    Ok(out)
}

/// The positive generator of `(m·Z[x] + n·Z[x]) ∩ Z`, or 0 when m and n
/// have a common factor. One of the two must be monic.
pub fn glue_bound_d(m: &ZPoly, n: &ZPoly) -> Result<BigInt> {
    if m.is_zero() || n.is_zero() {
        return Err(Error::Invalid("zero polynomial".into()));
    }
    let monic = |p: &ZPoly| p.lead().abs().is_one();
    if !monic(m) && !monic(n) {
        return Err(Error::Unsupported("neither polynomial is monic".into()));
    }
    let (dm, dn) = (m.deg(), n.deg());
    let dim = dm + dn;
    if dim == 0 {
        return Ok(BigInt::one());
    }
    // columns ordered from x^(dim-1) down to the constant term
    let row = |p: &ZPoly, shift: usize| -> Vec<BigInt> {
        let mut r = vec![BigInt::zero(); dim];
        for (i, c) in p.coeffs().iter().enumerate() {
            r[dim - 1 - (i + shift)] = c.clone();
        }
        r
    };
    let mut rows = Vec::new();
    for i in 0..dn {
        rows.push(row(m, i));
    }
    for j in 0..dm {
        rows.push(row(n, j));
    }
    let h = exactmat::span_hnf(&rows, dim, None);
    let last = h.rows().checked_sub(1).map(|r| h.row(r).to_vec());
    match last {
        Some(r) if h.rows() == dim && r[..dim - 1].iter().all(|x| x.is_zero()) => Ok(r[dim - 1].abs()),
        _ => Ok(BigInt::zero()),
    }
}

/// Every prime dividing |Γ| divides `res(χ_M, χ_N)`.
pub fn resultant_divisibility_check(ext: &PrimitiveExtension, f_m: &IntMatrix, f_n: &IntMatrix) -> Result<bool> {
    let res = exactmat::charpoly(f_m)?.resultant(&exactmat::charpoly(f_n)?);
    let g = ext.glue.order().to_u64().ok_or_else(|| Error::OutOfRange("glue order".into()))?;
    Ok(num::prime_divisors(g).into_iter().all(|p| (&res % BigInt::from(p)).is_zero()))
}

/// Minimal polynomial over Z of a square integer matrix.
pub fn minimal_polynomial(f: &IntMatrix) -> Result<ZPoly> {
    let chi = exactmat::charpoly(f)?;
    let q = chi.to_q();
    let g = q.gcd(&q.derivative());
    let sq = q.divrem(&g).0.monic();
    if let Some(z) = sq.to_z() {
        if exactmat::poly_at(&z, f).is_zero() {
            return Ok(z);
        }
    }
    // not semisimple: find the first linear relation among the powers of f
    let n = f.rows();
    let mut powers = vec![IntMatrix::identity(n)];
    loop {
        let k = powers.len();
        let next = powers[k - 1].mul(f);
        let flat = |m: &IntMatrix| m.to_rows().concat().iter().map(int_rat).collect::<Vec<_>>();
        let a = RatMatrix::from_rows(powers.iter().map(flat).collect()).expect("equal lengths");
        if let Some(c) = exactmat::solve_left(&a, &flat(&next)) {
            let mut coeffs: Vec<BigRational> = c.into_iter().map(|x| -x).collect();
            coeffs.push(BigRational::one());
            return Ok(crate::exactmat::QPoly::new(coeffs).to_z().expect("divides the characteristic polynomial"));
        }
        powers.push(next);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingVerdict {
    GuaranteedUnique,
    Inconclusive,
}

/// Nikulin's sufficient criterion for a unique primitive embedding of M into
/// an even unimodular lattice of signature `(l_plus, l_minus)`.
pub fn nikulin_unique_embedding(m: &IntegralLattice, l_plus: usize, l_minus: usize) -> EmbeddingVerdict {
    let (mp, mm) = m.signature();
    let len = m.disc_group().length();
    if len + 2 + m.rank() <= l_plus + l_minus && l_plus > mp && l_minus > mm {
        EmbeddingVerdict::GuaranteedUnique
    } else {
        EmbeddingVerdict::Inconclusive
    }
}

/// Same criterion for the empty lattice (rank 0), which always embeds uniquely.
pub fn nikulin_unique_embedding_rank0() -> EmbeddingVerdict {
    EmbeddingVerdict::GuaranteedUnique
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassVerdict {
    Guaranteed,
    Inconclusive,
}

/// Indefinite with `rk ≥ 2 + l(D)`: the genus has one class.
pub fn nikulin_one_class(m: &IntegralLattice) -> ClassVerdict {
    if !m.is_definite() && m.rank() >= 2 + m.disc_group().length() {
        ClassVerdict::Guaranteed
    } else {
        ClassVerdict::Inconclusive
    }
}
