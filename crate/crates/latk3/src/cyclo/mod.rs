//! Cyclotomic fields with their Galois involution, principal `p(x)`-lattices
//! and their twists, discriminant modules and sign invariants.

mod field;
mod ideal;
mod units;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactmat::poly::{isolate_real_roots, refine_interval, sign_at_root, sturm_sequence};
use crate::exactmat::{num, IntMatrix, QPoly, ZPoly};
use crate::lattice::IntegralLattice;
use crate::{Error, Result};

pub use field::{parse_field_elem, power_sums, FieldElem};
pub use ideal::{aut_discmodule_units, disc_module, disc_module_of, module_exponents, reduce_mod_ideal, prime_generator, DiscModule, IdealFactor};
pub use units::{
    determinant_candidates, possible_determinants, unit_classes, unit_twist_representatives, DetCandidate, DetStatus,
    UnitClasses,
};

pub use num::euler_phi;

/// The n-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u64) -> ZPoly {
    assert!(n > 0);
    let mut p = ZPoly::x_pow_minus_one(n as usize);
    for d in num::divisors(n) {
        if d < n {
            p = p.div_exact(&cyclotomic_poly(d)).expect("x^n - 1 is divisible by c_d");
        }
    }
    p
}

/// `r` with `p(x) = x^e r(x + x⁻¹)` for a reciprocal `p` of degree `2e`.
pub fn trace_poly(p: &ZPoly) -> Result<ZPoly> {
    let d = p.degree().ok_or_else(|| Error::Invalid("zero polynomial".into()))?;
    if d % 2 == 1 || p.coeffs().iter().zip(p.coeffs().iter().rev()).any(|(a, b)| a != b) {
        return Err(Error::Invalid("polynomial is not reciprocal of even degree".into()));
    }
    let e = d / 2;
    // Laurent coefficients of x^{-e} p(x), index k + e for x^k
    let mut a: Vec<BigInt> = p.coeffs().to_vec();
    let mut r = vec![BigInt::zero(); e + 1];
    for k in (0..=e).rev() {
        let rk = a[k + e].clone();
        if rk.is_zero() {
            continue;
        }
        let mut binom = BigInt::one();
        for j in 0..=k {
            a[k + e - 2 * j] -= &rk * &binom;
            binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
        }
        r[k] = rk;
    }
    debug_assert!(a.iter().all(|c| c.is_zero()));
    Ok(ZPoly::new(r))
}

/// A twist `L₀(a)` of the principal lattice of a reciprocal polynomial,
/// together with its Gram matrix on the power basis `1, x, ..., x^{d-1}`.
#[derive(Clone, Debug)]
pub struct CnLattice {
    n: Option<u64>,
    modulus: ZPoly,
    twist: FieldElem,
    lattice: IntegralLattice,
}

impl CnLattice {
    /// The order n when the modulus is `c_n`.
    pub fn n(&self) -> Option<u64> {
        self.n
    }

    pub fn modulus(&self) -> &ZPoly {
        &self.modulus
    }

    pub fn twist(&self) -> &FieldElem {
        &self.twist
    }

    pub fn lattice(&self) -> &IntegralLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Multiplication by x, as rows `x·x^i` (row convention).
    pub fn x_action(&self) -> IntMatrix {
        companion(&self.modulus)
    }
}

/// Multiplication by x on `Z[x]/p`, rows are the images of `x^i`.
pub fn companion(p: &ZPoly) -> IntMatrix {
    let d = p.deg();
    let mut rows = vec![vec![BigInt::zero(); d]; d];
    for (i, row) in rows.iter_mut().enumerate() {
        if i + 1 < d {
            row[i + 1] = BigInt::one();
        } else {
            for (j, c) in row.iter_mut().enumerate() {
                *c = -p.coeff(j);
            }
        }
    }
    IntMatrix::from_rows(rows).expect("square")
}

fn twisted(n: Option<u64>, p: &ZPoly, a: FieldElem) -> Result<CnLattice> {
    if a.is_zero() {
        return Err(Error::Invalid("zero twist".into()));
    }
    if !a.is_real() {
        return Err(Error::Invalid("twist is not invariant under x ↦ x⁻¹".into()));
    }
    let d = p.deg();
    let r = trace_poly(p)?;
    let rp = FieldElem::from_real_poly(p, &r.to_q().derivative())?;
    let w = a.div(&rp)?;
    let x = FieldElem::x(p)?;
    let xi = x.x_inverse();
    // t[d-1+k] = Tr(x^k w) for |k| < d
    let mut t = vec![BigRational::zero(); 2 * d - 1];
    let mut up = w.clone();
    let mut down = w.clone();
    t[d - 1] = w.trace();
    for k in 1..d {
        up = up.mul(&x);
        down = down.mul(&xi);
        t[d - 1 + k] = up.trace();
        t[d - 1 - k] = down.trace();
    }
    if t.iter().any(|v| !v.is_integer()) {
        return Err(Error::Invalid("twist gives a non-integral form".into()));
    }
    let rows: Vec<Vec<BigInt>> =
        (0..d).map(|i| (0..d).map(|j| t[d - 1 + i - j].to_integer()).collect()).collect();
    let lattice = IntegralLattice::new(IntMatrix::from_rows(rows)?)?;
    Ok(CnLattice { n, modulus: p.clone(), twist: a, lattice })
}

/// The principal lattice `Z[x]/p` with `⟨g, h⟩ = Tr(g·σ(h)/r'(x + x⁻¹))`.
pub fn principal_lattice(p: &ZPoly) -> Result<CnLattice> {
    twisted(None, p, FieldElem::from_int(p, 1)?)
}

pub fn principal_cn(n: u64) -> Result<CnLattice> {
    let p = cyclotomic_poly(n);
    if p.deg() < 2 {
        return Err(Error::OutOfRange(format!("c_{n} has degree {}", p.deg())));
    }
    twisted(Some(n), &p, FieldElem::from_int(&p, 1)?)
}

/// `L(a)` with form `⟨a g, h⟩`.
pub fn twist_lattice(l: &CnLattice, a: &FieldElem) -> Result<CnLattice> {
    if a.modulus() != &l.modulus {
        return Err(Error::Invalid("twist lives in a different field".into()));
    }
    twisted(l.n, &l.modulus, l.twist.mul(a))
}

/// Signs of the rotation planes, indexed by the roots of the trace
/// polynomial in (-2, 2) in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignInvariant {
    pub roots: Vec<(BigRational, BigRational)>,
    pub signs: Vec<i8>,
    /// Half the number of roots of p off the unit circle.
    pub t: usize,
}

impl SignInvariant {
    pub fn signature(&self) -> (usize, usize) {
        let plus = self.signs.iter().filter(|&&s| s > 0).count();
        let minus = self.signs.len() - plus;
        (self.t + 2 * plus, self.t + 2 * minus)
    }
}

/// Isolating intervals of the roots of `r` inside (-2, 2).
pub fn band_roots(r: &QPoly) -> Result<Vec<(BigRational, BigRational)>> {
    let two = BigRational::from_integer(2.into());
    if r.eval(&two).is_zero() || r.eval(&-&two).is_zero() {
        return Err(Error::Invalid("trace polynomial vanishes at ±2".into()));
    }
    let seq = sturm_sequence(r);
    let mut out = Vec::new();
    for mut iv in isolate_real_roots(r) {
        loop {
            if iv.0 >= -&two && iv.1 < two {
                out.push(iv);
                break;
            }
            if iv.1 <= -&two || iv.0 >= two {
                break;
            }
            iv = refine_interval(&seq, &iv);
        }
    }
    Ok(out)
}

/// Signs of a nonzero real element `v(x + x⁻¹)` at the given roots of `r`.
pub fn real_signs(r: &QPoly, roots: &[(BigRational, BigRational)], v: &QPoly) -> Vec<i8> {
    let g = v.rem(r);
    roots.iter().map(|iv| sign_at_root(r, iv, &g)).collect()
}

pub fn sign_invariant(l: &CnLattice) -> Result<SignInvariant> {
    let r = trace_poly(&l.modulus)?.to_q();
    let roots = band_roots(&r)?;
    let a = l.twist.real_poly().ok_or_else(|| Error::Invalid("twist is not real".into()))?;
    let g = a.mul(&r.derivative());
    let signs = real_signs(&r, &roots, &g);
    let t = r.deg() - roots.len();
    Ok(SignInvariant { roots, signs, t })
}

/// Same discriminant module and same sign invariant.
pub fn cn_lattices_isomorphic(a: &CnLattice, b: &CnLattice) -> Result<bool> {
    let (Some(n), Some(m)) = (a.n, b.n) else {
        return Err(Error::Unsupported("isomorphism test needs cyclotomic lattices".into()));
    };
    if n != m {
        return Ok(false);
    }
    let phi = euler_phi(n);
    if !(2..=20).contains(&phi) {
        return Err(Error::OutOfRange(format!("φ({n}) = {phi}")));
    }
    if n.is_power_of_two() {
        return Err(Error::Unsupported(format!("n = {n} is a power of two")));
    }
    if disc_module(a)? != disc_module(b)? {
        return Ok(false);
    }
    Ok(sign_invariant(a)?.signs == sign_invariant(b)?.signs)
}

/// `res(c_n, c_m)` for `m < n`: `p^φ(m)` when `n/m` is a power of the
/// prime p, else 1.
pub fn cyclo_resultant(n: u64, m: u64) -> Result<BigInt> {
    if m == 0 || m >= n {
        return Err(Error::Invalid("need 0 < m < n".into()));
    }
    if n % m != 0 {
        return Ok(BigInt::one());
    }
    let q = n / m;
    match num::factor(q).as_slice() {
        [(p, _)] => Ok(BigInt::from(*p).pow(euler_phi(m) as u32)),
        _ => Ok(BigInt::one()),
    }
}

pub fn generic_resultant(p: &ZPoly, q: &ZPoly) -> BigInt {
    p.resultant(q)
}

/// `n` with the factor 2 dropped when `n ≡ 2 mod 4`: the conductor of `Q(ζ_n)`.
pub fn conductor(n: u64) -> u64 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}
