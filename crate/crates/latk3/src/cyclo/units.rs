//! Real units modulo norms, detected through their signs, and the search
//! for admissible determinants of rank φ(n) transcendental lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ideal::l1_sphere;
use super::{
    band_roots, conductor, cyclo_resultant, cyclotomic_poly, euler_phi, principal_cn, real_signs, trace_poly,
    twist_lattice, CnLattice, FieldElem,
};
use crate::exactmat::{num, QPoly, ZPoly};
use crate::{Error, Result};

/// Sign data of the real subfield of `Q(ζ_n)`.
#[derive(Clone, Debug)]
struct RealPlaces {
    modulus: ZPoly,
    r: QPoly,
    rp: QPoly,
    roots: Vec<(BigRational, BigRational)>,
}

impl RealPlaces {
    fn new(n: u64) -> Result<Self> {
        let modulus = cyclotomic_poly(n);
        let r = trace_poly(&modulus)?.to_q();
        let roots = band_roots(&r)?;
        let rp = r.derivative();
        Ok(RealPlaces { modulus, r, rp, roots })
    }

    /// Bit i set when `a` is negative at the i-th root.
    fn mask(&self, a: &QPoly) -> u64 {
        real_signs(&self.r, &self.roots, a)
            .iter()
            .enumerate()
            .fold(0, |m, (i, &s)| if s < 0 { m | 1 << i } else { m })
    }

    fn elem_mask(&self, a: &FieldElem) -> Result<u64> {
        let p = a.real_poly().ok_or_else(|| Error::Invalid("element is not real".into()))?;
        Ok(self.mask(&p))
    }

    /// Mask of the sign invariant of `L₀(a)`.
    fn twist_mask(&self, a: &FieldElem) -> Result<u64> {
        let p = a.real_poly().ok_or_else(|| Error::Invalid("element is not real".into()))?;
        Ok(self.mask(&p.mul(&self.rp)))
    }

    fn full(&self) -> u64 {
        (1u64 << self.roots.len()) - 1
    }
}

/// The classes of real units modulo norms of units, one per reachable sign
/// pattern.
#[derive(Clone, Debug)]
pub struct UnitClasses {
    n: u64,
    places: RealPlaces,
    /// Echelon basis over F₂, pivot is the highest bit.
    basis: Vec<(u64, FieldElem)>,
    expected: usize,
}

impl UnitClasses {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Rank of `O_k^×/N(O_K^×)`.
    pub fn expected_rank(&self) -> usize {
        self.expected
    }

    pub fn count(&self) -> usize {
        1 << self.rank()
    }

    fn insert(&mut self, mask: u64, u: FieldElem) -> bool {
        let (m, u) = self.reduce(mask, u);
        if m == 0 {
            return false;
        }
        self.basis.push((m, u));
        self.basis.sort_by(|a, b| b.0.cmp(&a.0));
        true
    }

    fn reduce(&self, mut mask: u64, mut u: FieldElem) -> (u64, FieldElem) {
        for (m, b) in &self.basis {
            let pivot = 63 - m.leading_zeros();
            if mask >> pivot & 1 == 1 {
                mask ^= m;
                u = u.mul(b);
            }
        }
        (mask, u)
    }

    /// A unit whose sign pattern is `mask` (bit set = negative), if any.
    pub fn unit_with_mask(&self, mask: u64) -> Option<FieldElem> {
        let one = FieldElem::from_int(&self.places.modulus, 1).ok()?;
        let (rest, u) = self.reduce(mask, one);
        if rest != 0 {
            return None;
        }
        Some(u)
    }

    pub fn mask_of(&self, u: &FieldElem) -> Result<u64> {
        self.places.elem_mask(u)
    }

    /// One unit per class.
    pub fn representatives(&self) -> Vec<FieldElem> {
        let one = FieldElem::from_int(&self.places.modulus, 1).expect("valid modulus");
        let mut out = vec![one];
        for (_, b) in self.basis.iter().rev() {
            let more: Vec<FieldElem> = out.iter().map(|u| u.mul(b)).collect();
            out.extend(more);
        }
        out
    }
}

fn is_unit(u: &FieldElem) -> bool {
    u.is_integral() && u.norm().abs().is_one()
}

/// `ζ_{2n}^k` when it lies in `Q(ζ_n)`.
fn zeta_2n_pow(m: &ZPoly, n: u64, k: i64) -> Result<Option<FieldElem>> {
    let x = FieldElem::x(m)?;
    if n % 2 == 1 {
        let e = k * (n as i64 + 1) / 2;
        let s = if k.rem_euclid(2) == 1 { -1 } else { 1 };
        Ok(Some(x.pow(e)?.scale(&BigRational::from_integer(s.into()))))
    } else if k % 2 == 0 {
        Ok(Some(x.pow(k / 2)?))
    } else {
        Ok(None)
    }
}

/// `ζ_{2n}^{b−a}(1−ζ^a)/(1−ζ^b)`, which is real.
fn cyclotomic_unit(m: &ZPoly, n: u64, a: u64, b: u64) -> Result<Option<FieldElem>> {
    let Some(z) = zeta_2n_pow(m, n, b as i64 - a as i64)? else {
        return Ok(None);
    };
    let x = FieldElem::x(m)?;
    let one = FieldElem::from_int(m, 1)?;
    let num = one.sub(&x.pow(a as i64)?);
    let den = one.sub(&x.pow(b as i64)?);
    if den.is_zero() || num.is_zero() {
        return Ok(None);
    }
    let u = z.mul(&num.div(&den)?);
    Ok(if u.is_real() { Some(u) } else { None })
}

/// The Z-basis `1, x^j + x^{-j}` of the real subring.
fn real_basis(m: &ZPoly) -> Result<Vec<FieldElem>> {
    let e = m.deg() / 2;
    let x = FieldElem::x(m)?;
    let mut out = vec![FieldElem::from_int(m, 1)?];
    for j in 1..e as i64 {
        out.push(x.pow(j)?.add(&x.pow(-j)?));
    }
    Ok(out)
}

fn combine(basis: &[FieldElem], c: &[i64]) -> FieldElem {
    let mut acc = basis[0].scale(&BigRational::zero());
    for (b, &ci) in basis.iter().zip(c) {
        if ci != 0 {
            acc = acc.add(&b.scale(&BigRational::from_integer(ci.into())));
        }
    }
    acc
}

const UNIT_SEARCH_RADIUS: u32 = 3;

/// Sign classes of `O_k^×/N(O_K^×)` for `k = Q(ζ_n + ζ_n⁻¹)`.
pub fn unit_classes(n: u64) -> Result<UnitClasses> {
    let phi = euler_phi(n);
    if !(2..=20).contains(&phi) {
        return Err(Error::OutOfRange(format!("φ({n}) = {phi}")));
    }
    let places = RealPlaces::new(n)?;
    let e = places.roots.len();
    let nc = conductor(n);
    let expected = if num::factor(nc).len() == 1 { e } else { e - 1 };
    let m = places.modulus.clone();
    let mut uc = UnitClasses { n, places, basis: Vec::new(), expected };
    let minus = FieldElem::from_int(&m, -1)?;
    let mm = uc.places.full();
    uc.insert(mm, minus);
    let try_pair = |uc: &mut UnitClasses, a: u64, b: u64| -> Result<()> {
        if uc.rank() >= uc.expected {
            return Ok(());
        }
        if let Some(u) = cyclotomic_unit(&m, n, a, b)? {
            if is_unit(&u) {
                let mask = uc.places.elem_mask(&u)?;
                uc.insert(mask, u);
            }
        }
        Ok(())
    };
    for a in 2..=n / 2 {
        let b = if n % 2 == 0 && a % 2 == 0 { 2 } else { 1 };
        if a != b {
            try_pair(&mut uc, a, b)?;
        }
    }
    for b in 2..n / 2 {
        for a in b + 1..=n / 2 {
            try_pair(&mut uc, a, b)?;
        }
    }
    if uc.rank() < uc.expected {
        let basis = real_basis(&m)?;
        'search: for radius in 1..=UNIT_SEARCH_RADIUS {
            for c in l1_sphere(e, radius) {
                let u = combine(&basis, &c);
                if is_unit(&u) {
                    let mask = uc.places.elem_mask(&u)?;
                    uc.insert(mask, u);
                    if uc.rank() >= uc.expected {
                        break 'search;
                    }
                }
            }
        }
    }
    if uc.rank() < uc.expected {
        return Err(Error::Undecided(format!(
            "found sign rank {} of {} for the units of Q(ζ_{n})⁺",
            uc.rank(),
            uc.expected
        )));
    }
    Ok(uc)
}

/// Twists by these units represent every twist class with a fixed ideal.
pub fn unit_twist_representatives(n: u64) -> Result<Vec<FieldElem>> {
    Ok(unit_classes(n)?.representatives())
}

/// How a prime p dividing n decomposes in `Q(ζ_n)` and its real subfield.
#[derive(Clone, Debug, PartialEq, Eq)]
struct PrimeData {
    p: u64,
    e: u64,
    f: u64,
    g: u64,
    /// Exponent of the primes of K in the prime of k.
    t: u64,
}

fn prime_data(n: u64, p: u64) -> Result<PrimeData> {
    let nc = conductor(n);
    let mut m = nc;
    let mut a = 0u32;
    while m % p == 0 {
        m /= p;
        a += 1;
    }
    let e = if a == 0 { 1 } else { euler_phi(p.pow(a)) };
    let f = if m == 1 {
        1
    } else {
        (1..=m).find(|&k| crate::exactmat::modp::pow_mod(p % m, k, m) == 1).expect("p is a unit mod m")
    };
    let g = euler_phi(m) / f;
    // ⟨p, -1⟩ must be all of (Z/m)^× for a single prime in k
    if m > 2 {
        let mut sub = std::collections::BTreeSet::new();
        let mut x = 1 % m;
        for _ in 0..f {
            sub.insert(x);
            sub.insert((m - x) % m);
            x = x * (p % m) % m;
        }
        if sub.len() as u64 != euler_phi(m) {
            return Err(Error::Unsupported(format!("{p} splits in the real subfield of Q(ζ_{n})")));
        }
    }
    let t = if m == 1 { 2 } else { 1 };
    Ok(PrimeData { p, e, f, g, t })
}

const GENERATOR_RADIUS: u32 = 5;

/// A real generator of the prime of k above p.
fn real_prime_generator(m: &ZPoly, pd: &PrimeData) -> Result<FieldElem> {
    let target = BigInt::from(pd.p).pow((pd.g * pd.f * pd.t) as u32);
    let basis = real_basis(m)?;
    for radius in 1..=GENERATOR_RADIUS {
        for c in l1_sphere(basis.len(), radius) {
            let h = combine(&basis, &c);
            let hz = h.to_zpoly().expect("integral");
            if m.resultant(&hz).abs() == target {
                return Ok(h);
            }
        }
    }
    Err(Error::GeneratorNotFound(format!("real prime above {}", pd.p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DetStatus {
    Admissible,
    /// Does not divide `res(c_n, μ)` for any allowed μ.
    NoResultant,
    /// No unit twist reaches signature (2, φ(n) − 2).
    NoSignature,
    /// Every twist of the right signature is odd.
    NotEven,
}

#[derive(Clone, Debug)]
pub struct DetCandidate {
    pub det: BigInt,
    /// `(p, m)`: the twist contains the m-th power of the prime of k above p.
    pub exponents: Vec<(u64, i64)>,
    pub status: DetStatus,
    pub witness: Option<CnLattice>,
}

/// `res(c_n, μ)` over products μ of `c_1` and distinct `c_k`, `k < n`, of
/// degree at most `22 − φ(n)`; only the contributing factors are tracked.
fn resultant_values(n: u64) -> Vec<BigInt> {
    let phi = euler_phi(n);
    let budget = (22 - phi as i64) - 1;
    let contributing: Vec<(u64, BigInt)> = num::divisors(n)
        .into_iter()
        .filter(|&k| k > 1 && k < n)
        .map(|k| (k, cyclo_resultant(n, k).expect("k < n")))
        .filter(|(_, r)| !r.is_one())
        .collect();
    let base = cyclo_resultant(n, 1).expect("n > 1");
    let mut out = Vec::new();
    if budget < 0 {
        return out;
    }
    let mut stack = vec![(0usize, 0i64, base)];
    while let Some((i, deg, val)) = stack.pop() {
        if i == contributing.len() {
            out.push(val);
            continue;
        }
        stack.push((i + 1, deg, val.clone()));
        let (k, r) = &contributing[i];
        let d = euler_phi(*k) as i64;
        if deg + d <= budget {
            stack.push((i + 1, deg + d, val * r));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn admissible_twist(
    principal: &CnLattice,
    places: &RealPlaces,
    units: &UnitClasses,
    b: &FieldElem,
) -> Result<(DetStatus, Option<CnLattice>)> {
    let phi = principal.rank();
    let s0 = places.twist_mask(b)?;
    let full = places.full();
    let mut status = DetStatus::NoSignature;
    for i in 0..places.roots.len() {
        // positive only at root i
        let target = full & !(1u64 << i);
        let Some(u) = units.unit_with_mask(target ^ s0) else {
            continue;
        };
        let t = match twist_lattice(principal, &u.mul(b)) {
            Ok(t) => t,
            Err(Error::Invalid(_)) => {
                status = DetStatus::NotEven;
                continue;
            }
            Err(e) => return Err(e),
        };
        debug_assert_eq!(t.lattice().signature(), (2, phi - 2));
        if t.lattice().is_even() && t.lattice().signature() == (2, phi - 2) {
            return Ok((DetStatus::Admissible, Some(t)));
        }
        status = DetStatus::NotEven;
    }
    Ok((status, None))
}

/// Every determinant allowed by the ideal structure, with the first filter
/// that rejects it.
pub fn determinant_candidates(n: u64) -> Result<Vec<DetCandidate>> {
    let phi = euler_phi(n);
    if !(2..=21).contains(&phi) {
        return Err(Error::OutOfRange(format!("φ({n}) = {phi}")));
    }
    let principal = principal_cn(n)?;
    let m = principal.modulus().clone();
    let places = RealPlaces::new(n)?;
    let units = unit_classes(n)?;
    let d0 = principal.lattice().det().abs();
    let resultants = resultant_values(n);

    // per prime: generator and the allowed range of exponents
    let mut per_prime: Vec<(PrimeData, FieldElem, i64, i64, u32)> = Vec::new();
    for p in num::prime_divisors(n) {
        let pd = prime_data(n, p)?;
        let mut k = 0u32;
        let mut rest = d0.clone();
        while (&rest % p).is_zero() {
            rest /= p;
            k += 1;
        }
        let gf = (pd.g * pd.f) as u32;
        if k % gf != 0 {
            return Err(Error::Unsupported(format!("discriminant of the principal lattice at {p}")));
        }
        let vb = (k / gf) as i64;
        let vn = (num::factor(n).iter().find(|(q, _)| *q == p).expect("p | n").1 as u64 * pd.e) as i64;
        let t = pd.t as i64;
        let lo = Integer::div_ceil(&-vb, &t);
        let hi = Integer::div_floor(&(vn - vb), &t);
        let gen = real_prime_generator(&m, &pd)?;
        per_prime.push((pd, gen, lo, hi, vb as u32));
    }

    let mut out = Vec::new();
    let mut idx: Vec<i64> = per_prime.iter().map(|x| x.2).collect();
    loop {
        if per_prime.iter().zip(&idx).any(|(x, &i)| i > x.3) {
            break;
        }
        let mut det = BigInt::one();
        let mut b = FieldElem::from_int(&m, 1)?;
        let mut exps = Vec::new();
        for ((pd, gen, _, _, vb), &mp) in per_prime.iter().zip(&idx) {
            let ex = (pd.g * pd.f) as i64 * (mp * pd.t as i64 + *vb as i64);
            det *= BigInt::from(pd.p).pow(ex.to_u32().expect("nonnegative"));
            b = b.mul(&gen.pow(mp)?);
            exps.push((pd.p, mp));
        }
        let (status, witness) = if !resultants.iter().any(|r| (r % &det).is_zero()) {
            (DetStatus::NoResultant, None)
        } else {
            admissible_twist(&principal, &places, &units, &b)?
        };
        out.push(DetCandidate { det, exponents: exps, status, witness });
        // advance
        let mut j = 0;
        loop {
            if j == idx.len() {
                out.sort_by(|a, b| a.det.cmp(&b.det));
                return Ok(out);
            }
            idx[j] += 1;
            if idx[j] <= per_prime[j].3 {
                break;
            }
            idx[j] = per_prime[j].2;
            j += 1;
        }
    }
    out.sort_by(|a, b| a.det.cmp(&b.det));
    Ok(out)
}

/// `|det T|` for the rank φ(n) transcendental lattices allowed by the
/// resultant, ideal, sign and parity constraints.
pub fn possible_determinants(n: u64) -> Result<Vec<BigInt>> {
    let mut v: Vec<BigInt> = determinant_candidates(n)?
        .into_iter()
        .filter(|c| c.status == DetStatus::Admissible)
        .map(|c| c.det)
        .collect();
    v.sort();
    v.dedup();
    Ok(v)
}
