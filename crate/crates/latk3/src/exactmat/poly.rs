//! Dense univariate polynomials over Z and Q, coefficients stored from the
//! constant term upwards.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{det, int_rat, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZPoly(Vec<BigInt>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly(Vec<BigRational>);

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().map_or(false, |x| x.is_zero()) {
        v.pop();
    }
}

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        trim(&mut c);
        ZPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        ZPoly(Vec::new())
    }

    pub fn one() -> Self {
        ZPoly(vec![BigInt::one()])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// x^k - 1
    pub fn x_pow_minus_one(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = BigInt::from(-1);
        c[k] = BigInt::one();
        ZPoly(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn add(&self, o: &ZPoly) -> ZPoly {
        let n = self.0.len().max(o.0.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        let n = self.0.len().max(o.0.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly(self.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &BigInt) -> ZPoly {
        ZPoly::new(self.0.iter().map(|x| x * a).collect())
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        ZPoly::new(c)
    }

    pub fn pow(&self, e: usize) -> ZPoly {
        let mut r = ZPoly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Division by a monic polynomial; `None` if `d` is not monic.
    pub fn divrem_monic(&self, d: &ZPoly) -> Option<(ZPoly, ZPoly)> {
        if !d.is_monic() {
            return None;
        }
        let dd = d.deg();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Some((ZPoly::zero(), self.clone()));
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = r[k].clone();
            if c.is_zero() {
                continue;
            }
            q[k - dd] = c.clone();
            for (j, dj) in d.0.iter().enumerate() {
                r[k - dd + j] -= &c * dj;
            }
        }
        Some((ZPoly::new(q), ZPoly::new(r)))
    }

    /// Exact division, `None` unless `d` divides `self` over Z.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        let (q, r) = self.to_q().divrem(&d.to_q());
        if !r.is_zero() {
            return None;
        }
        q.to_z()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_q(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + int_rat(c);
        }
        acc
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn to_q(&self) -> QPoly {
        QPoly::new(self.0.iter().map(int_rat).collect())
    }

    /// The reversed polynomial x^deg·p(1/x).
    pub fn reciprocal(&self) -> ZPoly {
        let mut c = self.0.clone();
        c.reverse();
        ZPoly::new(c)
    }

    pub fn is_reciprocal(&self) -> bool {
        !self.is_zero() && self.reciprocal() == *self
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Resultant by the Euclidean remainder sequence over Q.
    pub fn resultant(&self, o: &ZPoly) -> BigInt {
        let (mut a, mut b) = (self.to_q(), o.to_q());
        if a.is_zero() || b.is_zero() {
            return BigInt::zero();
        }
        let mut acc = BigRational::one();
        loop {
            let (da, db) = (a.deg(), b.deg());
            if db == 0 {
                acc *= num_traits::pow(b.lead(), da);
                break;
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return BigInt::zero();
            }
            if da % 2 == 1 && db % 2 == 1 {
                acc = -acc;
            }
            acc *= num_traits::pow(b.lead(), da - r.deg());
            a = b;
            b = r;
        }
        debug_assert!(acc.is_integer());
        acc.to_integer()
    }

    /// Resultant via the Sylvester determinant.
    pub fn sylvester_resultant(&self, o: &ZPoly) -> BigInt {
        let (Some(m), Some(n)) = (self.degree(), o.degree()) else {
            return BigInt::zero();
        };
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        if m == 0 {
            return self.lead().pow(n as u32);
        }
        if n == 0 {
            return o.lead().pow(m as u32);
        }
        let size = m + n;
        let mut s = IntMatrix::zeros(size, size);
        for i in 0..n {
            for (j, c) in self.0.iter().rev().enumerate() {
                s.set(i, i + j, c.clone());
            }
        }
        for i in 0..m {
            for (j, c) in o.0.iter().rev().enumerate() {
                s.set(n + i, i + j, c.clone());
            }
        }
        det(&s).expect("square Sylvester matrix")
    }

    pub fn to_string_var(&self, var: &str) -> String {
        self.to_q().to_string_var(var)
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        trim(&mut c);
        QPoly(c)
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly(vec![BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    pub fn x() -> Self {
        QPoly(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|x| x * a).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    /// Euclidean division; panics on division by zero.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let lc = d.lead();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let c = &r[k] / &lc;
            for (j, dj) in d.0.iter().enumerate() {
                r[k - dd + j] -= &c * dj;
            }
            q[k - dd] = c;
        }
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.scale(&(BigRational::one() / l))
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s·self + t·o = g monic.
    pub fn xgcd(&self, o: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = BigRational::one() / r0.lead();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
    }

    pub fn to_z(&self) -> Option<ZPoly> {
        if self.0.iter().all(|c| c.is_integer()) {
            Some(ZPoly::new(self.0.iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }

    /// Composition self(g).
    pub fn compose(&self, g: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(g).add(&QPoly::constant(c.clone()));
        }
        acc
    }

    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mon = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{}^{}", var, i),
            };
            if i == 0 {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mon);
            } else {
                out.push_str(&format!("{}*{}", a, mon));
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

/// Sturm sequence of a squarefree polynomial.
pub fn sturm_sequence(p: &QPoly) -> Vec<QPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        seq.push(r);
    }
    seq
}

fn sign_changes(seq: &[QPoly], x: &BigRational) -> usize {
    let mut last: i8 = 0;
    let mut count = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the half open interval (a, b].
pub fn count_roots(seq: &[QPoly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(seq, a) - sign_changes(seq, b)
}

/// Disjoint isolating intervals (a, b] for the real roots of a squarefree
/// polynomial, sorted increasingly, each containing exactly one root.
pub fn isolate_real_roots(p: &QPoly) -> Vec<(BigRational, BigRational)> {
    if p.deg() == 0 {
        return Vec::new();
    }
    let seq = sturm_sequence(p);
    // Cauchy bound
    let lc = p.lead().abs();
    let m = p.0.iter().take(p.deg()).map(|c| c.abs() / &lc).fold(BigRational::zero(), |a, b| a.max(b));
    let bound = m + BigRational::one();
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let k = count_roots(&seq, &a, &b);
        if k == 0 {
            continue;
        }
        if k == 1 {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Halve an isolating interval, keeping the one containing the root.
pub fn refine_interval(seq: &[QPoly], iv: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let mid = (&iv.0 + &iv.1) / BigRational::from_integer(BigInt::from(2));
    if count_roots(seq, &iv.0, &mid) == 1 {
        (iv.0.clone(), mid)
    } else {
        (mid, iv.1.clone())
    }
}

/// Sign of `g` at the unique root of the squarefree `p` in the isolating
/// interval. Requires g not to vanish at that root.
pub fn sign_at_root(p: &QPoly, iv: &(BigRational, BigRational), g: &QPoly) -> i8 {
    if g.deg() == 0 {
        let c = g.coeff(0);
        return if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        };
    }
    let seq = sturm_sequence(p);
    let common = g.gcd(&g.derivative());
    let sqfree = if common.deg() == 0 { g.clone() } else { g.divrem(&common).0 };
    let gseq = sturm_sequence(&sqfree);
    let mut iv = iv.clone();
    loop {
        let ga = g.eval(&iv.0);
        if !ga.is_zero() && count_roots(&gseq, &iv.0, &iv.1) == 0 {
            return if ga.is_positive() { 1 } else { -1 };
        }
        iv = refine_interval(&seq, &iv);
    }
}

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::rat;

    #[test]
    fn resultant_basic() {
        // res(x^2+1, x^2-4) = 25
        let a = ZPoly::from_i64(&[1, 0, 1]);
        let b = ZPoly::from_i64(&[-4, 0, 1]);
        assert_eq!(a.resultant(&b), BigInt::from(25));
        // res(c5, x-1) = c5(1) up to sign
        let c5 = ZPoly::from_i64(&[1, 1, 1, 1, 1]);
        let x1 = ZPoly::from_i64(&[-1, 1]);
        assert_eq!(c5.resultant(&x1).abs(), BigInt::from(5));
    }

    #[test]
    fn resultant_matches_sylvester() {
        let ps = [
            ZPoly::from_i64(&[1, 1, 1, 1, 1]),
            ZPoly::from_i64(&[-4, 0, 1]),
            ZPoly::from_i64(&[3, -2, 0, 5]),
            ZPoly::from_i64(&[7]),
            ZPoly::from_i64(&[0, 2, -1, 0, 0, 3]),
            ZPoly::from_i64(&[-1, 1]),
            ZPoly::from_i64(&[1, 0, -1]),
        ];
        for a in &ps {
            for b in &ps {
                assert_eq!(a.resultant(b), a.sylvester_resultant(b), "{a} / {b}");
            }
        }
    }

    #[test]
    fn xgcd_identity() {
        let a = ZPoly::from_i64(&[1, 1, 1, 1, 1]).to_q();
        let b = ZPoly::from_i64(&[3, 0, 1]).to_q();
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(g, QPoly::one());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), QPoly::one());
    }

    #[test]
    fn root_isolation() {
        // y^2 + y - 1 has roots (-1 ± sqrt5)/2
        let r = ZPoly::from_i64(&[-1, 1, 1]).to_q();
        let ivs = isolate_real_roots(&r);
        assert_eq!(ivs.len(), 2);
        let g = QPoly::x();
        assert_eq!(sign_at_root(&r, &ivs[0], &g), -1);
        assert_eq!(sign_at_root(&r, &ivs[1], &g), 1);
        let h = ZPoly::from_i64(&[1, 2]).to_q(); // 2y+1
        assert_eq!(sign_at_root(&r, &ivs[1], &h), 1);
        assert!(ivs[1].0 < rat(1, 1) && ivs[1].1 > rat(0, 1));
    }

    #[test]
    fn display() {
        assert_eq!(ZPoly::from_i64(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(ZPoly::from_i64(&[3, -2]).to_string_var("y"), "-2*y + 3");
    }
}
