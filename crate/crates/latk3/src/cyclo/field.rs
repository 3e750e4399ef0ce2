//! Exact arithmetic in `Q[x]/p(x)` for a monic `p` with `p(0) = ±1`, with
//! the involution `x ↦ x⁻¹`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmat::{self, int_rat, QPoly, RatMatrix, ZPoly};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    modulus: ZPoly,
    c: Vec<BigRational>,
}

fn check_modulus(p: &ZPoly) -> Result<()> {
    if p.degree().map_or(true, |d| d == 0) || !p.is_monic() {
        return Err(Error::Invalid("modulus must be monic of positive degree".into()));
    }
    if !p.coeff(0).abs().is_one() {
        return Err(Error::Invalid("x is not invertible modulo the modulus".into()));
    }
    Ok(())
}

impl FieldElem {
    pub fn new(modulus: &ZPoly, g: &QPoly) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self::reduced(modulus, g))
    }

    fn reduced(modulus: &ZPoly, g: &QPoly) -> Self {
        let r = g.rem(&modulus.to_q());
        let d = modulus.deg();
        let c = (0..d).map(|i| r.coeff(i)).collect();
        FieldElem { modulus: modulus.clone(), c }
    }

    fn with(&self, c: Vec<BigRational>) -> Self {
        FieldElem { modulus: self.modulus.clone(), c }
    }

    pub fn from_int(modulus: &ZPoly, a: i64) -> Result<Self> {
        Self::from_rational(modulus, BigRational::from_integer(a.into()))
    }

    pub fn from_rational(modulus: &ZPoly, a: BigRational) -> Result<Self> {
        Self::new(modulus, &QPoly::constant(a))
    }

    pub fn x(modulus: &ZPoly) -> Result<Self> {
        Self::new(modulus, &QPoly::x())
    }

    /// `x + x⁻¹`.
    pub fn y(modulus: &ZPoly) -> Result<Self> {
        let x = Self::x(modulus)?;
        Ok(x.add(&x.x_inverse()))
    }

    /// The element `q(x + x⁻¹)`.
    pub fn from_real_poly(modulus: &ZPoly, q: &QPoly) -> Result<Self> {
        let y = Self::y(modulus)?;
        let mut acc = Self::from_int(modulus, 0)?;
        for c in q.coeffs().iter().rev() {
            acc = acc.mul(&y).add(&acc.with_const(c.clone()));
        }
        Ok(acc)
    }

    fn with_const(&self, a: BigRational) -> Self {
        let mut c = vec![BigRational::zero(); self.c.len()];
        c[0] = a;
        self.with(c)
    }

    pub fn modulus(&self) -> &ZPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.c.clone())
    }

    pub fn to_zpoly(&self) -> Option<ZPoly> {
        self.to_qpoly().to_z()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Integral in the power basis, i.e. an element of `Z[x]/p`.
    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| x.is_integer())
    }

    fn same(&self, o: &FieldElem) {
        assert_eq!(self.modulus, o.modulus, "elements of different fields");
    }

    pub fn add(&self, o: &FieldElem) -> FieldElem {
        self.same(o);
        self.with(self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &FieldElem) -> FieldElem {
        self.same(o);
        self.with(self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> FieldElem {
        self.with(self.c.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, a: &BigRational) -> FieldElem {
        self.with(self.c.iter().map(|c| c * a).collect())
    }

    pub fn mul(&self, o: &FieldElem) -> FieldElem {
        self.same(o);
        Self::reduced(&self.modulus, &self.to_qpoly().mul(&o.to_qpoly()))
    }

    pub fn inverse(&self) -> Result<FieldElem> {
        let (g, s, _) = self.to_qpoly().xgcd(&self.modulus.to_q());
        if g.deg() != 0 || g.is_zero() {
            return Err(Error::Invalid("element is not invertible".into()));
        }
        Ok(Self::reduced(&self.modulus, &s))
    }

    pub fn div(&self, o: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(&o.inverse()?))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElem> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.with_const(BigRational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// `x⁻¹ = -(p_1 + p_2 x + ... + x^{d-1}) / p_0`.
    pub fn x_inverse(&self) -> FieldElem {
        let p0 = int_rat(&self.modulus.coeff(0));
        let c = (1..=self.c.len()).map(|i| -int_rat(&self.modulus.coeff(i)) / &p0).collect();
        self.with(c)
    }

    /// The image under `x ↦ x⁻¹`.
    pub fn sigma(&self) -> FieldElem {
        let xi = self.x_inverse();
        let mut acc = self.with_const(BigRational::zero());
        for c in self.c.iter().rev() {
            acc = acc.mul(&xi).add(&self.with_const(c.clone()));
        }
        acc
    }

    pub fn is_real(&self) -> bool {
        self.sigma() == *self
    }

    /// Rows are the coordinates of `self · x^i`.
    pub fn mult_matrix(&self) -> RatMatrix {
        let d = self.c.len();
        let x = FieldElem::x(&self.modulus).expect("checked modulus");
        let mut rows = Vec::with_capacity(d);
        let mut cur = self.clone();
        for _ in 0..d {
            rows.push(cur.c.clone());
            cur = cur.mul(&x);
        }
        RatMatrix::from_rows(rows).expect("square")
    }

    pub fn trace(&self) -> BigRational {
        let s = power_sums(&self.modulus);
        self.c.iter().zip(&s).map(|(a, b)| a * int_rat(b)).sum()
    }

    pub fn norm(&self) -> BigRational {
        exactmat::det_rat(&self.mult_matrix()).expect("square")
    }

    /// For a σ-invariant element, the polynomial `q` of degree below
    /// `deg p / 2` with `self = q(x + x⁻¹)`.
    pub fn real_poly(&self) -> Option<QPoly> {
        if !self.is_real() || self.c.len() % 2 == 1 {
            return None;
        }
        let e = self.c.len() / 2;
        let y = FieldElem::y(&self.modulus).ok()?;
        let mut rows = Vec::with_capacity(e);
        let mut cur = self.with_const(BigRational::one());
        for _ in 0..e {
            rows.push(cur.c.clone());
            cur = cur.mul(&y);
        }
        let a = RatMatrix::from_rows(rows).ok()?;
        exactmat::solve_left(&a, &self.c).map(QPoly::new)
    }
}

/// Power sums `Tr(x^k)` for `k < deg p` by Newton's identities.
pub fn power_sums(p: &ZPoly) -> Vec<BigInt> {
    let d = p.deg();
    let a = |i: usize| p.coeff(i);
    let mut s = vec![BigInt::from(d)];
    for k in 1..d {
        let mut v = -BigInt::from(k) * a(d - k);
        for i in 1..k {
            v -= a(d - i) * &s[k - i];
        }
        s.push(v);
    }
    s
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_qpoly().to_string_var("x"))
    }
}

const MAX_DEPTH: usize = 64;
const MAX_EXP: i64 = 100_000;
const MAX_DIGITS: usize = 400;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    modulus: &'a ZPoly,
    depth: usize,
}

/// Parse an element of `Q[x]/p`. Syntax: integers, `x`, `y` (for
/// `x + x⁻¹`), `+ - * /`, `^` with an integer exponent and parentheses.
pub fn parse_field_elem(text: &str, modulus: &ZPoly) -> Result<FieldElem> {
    check_modulus(modulus)?;
    let mut p = Parser { src: text.as_bytes(), pos: 0, modulus, depth: 0 };
    let v = p.expr()?;
    p.ws();
    if p.pos != p.src.len() {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<FieldElem> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("nesting too deep");
        }
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc.add(&t) } else { acc.sub(&t) };
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElem> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let f = self.unary()?;
            acc = if c == b'*' {
                acc.mul(&f)
            } else {
                match acc.div(&f) {
                    Ok(v) => v,
                    Err(_) => return Err(Error::Parse { pos: at, msg: "division by a non-invertible element".into() }),
                }
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FieldElem> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return self.err("nesting too deep");
            }
            let v = self.unary()?.neg();
            self.depth -= 1;
            return Ok(v);
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let e = self.exponent()?;
            return base.pow(e).map_err(|_| Error::Parse { pos: at, msg: "negative power of a non-invertible element".into() });
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.ws();
        let n = self.integer()?;
        let e = n.to_i64().filter(|e| e.abs() <= MAX_EXP);
        match e {
            Some(e) => Ok(if neg { -e } else { e }),
            None => self.err("exponent too large"),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an integer");
        }
        if self.pos - start > MAX_DIGITS {
            return Err(Error::Parse { pos: start, msg: "integer too long".into() });
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<FieldElem> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'x') => {
                self.pos += 1;
                FieldElem::x(self.modulus)
            }
            Some(b'y') => {
                self.pos += 1;
                FieldElem::y(self.modulus)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                FieldElem::from_rational(self.modulus, BigRational::from_integer(n))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::rat;

    fn c5() -> ZPoly {
        ZPoly::from_i64(&[1, 1, 1, 1, 1])
    }

    #[test]
    fn arithmetic() {
        let p = c5();
        let x = FieldElem::x(&p).unwrap();
        assert_eq!(x.pow(5).unwrap(), FieldElem::from_int(&p, 1).unwrap());
        assert_eq!(x.pow(-1).unwrap(), x.x_inverse());
        assert_eq!(x.sigma(), x.pow(4).unwrap());
        let y = FieldElem::y(&p).unwrap();
        assert!(y.is_real());
        // y^2 + y - 1 = 0 in Q(ζ_5)
        assert!(y.mul(&y).add(&y).sub(&FieldElem::from_int(&p, 1).unwrap()).is_zero());
        assert_eq!(x.trace(), rat(-1, 1));
        assert_eq!(x.sub(&FieldElem::from_int(&p, 1).unwrap()).norm(), rat(5, 1));
        let half = FieldElem::from_rational(&p, rat(1, 2)).unwrap();
        assert_eq!(half.norm(), rat(1, 16));
        assert_eq!(y.real_poly().unwrap(), QPoly::x());
        assert!(x.real_poly().is_none());
    }

    #[test]
    fn power_sums_c12() {
        // roots of x^4 - x^2 + 1 are the primitive 12th roots of unity
        assert_eq!(power_sums(&ZPoly::from_i64(&[1, 0, -1, 0, 1])), [4, 0, 2, 0].map(BigInt::from).to_vec());
    }

    #[test]
    fn parse() {
        let p = c5();
        let y = FieldElem::y(&p).unwrap();
        assert_eq!(parse_field_elem("x + x^-1", &p).unwrap(), y);
        assert_eq!(parse_field_elem(" 2 - y ", &p).unwrap(), FieldElem::from_int(&p, 2).unwrap().sub(&y));
        assert_eq!(parse_field_elem("(x-1)^2/(x-1)", &p).unwrap(), parse_field_elem("x - 1", &p).unwrap());
        assert_eq!(parse_field_elem("-3*-y", &p).unwrap(), y.scale(&rat(3, 1)));
        assert_eq!(parse_field_elem("1/2", &p).unwrap().coeffs()[0], rat(1, 2));
        for bad in ["", "x +", "(x", "x^", "2/0", "z", "x^999999999", "x)"] {
            assert!(matches!(parse_field_elem(bad, &p), Err(Error::Parse { .. })), "{bad}");
        }
        let deep = "(".repeat(200) + "x" + &")".repeat(200);
        assert!(parse_field_elem(&deep, &p).is_err());
        assert!(parse_field_elem("x", &ZPoly::from_i64(&[2, 1])).is_err());
    }
}
