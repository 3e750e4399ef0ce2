//! Exact Fincke-Pohst enumeration over the rationals.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::exactmat::RatMatrix;
use crate::{Error, Result};

/// `Q(x) = Σ d_i (x_i + Σ_{j>i} μ_ij x_j)²` for a positive definite form.
#[derive(Clone, Debug)]
pub(crate) struct Ldl {
    d: Vec<BigRational>,
    mu: Vec<Vec<BigRational>>,
}

impl Ldl {
    pub(crate) fn new(q: &RatMatrix) -> Result<Ldl> {
        let n = q.rows();
        let mut d = vec![BigRational::zero(); n];
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let mut di = q.get(i, i).clone();
            for k in 0..i {
                di -= &mu[k][i] * &mu[k][i] * &d[k];
            }
            if !di.is_positive() {
                return Err(Error::Invalid("form is not positive definite".into()));
            }
            for j in i + 1..n {
                let mut s = q.get(i, j).clone();
                for k in 0..i {
                    s -= &mu[k][i] * &mu[k][j] * &d[k];
                }
                mu[i][j] = s / &di;
            }
            d[i] = di;
        }
        Ok(Ldl { d, mu })
    }

    pub(crate) fn dim(&self) -> usize {
        self.d.len()
    }

    /// Calls `f(x, Q(x + c))` for every integer x with `Q(x + c) ≤ bound`.
    pub(crate) fn for_each_close<F: FnMut(&[BigInt], &BigRational)>(
        &self,
        center: &[BigRational],
        bound: &BigRational,
        mut f: F,
    ) {
        let n = self.dim();
        if n == 0 {
            if !bound.is_negative() {
                f(&[], &BigRational::zero());
            }
            return;
        }
        let mut x = vec![BigInt::zero(); n];
        // y_j = x_j + c_j for the already fixed coordinates
        let mut y = vec![BigRational::zero(); n];
        self.rec(n - 1, center, bound.clone(), &mut x, &mut y, &mut f);
    }

    fn rec<F: FnMut(&[BigInt], &BigRational)>(
        &self,
        i: usize,
        c: &[BigRational],
        rem: BigRational,
        x: &mut Vec<BigInt>,
        y: &mut Vec<BigRational>,
        f: &mut F,
    ) {
        let mut t = c[i].clone();
        for j in i + 1..self.dim() {
            if !self.mu[i][j].is_zero() && !y[j].is_zero() {
                t += &self.mu[i][j] * &y[j];
            }
        }
        // (x_i + t)² ≤ rem / d_i
        let r = &rem / &self.d[i];
        let m = -t.clone();
        let s0: BigInt = Roots::sqrt(&r.floor().to_integer());
        let base: BigInt = m.floor().to_integer();
        let lo: BigInt = &base - &s0 - 1;
        let hi: BigInt = &base + &s0 + 2;
        let mut xi = lo;
        while xi <= hi {
            let z = BigRational::from_integer(xi.clone()) + &t;
            let sq = &z * &z;
            if sq <= r {
                let used = &self.d[i] * &sq;
                let left = &rem - &used;
                x[i] = xi.clone();
                y[i] = BigRational::from_integer(xi.clone()) + &c[i];
                if i == 0 {
                    let total = self.total(c, x);
                    f(x, &total);
                } else {
                    self.rec(i - 1, c, left, x, y, f);
                }
            }
            xi += 1;
        }
        x[i] = BigInt::zero();
        y[i] = BigRational::zero();
    }

    fn total(&self, c: &[BigRational], x: &[BigInt]) -> BigRational {
        let n = self.dim();
        let y: Vec<BigRational> = (0..n).map(|j| BigRational::from_integer(x[j].clone()) + &c[j]).collect();
        let mut s = BigRational::zero();
        for i in 0..n {
            let mut t = y[i].clone();
            for j in i + 1..n {
                t += &self.mu[i][j] * &y[j];
            }
            s += &self.d[i] * &t * &t;
        }
        s
    }
}

/// True when the first nonzero entry is positive.
pub(crate) fn lex_positive(v: &[BigInt]) -> bool {
    v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
}

pub(crate) fn primitive(v: &[BigInt]) -> bool {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    g == BigInt::from(1)
}
