//! Integer and rational matrices with the normal forms the rest of the crate
//! is built on.

pub mod modp;
pub mod num;
pub mod poly;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub use poly::{QPoly, ZPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Panics on ragged input; meant for literals.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let big = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(big).expect("ragged literal matrix")
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_i64()).collect()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, a: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * a).collect() }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                out[j] += vi * self.get(i, j);
            }
        }
        out
    }

    /// The bilinear value v·M·wᵀ.
    pub fn bilinear(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        let vm = self.vec_mul(v);
        vm.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.data[(r0 + i) * c + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect::<Vec<_>>();
        let mut m = IntMatrix::from_rows(rows).expect("rows of equal length");
        if idx.is_empty() {
            m.cols = self.cols;
        }
        m
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(int_rat).collect() }
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> IntMatrix {
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.data[(i - r0) * (c1 - c0) + j - c0] = self.get(i, j).clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {}x{} matrix", data.len(), rows, cols)));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn vec_mul(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigRational::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                out[j] += vi * self.get(i, j);
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.to_integer()).collect() })
    }

    /// Least common multiple of all denominators.
    pub fn denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&i| !a.get(i, c).is_zero()).ok_or(Error::Degenerate)?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a.get(c, c).clone();
            for j in 0..n {
                a.data[c * n + j] /= &piv;
                inv.data[c * n + j] /= &piv;
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let k = a.get(i, c).clone();
                if k.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = &k * &a.data[c * n + j];
                    a.data[i * n + j] -= v;
                    let w = &k * &inv.data[c * n + j];
                    inv.data[i * n + j] -= w;
                }
            }
        }
        Ok(inv)
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Row Hermite normal form `h = u·m` with `u` unimodular. Pivots are
/// positive and the entries above each pivot lie in `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.rows {
                if !h.get(i, c).is_zero() && best.map_or(true, |b| h.get(i, c).abs() < h.get(b, c).abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..m.rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -h.get(i, c).div_floor(h.get(r, c));
                h.add_row(i, r, &q);
                u.add_row(i, r, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h.get(i, c).div_floor(h.get(r, c));
            h.add_row(i, r, &q);
            u.add_row(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Basis in Hermite normal form of the Z-span of `gens` (rows of length
/// `dim`). When `modulus` is given the lattice is assumed to contain
/// `modulus·Z^dim`, which keeps intermediate entries small.
pub fn span_hnf(gens: &[Vec<BigInt>], dim: usize, modulus: Option<&BigInt>) -> IntMatrix {
    let mut piv: Vec<Option<Vec<BigInt>>> = vec![None; dim];
    let reduce = |v: &mut Vec<BigInt>, start: usize| {
        if let Some(md) = modulus {
            for x in v.iter_mut().skip(start) {
                *x = x.mod_floor(md);
            }
        }
    };
    if let Some(md) = modulus {
        for (i, slot) in piv.iter_mut().enumerate() {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = md.clone();
            *slot = Some(e);
        }
    }
    for mut v in gens.iter().cloned() {
        assert_eq!(v.len(), dim);
        reduce(&mut v, 0);
        let mut c = 0;
        while c < dim {
            if v[c].is_zero() {
                c += 1;
                continue;
            }
            match piv[c].take() {
                None => {
                    if v[c].is_negative() {
                        for x in v.iter_mut() {
                            *x = -&*x;
                        }
                    }
                    piv[c] = Some(v);
                    break;
                }
                Some(mut p) => {
                    let eg = p[c].extended_gcd(&v[c]);
                    let (g, s, t) = (eg.gcd, eg.x, eg.y);
                    let a = &p[c] / &g;
                    let b = &v[c] / &g;
                    let mut newp = vec![BigInt::zero(); dim];
                    let mut newv = vec![BigInt::zero(); dim];
                    for j in c..dim {
                        newp[j] = &s * &p[j] + &t * &v[j];
                        newv[j] = &a * &v[j] - &b * &p[j];
                    }
                    p = newp;
                    v = newv;
                    reduce(&mut p, c + 1);
                    reduce(&mut v, c + 1);
                    if p[c].is_negative() {
                        for x in p.iter_mut() {
                            *x = -&*x;
                        }
                    }
                    piv[c] = Some(p);
                    c += 1;
                }
            }
        }
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut pivcols = Vec::new();
    for (c, p) in piv.into_iter().enumerate() {
        if let Some(p) = p {
            rows.push(p);
            pivcols.push(c);
        }
    }
    for k in 0..rows.len() {
        let c = pivcols[k];
        for i in 0..k {
            let q = rows[i][c].div_floor(&rows[k][c]);
            if !q.is_zero() {
                let pk = rows[k].clone();
                for j in c..dim {
                    rows[i][j] -= &q * &pk[j];
                }
            }
        }
    }
    if rows.is_empty() {
        return IntMatrix::zeros(0, dim);
    }
    IntMatrix::from_rows(rows).expect("equal length rows")
}

/// Smith normal form: `u·m·v = diag(d)` with `d_i | d_{i+1}` and the zero
/// entries last. `d` has length `min(rows, cols)`.
pub fn snf(m: &IntMatrix) -> (Vec<BigInt>, IntMatrix, IntMatrix) {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let k = m.rows.min(m.cols);
    for t in 0..k {
        // pick the smallest nonzero entry of the trailing block
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m.rows {
                for j in t..m.cols {
                    let x = a.get(i, j);
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap_rows(t, bi);
            u.swap_rows(t, bi);
            a.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..m.rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = a.get(i, t).div_mod_floor(a.get(t, t));
                let q = -q;
                a.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !r.is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..m.cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = a.get(t, j).div_mod_floor(a.get(t, t));
                let q = -q;
                a.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !r.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let mut bad: Option<usize> = None;
            'outer: for i in t + 1..m.rows {
                for j in t + 1..m.cols {
                    if !a.get(i, j).is_multiple_of(a.get(t, t)) {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    let d = (0..k).map(|i| a.get(i, i).clone()).collect();
    (d, u, v)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    Ok(sign * a.get(n - 1, n - 1))
}

/// Determinant of a rational matrix.
pub fn det_rat(m: &RatMatrix) -> Result<BigRational> {
    if m.rows != m.cols {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
            return Ok(BigRational::zero());
        };
        if p != c {
            for j in 0..n {
                a.data.swap(p * n + j, c * n + j);
            }
            d = -d;
        }
        let piv = a.get(c, c).clone();
        d *= &piv;
        for i in c + 1..n {
            let k = a.get(i, c) / &piv;
            if k.is_zero() {
                continue;
            }
            for j in c..n {
                let v = &k * a.get(c, j);
                a.data[i * n + j] -= v;
            }
        }
    }
    Ok(d)
}

/// Signature `(n_plus, n_minus)` of a nondegenerate symmetric matrix by
/// symmetric congruence diagonalisation over the rationals.
pub fn signature(m: &IntMatrix) -> Result<(usize, usize)> {
    let (p, n, z) = inertia(&m.to_rat())?;
    if z > 0 {
        return Err(Error::Degenerate);
    }
    Ok((p, n))
}

/// `(n_plus, n_minus, n_zero)` of a symmetric rational matrix.
pub fn inertia(m: &RatMatrix) -> Result<(usize, usize, usize)> {
    if m.rows != m.cols {
        return Err(Error::Dimension("signature of a non-square matrix".into()));
    }
    let n = m.rows;
    let mut a = m.clone();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        let diag = (k..n).find(|&i| !a.get(i, i).is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                // all remaining diagonal entries vanish: use an off-diagonal one
                let mut found = None;
                'f: for i in k..n {
                    for j in i + 1..n {
                        if !a.get(i, j).is_zero() {
                            found = Some((i, j));
                            break 'f;
                        }
                    }
                }
                let Some((i, j)) = found else { break };
                // e_i <- e_i + e_j gives diagonal 2 a_ij
                for c in 0..n {
                    let v = a.get(j, c).clone();
                    a.data[i * n + c] += v;
                }
                for r in 0..n {
                    let v = a.get(r, j).clone();
                    a.data[r * n + i] += v;
                }
                i
            }
        };
        if p != k {
            for c in 0..n {
                a.data.swap(p * n + c, k * n + c);
            }
            for r in 0..n {
                a.data.swap(r * n + p, r * n + k);
            }
        }
        let piv = a.get(k, k).clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = a.get(i, k) / &piv;
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let v = &f * a.get(k, c);
                a.data[i * n + c] -= v;
            }
            for r in k..n {
                let v = &f * a.get(r, k);
                a.data[r * n + i] -= v;
            }
        }
        k += 1;
    }
    Ok((pos, neg, n - pos - neg))
}

/// Basis (rows) of the integer kernel `{x : m·xᵀ = 0}`; the result is the
/// saturated sublattice, reduced to Hermite normal form.
pub fn kernel_saturated(m: &IntMatrix) -> IntMatrix {
    let t = m.transpose();
    let (h, u) = hnf(&t);
    let rows: Vec<Vec<BigInt>> =
        (0..h.rows()).filter(|&i| h.row(i).iter().all(|x| x.is_zero())).map(|i| u.row(i).to_vec()).collect();
    span_hnf(&rows, m.cols, None)
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    let (h, _) = hnf(m);
    (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
}

/// Monic characteristic polynomial det(x·I − m).
pub fn charpoly(m: &IntMatrix) -> Result<ZPoly> {
    if !m.is_square() {
        return Err(Error::Dimension("characteristic polynomial of a non-square matrix".into()));
    }
    let n = m.rows;
    // Faddeev-LeVerrier; every division below is exact
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk);
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        mk = next;
        let am = m.mul(&mk);
        let tr: BigInt = (0..n).map(|i| am.get(i, i).clone()).sum();
        coeffs[n - k] = -tr / BigInt::from(k);
    }
    Ok(ZPoly::new(coeffs))
}

/// `p(m)` for a square integer matrix.
pub fn poly_at(p: &ZPoly, m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    let mut acc = IntMatrix::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(m).add(&IntMatrix::identity(n).scale(c));
    }
    acc
}

/// Solve `x·a = b` for a row vector x over the rationals, if a solution exists.
pub fn solve_left(a: &RatMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    // transpose to the column system aᵀ xᵀ = bᵀ
    let at = a.transpose();
    let (r, c) = (at.rows, at.cols);
    let mut aug = RatMatrix::zeros(r, c + 1);
    for i in 0..r {
        for j in 0..c {
            aug.set(i, j, at.get(i, j).clone());
        }
        aug.set(i, c, b[i].clone());
    }
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..c {
        let Some(p) = (row..r).find(|&i| !aug.get(i, col).is_zero()) else { continue };
        for j in 0..=c {
            aug.data.swap(p * (c + 1) + j, row * (c + 1) + j);
        }
        let piv = aug.get(row, col).clone();
        for j in 0..=c {
            aug.data[row * (c + 1) + j] /= &piv;
        }
        for i in 0..r {
            if i == row {
                continue;
            }
            let f = aug.get(i, col).clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..=c {
                let v = &f * &aug.data[row * (c + 1) + j];
                aug.data[i * (c + 1) + j] -= v;
            }
        }
        pivots.push(col);
        row += 1;
        if row == r {
            break;
        }
    }
    for i in row..r {
        if !aug.get(i, c).is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); c];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = aug.get(i, c).clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn is_unimodular(u: &IntMatrix) -> bool {
        det(u).unwrap().abs().is_one()
    }

    #[test]
    fn hnf_small() {
        let a = m(&[vec![2, 4], vec![3, 3]]);
        let (h, u) = hnf(&a);
        // (1,7) is not in the row lattice: (1,7) - (1,5) = (0,2)
        assert_eq!(h, m(&[vec![1, 5], vec![0, 6]]));
        assert_eq!(u.mul(&a), h);
        assert!(is_unimodular(&u));
    }

    #[test]
    fn hnf_degenerate() {
        let (h, _) = hnf(&IntMatrix::identity(3));
        assert_eq!(h, IntMatrix::identity(3));
        let (h, _) = hnf(&IntMatrix::zeros(2, 2));
        assert!(h.is_zero());
    }

    #[test]
    fn span_hnf_matches_hnf() {
        let a = m(&[vec![4, 6, 2], vec![2, 2, 8], vec![6, 8, 10]]);
        let (h, _) = hnf(&a);
        let hrows: Vec<Vec<BigInt>> = h.to_rows().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        assert_eq!(span_hnf(&a.to_rows(), 3, None).to_rows(), hrows);
    }

    #[test]
    fn span_hnf_modular() {
        let gens = vec![vec![BigInt::from(0), BigInt::from(2)], vec![BigInt::from(3), BigInt::from(1)]];
        let md = BigInt::from(12);
        let mut all = gens.clone();
        all.push(vec![md.clone(), BigInt::zero()]);
        all.push(vec![BigInt::zero(), md.clone()]);
        let (h, _) = hnf(&IntMatrix::from_rows(all).unwrap());
        assert_eq!(span_hnf(&gens, 2, Some(&md)), h.submatrix(0, 2, 0, 2));
        assert_eq!(span_hnf(&[], 2, Some(&md)), IntMatrix::diagonal(&[md.clone(), md]));
    }

    #[test]
    fn snf_examples() {
        let (d, _, _) = snf(&m(&[vec![2, 0], vec![0, 18]]));
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(18)]);
        let a = m(&[vec![2, 1], vec![1, -4]]);
        let (d, u, v) = snf(&a);
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(9)]);
        assert_eq!(u.mul(&a).mul(&v), IntMatrix::diagonal(&d));
        let (d, _, _) = snf(&m(&[vec![0]]));
        assert_eq!(d, vec![BigInt::zero()]);
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&m(&[vec![0, 1], vec![1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(det(&m(&[vec![2, 1], vec![1, -4]])).unwrap(), BigInt::from(-9));
        assert!(det(&m(&[vec![1, 2]])).is_err());
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&m(&[vec![0, 1], vec![1, 0]])).unwrap(), (1, 1));
        assert_eq!(signature(&m(&[vec![1, 1], vec![1, 1]])), Err(Error::Degenerate));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_saturated(&m(&[vec![1, 1]])), m(&[vec![1, -1]]));
        assert_eq!(kernel_saturated(&m(&[vec![2, 2]])), m(&[vec![1, -1]]));
        assert_eq!(kernel_saturated(&m(&[vec![1, 2], vec![3, 4]])).rows(), 0);
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(charpoly(&IntMatrix::identity(2)).unwrap(), ZPoly::from_i64(&[1, -2, 1]));
        assert_eq!(charpoly(&m(&[vec![0, -1], vec![1, -1]])).unwrap(), ZPoly::from_i64(&[1, 1, 1]));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[vec![2, 1], vec![1, -4]]).to_rat();
        assert_eq!(a.mul(&a.inverse().unwrap()), RatMatrix::identity(2));
    }
}
