//! Holomorphic and topological Lefschetz numbers of a purely non-symplectic
//! automorphism of order n, and the fixed point data compatible with both.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{cyclotomic_poly, FieldElem};
use crate::exactmat::ZPoly;
use crate::{Error, Result};

/// Isolated fixed points by local type `(i, j)` and genera of fixed curves.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FixedPointData {
    pub n: u64,
    /// `(i, j, m_ij)` sorted by `i`, zero counts omitted.
    pub points: Vec<(u64, u64, u64)>,
    /// Sorted.
    pub genera: Vec<u64>,
}

impl FixedPointData {
    /// Checks `1 < i ≤ j < n` and `i + j ≡ n + 1 (mod n)`, merges repeated types.
    pub fn new(n: u64, points: &[(u64, u64, u64)], genera: &[u64]) -> Result<FixedPointData> {
        if n < 2 {
            return Err(Error::Invalid(format!("order {n}")));
        }
        let mut pts: Vec<(u64, u64, u64)> = Vec::new();
        for &(i, j, m) in points {
            if i % n == 0 || j % n == 0 {
                return Err(Error::Invalid(format!("type ({i}, {j}) has a pole")));
            }
            if !(1 < i && i <= j && j < n) || (i + j) % n != (n + 1) % n {
                return Err(Error::Invalid(format!("type ({i}, {j}) is not admissible for n = {n}")));
            }
            if m == 0 {
                continue;
            }
            match pts.iter_mut().find(|p| p.0 == i) {
                Some(p) => p.2 += m,
                None => pts.push((i, j, m)),
            }
        }
        pts.sort_unstable();
        let mut genera = genera.to_vec();
        genera.sort_unstable();
        Ok(FixedPointData { n, points: pts, genera })
    }

    /// Number of isolated fixed points.
    pub fn point_count(&self) -> u64 {
        self.points.iter().map(|p| p.2).sum()
    }

    pub fn count(&self, i: u64) -> u64 {
        self.points.iter().find(|p| p.0 == i).map_or(0, |p| p.2)
    }
}

/// Traces of `g*` on the transcendental and Néron-Severi lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceData {
    pub trace_t: i64,
    pub trace_ns: i64,
}

/// `2 + Tr(g*|T) + Tr(g*|NS)`.
pub fn topological_euler(t: &TraceData) -> i64 {
    2 + t.trace_t + t.trace_ns
}

/// `M + Σ (2 − 2g_l)`.
pub fn euler_of_fixed(d: &FixedPointData) -> i64 {
    let m = d.point_count() as i64;
    m + d.genera.iter().map(|&g| 2 - 2 * g as i64).sum::<i64>()
}

struct Zeta {
    modulus: ZPoly,
    x: FieldElem,
    one: FieldElem,
}

impl Zeta {
    fn new(n: u64) -> Result<Zeta> {
        let modulus = cyclotomic_poly(n);
        let x = FieldElem::x(&modulus)?;
        let one = FieldElem::from_int(&modulus, 1)?;
        Ok(Zeta { modulus, x, one })
    }

    fn pow(&self, k: i64) -> FieldElem {
        self.x.pow(k).expect("ζ is a unit")
    }

    /// `1 / ((1 − ζ^i)(1 − ζ^j))`
    fn a(&self, i: u64, j: u64) -> FieldElem {
        let di = self.one.sub(&self.pow(i as i64));
        let dj = self.one.sub(&self.pow(j as i64));
        di.mul(&dj).inverse().expect("no pole")
    }

    /// `(1 + ζ)(1 − g) / (1 − ζ)²`
    fn b(&self, g: u64) -> FieldElem {
        let d = self.one.sub(&self.x);
        let num = self.one.add(&self.x).scale(&BigRational::from_integer(BigInt::one() - BigInt::from(g)));
        num.div(&d.mul(&d)).expect("n ≥ 2")
    }

    fn rhs(&self, conj: i64) -> FieldElem {
        self.one.add(&self.pow(conj))
    }
}

/// `Σ a_ij m_ij + Σ b(g_l) − (1 + ζ^{-1})` in Q(ζ_n), zero iff the
/// holomorphic formula holds.
pub fn holomorphic_residual(d: &FixedPointData) -> Result<FieldElem> {
    holomorphic_residual_with(d, -1)
}

/// As [`holomorphic_residual`] with right hand side `1 + ζ^conj`.
pub fn holomorphic_residual_with(d: &FixedPointData, conj: i64) -> Result<FieldElem> {
    let z = Zeta::new(d.n)?;
    let mut s = FieldElem::from_int(&z.modulus, 0)?;
    for &(i, j, m) in &d.points {
        if i % d.n == 0 || j % d.n == 0 {
            return Err(Error::Invalid(format!("type ({i}, {j}) has a pole")));
        }
        s = s.add(&z.a(i, j).scale(&BigRational::from_integer(m.into())));
    }
    for &g in &d.genera {
        s = s.add(&z.b(g));
    }
    Ok(s.sub(&z.rhs(conj)))
}

/// Search limits for [`solve_fixed_data`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointCaps {
    pub max_points: u64,
    pub max_curves: usize,
    pub max_genus: u64,
    /// Right hand side `1 + ζ^conj`.
    pub conj: i64,
}

impl Default for FixedPointCaps {
    fn default() -> Self {
        FixedPointCaps { max_points: 24, max_curves: 1, max_genus: 10, conj: -1 }
    }
}

const SEARCH_LIMIT: u128 = 50_000_000;

/// Admissible types `(i, n + 1 − i)` for the order n.
pub fn point_types(n: u64) -> Vec<(u64, u64)> {
    (2..n).filter_map(|i| {
        let j = n + 1 - i;
        (i <= j && j < n).then_some((i, j))
    })
    .collect()
}

fn genus_lists(max_curves: usize, max_genus: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..max_curves {
        let mut next = Vec::new();
        for l in &level {
            let lo = l.last().copied().unwrap_or(0);
            for g in lo..=max_genus {
                let mut v: Vec<u64> = l.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

fn binom(n: u64, k: u64) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > SEARCH_LIMIT * 1000 {
            return r;
        }
    }
    r
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

/// All fixed point data within `caps` that satisfy the holomorphic formula
/// and, when `trace` is given, the topological one. Sorted.
pub fn solve_fixed_data(n: u64, trace: Option<&TraceData>, caps: &FixedPointCaps) -> Result<Vec<FixedPointData>> {
    if n < 3 {
        return Err(Error::Invalid(format!("order {n}")));
    }
    let z = Zeta::new(n)?;
    let types = point_types(n);
    let u = types.len();
    let phi = z.modulus.degree().unwrap_or(0);
    let cols: Vec<Vec<BigRational>> = types.iter().map(|&(i, j)| padded(&z.a(i, j), phi)).collect();
    let mut out = Vec::new();
    for genera in genus_lists(caps.max_curves, caps.max_genus) {
        let mut rhs = z.rhs(caps.conj);
        for &g in &genera {
            rhs = rhs.sub(&z.b(g));
        }
        let rhs = padded(&rhs, phi);
        let mut m: Vec<Vec<BigRational>> = (0..phi)
            .map(|r| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c[r].clone()).collect();
                row.push(rhs[r].clone());
                row
            })
            .collect();
        let curve_euler: i64 = genera.iter().map(|&g| 2 - 2 * g as i64).sum();
        if let Some(t) = trace {
            let target = topological_euler(t) - curve_euler;
            if target < 0 || target as u64 > caps.max_points {
                continue;
            }
            let mut row = vec![BigRational::one(); u];
            row.push(BigRational::from_integer(target.into()));
            m.push(row);
        }
        let pivots = rref(&mut m, u + 1);
        if pivots.last() == Some(&u) {
            continue;
        }
        let free: Vec<usize> = (0..u).filter(|c| !pivots.contains(c)).collect();
        if binom(caps.max_points + free.len() as u64, free.len() as u64) > SEARCH_LIMIT {
            return Err(Error::BoundExceeded(format!(
                "{} free counts with up to {} points",
                free.len(),
                caps.max_points
            )));
        }
        let mut vals = vec![0u64; free.len()];
        search_free(&m, &pivots, &free, u, caps.max_points, 0, &mut vals, &mut |x| {
            let pts: Vec<(u64, u64, u64)> =
                types.iter().zip(x).filter(|(_, &c)| c > 0).map(|(&(i, j), &c)| (i, j, c)).collect();
            out.push(FixedPointData::new(n, &pts, &genera).expect("admissible types"));
        });
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn padded(e: &FieldElem, phi: usize) -> Vec<BigRational> {
    let mut c = e.coeffs().to_vec();
    c.resize(phi, BigRational::zero());
    c
}

#[allow(clippy::too_many_arguments)]
fn search_free<F: FnMut(&[u64])>(
    m: &[Vec<BigRational>],
    pivots: &[usize],
    free: &[usize],
    u: usize,
    cap: u64,
    k: usize,
    vals: &mut Vec<u64>,
    f: &mut F,
) {
    if k == free.len() {
        let mut x = vec![0u64; u];
        for (fi, &c) in free.iter().enumerate() {
            x[c] = vals[fi];
        }
        for (r, &p) in pivots.iter().enumerate() {
            let mut v = m[r][u].clone();
            for (fi, &c) in free.iter().enumerate() {
                if vals[fi] != 0 {
                    v -= &m[r][c] * BigRational::from_integer(vals[fi].into());
                }
            }
            if !v.is_integer() || v.is_negative() {
                return;
            }
            x[p] = match v.to_integer().to_u64() {
                Some(y) => y,
                None => return,
            };
        }
        if x.iter().sum::<u64>() <= cap {
            f(&x);
        }
        return;
    }
    let used: u64 = vals[..k].iter().sum();
    for v in 0..=cap - used {
        vals[k] = v;
        search_free(m, pivots, free, u, cap, k + 1, vals, f);
    }
    vals[k] = 0;
}
