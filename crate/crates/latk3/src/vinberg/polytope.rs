//! Finite volume test for a hyperbolic Coxeter polytope through the
//! extreme rays of its cone (double description).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{independent_rows, rat_rows};
use crate::lattice::IntegralLattice;

fn normalize(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g == BigInt::from(1) {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays of `{x : (x, e) ≤ 0 for all roots e}`, or `None` when the
/// roots do not span or there are more than 128 of them.
pub(crate) fn cone_rays(l: &IntegralLattice, roots: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let n = l.rank();
    let m = roots.len();
    if m > 128 {
        return None;
    }
    let a: Vec<Vec<BigInt>> = roots.iter().map(|e| l.gram().vec_mul(e)).collect();
    let basis = independent_rows(&a);
    if basis.len() != n {
        return None;
    }
    let ab: Vec<Vec<BigInt>> = basis.iter().map(|&i| a[i].clone()).collect();
    // columns of −A_B^{-1}
    let inv = rat_rows(&ab).inverse().ok()?;
    let mut rays: Vec<(Vec<BigInt>, u128)> = Vec::with_capacity(n);
    for j in 0..n {
        let col: Vec<_> = (0..n).map(|i| -inv.get(i, j).clone()).collect();
        let den = col.iter().fold(BigInt::from(1), |d, x| d.lcm(x.denom()));
        let v: Vec<BigInt> = col.iter().map(|x| (x * &den).to_integer()).collect();
        let mut z = 0u128;
        for (k, &i) in basis.iter().enumerate() {
            if k != j {
                z |= 1 << i;
            }
        }
        rays.push((normalize(v), z));
    }
    for i in 0..m {
        if basis.contains(&i) {
            continue;
        }
        let s: Vec<BigInt> = rays.iter().map(|(r, _)| dot(r, &a[i])).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&k| s[k].is_positive()).collect();
        if plus.is_empty() {
            for (k, (_, z)) in rays.iter_mut().enumerate() {
                if s[k].is_zero() {
                    *z |= 1 << i;
                }
            }
            continue;
        }
        let minus: Vec<usize> = (0..rays.len()).filter(|&k| s[k].is_negative()).collect();
        let mut next: Vec<(Vec<BigInt>, u128)> = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let common = rays[p].1 & rays[q].1;
                if (common.count_ones() as usize) + 2 < n {
                    continue;
                }
                let adjacent =
                    (0..rays.len()).all(|r| r == p || r == q || rays[r].1 & common != common);
                if !adjacent {
                    continue;
                }
                let v: Vec<BigInt> =
                    rays[q].0.iter().zip(&rays[p].0).map(|(x, y)| &s[p] * x - &s[q] * y).collect();
                next.push((normalize(v), common | 1 << i));
            }
        }
        for (k, (r, z)) in rays.iter().enumerate() {
            if s[k].is_zero() {
                next.push((r.clone(), z | 1 << i));
            } else if s[k].is_negative() {
                next.push((r.clone(), *z));
            }
        }
        rays = next;
    }
    Some(rays.into_iter().map(|(r, _)| r).collect())
}

/// Every vertex of the polytope cut out by the roots lies in the closure
/// of hyperbolic space.
pub(crate) fn has_finite_volume(l: &IntegralLattice, roots: &[Vec<BigInt>]) -> bool {
    match cone_rays(l, roots) {
        Some(rays) => rays.iter().all(|r| !l.inner(r, r).is_negative()),
        None => false,
    }
}
