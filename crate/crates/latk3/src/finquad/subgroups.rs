//! Subgroups of a finite abelian group of a prescribed order.

use std::collections::HashSet;

use num_traits::Zero;

use super::{Element, TorsionQuadraticForm};
use crate::exactmat::num;
use crate::{Error, Result};

fn index_of(orders: &[i64], x: &[i64]) -> usize {
    x.iter().zip(orders).fold(0usize, |acc, (c, d)| acc * *d as usize + *c as usize)
}

/// Subgroups of a p-group (given by its form) of order `p^a`, each with a
/// list of generators, in a deterministic order.
fn p_subgroups(f: &TorsionQuadraticForm, p: i64, a: u32, bound: u64) -> Result<Vec<Vec<Element>>> {
    let els = f.elements(bound)?;
    let n = els.len();
    let words = n.div_ceil(64);
    let has = |set: &[u64], i: usize| set[i / 64] >> (i % 64) & 1 == 1;
    let mut zero = vec![0u64; words];
    zero[0] |= 1;
    let mut level: Vec<(Vec<u64>, Vec<Element>)> = vec![(zero, Vec::new())];
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for _ in 0..a {
        let mut next = Vec::new();
        for (h, gens) in &level {
            let members: Vec<usize> = (0..n).filter(|&i| has(h, i)).collect();
            let mut done = h.clone();
            for x in 0..n {
                if has(&done, x) || !has(h, index_of(f.orders(), &f.scalar(p, &els[x]))) {
                    continue;
                }
                let mut g = h.clone();
                let mut kx = f.zero();
                for _ in 1..p {
                    kx = f.add(&kx, &els[x]);
                    for &m in &members {
                        let y = index_of(f.orders(), &f.add(&els[m], &kx));
                        g[y / 64] |= 1 << (y % 64);
                    }
                }
                for (d, w) in done.iter_mut().zip(&g) {
                    *d |= w;
                }
                if seen.insert(g.clone()) {
                    let mut ng = gens.clone();
                    ng.push(els[x].clone());
                    next.push((g, ng));
                }
            }
        }
        level = next;
    }
    Ok(level.into_iter().map(|(_, g)| g).collect())
}

/// All subgroups of order `order`, as generator lists in ambient coordinates.
pub fn subgroups_of_order(f: &TorsionQuadraticForm, order: u64, bound: u64) -> Result<Vec<Vec<Element>>> {
    if order == 0 {
        return Err(Error::Invalid("subgroup order 0".into()));
    }
    let total = f.order();
    if !(total % order).is_zero() {
        return Ok(Vec::new());
    }
    let mut parts: Vec<Vec<Vec<Element>>> = Vec::new();
    for (p, a) in num::factor(order) {
        let (fp, embed) = f.primary_part(p);
        let subs = p_subgroups(&fp, p as i64, a, bound)?;
        let mapped = subs
            .into_iter()
            .map(|gens| {
                gens.iter()
                    .map(|c| {
                        let mut y = f.zero();
                        for (cj, e) in c.iter().zip(&embed) {
                            y = f.add(&y, &f.scalar(*cj, e));
                        }
                        y
                    })
                    .collect::<Vec<Element>>()
            })
            .collect();
        parts.push(mapped);
    }
    let mut out: Vec<Vec<Element>> = vec![Vec::new()];
    for part in parts {
        let mut next = Vec::with_capacity(out.len() * part.len());
        for base in &out {
            for add in &part {
                let mut g = base.clone();
                g.extend(add.iter().cloned());
                next.push(g);
            }
        }
        out = next;
    }
    Ok(out)
}
