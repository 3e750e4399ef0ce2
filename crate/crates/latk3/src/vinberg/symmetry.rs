//! Symmetries of a fundamental root system and their action on the
//! discriminant group.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::{independent_rows, rat_rows, Chamber};
use crate::exactmat::{IntMatrix, RatMatrix};
use crate::finquad;
use crate::{Error, Result};

/// `p[i]` is the image of root i.
pub type Permutation = Vec<usize>;

/// Permutations of the fundamental roots that come from isometries of L.
#[derive(Clone, Debug)]
pub struct ChamberSymmetryGroup {
    pub chamber: Chamber,
    /// Generators, each with its matrix acting on rows.
    pub generators: Vec<(Permutation, IntMatrix)>,
    pub order: BigInt,
    /// Orbit lengths along the stabilizer chain of roots 0, 1, ...
    pub orbit_lengths: Vec<usize>,
}

struct Search<'a> {
    h: Vec<Vec<i64>>,
    key: Vec<(i64, Vec<i64>)>,
    roots: &'a [Vec<BigInt>],
    basis: Vec<usize>,
    binv: RatMatrix,
}

impl<'a> Search<'a> {
    fn new(c: &'a Chamber) -> Result<Search<'a>> {
        let m = c.len();
        let h: Vec<Vec<i64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| c.gram.get(i, j).to_i64().ok_or_else(|| Error::OutOfRange("root inner product".into())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let key = h
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut s = r.clone();
                s.sort_unstable();
                (r[i], s)
            })
            .collect();
        let basis = independent_rows(&c.roots);
        if basis.len() != c.lattice.rank() {
            return Err(Error::Invalid("fundamental roots do not span".into()));
        }
        let b: Vec<Vec<BigInt>> = basis.iter().map(|&i| c.roots[i].clone()).collect();
        let binv = rat_rows(&b).inverse()?;
        Ok(Search { h, key, roots: &c.roots, basis, binv })
    }

    fn matrix(&self, p: &[usize]) -> Option<IntMatrix> {
        let img: Vec<Vec<BigInt>> = self.basis.iter().map(|&i| self.roots[p[i]].clone()).collect();
        self.binv.mul(&rat_rows(&img)).to_int()
    }

    /// An admissible permutation extending `prefix`.
    fn extend(&self, prefix: &[usize]) -> Option<(Permutation, IntMatrix)> {
        let m = self.h.len();
        let mut p: Vec<usize> = prefix.to_vec();
        let mut used = vec![false; m];
        for (i, &j) in prefix.iter().enumerate() {
            if used[j] || self.key[i] != self.key[j] {
                return None;
            }
            for k in 0..i {
                if self.h[i][k] != self.h[j][p[k]] {
                    return None;
                }
            }
            used[j] = true;
        }
        self.rec(&mut p, &mut used)
    }

    fn rec(&self, p: &mut Vec<usize>, used: &mut [bool]) -> Option<(Permutation, IntMatrix)> {
        let m = self.h.len();
        let i = p.len();
        if i == m {
            return self.matrix(p).map(|f| (p.clone(), f));
        }
        for j in 0..m {
            if used[j] || self.key[i] != self.key[j] {
                continue;
            }
            if (0..i).any(|k| self.h[i][k] != self.h[j][p[k]]) {
                continue;
            }
            used[j] = true;
            p.push(j);
            if let Some(r) = self.rec(p, used) {
                return Some(r);
            }
            p.pop();
            used[j] = false;
        }
        None
    }
}

/// All symmetries of the chamber, through a stabilizer chain.
pub fn chamber_symmetries(c: &Chamber) -> Result<ChamberSymmetryGroup> {
    let s = Search::new(c)?;
    let m = c.len();
    let mut generators: Vec<(Permutation, IntMatrix)> = Vec::new();
    let mut order = BigInt::one();
    let mut orbit_lengths = Vec::with_capacity(m);
    for i in 0..m {
        let prefix: Vec<usize> = (0..i).collect();
        let mut level: Vec<Permutation> = Vec::new();
        let mut orbit: BTreeSet<usize> = BTreeSet::from([i]);
        for j in i + 1..m {
            if orbit.contains(&j) || s.key[i] != s.key[j] {
                continue;
            }
            let mut pre = prefix.clone();
            pre.push(j);
            if let Some((p, f)) = s.extend(&pre) {
                level.push(p.clone());
                generators.push((p, f));
                // close the orbit under this level's generators
                let mut queue: VecDeque<usize> = orbit.iter().copied().collect();
                while let Some(x) = queue.pop_front() {
                    for g in &level {
                        if orbit.insert(g[x]) {
                            queue.push_back(g[x]);
                        }
                    }
                }
            }
        }
        order *= orbit.len();
        orbit_lengths.push(orbit.len());
    }
    Ok(ChamberSymmetryGroup { chamber: c.clone(), generators, order, orbit_lengths })
}

fn compose(a: &[usize], b: &[usize]) -> Permutation {
    // first a, then b
    a.iter().map(|&x| b[x]).collect()
}

impl ChamberSymmetryGroup {
    /// The matrix of an admissible permutation.
    pub fn matrix_of(&self, p: &[usize]) -> Result<Option<IntMatrix>> {
        let s = Search::new(&self.chamber)?;
        Ok(s.extend(p).filter(|(q, _)| q == p).map(|(_, f)| f))
    }

    /// Every element, when there are at most `limit`.
    pub fn elements(&self, limit: usize) -> Result<Vec<Permutation>> {
        if self.order > BigInt::from(limit) {
            return Err(Error::BoundExceeded(format!("group of order {}", self.order)));
        }
        let id: Permutation = (0..self.chamber.len()).collect();
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for (g, _) in &self.generators {
                let y = compose(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<Permutation> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }
}

/// Image, kernel and cokernel of `Γ(L) → O(q_L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscImage {
    pub group_order: BigInt,
    pub image_order: usize,
    pub kernel_order: BigInt,
    /// `|O(q_L)|` when it was computed.
    pub orthogonal_order: Option<usize>,
    /// `[O(q_L) : image]`.
    pub cokernel_order: Option<usize>,
    pub minus_id_in_image: bool,
}

type DiscMap = Vec<Vec<i64>>;

fn apply(m: &DiscMap, x: &[i64], d: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; d.len()];
    for (xi, row) in x.iter().zip(m) {
        if *xi == 0 {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            *o += xi * r;
        }
    }
    out.iter().zip(d).map(|(o, di)| o.rem_euclid(*di)).collect()
}

/// `oq_bound` limits the brute force computation of `O(q_L)`; `None` skips it.
pub fn chamber_to_disc(g: &ChamberSymmetryGroup, oq_bound: Option<u64>) -> Result<DiscImage> {
    let l = &g.chamber.lattice;
    let dg = l.disc_group();
    let d: Vec<i64> = dg
        .invariants()
        .iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::OutOfRange("discriminant invariant".into())))
        .collect::<Result<_>>()?;
    let k = d.len();
    let mut gens: Vec<DiscMap> = Vec::new();
    for (_, f) in &g.generators {
        let fr = f.to_rat();
        let mut m = Vec::with_capacity(k);
        for v in dg.generators() {
            let c = dg.reduce(&fr.vec_mul(v))?;
            m.push(c.iter().map(|x| x.to_i64().expect("reduced")).collect());
        }
        gens.push(m);
    }
    let id: DiscMap = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
    let mut seen: HashSet<DiscMap> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for gm in &gens {
            let y: DiscMap = x.iter().map(|row| apply(gm, row, &d)).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let minus: DiscMap =
        (0..k).map(|i| (0..k).map(|j| if i == j { (-1i64).rem_euclid(d[i]) } else { 0 }).collect()).collect();
    let image_order = seen.len();
    let kernel_order = &g.order / BigInt::from(image_order);
    let orthogonal_order = match oq_bound {
        None => None,
        Some(b) => {
            let q = finquad::disc_form(l)?;
            match finquad::orthogonal_group_q(&q, b) {
                Ok(v) => Some(v.len()),
                Err(Error::BoundExceeded(_)) => None,
                Err(e) => return Err(e),
            }
        }
    };
    Ok(DiscImage {
        group_order: g.order.clone(),
        image_order,
        kernel_order,
        orthogonal_order,
        cokernel_order: orthogonal_order.map(|o| o / image_order),
        minus_id_in_image: seen.contains(&minus),
    })
}
