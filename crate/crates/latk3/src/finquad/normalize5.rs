//! Normal forms of nondegenerate forms on F_5[X]/(X-1)^3 for which
//! multiplication by X is an isometry.

use super::{Element, TorsionQuadraticForm};
use crate::{Error, Result};

const NORMAL_FORMS: [[[i64; 3]; 3]; 2] = [
    [[0, 2, -1], [2, 1, 0], [-1, 0, 0]],
    [[0, 1, 2], [1, -2, 0], [2, 0, 0]],
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F5Normalization {
    /// 0 for the square determinant form, 1 for the other.
    pub case: usize,
    pub det_is_square: bool,
    /// The module generator; the basis is `v, (X-1)v, (X-1)^2 v`.
    pub v: Element,
    pub basis: Vec<Element>,
    /// Gram of `5·b` in the new basis, entries in `-2..=2`.
    pub gram: [[i64; 3]; 3],
}

fn apply(f: &TorsionQuadraticForm, m: &[Element], x: &[i64]) -> Element {
    let mut y = f.zero();
    for (c, img) in x.iter().zip(m) {
        y = f.add(&y, &f.scalar(*c, img));
    }
    y
}

fn fp_b(f: &TorsionQuadraticForm, x: &[i64], y: &[i64]) -> i64 {
    let v = f.b(x, y) as i128 * 5 / f.den() as i128;
    let r = v.rem_euclid(5) as i64;
    if r > 2 {
        r - 5
    } else {
        r
    }
}

/// `x_action` lists the images of the generators under multiplication by X.
pub fn normalize_f5_module_form(f: &TorsionQuadraticForm, x_action: &[Element]) -> Result<F5Normalization> {
    if f.rank() != 3 || !f.is_elementary(5) || !f.is_even() {
        return Err(Error::Invalid("expected an even form on F_5^3".into()));
    }
    if x_action.len() != 3 || x_action.iter().any(|r| r.len() != 3) {
        return Err(Error::Dimension("X must be given by three images".into()));
    }
    let xs: Vec<Element> = x_action.iter().map(|r| f.reduce(r)).collect();
    let gens: Vec<Element> = (0..3)
        .map(|i| {
            let mut e = f.zero();
            e[i] = 1;
            e
        })
        .collect();
    let g = f.fp_gram(5)?;
    if super::det_mod_p(&g, 5) == 0 {
        return Err(Error::Degenerate);
    }
    for i in 0..3 {
        if f.q(&xs[i]) != f.q(&gens[i]) || (0..3).any(|j| f.b(&xs[i], &xs[j]) != f.b(&gens[i], &gens[j])) {
            return Err(Error::Invalid("multiplication by X is not an isometry".into()));
        }
    }
    let nil: Vec<Element> = (0..3).map(|i| f.add(&xs[i], &f.neg(&gens[i]))).collect();
    let n = |x: &[i64]| apply(f, &nil, x);
    if gens.iter().any(|e| n(&n(&n(e))) != f.zero()) || gens.iter().all(|e| n(&n(e)) == f.zero()) {
        return Err(Error::Invalid("the module is not F_5[X]/(X-1)^3".into()));
    }
    for v in f.elements(125)? {
        let basis = vec![v.clone(), n(&v), n(&n(&v))];
        let mut gram = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                gram[i][j] = fp_b(f, &basis[i], &basis[j]);
            }
        }
        if let Some(case) = NORMAL_FORMS.iter().position(|nf| *nf == gram) {
            return Ok(F5Normalization { case, det_is_square: case == 0, v, basis, gram });
        }
    }
    Err(Error::Invalid("no normalizing generator found".into()))
}
