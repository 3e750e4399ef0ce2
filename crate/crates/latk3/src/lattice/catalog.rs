//! Named lattices. Root lattices are negative definite.

use crate::exactmat::IntMatrix;
use crate::{Error, Result};

use super::IntegralLattice;

pub fn hyperbolic_plane() -> IntegralLattice {
    IntegralLattice::from_i64(&[vec![0, 1], vec![1, 0]]).with_label("U")
}

/// `[[2,1],[1,-2]]`, of determinant -5.
pub fn h5() -> IntegralLattice {
    IntegralLattice::from_i64(&[vec![2, 1], vec![1, -2]]).with_label("H5")
}

fn negative_cartan(n: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(a, b) in edges {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    IntMatrix::from_i64(&g)
}

fn chain(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

pub fn a(n: usize) -> Result<IntegralLattice> {
    if n == 0 {
        return Err(Error::UnknownName("A0".into()));
    }
    Ok(IntegralLattice::new(negative_cartan(n, &chain(n)))?.with_label(format!("A{n}")))
}

pub fn d(n: usize) -> Result<IntegralLattice> {
    if n < 2 {
        return Err(Error::UnknownName(format!("D{n}")));
    }
    let mut edges = chain(n - 1);
    if n >= 3 {
        edges.push((n - 3, n - 1));
    }
    Ok(IntegralLattice::new(negative_cartan(n, &edges))?.with_label(format!("D{n}")))
}

pub fn e(n: usize) -> Result<IntegralLattice> {
    if !(6..=8).contains(&n) {
        return Err(Error::UnknownName(format!("E{n}")));
    }
    let mut edges = chain(n - 1);
    edges.push((2, n - 1));
    Ok(IntegralLattice::new(negative_cartan(n, &edges))?.with_label(format!("E{n}")))
}

/// Look up `U`, `H5`, `A<n>`, `D<n>`, `E6`, `E7`, `E8`.
pub fn by_name(name: &str) -> Result<IntegralLattice> {
    let unknown = || Error::UnknownName(name.to_string());
    match name {
        "U" => return Ok(hyperbolic_plane()),
        "H5" => return Ok(h5()),
        _ => {}
    }
    let mut chars = name.chars();
    let head = chars.next().ok_or_else(unknown)?;
    let rest = chars.as_str();
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return Err(unknown());
    }
    let n: usize = rest.parse().map_err(|_| unknown())?;
    if n > 64 {
        return Err(unknown());
    }
    match head {
        'A' => a(n),
        'D' => d(n),
        'E' => e(n),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn determinants() {
        let cases: &[(&str, i64)] =
            &[("A1", -2), ("A2", 3), ("A4", 5), ("D4", 4), ("D5", -4), ("E6", 3), ("E7", -2), ("E8", 1), ("U", -1), ("H5", -5)];
        for &(name, det) in cases {
            assert_eq!(by_name(name).unwrap().det(), BigInt::from(det), "{name}");
        }
    }

    #[test]
    fn root_lattices_negative_definite() {
        for name in ["A3", "D6", "E6", "E7", "E8"] {
            let l = by_name(name).unwrap();
            assert_eq!(l.signature(), (0, l.rank()));
        }
    }

    #[test]
    fn unknown_names() {
        for name in ["", "A0", "E9", "D1", "X3", "A01", "Foo"] {
            assert!(matches!(by_name(name), Err(Error::UnknownName(_))), "{name}");
        }
    }
}
