#![allow(dead_code)]

use latk3::cyclo::{parse_field_elem, principal_cn, twist_lattice, unit_twist_representatives, CnLattice, FieldElem};
use latk3::exactmat::IntMatrix;
use latk3::glue::{build_overlattice, enumerate_equivariant_glue_maps, enumerate_glue_maps, glue_isometry, GluedIsometry, PrimitiveExtension};
use latk3::lattice::parse_lattice_expr;

pub const BOUND: u64 = 100_000;

/// The unit multiple of `a` whose twist of the principal c5 lattice has the signature.
pub fn twist_with_signature(a: &str, sig: (usize, usize)) -> CnLattice {
    let l0 = principal_cn(5).unwrap();
    let a = parse_field_elem(a, l0.modulus()).unwrap();
    for u in unit_twist_representatives(5).unwrap() {
        let t = twist_lattice(&l0, &u.mul(&a)).unwrap();
        if t.lattice().signature() == sig {
            return t;
        }
    }
    panic!("no unit gives signature {sig:?}");
}

pub fn elem(a: &str) -> FieldElem {
    parse_field_elem(a, principal_cn(5).unwrap().modulus()).unwrap()
}

/// `T = L0(sr)` of signature (2, 2) glued with `H5(11)` over the 11-parts.
pub fn transcendental_glue() -> (CnLattice, PrimitiveExtension) {
    let t = twist_with_signature("(2 - y)*(4 + y)", (2, 2));
    let h = parse_lattice_expr("H5(11)").unwrap();
    let maps = enumerate_glue_maps(t.lattice(), &h, 121, BOUND).unwrap();
    let ext = build_overlattice(t.lattice(), &h, &maps[0]).unwrap();
    (t, ext)
}

/// Negative definite `L0(sr)` and `L0(s)` glued x-equivariantly over a
/// subgroup of order 5, with the glued action of x.
pub fn root_free_c() -> Vec<(PrimitiveExtension, IntMatrix)> {
    let m = twist_with_signature("(2 - y)*(4 + y)", (0, 4));
    let n = twist_with_signature("2 - y", (0, 4));
    let (fm, fn_) = (m.x_action(), n.x_action());
    let mut out = Vec::new();
    for g in enumerate_equivariant_glue_maps(m.lattice(), n.lattice(), &fm, &fn_, 5, BOUND).unwrap() {
        let ext = build_overlattice(m.lattice(), n.lattice(), &g).unwrap();
        match glue_isometry(&ext, &fm, &fn_).unwrap() {
            GluedIsometry::Compatible(f) => out.push((ext, f)),
            GluedIsometry::Incompatible { .. } => unreachable!(),
        }
    }
    out
}
