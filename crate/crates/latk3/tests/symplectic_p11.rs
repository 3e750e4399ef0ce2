mod common;

use latk3::cyclo::disc_module_of;
use latk3::finquad::genus_equal;
use latk3::lattice::parse_lattice_expr;
use latk3::vinberg::has_roots;
use num_bigint::BigInt;

#[test]
fn transcendental_lattice_glues_to_u_plus_2u5() {
    let (t, ext) = common::transcendental_glue();
    assert_eq!(t.lattice().det(), BigInt::from(125 * 121));
    let l = &ext.overlattice;
    assert_eq!(l.det(), BigInt::from(-625));
    assert!(l.is_even());
    assert!(ext.glue_estimate_check());
    let target = parse_lattice_expr("U+2*U(5)").unwrap();
    assert!(genus_equal(l, &target, 10_000).unwrap());
}

fn five_and_eleven(c: &latk3::lattice::IntegralLattice, f: &latk3::exactmat::IntMatrix) -> (Vec<u32>, usize) {
    let dm = disc_module_of(c, f, 5).unwrap();
    let mut five = Vec::new();
    let mut eleven = 0;
    for fac in &dm.factors {
        match fac.p {
            5 => five.extend(fac.exponents.iter().copied()),
            11 => {
                assert_eq!(fac.exponents, vec![1]);
                eleven += 1;
            }
            p => panic!("unexpected prime {p}"),
        }
    }
    five.sort_unstable();
    (five, eleven)
}

#[test]
fn root_free_c() {
    let all = common::root_free_c();
    let mut kinds = std::collections::BTreeSet::new();
    let mut found = 0;
    for (ext, f) in &all {
        let c = &ext.overlattice;
        assert_eq!(c.rank(), 8);
        assert_eq!(c.signature(), (0, 8));
        assert_eq!(c.det(), BigInt::from(121 * 625));
        let (five, eleven) = five_and_eleven(c, f);
        assert_eq!(eleven, 2);
        kinds.insert(five.clone());
        if five == [1, 3] {
            assert!(!has_roots(c).unwrap());
            found += 1;
        }
    }
    // e2 ↦ c·b2 leaves (x−1)²(c·e0 + b0) outside Γ exactly when c² ≠ 1
    assert_eq!(kinds, [vec![1, 3], vec![2, 2]].into_iter().collect());
    assert!(found > 0);
}
