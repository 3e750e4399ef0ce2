use super::*;
use crate::lattice::parse_lattice_expr;
use proptest::prelude::*;

fn lat(s: &str) -> IntegralLattice {
    parse_lattice_expr(s).unwrap()
}

#[test]
fn root_counts_of_root_lattices() {
    assert_eq!(short_vectors(&lat("A2"), 2).unwrap().len(), 3);
    assert_eq!(short_vectors(&lat("E8"), 2).unwrap().len(), 120);
    assert_eq!(short_vectors(&lat("D4"), 2).unwrap().len(), 12);
    assert!(short_vectors(&lat("U"), 2).is_err());
}

#[test]
fn root_free_forms() {
    let c2 = IntegralLattice::from_i64(&[vec![-4, -2, -2], vec![-2, -4, -2], vec![-2, -2, -10]]);
    assert!(short_vectors(&c2, 2).unwrap().is_empty());
    assert!(!has_roots(&c2).unwrap());
    let q = IntegralLattice::from_i64(&[vec![4, 2, 1, 1], vec![2, 4, -1, 2], vec![1, -1, 8, 3], vec![1, 2, 3, 8]]);
    assert!(!has_roots(&q).unwrap());
    assert!(has_roots(&lat("A1")).unwrap());
}

fn naive(l: &IntegralLattice, bound: i64, r: i64) -> Vec<Vec<BigInt>> {
    let n = l.rank();
    let mut out = Vec::new();
    let mut v = vec![-r; n];
    loop {
        let b: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let q = l.inner(&b, &b).abs();
        if !q.is_zero() && q <= BigInt::from(bound) && lex_positive(&b) {
            out.push((q, b));
        }
        let mut i = 0;
        while i < n {
            v[i] += 1;
            if v[i] <= r {
                break;
            }
            v[i] = -r;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out.sort();
    out.into_iter().map(|(_, b)| b).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn short_vectors_match_box_search(a in 2i64..6, b in -2i64..=2, c in 2i64..6, d in -2i64..=2, e in -2i64..=2, f in 3i64..8, neg in any::<bool>(), bound in 1u64..=12) {
        let m = vec![vec![a, b, d], vec![b, c, e], vec![d, e, f]];
        let l = IntegralLattice::new(IntMatrix::from_i64(&m));
        prop_assume!(l.is_ok());
        let l = l.unwrap();
        prop_assume!(l.signature() == (3, 0));
        let l = if neg { l.rescale(&BigInt::from(-1)).unwrap() } else { l };
        // |x_i|² ≤ bound·(G⁻¹)_ii = bound·cof_ii / det
        let det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])) as u64;
        let cof = [m[1][1] * m[2][2] - m[1][2] * m[1][2], m[0][0] * m[2][2] - m[0][2] * m[0][2], m[0][0] * m[1][1] - m[0][1] * m[0][1]];
        let r = cof.iter().map(|&c| num_integer::Roots::sqrt(&(bound * c as u64 / det))).max().unwrap() as i64;
        prop_assert_eq!(short_vectors(&l, bound).unwrap(), naive(&l, bound as i64, r));
    }
}

fn chamber(s: &str) -> Chamber {
    vinberg_fundamental_roots(&lat(s), &VinbergOptions::default()).unwrap()
}

fn check_chamber(c: &Chamber) {
    let l = &c.lattice;
    for (i, e) in c.roots.iter().enumerate() {
        assert!(primitive(e));
        assert!(is_reflective(l, e));
        assert!(!l.inner(e, &c.v0).is_positive());
        let r = reflection_matrix(l, e).unwrap();
        assert_eq!(&r.mul(l.gram()).mul(&r.transpose()), l.gram());
        for f in &c.roots[..i] {
            assert!(!l.inner(e, f).is_negative());
        }
    }
}

#[test]
fn unimodular_e10() {
    let c = chamber("U+E8");
    check_chamber(&c);
    assert_eq!(c.len(), 10);
    assert!(c.saturated);
    let g = chamber_symmetries(&c).unwrap();
    assert_eq!(g.order, BigInt::one());
}

#[test]
fn u_plus_4a1() {
    let c = chamber("U+4*A1");
    check_chamber(&c);
    assert_eq!(c.len(), 9, "{:?}", c.gram);
    let g = chamber_symmetries(&c).unwrap();
    assert_eq!(g.order, BigInt::from(24));
    let els = g.elements(100).unwrap();
    assert_eq!(els.len(), 24);
    // closed under composition and inverses, and every element fixes the Gram matrix
    let set: std::collections::HashSet<_> = els.iter().cloned().collect();
    for a in &els {
        let f = g.matrix_of(a).unwrap().unwrap();
        assert_eq!(&f.mul(c.lattice.gram()).mul(&f.transpose()), c.lattice.gram());
        let mut inv = vec![0; a.len()];
        for (i, &j) in a.iter().enumerate() {
            inv[j] = i;
        }
        assert!(set.contains(&inv));
        for b in els.iter().take(5) {
            let ab: Vec<usize> = a.iter().map(|&x| b[x]).collect();
            assert!(set.contains(&ab));
        }
    }
    assert!(c.to_dot().contains("label=\"2\""));
}

#[test]
fn small_table_rows() {
    for (s, order, roots) in [("U+A2", 2, None), ("U+D4", 6, Some(6)), ("U+2*A2", 8, Some(7)), ("U+E6", 2, Some(8)), ("U(2)+D4", 120, Some(6))] {
        let c = chamber(s);
        check_chamber(&c);
        if let Some(r) = roots {
            assert_eq!(c.len(), r, "{s}: {:?}", c.gram);
        }
        let g = chamber_symmetries(&c).unwrap();
        assert_eq!(g.order, BigInt::from(order), "{s}: {:?}", c.gram);
    }
}

#[test]
fn disc_image_u_plus_a2() {
    let g = chamber_symmetries(&chamber("U+A2")).unwrap();
    let d = chamber_to_disc(&g, Some(10_000)).unwrap();
    assert_eq!(d.image_order, 2);
    assert_eq!(d.kernel_order, BigInt::one());
    assert_eq!(d.orthogonal_order, Some(2));
    assert_eq!(d.cokernel_order, Some(1));
}

#[test]
fn non_hyperbolic_is_rejected() {
    assert!(vinberg_fundamental_roots(&lat("E8"), &VinbergOptions::default()).is_err());
    assert!(vinberg_fundamental_roots(&lat("U+U"), &VinbergOptions::default()).is_err());
}

#[test]
fn u3_a2_roots_form_a_symmetric_basis() {
    // K4 with (e_i, e_j) = 1 and det −27 = det L, so every permutation of the basis is an isometry
    let c = chamber("U(3)+A2");
    let k4 = IntMatrix::from_i64(&(0..4).map(|i| (0..4).map(|j| if i == j { -2 } else { 1 }).collect()).collect::<Vec<_>>());
    assert_eq!(c.gram, k4);
    assert!(c.saturated);
    let g = chamber_symmetries(&c).unwrap();
    assert_eq!(g.order, BigInt::from(24));
    let d = chamber_to_disc(&g, Some(10_000)).unwrap();
    assert_eq!(d.orthogonal_order, Some(48));
    assert_eq!(d.cokernel_order, Some(2));
    assert!(!d.minus_id_in_image);
}

#[test]
fn u3_2a2() {
    let c = chamber("U(3)+2*A2");
    assert_eq!(c.len(), 12);
    assert!(c.saturated);
    let g = chamber_symmetries(&c).unwrap();
    assert_eq!(g.order, BigInt::from(1440));
    let d = chamber_to_disc(&g, Some(10_000)).unwrap();
    assert_eq!(d.cokernel_order, Some(1));
}

#[test]
fn truncated_search_is_not_saturated() {
    let opts = VinbergOptions { max_height: Some(BigRational::from_integer(5.into())), ..Default::default() };
    let c = vinberg_fundamental_roots(&lat("U(3)+2*A2"), &opts).unwrap();
    assert_eq!(c.len(), 8);
    assert!(!c.saturated);
}

#[test]
fn finite_volume_rays() {
    // the E10 polytope has one ideal vertex; all others are inside
    let c = chamber("U+E8");
    let rays = polytope::cone_rays(&c.lattice, &c.roots).unwrap();
    assert_eq!(rays.len(), 10);
    let zero = rays.iter().filter(|r| c.lattice.inner(r, r).is_zero()).count();
    assert_eq!(zero, 1);
    for r in &rays {
        for e in &c.roots {
            assert!(!c.lattice.inner(r, e).is_positive());
        }
    }
    assert!(!polytope::has_finite_volume(&c.lattice, &c.roots[..9]));
}

#[test]
fn dot_export() {
    let c = chamber("U+A2");
    let dot = c.to_dot();
    assert!(dot.starts_with("graph chamber {"));
    assert_eq!(dot.matches("label=\"-2\"").count(), 4);
    assert!(dot.trim_end().ends_with('}'));
}
