//! Integral lattices given by Gram matrices, their duals, discriminant
//! groups and primitive sublattices.

pub mod catalog;
pub mod parse;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactmat::{self, int_rat, IntMatrix, RatMatrix};
use crate::{Error, Result};

pub use parse::{parse_gram_json, parse_lattice_expr, parse_lattice_expr_with, read_gram_file, to_gram_json};

/// A nondegenerate symmetric integral bilinear form on Z^n.
#[derive(Clone, Debug)]
pub struct IntegralLattice {
    gram: IntMatrix,
    label: Option<String>,
}

impl PartialEq for IntegralLattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl Eq for IntegralLattice {}

impl IntegralLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(Error::Dimension(format!("gram matrix is {}x{}", gram.rows(), gram.cols())));
        }
        if !gram.is_symmetric() {
            return Err(Error::Invalid("gram matrix is not symmetric".into()));
        }
        if exactmat::det(&gram)?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(IntegralLattice { gram, label: None })
    }

    /// Panics on invalid input; meant for literals.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::new(IntMatrix::from_i64(rows)).expect("valid gram literal")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> BigInt {
        exactmat::det(&self.gram).expect("square")
    }

    pub fn signature(&self) -> (usize, usize) {
        exactmat::signature(&self.gram).expect("nondegenerate")
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i).is_even())
    }

    pub fn is_definite(&self) -> bool {
        let (p, n) = self.signature();
        p == 0 || n == 0
    }

    pub fn inner(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        self.gram.bilinear(v, w)
    }

    /// Rational pairing for vectors of L ⊗ Q.
    pub fn inner_q(&self, v: &[BigRational], w: &[BigRational]) -> BigRational {
        let n = self.rank();
        let mut s = BigRational::zero();
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            let mut t = BigRational::zero();
            for j in 0..n {
                if !w[j].is_zero() {
                    t += &w[j] * int_rat(self.gram.get(i, j));
                }
            }
            s += &v[i] * t;
        }
        s
    }

    pub fn direct_sum(parts: &[IntegralLattice]) -> Result<IntegralLattice> {
        if parts.is_empty() {
            return Err(Error::Dimension("empty direct sum".into()));
        }
        let blocks: Vec<&IntMatrix> = parts.iter().map(|p| &p.gram).collect();
        Ok(IntegralLattice { gram: IntMatrix::block_diag(&blocks), label: None })
    }

    pub fn plus(&self, other: &IntegralLattice) -> IntegralLattice {
        IntegralLattice { gram: IntMatrix::block_diag(&[&self.gram, &other.gram]), label: None }
    }

    /// L(a): the form multiplied by `a`.
    pub fn rescale(&self, a: &BigInt) -> Result<IntegralLattice> {
        if a.is_zero() {
            return Err(Error::Invalid("zero scale".into()));
        }
        Ok(IntegralLattice { gram: self.gram.scale(a), label: None })
    }

    /// Rows generate L^∨ in the coordinates of L.
    pub fn dual_basis(&self) -> RatMatrix {
        self.gram.to_rat().inverse().expect("nondegenerate")
    }

    pub fn disc_group(&self) -> DiscGroup {
        DiscGroup::of(self)
    }

    /// True iff n kills the discriminant group.
    pub fn is_p_elementary(&self, n: &BigInt) -> bool {
        let d = self.disc_group();
        d.invariants().iter().all(|di| n.is_multiple_of(di))
    }

    /// Base change: the lattice with Gram `b·G·bᵀ`.
    pub fn transform(&self, b: &IntMatrix) -> Result<IntegralLattice> {
        IntegralLattice::new(b.mul(&self.gram).mul(&b.transpose()))
    }
}

impl fmt::Display for IntegralLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            writeln!(f, "{l}:")?;
        }
        write!(f, "{}", self.gram)
    }
}

/// L^∨/L in Smith form. Generators are `g_i = v_i / d_i` with `v_i` a column
/// of the right Smith transform, so `x ∈ L^∨` has coordinates
/// `c_i = d_i·(V⁻¹x)_i mod d_i`.
#[derive(Clone, Debug)]
pub struct DiscGroup {
    invariants: Vec<BigInt>,
    gens: Vec<Vec<BigRational>>,
    coord: Vec<Vec<BigInt>>,
}

impl DiscGroup {
    fn of(l: &IntegralLattice) -> DiscGroup {
        let (d, _u, v) = exactmat::snf(l.gram());
        let vinv = v.to_rat().inverse().expect("unimodular").to_int().expect("unimodular");
        let mut invariants = Vec::new();
        let mut gens = Vec::new();
        let mut coord = Vec::new();
        for (i, di) in d.iter().enumerate() {
            let di = di.abs();
            if di.is_one() {
                continue;
            }
            let g: Vec<BigRational> =
                (0..l.rank()).map(|r| BigRational::new(v.get(r, i).clone(), di.clone())).collect();
            gens.push(g);
            coord.push(vinv.row(i).iter().map(|x| x * &di).collect());
            invariants.push(di);
        }
        DiscGroup { invariants, gens, coord }
    }

    /// d_1 | d_2 | ... with every d_i > 1.
    pub fn invariants(&self) -> &[BigInt] {
        &self.invariants
    }

    pub fn length(&self) -> usize {
        self.invariants.len()
    }

    pub fn order(&self) -> BigInt {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> BigInt {
        self.invariants.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Lifts of the generators as vectors of L ⊗ Q.
    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.gens
    }

    /// Coordinates of `x ∈ L^∨` on the generators, reduced mod d_i.
    pub fn reduce(&self, x: &[BigRational]) -> Result<Vec<BigInt>> {
        let mut out = Vec::with_capacity(self.invariants.len());
        for (row, di) in self.coord.iter().zip(&self.invariants) {
            let mut c = BigRational::zero();
            for (a, b) in row.iter().zip(x) {
                if !a.is_zero() && !b.is_zero() {
                    c += int_rat(a) * b;
                }
            }
            if !c.is_integer() {
                return Err(Error::Invalid("vector is not in the dual lattice".into()));
            }
            // c counts multiples of v_i/d_i; reduce through the integer part
            out.push(c.to_integer().mod_floor(di));
        }
        Ok(out)
    }

    /// The lift Σ c_i g_i.
    pub fn lift(&self, c: &[BigInt]) -> Vec<BigRational> {
        let n = self.gens.first().map_or(0, |g| g.len());
        let mut v = vec![BigRational::zero(); n];
        for (ci, g) in c.iter().zip(&self.gens) {
            if ci.is_zero() {
                continue;
            }
            let ci = int_rat(ci);
            for (vj, gj) in v.iter_mut().zip(g) {
                *vj += &ci * gj;
            }
        }
        v
    }
}

/// A sublattice stored by a basis in ambient coordinates, always saturated.
#[derive(Clone, Debug)]
pub struct Sublattice {
    ambient: IntegralLattice,
    basis: IntMatrix,
    saturated_input: bool,
}

fn saturate(b: &IntMatrix) -> IntMatrix {
    exactmat::kernel_saturated(&exactmat::kernel_saturated(b))
}

impl Sublattice {
    /// Saturates `basis` (rows, ambient coordinates); `was_saturated` tells
    /// whether the input already spanned a primitive sublattice.
    pub fn new(ambient: IntegralLattice, basis: IntMatrix) -> Result<Self> {
        if basis.cols() != ambient.rank() {
            return Err(Error::Dimension(format!(
                "basis vectors of length {} in a rank {} lattice",
                basis.cols(),
                ambient.rank()
            )));
        }
        if exactmat::rank(&basis) != basis.rows() {
            return Err(Error::Invalid("basis vectors are linearly dependent".into()));
        }
        if basis.rows() == 0 {
            return Ok(Sublattice { ambient, basis, saturated_input: true });
        }
        let sat = saturate(&basis);
        let saturated_input = exactmat::hnf(&basis).0 == sat;
        Ok(Sublattice { ambient, basis: sat, saturated_input })
    }

    pub fn ambient(&self) -> &IntegralLattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn was_saturated(&self) -> bool {
        self.saturated_input
    }

    /// The induced form; fails if it is degenerate.
    pub fn lattice(&self) -> Result<IntegralLattice> {
        if self.rank() == 0 {
            return Err(Error::Dimension("rank zero sublattice".into()));
        }
        self.ambient.transform(&self.basis)
    }

    pub fn orthogonal_complement(&self) -> Sublattice {
        let n = self.ambient.rank();
        let basis = if self.rank() == 0 {
            IntMatrix::identity(n)
        } else {
            exactmat::kernel_saturated(&self.basis.mul(self.ambient.gram()))
        };
        Sublattice { ambient: self.ambient.clone(), basis, saturated_input: true }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::rat;
    use proptest::prelude::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn l(rows: &[Vec<i64>]) -> IntegralLattice {
        IntegralLattice::from_i64(rows)
    }

    #[test]
    fn dual_examples() {
        let u = catalog::hyperbolic_plane();
        assert_eq!(u.dual_basis(), IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).to_rat());
        assert_eq!(l(&[vec![-2]]).dual_basis().get(0, 0), &rat(-1, 2));
        assert_eq!(l(&[vec![-18]]).dual_basis().get(0, 0), &rat(-1, 18));
    }

    #[test]
    fn disc_examples() {
        assert_eq!(catalog::e(8).unwrap().disc_group().order(), b(1));
        let d = l(&[vec![2, 0], vec![0, -18]]).disc_group();
        assert_eq!(d.invariants(), &[b(2), b(18)]);
        let d = parse_lattice_expr("U+2*U(5)").unwrap().disc_group();
        assert_eq!(d.invariants(), &[b(5), b(5), b(5), b(5)]);
        assert_eq!(d.length(), 4);
    }

    #[test]
    fn disc_reduce_lift() {
        let m = l(&[vec![2, 1], vec![1, -4]]);
        let d = m.disc_group();
        assert_eq!(d.invariants(), &[b(9)]);
        let g = d.generators()[0].clone();
        assert_eq!(d.reduce(&g).unwrap(), vec![b(1)]);
        let three: Vec<BigRational> = g.iter().map(|x| x * rat(3, 1)).collect();
        assert_eq!(d.reduce(&three).unwrap(), vec![b(3)]);
        assert_eq!(d.reduce(&[rat(1, 1), rat(0, 1)]).unwrap(), vec![b(0)]);
        assert!(d.reduce(&[rat(1, 2), rat(0, 1)]).is_err());
        assert_eq!(d.reduce(&d.lift(&[b(7)])).unwrap(), vec![b(7)]);
    }

    #[test]
    fn p_elementary() {
        assert!(parse_lattice_expr("2*U(5)").unwrap().is_p_elementary(&b(5)));
        assert!(!l(&[vec![-18]]).is_p_elementary(&b(2)));
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(catalog::hyperbolic_plane().rescale(&b(5)).unwrap(), parse_lattice_expr("U(5)").unwrap());
        assert_eq!(catalog::h5().rescale(&b(-1)).unwrap(), l(&[vec![-2, -1], vec![-1, 2]]));
        assert_eq!(catalog::a(2).unwrap().rescale(&b(3)).unwrap().det(), b(27));
        assert!(catalog::h5().rescale(&b(0)).is_err());
    }

    #[test]
    fn complements() {
        let amb = parse_lattice_expr("U+(-2)").unwrap();
        let s = Sublattice::new(amb.clone(), IntMatrix::from_i64(&[vec![1, 0, 0]])).unwrap();
        let c = s.orthogonal_complement();
        assert_eq!(c.basis(), &IntMatrix::from_i64(&[vec![1, 0, 0], vec![0, 0, 1]]));

        let a1a1 = parse_lattice_expr("2*A1").unwrap();
        let diag = Sublattice::new(a1a1, IntMatrix::from_i64(&[vec![1, 1]])).unwrap();
        let c = diag.orthogonal_complement();
        assert_eq!(c.lattice().unwrap().gram(), &IntMatrix::from_i64(&[vec![-4]]));

        let full = Sublattice::new(amb, IntMatrix::identity(3)).unwrap();
        assert_eq!(full.orthogonal_complement().rank(), 0);
    }

    #[test]
    fn saturation_flag() {
        let amb = parse_lattice_expr("2*A1").unwrap();
        let s = Sublattice::new(amb.clone(), IntMatrix::from_i64(&[vec![2, 2]])).unwrap();
        assert!(!s.was_saturated());
        assert_eq!(s.basis(), &IntMatrix::from_i64(&[vec![1, 1]]));
        assert!(Sublattice::new(amb, IntMatrix::from_i64(&[vec![1, 1]])).unwrap().was_saturated());
    }

    fn small_gram() -> impl Strategy<Value = IntegralLattice> {
        (1usize..5)
            .prop_flat_map(|n| prop::collection::vec(-6i64..7, n * n).prop_map(move |v| (n, v)))
            .prop_filter_map("degenerate", |(n, v)| {
                let mut g = vec![vec![0i64; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        g[i][j] = if i <= j { v[i * n + j] } else { v[j * n + i] };
                    }
                }
                IntegralLattice::new(IntMatrix::from_i64(&g)).ok()
            })
    }

    proptest! {
        #[test]
        fn disc_order_is_det(l in small_gram()) {
            prop_assert_eq!(l.disc_group().order(), l.det().abs());
        }

        #[test]
        fn disc_generators_in_dual(l in small_gram()) {
            let d = l.disc_group();
            for (i, g) in d.generators().iter().enumerate() {
                // g pairs integrally with every basis vector
                for k in 0..l.rank() {
                    let mut e = vec![BigRational::zero(); l.rank()];
                    e[k] = BigRational::one();
                    prop_assert!(l.inner_q(g, &e).is_integer());
                }
                let mut c = vec![BigInt::zero(); d.length()];
                c[i] = BigInt::one();
                prop_assert_eq!(d.reduce(g).unwrap(), c);
            }
        }

        #[test]
        fn rescale_det_and_parity(l in small_gram(), a in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3, 5])) {
            let r = l.rescale(&b(a)).unwrap();
            prop_assert_eq!(r.det(), l.det() * b(a).pow(l.rank() as u32));
            if a % 2 == 0 || l.is_even() {
                prop_assert!(r.is_even());
            }
        }

        #[test]
        fn double_complement(l in small_gram(), v in prop::collection::vec(-4i64..5, 4)) {
            let n = l.rank();
            let v: Vec<i64> = v.into_iter().take(n).collect();
            prop_assume!(v.iter().any(|&x| x != 0));
            let s = Sublattice::new(l, IntMatrix::from_i64(&[v])).unwrap();
            let cc = s.orthogonal_complement().orthogonal_complement();
            prop_assert_eq!(cc.basis(), s.basis());
        }

        #[test]
        fn unimodular_complement_discs(v in prop::collection::vec(-5i64..6, 4)) {
            prop_assume!(v.iter().any(|&x| x != 0));
            let amb = parse_lattice_expr("2*U").unwrap();
            let s = Sublattice::new(amb, IntMatrix::from_i64(&[v])).unwrap();
            let sl = s.lattice();
            prop_assume!(sl.is_ok());
            let c = s.orthogonal_complement().lattice().unwrap();
            prop_assert_eq!(sl.unwrap().det().abs(), c.det().abs());
        }
    }
}
