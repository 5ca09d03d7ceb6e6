//! Even integral lattices: construction, discriminant groups, 2-elementary
//! invariants, dual bases and orthogonal complements.

mod class;
pub mod expr;

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use self::class::{DualVector, LatticeClass};
use crate::exact::{self, IntMatrix, LinAlgError, RatMatrix, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("invalid root lattice index {family}{n}")]
    InvalidIndex { family: RootFamily, n: usize },
    #[error("rescaling by zero")]
    ZeroScale,
    #[error("class has {got} coordinates, lattice has rank {rank}")]
    LatticeMismatch { rank: usize, got: usize },
    #[error("lattice is degenerate (det = 0)")]
    Degenerate,
    #[error("discriminant group is not 2-elementary (invariant factors {0:?})")]
    NotTwoElementary(Vec<String>),
    #[error("expression does not define a lattice class: coordinate {index} is {value}")]
    NotIntegral { index: usize, value: String },
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("{labels} labels given for a rank-{rank} lattice")]
    LabelCount { rank: usize, labels: usize },
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

pub type Result<T> = std::result::Result<T, LatticeError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootFamily {
    A,
    D,
    E,
}

impl fmt::Display for RootFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootFamily::A => "A",
            RootFamily::D => "D",
            RootFamily::E => "E",
        })
    }
}

/// A free Z-module with a symmetric integral bilinear form and named basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    labels: Vec<String>,
}

impl Lattice {
    pub fn from_gram(gram: IntMatrix, labels: Vec<String>) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if labels.len() != gram.rows() {
            return Err(LatticeError::LabelCount { rank: gram.rows(), labels: labels.len() });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Lattice { gram, labels })
    }

    /// Wraps a gram matrix with labels `x1, x2, ...`.
    pub fn from_gram_unlabeled(gram: IntMatrix) -> Result<Self> {
        let labels = numbered("x", gram.rows());
        Self::from_gram(gram, labels)
    }

    /// The hyperbolic plane `(0 1 / 1 0)`.
    pub fn hyperbolic_plane() -> Self {
        Lattice { gram: IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]), labels: numbered("u", 2) }
    }

    /// The form `(0 1 / 1 -2)`, isometric to the hyperbolic plane but with a
    /// basis made of an isotropic class and a (-2)-class meeting it once.
    pub fn hyperbolic_plane_with_section() -> Self {
        Lattice { gram: IntMatrix::from_rows(&[vec![0, 1], vec![1, -2]]), labels: numbered("u", 2) }
    }

    /// Negative definite root lattice with Bourbaki node numbering; the gram
    /// matrix is minus the Cartan matrix.
    pub fn root_lattice(family: RootFamily, n: usize) -> Result<Self> {
        let valid = match family {
            RootFamily::A => n >= 1,
            RootFamily::D => n >= 4,
            RootFamily::E => (6..=8).contains(&n),
        };
        if !valid {
            return Err(LatticeError::InvalidIndex { family, n });
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        match family {
            RootFamily::A => edges.extend((1..n).map(|i| (i, i + 1))),
            RootFamily::D => {
                edges.extend((1..n - 1).map(|i| (i, i + 1)));
                edges.push((n - 2, n));
            }
            RootFamily::E => {
                edges.extend([(1, 3), (3, 4), (2, 4)]);
                edges.extend((4..n).map(|i| (i, i + 1)));
            }
        }
        let mut gram = IntMatrix::identity(n).scale(&BigInt::from(-2));
        for (a, b) in edges {
            gram.set(a - 1, b - 1, BigInt::one());
            gram.set(b - 1, a - 1, BigInt::one());
        }
        let prefix = match family {
            RootFamily::A => "a",
            RootFamily::D => "d",
            RootFamily::E => "e",
        };
        Ok(Lattice { gram, labels: numbered(prefix, n) })
    }

    /// `M(n)`: the same module with the form multiplied by `n`.
    pub fn rescale(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(LatticeError::ZeroScale);
        }
        Ok(Lattice { gram: self.gram.scale(n), labels: self.labels.clone() })
    }

    /// Orthogonal sum. A label that collides with an earlier block gets the
    /// suffix `.k`, where `k` is the 1-based block index.
    pub fn direct_sum(parts: &[Lattice]) -> Self {
        let grams: Vec<&IntMatrix> = parts.iter().map(|p| &p.gram).collect();
        let gram = IntMatrix::block_diag(&grams);
        let mut labels = Vec::with_capacity(gram.rows());
        let mut seen: HashSet<String> = HashSet::new();
        for (b, part) in parts.iter().enumerate() {
            for l in &part.labels {
                let mut name = l.clone();
                let mut bump = b + 1;
                while seen.contains(&name) {
                    name = format!("{l}.{bump}");
                    bump += 1;
                }
                seen.insert(name.clone());
                labels.push(name);
            }
        }
        Lattice { gram, labels }
    }

    pub fn with_labels<S: Into<String>>(self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::from_gram(self.gram, labels.into_iter().map(Into::into).collect())
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| LatticeError::UnknownLabel(label.to_string()))
    }

    pub fn basis_class(&self, label: &str) -> Result<LatticeClass> {
        Ok(LatticeClass::unit(self.rank(), self.index_of(label)?))
    }

    /// Integer combination of named basis vectors.
    pub fn class_from_terms(&self, terms: &[(&str, i64)]) -> Result<LatticeClass> {
        let mut coords = vec![BigInt::zero(); self.rank()];
        for (label, k) in terms {
            coords[self.index_of(label)?] += *k;
        }
        Ok(LatticeClass::new(coords))
    }

    fn check(&self, x: &LatticeClass) -> Result<()> {
        if x.len() != self.rank() {
            return Err(LatticeError::LatticeMismatch { rank: self.rank(), got: x.len() });
        }
        Ok(())
    }

    pub fn inner(&self, x: &LatticeClass, y: &LatticeClass) -> Result<BigInt> {
        self.check(x)?;
        self.check(y)?;
        let gy = self.gram.mul_vec(y.coords());
        Ok(x.coords().iter().zip(&gy).map(|(a, b)| a * b).sum())
    }

    pub fn square(&self, x: &LatticeClass) -> Result<BigInt> {
        self.inner(x, x)
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant().expect("gram is square")
    }

    pub fn signature(&self) -> Signature {
        exact::signature(&self.gram).expect("gram is symmetric")
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i) % 2 == BigInt::zero())
    }

    pub fn is_hyperbolic(&self) -> bool {
        let s = self.signature();
        s.plus == 1 && s.zero == 0
    }

    /// Saturated basis (rows) of the radical `{x : x.y = 0 for all y}`.
    pub fn radical(&self) -> IntMatrix {
        exact::integer_kernel(&self.gram)
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.determinant().is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(())
    }

    /// Rows of the result are the dual basis vectors written in the basis
    /// of `S (x) Q`, i.e. the inverse gram matrix.
    pub fn dual_basis(&self) -> Result<RatMatrix> {
        self.require_nondegenerate()?;
        Ok(exact::rational_inverse(&self.gram)?)
    }

    /// Rational square of a vector of `S (x) Q`.
    pub fn dual_square(&self, x: &DualVector) -> Result<BigRational> {
        if x.coords().len() != self.rank() {
            return Err(LatticeError::LatticeMismatch { rank: self.rank(), got: x.coords().len() });
        }
        let g = self.gram.to_rational();
        let mut total = BigRational::zero();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                total += &x.coords()[i] * g.get(i, j) * &x.coords()[j];
            }
        }
        Ok(total)
    }

    /// Evaluates `sum coeffs[i] * basis_i^*` and returns it as a lattice class
    /// if it lies in `S`.
    pub fn dual_coeffs_to_class(&self, coeffs: &[BigInt]) -> Result<LatticeClass> {
        if coeffs.len() != self.rank() {
            return Err(LatticeError::LatticeMismatch { rank: self.rank(), got: coeffs.len() });
        }
        let dual = self.dual_basis()?;
        let n = self.rank();
        let mut coords = Vec::with_capacity(n);
        for j in 0..n {
            let v = (0..n).fold(BigRational::zero(), |acc, i| {
                acc + dual.get(i, j) * BigRational::from_integer(coeffs[i].clone())
            });
            if !v.is_integer() {
                return Err(LatticeError::NotIntegral { index: j, value: v.to_string() });
            }
            coords.push(v.to_integer());
        }
        Ok(LatticeClass::new(coords))
    }

    /// Same as [`Lattice::dual_coeffs_to_class`] with coefficients given by
    /// basis label, e.g. `[("e", 3), ("f1", 1)]` for `3e* + f1*`.
    pub fn dual_expression_to_class(&self, terms: &[(&str, i64)]) -> Result<LatticeClass> {
        let mut coeffs = vec![BigInt::zero(); self.rank()];
        for (label, k) in terms {
            coeffs[self.index_of(label)?] += *k;
        }
        self.dual_coeffs_to_class(&coeffs)
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        self.require_nondegenerate()?;
        let snf = exact::smith_normal_form(&self.gram);
        // u G v = D, so S*/S = G^-1 Z^n / Z^n is generated by G^-1 u^-1 e_i.
        let u_inv = exact::rational_inverse(&snf.u)?;
        let g_inv = exact::rational_inverse(&self.gram)?;
        let lift = g_inv.mul(&u_inv)?;
        let mut invariant_factors = Vec::new();
        let mut generators = Vec::new();
        for (i, d) in snf.d.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            invariant_factors.push(d.clone());
            generators.push(DualVector::new((0..self.rank()).map(|r| lift.get(r, i).clone()).collect()));
        }
        Ok(DiscriminantGroup { invariant_factors, generators })
    }

    /// `(r, a, delta)` for a 2-elementary lattice. `delta` is decided by
    /// checking the square of every element of `A_S`.
    pub fn two_elementary_invariants(&self) -> Result<TwoElemInvariants> {
        let group = self.discriminant_group()?;
        if group.invariant_factors.iter().any(|d| d != &BigInt::from(2)) {
            return Err(LatticeError::NotTwoElementary(
                group.invariant_factors.iter().map(ToString::to_string).collect(),
            ));
        }
        let a = group.invariant_factors.len();
        let n = self.rank();
        let mut delta = 0;
        for mask in 1u64..(1u64 << a) {
            let mut x = vec![BigRational::zero(); n];
            for (i, g) in group.generators.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (xk, gk) in x.iter_mut().zip(g.coords()) {
                        *xk += gk;
                    }
                }
            }
            if !self.dual_square(&DualVector::new(x))?.is_integer() {
                delta = 1;
                break;
            }
        }
        Ok(TwoElemInvariants { r: n, a, delta })
    }

    /// Saturated sublattice of vectors orthogonal to all `classes`.
    pub fn orthogonal_complement(&self, classes: &[LatticeClass]) -> Result<Sublattice> {
        for c in classes {
            self.check(c)?;
        }
        let rows: Vec<Vec<BigInt>> = classes.iter().map(|c| c.coords().to_vec()).collect();
        let cm = IntMatrix::from_rows_with_cols(&rows, self.rank());
        let constraints = cm.mul(&self.gram)?;
        let embedding = exact::integer_kernel(&constraints);
        Ok(Sublattice::new(self, embedding))
    }

    /// The sublattice spanned by the given rows (which must be independent).
    pub fn sublattice(&self, embedding: IntMatrix) -> Sublattice {
        Sublattice::new(self, embedding)
    }
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// A sublattice together with the coordinates of its basis in the ambient
/// lattice (one row per basis vector).
#[derive(Debug, Clone)]
pub struct Sublattice {
    pub lattice: Lattice,
    pub embedding: IntMatrix,
}

impl Sublattice {
    fn new(ambient: &Lattice, embedding: IntMatrix) -> Self {
        let gram = embedding
            .mul(ambient.gram())
            .and_then(|x| x.mul(&embedding.transpose()))
            .expect("embedding width matches ambient rank");
        let lattice = Lattice { labels: numbered("w", gram.rows()), gram };
        Sublattice { lattice, embedding }
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Maps a class of the sublattice to ambient coordinates.
    pub fn to_ambient(&self, x: &LatticeClass) -> LatticeClass {
        let n = self.embedding.cols();
        let coords = (0..n)
            .map(|j| x.coords().iter().enumerate().map(|(i, c)| c * self.embedding.get(i, j)).sum())
            .collect();
        LatticeClass::new(coords)
    }

    /// Whether the sublattice is primitive in the ambient lattice.
    pub fn is_primitive(&self) -> bool {
        exact::smith_normal_form(&self.embedding).d.iter().all(|d| d.is_one())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantGroup {
    /// Invariant factors greater than one, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
    /// One dual vector per invariant factor, of that order modulo `S`.
    pub generators: Vec<DualVector>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoElemInvariants {
    pub r: usize,
    pub a: usize,
    pub delta: u8,
}

impl TwoElemInvariants {
    pub const fn new(r: usize, a: usize, delta: u8) -> Self {
        TwoElemInvariants { r, a, delta }
    }
}

impl fmt::Display for TwoElemInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.a, self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::smith_normal_form;
    use num_traits::Signed;

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn e8() -> Lattice {
        Lattice::root_lattice(RootFamily::E, 8).unwrap()
    }

    fn inv(r: usize, a: usize, delta: u8) -> TwoElemInvariants {
        TwoElemInvariants::new(r, a, delta)
    }

    #[test]
    fn root_lattice_shapes() {
        let a1 = Lattice::root_lattice(RootFamily::A, 1).unwrap();
        assert_eq!(a1.gram(), &IntMatrix::from_rows(&[vec![-2]]));
        assert_eq!(e8().determinant(), int(1));
        assert_eq!(e8().signature(), Signature { plus: 0, zero: 0, minus: 8 });
        let d4 = Lattice::root_lattice(RootFamily::D, 4).unwrap();
        assert_eq!(d4.determinant(), int(4));
        assert_eq!(d4.discriminant_group().unwrap().invariant_factors, vec![int(2), int(2)]);
        for n in 1..12 {
            let a = Lattice::root_lattice(RootFamily::A, n).unwrap();
            assert_eq!(a.determinant().abs(), int(n as i64 + 1));
        }
        for n in 4..12 {
            let d = Lattice::root_lattice(RootFamily::D, n).unwrap();
            assert_eq!(d.determinant().abs(), int(4));
        }
        assert_eq!(Lattice::root_lattice(RootFamily::E, 6).unwrap().determinant().abs(), int(3));
        assert_eq!(Lattice::root_lattice(RootFamily::E, 7).unwrap().determinant().abs(), int(2));
        assert!(Lattice::root_lattice(RootFamily::D, 3).is_err());
        assert!(Lattice::root_lattice(RootFamily::E, 9).is_err());
        assert!(Lattice::root_lattice(RootFamily::A, 0).is_err());
    }

    #[test]
    fn rescale_and_sum() {
        let a1 = Lattice::root_lattice(RootFamily::A, 1).unwrap();
        assert_eq!(a1.rescale(&int(1)).unwrap(), a1);
        assert_eq!(a1.rescale(&int(0)), Err(LatticeError::ZeroScale));
        let u = Lattice::hyperbolic_plane();
        assert_eq!(u.rescale(&int(-1)).unwrap().signature(), Signature { plus: 1, zero: 0, minus: 1 });
        assert_eq!(Lattice::direct_sum(&[]).rank(), 0);
        let s = Lattice::direct_sum(&[u.clone(), e8().rescale(&int(2)).unwrap()]);
        assert_eq!(s.rank(), 10);
        assert_eq!(s.determinant(), int(-256));
        let big = Lattice::direct_sum(&[
            u,
            e8(),
            Lattice::root_lattice(RootFamily::E, 7).unwrap(),
            Lattice::root_lattice(RootFamily::A, 1).unwrap(),
        ]);
        assert_eq!(big.rank(), 18);
        let d4 = Lattice::root_lattice(RootFamily::D, 4).unwrap();
        let three = Lattice::direct_sum(&[d4.clone(), d4.clone(), d4]);
        assert_eq!(three.labels()[4], "d1.2");
        assert_eq!(three.labels()[8], "d1.3");
    }

    #[test]
    fn from_gram_examples() {
        let cd = Lattice::from_gram_unlabeled(IntMatrix::from_rows(&[vec![0, 2], vec![2, -2]])).unwrap();
        assert!(cd.is_even());
        assert_eq!(cd.determinant(), int(-4));
        assert!(cd.is_hyperbolic());
        let u2 = Lattice::hyperbolic_plane_with_section();
        assert_eq!(u2.determinant(), int(-1));
        assert!(u2.is_even());
        assert_eq!(
            Lattice::from_gram_unlabeled(IntMatrix::from_rows(&[vec![0, 1], vec![2, 0]])),
            Err(LatticeError::NotSymmetric)
        );
        assert!(!Lattice::from_gram_unlabeled(IntMatrix::from_rows(&[vec![1]])).unwrap().is_even());
        assert!(e8().is_even());
    }

    #[test]
    fn inner_products() {
        let u = Lattice::hyperbolic_plane();
        let e = u.basis_class("u1").unwrap();
        assert_eq!(u.square(&e).unwrap(), int(0));
        assert!(matches!(
            u.inner(&e, &LatticeClass::from_i64s(&[1, 2, 3])),
            Err(LatticeError::LatticeMismatch { .. })
        ));
    }

    #[test]
    fn discriminant_groups() {
        assert!(Lattice::hyperbolic_plane().discriminant_group().unwrap().invariant_factors.is_empty());
        let e82 = e8().rescale(&int(2)).unwrap();
        let g = e82.discriminant_group().unwrap();
        assert_eq!(g.invariant_factors, vec![int(2); 8]);
        assert_eq!(g.order(), e82.determinant().abs());
        for gen in &g.generators {
            // Each generator pairs integrally with the basis.
            let gram = e82.gram().to_rational();
            for j in 0..8 {
                let p = (0..8).fold(BigRational::zero(), |acc, i| acc + &gen.coords()[i] * gram.get(i, j));
                assert!(p.is_integer());
            }
        }
        let degenerate = Lattice::from_gram_unlabeled(IntMatrix::from_rows(&[vec![0]])).unwrap();
        assert_eq!(degenerate.discriminant_group(), Err(LatticeError::Degenerate));
    }

    #[test]
    fn two_elementary() {
        let u = Lattice::hyperbolic_plane();
        let e82 = e8().rescale(&int(2)).unwrap();
        assert_eq!(Lattice::direct_sum(&[u.clone(), e82.clone()]).two_elementary_invariants().unwrap(), inv(10, 8, 0));
        let a1 = Lattice::root_lattice(RootFamily::A, 1).unwrap();
        assert_eq!(a1.two_elementary_invariants().unwrap(), inv(1, 1, 1));
        let a2 = Lattice::root_lattice(RootFamily::A, 2).unwrap();
        assert!(matches!(a2.two_elementary_invariants(), Err(LatticeError::NotTwoElementary(_))));
        let d4 = Lattice::root_lattice(RootFamily::D, 4).unwrap();
        assert_eq!(
            Lattice::direct_sum(&[u.clone(), d4.clone(), d4.clone(), d4]).two_elementary_invariants().unwrap(),
            inv(14, 6, 0)
        );
        for t in 0..=6usize {
            let mut parts = vec![u.clone(), Lattice::root_lattice(RootFamily::D, 16 - 2 * t).unwrap()];
            parts.extend(std::iter::repeat_n(a1.clone(), t));
            let s = Lattice::direct_sum(&parts);
            let expected = inv(18 - t, 2 + t, u8::from(t > 0));
            assert_eq!(s.two_elementary_invariants().unwrap(), expected, "t = {t}");
        }
    }

    #[test]
    fn dual_bases() {
        let a1 = Lattice::root_lattice(RootFamily::A, 1).unwrap();
        assert_eq!(a1.dual_basis().unwrap().get(0, 0), &BigRational::new(int(-1), int(2)));
        let u = Lattice::hyperbolic_plane();
        assert_eq!(u.dual_basis().unwrap().to_integer().unwrap(), u.gram().clone());
        assert_eq!(u.dual_expression_to_class(&[("u1", 1)]).unwrap(), LatticeClass::from_i64s(&[0, 1]));
        assert!(matches!(a1.dual_expression_to_class(&[("a1", 1)]), Err(LatticeError::NotIntegral { .. })));
        assert_eq!(a1.dual_expression_to_class(&[("a1", 2)]).unwrap(), LatticeClass::from_i64s(&[-1]));
    }

    #[test]
    fn complement_is_primitive() {
        let cd = Lattice::from_gram(IntMatrix::from_rows(&[vec![0, 2], vec![2, -2]]), vec!["c".into(), "d".into()])
            .unwrap();
        let s = Lattice::direct_sum(&[cd, e8().rescale(&int(2)).unwrap()]);
        let c = s.basis_class("c").unwrap();
        let perp = s.orthogonal_complement(std::slice::from_ref(&c)).unwrap();
        assert_eq!(perp.rank(), 9);
        assert!(perp.is_primitive());
        // The radical of c-perp is spanned by c itself.
        let rad = perp.lattice.radical();
        assert_eq!(rad.rows(), 1);
        let r = perp.to_ambient(&LatticeClass::new(rad.row(0).to_vec()));
        assert!(r == c || r == -&c);
        let snf = smith_normal_form(&perp.embedding);
        assert!(snf.d.iter().all(|d| d.is_one()));
    }
}
