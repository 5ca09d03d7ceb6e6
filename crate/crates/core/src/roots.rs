//! Vectors of prescribed norm in negative (semi)definite lattices, and
//! recognition of finite and affine Dynkin diagrams among (-2)-classes.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{self, IntMatrix};
use crate::lattice::{Lattice, LatticeClass, LatticeError, RootFamily};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("lattice has a positive direction (signature {0})")]
    IndefiniteLattice(String),
    #[error("target norm must be negative, got {0}")]
    InvalidNorm(BigInt),
    #[error("class #{index} has square {square}, not -2")]
    NotARoot { index: usize, square: BigInt },
    #[error("classes #{i} and #{j} have negative inner product {value}")]
    NegativePairing { i: usize, j: usize, value: BigInt },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// All vectors of one norm, one representative per `{x, -x}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootList {
    pub norm: BigInt,
    /// Sorted lexicographically; first nonzero coordinate positive.
    pub vectors: Vec<LatticeClass>,
}

impl RootList {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Source of norm-vector enumerations. The exact search is the only real
/// implementation; the trait exists so callers can substitute one in tests.
pub trait VectorSearch: Sync {
    fn norm_vectors(&self, lattice: &Lattice, norm: &BigInt) -> Result<RootList, RootError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ExactSearch;

impl VectorSearch for ExactSearch {
    fn norm_vectors(&self, lattice: &Lattice, norm: &BigInt) -> Result<RootList, RootError> {
        enumerate_norm_vectors(lattice, norm)
    }
}

/// Enumerates `{x : x^2 = norm}` in a negative definite lattice. For a
/// negative semidefinite lattice the search runs in the quotient by the
/// radical, and the returned vectors are representatives of those classes.
pub fn enumerate_norm_vectors(lattice: &Lattice, norm: &BigInt) -> Result<RootList, RootError> {
    if !norm.is_negative() {
        return Err(RootError::InvalidNorm(norm.clone()));
    }
    let sig = lattice.signature();
    if sig.plus > 0 {
        return Err(RootError::IndefiniteLattice(sig.to_string()));
    }
    let n = lattice.rank();
    let radical = lattice.radical();
    let quotient_basis = if radical.rows() == 0 {
        IntMatrix::identity(n)
    } else {
        exact::complete_to_basis(&radical).map_err(LatticeError::from)?
    };
    let q = quotient_basis
        .mul(lattice.gram())
        .and_then(|m| m.mul(&quotient_basis.transpose()))
        .map_err(LatticeError::from)?
        .scale(&BigInt::from(-1));
    let target = -norm;

    let mut found = BTreeSet::new();
    for x in positive_definite_shell(&q, &target) {
        let coords: Vec<BigInt> = (0..n)
            .map(|j| x.iter().enumerate().map(|(i, c)| c * quotient_basis.get(i, j)).sum())
            .collect();
        found.insert(LatticeClass::new(coords).canonical_sign());
    }
    Ok(RootList { norm: norm.clone(), vectors: found.into_iter().collect() })
}

/// All nonzero `x` with `x^T q x = target`, for positive definite `q`.
///
/// Writes `q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2` exactly and walks
/// the coordinates from the last one down, keeping each partial sum within
/// the remaining budget.
fn positive_definite_shell(q: &IntMatrix, target: &BigInt) -> Vec<Vec<BigInt>> {
    let n = q.rows();
    if n == 0 {
        return Vec::new();
    }
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| q.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut d = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let p = a[i][i].clone();
        assert!(p.is_positive(), "form is not positive definite");
        for j in i + 1..n {
            mu[i][j] = &a[i][j] / &p;
        }
        for k in i + 1..n {
            for l in i + 1..n {
                let delta = &a[k][i] * &a[i][l] / &p;
                a[k][l] -= delta;
            }
        }
        d.push(p);
    }

    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    let budget = BigRational::from_integer(target.clone());
    shell_level(n - 1, &budget, &d, &mu, &mut x, &mut out);
    out
}

fn shell_level(
    i: usize,
    budget: &BigRational,
    d: &[BigRational],
    mu: &[Vec<BigRational>],
    x: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
) {
    let n = x.len();
    let center = -(i + 1..n).fold(BigRational::zero(), |acc, j| {
        acc + &mu[i][j] * BigRational::from_integer(x[j].clone())
    });
    // floor(sqrt(y)) = floor(sqrt(floor(y))) for y >= 0.
    let radius: BigInt = (budget / &d[i]).floor().to_integer().sqrt();
    let lo: BigInt = center.floor().to_integer() - &radius - 1;
    let hi: BigInt = center.ceil().to_integer() + &radius + 1;
    let mut v = lo;
    while v <= hi {
        let off = BigRational::from_integer(v.clone()) - &center;
        let used = &d[i] * &off * &off;
        if &used <= budget {
            let rest = budget - used;
            x[i] = v.clone();
            if i == 0 {
                if rest.is_zero() && x.iter().any(|c| !c.is_zero()) {
                    out.push(x.clone());
                }
            } else {
                shell_level(i - 1, &rest, d, mu, x, out);
            }
        }
        v += 1;
    }
    x[i] = BigInt::zero();
}

/// Finite (`A3`) or affine (`At3`, "A-tilde") Dynkin type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinKind {
    Finite(RootFamily, usize),
    Affine(RootFamily, usize),
    Unrecognized,
}

impl DynkinKind {
    pub fn is_affine(&self) -> bool {
        matches!(self, DynkinKind::Affine(..))
    }

    /// Number of nodes in the diagram, when recognised.
    pub fn node_count(&self) -> Option<usize> {
        match self {
            DynkinKind::Finite(_, n) => Some(*n),
            DynkinKind::Affine(_, n) => Some(n + 1),
            DynkinKind::Unrecognized => None,
        }
    }
}

impl fmt::Display for DynkinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinKind::Finite(fam, n) => write!(f, "{fam}{n}"),
            DynkinKind::Affine(fam, n) => write!(f, "{fam}t{n}"),
            DynkinKind::Unrecognized => f.write_str("unrecognized"),
        }
    }
}

impl FromStr for DynkinKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "unrecognized" {
            return Ok(DynkinKind::Unrecognized);
        }
        let mut chars = s.chars();
        let family = match chars.next() {
            Some('A') => RootFamily::A,
            Some('D') => RootFamily::D,
            Some('E') => RootFamily::E,
            _ => return Err(format!("bad Dynkin kind `{s}`")),
        };
        let rest = chars.as_str();
        let (affine, digits) = match rest.strip_prefix('t') {
            Some(d) => (true, d),
            None => (false, rest),
        };
        let n: usize = digits.parse().map_err(|_| format!("bad Dynkin kind `{s}`"))?;
        Ok(if affine { DynkinKind::Affine(family, n) } else { DynkinKind::Finite(family, n) })
    }
}

impl Serialize for DynkinKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DynkinKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A connected set of (-2)-classes and its diagram type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinComponent {
    /// Positions of the members in the classifier's input.
    pub members: Vec<usize>,
    pub classes: Vec<LatticeClass>,
    pub kind: DynkinKind,
    /// Affine only: positive primitive kernel vector of the member gram.
    pub marks: Option<Vec<BigInt>>,
    /// Affine only: `sum marks_i * classes_i`, an isotropic class.
    pub isotropic_sum: Option<LatticeClass>,
}

/// Splits (-2)-classes into connected components by nonzero intersection
/// and identifies each component's Dynkin type.
pub fn classify_components(lattice: &Lattice, classes: &[LatticeClass]) -> Result<Vec<DynkinComponent>, RootError> {
    let n = classes.len();
    let minus_two = BigInt::from(-2);
    let mut pair = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = lattice.inner(&classes[i], &classes[j])?;
            if i == j {
                if v != minus_two {
                    return Err(RootError::NotARoot { index: i, square: v });
                }
            } else if v.is_negative() {
                return Err(RootError::NegativePairing { i, j, value: v });
            }
            pair[i][j] = v.clone();
            pair[j][i] = v;
        }
    }

    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            members.push(v);
            for w in 0..n {
                if !seen[w] && w != v && !pair[v][w].is_zero() {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        components.push(build_component(lattice, classes, &pair, members));
    }
    Ok(components)
}

fn build_component(
    lattice: &Lattice,
    classes: &[LatticeClass],
    pair: &[Vec<BigInt>],
    members: Vec<usize>,
) -> DynkinComponent {
    let sub = IntMatrix::from_fn(members.len(), members.len(), |i, j| pair[members[i]][members[j]].clone());
    let mut kind = diagram_shape(&sub);
    let member_classes: Vec<LatticeClass> = members.iter().map(|&i| classes[i].clone()).collect();
    let (mut marks, mut isotropic_sum) = (None, None);
    if kind.is_affine() {
        match affine_marks(&sub) {
            Some(m) => {
                let mut sum = LatticeClass::zero(lattice.rank());
                for (k, c) in m.iter().zip(&member_classes) {
                    sum = &sum + &(k * c);
                }
                marks = Some(m);
                isotropic_sum = Some(sum);
            }
            None => kind = DynkinKind::Unrecognized,
        }
    }
    DynkinComponent { members, classes: member_classes, kind, marks, isotropic_sum }
}

fn affine_marks(gram: &IntMatrix) -> Option<Vec<BigInt>> {
    let kernel = exact::integer_kernel(gram);
    if kernel.rows() != 1 {
        return None;
    }
    let mut v = kernel.row(0).to_vec();
    if v.iter().any(Signed::is_negative) {
        v.iter_mut().for_each(|x| *x = -&*x);
    }
    v.iter().all(Signed::is_positive).then_some(v)
}

/// Reads the Dynkin type off the intersection graph of a connected set of
/// roots (gram has -2 on the diagonal, non-negative elsewhere).
fn diagram_shape(gram: &IntMatrix) -> DynkinKind {
    let n = gram.rows();
    let mut adj = vec![Vec::new(); n];
    let mut edges = 0;
    for i in 0..n {
        for j in i + 1..n {
            let w = gram.get(i, j);
            if w.is_zero() {
                continue;
            }
            if !w.is_one() {
                return if n == 2 && w == &BigInt::from(2) {
                    DynkinKind::Affine(RootFamily::A, 1)
                } else {
                    DynkinKind::Unrecognized
                };
            }
            adj[i].push(j);
            adj[j].push(i);
            edges += 1;
        }
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();

    if edges == n && n >= 3 && degree.iter().all(|&d| d == 2) {
        return DynkinKind::Affine(RootFamily::A, n - 1);
    }
    if edges + 1 != n {
        return DynkinKind::Unrecognized;
    }
    let branches: Vec<usize> = (0..n).filter(|&v| degree[v] >= 3).collect();
    match branches.as_slice() {
        [] => DynkinKind::Finite(RootFamily::A, n),
        [b] if degree[*b] == 4 => {
            if n == 5 {
                DynkinKind::Affine(RootFamily::D, 4)
            } else {
                DynkinKind::Unrecognized
            }
        }
        [b] if degree[*b] == 3 => {
            let mut arms: Vec<usize> = adj[*b].iter().map(|&s| arm_length(&adj, *b, s)).collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, k] => DynkinKind::Finite(RootFamily::D, k + 3),
                [1, 2, 2] => DynkinKind::Finite(RootFamily::E, 6),
                [1, 2, 3] => DynkinKind::Finite(RootFamily::E, 7),
                [1, 2, 4] => DynkinKind::Finite(RootFamily::E, 8),
                [2, 2, 2] => DynkinKind::Affine(RootFamily::E, 6),
                [1, 3, 3] => DynkinKind::Affine(RootFamily::E, 7),
                [1, 2, 5] => DynkinKind::Affine(RootFamily::E, 8),
                _ => DynkinKind::Unrecognized,
            }
        }
        [b1, b2] if degree[*b1] == 3 && degree[*b2] == 3 => {
            let leaves = |b: usize| adj[b].iter().filter(|&&w| degree[w] == 1).count();
            if leaves(*b1) == 2 && leaves(*b2) == 2 {
                DynkinKind::Affine(RootFamily::D, n - 1)
            } else {
                DynkinKind::Unrecognized
            }
        }
        _ => DynkinKind::Unrecognized,
    }
}

/// Number of nodes on the path leaving `from` through `start`, up to a leaf.
fn arm_length(adj: &[Vec<usize>], from: usize, start: usize) -> usize {
    let (mut prev, mut cur, mut len) = (from, start, 1);
    loop {
        let next: Vec<usize> = adj[cur].iter().copied().filter(|&w| w != prev).collect();
        match next.as_slice() {
            [w] => {
                prev = cur;
                cur = *w;
                len += 1;
            }
            _ => return len,
        }
    }
}

/// Largest absolute coordinate needed to contain every vector of
/// `x^T q x <= bound` for positive definite `q`: `sqrt(bound * (q^-1)_ii)`.
pub fn coordinate_box(q: &IntMatrix, bound: &BigInt) -> Vec<BigInt> {
    let inv = exact::rational_inverse(q).expect("positive definite form is invertible");
    (0..q.rows())
        .map(|i| {
            let r = inv.get(i, i) * BigRational::from_integer(bound.clone());
            r.floor().to_integer().sqrt()
        })
        .collect()
}
