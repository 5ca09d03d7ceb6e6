use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Integer coordinate vector of an element of a lattice, in that lattice's
/// basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeClass {
    coords: Vec<BigInt>,
}

impl LatticeClass {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeClass { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        LatticeClass { coords: coords.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn zero(rank: usize) -> Self {
        LatticeClass { coords: vec![BigInt::zero(); rank] }
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.coords[i] = BigInt::from(1);
        c
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Representative of `{x, -x}` whose first nonzero coordinate is positive.
    pub fn canonical_sign(self) -> Self {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -&self,
            _ => self,
        }
    }

    /// Formats as a combination of the given basis labels, e.g. `6e+3d-2f1`.
    pub fn format_with(&self, labels: &[String]) -> String {
        let mut out = String::new();
        for (c, l) in self.coords.iter().zip(labels) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else if out.is_empty() { "" } else { "+" };
            if mag == BigInt::from(1) {
                out.push_str(&format!("{sign}{l}"));
            } else {
                out.push_str(&format!("{sign}{mag}{l}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &LatticeClass {
    type Output = LatticeClass;
    fn add(self, rhs: &LatticeClass) -> LatticeClass {
        assert_eq!(self.len(), rhs.len(), "rank mismatch");
        LatticeClass { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &LatticeClass {
    type Output = LatticeClass;
    fn sub(self, rhs: &LatticeClass) -> LatticeClass {
        assert_eq!(self.len(), rhs.len(), "rank mismatch");
        LatticeClass { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &LatticeClass {
    type Output = LatticeClass;
    fn neg(self) -> LatticeClass {
        LatticeClass { coords: self.coords.iter().map(|a| -a).collect() }
    }
}

impl Mul<&LatticeClass> for &BigInt {
    type Output = LatticeClass;
    fn mul(self, rhs: &LatticeClass) -> LatticeClass {
        LatticeClass { coords: rhs.coords.iter().map(|a| a * self).collect() }
    }
}

impl Mul<&LatticeClass> for i64 {
    type Output = LatticeClass;
    fn mul(self, rhs: &LatticeClass) -> LatticeClass {
        &BigInt::from(self) * rhs
    }
}

/// Element of `S (x) Q`, typically of the dual lattice `S*`, in the basis of
/// `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualVector {
    coords: Vec<BigRational>,
}

impl DualVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        DualVector { coords }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }
}
