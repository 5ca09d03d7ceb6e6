//! The worked K3 cases as data, and a verifier that re-derives every stated
//! number (invariants, classes, fibre types, Mordell-Weil ranks) from the
//! lattice alone.

mod cases;
mod verify;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lattice::{Lattice, LatticeClass, TwoElemInvariants};
use crate::roots::DynkinKind;

pub use self::verify::{verify, verify_all, verify_cases, verify_cases_with, verify_with, CaseReport, Check, VerifySummary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown case `{0}`")]
pub struct UnknownCase(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    /// `<(0 2 / 2 -2)> + E8(2)`, invariants (10, 10, 1).
    S3,
    /// `U + E8(2)`, invariants (10, 8, 0).
    S4,
    /// `U + E8(2) + A1`, invariants (11, 9, 1).
    S5,
    /// `U + D_{16-2t} + tA1`, `t = 0..=6`.
    S6(u8),
    /// `U + E8 + E7 + A1`, invariants (18, 2, 1).
    S7,
    /// `U + 3D4`, invariants (14, 6, 0).
    S8,
}

impl CaseId {
    pub fn all() -> Vec<CaseId> {
        let mut out = vec![CaseId::S3, CaseId::S4, CaseId::S5];
        out.extend((0..=6).map(CaseId::S6));
        out.extend([CaseId::S7, CaseId::S8]);
        out
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseId::S3 => f.write_str("s3_10_10_1"),
            CaseId::S4 => f.write_str("s4_10_8_0"),
            CaseId::S5 => f.write_str("s5_11_9_1"),
            CaseId::S6(t) => write!(f, "s6_t={t}"),
            CaseId::S7 => f.write_str("s7_18_2_1"),
            CaseId::S8 => f.write_str("s8_14_6_0"),
        }
    }
}

impl FromStr for CaseId {
    type Err = UnknownCase;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::all().into_iter().find(|id| id.to_string() == s).ok_or_else(|| UnknownCase(s.to_string()))
    }
}

/// An expected value together with the statement it comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sourced<T> {
    pub value: T,
    pub source: String,
}

pub(crate) fn sourced<T>(value: T, source: impl Into<String>) -> Sourced<T> {
    Sourced { value, source: source.into() }
}

/// A fibre expected in a pencil: its type and the multiplicity of each
/// named component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedFiber {
    pub kind: DynkinKind,
    pub marks: Vec<(String, i64)>,
}

/// An elliptic pencil `|fiber|` with named fibre components and candidate
/// sections.
#[derive(Debug, Clone)]
pub struct PencilSpec {
    pub fiber: String,
    pub components: Vec<String>,
    pub section_candidates: Vec<String>,
    pub fibers: Sourced<Vec<ExpectedFiber>>,
    pub section_count: Sourced<usize>,
    pub shioda_tate_rank: Sourced<i64>,
    pub mw_rank: Sourced<usize>,
    pub mw_rootless: Sourced<bool>,
    /// The pencil preserved by the involution, whose reducible fibre type is
    /// predicted from `(r, a, delta)`.
    pub invariant: bool,
}

/// `sum coeff * basis_label^*` over the dual basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualFormula {
    pub text: String,
    pub terms: Vec<(String, i64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimKind {
    /// Sublattice spanned by the named classes.
    Span,
    /// Orthogonal complement of the named classes.
    Perp,
}

/// A stated property of a sublattice: its rank and, optionally, that it has
/// no vectors of square -2 (modulo its radical).
#[derive(Debug, Clone)]
pub struct LatticeClaim {
    pub name: String,
    pub kind: ClaimKind,
    pub classes: Vec<String>,
    pub rank: Sourced<usize>,
    pub radical_rank: usize,
    pub rootless: Option<Sourced<bool>>,
}

#[derive(Debug, Clone)]
pub struct ThetaSpec {
    pub plus: Sourced<Vec<String>>,
    pub minus: Vec<String>,
    /// Class of the elliptic part of the fixed locus, as a combination of
    /// named classes.
    pub fixed_curve: Vec<(String, i64)>,
}

#[derive(Debug, Clone)]
pub struct AlphaSpec {
    pub name: String,
    pub fiber: String,
    pub known_curves: Vec<String>,
    pub source: String,
}

#[derive(Debug, Clone)]
pub struct PairingSpec {
    pub left: String,
    pub right: String,
    pub value: Sourced<i64>,
}

#[derive(Debug, Clone)]
pub struct CaseScenario {
    pub id: CaseId,
    pub lattice: Lattice,
    /// Basis vectors and every derived class, by name.
    pub classes: Vec<(String, LatticeClass)>,
    pub invariants: Sourced<TwoElemInvariants>,
    /// Candidate dual-basis formulas for `c`, tried in order. Empty when `c`
    /// is a basis vector.
    pub c_formulas: Vec<DualFormula>,
    pub c_expansion: Option<Sourced<Vec<(String, i64)>>>,
    /// The formula that produced the `c` stored in `classes`.
    pub c_variant: Option<String>,
    pub pencils: Vec<PencilSpec>,
    pub pairings: Vec<PairingSpec>,
    pub theta: ThetaSpec,
    pub alpha: Option<AlphaSpec>,
    pub claims: Vec<LatticeClaim>,
}

impl CaseScenario {
    pub fn class(&self, name: &str) -> Option<&LatticeClass> {
        self.classes.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    /// Every expectation paired with its source, for auditing.
    pub fn expectation_sources(&self) -> Vec<(String, String)> {
        let mut out = vec![("invariants".to_string(), self.invariants.source.clone())];
        if let Some(e) = &self.c_expansion {
            out.push(("c expansion".into(), e.source.clone()));
        }
        for p in &self.pencils {
            let tag = format!("|{}|", p.fiber);
            out.push((format!("{tag} fibres"), p.fibers.source.clone()));
            out.push((format!("{tag} sections"), p.section_count.source.clone()));
            out.push((format!("{tag} Shioda-Tate"), p.shioda_tate_rank.source.clone()));
            out.push((format!("{tag} MW rank"), p.mw_rank.source.clone()));
            out.push((format!("{tag} MW rootless"), p.mw_rootless.source.clone()));
        }
        for p in &self.pairings {
            out.push((format!("{}.{}", p.left, p.right), p.value.source.clone()));
        }
        out.push(("plus classes".into(), self.theta.plus.source.clone()));
        if let Some(a) = &self.alpha {
            out.push((a.name.clone(), a.source.clone()));
        }
        for c in &self.claims {
            out.push((format!("{} rank", c.name), c.rank.source.clone()));
            if let Some(r) = &c.rootless {
                out.push((format!("{} rootless", c.name), r.source.clone()));
            }
        }
        out
    }
}

pub use self::cases::case;
