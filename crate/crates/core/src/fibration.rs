//! Elliptic fibrations seen through the Picard lattice: fibre components,
//! sections, Shioda-Tate bookkeeping, the Mordell-Weil lattice, and the
//! fixed locus of the canonical involution of a 2-elementary K3.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::Signature;
use crate::lattice::{Lattice, LatticeClass, LatticeError, RootFamily, TwoElemInvariants};
use crate::roots::{self, DynkinComponent, DynkinKind, ExactSearch, RootError, VectorSearch};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationError {
    #[error("class has odd square {0}")]
    OddSquare(BigInt),
    #[error("{0} is not an admissible (r, a, delta)")]
    InadmissibleTriple(TwoElemInvariants),
    #[error("no reducible fibre is predicted for {0}")]
    NotApplicable(TwoElemInvariants),
    #[error("fibre class has square {0}, expected 0")]
    NotIsotropic(BigInt),
    #[error("component #{index} meets the fibre class with multiplicity {value}")]
    ComponentNotPerp { index: usize, value: BigInt },
    #[error("fibre components {members:?} sum to {sum}, not to the fibre class")]
    FiberSumMismatch { members: Vec<usize>, sum: String },
    #[error("components {0:?} do not form a Dynkin diagram")]
    UnrecognizedComponent(Vec<usize>),
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub type Result<T> = std::result::Result<T, FibrationError>;

/// `p_a = x^2 / 2 + 1`.
pub fn arithmetic_genus(lattice: &Lattice, x: &LatticeClass) -> Result<BigInt> {
    let sq = lattice.square(x)?;
    if sq.is_odd() {
        return Err(FibrationError::OddSquare(sq));
    }
    Ok(sq / 2 + 1)
}

/// Whether `(r, a, delta)` satisfies the existence conditions for a
/// 2-elementary even hyperbolic lattice in a K3 lattice.
pub fn is_admissible(inv: &TwoElemInvariants) -> bool {
    let (r, a, delta) = (inv.r, inv.a, inv.delta);
    let basic = (r + a) % 2 == 0 && r >= 1 && a <= r && r <= 20 && (1..=22).contains(&(r + a)) && delta <= 1;
    let even_delta = delta == 1 || (a % 2 == 0 && r % 4 == 2);
    let small_a = match a {
        0 => r % 8 == 2,
        1 => r % 8 == 1 || r % 8 == 3,
        _ => true,
    };
    let forced_odd = !((r, a) == (6, 6) || (r, a) == (14, 8)) || delta == 1;
    basic && even_delta && small_a && forced_odd
}

/// Every admissible triple with `1 <= r <= 20`, sorted.
pub fn admissible_triples() -> Vec<TwoElemInvariants> {
    let mut out = Vec::new();
    for r in 1..=20 {
        for a in 0..=r {
            for delta in 0..=1 {
                let inv = TwoElemInvariants::new(r, a, delta);
                if is_admissible(&inv) {
                    out.push(inv);
                }
            }
        }
    }
    out
}

/// Fixed curve of the canonical involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum FixedLocus {
    /// A genus-`g` curve plus `k` disjoint rational curves.
    CurvePlusRationals { g: i64, k: usize },
    TwoEllipticCurves,
    Empty,
}

pub fn fixed_locus(inv: &TwoElemInvariants) -> Result<FixedLocus> {
    if !is_admissible(inv) {
        return Err(FibrationError::InadmissibleTriple(*inv));
    }
    Ok(match (inv.r, inv.a, inv.delta) {
        (10, 8, 0) => FixedLocus::TwoEllipticCurves,
        (10, 10, 0) => FixedLocus::Empty,
        (r, a, _) => FixedLocus::CurvePlusRationals { g: 11 - ((r + a) / 2) as i64, k: (r - a) / 2 },
    })
}

/// Type of the reducible fibre of the invariant pencil over the second
/// fixed point, for `r + a = 20` and `k >= 1`.
pub fn predicted_fiber_type(inv: &TwoElemInvariants) -> Result<DynkinKind> {
    match fixed_locus(inv)? {
        FixedLocus::CurvePlusRationals { k, .. } if k >= 1 && inv.r + inv.a == 20 => {
            if k == 4 && inv.delta == 0 {
                Ok(DynkinKind::Affine(RootFamily::E, 6))
            } else {
                Ok(DynkinKind::Affine(RootFamily::A, 2 * k - 1))
            }
        }
        _ => Err(FibrationError::NotApplicable(*inv)),
    }
}

#[derive(Debug, Clone)]
pub struct FibrationReport {
    pub fiber_class: LatticeClass,
    pub fibers: Vec<DynkinComponent>,
    pub sections: Vec<LatticeClass>,
    /// `rank S - 2 - sum of fibre root ranks`.
    pub shioda_tate_rank: i64,
    /// Orthogonal complement of the fibre class, the components and the
    /// first section.
    pub mw_lattice: Lattice,
    /// Rank of `mw_lattice` modulo its radical (the radical is nonzero when
    /// there is no section).
    pub mw_rank: usize,
    pub mw_radical_rank: usize,
    pub mw_signature: Signature,
    pub mw_rootless: bool,
}

impl FibrationReport {
    pub fn fiber_kinds(&self) -> Vec<DynkinKind> {
        self.fibers.iter().map(|f| f.kind).collect()
    }
}

pub fn analyze_fibration(
    lattice: &Lattice,
    fiber_class: &LatticeClass,
    components: &[LatticeClass],
    section_candidates: &[LatticeClass],
) -> Result<FibrationReport> {
    analyze_fibration_with(&ExactSearch, lattice, fiber_class, components, section_candidates)
}

pub fn analyze_fibration_with(
    search: &dyn VectorSearch,
    lattice: &Lattice,
    fiber_class: &LatticeClass,
    components: &[LatticeClass],
    section_candidates: &[LatticeClass],
) -> Result<FibrationReport> {
    let sq = lattice.square(fiber_class)?;
    if !sq.is_zero() {
        return Err(FibrationError::NotIsotropic(sq));
    }
    for (index, c) in components.iter().enumerate() {
        let value = lattice.inner(c, fiber_class)?;
        if !value.is_zero() {
            return Err(FibrationError::ComponentNotPerp { index, value });
        }
    }
    let fibers = roots::classify_components(lattice, components)?;
    let mut root_rank = 0usize;
    for f in &fibers {
        match f.kind {
            DynkinKind::Affine(..) => {
                let sum = f.isotropic_sum.as_ref().expect("affine component has a sum");
                if sum != fiber_class {
                    return Err(FibrationError::FiberSumMismatch {
                        members: f.members.clone(),
                        sum: sum.to_string(),
                    });
                }
                root_rank += f.members.len() - 1;
            }
            DynkinKind::Finite(..) => root_rank += f.members.len(),
            DynkinKind::Unrecognized => return Err(FibrationError::UnrecognizedComponent(f.members.clone())),
        }
    }

    let one = BigInt::one();
    let minus_two = BigInt::from(-2);
    let mut sections = Vec::new();
    for s in section_candidates {
        if lattice.inner(s, fiber_class)? == one && lattice.square(s)? == minus_two {
            sections.push(s.clone());
        }
    }

    let mut spanning = vec![fiber_class.clone()];
    spanning.extend(components.iter().cloned());
    spanning.extend(sections.first().cloned());
    let mw = lattice.orthogonal_complement(&spanning)?;
    let mw_lattice = mw.lattice;
    let mw_radical_rank = mw_lattice.radical().rows();
    let mw_signature = mw_lattice.signature();
    let mw_rootless = if mw_signature.plus > 0 {
        false
    } else {
        search.norm_vectors(&mw_lattice, &minus_two)?.is_empty()
    };

    Ok(FibrationReport {
        fiber_class: fiber_class.clone(),
        shioda_tate_rank: lattice.rank() as i64 - 2 - root_rank as i64,
        mw_rank: mw_lattice.rank() - mw_radical_rank,
        mw_radical_rank,
        mw_signature,
        mw_lattice,
        mw_rootless,
        fibers,
        sections,
    })
}

/// The arithmetic evidence for a (-2)-class being an irreducible curve:
/// square -2, degree 2 on the fibre class, and non-negative intersection
/// with the known curves. Not a decision procedure for effectivity.
pub fn effective_root_check(
    lattice: &Lattice,
    alpha: &LatticeClass,
    fiber_class: &LatticeClass,
    known_curves: &[LatticeClass],
) -> Result<bool> {
    if lattice.square(alpha)? != BigInt::from(-2) {
        return Ok(false);
    }
    if lattice.inner(alpha, fiber_class)? != BigInt::from(2) {
        return Ok(false);
    }
    for m in known_curves {
        if lattice.inner(alpha, m)?.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Curves fixed pointwise by the involution (`plus`), curves on which it
/// has two fixed points (`minus`), and the class of the elliptic part of
/// the fixed locus.
#[derive(Debug, Clone)]
pub struct ThetaAssignment {
    pub plus: Vec<(String, LatticeClass)>,
    pub minus: Vec<(String, LatticeClass)>,
    pub invariant_fiber: LatticeClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaCheck {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Pointwise-fixed curves are disjoint from each other and from the fixed
/// elliptic curve; every other curve meets the fixed locus exactly twice,
/// counted with intersection multiplicity.
pub fn verify_theta_types(lattice: &Lattice, assignment: &ThetaAssignment) -> Result<ThetaCheck> {
    let mut violations = Vec::new();
    let c = &assignment.invariant_fiber;
    for (i, (pn, p)) in assignment.plus.iter().enumerate() {
        for (qn, q) in &assignment.plus[i + 1..] {
            let v = lattice.inner(p, q)?;
            if !v.is_zero() {
                violations.push(format!("{pn}.{qn} = {v}, fixed curves must be disjoint"));
            }
        }
        let v = lattice.inner(p, c)?;
        if !v.is_zero() {
            violations.push(format!("{pn}.C = {v}, fixed curves must be disjoint"));
        }
    }
    for (mn, m) in &assignment.minus {
        let mut total = lattice.inner(m, c)?;
        for (_, p) in &assignment.plus {
            total += lattice.inner(m, p)?;
        }
        if total != BigInt::from(2) {
            violations.push(format!("{mn} meets the fixed locus {total} times, expected 2"));
        }
    }
    Ok(ThetaCheck { ok: violations.is_empty(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::expr::parse_lattice;

    fn inv(r: usize, a: usize, delta: u8) -> TwoElemInvariants {
        TwoElemInvariants::new(r, a, delta)
    }

    /// Independent scan of the displayed conditions, one clause at a time.
    fn oracle_count() -> usize {
        let mut count = 0;
        for r in 0..=25usize {
            for a in 0..=25usize {
                for delta in 0..=1u8 {
                    if !(r >= 1 && a <= r && r <= 20 && r + a >= 1 && r + a <= 22 && (r + a) % 2 == 0) {
                        continue;
                    }
                    if delta == 0 && a % 2 != 0 {
                        continue;
                    }
                    if delta == 0 && r % 4 != 2 {
                        continue;
                    }
                    if a == 0 && r % 8 != 2 {
                        continue;
                    }
                    if a == 1 && r % 8 != 1 && r % 8 != 3 {
                        continue;
                    }
                    if r == 6 && a == 6 && delta != 1 {
                        continue;
                    }
                    if r == 14 && a == 8 && delta != 1 {
                        continue;
                    }
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn triples() {
        let all = admissible_triples();
        assert_eq!(all.len(), oracle_count());
        assert!(all.contains(&inv(10, 10, 1)));
        assert!(!all.contains(&inv(6, 6, 0)));
        assert!(!all.contains(&inv(14, 8, 0)));
        assert!(all.iter().all(|t| (t.r + t.a) % 2 == 0));
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn fixed_loci() {
        assert_eq!(fixed_locus(&inv(10, 10, 1)).unwrap(), FixedLocus::CurvePlusRationals { g: 1, k: 0 });
        assert_eq!(fixed_locus(&inv(10, 8, 0)).unwrap(), FixedLocus::TwoEllipticCurves);
        assert_eq!(fixed_locus(&inv(10, 10, 0)).unwrap(), FixedLocus::Empty);
        assert_eq!(fixed_locus(&inv(18, 2, 1)).unwrap(), FixedLocus::CurvePlusRationals { g: 1, k: 8 });
        assert!(matches!(fixed_locus(&inv(6, 6, 0)), Err(FibrationError::InadmissibleTriple(_))));
    }

    #[test]
    fn predicted_types() {
        assert_eq!(predicted_fiber_type(&inv(14, 6, 0)).unwrap(), DynkinKind::Affine(RootFamily::E, 6));
        assert_eq!(predicted_fiber_type(&inv(18, 2, 1)).unwrap(), DynkinKind::Affine(RootFamily::A, 15));
        assert_eq!(predicted_fiber_type(&inv(11, 9, 1)).unwrap(), DynkinKind::Affine(RootFamily::A, 1));
        assert!(matches!(predicted_fiber_type(&inv(10, 10, 1)), Err(FibrationError::NotApplicable(_))));
        assert!(matches!(predicted_fiber_type(&inv(10, 8, 0)), Err(FibrationError::NotApplicable(_))));
    }

    #[test]
    fn genus_formula() {
        let l = parse_lattice("U' + A1").unwrap();
        assert_eq!(arithmetic_genus(&l, &LatticeClass::from_i64s(&[0, 1, 0])).unwrap(), BigInt::zero());
        assert_eq!(arithmetic_genus(&l, &LatticeClass::from_i64s(&[1, 0, 0])).unwrap(), BigInt::one());
        let odd = Lattice::from_gram_unlabeled(crate::exact::IntMatrix::from_rows(&[vec![1]])).unwrap();
        assert!(matches!(
            arithmetic_genus(&odd, &LatticeClass::from_i64s(&[1])),
            Err(FibrationError::OddSquare(_))
        ));
    }

    #[test]
    fn a1_pair_fibration() {
        // U' + E8(2) + A1 with the pencil |c| and the A1-tilde fibre {f1, c - f1}.
        let l = parse_lattice("U' + E8(2) + A1").unwrap();
        let c = LatticeClass::unit(11, 0);
        let d = LatticeClass::unit(11, 1);
        let f1 = LatticeClass::unit(11, 10);
        let f2 = &c - &f1;
        let report = analyze_fibration(&l, &c, &[f1.clone(), f2.clone()], std::slice::from_ref(&d)).unwrap();
        assert_eq!(report.fiber_kinds(), vec![DynkinKind::Affine(RootFamily::A, 1)]);
        assert_eq!(report.sections, vec![d]);
        assert_eq!(report.shioda_tate_rank, 8);
        assert_eq!(report.mw_rank, 8);
        assert_eq!(report.mw_radical_rank, 0);
        assert!(report.mw_rootless);

        assert!(matches!(
            analyze_fibration(&l, &f1, &[], &[]),
            Err(FibrationError::NotIsotropic(_))
        ));
        let e1 = LatticeClass::unit(11, 2);
        let bad = &f1 + &e1;
        assert!(analyze_fibration(&l, &c, &[bad], &[]).is_err());
        assert!(matches!(
            analyze_fibration(&l, &(2 * &c), &[f1.clone(), f2], &[]),
            Err(FibrationError::FiberSumMismatch { .. })
        ));
    }

    #[test]
    fn no_section_leaves_radical() {
        let l = parse_lattice("gram[[0,2],[2,-2]] + E8(2)").unwrap();
        let c = LatticeClass::unit(10, 0);
        let d = LatticeClass::unit(10, 1);
        let report = analyze_fibration(&l, &c, &[], &[d]).unwrap();
        assert!(report.sections.is_empty());
        assert_eq!(report.mw_radical_rank, 1);
        assert_eq!(report.mw_rank, 8);
        assert_eq!(report.shioda_tate_rank, 8);
        assert!(report.mw_rootless);
    }

    #[test]
    fn theta_violations_are_reported() {
        let l = parse_lattice("U' + E8(2) + A1").unwrap();
        let c = LatticeClass::unit(11, 0);
        let d = LatticeClass::unit(11, 1);
        let f1 = LatticeClass::unit(11, 10);
        let f2 = &c - &f1;
        let good = ThetaAssignment {
            plus: vec![("f2".into(), f2.clone())],
            minus: vec![("d".into(), d.clone()), ("f1".into(), f1.clone())],
            invariant_fiber: c.clone(),
        };
        assert!(verify_theta_types(&l, &good).unwrap().ok);
        let bad = ThetaAssignment {
            plus: vec![("f1".into(), f1), ("f2".into(), f2)],
            minus: vec![("d".into(), d)],
            invariant_fiber: c,
        };
        let check = verify_theta_types(&l, &bad).unwrap();
        assert!(!check.ok);
        assert!(!check.violations.is_empty());
    }
}
