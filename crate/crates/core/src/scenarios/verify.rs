use std::fmt::Display;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{case, CaseId, CaseScenario, ClaimKind, ExpectedFiber, LatticeClaim, PencilSpec};
use crate::exact::{smith_normal_form, IntMatrix};
use crate::fibration::{
    analyze_fibration_with, arithmetic_genus, effective_root_check, fixed_locus, is_admissible,
    predicted_fiber_type, verify_theta_types, FibrationError, FibrationReport, FixedLocus, ThetaAssignment,
};
use crate::lattice::{Lattice, LatticeClass};
use crate::roots::{ExactSearch, VectorSearch};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl CaseReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Reports for a selection of cases and the aggregate verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub cases: Vec<CaseReport>,
    pub passed: usize,
    pub total: usize,
    pub pass: bool,
}

impl VerifySummary {
    pub fn new(cases: Vec<CaseReport>) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        let total = cases.len();
        VerifySummary { cases, passed, total, pass: passed == total }
    }
}

pub fn verify(scenario: &CaseScenario) -> CaseReport {
    verify_with(&ExactSearch, scenario)
}

/// Runs every check of a scenario. Errors are reported as failed checks.
pub fn verify_with(search: &dyn VectorSearch, scenario: &CaseScenario) -> CaseReport {
    let mut v = Verifier { scn: scenario, search, checks: Vec::new() };
    v.lattice_checks();
    v.c_checks();
    for p in &scenario.pencils {
        v.pencil_checks(p);
    }
    v.pairing_checks();
    v.theta_checks();
    v.alpha_check();
    for c in &scenario.claims {
        v.claim_checks(c);
    }
    let checks = v.checks;
    CaseReport { case: scenario.id.to_string(), pass: checks.iter().all(|c| c.pass), checks }
}

/// Builds and verifies the listed cases in parallel; output order follows `ids`.
pub fn verify_cases(ids: &[CaseId]) -> Vec<CaseReport> {
    verify_cases_with(&ExactSearch, ids)
}

pub fn verify_cases_with(search: &dyn VectorSearch, ids: &[CaseId]) -> Vec<CaseReport> {
    ids.par_iter().map(|id| verify_with(search, &case(*id))).collect()
}

pub fn verify_all() -> Vec<CaseReport> {
    verify_cases(&CaseId::all())
}

type Outcome = Result<(String, bool), String>;

struct Verifier<'a> {
    scn: &'a CaseScenario,
    search: &'a dyn VectorSearch,
    checks: Vec<Check>,
}

impl Verifier<'_> {
    fn lattice(&self) -> &Lattice {
        &self.scn.lattice
    }

    fn push(&mut self, name: impl Into<String>, source: &str, expected: impl Display, outcome: Outcome) {
        let (actual, pass) = match outcome {
            Ok(x) => x,
            Err(e) => (format!("error: {e}"), false),
        };
        self.checks.push(Check {
            name: name.into(),
            pass,
            expected: expected.to_string(),
            actual,
            source: source.to_string(),
        });
    }

    fn class(&self, name: &str) -> Result<LatticeClass, String> {
        let c = self.scn.class(name).ok_or_else(|| format!("no class named {name}"))?;
        if c.len() != self.lattice().rank() {
            return Err(format!("class {name} has {} coordinates, lattice rank is {}", c.len(), self.lattice().rank()));
        }
        Ok(c.clone())
    }

    fn classes(&self, names: &[String]) -> Result<Vec<LatticeClass>, String> {
        names.iter().map(|n| self.class(n)).collect()
    }

    fn combo(&self, terms: &[(String, i64)]) -> Result<LatticeClass, String> {
        let mut out = LatticeClass::zero(self.lattice().rank());
        for (name, k) in terms {
            out = &out + &(*k * &self.class(name)?);
        }
        Ok(out)
    }

    fn fmt(&self, c: &LatticeClass) -> String {
        c.format_with(self.lattice().labels())
    }

    fn lattice_checks(&mut self) {
        let src = self.scn.invariants.source.clone();
        let even = self.lattice().is_even();
        self.push("lattice is even", &src, true, Ok((even.to_string(), even)));
        let sig = self.lattice().signature();
        let expected_sig = format!("(1, 0, {})", self.lattice().rank().saturating_sub(1));
        let hyp = self.lattice().is_hyperbolic();
        self.push("signature is hyperbolic", &src, &expected_sig, Ok((sig.to_string(), hyp)));

        let expected = self.scn.invariants.value;
        let got = self.lattice().two_elementary_invariants().map_err(|e| e.to_string());
        self.push("(r, a, delta)", &src, expected, got.map(|inv| (inv.to_string(), inv == expected)));
        let adm = is_admissible(&expected);
        self.push("admissible triple", &src, true, Ok((adm.to_string(), adm)));

        let fixed_src = "p_a(C) = C^2/2 + 1 for the elliptic part C of the fixed locus";
        let outcome = (|| -> Outcome {
            let g = match fixed_locus(&expected).map_err(|e| e.to_string())? {
                FixedLocus::CurvePlusRationals { g, .. } => g,
                FixedLocus::TwoEllipticCurves => 1,
                FixedLocus::Empty => return Ok(("empty fixed locus".into(), true)),
            };
            let c = self.combo(&self.scn.theta.fixed_curve)?;
            let pa = arithmetic_genus(self.lattice(), &c).map_err(|e| e.to_string())?;
            Ok((format!("p_a = {pa}"), pa == BigInt::from(g)))
        })();
        let expected_g = match fixed_locus(&expected) {
            Ok(FixedLocus::CurvePlusRationals { g, .. }) => format!("p_a = {g}"),
            Ok(FixedLocus::TwoEllipticCurves) => "p_a = 1".into(),
            Ok(FixedLocus::Empty) => "empty fixed locus".into(),
            Err(e) => format!("error: {e}"),
        };
        self.push("fixed curve genus", fixed_src, expected_g, outcome);
    }

    fn c_checks(&mut self) {
        if self.scn.c_formulas.is_empty() {
            return;
        }
        let src = self.scn.c_expansion.as_ref().map(|e| e.source.clone()).unwrap_or_default();
        let mut accepted = None;
        let mut notes = Vec::new();
        for f in &self.scn.c_formulas {
            let terms: Vec<(&str, i64)> = f.terms.iter().map(|(l, k)| (l.as_str(), *k)).collect();
            match self.lattice().dual_expression_to_class(&terms) {
                Err(e) => notes.push(format!("rejected {}: {e}", f.text)),
                Ok(c) => match self.lattice().square(&c) {
                    Ok(sq) if sq.is_zero() && accepted.is_none() => {
                        notes.push(format!("accepted {}", f.text));
                        accepted = Some(c);
                    }
                    Ok(sq) if sq.is_zero() => notes.push(format!("also valid {}", f.text)),
                    Ok(sq) => notes.push(format!("rejected {}: square {sq}", f.text)),
                    Err(e) => notes.push(format!("rejected {}: {e}", f.text)),
                },
            }
        }
        let ok = accepted.is_some();
        self.push("c from dual basis", &src, "an integral isotropic class", Ok((notes.join("; "), ok)));

        let outcome = self.class("c").and_then(|c| {
            let sq = self.lattice().square(&c).map_err(|e| e.to_string())?;
            Ok((sq.to_string(), sq.is_zero()))
        });
        self.push("c^2", &src, 0, outcome);

        if let Some(exp) = &self.scn.c_expansion {
            let outcome = (|| -> Outcome {
                let want = self.combo(&exp.value)?;
                let c = self.class("c")?;
                let same_as_dual = accepted.as_ref() == Some(&c);
                Ok((self.fmt(&c), c == want && same_as_dual))
            })();
            let expected = self.combo(&exp.value).map(|x| self.fmt(&x)).unwrap_or_else(|e| e);
            self.push("c expansion", &exp.source, expected, outcome);
        }
    }

    fn pencil_checks(&mut self, p: &PencilSpec) {
        let tag = format!("|{}|", p.fiber);
        let analysis = (|| -> Result<FibrationReport, String> {
            let f = self.class(&p.fiber)?;
            let comps = self.classes(&p.components)?;
            let secs = self.classes(&p.section_candidates)?;
            analyze_fibration_with(self.search, self.lattice(), &f, &comps, &secs).map_err(|e| e.to_string())
        })();

        let expected_fibers = describe_expected(&p.fibers.value);
        let r = match analysis {
            Ok(r) => r,
            Err(e) => {
                self.push(format!("{tag} fibres"), &p.fibers.source, expected_fibers, Err(e.clone()));
                self.push(format!("{tag} sections"), &p.section_count.source, p.section_count.value, Err(e.clone()));
                self.push(format!("{tag} Shioda-Tate rank"), &p.shioda_tate_rank.source, p.shioda_tate_rank.value, Err(e.clone()));
                self.push(format!("{tag} MW rank"), &p.mw_rank.source, p.mw_rank.value, Err(e.clone()));
                self.push(format!("{tag} MW rootless"), &p.mw_rootless.source, p.mw_rootless.value, Err(e));
                return;
            }
        };

        let actual_fibers = self.describe_actual(p, &r);
        let same = actual_fibers == expected_fibers;
        self.push(format!("{tag} fibres"), &p.fibers.source, expected_fibers, Ok((actual_fibers, same)));
        let n = r.sections.len();
        self.push(
            format!("{tag} sections"),
            &p.section_count.source,
            p.section_count.value,
            Ok((n.to_string(), n == p.section_count.value)),
        );
        let st = r.shioda_tate_rank;
        self.push(
            format!("{tag} Shioda-Tate rank"),
            &p.shioda_tate_rank.source,
            p.shioda_tate_rank.value,
            Ok((st.to_string(), st == p.shioda_tate_rank.value)),
        );
        let mw = r.mw_rank;
        self.push(format!("{tag} MW rank"), &p.mw_rank.source, p.mw_rank.value, Ok((mw.to_string(), mw == p.mw_rank.value)));
        let sig = r.mw_signature;
        let definite = sig.plus == 0 && sig.zero == r.mw_radical_rank;
        self.push(
            format!("{tag} MW negative definite mod radical"),
            &p.mw_rank.source,
            format!("(0, {}, {})", r.mw_radical_rank, mw),
            Ok((sig.to_string(), definite)),
        );
        self.push(
            format!("{tag} MW rootless"),
            &p.mw_rootless.source,
            p.mw_rootless.value,
            Ok((r.mw_rootless.to_string(), r.mw_rootless == p.mw_rootless.value)),
        );

        if p.invariant {
            let inv = self.scn.invariants.value;
            let affine: Vec<String> = r.fibers.iter().filter(|f| f.kind.is_affine()).map(|f| f.kind.to_string()).collect();
            let src = "reducible fibre type of the invariant pencil from (r, a, delta)";
            match predicted_fiber_type(&inv) {
                Ok(kind) => {
                    let ok = affine.iter().any(|k| *k == kind.to_string());
                    self.push(format!("{tag} predicted fibre type"), src, kind, Ok((affine.join(", "), ok)));
                }
                Err(FibrationError::NotApplicable(_)) => {
                    let ok = affine.is_empty();
                    self.push(format!("{tag} predicted fibre type"), src, "no reducible fibre", Ok((affine.join(", "), ok)));
                }
                Err(e) => self.push(format!("{tag} predicted fibre type"), src, "a fibre type", Err(e.to_string())),
            }
        }
    }

    fn describe_actual(&self, p: &PencilSpec, r: &FibrationReport) -> String {
        let mut parts: Vec<String> = r
            .fibers
            .iter()
            .map(|f| {
                let mut marks: Vec<(String, String)> = f
                    .members
                    .iter()
                    .enumerate()
                    .map(|(i, &m)| {
                        let mark = f.marks.as_ref().map_or("?".to_string(), |ms| ms[i].to_string());
                        (p.components[m].clone(), mark)
                    })
                    .collect();
                marks.sort();
                fiber_string(&f.kind.to_string(), &marks)
            })
            .collect();
        parts.sort();
        if parts.is_empty() {
            "none".into()
        } else {
            parts.join(" + ")
        }
    }

    fn pairing_checks(&mut self) {
        for p in &self.scn.pairings {
            let outcome = (|| -> Outcome {
                let v = self.lattice().inner(&self.class(&p.left)?, &self.class(&p.right)?).map_err(|e| e.to_string())?;
                Ok((v.to_string(), v == BigInt::from(p.value.value)))
            })();
            self.push(format!("{}.{}", p.left, p.right), &p.value.source, p.value.value, outcome);
        }
    }

    fn theta_checks(&mut self) {
        let th = &self.scn.theta;
        let outcome = (|| -> Outcome {
            let named = |names: &[String]| -> Result<Vec<(String, LatticeClass)>, String> {
                names.iter().map(|n| Ok((n.clone(), self.class(n)?))).collect()
            };
            let assignment = ThetaAssignment {
                plus: named(&th.plus.value)?,
                minus: named(&th.minus)?,
                invariant_fiber: self.combo(&th.fixed_curve)?,
            };
            let res = verify_theta_types(self.lattice(), &assignment).map_err(|e| e.to_string())?;
            let actual = if res.ok { "consistent".to_string() } else { res.violations.join("; ") };
            Ok((actual, res.ok))
        })();
        self.push("involution types of curves", &th.plus.source, "consistent", outcome);

        let outcome = match fixed_locus(&self.scn.invariants.value) {
            Ok(locus) => {
                let k = match locus {
                    FixedLocus::CurvePlusRationals { k, .. } => k,
                    FixedLocus::TwoEllipticCurves | FixedLocus::Empty => 0,
                };
                let n = th.plus.value.len();
                Ok((format!("{n} (k = {k})"), n == k))
            }
            Err(e) => Err(e.to_string()),
        };
        self.push("number of fixed rational curves", &th.plus.source, th.plus.value.len(), outcome);
    }

    fn alpha_check(&mut self) {
        let Some(a) = &self.scn.alpha else { return };
        let outcome = (|| -> Outcome {
            let alpha = self.class(&a.name)?;
            let fiber = self.class(&a.fiber)?;
            let known = self.classes(&a.known_curves)?;
            let ok = effective_root_check(self.lattice(), &alpha, &fiber, &known).map_err(|e| e.to_string())?;
            let sq = self.lattice().square(&alpha).map_err(|e| e.to_string())?;
            let deg = self.lattice().inner(&alpha, &fiber).map_err(|e| e.to_string())?;
            Ok((format!("{} = {}; square {sq}, degree {deg}", a.name, self.fmt(&alpha)), ok))
        })();
        self.push(format!("{} is a (-2)-curve candidate", a.name), &a.source, "square -2, degree 2, non-negative on known curves", outcome);
    }

    fn claim_checks(&mut self, claim: &LatticeClaim) {
        let sub = (|| -> Result<Lattice, String> {
            let cls = self.classes(&claim.classes)?;
            let rows: Vec<Vec<BigInt>> = cls.iter().map(|c| c.coords().to_vec()).collect();
            match claim.kind {
                ClaimKind::Span => {
                    let m = IntMatrix::from_rows_with_cols(&rows, self.lattice().rank());
                    if smith_normal_form(&m).rank() != m.rows() {
                        return Err("spanning classes are dependent".into());
                    }
                    Ok(self.lattice().sublattice(m).lattice)
                }
                ClaimKind::Perp => Ok(self.lattice().orthogonal_complement(&cls).map_err(|e| e.to_string())?.lattice),
            }
        })();
        let expected_rank = format!("rank {}, radical {}", claim.rank.value, claim.radical_rank);
        let rank_outcome = sub.as_ref().map_err(|e| e.clone()).map(|l| {
            let rad = l.radical().rows();
            (format!("rank {}, radical {rad}", l.rank()), l.rank() == claim.rank.value && rad == claim.radical_rank)
        });
        self.push(format!("{} rank", claim.name), &claim.rank.source, expected_rank, rank_outcome);

        if let Some(rootless) = &claim.rootless {
            let outcome = sub.and_then(|l| {
                let sig = l.signature();
                if sig.plus > 0 {
                    return Ok((format!("signature {sig}, has positive vectors"), false));
                }
                let roots = self.search.norm_vectors(&l, &BigInt::from(-2)).map_err(|e| e.to_string())?;
                let none = roots.is_empty();
                let actual = if none { "no roots".to_string() } else { format!("{} roots", roots.len()) };
                Ok((actual, none == rootless.value))
            });
            let expected = if rootless.value { "no roots" } else { "roots present" };
            self.push(format!("{} rootless", claim.name), &rootless.source, expected, outcome);
        }
    }
}

fn fiber_string(kind: &str, marks: &[(String, String)]) -> String {
    let body: Vec<String> = marks.iter().map(|(n, m)| format!("{n}:{m}")).collect();
    format!("{kind}[{}]", body.join(" "))
}

fn describe_expected(fibers: &[ExpectedFiber]) -> String {
    let mut parts: Vec<String> = fibers
        .iter()
        .map(|f| {
            let mut marks: Vec<(String, String)> = f.marks.iter().map(|(n, m)| (n.clone(), m.to_string())).collect();
            marks.sort();
            fiber_string(&f.kind.to_string(), &marks)
        })
        .collect();
    parts.sort();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_case_passes() {
        for report in verify_all() {
            let failed: Vec<_> = report.failures().map(|c| format!("{}: want {}, got {}", c.name, c.expected, c.actual)).collect();
            assert!(report.pass, "{} failed:\n{}", report.case, failed.join("\n"));
        }
    }

    #[test]
    fn s8_reports_both_variants() {
        let r = verify(&case(CaseId::S8));
        let c = r.checks.iter().find(|c| c.name == "c from dual basis").unwrap();
        assert!(c.actual.contains("rejected 3e*+f1*+f3*+f4*+g1*+g3*+g4*+h1*+h2*+h4*"), "{}", c.actual);
        assert!(c.actual.contains("accepted 3e*+f1*+f3*+f4*+g1*+g3*+g4*+h1*+h3*+h4*"), "{}", c.actual);
    }
}
