use num_bigint::BigInt;
use num_traits::Zero;

use super::*;
use crate::exact::IntMatrix;
use crate::lattice::RootFamily;
use crate::roots::DynkinKind;

const AT: fn(usize) -> DynkinKind = |n| DynkinKind::Affine(RootFamily::A, n);
const DT: fn(usize) -> DynkinKind = |n| DynkinKind::Affine(RootFamily::D, n);
const ET: fn(usize) -> DynkinKind = |n| DynkinKind::Affine(RootFamily::E, n);

/// Builds the scenario for one case. Classes are written by basis label;
/// `c` comes from its dual-basis formula.
pub fn case(id: CaseId) -> CaseScenario {
    match id {
        CaseId::S3 => s3(),
        CaseId::S4 => s4(),
        CaseId::S5 => s5(),
        CaseId::S6(t) => s6(t as usize),
        CaseId::S7 => s7(),
        CaseId::S8 => s8(),
    }
}

struct Named {
    lattice: Lattice,
    classes: Vec<(String, LatticeClass)>,
}

impl Named {
    fn new(lattice: Lattice) -> Self {
        let n = lattice.rank();
        let classes = lattice.labels().iter().enumerate().map(|(i, l)| (l.clone(), LatticeClass::unit(n, i))).collect();
        Named { lattice, classes }
    }

    fn get(&self, name: &str) -> LatticeClass {
        self.classes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| panic!("no class named {name}"))
    }

    fn combo(&self, terms: &[(String, i64)]) -> LatticeClass {
        let mut out = LatticeClass::zero(self.lattice.rank());
        for (name, k) in terms {
            out = &out + &(*k * &self.get(name));
        }
        out
    }

    fn define(&mut self, name: impl Into<String>, class: LatticeClass) {
        self.classes.push((name.into(), class));
    }

    /// Picks the first formula whose value is integral, isotropic and equal
    /// to the expansion (when one is given).
    fn resolve_c(&mut self, formulas: &[DualFormula], expansion: Option<&[(String, i64)]>) -> String {
        let expected = expansion.map(|e| self.combo(e));
        for f in formulas {
            let terms: Vec<(&str, i64)> = f.terms.iter().map(|(l, k)| (l.as_str(), *k)).collect();
            let Ok(c) = self.lattice.dual_expression_to_class(&terms) else { continue };
            let isotropic = self.lattice.square(&c).map(|s| s.is_zero()).unwrap_or(false);
            if isotropic && expected.as_ref().is_none_or(|e| e == &c) {
                self.define("c", c);
                return f.text.clone();
            }
        }
        panic!("no formula for c validates");
    }

    fn into_parts(self) -> (Lattice, Vec<(String, LatticeClass)>) {
        (self.lattice, self.classes)
    }
}

fn t(terms: &[(&str, i64)]) -> Vec<(String, i64)> {
    terms.iter().map(|(n, k)| (n.to_string(), *k)).collect()
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn seq(prefix: &str, range: impl IntoIterator<Item = usize>) -> Vec<String> {
    range.into_iter().map(|i| format!("{prefix}{i}")).collect()
}

fn dual_formula(terms: Vec<(String, i64)>) -> DualFormula {
    let text = terms
        .iter()
        .map(|(l, k)| if *k == 1 { format!("{l}*") } else { format!("{k}{l}*") })
        .collect::<Vec<_>>()
        .join("+");
    DualFormula { text, terms }
}

fn fiber(kind: DynkinKind, marks: Vec<(String, i64)>) -> ExpectedFiber {
    ExpectedFiber { kind, marks }
}

fn root(f: RootFamily, n: usize) -> Lattice {
    Lattice::root_lattice(f, n).expect("valid root lattice")
}

fn e8_doubled() -> Lattice {
    root(RootFamily::E, 8).rescale(&BigInt::from(2)).expect("nonzero scale")
}

fn relabel(parts: &[Lattice], labels: Vec<String>) -> Lattice {
    Lattice::direct_sum(parts).with_labels(labels).expect("label count matches rank")
}

fn e8_block_claim(source: &str) -> LatticeClaim {
    LatticeClaim {
        name: "E8(2) block".into(),
        kind: ClaimKind::Span,
        classes: seq("e", 1..=8),
        rank: sourced(8, "rk E8(2) = 8"),
        radical_rank: 0,
        rootless: Some(sourced(true, source)),
    }
}

fn s3() -> CaseScenario {
    let cd = Lattice::from_gram(IntMatrix::from_rows(&[vec![0, 2], vec![2, -2]]), names(&["c", "d"]))
        .expect("symmetric");
    let mut labels = names(&["c", "d"]);
    labels.extend(seq("e", 1..=8));
    let lattice = relabel(&[cd, e8_doubled()], labels);
    let (lattice, classes) = Named::new(lattice).into_parts();
    CaseScenario {
        id: CaseId::S3,
        lattice,
        classes,
        invariants: sourced(TwoElemInvariants::new(10, 10, 1), "S = <(0 2 / 2 -2)> + E8(2) has (r,a,delta) = (10,10,1)"),
        c_formulas: Vec::new(),
        c_expansion: None,
        c_variant: None,
        pencils: vec![PencilSpec {
            fiber: "c".into(),
            components: Vec::new(),
            section_candidates: names(&["d"]),
            fibers: sourced(Vec::new(), "|c| has no reducible fibres"),
            section_count: sourced(0, "c.d = 2, so d is a bisection of |c|"),
            shioda_tate_rank: sourced(8, "MW rank of |c| equals rk E8(2) = 8"),
            mw_rank: sourced(8, "MW rank of |c| equals rk E8(2) = 8"),
            mw_rootless: sourced(true, "(c)^perp = Zc + E8(2) has no elements of square -2"),
            invariant: true,
        }],
        pairings: vec![PairingSpec {
            left: "c".into(),
            right: "d".into(),
            value: sourced(2, "{c, d} has gram (0 2 / 2 -2)"),
        }],
        theta: ThetaSpec {
            plus: sourced(Vec::new(), "k = 0: no fixed rational curves"),
            minus: names(&["d"]),
            fixed_curve: t(&[("c", 1)]),
        },
        alpha: None,
        claims: vec![
            e8_block_claim("E8(2) has no elements with square -2"),
            LatticeClaim {
                name: "(c)^perp".into(),
                kind: ClaimKind::Perp,
                classes: names(&["c"]),
                rank: sourced(9, "(c)^perp = Zc + E8(2)"),
                radical_rank: 1,
                rootless: Some(sourced(true, "(c)^perp = Zc + E8(2) has no elements with square -2")),
            },
            LatticeClaim {
                name: "(c, d)^perp".into(),
                kind: ClaimKind::Perp,
                classes: names(&["c", "d"]),
                rank: sourced(8, "MW rank of |c| equals rk E8(2) = 8"),
                radical_rank: 0,
                rootless: Some(sourced(true, "E8(2) has no elements with square -2")),
            },
        ],
    }
}

fn s4() -> CaseScenario {
    let mut labels = names(&["c", "d"]);
    labels.extend(seq("e", 1..=8));
    let lattice = relabel(&[Lattice::hyperbolic_plane_with_section(), e8_doubled()], labels);
    let (lattice, classes) = Named::new(lattice).into_parts();
    CaseScenario {
        id: CaseId::S4,
        lattice,
        classes,
        invariants: sourced(TwoElemInvariants::new(10, 8, 0), "S = U + E8(2) has (r,a,delta) = (10,8,0)"),
        c_formulas: Vec::new(),
        c_expansion: None,
        c_variant: None,
        pencils: vec![PencilSpec {
            fiber: "c".into(),
            components: Vec::new(),
            section_candidates: names(&["d"]),
            fibers: sourced(Vec::new(), "|c| has no reducible fibres"),
            section_count: sourced(1, "c.d = 1: d is a section of |c|"),
            shioda_tate_rank: sourced(8, "MW rank of |c| equals rk E8(2) = 8"),
            mw_rank: sourced(8, "MW rank of |c| equals rk E8(2) = 8"),
            mw_rootless: sourced(true, "(c)^perp = Zc + E8(2) has no elements of square -2"),
            invariant: true,
        }],
        pairings: vec![PairingSpec {
            left: "c".into(),
            right: "d".into(),
            value: sourced(1, "c.d = 1"),
        }],
        theta: ThetaSpec {
            plus: sourced(Vec::new(), "fixed locus: two genus-1 curves, no rational curves"),
            minus: names(&["d"]),
            fixed_curve: t(&[("c", 2)]),
        },
        alpha: None,
        claims: vec![
            e8_block_claim("E8(2) has no elements with square -2"),
            LatticeClaim {
                name: "(c)^perp".into(),
                kind: ClaimKind::Perp,
                classes: names(&["c"]),
                rank: sourced(9, "(c)^perp = Zc + E8(2)"),
                radical_rank: 1,
                rootless: Some(sourced(true, "(c)^perp = Zc + E8(2) has no elements with square -2")),
            },
        ],
    }
}

fn s5() -> CaseScenario {
    let mut labels = names(&["c", "d"]);
    labels.extend(seq("e", 1..=8));
    labels.push("f1".into());
    let lattice = relabel(
        &[Lattice::hyperbolic_plane_with_section(), e8_doubled(), root(RootFamily::A, 1)],
        labels,
    );
    let mut named = Named::new(lattice);
    named.define("f2", named.combo(&t(&[("c", 1), ("f1", -1)])));
    let (lattice, classes) = named.into_parts();
    CaseScenario {
        id: CaseId::S5,
        lattice,
        classes,
        invariants: sourced(TwoElemInvariants::new(11, 9, 1), "S = U + E8(2) + A1 has (r,a,delta) = (11,9,1)"),
        c_formulas: Vec::new(),
        c_expansion: None,
        c_variant: None,
        pencils: vec![PencilSpec {
            fiber: "c".into(),
            components: names(&["f1", "f2"]),
            section_candidates: names(&["d"]),
            fibers: sourced(
                vec![fiber(AT(1), t(&[("f1", 1), ("f2", 1)]))],
                "f1 and f2 = c - f1 form a fibre of type A1-tilde",
            ),
            section_count: sourced(1, "d gives the section of |c|"),
            shioda_tate_rank: sourced(8, "MW rank of |c| equals rk E8(2) = 8"),
            mw_rank: sourced(8, "MW rank of |c| equals rk E8(2) = 8"),
            mw_rootless: sourced(true, "(c, f1, f2)^perp = Zc + E8(2) has no elements of square -2"),
            invariant: true,
        }],
        pairings: vec![PairingSpec {
            left: "c".into(),
            right: "d".into(),
            value: sourced(1, "d gives the section of |c|"),
        }],
        theta: ThetaSpec {
            plus: sourced(names(&["f2"]), "k = 1: the fixed rational curve has class f2 = c - f1"),
            minus: names(&["d", "f1"]),
            fixed_curve: t(&[("c", 1)]),
        },
        alpha: None,
        claims: vec![
            e8_block_claim("E8(2) has no elements with square -2"),
            LatticeClaim {
                name: "(c, f1, f2)^perp".into(),
                kind: ClaimKind::Perp,
                classes: names(&["c", "f1", "f2"]),
                rank: sourced(9, "(c, f1, f2)^perp = Zc + E8(2)"),
                radical_rank: 1,
                rootless: Some(sourced(true, "(c, f1, f2)^perp = Zc + E8(2) has no elements with square -2")),
            },
        ],
    }
}

/// `U + D_{16-2t} + tA1` with basis `e, d, f1..f_n, g1..g_t`, `n = 16 - 2t`.
fn s6(tt: usize) -> CaseScenario {
    assert!(tt <= 6, "t ranges over 0..=6");
    let n = 16 - 2 * tt;
    let k = 8 - tt;
    let mut labels = names(&["e", "d"]);
    labels.extend(seq("f", 1..=n));
    labels.extend(seq("g", 1..=tt));
    let mut parts = vec![Lattice::hyperbolic_plane_with_section(), root(RootFamily::D, n)];
    parts.extend(std::iter::repeat_n(root(RootFamily::A, 1), tt));
    let mut named = Named::new(relabel(&parts, labels));

    // f0 = e - f1 - 2f2 - ... - 2f_{n-2} - f_{n-1} - f_n
    let mut f0_terms = t(&[("e", 1), ("f1", -1)]);
    f0_terms.extend(seq("f", 2..=n - 2).into_iter().map(|l| (l, -2)));
    f0_terms.extend(seq("f", n - 1..=n).into_iter().map(|l| (l, -1)));
    named.define("f0", named.combo(&f0_terms));
    for j in 1..=tt {
        named.define(format!("g{j}'"), named.combo(&[("e".into(), 1), (format!("g{j}"), -1)]));
    }

    // c = 3e* + f1* + f_{n-1}* + f_n* + 2(g1* + ... + gt*)
    let mut dual = t(&[("e", 3), ("f1", 1)]);
    dual.extend(seq("f", n - 1..=n).into_iter().map(|l| (l, 1)));
    dual.extend(seq("g", 1..=tt).into_iter().map(|l| (l, 2)));
    // 6e + 3d - 2f1 - 3f2 - ... - (n-1)f_{n-2} - (8-t)(f_{n-1} + f_n) - g1 - ... - gt
    let mut expansion = t(&[("e", 6), ("d", 3)]);
    expansion.extend((1..=n - 2).map(|i| (format!("f{i}"), -(i as i64 + 1))));
    expansion.extend(seq("f", n - 1..=n).into_iter().map(|l| (l, -(k as i64))));
    expansion.extend(seq("g", 1..=tt).into_iter().map(|l| (l, -1)));
    let formulas = vec![dual_formula(dual)];
    let variant = named.resolve_c(&formulas, Some(&expansion));

    // alpha = c - d - f0 - f2 - f3 - ... - f_{n-2}
    let mut alpha_terms = t(&[("c", 1), ("d", -1), ("f0", -1)]);
    alpha_terms.extend(seq("f", 2..=n - 2).into_iter().map(|l| (l, -1)));
    named.define("alpha", named.combo(&alpha_terms));

    let gpairs: Vec<String> = (1..=tt).flat_map(|j| [format!("g{j}"), format!("g{j}'")]).collect();
    let mut e_components = seq("f", 0..=n);
    e_components.extend(gpairs.iter().cloned());
    let mut dt_marks = t(&[("f0", 1), ("f1", 1)]);
    dt_marks.extend(seq("f", 2..=n - 2).into_iter().map(|l| (l, 2)));
    dt_marks.extend(seq("f", n - 1..=n).into_iter().map(|l| (l, 1)));
    let mut e_fibers = vec![fiber(DT(n), dt_marks)];
    e_fibers.extend((1..=tt).map(|j| fiber(AT(1), vec![(format!("g{j}"), 1), (format!("g{j}'"), 1)])));

    let mut c_components = names(&["d", "f0"]);
    c_components.extend(seq("f", 2..=n - 2));
    c_components.push("alpha".into());
    let c_marks = c_components.iter().map(|l| (l.clone(), 1)).collect();

    let mut plus = names(&["d"]);
    plus.extend((2..=n - 2).step_by(2).map(|i| format!("f{i}")));
    let mut minus = names(&["f0", "f1"]);
    minus.extend((3..=n - 3).step_by(2).map(|i| format!("f{i}")));
    minus.extend(seq("f", n - 1..=n));
    minus.extend(gpairs.iter().cloned());
    minus.push("alpha".into());

    let mut known = names(&["d"]);
    known.extend(e_components.iter().cloned());

    let mut mw_set = names(&["c", "f1"]);
    mw_set.extend(seq("f", 3..=n - 2));
    mw_set.extend(names(&["f0", "d", "alpha"]));

    let (lattice, classes) = named.into_parts();
    CaseScenario {
        id: CaseId::S6(tt as u8),
        lattice,
        classes,
        invariants: sourced(
            TwoElemInvariants::new(18 - tt, 2 + tt, u8::from(tt > 0)),
            "S = U + D_{16-2t} + tA1 has r = 18-t, a = 2+t, delta = 1 iff t > 0",
        ),
        c_formulas: formulas,
        c_expansion: Some(sourced(
            expansion,
            "c = 6e+3d-2f1-3f2-4f3-...-(15-2t)f_{14-2t}-(8-t)f_{15-2t}-(8-t)f_{16-2t}-g1-...-gt",
        )),
        c_variant: Some(variant),
        pencils: vec![
            PencilSpec {
                fiber: "e".into(),
                components: e_components,
                section_candidates: names(&["d"]),
                fibers: sourced(
                    e_fibers,
                    "|e| has the fibre F0+F1+2F2+...+2F_{14-2t}+F_{15-2t}+F_{16-2t} of type D_{16-2t}-tilde and t fibres G_j+G_j' of type A1-tilde",
                ),
                section_count: sourced(1, "d is the unique section of |e|"),
                shioda_tate_rank: sourced(0, "(18-t) - 2 - (16-2t) - t = 0"),
                mw_rank: sourced(0, "(18-t) - 2 - (16-2t) - t = 0"),
                mw_rootless: sourced(true, "rank-0 complement"),
                invariant: false,
            },
            PencilSpec {
                fiber: "c".into(),
                components: c_components,
                section_candidates: names(&["f1"]),
                fibers: sourced(
                    vec![fiber(AT(n - 1), c_marks)],
                    "d, f0, f2, ..., f_{14-2t}, alpha are the components of the A_{15-2t}-tilde fibre of |c|",
                ),
                section_count: sourced(1, "F1 is a section of |c| since f1.c = 1"),
                shioda_tate_rank: sourced(tt as i64 + 1, "MW rank t+1 = a-1"),
                mw_rank: sourced(tt + 1, "MW rank t+1 = a-1"),
                mw_rootless: sourced(true, "no (-2)-vectors in the MW lattice"),
                invariant: true,
            },
        ],
        pairings: vec![
            PairingSpec { left: "e".into(), right: "d".into(), value: sourced(1, "d is a section of |e|") },
            PairingSpec { left: "c".into(), right: "f1".into(), value: sourced(1, "f1.c = 1") },
        ],
        theta: ThetaSpec {
            plus: sourced(plus, "plus curves: d, f2, f4, ..., f_{14-2t}; k = (r-a)/2 = 8-t"),
            minus,
            fixed_curve: t(&[("c", 1)]),
        },
        alpha: Some(AlphaSpec {
            name: "alpha".into(),
            fiber: "e".into(),
            known_curves: known,
            source: "alpha^2 = -2, e.alpha = 2, non-negative on curves M with e.M in {0, 1}".into(),
        }),
        claims: vec![LatticeClaim {
            name: "MW = (c, f1, f3, ..., f_{14-2t}, f0, d, alpha)^perp".into(),
            kind: ClaimKind::Perp,
            classes: mw_set,
            rank: sourced(tt + 1, "MW rank t+1 = a-1"),
            radical_rank: 0,
            rootless: Some(sourced(true, "no (-2)-vectors in the MW lattice")),
        }],
    }
}

fn s7() -> CaseScenario {
    let mut labels = names(&["e", "d"]);
    labels.extend(seq("f", 1..=8));
    labels.extend(seq("g", 1..=7));
    labels.push("h1".into());
    let lattice = relabel(
        &[
            Lattice::hyperbolic_plane_with_section(),
            root(RootFamily::E, 8),
            root(RootFamily::E, 7),
            root(RootFamily::A, 1),
        ],
        labels,
    );
    let mut named = Named::new(lattice);
    let e8_marks = [2, 3, 4, 6, 5, 4, 3, 2];
    let e7_marks = [2, 2, 3, 4, 3, 2, 1];
    let mut f0 = t(&[("e", 1)]);
    f0.extend(e8_marks.iter().enumerate().map(|(i, m)| (format!("f{}", i + 1), -m)));
    named.define("f0", named.combo(&f0));
    let mut g0 = t(&[("e", 1)]);
    g0.extend(e7_marks.iter().enumerate().map(|(i, m)| (format!("g{}", i + 1), -m)));
    named.define("g0", named.combo(&g0));
    named.define("h1'", named.combo(&t(&[("e", 1), ("h1", -1)])));

    let formulas = vec![dual_formula(t(&[("e", 3), ("f2", 1), ("g2", 1), ("g7", 1), ("h1", 2)]))];
    let expansion = t(&[
        ("e", 6),
        ("d", 3),
        ("f1", -5),
        ("f2", -8),
        ("f3", -10),
        ("f4", -15),
        ("f5", -12),
        ("f6", -9),
        ("f7", -6),
        ("f8", -3),
        ("g1", -3),
        ("g2", -5),
        ("g3", -6),
        ("g4", -9),
        ("g5", -7),
        ("g6", -5),
        ("g7", -3),
        ("h1", -1),
    ]);
    let variant = named.resolve_c(&formulas, Some(&expansion));

    let fiber_list = names(&[
        "d", "f1", "f3", "f4", "f5", "f6", "f7", "f8", "f0", "g0", "g1", "g3", "g4", "g5", "g6",
    ]);
    let mut alpha_terms = t(&[("c", 1)]);
    alpha_terms.extend(fiber_list.iter().map(|l| (l.clone(), -1)));
    named.define("alpha", named.combo(&alpha_terms));

    let mut e_components = seq("f", 0..=8);
    e_components.extend(seq("g", 0..=7));
    e_components.extend(names(&["h1", "h1'"]));
    let mut et8 = vec![("f0".to_string(), 1)];
    et8.extend(e8_marks.iter().enumerate().map(|(i, m)| (format!("f{}", i + 1), *m)));
    let mut et7 = vec![("g0".to_string(), 1)];
    et7.extend(e7_marks.iter().enumerate().map(|(i, m)| (format!("g{}", i + 1), *m)));

    let mut c_components = fiber_list.clone();
    c_components.push("alpha".into());
    let c_marks = c_components.iter().map(|l| (l.clone(), 1)).collect();

    let mut known = names(&["d"]);
    known.extend(e_components.iter().cloned());

    let mut mw_set = names(&["c", "g7", "d", "f1", "f3", "f4", "f5", "f6", "f7", "f8", "f0", "g0", "g1", "g3", "g4", "g5"]);
    mw_set.push("alpha".into());

    let (lattice, classes) = named.into_parts();
    CaseScenario {
        id: CaseId::S7,
        lattice,
        classes,
        invariants: sourced(TwoElemInvariants::new(18, 2, 1), "S = U + E8 + E7 + A1 has (r,a,delta) = (18,2,1)"),
        c_formulas: formulas,
        c_expansion: Some(sourced(
            expansion,
            "c = 6e+3d-5f1-8f2-10f3-15f4-12f5-9f6-6f7-3f8-3g1-5g2-6g3-9g4-7g5-5g6-3g7-h1",
        )),
        c_variant: Some(variant),
        pencils: vec![
            PencilSpec {
                fiber: "e".into(),
                components: e_components,
                section_candidates: names(&["d"]),
                fibers: sourced(
                    vec![
                        fiber(ET(8), et8),
                        fiber(ET(7), et7),
                        fiber(AT(1), t(&[("h1", 1), ("h1'", 1)])),
                    ],
                    "|e| has fibres 2F1+3F2+4F3+6F4+5F5+4F6+3F7+2F8+F0 (E8-tilde), G0+2G1+2G2+3G3+4G4+3G5+2G6+G7 (E7-tilde), H1+H1' (A1-tilde)",
                ),
                section_count: sourced(1, "d is the unique section of |e|"),
                shioda_tate_rank: sourced(0, "18 - 2 - 8 - 7 - 1 = 0"),
                mw_rank: sourced(0, "18 - 2 - 8 - 7 - 1 = 0"),
                mw_rootless: sourced(true, "rank-0 complement"),
                invariant: false,
            },
            PencilSpec {
                fiber: "c".into(),
                components: c_components,
                section_candidates: names(&["g7"]),
                fibers: sourced(
                    vec![fiber(AT(15), c_marks)],
                    "d, f1, f3, ..., f8, f0, g0, g1, g3, ..., g6, alpha are the components of the A15-tilde fibre of |c|",
                ),
                section_count: sourced(1, "G7 is a section of |c| since g7.c = 1"),
                shioda_tate_rank: sourced(1, "MW rank 1"),
                mw_rank: sourced(1, "MW rank 1"),
                mw_rootless: sourced(true, "no (-2)-vectors in the MW lattice"),
                invariant: true,
            },
        ],
        pairings: vec![
            PairingSpec { left: "e".into(), right: "d".into(), value: sourced(1, "d is a section of |e|") },
            PairingSpec { left: "c".into(), right: "g7".into(), value: sourced(1, "g7.c = 1") },
        ],
        theta: ThetaSpec {
            plus: sourced(names(&["f1", "f4", "f6", "f8", "d", "g1", "g4", "g6"]), "plus curves: f1, f4, f6, f8, d, g1, g4, g6; k = 8"),
            minus: names(&["f0", "f2", "f3", "f5", "f7", "g0", "g2", "g3", "g5", "g7", "h1", "h1'", "alpha"]),
            fixed_curve: t(&[("c", 1)]),
        },
        alpha: Some(AlphaSpec {
            name: "alpha".into(),
            fiber: "e".into(),
            known_curves: known,
            source: "alpha^2 = -2, e.alpha = 2, non-negative on curves M with e.M in {0, 1}".into(),
        }),
        claims: vec![LatticeClaim {
            name: "MW = (c, g7, d, f1, f3, ..., f8, f0, g0, g1, g3, g4, g5, alpha)^perp".into(),
            kind: ClaimKind::Perp,
            classes: mw_set,
            rank: sourced(1, "MW rank 1"),
            radical_rank: 0,
            rootless: Some(sourced(true, "no (-2)-vectors in the MW lattice")),
        }],
    }
}

fn s8() -> CaseScenario {
    let mut labels = names(&["e", "d"]);
    for p in ["f", "g", "h"] {
        labels.extend(seq(p, 1..=4));
    }
    let d4 = root(RootFamily::D, 4);
    let lattice = relabel(&[Lattice::hyperbolic_plane_with_section(), d4.clone(), d4.clone(), d4], labels);
    let mut named = Named::new(lattice);
    for p in ["f", "g", "h"] {
        let terms = vec![
            ("e".to_string(), 1),
            (format!("{p}1"), -1),
            (format!("{p}2"), -2),
            (format!("{p}3"), -1),
            (format!("{p}4"), -1),
        ];
        named.define(format!("{p}0"), named.combo(&terms));
    }
    // The stated h-part h1*+h2*+h4* breaks the f/g pattern; the symmetric
    // h1*+h3*+h4* is tried second and whichever validates is used.
    let formulas = vec![
        dual_formula(t(&[
            ("e", 3),
            ("f1", 1),
            ("f3", 1),
            ("f4", 1),
            ("g1", 1),
            ("g3", 1),
            ("g4", 1),
            ("h1", 1),
            ("h2", 1),
            ("h4", 1),
        ])),
        dual_formula(t(&[
            ("e", 3),
            ("f1", 1),
            ("f3", 1),
            ("f4", 1),
            ("g1", 1),
            ("g3", 1),
            ("g4", 1),
            ("h1", 1),
            ("h3", 1),
            ("h4", 1),
        ])),
    ];
    let expansion = t(&[
        ("e", 6),
        ("d", 3),
        ("f1", -2),
        ("f2", -3),
        ("f3", -2),
        ("f4", -2),
        ("g1", -2),
        ("g2", -3),
        ("g3", -2),
        ("g4", -2),
        ("h1", -2),
        ("h2", -3),
        ("h3", -2),
        ("h4", -2),
    ]);
    let variant = named.resolve_c(&formulas, Some(&expansion));

    let mut e_components = Vec::new();
    let mut e_fibers = Vec::new();
    for p in ["f", "g", "h"] {
        e_components.extend(seq(p, 0..=4));
        let marks = [1, 1, 2, 1, 1];
        e_fibers.push(fiber(DT(4), (0..=4).map(|i| (format!("{p}{i}"), marks[i])).collect()));
    }
    let c_components = names(&["d", "f0", "f2", "g0", "g2", "h0", "h2"]);
    let et6 = t(&[("d", 3), ("f0", 2), ("f2", 1), ("g0", 2), ("g2", 1), ("h0", 2), ("h2", 1)]);

    let (lattice, classes) = named.into_parts();
    CaseScenario {
        id: CaseId::S8,
        lattice,
        classes,
        invariants: sourced(TwoElemInvariants::new(14, 6, 0), "S = U + 3D4 has (r,a,delta) = (14,6,0)"),
        c_formulas: formulas,
        c_expansion: Some(sourced(
            expansion,
            "c = 6e+3d-2f1-3f2-2f3-2f4-2g1-3g2-2g3-2g4-2h1-3h2-2h3-2h4",
        )),
        c_variant: Some(variant),
        pencils: vec![
            PencilSpec {
                fiber: "e".into(),
                components: e_components,
                section_candidates: names(&["d"]),
                fibers: sourced(
                    e_fibers,
                    "|e| has three D4-tilde fibres F0+F1+2F2+F3+F4, G0+G1+2G2+G3+G4, H0+H1+2H2+H3+H4",
                ),
                section_count: sourced(1, "d is a section of |e|"),
                shioda_tate_rank: sourced(0, "14 - 2 - 3*4 = 0"),
                mw_rank: sourced(0, "14 - 2 - 3*4 = 0"),
                mw_rootless: sourced(true, "rank-0 complement"),
                invariant: false,
            },
            PencilSpec {
                fiber: "c".into(),
                components: c_components,
                section_candidates: names(&["f1"]),
                fibers: sourced(
                    vec![fiber(ET(6), et6)],
                    "3D+2F0+F2+2G0+G2+2H0+H2 is an E6-tilde fibre of |c| with 3d+2f0+f2+2g0+g2+2h0+h2 = c",
                ),
                section_count: sourced(1, "F1 is a section of |c| since f1.c = 1"),
                shioda_tate_rank: sourced(6, "MW rank 14-2-6 = 6"),
                mw_rank: sourced(6, "MW rank 14-2-6 = 6"),
                mw_rootless: sourced(true, "no (-2)-vectors in the MW lattice"),
                invariant: true,
            },
        ],
        pairings: vec![
            PairingSpec { left: "e".into(), right: "d".into(), value: sourced(1, "d is a section of |e|") },
            PairingSpec { left: "c".into(), right: "f1".into(), value: sourced(1, "f1.c = 1") },
        ],
        theta: ThetaSpec {
            plus: sourced(names(&["f2", "g2", "h2", "d"]), "plus curves: f2, g2, h2, d; k = 4"),
            minus: names(&["f0", "f1", "f3", "f4", "g0", "g1", "g3", "g4", "h0", "h1", "h3", "h4"]),
            fixed_curve: t(&[("c", 1)]),
        },
        alpha: None,
        claims: vec![LatticeClaim {
            name: "MW = (c, f1, f0, g2, g0, h2, h0, d)^perp".into(),
            kind: ClaimKind::Perp,
            classes: names(&["c", "f1", "f0", "g2", "g0", "h2", "h0", "d"]),
            rank: sourced(6, "MW rank 14-2-6 = 6"),
            radical_rank: 0,
            rootless: Some(sourced(true, "no (-2)-vectors in the MW lattice")),
        }],
    }
}
