//! Acceptance criteria, one line of output each. Expected values here are
//! written out literally rather than read back from the scenario data.

use std::panic;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use k3lat::exact::{self, IntMatrix};
use k3lat::fibration::{
    admissible_triples, analyze_fibration, effective_root_check, fixed_locus, predicted_fiber_type,
    verify_theta_types, FixedLocus, ThetaAssignment,
};
use k3lat::lattice::{Lattice, LatticeClass, RootFamily, TwoElemInvariants};
use k3lat::roots::{classify_components, coordinate_box, enumerate_norm_vectors, DynkinKind};
use k3lat::scenarios::{case, CaseId, CaseScenario};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("invariant reproduction", criterion_1),
        ("c-class reproduction", criterion_2),
        ("fibre classification", criterion_3),
        ("Mordell-Weil ranks", criterion_4),
        ("rootlessness", criterion_5),
        ("involution type consistency", criterion_6),
        ("alpha checks", criterion_7),
        ("property suites", criterion_8),
        ("admissibility", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(()) => println!("PASS criterion {}: {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn inv(r: usize, a: usize, delta: u8) -> TwoElemInvariants {
    TwoElemInvariants::new(r, a, delta)
}

fn s6_ids() -> impl Iterator<Item = (usize, CaseId)> {
    (0..=6u8).map(|t| (t as usize, CaseId::S6(t)))
}

fn class(scn: &CaseScenario, name: &str) -> Result<LatticeClass, String> {
    scn.class(name).cloned().ok_or_else(|| format!("{}: no class {name}", scn.id))
}

fn classes(scn: &CaseScenario, names: &[String]) -> Result<Vec<LatticeClass>, String> {
    names.iter().map(|n| class(scn, n)).collect()
}

fn terms(list: &[(String, i64)]) -> Vec<(&str, i64)> {
    list.iter().map(|(n, k)| (n.as_str(), *k)).collect()
}

fn owned(list: &[(&str, i64)]) -> Vec<(String, i64)> {
    list.iter().map(|(n, k)| (n.to_string(), *k)).collect()
}

fn criterion_1() -> Outcome {
    let mut expected = vec![(CaseId::S3, inv(10, 10, 1)), (CaseId::S4, inv(10, 8, 0)), (CaseId::S5, inv(11, 9, 1))];
    expected.extend(s6_ids().map(|(t, id)| (id, inv(18 - t, 2 + t, u8::from(t > 0)))));
    expected.extend([(CaseId::S7, inv(18, 2, 1)), (CaseId::S8, inv(14, 6, 0))]);
    for (id, want) in expected {
        let got = case(id).lattice.two_elementary_invariants().map_err(|e| format!("{id}: {e}"))?;
        ensure!(got == want, "{id}: got {got}, want {want}");
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let mut jobs: Vec<(CaseId, Vec<(String, i64)>, Vec<(String, i64)>)> = Vec::new();
    for (t, id) in s6_ids() {
        let n = 16 - 2 * t;
        let mut dual = owned(&[("e", 3), ("f1", 1)]);
        dual.push((format!("f{}", n - 1), 1));
        dual.push((format!("f{n}"), 1));
        dual.extend((1..=t).map(|j| (format!("g{j}"), 2)));
        let mut exp = owned(&[("e", 6), ("d", 3)]);
        exp.extend((1..=n - 2).map(|i| (format!("f{i}"), -(i as i64 + 1))));
        exp.push((format!("f{}", n - 1), -(8 - t as i64)));
        exp.push((format!("f{n}"), -(8 - t as i64)));
        exp.extend((1..=t).map(|j| (format!("g{j}"), -1)));
        jobs.push((id, dual, exp));
    }
    jobs.push((
        CaseId::S7,
        owned(&[("e", 3), ("f2", 1), ("g2", 1), ("g7", 1), ("h1", 2)]),
        owned(&[
            ("e", 6), ("d", 3),
            ("f1", -5), ("f2", -8), ("f3", -10), ("f4", -15), ("f5", -12), ("f6", -9), ("f7", -6), ("f8", -3),
            ("g1", -3), ("g2", -5), ("g3", -6), ("g4", -9), ("g5", -7), ("g6", -5), ("g7", -3),
            ("h1", -1),
        ]),
    ));
    let s8_expansion = owned(&[
        ("e", 6), ("d", 3),
        ("f1", -2), ("f2", -3), ("f3", -2), ("f4", -2),
        ("g1", -2), ("g2", -3), ("g3", -2), ("g4", -2),
        ("h1", -2), ("h2", -3), ("h3", -2), ("h4", -2),
    ]);
    let s8_printed = owned(&[
        ("e", 3), ("f1", 1), ("f3", 1), ("f4", 1), ("g1", 1), ("g3", 1), ("g4", 1), ("h1", 1), ("h2", 1), ("h4", 1),
    ]);
    let s8_symmetric = owned(&[
        ("e", 3), ("f1", 1), ("f3", 1), ("f4", 1), ("g1", 1), ("g3", 1), ("g4", 1), ("h1", 1), ("h3", 1), ("h4", 1),
    ]);
    jobs.push((CaseId::S8, s8_symmetric, s8_expansion));

    for (id, dual, exp) in jobs {
        let scn = case(id);
        let l = &scn.lattice;
        let c = l.dual_expression_to_class(&terms(&dual)).map_err(|e| format!("{id}: {e}"))?;
        let sq = l.square(&c).map_err(|e| e.to_string())?;
        ensure!(sq.is_zero(), "{id}: c^2 = {sq}");
        let printed = l.class_from_terms(&terms(&exp)).map_err(|e| e.to_string())?;
        ensure!(c == printed, "{id}: c = {} differs from the expansion", c.format_with(l.labels()));
        ensure!(scn.class("c") == Some(&c), "{id}: scenario c differs from the dual expression");
        let report = k3lat::scenarios::verify(&scn);
        for name in ["c from dual basis", "c^2", "c expansion"] {
            let check = report.checks.iter().find(|x| x.name == name).ok_or(format!("{id}: no check {name}"))?;
            ensure!(check.pass, "{id}: {name}: {}", check.actual);
        }
    }
    let s8 = case(CaseId::S8);
    ensure!(
        s8.lattice.dual_expression_to_class(&terms(&s8_printed)).is_err(),
        "s8: the h1*+h2*+h4* variant was expected to be non-integral"
    );
    Ok(())
}

fn affine(f: RootFamily, n: usize) -> DynkinKind {
    DynkinKind::Affine(f, n)
}

fn sorted_kinds(mut v: Vec<DynkinKind>) -> Vec<DynkinKind> {
    v.sort();
    v
}

fn criterion_3() -> Outcome {
    use RootFamily::*;
    let mut table: Vec<(CaseId, usize, Vec<DynkinKind>)> = vec![(CaseId::S5, 0, vec![affine(A, 1)])];
    for (t, id) in s6_ids() {
        let mut e = vec![affine(D, 16 - 2 * t)];
        e.extend(std::iter::repeat_n(affine(A, 1), t));
        table.push((id, 0, e));
        table.push((id, 1, vec![affine(A, 15 - 2 * t)]));
    }
    table.push((CaseId::S7, 0, vec![affine(E, 8), affine(E, 7), affine(A, 1)]));
    table.push((CaseId::S7, 1, vec![affine(A, 15)]));
    table.push((CaseId::S8, 0, vec![affine(D, 4); 3]));
    table.push((CaseId::S8, 1, vec![affine(E, 6)]));

    for (id, pencil, want) in table {
        let scn = case(id);
        let p = &scn.pencils[pencil];
        let report = analyze_fibration(
            &scn.lattice,
            &class(&scn, &p.fiber)?,
            &classes(&scn, &p.components)?,
            &classes(&scn, &p.section_candidates)?,
        )
        .map_err(|e| format!("{id} |{}|: {e}", p.fiber))?;
        let got = sorted_kinds(report.fiber_kinds());
        ensure!(got == sorted_kinds(want.clone()), "{id} |{}|: got {got:?}, want {want:?}", p.fiber);
        if p.invariant {
            let predicted = predicted_fiber_type(&scn.invariants.value).map_err(|e| format!("{id}: {e}"))?;
            ensure!(got == vec![predicted], "{id}: predicted {predicted}, got {got:?}");
        }
        let v = k3lat::scenarios::verify(&scn);
        let name = format!("|{}| fibres", p.fiber);
        let check = v.checks.iter().find(|c| c.name == name).ok_or(format!("{id}: no check {name}"))?;
        ensure!(check.pass, "{id} {name}: want {}, got {}", check.expected, check.actual);
    }

    // Marks, written out for the printed divisors.
    let s7 = case(CaseId::S7);
    let e = class(&s7, "e")?;
    let e8 = s7.lattice.class_from_terms(&[
        ("f1", 2), ("f2", 3), ("f3", 4), ("f4", 6), ("f5", 5), ("f6", 4), ("f7", 3), ("f8", 2),
    ]).map_err(|e| e.to_string())?;
    ensure!(&e8 + &class(&s7, "f0")? == e, "s7: 2f1+3f2+4f3+6f4+5f5+4f6+3f7+2f8+f0 != e");
    let e7 = s7.lattice.class_from_terms(&[
        ("g1", 2), ("g2", 2), ("g3", 3), ("g4", 4), ("g5", 3), ("g6", 2), ("g7", 1),
    ]).map_err(|e| e.to_string())?;
    ensure!(&e7 + &class(&s7, "g0")? == e, "s7: g0+2g1+2g2+3g3+4g4+3g5+2g6+g7 != e");
    let s8 = case(CaseId::S8);
    let et6: LatticeClass = [("d", 3), ("f0", 2), ("f2", 1), ("g0", 2), ("g2", 1), ("h0", 2), ("h2", 1)]
        .iter()
        .map(|(n, k)| Ok(*k * &class(&s8, n)?))
        .collect::<Result<Vec<_>, String>>()?
        .iter()
        .fold(LatticeClass::zero(s8.lattice.rank()), |acc, x| &acc + x);
    ensure!(Some(&et6) == s8.class("c"), "s8: 3d+2f0+f2+2g0+g2+2h0+h2 != c");
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut want: Vec<(CaseId, usize)> = vec![(CaseId::S3, 8), (CaseId::S4, 8), (CaseId::S5, 8)];
    want.extend(s6_ids().map(|(t, id)| (id, t + 1)));
    want.extend([(CaseId::S7, 1), (CaseId::S8, 6)]);
    for (id, rank) in want {
        let scn = case(id);
        let p = scn.pencils.iter().find(|p| p.invariant).ok_or("no invariant pencil")?;
        let r = analyze_fibration(
            &scn.lattice,
            &class(&scn, &p.fiber)?,
            &classes(&scn, &p.components)?,
            &classes(&scn, &p.section_candidates)?,
        )
        .map_err(|e| format!("{id}: {e}"))?;
        ensure!(r.mw_rank == rank, "{id}: MW rank {}, want {rank}", r.mw_rank);
        ensure!(r.shioda_tate_rank == rank as i64, "{id}: Shioda-Tate {}, want {rank}", r.shioda_tate_rank);
        for claim in &scn.claims {
            if claim.kind == k3lat::scenarios::ClaimKind::Perp && claim.radical_rank == 0 && claim.name.starts_with("MW") {
                let sub = scn.lattice.orthogonal_complement(&classes(&scn, &claim.classes)?).map_err(|e| e.to_string())?;
                ensure!(sub.rank() == rank, "{id}: {} has rank {}, want {rank}", claim.name, sub.rank());
            }
        }
    }
    // The E8(2) block of U + E8(2) is the complement of the hyperbolic plane.
    let l = case(CaseId::S4).lattice;
    let sub = l.orthogonal_complement(&[LatticeClass::unit(10, 0), LatticeClass::unit(10, 1)]).map_err(|e| e.to_string())?;
    ensure!(sub.rank() == 8, "E8(2) block rank {}", sub.rank());
    Ok(())
}

fn criterion_5() -> Outcome {
    let e8_2 = Lattice::root_lattice(RootFamily::E, 8).unwrap().rescale(&BigInt::from(2)).unwrap();
    let m2 = BigInt::from(-2);
    ensure!(enumerate_norm_vectors(&e8_2, &m2).map_err(|e| e.to_string())?.is_empty(), "E8(2) has roots");
    let s3 = case(CaseId::S3);
    let perp = s3.lattice.orthogonal_complement(&[class(&s3, "c")?]).map_err(|e| e.to_string())?;
    ensure!(perp.lattice.radical().rows() == 1, "s3: (c)^perp radical rank is not 1");
    ensure!(enumerate_norm_vectors(&perp.lattice, &m2).map_err(|e| e.to_string())?.is_empty(), "s3: (c)^perp has roots");
    for id in CaseId::all() {
        let scn = case(id);
        for p in &scn.pencils {
            let r = analyze_fibration(
                &scn.lattice,
                &class(&scn, &p.fiber)?,
                &classes(&scn, &p.components)?,
                &classes(&scn, &p.section_candidates)?,
            )
            .map_err(|e| format!("{id}: {e}"))?;
            let roots = enumerate_norm_vectors(&r.mw_lattice, &m2).map_err(|e| format!("{id}: {e}"))?;
            ensure!(roots.is_empty(), "{id} |{}|: MW lattice has {} roots", p.fiber, roots.len());
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut want: Vec<(CaseId, usize)> = s6_ids().map(|(t, id)| (id, 8 - t)).collect();
    want.extend([(CaseId::S7, 8), (CaseId::S8, 4)]);
    for (id, k) in want {
        let scn = case(id);
        let named = |names: &[String]| -> Result<Vec<(String, LatticeClass)>, String> {
            names.iter().map(|n| Ok((n.clone(), class(&scn, n)?))).collect()
        };
        let assignment = ThetaAssignment {
            plus: named(&scn.theta.plus.value)?,
            minus: named(&scn.theta.minus)?,
            invariant_fiber: class(&scn, "c")?,
        };
        let res = verify_theta_types(&scn.lattice, &assignment).map_err(|e| e.to_string())?;
        ensure!(res.ok, "{id}: {}", res.violations.join("; "));
        ensure!(assignment.plus.len() == k, "{id}: {} plus classes, want {k}", assignment.plus.len());
        match fixed_locus(&scn.invariants.value).map_err(|e| e.to_string())? {
            FixedLocus::CurvePlusRationals { k: kk, .. } => ensure!(kk == k, "{id}: fixed_locus k = {kk}, want {k}"),
            other => return Err(format!("{id}: unexpected fixed locus {other:?}")),
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let ids: Vec<CaseId> = s6_ids().map(|(_, id)| id).chain([CaseId::S7]).collect();
    for id in ids {
        let scn = case(id);
        let a = scn.alpha.as_ref().ok_or(format!("{id}: no alpha"))?;
        let alpha = class(&scn, &a.name)?;
        let e = class(&scn, "e")?;
        ensure!(scn.lattice.square(&alpha).unwrap() == BigInt::from(-2), "{id}: alpha^2 != -2");
        ensure!(scn.lattice.inner(&alpha, &e).unwrap() == BigInt::from(2), "{id}: e.alpha != 2");
        let ok = effective_root_check(&scn.lattice, &alpha, &e, &classes(&scn, &a.known_curves)?).map_err(|e| e.to_string())?;
        ensure!(ok, "{id}: effective_root_check failed");
    }
    Ok(())
}

fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}

fn random_unimodular(rng: &mut StdRng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let k = BigInt::from(rng.gen_range(-2..=2i64));
        let e = IntMatrix::from_fn(n, n, |r, c| {
            if r == c {
                BigInt::one()
            } else if r == i && c == j {
                k.clone()
            } else {
                BigInt::zero()
            }
        });
        m = m.mul(&e).unwrap();
    }
    if rng.gen_bool(0.5) {
        let s = IntMatrix::from_fn(n, n, |r, c| if r != c { BigInt::zero() } else if r == 0 { -BigInt::one() } else { BigInt::one() });
        m = m.mul(&s).unwrap();
    }
    m
}

fn snf_suite(rng: &mut StdRng) -> Outcome {
    for trial in 0..200 {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let m = random_matrix(rng, rows, cols, 9);
        let snf = exact::smith_normal_form(&m);
        let prod = snf.u.mul(&m).unwrap().mul(&snf.v).unwrap();
        for i in 0..rows {
            for j in 0..cols {
                let want = if i == j && i < snf.d.len() { snf.d[i].clone() } else { BigInt::zero() };
                ensure!(prod.get(i, j) == &want, "SNF trial {trial}: U M V != diag(d)");
            }
        }
        for w in snf.d.windows(2) {
            ensure!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()), "SNF trial {trial}: divisibility");
        }
        ensure!(snf.d.iter().all(|d| !d.is_negative()), "SNF trial {trial}: negative invariant");
        ensure!(snf.u.determinant().unwrap().abs().is_one(), "SNF trial {trial}: U not unimodular");
        ensure!(snf.v.determinant().unwrap().abs().is_one(), "SNF trial {trial}: V not unimodular");
    }
    Ok(())
}

fn box_count(q: &IntMatrix, norm: &BigInt) -> usize {
    // q is positive definite; count x != 0 with x^T q x = -norm, halved for sign.
    let target = -norm;
    let b = coordinate_box(q, &target);
    let b: Vec<i64> = b.iter().map(|x| i64::try_from(x).unwrap()).collect();
    let mut count = 0;
    for x in -b[0]..=b[0] {
        for y in -b[1]..=b[1] {
            for z in -b[2]..=b[2] {
                let v = [BigInt::from(x), BigInt::from(y), BigInt::from(z)];
                let qv = q.mul_vec(&v);
                let s: BigInt = v.iter().zip(&qv).map(|(a, b)| a * b).sum();
                if s == target {
                    count += 1;
                }
            }
        }
    }
    count / 2
}

fn enumeration_suite(rng: &mut StdRng) -> Outcome {
    let mut done = 0;
    while done < 100 {
        let a = random_matrix(rng, 3, 3, 2);
        let q = a.mul(&a.transpose()).unwrap();
        let det = q.determinant().unwrap();
        if det.is_zero() || det > BigInt::from(50) {
            continue;
        }
        let neg = q.scale(&BigInt::from(-1));
        let l = Lattice::from_gram_unlabeled(neg).unwrap();
        for norm in [-1i64, -2, -3, -4, -6] {
            let norm = BigInt::from(norm);
            let got = enumerate_norm_vectors(&l, &norm).map_err(|e| e.to_string())?.len();
            let want = box_count(&q, &norm);
            ensure!(got == want, "form {:?} norm {norm}: enumerated {got}, box {want}", q.row_vecs());
        }
        done += 1;
    }
    Ok(())
}

fn component_key(l: &Lattice, classes: &[LatticeClass]) -> Result<Vec<String>, String> {
    let comps = classify_components(l, classes).map_err(|e| e.to_string())?;
    let mut keys: Vec<String> = comps
        .iter()
        .map(|c| {
            let mut members: Vec<String> = c
                .classes
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let mark = c.marks.as_ref().map_or(String::new(), |m| m[i].to_string());
                    format!("{mark}*{x}")
                })
                .collect();
            members.sort();
            format!("{}:{}", c.kind, members.join(","))
        })
        .collect();
    keys.sort();
    Ok(keys)
}

fn permutation_suite(rng: &mut StdRng) -> Outcome {
    for id in CaseId::all() {
        let scn = case(id);
        for p in &scn.pencils {
            let comps = classes(&scn, &p.components)?;
            let base = component_key(&scn.lattice, &comps)?;
            for _ in 0..5 {
                let mut shuffled = comps.clone();
                shuffled.shuffle(rng);
                let key = component_key(&scn.lattice, &shuffled)?;
                ensure!(key == base, "{id} |{}|: classification depends on order", p.fiber);
            }
        }
    }
    Ok(())
}

fn signature_suite(rng: &mut StdRng) -> Outcome {
    let grams: Vec<IntMatrix> = [CaseId::S4, CaseId::S8, CaseId::S6(3)]
        .iter()
        .map(|id| case(*id).lattice.gram().clone())
        .chain([Lattice::root_lattice(RootFamily::D, 5).unwrap().gram().clone()])
        .collect();
    for trial in 0..100 {
        let g = &grams[trial % grams.len()];
        let p = random_unimodular(rng, g.rows());
        let conj = p.transpose().mul(g).unwrap().mul(&p).unwrap();
        let a = exact::signature(g).unwrap();
        let b = exact::signature(&conj).unwrap();
        ensure!(a == b, "trial {trial}: signature {a} vs {b}");
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6b33_6c61_7400);
    snf_suite(&mut rng)?;
    enumeration_suite(&mut rng)?;
    permutation_suite(&mut rng)?;
    signature_suite(&mut rng)
}

/// Exhaustive scan, one displayed condition per clause.
fn admissible_oracle(r: usize, a: usize, delta: u8) -> bool {
    let cond1 = (r + a).is_multiple_of(2) && r >= 1 && a <= r && r <= 20 && r + a <= 22;
    let cond2 = !(delta == 0 && (!a.is_multiple_of(2) || r % 4 != 2));
    let cond3 = !(a == 0 && r % 8 != 2) && !(a == 1 && r % 8 != 1 && r % 8 != 3);
    let cond4 = !(delta == 0 && ((r, a) == (6, 6) || (r, a) == (14, 8)));
    cond1 && cond2 && cond3 && cond4
}

fn criterion_9() -> Outcome {
    let list = admissible_triples();
    let mut oracle = Vec::new();
    for r in 0..=30 {
        for a in 0..=30 {
            for delta in 0..=1u8 {
                if admissible_oracle(r, a, delta) {
                    oracle.push(inv(r, a, delta));
                }
            }
        }
    }
    for t in &list {
        ensure!(admissible_oracle(t.r, t.a, t.delta), "{t} fails a condition");
    }
    ensure!(list.len() == oracle.len(), "count {} vs oracle {}", list.len(), oracle.len());
    let mut required = vec![inv(10, 10, 1), inv(10, 8, 0), inv(11, 9, 1), inv(18, 2, 1), inv(14, 6, 0)];
    required.extend((0..=6).map(|t| inv(18 - t, 2 + t, u8::from(t > 0))));
    for t in required {
        ensure!(list.contains(&t), "{t} missing");
    }
    for t in [inv(6, 6, 0), inv(14, 8, 0)] {
        ensure!(!list.contains(&t), "{t} present");
    }
    ensure!(list.iter().all(|t| (t.r + t.a) % 2 == 0), "odd r + a present");
    Ok(())
}
