//! Acceptance suite: one line per criterion with its verdict and time.
//! Exits nonzero when any criterion fails or runs over its limit.

mod common;

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use common::oracle::{count, Family};
use supergrade::classify::{
    enumerate_admissible, falsify_fine_compatibility, falsify_queer_compatibility, Bounds, EnumKind, TrpSpec,
    TypeQSpec,
};
use supergrade::structures::{bracket_span, decomposition_check, induced_grading};
use supergrade::superinvolution::{osp_block_form, paired_phi, trp_block_form, Part};
use supergrade::{
    CycScalar, EvidenceKind, FiniteAbelianGroup, GroupElement, Grading, Matrix, Parity, ProductRule, SuperAlgebraView,
    SuperSignature, Subspace, Superinvolution,
};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn grp(s: &str) -> FiniteAbelianGroup {
    s.parse().expect("group")
}

fn sig(n: usize, m: usize) -> SuperSignature {
    SuperSignature::standard(n, m).expect("signature")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn axiom_suite() -> Outcome {
    let mut checked = 0;
    for (n, m) in [(1, 2), (2, 2), (3, 2), (2, 4)] {
        let s = sig(n, m);
        let inv = Superinvolution::canonical_osp(&s).map_err(|e| format!("osp ({n},{m}): {e}"))?;
        inv.check_axioms().map_err(|v| format!("osp ({n},{m}): {v}"))?;
        checked += 1;
    }
    for n in 1..=3 {
        let s = sig(n, n);
        let inv = Superinvolution::trp(&s).map_err(|e| format!("trp ({n},{n}): {e}"))?;
        inv.check_axioms().map_err(|v| format!("trp ({n},{n}): {v}"))?;
        checked += 1;
    }
    Ok(format!("{checked} involutions, all basis pairs"))
}

fn corpus() -> Vec<(String, Grading)> {
    let mut out = Vec::new();
    for name in ["Z1", "Z2", "Z3", "Z4", "Z2xZ2"] {
        let g = if name == "Z1" { FiniteAbelianGroup::trivial() } else { grp(name) };
        let els = g.elements();
        for (n, m) in [(2, 0), (1, 1), (3, 0), (2, 1), (1, 2)] {
            let size = n + m;
            let total = els.len().pow(size as u32);
            for code in 0..total {
                let mut c = code;
                let theta: Vec<GroupElement> = (0..size)
                    .map(|_| {
                        let e = els[c % els.len()].clone();
                        c /= els.len();
                        e
                    })
                    .collect();
                let gr = Grading::elementary(&g, &sig(n, m), &theta).expect("elementary");
                out.push((format!("{name} ({n},{m}) θ={theta:?}"), gr));
            }
        }
    }
    for (k, s) in [(1, sig(1, 1)), (1, SuperSignature::trivial(2).unwrap()), (2, sig(2, 2))] {
        out.push((format!("Pauli k={k} on {s}"), Grading::pauli_standard(k, &s).expect("pauli")));
    }
    out
}

fn random_matrix(rng: &mut StdRng, size: usize) -> Matrix {
    let mut x = Matrix::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            if rng.gen_bool(0.5) {
                x.set(i, j, CycScalar::from_int(rng.gen_range(-2..=2)));
            }
        }
    }
    x
}

/// Half the samples are spans of random matrices, half are spans of random
/// homogeneous elements, so both verdicts occur.
fn random_subspace(rng: &mut StdRng, gr: &Grading) -> Subspace {
    let size = gr.signature().size();
    let amb = size * size;
    let k = rng.gen_range(1..=3);
    let mats: Vec<Matrix> = if rng.gen_bool(0.5) {
        (0..k).map(|_| random_matrix(rng, size)).collect()
    } else {
        let support = gr.support();
        (0..k)
            .map(|_| {
                let g = &support[rng.gen_range(0..support.len())];
                let x = random_matrix(rng, size);
                gr.homogeneous_projection(&x, g).expect("projection")
            })
            .collect()
    };
    Subspace::span_matrices(amb, &mats).expect("span")
}

fn duality() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let corpus = corpus();
    let (mut graded, mut not_graded) = (0usize, 0usize);
    for (label, gr) in &corpus {
        let g = gr.group();
        let size = gr.signature().size();
        let chars = g.characters();
        for _ in 0..2 {
            let (x, y) = (random_matrix(&mut rng, size), random_matrix(&mut rng, size));
            let xy = x.mul(&y).unwrap();
            for chi in &chars {
                let lhs = gr.dual_action(chi, &xy).map_err(|e| e.to_string())?;
                let rhs = gr.dual_action(chi, &x).unwrap().mul(&gr.dual_action(chi, &y).unwrap()).unwrap();
                ensure(lhs == rhs, || format!("{label}: χ={chi} is not multiplicative"))?;
            }
            let psi = &chars[rng.gen_range(0..chars.len())];
            let chi = &chars[rng.gen_range(0..chars.len())];
            let prod = supergrade::Character(
                g.mul(&GroupElement(chi.0.clone()), &GroupElement(psi.0.clone())).unwrap().0,
            );
            let lhs = gr.dual_action(&prod, &x).unwrap();
            let rhs = gr.dual_action(chi, &gr.dual_action(psi, &x).unwrap()).unwrap();
            ensure(lhs == rhs, || format!("{label}: action of χψ differs from χ∘ψ"))?;
            let e = supergrade::Character(g.identity().0);
            ensure(gr.dual_action(&e, &x).unwrap() == x, || format!("{label}: trivial character moves x"))?;
        }
        for _ in 0..100 {
            let v = random_subspace(&mut rng, gr);
            let a = gr.is_graded_subspace_split(&v).map_err(|e| e.to_string())?;
            let b = gr.is_graded_subspace_invariant(&v).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("{label}: split={a} invariant={b} on a subspace of dim {}", v.dim()))?;
            if a {
                graded += 1;
            } else {
                not_graded += 1;
            }
        }
    }
    Ok(format!(
        "{} gradings, {} subspaces ({graded} graded, {not_graded} not)",
        corpus.len(),
        graded + not_graded
    ))
}

fn fineness() -> Outcome {
    let corpus = corpus();
    let mut fine = 0;
    for (label, gr) in &corpus {
        let re = gr.identity_component().dim();
        ensure(re >= 1, || format!("{label}: dim R_e = 0"))?;
        ensure(gr.is_fine() == (re == 1), || format!("{label}: fine={} but dim R_e = {re}", gr.is_fine()))?;
        fine += gr.is_fine() as usize;
    }
    Ok(format!("{} gradings, {fine} fine", corpus.len()))
}

fn agreement() -> Outcome {
    let bounds = Bounds::default();
    let mut candidates = 0;
    let mut squares = 0;
    let mut unpaired_graded = 0;
    for name in ["Z2", "Z4", "Z2xZ2"] {
        let g = grp(name);
        for size in 1..=6usize {
            for n in 0..=size {
                let m = size - n;
                let e = enumerate_admissible(&g, n, m, EnumKind::Osp, &bounds).map_err(|e| e.to_string())?;
                let dis = e.disagreements();
                ensure(dis.is_empty(), || format!("{name} osp ({n},{m}): {} disagreements", dis.len()))?;
                candidates += e.candidates.len();
                squares += e.squares_discrepancies().len();
                unpaired_graded += e.shape_rejected_graded.len();
            }
        }
        for n in 1..=3 {
            let e = enumerate_admissible(&g, n, n, EnumKind::Trp, &bounds).map_err(|e| e.to_string())?;
            let dis = e.disagreements();
            ensure(dis.is_empty(), || format!("{name} trp ({n},{n}): {} disagreements", dis.len()))?;
            candidates += e.candidates.len();
        }
    }
    Ok(format!(
        "{candidates} tuples, 0 disagreements; reported: {squares} squares-relation differences, \
         {unpaired_graded} unpaired θ graded by the standard form"
    ))
}

fn block_forms() -> Outcome {
    let mut checked = 0;
    for r in 1..=2usize {
        for p0 in 0..=2 {
            for q0 in 0..=2 {
                let (p, q) = if r == 1 { (vec![p0], vec![q0]) } else { (vec![p0, p0], vec![q0, q0]) };
                let (n, m): (usize, usize) = (p.iter().sum(), q.iter().sum());
                if n + m == 0 || (r == 1 && m % 2 != 0) {
                    continue;
                }
                let s = sig(n, m);
                let inv = if r == 1 {
                    Superinvolution::canonical_osp(&s)
                } else {
                    Superinvolution::osp(&s, paired_phi(&p, &q).unwrap())
                }
                .map_err(|e| e.to_string())?;
                let phi = inv.phi().unwrap();
                let h = osp_block_form(&s, phi, Part::Symmetric).map_err(|e| e.to_string())?;
                let k = osp_block_form(&s, phi, Part::Skew).map_err(|e| e.to_string())?;
                ensure(h == inv.h_space() && k == inv.k_space(), || format!("osp p={p:?} q={q:?}"))?;
                checked += 1;
            }
        }
    }
    // The transpose-like map does not depend on θ.
    for r in 1..=2usize {
        for p0 in 1..=2 {
            for p1 in 0..=2 {
                let p = if r == 1 { vec![p0] } else { vec![p0, p1] };
                let n: usize = p.iter().sum();
                let inv = Superinvolution::trp(&sig(n, n)).map_err(|e| e.to_string())?;
                let ok = trp_block_form(n, Part::Symmetric) == inv.h_space()
                    && trp_block_form(n, Part::Skew) == inv.k_space();
                ensure(ok, || format!("trp p={p:?}"))?;
                checked += 1;
                if r == 1 {
                    break;
                }
            }
        }
    }
    Ok(format!("{checked} shapes"))
}

fn falsification() -> Outcome {
    let z2 = grp("Z2");
    let spec = TypeQSpec::new(&z2, z2.element(&[1]).unwrap(), vec![z2.identity()], vec![1]).map_err(|e| e.to_string())?;
    let q = falsify_queer_compatibility(&spec).map_err(|e| e.to_string())?;
    let p = falsify_fine_compatibility(1).map_err(|e| e.to_string())?;
    for (name, r) in [("Q-type", &q), ("Pauli k=1", &p)] {
        ensure(r.evidence_kind == EvidenceKind::Bounded, || format!("{name}: evidence not bounded"))?;
        ensure(r.family_size.is_some(), || format!("{name}: family size missing"))?;
        ensure(r.passed(), || format!("{name}:\n{}", r.to_text()))?;
    }
    Ok(format!(
        "Q-type family {} and Pauli family {}: no graded candidate",
        q.family_size.unwrap(),
        p.family_size.unwrap()
    ))
}

/// A grading the involution respects and one it does not.
fn structure_cases(s: &SuperSignature, inv: &Superinvolution) -> Result<(Grading, Grading), String> {
    let z2 = grp("Z2");
    let parity: Vec<GroupElement> = s
        .parities()
        .iter()
        .map(|p| if *p == Parity::Even { z2.identity() } else { z2.element(&[1]).unwrap() })
        .collect();
    let graded = Grading::elementary(&z2, s, &parity).map_err(|e| e.to_string())?;
    let z3 = grp("Z3");
    let mut theta = vec![z3.identity(); s.size()];
    theta[0] = z3.element(&[1]).unwrap();
    let mut other = Grading::elementary(&z3, s, &theta).map_err(|e| e.to_string())?;
    if other.is_graded_by(inv).map_err(|e| e.to_string())? {
        other = Grading::pauli_standard(1, s).map_err(|e| e.to_string())?;
    }
    Ok((graded, other))
}

fn structures() -> Outcome {
    let mut failures = Vec::new();
    let mut cases = Vec::new();
    for (n, m) in [(1, 2), (2, 2), (3, 2), (2, 4)] {
        let s = sig(n, m);
        cases.push((format!("osp ({n},{m})"), s.clone(), Superinvolution::canonical_osp(&s).unwrap()));
    }
    for n in [1, 2] {
        let s = sig(n, n);
        cases.push((format!("trp ({n},{n})"), s.clone(), Superinvolution::trp(&s).unwrap()));
    }
    for (label, s, inv) in &cases {
        let h = inv.h_space();
        let k = inv.k_space();
        let jordan = SuperAlgebraView::new(s.clone(), h.clone(), ProductRule::JordanSuper).unwrap();
        let lie = SuperAlgebraView::new(s.clone(), k.clone(), ProductRule::LieSuper).unwrap();
        if !jordan.is_closed().unwrap() {
            failures.push(format!("{label}: H not closed"));
        }
        if !lie.is_closed().unwrap() {
            failures.push(format!("{label}: K not closed"));
        }
        let hh = bracket_span(s, &h).unwrap();
        if hh != k {
            failures.push(format!("{label}: dim span[H,H] = {} but dim K = {}", hh.dim(), k.dim()));
        }
        let (graded, other) = structure_cases(s, inv)?;
        for (gr, expect) in [(&graded, true), (&other, false)] {
            let is = gr.is_graded_by(inv).unwrap();
            let th = induced_grading(gr, &h).unwrap().total;
            let tk = induced_grading(gr, &k).unwrap().total;
            if is != expect || th != is || tk != is {
                failures.push(format!("{label}: graded={is} H total={th} K total={tk} (expected {expect})"));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{} signatures", cases.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn decompositions() -> Outcome {
    let g = grp("Z2xZ2xZ2");
    let r = Grading::pauli(
        &g,
        &SuperSignature::trivial(2).unwrap(),
        &[(g.element(&[1, 0, 0]).unwrap(), g.element(&[0, 1, 0]).unwrap())],
    )
    .map_err(|e| e.to_string())?;
    let r_inv = Superinvolution::transpose(2).unwrap();
    let c = g.element(&[0, 0, 1]).unwrap();
    let e = g.identity();
    let t11 = Grading::elementary(&g, &sig(1, 1), &[e.clone(), c.clone()]).unwrap();
    let spec = TrpSpec::new(&g, vec![e.clone(), c.clone()], vec![1, 0], vec![0, 1], vec![1, 0]).unwrap();
    ensure(spec.grading().unwrap().theta() == t11.theta(), || "trp θ layout".into())?;
    let t12 = Grading::elementary(&g, &sig(1, 2), &[e.clone(), c.clone(), c]).unwrap();
    let cases = [
        ("M_(1,1) trp", t11, Superinvolution::trp(&sig(1, 1)).unwrap()),
        ("M_(1,2) osp", t12, Superinvolution::canonical_osp(&sig(1, 2)).unwrap()),
    ];
    for (label, t, t_inv) in cases {
        let rep = decomposition_check(&r, &r_inv, &t, &t_inv).map_err(|e| format!("{label}: {e}"))?;
        ensure(rep.passed(), || format!("{label}:\n{}", rep.to_text()))?;
    }
    Ok("R = M_2 Pauli/transpose with T = M_(1,1) trp and M_(1,2) osp".into())
}

fn golden() -> Outcome {
    let v: Value = serde_json::from_str(include_str!("fixtures/golden_counts.json")).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for (name, f) in v.as_object().unwrap() {
        let group = grp(f["group"].as_str().unwrap());
        let (n, m) = (f["n"].as_u64().unwrap() as usize, f["m"].as_u64().unwrap() as usize);
        let (kind, family) = match f["kind"].as_str().unwrap() {
            "osp" => (EnumKind::Osp, Family::Osp),
            _ => (EnumKind::Trp, Family::Trp),
        };
        let e = enumerate_admissible(&group, n, m, kind, &Bounds::default()).map_err(|e| e.to_string())?;
        let got = (e.admissible().count(), e.raw_count(), e.class_count());
        let want = (
            f["tuples"].as_u64().unwrap() as usize,
            f["raw"].as_u64().unwrap() as usize,
            f["classes"].as_u64().unwrap() as usize,
        );
        ensure(got == want, || format!("{name}: got {got:?}, fixture {want:?}"))?;
        let orders: Vec<i64> = group.invariant_factors().iter().map(|&x| x as i64).collect();
        let o = count(&orders, n, m, family);
        ensure((o.tuples, o.raw, o.classes) == want, || format!("{name}: oracle disagrees with fixture"))?;
        parts.push(format!("{name} = {}/{}/{}", want.0, want.1, want.2));
    }
    Ok(format!("tuples/raw/classes: {}", parts.join(", ")))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "superinvolution axioms", limit: Duration::from_secs(5), run: axiom_suite },
        Criterion { id: 2, name: "dual action and graded-subspace routes", limit: Duration::from_secs(30), run: duality },
        Criterion { id: 3, name: "fineness and dim R_e", limit: Duration::from_secs(5), run: fineness },
        Criterion { id: 4, name: "relation predicates agree with direct checks", limit: Duration::from_secs(300), run: agreement },
        Criterion { id: 5, name: "H and K block forms", limit: Duration::from_secs(30), run: block_forms },
        Criterion { id: 6, name: "bounded falsification", limit: Duration::from_secs(120), run: falsification },
        Criterion { id: 7, name: "Jordan and Lie structure suite", limit: Duration::from_secs(60), run: structures },
        Criterion { id: 8, name: "tensor decomposition identities", limit: Duration::from_secs(60), run: decompositions },
        Criterion { id: 9, name: "golden enumeration counts", limit: Duration::from_secs(120), run: golden },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (ok, msg) = match outcome {
            Ok(m) if elapsed <= c.limit => (true, m),
            Ok(m) => (false, format!("{m} (over time limit)")),
            Err(m) => (false, m),
        };
        failed += (!ok) as usize;
        println!(
            "criterion {}: {} [{:.2}s / {}s] {}: {}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            c.limit.as_secs(),
            c.name,
            msg
        );
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
