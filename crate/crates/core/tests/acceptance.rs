//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.
//!
//! Run with `cargo test -p hermc --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::*;
use hermc::certificate::{verify_counterexample, verify_exhaustive, verify_order_certificate};
use hermc::corpus::{check_henson_properties, corpus_formula, gen_structure};
use hermc::eval::eval_sentence;
use hermc::reductions::{reduce_to_forbtd, reduce_to_symcycle, sat_bruteforce};
use hermc::syntax::relativize;
use hermc::{
    algorithm1, collapse_check, every_cycle_has_symmetric_edge, her_bruteforce, her_check,
    monadic_check, Certificate, CnfInstance, GuardFormula, PrenexSentence, Signature, Structure,
};

fn finish(criterion: usize, start: Instant, limit: Duration, failures: &[String], summary: String) {
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed <= limit;
    report(
        criterion,
        ok,
        &format!("{summary} [{:.1}s, limit {}s]", elapsed.as_secs_f64(), limit.as_secs()),
    );
    assert!(failures.is_empty(), "criterion {criterion} failures: {failures:#?}");
    assert!(elapsed <= limit, "criterion {criterion} took {elapsed:?}");
}

fn formula(name: &str, param: Option<usize>) -> PrenexSentence {
    corpus_formula(name, param).unwrap()
}

/// Random structures over `{R/3}` with 1 to 4 elements.
fn sampled_ternary(count: usize, seed: u64) -> Vec<Structure> {
    let sig = Signature::new([("R", 3)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=4);
            let p = rng.gen_range(0.02..0.4);
            let mut tuples = Vec::new();
            for a in 1..=n {
                for b in 1..=n {
                    for c in 1..=n {
                        if rng.gen_bool(p) {
                            tuples.push(vec![a, b, c]);
                        }
                    }
                }
            }
            Structure::new(sig.clone(), n, [("R", tuples)]).unwrap()
        })
        .collect()
}

/// The `∀*∃∀*` suite: sentence name, sentence, structures.
fn alg1_suite() -> Vec<(String, PrenexSentence, Vec<Structure>)> {
    let digraphs = all_digraphs(4, false);
    vec![
        ("sink".into(), formula("sink", None), digraphs.clone()),
        ("forest".into(), formula("forest", None), digraphs.clone()),
        ("chordal".into(), formula("chordal", None), digraphs.clone()),
        ("~cover".into(), formula("cover", None).negate(), digraphs),
        ("andor(2)".into(), formula("andor", Some(2)), sampled_ternary(2000, 11)),
    ]
}

/// The `∀*∃*` suite.
fn collapse_suite() -> Vec<(String, PrenexSentence, Vec<Structure>)> {
    let digraphs = all_digraphs(4, false);
    ["sink", "forest", "chordal"]
        .iter()
        .map(|&n| (format!("~{n}"), formula(n, None).negate(), digraphs.clone()))
        .collect()
}

#[test]
fn criterion_01_algorithm1_matches_bruteforce() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for (name, p, structures) in alg1_suite() {
        assert_eq!(p.quantifier_prefix().to_string().matches('∃').count(), 1, "{name}");
        let bad: Vec<String> = structures
            .par_iter()
            .filter_map(|s| {
                let a = algorithm1(s, &p).unwrap().hereditary;
                let b = her_bruteforce(s, &p).unwrap().hereditary;
                (a != b).then(|| format!("{name}: alg1={a} brute={b} on {s:?}"))
            })
            .collect();
        counts.push(format!("{name} {}", structures.len()));
        failures.extend(bad);
    }
    finish(
        1,
        start,
        Duration::from_secs(300),
        &failures,
        format!("algorithm1 = her_bruteforce ({})", counts.join(", ")),
    );
}

#[test]
fn criterion_02_collapse_matches_bruteforce() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut total = 0;
    for (name, p, structures) in collapse_suite() {
        assert!(p.quantifier_prefix().is_forall_exists(), "{name}");
        total += structures.len();
        failures.extend(structures.par_iter().filter_map(|s| {
            let a = collapse_check(s, &p).unwrap().hereditary;
            let b = her_bruteforce(s, &p).unwrap().hereditary;
            (a != b).then(|| format!("{name}: collapse={a} brute={b} on {s:?}"))
        }).collect::<Vec<_>>());
    }
    finish(
        2,
        start,
        Duration::from_secs(120),
        &failures,
        format!("collapse_check = her_bruteforce on {total} (sentence, digraph) pairs"),
    );
}

#[test]
fn criterion_03_certificates_verify() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (mut orders, mut counterexamples) = (0usize, 0usize);
    for (name, p, structures) in alg1_suite() {
        let results: Vec<(bool, bool)> = structures
            .par_iter()
            .map(|s| {
                let v = algorithm1(s, &p).unwrap();
                let ok = match &v.certificate {
                    Certificate::Order { .. } => {
                        v.hereditary && verify_order_certificate(s, &p, &v.certificate).unwrap()
                    }
                    Certificate::Counterexample { subset } => {
                        !v.hereditary && verify_counterexample(s, &p, subset).unwrap()
                    }
                    Certificate::Exhaustive { .. } => false,
                };
                (v.hereditary, ok)
            })
            .collect();
        for (i, (h, ok)) in results.into_iter().enumerate() {
            if h { orders += 1 } else { counterexamples += 1 }
            if !ok {
                failures.push(format!("{name}: structure #{i} certificate rejected"));
            }
        }
    }
    for (name, p, structures) in collapse_suite() {
        for (i, s) in structures.iter().enumerate() {
            let v = collapse_check(s, &p).unwrap();
            let ok = match &v.certificate {
                Certificate::Counterexample { subset } => {
                    counterexamples += 1;
                    !v.hereditary && verify_counterexample(s, &p, subset).unwrap()
                }
                Certificate::Exhaustive { bound } => {
                    v.hereditary && verify_exhaustive(s, &p, *bound).unwrap()
                }
                Certificate::Order { .. } => false,
            };
            if !ok {
                failures.push(format!("{name}: structure #{i} certificate rejected"));
            }
        }
    }
    finish(
        3,
        start,
        Duration::from_secs(300),
        &failures,
        format!("{orders} order certificates and {counterexamples} counterexamples verified"),
    );
}

#[test]
fn criterion_04_monadic_bound() {
    let start = Instant::now();
    let sig = Signature::new([("U", 1), ("W", 1)]).unwrap();
    let sentences = [
        "exists x. U(x)",
        "forall x. exists y. U(x) & ~W(y) | W(x) & ~U(y)",
        "exists x,y. forall z. x != y & (U(x) <-> W(y)) | (U(z) & W(z))",
        "exists x. forall y. exists z. U(x) & (W(y) -> z != y & U(z))",
        "forall x,y. exists z,w. x = y | z != w & (U(z) <-> ~U(w)) & (W(x) | W(y))",
    ];
    let structures = all_uw_structures(4);
    let mut failures = Vec::new();
    for text in sentences {
        let p = hermc::parse_sentence(text, &sig).unwrap();
        failures.extend(structures.par_iter().filter_map(|s| {
            let a = monadic_check(s, &p).unwrap().hereditary;
            let b = her_bruteforce(s, &p).unwrap().hereditary;
            (a != b).then(|| format!("`{text}`: monadic={a} brute={b} on {s:?}"))
        }).collect::<Vec<_>>());
    }
    finish(
        4,
        start,
        Duration::from_secs(300),
        &failures,
        format!("monadic_check = her_bruteforce, 5 sentences x {} structures", structures.len()),
    );
}

/// The seeded 3SAT population: up to 5 variables, 2 to 6 clauses.
fn sat_population() -> Vec<CnfInstance> {
    (0..200u64)
        .map(|seed| {
            let vars = 1 + (seed % 5) as usize;
            let clauses = 2 + (seed / 5 % 5) as usize;
            CnfInstance::random(vars, clauses, seed).unwrap()
        })
        .collect()
}

#[test]
fn criterion_05_forbtd_reduction() {
    let start = Instant::now();
    let phi_t = formula("phi_T", None);
    let population = sat_population();
    let results: Vec<(bool, Option<String>)> = population
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let sat = sat_bruteforce(c).unwrap();
            let clauses: Vec<Vec<i32>> = c.clauses().iter().map(|cl| cl.to_vec()).collect();
            if dpll(&clauses, c.vars()) != sat {
                return (sat, Some(format!("instance {i}: SAT oracles disagree")));
            }
            let g = reduce_to_forbtd(c).unwrap();
            let her = her_check(&g, &phi_t).unwrap().hereditary;
            (sat, (sat == her).then(|| format!("instance {i}: sat={sat} her={her}")))
        })
        .collect();
    let unsat = results.iter().filter(|(s, _)| !s).count();
    let failures: Vec<String> = results.into_iter().filter_map(|(_, f)| f).collect();
    finish(
        5,
        start,
        Duration::from_secs(600),
        &failures,
        format!("SAT <=> not HER(phi_T) on 200 instances ({unsat} unsatisfiable)"),
    );
}

#[test]
fn criterion_06_symcycle_reduction() {
    let start = Instant::now();
    let population = sat_population();
    let failures: Vec<String> = population
        .par_iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let sat = sat_bruteforce(c).unwrap();
            let all_sym = every_cycle_has_symmetric_edge(&reduce_to_symcycle(c).unwrap()).unwrap();
            (sat == all_sym).then(|| format!("instance {i}: sat={sat} every_cycle_sym={all_sym}"))
        })
        .collect();
    finish(
        6,
        start,
        Duration::from_secs(600),
        &failures,
        "SAT <=> some cycle without symmetric edge on 200 instances".into(),
    );
}

#[test]
fn criterion_07_symedge() {
    let start = Instant::now();
    let p = formula("symedge", None);
    let digraphs = all_digraphs(4, true);
    let failures: Vec<String> = digraphs
        .par_iter()
        .filter_map(|s| {
            let her = her_check(s, &p).unwrap().hereditary;
            let oracle = every_cycle_has_symmetric_edge(s).unwrap();
            (her != oracle).then(|| format!("her={her} oracle={oracle} on {s:?}"))
        })
        .collect();
    finish(
        7,
        start,
        Duration::from_secs(300),
        &failures,
        format!("HER(symedge) <=> every cycle has a symmetric edge on {} digraphs", digraphs.len()),
    );
}

fn compare(
    label: &str,
    p: &PrenexSentence,
    structures: &[Structure],
    oracle: impl Fn(&Structure) -> bool + Sync,
) -> (Vec<String>, String) {
    let start = Instant::now();
    let failures = structures
        .par_iter()
        .filter_map(|s| {
            let her = her_check(s, p).unwrap().hereditary;
            let o = oracle(s);
            (her != o).then(|| format!("{label}: her={her} oracle={o} on {s:?}"))
        })
        .collect();
    (
        failures,
        format!("{label} {} in {:.1}s", structures.len(), start.elapsed().as_secs_f64()),
    )
}

#[test]
fn criterion_08_example_cross_checks() {
    let start = Instant::now();
    let graphs = all_graphs(5);
    let mut digraphs5 = all_digraphs(5, false);
    digraphs5.extend(all_digraphs(3, true).into_iter().filter(|s| {
        (1..=s.size()).any(|v| s.holds("E", &[v, v]))
    }));
    let digraphs4 = all_digraphs(4, true);
    let p3 = dpath(3);
    let checks = [
        compare("forest", &formula("forest", None), &graphs, is_forest_union_find),
        compare("chordal", &formula("chordal", None), &graphs, is_chordal_mcs),
        compare("sink", &formula("sink", None), &digraphs5, is_acyclic_toposort),
        compare("~p3", &formula("p3", None).negate(), &digraphs4, |s| has_hom_brute(s, &p3)),
        compare("~cover", &formula("cover", None).negate(), &digraphs4, is_cover_relation),
    ];
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for (f, c) in checks {
        failures.extend(f);
        counts.push(c);
    }
    finish(8, start, Duration::from_secs(300), &failures, format!("examples ({})", counts.join(", ")));
}

#[test]
fn criterion_09_henson_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 5..=12 {
        let t = gen_structure("henson", n, None).unwrap();
        let arcs = t.relation("E").unwrap().len();
        let antisymmetric = t.relation("E").unwrap().tuples().all(|e| !t.holds("E", &[e[1], e[0]]));
        if arcs != n * (n - 1) / 2 || !antisymmetric {
            failures.push(format!("T_{n}: {arcs} arcs, antisymmetric={antisymmetric}"));
        }
        let report = check_henson_properties(&t).unwrap();
        if n >= 6 && (!report.all_hold() || report.three_cycles != 2 * n - 6) {
            failures.push(format!("T_{n}: {report:?}"));
        }
    }
    let phi_t = formula("phi_T", None);
    for n in 2..=6 {
        if eval_sentence(&gen_structure("td", n, None).unwrap(), &phi_t).unwrap() {
            failures.push(format!("TD_{n} satisfies phi_T"));
        }
    }
    finish(
        9,
        start,
        Duration::from_secs(60),
        &failures,
        "Henson tournaments and TD_n".into(),
    );
}

fn random_colored(rng: &mut ChaCha8Rng, n: usize) -> Structure {
    let pb = rng.gen_range(0.0..0.5);
    let pr = rng.gen_range(0.2..1.0);
    let mut blue = Vec::new();
    let mut red = Vec::new();
    for u in 1..=n {
        for v in 1..=n {
            if u != v && rng.gen_bool(pb) {
                blue.push(vec![u, v]);
            }
            if u != v && rng.gen_bool(pr) {
                red.push(vec![u, v]);
            }
        }
    }
    Structure::new(hermc::reductions::forbtd_signature(), n, [("E_b", blue), ("E_r", red)]).unwrap()
}

/// A random structure mapping homomorphically onto `b` by a random map:
/// each preimage of an arc of `b` is kept with probability `keep`.
fn random_preimage(rng: &mut ChaCha8Rng, b: &Structure, n: usize, keep: f64) -> Structure {
    let f: Vec<usize> = (0..=n).map(|_| rng.gen_range(1..=b.size())).collect();
    let mut rels = Vec::new();
    for name in ["E_b", "E_r"] {
        let mut tuples = Vec::new();
        for u in 1..=n {
            for v in 1..=n {
                if b.holds(name, &[f[u], f[v]]) && rng.gen_bool(keep) {
                    tuples.push(vec![u, v]);
                }
            }
        }
        rels.push((name, tuples));
    }
    Structure::new(hermc::reductions::forbtd_signature(), n, rels).unwrap()
}

#[test]
fn criterion_10_closure() {
    let start = Instant::now();
    let phi_t = formula("phi_T", None);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut failures = Vec::new();
    let (mut hom_cases, mut union_cases) = (0, 0);
    for i in 0..500 {
        let nb = rng.gen_range(1..=5);
        let b = random_colored(&mut rng, nb);
        let na = rng.gen_range(1..=5);
        let a = if i % 2 == 0 {
            random_preimage(&mut rng, &b, na, 0.8)
        } else {
            random_colored(&mut rng, na)
        };
        let a_her = her_check(&a, &phi_t).unwrap().hereditary;
        let b_her = her_check(&b, &phi_t).unwrap().hereditary;
        if b_her && has_hom_brute(&a, &b) {
            hom_cases += 1;
            if !a_her {
                failures.push(format!("pair {i}: A -> B, B in HER, A not in HER"));
            }
        }
        if a_her && b_her {
            union_cases += 1;
            let u = a.disjoint_union(&b).unwrap();
            if !her_check(&u, &phi_t).unwrap().hereditary {
                failures.push(format!("pair {i}: disjoint union leaves HER"));
            }
        }
    }
    let trivial = hom_cases == 0 || union_cases == 0;
    if trivial {
        failures.push("population exercised neither property".into());
    }
    finish(
        10,
        start,
        Duration::from_secs(300),
        &failures,
        format!("closure under inverse homomorphisms ({hom_cases} cases) and disjoint union ({union_cases} cases)"),
    );
}

#[test]
fn criterion_11_relativization() {
    let start = Instant::now();
    let guard = GuardFormula::predicate("U");
    let sig = Signature::new([("E", 2), ("U", 1)]).unwrap();
    let mut structures = Vec::new();
    for d in all_digraphs(3, true) {
        let n = d.size();
        let arcs: Vec<Vec<usize>> = d.relation("E").unwrap().tuples().map(|t| t.to_vec()).collect();
        for mask in 0..1u32 << n {
            let u: Vec<Vec<usize>> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).map(|i| vec![i]).collect();
            structures.push(Structure::new(sig.clone(), n, [("E", arcs.clone()), ("U", u)]).unwrap());
        }
    }
    let mut failures = Vec::new();
    for name in ["sink", "forest", "symedge", "cover"] {
        let p = formula(name, None);
        let rel = relativize(&p, &guard).unwrap();
        failures.extend(structures.par_iter().filter_map(|s| {
            let inside: Vec<usize> = (1..=s.size()).filter(|&i| s.holds("U", &[i])).collect();
            let expected = inside.is_empty() || {
                let sub = s.induced_substructure(&inside).unwrap();
                eval_sentence(&sub.reduct(&Signature::digraph()).unwrap(), &p).unwrap()
            };
            let got = eval_sentence(s, &rel).unwrap();
            (got != expected).then(|| format!("{name}: relativized={got} expected={expected} on {s:?}"))
        }).collect::<Vec<_>>());
    }
    finish(
        11,
        start,
        Duration::from_secs(120),
        &failures,
        format!("relativization biconditional, 4 sentences x {} structures", structures.len()),
    );
}
