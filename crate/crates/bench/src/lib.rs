//! Benchmark fixtures: corpus sentences paired with structures on which
//! each decision procedure does its full amount of work.

use hermc::corpus::{corpus_formula, gen_structure, random_digraph};
use hermc::{parse_sentence, PrenexSentence, Signature, Structure};

/// Transitive tournament on `1..=n`. Hereditarily has a sink, so
/// `algorithm1` builds a complete order instead of stopping early.
pub fn transitive_tournament(n: usize) -> Structure {
    let edges: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    Structure::digraph(n, &edges).expect("valid digraph")
}

/// `(name, sentence, structure)` for the `∀*∃∀*` path.
pub fn alg1_cases(sizes: &[usize]) -> Vec<(String, PrenexSentence, Structure)> {
    let sink = corpus_formula("sink", None).expect("corpus");
    let chordal = corpus_formula("chordal", None).expect("corpus");
    let mut out = Vec::new();
    for &n in sizes {
        out.push((format!("sink/tournament/{n}"), sink.clone(), transitive_tournament(n)));
        // a path is chordal, so every vertex gets ordered
        let path = gen_structure("dpath", n, None).expect("family");
        let sym = symmetric_closure(&path);
        out.push((format!("chordal/path/{n}"), chordal.clone(), sym));
    }
    out
}

/// `(name, sentence, structure)` for the `∀*∃*` collapse path: "any two
/// vertices are joined by a path of length at most 2", which complete
/// digraphs satisfy on every subset, so all pairs get checked.
pub fn collapse_cases(sizes: &[usize]) -> Vec<(String, PrenexSentence, Structure)> {
    let p = parse_sentence(
        "forall x,y. exists z. x = y | E(x,y) | E(x,z) & E(z,y)",
        &Signature::digraph(),
    )
    .expect("sentence");
    sizes
        .iter()
        .map(|&n| {
            let s = gen_structure("complete", n, None).expect("family");
            (format!("two_steps/complete/{n}"), p.clone(), s)
        })
        .collect()
}

/// `(name, sentence, structure)` for exhaustive search. The sink sentence
/// holds on every subset of a transitive tournament, so the scan visits all
/// `2^n - 1` subsets.
pub fn bruteforce_cases(sizes: &[usize]) -> Vec<(String, PrenexSentence, Structure)> {
    let p = corpus_formula("sink", None).expect("corpus");
    sizes
        .iter()
        .map(|&n| (format!("sink/tournament/{n}"), p.clone(), transitive_tournament(n)))
        .collect()
}

/// A seeded random digraph, for the plain evaluator.
pub fn random_case(n: usize, seed: u64) -> Structure {
    random_digraph(n, 0.3, seed).expect("digraph")
}

fn symmetric_closure(s: &Structure) -> Structure {
    let mut edges = Vec::new();
    for t in s.relation("E").expect("digraph").tuples() {
        edges.push((t[0], t[1]));
        edges.push((t[1], t[0]));
    }
    Structure::digraph(s.size(), &edges).expect("valid digraph")
}
