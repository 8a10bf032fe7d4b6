use crate::error::{Error, Result};
use crate::formula::PrenexSentence;
use crate::reductions::forbtd_signature;
use crate::structure::Signature;
use crate::syntax::parse_sentence;

/// Names accepted by [`corpus_formula`].
pub const FORMULA_NAMES: &[&str] = &[
    "sink",
    "forest",
    "k_degenerate",
    "chordal",
    "phi_T",
    "phi_T_eae",
    "symedge",
    "symedge_eae",
    "cover",
    "andor",
    "neq_eq",
    "p3",
    "henson_phi",
    "henson_psi",
];

/// A named sentence. `k_degenerate` takes `k` (default 1) and `andor`
/// takes `k` (default 2, over `R/(k+1)`); other names ignore `param`.
///
/// * `sink`: some vertex has no out-neighbour; HER = acyclic digraphs.
/// * `forest`: a loopless vertex with at most one out-neighbour; on
///   symmetric graphs HER = forests.
/// * `k_degenerate`: a loopless vertex with at most `k` out-neighbours.
/// * `chordal`: a loopless vertex whose out-neighbours are pairwise adjacent.
/// * `phi_T` / `phi_T_eae`: over `{E_b, E_r}`, prefixes `∃∃∀` and `∃∀∃`;
///   HER is the class of structures omitting every `TD_n` as an induced
///   substructure up to the arcs the sentence cannot see.
/// * `symedge` / `symedge_eae`: a vertex that is a sink or lies on a
///   symmetric edge; HER = every cycle has a symmetric edge.
/// * `cover`: `∃∃∀∃`; its negation is `∀∀∃∀` and HER of the negation is
///   the class of cover relations of partial orders. With `x = y` every
///   vertex has an out-neighbour (a directed cycle); otherwise `(x,y)` is
///   an arc, `x` has another out-neighbour and every vertex but `y` has an
///   out-neighbour (a longer path from `x` to `y`, or a cycle). The
///   one-case form `E(x,y) & (E(z,a) | z = x & a != y & E(x,a) | z = y)`
///   already holds on a single arc.
/// * `andor`: `∃x ∀y_1..y_k. ~R(x,y_1..y_k)`.
/// * `neq_eq`: over `{N, EQ}` with degree macros expanded.
/// * `p3`: holds exactly in digraphs that contain an obstruction to a
///   homomorphism to the directed path with three vertices in a form
///   visible to the whole structure; HER of its negation is that CSP.
/// * `henson_phi` / `henson_psi`: see [`henson_phi_text`] and [`henson_psi_text`].
pub fn corpus_formula(name: &str, param: Option<usize>) -> Result<PrenexSentence> {
    let e = Signature::digraph();
    match name {
        "sink" => parse_sentence("exists x. forall y. ~E(x,y)", &e),
        "forest" => parse_sentence(
            "exists x. forall y,z. ~E(x,x) & (E(x,y) & E(x,z) -> y = z)",
            &e,
        ),
        "k_degenerate" => parse_sentence(&k_degenerate_text(param.unwrap_or(1))?, &e),
        "chordal" => parse_sentence(
            "exists x. forall y,z. ~E(x,x) & (E(x,y) & E(x,z) & y != z -> E(y,z))",
            &e,
        ),
        "phi_T" => parse_sentence(
            &format!("exists x,y. forall a. {PHI_T_MATRIX}"),
            &forbtd_signature(),
        ),
        "phi_T_eae" => parse_sentence(
            &format!("exists x. forall a. exists y. {PHI_T_MATRIX}"),
            &forbtd_signature(),
        ),
        "symedge" => parse_sentence("exists x,y. forall a. ~E(x,a) | E(x,y) & E(y,x)", &e),
        "symedge_eae" => parse_sentence("exists x. forall a. exists y. ~E(x,a) | E(x,y) & E(y,x)", &e),
        "cover" => parse_sentence(
            "exists x,y. forall z. exists a. x = y & E(z,a) \
             | x != y & E(x,y) & (z != x & z != y & E(z,a) | z = x & a != y & E(x,a) | z = y)",
            &e,
        ),
        "andor" => {
            let k = param.unwrap_or(2);
            if k == 0 {
                return Err(Error::Precondition("andor needs k >= 1".into()));
            }
            let ys: Vec<String> = (1..=k).map(|i| format!("y{i}")).collect();
            let sig = Signature::new([("R", k + 1)])?;
            parse_sentence(
                &format!("exists x. forall {}. ~R(x,{})", ys.join(","), ys.join(",")),
                &sig,
            )
        }
        "neq_eq" => parse_sentence(
            "forall x,y. exists z. ~N(x,y) | deg_EQ(x) != 1 | deg_EQ(y) != 1 | deg_EQ(z) != 2",
            &Signature::new([("N", 2), ("EQ", 2)])?,
        ),
        "p3" => parse_sentence(&p3_text(), &e),
        "henson_phi" => parse_sentence(&henson_phi_text(), &e),
        "henson_psi" => parse_sentence(&henson_psi_text(), &e),
        other => Err(Error::UnknownName {
            kind: "formula",
            name: other.to_string(),
        }),
    }
}

const PHI_T_MATRIX: &str = "~E_b(a,a) & ~E_r(a,a) & (~E_b(x,a) | x != y & ~E_r(x,y))";

fn k_degenerate_text(k: usize) -> Result<String> {
    if k == 0 {
        return Ok("exists x. forall y. ~E(x,x) & ~E(x,y)".into());
    }
    let ys: Vec<String> = (1..=k + 1).map(|i| format!("y{i}")).collect();
    let edges: Vec<String> = ys.iter().map(|y| format!("E(x,{y})")).collect();
    let mut eqs = Vec::new();
    for i in 0..ys.len() {
        for j in 0..i {
            eqs.push(format!("{} = {}", ys[j], ys[i]));
        }
    }
    Ok(format!(
        "exists x. forall {}. ~E(x,x) & ({} -> {})",
        ys.join(","),
        edges.join(" & "),
        eqs.join(" | ")
    ))
}

/// `v` has the single out-neighbour `t`.
fn out_only(v: &str, t: &str, q: &str) -> String {
    format!("E({v},{t}) & (forall {q}. (E({v},{q}) -> {q} = {t}))")
}

/// `v` has the single in-neighbour `t`.
fn in_only(v: &str, t: &str, q: &str) -> String {
    format!("E({t},{v}) & (forall {q}. (E({q},{v}) -> {q} = {t}))")
}

/// `z` is a source with exactly two out-neighbours.
fn source2(z: &str, tag: &str) -> String {
    format!(
        "(forall q{tag}. ~E(q{tag},{z})) & (exists s{tag},t{tag}. s{tag} != t{tag} & E({z},s{tag}) & E({z},t{tag}) \
         & (forall r{tag}. (E({z},r{tag}) -> r{tag} = s{tag} | r{tag} = t{tag})))"
    )
}

/// `z` is a sink with exactly two in-neighbours.
fn sink2(z: &str, tag: &str) -> String {
    format!(
        "(forall q{tag}. ~E({z},q{tag})) & (exists s{tag},t{tag}. s{tag} != t{tag} & E(s{tag},{z}) & E(t{tag},{z}) \
         & (forall r{tag}. (E(r{tag},{z}) -> r{tag} = s{tag} | r{tag} = t{tag})))"
    )
}

fn hom(vertices: usize, arcs: &[(usize, usize)]) -> String {
    let vs: Vec<String> = (0..vertices).map(|i| format!("h{i}")).collect();
    let atoms: Vec<String> = arcs.iter().map(|&(a, b)| format!("E(h{a},h{b})")).collect();
    format!("(exists {}. {})", vs.join(","), atoms.join(" & "))
}

/// The `p3` sentence: a disjunction of conditions each of which rules out a
/// homomorphism to the directed path `1 -> 2 -> 3`, chosen so that every
/// digraph without such a homomorphism has an induced substructure
/// satisfying one of them.
///
/// * a loop, or a symmetric pair;
/// * a homomorphic image of the directed 3-cycle, the directed 4-cycle,
///   the cycle `1->2->3->4, 1->4`, or the 6-cycle with arcs
///   `0->1, 1->2, 3->2, 3->4, 4->5, 0->5` (the minimal unbalanced
///   cycles that are not covered by the last case);
/// * `Path`: the whole structure is an oriented path `x -> y .. a -> b`
///   of net length 3 whose inner vertices are alternately sinks and
///   sources, plus components made of such sinks and sources only;
/// * `OnePass`: the whole structure consists of cycles of sinks and
///   sources except for a single vertex with one in- and one distinct
///   out-neighbour; its cycle has net length 2.
pub fn p3_text() -> String {
    p3_disjuncts().join(" | ")
}

/// The disjuncts of [`p3_text`], each a sentence on its own.
pub fn p3_disjuncts() -> Vec<String> {
    let path = format!(
        "(exists x,y,a,b. x != y & x != a & x != b & y != a & y != b & a != b \
         & (forall q1. ~E(q1,x)) & {} & {} & (exists w. w != x & {}) \
         & (forall q4. ~E(b,q4)) & {} & {} & (exists p. p != b & {}) \
         & (forall z. z = x | z = y | z = a | z = b | ({}) | ({})))",
        out_only("x", "y", "q2"),
        in_only("y", "x", "q3"),
        out_only("y", "w", "q5"),
        in_only("b", "a", "q6"),
        out_only("a", "b", "q7"),
        in_only("a", "p", "q8"),
        source2("z", "1"),
        sink2("z", "2"),
    );
    let one_pass = format!(
        "(exists w. forall z. (z = w & (exists i,o. i != o & {} & {})) | (z != w & ({})) | (z != w & ({})))",
        in_only("w", "i", "q9"),
        out_only("w", "o", "q10"),
        source2("z", "3"),
        sink2("z", "4"),
    );
    [
        "(exists x. E(x,x))".to_string(),
        "(exists x,y. E(x,y) & E(y,x))".to_string(),
        hom(3, &[(0, 1), (1, 2), (2, 0)]),
        hom(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
        hom(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]),
        hom(6, &[(0, 1), (1, 2), (3, 2), (3, 4), (4, 5), (0, 5)]),
        path,
        one_pass,
    ]
    .to_vec()
}

fn cyc(x: &str, y: &str, z: &str) -> String {
    format!("(~E({x},{x}) & ~E({y},{y}) & ~E({z},{z}) & E({x},{y}) & E({y},{z}) & E({z},{x}))")
}

fn member(v: &str, set: &[&str]) -> String {
    let parts: Vec<String> = set.iter().map(|s| format!("{v} = {s}")).collect();
    format!("({})", parts.join(" | "))
}

fn some_equal(vars: &[&str]) -> String {
    let mut parts = Vec::new();
    for i in 0..vars.len() {
        for j in 0..i {
            parts.push(format!("{} = {}", vars[j], vars[i]));
        }
    }
    format!("({})", parts.join(" | "))
}

/// The sentence defining the Henson tournaments among tournaments with at
/// least six vertices, prefix `∃^6 ∀^7 ∃^2`.
///
/// Two readings differ from the printed display: the first 3-cycle is
/// `x1, x2, x3` (the display repeats `x2`), and the last alternative of
/// the final line is the conjunction `Cyc(c,a,g1) & Cyc(a,b,g2)` like the
/// two before it.
pub fn henson_phi_text() -> String {
    let lines = [
        format!("{} & {}", cyc("x1", "x2", "x3"), cyc("y1", "y2", "y3")),
        format!("({} | {})", member("z", &["x1", "x2", "y2", "y3"]), cyc("y3", "z", "x1")),
        format!(
            "({} | E(y2,z)) & ({} | E(z,x2))",
            member("z", &["y1", "y2"]),
            member("z", &["x2", "x3"])
        ),
        format!(
            "({} & {} & {} -> {} | x1 = a & y3 = b)",
            cyc("a", "b", "c"),
            cyc("a", "b", "d"),
            cyc("a", "b", "e"),
            some_equal(&["c", "d", "e"])
        ),
        format!(
            "({} & {} & {} & {} -> {})",
            cyc("a", "b", "c"),
            cyc("a", "b", "d"),
            cyc("b", "c", "e"),
            cyc("c", "a", "f"),
            some_equal(&["a", "b", "c", "d", "e", "f"])
        ),
        format!(
            "({} & ~({} & {}) -> {} & {} | {} & {} | {} & {})",
            cyc("a", "b", "c"),
            member("x1", &["a", "b", "c"]),
            member("y3", &["a", "b", "c"]),
            cyc("a", "b", "g1"),
            cyc("b", "c", "g2"),
            cyc("b", "c", "g1"),
            cyc("c", "a", "g2"),
            cyc("c", "a", "g1"),
            cyc("a", "b", "g2"),
        ),
    ];
    format!(
        "exists x1,x2,x3,y1,y2,y3. forall z,a,b,c,d,e,f. exists g1,g2. {}",
        lines.join(" & ")
    )
}

/// An `∃∀` sentence axiomatizing the five-vertex Henson tournament: five
/// distinct vertices with exactly its arc pattern and nothing else.
pub fn henson_psi_text() -> String {
    let arcs = [(1, 5), (1, 2), (2, 3), (3, 4), (4, 5), (3, 1), (4, 1), (4, 2), (5, 2), (5, 3)];
    let mut parts = Vec::new();
    for i in 1..=5 {
        for j in 1..=5 {
            if i < j {
                parts.push(format!("v{i} != v{j}"));
            }
            let atom = format!("E(v{i},v{j})");
            parts.push(if arcs.contains(&(i, j)) { atom } else { format!("~{atom}") });
        }
    }
    parts.push(member("z", &["v1", "v2", "v3", "v4", "v5"]));
    format!("exists v1,v2,v3,v4,v5. forall z. {}", parts.join(" & "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::gen_structure;
    use crate::eval::{eval_fo, eval_sentence};
    use crate::formula::Var;
    use crate::hom::find_homomorphism;
    use crate::structure::Structure;
    use crate::syntax::{parse_formula, print_sentence};
    use std::collections::BTreeMap;

    #[test]
    fn prefixes() {
        let pre = |n: &str, p: Option<usize>| corpus_formula(n, p).unwrap().quantifier_prefix().to_string();
        assert_eq!(pre("sink", None), "∃∀");
        assert_eq!(pre("forest", None), "∃∀∀");
        assert_eq!(pre("chordal", None), "∃∀∀");
        assert_eq!(pre("phi_T", None), "∃∃∀");
        assert_eq!(pre("phi_T_eae", None), "∃∀∃");
        assert_eq!(pre("symedge", None), "∃∃∀");
        assert_eq!(pre("symedge_eae", None), "∃∀∃");
        assert_eq!(pre("cover", None), "∃∃∀∃");
        assert_eq!(pre("andor", Some(2)), "∃∀∀");
        assert_eq!(pre("k_degenerate", Some(2)), "∃∀∀∀");
        assert_eq!(pre("henson_phi", None), "∃∃∃∃∃∃∀∀∀∀∀∀∀∃∃");
        assert_eq!(pre("henson_psi", None), "∃∃∃∃∃∀");
        assert_eq!(
            corpus_formula("andor", Some(2)).unwrap().signature().arity("R"),
            Some(3)
        );
        assert_eq!(
            print_sentence(&corpus_formula("sink", None).unwrap()),
            "exists x. forall y. ~E(x,y)"
        );
        assert!(matches!(
            corpus_formula("nope", None),
            Err(Error::UnknownName { .. })
        ));
    }

    #[test]
    fn p3_examples() {
        let p3 = corpus_formula("p3", None).unwrap();
        let holds = |n: usize, edges: &[(usize, usize)]| {
            eval_sentence(&Structure::digraph(n, edges).unwrap(), &p3).unwrap()
        };
        // directed path on four vertices
        assert!(holds(4, &[(1, 2), (2, 3), (3, 4)]));
        // transitive triangle
        assert!(holds(3, &[(1, 2), (2, 3), (1, 3)]));
        assert!(holds(3, &[(1, 2), (2, 3), (3, 1)]));
        assert!(!holds(3, &[(1, 2), (2, 3)]));
        assert!(!holds(4, &[(1, 2), (3, 2), (3, 4), (1, 4)]));
        // 1->2->3, 4->5->3 balanced, height 2
        assert!(!holds(5, &[(1, 2), (2, 3), (4, 5), (5, 3)]));
        // zig-zag of net length 3
        let zig = [(1, 2), (2, 3), (4, 3), (4, 5), (5, 6)];
        assert!(holds(6, &zig));
        let p = Structure::digraph(3, &[(1, 2), (2, 3)]).unwrap();
        assert!(find_homomorphism(&Structure::digraph(6, &zig).unwrap(), &p, false)
            .unwrap()
            .is_none());
    }

    #[test]
    fn henson_phi_witness_on_small_tournaments() {
        // plug in the witness x̄ = (1,2,3,n-2,n-1,n) and check the rest
        let e = Signature::digraph();
        let text = henson_phi_text();
        let body = text.split_once("exists x1,x2,x3,y1,y2,y3.").unwrap().1;
        let f = parse_formula(body, &e).unwrap();
        for n in 6..=8 {
            let t = gen_structure("henson", n, None).unwrap();
            let names = ["x1", "x2", "x3", "y1", "y2", "y3"];
            let values = [1, 2, 3, n - 2, n - 1, n];
            let a: BTreeMap<Var, usize> = names.iter().map(|s| Var::from(*s)).zip(values).collect();
            assert!(eval_fo(&t, &f, &a).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn henson_psi_axiomatizes_t5() {
        let psi = corpus_formula("henson_psi", None).unwrap();
        let t5 = gen_structure("henson", 5, None).unwrap();
        assert!(eval_sentence(&t5, &psi).unwrap());
        let perm = t5.permute(&[3, 1, 5, 2, 4]).unwrap();
        assert!(eval_sentence(&perm, &psi).unwrap());
        assert!(!eval_sentence(&gen_structure("henson", 6, None).unwrap(), &psi).unwrap());
        assert!(!eval_sentence(&gen_structure("complete", 5, None).unwrap(), &psi).unwrap());
    }
}
