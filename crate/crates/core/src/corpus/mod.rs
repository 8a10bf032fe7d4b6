//! Named structure families and sentences used as test corpus and CLI
//! examples.

mod formulas;
mod henson;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::structure::{Signature, Structure};

pub use formulas::{corpus_formula, henson_phi_text, henson_psi_text, p3_disjuncts, p3_text, FORMULA_NAMES};
pub use henson::{check_henson_properties, henson_cycles, HensonReport};

/// Family names accepted by [`gen_structure`].
pub const FAMILY_NAMES: &[&str] = &[
    "td",
    "henson",
    "dcycle",
    "dpath",
    "symcycle",
    "revcycle",
    "q_obstruction_c",
    "q_obstruction_d",
    "complete",
    "random_digraph",
];

/// Edge probability used by `gen_structure("random_digraph", ..)`.
pub const DEFAULT_EDGE_PROBABILITY: f64 = 0.5;

/// Name of the generator behind [`random_digraph`], for output headers.
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha 0.3)";

fn minimum(family: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::Precondition(format!(
            "family `{family}` needs n >= {min}, got {n}"
        )))
    } else {
        Ok(())
    }
}

/// Generates a member of a named family on domain `1..=n`.
///
/// * `td`: blue Hamiltonian cycle `1 -> 2 -> .. -> n -> 1` (`E_b`) and a
///   complete loopless red graph (`E_r`), `n >= 2`;
/// * `henson`: the tournament with arcs `(1,n)`, `(i,i+1)` and `(j,i)` for
///   `j > i+1` except `(n,1)`, `n >= 5`;
/// * `dcycle` / `dpath`: directed cycle (`n >= 2`) and path (`n >= 1`);
/// * `symcycle`: symmetric cycle, `n >= 3`;
/// * `revcycle`: directed cycle with the arc `(n,1)` reversed, `n >= 3`;
/// * `q_obstruction_c` / `q_obstruction_d`: the `{EQ, LT}` obstructions of
///   [`q_obstruction`], `n >= 2`, on `4n - 4` elements;
/// * `complete`: all arcs between distinct vertices;
/// * `random_digraph`: [`random_digraph`] with edge probability 1/2; needs a seed.
pub fn gen_structure(family: &str, n: usize, seed: Option<u64>) -> Result<Structure> {
    match family {
        "td" => {
            minimum(family, n, 2)?;
            let blue = (1..=n).map(|i| vec![i, i % n + 1]).collect();
            let red = all_pairs(n).map(|(u, v)| vec![u, v]).collect();
            Structure::new(
                crate::reductions::forbtd_signature(),
                n,
                [("E_b", blue), ("E_r", red)],
            )
        }
        "henson" => {
            minimum(family, n, 5)?;
            let mut edges = vec![(1, n)];
            edges.extend((1..n).map(|i| (i, i + 1)));
            for j in 1..=n {
                for i in 1..j.saturating_sub(1) {
                    if (j, i) != (n, 1) {
                        edges.push((j, i));
                    }
                }
            }
            Structure::digraph(n, &edges)
        }
        "dcycle" => {
            minimum(family, n, 2)?;
            let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
            Structure::digraph(n, &edges)
        }
        "dpath" => {
            minimum(family, n, 1)?;
            let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
            Structure::digraph(n, &edges)
        }
        "symcycle" => {
            minimum(family, n, 3)?;
            let edges: Vec<_> = (1..=n)
                .flat_map(|i| [(i, i % n + 1), (i % n + 1, i)])
                .collect();
            Structure::digraph(n, &edges)
        }
        "revcycle" => {
            minimum(family, n, 3)?;
            let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
            edges.push((1, n));
            Structure::digraph(n, &edges)
        }
        "q_obstruction_c" => q_obstruction(n, false),
        "q_obstruction_d" => q_obstruction(n, true),
        "complete" => {
            minimum(family, n, 1)?;
            let edges: Vec<_> = all_pairs(n).collect();
            Structure::digraph(n, &edges)
        }
        "random_digraph" => {
            let seed = seed.ok_or_else(|| {
                Error::Precondition("family `random_digraph` needs an explicit seed".into())
            })?;
            random_digraph(n, DEFAULT_EDGE_PROBABILITY, seed)
        }
        other => Err(Error::UnknownName {
            kind: "structure family",
            name: other.to_string(),
        }),
    }
}

fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |u| (1..=n).filter(move |&v| v != u).map(move |v| (u, v)))
}

/// A loopless random digraph: every ordered pair of distinct vertices is an
/// arc independently with probability `p`. ChaCha8 seeded with `seed`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Result<Structure> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("edge probability {p} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = all_pairs(n).filter(|_| rng.gen_bool(p)).collect();
    Structure::digraph(n, &edges)
}

/// The signature `{EQ/2, LT/2}` of the obstruction structures.
pub fn q_signature() -> Signature {
    Signature::new([("EQ", 2), ("LT", 2)]).expect("static signature")
}

/// The obstructions `C_n` (`reversed = false`) and `D_n` (`reversed = true`)
/// over `{EQ, LT}`.
///
/// Elements: the bottom chain `v_1..v_n` (elements `1..=n`), the right
/// path `r_2..r_{n-1}` (`n+1..=2n-2`), the top chain `u_1..u_n`
/// (`2n-1..=3n-2`) and the left path `l_2..l_{n-1}` (`3n-1..=4n-4`).
/// `LT` holds along `v_1 < v_2 < .. < v_n`; on the top chain it runs
/// `u_1 < .. < u_n` in `C_n` and `u_n < .. < u_1` in `D_n`. `EQ` is
/// symmetric along the paths `v_n = r_2 = .. = r_{n-1} = u_1` and
/// `u_n = l_2 = .. = l_{n-1} = v_1`.
pub fn q_obstruction(n: usize, reversed: bool) -> Result<Structure> {
    minimum(if reversed { "q_obstruction_d" } else { "q_obstruction_c" }, n, 2)?;
    let v = |i: usize| i;
    let r = |j: usize| n + j - 1;
    let u = |i: usize| 2 * n - 2 + i;
    let l = |j: usize| 3 * n - 2 + j - 1;

    let mut lt = Vec::new();
    for i in 1..n {
        lt.push(vec![v(i), v(i + 1)]);
        lt.push(if reversed {
            vec![u(i + 1), u(i)]
        } else {
            vec![u(i), u(i + 1)]
        });
    }
    let right: Vec<usize> = std::iter::once(v(n))
        .chain((2..n).map(r))
        .chain(std::iter::once(u(1)))
        .collect();
    let left: Vec<usize> = std::iter::once(u(n))
        .chain((2..n).map(l))
        .chain(std::iter::once(v(1)))
        .collect();
    let mut eq = Vec::new();
    for path in [right, left] {
        for w in path.windows(2) {
            eq.push(vec![w[0], w[1]]);
            eq.push(vec![w[1], w[0]]);
        }
    }
    Structure::new(q_signature(), 4 * n - 4, [("EQ", eq), ("LT", lt)])
}
