//! 3SAT hardness reductions, a brute-force SAT oracle and DIMACS input.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::structure::{Signature, Structure};

/// Largest variable count [`sat_bruteforce`] accepts.
pub const SAT_BRUTE_LIMIT: usize = 24;

/// A 3-CNF formula. Literals are non-zero integers, `-v` the negation of
/// variable `v`; literals may repeat within a clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    vars: usize,
    clauses: Vec<[i32; 3]>,
}

impl CnfInstance {
    pub fn new(vars: usize, clauses: Vec<[i32; 3]>) -> Result<CnfInstance> {
        if clauses.is_empty() {
            return Err(Error::Precondition("at least one clause is required".into()));
        }
        for c in &clauses {
            for &lit in c {
                if lit == 0 || lit.unsigned_abs() as usize > vars {
                    return Err(Error::Precondition(format!(
                        "literal {lit} outside variables 1..={vars}"
                    )));
                }
            }
        }
        Ok(CnfInstance { vars, clauses })
    }

    /// A uniformly random instance: each clause picks three variables
    /// (distinct when possible) with random signs. ChaCha8 seeded by `seed`.
    pub fn random(vars: usize, clauses: usize, seed: u64) -> Result<CnfInstance> {
        if vars == 0 {
            return Err(Error::Precondition("at least one variable is required".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(clauses);
        for _ in 0..clauses {
            let mut clause = [0i32; 3];
            for j in 0..3 {
                let v = loop {
                    let v = rng.gen_range(1..=vars) as i32;
                    if vars < 3 || !clause[..j].iter().any(|l| l.abs() == v) {
                        break v;
                    }
                };
                clause[j] = if rng.gen_bool(0.5) { v } else { -v };
            }
            out.push(clause);
        }
        CnfInstance::new(vars, out)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// Truth of the formula under `assignment[v - 1]`.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    /// The literal at 0-based clause `i`, position `j`.
    fn literal(&self, i: usize, j: usize) -> i32 {
        self.clauses[i][j]
    }

    /// DIMACS text for the instance.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        out
    }
}

/// Side information from [`parse_dimacs`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DimacsStats {
    /// Clauses with fewer than three literals, padded by repetition.
    pub padded_clauses: usize,
}

/// Parses DIMACS CNF. Clauses of one or two literals are padded to three by
/// repeating their last literal; longer clauses are rejected.
pub fn parse_dimacs(text: &str) -> Result<(CnfInstance, DimacsStats)> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut stats = DimacsStats::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| {
                Error::Dimacs(format!("line {}: malformed header `{line}`", lineno + 1))
            })?);
            continue;
        }
        if header.is_none() {
            return Err(Error::Dimacs(format!(
                "line {}: clause before the `p cnf` header",
                lineno + 1
            )));
        }
        for tok in line.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|_| Error::Dimacs(format!("line {}: bad literal `{tok}`", lineno + 1)))?;
            if lit != 0 {
                current.push(lit);
                continue;
            }
            let clause = match current.len() {
                0 => return Err(Error::Dimacs(format!("line {}: empty clause", lineno + 1))),
                1 => [current[0]; 3],
                2 => [current[0], current[1], current[1]],
                3 => [current[0], current[1], current[2]],
                len => {
                    return Err(Error::Dimacs(format!(
                        "line {}: clause with {len} literals; only 3-CNF is supported",
                        lineno + 1
                    )))
                }
            };
            if current.len() < 3 {
                stats.padded_clauses += 1;
            }
            clauses.push(clause);
            current.clear();
        }
    }
    let (vars, count) = header.ok_or_else(|| Error::Dimacs("missing `p cnf` header".into()))?;
    if !current.is_empty() {
        return Err(Error::Dimacs("last clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(Error::Dimacs(format!(
            "header announces {count} clauses, found {}",
            clauses.len()
        )));
    }
    let instance = CnfInstance::new(vars, clauses).map_err(|e| Error::Dimacs(e.to_string()))?;
    Ok((instance, stats))
}

/// Exhaustive satisfiability check; refuses more than 24 variables.
pub fn sat_bruteforce(c: &CnfInstance) -> Result<bool> {
    if c.vars > SAT_BRUTE_LIMIT {
        return Err(Error::ScaleRefused {
            size: c.vars,
            limit: SAT_BRUTE_LIMIT,
        });
    }
    // bit v-1 of `bits` is the value of variable v
    let clause_masks: Vec<[(u32, bool); 3]> = c
        .clauses
        .iter()
        .map(|cl| cl.map(|l| (l.unsigned_abs() - 1, l > 0)))
        .collect();
    Ok((0u32..1 << c.vars).any(|bits| {
        clause_masks
            .iter()
            .all(|cl| cl.iter().any(|&(v, pos)| (bits >> v & 1 == 1) == pos))
    }))
}

/// The signature `{E_b/2, E_r/2}` of blue/red digraphs.
pub fn forbtd_signature() -> Signature {
    Signature::new([("E_b", 2), ("E_r", 2)]).expect("static signature")
}

/// Vertex `a_i^j` (1-based clause `i`, position `j`) of the Forb(TD) reduction.
pub fn forbtd_vertex(i: usize, j: usize) -> usize {
    3 * (i - 1) + j
}

/// The Forb(TD) reduction: `3m` vertices, one per literal occurrence.
///
/// Blue arcs go from every vertex of clause `i` to every vertex of clause
/// `i + 1`, and from clause `m` back to clause 1. Red edges join every two
/// distinct vertices whose literals are not complementary. The formula is
/// satisfiable iff the output does not hereditarily satisfy `phi_T`.
/// Needs `m >= 2`; with `m = 1` the wrap-around arcs would be loops.
pub fn reduce_to_forbtd(c: &CnfInstance) -> Result<Structure> {
    let m = c.clauses.len();
    if m < 2 {
        return Err(Error::Precondition(
            "the Forb(TD) reduction needs at least two clauses; duplicate the clause".into(),
        ));
    }
    let mut blue = Vec::new();
    for i in 1..=m {
        let next = i % m + 1;
        for j in 1..=3 {
            for k in 1..=3 {
                blue.push(vec![forbtd_vertex(i, j), forbtd_vertex(next, k)]);
            }
        }
    }
    let mut red = Vec::new();
    for u in 1..=3 * m {
        for v in 1..=3 * m {
            let (lu, lv) = (c.literal((u - 1) / 3, (u - 1) % 3), c.literal((v - 1) / 3, (v - 1) % 3));
            if u != v && lu != -lv {
                red.push(vec![u, v]);
            }
        }
    }
    Structure::new(forbtd_signature(), 3 * m, [("E_b", blue), ("E_r", red)])
}

/// Vertex `d_i^j` of the symmetric-cycle reduction; `s = 1`, `t = 2`.
pub fn symcycle_vertex(i: usize, j: usize) -> usize {
    2 + 3 * (i - 1) + j
}

/// The symmetric-edge reduction: vertices `s = 1`, `t = 2` and one vertex
/// `d_i^j` per literal occurrence. Arcs `s -> d_1^k`, `d_i^j -> d_{i+1}^k`,
/// `d_m^j -> t` and `t -> s`, plus both arcs between every two distinct
/// vertices with complementary literals. The formula is satisfiable iff
/// some directed cycle induces no symmetric edge.
pub fn reduce_to_symcycle(c: &CnfInstance) -> Result<Structure> {
    let m = c.clauses.len();
    let (s, t) = (1, 2);
    let mut edges = vec![(t, s)];
    for k in 1..=3 {
        edges.push((s, symcycle_vertex(1, k)));
        edges.push((symcycle_vertex(m, k), t));
    }
    for i in 1..m {
        for j in 1..=3 {
            for k in 1..=3 {
                edges.push((symcycle_vertex(i, j), symcycle_vertex(i + 1, k)));
            }
        }
    }
    for u in 0..3 * m {
        for v in 0..3 * m {
            if u != v && c.literal(u / 3, u % 3) == -c.literal(v / 3, v % 3) {
                edges.push((u + 3, v + 3));
            }
        }
    }
    Structure::digraph(3 * m + 2, &edges)
}
