//! Exhaustive oracle: does every directed cycle induce a symmetric edge?

use crate::error::{Error, Result};
use crate::structure::Structure;

/// Adjacency matrix of the binary relation `E`, 0-based.
fn adjacency(d: &Structure) -> Result<Vec<Vec<bool>>> {
    let rel = match d.relation("E") {
        Some(r) if r.arity() == 2 && d.signature().len() == 1 => r,
        _ => {
            return Err(Error::SignatureMismatch(format!(
                "expected a digraph over {{E/2}}, got {{{}}}",
                d.signature()
            )))
        }
    };
    let n = d.size();
    let mut adj = vec![vec![false; n]; n];
    for t in rel.tuples() {
        adj[t[0] - 1][t[1] - 1] = true;
    }
    Ok(adj)
}

/// True iff every directed cycle `d_1, ..., d_n` of `d` has vertices `d_i, d_j`
/// with both `(d_i, d_j)` and `(d_j, d_i)` edges.
///
/// A loop counts as a symmetric pair (take `i = j`). The check enumerates the
/// maximal vertex sets without a symmetric pair (Bron–Kerbosch on the
/// "no symmetric pair" graph) and looks for a directed cycle inside each;
/// it is exponential and meant as an oracle.
pub fn every_cycle_has_symmetric_edge(d: &Structure) -> Result<bool> {
    let adj = adjacency(d)?;
    let n = adj.len();
    // compatible[u][v]: u != v and u, v do not form a symmetric pair
    let mut compatible = vec![0u64; n];
    let mut candidates = 0u64;
    assert!(n <= 64, "oracle limited to 64 vertices");
    for u in 0..n {
        if adj[u][u] {
            continue;
        }
        candidates |= 1 << u;
        for v in 0..n {
            if v != u && !adj[v][v] && !(adj[u][v] && adj[v][u]) {
                compatible[u] |= 1 << v;
            }
        }
    }
    let mut found_cycle = false;
    bron_kerbosch(0, candidates, 0, &compatible, &mut |set| {
        if has_cycle(&adj, set) {
            found_cycle = true;
        }
        !found_cycle
    });
    Ok(!found_cycle)
}

/// Enumerates maximal cliques; `visit` returns false to stop.
fn bron_kerbosch(
    r: u64,
    mut p: u64,
    mut x: u64,
    nbrs: &[u64],
    visit: &mut impl FnMut(u64) -> bool,
) -> bool {
    if p == 0 && x == 0 {
        return visit(r);
    }
    let pivot = (p | x).trailing_zeros() as usize;
    let mut todo = p & !nbrs[pivot];
    while todo != 0 {
        let v = todo.trailing_zeros() as usize;
        todo &= todo - 1;
        let bit = 1u64 << v;
        if !bron_kerbosch(r | bit, p & nbrs[v], x & nbrs[v], nbrs, visit) {
            return false;
        }
        p &= !bit;
        x |= bit;
    }
    true
}

/// Kahn's algorithm on the subgraph induced by `set`.
fn has_cycle(adj: &[Vec<bool>], set: u64) -> bool {
    let n = adj.len();
    let members: Vec<usize> = (0..n).filter(|&v| set >> v & 1 == 1).collect();
    let mut indeg = vec![0usize; n];
    for &u in &members {
        for &v in &members {
            if adj[u][v] {
                indeg[v] += 1;
            }
        }
    }
    let mut stack: Vec<usize> = members.iter().copied().filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(u) = stack.pop() {
        removed += 1;
        for &v in &members {
            if adj[u][v] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
    }
    removed < members.len()
}
