//! Independent oracles shared by the integration tests. None of them calls
//! into the library's decision procedures.

#![allow(dead_code)]

use std::io::Write;

use hermc::{Signature, Structure};

/// Arcs of the digraph on `1..=n` encoded by `mask`, one bit per ordered
/// pair `(u, v)` in row-major order; loops are skipped unless `loops`.
pub fn arcs(n: usize, mask: u64, loops: bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut bit = 0;
    for u in 1..=n {
        for v in 1..=n {
            if u == v && !loops {
                continue;
            }
            if mask >> bit & 1 == 1 {
                out.push((u, v));
            }
            bit += 1;
        }
    }
    out
}

/// Every digraph with 1 to `max_n` vertices, with or without loops.
pub fn all_digraphs(max_n: usize, loops: bool) -> Vec<Structure> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs = if loops { n * n } else { n * (n - 1) };
        for mask in 0..1u64 << pairs {
            out.push(Structure::digraph(n, &arcs(n, mask, loops)).unwrap());
        }
    }
    out
}

/// Every loopless undirected graph with 1 to `max_n` vertices, as a
/// symmetric digraph.
pub fn all_graphs(max_n: usize) -> Vec<Structure> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
            .collect();
        for mask in 0..1u64 << pairs.len() {
            let mut arcs = Vec::new();
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    arcs.push((u, v));
                    arcs.push((v, u));
                }
            }
            out.push(Structure::digraph(n, &arcs).unwrap());
        }
    }
    out
}

pub fn adjacency(s: &Structure) -> Vec<Vec<bool>> {
    let n = s.size();
    let mut adj = vec![vec![false; n + 1]; n + 1];
    for t in s.relation("E").unwrap().tuples() {
        adj[t[0]][t[1]] = true;
    }
    adj
}

/// Kahn's algorithm: true iff the digraph has no directed cycle (loops
/// count as cycles).
pub fn is_acyclic_toposort(s: &Structure) -> bool {
    let n = s.size();
    let adj = adjacency(s);
    let mut indeg = vec![0usize; n + 1];
    for u in 1..=n {
        for v in 1..=n {
            if adj[u][v] {
                indeg[v] += 1;
            }
        }
    }
    let mut queue: Vec<usize> = (1..=n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = queue.pop() {
        seen += 1;
        for v in 1..=n {
            if adj[u][v] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push(v);
                }
            }
        }
    }
    seen == n
}

/// Union-find cycle check on a symmetric loopless graph.
pub fn is_forest_union_find(s: &Structure) -> bool {
    let n = s.size();
    let adj = adjacency(s);
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for u in 1..=n {
        if adj[u][u] {
            return false;
        }
        for v in u + 1..=n {
            if adj[u][v] {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a == b {
                    return false;
                }
                parent[a] = b;
            }
        }
    }
    true
}

/// Chordality by maximum cardinality search followed by a check that the
/// reverse visiting order is a perfect elimination ordering.
pub fn is_chordal_mcs(s: &Structure) -> bool {
    let n = s.size();
    let adj = adjacency(s);
    if (1..=n).any(|v| adj[v][v]) {
        return false;
    }
    let mut weight = vec![0usize; n + 1];
    let mut numbered = vec![false; n + 1];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (1..=n)
            .filter(|&v| !numbered[v])
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .unwrap();
        numbered[v] = true;
        order.push(v);
        for w in 1..=n {
            if adj[v][w] && !numbered[w] {
                weight[w] += 1;
            }
        }
    }
    // elimination order: reverse of the visiting order
    order.reverse();
    let pos: Vec<usize> = {
        let mut p = vec![0; n + 1];
        for (i, &v) in order.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    order.iter().all(|&v| {
        let later: Vec<usize> = (1..=n).filter(|&w| adj[v][w] && pos[w] > pos[v]).collect();
        later.iter().all(|&a| later.iter().all(|&b| a == b || adj[a][b]))
    })
}

/// The digraph is the cover relation of a partial order: acyclic and no
/// arc `(u,v)` with a directed path from `u` to `v` of length at least 2.
pub fn is_cover_relation(s: &Structure) -> bool {
    if !is_acyclic_toposort(s) {
        return false;
    }
    let n = s.size();
    let adj = adjacency(s);
    for u in 1..=n {
        for v in 1..=n {
            if !adj[u][v] {
                continue;
            }
            // vertices reachable from u by paths of length >= 2
            let mut frontier: Vec<usize> = (1..=n).filter(|&w| adj[u][w]).collect();
            let mut reach2 = vec![false; n + 1];
            let mut level = 1;
            let mut seen = vec![false; n + 1];
            while !frontier.is_empty() && level <= n {
                let mut next = Vec::new();
                for &w in &frontier {
                    for x in 1..=n {
                        if adj[w][x] {
                            reach2[x] = true;
                            if !seen[x] {
                                seen[x] = true;
                                next.push(x);
                            }
                        }
                    }
                }
                frontier = next;
                level += 1;
            }
            if reach2[v] {
                return false;
            }
        }
    }
    true
}

/// Brute-force homomorphism test by trying every map.
pub fn has_hom_brute(a: &Structure, b: &Structure) -> bool {
    let (n, m) = (a.size(), b.size());
    let tuples: Vec<(String, Vec<Vec<usize>>)> = a
        .relations()
        .map(|(name, r)| (name.to_string(), r.tuples().map(|t| t.to_vec()).collect()))
        .collect();
    let mut map = vec![1usize; n + 1];
    loop {
        let ok = tuples.iter().all(|(name, ts)| {
            ts.iter()
                .all(|t| b.holds(name, &t.iter().map(|&x| map[x]).collect::<Vec<_>>()))
        });
        if ok {
            return true;
        }
        let mut i = 1;
        loop {
            if i > n {
                return false;
            }
            if map[i] < m {
                map[i] += 1;
                break;
            }
            map[i] = 1;
            i += 1;
        }
    }
}

/// Directed path `1 -> 2 -> .. -> n`.
pub fn dpath(n: usize) -> Structure {
    let arcs: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
    Structure::digraph(n, &arcs).unwrap()
}

/// A small DPLL solver on clause lists.
pub fn dpll(clauses: &[Vec<i32>], vars: usize) -> bool {
    fn go(clauses: Vec<Vec<i32>>) -> bool {
        if clauses.is_empty() {
            return true;
        }
        if clauses.iter().any(|c| c.is_empty()) {
            return false;
        }
        let lit = clauses
            .iter()
            .find(|c| c.len() == 1)
            .map(|c| c[0])
            .unwrap_or(clauses[0][0]);
        let assign = |l: i32| -> Vec<Vec<i32>> {
            clauses
                .iter()
                .filter(|c| !c.contains(&l))
                .map(|c| c.iter().copied().filter(|&x| x != -l).collect())
                .collect()
        };
        go(assign(lit)) || go(assign(-lit))
    }
    let _ = vars;
    go(clauses.to_vec())
}

/// Every `{U, W}`-structure with 1 to `max_n` elements.
pub fn all_uw_structures(max_n: usize) -> Vec<Structure> {
    let sig = Signature::new([("U", 1), ("W", 1)]).unwrap();
    let mut out = Vec::new();
    for n in 1..=max_n {
        for mask in 0..1u64 << (2 * n) {
            let u = (1..=n).filter(|&i| mask >> (2 * (i - 1)) & 1 == 1).map(|i| vec![i]).collect();
            let w = (1..=n).filter(|&i| mask >> (2 * (i - 1) + 1) & 1 == 1).map(|i| vec![i]).collect();
            out.push(Structure::new(sig.clone(), n, [("U", u), ("W", w)]).unwrap());
        }
    }
    out
}

/// Writes a result line that is visible even when the harness captures
/// test output.
pub fn report(criterion: usize, ok: bool, summary: &str) {
    let line = format!(
        "{} criterion {criterion:>2}: {summary}\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}
