//! Homomorphism and embedding search by backtracking.

use crate::error::{Error, Result};
use crate::structure::Structure;

/// Per-element constraint lists: tuples of `a` whose largest element is the
/// element being assigned, so each tuple is checked exactly once.
struct Plan {
    by_last: Vec<Vec<(usize, Vec<usize>)>>,
}

impl Plan {
    fn new(a: &Structure) -> Plan {
        let mut by_last = vec![Vec::new(); a.size() + 1];
        for (idx, (_, rel)) in a.relations().enumerate() {
            for t in rel.tuples() {
                let last = *t.iter().max().expect("positive arity");
                by_last[last].push((idx, t.to_vec()));
            }
        }
        Plan { by_last }
    }
}

/// Searches for a map `h: A -> B` preserving every relation.
///
/// With `injective` set the search is for an embedding: `h` is injective and
/// also reflects relations, so `A` is isomorphic to the substructure of `B`
/// on the image. Elements of `A` are assigned in increasing order and
/// candidates tried in increasing order, so the result is the
/// lexicographically least such map. `map[i - 1]` is the image of `i`.
pub fn find_homomorphism(a: &Structure, b: &Structure, injective: bool) -> Result<Option<Vec<usize>>> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(format!(
            "{{{}}} vs {{{}}}",
            a.signature(),
            b.signature()
        )));
    }
    if injective && a.size() > b.size() {
        return Ok(None);
    }
    let plan = Plan::new(a);
    let mut map = vec![0usize; a.size() + 1];
    let mut used = vec![false; b.size() + 1];
    let found = search(a, b, &plan, injective, 1, &mut map, &mut used);
    if !found {
        return Ok(None);
    }
    let map = map[1..].to_vec();
    assert!(
        is_homomorphism(a, b, &map, injective),
        "backtracking returned a map that does not preserve relations"
    );
    Ok(Some(map))
}

fn search(
    a: &Structure,
    b: &Structure,
    plan: &Plan,
    injective: bool,
    next: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if next > a.size() {
        return true;
    }
    for cand in 1..=b.size() {
        if injective && used[cand] {
            continue;
        }
        map[next] = cand;
        let ok = plan.by_last[next].iter().all(|(idx, t)| {
            b.relation_at(*idx)
                .contains_iter(t.iter().map(|&e| map[e]))
        }) && (!injective || reflects_at(a, b, next, map));
        if ok {
            used[cand] = true;
            if search(a, b, plan, injective, next + 1, map, used) {
                return true;
            }
            used[cand] = false;
        }
    }
    map[next] = 0;
    false
}

/// Every tuple over `{1..=i}` that contains `i` and whose image is in `B`
/// must already be in `A`.
fn reflects_at(a: &Structure, b: &Structure, i: usize, map: &[usize]) -> bool {
    for (idx, (_, rel_b)) in b.relations().enumerate() {
        let rel_a = a.relation_at(idx);
        let arity = rel_b.arity();
        let total = i.pow(arity as u32);
        let mut tuple = vec![0usize; arity];
        for code in 0..total {
            let mut c = code;
            for slot in tuple.iter_mut().rev() {
                *slot = c % i + 1;
                c /= i;
            }
            if tuple.contains(&i)
                && rel_b.contains_iter(tuple.iter().map(|&e| map[e]))
                && !rel_a.contains(&tuple)
            {
                return false;
            }
        }
    }
    true
}

/// Checks that `map` (with `map[i - 1]` the image of `i`) is a homomorphism,
/// or an embedding when `embedding` is set.
pub fn is_homomorphism(a: &Structure, b: &Structure, map: &[usize], embedding: bool) -> bool {
    if map.len() != a.size() || map.iter().any(|&e| e == 0 || e > b.size()) {
        return false;
    }
    let image = |t: &[usize]| -> Vec<usize> { t.iter().map(|&e| map[e - 1]).collect() };
    let preserves = a
        .relations()
        .zip(b.relations())
        .all(|((_, ra), (_, rb))| ra.tuples().all(|t| rb.contains(&image(t))));
    if !preserves || !embedding {
        return preserves;
    }
    let mut seen = vec![false; b.size() + 1];
    if map.iter().any(|&e| std::mem::replace(&mut seen[e], true)) {
        return false;
    }
    let mut inverse = vec![0usize; b.size() + 1];
    for (i, &e) in map.iter().enumerate() {
        inverse[e] = i + 1;
    }
    a.relations().zip(b.relations()).all(|((_, ra), (_, rb))| {
        rb.tuples()
            .filter(|t| t.iter().all(|&e| inverse[e] != 0))
            .all(|t| ra.contains(&t.iter().map(|&e| inverse[e]).collect::<Vec<_>>()))
    })
}
