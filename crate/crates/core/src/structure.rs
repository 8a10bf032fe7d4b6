//! Relational signatures and finite structures.
//!
//! A structure has domain `{1, ..., n}` with `n >= 1`. Relations are stored as
//! sorted tuple sets plus a membership index (a dense bit table when the tuple
//! space is small, a hash set otherwise).

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// Bits allowed in a dense membership table before falling back to hashing.
const DENSE_LIMIT: usize = 1 << 24;

/// Relation symbols with their arities, kept in name order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (name, arity) in symbols {
            let name = name.into();
            if arity == 0 {
                return Err(Error::Precondition(format!(
                    "relation `{name}` must have positive arity"
                )));
            }
            if map.insert(name.clone(), arity).is_some() {
                return Err(Error::DuplicateRelation(name));
            }
        }
        Ok(Signature { symbols: map })
    }

    /// The signature of digraphs, `{E/2}`.
    pub fn digraph() -> Self {
        Signature::new([("E", 2)]).expect("static signature")
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.keys().position(|k| k == name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.symbols.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// True when every symbol is unary (vacuously true for the empty signature).
    pub fn is_monadic(&self) -> bool {
        self.symbols.values().all(|&a| a == 1)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    /// True when every symbol of `self` occurs in `other` with the same arity.
    pub fn is_subsignature_of(&self, other: &Signature) -> bool {
        self.symbols
            .iter()
            .all(|(name, arity)| other.arity(name) == Some(*arity))
    }

    /// Union of two signatures; shared names must agree on arity.
    pub fn union(&self, other: &Signature) -> Result<Signature> {
        let mut symbols = self.symbols.clone();
        for (name, &arity) in &other.symbols {
            match symbols.get(name) {
                Some(&a) if a != arity => {
                    return Err(Error::SignatureMismatch(format!(
                        "`{name}` declared with arities {a} and {arity}"
                    )))
                }
                _ => {
                    symbols.insert(name.clone(), arity);
                }
            }
        }
        Ok(Signature { symbols })
    }

    pub fn with_symbol(&self, name: &str, arity: usize) -> Result<Signature> {
        self.union(&Signature::new([(name, arity)])?)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|(name, arity)| format!("{name}/{arity}"))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Debug, Clone)]
enum Membership {
    Dense(Vec<u64>),
    Hashed(HashSet<Vec<usize>>),
}

/// The interpretation of one relation symbol.
#[derive(Debug, Clone)]
pub struct Relation {
    arity: usize,
    size: usize,
    tuples: BTreeSet<Vec<usize>>,
    index: Membership,
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.tuples == other.tuples
    }
}

impl Eq for Relation {}

impl Relation {
    fn new(arity: usize, size: usize, tuples: BTreeSet<Vec<usize>>) -> Relation {
        let space = size.checked_pow(arity as u32).filter(|&s| s <= DENSE_LIMIT);
        let index = match space {
            Some(space) => {
                let mut bits = vec![0u64; space.div_ceil(64).max(1)];
                for t in &tuples {
                    let i = dense_index(size, t.iter().copied());
                    bits[i / 64] |= 1 << (i % 64);
                }
                Membership::Dense(bits)
            }
            None => Membership::Hashed(tuples.iter().cloned().collect()),
        };
        Relation {
            arity,
            size,
            tuples,
            index,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Tuples in lexicographic order (1-based elements).
    pub fn tuples(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.tuples.iter().map(Vec::as_slice)
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        debug_assert_eq!(tuple.len(), self.arity);
        self.contains_iter(tuple.iter().copied())
    }

    /// Membership test for a tuple given as an iterator of 1-based elements.
    #[inline]
    pub fn contains_iter<I>(&self, tuple: I) -> bool
    where
        I: Iterator<Item = usize> + Clone,
    {
        match &self.index {
            Membership::Dense(bits) => {
                let i = dense_index(self.size, tuple);
                bits[i / 64] >> (i % 64) & 1 == 1
            }
            Membership::Hashed(set) => set.contains(&tuple.collect::<Vec<_>>()),
        }
    }
}

#[inline]
fn dense_index<I: Iterator<Item = usize>>(size: usize, tuple: I) -> usize {
    tuple.fold(0, |acc, e| acc * size + (e - 1))
}

/// A finite relational structure over the domain `{1, ..., size}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    signature: Signature,
    size: usize,
    relations: Vec<Relation>,
}

impl Structure {
    /// Builds a structure; relations not mentioned are empty.
    pub fn new<I, S>(signature: Signature, size: usize, relations: I) -> Result<Structure>
    where
        I: IntoIterator<Item = (S, Vec<Vec<usize>>)>,
        S: AsRef<str>,
    {
        if size == 0 {
            return Err(Error::Precondition(
                "structures have non-empty domains".into(),
            ));
        }
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); signature.len()];
        for (name, tuples) in relations {
            let name = name.as_ref();
            let idx = signature
                .index_of(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            let arity = signature.arity(name).expect("indexed symbol");
            for t in tuples {
                if t.len() != arity {
                    return Err(Error::ArityMismatch {
                        name: name.to_string(),
                        expected: arity,
                        found: t.len(),
                    });
                }
                if let Some(&bad) = t.iter().find(|&&e| e == 0 || e > size) {
                    return Err(Error::OutOfRange { element: bad, size });
                }
                sets[idx].insert(t);
            }
        }
        let relations = signature
            .symbols()
            .zip(sets)
            .map(|((_, arity), set)| Relation::new(arity, size, set))
            .collect();
        Ok(Structure {
            signature,
            size,
            relations,
        })
    }

    /// Structure with all relations empty.
    pub fn empty(signature: Signature, size: usize) -> Result<Structure> {
        Structure::new(signature, size, Vec::<(String, Vec<Vec<usize>>)>::new())
    }

    /// Digraph over `{E/2}` with the given edges.
    pub fn digraph(size: usize, edges: &[(usize, usize)]) -> Result<Structure> {
        let tuples = edges.iter().map(|&(u, v)| vec![u, v]).collect();
        Structure::new(Signature::digraph(), size, [("E", tuples)])
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn domain(&self) -> Vec<usize> {
        (1..=self.size).collect()
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.signature.index_of(name).map(|i| &self.relations[i])
    }

    pub(crate) fn relation_at(&self, index: usize) -> &Relation {
        &self.relations[index]
    }

    /// Relations paired with their names, in signature order.
    pub fn relations(&self) -> impl Iterator<Item = (&str, &Relation)> + '_ {
        self.signature
            .symbols()
            .map(|(name, _)| name)
            .zip(self.relations.iter())
    }

    /// Whether `name(tuple)` holds; unknown names are false.
    pub fn holds(&self, name: &str, tuple: &[usize]) -> bool {
        self.relation(name).is_some_and(|r| r.contains(tuple))
    }

    /// Adds a relation symbol (e.g. a colour predicate or an order relation).
    pub fn expand(&self, name: &str, arity: usize, tuples: Vec<Vec<usize>>) -> Result<Structure> {
        if self.signature.contains(name) {
            return Err(Error::DuplicateRelation(name.to_string()));
        }
        let signature = self.signature.with_symbol(name, arity)?;
        let mut all: Vec<(String, Vec<Vec<usize>>)> = self
            .relations()
            .map(|(n, r)| (n.to_string(), r.tuples().map(<[usize]>::to_vec).collect()))
            .collect();
        all.push((name.to_string(), tuples));
        Structure::new(signature, self.size, all)
    }

    /// Drops every relation symbol not in `signature`.
    pub fn reduct(&self, signature: &Signature) -> Result<Structure> {
        if !signature.is_subsignature_of(&self.signature) {
            return Err(Error::SignatureMismatch(format!(
                "{{{signature}}} is not contained in {{{}}}",
                self.signature
            )));
        }
        let rels: Vec<(String, Vec<Vec<usize>>)> = self
            .relations()
            .filter(|(n, _)| signature.contains(n))
            .map(|(n, r)| (n.to_string(), r.tuples().map(<[usize]>::to_vec).collect()))
            .collect();
        Structure::new(signature.clone(), self.size, rels)
    }

    /// The substructure induced on `subset`, renumbered in increasing order.
    pub fn induced_substructure(&self, subset: &[usize]) -> Result<Structure> {
        let elements = self.normalize_subset(subset)?;
        let mut renumber = vec![0usize; self.size + 1];
        for (i, &e) in elements.iter().enumerate() {
            renumber[e] = i + 1;
        }
        let rels: Vec<(String, Vec<Vec<usize>>)> = self
            .relations()
            .map(|(name, rel)| {
                let kept = rel
                    .tuples()
                    .filter(|t| t.iter().all(|&e| renumber[e] != 0))
                    .map(|t| t.iter().map(|&e| renumber[e]).collect())
                    .collect();
                (name.to_string(), kept)
            })
            .collect();
        Structure::new(self.signature.clone(), elements.len(), rels)
    }

    /// Disjoint union: the elements of `other` are shifted by `self.size()`.
    pub fn disjoint_union(&self, other: &Structure) -> Result<Structure> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch(format!(
                "{{{}}} vs {{{}}}",
                self.signature, other.signature
            )));
        }
        let shift = self.size;
        let rels: Vec<(String, Vec<Vec<usize>>)> = self
            .relations()
            .zip(other.relations.iter())
            .map(|((name, a), b)| {
                let mut tuples: Vec<Vec<usize>> = a.tuples().map(<[usize]>::to_vec).collect();
                tuples.extend(b.tuples().map(|t| t.iter().map(|&e| e + shift).collect()));
                (name.to_string(), tuples)
            })
            .collect();
        Structure::new(self.signature.clone(), self.size + other.size, rels)
    }

    /// Applies a permutation `perm` (1-based, `perm[i-1]` is the image of `i`).
    pub fn permute(&self, perm: &[usize]) -> Result<Structure> {
        let mut seen = vec![false; self.size + 1];
        if perm.len() != self.size
            || perm
                .iter()
                .any(|&p| p == 0 || p > self.size || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Precondition("not a permutation of the domain".into()));
        }
        let rels: Vec<(String, Vec<Vec<usize>>)> = self
            .relations()
            .map(|(name, rel)| {
                let tuples = rel
                    .tuples()
                    .map(|t| t.iter().map(|&e| perm[e - 1]).collect())
                    .collect();
                (name.to_string(), tuples)
            })
            .collect();
        Structure::new(self.signature.clone(), self.size, rels)
    }

    /// Non-empty subsets of the domain with at most `max_size` elements, by
    /// increasing size and then lexicographically.
    pub fn substructures(&self, max_size: Option<usize>) -> Subsets {
        Subsets::new(self.size, max_size)
    }

    /// Sorted, deduplicated copy of `subset` after range checks.
    pub fn normalize_subset(&self, subset: &[usize]) -> Result<Vec<usize>> {
        if subset.is_empty() {
            return Err(Error::Precondition("subset must be non-empty".into()));
        }
        if let Some(&bad) = subset.iter().find(|&&e| e == 0 || e > self.size) {
            return Err(Error::OutOfRange {
                element: bad,
                size: self.size,
            });
        }
        let mut elements = subset.to_vec();
        elements.sort_unstable();
        elements.dedup();
        Ok(elements)
    }
}

/// Enumerates the non-empty subsets of `{1..n}` in increasing size, then
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct Subsets {
    n: usize,
    max: usize,
    current: Vec<usize>,
    done: bool,
}

impl Subsets {
    pub fn new(n: usize, max_size: Option<usize>) -> Subsets {
        let max = max_size.unwrap_or(n).min(n);
        Subsets {
            n,
            max,
            current: Vec::new(),
            done: max == 0,
        }
    }

    fn advance(&mut self) -> bool {
        let k = self.current.len();
        if k == 0 {
            self.current.push(1);
            return true;
        }
        // rightmost position that can still move
        for i in (0..k).rev() {
            if self.current[i] < self.n - (k - 1 - i) {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                return true;
            }
        }
        if k < self.max {
            self.current = (1..=k + 1).collect();
            return true;
        }
        false
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if self.advance() {
            Some(self.current.clone())
        } else {
            self.done = true;
            None
        }
    }
}

/// Number of non-empty subsets of an `n`-set with at most `max` elements.
pub fn subset_count(n: usize, max: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for k in 1..=max.min(n) {
        binom = binom * (n - k + 1) as u128 / k as u128;
        total += binom;
    }
    total
}
