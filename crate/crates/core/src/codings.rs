//! Built-in Markov codings and a verifier for the coding property: paths
//! of length `n` from the start vertex must map bijectively onto the
//! elements of word norm `n`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::counting::{enumerate_paths, CountError, DEFAULT_PATH_CAP};
use crate::graph::{GraphBuilder, GraphError, LabelledGraph};

/// Largest rank of the built-in free constructions (one letter per generator).
pub const MAX_FREE_RANK: usize = 26;

/// Tables up to this order get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum CodingError {
    InvalidRank(usize),
    EmptyTable,
    RaggedTable { row: usize },
    EntryOutOfRange { row: usize, col: usize },
    NoIdentity,
    MissingInverse(String),
    NotAssociative { a: String, b: String, c: String },
    NotGenerated { unreached: String },
    UnknownGenerator(String),
    DuplicateElement(String),
    UnknownSymbol(String),
    NoStartVertex,
    Count(CountError),
    Graph(GraphError),
}

impl fmt::Display for CodingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodingError::InvalidRank(k) => {
                write!(f, "rank must be between 1 and {MAX_FREE_RANK}, got {k}")
            }
            CodingError::EmptyTable => write!(f, "group table has no elements"),
            CodingError::RaggedTable { row } => write!(f, "table row {row} has the wrong length"),
            CodingError::EntryOutOfRange { row, col } => {
                write!(f, "table entry ({row}, {col}) is not an element")
            }
            CodingError::NoIdentity => write!(f, "table has no identity element"),
            CodingError::MissingInverse(x) => write!(f, "element '{x}' has no inverse"),
            CodingError::NotAssociative { a, b, c } => {
                write!(f, "table is not associative at ({a}, {b}, {c})")
            }
            CodingError::NotGenerated { unreached } => {
                write!(f, "generators do not generate the group ('{unreached}' unreached)")
            }
            CodingError::UnknownGenerator(x) => write!(f, "unknown generator '{x}'"),
            CodingError::DuplicateElement(x) => write!(f, "duplicate element '{x}'"),
            CodingError::UnknownSymbol(x) => {
                write!(f, "arc label '{x}' is not a generator of the oracle")
            }
            CodingError::NoStartVertex => write!(f, "no start vertex"),
            CodingError::Count(e) => write!(f, "{e}"),
            CodingError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CodingError {}

impl From<CountError> for CodingError {
    fn from(e: CountError) -> Self {
        CodingError::Count(e)
    }
}

impl From<GraphError> for CodingError {
    fn from(e: GraphError) -> Self {
        CodingError::Graph(e)
    }
}

fn letter(i: usize) -> char {
    (b'a' + i as u8) as char
}

/// Generator symbols `a, b, ...` of the free constructions.
pub fn free_generators(k: usize) -> Vec<String> {
    (0..k).map(|i| letter(i).to_string()).collect()
}

/// Symbols `a, b, ..., A, B, ...` of the free group; upper case is inverse.
pub fn free_group_symbols(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| letter(i).to_string())
        .chain((0..k).map(|i| letter(i).to_ascii_uppercase().to_string()))
        .collect()
}

fn check_rank(k: usize) -> Result<(), CodingError> {
    if (1..=MAX_FREE_RANK).contains(&k) {
        Ok(())
    } else {
        Err(CodingError::InvalidRank(k))
    }
}

/// One vertex `v0` (the start) with a loop per generator.
pub fn build_free_semigroup(k: usize) -> Result<LabelledGraph, CodingError> {
    check_rank(k)?;
    let mut b = GraphBuilder::new();
    b.vertex("v0")?;
    b.start("v0");
    for s in free_generators(k) {
        b.symbol(&s)?;
        b.arc("v0", "v0", &s)?;
    }
    Ok(b.build()?)
}

/// No-backtracking automaton of the free group of rank `k`: a start vertex
/// and one vertex per symbol, recording the last letter read. Every arc is
/// labelled by the symbol of its head.
pub fn build_free_group(k: usize) -> Result<LabelledGraph, CodingError> {
    check_rank(k)?;
    let symbols = free_group_symbols(k);
    let mut b = GraphBuilder::new();
    for s in &symbols {
        b.symbol(s)?;
    }
    b.vertex("start")?;
    b.start("start");
    for s in &symbols {
        b.vertex(s)?;
    }
    for s in &symbols {
        b.arc("start", s, s)?;
    }
    for (i, from) in symbols.iter().enumerate() {
        let inverse = (i + k) % (2 * k);
        for (j, to) in symbols.iter().enumerate() {
            if j != inverse {
                b.arc(from, to, to)?;
            }
        }
    }
    Ok(b.build()?)
}

/// Multiplication table of a finite group with a list of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    generators: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroupTable {
    /// `table[x][y]` is the product `x * y`. Checks the group axioms
    /// (associativity exhaustively up to [`EXHAUSTIVE_ASSOCIATIVITY_LIMIT`]
    /// elements, on a deterministic sample beyond) and that the
    /// generators generate.
    pub fn new(
        elements: Vec<String>,
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
    ) -> Result<Self, CodingError> {
        let n = elements.len();
        if n == 0 {
            return Err(CodingError::EmptyTable);
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(CodingError::DuplicateElement(e.clone()));
            }
        }
        if table.len() != n {
            return Err(CodingError::RaggedTable { row: table.len().min(n) });
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(CodingError::RaggedTable { row });
            }
            if let Some(col) = r.iter().position(|&x| x >= n) {
                return Err(CodingError::EntryOutOfRange { row, col });
            }
        }
        if let Some(&g) = generators.iter().find(|&&g| g >= n) {
            return Err(CodingError::UnknownGenerator(alloc::format!("#{g}")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(CodingError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| CodingError::MissingInverse(elements[x].clone()))?;
            inverse.push(inv);
        }
        let assoc_fail = |a: usize, b: usize, c: usize| table[table[a][b]][c] != table[a][table[b][c]];
        let report = |a: usize, b: usize, c: usize| CodingError::NotAssociative {
            a: elements[a].clone(),
            b: elements[b].clone(),
            c: elements[c].clone(),
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if assoc_fail(a, b, c) {
                            return Err(report(a, b, c));
                        }
                    }
                }
            }
        } else {
            // Light's test restricted to a deterministic spread of triples.
            let step = |i: usize| (i * 7919 + 13) % n;
            for i in 0..EXHAUSTIVE_ASSOCIATIVITY_LIMIT.pow(2) {
                let (a, b, c) = (step(i), step(i * 31 + 1), step(i * 131 + 2));
                if assoc_fail(a, b, c) {
                    return Err(report(a, b, c));
                }
            }
        }
        let group = FiniteGroupTable {
            elements,
            table,
            generators,
            identity,
            inverse,
        };
        let dist = group.distances();
        if let Some(x) = dist.iter().position(|d| d.is_none()) {
            return Err(CodingError::NotGenerated {
                unreached: group.elements[x].clone(),
            });
        }
        Ok(group)
    }

    /// Cyclic group `Z/n` with elements `0, ..., n-1` and generators
    /// `+1, -1` (a single generator when they coincide).
    pub fn cyclic(n: usize) -> Result<Self, CodingError> {
        if n == 0 {
            return Err(CodingError::EmptyTable);
        }
        let elements = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        let mut generators = vec![1 % n];
        if (n - 1) % n != 1 % n {
            generators.push(n - 1);
        }
        Self::new(elements, table, generators)
    }

    /// Group generated by permutations of `0..degree` (images listed per
    /// point), composed as `(x * y)(i) = y(x(i))`. Generators keep their
    /// names; other elements are named `e` (identity) or by their images.
    pub fn from_permutations(generators: &[(&str, Vec<usize>)]) -> Result<Self, CodingError> {
        let degree = generators.first().map_or(0, |(_, p)| p.len());
        let identity: Vec<usize> = (0..degree).collect();
        let mut perms: Vec<Vec<usize>> = vec![identity];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(perms[0].clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (_, g) in generators {
                let prod: Vec<usize> = (0..degree).map(|i| g[perms[x][i]]).collect();
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), perms.len());
                    queue.push_back(perms.len());
                    perms.push(prod);
                }
            }
        }
        let n = perms.len();
        let mut elements: Vec<String> = perms
            .iter()
            .map(|p| {
                let parts: Vec<String> = p.iter().map(|i| i.to_string()).collect();
                alloc::format!("p{}", parts.join("_"))
            })
            .collect();
        elements[0] = "e".to_string();
        let mut gen_idx = Vec::new();
        for (name, g) in generators {
            let i = index[g];
            elements[i] = (*name).to_string();
            gen_idx.push(i);
        }
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let prod: Vec<usize> = (0..degree).map(|i| perms[y][perms[x][i]]).collect();
                        index[&prod]
                    })
                    .collect()
            })
            .collect();
        Self::new(elements, table, gen_idx)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|&g| self.elements[g].clone()).collect()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Appends missing inverses of generators (duplicates removed, order
    /// otherwise kept); the flag reports whether anything changed.
    pub fn symmetrized(&self) -> (Self, bool) {
        let mut gens: Vec<usize> = Vec::new();
        for &g in &self.generators {
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        let mut extra = Vec::new();
        for &g in &gens {
            let inv = self.inverse[g];
            if !gens.contains(&inv) && !extra.contains(&inv) {
                extra.push(inv);
            }
        }
        let changed = !extra.is_empty() || gens.len() != self.generators.len();
        gens.extend(extra);
        let mut out = self.clone();
        out.generators = gens;
        (out, changed)
    }

    /// Word norm of every element with respect to the generators (right
    /// multiplication); `None` for unreachable elements.
    pub fn distances(&self) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order()];
        dist[self.identity] = Some(0);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].expect("queued elements have a distance");
            for &s in &self.generators {
                let y = self.table[x][s];
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Number of elements of each norm `0..=diameter`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for d in self.distances().into_iter().flatten() {
            if out.len() <= d {
                out.resize(d + 1, 0);
            }
            out[d] += 1;
        }
        out
    }
}

/// Shortlex coding of a finite group, with the generator set actually used.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortlexCoding {
    pub graph: LabelledGraph,
    /// The symmetrized table the coding is built for.
    pub group: FiniteGroupTable,
    /// Whether inverses had to be added to the generators.
    pub symmetrized: bool,
}

/// Breadth-first search from the identity in the Cayley graph, trying
/// generators in order, so each element is first reached along its
/// shortlex-least geodesic. The arcs are the BFS tree edges `g -> g*s`,
/// labelled `s`; vertices are the elements in BFS order, starting at the
/// identity.
pub fn build_finite_group_shortlex(group: &FiniteGroupTable) -> Result<ShortlexCoding, CodingError> {
    let (group, symmetrized) = group.symmetrized();
    let n = group.order();
    let mut seen = vec![false; n];
    seen[group.identity] = true;
    let mut order = vec![group.identity];
    let mut tree = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for &s in &group.generators {
            let y = group.table[x][s];
            if !seen[y] {
                seen[y] = true;
                order.push(y);
                tree.push((x, y, s));
            }
        }
        i += 1;
    }
    if let Some(x) = seen.iter().position(|s| !s) {
        return Err(CodingError::NotGenerated {
            unreached: group.elements[x].clone(),
        });
    }
    let mut b = GraphBuilder::new();
    for &s in &group.generators {
        b.symbol(&group.elements[s])?;
    }
    for &x in &order {
        b.vertex(&group.elements[x])?;
    }
    b.start(&group.elements[group.identity]);
    for (x, y, s) in tree {
        b.arc(&group.elements[x], &group.elements[y], &group.elements[s])?;
    }
    Ok(ShortlexCoding {
        graph: b.build()?,
        group,
        symmetrized,
    })
}

/// The (semi)group a coding is checked against.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupOracle {
    /// Free semigroup on `a, b, ...`.
    FreeSemigroup(usize),
    /// Free group on `a, b, ...` with inverses `A, B, ...`.
    FreeGroup(usize),
    FiniteGroup(FiniteGroupTable),
}

/// Oracle element: a reduced word (free cases) or a table index.
type Element = Vec<usize>;

impl GroupOracle {
    fn symbols(&self) -> Vec<String> {
        match self {
            GroupOracle::FreeSemigroup(k) => free_generators(*k),
            GroupOracle::FreeGroup(k) => free_group_symbols(*k),
            GroupOracle::FiniteGroup(t) => t.generator_names(),
        }
    }

    fn validate(&self) -> Result<(), CodingError> {
        match self {
            GroupOracle::FreeSemigroup(k) | GroupOracle::FreeGroup(k) => check_rank(*k),
            GroupOracle::FiniteGroup(_) => Ok(()),
        }
    }

    /// Element and its word norm for a word of oracle symbol indices.
    fn evaluate(&self, word: &[usize], dist: &[Option<usize>]) -> (Element, usize) {
        match self {
            GroupOracle::FreeSemigroup(_) => (word.to_vec(), word.len()),
            GroupOracle::FreeGroup(k) => {
                let mut reduced: Vec<usize> = Vec::with_capacity(word.len());
                for &s in word {
                    match reduced.last() {
                        Some(&t) if t == (s + k) % (2 * k) => {
                            reduced.pop();
                        }
                        _ => reduced.push(s),
                    }
                }
                let len = reduced.len();
                (reduced, len)
            }
            GroupOracle::FiniteGroup(t) => {
                let x = word
                    .iter()
                    .fold(t.identity, |x, &s| t.table[x][t.generators[s]]);
                (vec![x], dist[x].expect("generated group"))
            }
        }
    }

    /// Number of elements of norm `n`.
    pub fn sphere_size(&self, n: usize) -> BigUint {
        match self {
            GroupOracle::FreeSemigroup(k) => num_traits::pow(BigUint::from(*k), n),
            GroupOracle::FreeGroup(_) if n == 0 => BigUint::one(),
            GroupOracle::FreeGroup(k) => {
                BigUint::from(2 * k) * num_traits::pow(BigUint::from(2 * k - 1), n - 1)
            }
            GroupOracle::FiniteGroup(t) => {
                BigUint::from(t.sphere_sizes().get(n).copied().unwrap_or(0))
            }
        }
    }
}

/// Why a coding failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    /// The path's label evaluates to an element of a different norm.
    NormMismatch { norm: usize },
    /// Another path of the same length evaluates to the same element.
    NotInjective { other: Vec<String> },
    /// Fewer elements reached than the sphere of that norm contains.
    NotSurjective { expected: BigUint, found: BigUint },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail {
        n: usize,
        /// Label word of the offending path (empty for surjectivity).
        word: Vec<String>,
        reason: FailureReason,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectivityReport {
    pub n_max: usize,
    /// Sphere sizes of the coding for the lengths checked.
    pub spheres: Vec<BigUint>,
    pub verdict: Verdict,
}

impl BijectivityReport {
    pub fn pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Joins a label word with `.`, or `ε` when empty.
pub fn format_word(word: &[String]) -> String {
    if word.is_empty() {
        "ε".to_string()
    } else {
        word.join(".")
    }
}

impl fmt::Display for BijectivityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Pass => write!(f, "PASS up to n = {}", self.n_max),
            Verdict::Fail { n, word, reason } => {
                write!(f, "FAIL at n = {n}")?;
                match reason {
                    FailureReason::NormMismatch { norm } => write!(
                        f,
                        ": path {} evaluates to an element of norm {norm}",
                        format_word(word)
                    ),
                    FailureReason::NotInjective { other } => write!(
                        f,
                        ": paths {} and {} evaluate to the same element",
                        format_word(other),
                        format_word(word)
                    ),
                    FailureReason::NotSurjective { expected, found } => write!(
                        f,
                        ": {found} of {expected} elements of this norm are reached"
                    ),
                }
            }
        }
    }
}

/// Enumerates all paths from the start vertex of length `0..=n_max`
/// (at most `cap` in total) and checks that the label map is a
/// length-preserving bijection onto the oracle's spheres. Reports the first
/// counterexample in enumeration order.
pub fn verify_bijectivity(
    g: &LabelledGraph,
    oracle: &GroupOracle,
    n_max: usize,
    cap: usize,
) -> Result<BijectivityReport, CodingError> {
    oracle.validate()?;
    let start = g.start().ok_or(CodingError::NoStartVertex)?;
    let symbols = oracle.symbols();
    let label_map: Vec<Option<usize>> = g
        .alphabet()
        .iter()
        .map(|s| symbols.iter().position(|t| t == s))
        .collect();
    let dist = match oracle {
        GroupOracle::FiniteGroup(t) => t.distances(),
        _ => Vec::new(),
    };
    let names = |word: &[usize]| -> Vec<String> {
        word.iter().map(|&l| g.symbol_name(l).to_string()).collect()
    };

    let mut budget = cap;
    let mut spheres = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let paths = enumerate_paths(g, start, None, n, budget)
            .map_err(|_| CodingError::Count(CountError::PathCapExceeded { cap }))?;
        budget -= paths.len();
        spheres.push(BigUint::from(paths.len()));
        let mut seen: BTreeMap<Element, usize> = BTreeMap::new();
        for (i, word) in paths.iter().enumerate() {
            let mut mapped = Vec::with_capacity(word.len());
            for &l in word {
                let s = label_map[l]
                    .ok_or_else(|| CodingError::UnknownSymbol(g.symbol_name(l).to_string()))?;
                mapped.push(s);
            }
            let (element, norm) = oracle.evaluate(&mapped, &dist);
            if norm != n {
                return Ok(BijectivityReport {
                    n_max,
                    spheres,
                    verdict: Verdict::Fail {
                        n,
                        word: names(word),
                        reason: FailureReason::NormMismatch { norm },
                    },
                });
            }
            if let Some(&j) = seen.get(&element) {
                return Ok(BijectivityReport {
                    n_max,
                    spheres,
                    verdict: Verdict::Fail {
                        n,
                        word: names(word),
                        reason: FailureReason::NotInjective {
                            other: names(&paths[j]),
                        },
                    },
                });
            }
            seen.insert(element, i);
        }
        let expected = oracle.sphere_size(n);
        let found = BigUint::from(seen.len());
        if found != expected {
            return Ok(BijectivityReport {
                n_max,
                spheres,
                verdict: Verdict::Fail {
                    n,
                    word: Vec::new(),
                    reason: FailureReason::NotSurjective { expected, found },
                },
            });
        }
    }
    Ok(BijectivityReport {
        n_max,
        spheres,
        verdict: Verdict::Pass,
    })
}

/// [`verify_bijectivity`] with the default enumeration cap.
pub fn verify_bijectivity_default(
    g: &LabelledGraph,
    oracle: &GroupOracle,
    n_max: usize,
) -> Result<BijectivityReport, CodingError> {
    verify_bijectivity(g, oracle, n_max, DEFAULT_PATH_CAP)
}

/// Reduced words of length `n` in the free group of rank `k`, as strings,
/// by direct enumeration (independent of any automaton).
pub fn reduced_words(k: usize, n: usize) -> Vec<String> {
    let symbols = free_group_symbols(k);
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(words.len() * (2 * k));
        for w in &words {
            for s in 0..2 * k {
                if w.last().is_some_and(|&t| t == (s + k) % (2 * k)) {
                    continue;
                }
                let mut x = w.clone();
                x.push(s);
                next.push(x);
            }
        }
        words = next;
    }
    words
        .into_iter()
        .map(|w| w.iter().map(|&s| symbols[s].as_str()).collect())
        .collect()
}

/// Distinct elements reached, as a set, for tests that compare sets.
pub fn reached_elements(g: &LabelledGraph, n: usize, cap: usize) -> Result<BTreeSet<String>, CodingError> {
    let start = g.start().ok_or(CodingError::NoStartVertex)?;
    Ok(enumerate_paths(g, start, None, n, cap)?
        .into_iter()
        .map(|w| w.iter().map(|&l| g.symbol_name(l)).collect::<Vec<_>>().join("."))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::sphere_sizes;
    use crate::graph::Arc;

    fn spheres(g: &LabelledGraph, n: usize) -> Vec<u64> {
        sphere_sizes(g, n)
            .unwrap()
            .iter()
            .map(|s| u64::try_from(s.clone()).unwrap())
            .collect()
    }

    #[test]
    fn free_group_shape() {
        let g = build_free_group(2).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.arcs().len(), 16);
        assert_eq!(spheres(&g, 5), vec![1, 4, 12, 36, 108, 324]);
        let z = build_free_group(1).unwrap();
        assert_eq!(spheres(&z, 5), vec![1, 2, 2, 2, 2, 2]);
        assert!(build_free_group(0).is_err());
    }

    #[test]
    fn free_codings_verify() {
        for k in 1..=3 {
            let g = build_free_semigroup(k).unwrap();
            assert!(verify_bijectivity_default(&g, &GroupOracle::FreeSemigroup(k), 6).unwrap().pass());
        }
        let g = build_free_group(2).unwrap();
        let rep = verify_bijectivity_default(&g, &GroupOracle::FreeGroup(2), 7).unwrap();
        assert!(rep.pass(), "{rep}");
    }

    #[test]
    fn backtracking_arc_is_caught() {
        let g = build_free_group(2).unwrap();
        let a = g.vertex_index("a").unwrap();
        let big_a = g.vertex_index("A").unwrap();
        let label = g.symbol_index("A").unwrap();
        let bad = g
            .with_arc(Arc {
                tail: a,
                head: big_a,
                label,
            })
            .unwrap();
        let rep = verify_bijectivity_default(&bad, &GroupOracle::FreeGroup(2), 4).unwrap();
        assert_eq!(
            rep.verdict,
            Verdict::Fail {
                n: 2,
                word: vec!["a".into(), "A".into()],
                reason: FailureReason::NormMismatch { norm: 0 },
            }
        );
    }

    #[test]
    fn cyclic_shortlex() {
        let z6 = FiniteGroupTable::cyclic(6).unwrap();
        let coding = build_finite_group_shortlex(&z6).unwrap();
        assert!(!coding.symmetrized);
        assert_eq!(spheres(&coding.graph, 6), vec![1, 2, 2, 1, 0, 0, 0]);
        let rep = verify_bijectivity_default(&coding.graph, &GroupOracle::FiniteGroup(coding.group), 10)
            .unwrap();
        assert!(rep.pass());

        let trivial = build_finite_group_shortlex(&FiniteGroupTable::cyclic(1).unwrap()).unwrap();
        assert_eq!(spheres(&trivial.graph, 3), vec![1, 0, 0, 0]);
    }

    #[test]
    fn symmetric_group_shortlex() {
        let s3 = FiniteGroupTable::from_permutations(&[("s", vec![1, 0, 2]), ("t", vec![0, 2, 1])])
            .unwrap();
        assert_eq!(s3.order(), 6);
        let coding = build_finite_group_shortlex(&s3).unwrap();
        assert_eq!(spheres(&coding.graph, 4), vec![1, 2, 2, 1, 0]);
        assert!(verify_bijectivity_default(&coding.graph, &GroupOracle::FiniteGroup(coding.group), 5)
            .unwrap()
            .pass());
    }

    #[test]
    fn symmetrization_adds_inverses() {
        let z5 = FiniteGroupTable::new(
            (0..5).map(|i| i.to_string()).collect(),
            (0..5).map(|x| (0..5).map(|y| (x + y) % 5).collect()).collect(),
            vec![1],
        )
        .unwrap();
        let (sym, changed) = z5.symmetrized();
        assert!(changed);
        assert_eq!(sym.generators(), &[1, 4]);
    }

    #[test]
    fn bad_tables() {
        let names: Vec<String> = (0..2).map(|i| i.to_string()).collect();
        let err = FiniteGroupTable::new(names.clone(), vec![vec![0, 1], vec![1, 1]], vec![1]);
        assert!(matches!(err, Err(CodingError::MissingInverse(_))));
        let err = FiniteGroupTable::new(names, vec![vec![0, 1], vec![1, 0]], vec![0]);
        assert!(matches!(err, Err(CodingError::NotGenerated { .. })));
    }

    #[test]
    fn reduced_word_oracle() {
        assert_eq!(reduced_words(2, 2).len(), 12);
        let g = build_free_group(2).unwrap();
        let from_graph = reached_elements(&g, 3, 1000).unwrap();
        let direct: BTreeSet<String> = reduced_words(2, 3)
            .iter()
            .map(|w| w.chars().map(|c| c.to_string()).collect::<Vec<_>>().join("."))
            .collect();
        assert_eq!(from_graph, direct);
    }
}
