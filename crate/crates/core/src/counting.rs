//! Exact path and sphere counting with arbitrary-precision integers.
//!
//! Entry `(u, v)` of the `n`-th power of the count matrix is the number of
//! paths of length `n` from `u` to `v`. Nothing in this module touches
//! floating point.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::graph::{for_each_path, LabelledGraph};

/// Default cap on the number of paths [`enumerate_paths`] will materialize.
pub const DEFAULT_PATH_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountError {
    PathCapExceeded { cap: usize },
    VertexOutOfRange(usize),
    /// The partition has an arc from the second part back into the first.
    BackArc { tail: usize, head: usize },
    InvalidPartition(&'static str),
}

impl fmt::Display for CountError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountError::PathCapExceeded { cap } => {
                write!(f, "path enumeration would exceed the cap of {cap} paths")
            }
            CountError::VertexOutOfRange(v) => write!(f, "vertex index {v} out of range"),
            CountError::BackArc { tail, head } => write!(
                f,
                "arc from vertex {tail} in the second part back to vertex {head} in the first"
            ),
            CountError::InvalidPartition(why) => write!(f, "invalid partition: {why}"),
        }
    }
}

impl core::error::Error for CountError {}

/// Square matrix of exact nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMatrix {
    dim: usize,
    entries: Vec<BigUint>,
}

impl CountMatrix {
    pub fn zero(dim: usize) -> Self {
        CountMatrix {
            dim,
            entries: vec![BigUint::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigUint::one();
        }
        m
    }

    /// Entry `(u, v)` is the number of arcs from `u` to `v`.
    pub fn of_graph(g: &LabelledGraph) -> Self {
        let dim = g.vertex_count();
        let mut m = Self::zero(dim);
        for a in g.arcs() {
            m.entries[a.tail * dim + a.head] += 1u32;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, u: usize, v: usize) -> &BigUint {
        &self.entries[u * self.dim + v]
    }

    pub fn row(&self, u: usize) -> &[BigUint] {
        &self.entries[u * self.dim..(u + 1) * self.dim]
    }

    pub fn row_sum(&self, u: usize) -> BigUint {
        self.row(u).iter().sum()
    }

    pub fn mul(&self, other: &CountMatrix) -> CountMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = Self::zero(d);
        for i in 0..d {
            for k in 0..d {
                let x = &self.entries[i * d + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let y = &other.entries[k * d + j];
                    if !y.is_zero() {
                        out.entries[i * d + j] += x * y;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> CountMatrix {
        (0..n).fold(Self::identity(self.dim), |acc, _| acc.mul(self))
    }
}

/// Powers `N^0 ..= N^n_max` of a graph's count matrix, and sphere sizes when
/// the graph has a start vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    n_max: usize,
    powers: Vec<CountMatrix>,
    spheres: Option<Vec<BigUint>>,
}

impl CountTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.powers[0].dim()
    }

    /// Number of paths of length `n` from `u` to `v`.
    pub fn pair(&self, u: usize, v: usize, n: usize) -> &BigUint {
        self.powers[n].get(u, v)
    }

    pub fn pair_sequence(&self, u: usize, v: usize) -> Vec<BigUint> {
        self.powers.iter().map(|m| m.get(u, v).clone()).collect()
    }

    pub fn power(&self, n: usize) -> &CountMatrix {
        &self.powers[n]
    }

    pub fn spheres(&self) -> Option<&[BigUint]> {
        self.spheres.as_deref()
    }
}

/// Builds the table by iterated exact multiplication `N^(n+1) = N^n N`.
pub fn count_table(g: &LabelledGraph, n_max: usize) -> CountTable {
    let base = CountMatrix::of_graph(g);
    let mut powers = Vec::with_capacity(n_max + 1);
    powers.push(CountMatrix::identity(base.dim()));
    for n in 0..n_max {
        let next = powers[n].mul(&base);
        powers.push(next);
    }
    let spheres = g
        .start()
        .map(|s| powers.iter().map(|m| m.row_sum(s)).collect());
    CountTable {
        n_max,
        powers,
        spheres,
    }
}

/// `counts[n][v]` is the number of paths of length `n` from `u` to `v`.
/// Cheaper than [`count_table`] when only one source matters.
pub fn path_counts_from(g: &LabelledGraph, u: usize, n_max: usize) -> Vec<Vec<BigUint>> {
    let dim = g.vertex_count();
    let mut layer = vec![BigUint::zero(); dim];
    layer[u] = BigUint::one();
    let mut out = Vec::with_capacity(n_max + 1);
    for _ in 0..n_max {
        let mut next = vec![BigUint::zero(); dim];
        for a in g.arcs() {
            if !layer[a.tail].is_zero() {
                next[a.head] += &layer[a.tail];
            }
        }
        out.push(core::mem::replace(&mut layer, next));
    }
    out.push(layer);
    out
}

/// Sphere sizes `#S(n)` for `n = 0..=n_max` from the start vertex.
pub fn sphere_sizes(g: &LabelledGraph, n_max: usize) -> Option<Vec<BigUint>> {
    let s = g.start()?;
    Some(
        path_counts_from(g, s, n_max)
            .into_iter()
            .map(|row| row.into_iter().sum())
            .collect(),
    )
}

/// Label words (symbol indices) of all paths of length `n` from `u`, ending
/// at `target` if given, in arc-index lexicographic order.
pub fn enumerate_paths(
    g: &LabelledGraph,
    u: usize,
    target: Option<usize>,
    n: usize,
    cap: usize,
) -> Result<Vec<Vec<usize>>, CountError> {
    let arcs = enumerate_arc_paths(g, u, target, n, cap)?;
    Ok(arcs
        .into_iter()
        .map(|p| p.into_iter().map(|i| g.arcs()[i].label).collect())
        .collect())
}

/// Like [`enumerate_paths`] but yields arc indices.
pub fn enumerate_arc_paths(
    g: &LabelledGraph,
    u: usize,
    target: Option<usize>,
    n: usize,
    cap: usize,
) -> Result<Vec<Vec<usize>>, CountError> {
    let dim = g.vertex_count();
    for v in core::iter::once(u).chain(target) {
        if v >= dim {
            return Err(CountError::VertexOutOfRange(v));
        }
    }
    // Saturating count first, so the cap is enforced before allocating.
    let mut layer = vec![0u128; dim];
    layer[u] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; dim];
        for a in g.arcs() {
            next[a.head] = next[a.head].saturating_add(layer[a.tail]);
        }
        layer = next;
    }
    let total = match target {
        Some(v) => layer[v],
        None => layer.iter().fold(0u128, |s, &c| s.saturating_add(c)),
    };
    if total > cap as u128 {
        return Err(CountError::PathCapExceeded { cap });
    }

    let adj = g.adjacency();
    let mut out = Vec::with_capacity(total as usize);
    let mut path = Vec::with_capacity(n);
    for_each_path(g.arcs(), &adj, u, n, &mut path, &mut |p: &[usize]| {
        let end = p.last().map_or(u, |&i| g.arcs()[i].head);
        if target.is_none_or(|v| v == end) {
            out.push(p.to_vec());
        }
    });
    Ok(out)
}

/// Checks the decomposition of path counts across a cut with no arcs from
/// the second part back to the first: for every `n <= n_max`,
///
/// `#L(u, v, n) = sum over k + m = n - 1 and arcs u' -> v' crossing the cut of
/// #L1(u, u', k) * #arcs(u', v') * #L2(v', v, m)`
///
/// where `L1`, `L2` count paths inside the induced subgraphs. `first` lists
/// the vertices of the first part; `u` must lie in it and `v` outside.
pub fn verify_cut_convolution(
    g: &LabelledGraph,
    first: &[usize],
    u: usize,
    v: usize,
    n_max: usize,
) -> Result<bool, CountError> {
    let dim = g.vertex_count();
    let mut in_first = vec![false; dim];
    for &w in first {
        if w >= dim {
            return Err(CountError::VertexOutOfRange(w));
        }
        in_first[w] = true;
    }
    if first.is_empty() || in_first.iter().all(|&b| b) {
        return Err(CountError::InvalidPartition("both parts must be nonempty"));
    }
    if u >= dim || v >= dim {
        return Err(CountError::VertexOutOfRange(u.max(v)));
    }
    if !in_first[u] || in_first[v] {
        return Err(CountError::InvalidPartition(
            "source must lie in the first part and target in the second",
        ));
    }
    if let Some(a) = g.arcs().iter().find(|a| !in_first[a.tail] && in_first[a.head]) {
        return Err(CountError::BackArc {
            tail: a.tail,
            head: a.head,
        });
    }

    let part1: Vec<usize> = (0..dim).filter(|&w| in_first[w]).collect();
    let part2: Vec<usize> = (0..dim).filter(|&w| !in_first[w]).collect();
    let local = |part: &[usize], w: usize| part.iter().position(|&x| x == w).expect("member");
    let g1 = g.induced_subgraph(&part1).expect("nonempty part");
    let g2 = g.induced_subgraph(&part2).expect("nonempty part");
    let t1 = count_table(&g1, n_max);
    let t2 = count_table(&g2, n_max);
    let whole = count_table(g, n_max);

    let mut crossing: Vec<(usize, usize, usize)> = Vec::new();
    for a in g.arcs().iter().filter(|a| in_first[a.tail] && !in_first[a.head]) {
        let key = (local(&part1, a.tail), local(&part2, a.head));
        match crossing.iter_mut().find(|(x, y, _)| (*x, *y) == key) {
            Some(entry) => entry.2 += 1,
            None => crossing.push((key.0, key.1, 1)),
        }
    }

    let (lu, lv) = (local(&part1, u), local(&part2, v));
    for n in 0..=n_max {
        let mut rhs = BigUint::zero();
        if n >= 1 {
            for k in 0..n {
                let m = n - 1 - k;
                for &(x, y, mult) in &crossing {
                    let left = t1.pair(lu, x, k);
                    let right = t2.pair(y, lv, m);
                    if !left.is_zero() && !right.is_zero() {
                        rhs += left * right * BigUint::from(mult);
                    }
                }
            }
        }
        if *whole.pair(u, v, n) != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
