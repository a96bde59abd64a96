//! Finite labelled directed multigraphs and their condensations.
//!
//! A [`LabelledGraph`] is the combinatorial carrier of a Markov coding: every
//! arc carries a symbol from the generator alphabet, loops and parallel arcs
//! are allowed, and an optional start vertex marks where coded words begin.
//! Vertex and symbol identity is by name; indices are positions in the
//! declaration order and are only meaningful relative to one graph.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Default cap on the number of arcs materialized by [`LabelledGraph::power`].
pub const DEFAULT_POWER_ARC_CAP: usize = 1_000_000;

/// Separator placed between symbols when arcs of a graph power are labelled
/// by words.
pub const WORD_SEPARATOR: char = '.';

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    EmptyVertexSet,
    InvalidName(String),
    DuplicateVertex(String),
    DuplicateSymbol(String),
    UnknownVertex(String),
    UnknownSymbol(String),
    VertexOutOfRange(usize),
    SymbolOutOfRange(usize),
    EmptySubset,
    ZeroPower,
    ArcCapExceeded { cap: usize },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::EmptyVertexSet => write!(f, "graph has no vertices"),
            GraphError::InvalidName(n) => write!(f, "invalid name {n:?}"),
            GraphError::DuplicateVertex(n) => write!(f, "duplicate vertex declaration {n}"),
            GraphError::DuplicateSymbol(n) => write!(f, "duplicate alphabet symbol {n}"),
            GraphError::UnknownVertex(n) => write!(f, "unknown vertex {n}"),
            GraphError::UnknownSymbol(n) => write!(f, "unknown symbol {n}"),
            GraphError::VertexOutOfRange(i) => write!(f, "vertex index {i} out of range"),
            GraphError::SymbolOutOfRange(i) => write!(f, "symbol index {i} out of range"),
            GraphError::EmptySubset => write!(f, "vertex subset is empty"),
            GraphError::ZeroPower => write!(f, "graph power exponent must be at least 1"),
            GraphError::ArcCapExceeded { cap } => {
                write!(f, "graph power would exceed the cap of {cap} arcs")
            }
        }
    }
}

impl core::error::Error for GraphError {}

/// Names are used as whitespace-separated tokens in the text formats and as
/// CSV header fragments.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || c == '#' || c == ',' || c == '"')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledGraph {
    vertices: Vec<String>,
    alphabet: Vec<String>,
    arcs: Vec<Arc>,
    start: Option<usize>,
}

impl LabelledGraph {
    /// Builds a graph from index data, validating every invariant.
    pub fn new(
        vertices: Vec<String>,
        alphabet: Vec<String>,
        arcs: Vec<Arc>,
        start: Option<usize>,
    ) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        check_names(&vertices, GraphError::DuplicateVertex)?;
        check_names(&alphabet, GraphError::DuplicateSymbol)?;
        for arc in &arcs {
            for end in [arc.tail, arc.head] {
                if end >= vertices.len() {
                    return Err(GraphError::VertexOutOfRange(end));
                }
            }
            if arc.label >= alphabet.len() {
                return Err(GraphError::SymbolOutOfRange(arc.label));
            }
        }
        if let Some(s) = start {
            if s >= vertices.len() {
                return Err(GraphError::VertexOutOfRange(s));
            }
        }
        Ok(LabelledGraph {
            vertices,
            alphabet,
            arcs,
            start,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn start(&self) -> Option<usize> {
        self.start
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn symbol_name(&self, s: usize) -> &str {
        &self.alphabet[s]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == name)
    }

    /// Arcs leaving `v` together with their positions in [`Self::arcs`],
    /// in arc-index order.
    pub fn out_arcs(&self, v: usize) -> impl Iterator<Item = (usize, &Arc)> + '_ {
        self.arcs
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.tail == v)
    }

    /// Outgoing arc indices per vertex, each list in arc-index order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, a) in self.arcs.iter().enumerate() {
            adj[a.tail].push(i);
        }
        adj
    }

    pub fn arc_multiplicity(&self, u: usize, v: usize) -> usize {
        self.arcs
            .iter()
            .filter(|a| a.tail == u && a.head == v)
            .count()
    }

    pub fn max_out_degree(&self) -> usize {
        let mut deg = vec![0usize; self.vertices.len()];
        for a in &self.arcs {
            deg[a.tail] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Returns a copy with a different start vertex.
    pub fn with_start(&self, start: Option<usize>) -> Result<Self, GraphError> {
        LabelledGraph::new(
            self.vertices.clone(),
            self.alphabet.clone(),
            self.arcs.clone(),
            start,
        )
    }

    /// Returns a copy with one more arc appended.
    pub fn with_arc(&self, arc: Arc) -> Result<Self, GraphError> {
        let mut arcs = self.arcs.clone();
        arcs.push(arc);
        LabelledGraph::new(
            self.vertices.clone(),
            self.alphabet.clone(),
            arcs,
            self.start,
        )
    }

    /// Tarjan's algorithm, iterative. Components are numbered by their
    /// smallest vertex; `topo_order` lists sources before sinks.
    pub fn strongly_connected_components(&self) -> Condensation {
        let n = self.vertices.len();
        let adj: Vec<Vec<usize>> = self
            .adjacency()
            .into_iter()
            .map(|out| out.into_iter().map(|i| self.arcs[i].head).collect())
            .collect();

        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut raw: Vec<Vec<usize>> = Vec::new();
        let mut counter = 0usize;

        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            // (vertex, next child position)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos < adj[v].len() {
                    let w = adj[v][*pos];
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        raw.push(comp);
                    }
                }
            }
        }

        raw.sort_by_key(|c| c[0]);
        let mut component_of = vec![0usize; n];
        for (ci, comp) in raw.iter().enumerate() {
            for &v in comp {
                component_of[v] = ci;
            }
        }
        let mut dag_arcs: Vec<(usize, usize)> = self
            .arcs
            .iter()
            .map(|a| (component_of[a.tail], component_of[a.head]))
            .filter(|(x, y)| x != y)
            .collect();
        dag_arcs.sort_unstable();
        dag_arcs.dedup();

        // Kahn, smallest available component first.
        let k = raw.len();
        let mut indeg = vec![0usize; k];
        for &(_, y) in &dag_arcs {
            indeg[y] += 1;
        }
        let mut ready: alloc::collections::BTreeSet<usize> =
            (0..k).filter(|&c| indeg[c] == 0).collect();
        let mut topo_order = Vec::with_capacity(k);
        while let Some(c) = ready.pop_first() {
            topo_order.push(c);
            for &(x, y) in dag_arcs.iter().filter(|(x, _)| *x == c) {
                debug_assert_eq!(x, c);
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        debug_assert_eq!(topo_order.len(), k);

        Condensation {
            components: raw,
            component_of,
            dag_arcs,
            topo_order,
        }
    }

    /// The subgraph induced by `vs`, keeping the original vertex order and
    /// the full alphabet. The start vertex survives only if it lies in `vs`.
    pub fn induced_subgraph(&self, vs: &[usize]) -> Result<LabelledGraph, GraphError> {
        if vs.is_empty() {
            return Err(GraphError::EmptySubset);
        }
        let mut keep = vec![false; self.vertices.len()];
        for &v in vs {
            if v >= self.vertices.len() {
                return Err(GraphError::VertexOutOfRange(v));
            }
            keep[v] = true;
        }
        let mut new_index = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for (v, name) in self.vertices.iter().enumerate() {
            if keep[v] {
                new_index[v] = vertices.len();
                vertices.push(name.clone());
            }
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|a| keep[a.tail] && keep[a.head])
            .map(|a| Arc {
                tail: new_index[a.tail],
                head: new_index[a.head],
                label: a.label,
            })
            .collect();
        let start = self.start.filter(|&s| keep[s]).map(|s| new_index[s]);
        LabelledGraph::new(vertices, self.alphabet.clone(), arcs, start)
    }

    /// The `n`-th power: same vertices, one arc per path of length `n`,
    /// labelled by the path's label word (symbols joined with
    /// [`WORD_SEPARATOR`]). Fails if more than `cap` arcs would be produced.
    pub fn power(&self, n: usize, cap: usize) -> Result<LabelledGraph, GraphError> {
        if n == 0 {
            return Err(GraphError::ZeroPower);
        }
        let vcount = self.vertices.len();
        let adj = self.adjacency();

        // Saturating path counts by remaining length.
        let mut from = vec![1u128; vcount];
        for _ in 0..n {
            from = (0..vcount)
                .map(|v| {
                    adj[v].iter().fold(0u128, |acc, &i| {
                        acc.saturating_add(from[self.arcs[i].head])
                    })
                })
                .collect();
        }
        let total = from.iter().fold(0u128, |acc, &c| acc.saturating_add(c));
        if total > cap as u128 {
            return Err(GraphError::ArcCapExceeded { cap });
        }

        let mut alphabet: Vec<String> = Vec::new();
        let mut symbol_of: BTreeMap<String, usize> = BTreeMap::new();
        let mut arcs = Vec::with_capacity(total as usize);
        let mut path: Vec<usize> = Vec::with_capacity(n);
        for u in 0..vcount {
            for_each_path(&self.arcs, &adj, u, n, &mut path, &mut |p: &[usize]| {
                let mut word = String::new();
                for (j, &i) in p.iter().enumerate() {
                    if j > 0 {
                        word.push(WORD_SEPARATOR);
                    }
                    word.push_str(&self.alphabet[self.arcs[i].label]);
                }
                let label = *symbol_of.entry(word.clone()).or_insert_with(|| {
                    alphabet.push(word);
                    alphabet.len() - 1
                });
                arcs.push(Arc {
                    tail: u,
                    head: self.arcs[*p.last().expect("n >= 1")].head,
                    label,
                });
            });
        }
        LabelledGraph::new(self.vertices.clone(), alphabet, arcs, self.start)
    }
}

fn check_names(names: &[String], dup: fn(String) -> GraphError) -> Result<(), GraphError> {
    let mut seen = alloc::collections::BTreeSet::new();
    for name in names {
        if !is_valid_name(name) {
            return Err(GraphError::InvalidName(name.clone()));
        }
        if !seen.insert(name.as_str()) {
            return Err(dup(name.clone()));
        }
    }
    Ok(())
}

/// Depth-first walk over every path of exactly `len` arcs starting at `u`,
/// in arc-index lexicographic order. The callback receives arc indices.
pub(crate) fn for_each_path<F: FnMut(&[usize])>(
    arcs: &[Arc],
    adj: &[Vec<usize>],
    u: usize,
    len: usize,
    path: &mut Vec<usize>,
    visit: &mut F,
) {
    if path.len() == len {
        visit(path);
        return;
    }
    let at = path.last().map_or(u, |&i| arcs[i].head);
    for &i in &adj[at] {
        path.push(i);
        for_each_path(arcs, adj, u, len, path, visit);
        path.pop();
    }
}

/// Incremental construction by name, used by the text parsers and the
/// built-in codings.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    alphabet: Vec<String>,
    arcs: Vec<Arc>,
    start: Option<String>,
    vertex_ids: BTreeMap<String, usize>,
    symbol_ids: BTreeMap<String, usize>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn symbol(&mut self, name: &str) -> Result<usize, GraphError> {
        if !is_valid_name(name) {
            return Err(GraphError::InvalidName(name.to_string()));
        }
        if self.symbol_ids.contains_key(name) {
            return Err(GraphError::DuplicateSymbol(name.to_string()));
        }
        self.alphabet.push(name.to_string());
        self.symbol_ids
            .insert(name.to_string(), self.alphabet.len() - 1);
        Ok(self.alphabet.len() - 1)
    }

    pub fn vertex(&mut self, name: &str) -> Result<usize, GraphError> {
        if !is_valid_name(name) {
            return Err(GraphError::InvalidName(name.to_string()));
        }
        if self.vertex_ids.contains_key(name) {
            return Err(GraphError::DuplicateVertex(name.to_string()));
        }
        self.vertices.push(name.to_string());
        self.vertex_ids
            .insert(name.to_string(), self.vertices.len() - 1);
        Ok(self.vertices.len() - 1)
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.symbol_ids.contains_key(name)
    }

    /// Records the start vertex by name; resolved at [`Self::build`] so it may
    /// precede the vertex declarations.
    pub fn start(&mut self, name: &str) {
        self.start = Some(name.to_string());
    }

    pub fn arc(&mut self, tail: &str, head: &str, label: &str) -> Result<(), GraphError> {
        let t = *self
            .vertex_ids
            .get(tail)
            .ok_or_else(|| GraphError::UnknownVertex(tail.to_string()))?;
        let h = *self
            .vertex_ids
            .get(head)
            .ok_or_else(|| GraphError::UnknownVertex(head.to_string()))?;
        let l = *self
            .symbol_ids
            .get(label)
            .ok_or_else(|| GraphError::UnknownSymbol(label.to_string()))?;
        self.arcs.push(Arc {
            tail: t,
            head: h,
            label: l,
        });
        Ok(())
    }

    pub fn build(self) -> Result<LabelledGraph, GraphError> {
        let start = match self.start {
            Some(name) => Some(
                *self
                    .vertex_ids
                    .get(&name)
                    .ok_or(GraphError::UnknownVertex(name))?,
            ),
            None => None,
        };
        LabelledGraph::new(self.vertices, self.alphabet, self.arcs, start)
    }
}

/// Strongly connected components of a graph and the acyclic graph between
/// them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    /// Vertex sets, each sorted; numbered by smallest member.
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// Distinct arcs between different components, sorted.
    pub dag_arcs: Vec<(usize, usize)>,
    /// Sources before sinks.
    pub topo_order: Vec<usize>,
}

impl Condensation {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Position of every component within `topo_order`.
    pub fn topo_rank(&self) -> Vec<usize> {
        let mut rank = vec![0; self.components.len()];
        for (i, &c) in self.topo_order.iter().enumerate() {
            rank[c] = i;
        }
        rank
    }

    /// True when the component has at least one internal arc (a single
    /// vertex without a loop is transient).
    pub fn has_internal_arc(&self, g: &LabelledGraph, component: usize) -> bool {
        g.arcs().iter().any(|a| {
            self.component_of[a.tail] == component && self.component_of[a.head] == component
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn graph(n: usize, arcs: &[(usize, usize)]) -> LabelledGraph {
        let vertices = (0..n).map(|i| alloc::format!("v{i}")).collect();
        let arcs = arcs
            .iter()
            .map(|&(tail, head)| Arc {
                tail,
                head,
                label: 0,
            })
            .collect();
        LabelledGraph::new(vertices, vec!["a".to_string()], arcs, Some(0)).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            LabelledGraph::new(vec![], vec![], vec![], None),
            Err(GraphError::EmptyVertexSet)
        );
        let dup = LabelledGraph::new(vec!["x".into(), "x".into()], vec![], vec![], None);
        assert_eq!(dup, Err(GraphError::DuplicateVertex("x".into())));
        let bad = LabelledGraph::new(vec!["x y".into()], vec![], vec![], None);
        assert!(matches!(bad, Err(GraphError::InvalidName(_))));
        let label = LabelledGraph::new(
            vec!["x".into()],
            vec![],
            vec![Arc {
                tail: 0,
                head: 0,
                label: 0,
            }],
            None,
        );
        assert_eq!(label, Err(GraphError::SymbolOutOfRange(0)));
    }

    #[test]
    fn loops_form_one_component() {
        let g = graph(1, &[(0, 0), (0, 0), (0, 0)]);
        let c = g.strongly_connected_components();
        assert_eq!(c.components, vec![vec![0]]);
        assert!(c.dag_arcs.is_empty());
        assert!(c.has_internal_arc(&g, 0));
    }

    #[test]
    fn single_arc_gives_ordered_components() {
        let g = graph(2, &[(1, 0)]);
        let c = g.strongly_connected_components();
        assert_eq!(c.components, vec![vec![0], vec![1]]);
        assert_eq!(c.dag_arcs, vec![(1, 0)]);
        assert_eq!(c.topo_order, vec![1, 0]);
        assert!(!c.has_internal_arc(&g, 0));
    }

    #[test]
    fn cycle_with_tail() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 1), (2, 3)]);
        let c = g.strongly_connected_components();
        assert_eq!(c.components, vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(c.topo_order, vec![0, 1, 2]);
    }

    #[test]
    fn induced_subgraph_drops_crossing_arcs() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let h = g.induced_subgraph(&[0, 2]).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert!(h.arcs().is_empty());
        assert_eq!(h.start(), Some(0));
        let h = g.induced_subgraph(&[1, 2]).unwrap();
        assert_eq!(h.start(), None);
        assert_eq!(h.arcs().len(), 1);
        assert_eq!(g.induced_subgraph(&[0, 1, 2]).unwrap(), g);
        assert_eq!(g.induced_subgraph(&[]), Err(GraphError::EmptySubset));
    }

    #[test]
    fn power_of_two_loops() {
        let g = LabelledGraph::new(
            vec!["v".into()],
            vec!["a".into(), "b".into()],
            vec![
                Arc {
                    tail: 0,
                    head: 0,
                    label: 0,
                },
                Arc {
                    tail: 0,
                    head: 0,
                    label: 1,
                },
            ],
            None,
        )
        .unwrap();
        let p = g.power(3, DEFAULT_POWER_ARC_CAP).unwrap();
        assert_eq!(p.arcs().len(), 8);
        assert_eq!(p.alphabet()[0], "a.a.a");
        assert_eq!(p.alphabet()[7], "b.b.b");
        assert_eq!(g.power(3, 7), Err(GraphError::ArcCapExceeded { cap: 7 }));
        assert_eq!(g.power(0, 10), Err(GraphError::ZeroPower));
    }

    #[test]
    fn builder_reports_unknown_names() {
        let mut b = GraphBuilder::new();
        b.symbol("a").unwrap();
        b.vertex("q").unwrap();
        assert_eq!(
            b.arc("q", "r", "a"),
            Err(GraphError::UnknownVertex("r".into()))
        );
        assert_eq!(
            b.arc("q", "q", "z"),
            Err(GraphError::UnknownSymbol("z".into()))
        );
        b.start("q");
        b.arc("q", "q", "a").unwrap();
        let g = b.build().unwrap();
        assert_eq!(g.start(), Some(0));
        assert_eq!(g.arcs().len(), 1);
    }
}
