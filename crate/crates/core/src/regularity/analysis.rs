use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::perron::{analyze_block, PerronData};
use super::terms::ExactTerms;
use super::{RegularDescriptor, RegularityError, RegularityOptions, ResidueClass};
use crate::counting::{count_table, CountTable};
use crate::graph::LabelledGraph;

/// Upper limit for automatic range extension when a dominance series
/// cannot be certified with the requested number of exact terms.
pub const MAX_AUTO_RANGE: usize = 3200;

/// Descriptor of `n -> #paths of length n from u to v`.
///
/// If a dominance series fails to certify, the analysis is rerun with twice
/// the exact range, up to [`MAX_AUTO_RANGE`].
pub fn descriptor_of_pair(
    g: &LabelledGraph,
    u: usize,
    v: usize,
    opts: &RegularityOptions,
) -> Result<RegularDescriptor, RegularityError> {
    with_range_extension(opts, |o| Analyzer::new(g, o).pair(u, v))
}

/// Descriptor of the sphere sizes `n -> #S(n)` from the start vertex.
pub fn descriptor_of_spheres(
    g: &LabelledGraph,
    opts: &RegularityOptions,
) -> Result<RegularDescriptor, RegularityError> {
    with_range_extension(opts, |o| Analyzer::new(g, o).spheres())
}

fn with_range_extension<F>(
    opts: &RegularityOptions,
    mut run: F,
) -> Result<RegularDescriptor, RegularityError>
where
    F: FnMut(RegularityOptions) -> Result<RegularDescriptor, RegularityError>,
{
    let mut o = opts.clone();
    loop {
        match run(o.clone()) {
            Err(RegularityError::SeriesNotCertified { .. }) if o.range * 2 <= MAX_AUTO_RANGE => {
                o.range *= 2;
            }
            result => return result,
        }
    }
}

/// Builds descriptors over the condensation of one graph, memoizing count
/// tables, Perron data and sub-descriptors per induced vertex set.
///
/// For a vertex set `S`, the pair `(u, v)` is first restricted to vertices
/// lying on some `u -> v` path. If that set is strongly connected the
/// Perron data of the block gives the answer. Otherwise it splits into the
/// block `V1` of `u` and the rest `V2`; no arc goes from `V2` back to `V1`,
/// so
///
/// `#L(u, v, n) = sum over arcs x -> y from V1 to V2 of
///   (L1(u, x) * L2(y, v))_{n-1}`
///
/// which is a shifted sum of scaled convolutions of smaller descriptors.
pub struct Analyzer<'g> {
    graph: &'g LabelledGraph,
    opts: RegularityOptions,
    adjacency: Vec<Vec<usize>>,
    tables: BTreeMap<Vec<usize>, CountTable>,
    blocks: BTreeMap<Vec<usize>, PerronData>,
    memo: BTreeMap<(Vec<usize>, usize, usize), RegularDescriptor>,
}

impl<'g> Analyzer<'g> {
    pub fn new(graph: &'g LabelledGraph, opts: RegularityOptions) -> Self {
        Analyzer {
            graph,
            opts,
            adjacency: graph.adjacency(),
            tables: BTreeMap::new(),
            blocks: BTreeMap::new(),
            memo: BTreeMap::new(),
        }
    }

    pub fn options(&self) -> &RegularityOptions {
        &self.opts
    }

    pub fn pair(&mut self, u: usize, v: usize) -> Result<RegularDescriptor, RegularityError> {
        let n = self.graph.vertex_count();
        for w in [u, v] {
            if w >= n {
                return Err(RegularityError::VertexOutOfRange(w));
            }
        }
        let all: Vec<usize> = (0..n).collect();
        self.pair_in(&all, u, v)
    }

    pub fn spheres(&mut self) -> Result<RegularDescriptor, RegularityError> {
        let s = self.graph.start().ok_or(RegularityError::NoStartVertex)?;
        let mut total = RegularDescriptor::zero(self.len());
        for v in 0..self.graph.vertex_count() {
            let d = self.pair(s, v)?;
            total = total.sum(&d, &self.opts);
        }
        Ok(total)
    }

    /// Perron data of a strongly connected block given by global indices.
    pub fn perron(&mut self, block: &[usize]) -> Result<&PerronData, RegularityError> {
        let key = block.to_vec();
        if !self.blocks.contains_key(&key) {
            let sub = self
                .graph
                .induced_subgraph(block)
                .map_err(|_| RegularityError::NotStronglyConnected)?;
            if sub.arcs().is_empty() {
                return Err(RegularityError::NoArcs);
            }
            let table = self.table(block).clone();
            let data = analyze_block(&sub, key.clone(), &table, &self.opts)?;
            self.blocks.insert(key.clone(), data);
        }
        Ok(&self.blocks[&key])
    }

    fn len(&self) -> usize {
        self.opts.range + 1
    }

    fn table(&mut self, set: &[usize]) -> &CountTable {
        let range = self.opts.range;
        let graph = self.graph;
        self.tables.entry(set.to_vec()).or_insert_with(|| {
            let sub = graph.induced_subgraph(set).expect("nonempty vertex set");
            count_table(&sub, range)
        })
    }

    /// Vertices of `set` reachable from `from` (or reaching it, when
    /// `reverse`) by arcs inside `set`.
    fn closure(&self, set: &[bool], from: usize, reverse: bool) -> Vec<bool> {
        let n = self.graph.vertex_count();
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            let step = |w: usize, seen: &mut Vec<bool>, queue: &mut VecDeque<usize>| {
                if set[w] && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            };
            if reverse {
                for a in self.graph.arcs().iter().filter(|a| a.head == x) {
                    step(a.tail, &mut seen, &mut queue);
                }
            } else {
                for &i in &self.adjacency[x] {
                    step(self.graph.arcs()[i].head, &mut seen, &mut queue);
                }
            }
        }
        seen
    }

    fn pair_in(
        &mut self,
        set: &[usize],
        u: usize,
        v: usize,
    ) -> Result<RegularDescriptor, RegularityError> {
        let key = (set.to_vec(), u, v);
        if let Some(d) = self.memo.get(&key) {
            return Ok(d.clone());
        }
        let d = self.compute_pair(set, u, v)?;
        self.memo.insert(key, d.clone());
        Ok(d)
    }

    fn compute_pair(
        &mut self,
        set: &[usize],
        u: usize,
        v: usize,
    ) -> Result<RegularDescriptor, RegularityError> {
        let n = self.graph.vertex_count();
        let mut member = vec![false; n];
        for &w in set {
            member[w] = true;
        }
        let fwd = self.closure(&member, u, false);
        let bwd = self.closure(&member, v, true);
        let relevant: Vec<usize> = (0..n).filter(|&w| fwd[w] && bwd[w]).collect();
        if relevant.is_empty() {
            return Ok(RegularDescriptor::zero(self.len()));
        }

        let sub = self
            .graph
            .induced_subgraph(&relevant)
            .expect("relevant set is nonempty");
        let cond = sub.strongly_connected_components();
        let local = |w: usize| relevant.binary_search(&w).expect("relevant vertex");

        if cond.len() == 1 {
            if sub.arcs().is_empty() {
                // a lone vertex without a loop: only the empty path
                return Ok(RegularDescriptor::delta(self.len()));
            }
            return self.block_descriptor(&relevant, local(u), local(v));
        }

        let first: Vec<usize> = cond.components[cond.component_of[local(u)]]
            .iter()
            .map(|&i| relevant[i])
            .collect();
        let mut in_first = vec![false; n];
        for &w in &first {
            in_first[w] = true;
        }
        let rest: Vec<usize> = relevant.iter().copied().filter(|&w| !in_first[w]).collect();

        let mut crossing: Vec<((usize, usize), usize)> = Vec::new();
        for a in self.graph.arcs() {
            if in_first[a.tail] && fwd[a.head] && bwd[a.head] && !in_first[a.head] {
                let key = (a.tail, a.head);
                match crossing.iter_mut().find(|(k, _)| *k == key) {
                    Some(entry) => entry.1 += 1,
                    None => crossing.push((key, 1)),
                }
            }
        }

        let mut total = RegularDescriptor::zero(self.len());
        for ((x, y), mult) in crossing {
            let left = self.pair_in(&first, u, x)?;
            let right = self.pair_in(&rest, y, v)?;
            let piece = left
                .convolve(&right, &self.opts)?
                .scale(&BigRational::from_integer(BigInt::from(mult)))?;
            total = total.sum(&piece, &self.opts);
        }
        Ok(total.shift(-1).truncated(self.len()))
    }

    fn block_descriptor(
        &mut self,
        block: &[usize],
        lu: usize,
        lv: usize,
    ) -> Result<RegularDescriptor, RegularityError> {
        let terms = ExactTerms::from_integers(self.table(block).pair_sequence(lu, lv));
        let data = self.perron(block)?;
        let classes = (0..data.period)
            .map(|r| match data.coefficient(lu, lv, r) {
                Some(a) => ResidueClass::Asymptotic {
                    a: a.clone(),
                    b: 0,
                    c: data.spectral_radius.clone(),
                },
                None => ResidueClass::EventuallyZero {
                    horizon: terms.len() - 1,
                },
            })
            .collect();
        Ok(RegularDescriptor::new(data.period, classes, terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use num_traits::One;

    fn build(loops_u: usize, loops_v: usize) -> LabelledGraph {
        let mut b = GraphBuilder::new();
        b.symbol("a").unwrap();
        b.vertex("u").unwrap();
        b.vertex("v").unwrap();
        for _ in 0..loops_u {
            b.arc("u", "u", "a").unwrap();
        }
        b.arc("u", "v", "a").unwrap();
        for _ in 0..loops_v {
            b.arc("v", "v", "a").unwrap();
        }
        b.start("u");
        b.build().unwrap()
    }

    fn opts(range: usize) -> RegularityOptions {
        RegularityOptions {
            range,
            ..RegularityOptions::default()
        }
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn unreachable_target_vanishes() {
        let g = build(1, 1);
        let d = descriptor_of_pair(&g, 1, 0, &opts(60)).unwrap();
        assert_eq!(d.classes(), &[ResidueClass::EventuallyZero { horizon: 0 }]);
    }

    #[test]
    fn loop_chain_grows_linearly() {
        let g = build(1, 1);
        let d = descriptor_of_pair(&g, 0, 1, &opts(120)).unwrap();
        assert_eq!(
            d.classes(),
            &[ResidueClass::Asymptotic { a: int(1), b: 1, c: int(1) }]
        );
        for n in 0..=120 {
            assert_eq!(d.term(n).unwrap(), int(n as i64));
        }
    }

    #[test]
    fn loop_pair_is_dominated_by_the_target_block() {
        let g = build(2, 3);
        let d = descriptor_of_pair(&g, 0, 1, &opts(400)).unwrap();
        assert_eq!(
            d.classes(),
            &[ResidueClass::Asymptotic { a: int(1), b: 0, c: int(3) }]
        );
        let report = d.validate(200, 200, 1e-30).unwrap();
        assert!(report.pass());
        let expected = num_traits::pow(2.0f64 / 3.0, 200);
        assert!((report.max_deviation() / expected - 1.0).abs() < 1e-9);
    }

    #[test]
    fn spheres_sum_over_targets() {
        let g = build(2, 3);
        let d = descriptor_of_spheres(&g, &opts(200)).unwrap();
        // 2^n + (3^n - 2^n) = 3^n
        for n in 0..=200 {
            assert_eq!(d.term(n).unwrap(), num_traits::pow(int(3), n));
        }
        let ResidueClass::Asymptotic { a, b, c } = &d.classes()[0] else {
            panic!("expected growth");
        };
        assert!(a.is_one() && *b == 0 && *c == int(3));
    }

    #[test]
    fn transient_path_is_finite() {
        let mut b = GraphBuilder::new();
        b.symbol("a").unwrap();
        for name in ["x", "y", "z"] {
            b.vertex(name).unwrap();
        }
        b.arc("x", "y", "a").unwrap();
        b.arc("y", "z", "a").unwrap();
        b.arc("x", "z", "a").unwrap();
        b.start("x");
        let g = b.build().unwrap();
        let d = descriptor_of_spheres(&g, &opts(40)).unwrap();
        assert_eq!(d.classes(), &[ResidueClass::EventuallyZero { horizon: 2 }]);
        assert_eq!(d.term(1).unwrap(), int(2));
        assert_eq!(d.term(2).unwrap(), int(1));
    }
}
