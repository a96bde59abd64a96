//! Perron–Frobenius data of a strongly connected block: period, spectral
//! radius and the constants `a` with `(N^n)_{u,v} ~ a c^n` along each
//! admissible residue class.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{RegularityError, RegularityOptions};
use crate::counting::{count_table, CountMatrix, CountTable};
use crate::exact::{f64_to_rational, gcd, ln_big, rational_pow, tidy_constant, uint_to_rational};
use crate::graph::LabelledGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct PerronData {
    /// Global vertex indices of the block, ascending.
    pub vertices: Vec<usize>,
    /// gcd of the cycle lengths in the block.
    pub period: usize,
    /// Growth rate `c`; an exact integer when the Perron root is one,
    /// otherwise the `f64` estimate.
    pub spectral_radius: BigRational,
    pub radius_estimate: f64,
    pub exact_radius: bool,
    pub iterations: usize,
    /// Cyclic class (BFS level modulo the period) of each block vertex.
    pub cyclic_class: Vec<usize>,
    /// `coefficients[u][v][r]` for local indices; `None` marks a residue on
    /// which the counts vanish.
    pub coefficients: Vec<Vec<Vec<Option<BigRational>>>>,
}

impl PerronData {
    pub fn coefficient(&self, u: usize, v: usize, r: usize) -> Option<&BigRational> {
        self.coefficients[u][v][r].as_ref()
    }
}

fn strongly_connected_block(
    g: &LabelledGraph,
    component: &[usize],
) -> Result<LabelledGraph, RegularityError> {
    for &v in component {
        if v >= g.vertex_count() {
            return Err(RegularityError::VertexOutOfRange(v));
        }
    }
    let sub = g
        .induced_subgraph(component)
        .map_err(|_| RegularityError::NotStronglyConnected)?;
    if sub.arcs().is_empty() {
        return Err(RegularityError::NoArcs);
    }
    if sub.strongly_connected_components().len() != 1 {
        return Err(RegularityError::NotStronglyConnected);
    }
    Ok(sub)
}

/// BFS levels from local vertex 0 and the gcd of `level(t) + 1 - level(h)`
/// over all arcs, which is the gcd of the cycle lengths.
fn levels_and_period(sub: &LabelledGraph) -> (Vec<usize>, usize) {
    let n = sub.vertex_count();
    let adj = sub.adjacency();
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &i in &adj[x] {
            let y = sub.arcs()[i].head;
            if level[y] == usize::MAX {
                level[y] = level[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let mut period = 0usize;
    for a in sub.arcs() {
        let diff = (level[a.tail] as i64 + 1 - level[a.head] as i64).unsigned_abs() as usize;
        period = gcd(period, diff);
    }
    (level, period.max(1))
}

/// Period of a strongly connected block with at least one arc.
pub fn scc_period(g: &LabelledGraph, component: &[usize]) -> Result<usize, RegularityError> {
    let sub = strongly_connected_block(g, component)?;
    Ok(levels_and_period(&sub).1)
}

pub fn perron_analyze(
    g: &LabelledGraph,
    component: &[usize],
    opts: &RegularityOptions,
) -> Result<PerronData, RegularityError> {
    let sub = strongly_connected_block(g, component)?;
    let table = count_table(&sub, opts.range);
    let mut vertices = component.to_vec();
    vertices.sort_unstable();
    analyze_block(&sub, vertices, &table, opts)
}

/// Same as [`perron_analyze`] on an already extracted block with its count
/// table (indices `0..=opts.range`).
pub(crate) fn analyze_block(
    sub: &LabelledGraph,
    vertices: Vec<usize>,
    table: &CountTable,
    opts: &RegularityOptions,
) -> Result<PerronData, RegularityError> {
    let dim = sub.vertex_count();
    let (level, period) = levels_and_period(sub);
    let cyclic_class: Vec<usize> = level.iter().map(|l| l % period).collect();

    let (estimate, iterations) = spectral_radius(sub, &cyclic_class, period, opts)?;
    let (spectral_radius, exact_radius) = match integer_root(sub, estimate, opts.tol) {
        Some(k) => (BigRational::from_integer(BigInt::from(k)), true),
        None => (f64_to_rational(estimate), false),
    };

    // Residues are classified from the data: a residue vanishes when the
    // last 2 * dim admissible indices are all zero, which suffices because
    // the subsequence obeys a linear recurrence of order at most dim.
    let range = table.n_max();
    let span = 2 * dim * period;
    if range + 1 < span + period {
        return Err(RegularityError::OracleRangeExceeded {
            needed: span + period,
            available: range + 1,
        });
    }
    let window = opts.ratio_window.max(1);
    let mut coefficients = vec![vec![vec![None; period]; dim]; dim];
    for u in 0..dim {
        for v in 0..dim {
            for r in 0..period {
                let last = range - (range + period - r) % period;
                let vanishes = (0..2 * dim)
                    .map(|j| last - j * period)
                    .all(|n| table.pair(u, v, n).is_zero());
                if vanishes {
                    debug_assert_ne!((cyclic_class[u] + r) % period, cyclic_class[v]);
                    continue;
                }
                let indices = (0..=last).rev().step_by(period).take(window);
                let avg = if exact_radius {
                    let mut sum = BigRational::zero();
                    let mut used = 0usize;
                    for n in indices {
                        let count = table.pair(u, v, n);
                        sum += uint_to_rational(count) / rational_pow(&spectral_radius, n as i64);
                        used += 1;
                    }
                    sum / BigRational::from_integer(BigInt::from(used))
                } else {
                    let ln_c = libm::log(estimate);
                    let mut sum = 0.0;
                    let mut used = 0usize;
                    for n in indices {
                        let count = table.pair(u, v, n);
                        if !count.is_zero() {
                            sum += libm::exp(ln_big(count) - n as f64 * ln_c);
                        }
                        used += 1;
                    }
                    f64_to_rational(sum / used as f64)
                };
                coefficients[u][v][r] = Some(tidy_constant(&avg));
            }
        }
    }

    Ok(PerronData {
        vertices,
        period,
        spectral_radius,
        radius_estimate: estimate,
        exact_radius,
        iterations,
        cyclic_class,
        coefficients,
    })
}

/// Power iteration on `N^q` restricted to the cyclic class of vertex 0,
/// which is primitive. Stops when the Collatz–Wielandt bounds
/// `min (Bx)_i / x_i <= rho <= max (Bx)_i / x_i` agree to relative `tol`.
/// Returns `rho^(1/q)`.
fn spectral_radius(
    sub: &LabelledGraph,
    cyclic_class: &[usize],
    period: usize,
    opts: &RegularityOptions,
) -> Result<(f64, usize), RegularityError> {
    let nq = CountMatrix::of_graph(sub).pow(period);
    let members: Vec<usize> = (0..sub.vertex_count())
        .filter(|&v| cyclic_class[v] == 0)
        .collect();
    let k = members.len();
    let mut b = Vec::with_capacity(k * k);
    for &i in &members {
        for &j in &members {
            b.push(nq.get(i, j).to_f64().unwrap_or(f64::INFINITY));
        }
    }

    let mut x = vec![1.0f64; k];
    for it in 1..=opts.max_iterations {
        let y: Vec<f64> = (0..k)
            .map(|i| (0..k).map(|j| b[i * k + j] * x[j]).sum())
            .collect();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..k {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if hi - lo <= opts.tol * hi {
            let rho = 0.5 * (lo + hi);
            return Ok((libm::pow(rho, 1.0 / period as f64), it));
        }
        let scale = y.iter().cloned().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / scale).collect();
    }
    Err(RegularityError::NonConvergence {
        iterations: opts.max_iterations,
    })
}

/// The nearest integer `k` to `estimate`, if it is within tolerance and
/// `det(N - k I) = 0` holds exactly.
fn integer_root(sub: &LabelledGraph, estimate: f64, tol: f64) -> Option<i64> {
    let k = libm::round(estimate);
    if k < 1.0 || (estimate - k).abs() > (10.0 * tol).max(1e-9) * estimate {
        return None;
    }
    let k = k as i64;
    let base = CountMatrix::of_graph(sub);
    let n = base.dim();
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = BigInt::from(base.get(i, j).clone());
                    if i == j {
                        e - k
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    determinant_is_zero(&mut m).then_some(k)
}

/// Fraction-free (Bareiss) elimination.
fn determinant_is_zero(m: &mut [Vec<BigInt>]) -> bool {
    let n = m.len();
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => m.swap(k, i),
                None => return true,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Arc;
    use alloc::string::String;

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
        LabelledGraph::new(vertices, vec![String::from("a")], arcs, None).unwrap()
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn periods() {
        assert_eq!(scc_period(&graph(1, &[(0, 0)]), &[0]), Ok(1));
        assert_eq!(scc_period(&graph(2, &[(0, 1), (1, 0)]), &[0, 1]), Ok(2));
        assert_eq!(
            scc_period(&graph(2, &[(0, 1), (1, 0), (0, 0)]), &[0, 1]),
            Ok(1)
        );
        assert_eq!(
            scc_period(&graph(1, &[]), &[0]),
            Err(RegularityError::NoArcs)
        );
        assert_eq!(
            scc_period(&graph(2, &[(0, 1)]), &[0, 1]),
            Err(RegularityError::NotStronglyConnected)
        );
    }

    #[test]
    fn loops_give_integer_radius() {
        let g = graph(1, &[(0, 0), (0, 0), (0, 0)]);
        let p = perron_analyze(&g, &[0], &RegularityOptions::default()).unwrap();
        assert_eq!(p.period, 1);
        assert!(p.exact_radius);
        assert_eq!(p.spectral_radius, int(3));
        assert_eq!(p.coefficient(0, 0, 0), Some(&int(1)));
    }

    #[test]
    fn two_cycle_alternates() {
        let g = graph(2, &[(0, 1), (1, 0)]);
        let p = perron_analyze(&g, &[0, 1], &RegularityOptions::default()).unwrap();
        assert_eq!(p.period, 2);
        assert_eq!(p.spectral_radius, int(1));
        assert_eq!(p.coefficient(0, 0, 0), Some(&int(1)));
        assert_eq!(p.coefficient(0, 0, 1), None);
        assert_eq!(p.coefficient(0, 1, 1), Some(&int(1)));
        assert_eq!(p.coefficient(0, 1, 0), None);
    }

    #[test]
    fn golden_ratio_block() {
        let g = graph(2, &[(0, 0), (0, 1), (1, 0)]);
        let p = perron_analyze(&g, &[0, 1], &RegularityOptions::default()).unwrap();
        let phi = (1.0 + libm::sqrt(5.0)) / 2.0;
        assert!(!p.exact_radius);
        assert!((p.radius_estimate - phi).abs() < 1e-9);
        // (N^n)_{0,0} = F_{n+1} ~ phi^(n+1) / sqrt 5
        let a = crate::exact::rational_to_f64(p.coefficient(0, 0, 0).unwrap());
        assert!((a - phi / libm::sqrt(5.0)).abs() < 1e-7, "{a}");
    }

    #[test]
    fn bareiss_detects_singular() {
        let mut m = vec![
            vec![BigInt::from(2), BigInt::from(4)],
            vec![BigInt::from(1), BigInt::from(2)],
        ];
        assert!(determinant_is_zero(&mut m));
        let mut m = vec![
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(0)],
        ];
        assert!(!determinant_is_zero(&mut m));
    }
}
