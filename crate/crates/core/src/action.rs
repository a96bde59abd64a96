//! Finite measure-preserving actions and spherical / Cesàro averages.
//!
//! A path `e_1 ... e_n` from the start vertex acts on observables by
//! `phi -> phi ∘ T_{e_1} ∘ ... ∘ T_{e_n}`, so `T_{e_n}` is applied to the
//! point first. The averages are
//!
//! `s_n(phi) = (1 / #S(n)) * sum over paths p of length n of phi ∘ T_p`
//!
//! (zero when the sphere is empty) and `c_N(phi) = (1/N) * sum_{n<N} s_n(phi)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codings::free_group_symbols;
use crate::counting::path_counts_from;
use crate::exact::{ratio_f64, uint_to_rational};
use crate::graph::LabelledGraph;

#[derive(Debug, Clone, PartialEq)]
pub enum ActionError {
    EmptySpace,
    DuplicatePoint(String),
    WeightCount { expected: usize, found: usize },
    NonPositiveWeight(String),
    WeightsDoNotSumToOne,
    MapLength { symbol: String, expected: usize, found: usize },
    NotBijective { symbol: String, point: String },
    MeasureNotPreserved { symbol: String, point: String },
    MissingMap(String),
    DuplicateMap(String),
    DimensionMismatch { expected: usize, found: usize },
    NonFiniteValue(usize),
    NoStartVertex,
    InvalidExponent(f64),
    InvalidLadder,
    InsufficientData { needed: usize, available: usize },
}

impl fmt::Display for ActionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionError::EmptySpace => write!(f, "space has no points"),
            ActionError::DuplicatePoint(p) => write!(f, "duplicate point '{p}'"),
            ActionError::WeightCount { expected, found } => {
                write!(f, "expected {expected} weights, found {found}")
            }
            ActionError::NonPositiveWeight(p) => write!(f, "weight of point '{p}' is not positive"),
            ActionError::WeightsDoNotSumToOne => write!(f, "weights do not sum to 1"),
            ActionError::MapLength {
                symbol,
                expected,
                found,
            } => write!(f, "map '{symbol}' lists {found} images, expected {expected}"),
            ActionError::NotBijective { symbol, point } => {
                write!(f, "map '{symbol}' is not bijective: point '{point}' is hit twice")
            }
            ActionError::MeasureNotPreserved { symbol, point } => write!(
                f,
                "measure not preserved by '{symbol}' at point '{point}'"
            ),
            ActionError::MissingMap(s) => write!(f, "no map for symbol '{s}'"),
            ActionError::DuplicateMap(s) => write!(f, "symbol '{s}' has more than one map"),
            ActionError::DimensionMismatch { expected, found } => {
                write!(f, "observable has {found} values, space has {expected} points")
            }
            ActionError::NonFiniteValue(i) => write!(f, "observable value {i} is not finite"),
            ActionError::NoStartVertex => write!(f, "no start vertex"),
            ActionError::InvalidExponent(p) => write!(f, "norm exponent {p} is not >= 1"),
            ActionError::InvalidLadder => {
                write!(f, "ladder needs a start >= 1 and growth factor > 1")
            }
            ActionError::InsufficientData { needed, available } => write!(
                f,
                "ladder needs averages up to N = {needed}, series stops at {available}"
            ),
        }
    }
}

impl core::error::Error for ActionError {}

/// Finite probability space; weights are `numer[i] / denom`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    points: Vec<String>,
    numer: Vec<BigUint>,
    denom: BigUint,
    weights: Vec<f64>,
}

impl FiniteSpace {
    pub fn uniform(points: Vec<String>) -> Result<Self, ActionError> {
        let n = points.len();
        let w = vec![BigRational::new(BigInt::one(), BigInt::from(n.max(1))); n];
        Self::new(points, w)
    }

    pub fn new(points: Vec<String>, weights: Vec<BigRational>) -> Result<Self, ActionError> {
        if points.is_empty() {
            return Err(ActionError::EmptySpace);
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(ActionError::DuplicatePoint(p.clone()));
            }
        }
        if weights.len() != points.len() {
            return Err(ActionError::WeightCount {
                expected: points.len(),
                found: weights.len(),
            });
        }
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(ActionError::NonPositiveWeight(points[i].clone()));
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(ActionError::WeightsDoNotSumToOne);
        }
        let denom = weights
            .iter()
            .fold(BigInt::one(), |l, w| num_integer::Integer::lcm(&l, w.denom()));
        let numer: Vec<BigUint> = weights
            .iter()
            .map(|w| {
                (w.numer() * (&denom / w.denom()))
                    .to_biguint()
                    .expect("positive weight")
            })
            .collect();
        let denom = denom.to_biguint().expect("positive denominator");
        let weights = numer.iter().map(|n| ratio_f64(n, &denom)).collect();
        Ok(FiniteSpace {
            points,
            numer,
            denom,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn weight(&self, i: usize) -> BigRational {
        BigRational::new(self.numer[i].clone().into(), self.denom.clone().into())
    }

    pub fn weight_numerator(&self, i: usize) -> &BigUint {
        &self.numer[i]
    }

    /// Common denominator of all weights.
    pub fn denominator(&self) -> &BigUint {
        &self.denom
    }

    /// Weights rounded to `f64`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_uniform(&self) -> bool {
        self.numer.iter().all(|n| *n == self.numer[0])
    }

    /// `sum_x phi(x) nu(x)`.
    pub fn mean(&self, phi: &[f64]) -> f64 {
        phi.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

/// One permutation of the points per symbol, each preserving the measure.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAction {
    space: FiniteSpace,
    symbols: Vec<String>,
    maps: Vec<Vec<usize>>,
}

impl FiniteAction {
    /// `maps[i][x]` is the image of point `x` under `symbols[i]`.
    pub fn new(
        space: FiniteSpace,
        symbols: Vec<String>,
        maps: Vec<Vec<usize>>,
    ) -> Result<Self, ActionError> {
        let n = space.len();
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(ActionError::DuplicateMap(s.clone()));
            }
        }
        assert_eq!(symbols.len(), maps.len(), "one map per symbol");
        for (s, map) in symbols.iter().zip(&maps) {
            if map.len() != n {
                return Err(ActionError::MapLength {
                    symbol: s.clone(),
                    expected: n,
                    found: map.len(),
                });
            }
            let mut hit = vec![false; n];
            for &y in map {
                if y >= n || hit[y] {
                    let point = if y < n { space.points[y].clone() } else { alloc::format!("#{y}") };
                    return Err(ActionError::NotBijective {
                        symbol: s.clone(),
                        point,
                    });
                }
                hit[y] = true;
            }
            // For a bijection, nu(T^-1 {y}) = nu({y}) for all y means every
            // point has the weight of its image.
            for (x, &y) in map.iter().enumerate() {
                if space.numer[x] != space.numer[y] {
                    return Err(ActionError::MeasureNotPreserved {
                        symbol: s.clone(),
                        point: space.points[x].clone(),
                    });
                }
            }
        }
        Ok(FiniteAction {
            space,
            symbols,
            maps,
        })
    }

    /// Every symbol acts trivially.
    pub fn identity(space: FiniteSpace, symbols: Vec<String>) -> Self {
        let maps = vec![(0..space.len()).collect(); symbols.len()];
        FiniteAction {
            space,
            symbols,
            maps,
        }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn map(&self, symbol: &str) -> Option<&[usize]> {
        self.symbols
            .iter()
            .position(|s| s == symbol)
            .map(|i| self.maps[i].as_slice())
    }

    /// The maps for the alphabet of `g`, indexed by symbol index.
    pub fn maps_for(&self, g: &LabelledGraph) -> Result<Vec<&[usize]>, ActionError> {
        g.alphabet()
            .iter()
            .map(|s| self.map(s).ok_or_else(|| ActionError::MissingMap(s.clone())))
            .collect()
    }

    /// `phi ∘ T_s`.
    pub fn compose(&self, phi: &[f64], symbol: &str) -> Option<Observable> {
        let map = self.map(symbol)?;
        Some(Observable(map.iter().map(|&y| phi[y]).collect()))
    }
}

/// Uniformly random permutation of `0..n` (images listed per point).
pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn inverse_permutation(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// Action of the free group of rank `maps.len()` on the symbols of
/// [`free_group_symbols`]: `a, b, ...` act by the given maps and
/// `A, B, ...` by their inverses.
pub fn free_group_action(space: FiniteSpace, maps: Vec<Vec<usize>>) -> Result<FiniteAction, ActionError> {
    let k = maps.len();
    let symbols = free_group_symbols(k);
    let inverses: Vec<Vec<usize>> = maps.iter().map(|m| inverse_permutation(m)).collect();
    let mut all = maps;
    all.extend(inverses);
    FiniteAction::new(space, symbols, all)
}

/// Uniform space `p0, ..., p{n-1}` with one seeded random permutation per
/// symbol; free-group symbol pairs (`a`/`A`) act by mutually inverse maps.
pub fn random_uniform_action(symbols: &[String], points: usize, seed: u64) -> Result<FiniteAction, ActionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = (0..points).map(|i| alloc::format!("p{i}")).collect();
    let space = FiniteSpace::uniform(names)?;
    let mut maps: Vec<Option<Vec<usize>>> = vec![None; symbols.len()];
    for i in 0..symbols.len() {
        if maps[i].is_some() {
            continue;
        }
        let p = random_permutation(&mut rng, points);
        let partner = symbols.iter().position(|t| is_inverse_pair(&symbols[i], t));
        if let Some(j) = partner.filter(|&j| maps[j].is_none() && j != i) {
            maps[j] = Some(inverse_permutation(&p));
        }
        maps[i] = Some(p);
    }
    FiniteAction::new(space, symbols.to_vec(), maps.into_iter().map(|m| m.expect("filled")).collect())
}

/// `x` and `X` for a single ASCII letter `x`.
fn is_inverse_pair(s: &str, t: &str) -> bool {
    let (mut a, mut b) = (s.chars(), t.chars());
    match (a.next(), a.next(), b.next(), b.next()) {
        (Some(x), None, Some(y), None) => {
            x.is_ascii_alphabetic() && x != y && x.eq_ignore_ascii_case(&y)
        }
        _ => false,
    }
}

/// Real function on the points of a space.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable(Vec<f64>);

impl Observable {
    pub fn new(values: Vec<f64>) -> Result<Self, ActionError> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(ActionError::NonFiniteValue(i));
        }
        Ok(Observable(values))
    }

    pub fn constant(len: usize, value: f64) -> Self {
        Observable(vec![value; len])
    }

    pub fn zeros(len: usize) -> Self {
        Self::constant(len, 0.0)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    /// Uniform values in `[lo, hi]`.
    pub fn random<R: Rng>(rng: &mut R, len: usize, lo: f64, hi: f64) -> Self {
        Observable((0..len).map(|_| rng.gen_range(lo..=hi)).collect())
    }
}

impl Deref for Observable {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// `s_n` for `n = 0..=n_max` and `c_N` for `N = 1..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageSeries {
    spheres: Vec<BigUint>,
    s: Vec<Observable>,
    c: Vec<Observable>,
}

impl AverageSeries {
    pub fn n_max(&self) -> usize {
        self.s.len() - 1
    }

    pub fn sphere(&self, n: usize) -> &BigUint {
        &self.spheres[n]
    }

    pub fn spheres(&self) -> &[BigUint] {
        &self.spheres
    }

    pub fn is_empty_sphere(&self, n: usize) -> bool {
        self.spheres[n].is_zero()
    }

    pub fn empty_sphere_flags(&self) -> Vec<bool> {
        self.spheres.iter().map(|s| s.is_zero()).collect()
    }

    pub fn s(&self, n: usize) -> &Observable {
        &self.s[n]
    }

    /// `c_N`, for `1 <= N <= n_max`.
    pub fn c(&self, big_n: usize) -> &Observable {
        assert!(big_n >= 1, "Cesàro averages start at N = 1");
        &self.c[big_n - 1]
    }

    pub fn cesaro_len(&self) -> usize {
        self.c.len()
    }
}

fn check_observable(space: &FiniteSpace, phi: &[f64]) -> Result<(), ActionError> {
    if phi.len() != space.len() {
        return Err(ActionError::DimensionMismatch {
            expected: space.len(),
            found: phi.len(),
        });
    }
    if let Some(i) = phi.iter().position(|v| !v.is_finite()) {
        return Err(ActionError::NonFiniteValue(i));
    }
    Ok(())
}

/// Computes `s_n(phi)` and `c_N(phi)` by dynamic programming over the
/// vertices of `g`.
///
/// With `f_n(v) = sum over paths p from the start to v of length n of
/// phi ∘ T_p`, extending by an arc `e: v -> w` gives
/// `f_{n+1}(w)(x) = sum_e f_n(v)(T_e x)`. The buffers hold
/// `f_n(v) / #paths(v, n)` so they stay bounded; the exact path counts
/// supply the weights.
pub fn spherical_averages(
    act: &FiniteAction,
    g: &LabelledGraph,
    phi: &[f64],
    n_max: usize,
) -> Result<AverageSeries, ActionError> {
    let start = g.start().ok_or(ActionError::NoStartVertex)?;
    check_observable(&act.space, phi)?;
    let maps = act.maps_for(g)?;
    let dim = g.vertex_count();
    let len = act.space.len();
    let counts = path_counts_from(g, start, n_max);
    let spheres: Vec<BigUint> = counts.iter().map(|row| row.iter().sum()).collect();

    let mut layer: Vec<Vec<f64>> = vec![vec![0.0; len]; dim];
    layer[start].copy_from_slice(phi);
    let mut s = Vec::with_capacity(n_max + 1);
    let mut c = Vec::with_capacity(n_max);
    let mut running = vec![0.0; len];

    for n in 0..=n_max {
        let mut avg = vec![0.0; len];
        if !spheres[n].is_zero() {
            for v in 0..dim {
                if counts[n][v].is_zero() {
                    continue;
                }
                let w = ratio_f64(&counts[n][v], &spheres[n]);
                for (a, h) in avg.iter_mut().zip(&layer[v]) {
                    *a += w * h;
                }
            }
        }
        if n >= 1 {
            c.push(Observable(running.clone()));
        }
        // running mean of s_0..s_n, i.e. c_{n+1}
        for (r, a) in running.iter_mut().zip(&avg) {
            *r += (a - *r) / (n + 1) as f64;
        }
        s.push(Observable(avg));
        if n == n_max {
            break;
        }

        let mut next = vec![vec![0.0; len]; dim];
        for arc in g.arcs() {
            let (v, w) = (arc.tail, arc.head);
            if counts[n][v].is_zero() {
                continue;
            }
            let weight = ratio_f64(&counts[n][v], &counts[n + 1][w]);
            let map = maps[arc.label];
            let src = &layer[v];
            for (x, out) in next[w].iter_mut().enumerate() {
                *out += weight * src[map[x]];
            }
        }
        layer = next;
    }

    Ok(AverageSeries { spheres, s, c })
}

/// Exact `s_n(phi)` for `n = 0..=n_max` in rational arithmetic.
pub fn spherical_averages_exact(
    act: &FiniteAction,
    g: &LabelledGraph,
    phi: &[BigRational],
    n_max: usize,
) -> Result<Vec<Vec<BigRational>>, ActionError> {
    let start = g.start().ok_or(ActionError::NoStartVertex)?;
    if phi.len() != act.space.len() {
        return Err(ActionError::DimensionMismatch {
            expected: act.space.len(),
            found: phi.len(),
        });
    }
    let maps = act.maps_for(g)?;
    let dim = g.vertex_count();
    let len = phi.len();
    let mut layer = vec![vec![BigRational::zero(); len]; dim];
    layer[start] = phi.to_vec();
    let mut counts = vec![BigUint::zero(); dim];
    counts[start] = BigUint::one();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let sphere: BigUint = counts.iter().sum();
        let mut avg = vec![BigRational::zero(); len];
        if !sphere.is_zero() {
            let inv = BigRational::one() / uint_to_rational(&sphere);
            for f in &layer {
                for (a, val) in avg.iter_mut().zip(f) {
                    *a += val;
                }
            }
            for a in &mut avg {
                *a *= &inv;
            }
        }
        out.push(avg);
        if n == n_max {
            break;
        }
        let mut next = vec![vec![BigRational::zero(); len]; dim];
        let mut next_counts = vec![BigUint::zero(); dim];
        for arc in g.arcs() {
            next_counts[arc.head] += &counts[arc.tail];
            let map = maps[arc.label];
            for x in 0..len {
                let val = layer[arc.tail][map[x]].clone();
                next[arc.head][x] += val;
            }
        }
        layer = next;
        counts = next_counts;
    }
    Ok(out)
}

/// Norm exponent `p` in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self, ActionError> {
        if p >= 1.0 && p.is_finite() {
            Ok(Exponent::Finite(p))
        } else {
            Err(ActionError::InvalidExponent(p))
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// `(sum_x |phi(x)|^p nu(x))^(1/p)`, or `max |phi|` for `p = inf`.
pub fn lp_norm(space: &FiniteSpace, phi: &[f64], p: Exponent) -> Result<f64, ActionError> {
    check_observable(space, phi)?;
    match p {
        Exponent::Infinity => Ok(phi.iter().fold(0.0, |m, v| f64::max(m, v.abs()))),
        Exponent::Finite(p) if !(p >= 1.0) || !p.is_finite() => Err(ActionError::InvalidExponent(p)),
        Exponent::Finite(p) if p == 1.0 => Ok(phi
            .iter()
            .zip(space.weights())
            .map(|(v, w)| v.abs() * w)
            .sum()),
        Exponent::Finite(p) => {
            let scale = phi.iter().fold(0.0, |m, v| f64::max(m, v.abs()));
            if scale == 0.0 {
                return Ok(0.0);
            }
            let sum: f64 = phi
                .iter()
                .zip(space.weights())
                .map(|(v, w)| libm::pow(v.abs() / scale, p) * w)
                .sum();
            Ok(scale * libm::pow(sum, 1.0 / p))
        }
    }
}

fn difference(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// One rung `N_j -> N_{j+1}` of a convergence ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderStep {
    pub from: usize,
    pub to: usize,
    /// `||c_{N_{j+1}} - c_{N_j}||_p`.
    pub difference: f64,
    /// `max over N in [N_j, N_{j+1}] and x of |c_N(x) - c_{N_j}(x)|`.
    pub oscillation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub p: Exponent,
    pub steps: Vec<LadderStep>,
    /// Differences never increase along the ladder.
    pub monotone: bool,
}

/// Rungs `N_0 = start`, `N_{j+1} = ceil(growth * N_j)`, up to `limit`.
pub fn ladder(start: usize, growth: f64, limit: usize) -> Result<Vec<usize>, ActionError> {
    if start == 0 || !(growth > 1.0) || !growth.is_finite() {
        return Err(ActionError::InvalidLadder);
    }
    let mut rungs = vec![start];
    loop {
        let last = *rungs.last().expect("nonempty");
        let next = (libm::ceil(growth * last as f64) as usize).max(last + 1);
        if next > limit {
            return Ok(rungs);
        }
        rungs.push(next);
    }
}

/// Cauchy-type diagnostics of `c_N` along a geometric ladder; needs at
/// least two windows.
pub fn convergence_report(
    series: &AverageSeries,
    space: &FiniteSpace,
    p: Exponent,
    start: usize,
    growth: f64,
) -> Result<ConvergenceReport, ActionError> {
    let available = series.cesaro_len();
    let rungs = ladder(start, growth, available)?;
    if rungs.len() < 3 {
        let mut needed = start;
        for _ in 0..2 {
            needed = (libm::ceil(growth * needed as f64) as usize).max(needed + 1);
        }
        return Err(ActionError::InsufficientData { needed, available });
    }
    let mut steps = Vec::with_capacity(rungs.len() - 1);
    for pair in rungs.windows(2) {
        let (from, to) = (pair[0], pair[1]);
        let base = series.c(from);
        let difference = lp_norm(space, &difference(series.c(to), base), p)?;
        let mut oscillation: f64 = 0.0;
        for big_n in from..=to {
            for (x, y) in series.c(big_n).iter().zip(base.iter()) {
                oscillation = oscillation.max((x - y).abs());
            }
        }
        steps.push(LadderStep {
            from,
            to,
            difference,
            oscillation,
        });
    }
    let monotone = steps.windows(2).all(|w| w[1].difference <= w[0].difference);
    Ok(ConvergenceReport {
        p,
        steps,
        monotone,
    })
}

/// Kind of operator property that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractKind {
    /// `s_n(1) != 1` on a nonempty sphere.
    Normalization,
    /// `s_n(phi)` has a negative value for `phi >= 0`.
    Positivity,
    /// `||s_n(phi)||_p > ||phi||_p`.
    Contraction,
    /// `sum s_n(phi) nu != sum phi nu`.
    MeanPreservation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractViolation {
    pub trial: usize,
    pub n: usize,
    pub kind: ContractKind,
    pub p: Option<Exponent>,
    /// Amount by which the property is violated.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractReport {
    pub trials: usize,
    pub n_max: usize,
    pub checks: usize,
    /// Smallest `||phi||_p - ||s_n(phi)||_p` seen (negative on violation).
    pub min_contraction_slack: f64,
    pub max_normalization_error: f64,
    pub max_mean_error: f64,
    pub violations: Vec<ContractViolation>,
}

impl ContractReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const NORMALIZATION_TOL: f64 = 1e-12;
pub const CONTRACTION_SLACK: f64 = 1e-12;
pub const MEAN_TOL: f64 = 1e-10;

/// Checks the averaging operators `s_n`, `n <= n_max`, on `trials` random
/// observables drawn from a seeded generator: `s_n(1) = 1` on nonempty
/// spheres, positivity, contraction for `p` in `{1, 2, inf}` and
/// preservation of the mean.
pub fn operator_contract_check(
    act: &FiniteAction,
    g: &LabelledGraph,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> Result<ContractReport, ActionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = act.space();
    let len = space.len();
    let exps = [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity];
    let mut report = ContractReport {
        trials,
        n_max,
        checks: 0,
        min_contraction_slack: f64::INFINITY,
        max_normalization_error: 0.0,
        max_mean_error: 0.0,
        violations: Vec::new(),
    };

    let ones = spherical_averages(act, g, &vec![1.0; len], n_max)?;
    for n in 0..=n_max {
        if ones.is_empty_sphere(n) {
            continue;
        }
        let err = ones.s(n).iter().fold(0.0, |m: f64, v| m.max((v - 1.0).abs()));
        report.checks += 1;
        report.max_normalization_error = report.max_normalization_error.max(err);
        if err > NORMALIZATION_TOL {
            report.violations.push(ContractViolation {
                trial: 0,
                n,
                kind: ContractKind::Normalization,
                p: None,
                excess: err,
            });
        }
    }

    for trial in 0..trials {
        let phi = Observable::random(&mut rng, len, -1.0, 1.0);
        let positive = Observable(phi.iter().map(|v| v.abs()).collect());
        let mean = space.mean(&phi);
        let norms: Vec<f64> = exps
            .iter()
            .map(|&p| lp_norm(space, &phi, p))
            .collect::<Result<_, _>>()?;
        let series = spherical_averages(act, g, &phi, n_max)?;
        let pos_series = spherical_averages(act, g, &positive, n_max)?;
        for n in 0..=n_max {
            if series.is_empty_sphere(n) {
                continue;
            }
            let sn = series.s(n);
            let low = pos_series.s(n).iter().fold(0.0, |m: f64, &v| m.min(v));
            report.checks += 1;
            if low < 0.0 {
                report.violations.push(ContractViolation {
                    trial,
                    n,
                    kind: ContractKind::Positivity,
                    p: None,
                    excess: -low,
                });
            }
            for (&p, &bound) in exps.iter().zip(&norms) {
                let norm = lp_norm(space, sn, p)?;
                let slack = bound - norm;
                report.checks += 1;
                report.min_contraction_slack = report.min_contraction_slack.min(slack);
                if slack < -CONTRACTION_SLACK {
                    report.violations.push(ContractViolation {
                        trial,
                        n,
                        kind: ContractKind::Contraction,
                        p: Some(p),
                        excess: -slack,
                    });
                }
            }
            let err = (space.mean(sn) - mean).abs();
            report.checks += 1;
            report.max_mean_error = report.max_mean_error.max(err);
            if err > MEAN_TOL {
                report.violations.push(ContractViolation {
                    trial,
                    n,
                    kind: ContractKind::MeanPreservation,
                    p: None,
                    excess: err,
                });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub big_n: usize,
    /// `||c_N ∘ T_s - c_N||_1` per symbol of the graph alphabet.
    pub per_symbol: Vec<(String, f64)>,
    pub max: f64,
}

/// How far `c_N(phi)` is from being invariant under the generators. Only a
/// diagnostic: nothing is claimed about the limit.
pub fn invariance_probe(
    series: &AverageSeries,
    act: &FiniteAction,
    g: &LabelledGraph,
    big_n: usize,
) -> Result<InvarianceReport, ActionError> {
    if big_n == 0 || big_n > series.cesaro_len() {
        return Err(ActionError::InsufficientData {
            needed: big_n,
            available: series.cesaro_len(),
        });
    }
    let cn = series.c(big_n);
    let space = act.space();
    let mut per_symbol = Vec::with_capacity(g.alphabet().len());
    for s in g.alphabet() {
        let moved = act
            .compose(cn, s)
            .ok_or_else(|| ActionError::MissingMap(s.clone()))?;
        let d = lp_norm(space, &difference(&moved, cn), Exponent::Finite(1.0))?;
        per_symbol.push((s.clone(), d));
    }
    let max = per_symbol.iter().fold(0.0, |m: f64, (_, d)| m.max(*d));
    Ok(InvarianceReport {
        big_n,
        per_symbol,
        max,
    })
}
