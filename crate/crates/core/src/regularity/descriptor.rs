use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::terms::ExactTerms;
use super::{RegularityError, RegularityOptions, ResidueClass};
use crate::exact::{
    beta_integer, f64_to_rational, lcm, rational_pow, rational_to_f64, tidy_constant,
};

/// A regular sequence: period, per-residue classification and the exact
/// prefix of the sequence itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularDescriptor {
    q: usize,
    classes: Vec<ResidueClass>,
    terms: ExactTerms,
    tolerance_resolved: bool,
}

/// Number of admissible indices inspected when estimating the envelope
/// constant behind [`RegularDescriptor::ln_tail_bound`].
const ENVELOPE_WINDOW: usize = 50;

impl RegularDescriptor {
    pub fn new(q: usize, classes: Vec<ResidueClass>, terms: ExactTerms) -> Self {
        assert!(q >= 1, "period must be positive");
        assert_eq!(classes.len(), q, "one class per residue");
        let mut d = RegularDescriptor {
            q,
            classes,
            terms,
            tolerance_resolved: false,
        };
        d.tighten_horizons();
        d
    }

    /// The zero sequence.
    pub fn zero(len: usize) -> Self {
        Self::new(
            1,
            vec![ResidueClass::EventuallyZero { horizon: 0 }],
            ExactTerms::zeros(len),
        )
    }

    /// The sequence `1, 0, 0, ...`, the identity for convolution.
    pub fn delta(len: usize) -> Self {
        Self::new(
            1,
            vec![ResidueClass::EventuallyZero { horizon: 0 }],
            ExactTerms::delta(len),
        )
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn classes(&self) -> &[ResidueClass] {
        &self.classes
    }

    /// Class governing index `n`.
    pub fn class_of(&self, n: usize) -> &ResidueClass {
        &self.classes[n % self.q]
    }

    pub fn terms(&self) -> &ExactTerms {
        &self.terms
    }

    pub fn term(&self, n: usize) -> Option<BigRational> {
        self.terms.get(n)
    }

    /// Number of exact terms available (indices `0..range()`).
    pub fn range(&self) -> usize {
        self.terms.len()
    }

    /// Set when some growth-rate comparison fell inside the tolerance band
    /// without exact equality and was resolved as a tie.
    pub fn is_tolerance_resolved(&self) -> bool {
        self.tolerance_resolved
    }

    pub fn truncated(mut self, len: usize) -> Self {
        self.terms.truncate(len);
        self
    }

    /// `y_n = x_{n+m}`; negative indices read as zero.
    pub fn shift(&self, m: i64) -> Self {
        let q = self.q as i64;
        let classes = (0..q)
            .map(|r| match &self.classes[(r + m).rem_euclid(q) as usize] {
                ResidueClass::EventuallyZero { horizon } => ResidueClass::EventuallyZero {
                    horizon: (*horizon as i64 - m).max(0) as usize,
                },
                ResidueClass::Asymptotic { a, b, c } => ResidueClass::Asymptotic {
                    a: tidy_constant(&(a * rational_pow(c, m))),
                    b: *b,
                    c: c.clone(),
                },
            })
            .collect();
        let mut d = Self::new(self.q, classes, self.terms.shift(m));
        d.tolerance_resolved = self.tolerance_resolved;
        d
    }

    /// Multiplies the sequence by a nonnegative constant.
    pub fn scale(&self, factor: &BigRational) -> Result<Self, RegularityError> {
        if factor.is_negative() {
            return Err(RegularityError::NegativeScale);
        }
        if factor.is_zero() {
            let classes = vec![ResidueClass::EventuallyZero { horizon: 0 }; self.q];
            return Ok(Self::new(self.q, classes, ExactTerms::zeros(self.range())));
        }
        let classes = self
            .classes
            .iter()
            .map(|cls| match cls {
                ResidueClass::Asymptotic { a, b, c } => ResidueClass::Asymptotic {
                    a: tidy_constant(&(a * factor)),
                    b: *b,
                    c: c.clone(),
                },
                ez => ez.clone(),
            })
            .collect();
        let mut d = Self::new(self.q, classes, self.terms.scale(factor));
        d.tolerance_resolved = self.tolerance_resolved;
        Ok(d)
    }

    /// Pointwise sum. Per residue of `lcm(q_F, q_G)` the faster-growing class
    /// wins (larger `c`, then larger `b`); on a tie the constants `a` add.
    pub fn sum(&self, other: &RegularDescriptor, opts: &RegularityOptions) -> Self {
        let q = lcm(self.q, other.q);
        let mut resolved = self.tolerance_resolved || other.tolerance_resolved;
        let classes = (0..q)
            .map(|r| {
                let (cls, band) = sum_classes(
                    &self.classes[r % self.q],
                    &other.classes[r % other.q],
                    opts.radius_band,
                );
                resolved |= band;
                cls
            })
            .collect();
        let mut d = Self::new(q, classes, self.terms.add(&other.terms));
        d.tolerance_resolved = resolved;
        d
    }

    /// Cauchy convolution `h_n = sum_{k+m=n} f_k g_m`.
    ///
    /// Works per residue pair `(r', r'')` modulo `q = lcm(q_F, q_G)`. When one
    /// side grows strictly faster (rate `c_D`, constant `a_D`), the result
    /// keeps its `b` and `c` and gets `a = a_D * sum_m g_m c_D^(-m)` over the
    /// other side's indices in its residue; an eventually vanishing side makes
    /// that sum finite. Equal rates give `a = a_F a_G B(b_F+1, b_G+1) / q` and
    /// `b = b_F + b_G + 1`; the `1/q` accounts for only one index in `q`
    /// contributing to each pair.
    pub fn convolve(
        &self,
        other: &RegularDescriptor,
        opts: &RegularityOptions,
    ) -> Result<Self, RegularityError> {
        let q = lcm(self.q, other.q);
        let mut resolved = self.tolerance_resolved || other.tolerance_resolved;
        let mut classes = Vec::with_capacity(q);
        for r in 0..q {
            let mut acc: Option<ResidueClass> = None;
            for r1 in 0..q {
                let r2 = (r + q - r1) % q;
                let (piece, band) = pair_contribution(self, r1, other, r2, q, opts)?;
                resolved |= band;
                acc = match (acc, piece) {
                    (None, p) => p,
                    (a, None) => a,
                    (Some(x), Some(y)) => {
                        let (cls, band) = sum_classes(&x, &y, opts.radius_band);
                        resolved |= band;
                        Some(cls)
                    }
                };
            }
            classes.push(acc.unwrap_or(ResidueClass::EventuallyZero { horizon: 0 }));
        }
        let mut d = Self::new(q, classes, self.terms.convolve(&other.terms));
        d.tolerance_resolved = resolved;
        Ok(d)
    }

    /// Natural log of an upper bound for the term at `n` (meant for indices
    /// beyond the exact range), or `None` when the term is known to vanish.
    /// For asymptotic classes the bound is `2 K a n^b c^n`, with `K` the
    /// largest observed ratio of exact term to model over the last
    /// admissible indices.
    pub fn ln_tail_bound(&self, n: usize) -> Option<f64> {
        match self.class_of(n) {
            ResidueClass::EventuallyZero { horizon } => {
                if n > *horizon {
                    None
                } else {
                    Some(f64::INFINITY)
                }
            }
            ResidueClass::Asymptotic { a, b, c } => {
                let ln_model = |m: usize| {
                    libm::log(rational_to_f64(a))
                        + *b as f64 * libm::log(m as f64)
                        + m as f64 * libm::log(rational_to_f64(c))
                };
                let r = n % self.q;
                let mut k_ln = 0.0f64;
                let mut seen = 0usize;
                let mut idx = self.range().checked_sub(1)?;
                loop {
                    if idx % self.q == r && idx >= 1 {
                        if let Some(t) = self.terms.ln(idx) {
                            k_ln = k_ln.max(t - ln_model(idx));
                        }
                        seen += 1;
                        if seen >= ENVELOPE_WINDOW {
                            break;
                        }
                    }
                    if idx == 0 {
                        break;
                    }
                    idx -= 1;
                }
                Some(k_ln + core::f64::consts::LN_2 + ln_model(n.max(1)))
            }
        }
    }

    fn tighten_horizons(&mut self) {
        let len = self.terms.len();
        for r in 0..self.q {
            if let ResidueClass::EventuallyZero { horizon } = &mut self.classes[r] {
                if *horizon >= len {
                    continue;
                }
                let last = (0..=*horizon)
                    .rev()
                    .find(|&n| n % self.q == r && !self.terms.is_zero_at(n));
                *horizon = last.unwrap_or(0);
            }
        }
    }

    /// True when some term in residue `r` (mod `q`, a multiple of this
    /// descriptor's period) up to `upto` is nonzero.
    fn any_nonzero(&self, r: usize, q: usize, upto: usize) -> bool {
        (r..=upto.min(self.range().saturating_sub(1)))
            .step_by(q)
            .any(|n| !self.terms.is_zero_at(n))
    }
}

/// Compares growth `(c, b)` pairs; `c` values within the relative band are
/// treated as equal. The flag reports a band decision on unequal values.
fn compare_growth(
    c1: &BigRational,
    b1: u32,
    c2: &BigRational,
    b2: u32,
    band: f64,
) -> (Ordering, bool) {
    let (ord_c, resolved) = compare_radius(c1, c2, band);
    match ord_c {
        Ordering::Equal => (b1.cmp(&b2), resolved),
        o => (o, false),
    }
}

pub(crate) fn compare_radius(c1: &BigRational, c2: &BigRational, band: f64) -> (Ordering, bool) {
    if c1 == c2 {
        return (Ordering::Equal, false);
    }
    let (x, y) = (rational_to_f64(c1), rational_to_f64(c2));
    if (x - y).abs() <= band * x.max(y) {
        (Ordering::Equal, true)
    } else {
        (c1.cmp(c2), false)
    }
}

fn sum_classes(f: &ResidueClass, g: &ResidueClass, band: f64) -> (ResidueClass, bool) {
    use ResidueClass::*;
    match (f, g) {
        (EventuallyZero { horizon: h1 }, EventuallyZero { horizon: h2 }) => (
            EventuallyZero {
                horizon: *h1.max(h2),
            },
            false,
        ),
        (EventuallyZero { .. }, a @ Asymptotic { .. }) | (a @ Asymptotic { .. }, EventuallyZero { .. }) => {
            (a.clone(), false)
        }
        (
            Asymptotic {
                a: a1,
                b: b1,
                c: c1,
            },
            Asymptotic {
                a: a2,
                b: b2,
                c: c2,
            },
        ) => match compare_growth(c1, *b1, c2, *b2, band) {
            (Ordering::Greater, _) => (f.clone(), false),
            (Ordering::Less, _) => (g.clone(), false),
            (Ordering::Equal, resolved) => (
                Asymptotic {
                    a: tidy_constant(&(a1 + a2)),
                    b: *b1,
                    c: c1.max(c2).clone(),
                },
                resolved,
            ),
        },
    }
}

/// Contribution of residue `r1` of `f` and residue `r2` of `g` to the
/// convolution; `None` when that partial sum vanishes identically.
fn pair_contribution(
    f: &RegularDescriptor,
    r1: usize,
    g: &RegularDescriptor,
    r2: usize,
    q: usize,
    opts: &RegularityOptions,
) -> Result<(Option<ResidueClass>, bool), RegularityError> {
    use ResidueClass::*;
    match (&f.classes[r1 % f.q], &g.classes[r2 % g.q]) {
        (EventuallyZero { horizon: h1 }, EventuallyZero { horizon: h2 }) => {
            let live = f.any_nonzero(r1, q, *h1) && g.any_nonzero(r2, q, *h2);
            Ok((live.then_some(EventuallyZero { horizon: h1 + h2 }), false))
        }
        (Asymptotic { a, b, c }, EventuallyZero { horizon }) => {
            let w = weighted_sum(g, r2, q, c, Some(*horizon), opts)?;
            Ok((dominated(a, *b, c, &w), false))
        }
        (EventuallyZero { horizon }, Asymptotic { a, b, c }) => {
            let w = weighted_sum(f, r1, q, c, Some(*horizon), opts)?;
            Ok((dominated(a, *b, c, &w), false))
        }
        (
            Asymptotic {
                a: a1,
                b: b1,
                c: c1,
            },
            Asymptotic {
                a: a2,
                b: b2,
                c: c2,
            },
        ) => match compare_radius(c1, c2, opts.radius_band) {
            (Ordering::Greater, _) => {
                let w = weighted_sum(g, r2, q, c1, None, opts)?;
                Ok((dominated(a1, *b1, c1, &w), false))
            }
            (Ordering::Less, _) => {
                let w = weighted_sum(f, r1, q, c2, None, opts)?;
                Ok((dominated(a2, *b2, c2, &w), false))
            }
            (Ordering::Equal, resolved) => {
                let beta = beta_integer(*b1, *b2);
                let qr = BigRational::from_integer(BigInt::from(q));
                Ok((
                    Some(Asymptotic {
                        a: tidy_constant(&(a1 * a2 * beta / qr)),
                        b: b1 + b2 + 1,
                        c: c1.max(c2).clone(),
                    }),
                    resolved,
                ))
            }
        },
    }
}

fn dominated(a: &BigRational, b: u32, c: &BigRational, w: &BigRational) -> Option<ResidueClass> {
    (!w.is_zero()).then(|| ResidueClass::Asymptotic {
        a: tidy_constant(&(a * w)),
        b,
        c: c.clone(),
    })
}

/// Rationals small enough for exact series arithmetic; rounded `f64`
/// radii carry denominators near `2^52` and go through logarithms.
fn is_small(c: &BigRational) -> bool {
    c.numer().bits() <= 64 && c.denom().bits() <= 20
}

/// `sum_{m ≡ r (mod q)} x_m c^(-m)` for the sequence of `d`. With `finite`
/// the sum stops at that horizon; otherwise it runs over all exact terms and
/// the remainder is bounded through [`RegularDescriptor::ln_tail_bound`].
fn weighted_sum(
    d: &RegularDescriptor,
    r: usize,
    q: usize,
    c: &BigRational,
    finite: Option<usize>,
    opts: &RegularityOptions,
) -> Result<BigRational, RegularityError> {
    let available = d.range();
    let upto = match finite {
        Some(h) => {
            if h >= available {
                return Err(RegularityError::OracleRangeExceeded {
                    needed: h,
                    available,
                });
            }
            h
        }
        None => available.checked_sub(1).ok_or(RegularityError::OracleRangeExceeded {
            needed: 0,
            available,
        })?,
    };

    let partial = if is_small(c) {
        exact_weighted_sum(d.terms(), r, q, c, upto)
    } else {
        let ln_c = libm::log(rational_to_f64(c));
        let s: f64 = (r..=upto)
            .step_by(q)
            .filter_map(|m| d.terms().ln(m).map(|t| libm::exp(t - m as f64 * ln_c)))
            .sum();
        f64_to_rational(s)
    };

    if finite.is_none() {
        let ln_c = libm::log(rational_to_f64(c));
        // first index past the exact range that lies in residue r
        let m0 = upto + 1 + (r + q - (upto + 1) % q) % q;
        if let Some(ln_first) = d.ln_tail_bound(m0) {
            let (b_o, c_o) = match d.class_of(m0) {
                ResidueClass::Asymptotic { b, c, .. } => (*b, rational_to_f64(c)),
                ResidueClass::EventuallyZero { .. } => (0, 0.0),
            };
            let growth = libm::pow((m0 as f64 + 1.0) / m0 as f64, b_o as f64);
            let ratio = c_o / rational_to_f64(c) * growth;
            if ratio >= 1.0 {
                return Err(RegularityError::SeriesNotCertified { ratio });
            }
            let tail = libm::exp(ln_first - m0 as f64 * ln_c) / (1.0 - ratio);
            let p = rational_to_f64(&partial);
            if !(tail <= opts.tol * p) {
                return Err(RegularityError::SeriesNotCertified { ratio });
            }
        }
    }
    Ok(partial)
}

/// Integer Horner evaluation of `sum_{m ≡ r, m <= upto} x_m c^(-m)` with
/// `c = num/den`.
fn exact_weighted_sum(
    terms: &ExactTerms,
    r: usize,
    q: usize,
    c: &BigRational,
    upto: usize,
) -> BigRational {
    let num = c.numer().magnitude().clone();
    let den = c.denom().magnitude().clone();
    let mut acc = BigUint::zero();
    let mut den_pow = BigUint::one();
    for m in 0..=upto {
        if m > 0 {
            acc *= &num;
            den_pow *= &den;
        }
        if m % q == r {
            if let Some(x) = terms.numer(m) {
                if !x.is_zero() {
                    acc += x * &den_pow;
                }
            }
        }
    }
    let scale = num_traits::pow(num, upto) * terms.denom();
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, acc),
        BigInt::from_biguint(Sign::Plus, scale),
    )
}
