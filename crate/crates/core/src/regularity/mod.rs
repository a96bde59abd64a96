//! Regular sequences: classification of nonnegative sequences by a period
//! `q` and, per residue class modulo `q`, either eventual vanishing or an
//! asymptotic law `x_n ~ a * n^b * c^n`.
//!
//! Constants are stored in the absolute-index convention
//! `x_n / (a * n^b * c^n) -> 1` along `n ≡ r (mod q)`. The alternative
//! convention along `n = q*k + r` with `a' * k^b * c'^k` is related by
//! `c' = c^q` and `a' = a * q^b * c^r` (see [`ResidueClass::to_step_convention`]).
//!
//! Descriptors for path counts are built bottom-up over the condensation of
//! a graph: strongly connected blocks are handled by Perron–Frobenius
//! ([`perron`]), and composite graphs by shifting, scaling, summing and
//! convolving descriptors across a cut with no back arcs ([`analysis`]).
//! Every descriptor carries the exact prefix of the sequence it describes,
//! so the asymptotic claims can be checked against exact integers
//! ([`RegularDescriptor::validate`]).

mod analysis;
mod descriptor;
pub mod perron;
mod terms;
mod validate;

use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub use analysis::{descriptor_of_pair, descriptor_of_spheres, Analyzer};
pub use descriptor::RegularDescriptor;
pub use perron::{perron_analyze, scc_period, PerronData};
pub use terms::ExactTerms;
pub use validate::{ClassValidation, ValidationReport};

use crate::exact::{f64_to_rational, rational_to_f64};

/// Default tolerance for the eigenvalue iteration and series truncation.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default number of exact terms kept by descriptors (indices `0..=range`).
pub const DEFAULT_RANGE: usize = 400;
/// Relative band inside which two growth rates are treated as equal.
pub const DEFAULT_RADIUS_BAND: f64 = 1e-6;
pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;
/// Number of admissible indices averaged for Perron coefficients.
pub const DEFAULT_RATIO_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityOptions {
    pub tol: f64,
    pub range: usize,
    pub radius_band: f64,
    pub max_iterations: usize,
    pub ratio_window: usize,
}

impl Default for RegularityOptions {
    fn default() -> Self {
        RegularityOptions {
            tol: DEFAULT_TOL,
            range: DEFAULT_RANGE,
            radius_band: DEFAULT_RADIUS_BAND,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            ratio_window: DEFAULT_RATIO_WINDOW,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegularityError {
    NoArcs,
    NotStronglyConnected,
    NonConvergence { iterations: usize },
    /// A dominance series could not be truncated within tolerance: the two
    /// growth rates are too close for the available exact terms.
    SeriesNotCertified { ratio: f64 },
    OracleRangeExceeded { needed: usize, available: usize },
    NegativeScale,
    NoStartVertex,
    VertexOutOfRange(usize),
    EmptyWindow,
}

impl fmt::Display for RegularityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegularityError::NoArcs => write!(f, "component has no arcs"),
            RegularityError::NotStronglyConnected => {
                write!(f, "vertex set is not strongly connected")
            }
            RegularityError::NonConvergence { iterations } => write!(
                f,
                "spectral radius iteration did not converge within {iterations} iterations"
            ),
            RegularityError::SeriesNotCertified { ratio } => write!(
                f,
                "dominance series not certified (growth ratio {ratio}); radii too close for the term range"
            ),
            RegularityError::OracleRangeExceeded { needed, available } => write!(
                f,
                "exact terms needed up to index {needed} but only {available} are available"
            ),
            RegularityError::NegativeScale => write!(f, "scale factor must be nonnegative"),
            RegularityError::NoStartVertex => write!(f, "no start vertex"),
            RegularityError::VertexOutOfRange(v) => write!(f, "vertex index {v} out of range"),
            RegularityError::EmptyWindow => write!(f, "validation window is empty"),
        }
    }
}

impl core::error::Error for RegularityError {}

/// Behaviour of one residue class `n ≡ r (mod q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueClass {
    /// All terms with index greater than `horizon` vanish.
    EventuallyZero { horizon: usize },
    /// `x_n / (a * n^b * c^n) -> 1` along the class; `a > 0`, `c >= 1`.
    Asymptotic {
        a: BigRational,
        b: u32,
        c: BigRational,
    },
}

impl ResidueClass {
    pub fn kind(&self) -> &'static str {
        match self {
            ResidueClass::EventuallyZero { .. } => "EventuallyZero",
            ResidueClass::Asymptotic { .. } => "Asymptotic",
        }
    }

    pub fn is_asymptotic(&self) -> bool {
        matches!(self, ResidueClass::Asymptotic { .. })
    }

    /// `(a, b, c)` as floats, for asymptotic classes.
    pub fn constants_f64(&self) -> Option<(f64, u32, f64)> {
        match self {
            ResidueClass::Asymptotic { a, b, c } => {
                Some((rational_to_f64(a), *b, rational_to_f64(c)))
            }
            ResidueClass::EventuallyZero { .. } => None,
        }
    }

    /// Constants of the same class in the step convention
    /// `x_{qk+r} / (a' k^b c'^k) -> 1`: `a' = a q^b c^r`, `c' = c^q`.
    /// `c^q` is only exact when `c` is; otherwise it is rounded.
    pub fn to_step_convention(&self, q: usize, r: usize) -> Option<(BigRational, u32, BigRational)> {
        match self {
            ResidueClass::Asymptotic { a, b, c } => {
                let qb = num_traits::pow(BigRational::from_integer(BigInt::from(q)), *b as usize);
                let cr = num_traits::pow(c.clone(), r);
                let cq = num_traits::pow(c.clone(), q);
                let cq = if c.denom().is_one() {
                    cq
                } else {
                    f64_to_rational(rational_to_f64(&cq))
                };
                Some((a * qb * cr, *b, cq))
            }
            ResidueClass::EventuallyZero { .. } => None,
        }
    }
}

/// Renders a constant: integers and small-denominator fractions exactly,
/// everything else as the shortest round-tripping `f64`.
pub fn format_constant(x: &BigRational) -> String {
    use alloc::string::ToString;
    if x.denom().is_one() {
        return x.numer().to_string();
    }
    if *x.denom() <= BigInt::from(crate::exact::SNAP_MAX_DENOMINATOR) {
        return alloc::format!("{}/{}", x.numer(), x.denom());
    }
    let v = rational_to_f64(x);
    alloc::format!("{v:?}")
}
