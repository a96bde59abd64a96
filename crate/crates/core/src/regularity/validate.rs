use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{RegularDescriptor, RegularityError, ResidueClass};
use crate::exact::rational_to_f64;

/// Outcome of checking one residue class against the exact terms.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassValidation {
    pub residue: usize,
    pub kind: &'static str,
    /// Largest `|x_n / (a n^b c^n) - 1|` over the window for asymptotic
    /// classes; for vanishing classes 0, or infinity if a term past the
    /// horizon is nonzero.
    pub max_deviation: f64,
    pub worst_index: Option<usize>,
    pub checked: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub n_lo: usize,
    pub n_hi: usize,
    pub tol: f64,
    pub classes: Vec<ClassValidation>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.classes.iter().all(|c| c.pass)
    }

    pub fn max_deviation(&self) -> f64 {
        self.classes
            .iter()
            .map(|c| c.max_deviation)
            .fold(0.0, f64::max)
    }
}

impl RegularDescriptor {
    /// Exact relative deviation `|x_n / (a n^b c^n) - 1|` at `n`; `None` when
    /// the class vanishes or the model is zero there (`n = 0`, `b > 0`).
    pub fn deviation_at(&self, n: usize) -> Result<Option<f64>, RegularityError> {
        let term = self.term(n).ok_or(RegularityError::OracleRangeExceeded {
            needed: n,
            available: self.range(),
        })?;
        match self.class_of(n) {
            ResidueClass::EventuallyZero { .. } => Ok(None),
            ResidueClass::Asymptotic { a, b, c } => {
                let c_pow = num_traits::pow(c.clone(), n);
                Ok(relative_deviation(&term, a, *b, n, &c_pow))
            }
        }
    }

    /// Checks every residue class over `n_lo ..= n_hi` at the given
    /// tolerance, using exact rational arithmetic.
    pub fn validate(
        &self,
        n_lo: usize,
        n_hi: usize,
        tol: f64,
    ) -> Result<ValidationReport, RegularityError> {
        if n_lo > n_hi {
            return Err(RegularityError::EmptyWindow);
        }
        if n_hi >= self.range() {
            return Err(RegularityError::OracleRangeExceeded {
                needed: n_hi,
                available: self.range(),
            });
        }
        let q = self.q();
        let mut classes = Vec::with_capacity(q);
        for (r, cls) in self.classes().iter().enumerate() {
            let first = n_lo + (r + q - n_lo % q) % q;
            let indices = (first..=n_hi).step_by(q);
            let mut out = ClassValidation {
                residue: r,
                kind: cls.kind(),
                max_deviation: 0.0,
                worst_index: None,
                checked: 0,
                pass: true,
            };
            match cls {
                ResidueClass::EventuallyZero { horizon } => {
                    for n in indices.filter(|n| n > horizon) {
                        out.checked += 1;
                        if !self.terms().is_zero_at(n) {
                            out.max_deviation = f64::INFINITY;
                            out.worst_index = Some(n);
                            out.pass = false;
                            break;
                        }
                    }
                }
                ResidueClass::Asymptotic { a, b, c } => {
                    let c_q = num_traits::pow(c.clone(), q);
                    let mut c_pow = num_traits::pow(c.clone(), first);
                    for n in indices {
                        let term = self.term(n).expect("index within range");
                        if let Some(dev) = relative_deviation(&term, a, *b, n, &c_pow) {
                            out.checked += 1;
                            if out.worst_index.is_none() || !(dev <= out.max_deviation) {
                                out.max_deviation = dev;
                                out.worst_index = Some(n);
                            }
                        }
                        c_pow *= &c_q;
                    }
                    out.pass = out.max_deviation <= tol;
                }
            }
            classes.push(out);
        }
        Ok(ValidationReport {
            n_lo,
            n_hi,
            tol,
            classes,
        })
    }
}

fn relative_deviation(
    term: &BigRational,
    a: &BigRational,
    b: u32,
    n: usize,
    c_pow: &BigRational,
) -> Option<f64> {
    let model = a * num_traits::pow(BigRational::from_integer(BigInt::from(n)), b as usize) * c_pow;
    if model.is_zero() {
        return None;
    }
    let dev = (term / model - BigRational::one()).abs();
    Some(rational_to_f64(&dev))
}
