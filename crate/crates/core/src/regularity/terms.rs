use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{ln_big, ratio_f64};

/// A finite prefix `x_0 ..= x_{len-1}` of a nonnegative rational sequence,
/// stored as integer numerators over one common denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTerms {
    numer: Vec<BigUint>,
    denom: BigUint,
}

impl ExactTerms {
    pub fn from_integers(values: Vec<BigUint>) -> Self {
        ExactTerms {
            numer: values,
            denom: BigUint::one(),
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_integers(vec![BigUint::zero(); len])
    }

    /// `1, 0, 0, ...`
    pub fn delta(len: usize) -> Self {
        let mut t = Self::zeros(len);
        if len > 0 {
            t.numer[0] = BigUint::one();
        }
        t
    }

    pub fn len(&self) -> usize {
        self.numer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numer.is_empty()
    }

    pub fn numer(&self, n: usize) -> Option<&BigUint> {
        self.numer.get(n)
    }

    pub fn denom(&self) -> &BigUint {
        &self.denom
    }

    pub fn get(&self, n: usize) -> Option<BigRational> {
        self.numer.get(n).map(|x| {
            BigRational::new(
                BigInt::from_biguint(Sign::Plus, x.clone()),
                BigInt::from_biguint(Sign::Plus, self.denom.clone()),
            )
        })
    }

    /// The integer value at `n`, if the sequence is integral there.
    pub fn integer(&self, n: usize) -> Option<BigUint> {
        let x = self.numer.get(n)?;
        let (q, r) = x.div_rem(&self.denom);
        r.is_zero().then_some(q)
    }

    pub fn is_zero_at(&self, n: usize) -> bool {
        self.numer.get(n).is_some_and(|x| x.is_zero())
    }

    pub fn to_f64(&self, n: usize) -> Option<f64> {
        self.numer.get(n).map(|x| ratio_f64(x, &self.denom))
    }

    /// Natural log of the term, `None` when it is zero or out of range.
    pub fn ln(&self, n: usize) -> Option<f64> {
        let x = self.numer.get(n)?;
        if x.is_zero() {
            return None;
        }
        Some(ln_big(x) - ln_big(&self.denom))
    }

    pub fn truncate(&mut self, len: usize) {
        self.numer.truncate(len);
    }

    /// `y_n = x_{n+m}`, reading negative indices as zero.
    pub fn shift(&self, m: i64) -> Self {
        let numer = if m >= 0 {
            self.numer.iter().skip(m as usize).cloned().collect()
        } else {
            let pad = m.unsigned_abs() as usize;
            let mut v = vec![BigUint::zero(); pad];
            v.extend(self.numer.iter().cloned());
            v
        };
        ExactTerms {
            numer,
            denom: self.denom.clone(),
        }
    }

    /// Multiplies every term by a nonnegative rational.
    pub fn scale(&self, factor: &BigRational) -> Self {
        assert!(!factor.is_negative(), "negative scale factor");
        let p = factor.numer().magnitude();
        let q = factor.denom().magnitude();
        ExactTerms {
            numer: self.numer.iter().map(|x| x * p).collect(),
            denom: &self.denom * q,
        }
        .reduced()
    }

    /// Pointwise sum over the common prefix.
    pub fn add(&self, other: &ExactTerms) -> Self {
        let denom = self.denom.lcm(&other.denom);
        let fa = &denom / &self.denom;
        let fb = &denom / &other.denom;
        let numer = self
            .numer
            .iter()
            .zip(&other.numer)
            .map(|(a, b)| a * &fa + b * &fb)
            .collect();
        ExactTerms { numer, denom }.reduced()
    }

    /// Cauchy product `z_n = sum_{k+m=n} x_k y_m` over the common prefix.
    pub fn convolve(&self, other: &ExactTerms) -> Self {
        let len = self.len().min(other.len());
        let mut numer = vec![BigUint::zero(); len];
        for (k, x) in self.numer.iter().take(len).enumerate() {
            if x.is_zero() {
                continue;
            }
            for (m, y) in other.numer.iter().take(len - k).enumerate() {
                if !y.is_zero() {
                    numer[k + m] += x * y;
                }
            }
        }
        ExactTerms {
            numer,
            denom: &self.denom * &other.denom,
        }
        .reduced()
    }

    fn reduced(mut self) -> Self {
        if self.denom.is_one() {
            return self;
        }
        let mut g = self.denom.clone();
        for x in &self.numer {
            if g.is_one() {
                return self;
            }
            g = g.gcd(x);
        }
        if !g.is_one() {
            self.denom /= &g;
            for x in &mut self.numer {
                *x /= &g;
            }
        }
        self
    }
}
