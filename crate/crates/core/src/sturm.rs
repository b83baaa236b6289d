//! Sturm sequences over any [`Scalar`], including interval coefficients.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::{Poly, Scalar};

/// Endpoint of a counting range.
#[derive(Debug, Clone, PartialEq)]
pub enum Bound<T> {
    NegInf,
    PosInf,
    Finite(T),
}

/// Sturm chain `p₀ = p`, `p₁ = p′`, `pᵢ₊₁ = −rem(pᵢ₋₁, pᵢ)`.
#[derive(Debug, Clone)]
pub struct SturmChain<T> {
    pub polys: Vec<Poly<T>>,
}

fn ambiguous() -> Error {
    Error::AmbiguousSign { precision: 0 }
}

impl<T: Scalar> SturmChain<T> {
    /// Builds the chain. With interval coefficients the construction fails
    /// as soon as a leading coefficient straddles zero.
    pub fn new(p: &Poly<T>) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ChainDegenerate("zero polynomial".into()));
        }
        let mut polys = vec![p.clone(), p.derivative()];
        while !polys.last().expect("nonempty").is_zero() {
            let n = polys.len();
            if polys[n - 1].degree() == 0 {
                break;
            }
            let r = polys[n - 2].rem(&polys[n - 1]).ok_or_else(ambiguous)?;
            polys.push(-r);
        }
        if polys.last().is_some_and(|q| q.is_zero()) {
            polys.pop();
        }
        Ok(SturmChain { polys })
    }

    /// Number of sign changes at a bound (zeros skipped).
    pub fn variations(&self, at: &Bound<T>) -> Result<usize> {
        let mut signs = Vec::with_capacity(self.polys.len());
        for q in &self.polys {
            let s = match at {
                Bound::Finite(x) => q.eval(x).sign().ok_or_else(ambiguous)?,
                Bound::PosInf => leading_sign(q)?,
                Bound::NegInf => {
                    let s = leading_sign(q)?;
                    if q.degree() % 2 == 1 {
                        s.reverse()
                    } else {
                        s
                    }
                }
            };
            if s != Ordering::Equal {
                signs.push(s);
            }
        }
        Ok(signs.windows(2).filter(|w| w[0] != w[1]).count())
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count(&self, a: &Bound<T>, b: &Bound<T>) -> Result<usize> {
        let va = self.variations(a)?;
        let vb = self.variations(b)?;
        va.checked_sub(vb).ok_or_else(|| Error::ChainDegenerate("variation count increased".into()))
    }
}

fn leading_sign<T: Scalar>(q: &Poly<T>) -> Result<Ordering> {
    q.leading().map_or(Ok(Ordering::Equal), |c| c.sign().ok_or_else(ambiguous))
}

/// Distinct real roots of `p` in `(a, b]`.
pub fn sturm_root_count<T: Scalar>(p: &Poly<T>, a: &Bound<T>, b: &Bound<T>) -> Result<usize> {
    SturmChain::new(p)?.count(a, b)
}
