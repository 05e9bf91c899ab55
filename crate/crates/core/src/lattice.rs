use num_rational::Rational64;

use crate::error::{Error, Result};

/// Time step `α` and frequency step `β` of the lattice `αℤ × βℤ`.
///
/// Either parameter may carry an exact rational value; density decisions use
/// exact arithmetic whenever both do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    alpha: f64,
    beta: f64,
    exact: Option<(Rational64, Rational64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Density {
    /// `αβ < 1`
    Over,
    /// `αβ = 1`
    Critical,
    /// `αβ > 1`
    Under,
}

impl LatticeParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            alpha,
            beta,
            exact: None,
        })
    }

    pub fn exact(alpha: Rational64, beta: Rational64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if *v.numer() <= 0 || *v.denom() <= 0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            alpha: to_f64(alpha),
            beta: to_f64(beta),
            exact: Some((alpha, beta)),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn exact_values(&self) -> Option<(Rational64, Rational64)> {
        self.exact
    }

    /// `αβ`
    pub fn product(&self) -> f64 {
        match self.exact {
            Some((a, b)) => to_f64(a * b),
            None => self.alpha * self.beta,
        }
    }

    /// Lattice density `(αβ)^{-1}`.
    pub fn density(&self) -> f64 {
        self.product().recip()
    }

    pub fn classify(&self) -> Density {
        match self.exact {
            Some((a, b)) => {
                let p = a * b;
                let one = Rational64::from_integer(1);
                if p < one {
                    Density::Over
                } else if p == one {
                    Density::Critical
                } else {
                    Density::Under
                }
            }
            None => {
                let p = self.alpha * self.beta;
                if p < 1.0 {
                    Density::Over
                } else if p == 1.0 {
                    Density::Critical
                } else {
                    Density::Under
                }
            }
        }
    }

    /// `r = ⌊1/(1 − αβ)⌋`, exact for rational lattices.
    pub fn redundancy_index(&self) -> Result<i64> {
        if self.classify() != Density::Over {
            return Err(Error::Density {
                product: self.product(),
            });
        }
        Ok(match self.exact {
            Some((a, b)) => {
                let q = (Rational64::from_integer(1) - a * b).recip();
                q.floor().to_integer()
            }
            None => floor_snapped(1.0 / (1.0 - self.alpha * self.beta)),
        })
    }

    /// Integer value of `α`, if it is one.
    pub fn integer_alpha(&self) -> Option<i64> {
        match self.exact {
            Some((a, _)) if a.is_integer() => Some(a.to_integer()),
            Some(_) => None,
            None => (self.alpha.fract() == 0.0).then_some(self.alpha as i64),
        }
    }

    /// `M` with `β = 1/M`, if `β` is the reciprocal of an integer.
    pub fn modulation_count(&self) -> Option<i64> {
        match self.exact {
            Some((_, b)) => (*b.numer() == 1).then_some(*b.denom()),
            None => {
                let m = self.beta.recip().round();
                ((1.0 / m) == self.beta).then_some(m as i64)
            }
        }
    }
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Relative distance within which a float is treated as the nearby integer
/// in floor/ceil decisions.
pub const SNAP_RTOL: f64 = 1e-12;

pub(crate) fn snap(z: f64) -> f64 {
    let r = z.round();
    if (z - r).abs() <= SNAP_RTOL * z.abs().max(1.0) {
        r
    } else {
        z
    }
}

pub(crate) fn floor_snapped(z: f64) -> i64 {
    snap(z).floor() as i64
}

pub(crate) fn ceil_snapped(z: f64) -> i64 {
    snap(z).ceil() as i64
}
