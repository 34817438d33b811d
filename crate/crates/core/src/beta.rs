//! Augmented Beta PDFs and their bijection with opinions.
//!
//! `phi(r, s, a)` is the Beta density with `alpha = r + 2a` and
//! `beta = s + 2(1 - a)`: `r` and `s` count positive and negative evidence,
//! `a` is the prior base rate. The constant 2 is the non-informative prior
//! weight of a binary frame.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::opinion::Opinion;

/// Non-informative prior weight for a binary frame.
pub const PRIOR_WEIGHT: f64 = 2.0;

/// Uncertainty at or below which an opinion counts as dogmatic.
pub const EPS_DOGMATIC: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BetaError {
    #[error("invalid augmented beta (r={r}, s={s}, a={a})")]
    InvalidParameters { r: f64, s: f64, a: f64 },
    #[error("invalid beta shape (alpha={alpha}, beta={beta}): both must be positive")]
    InvalidShape { alpha: f64, beta: f64 },
    #[error("shape parameter would be zero (r={r}, s={s}, a={a})")]
    ZeroShapeParameter { r: f64, s: f64, a: f64 },
    #[error("dogmatic opinion (u={u}) has no beta equivalent")]
    DogmaticOpinion { u: f64 },
    #[error("density is singular at p={p} for alpha={alpha}, beta={beta}")]
    SingularEndpoint { p: f64, alpha: f64, beta: f64 },
    #[error("p={0} is outside [0, 1]")]
    OutOfDomain(f64),
    #[error("grid needs at least 2 points, got {0}")]
    GridTooSmall(usize),
}

/// Evidence pair `(r, s)` plus prior base rate `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AugmentedBeta {
    r: f64,
    s: f64,
    a: f64,
}

impl AugmentedBeta {
    pub fn new(r: f64, s: f64, a: f64) -> Result<Self, BetaError> {
        let ok = r.is_finite() && s.is_finite() && r >= 0.0 && s >= 0.0 && (0.0..=1.0).contains(&a);
        if !ok {
            return Err(BetaError::InvalidParameters { r, s, a });
        }
        Ok(Self { r, s, a })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn to_shape(&self) -> Result<BetaShape, BetaError> {
        let alpha = self.r + PRIOR_WEIGHT * self.a;
        let beta = self.s + PRIOR_WEIGHT * (1.0 - self.a);
        if alpha <= 0.0 || beta <= 0.0 {
            return Err(BetaError::ZeroShapeParameter {
                r: self.r,
                s: self.s,
                a: self.a,
            });
        }
        Ok(BetaShape { alpha, beta })
    }

    /// `(r + 2a) / (r + s + 2)`.
    pub fn expectation(&self) -> f64 {
        (self.r + PRIOR_WEIGHT * self.a) / (self.r + self.s + PRIOR_WEIGHT)
    }

    pub fn to_opinion(&self) -> Opinion {
        let total = self.r + self.s + PRIOR_WEIGHT;
        let b = self.r / total;
        let d = self.s / total;
        let u = PRIOR_WEIGHT / total;
        Opinion::from_parts_unchecked(b, d, u, self.a)
    }

    /// Inverse of [`to_opinion`](Self::to_opinion); fails for dogmatic
    /// opinions, where the evidence counts diverge.
    pub fn from_opinion(w: &Opinion) -> Result<Self, BetaError> {
        if w.u() <= EPS_DOGMATIC {
            return Err(BetaError::DogmaticOpinion { u: w.u() });
        }
        Ok(Self {
            r: PRIOR_WEIGHT * w.b() / w.u(),
            s: PRIOR_WEIGHT * w.d() / w.u(),
            a: w.a(),
        })
    }
}

pub fn opinion_to_beta(w: &Opinion) -> Result<AugmentedBeta, BetaError> {
    AugmentedBeta::from_opinion(w)
}

pub fn beta_to_opinion(ab: &AugmentedBeta) -> Opinion {
    ab.to_opinion()
}

/// Standard Beta shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaShape {
    alpha: f64,
    beta: f64,
}

impl BetaShape {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, BetaError> {
        if !(alpha.is_finite() && beta.is_finite() && alpha > 0.0 && beta > 0.0) {
            return Err(BetaError::InvalidShape { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    pub fn variance(&self) -> f64 {
        let s = self.alpha + self.beta;
        self.alpha * self.beta / (s * s * (s + 1.0))
    }

    fn ln_norm(&self) -> f64 {
        ln_gamma(self.alpha + self.beta) - ln_gamma(self.alpha) - ln_gamma(self.beta)
    }

    /// Density at `p`, evaluated in log space.
    pub fn pdf(&self, p: f64) -> Result<f64, BetaError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(BetaError::OutOfDomain(p));
        }
        let singular = (p == 0.0 && self.alpha < 1.0) || (p == 1.0 && self.beta < 1.0);
        if singular {
            return Err(BetaError::SingularEndpoint {
                p,
                alpha: self.alpha,
                beta: self.beta,
            });
        }
        // 0 * ln(0) is taken as 0 so beta(1, .) and beta(., 1) are finite
        // at the endpoints.
        let log_term = |exponent: f64, base: f64| {
            if exponent == 0.0 {
                0.0
            } else {
                exponent * base.ln()
            }
        };
        let ln_pdf =
            self.ln_norm() + log_term(self.alpha - 1.0, p) + log_term(self.beta - 1.0, 1.0 - p);
        Ok(ln_pdf.exp())
    }

    /// `n` evenly spaced samples of the density on `[0, 1]`. A singular
    /// endpoint takes the value of its nearest interior grid point and is
    /// flagged as substituted.
    pub fn grid(&self, n: usize) -> Result<Vec<GridPoint>, BetaError> {
        if n < 2 {
            return Err(BetaError::GridTooSmall(n));
        }
        let step = 1.0 / (n - 1) as f64;
        let ps: Vec<f64> = (0..n)
            .map(|i| if i == n - 1 { 1.0 } else { i as f64 * step })
            .collect();
        let mut points = Vec::with_capacity(n);
        for (i, &p) in ps.iter().enumerate() {
            let point = match self.pdf(p) {
                Ok(density) => GridPoint {
                    p,
                    density,
                    substituted: false,
                },
                Err(BetaError::SingularEndpoint { .. }) => {
                    let neighbour = if i == 0 { ps[1] } else { ps[n - 2] };
                    // with n = 2 the neighbour is the other endpoint, which
                    // may be singular too
                    let density = self.pdf(neighbour).unwrap_or(f64::INFINITY);
                    GridPoint {
                        p,
                        density,
                        substituted: true,
                    }
                }
                Err(e) => return Err(e),
            };
            points.push(point);
        }
        Ok(points)
    }

    /// One draw `g1 / (g1 + g2)` with `g1 ~ Gamma(alpha)`, `g2 ~ Gamma(beta)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g1 = Gamma::new(self.alpha, 1.0).expect("alpha > 0").sample(rng);
        let g2 = Gamma::new(self.beta, 1.0).expect("beta > 0").sample(rng);
        let total = g1 + g2;
        if total > 0.0 {
            g1 / total
        } else {
            // both gammas underflowed; only reachable for tiny shapes
            self.mean()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub p: f64,
    pub density: f64,
    pub substituted: bool,
}

pub fn pdf_eval(shape: &BetaShape, p: f64) -> Result<f64, BetaError> {
    shape.pdf(p)
}

pub fn pdf_grid(shape: &BetaShape, n: usize) -> Result<Vec<GridPoint>, BetaError> {
    shape.grid(n)
}
