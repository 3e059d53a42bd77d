use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::Layer;

/// Relative tolerance for `beta11 * beta22 = alpha^2 * beta12 * beta21`.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-12;

/// Infection and recovery rates for two coupled layers.
///
/// `beta_mn` is the rate at which a susceptible node of layer `m` is infected
/// by one infected neighbor in layer `n`. Every node recovers at rate `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpidemicParams {
    pub beta11: f64,
    pub beta12: f64,
    pub beta21: f64,
    pub beta22: f64,
    pub mu: f64,
    pub alpha: f64,
}

impl Default for EpidemicParams {
    fn default() -> Self {
        EpidemicParams {
            beta11: 0.0,
            beta12: 0.0,
            beta21: 0.0,
            beta22: 0.0,
            mu: 1.0,
            alpha: 1.0,
        }
    }
}

impl EpidemicParams {
    /// Rates tied by the coupling constraint: `beta12 = beta21 =
    /// sqrt(beta11 * beta22) / alpha`.
    pub fn constrained(beta11: f64, beta22: f64, alpha: f64, mu: f64) -> Result<Self> {
        let cross = (beta11 * beta22).sqrt() / alpha;
        let p = EpidemicParams {
            beta11,
            beta12: cross,
            beta21: cross,
            beta22,
            mu,
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    /// Constrained rates from normalized strengths `tau1 = tau11 * lambda1`
    /// and `tau2 = tau22 * lambda2`, with `tau = beta / mu`.
    pub fn from_normalized(
        tau1: f64,
        tau2: f64,
        lambda1: f64,
        lambda2: f64,
        alpha: f64,
        mu: f64,
    ) -> Result<Self> {
        if lambda1 <= 0.0 || lambda2 <= 0.0 {
            return Err(Error::param(
                "lambda",
                "normalization needs layers with positive spectral radius",
            ));
        }
        Self::constrained(mu * tau1 / lambda1, mu * tau2 / lambda2, alpha, mu)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("beta11", self.beta11),
            ("beta12", self.beta12),
            ("beta21", self.beta21),
            ("beta22", self.beta22),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("rate {v} must be finite and >= 0")));
            }
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::param(
                "mu",
                format!("recovery rate {} must be > 0", self.mu),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::param(
                "alpha",
                format!("coupling constant {} must be > 0", self.alpha),
            ));
        }
        Ok(())
    }

    /// Checks `beta11 * beta22 = alpha^2 * beta12 * beta21` to
    /// [`CONSTRAINT_TOLERANCE`].
    pub fn check_constraint(&self) -> Result<()> {
        let lhs = self.beta11 * self.beta22;
        let rhs = self.alpha * self.alpha * self.beta12 * self.beta21;
        let scale = lhs.abs().max(rhs.abs());
        if (lhs - rhs).abs() <= CONSTRAINT_TOLERANCE * scale {
            Ok(())
        } else {
            Err(Error::param(
                "alpha",
                format!("beta11*beta22 = {lhs} but alpha^2*beta12*beta21 = {rhs}"),
            ))
        }
    }

    /// Infection rate of a susceptible node in `target` per infected neighbor
    /// in `source`.
    pub fn beta(&self, target: Layer, source: Layer) -> f64 {
        match (target, source) {
            (Layer::One, Layer::One) => self.beta11,
            (Layer::One, Layer::Two) => self.beta12,
            (Layer::Two, Layer::One) => self.beta21,
            (Layer::Two, Layer::Two) => self.beta22,
        }
    }

    /// Effective strengths `tau_mn = beta_mn / mu` as `[[t11, t12], [t21, t22]]`.
    pub fn taus(&self) -> [[f64; 2]; 2] {
        [
            [self.beta11 / self.mu, self.beta12 / self.mu],
            [self.beta21 / self.mu, self.beta22 / self.mu],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constrained_rates_satisfy_constraint() {
        let p = EpidemicParams::constrained(0.3, 0.7, 1.7, 2.0).unwrap();
        p.check_constraint().unwrap();
        assert_eq!(p.beta12, p.beta21);
        let mut off = p;
        off.beta12 *= 1.0 + 1e-9;
        assert!(off.check_constraint().is_err());
    }

    #[test]
    fn validation_names_the_field() {
        let p = EpidemicParams {
            mu: 0.0,
            ..Default::default()
        };
        let msg = p.validate().unwrap_err().to_string();
        assert!(msg.contains("`mu`"), "{msg}");
        let p = EpidemicParams {
            beta21: -1.0,
            ..Default::default()
        };
        assert!(p.validate().unwrap_err().to_string().contains("beta21"));
        let p = EpidemicParams {
            alpha: 0.0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn normalized_strengths() {
        let p = EpidemicParams::from_normalized(0.4, 0.4, 20.0, 4.0, 1.0, 1.0).unwrap();
        assert!((p.beta11 - 0.02).abs() < 1e-15);
        assert!((p.beta22 - 0.1).abs() < 1e-15);
        assert!((p.beta12 - (0.002f64).sqrt()).abs() < 1e-15);
    }
}
