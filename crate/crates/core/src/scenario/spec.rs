use serde::{Deserialize, Serialize};

use crate::grid::SampleIndex;

use super::ScenarioError;

/// Rank of the risky dispersion rows at every sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankProfile {
    /// `min(n_securities − 1, n_factors)`.
    Full,
    Deficient(usize),
    Zero,
}

impl RankProfile {
    pub fn rank(&self, n_risky: usize, n_factors: usize) -> usize {
        match *self {
            Self::Full => n_risky.min(n_factors),
            Self::Deficient(r) => r,
            Self::Zero => 0,
        }
    }
}

/// Perturb the excess drift at `(path, t_index)` by `strength` along a
/// direction outside the column span of `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Injection {
    pub path: usize,
    pub t_index: usize,
    pub strength: f64,
}

impl Injection {
    pub fn index(&self) -> SampleIndex {
        SampleIndex::new(self.path, self.t_index)
    }
}

fn default_horizon() -> f64 {
    1.0
}

fn default_rate_range() -> (f64, f64) {
    (0.0, 0.1)
}

fn default_scale() -> f64 {
    1.0
}

fn default_price_range() -> (f64, f64) {
    (1.0, 100.0)
}

fn default_lambda_bound() -> f64 {
    2.0
}

fn default_rank() -> RankProfile {
    RankProfile::Full
}

/// `n_securities` counts the money market, which is security 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub n_securities: usize,
    pub n_factors: usize,
    pub n_paths: usize,
    pub n_steps: usize,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_rate_range")]
    pub rate_range: (f64, f64),
    #[serde(default = "default_scale")]
    pub dispersion_scale: f64,
    #[serde(default = "default_price_range")]
    pub price_range: (f64, f64),
    /// Planted `λ` entries are drawn from `[−bound, bound]`.
    #[serde(default = "default_lambda_bound")]
    pub lambda_bound: f64,
    #[serde(default = "default_rank")]
    pub rank_profile: RankProfile,
    #[serde(default)]
    pub arbitrage_injection: Vec<Injection>,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioSpec {
    /// Defaults for everything but the grid and the seed.
    pub fn new(n_securities: usize, n_factors: usize, n_paths: usize, n_steps: usize, seed: u64) -> Self {
        Self {
            n_securities,
            n_factors,
            n_paths,
            n_steps,
            horizon: default_horizon(),
            rate_range: default_rate_range(),
            dispersion_scale: default_scale(),
            price_range: default_price_range(),
            lambda_bound: default_lambda_bound(),
            rank_profile: default_rank(),
            arbitrage_injection: Vec::new(),
            seed,
        }
    }

    pub fn with_rank(mut self, rank_profile: RankProfile) -> Self {
        self.rank_profile = rank_profile;
        self
    }

    pub fn with_injections(mut self, injections: Vec<Injection>) -> Self {
        self.arbitrage_injection = injections;
        self
    }

    pub fn n_times(&self) -> usize {
        self.n_steps + 1
    }

    pub fn rank(&self) -> usize {
        self.rank_profile.rank(self.n_securities.saturating_sub(1), self.n_factors)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |msg: String| Err(ScenarioError::InvalidSpec(msg));
        for (name, v) in [
            ("n_securities", self.n_securities),
            ("n_factors", self.n_factors),
            ("n_paths", self.n_paths),
            ("n_steps", self.n_steps),
        ] {
            if v == 0 {
                return bad(format!("{name} must be at least 1"));
            }
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return bad(format!("horizon must be positive, got {}", self.horizon));
        }
        let (lo, hi) = self.rate_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return bad(format!("rate_range [{lo}, {hi}] is not an interval"));
        }
        let (plo, phi) = self.price_range;
        if !(plo.is_finite() && phi.is_finite() && plo > 0.0 && plo <= phi) {
            return bad(format!("price_range [{plo}, {phi}] must be a positive interval"));
        }
        if !(self.dispersion_scale.is_finite() && self.dispersion_scale > 0.0) {
            return bad(format!("dispersion_scale must be positive, got {}", self.dispersion_scale));
        }
        if !(self.lambda_bound.is_finite() && self.lambda_bound >= 0.0) {
            return bad(format!("lambda_bound must be nonnegative, got {}", self.lambda_bound));
        }
        let max_rank = (self.n_securities - 1).min(self.n_factors);
        if let RankProfile::Deficient(r) = self.rank_profile {
            if r > max_rank {
                return bad(format!("rank {r} exceeds min(n_securities - 1, n_factors) = {max_rank}"));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for inj in &self.arbitrage_injection {
            if inj.path >= self.n_paths || inj.t_index > self.n_steps {
                return bad(format!("injection at {} lies off the grid", inj.index()));
            }
            if !(inj.strength.is_finite() && inj.strength > 0.0) {
                return bad(format!("injection strength must be positive, got {}", inj.strength));
            }
            if !seen.insert(inj.index()) {
                return bad(format!("duplicate injection at {}", inj.index()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_json_defaults() {
        let s: ScenarioSpec =
            serde_json::from_str(r#"{"n_securities": 4, "n_factors": 3, "n_paths": 2, "n_steps": 5}"#).unwrap();
        assert_eq!(s, ScenarioSpec::new(4, 3, 2, 5, 0));
        let r: ScenarioSpec = serde_json::from_str(
            r#"{"n_securities": 4, "n_factors": 3, "n_paths": 2, "n_steps": 5,
                "rank_profile": {"deficient": 1}}"#,
        )
        .unwrap();
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn validation() {
        assert!(ScenarioSpec::new(4, 3, 2, 5, 0).validate().is_ok());
        let err = ScenarioSpec::new(0, 3, 2, 5, 0).validate().unwrap_err();
        assert!(err.to_string().contains("n_securities"));
        assert!(ScenarioSpec::new(4, 3, 2, 5, 0)
            .with_rank(RankProfile::Deficient(4))
            .validate()
            .is_err());
        let off_grid = Injection {
            path: 0,
            t_index: 6,
            strength: 1.0,
        };
        assert!(ScenarioSpec::new(4, 3, 2, 5, 0)
            .with_injections(vec![off_grid])
            .validate()
            .is_err());
        let twice = Injection {
            path: 1,
            t_index: 2,
            strength: 1.0,
        };
        assert!(ScenarioSpec::new(4, 3, 2, 5, 0)
            .with_injections(vec![twice, twice])
            .validate()
            .is_err());
    }
}
