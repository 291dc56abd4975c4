use crate::grid::{Grid, SampleIndex};

use super::{nearly_equal, Location, MarketError, MarketSample};

/// Grid of market samples over `n_paths` paths and a shared time grid.
///
/// Immutable after construction; all invariants are checked in
/// [`MarketModel::new`].
/// `(times, samples, money_market_index, dW, seed)`
pub type ModelParts = (Vec<f64>, Grid<MarketSample>, usize, Option<Grid<Vec<f64>>>, Option<u64>);

#[derive(Debug, Clone, PartialEq)]
pub struct MarketModel {
    n_securities: usize,
    n_factors: usize,
    times: Vec<f64>,
    samples: Grid<MarketSample>,
    money_market_index: usize,
    wiener_increments: Option<Grid<Vec<f64>>>,
    seed: Option<u64>,
}

impl MarketModel {
    /// Validates and assembles a model.
    ///
    /// `wiener_increments`, when present, is a `n_paths × n_steps` grid of
    /// length-`K` vectors and marks the model as carrying realized paths.
    pub fn new(
        times: Vec<f64>,
        samples: Grid<MarketSample>,
        money_market_index: usize,
        wiener_increments: Option<Grid<Vec<f64>>>,
        seed: Option<u64>,
    ) -> Result<Self, MarketError> {
        if samples.n_paths() == 0 {
            return Err(MarketError::invariant(
                Location::field("n_paths"),
                "at least one path is required",
            ));
        }
        if times.len() != samples.n_times() {
            return Err(MarketError::shape(
                Location::field("times"),
                samples.n_times(),
                times.len(),
            ));
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(MarketError::invariant(
                Location::field("times"),
                "times must be finite and strictly increasing",
            ));
        }
        let first = samples.at(0, 0);
        let n_securities = first.n_securities();
        let n_factors = first.n_factors();
        for (idx, s) in samples.iter() {
            if s.n_securities() != n_securities {
                return Err(MarketError::shape(
                    Location::sample(idx, "S"),
                    n_securities,
                    s.n_securities(),
                ));
            }
            if s.n_factors() != n_factors {
                return Err(MarketError::shape(
                    Location::sample(idx, "sigma"),
                    n_securities * n_factors,
                    s.n_securities() * s.n_factors(),
                ));
            }
            s.validate(money_market_index).map_err(|e| e.at(idx))?;
            if idx.t_index == 0 && s.cum_dividends.iter().any(|d| *d != 0.0) {
                return Err(MarketError::invariant(
                    Location::sample(idx, "D"),
                    "cumulative dividends must start at zero",
                ));
            }
            if idx.t_index > 0 {
                let prev = samples.at(idx.path, idx.t_index - 1);
                let dt = times[idx.t_index] - times[idx.t_index - 1];
                let expected = prev.deflator * (prev.short_rate * dt).exp();
                if !nearly_equal(s.deflator, expected) {
                    return Err(MarketError::invariant(
                        Location::sample(idx, "M"),
                        format!(
                            "deflator {} breaks the recursion M_k·exp(r_k·Δt) = {expected}",
                            s.deflator
                        ),
                    ));
                }
            }
        }
        if let Some(dw) = &wiener_increments {
            let n_steps = times.len() - 1;
            if dw.n_paths() != samples.n_paths() || dw.n_times() != n_steps {
                return Err(MarketError::shape(
                    Location::field("dW"),
                    samples.n_paths() * n_steps,
                    dw.n_paths() * dw.n_times(),
                ));
            }
            for (idx, inc) in dw.iter() {
                if inc.len() != n_factors {
                    return Err(MarketError::shape(
                        Location::sample(idx, "dW"),
                        n_factors,
                        inc.len(),
                    ));
                }
                if inc.iter().any(|v| !v.is_finite()) {
                    return Err(MarketError::invariant(
                        Location::sample(idx, "dW"),
                        "increment is not finite",
                    ));
                }
            }
        }
        Ok(Self {
            n_securities,
            n_factors,
            times,
            samples,
            money_market_index,
            wiener_increments,
            seed,
        })
    }

    pub fn n_securities(&self) -> usize {
        self.n_securities
    }

    pub fn n_factors(&self) -> usize {
        self.n_factors
    }

    pub fn n_paths(&self) -> usize {
        self.samples.n_paths()
    }

    pub fn n_times(&self) -> usize {
        self.times.len()
    }

    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &Grid<MarketSample> {
        &self.samples
    }

    pub fn sample(&self, idx: SampleIndex) -> &MarketSample {
        self.samples.get(idx)
    }

    pub fn money_market_index(&self) -> usize {
        self.money_market_index
    }

    pub fn wiener_increments(&self) -> Option<&Grid<Vec<f64>>> {
        self.wiener_increments.as_ref()
    }

    pub fn has_realized_paths(&self) -> bool {
        self.wiener_increments.is_some()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Unit holding of the money-market security, `b̄`.
    pub fn money_market_strategy(&self) -> Vec<f64> {
        let mut b = vec![0.0; self.n_securities];
        b[self.money_market_index] = 1.0;
        b
    }

    /// Returns a copy with one sample replaced, revalidating the whole grid.
    pub fn with_sample(&self, idx: SampleIndex, sample: MarketSample) -> Result<Self, MarketError> {
        let mut samples = self.samples.clone();
        *samples.get_mut(idx) = sample;
        Self::new(
            self.times.clone(),
            samples,
            self.money_market_index,
            self.wiener_increments.clone(),
            self.seed,
        )
    }

    /// Decomposes into `(times, samples, money_market_index, dW, seed)`.
    pub fn into_parts(self) -> ModelParts {
        (
            self.times,
            self.samples,
            self.money_market_index,
            self.wiener_increments,
            self.seed,
        )
    }
}
