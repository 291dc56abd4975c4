//! Euler–Maruyama simulation of market paths.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::grid::Grid;
use crate::kernel::RealMatrix;

use super::{MarketError, MarketModel, MarketSample};

/// Drift `μ` and dispersion `σ` of the gains processes as a function of time
/// and current prices.
pub trait CoefficientModel: Sync {
    fn coefficients(&self, t: f64, prices: &[f64]) -> (Vec<f64>, RealMatrix);
}

impl<F> CoefficientModel for F
where
    F: Fn(f64, &[f64]) -> (Vec<f64>, RealMatrix) + Sync,
{
    fn coefficients(&self, t: f64, prices: &[f64]) -> (Vec<f64>, RealMatrix) {
        self(t, prices)
    }
}

/// Fixed `μ` (currency/year) and `σ` (currency/√year).
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantCoefficients {
    pub drifts: Vec<f64>,
    pub dispersion: RealMatrix,
}

impl CoefficientModel for ConstantCoefficients {
    fn coefficients(&self, _t: f64, _prices: &[f64]) -> (Vec<f64>, RealMatrix) {
        (self.drifts.clone(), self.dispersion.clone())
    }
}

/// `μ_i = growth_i · S_i` and `σ_i = volatility_i · S_i` (row-wise).
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionalCoefficients {
    pub growth: Vec<f64>,
    pub volatility: RealMatrix,
}

impl CoefficientModel for ProportionalCoefficients {
    fn coefficients(&self, _t: f64, prices: &[f64]) -> (Vec<f64>, RealMatrix) {
        let drifts = self.growth.iter().zip(prices).map(|(g, s)| g * s).collect();
        let mut sigma = self.volatility.clone();
        for (i, s) in prices.iter().enumerate() {
            sigma.row_mut(i).iter_mut().for_each(|v| *v *= s);
        }
        (drifts, sigma)
    }
}

/// Everything needed to simulate a market except the random seed.
///
/// The money-market security is not driven by the coefficient model: its
/// price is the deflator `M_{k+1} = M_k · exp(r_k Δt)`, its drift `r·M`, its
/// dispersion row zero and it pays no dividends.
#[derive(Debug, Clone)]
pub struct SimulationTemplate<C> {
    pub n_paths: usize,
    pub times: Vec<f64>,
    pub money_market_index: usize,
    pub initial_prices: Vec<f64>,
    /// One short rate per time point.
    pub short_rates: Vec<f64>,
    /// Dividend rate per security (currency/year); `D` accrues `δ·Δt` per step.
    pub dividend_rates: Vec<f64>,
    pub n_factors: usize,
    pub coefficients: C,
}

impl<C: CoefficientModel> SimulationTemplate<C> {
    /// Evenly spaced grid on `[0, horizon]` with a constant short rate.
    pub fn uniform(
        n_paths: usize,
        n_steps: usize,
        horizon: f64,
        initial_prices: Vec<f64>,
        short_rate: f64,
        n_factors: usize,
        coefficients: C,
    ) -> Self {
        let n = initial_prices.len();
        Self {
            n_paths,
            times: (0..=n_steps)
                .map(|k| horizon * k as f64 / n_steps.max(1) as f64)
                .collect(),
            money_market_index: 0,
            initial_prices,
            short_rates: vec![short_rate; n_steps + 1],
            dividend_rates: vec![0.0; n],
            n_factors,
            coefficients,
        }
    }

    pub fn with_dividend_rates(mut self, rates: Vec<f64>) -> Self {
        self.dividend_rates = rates;
        self
    }

    fn validate(&self) -> Result<(), MarketError> {
        let bad = |msg: String| Err(MarketError::InvalidTemplate(msg));
        let n = self.initial_prices.len();
        if self.n_paths == 0 || n == 0 || self.n_factors == 0 {
            return bad("paths, securities and factors must be positive".into());
        }
        if self.times.len() < 2 || self.times.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater)) {
            return bad("times must contain at least two strictly increasing points".into());
        }
        if self.short_rates.len() != self.times.len() {
            return bad(format!(
                "expected {} short rates, got {}",
                self.times.len(),
                self.short_rates.len()
            ));
        }
        if self.dividend_rates.len() != n {
            return bad(format!("expected {n} dividend rates, got {}", self.dividend_rates.len()));
        }
        if self.money_market_index >= n {
            return bad("money-market index out of range".into());
        }
        if self.initial_prices[self.money_market_index] <= 0.0 {
            return bad("initial money-market value must be positive".into());
        }
        if self.dividend_rates[self.money_market_index] != 0.0 {
            return bad("the money market pays no dividends".into());
        }
        let all_finite = self
            .initial_prices
            .iter()
            .chain(&self.short_rates)
            .chain(&self.dividend_rates)
            .all(|v| v.is_finite());
        if !all_finite {
            return bad("template values must be finite".into());
        }
        Ok(())
    }
}

/// Seed of the generator for one path; distinct paths get unrelated streams
/// so serial and parallel simulation agree.
fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64);
    rng
}

/// Simulates realized paths `G_{k+1} = G_k + μ_k Δt + σ_k ΔW_k`,
/// `S = G − D`, with `ΔW_k ~ N(0, Δt·I_K)`.
pub fn simulate_paths<C: CoefficientModel>(
    template: &SimulationTemplate<C>,
    seed: u64,
) -> Result<MarketModel, MarketError> {
    template.validate()?;
    let times = &template.times;
    let n_times = times.len();
    let n = template.initial_prices.len();
    let k_factors = template.n_factors;
    let mm = template.money_market_index;

    let mut samples = Vec::with_capacity(template.n_paths * n_times);
    let mut increments = Vec::with_capacity(template.n_paths * (n_times - 1));
    for path in 0..template.n_paths {
        let mut rng = path_rng(seed, path);
        let mut prices = template.initial_prices.clone();
        let mut dividends = vec![0.0; n];
        let mut gains: Vec<f64> = prices.clone();
        let mut deflator = prices[mm];
        for k in 0..n_times {
            let t = times[k];
            let r = template.short_rates[k];
            let (mut drifts, mut sigma) = template.coefficients.coefficients(t, &prices);
            if drifts.len() != n || sigma.shape() != (n, k_factors) {
                return Err(MarketError::InvalidTemplate(format!(
                    "coefficient model returned shapes {} and {:?}, expected {n} and ({n}, {k_factors})",
                    drifts.len(),
                    sigma.shape()
                )));
            }
            prices[mm] = deflator;
            drifts[mm] = r * deflator;
            sigma.row_mut(mm).iter_mut().for_each(|v| *v = 0.0);
            if drifts.iter().chain(sigma.entries()).any(|v| !v.is_finite()) {
                return Err(MarketError::InvalidTemplate(format!(
                    "non-finite coefficients at path {path}, t_index {k}"
                )));
            }
            samples.push(MarketSample {
                prices: prices.clone(),
                drifts: drifts.clone(),
                dispersion: sigma.clone(),
                short_rate: r,
                deflator,
                cum_dividends: dividends.clone(),
            });
            if k + 1 == n_times {
                break;
            }
            let dt = times[k + 1] - t;
            let sd = dt.sqrt();
            let dw: Vec<f64> = (0..k_factors)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    z * sd
                })
                .collect();
            let shock = sigma.mul_col(&dw).expect("shape checked");
            for i in 0..n {
                gains[i] += drifts[i] * dt + shock[i];
                dividends[i] += template.dividend_rates[i] * dt;
                prices[i] = gains[i] - dividends[i];
            }
            deflator *= (r * dt).exp();
            gains[mm] = deflator;
            increments.push(dw);
        }
    }
    let samples = Grid::from_cells(template.n_paths, n_times, samples).expect("sized");
    let increments = Grid::from_cells(template.n_paths, n_times - 1, increments).expect("sized");
    MarketModel::new(
        times.clone(),
        samples,
        mm,
        Some(increments),
        Some(seed),
    )
}
