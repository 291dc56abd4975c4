use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::grid::{Grid, SampleIndex};
use crate::kernel::{
    axpy, gram_schmidt_rows, norm, orthonormal_row_projector, RealMatrix, ToleranceConfig,
};
use crate::market::{
    simulate_paths, MarketModel, MarketSample, ProportionalCoefficients, SimulationTemplate,
};

use super::{Injection, ScenarioError, ScenarioSpec};

const MONEY_MARKET: usize = 0;

/// Typical volatility of a simulated security at unit dispersion scale.
const SIMULATED_VOLATILITY: f64 = 0.25;

#[derive(Clone, Copy)]
enum Purpose {
    Draw = 0,
    Inject = 1,
}

/// Generator for one sample and purpose; every `(seed, purpose, path, t)`
/// gets its own stream, so draws do not depend on visiting order.
fn sample_rng(seed: u64, purpose: Purpose, idx: SampleIndex) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (purpose as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(((idx.path as u64) << 32) | idx.t_index as u64);
    rng
}

/// Ground truth recorded alongside a generated model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationCertificate {
    /// `[path][t_index]` → planted `λ` (length K).
    pub planted_lambda: Vec<Vec<Vec<f64>>>,
    /// Samples whose excess drift was pushed off the span, in request order.
    pub injected: Vec<SampleIndex>,
    pub seed: u64,
}

impl GenerationCertificate {
    pub fn planted(&self, idx: SampleIndex) -> &[f64] {
        &self.planted_lambda[idx.path][idx.t_index]
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// `n × k` with a zero money-market row and risky rows `A·B`, `A` of
/// `(n − 1) × rank` and `B` of `rank × k`, entries of `A·B` of order `scale`.
/// `r × m` matrix with orthonormal rows, from Gaussian draws.
fn orthonormal_rows(rng: &mut ChaCha8Rng, r: usize, m: usize) -> RealMatrix {
    loop {
        let draws: Vec<f64> = (0..r * m).map(|_| rng.sample(StandardNormal)).collect();
        let w = RealMatrix::new(r, m, draws).expect("r·m entries");
        if let Ok((_, q)) = gram_schmidt_rows(&w, &ToleranceConfig::default()) {
            return q;
        }
    }
}

/// Risky rows are `U·diag(s)·V` with orthonormal `U`, `V` and singular values
/// in `[scale/2, scale]`, so the condition number stays below 2. The money
/// market row is zero.
fn draw_dispersion(rng: &mut ChaCha8Rng, n: usize, k: usize, rank: usize, scale: f64) -> RealMatrix {
    let mut sigma = RealMatrix::zeros(n, k);
    if rank == 0 {
        return sigma;
    }
    let u = orthonormal_rows(rng, rank, n - 1);
    let v = orthonormal_rows(rng, rank, k);
    let s: Vec<f64> = (0..rank).map(|_| scale * rng.random_range(0.5..=1.0)).collect();
    for i in 0..n - 1 {
        let row = sigma.row_mut(i + 1);
        for (j, sj) in s.iter().enumerate() {
            axpy(u.get(j, i) * sj, v.row(j), row);
        }
    }
    sigma
}

fn draw_lambda(rng: &mut ChaCha8Rng, k: usize, bound: f64) -> Vec<f64> {
    (0..k)
        .map(|_| if bound == 0.0 { 0.0 } else { rng.random_range(-bound..=bound) })
        .collect()
}

fn uniform_times(spec: &ScenarioSpec) -> Vec<f64> {
    (0..spec.n_times())
        .map(|k| spec.horizon * k as f64 / spec.n_steps as f64)
        .collect()
}

/// Builds an arbitrage-free cross-sectional model, then applies the spec's
/// injections.
///
/// Each sample draws `r`, risky prices, `σ` of the requested rank and `λ`
/// independently, and sets `μ = r·S + σλᵀ`. Security 0 is the money
/// market, compounding from 1. No Wiener increments are recorded.
pub fn generate(spec: &ScenarioSpec) -> Result<(MarketModel, GenerationCertificate), ScenarioError> {
    spec.validate()?;
    let n = spec.n_securities;
    let k = spec.n_factors;
    let rank = spec.rank();
    let times = uniform_times(spec);

    let mut cells = Vec::with_capacity(spec.n_paths * spec.n_times());
    let mut planted = Vec::with_capacity(spec.n_paths);
    for path in 0..spec.n_paths {
        let mut deflator = 1.0_f64;
        let mut path_lambda = Vec::with_capacity(spec.n_times());
        for t in 0..spec.n_times() {
            let mut rng = sample_rng(spec.seed, Purpose::Draw, SampleIndex::new(path, t));
            let r = uniform(&mut rng, spec.rate_range);
            let mut prices = vec![deflator; n];
            for p in prices.iter_mut().skip(1) {
                *p = uniform(&mut rng, spec.price_range);
            }
            let sigma = draw_dispersion(&mut rng, n, k, rank, spec.dispersion_scale);
            let lambda = draw_lambda(&mut rng, k, spec.lambda_bound);
            let premia = sigma.mul_col(&lambda).expect("lambda has K entries");
            let drifts = prices.iter().zip(&premia).map(|(s, p)| r * s + p).collect();
            cells.push(MarketSample {
                prices,
                drifts,
                dispersion: sigma,
                short_rate: r,
                deflator,
                cum_dividends: vec![0.0; n],
            });
            path_lambda.push(lambda);
            if t + 1 < spec.n_times() {
                deflator *= (r * (times[t + 1] - times[t])).exp();
            }
        }
        planted.push(path_lambda);
    }
    let samples = Grid::from_cells(spec.n_paths, spec.n_times(), cells).expect("sized above");
    let model = MarketModel::new(times, samples, MONEY_MARKET, None, Some(spec.seed))?;
    let certificate = GenerationCertificate {
        planted_lambda: planted,
        injected: Vec::new(),
        seed: spec.seed,
    };
    inject_arbitrage(&model, &certificate, &spec.arbitrage_injection)
}

/// Simulates realized paths with constant relative coefficients: one short
/// rate, one volatility matrix of the requested rank and one planted `λ`,
/// all drawn from the seed. Security `i` has drift `(r + vᵢλᵀ)·Sᵢ` and
/// dispersion `vᵢ·Sᵢ`, so every sample is arbitrage-free. The spec's
/// injections are applied to the recorded drifts afterwards.
pub fn simulate_scenario(spec: &ScenarioSpec) -> Result<(MarketModel, GenerationCertificate), ScenarioError> {
    spec.validate()?;
    let n = spec.n_securities;
    let k = spec.n_factors;
    let mut rng = sample_rng(spec.seed, Purpose::Draw, SampleIndex::new(0, 0));
    let r = uniform(&mut rng, spec.rate_range);
    let mut prices = vec![1.0; n];
    for p in prices.iter_mut().skip(1) {
        *p = uniform(&mut rng, spec.price_range);
    }
    let volatility = draw_dispersion(
        &mut rng,
        n,
        k,
        spec.rank(),
        SIMULATED_VOLATILITY * spec.dispersion_scale,
    );
    let lambda = draw_lambda(&mut rng, k, spec.lambda_bound);
    let premia = volatility.mul_col(&lambda).expect("lambda has K entries");
    let growth = premia.iter().map(|p| r + p).collect();

    let template = SimulationTemplate::uniform(
        spec.n_paths,
        spec.n_steps,
        spec.horizon,
        prices,
        r,
        k,
        ProportionalCoefficients { growth, volatility },
    );
    let model = simulate_paths(&template, spec.seed)?;
    let certificate = GenerationCertificate {
        planted_lambda: vec![vec![lambda; spec.n_times()]; spec.n_paths],
        injected: Vec::new(),
        seed: spec.seed,
    };
    inject_arbitrage(&model, &certificate, &spec.arbitrage_injection)
}

/// Adds `strength·u` to the drift at each injection sample, where `u` is a
/// seeded random unit vector orthogonal to the column span of `σ` with zero
/// money-market component. Zero strength leaves the sample untouched and
/// unrecorded.
pub fn inject_arbitrage(
    model: &MarketModel,
    certificate: &GenerationCertificate,
    injections: &[Injection],
) -> Result<(MarketModel, GenerationCertificate), ScenarioError> {
    let tol = ToleranceConfig::default();
    let mm = model.money_market_index();
    let n = model.n_securities();
    let (times, mut samples, _, increments, seed) = model.clone().into_parts();
    let mut certificate = certificate.clone();

    for inj in injections {
        let idx = inj.index();
        if !samples.contains(idx) {
            return Err(ScenarioError::InvalidSpec(format!("injection at {idx} lies off the grid")));
        }
        if !(inj.strength.is_finite() && inj.strength >= 0.0) {
            return Err(ScenarioError::InvalidSpec(format!(
                "injection strength must be nonnegative, got {}",
                inj.strength
            )));
        }
        if inj.strength == 0.0 {
            continue;
        }
        let sample = samples.get_mut(idx);
        let columns = orthonormal_row_projector(&sample.dispersion.transpose(), &tol);
        if columns.rank() + 1 >= n {
            return Err(ScenarioError::SpanIsFull(idx));
        }
        let mut rng = sample_rng(certificate.seed, Purpose::Inject, idx);
        let v: Vec<f64> = (0..n)
            .map(|i| if i == mm { 0.0 } else { rng.sample(StandardNormal) })
            .collect();
        // second pass removes what rounding left in the span
        let mut u = columns.orthogonal_residual(&columns.orthogonal_residual(&v));
        u[mm] = 0.0;
        let size = norm(&u);
        if size <= 1e-8 * norm(&v) {
            return Err(ScenarioError::SpanIsFull(idx));
        }
        for (m, ui) in sample.drifts.iter_mut().zip(&u) {
            *m += inj.strength * ui / size;
        }
        if !certificate.injected.contains(&idx) {
            certificate.injected.push(idx);
        }
    }
    let model = MarketModel::new(times, samples, mm, increments, seed)?;
    Ok((model, certificate))
}
