//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

pub mod cli_suite;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riskgate::kernel::{RankFactorization, RealMatrix};
use riskgate::market::{simulate_paths, MarketModel, ProportionalCoefficients, SimulationTemplate, TradingStrategy};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, m: usize, k: usize) -> RealMatrix {
    RealMatrix::new(m, k, uniform_vec(rng, m * k)).unwrap()
}

/// `A·B` with inner dimension `r`, so the rank is at most `r` by
/// construction (and exactly `r` almost surely).
pub fn planted_rank(rng: &mut ChaCha8Rng, m: usize, k: usize, r: usize) -> RealMatrix {
    if r == 0 {
        return RealMatrix::zeros(m, k);
    }
    let a = uniform_matrix(rng, m, r);
    let b = uniform_matrix(rng, r, k);
    a.matmul(&b).unwrap()
}

pub fn to_dmatrix(v: &RealMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(v.n_rows(), v.n_cols(), v.entries())
}

pub fn singular_values(v: &RealMatrix) -> Vec<f64> {
    if v.n_rows() == 0 || v.n_cols() == 0 {
        return Vec::new();
    }
    to_dmatrix(v).singular_values().iter().copied().collect()
}

/// Smallest singular value that is not numerically zero, or `+∞` for a zero
/// matrix.
pub fn min_nonzero_singular(v: &RealMatrix) -> f64 {
    let s = singular_values(v);
    let top = s.iter().fold(0.0_f64, |m, x| m.max(*x));
    let floor = 1e-11 * top.max(1.0);
    s.into_iter().filter(|x| *x > floor).fold(f64::INFINITY, f64::min)
}

/// Rank by Gaussian elimination with partial pivoting.
pub fn gauss_rank(v: &RealMatrix, rel_tol: f64) -> usize {
    let mut a: Vec<Vec<f64>> = v.rows().map(|r| r.to_vec()).collect();
    let scale = v.max_abs();
    if scale == 0.0 {
        return 0;
    }
    let tol = rel_tol * scale;
    let (m, k) = v.shape();
    let mut rank = 0;
    for col in 0..k {
        if rank == m {
            break;
        }
        let (p, best) = (rank..m)
            .map(|i| (i, a[i][col].abs()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            continue;
        }
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail {
            let f = row[col] / pivot[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x -= f * p;
            }
        }
        rank += 1;
    }
    rank
}

/// `y` appended to the rows of `v`.
pub fn stack_row(v: &RealMatrix, y: &[f64]) -> RealMatrix {
    let mut rows: Vec<Vec<f64>> = v.rows().map(|r| r.to_vec()).collect();
    rows.push(y.to_vec());
    RealMatrix::from_rows(&rows).unwrap()
}

/// Row-span membership by elimination: `rank([V; y]) == rank(V)`.
pub fn gauss_member(v: &RealMatrix, y: &[f64]) -> bool {
    gauss_rank(&stack_row(v, y), 1e-10) == gauss_rank(v, 1e-10)
}

/// `‖Q·Qᵀ − I‖_max`
pub fn orthonormality_error(f: &RankFactorization) -> f64 {
    let q = f.basis();
    let g = q.gram_rows();
    let mut worst = 0.0_f64;
    for i in 0..g.n_rows() {
        for j in 0..g.n_cols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g.get(i, j) - target).abs());
        }
    }
    worst
}

/// Component of `w` orthogonal to the row span described by `f`, computed
/// twice for accuracy.
pub fn orthogonal_part(f: &RankFactorization, w: &[f64]) -> Vec<f64> {
    f.orthogonal_residual(&f.orthogonal_residual(w))
}

/// Simulated market with a money market, three dividend-paying risky
/// securities, two factors and a short rate that moves along the grid.
pub fn dividend_market(seed: u64, n_paths: usize, n_steps: usize) -> MarketModel {
    let mut g = rng(seed);
    let growth = (0..4).map(|_| g.random_range(0.0..0.1)).collect();
    let volatility = uniform_matrix(&mut g, 4, 2).scale(0.2);
    let mut template = SimulationTemplate::uniform(
        n_paths,
        n_steps,
        1.0,
        vec![1.0, 20.0, 50.0, 10.0],
        0.0,
        2,
        ProportionalCoefficients { growth, volatility },
    )
    .with_dividend_rates(vec![0.0, 0.5, 1.0, 0.2]);
    template.short_rates = (0..=n_steps).map(|k| 0.03 + 0.02 * (k as f64 * 0.1).sin()).collect();
    simulate_paths(&template, seed).unwrap()
}

/// Holdings drawn uniformly from `[-2, 2]` at every sample, so the strategy
/// pays dividends almost surely.
pub fn random_strategy(rng: &mut ChaCha8Rng, model: &MarketModel) -> TradingStrategy {
    let n = model.n_securities();
    TradingStrategy::from_fn(model, |_| (0..n).map(|_| rng.random_range(-2.0..=2.0)).collect()).unwrap()
}

/// Runs the `riskgate` binary in `dir`.
pub fn riskgate(dir: &std::path::Path, args: &[&str]) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_riskgate"))
        .args(args)
        .current_dir(dir)
        .env_remove("RISKGATE_SEED")
        .output()
        .expect("binary runs")
}
