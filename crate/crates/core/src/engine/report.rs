use std::io::Write;

use serde::Serialize;

use crate::grid::{Grid, SampleIndex};
use crate::kernel::{norm, ToleranceConfig};
use crate::market::MarketModel;

use super::capm::capm_residual;
use super::rates::{rate_consistency, MoneyMarketAccount};
use super::{classify_grid, EngineError, Outcome, SampleVerdict};

/// Riskless security `account` compared with the designated money market.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateComparison {
    pub account: usize,
    pub consistent: bool,
    pub max_rate_gap: f64,
    pub n_differing: usize,
}

/// Verdicts for a whole model plus summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub verdicts: Grid<SampleVerdict>,
    /// `‖e − b_ψ·(ψ·e)‖` where the sample is free.
    pub capm_residuals: Grid<Option<f64>>,
    pub violated: Vec<SampleIndex>,
    pub marginal: Vec<SampleIndex>,
    pub max_capm_residual: f64,
    /// Largest `‖λ*‖` along each path over its free samples.
    pub max_lambda_star_norm: Vec<f64>,
    pub rate_comparisons: Vec<RateComparison>,
}

/// One sample of a report in serialized form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub path: usize,
    pub t_index: usize,
    pub status: &'static str,
    pub residual: f64,
    pub marginal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_star: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capm_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excess_margin: Option<f64>,
}

#[derive(Serialize)]
struct CsvRow {
    path: usize,
    t_index: usize,
    status: &'static str,
    residual: f64,
    marginal: bool,
    lambda_star_norm: Option<f64>,
    capm_residual: Option<f64>,
    excess_margin: Option<f64>,
}

#[derive(Serialize)]
struct Summary<'a> {
    n_paths: usize,
    n_times: usize,
    n_samples: usize,
    free_count: usize,
    violated_count: usize,
    arbitrage_free: bool,
    violated_indices: &'a [SampleIndex],
    marginal_indices: &'a [SampleIndex],
    max_capm_residual: f64,
    max_lambda_star_norm: &'a [f64],
    rate_consistency: &'a [RateComparison],
}

/// Classifies every sample and gathers the summary.
pub fn analyze(model: &MarketModel, tol: &ToleranceConfig) -> Result<AnalysisReport, EngineError> {
    let verdicts = classify_grid(model, tol);
    let mut capm = Vec::with_capacity(verdicts.len());
    for (idx, v) in verdicts.iter() {
        capm.push(match v.psi() {
            Some(psi) => Some(norm(&capm_residual(psi, model.sample(idx), tol)?)),
            None => None,
        });
    }
    let capm_residuals = Grid::from_cells(model.n_paths(), model.n_times(), capm).expect("one per sample");
    let max_capm_residual = capm_residuals.cells().iter().flatten().fold(0.0_f64, |m, r| m.max(*r));

    let violated = verdicts.iter().filter(|(_, v)| !v.is_free()).map(|(i, _)| i).collect();
    let marginal = verdicts.iter().filter(|(_, v)| v.is_marginal()).map(|(i, _)| i).collect();
    let max_lambda_star_norm = (0..model.n_paths())
        .map(|p| {
            verdicts
                .path(p)
                .iter()
                .filter_map(SampleVerdict::lambda_star)
                .fold(0.0_f64, |m, l| m.max(norm(l)))
        })
        .collect();

    let designated = MoneyMarketAccount::designated(model);
    let mut rate_comparisons = Vec::new();
    for i in (0..model.n_securities()).filter(|&i| i != model.money_market_index()) {
        let Ok(account) = MoneyMarketAccount::from_security(model, i, tol) else {
            continue;
        };
        let c = rate_consistency(&designated, &account, model, tol)?;
        rate_comparisons.push(RateComparison {
            account: i,
            consistent: c.is_consistent(),
            max_rate_gap: c.max_rate_gap(),
            n_differing: match &c {
                super::RateConsistency::Inconsistent { differing, .. } => differing.len(),
                super::RateConsistency::Consistent { .. } => 0,
            },
        });
    }

    Ok(AnalysisReport {
        verdicts,
        capm_residuals,
        violated,
        marginal,
        max_capm_residual,
        max_lambda_star_norm,
        rate_comparisons,
    })
}

impl AnalysisReport {
    pub fn is_arbitrage_free(&self) -> bool {
        self.violated.is_empty()
    }

    pub fn free_count(&self) -> usize {
        self.verdicts.len() - self.violated.len()
    }

    pub fn records(&self) -> Vec<VerdictRecord> {
        self.verdicts
            .iter()
            .map(|(idx, v)| self.record(idx, v))
            .collect()
    }

    fn record(&self, idx: SampleIndex, v: &SampleVerdict) -> VerdictRecord {
        let mut rec = VerdictRecord {
            path: idx.path,
            t_index: idx.t_index,
            status: "free",
            residual: v.membership_residual,
            marginal: false,
            psi: None,
            lambda_star: None,
            capm_residual: *self.capm_residuals.get(idx),
            z: None,
            theta: None,
            excess_margin: None,
        };
        match &v.outcome {
            Outcome::Free { psi, lambda_star } => {
                rec.psi = Some(psi.clone());
                rec.lambda_star = Some(lambda_star.clone());
            }
            Outcome::Violated {
                certificate_z,
                theta,
                excess_margin,
                marginal,
            } => {
                rec.status = "violated";
                rec.marginal = *marginal;
                rec.z = Some(certificate_z.clone());
                rec.theta = Some(theta.clone());
                rec.excess_margin = Some(*excess_margin);
            }
        }
        rec
    }

    fn summary(&self) -> Summary<'_> {
        Summary {
            n_paths: self.verdicts.n_paths(),
            n_times: self.verdicts.n_times(),
            n_samples: self.verdicts.len(),
            free_count: self.free_count(),
            violated_count: self.violated.len(),
            arbitrage_free: self.is_arbitrage_free(),
            violated_indices: &self.violated,
            marginal_indices: &self.marginal,
            max_capm_residual: self.max_capm_residual,
            max_lambda_star_norm: &self.max_lambda_star_norm,
            rate_consistency: &self.rate_comparisons,
        }
    }

    /// `{"verdicts": [...], "summary": {...}}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "verdicts": self.records(),
            "summary": self.summary(),
        })
    }

    /// Only the violated samples, with their certificates.
    pub fn violations_json(&self) -> serde_json::Value {
        let records: Vec<VerdictRecord> = self
            .violated
            .iter()
            .map(|&idx| self.record(idx, self.verdicts.get(idx)))
            .collect();
        serde_json::json!({
            "violated_count": records.len(),
            "violations": records,
        })
    }

    /// One row per sample, in grid order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for (idx, v) in self.verdicts.iter() {
            let violated = match &v.outcome {
                Outcome::Violated {
                    excess_margin,
                    marginal,
                    ..
                } => Some((*excess_margin, *marginal)),
                Outcome::Free { .. } => None,
            };
            w.serialize(CsvRow {
                path: idx.path,
                t_index: idx.t_index,
                status: if violated.is_some() { "violated" } else { "free" },
                residual: v.membership_residual,
                marginal: violated.is_some_and(|(_, m)| m),
                lambda_star_norm: v.lambda_star().map(norm),
                capm_residual: *self.capm_residuals.get(idx),
                excess_margin: violated.map(|(e, _)| e),
            })?;
        }
        w.flush()?;
        Ok(())
    }
}
