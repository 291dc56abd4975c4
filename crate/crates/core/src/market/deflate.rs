use super::{Location, MarketError};

/// Money-market value path `M_{k+1} = M_k · exp(r_k · Δt_k)` with `M_0 = m0`.
///
/// `rates` holds one rate per step (`times.len() − 1` entries).
pub fn money_market_path(rates: &[f64], m0: f64, times: &[f64]) -> Result<Vec<f64>, MarketError> {
    if !(m0 > 0.0 && m0.is_finite()) {
        return Err(MarketError::NonpositiveInitialValue(m0));
    }
    check_times(times)?;
    let n_steps = times.len().saturating_sub(1);
    if rates.len() != n_steps {
        return Err(MarketError::shape(Location::field("r"), n_steps, rates.len()));
    }
    let mut path = Vec::with_capacity(times.len());
    path.push(m0);
    for (k, r) in rates.iter().enumerate() {
        let dt = times[k + 1] - times[k];
        path.push(path[k] * (r * dt).exp());
    }
    Ok(path)
}

/// Cumulative dividends in money-market units,
/// `D^{1/M}_k = D_k / M_k + Σ_{j<k} D_j · r_j / M_j · Δt_j`.
///
/// All inputs are per time point along one path.
pub fn deflate_dividends(
    dividends: &[f64],
    rates: &[f64],
    deflators: &[f64],
    times: &[f64],
) -> Result<Vec<f64>, MarketError> {
    check_times(times)?;
    let n = times.len();
    for (field, len) in [("D", dividends.len()), ("r", rates.len()), ("M", deflators.len())] {
        if len != n {
            return Err(MarketError::shape(Location::field(field), n, len));
        }
    }
    let mut integral = 0.0;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            let j = k - 1;
            integral += dividends[j] * rates[j] / deflators[j] * (times[k] - times[j]);
        }
        out.push(dividends[k] / deflators[k] + integral);
    }
    Ok(out)
}

fn check_times(times: &[f64]) -> Result<(), MarketError> {
    if times.is_empty() || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MarketError::invariant(
            Location::field("times"),
            "times must be nonempty and strictly increasing",
        ));
    }
    Ok(())
}
