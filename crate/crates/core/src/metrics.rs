use serde::{Deserialize, Serialize};

use crate::energy::EnergyLedgerEntry;
use crate::error::{Error, Result};

pub fn average_rate(per_ship_rates: &[f64]) -> Result<f64> {
    if per_ship_rates.is_empty() {
        return Err(Error::EmptySamples);
    }
    Ok(per_ship_rates.iter().sum::<f64>() / per_ship_rates.len() as f64)
}

/// Running total of the ledger, one entry per slot.
pub fn cumulative_energy(ledger: &[EnergyLedgerEntry]) -> Vec<f64> {
    ledger
        .iter()
        .scan(0.0, |acc, e| {
            *acc += e.total;
            Some(*acc)
        })
        .collect()
}

/// `100 * (a - b) / b`
pub fn percent_delta(a: f64, b: f64) -> Result<f64> {
    if b == 0.0 {
        return Err(Error::ZeroBaseline);
    }
    Ok(100.0 * (a - b) / b)
}

/// Empirical distribution of pooled rate samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCdf {
    sorted: Vec<f64>,
}

pub fn rate_cdf(samples: &[f64]) -> Result<RateCdf> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(RateCdf { sorted })
}

impl RateCdf {
    pub fn sorted_samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Fraction of samples `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        let below = self.sorted.partition_point(|&s| s <= x);
        below as f64 / self.sorted.len() as f64
    }

    /// Smallest sample whose CDF reaches `p`; `p = 0` gives the minimum.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.sorted.len();
        let p = p.clamp(0.0, 1.0);
        let rank = (p * n as f64).ceil() as usize;
        self.sorted[rank.clamp(1, n) - 1]
    }

    /// `(value, F(value))` at each distinct sample value.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let n = self.sorted.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &v) in self.sorted.iter().enumerate() {
            let f = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = f,
                _ => out.push((v, f)),
            }
        }
        out
    }
}
