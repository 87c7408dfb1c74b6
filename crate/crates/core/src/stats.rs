//! Detection under post-selection, performance metrics, bootstrap intervals
//! and syndrome-schedule selection over sweep results.
//!
//! A shot on the code block suffers an error with probability `epsilon`. An
//! error escapes detection with probability `delta`, and an error-free shot
//! is flagged anyway with probability `gamma`. Over `N` shots this gives a
//! multinomial over correct-accepted, incorrect-accepted and flagged shots.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default number of syndrome schedules swept, `r = 1..=12`.
pub const DEFAULT_MAX_ROUNDS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionModel<T = f64> {
    pub epsilon: T,
    pub delta: T,
    pub gamma: T,
    pub shots: u64,
}

fn check_probability<T: Real>(name: &str, v: T) -> Result<()> {
    if v >= T::zero() && v <= T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {v} is not in [0, 1]")))
    }
}

impl<T: Real> DetectionModel<T> {
    pub fn new(epsilon: T, delta: T, gamma: T, shots: u64) -> Result<Self> {
        check_probability("epsilon", epsilon)?;
        check_probability("delta", delta)?;
        check_probability("gamma", gamma)?;
        if shots == 0 {
            return Err(Error::domain("shot count must be positive"));
        }
        Ok(Self {
            epsilon,
            delta,
            gamma,
            shots,
        })
    }

    /// Model with the false-flag rate tied to the miss rate by
    /// [`gamma_of_delta`].
    pub fn coupled(epsilon: T, delta: T, shots: u64) -> Result<Self> {
        check_probability("delta", delta)?;
        Self::new(epsilon, delta, gamma_of_delta(delta), shots)
    }

    /// `(1-γ)(1-ε)`
    pub fn p_correct(&self) -> T {
        (T::one() - self.gamma) * (T::one() - self.epsilon)
    }

    /// `εδ`
    pub fn p_incorrect(&self) -> T {
        self.epsilon * self.delta
    }

    /// `γ + ε - ε(γ+δ)`
    pub fn p_flag(&self) -> T {
        self.gamma + self.epsilon - self.epsilon * (self.gamma + self.delta)
    }
}

/// Expected fraction of accepted shots that are correct, counting the event
/// of no accepted shot as 0.
pub fn expected_success<T: Real>(m: &DetectionModel<T>) -> T {
    let denom = m.epsilon * (m.gamma + m.delta - T::one()) - m.gamma + T::one();
    if denom <= T::zero() {
        return T::zero();
    }
    let n = m.shots.min(i32::MAX as u64) as i32;
    m.p_correct() * (T::one() - m.p_flag().powi(n)) / denom
}

/// False-flag rate as a decreasing function of the miss rate,
/// `1 / (1 + e^(10δ - 3))`.
pub fn gamma_of_delta<T: Real>(delta: T) -> T {
    T::one() / (T::one() + (T::of(10.0) * delta - T::of(3.0)).exp())
}

/// Probability that every one of the `N` shots is flagged.
pub fn catastrophic_probability<T: Real>(m: &DetectionModel<T>) -> T {
    m.p_flag().powi(m.shots.min(i32::MAX as u64) as i32)
}

/// Smallest `N` with `p_F^N <= budget`.
pub fn shots_for_failure_budget<T: Real>(epsilon: T, gamma: T, delta: T, budget: T) -> Result<u64> {
    check_probability("epsilon", epsilon)?;
    check_probability("gamma", gamma)?;
    check_probability("delta", delta)?;
    if !(budget > T::zero() && budget < T::one()) {
        return Err(Error::domain(format!("failure budget {budget} is not in (0, 1)")));
    }
    let pf = DetectionModel {
        epsilon,
        delta,
        gamma,
        shots: 1,
    }
    .p_flag();
    if pf <= T::zero() || pf >= T::one() {
        return Err(Error::domain(format!(
            "flag probability {pf} must be strictly between 0 and 1"
        )));
    }
    if pf <= budget {
        return Ok(1);
    }
    let n = (budget.ln() / pf.ln()).ceil();
    let mut n = n.to_u64().unwrap_or(u64::MAX).max(1);
    // Guard against the ratio landing one ulp above an integer.
    if n > 1 && pf.powi((n - 1).min(i32::MAX as u64) as i32) <= budget {
        n -= 1;
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet<T = f64> {
    pub p_enc: T,
    pub p_bare: T,
    pub p_ideal: T,
    pub eta_enc: T,
    pub eta_bare: T,
    /// Absent when `p_ideal == p_bare`.
    pub nu: Option<T>,
}

pub fn metrics<T: Real>(p_enc: T, p_bare: T, p_ideal: T) -> Result<MetricSet<T>> {
    if p_ideal <= T::zero() {
        return Err(Error::domain(format!("ideal success {p_ideal} must be positive")));
    }
    let nu = (p_ideal != p_bare).then(|| (p_enc - p_bare) / (p_ideal - p_bare));
    Ok(MetricSet {
        p_enc,
        p_bare,
        p_ideal,
        eta_enc: p_enc / p_ideal,
        eta_bare: p_bare / p_ideal,
        nu,
    })
}

/// Linear-interpolated quantile of sorted data.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Percentile bootstrap interval for the mean of `trials`.
pub fn bootstrap_ci(trials: &[f64], level: f64, resamples: usize, seed: u64) -> Result<(f64, f64)> {
    if trials.len() < 2 {
        return Err(Error::domain(format!(
            "bootstrap needs at least 2 trials, got {}",
            trials.len()
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain(format!("confidence level {level} is not in (0, 1)")));
    }
    if resamples == 0 {
        return Err(Error::domain("bootstrap needs at least one resample"));
    }
    let lo_bound = trials.iter().copied().fold(f64::INFINITY, f64::min);
    let hi_bound = trials.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = trials.len();
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| trials[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    let low = quantile_sorted(&means, tail).clamp(lo_bound, hi_bound);
    let high = quantile_sorted(&means, 1.0 - tail).clamp(lo_bound, hi_bound);
    Ok((low, high))
}

/// Accepted and correct counts of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub shots: u64,
    pub accepted: u64,
    pub correct: u64,
}

impl TrialOutcome {
    /// Correct fraction of accepted shots, 0 if nothing was accepted.
    pub fn success(&self) -> f64 {
        if self.accepted == 0 {
            0.0
        } else {
            self.correct as f64 / self.accepted as f64
        }
    }
}

/// One row of a sweep. `r` is empty for the unencoded baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p: f64,
    pub s: usize,
    pub iterations: usize,
    pub r: Option<usize>,
    pub shots: u64,
    pub trials: usize,
    pub success: f64,
    pub survival: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Settings for turning trial outcomes into a [`SweepPoint`].
#[derive(Debug, Clone, Copy)]
pub struct BootstrapSettings {
    pub level: f64,
    pub resamples: usize,
    pub seed: u64,
}

impl Default for BootstrapSettings {
    fn default() -> Self {
        Self {
            level: 0.95,
            resamples: 10_000,
            seed: 0,
        }
    }
}

impl SweepPoint {
    /// Pools accepted shots for the estimate and bootstraps per-trial
    /// success rates for the interval. The interval is widened to contain
    /// the pooled estimate when the two disagree.
    pub fn from_trials(
        p: f64,
        s: usize,
        iterations: usize,
        r: Option<usize>,
        outcomes: &[TrialOutcome],
        boot: BootstrapSettings,
    ) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::domain("sweep point needs at least one trial"));
        }
        let shots: u64 = outcomes.iter().map(|t| t.shots).sum();
        let accepted: u64 = outcomes.iter().map(|t| t.accepted).sum();
        let correct: u64 = outcomes.iter().map(|t| t.correct).sum();
        let success = if accepted == 0 {
            0.0
        } else {
            correct as f64 / accepted as f64
        };
        let survival = if shots == 0 {
            0.0
        } else {
            accepted as f64 / shots as f64
        };
        let (ci_low, ci_high) = if outcomes.len() >= 2 {
            let rates: Vec<f64> = outcomes.iter().map(TrialOutcome::success).collect();
            bootstrap_ci(&rates, boot.level, boot.resamples, boot.seed)?
        } else {
            (success, success)
        };
        Ok(Self {
            p,
            s,
            iterations,
            r,
            shots: outcomes[0].shots,
            trials: outcomes.len(),
            success,
            survival,
            ci_low: ci_low.min(success),
            ci_high: ci_high.max(success),
        })
    }
}

pub fn write_sweep_csv<W: std::io::Write>(points: &[SweepPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads rows written by [`write_sweep_csv`]. Lines starting with `#` are
/// skipped.
pub fn read_sweep_csv<R: std::io::Read>(input: R) -> Result<Vec<SweepPoint>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let rows: std::result::Result<Vec<SweepPoint>, csv::Error> = r.deserialize().collect();
    Ok(rows?)
}

/// Best schedule of an `r` sweep and aggregates over all schedules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyndromeOptimum {
    pub r_star: usize,
    pub success_star: f64,
    pub eta_enc_star: f64,
    pub eta_enc_75: f64,
    pub eta_enc_mean: f64,
    pub eta_bare: f64,
    pub nu_star: Option<f64>,
    pub nu_75: Option<f64>,
    pub nu_mean: Option<f64>,
}

/// Picks the schedule with the highest success, ties going to the smallest
/// `r`. The 75th-percentile and mean aggregates are taken over every swept
/// schedule. Baseline rows (`r` empty) are ignored.
pub fn optimal_syndrome(points: &[SweepPoint], p_bare: f64, p_ideal: f64) -> Result<SyndromeOptimum> {
    let mut encoded: Vec<(usize, f64)> = points.iter().filter_map(|p| p.r.map(|r| (r, p.success))).collect();
    if encoded.is_empty() {
        return Err(Error::domain("no encoded sweep points"));
    }
    encoded.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.total_cmp(&a.1)));
    let (r_star, success_star) = encoded
        .iter()
        .copied()
        .reduce(|best, x| if x.1 > best.1 { x } else { best })
        .expect("non-empty");

    let all: Vec<MetricSet> = encoded
        .iter()
        .map(|&(_, s)| metrics(s, p_bare, p_ideal))
        .collect::<Result<_>>()?;
    let star = metrics(success_star, p_bare, p_ideal)?;
    let mut etas: Vec<f64> = all.iter().map(|m| m.eta_enc).collect();
    etas.sort_by(f64::total_cmp);
    let mut nus: Option<Vec<f64>> = all.iter().map(|m| m.nu).collect();
    if let Some(v) = nus.as_mut() {
        v.sort_by(f64::total_cmp);
    }
    Ok(SyndromeOptimum {
        r_star,
        success_star,
        eta_enc_star: star.eta_enc,
        eta_enc_75: quantile_sorted(&etas, 0.75),
        eta_enc_mean: mean(&etas),
        eta_bare: star.eta_bare,
        nu_star: star.nu,
        nu_75: nus.as_deref().map(|v| quantile_sorted(v, 0.75)),
        nu_mean: nus.as_deref().map(mean),
    })
}
