//! Exact verification suites and Monte Carlo estimation.

mod mc;
mod schur_weyl;
mod suite;
mod targets;

use num_traits::Zero;

use crate::measures::{mass_table, PartitionMeasure, QParameter, QPlancherel};
use crate::observables::{Observable, SigmaCombination};
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::{Error, Result};

pub use mc::{
    exact_first_row_mean, mc_run, parse_stats, sample_partitions, within, MCConfig, Measure,
    SampleReport, StatSpec, StatSummary, SCHEMA_VERSION,
};
pub use schur_weyl::{
    column_length_ratios, exact_schur_weyl_expectation, gradation_check, schur_weyl_alphabet,
    schur_weyl_check, schur_weyl_expectation_by_words, GradationReport, SchurWeylConfig,
    SchurWeylReport, SchurWeylSample,
};
pub use suite::{verify_exact_suite, verify_exact_suite_with, CheckResult, MassFn, SuiteReport};
pub use targets::{clt_covariance_targets, TargetKind};

/// Default cap on `n` for exact enumeration over `𝒴_n`.
pub const DEFAULT_MAX_EXACT_N: usize = 12;
/// Hard ceiling for the cap.
pub const CEILING_MAX_EXACT_N: usize = 30;

/// Current cap: `QYOUNG_MAX_EXACT_N` if set (clamped to 30), else 12.
pub fn max_exact_n() -> usize {
    match std::env::var("QYOUNG_MAX_EXACT_N")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        Some(v) if v > DEFAULT_MAX_EXACT_N => {
            let v = v.min(CEILING_MAX_EXACT_N);
            log::warn!("exact enumeration cap raised to n = {v}; large n can be slow");
            v
        }
        Some(v) => v,
        None => DEFAULT_MAX_EXACT_N,
    }
}

/// A function on Young diagrams with exact values.
pub trait PartitionFunction {
    fn value(&self, lambda: &Partition) -> Result<Scalar>;
}

impl PartitionFunction for Observable {
    fn value(&self, lambda: &Partition) -> Result<Scalar> {
        Ok(self.evaluate(lambda))
    }
}

impl PartitionFunction for SigmaCombination {
    fn value(&self, lambda: &Partition) -> Result<Scalar> {
        self.evaluate(lambda)
    }
}

impl<F: Fn(&Partition) -> Result<Scalar>> PartitionFunction for F {
    fn value(&self, lambda: &Partition) -> Result<Scalar> {
        self(lambda)
    }
}

/// `Σ_{λ ⊢ n} M_{n,q}(λ) f(λ)`.
pub fn exact_expectation(stat: &dyn PartitionFunction, n: usize, q: &QParameter) -> Result<Scalar> {
    exact_expectation_under(stat, n, &QPlancherel(q.clone()))
}

/// Expectation of `stat` over `𝒴_n` under an arbitrary exact measure.
pub fn exact_expectation_under(
    stat: &dyn PartitionFunction,
    n: usize,
    measure: &dyn PartitionMeasure,
) -> Result<Scalar> {
    let cap = max_exact_n();
    if n > cap {
        return Err(Error::Precondition(format!(
            "exact enumeration limited to n <= {cap} (QYOUNG_MAX_EXACT_N)"
        )));
    }
    let mut acc = Scalar::zero();
    for (lambda, mass) in mass_table(n, measure)? {
        acc += mass * stat.value(&lambda)?;
    }
    Ok(acc)
}
