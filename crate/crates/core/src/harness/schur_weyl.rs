//! Shape checks and exact expectations under the Schur-Weyl measure, plus
//! the column-length check under the q-Plancherel measure.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::measures::{sample_schur_weyl, schur_weyl_word_distribution, QParameter, SamplerMode};
use crate::observables::{deg_alpha, p_to_sigma, Observable};
use crate::partition::Partition;
use crate::scalar::{self, falling_factorial, falling_factorial_f64, Scalar};
use crate::{Error, Result};

use super::mc::{sample_partitions, MCConfig, Measure};

#[derive(Clone, Debug, Serialize)]
pub struct SchurWeylConfig {
    pub n: usize,
    pub c: f64,
    pub alpha: f64,
    pub eta: f64,
    /// Slack in the first-row bound `λ_1 ≤ n^{1-α+ε}`.
    pub epsilon: f64,
    /// Minimal fraction of boxes inside the window for a sample to pass.
    pub box_fraction_threshold: f64,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

impl SchurWeylConfig {
    pub fn new(n: usize, c: f64, alpha: f64, eta: f64, samples: usize, seed: u64) -> Self {
        Self {
            n,
            c,
            alpha,
            eta,
            epsilon: 0.05,
            box_fraction_threshold: 0.9,
            samples,
            seed,
            workers: 1,
        }
    }
}

/// `N = round(c · n^α)`, requiring `α < 1/2` and `N ≥ 1`.
pub fn schur_weyl_alphabet(n: usize, c: f64, alpha: f64) -> Result<u32> {
    if !(0.0..0.5).contains(&alpha) {
        return Err(Error::Precondition(format!(
            "alpha must lie in [0, 1/2), got {alpha}"
        )));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Precondition(format!("c must be positive, got {c}")));
    }
    let big_n = (c * (n as f64).powf(alpha)).round();
    if big_n < 1.0 || big_n > u32::MAX as f64 {
        return Err(Error::Precondition(format!(
            "alphabet size {big_n} out of range"
        )));
    }
    Ok(big_n as u32)
}

/// Measurements on one sampled shape.
///
/// Rows are rescaled by `n^{1-α}`. The wide window is `c(1 ± η)`, the narrow
/// one `c(1 ± η/2)`.
#[derive(Clone, Debug, Serialize)]
pub struct SchurWeylSample {
    pub index: u64,
    pub lambda1: usize,
    pub length: usize,
    pub box_fraction: f64,
    pub box_fraction_narrow: f64,
    pub rows_in_window: usize,
    pub rows_in_window_narrow: usize,
    pub lambda1_ok: bool,
    pub length_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchurWeylReport {
    pub schema_version: u32,
    pub config: SchurWeylConfig,
    pub alphabet: u32,
    pub window: (f64, f64),
    pub window_narrow: (f64, f64),
    /// `(1-η)/c · n^α`, the row count the window should eventually hold.
    pub expected_rows: f64,
    pub lambda1_bound: f64,
    pub box_fraction_passes: usize,
    pub box_fraction_narrow_passes: usize,
    pub row_count_passes: usize,
    pub lambda1_passes: usize,
    pub length_passes: usize,
    pub mean_box_fraction: f64,
    pub mean_box_fraction_narrow: f64,
    pub wall_time_seconds: f64,
    /// RSK throughput in inserted letters per second.
    pub letters_per_second: f64,
    pub samples: Vec<SchurWeylSample>,
}

impl SchurWeylReport {
    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }
}

fn measure_shape(
    index: u64,
    lambda: &Partition,
    cfg: &SchurWeylConfig,
    alphabet: u32,
) -> SchurWeylSample {
    let n = cfg.n as f64;
    let scale = n.powf(1.0 - cfg.alpha);
    let in_window = |half: f64| {
        let (lo, hi) = (cfg.c * (1.0 - half), cfg.c * (1.0 + half));
        let rows: Vec<usize> = lambda
            .parts()
            .iter()
            .copied()
            .filter(|&r| (lo..=hi).contains(&(r as f64 / scale)))
            .collect();
        let boxes: usize = rows.iter().sum();
        (if cfg.n == 0 { 1.0 } else { boxes as f64 / n }, rows.len())
    };
    let (box_fraction, rows_in_window) = in_window(cfg.eta);
    let (box_fraction_narrow, rows_in_window_narrow) = in_window(cfg.eta / 2.0);
    let lambda1 = lambda.part(1);
    SchurWeylSample {
        index,
        lambda1,
        length: lambda.len(),
        box_fraction,
        box_fraction_narrow,
        rows_in_window,
        rows_in_window_narrow,
        lambda1_ok: lambda1 as f64 <= n.powf(1.0 - cfg.alpha + cfg.epsilon),
        length_ok: lambda.len() <= alphabet as usize,
    }
}

/// Samples RSK shapes of uniform words and measures them against the
/// limit shape: rows of length about `c n^{1-α}`, `λ_1 = o(n^{1-α+ε})`.
pub fn schur_weyl_check(cfg: &SchurWeylConfig) -> Result<SchurWeylReport> {
    let alphabet = schur_weyl_alphabet(cfg.n, cfg.c, cfg.alpha)?;
    if cfg.samples == 0 || cfg.workers == 0 {
        return Err(Error::Precondition(
            "samples and workers must be positive".into(),
        ));
    }
    if !(cfg.eta > 0.0 && cfg.eta < 1.0) {
        return Err(Error::Precondition(format!(
            "eta must lie in (0, 1), got {}",
            cfg.eta
        )));
    }
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    let samples: Vec<SchurWeylSample> = pool.install(|| {
        (0..cfg.samples as u64)
            .into_par_iter()
            .map(|i| {
                sample_schur_weyl(cfg.n, alphabet, cfg.seed, i)
                    .map(|l| measure_shape(i, &l, cfg, alphabet))
            })
            .collect::<Result<_>>()
    })?;
    let wall = start.elapsed().as_secs_f64();
    let n = cfg.n as f64;
    let expected_rows = (1.0 - cfg.eta) / cfg.c * n.powf(cfg.alpha);
    let count = |f: &dyn Fn(&SchurWeylSample) -> bool| samples.iter().filter(|s| f(s)).count();
    let mean = |f: &dyn Fn(&SchurWeylSample) -> f64| {
        samples.iter().map(f).sum::<f64>() / samples.len() as f64
    };
    Ok(SchurWeylReport {
        schema_version: super::SCHEMA_VERSION,
        alphabet,
        window: (cfg.c * (1.0 - cfg.eta), cfg.c * (1.0 + cfg.eta)),
        window_narrow: (cfg.c * (1.0 - cfg.eta / 2.0), cfg.c * (1.0 + cfg.eta / 2.0)),
        expected_rows,
        lambda1_bound: n.powf(1.0 - cfg.alpha + cfg.epsilon),
        box_fraction_passes: count(&|s| s.box_fraction >= cfg.box_fraction_threshold),
        box_fraction_narrow_passes: count(&|s| s.box_fraction_narrow >= cfg.box_fraction_threshold),
        row_count_passes: count(&|s| s.rows_in_window as f64 >= expected_rows),
        lambda1_passes: count(&|s| s.lambda1_ok),
        length_passes: count(&|s| s.length_ok),
        mean_box_fraction: mean(&|s| s.box_fraction),
        mean_box_fraction_narrow: mean(&|s| s.box_fraction_narrow),
        wall_time_seconds: wall,
        letters_per_second: if wall > 0.0 {
            n * cfg.samples as f64 / wall
        } else {
            f64::INFINITY
        },
        config: cfg.clone(),
        samples,
    })
}

/// `E[Σ_ρ] = n^{↓|ρ|} N^{ℓ(ρ) - |ρ|}` under the Schur-Weyl measure.
pub fn exact_schur_weyl_expectation(rho: &Partition, n: usize, alphabet: u32) -> Result<Scalar> {
    if alphabet == 0 {
        return Err(Error::Precondition("alphabet size must be positive".into()));
    }
    let big_n = scalar::int(alphabet as i64);
    Ok(Scalar::from_integer(falling_factorial(n, rho.size()))
        * scalar::pow(&big_n, rho.len() as i32 - rho.size() as i32))
}

/// `E[Σ_ρ]` by summing over the RSK shapes of all `N^n` words.
pub fn schur_weyl_expectation_by_words(rho: &Partition, n: usize, alphabet: u32) -> Result<Scalar> {
    if n > 8 || alphabet > 3 {
        return Err(Error::Precondition(
            "word enumeration limited to n <= 8, N <= 3".into(),
        ));
    }
    let law = schur_weyl_word_distribution(n, alphabet)?;
    Ok(law
        .iter()
        .map(|(l, m)| m * crate::character::sigma_eval(rho, l))
        .sum())
}

/// One power sum in the gradation check.
#[derive(Clone, Debug, Serialize)]
pub struct GradationEntry {
    pub rho: String,
    /// `deg_α(p_ρ) = |ρ| + α ℓ(ρ) - α |ρ|`.
    pub degree: f64,
    /// Log-log regression slope of `E[p_ρ]` against `n`.
    pub slope: f64,
    /// `E[p_ρ] / n^{deg_α}` at each `n`.
    pub ratios: Vec<f64>,
    /// Limit of the ratio, `c^{ℓ(ρ) - |ρ|}`.
    pub limit: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradationReport {
    pub c: f64,
    pub alpha: f64,
    pub ns: Vec<usize>,
    pub tolerance: f64,
    pub entries: Vec<GradationEntry>,
}

impl GradationReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

/// Expectation of `p_ρ` under the Schur-Weyl measure with real alphabet
/// size `big_n`, via the Σ-expansion of `p_ρ`.
fn schur_weyl_power_sum_expectation(sigma_terms: &[(Partition, f64)], n: usize, big_n: f64) -> f64 {
    sigma_terms
        .iter()
        .map(|(mu, coef)| {
            coef * falling_factorial_f64(n as f64, mu.size())
                * big_n.powi(mu.len() as i32 - mu.size() as i32)
        })
        .sum()
}

/// Checks that `E[p_ρ]` grows like `n^{deg_α(p_ρ)}` for every `|ρ| ≤ max_size`
/// with `N = c n^α`: the log-regression slope over `ns` must lie within
/// `tolerance` (relative) of `deg_α(p_ρ)`.
pub fn gradation_check(
    c: f64,
    alpha: &Scalar,
    max_size: usize,
    ns: &[usize],
    tolerance: f64,
) -> Result<GradationReport> {
    if ns.len() < 2 {
        return Err(Error::Precondition("need at least two values of n".into()));
    }
    let a = scalar::to_f64(alpha);
    schur_weyl_alphabet(ns[0], c, a)?;
    let mut entries = Vec::new();
    for size in 1..=max_size {
        for rho in crate::partition::partitions_of(size) {
            let sigma = p_to_sigma(&Observable::p(rho.clone()));
            let terms: Vec<(Partition, f64)> = sigma
                .terms()
                .iter()
                .map(|(mu, c)| (mu.clone(), scalar::to_f64(c)))
                .collect();
            let degree = scalar::to_f64(&deg_alpha(&rho, alpha));
            let points: Vec<(f64, f64)> = ns
                .iter()
                .map(|&n| {
                    let big_n = c * (n as f64).powf(a);
                    (
                        (n as f64).ln(),
                        schur_weyl_power_sum_expectation(&terms, n, big_n),
                    )
                })
                .collect();
            let ratios: Vec<f64> = ns
                .iter()
                .zip(&points)
                .map(|(&n, (_, e))| e / (n as f64).powf(degree))
                .collect();
            let positive = points.iter().all(|(_, e)| *e > 0.0);
            let slope = if positive {
                regression_slope(&points.iter().map(|(x, e)| (*x, e.ln())).collect::<Vec<_>>())
            } else {
                f64::NAN
            };
            entries.push(GradationEntry {
                rho: rho.to_string(),
                degree,
                slope,
                ratios,
                limit: c.powi(rho.len() as i32 - rho.size() as i32),
                passed: positive && (slope - degree).abs() <= tolerance * degree,
            });
        }
    }
    Ok(GradationReport {
        c,
        alpha: a,
        ns: ns.to_vec(),
        tolerance,
        entries,
    })
}

fn regression_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Mean of `ℓ(λ)/n` under the q-Plancherel measure at each `n`.
pub fn column_length_ratios(
    ns: &[usize],
    q: &QParameter,
    samples: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<(usize, f64)>> {
    ns.iter()
        .map(|&n| {
            let cfg = MCConfig {
                n,
                measure: Measure::QPlancherel { q: q.clone() },
                samples,
                seed,
                workers,
                stats: Vec::new(),
                mode: SamplerMode::Fast,
            };
            let shapes = sample_partitions(&cfg)?;
            let mean = shapes.iter().map(|l| l.len() as f64).sum::<f64>()
                / (samples as f64 * n.max(1) as f64);
            Ok((n, mean))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;
    use crate::scalar::{int, ratio};

    #[test]
    fn alphabet_size() {
        assert_eq!(schur_weyl_alphabet(100_000, 1.0, 0.4).unwrap(), 100);
        assert_eq!(schur_weyl_alphabet(10_000, 2.0, 0.25).unwrap(), 20);
        assert!(schur_weyl_alphabet(100, 1.0, 0.5).is_err());
        assert!(schur_weyl_alphabet(100, 0.001, 0.1).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let p = |v: &[usize]| Partition::new(v.to_vec()).unwrap();
        assert_eq!(
            exact_schur_weyl_expectation(&p(&[2]), 3, 2).unwrap(),
            int(3)
        );
        assert_eq!(
            exact_schur_weyl_expectation(&p(&[3]), 3, 2).unwrap(),
            ratio(3, 2)
        );
        assert_eq!(
            exact_schur_weyl_expectation(&p(&[1, 1, 1]), 5, 2).unwrap(),
            int(60)
        );
        assert_eq!(
            schur_weyl_expectation_by_words(&p(&[2]), 3, 2).unwrap(),
            int(3)
        );
        assert_eq!(
            schur_weyl_expectation_by_words(&p(&[3]), 3, 2).unwrap(),
            ratio(3, 2)
        );
    }

    #[test]
    fn closed_form_matches_words() {
        for big_n in 1..=3u32 {
            for n in 0..=5 {
                for k in 1..=4 {
                    for rho in partitions_of(k) {
                        assert_eq!(
                            exact_schur_weyl_expectation(&rho, n, big_n).unwrap(),
                            schur_weyl_expectation_by_words(&rho, n, big_n).unwrap(),
                            "ρ={rho} n={n} N={big_n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn single_letter_gives_one_row() {
        let mut cfg = SchurWeylConfig::new(50, 1.0, 0.0, 0.2, 3, 1);
        cfg.box_fraction_threshold = 1.0;
        let r = schur_weyl_check(&cfg).unwrap();
        assert_eq!(r.alphabet, 1);
        assert!(r
            .samples
            .iter()
            .all(|s| s.lambda1 == 50 && s.length == 1 && s.box_fraction == 1.0));
        assert_eq!(r.box_fraction_passes, 3);
    }

    #[test]
    fn check_is_deterministic() {
        let mut cfg = SchurWeylConfig::new(2_000, 1.0, 0.3, 0.2, 6, 3);
        let a = schur_weyl_check(&cfg).unwrap();
        cfg.workers = 2;
        let b = schur_weyl_check(&cfg).unwrap();
        let lens = |r: &SchurWeylReport| {
            r.samples
                .iter()
                .map(|s| (s.lambda1, s.length, s.rows_in_window))
                .collect::<Vec<_>>()
        };
        assert_eq!(lens(&a), lens(&b));
        assert_eq!(a.length_passes, 6);
        assert!(a
            .samples
            .iter()
            .all(|s| s.box_fraction_narrow <= s.box_fraction));
    }

    #[test]
    fn gradation_slopes() {
        let r = gradation_check(1.0, &ratio(2, 5), 4, &[1_000, 10_000, 100_000], 0.05).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert_eq!(r.entries.len(), 1 + 2 + 3 + 5);
        for e in &r.entries {
            assert!((e.ratios[2] - e.limit).abs() < 0.5, "{e:?}");
        }
        let r = gradation_check(2.0, &ratio(1, 4), 3, &[1_000, 10_000, 100_000], 0.05).unwrap();
        assert!(r.all_passed(), "{r:?}");
        let p2 = r.entries.iter().find(|e| e.rho == "[2]").unwrap();
        assert!((p2.ratios[2] - 0.5).abs() < 0.05);
    }

    #[test]
    fn columns_shrink() {
        let r =
            column_length_ratios(&[100, 400, 1600], &QParameter::rational(1, 2), 50, 5, 1).unwrap();
        assert!(r[0].1 > r[1].1 && r[1].1 > r[2].1, "{r:?}");
    }
}
