//! Monte Carlo sampling and aggregation of diagram statistics.
//!
//! Sample `i` always uses the stream `(seed, i)`, and per-sample values are
//! aggregated sequentially in sample order, so reports do not depend on the
//! number of workers.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::measures::{sample_schur_weyl, stream_rng, GrowthSampler, QParameter, SamplerMode};
use crate::observables::{
    qchar_transition, sigma_k_in_p, Direction, Flavor, Observable, SigmaCombination,
};
use crate::partition::Partition;
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

/// Version of the JSON layout of reports.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Measure {
    QPlancherel { q: QParameter },
    SchurWeyl { alphabet: u32 },
}

/// One requested statistic; each is reported divided by its natural scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatSpec {
    /// `λ_i / n`.
    Row(usize),
    /// `p_k / n^k`.
    PowerSum(usize),
    /// `Σ_k / n^k`.
    Sigma(usize),
    /// `Σ_{k,q} / n^k`.
    QCharacter(usize),
    /// `ℓ(λ) / n`.
    Length,
}

impl StatSpec {
    pub fn name(&self) -> String {
        match self {
            Self::Row(i) => format!("lambda_{i}/n"),
            Self::PowerSum(k) => format!("p_{k}/n^{k}"),
            Self::Sigma(k) => format!("Sigma_{k}/n^{k}"),
            Self::QCharacter(k) => format!("Sigma_{k},q/n^{k}"),
            Self::Length => "length/n".to_string(),
        }
    }

    fn degree(&self) -> i32 {
        match self {
            Self::Row(_) | Self::Length => 1,
            Self::PowerSum(k) | Self::Sigma(k) | Self::QCharacter(k) => *k as i32,
        }
    }
}

/// Parses `"rows:3,p:2,3,sigma:2,qchar:2,length"`.
///
/// `rows:k` requests rows `1..=k`; for `p`, `sigma` and `qchar` the numbers
/// are the indices, and bare numbers continue the previous group.
pub fn parse_stats(text: &str) -> Result<Vec<StatSpec>> {
    let mut out = Vec::new();
    let mut group: Option<String> = None;
    for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (name, value) = match token.split_once(':') {
            Some((name, value)) => {
                group = Some(name.trim().to_string());
                (name.trim().to_string(), Some(value.trim()))
            }
            None if token == "length" => {
                out.push(StatSpec::Length);
                group = None;
                continue;
            }
            None => (
                group
                    .clone()
                    .ok_or_else(|| Error::Parse(format!("stray value {token:?}")))?,
                Some(token),
            ),
        };
        let k: usize = value
            .unwrap_or_default()
            .parse()
            .map_err(|_| Error::Parse(format!("bad statistic index in {token:?}")))?;
        if k == 0 {
            return Err(Error::Parse("statistic indices start at 1".into()));
        }
        match name.as_str() {
            "rows" => out.extend((1..=k).map(StatSpec::Row)),
            "row" => out.push(StatSpec::Row(k)),
            "p" => out.push(StatSpec::PowerSum(k)),
            "sigma" => out.push(StatSpec::Sigma(k)),
            "qchar" => out.push(StatSpec::QCharacter(k)),
            other => return Err(Error::Parse(format!("unknown statistic {other:?}"))),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct MCConfig {
    pub n: usize,
    pub measure: Measure,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub stats: Vec<StatSpec>,
    pub mode: SamplerMode,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub measure: String,
    pub q: Option<String>,
    pub alphabet: Option<u32>,
    pub samples: usize,
    pub seed: u64,
    /// Not serialized: reports are identical across worker counts.
    #[serde(skip)]
    pub workers: usize,
    pub mode: String,
    pub statistics: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StatSummary {
    pub name: String,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    pub skewness: f64,
}

/// Aggregated Monte Carlo statistics.
///
/// `covariance` is the sample covariance of the reported statistics and
/// `scaled_covariance` is `n` times it, the covariance of the `√n`-rescaled
/// fluctuations. `covariance_std_error[i][j]` is the standard error of the
/// covariance estimate.
#[derive(Clone, Debug, Serialize)]
pub struct SampleReport {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub samples: usize,
    /// Not serialized, so equal runs give byte-identical JSON.
    #[serde(skip)]
    pub wall_time_seconds: f64,
    pub statistics: Vec<StatSummary>,
    pub covariance: Vec<Vec<f64>>,
    pub covariance_std_error: Vec<Vec<f64>>,
    pub scaled_covariance: Vec<Vec<f64>>,
}

impl SampleReport {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.statistics.iter().position(|s| s.name == name)
    }
}

fn check_config(config: &MCConfig) -> Result<()> {
    if config.samples == 0 {
        return Err(Error::Precondition("samples must be at least 1".into()));
    }
    if config.workers == 0 {
        return Err(Error::Precondition("workers must be at least 1".into()));
    }
    if let Measure::SchurWeyl { alphabet: 0 } = config.measure {
        return Err(Error::Precondition("alphabet size must be positive".into()));
    }
    Ok(())
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))
}

/// Draws `config.samples` diagrams, sample `i` from stream `(seed, i)`.
pub fn sample_partitions(config: &MCConfig) -> Result<Vec<Partition>> {
    check_config(config)?;
    let pool = pool(config.workers)?;
    pool.install(|| match &config.measure {
        Measure::QPlancherel { q } => {
            GrowthSampler::new(q, config.mode)?;
            Ok((0..config.samples as u64)
                .into_par_iter()
                .map_init(
                    || GrowthSampler::new(q, config.mode).expect("validated"),
                    |s, i| s.sample(config.n, &mut stream_rng(config.seed, i)),
                )
                .collect())
        }
        Measure::SchurWeyl { alphabet } => (0..config.samples as u64)
            .into_par_iter()
            .map(|i| sample_schur_weyl(config.n, *alphabet, config.seed, i))
            .collect(),
    })
}

/// Evaluator of the requested statistics on one diagram.
struct Evaluator {
    specs: Vec<StatSpec>,
    /// p-basis expansions for `Σ_k` and `Σ_{k,q}` statistics.
    expansions: Vec<Option<Observable>>,
    max_power: usize,
}

impl Evaluator {
    fn new(specs: &[StatSpec], measure: &Measure) -> Result<Self> {
        let mut expansions = Vec::new();
        let mut max_power = 1;
        for spec in specs {
            let e = match spec {
                StatSpec::Sigma(k) => Some(sigma_k_in_p(*k)),
                StatSpec::QCharacter(k) => {
                    let Measure::QPlancherel { q } = measure else {
                        return Err(Error::Precondition(
                            "quantized characters need a q-Plancherel measure".into(),
                        ));
                    };
                    let qv = match q {
                        QParameter::Exact(v) => v.clone(),
                        QParameter::Fast(v) => {
                            Scalar::from_float(*v).ok_or(Error::ExactModeRequired)?
                        }
                    };
                    let exact_q = QParameter::exact(qv.clone())?;
                    let m = qchar_transition(*k, &exact_q, Direction::QuantizedToClassical)?;
                    let row = Partition::row(*k);
                    let classical = SigmaCombination::from_terms(
                        Flavor::Classical,
                        m.row(&row).map(|(nu, c)| (nu.clone(), c.clone())),
                    );
                    Some(classical.to_observable()?)
                }
                _ => None,
            };
            if let Some(obs) = &e {
                max_power = max_power.max(
                    obs.terms()
                        .keys()
                        .filter_map(|k| k.parts().first().copied())
                        .max()
                        .unwrap_or(1),
                );
            }
            if let StatSpec::PowerSum(k) = spec {
                max_power = max_power.max(*k);
            }
            expansions.push(e);
        }
        Ok(Self {
            specs: specs.to_vec(),
            expansions,
            max_power,
        })
    }

    fn values(&self, lambda: &Partition, n: usize) -> Vec<f64> {
        let scale = n.max(1) as f64;
        let powers: Vec<f64> = (0..=self.max_power)
            .map(|k| {
                if k == 0 {
                    1.0
                } else {
                    lambda.power_sum_f64(k as u32)
                }
            })
            .collect();
        self.specs
            .iter()
            .zip(&self.expansions)
            .map(|(spec, exp)| {
                let raw = match spec {
                    StatSpec::Row(i) => lambda.part(*i) as f64,
                    StatSpec::Length => lambda.len() as f64,
                    StatSpec::PowerSum(k) => powers[*k],
                    StatSpec::Sigma(_) | StatSpec::QCharacter(_) => {
                        exp.as_ref().expect("expansion").evaluate_f64(&powers)
                    }
                };
                raw / scale.powi(spec.degree())
            })
            .collect()
    }
}

/// Samples diagrams and aggregates the requested statistics.
pub fn mc_run(config: &MCConfig) -> Result<SampleReport> {
    let start = Instant::now();
    let evaluator = Evaluator::new(&config.stats, &config.measure)?;
    let diagrams = sample_partitions(config)?;
    let rows: Vec<Vec<f64>> = diagrams
        .iter()
        .map(|l| evaluator.values(l, config.n))
        .collect();
    let (statistics, covariance, covariance_std_error) = aggregate(&config.stats, &rows);
    let n = config.n.max(1) as f64;
    let scaled_covariance = covariance
        .iter()
        .map(|r| r.iter().map(|c| c * n).collect())
        .collect();
    let (measure, q, alphabet) = match &config.measure {
        Measure::QPlancherel { q } => ("qplancherel".to_string(), Some(q.to_string()), None),
        Measure::SchurWeyl { alphabet } => ("schur-weyl".to_string(), None, Some(*alphabet)),
    };
    Ok(SampleReport {
        schema_version: SCHEMA_VERSION,
        config: ConfigEcho {
            n: config.n,
            measure,
            q,
            alphabet,
            samples: config.samples,
            seed: config.seed,
            workers: config.workers,
            mode: format!("{:?}", config.mode).to_lowercase(),
            statistics: config.stats.iter().map(StatSpec::name).collect(),
        },
        samples: config.samples,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        statistics,
        covariance,
        covariance_std_error,
        scaled_covariance,
    })
}

type Aggregates = (Vec<StatSummary>, Vec<Vec<f64>>, Vec<Vec<f64>>);

fn aggregate(specs: &[StatSpec], rows: &[Vec<f64>]) -> Aggregates {
    let count = rows.len() as f64;
    let dims = specs.len();
    let mut means = vec![0.0; dims];
    for r in rows {
        for (m, x) in means.iter_mut().zip(r) {
            *m += x;
        }
    }
    means.iter_mut().for_each(|m| *m /= count);
    let mut cov = vec![vec![0.0; dims]; dims];
    let mut cov_sq = vec![vec![0.0; dims]; dims];
    let mut third = vec![0.0; dims];
    for r in rows {
        let centered: Vec<f64> = r.iter().zip(&means).map(|(x, m)| x - m).collect();
        for i in 0..dims {
            third[i] += centered[i].powi(3);
            for j in 0..dims {
                let p = centered[i] * centered[j];
                cov[i][j] += p;
                cov_sq[i][j] += p * p;
            }
        }
    }
    let denom = (count - 1.0).max(1.0);
    let mut cov_se = vec![vec![0.0; dims]; dims];
    for i in 0..dims {
        for j in 0..dims {
            let mean_p = cov[i][j] / count;
            let var_p = (cov_sq[i][j] / count - mean_p * mean_p).max(0.0);
            cov_se[i][j] = (var_p / count).sqrt();
            cov[i][j] /= denom;
        }
    }
    let summaries = specs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let variance = cov[i][i];
            let m2 = variance * denom / count;
            let skewness = if m2 > 0.0 {
                third[i] / count / m2.powf(1.5)
            } else {
                0.0
            };
            StatSummary {
                name: spec.name(),
                mean: means[i],
                variance,
                std_error: (variance / count).sqrt(),
                skewness,
            }
        })
        .collect();
    (summaries, cov, cov_se)
}

/// `|estimate - target| < max(abs_tol, z · se)`.
pub fn within(estimate: f64, target: f64, abs_tol: f64, z: f64, se: f64) -> bool {
    (estimate - target).abs() < abs_tol.max(z * se)
}

/// Mean of `λ_1 / n` under `M_{n,q}` by exact enumeration, for bridging tests.
pub fn exact_first_row_mean(n: usize, q: &QParameter) -> Result<f64> {
    let f = |l: &Partition| Ok(scalar::ratio(l.part(1) as i64, n.max(1) as i64));
    Ok(scalar::to_f64(&super::exact_expectation(&f, n, q)?))
}
