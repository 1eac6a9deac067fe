//! `qyoung`: command-line access to the exact suites, samplers and algebra.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on
//! invalid input.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qyoung_core::cumulants::{brillinger_check, disjoint_cumulant, identity_cumulant};
use qyoung_core::harness::{
    clt_covariance_targets, gradation_check, mc_run, parse_stats, sample_partitions,
    schur_weyl_alphabet, schur_weyl_check, verify_exact_suite, MCConfig, Measure, SchurWeylConfig,
    TargetKind,
};
use qyoung_core::measures::{SamplerMode, EXACT_SAMPLER_MAX_N};
use qyoung_core::observables::{
    qchar_transition, sigma_k_in_p, sigma_product, sigma_rho_in_p, Direction,
};
use qyoung_core::scalar::{format_rational, parse_rational, to_f64};
use qyoung_core::{Partition, QParameter, Scalar};

#[derive(Parser)]
#[command(
    name = "qyoung",
    version,
    about = "Random Young diagrams under q-Plancherel and Schur-Weyl measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Qplancherel,
    SchurWeyl,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Exact rationals for exact q and n <= 200, floating point otherwise.
    Auto,
    Exact,
    Fast,
}

#[derive(Clone, Copy, ValueEnum)]
enum CumulantKind {
    /// Joint cumulant under the q-Plancherel measure, by enumeration.
    Joint,
    /// Cumulant with respect to the disjoint product (closed form).
    Disjoint,
    /// Identity cumulant, a combination of Sigma symbols.
    Identity,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    /// Quantized characters in terms of classical ones.
    ToClassical,
    /// Classical characters in terms of quantized ones.
    ToQuantized,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Rows,
    Powersums,
    Sigmas,
    Qchars,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact identity suite for all n <= n-max.
    Verify {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Comma-separated rational values of q.
        #[arg(long, default_value = "1/2,2/3")]
        q: String,
        #[arg(long)]
        json: bool,
    },
    /// Draw diagrams; CSV dump without --stats, JSON report with --stats.
    Sample {
        #[arg(long, value_enum, default_value = "qplancherel")]
        measure: MeasureArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/2")]
        q: String,
        /// Alphabet size for the Schur-Weyl measure; defaults to round(c n^alpha).
        #[arg(long)]
        alphabet: Option<u32>,
        #[arg(long, default_value = "1")]
        c: String,
        #[arg(long, default_value = "2/5")]
        alpha: String,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// For example `rows:3,p:2,3,sigma:2,qchar:2,length`.
        #[arg(long)]
        stats: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shape checks for the Schur-Weyl measure with N = round(c n^alpha).
    SchurWeyl {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        c: String,
        #[arg(long, default_value = "2/5")]
        alpha: String,
        #[arg(long, default_value = "1/5")]
        eta: String,
        #[arg(long, default_value = "1/20")]
        epsilon: String,
        /// Minimal box fraction in the window for a sample to pass.
        #[arg(long, default_value = "9/10")]
        threshold: String,
        /// Fraction of samples that must pass the box-fraction test.
        #[arg(long, default_value = "99/100")]
        pass_rate: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Growth exponents of Schur-Weyl power-sum expectations against deg_alpha.
    Gradation {
        #[arg(long, default_value = "1")]
        c: String,
        #[arg(long, default_value = "2/5")]
        alpha: String,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, default_value = "1000,10000,100000")]
        ns: String,
        #[arg(long, default_value = "1/20")]
        tolerance: String,
        #[arg(long)]
        json: bool,
    },
    /// Expand Sigma_k (an integer) or Sigma_rho (a partition such as [2,1]) in power sums.
    SigmaExpand {
        index: String,
        #[arg(long)]
        json: bool,
    },
    /// Product Sigma_mu * Sigma_nu as a combination of Sigma symbols.
    SigmaProduct {
        mu: String,
        nu: String,
        #[arg(long)]
        json: bool,
    },
    /// Transition matrix between quantized and classical characters of degree k.
    QcharMatrix {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1/2")]
        q: String,
        #[arg(long, value_enum, default_value = "to-classical")]
        direction: DirectionArg,
        #[arg(long)]
        json: bool,
    },
    /// Cumulants of Sigma_{i_1}, ..., Sigma_{i_r}.
    Cumulant {
        #[arg(long, value_enum, default_value = "joint")]
        kind: CumulantKind,
        /// Comma-separated indices; `--kind disjoint` also accepts partitions separated by `;`.
        #[arg(long)]
        indices: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value = "1/2")]
        q: String,
        #[arg(long)]
        json: bool,
    },
    /// Limiting covariance of rescaled fluctuations.
    Target {
        #[arg(long, value_enum)]
        kind: TargetArg,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "1/2")]
        q: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn rational(text: &str, what: &str) -> anyhow::Result<Scalar> {
    parse_rational(text).with_context(|| format!("invalid {what} {text:?}"))
}

fn real(text: &str, what: &str) -> anyhow::Result<f64> {
    Ok(to_f64(&rational(text, what)?))
}

fn q_param(text: &str) -> anyhow::Result<QParameter> {
    text.parse::<QParameter>()
        .with_context(|| format!("invalid q {text:?}"))
}

fn partition(text: &str) -> anyhow::Result<Partition> {
    text.parse::<Partition>()
        .with_context(|| format!("invalid partition {text:?}"))
}

fn usize_list(text: &str) -> anyhow::Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .with_context(|| format!("invalid index {t:?}"))
        })
        .collect()
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn output(out: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn terms_json(terms: &BTreeMap<Partition, Scalar>) -> Value {
    Value::Array(
        terms
            .iter()
            .rev()
            .map(|(k, c)| json!({ "partition": k.to_string(), "coefficient": format_rational(c) }))
            .collect(),
    )
}

fn print_json(v: &Value) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Verify { n_max, q, json } => {
            let qs = q
                .split(',')
                .map(|t| q_param(t.trim()))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let report = verify_exact_suite(n_max, &qs)?;
            if json {
                print_json(&serde_json::to_value(&report)?)?;
            } else {
                print!("{report}");
            }
            Ok(report.all_passed())
        }
        Command::Sample {
            measure,
            n,
            q,
            alphabet,
            c,
            alpha,
            samples,
            seed,
            workers,
            stats,
            mode,
            out,
        } => {
            let seed = seed_or_random(seed);
            let measure = match measure {
                MeasureArg::Qplancherel => Measure::QPlancherel { q: q_param(&q)? },
                MeasureArg::SchurWeyl => {
                    let alphabet = match alphabet {
                        Some(a) => a,
                        None => schur_weyl_alphabet(n, real(&c, "c")?, real(&alpha, "alpha")?)?,
                    };
                    Measure::SchurWeyl { alphabet }
                }
            };
            let mode = match mode {
                ModeArg::Exact => SamplerMode::Exact,
                ModeArg::Fast => SamplerMode::Fast,
                ModeArg::Auto => {
                    if n <= EXACT_SAMPLER_MAX_N {
                        SamplerMode::Exact
                    } else {
                        SamplerMode::Fast
                    }
                }
            };
            let stats = stats.as_deref().map(parse_stats).transpose()?;
            let config = MCConfig {
                n,
                measure,
                samples,
                seed,
                workers,
                stats: stats.clone().unwrap_or_default(),
                mode,
            };
            let mut w = output(out.as_ref())?;
            if stats.is_some() {
                let report = mc_run(&config)?;
                eprintln!(
                    "{} samples in {:.2}s",
                    report.samples, report.wall_time_seconds
                );
                writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                writeln!(w, "seed,index,lambda")?;
                for (i, l) in sample_partitions(&config)?.iter().enumerate() {
                    writeln!(w, "{seed},{i},\"{l}\"")?;
                }
            }
            w.flush()?;
            Ok(true)
        }
        Command::SchurWeyl {
            n,
            c,
            alpha,
            eta,
            epsilon,
            threshold,
            pass_rate,
            samples,
            seed,
            workers,
            json,
            out,
        } => {
            let mut cfg = SchurWeylConfig::new(
                n,
                real(&c, "c")?,
                real(&alpha, "alpha")?,
                real(&eta, "eta")?,
                samples,
                seed_or_random(seed),
            );
            cfg.epsilon = real(&epsilon, "epsilon")?;
            cfg.box_fraction_threshold = real(&threshold, "threshold")?;
            cfg.workers = workers;
            let rate = real(&pass_rate, "pass rate")?;
            let r = schur_weyl_check(&cfg)?;
            let needed = (rate * samples as f64).ceil() as usize;
            let passed = r.box_fraction_passes >= needed
                && r.lambda1_passes == samples
                && r.length_passes == samples;
            if let Some(path) = &out {
                let mut w = output(Some(path))?;
                writeln!(w, "{}", serde_json::to_string_pretty(&r)?)?;
                w.flush()?;
            }
            if json {
                print_json(&serde_json::to_value(&r)?)?;
            } else {
                let mark = |ok: bool| if ok { "PASS" } else { "FAIL" };
                println!("n={n} N={} samples={samples} seed={}", r.alphabet, cfg.seed);
                println!(
                    "{} box fraction >= {} in [{:.3}, {:.3}]·n^(1-alpha): {}/{samples} (need {needed}), mean {:.4}",
                    mark(r.box_fraction_passes >= needed),
                    cfg.box_fraction_threshold,
                    r.window.0,
                    r.window.1,
                    r.box_fraction_passes,
                    r.mean_box_fraction
                );
                println!(
                    "     narrow window [{:.3}, {:.3}]: {}/{samples}, mean {:.4}",
                    r.window_narrow.0,
                    r.window_narrow.1,
                    r.box_fraction_narrow_passes,
                    r.mean_box_fraction_narrow
                );
                println!(
                    "     rows in window >= (1-eta)/c·n^alpha = {:.2}: {}/{samples}",
                    r.expected_rows, r.row_count_passes
                );
                println!(
                    "{} lambda_1 <= n^(1-alpha+eps) = {:.1}: {}/{samples}",
                    mark(r.lambda1_passes == samples),
                    r.lambda1_bound,
                    r.lambda1_passes
                );
                println!(
                    "{} length <= N: {}/{samples}",
                    mark(r.length_passes == samples),
                    r.length_passes
                );
                println!(
                    "rate {:.3e} letters/s, {:.2}s",
                    r.letters_per_second, r.wall_time_seconds
                );
            }
            Ok(passed)
        }
        Command::Gradation {
            c,
            alpha,
            max_size,
            ns,
            tolerance,
            json,
        } => {
            let r = gradation_check(
                real(&c, "c")?,
                &rational(&alpha, "alpha")?,
                max_size,
                &usize_list(&ns)?,
                real(&tolerance, "tolerance")?,
            )?;
            if json {
                print_json(&serde_json::to_value(&r)?)?;
            } else {
                for e in &r.entries {
                    println!(
                        "{} p{} deg={:.4} slope={:.4} ratios={:?} limit={:.4}",
                        if e.passed { "PASS" } else { "FAIL" },
                        e.rho,
                        e.degree,
                        e.slope,
                        e.ratios,
                        e.limit
                    );
                }
            }
            Ok(r.all_passed())
        }
        Command::SigmaExpand { index, json } => {
            let (label, x) = match index.trim().parse::<usize>() {
                Ok(k) if k > 0 => (format!("[{k}]"), sigma_k_in_p(k)),
                Ok(_) => bail!("index must be positive"),
                Err(_) => {
                    let rho = partition(&index)?;
                    (rho.to_string(), sigma_rho_in_p(&rho))
                }
            };
            if json {
                print_json(
                    &json!({ "sigma": label, "basis": "p", "terms": terms_json(x.terms()) }),
                )?;
            } else {
                println!("S{label} = {x}");
            }
            Ok(true)
        }
        Command::SigmaProduct { mu, nu, json } => {
            let (mu, nu) = (partition(&mu)?, partition(&nu)?);
            let x = sigma_product(&mu, &nu);
            if json {
                print_json(
                    &json!({ "mu": mu.to_string(), "nu": nu.to_string(), "terms": terms_json(x.terms()) }),
                )?;
            } else {
                println!("S{mu} * S{nu} = {x}");
            }
            Ok(true)
        }
        Command::QcharMatrix {
            k,
            q,
            direction,
            json,
        } => {
            let q = q_param(&q)?;
            let direction = match direction {
                DirectionArg::ToClassical => Direction::QuantizedToClassical,
                DirectionArg::ToQuantized => Direction::ClassicalToQuantized,
            };
            let m = qchar_transition(k, &q, direction)?;
            let labels: Vec<String> = m.index.iter().map(ToString::to_string).collect();
            let rows: Vec<Vec<String>> = m
                .entries
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect();
            if json {
                print_json(
                    &json!({ "k": k, "q": q.to_string(), "index": labels, "entries": rows }),
                )?;
            } else {
                println!("rows and columns: {}", labels.join(" "));
                for (label, row) in labels.iter().zip(&rows) {
                    println!("{label}: {}", row.join(" "));
                }
            }
            Ok(true)
        }
        Command::Cumulant {
            kind,
            indices,
            n,
            q,
            json,
        } => {
            let q = q_param(&q)?;
            match kind {
                CumulantKind::Joint => {
                    let idx = usize_list(&indices)?;
                    let (lhs, rhs) = brillinger_check(&idx, n, &q)?;
                    let agree = lhs == rhs;
                    if json {
                        print_json(&json!({
                            "kind": "joint", "indices": idx, "n": n, "q": q.to_string(),
                            "value": format_rational(&lhs), "cumulant_expansion": format_rational(&rhs), "agree": agree
                        }))?;
                    } else {
                        println!("k(S_{indices}) at n={n}, q={q}: {}", format_rational(&lhs));
                        println!(
                            "{} via identity cumulants: {}",
                            if agree { "PASS" } else { "FAIL" },
                            format_rational(&rhs)
                        );
                    }
                    Ok(agree)
                }
                CumulantKind::Disjoint => {
                    let parts: Vec<Partition> = if indices.contains(';') || indices.contains('[') {
                        indices
                            .split(';')
                            .map(partition)
                            .collect::<anyhow::Result<_>>()?
                    } else {
                        usize_list(&indices)?
                            .into_iter()
                            .map(Partition::row)
                            .collect()
                    };
                    let v = disjoint_cumulant(&parts, n, &q)?;
                    if json {
                        let labels: Vec<String> = parts.iter().map(ToString::to_string).collect();
                        print_json(
                            &json!({ "kind": "disjoint", "indices": labels, "n": n, "q": q.to_string(), "value": format_rational(&v) }),
                        )?;
                    } else {
                        println!("{}", format_rational(&v));
                    }
                    Ok(true)
                }
                CumulantKind::Identity => {
                    let idx = usize_list(&indices)?;
                    let x = identity_cumulant(&idx)?;
                    if json {
                        print_json(
                            &json!({ "kind": "identity", "indices": idx, "terms": terms_json(x.terms()) }),
                        )?;
                    } else {
                        println!("{x}");
                    }
                    Ok(true)
                }
            }
        }
        Command::Target { kind, l, m, q } => {
            let kind = match kind {
                TargetArg::Rows => TargetKind::Rows,
                TargetArg::Powersums => TargetKind::PowerSums,
                TargetArg::Sigmas => TargetKind::Sigmas,
                TargetArg::Qchars => TargetKind::QChars,
            };
            println!(
                "{}",
                format_rational(&clt_covariance_targets(&q_param(&q)?, kind, l, m)?)
            );
            Ok(true)
        }
    }
}
