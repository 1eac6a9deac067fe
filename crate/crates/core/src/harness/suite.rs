//! The exact verification suite over small `n`.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::character::sigma_eval;
use crate::cumulants::qplancherel_sigma_expectation;
use crate::measures::{
    exact_growth_distribution, maj_pushforward, qplancherel_mass, QParameter, GROWTH_DP_MAX_N,
};
use crate::observables::{
    eval_qcharacter, sigma_product, sigma_rho_in_p, Flavor, SigmaCombination,
};
use crate::partition::{partitions_of, Partition};
use crate::scalar::{self, falling_factorial, Scalar};
use crate::Result;

/// Mass function used by the suite; swappable to test the suite itself.
pub type MassFn = dyn Fn(&Partition, &QParameter) -> Result<Scalar> + Sync;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    /// Short identifier `a`..`h`.
    pub id: char,
    pub name: String,
    /// `q` as `"a/b"`, absent for q-independent checks.
    pub q: Option<String>,
    pub passed: bool,
    /// Number of individual identities compared.
    pub cases: usize,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub n_max: usize,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, id: char) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(move |c| c.id == id)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let q =
                c.q.as_deref()
                    .map(|q| format!(" q={q}"))
                    .unwrap_or_default();
            let status = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "{status} ({}) {}{q} [{} cases]", c.id, c.name, c.cases)?;
            if let Some(ce) = &c.counterexample {
                write!(f, " counterexample: {ce}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

struct Tally {
    cases: usize,
    counterexample: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            cases: 0,
            counterexample: None,
        }
    }

    fn compare(&mut self, got: &Scalar, expected: &Scalar, what: impl FnOnce() -> String) {
        self.cases += 1;
        if got != expected && self.counterexample.is_none() {
            self.counterexample = Some(format!(
                "{}: got {}, expected {}",
                what(),
                scalar::format_rational(got),
                scalar::format_rational(expected)
            ));
        }
    }

    fn finish(self, id: char, name: &str, q: Option<&QParameter>) -> CheckResult {
        CheckResult {
            id,
            name: name.to_string(),
            q: q.map(|q| q.to_string()),
            passed: self.counterexample.is_none(),
            cases: self.cases,
            counterexample: self.counterexample,
        }
    }
}

/// Runs the suite against the q-Plancherel masses.
pub fn verify_exact_suite(n_max: usize, q_list: &[QParameter]) -> Result<SuiteReport> {
    verify_exact_suite_with(n_max, q_list, &qplancherel_mass)
}

/// Runs every identity of the suite with `mass` standing in for the
/// q-Plancherel masses:
///
/// (a) masses sum to 1; (b) growth-process marginal equals the masses;
/// (c) `E[Σ_ρ]` closed form for `|ρ| ≤ min(n, 5)`; (d) trace property of
/// `Σ_{ρ,q}` for `|ρ| ≤ min(n, 4)`; (e) conjugation duality;
/// (f) maj pushforward (n ≤ 7); (g) Σ-expansions against characters
/// (n ≤ 8); (h) the product `Σ_2 · Σ_3`.
pub fn verify_exact_suite_with(
    n_max: usize,
    q_list: &[QParameter],
    mass: &MassFn,
) -> Result<SuiteReport> {
    let cap = super::max_exact_n();
    if n_max > cap {
        return Err(crate::Error::Precondition(format!(
            "exact suite limited to n <= {cap} (QYOUNG_MAX_EXACT_N)"
        )));
    }
    let mut checks = Vec::new();
    for q in q_list {
        let qv = q.exact_value()?.clone();
        let tables: Vec<Vec<(Partition, Scalar)>> = (0..=n_max)
            .map(|n| {
                partitions_of(n)
                    .map(|l| mass(&l, q).map(|m| (l, m)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;

        let mut t = Tally::new();
        for (n, table) in tables.iter().enumerate() {
            let total: Scalar = table.iter().map(|(_, m)| m.clone()).sum();
            t.compare(&total, &Scalar::one(), || format!("sum of masses at n={n}"));
        }
        checks.push(t.finish('a', "masses sum to one", Some(q)));

        let mut t = Tally::new();
        for (n, table) in tables.iter().enumerate().take(GROWTH_DP_MAX_N + 1) {
            let dist = exact_growth_distribution(n, q)?;
            for (l, m) in table {
                let got = dist.get(l).cloned().unwrap_or_else(Scalar::zero);
                t.compare(&got, m, || format!("growth marginal of {l}"));
            }
        }
        checks.push(t.finish('b', "growth-process marginal equals mass", Some(q)));

        let mut t = Tally::new();
        for (n, table) in tables.iter().enumerate() {
            for k in 1..=n.min(5) {
                for rho in partitions_of(k) {
                    let e: Scalar = table.iter().map(|(l, m)| m * sigma_eval(&rho, l)).sum();
                    let expected = qplancherel_sigma_expectation(&rho, n, &qv);
                    t.compare(&e, &expected, || format!("E[Sigma_{rho}] at n={n}"));
                }
            }
        }
        checks.push(t.finish('c', "expectation of Sigma_rho closed form", Some(q)));

        let mut t = Tally::new();
        for (n, table) in tables.iter().enumerate() {
            for k in 0..=n.min(4) {
                for rho in partitions_of(k) {
                    let mut e = Scalar::zero();
                    for (l, m) in table {
                        e += m * eval_qcharacter(l, &rho, q)?;
                    }
                    let expected = if rho == Partition::column(k) {
                        Scalar::from_integer(falling_factorial(n, k))
                    } else {
                        Scalar::zero()
                    };
                    t.compare(&e, &expected, || format!("E[Sigma_{{{rho},q}}] at n={n}"));
                }
            }
        }
        checks.push(t.finish('d', "trace property of quantized characters", Some(q)));

        let mut t = Tally::new();
        let inv = q.inverse();
        for table in &tables {
            for (l, m) in table {
                let dual = mass(&l.conjugate(), &inv)?;
                t.compare(&dual, m, || {
                    format!("mass of {} at 1/q vs {l}", l.conjugate())
                });
            }
        }
        checks.push(t.finish('e', "conjugation duality", Some(q)));

        let mut t = Tally::new();
        for (n, table) in tables.iter().enumerate().take(8) {
            let law = maj_pushforward(n, q)?;
            for (l, m) in table {
                let got = law.get(l).cloned().unwrap_or_else(Scalar::zero);
                t.compare(&got, m, || format!("maj pushforward of {l}"));
            }
        }
        checks.push(t.finish('f', "maj-weighted RSK pushforward equals mass", Some(q)));
    }

    let mut t = Tally::new();
    for k in 1..=5 {
        for rho in partitions_of(k) {
            let x = sigma_rho_in_p(&rho);
            for n in 0..=n_max.min(8) {
                for l in partitions_of(n) {
                    t.compare(&x.evaluate(&l), &sigma_eval(&rho, &l), || {
                        format!("Sigma_{rho} at {l}")
                    });
                }
            }
        }
    }
    checks.push(t.finish('g', "Sigma expansions agree with characters", None));

    let mut t = Tally::new();
    let s = |parts: &[usize], c: i64| {
        (
            Partition::new(parts.to_vec()).expect("partition"),
            scalar::int(c),
        )
    };
    let expected = SigmaCombination::from_terms(
        Flavor::Classical,
        [s(&[3, 2], 1), s(&[4], 6), s(&[2, 1], 6)],
    );
    let got = sigma_product(&Partition::row(2), &Partition::row(3));
    t.cases += 1;
    if got != expected {
        t.counterexample = Some(format!("Sigma_2 * Sigma_3 = {got}"));
    }
    checks.push(t.finish('h', "product Sigma_2 * Sigma_3", None));

    Ok(SuiteReport {
        schema_version: super::SCHEMA_VERSION,
        n_max,
        checks,
    })
}
