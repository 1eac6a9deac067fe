//! q-Plancherel and Schur-Weyl measures: exact masses, transitions and samplers.

mod growth;
mod rsk;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::partition::{partitions_of, Partition};
use crate::scalar::{self, parse_rational, pow, q_factorial, q_integer, Scalar};
use crate::{Error, Result};

pub use growth::{
    sample_qplancherel, stream_rng, GrowthSampler, GrowthState, SamplerMode, EXACT_SAMPLER_MAX_N,
};
pub use rsk::{
    maj_generating_polynomial, maj_pushforward, perm_statistics, rsk_shape, sample_schur_weyl,
    schur_weyl_word_distribution, Word,
};

/// Largest `n` accepted by [`exact_growth_distribution`].
pub const GROWTH_DP_MAX_N: usize = 20;

/// The deformation parameter `q > 0`, `q ≠ 1`.
///
/// `Exact` carries a rational and enables exact arithmetic; `Fast` carries a
/// float and is only usable by the samplers.
#[derive(Clone, Debug, PartialEq)]
pub enum QParameter {
    Exact(Scalar),
    Fast(f64),
}

impl QParameter {
    pub fn exact(q: Scalar) -> Result<Self> {
        if q <= Scalar::zero() {
            return Err(Error::InvalidQ(format!("q must be positive, got {q}")));
        }
        if q.is_one() {
            return Err(Error::InvalidQ("q=1 unsupported".into()));
        }
        Ok(Self::Exact(q))
    }

    pub fn fast(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidQ(format!(
                "q must be positive and finite, got {q}"
            )));
        }
        if q == 1.0 {
            return Err(Error::InvalidQ("q=1 unsupported".into()));
        }
        Ok(Self::Fast(q))
    }

    /// `q = num/den`, panicking on invalid input; for tests and constants.
    pub fn rational(num: i64, den: i64) -> Self {
        Self::exact(scalar::ratio(num, den)).expect("valid q")
    }

    pub fn value(&self) -> f64 {
        match self {
            Self::Exact(q) => scalar::to_f64(q),
            Self::Fast(q) => *q,
        }
    }

    pub fn exact_value(&self) -> Result<&Scalar> {
        match self {
            Self::Exact(q) => Ok(q),
            Self::Fast(_) => Err(Error::ExactModeRequired),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn inverse(&self) -> Self {
        match self {
            Self::Exact(q) => Self::Exact(q.recip()),
            Self::Fast(q) => Self::Fast(1.0 / q),
        }
    }
}

impl FromStr for QParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::exact(parse_rational(s)?)
    }
}

impl fmt::Display for QParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact(q) => write!(f, "{}", scalar::format_rational(q)),
            Self::Fast(q) => write!(f, "{q}"),
        }
    }
}

fn q_hook_product(lambda: &Partition, q: &Scalar) -> Scalar {
    let mut table: Vec<Scalar> = Vec::new();
    let mut acc = Scalar::one();
    for h in lambda.hooks() {
        while table.len() <= h {
            table.push(q_integer(table.len(), q));
        }
        acc *= &table[h];
    }
    acc
}

/// Generic degree `D_λ(q) = q^{b(λ)} {n!}_q / ∏ {h(□)}_q`.
pub fn generic_degree(lambda: &Partition, q: &QParameter) -> Result<Scalar> {
    let q = q.exact_value()?;
    Ok(
        pow(q, lambda.b_statistic() as i32) * q_factorial(lambda.size(), q)
            / q_hook_product(lambda, q),
    )
}

/// `M_{n,q}(λ) = D_λ(q) dim λ / {n!}_q`.
pub fn qplancherel_mass(lambda: &Partition, q: &QParameter) -> Result<Scalar> {
    let qv = q.exact_value()?;
    let dim = Scalar::from_integer(BigInt::from(lambda.dimension()));
    Ok(generic_degree(lambda, q)? * dim / q_factorial(lambda.size(), qv))
}

/// `p_q(λ, Λ) = q^{b(Λ)-b(λ)} ∏_λ {h}_q / ∏_Λ {h}_q` for `λ ↗ Λ`.
pub fn q_transition(from: &Partition, to: &Partition, q: &QParameter) -> Result<Scalar> {
    let qv = q.exact_value()?;
    if !from.is_covered_by(to) {
        return Err(Error::NotACover {
            from: from.to_string(),
            to: to.to_string(),
        });
    }
    let shift = (to.b_statistic() - from.b_statistic()) as i32;
    Ok(pow(qv, shift) * q_hook_product(from, qv) / q_hook_product(to, qv))
}

/// Exact law of the `n`-th diagram of the growth process, by dynamic
/// programming over the Young graph.
pub fn exact_growth_distribution(n: usize, q: &QParameter) -> Result<BTreeMap<Partition, Scalar>> {
    if n > GROWTH_DP_MAX_N {
        return Err(Error::Precondition(format!(
            "growth DP limited to n <= {GROWTH_DP_MAX_N}"
        )));
    }
    q.exact_value()?;
    let mut layer: BTreeMap<Partition, Scalar> = BTreeMap::new();
    layer.insert(Partition::empty(), Scalar::one());
    for _ in 0..n {
        let mut next: BTreeMap<Partition, Scalar> = BTreeMap::new();
        for (lambda, mass) in &layer {
            for (_, big) in lambda.addable_cells() {
                let w = q_transition(lambda, &big, q)?;
                *next.entry(big).or_insert_with(Scalar::zero) += mass * w;
            }
        }
        layer = next;
    }
    Ok(layer)
}

/// A probability measure on partitions of each size, given by exact masses.
pub trait PartitionMeasure: Sync {
    fn mass(&self, lambda: &Partition) -> Result<Scalar>;
}

pub struct QPlancherel(pub QParameter);

impl PartitionMeasure for QPlancherel {
    fn mass(&self, lambda: &Partition) -> Result<Scalar> {
        qplancherel_mass(lambda, &self.0)
    }
}

/// Schur-Weyl measure for the alphabet `{1..N}`.
pub struct SchurWeyl(pub usize);

impl PartitionMeasure for SchurWeyl {
    fn mass(&self, lambda: &Partition) -> Result<Scalar> {
        schur_weyl_mass(lambda, self.0)
    }
}

/// `dim λ · s_λ(1^N) / N^n`, with `s_λ(1^N) = ∏ (N + j - i) / h(i,j)`.
pub fn schur_weyl_mass(lambda: &Partition, alphabet: usize) -> Result<Scalar> {
    if alphabet == 0 {
        return Err(Error::Precondition("alphabet size must be positive".into()));
    }
    let n_big = alphabet as i64;
    let mut content = Scalar::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            content *= scalar::int(n_big + j as i64 - i as i64);
        }
    }
    let hooks = lambda
        .hooks()
        .into_iter()
        .fold(BigInt::one(), |acc, h| acc * BigInt::from(h));
    let dim = Scalar::from_integer(BigInt::from(lambda.dimension()));
    Ok(
        dim * content
            / Scalar::from_integer(hooks)
            / pow(&scalar::int(n_big), lambda.size() as i32),
    )
}

/// All `(λ, mass)` pairs for `λ ⊢ n`.
pub fn mass_table(n: usize, measure: &dyn PartitionMeasure) -> Result<Vec<(Partition, Scalar)>> {
    partitions_of(n)
        .map(|l| measure.mass(&l).map(|m| (l, m)))
        .collect()
}
