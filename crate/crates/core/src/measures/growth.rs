//! Sequential sampler for the q-Plancherel growth process.
//!
//! Adding a box in the first row `i` of a block of equal parts only changes
//! hooks in row `i` and in the column of the new box. Grouping columns and
//! rows by blocks of the run-length view, the ratio of q-hook products
//! telescopes to one quotient of q-integers per block, so each candidate
//! weight costs O(#distinct parts).

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::QParameter;
use crate::partition::Partition;
use crate::scalar::{q_integer, Scalar};
use crate::Result;

/// Largest `n` for which exact-rational sampling is used by default.
pub const EXACT_SAMPLER_MAX_N: usize = 200;

/// Deterministic generator for `(seed, stream)`.
///
/// ChaCha8 keyed by `seed` (via `seed_from_u64`) with the stream id set to
/// `stream`; streams are independent and reproducible.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplerMode {
    Fast,
    Exact,
}

/// Current diagram of the chain, in run-length form.
///
/// When sampling at `q > 1` the state holds the conjugate diagram, which
/// evolves as the chain at `1/q`.
#[derive(Clone, Debug, Default)]
pub struct GrowthState {
    runs: Vec<(usize, usize)>,
    step: usize,
}

impl GrowthState {
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn runs(&self) -> &[(usize, usize)] {
        &self.runs
    }

    pub fn partition(&self) -> Partition {
        Partition::from_runs(&self.runs).expect("runs stay valid")
    }

    /// Adds a box to the first row of block `t` (0-based); `t == runs.len()`
    /// starts a new row.
    fn add_box(&mut self, t: usize) {
        let m = self.runs.len();
        if t == m {
            match self.runs.last_mut() {
                Some((1, mult)) => *mult += 1,
                _ => self.runs.push((1, 1)),
            }
        } else {
            let v = self.runs[t].0;
            let mut old = t;
            if t > 0 && self.runs[t - 1].0 == v + 1 {
                self.runs[t - 1].1 += 1;
            } else {
                self.runs.insert(t, (v + 1, 1));
                old = t + 1;
            }
            self.runs[old].1 -= 1;
            if self.runs[old].1 == 0 {
                self.runs.remove(old);
            }
        }
        self.step += 1;
        debug_assert_eq!(self.partition().runs(), self.runs);
    }
}

/// Indices into the telescoped weight of candidate `t`: the q-integer
/// arguments of numerator and denominator factors, plus the power of `q`.
fn candidate_factors(v: &[usize], r: &[usize], t: usize, out: &mut Vec<(usize, usize)>) -> usize {
    // v[0..m] distinct parts, v[m] = 0; r[k] = rows with part >= v[k-1]
    // (1-based blocks), r[0] = 0.
    let m = v.len() - 1;
    out.clear();
    let vt = v[t] as isize;
    let i = r[t] as isize + 1;
    for k in t..m {
        let rk = r[k + 1] as isize;
        let num = vt - v[k] as isize + rk - i + 1;
        let den = vt - v[k + 1] as isize + rk - i + 1;
        out.push((num as usize, den as usize));
    }
    for k in 0..t {
        let base = v[k] as isize - vt + i - 1;
        out.push((
            (base - r[k + 1] as isize) as usize,
            (base - r[k] as isize) as usize,
        ));
    }
    (i - 1) as usize
}

/// Growth-process sampler for a fixed `q`.
pub struct GrowthSampler {
    mode: SamplerMode,
    conjugate: bool,
    q_fast: f64,
    log_q: f64,
    /// `ln(1 - q^h)` for the effective `q < 1`.
    log_table: Vec<f64>,
    /// `1 - q^h` and its reciprocal.
    lin_table: Vec<f64>,
    inv_table: Vec<f64>,
    /// `q^k`.
    pow_table: Vec<f64>,
    /// Smallest `h` with `1 - q^h == 1.0` in floating point.
    saturation: usize,
    q_exact: Option<Scalar>,
    exact_table: Vec<Scalar>,
}

impl GrowthSampler {
    pub fn new(q: &QParameter, mode: SamplerMode) -> Result<Self> {
        let conjugate = q.value() > 1.0;
        let eff = if conjugate { q.inverse() } else { q.clone() };
        let q_exact = match mode {
            SamplerMode::Exact => Some(eff.exact_value()?.clone()),
            SamplerMode::Fast => None,
        };
        let q_fast = eff.value();
        Ok(Self {
            mode,
            conjugate,
            q_fast,
            log_q: q_fast.ln(),
            log_table: vec![f64::NAN],
            lin_table: vec![0.0],
            inv_table: vec![f64::INFINITY],
            pow_table: vec![1.0],
            saturation: usize::MAX,
            q_exact,
            exact_table: vec![Scalar::zero()],
        })
    }

    pub fn mode(&self) -> SamplerMode {
        self.mode
    }

    fn ensure_tables(&mut self, h: usize) {
        while self.log_table.len() <= h {
            let k = self.log_table.len() as i32;
            self.log_table.push((-self.q_fast.powi(k)).ln_1p());
            let lin = -(k as f64 * self.log_q).exp_m1();
            if lin == 1.0 && self.saturation == usize::MAX {
                self.saturation = k as usize;
            }
            self.lin_table.push(lin);
            self.inv_table.push(lin.recip());
            self.pow_table.push(self.q_fast.powi(k));
        }
        if let Some(q) = &self.q_exact {
            while self.exact_table.len() <= h {
                let k = self.exact_table.len();
                self.exact_table.push(q_integer(k, q));
            }
        }
    }

    /// Weight of candidate `t` in floating point. Factors are visited in
    /// order of increasing q-integer argument, so the loops stop once the
    /// remaining factors are exactly 1.
    fn linear_weight(&self, v: &[usize], r: &[usize], t: usize) -> f64 {
        let m = v.len() - 1;
        let vt = v[t] as isize;
        let i = r[t] as isize + 1;
        let mut w = self.pow_table[(i - 1) as usize];
        for k in t..m {
            let rk = r[k + 1] as isize;
            let num = (vt - v[k] as isize + rk - i + 1) as usize;
            if num >= self.saturation {
                break;
            }
            let den = (vt - v[k + 1] as isize + rk - i + 1) as usize;
            w *= self.lin_table[num] * self.inv_table[den];
        }
        for k in (0..t).rev() {
            let base = v[k] as isize - vt + i - 1;
            let num = (base - r[k + 1] as isize) as usize;
            if num >= self.saturation {
                break;
            }
            w *= self.lin_table[num] * self.inv_table[(base - r[k] as isize) as usize];
        }
        w
    }

    /// Weights rescaled by their maximum via log-space products; used when
    /// the direct product leaves the floating-point range.
    fn log_weights(
        &self,
        v: &[usize],
        r: &[usize],
        factors: &mut Vec<(usize, usize)>,
        weights: &mut Vec<f64>,
    ) {
        weights.clear();
        let mut best = f64::NEG_INFINITY;
        for t in 0..v.len() {
            let shift = candidate_factors(v, r, t, factors);
            let mut lw = shift as f64 * self.log_q;
            for &(a, b) in factors.iter() {
                lw += self.log_table[a] - self.log_table[b];
            }
            best = best.max(lw);
            weights.push(lw);
        }
        for w in weights.iter_mut() {
            *w = (*w - best).exp();
        }
    }

    /// Runs the chain for `n` steps and returns the final diagram.
    pub fn sample<R: Rng>(&mut self, n: usize, rng: &mut R) -> Partition {
        let mut state = GrowthState::default();
        self.ensure_tables(n + 2);
        let mut v: Vec<usize> = Vec::new();
        let mut r: Vec<usize> = Vec::new();
        let mut factors = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        let mut exact_weights: Vec<Scalar> = Vec::new();
        for _ in 0..n {
            v.clear();
            r.clear();
            r.push(0);
            for &(value, mult) in &state.runs {
                v.push(value);
                r.push(r.last().unwrap() + mult);
            }
            v.push(0);
            let m = state.runs.len();
            let u: f64 = rng.random();
            let choice = match self.mode {
                SamplerMode::Fast => {
                    weights.clear();
                    let mut total = 0.0;
                    for t in 0..=m {
                        let w = self.linear_weight(&v, &r, t);
                        total += w;
                        weights.push(w);
                    }
                    if !(total.is_finite() && total > 0.0) {
                        self.log_weights(&v, &r, &mut factors, &mut weights);
                        total = weights.iter().sum();
                    }
                    let target = u * total;
                    let mut acc = 0.0;
                    let mut pick = m;
                    for (t, w) in weights.iter().enumerate() {
                        acc += w;
                        if target < acc {
                            pick = t;
                            break;
                        }
                    }
                    pick
                }
                SamplerMode::Exact => {
                    let q = self.q_exact.as_ref().expect("exact q");
                    exact_weights.clear();
                    for t in 0..=m {
                        let shift = candidate_factors(&v, &r, t, &mut factors);
                        let mut w = num_traits::Pow::pow(q, shift as i32);
                        for &(a, b) in &factors {
                            w *= &self.exact_table[a];
                            w /= &self.exact_table[b];
                        }
                        exact_weights.push(w);
                    }
                    debug_assert_eq!(exact_weights.iter().sum::<Scalar>(), Scalar::one());
                    let target = Scalar::from_float(u).expect("finite uniform");
                    let mut acc = Scalar::zero();
                    let mut pick = m;
                    for (t, w) in exact_weights.iter().enumerate() {
                        acc += w;
                        if target < acc {
                            pick = t;
                            break;
                        }
                    }
                    pick
                }
            };
            state.add_box(choice);
        }
        let lambda = state.partition();
        if self.conjugate {
            lambda.conjugate()
        } else {
            lambda
        }
    }

    /// Exact transition weights of all addable cells of `lambda`, in row
    /// order, computed from the telescoped formula (exact mode only).
    pub fn telescoped_weights(&mut self, lambda: &Partition) -> Vec<Scalar> {
        assert!(!self.conjugate, "telescoped weights are defined for q < 1");
        let q = self.q_exact.clone().expect("exact mode");
        self.ensure_tables(lambda.size() + 2);
        let runs = lambda.runs();
        let mut v: Vec<usize> = runs.iter().map(|&(x, _)| x).collect();
        v.push(0);
        let mut r = vec![0];
        for &(_, mult) in &runs {
            r.push(r.last().unwrap() + mult);
        }
        let mut factors = Vec::new();
        (0..=runs.len())
            .map(|t| {
                let shift = candidate_factors(&v, &r, t, &mut factors);
                let mut w = num_traits::Pow::pow(&q, shift as i32);
                for &(a, b) in &factors {
                    w *= &self.exact_table[a];
                    w /= &self.exact_table[b];
                }
                w
            })
            .collect()
    }
}

/// One draw from `M_{n,q}` on stream 0 of `seed`.
///
/// Uses exact rational weights when `q` is exact and `n ≤ EXACT_SAMPLER_MAX_N`,
/// floating-point log-weights otherwise.
pub fn sample_qplancherel(n: usize, q: &QParameter, seed: u64) -> Result<Partition> {
    let mode = if q.is_exact() && n <= EXACT_SAMPLER_MAX_N {
        SamplerMode::Exact
    } else {
        SamplerMode::Fast
    };
    let mut sampler = GrowthSampler::new(q, mode)?;
    Ok(sampler.sample(n, &mut stream_rng(seed, 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{q_transition, qplancherel_mass};
    use crate::partition::partitions_of;
    use std::collections::HashMap;

    #[test]
    fn telescoped_weights_match_direct_transitions() {
        for (a, b) in [(1, 3), (1, 2), (2, 3)] {
            let q = QParameter::rational(a, b);
            let mut s = GrowthSampler::new(&q, SamplerMode::Exact).unwrap();
            for n in 0..=10 {
                for l in partitions_of(n) {
                    let w = s.telescoped_weights(&l);
                    let direct: Vec<Scalar> = l
                        .addable_cells()
                        .iter()
                        .map(|(_, big)| q_transition(&l, big, &q).unwrap())
                        .collect();
                    assert_eq!(w, direct, "{l}");
                }
            }
        }
    }

    #[test]
    fn trivial_sizes() {
        let q = QParameter::rational(1, 2);
        assert_eq!(sample_qplancherel(0, &q, 1).unwrap(), Partition::empty());
        for seed in 0..20 {
            assert_eq!(sample_qplancherel(1, &q, seed).unwrap(), Partition::row(1));
        }
    }

    #[test]
    fn state_tracks_runs() {
        let mut st = GrowthState::default();
        for t in [0, 0, 1, 0, 2, 1, 3, 0] {
            let m = st.runs().len();
            st.add_box(t.min(m));
            assert_eq!(st.partition().runs(), st.runs());
        }
        assert_eq!(st.step(), 8);
    }

    #[test]
    fn deterministic_given_seed() {
        let q = QParameter::Fast(0.5);
        let mut s = GrowthSampler::new(&q, SamplerMode::Fast).unwrap();
        let a = s.sample(500, &mut stream_rng(7, 3));
        let b = s.sample(500, &mut stream_rng(7, 3));
        let c = s.sample(500, &mut stream_rng(7, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.size(), 500);
    }

    #[test]
    fn fast_and_exact_trajectories_reconcile() {
        for (qa, qb) in [(1, 2), (2, 3), (3, 2)] {
            let q = QParameter::rational(qa, qb);
            let mut fast = GrowthSampler::new(&q, SamplerMode::Fast).unwrap();
            let mut exact = GrowthSampler::new(&q, SamplerMode::Exact).unwrap();
            for stream in 0..10 {
                let a = fast.sample(120, &mut stream_rng(11, stream));
                let b = exact.sample(120, &mut stream_rng(11, stream));
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn empirical_law_small_n() {
        for (qa, qb) in [(1, 2), (3, 2)] {
            let q = QParameter::rational(qa, qb);
            let n = 4;
            let draws = 40_000u64;
            let mut s = GrowthSampler::new(&q, SamplerMode::Fast).unwrap();
            let mut counts: HashMap<Partition, u64> = HashMap::new();
            for i in 0..draws {
                *counts
                    .entry(s.sample(n, &mut stream_rng(5, i)))
                    .or_default() += 1;
            }
            for l in partitions_of(n) {
                let p = crate::scalar::to_f64(&qplancherel_mass(&l, &q).unwrap());
                let got = *counts.get(&l).unwrap_or(&0) as f64 / draws as f64;
                let sd = (p * (1.0 - p) / draws as f64).sqrt();
                assert!((got - p).abs() < 4.0 * sd, "{l}: {got} vs {p}");
            }
        }
    }
}
