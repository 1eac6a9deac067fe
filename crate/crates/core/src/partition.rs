//! Integer partitions and the statistics of their Young diagrams.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::scalar::{factorial, Scalar};
use crate::{Error, Result};

/// A partition `λ_1 ≥ λ_2 ≥ ... ≥ λ_ℓ ≥ 1`.
///
/// Ordered first by size, then lexicographically by parts, so maps keyed by
/// partitions list small diagrams first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    size: usize,
    parts: Vec<usize>,
}

/// Modified Frobenius coordinates `a_i* = λ_i - i + 1/2`, `b_i* = λ'_i - i + 1/2`,
/// stored doubled so that they stay integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusCoordinates {
    pub d: usize,
    pub doubled_a: Vec<u64>,
    pub doubled_b: Vec<u64>,
}

impl Partition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a partition from weakly decreasing positive parts.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} has a zero part"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(Self::from_sorted(parts))
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::from_sorted(parts)
    }

    fn from_sorted(parts: Vec<usize>) -> Self {
        Self {
            size: parts.iter().sum(),
            parts,
        }
    }

    /// The one-row partition `(n)`, or `∅` for `n = 0`.
    pub fn row(n: usize) -> Self {
        Self::from_unsorted(vec![n])
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Self::from_sorted(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (1-based), zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.parts.get(i - 1).copied().unwrap_or(0)
        }
    }

    /// `(value, multiplicity)` pairs, values strictly decreasing.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn from_runs(runs: &[(usize, usize)]) -> Result<Self> {
        let parts = runs
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m))
            .collect();
        Self::new(parts)
    }

    /// Multiplicity of each part size: entry `i` counts parts equal to `i`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.parts.first().map_or(1, |&p| p + 1)];
        for &p in &self.parts {
            m[p] += 1;
        }
        m
    }

    pub fn conjugate(&self) -> Self {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count())
            .collect();
        Self::from_sorted(parts)
    }

    /// Hook lengths of all boxes, row by row.
    pub fn hooks(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                out.push(row - j + conj.parts[j] - i - 1);
            }
        }
        out
    }

    /// Number of standard tableaux, `n! / ∏ h(□)`.
    pub fn dimension(&self) -> BigUint {
        let prod = self
            .hooks()
            .into_iter()
            .fold(BigUint::one(), |acc, h| acc * BigUint::from(h));
        factorial(self.size)
            .to_biguint()
            .expect("factorial is positive")
            / prod
    }

    /// `b(λ) = Σ (i-1) λ_i`.
    pub fn b_statistic(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, &p)| i * p).sum()
    }

    /// `z_λ = ∏ i^{m_i} m_i!`.
    pub fn z_coefficient(&self) -> BigInt {
        let mut z = BigInt::one();
        for (v, m) in self.runs() {
            z *= num_traits::pow(BigInt::from(v), m) * factorial(m);
        }
        z
    }

    pub fn frobenius(&self) -> FrobeniusCoordinates {
        let conj = self.conjugate();
        let d = self
            .parts
            .iter()
            .enumerate()
            .take_while(|&(i, &p)| p > i)
            .count();
        let doubled = |v: &[usize]| (0..d).map(|i| (2 * v[i] - 2 * i - 1) as u64).collect();
        FrobeniusCoordinates {
            d,
            doubled_a: doubled(&self.parts),
            doubled_b: doubled(&conj.parts),
        }
    }

    /// `p_k(λ) = Σ (a_i*)^k - (-b_i*)^k`, exactly.
    pub fn power_sum(&self, k: u32) -> Scalar {
        let f = self.frobenius();
        let mut num = BigInt::from(0);
        for (a, b) in f.doubled_a.iter().zip(&f.doubled_b) {
            num += num_traits::pow(BigInt::from(*a), k as usize);
            num -= num_traits::pow(-BigInt::from(*b), k as usize);
        }
        Scalar::new(num, num_traits::pow(BigInt::from(2), k as usize))
    }

    /// `2^k p_k(λ)` in machine integers, `None` on overflow.
    pub fn doubled_power_sum_i128(&self, k: u32) -> Option<i128> {
        let f = self.frobenius();
        let mut acc: i128 = 0;
        for (&a, &b) in f.doubled_a.iter().zip(&f.doubled_b) {
            let pa = (a as i128).checked_pow(k)?;
            let pb = (-(b as i128)).checked_pow(k)?;
            acc = acc.checked_add(pa)?.checked_sub(pb)?;
        }
        Some(acc)
    }

    /// `p_k(λ)` as a float; exact integer arithmetic when it fits.
    pub fn power_sum_f64(&self, k: u32) -> f64 {
        match self.doubled_power_sum_i128(k) {
            Some(v) => v as f64 / 2f64.powi(k as i32),
            None => crate::scalar::to_f64(&self.power_sum(k)),
        }
    }

    /// Every `Λ` obtained by adding one box, with the 1-based row of the box.
    pub fn addable_cells(&self) -> Vec<(usize, Partition)> {
        let mut out = Vec::new();
        for i in 0..=self.parts.len() {
            let cur = self.part(i + 1);
            if i == 0 || self.parts[i - 1] > cur {
                let mut parts = self.parts.clone();
                if i == parts.len() {
                    parts.push(1);
                } else {
                    parts[i] += 1;
                }
                out.push((i + 1, Self::from_sorted(parts)));
            }
        }
        out
    }

    /// Whether `other` is obtained from `self` by adding one box.
    pub fn is_covered_by(&self, other: &Partition) -> bool {
        if other.size != self.size + 1 || other.len() < self.len() || other.len() > self.len() + 1 {
            return false;
        }
        let diffs: usize = (0..other.len())
            .map(|i| other.parts[i] - self.part(i + 1).min(other.parts[i]))
            .sum();
        diffs == 1 && (0..self.len()).all(|i| other.parts[i] >= self.parts[i])
    }

    /// Union of parts, as used for disjoint products of character symbols.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Self::from_unsorted(parts)
    }

    /// Whether `self` is obtained by splitting the parts of `coarse`.
    pub fn refines(&self, coarse: &Partition) -> bool {
        fn fill(parts: &[usize], bins: &mut [usize]) -> bool {
            let Some((&p, rest)) = parts.split_first() else {
                return bins.iter().all(|&b| b == 0);
            };
            for i in 0..bins.len() {
                if bins[i] >= p && (i == 0 || bins[i] != bins[i - 1]) {
                    bins[i] -= p;
                    if fill(rest, bins) {
                        bins[i] += p;
                        return true;
                    }
                    bins[i] += p;
                }
            }
            false
        }
        self.size == coarse.size && fill(&self.parts, &mut coarse.parts.clone())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `"[3,1]"`, `"3,1"` and `"[]"`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .unwrap_or(t)
            .trim();
        if inner.is_empty() {
            return Ok(Self::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Iterator over the partitions of `n` in reverse lexicographic order,
/// starting at `(n)` and ending at `(1^n)`.
pub struct PartitionsOf {
    next: Option<Vec<usize>>,
}

pub fn partitions_of(n: usize) -> PartitionsOf {
    PartitionsOf {
        next: Some(if n == 0 { Vec::new() } else { vec![n] }),
    }
}

impl Iterator for PartitionsOf {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.next.take()?;
        // Successor: strip trailing ones, decrement the last part > 1, then
        // refill greedily with parts no larger than it.
        let mut parts = cur.clone();
        let mut ones = 0;
        while parts.last() == Some(&1) {
            parts.pop();
            ones += 1;
        }
        if let Some(last) = parts.last_mut() {
            *last -= 1;
            let cap = *last;
            let mut rest = ones + 1;
            while rest > 0 {
                let take = rest.min(cap);
                parts.push(take);
                rest -= take;
            }
            self.next = Some(parts);
        }
        Some(Partition::from_sorted(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Euler's pentagonal recurrence for the partition function.
    fn pentagonal_count(n: usize) -> u64 {
        let mut pn = vec![0i64; n + 1];
        pn[0] = 1;
        for m in 1..=n {
            let mut k: i64 = 1;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > m {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                pn[m] += sign * pn[m - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= m {
                    pn[m] += sign * pn[m - g2];
                }
                k += 1;
            }
        }
        pn[n] as u64
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(
            partitions_of(0).collect::<Vec<_>>(),
            vec![Partition::empty()]
        );
        let four: Vec<_> = partitions_of(4).map(|l| l.parts().to_vec()).collect();
        assert_eq!(
            four,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
        for n in 0..=30 {
            assert_eq!(
                partitions_of(n).count() as u64,
                pentagonal_count(n),
                "n={n}"
            );
        }
        assert_eq!(partitions_of(30).count(), 5604);
    }

    #[test]
    fn conjugates() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[1, 1, 1]).conjugate(), p(&[3]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        for n in 0..=12 {
            for l in partitions_of(n) {
                assert_eq!(l.conjugate().conjugate(), l);
            }
        }
    }

    #[test]
    fn hooks_and_dimensions() {
        let mut h = p(&[2, 1]).hooks();
        h.sort();
        assert_eq!(h, vec![1, 1, 3]);
        let mut h = p(&[2, 2]).hooks();
        h.sort();
        assert_eq!(h, vec![1, 2, 2, 3]);
        let mut h = p(&[5]).hooks();
        h.sort();
        assert_eq!(h, vec![1, 2, 3, 4, 5]);
        assert_eq!(p(&[2, 1]).dimension(), BigUint::from(2u32));
        assert_eq!(p(&[6]).dimension(), BigUint::one());
        for n in 0..=12 {
            let total: BigUint = partitions_of(n).map(|l| l.dimension().pow(2)).sum();
            assert_eq!(BigInt::from(total), factorial(n));
        }
    }

    #[test]
    fn b_statistic_values() {
        assert_eq!(p(&[2, 1]).b_statistic(), 1);
        assert_eq!(p(&[7]).b_statistic(), 0);
        for k in 0..10 {
            assert_eq!(
                Partition::column(k).b_statistic(),
                k * k.saturating_sub(1) / 2
            );
        }
    }

    #[test]
    fn frobenius_examples() {
        let f = p(&[3, 1]).frobenius();
        assert_eq!((f.d, f.doubled_a, f.doubled_b), (1, vec![5], vec![3]));
        let f = p(&[2, 1]).frobenius();
        assert_eq!((f.d, f.doubled_a, f.doubled_b), (1, vec![3], vec![3]));
        let f = Partition::empty().frobenius();
        assert_eq!(f.d, 0);
        assert!(f.doubled_a.is_empty() && f.doubled_b.is_empty());
        for n in 0..=12 {
            for l in partitions_of(n) {
                let f = l.frobenius();
                let s: u64 = f.doubled_a.iter().chain(&f.doubled_b).sum();
                assert_eq!(s as usize, 2 * n);
            }
        }
    }

    /// Power sums from the explicit alphabet of contents: a row of length r
    /// starting at content c contributes, and the rest cancels telescopically.
    fn power_sum_by_contents(l: &Partition, k: u32) -> Scalar {
        // p_k = Σ_i [(λ_i - i + 1/2)^k - (-i + 1/2)^k] summed over all rows
        // of an infinite staircase, which equals the Frobenius sum.
        let mut acc = Scalar::from_integer(0.into());
        let rows = l.len().max(1) + l.part(1) + 2;
        for i in 1..=rows {
            let a = ratio(2 * l.part(i) as i64 - 2 * i as i64 + 1, 2);
            let b = ratio(-2 * i as i64 + 1, 2);
            acc += crate::scalar::pow(&a, k as i32) - crate::scalar::pow(&b, k as i32);
        }
        acc
    }

    #[test]
    fn power_sums() {
        assert_eq!(p(&[3, 1]).power_sum(2), int(4));
        assert_eq!(p(&[2, 1]).power_sum(3), ratio(27, 4));
        for n in 0..=10 {
            for l in partitions_of(n) {
                assert_eq!(l.power_sum(1), int(n as i64));
                for k in 1..=6 {
                    assert_eq!(l.power_sum(k), power_sum_by_contents(&l, k), "{l} k={k}");
                    assert_eq!(l.power_sum_f64(k), crate::scalar::to_f64(&l.power_sum(k)));
                }
            }
        }
    }

    #[test]
    fn addable_cell_examples() {
        assert_eq!(Partition::empty().addable_cells(), vec![(1, p(&[1]))]);
        assert_eq!(
            p(&[2, 1]).addable_cells(),
            vec![(1, p(&[3, 1])), (2, p(&[2, 2])), (3, p(&[2, 1, 1]))]
        );
        assert_eq!(
            p(&[3, 3]).addable_cells(),
            vec![(1, p(&[4, 3])), (3, p(&[3, 3, 1]))]
        );
        for n in 0..=9 {
            for l in partitions_of(n) {
                let cells = l.addable_cells();
                assert_eq!(cells.len(), l.runs().len() + 1);
                for (_, big) in cells {
                    assert!(l.is_covered_by(&big));
                    assert_eq!(big.size(), n + 1);
                }
            }
        }
        assert!(!p(&[2]).is_covered_by(&p(&[1, 1, 1])));
        assert!(!p(&[2, 1]).is_covered_by(&p(&[3, 1, 1])));
    }

    #[test]
    fn text_round_trip() {
        assert_eq!(Partition::empty().to_string(), "[]");
        assert_eq!("[]".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!("[3, 1]".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!("2,2".parse::<Partition>().unwrap(), p(&[2, 2]));
        assert!("[1,2]".parse::<Partition>().is_err());
        assert!("[0]".parse::<Partition>().is_err());
        assert!("[a]".parse::<Partition>().is_err());
    }

    #[test]
    fn refinement() {
        assert!(p(&[1, 1, 1]).refines(&p(&[2, 1])));
        assert!(p(&[2, 1, 1]).refines(&p(&[2, 2])));
        assert!(!p(&[3, 1]).refines(&p(&[2, 2])));
        assert!(p(&[2, 2]).refines(&p(&[4])));
        assert!(p(&[3, 2]).refines(&p(&[3, 2])));
    }

    #[test]
    fn z_values() {
        assert_eq!(p(&[1, 1, 1]).z_coefficient(), BigInt::from(6));
        assert_eq!(p(&[2, 2, 1]).z_coefficient(), BigInt::from(8));
        assert_eq!(Partition::empty().z_coefficient(), BigInt::one());
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        proptest::collection::vec(1usize..12, 0..10).prop_map(Partition::from_unsorted)
    }

    proptest! {
        #[test]
        fn invariants_hold(l in arb_partition()) {
            prop_assert!(l.parts().windows(2).all(|w| w[0] >= w[1]));
            prop_assert_eq!(l.size(), l.parts().iter().sum::<usize>());
            prop_assert_eq!(Partition::from_runs(&l.runs()).unwrap(), l.clone());
            prop_assert_eq!(l.conjugate().conjugate(), l.clone());
            prop_assert_eq!(l.hooks().len(), l.size());
            prop_assert_eq!(l.to_string().parse::<Partition>().unwrap(), l.clone());
            prop_assert_eq!(l.conjugate().size(), l.size());
        }
    }
}
