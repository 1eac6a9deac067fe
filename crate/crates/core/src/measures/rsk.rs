//! RSK row insertion, the Schur-Weyl sampler and permutation statistics.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use super::growth::stream_rng;
use super::QParameter;
use crate::partition::Partition;
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

/// A word of length `n` over the alphabet `{1..N}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    letters: Vec<u32>,
    alphabet: u32,
}

impl Word {
    pub fn new(letters: Vec<u32>, alphabet: u32) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::Precondition("alphabet size must be positive".into()));
        }
        if let Some(&bad) = letters.iter().find(|&&x| x == 0 || x > alphabet) {
            return Err(Error::Precondition(format!(
                "letter {bad} outside 1..={alphabet}"
            )));
        }
        Ok(Self { letters, alphabet })
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Insertion tableau stored row by row as letter counts plus a bitset of the
/// letters present, so the bumped letter is found with a word scan.
struct Tableau {
    words: usize,
    counts: Vec<Vec<u32>>,
    present: Vec<Vec<u64>>,
    lengths: Vec<usize>,
}

impl Tableau {
    fn new(alphabet: u32) -> Self {
        Self {
            words: alphabet as usize / 64 + 1,
            counts: Vec::new(),
            present: Vec::new(),
            lengths: Vec::new(),
        }
    }

    /// Smallest letter `> x` in row `row`.
    fn next_above(&self, row: usize, x: u32) -> Option<u32> {
        let bits = &self.present[row];
        let start = x as usize + 1;
        let mut w = start / 64;
        if w >= self.words {
            return None;
        }
        let mut chunk = bits[w] & (!0u64 << (start % 64));
        loop {
            if chunk != 0 {
                return Some((w * 64 + chunk.trailing_zeros() as usize) as u32);
            }
            w += 1;
            if w >= self.words {
                return None;
            }
            chunk = bits[w];
        }
    }

    fn add(&mut self, row: usize, x: u32) {
        self.counts[row][x as usize] += 1;
        self.present[row][x as usize / 64] |= 1 << (x % 64);
        self.lengths[row] += 1;
    }

    fn remove(&mut self, row: usize, x: u32) {
        let c = &mut self.counts[row][x as usize];
        *c -= 1;
        if *c == 0 {
            self.present[row][x as usize / 64] &= !(1 << (x % 64));
        }
        self.lengths[row] -= 1;
    }

    fn insert(&mut self, mut x: u32, alphabet: u32) {
        let mut row = 0;
        loop {
            if row == self.lengths.len() {
                self.counts.push(vec![0; alphabet as usize + 1]);
                self.present.push(vec![0; self.words]);
                self.lengths.push(0);
            }
            match self.next_above(row, x) {
                None => {
                    self.add(row, x);
                    return;
                }
                Some(y) => {
                    self.remove(row, y);
                    self.add(row, x);
                    x = y;
                    row += 1;
                }
            }
        }
    }
}

/// Common shape of the RSK pair of `w` under row insertion.
pub fn rsk_shape(w: &Word) -> Partition {
    let mut t = Tableau::new(w.alphabet);
    for &x in &w.letters {
        t.insert(x, w.alphabet);
    }
    Partition::new(t.lengths).expect("row insertion keeps rows decreasing")
}

/// RSK shape of a uniform word of length `n` over `{1..N}`, on stream
/// `stream` of `seed`.
pub fn sample_schur_weyl(n: usize, alphabet: u32, seed: u64, stream: u64) -> Result<Partition> {
    if alphabet == 0 {
        return Err(Error::Precondition("alphabet size must be positive".into()));
    }
    let mut rng = stream_rng(seed, stream);
    let letters = (0..n).map(|_| rng.random_range(1..=alphabet)).collect();
    Ok(rsk_shape(&Word::new(letters, alphabet)?))
}

/// `(maj, lis)` of a permutation of `1..n` given in one-line notation.
pub fn perm_statistics(sigma: &[usize]) -> Result<(usize, usize)> {
    let n = sigma.len();
    let mut seen = vec![false; n + 1];
    for &x in sigma {
        if x == 0 || x > n || seen[x] {
            return Err(Error::NotAPermutation(n));
        }
        seen[x] = true;
    }
    let maj = (1..n).filter(|&i| sigma[i - 1] > sigma[i]).sum();
    // Patience sorting: piles[k] is the smallest top of an increasing run of length k+1.
    let mut piles: Vec<usize> = Vec::new();
    for &x in sigma {
        let pos = piles.partition_point(|&top| top < x);
        if pos == piles.len() {
            piles.push(x);
        } else {
            piles[pos] = x;
        }
    }
    Ok((maj, piles.len()))
}

/// Coefficients of `Σ_{σ ∈ S_n} q^{maj(σ)}`, lowest degree first.
pub fn maj_generating_polynomial(n: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; n * n.saturating_sub(1) / 2 + 1];
    for sigma in (1..=n).permutations(n) {
        let (maj, _) = perm_statistics(&sigma).expect("permutation");
        coeffs[maj] += 1;
    }
    coeffs
}

/// Law of the RSK shape of a permutation drawn with probability
/// `q^{maj(σ)} / {n!}_q`, by enumerating `S_n`.
pub fn maj_pushforward(n: usize, q: &QParameter) -> Result<BTreeMap<Partition, Scalar>> {
    if n > 8 {
        return Err(Error::Precondition(
            "maj pushforward enumerates S_n, n <= 8".into(),
        ));
    }
    let qv = q.exact_value()?;
    let mut by_shape: BTreeMap<Partition, Vec<u64>> = BTreeMap::new();
    let max_maj = n * n.saturating_sub(1) / 2;
    for sigma in (1..=n).permutations(n) {
        let (maj, _) = perm_statistics(&sigma)?;
        let letters = sigma.iter().map(|&x| x as u32).collect();
        let shape = rsk_shape(&Word::new(letters, n.max(1) as u32)?);
        by_shape
            .entry(shape)
            .or_insert_with(|| vec![0; max_maj + 1])[maj] += 1;
    }
    let norm = scalar::q_factorial(n, qv);
    Ok(by_shape
        .into_iter()
        .map(|(shape, coeffs)| {
            let value = coeffs.iter().rev().fold(Scalar::zero(), |acc, &c| {
                acc * qv + Scalar::from_integer(BigInt::from(c))
            });
            (shape, value / &norm)
        })
        .collect())
}

/// Exact law of the RSK shape of a uniform word, by enumerating all `N^n` words.
pub fn schur_weyl_word_distribution(
    n: usize,
    alphabet: u32,
) -> Result<BTreeMap<Partition, Scalar>> {
    if alphabet == 0 {
        return Err(Error::Precondition("alphabet size must be positive".into()));
    }
    let total = (alphabet as u128)
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 24);
    let Some(total) = total else {
        return Err(Error::Precondition("too many words to enumerate".into()));
    };
    let mut counts: BTreeMap<Partition, u64> = BTreeMap::new();
    let mut letters = vec![1u32; n];
    for _ in 0..total {
        let shape = rsk_shape(&Word {
            letters: letters.clone(),
            alphabet,
        });
        *counts.entry(shape).or_default() += 1;
        for x in letters.iter_mut() {
            if *x < alphabet {
                *x += 1;
                break;
            }
            *x = 1;
        }
    }
    let den = BigInt::from(total);
    Ok(counts
        .into_iter()
        .map(|(s, c)| (s, Scalar::new(BigInt::from(c), den.clone())))
        .collect())
}
