//! Irreducible characters of symmetric groups by the Murnaghan-Nakayama rule.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;

use crate::partition::Partition;
use crate::scalar::{falling_factorial, Scalar};
use crate::{Error, Result};

type Memo = HashMap<(Vec<usize>, Vec<usize>), i128>;

thread_local! {
    static MEMO: RefCell<Memo> = RefCell::new(HashMap::new());
}

/// Non-normalized character `ς^λ(ρ)`: the trace of a permutation of cycle
/// type `ρ` in the irreducible representation indexed by `λ`.
pub fn character(lambda: &Partition, rho: &Partition) -> Result<i128> {
    if lambda.size() != rho.size() {
        return Err(Error::SizeMismatch {
            expected: lambda.size(),
            actual: rho.size(),
        });
    }
    Ok(mn(lambda.parts(), rho.parts()))
}

/// Normalized character `χ^λ(ρ) = ς^λ(ρ) / dim λ`.
pub fn normalized_character(lambda: &Partition, rho: &Partition) -> Result<Scalar> {
    let value = character(lambda, rho)?;
    let dim = BigInt::from(lambda.dimension());
    Ok(Scalar::new(BigInt::from(value), dim))
}

/// `Σ_ρ(λ) = n^{↓k} χ^λ(ρ 1^{n-k})` with `k = |ρ|`; zero when `k > n`.
pub fn sigma_eval(rho: &Partition, lambda: &Partition) -> Scalar {
    let (n, k) = (lambda.size(), rho.size());
    if k > n {
        return Scalar::from_integer(BigInt::from(0));
    }
    let mut parts = rho.parts().to_vec();
    parts.extend(std::iter::repeat_n(1, n - k));
    let full = Partition::from_unsorted(parts);
    let chi = normalized_character(lambda, &full).expect("sizes agree");
    chi * Scalar::from_integer(falling_factorial(n, k))
}

fn mn(lambda: &[usize], rho: &[usize]) -> i128 {
    let Some((&r, rest)) = rho.split_first() else {
        return 1;
    };
    let key = (lambda.to_vec(), rho.to_vec());
    if let Some(v) = MEMO.with(|m| m.borrow().get(&key).copied()) {
        return v;
    }
    // Beta-set with ℓ beads: β_i = λ_i + ℓ - i. Removing a border strip of
    // size r moves one bead from β to β - r onto a free position; the sign
    // counts beads jumped over.
    let len = lambda.len();
    let beta: Vec<usize> = lambda
        .iter()
        .enumerate()
        .map(|(i, &p)| p + len - 1 - i)
        .collect();
    let mut total = 0i128;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r {
            continue;
        }
        let target = b - r;
        if beta.contains(&target) {
            continue;
        }
        let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let k = moved.len();
        let smaller: Vec<usize> = moved
            .iter()
            .enumerate()
            .map(|(i, &x)| x + i + 1 - k)
            .filter(|&p| p > 0)
            .collect();
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        total += sign * mn(&smaller, rest);
    }
    MEMO.with(|m| m.borrow_mut().insert(key, total));
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;
    use itertools::Itertools;
    use num_bigint::BigUint;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(character(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(character(&p(&[2, 1]), &p(&[3])).unwrap(), -1);
        assert_eq!(character(&p(&[2, 1]), &p(&[2, 1])).unwrap(), 0);
        assert_eq!(
            character(&Partition::empty(), &Partition::empty()).unwrap(),
            1
        );
        for rho in partitions_of(6) {
            assert_eq!(character(&p(&[6]), &rho).unwrap(), 1);
        }
        assert!(character(&p(&[2]), &p(&[1])).is_err());
    }

    #[test]
    fn identity_class_gives_dimension() {
        for n in 0..=10 {
            for l in partitions_of(n) {
                let d = character(&l, &Partition::column(n)).unwrap();
                assert_eq!(BigUint::from(d as u128), l.dimension());
            }
        }
    }

    #[test]
    fn regular_character_vanishes_off_identity() {
        for n in 1..=9 {
            for rho in partitions_of(n) {
                let s: i128 = partitions_of(n)
                    .map(|l| {
                        character(&l, &Partition::column(n)).unwrap() * character(&l, &rho).unwrap()
                    })
                    .sum();
                if rho == Partition::column(n) {
                    assert_eq!(BigInt::from(s), crate::scalar::factorial(n));
                } else {
                    assert_eq!(s, 0, "rho={rho}");
                }
            }
        }
    }

    #[test]
    fn column_orthogonality() {
        for n in 1..=8 {
            for rho in partitions_of(n) {
                for sigma in partitions_of(n) {
                    let s: i128 = partitions_of(n)
                        .map(|l| character(&l, &rho).unwrap() * character(&l, &sigma).unwrap())
                        .sum();
                    let expected = if rho == sigma {
                        rho.z_coefficient()
                    } else {
                        BigInt::from(0)
                    };
                    assert_eq!(BigInt::from(s), expected);
                }
            }
        }
    }

    /// `⟨s_λ, p_ρ⟩` as the coefficient of `x^{λ+δ}` in `a_δ · p_ρ` over `n`
    /// variables: `Σ_σ sgn(σ) [x^{λ+δ-σ(δ)}] p_ρ`.
    fn frobenius_oracle(lambda: &Partition, rho: &Partition) -> i128 {
        // Ways to drop the parts of ρ into slots so that slot i receives exactly target[i].
        fn fill(parts: &[usize], target: &mut [usize]) -> i128 {
            let Some((&r, rest)) = parts.split_first() else {
                return target.iter().all(|&t| t == 0) as i128;
            };
            let mut total = 0;
            for i in 0..target.len() {
                if target[i] >= r {
                    target[i] -= r;
                    total += fill(rest, target);
                    target[i] += r;
                }
            }
            total
        }
        let nv = lambda.size().max(1);
        let shifted: Vec<i64> = (0..nv)
            .map(|i| (lambda.part(i + 1) + nv - 1 - i) as i64)
            .collect();
        let mut total = 0;
        for perm in (0..nv).permutations(nv) {
            let mut inv = 0;
            for i in 0..nv {
                for j in i + 1..nv {
                    inv += (perm[i] > perm[j]) as usize;
                }
            }
            let alpha: Option<Vec<usize>> = (0..nv)
                .map(|i| usize::try_from(shifted[i] - (nv - 1 - perm[i]) as i64).ok())
                .collect();
            if let Some(mut alpha) = alpha {
                let c = fill(rho.parts(), &mut alpha);
                total += if inv % 2 == 0 { c } else { -c };
            }
        }
        total
    }

    #[test]
    fn agrees_with_frobenius_formula() {
        for n in 1..=7 {
            for l in partitions_of(n) {
                for rho in partitions_of(n) {
                    assert_eq!(
                        character(&l, &rho).unwrap(),
                        frobenius_oracle(&l, &rho),
                        "{l} {rho}"
                    );
                }
            }
        }
    }

    #[test]
    fn sigma_values() {
        // Σ_3((2,1)) = 3·2·1 · χ^{(2,1)}(3) = 6 · (-1/2)
        assert_eq!(sigma_eval(&p(&[3]), &p(&[2, 1])), crate::scalar::int(-3));
        assert_eq!(sigma_eval(&p(&[3]), &p(&[2])), crate::scalar::int(0));
        assert_eq!(
            sigma_eval(&Partition::empty(), &p(&[2])),
            crate::scalar::int(1)
        );
        assert_eq!(sigma_eval(&p(&[1, 1]), &p(&[3, 1])), crate::scalar::int(12));
    }
}
