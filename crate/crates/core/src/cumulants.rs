//! Joint, disjoint and identity cumulants.
//!
//! All three are instances of one moment-cumulant inversion: given moments
//! `M(S)` of subsets `S` of the variables and a product `⋆`,
//! `M(S) = Σ_{T ∋ min S} k(T) ⋆ M(S∖T)`, solved for `k` by recursion over
//! bitmasks.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::measures::{mass_table, PartitionMeasure, QParameter, QPlancherel};
use crate::observables::{Flavor, SigmaCombination};
use crate::partition::Partition;
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

/// Largest number of variables accepted by the cumulant routines.
pub const MAX_CUMULANT_ORDER: usize = 8;

/// A partition of `{0..r-1}` into nonempty blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetPartition {
    pub blocks: Vec<Vec<usize>>,
}

/// All set partitions of `{0..r-1}`, from restricted growth strings in
/// lexicographic order.
pub fn set_partitions(r: usize) -> Result<Vec<SetPartition>> {
    if !(1..=10).contains(&r) {
        return Err(Error::Precondition(format!(
            "set partitions need 1 <= r <= 10, got {r}"
        )));
    }
    let mut out = Vec::new();
    let mut code = vec![0usize; r];
    loop {
        let blocks_n = code.iter().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); blocks_n];
        for (i, &b) in code.iter().enumerate() {
            blocks[b].push(i);
        }
        out.push(SetPartition { blocks });
        // Next restricted growth string.
        let mut i = r - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            let prefix_max = code[..i].iter().max().copied().unwrap();
            if code[i] <= prefix_max {
                code[i] += 1;
                code[i + 1..].iter_mut().for_each(|c| *c = 0);
                break;
            }
            i -= 1;
        }
    }
}

/// Generic moment-cumulant inversion over subsets of `{0..r-1}`.
pub fn mobius_cumulant<T: Clone>(
    r: usize,
    moment: &mut dyn FnMut(u32) -> Result<T>,
    product: &dyn Fn(&T, &T) -> Result<T>,
    subtract: &dyn Fn(&T, &T) -> Result<T>,
) -> Result<T> {
    if r == 0 || r > MAX_CUMULANT_ORDER {
        return Err(Error::Precondition(format!(
            "cumulants need 1 <= r <= {MAX_CUMULANT_ORDER}"
        )));
    }
    let mut moments: HashMap<u32, T> = HashMap::new();
    let mut cumulants: HashMap<u32, T> = HashMap::new();
    let full = (1u32 << r) - 1;
    for mask in 1..=full {
        moments.insert(mask, moment(mask)?);
    }
    // Process masks by popcount so smaller cumulants are ready.
    let mut masks: Vec<u32> = (1..=full).collect();
    masks.sort_by_key(|m| m.count_ones());
    for s in masks {
        let low = s & s.wrapping_neg();
        let rest = s & !low;
        let mut k = moments[&s].clone();
        // Proper subsets T of S containing the lowest element.
        let mut sub = rest;
        loop {
            let t = sub | low;
            if t != s {
                k = subtract(&k, &product(&cumulants[&t], &moments[&(s & !t)])?)?;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        cumulants.insert(s, k);
    }
    Ok(cumulants.remove(&full).expect("full set computed"))
}

/// How the moments of a [`MomentOracle`] multiply variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductRule {
    Pointwise,
    Disjoint,
}

type MomentFn<'a> = Box<dyn Fn(&[usize]) -> Result<Scalar> + 'a>;

/// Expectation of the product (under `rule`) of the variables at the given
/// indices.
pub struct MomentOracle<'a> {
    pub rule: ProductRule,
    moment: MomentFn<'a>,
}

impl<'a> MomentOracle<'a> {
    pub fn new(rule: ProductRule, moment: impl Fn(&[usize]) -> Result<Scalar> + 'a) -> Self {
        Self {
            rule,
            moment: Box::new(moment),
        }
    }

    pub fn moment(&self, vars: &[usize]) -> Result<Scalar> {
        (self.moment)(vars)
    }
}

fn mask_members(vars: &[usize], mask: u32) -> Vec<usize> {
    (0..vars.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| vars[i])
        .collect()
}

/// Cumulant of the variables `vars` relative to the oracle's product rule.
pub fn joint_cumulant(oracle: &MomentOracle<'_>, vars: &[usize]) -> Result<Scalar> {
    mobius_cumulant(
        vars.len(),
        &mut |mask| oracle.moment(&mask_members(vars, mask)),
        &|a: &Scalar, b: &Scalar| Ok(a * b),
        &|a: &Scalar, b: &Scalar| Ok(a - b),
    )
}

/// `E[Σ_ρ] = (1-q)^{|ρ|} / ∏(1 - q^{ρ_i}) · n^{↓|ρ|}` under `M_{n,q}`.
pub fn qplancherel_sigma_expectation(rho: &Partition, n: usize, q: &Scalar) -> Scalar {
    let one = Scalar::one();
    let num = scalar::pow(&(&one - q), rho.size() as i32);
    let den: Scalar = rho
        .parts()
        .iter()
        .map(|&p| &one - scalar::pow(q, p as i32))
        .product();
    num / den * Scalar::from_integer(scalar::falling_factorial(n, rho.size()))
}

fn expectation_of_combination(x: &SigmaCombination, n: usize, q: &Scalar) -> Result<Scalar> {
    if x.flavor() != &Flavor::Classical {
        return Err(Error::FlavorMismatch);
    }
    Ok(x.terms()
        .iter()
        .map(|(rho, c)| c * qplancherel_sigma_expectation(rho, n, q))
        .sum())
}

/// `k^•` of classical Σ-combinations under `M_{n,q}`, from the closed form
/// of `E[Σ_ρ]` and the disjoint product.
pub fn disjoint_cumulant_of(xs: &[SigmaCombination], n: usize, q: &QParameter) -> Result<Scalar> {
    let qv = q.exact_value()?;
    mobius_cumulant(
        xs.len(),
        &mut |mask| {
            let mut prod = SigmaCombination::sigma(Partition::empty());
            for (i, x) in xs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    prod = prod.disjoint_product(x)?;
                }
            }
            expectation_of_combination(&prod, n, qv)
        },
        &|a: &Scalar, b: &Scalar| Ok(a * b),
        &|a: &Scalar, b: &Scalar| Ok(a - b),
    )
}

/// `k^•(Σ_{ρ^1}, ..., Σ_{ρ^r})` under `M_{n,q}`.
pub fn disjoint_cumulant(indices: &[Partition], n: usize, q: &QParameter) -> Result<Scalar> {
    let xs: Vec<SigmaCombination> = indices
        .iter()
        .cloned()
        .map(SigmaCombination::sigma)
        .collect();
    disjoint_cumulant_of(&xs, n, q)
}

/// `k^id(Σ_{i_1}, ..., Σ_{i_r})`: pointwise products inverted against the
/// disjoint product, as a classical Σ-combination.
pub fn identity_cumulant(indices: &[usize]) -> Result<SigmaCombination> {
    if indices.iter().sum::<usize>() > 12 || indices.contains(&0) {
        return Err(Error::Precondition(
            "identity cumulants need positive indices with sum <= 12".into(),
        ));
    }
    let xs: Vec<SigmaCombination> = indices
        .iter()
        .map(|&i| SigmaCombination::sigma(Partition::row(i)))
        .collect();
    identity_cumulant_of(&xs)
}

pub fn identity_cumulant_of(xs: &[SigmaCombination]) -> Result<SigmaCombination> {
    mobius_cumulant(
        xs.len(),
        &mut |mask| {
            let mut prod = SigmaCombination::sigma(Partition::empty());
            for (i, x) in xs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    prod = prod.pointwise_product(x)?;
                }
            }
            Ok(prod)
        },
        &|a: &SigmaCombination, b: &SigmaCombination| a.disjoint_product(b),
        &|a: &SigmaCombination, b: &SigmaCombination| a.sub(b),
    )
}

/// Exact moment oracle for products of `Σ_{i}` under a measure on `𝒴_n`,
/// by full enumeration with characters.
pub fn enumerated_sigma_moments<'a>(
    indices: &'a [usize],
    n: usize,
    measure: &'a dyn PartitionMeasure,
) -> Result<MomentOracle<'a>> {
    let table = mass_table(n, measure)?;
    let values: Vec<Vec<Scalar>> = table
        .iter()
        .map(|(l, _)| {
            indices
                .iter()
                .map(|&i| crate::character::sigma_eval(&Partition::row(i), l))
                .collect()
        })
        .collect();
    Ok(MomentOracle::new(
        ProductRule::Pointwise,
        move |vars: &[usize]| {
            Ok(table
                .iter()
                .zip(&values)
                .map(|((_, m), vals)| vars.iter().fold(m.clone(), |acc, &v| acc * &vals[v]))
                .sum())
        },
    ))
}

/// Both sides of `k(X_1..X_r) = Σ_π k^•(k^id(X_{π_1}), ..., k^id(X_{π_ℓ}))`
/// for `X_j = Σ_{i_j}` under `M_{n,q}`: the left side by enumeration of
/// `𝒴_n`, the right side symbolically.
pub fn brillinger_check(indices: &[usize], n: usize, q: &QParameter) -> Result<(Scalar, Scalar)> {
    if n > 10 || indices.iter().sum::<usize>() > 8 {
        return Err(Error::Precondition(
            "brillinger check needs n <= 10 and index sum <= 8".into(),
        ));
    }
    let measure = QPlancherel(q.clone());
    let oracle = enumerated_sigma_moments(indices, n, &measure)?;
    let all: Vec<usize> = (0..indices.len()).collect();
    let lhs = joint_cumulant(&oracle, &all)?;
    Ok((lhs, brillinger_rhs(indices, n, q)?))
}

/// Right-hand side of the Brillinger decomposition alone; no enumeration.
pub fn brillinger_rhs(indices: &[usize], n: usize, q: &QParameter) -> Result<Scalar> {
    let mut rhs = Scalar::zero();
    for pi in set_partitions(indices.len())? {
        let blocks = pi
            .blocks
            .iter()
            .map(|b| identity_cumulant(&b.iter().map(|&i| indices[i]).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        rhs += disjoint_cumulant_of(&blocks, n, q)?;
    }
    Ok(rhs)
}

/// `k(Σ_{i_1}, ..., Σ_{i_r}) / n^{Σ i_j - r + 1}` at each `n`, computed from
/// the Brillinger right-hand side.
pub fn scaled_cumulants(
    indices: &[usize],
    ns: &[usize],
    q: &QParameter,
) -> Result<Vec<(usize, Scalar)>> {
    let exponent = indices.iter().sum::<usize>() + 1 - indices.len();
    ns.iter()
        .map(|&n| {
            let k = brillinger_rhs(indices, n, q)?;
            let scale = Scalar::from_integer(num_traits::pow(BigInt::from(n), exponent));
            Ok((n, k / scale))
        })
        .collect()
}

/// `k^id(Σ_{i_1}, Σ_{i_2})(λ)` by brute force in the group algebra of `S_n`:
/// sum of `χ^λ(a_1 a_2)` over pairs of arrangements with intersecting
/// supports, where an arrangement of size `i` is an injective sequence whose
/// permutation is the `i`-cycle on it.
pub fn identity_cumulant_group_algebra(i1: usize, i2: usize, lambda: &Partition) -> Result<Scalar> {
    let n = lambda.size();
    if n > 7 {
        return Err(Error::Precondition(
            "group-algebra oracle limited to n <= 7".into(),
        ));
    }
    let arrangements = |len: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == len {
                out.push(cur.clone());
                return;
            }
            for x in 0..n {
                if !cur.contains(&x) {
                    cur.push(x);
                    go(n, len, cur, out);
                    cur.pop();
                }
            }
        }
        go(n, len, &mut cur, &mut out);
        out
    };
    let cycle_perm = |a: &[usize]| -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for (k, &x) in a.iter().enumerate() {
            perm[x] = a[(k + 1) % a.len()];
        }
        perm
    };
    let mut class_counts: HashMap<Partition, u64> = HashMap::new();
    let first = arrangements(i1);
    let second = arrangements(i2);
    for a in &first {
        let pa = cycle_perm(a);
        for b in &second {
            if !a.iter().any(|x| b.contains(x)) {
                continue;
            }
            let pb = cycle_perm(b);
            let prod: Vec<usize> = (0..n).map(|x| pa[pb[x]]).collect();
            let mut seen = vec![false; n];
            let mut lengths = Vec::new();
            for s in 0..n {
                let mut len = 0;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    len += 1;
                    x = prod[x];
                }
                if len > 0 {
                    lengths.push(len);
                }
            }
            *class_counts
                .entry(Partition::from_unsorted(lengths))
                .or_default() += 1;
        }
    }
    let mut total = Scalar::zero();
    for (class, count) in class_counts {
        total += crate::character::normalized_character(lambda, &class)?
            * Scalar::from_integer(BigInt::from(count));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;
    use crate::scalar::{int, ratio};

    fn bell(r: usize) -> usize {
        // Bell triangle.
        let mut row = vec![1usize];
        for _ in 1..r {
            let mut next = vec![*row.last().unwrap()];
            for x in &row {
                next.push(next.last().unwrap() + x);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    #[test]
    fn set_partition_counts() {
        assert_eq!(set_partitions(1).unwrap().len(), 1);
        assert_eq!(set_partitions(3).unwrap().len(), 5);
        assert_eq!(set_partitions(6).unwrap().len(), 203);
        for r in 1..=8 {
            let all = set_partitions(r).unwrap();
            assert_eq!(all.len(), bell(r));
            for sp in &all {
                let mut flat: Vec<usize> = sp.blocks.iter().flatten().copied().collect();
                flat.sort();
                assert_eq!(flat, (0..r).collect::<Vec<_>>());
                assert!(sp.blocks.iter().all(|b| !b.is_empty()));
            }
        }
        assert!(set_partitions(0).is_err());
        assert!(set_partitions(11).is_err());
    }

    #[test]
    fn low_order_cumulants() {
        // Moments of a discrete variable taking values 1,2,4 with masses 1/2,1/4,1/4.
        let vals = [
            (int(1), ratio(1, 2)),
            (int(2), ratio(1, 4)),
            (int(4), ratio(1, 4)),
        ];
        let oracle = MomentOracle::new(ProductRule::Pointwise, |vars: &[usize]| {
            Ok(vals
                .iter()
                .map(|(x, m)| m * scalar::pow(x, vars.len() as i32))
                .sum())
        });
        let mean = oracle.moment(&[0]).unwrap();
        assert_eq!(joint_cumulant(&oracle, &[0]).unwrap(), mean);
        let second = oracle.moment(&[0, 0]).unwrap();
        assert_eq!(
            joint_cumulant(&oracle, &[0, 0]).unwrap(),
            &second - &mean * &mean
        );
        let third = oracle.moment(&[0, 0, 0]).unwrap();
        let k3 = &third - int(3) * &second * &mean + int(2) * &mean * &mean * &mean;
        assert_eq!(joint_cumulant(&oracle, &[0, 0, 0]).unwrap(), k3);
    }

    #[test]
    fn deterministic_oracle_has_no_higher_cumulants() {
        let values = [int(3), ratio(-1, 2), int(7), int(2), ratio(5, 3)];
        let oracle = MomentOracle::new(ProductRule::Pointwise, |vars: &[usize]| {
            Ok(vars.iter().map(|&v| values[v].clone()).product())
        });
        for r in 2..=5 {
            let vars: Vec<usize> = (0..r).collect();
            assert_eq!(joint_cumulant(&oracle, &vars).unwrap(), int(0));
        }
    }

    #[test]
    fn moments_rebuild_from_cumulants() {
        let vals = [
            (int(1), ratio(1, 3)),
            (int(-2), ratio(1, 6)),
            (int(5), ratio(1, 2)),
        ];
        let weights = [int(1), int(2), ratio(1, 2), int(-3), int(4)];
        // X_i = w_i · Z for a single random variable Z.
        let oracle = MomentOracle::new(ProductRule::Pointwise, |vars: &[usize]| {
            let w: Scalar = vars.iter().map(|&v| weights[v].clone()).product();
            Ok(vals
                .iter()
                .map(|(x, m)| m * scalar::pow(x, vars.len() as i32))
                .sum::<Scalar>()
                * w)
        });
        for r in 1..=5 {
            let vars: Vec<usize> = (0..r).collect();
            let mut rebuilt = Scalar::zero();
            for sp in set_partitions(r).unwrap() {
                let prod: Scalar = sp
                    .blocks
                    .iter()
                    .map(|b| joint_cumulant(&oracle, b).unwrap())
                    .product();
                rebuilt += prod;
            }
            assert_eq!(rebuilt, oracle.moment(&vars).unwrap());
        }
    }

    #[test]
    fn disjoint_cumulant_closed_forms() {
        let q = QParameter::rational(1, 2);
        let qv = ratio(1, 2);
        let one = int(1);
        for n in 0..=12 {
            for l in 1..=4usize {
                let e = qplancherel_sigma_expectation(&Partition::row(l), n, &qv);
                assert_eq!(disjoint_cumulant(&[Partition::row(l)], n, &q).unwrap(), e);
                for m in 1..=4usize {
                    let c = scalar::pow(&(&one - &qv), (l + m) as i32)
                        / ((&one - scalar::pow(&qv, l as i32))
                            * (&one - scalar::pow(&qv, m as i32)));
                    let ff = |k| Scalar::from_integer(scalar::falling_factorial(n, k));
                    let expected = c * (ff(l + m) - ff(l) * ff(m));
                    assert_eq!(
                        disjoint_cumulant(&[Partition::row(l), Partition::row(m)], n, &q).unwrap(),
                        expected
                    );
                }
            }
        }
    }

    #[test]
    fn identity_cumulant_examples() {
        let s = |parts: &[usize]| SigmaCombination::sigma(Partition::new(parts.to_vec()).unwrap());
        for l in 1..=5 {
            assert_eq!(identity_cumulant(&[l]).unwrap(), s(&[l]));
        }
        let k23 = identity_cumulant(&[2, 3]).unwrap();
        assert_eq!(
            k23,
            s(&[4])
                .scale(&int(6))
                .add(&s(&[2, 1]).scale(&int(6)))
                .unwrap()
        );
        assert_eq!(identity_cumulant(&[1, 1]).unwrap(), s(&[1]));
        assert!(identity_cumulant(&[7, 6]).is_err());
    }

    #[test]
    fn identity_cumulant_degree_bound() {
        for r in 1..=3usize {
            let mut idx = vec![1usize; r];
            loop {
                let k = identity_cumulant(&idx).unwrap();
                let bound = idx.iter().sum::<usize>() + 1 - r;
                assert!(k.deg().unwrap_or(0) <= bound, "{idx:?}");
                let Some(pos) = idx.iter().position(|&x| x < 4) else {
                    break;
                };
                idx[pos] += 1;
                idx[..pos].iter_mut().for_each(|x| *x = 1);
            }
        }
    }

    #[test]
    fn brillinger_small() {
        let q = QParameter::rational(1, 2);
        for (idx, n) in [
            (vec![2usize], 5usize),
            (vec![2, 2], 6),
            (vec![2, 3], 7),
            (vec![1, 2], 4),
        ] {
            let (lhs, rhs) = brillinger_check(&idx, n, &q).unwrap();
            assert_eq!(lhs, rhs, "{idx:?} n={n}");
        }
        let (lhs, _) = brillinger_check(&[3], 4, &q).unwrap();
        assert_eq!(
            lhs,
            qplancherel_sigma_expectation(&Partition::row(3), 4, &ratio(1, 2))
        );
        assert!(brillinger_check(&[2, 2], 11, &q).is_err());
    }

    #[test]
    fn identity_cumulant_matches_group_algebra() {
        let k22 = identity_cumulant(&[2, 2]).unwrap();
        for n in 0..=6 {
            for l in partitions_of(n) {
                assert_eq!(
                    k22.evaluate(&l).unwrap(),
                    identity_cumulant_group_algebra(2, 2, &l).unwrap(),
                    "{l}"
                );
            }
        }
    }
}
