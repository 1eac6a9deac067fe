//! Structure constants of the normalized characters `Σ_ρ` via partial
//! matchings, and conversions between the `Σ` and power-sum bases.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use super::{insert_term, sigma_k_in_p, Flavor, Observable, SigmaCombination};
use crate::partition::Partition;
use crate::scalar::Scalar;

/// Injective partial pairing of cells: `(cell of μ, cell of ν)` pairs.
pub type Matching = Vec<(usize, usize)>;

/// All partial matchings between `a` cells and `b` cells.
pub fn matchings(a: usize, b: usize) -> Vec<Matching> {
    fn go(i: usize, a: usize, used: &mut Vec<bool>, cur: &mut Matching, out: &mut Vec<Matching>) {
        if i == a {
            out.push(cur.clone());
            return;
        }
        go(i + 1, a, used, cur, out);
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                cur.push((i, j));
                go(i + 1, a, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, a, &mut vec![false; b], &mut Vec::new(), &mut out);
    out
}

/// Cycle type of `C(A_1)...C(A_r) C(B_1)...C(B_s)` where the cells of `ν`
/// are identified with cells of `μ` along `m`, fixed points of the support
/// included.
pub fn matching_cycle_type(mu: &Partition, nu: &Partition, m: &Matching) -> Partition {
    let (a, b) = (mu.size(), nu.size());
    let mut nu_tag: Vec<usize> = (a..a + b).collect();
    for &(i, j) in m {
        nu_tag[j] = i;
    }
    let support = a + b;
    let identity: Vec<usize> = (0..support).collect();
    let cycles = |parts: &[usize], tag: &dyn Fn(usize) -> usize| {
        let mut perm = identity.clone();
        let mut start = 0;
        for &len in parts {
            for c in 0..len {
                perm[tag(start + c)] = tag(start + (c + 1) % len);
            }
            start += len;
        }
        perm
    };
    let alpha = cycles(mu.parts(), &|c| c);
    let beta = cycles(nu.parts(), &|c| nu_tag[c]);
    let mut in_support = vec![false; support];
    (0..a).for_each(|t| in_support[t] = true);
    nu_tag.iter().for_each(|&t| in_support[t] = true);
    let mut seen = vec![false; support];
    let mut lengths = Vec::new();
    for s in 0..support {
        if !in_support[s] || seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = alpha[beta[x]];
        }
        lengths.push(len);
    }
    Partition::from_unsorted(lengths)
}

/// `Σ_μ · Σ_ν = Σ_M Σ_{ρ(M)}` over all partial matchings `M`.
pub fn sigma_product(mu: &Partition, nu: &Partition) -> SigmaCombination {
    let mut terms: BTreeMap<Partition, Scalar> = BTreeMap::new();
    for m in matchings(mu.size(), nu.size()) {
        insert_term(&mut terms, matching_cycle_type(mu, nu, &m), Scalar::one());
    }
    SigmaCombination {
        flavor: Flavor::Classical,
        terms,
    }
}

thread_local! {
    static SIGMA_RHO: RefCell<HashMap<Partition, Observable>> = RefCell::new(HashMap::new());
}

/// Expansion of `Σ_ρ` in power sums, from
/// `Σ_ρ = Σ_{ρ_1} · Σ_{ρ∖ρ_1} - Σ_{M ≠ ∅} Σ_{ρ(M)}`.
pub fn sigma_rho_in_p(rho: &Partition) -> Observable {
    if rho.is_empty() {
        return Observable::one();
    }
    if rho.len() == 1 {
        return sigma_k_in_p(rho.parts()[0]);
    }
    if let Some(x) = SIGMA_RHO.with(|m| m.borrow().get(rho).cloned()) {
        return x;
    }
    let first = Partition::row(rho.parts()[0]);
    let rest = Partition::new(rho.parts()[1..].to_vec()).expect("suffix of a partition");
    let mut acc = &sigma_k_in_p(rho.parts()[0]) * &sigma_rho_in_p(&rest);
    for (term, c) in sigma_product(&first, &rest).terms() {
        if term != rho {
            acc = &acc - &sigma_rho_in_p(term).scale(c);
        }
    }
    SIGMA_RHO.with(|m| m.borrow_mut().insert(rho.clone(), acc.clone()));
    acc
}

/// Rewrites an observable in the classical `Σ` basis by peeling the top
/// power-sum term repeatedly.
pub fn p_to_sigma(x: &Observable) -> SigmaCombination {
    let mut rest = x.clone();
    let mut out: BTreeMap<Partition, Scalar> = BTreeMap::new();
    while let Some((mu, c)) = rest
        .terms()
        .iter()
        .next_back()
        .map(|(k, v)| (k.clone(), v.clone()))
    {
        rest = &rest - &sigma_rho_in_p(&mu).scale(&c);
        insert_term(&mut out, mu, c);
    }
    SigmaCombination {
        flavor: Flavor::Classical,
        terms: out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::sigma_eval;
    use crate::partition::partitions_of;
    use crate::scalar::int;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn s(terms: &[(&[usize], i64)]) -> SigmaCombination {
        SigmaCombination::from_terms(
            Flavor::Classical,
            terms.iter().map(|(k, c)| (p(k), int(*c))),
        )
    }

    #[test]
    fn matching_counts() {
        assert_eq!(matchings(0, 3).len(), 1);
        assert_eq!(matchings(1, 1).len(), 2);
        assert_eq!(matchings(2, 3).len(), 1 + 6 + 6);
        assert_eq!(matchings(4, 4).len(), 209);
    }

    #[test]
    fn product_examples() {
        assert_eq!(
            sigma_product(&p(&[2]), &p(&[3])),
            s(&[(&[3, 2], 1), (&[4], 6), (&[2, 1], 6)])
        );
        assert_eq!(
            sigma_product(&p(&[1]), &p(&[1])),
            s(&[(&[1, 1], 1), (&[1], 1)])
        );
        for l in 1..=4 {
            for m in 1..=4 {
                let prod = sigma_product(&p(&[l]), &p(&[m]));
                assert_eq!(
                    prod.coefficient(&Partition::from_unsorted(vec![l, m])),
                    int(1)
                );
                assert_eq!(
                    prod.coefficient(&Partition::row(l + m - 1)),
                    int((m * l) as i64),
                    "{l} {m}"
                );
                assert!(prod.terms().keys().all(|k| k.size() <= l + m));
            }
        }
    }

    #[test]
    fn matching_degree_law() {
        for mu in [p(&[2]), p(&[2, 1]), p(&[3]), p(&[1, 1])] {
            for nu in [p(&[3]), p(&[2, 2]), p(&[1])] {
                let ms = matchings(mu.size(), nu.size());
                for m in &ms {
                    let rho = matching_cycle_type(&mu, &nu, m);
                    assert_eq!(rho.size(), mu.size() + nu.size() - m.len());
                }
                assert_eq!(matching_cycle_type(&mu, &nu, &Vec::new()), mu.union(&nu));
            }
        }
    }

    #[test]
    fn sigma_rho_expansions() {
        for k in 1..=6 {
            assert_eq!(sigma_rho_in_p(&Partition::row(k)), sigma_k_in_p(k));
        }
        let s11 = Observable::from_terms([(p(&[1, 1]), int(1)), (p(&[1]), int(-1))]);
        assert_eq!(sigma_rho_in_p(&p(&[1, 1])), s11);
        assert_eq!(sigma_rho_in_p(&Partition::empty()), Observable::one());
        for size in 1..=5 {
            for rho in partitions_of(size) {
                let x = sigma_rho_in_p(&rho);
                assert_eq!(x.top_component(), Observable::p(rho.clone()));
                for n in 0..=8 {
                    for l in partitions_of(n) {
                        assert_eq!(x.evaluate(&l), sigma_eval(&rho, &l), "ρ={rho} λ={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn pointwise_product_fidelity() {
        for total in 2..=6 {
            for a in 1..total {
                for mu in partitions_of(a) {
                    for nu in partitions_of(total - a) {
                        let prod = sigma_product(&mu, &nu).to_observable().unwrap();
                        for n in 0..=7 {
                            for l in partitions_of(n) {
                                assert_eq!(
                                    prod.evaluate(&l),
                                    sigma_eval(&mu, &l) * sigma_eval(&nu, &l)
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn p_to_sigma_round_trip() {
        for size in 0..=5 {
            for rho in partitions_of(size) {
                let x = Observable::p(rho.clone());
                let sig = p_to_sigma(&x);
                assert_eq!(sig.to_observable().unwrap(), x);
                assert_eq!(
                    p_to_sigma(&sigma_rho_in_p(&rho)),
                    SigmaCombination::sigma(rho)
                );
            }
        }
    }
}
