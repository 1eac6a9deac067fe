//! Polynomial functions on Young diagrams.
//!
//! [`Observable`] is the power-sum basis view, [`SigmaCombination`] the
//! normalized-character view (classical or quantized at a fixed `q`).

mod hall;
mod series;
mod sigma;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::character::sigma_eval;
use crate::partition::Partition;
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

pub use hall::{eval_qcharacter, qchar_transition, scalar_mp, scalar_ph, Direction, QCharMatrix};
pub use series::{sigma_k_in_p, TruncatedSeries};
pub use sigma::{matchings, p_to_sigma, sigma_product, sigma_rho_in_p, Matching};

/// Finite linear combination of `p_ρ = p_{ρ_1} p_{ρ_2} ...` with exact
/// coefficients. `p_∅` is the constant function 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Observable {
    terms: BTreeMap<Partition, Scalar>,
}

fn insert_term(terms: &mut BTreeMap<Partition, Scalar>, key: Partition, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl Observable {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(Partition::empty(), c)
    }

    /// The monomial `p_ρ`.
    pub fn p(rho: Partition) -> Self {
        Self::term(rho, Scalar::one())
    }

    pub fn term(rho: Partition, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        insert_term(&mut terms, rho, c);
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Partition, Scalar)>) -> Self {
        let mut out = BTreeMap::new();
        for (k, c) in terms {
            insert_term(&mut out, k, c);
        }
        Self { terms: out }
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, rho: &Partition) -> Scalar {
        self.terms.get(rho).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `max |ρ|` over the terms; `None` for the zero observable.
    pub fn deg(&self) -> Option<usize> {
        self.terms.keys().map(Partition::size).max()
    }

    /// `max (|ρ| + α ℓ(ρ) - α |ρ|)` over the terms.
    pub fn deg_alpha(&self, alpha: &Scalar) -> Option<Scalar> {
        self.terms.keys().map(|rho| deg_alpha(rho, alpha)).max()
    }

    /// Terms of maximal degree.
    pub fn top_component(&self) -> Observable {
        let Some(d) = self.deg() else {
            return Self::zero();
        };
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.size() == d)
                .map(|(k, c)| (k.clone(), c.clone())),
        )
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    pub fn evaluate(&self, lambda: &Partition) -> Scalar {
        let max_k = self
            .terms
            .keys()
            .filter_map(|k| k.parts().first().copied())
            .max()
            .unwrap_or(0);
        let powers: Vec<Scalar> = (0..=max_k)
            .map(|k| {
                if k == 0 {
                    Scalar::one()
                } else {
                    lambda.power_sum(k as u32)
                }
            })
            .collect();
        self.terms
            .iter()
            .map(|(rho, c)| {
                rho.parts()
                    .iter()
                    .fold(c.clone(), |acc, &k| acc * &powers[k])
            })
            .sum()
    }

    /// Float evaluation given `power_sums[k] = p_k(λ)` (index 0 unused).
    pub fn evaluate_f64(&self, power_sums: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(rho, c)| {
                rho.parts()
                    .iter()
                    .fold(scalar::to_f64(c), |acc, &k| acc * power_sums[k])
            })
            .sum()
    }
}

/// `deg_α(p_ρ) = |ρ| + α ℓ(ρ) - α |ρ|`.
pub fn deg_alpha(rho: &Partition, alpha: &Scalar) -> Scalar {
    scalar::int(rho.size() as i64) + alpha * scalar::int(rho.len() as i64 - rho.size() as i64)
}

impl Add for &Observable {
    type Output = Observable;

    fn add(self, rhs: &Observable) -> Observable {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            insert_term(&mut terms, k.clone(), c.clone());
        }
        Observable { terms }
    }
}

impl Neg for &Observable {
    type Output = Observable;

    fn neg(self) -> Observable {
        Observable {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Sub for &Observable {
    type Output = Observable;

    fn sub(self, rhs: &Observable) -> Observable {
        self + &(-rhs)
    }
}

impl Mul for &Observable {
    type Output = Observable;

    fn mul(self, rhs: &Observable) -> Observable {
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                insert_term(&mut terms, a.union(b), x * y);
            }
        }
        Observable { terms }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.terms, "p")
    }
}

fn write_terms(
    f: &mut fmt::Formatter<'_>,
    terms: &BTreeMap<Partition, Scalar>,
    symbol: &str,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (k, c)) in terms.iter().rev().enumerate() {
        if i > 0 {
            write!(f, " + ")?;
        }
        write!(f, "({}){symbol}{k}", scalar::format_rational(c))?;
    }
    Ok(())
}

/// Which family of character symbols a [`SigmaCombination`] is written in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flavor {
    Classical,
    /// `Σ_{ρ,q}` at the stored rational `q`.
    Quantized(Scalar),
}

/// Finite linear combination of `Σ_ρ` (or `Σ_{ρ,q}`) with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaCombination {
    flavor: Flavor,
    terms: BTreeMap<Partition, Scalar>,
}

impl SigmaCombination {
    pub fn zero(flavor: Flavor) -> Self {
        Self {
            flavor,
            terms: BTreeMap::new(),
        }
    }

    /// The single classical symbol `Σ_ρ`.
    pub fn sigma(rho: Partition) -> Self {
        Self::from_terms(Flavor::Classical, [(rho, Scalar::one())])
    }

    pub fn from_terms(
        flavor: Flavor,
        terms: impl IntoIterator<Item = (Partition, Scalar)>,
    ) -> Self {
        let mut out = BTreeMap::new();
        for (k, c) in terms {
            insert_term(&mut out, k, c);
        }
        Self { flavor, terms: out }
    }

    pub fn flavor(&self) -> &Flavor {
        &self.flavor
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, rho: &Partition) -> Scalar {
        self.terms.get(rho).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `max |ρ|`, the degree in the algebra of observables.
    pub fn deg(&self) -> Option<usize> {
        self.terms.keys().map(Partition::size).max()
    }

    fn check_flavor(&self, other: &Self) -> Result<()> {
        if self.flavor == other.flavor {
            Ok(())
        } else {
            Err(Error::FlavorMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_flavor(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            insert_term(&mut terms, k.clone(), c.clone());
        }
        Ok(Self {
            flavor: self.flavor.clone(),
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(
            self.flavor.clone(),
            self.terms.iter().map(|(k, v)| (k.clone(), v * c)),
        )
    }

    /// Disjoint product: bilinear extension of `Σ_μ • Σ_ν = Σ_{μ∪ν}`.
    pub fn disjoint_product(&self, other: &Self) -> Result<Self> {
        self.check_flavor(other)?;
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                insert_term(&mut terms, a.union(b), x * y);
            }
        }
        Ok(Self {
            flavor: self.flavor.clone(),
            terms,
        })
    }

    /// Pointwise product of classical combinations, via partial matchings.
    pub fn pointwise_product(&self, other: &Self) -> Result<Self> {
        self.check_flavor(other)?;
        if self.flavor != Flavor::Classical {
            return Err(Error::Precondition(
                "pointwise products are expanded for classical symbols only".into(),
            ));
        }
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let xy = x * y;
                for (k, c) in sigma_product(a, b).terms {
                    insert_term(&mut terms, k, c * &xy);
                }
            }
        }
        Ok(Self {
            flavor: Flavor::Classical,
            terms,
        })
    }

    /// Rewrites quantized symbols in the classical basis; identity on
    /// classical combinations.
    pub fn to_classical(&self) -> Result<Self> {
        let Flavor::Quantized(q) = &self.flavor else {
            return Ok(self.clone());
        };
        let qp = crate::measures::QParameter::exact(q.clone())?;
        let mut terms = BTreeMap::new();
        for (rho, c) in &self.terms {
            let m = qchar_transition(rho.size(), &qp, Direction::QuantizedToClassical)?;
            for (nu, t) in m.row(rho) {
                insert_term(&mut terms, nu.clone(), t * c);
            }
        }
        Ok(Self {
            flavor: Flavor::Classical,
            terms,
        })
    }

    /// Expansion in the power-sum basis.
    pub fn to_observable(&self) -> Result<Observable> {
        let classical = self.to_classical()?;
        let mut acc = Observable::zero();
        for (rho, c) in &classical.terms {
            acc = &acc + &sigma_rho_in_p(rho).scale(c);
        }
        Ok(acc)
    }

    /// Exact value on `λ`, through characters of the symmetric group.
    pub fn evaluate(&self, lambda: &Partition) -> Result<Scalar> {
        let classical = self.to_classical()?;
        Ok(classical
            .terms
            .iter()
            .map(|(rho, c)| c * sigma_eval(rho, lambda))
            .sum())
    }
}

impl fmt::Display for SigmaCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let symbol = match &self.flavor {
            Flavor::Classical => "S".to_string(),
            Flavor::Quantized(q) => format!("S[q={}]", scalar::format_rational(q)),
        };
        write_terms(f, &self.terms, &symbol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn pp(parts: &[usize]) -> Observable {
        Observable::p(p(parts))
    }

    #[test]
    fn basis_products() {
        assert_eq!(&pp(&[2]) * &pp(&[3]), pp(&[3, 2]));
        assert_eq!(
            &(&pp(&[1]) + &pp(&[2])) * &pp(&[1]),
            &pp(&[1, 1]) + &pp(&[2, 1])
        );
        assert_eq!(&Observable::one() * &pp(&[4]), pp(&[4]));
        assert!((&pp(&[2]) - &pp(&[2])).is_zero());
        assert_eq!(Observable::zero().deg(), None);
        assert_eq!(pp(&[3, 1]).deg(), Some(4));
    }

    #[test]
    fn evaluation() {
        assert_eq!(pp(&[1]).evaluate(&p(&[4, 2, 1])), int(7));
        let x = Observable::from_terms([
            (p(&[3]), int(1)),
            (p(&[1, 1]), ratio(-3, 2)),
            (p(&[1]), ratio(5, 4)),
        ]);
        assert_eq!(x.evaluate(&p(&[2, 1])), int(-3));
        assert_eq!(Observable::zero().evaluate(&p(&[2, 1])), int(0));
        assert_eq!(Observable::one().evaluate(&Partition::empty()), int(1));
        let l = p(&[5, 3, 3, 1]);
        let ps: Vec<f64> = (0..6)
            .map(|k| if k == 0 { 1.0 } else { l.power_sum_f64(k) })
            .collect();
        assert!((x.evaluate_f64(&ps) - scalar::to_f64(&x.evaluate(&l))).abs() < 1e-9);
    }

    #[test]
    fn gradations() {
        let half = ratio(1, 2);
        assert_eq!(deg_alpha(&p(&[3, 1]), &half), int(3));
        assert_eq!(pp(&[2, 2]).deg_alpha(&int(0)), Some(int(4)));
        assert_eq!(
            (&pp(&[3]) + &pp(&[1, 1])).deg_alpha(&ratio(2, 5)),
            Some(ratio(11, 5))
        );
        assert_eq!((&pp(&[3]) + &pp(&[1])).top_component(), pp(&[3]));
    }

    #[test]
    fn flavors_do_not_mix() {
        let a = SigmaCombination::sigma(p(&[2]));
        let b = SigmaCombination::from_terms(Flavor::Quantized(ratio(1, 2)), [(p(&[2]), int(1))]);
        let c = SigmaCombination::from_terms(Flavor::Quantized(ratio(2, 3)), [(p(&[2]), int(1))]);
        assert_eq!(a.disjoint_product(&b), Err(Error::FlavorMismatch));
        assert_eq!(b.disjoint_product(&c), Err(Error::FlavorMismatch));
        assert_eq!(a.add(&b), Err(Error::FlavorMismatch));
        assert!(b.disjoint_product(&b).is_ok());
        assert!(b.pointwise_product(&b).is_err());
    }

    #[test]
    fn disjoint_product_examples() {
        let s = |parts: &[usize]| SigmaCombination::sigma(p(parts));
        assert_eq!(s(&[2]).disjoint_product(&s(&[3])).unwrap(), s(&[3, 2]));
        for a in 0..4 {
            for b in 0..4 {
                let x = s(&vec![1; a]).disjoint_product(&s(&vec![1; b])).unwrap();
                assert_eq!(x, s(&vec![1; a + b]));
            }
        }
    }

    #[test]
    fn quantized_evaluation_matches_classical_rewrite() {
        let q = ratio(1, 2);
        let x = SigmaCombination::from_terms(Flavor::Quantized(q.clone()), [(p(&[2]), int(1))]);
        let classical = x.to_classical().unwrap();
        assert_eq!(classical.coefficient(&p(&[2])), ratio(3, 4));
        assert_eq!(classical.coefficient(&p(&[1, 1])), ratio(-1, 4));
        for l in partitions_of(5) {
            let via_p = x.to_observable().unwrap().evaluate(&l);
            assert_eq!(x.evaluate(&l).unwrap(), via_p);
        }
    }

    fn arb_obs() -> impl Strategy<Value = Observable> {
        proptest::collection::vec((proptest::collection::vec(1usize..4, 0..3), -5i64..5), 0..4)
            .prop_map(|ts| {
                Observable::from_terms(
                    ts.into_iter()
                        .map(|(parts, c)| (Partition::from_unsorted(parts), int(c))),
                )
            })
    }

    fn arb_sigma() -> impl Strategy<Value = SigmaCombination> {
        proptest::collection::vec((proptest::collection::vec(1usize..4, 0..3), -5i64..5), 0..4)
            .prop_map(|ts| {
                SigmaCombination::from_terms(
                    Flavor::Classical,
                    ts.into_iter()
                        .map(|(parts, c)| (Partition::from_unsorted(parts), int(c))),
                )
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn product_is_graded_commutative_associative(x in arb_obs(), y in arb_obs(), z in arb_obs()) {
            let xy = &x * &y;
            prop_assert_eq!(&xy, &(&y * &x));
            prop_assert_eq!(&(&xy * &z), &(&x * &(&y * &z)));
            if !x.is_zero() && !y.is_zero() {
                prop_assert_eq!(xy.deg(), Some(x.deg().unwrap() + y.deg().unwrap()));
            }
            prop_assert!(xy.terms().values().all(|c| !c.is_zero()));
            let l = Partition::from_unsorted(vec![3, 2, 2, 1]);
            prop_assert_eq!(xy.evaluate(&l), x.evaluate(&l) * y.evaluate(&l));
        }

        #[test]
        fn disjoint_product_is_commutative_associative(x in arb_sigma(), y in arb_sigma(), z in arb_sigma()) {
            let xy = x.disjoint_product(&y).unwrap();
            prop_assert_eq!(&xy, &y.disjoint_product(&x).unwrap());
            prop_assert_eq!(xy.disjoint_product(&z).unwrap(), x.disjoint_product(&y.disjoint_product(&z).unwrap()).unwrap());
        }
    }
}
