//! Truncated power series in a formal variable `t` with observable
//! coefficients, and the generating series for `Σ_k`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use super::Observable;
use crate::partition::Partition;
use crate::scalar::{self, Scalar};

/// `c_0 + c_1 t + ... + c_T t^T`, arithmetic exact modulo `t^{T+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Observable>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Observable::zero(); order + 1],
        }
    }

    pub fn constant(order: usize, c: Observable) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &Observable {
        &self.coeffs[i]
    }

    /// Adds `c t^i`; ignored beyond the truncation order.
    pub fn add_term(&mut self, i: usize, c: &Observable) {
        if i < self.coeffs.len() {
            self.coeffs[i] = &self.coeffs[i] + c;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if !other.coeffs[j].is_zero() {
                    out.coeffs[i + j] = &out.coeffs[i + j] + &(&self.coeffs[i] * &other.coeffs[j]);
                }
            }
        }
        out
    }

    /// `exp(x)` for a series with zero constant term.
    pub fn exp(&self) -> Self {
        assert!(self.coeffs[0].is_zero(), "exp needs a zero constant term");
        let order = self.order();
        let mut acc = Self::constant(order, Observable::one());
        let mut power = Self::constant(order, Observable::one());
        for m in 1..=order {
            power = power.mul(self);
            acc = acc.add(&power.scale(&Scalar::new(BigInt::one(), scalar::factorial(m))));
        }
        acc
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    scalar::falling_factorial(n, k) / scalar::factorial(k)
}

thread_local! {
    static SIGMA_K: RefCell<HashMap<usize, Observable>> = RefCell::new(HashMap::new());
}

/// Expansion of `Σ_k` in power sums, as the coefficient of `t^{k+1}` in
/// `-(1/k) ∏_{j=1}^{k} (1 - (j - 1/2) t) · exp(Σ_j p_j t^j/j · (1 - (1 - k t)^{-j}))`.
pub fn sigma_k_in_p(k: usize) -> Observable {
    assert!(k >= 1, "sigma_k_in_p needs k >= 1");
    if let Some(x) = SIGMA_K.with(|m| m.borrow().get(&k).cloned()) {
        return x;
    }
    let order = k + 1;
    let kk = scalar::int(k as i64);
    // (1 - (1 - kt)^{-j}) = -Σ_{m≥1} C(j+m-1, m) k^m t^m
    let mut exponent = TruncatedSeries::zero(order);
    for j in 1..=k {
        let pj = Observable::p(Partition::row(j));
        for m in 1..=order - j {
            let c = -Scalar::from_integer(binomial(j + m - 1, m)) * scalar::pow(&kk, m as i32)
                / scalar::int(j as i64);
            exponent.add_term(j + m, &pj.scale(&c));
        }
    }
    let mut prefactor = TruncatedSeries::constant(order, Observable::one());
    for j in 1..=k {
        let mut factor = TruncatedSeries::constant(order, Observable::one());
        factor.add_term(
            1,
            &Observable::constant(-scalar::ratio(2 * j as i64 - 1, 2)),
        );
        prefactor = prefactor.mul(&factor);
    }
    let series = prefactor.mul(&exponent.exp());
    let result = series.coeff(order).scale(&-scalar::ratio(1, k as i64));
    SIGMA_K.with(|m| m.borrow_mut().insert(k, result.clone()));
    result
}
