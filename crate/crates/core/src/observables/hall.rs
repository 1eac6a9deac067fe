//! Hall scalar products between power sums, complete and monomial symmetric
//! functions, and the triangular change of basis between `Σ_ρ` and `Σ_{ρ,q}`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::character::sigma_eval;
use crate::measures::QParameter;
use crate::partition::{partitions_of, Partition};
use crate::scalar::{self, Scalar};
use crate::{Error, Result};

fn check_sizes(nu: &Partition, rho: &Partition) -> Result<()> {
    if nu.size() != rho.size() {
        return Err(Error::SizeMismatch {
            expected: nu.size(),
            actual: rho.size(),
        });
    }
    Ok(())
}

/// `⟨p_ν, h_ρ⟩`: the coefficient of `x^ρ` in `p_ν` expanded over `ℓ(ρ)`
/// variables.
pub fn scalar_ph(nu: &Partition, rho: &Partition) -> Result<BigInt> {
    check_sizes(nu, rho)?;
    let vars = rho.len();
    let target = rho.parts();
    let mut poly: HashMap<Vec<usize>, BigInt> = HashMap::new();
    poly.insert(vec![0; vars], BigInt::one());
    for &part in nu.parts() {
        let mut next: HashMap<Vec<usize>, BigInt> = HashMap::new();
        for (exps, c) in &poly {
            for v in 0..vars {
                if exps[v] + part <= target[v] {
                    let mut e = exps.clone();
                    e[v] += part;
                    *next.entry(e).or_insert_with(BigInt::zero) += c;
                }
            }
        }
        poly = next;
    }
    Ok(poly.remove(target).unwrap_or_else(BigInt::zero))
}

fn invert(mut a: Vec<Vec<Scalar>>) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
    }
    Some(inv)
}

/// Partitions of `k` and the inverse of the `⟨p, h⟩` matrix, per `k`.
type InverseCache = HashMap<usize, (Vec<Partition>, Vec<Vec<Scalar>>)>;

thread_local! {
    static PH_INVERSE: RefCell<InverseCache> = RefCell::new(HashMap::new());
}

/// `⟨m_ν, p_ρ⟩`.
///
/// Reading monomial coefficients of `p_ρ` yields `⟨p_ρ, h_ν⟩`, the matrix
/// of `p` in the `m` basis; inverting it gives `m` in the `p` basis, and
/// `⟨m_ν, p_ρ⟩ = z_ρ · [p_ρ] m_ν`.
pub fn scalar_mp(nu: &Partition, rho: &Partition) -> Result<Scalar> {
    check_sizes(nu, rho)?;
    let k = nu.size();
    let (index, inv) = PH_INVERSE.with(|cache| -> Result<_> {
        if let Some(hit) = cache.borrow().get(&k) {
            return Ok(hit.clone());
        }
        let index: Vec<Partition> = partitions_of(k).collect();
        let a = index
            .iter()
            .map(|r| {
                index
                    .iter()
                    .map(|v| scalar_ph(r, v).map(Scalar::from_integer))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let inv = invert(a).expect("p-to-m transition matrix is unitriangular up to order");
        cache.borrow_mut().insert(k, (index.clone(), inv.clone()));
        Ok((index, inv))
    })?;
    let i = index.iter().position(|x| x == nu).expect("enumerated");
    let j = index.iter().position(|x| x == rho).expect("enumerated");
    Ok(&inv[i][j] * Scalar::from_integer(rho.z_coefficient()))
}

/// Which way a [`QCharMatrix`] converts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `Σ_{ρ,q} = Σ_ν T[ρ][ν] Σ_ν`, with
    /// `T[ρ][ν] = (q^ν - 1) ⟨p_ν, h_ρ⟩ / (z_ν (q-1)^{ℓ(ρ)})`.
    QuantizedToClassical,
    /// `Σ_ρ = Σ_ν T[ρ][ν] Σ_{ν,q}`, with
    /// `T[ρ][ν] = (q-1)^{ℓ(ν)} ⟨m_ν, p_ρ⟩ / (q^ρ - 1)`.
    ClassicalToQuantized,
}

/// Square matrix indexed by the partitions of `k` in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCharMatrix {
    pub k: usize,
    pub q: Scalar,
    pub direction: Direction,
    pub index: Vec<Partition>,
    pub entries: Vec<Vec<Scalar>>,
}

impl QCharMatrix {
    fn position(&self, rho: &Partition) -> Option<usize> {
        self.index.iter().position(|x| x == rho)
    }

    pub fn get(&self, rho: &Partition, nu: &Partition) -> Scalar {
        match (self.position(rho), self.position(nu)) {
            (Some(i), Some(j)) => self.entries[i][j].clone(),
            _ => Scalar::zero(),
        }
    }

    /// Nonzero entries of row `rho`.
    pub fn row<'a>(
        &'a self,
        rho: &Partition,
    ) -> impl Iterator<Item = (&'a Partition, &'a Scalar)> + 'a {
        let i = self.position(rho).expect("row index of the right size");
        self.index
            .iter()
            .zip(&self.entries[i])
            .filter(|(_, c)| !c.is_zero())
    }

    /// Matrix product `self · other` (same index set).
    pub fn product(&self, other: &QCharMatrix) -> Vec<Vec<Scalar>> {
        let n = self.index.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|l| &self.entries[i][l] * &other.entries[l][j])
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }
}

/// `∏_i (q^{ν_i} - 1)`.
fn q_power_minus_one(q: &Scalar, nu: &Partition) -> Scalar {
    nu.parts()
        .iter()
        .map(|&p| scalar::pow(q, p as i32) - Scalar::one())
        .product()
}

thread_local! {
    static QCHAR: RefCell<HashMap<(usize, Scalar, bool), QCharMatrix>> = RefCell::new(HashMap::new());
}

/// Transition matrix between classical and quantized character symbols of
/// degree `k`.
pub fn qchar_transition(k: usize, q: &QParameter, direction: Direction) -> Result<QCharMatrix> {
    let q = q.exact_value()?.clone();
    if q.is_one() {
        return Err(Error::InvalidQ("q=1 unsupported".into()));
    }
    let key = (k, q.clone(), direction == Direction::QuantizedToClassical);
    if let Some(hit) = QCHAR.with(|c| c.borrow().get(&key).cloned()) {
        return Ok(hit);
    }
    let index: Vec<Partition> = partitions_of(k).collect();
    let qm1 = &q - Scalar::one();
    let mut entries = Vec::with_capacity(index.len());
    for rho in &index {
        let mut row = Vec::with_capacity(index.len());
        for nu in &index {
            let value = match direction {
                Direction::QuantizedToClassical => {
                    let ph = Scalar::from_integer(scalar_ph(nu, rho)?);
                    q_power_minus_one(&q, nu) * ph
                        / Scalar::from_integer(nu.z_coefficient())
                        / scalar::pow(&qm1, rho.len() as i32)
                }
                Direction::ClassicalToQuantized => {
                    scalar::pow(&qm1, nu.len() as i32) * scalar_mp(nu, rho)?
                        / q_power_minus_one(&q, rho)
                }
            };
            row.push(value);
        }
        entries.push(row);
    }
    let m = QCharMatrix {
        k,
        q,
        direction,
        index,
        entries,
    };
    QCHAR.with(|c| c.borrow_mut().insert(key, m.clone()));
    Ok(m)
}

/// `Σ_{ρ,q}(λ)`, computed from classical characters through the
/// quantized-to-classical transition; zero when `|ρ| > |λ|`.
pub fn eval_qcharacter(lambda: &Partition, rho: &Partition, q: &QParameter) -> Result<Scalar> {
    let m = qchar_transition(rho.size(), q, Direction::QuantizedToClassical)?;
    if rho.size() > lambda.size() {
        return Ok(Scalar::zero());
    }
    Ok(m.row(rho).map(|(nu, c)| c * sigma_eval(nu, lambda)).sum())
}
