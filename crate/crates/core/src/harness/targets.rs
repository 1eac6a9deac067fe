//! Limiting covariances of the rescaled fluctuations.

use std::str::FromStr;

use num_traits::One;

use crate::measures::QParameter;
use crate::scalar::{int, pow, q_integer, Scalar};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetKind {
    /// Rows `Y_i = √n (λ_i/n - (1-q) q^{i-1})`.
    Rows,
    /// Power sums `W_l = √n (p_l - E p_l) / n^l`.
    PowerSums,
    /// Characters `Z_k = √n (Σ_k / n^k - (1-q)^k / (1-q^k))`.
    Sigmas,
    /// Quantized characters `S_k = √n Σ_{k,q} / n^k`.
    QChars,
}

impl FromStr for TargetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rows" => Ok(Self::Rows),
            "powersums" => Ok(Self::PowerSums),
            "sigmas" => Ok(Self::Sigmas),
            "qchars" => Ok(Self::QChars),
            _ => Err(Error::Parse(format!("unknown target kind {s:?}"))),
        }
    }
}

/// Exact limiting covariance of the `l`-th and `m`-th rescaled statistics.
pub fn clt_covariance_targets(
    q: &QParameter,
    which: TargetKind,
    l: usize,
    m: usize,
) -> Result<Scalar> {
    let q = q.exact_value()?;
    let one = Scalar::one();
    let omq = &one - q;
    let one_minus_pow = |k: usize| &one - pow(q, k as i32);
    match which {
        TargetKind::Rows => {
            if l == 0 || m == 0 {
                return Err(Error::Precondition("row indices start at 1".into()));
            }
            let diag = if l == m {
                &omq * pow(q, l as i32 - 1)
            } else {
                Scalar::from_integer(0.into())
            };
            Ok(diag - &omq * &omq * pow(q, (l + m) as i32 - 2))
        }
        TargetKind::PowerSums | TargetKind::Sigmas => {
            if l == 0 || m == 0 || (which == TargetKind::Sigmas && (l < 2 || m < 2)) {
                return Err(Error::Precondition(
                    "indices outside the formula's domain".into(),
                ));
            }
            let lm = int((l * m) as i64);
            let a = one_minus_pow(l + m - 1) * one_minus_pow(1);
            let b = one_minus_pow(l) * one_minus_pow(m);
            Ok(lm * pow(&omq, (l + m) as i32) * (one.clone() / a - one.clone() / b))
        }
        TargetKind::QChars => {
            if l < 2 || m < 2 {
                return Err(Error::Precondition(
                    "quantized character covariances need l, m >= 2".into(),
                ));
            }
            let base = q - q * q;
            let num = pow(&base, (l + m) as i32 - 3)
                * (&one - q * q)
                * q_integer(l - 1, q)
                * q_integer(m - 1, q);
            let den = q_integer(l + m - 1, q) * q_integer(l + m - 2, q) * q_integer(l + m - 3, q);
            Ok(num / den)
        }
    }
}
