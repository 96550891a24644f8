//! Generalized Meyer–Wallach measure `Q_{D,d}`: the normalized average linear entropy
//! of all `D`-unit subsystems.
//!
//! In the momentum picture (`d = 4`) a `D`-mode subset falls into a class `(D₁, D₂)` by
//! how many of its modes have their partner inside; all subsets of one class share a
//! spectrum, so the average runs over classes weighted by their counts `f(D₂)`. In the
//! direct picture (`d = 2`) the state is permutation symmetric and one block suffices.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{log_choose, log_hypergeometric_weight, NeumaierSum};
use crate::slotstate::{EtaParams, Picture};

/// A real number stored as sign and `ln |value|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignedLog {
    pub sign: i8,
    pub ln_abs: f64,
}

impl SignedLog {
    pub fn value(self) -> f64 {
        self.sign as f64 * self.ln_abs.exp()
    }

    /// `self / exp(ln_denominator)` as a plain number.
    pub fn ratio(self, ln_denominator: f64) -> f64 {
        self.sign as f64 * (self.ln_abs - ln_denominator).exp()
    }
}

fn signed_product<I: IntoIterator<Item = i64>>(factors: I) -> SignedLog {
    let mut sign = 1i8;
    let mut ln_abs = NeumaierSum::new();
    for f in factors {
        if f == 0 {
            return SignedLog {
                sign: 0,
                ln_abs: f64::NEG_INFINITY,
            };
        }
        if f < 0 {
            sign = -sign;
        }
        ln_abs.add((f.unsigned_abs() as f64).ln());
    }
    SignedLog {
        sign,
        ln_abs: ln_abs.total(),
    }
}

fn check_class(length: usize, d: usize, d2: usize) -> Result<usize> {
    if d2 % 2 == 1 {
        return Err(Error::InvalidParameters(format!(
            "D₂ = {d2} must be even: paired modes come in (−k, k) pairs"
        )));
    }
    if d2 > d || d > length {
        return Err(Error::InvalidParameters(format!(
            "need 0 ≤ D₂ ≤ D ≤ L, got D₂ = {d2}, D = {d}, L = {length}"
        )));
    }
    Ok(d - d2)
}

/// Number of `D`-mode subsets of `L` modes containing exactly `D₂/2` complete `(−k, k)`
/// pairs, assuming every mode has a distinct partner:
/// `∏_{i<D₁}(L − 2i)/D₁! · ∏_{j<D₂/2}(L − 2D₁ − 2j) / (2^{D₂/2}(D₂/2)!)`.
///
/// Evaluated as a polynomial in `L`, so `Σ_{D₂} f(D₂) = C(L, D)` holds for every `L`;
/// for odd `L` the classes that do not fit on the lattice can carry signed weights.
pub fn pairing_partition_count(length: usize, d: usize, d2: usize) -> Result<SignedLog> {
    let d1 = check_class(length, d, d2)?;
    let l = length as i64;
    let p = (d2 / 2) as i64;
    let d1i = d1 as i64;
    let num = signed_product(
        (0..d1i)
            .map(|i| l - 2 * i)
            .chain((0..p).map(|j| l - 2 * d1i - 2 * j)),
    );
    let den = ln_fact(d1) + ln_fact(d2 / 2) + p as f64 * std::f64::consts::LN_2;
    Ok(SignedLog {
        sign: num.sign,
        ln_abs: num.ln_abs - den,
    })
}

/// The count with the pair factor divided by `D₂!` that is sometimes quoted.
/// It agrees with [`pairing_partition_count`] only for `D₂ ≤ 2`.
pub fn partition_count_factorial(length: usize, d: usize, d2: usize) -> Result<SignedLog> {
    let d1 = check_class(length, d, d2)?;
    let l = length as i64;
    let d1i = d1 as i64;
    let num = signed_product(
        (0..d1i)
            .map(|i| l - 2 * i)
            .chain((0..(d2 / 2) as i64).map(|j| l - 2 * d1i - 2 * j)),
    );
    Ok(SignedLog {
        sign: num.sign,
        ln_abs: num.ln_abs - ln_fact(d1) - ln_fact(d2),
    })
}

fn ln_fact(n: usize) -> f64 {
    crate::numerics::ln_factorial(n as u64)
}

/// How the purity of a `(D₁, D₂)` block is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum QPurityModel {
    /// `Σ_{M,α} C(2D₁, M) [C(D₂, α) w(M + α)]²` from the exact finite-size spectrum.
    #[default]
    Exact,
    /// `Tr ρ²_{D₁} · Tr ρ²_{D₂}` with separately normalized factors; exact only as `L → ∞`.
    Factorized,
}

/// Purity of a block with `D₁` unpaired and `D₂` paired modes.
pub fn block_purity(params: EtaParams, d1: usize, d2: usize, model: QPurityModel) -> Result<f64> {
    match model {
        QPurityModel::Exact => sector_purity(params, d1, d2),
        QPurityModel::Factorized => {
            Ok(sector_purity(params, d1, 0)? * sector_purity(params, 0, d2)?)
        }
    }
}

fn sector_purity(params: EtaParams, d1: usize, d2: usize) -> Result<f64> {
    let (l, n) = (params.length(), params.pairs());
    let touched = 2 * d1 + d2;
    if touched > l {
        return Err(Error::InvalidBlock(format!(
            "D₁ = {d1}, D₂ = {d2} needs {touched} pair slots but L = {l}"
        )));
    }
    let mut sum = NeumaierSum::new();
    for m in 0..=2 * d1 {
        let ln_mult = log_choose(2 * d1 as u64, m as i64);
        for alpha in 0..=d2 {
            let w = log_hypergeometric_weight(l, n, touched, m + alpha)?;
            if w.is_zero() {
                continue;
            }
            let ln_level = log_choose(d2 as u64, alpha as i64) + w.ln();
            sum.add((ln_mult + 2.0 * ln_level).exp());
        }
    }
    Ok(sum.total())
}

/// Purity of `D` lattice sites: `Σ_l [C(D, l) C(L − D, N_d − l)/C(L, N_d)]²`.
pub fn direct_block_purity(params: EtaParams, d: usize) -> Result<f64> {
    sector_purity(params, 0, d)
}

/// One `(D₁, D₂)` class of a momentum-picture average.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QClass {
    pub d1: usize,
    pub d2: usize,
    /// `ln f(D₂)`.
    pub ln_count: f64,
    /// Share of all `D`-subsets in this class.
    pub fraction: f64,
    pub purity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QReport {
    pub length: usize,
    pub pairs: usize,
    pub block_size: usize,
    pub picture: Picture,
    pub q: f64,
    /// Subset-averaged purity.
    pub mean_purity: f64,
    /// Per-class decomposition; empty in the direct picture.
    pub classes: Vec<QClass>,
}

/// `d^D / (d^D − 1)` without forming `d^D`.
fn normalization(local_dim: usize, d: usize) -> f64 {
    1.0 / -(-(d as f64) * (local_dim as f64).ln()).exp_m1()
}

fn check_even(d: usize) -> Result<()> {
    if d % 2 == 1 {
        return Err(Error::OddBlockSize(d));
    }
    Ok(())
}

/// `Q_{D,4}` in the momentum picture with the exact block purity.
pub fn q_kspace(params: EtaParams, d: usize) -> Result<QReport> {
    q_kspace_with(params, d, params.length(), QPurityModel::Exact)
}

/// `Q_{D,4}` averaged over `D`-subsets of `mode_count` paired modes, e.g. the generic
/// modes of a small lattice once `k = 0, π` are set aside.
pub fn q_kspace_over_modes(params: EtaParams, d: usize, mode_count: usize) -> Result<QReport> {
    q_kspace_with(params, d, mode_count, QPurityModel::Exact)
}

/// Full control over the mode count and the purity model.
///
/// Classes that need more than `L` pair slots are empty and skipped; the remaining
/// class counts are renormalized to sum to one.
pub fn q_kspace_with(
    params: EtaParams,
    d: usize,
    mode_count: usize,
    model: QPurityModel,
) -> Result<QReport> {
    check_even(d)?;
    if mode_count > params.length() || d > mode_count {
        return Err(Error::InvalidParameters(format!(
            "need D ≤ modes ≤ L, got D = {d}, modes = {mode_count}, L = {}",
            params.length()
        )));
    }
    let mut report = QReport {
        length: params.length(),
        pairs: params.pairs(),
        block_size: d,
        picture: Picture::Momentum,
        q: 0.0,
        mean_purity: 1.0,
        classes: Vec::new(),
    };
    if d == 0 {
        return Ok(report);
    }
    let mut raw = Vec::new();
    for d2 in (0..=d).step_by(2) {
        let d1 = d - d2;
        let count = pairing_partition_count(mode_count, d, d2)?;
        if count.sign <= 0 || 2 * d1 + d2 > mode_count {
            continue;
        }
        raw.push((d1, d2, count.ln_abs, block_purity(params, d1, d2, model)?));
    }
    let ln_max = raw.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = raw.iter().map(|r| (r.2 - ln_max).exp()).sum();
    let mut mean = NeumaierSum::new();
    for (d1, d2, ln_count, purity) in raw {
        let fraction = (ln_count - ln_max).exp() / total;
        mean.add(fraction * purity);
        report.classes.push(QClass {
            d1,
            d2,
            ln_count,
            fraction,
            purity,
        });
    }
    report.mean_purity = mean.total();
    report.q = (normalization(4, d) * (1.0 - report.mean_purity)).clamp(0.0, 1.0);
    Ok(report)
}

/// `Q_{D,2}` in the direct picture.
pub fn q_direct(params: EtaParams, d: usize) -> Result<QReport> {
    if d > params.length() {
        return Err(Error::InvalidParameters(format!(
            "D = {d} exceeds L = {}",
            params.length()
        )));
    }
    let purity = if d == 0 {
        1.0
    } else {
        direct_block_purity(params, d)?
    };
    let q = if d == 0 {
        0.0
    } else {
        normalization(2, d) * (1.0 - purity)
    };
    Ok(QReport {
        length: params.length(),
        pairs: params.pairs(),
        block_size: d,
        picture: Picture::Direct,
        q: q.clamp(0.0, 1.0),
        mean_purity: purity,
        classes: Vec::new(),
    })
}

pub fn q_measure(params: EtaParams, d: usize, picture: Picture) -> Result<QReport> {
    match picture {
        Picture::Momentum => q_kspace(params, d),
        Picture::Direct => q_direct(params, d),
    }
}

/// `Q` for every `N_d = 0..=L` at fixed `L` and `D`, ordered by `N_d`. Points are
/// evaluated in parallel.
pub fn q_curve(length: usize, d: usize, picture: Picture) -> Result<Vec<QReport>> {
    if picture == Picture::Momentum {
        check_even(d)?;
    }
    (0..=length)
        .into_par_iter()
        .map(|n| q_measure(EtaParams::new(length, n)?, d, picture))
        .collect()
}
