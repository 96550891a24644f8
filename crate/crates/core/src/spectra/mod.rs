//! Closed-form reduced-density-matrix spectra of eta-pairing blocks.
//!
//! A momentum block of `D₁` unpaired modes and `D₂` paired modes touches `2D₁` pair
//! slots partially and `D₂` slots fully. Its RDM is block diagonal in the number `M` of
//! particles on unpaired modes and the number `α` of pairs on full slots. Each sector
//! carries the hypergeometric weight `w(M + α) = C(L − 2D₁ − D₂, N_d − M − α) / C(L, N_d)`:
//! unpaired configurations are diagonal (multiplicity `C(2D₁, M)`), and the `C(D₂, α)`
//! full-slot configurations form a uniform rank-one block with eigenvalue
//! `C(D₂, α) · w(M + α)` and `C(D₂, α) − 1` zeros.

mod block;
mod spectrum;

pub use block::{generic_modes, is_self_conjugate, partner, BlockSpec};
pub use spectrum::{Level, Spectrum};

use crate::error::{Error, Result};
use crate::numerics::{choose_weight, exact_choose, log_hypergeometric_weight, Filling, LogProb};
use crate::slotstate::{DensityMatrix, EtaParams, HermitianMatrix, Picture};

fn multiplicity(n: usize, k: usize) -> Result<u128> {
    exact_choose(n as u64, k as u64)
        .ok_or_else(|| Error::InvalidParameters(format!("multiplicity C({n}, {k}) overflows u128")))
}

/// Attaches the null count `dimension − Σ multiplicity` to a list of levels.
fn with_dimension(levels: Vec<Level>, dimension: Option<u128>) -> Spectrum {
    let supported: u128 = levels.iter().map(|l| l.multiplicity).sum();
    Spectrum::from_levels(levels, dimension.map(|d| d - supported))
}

fn pow_dim(base: u128, exp: usize) -> Option<u128> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

/// Exact finite-size spectrum of `block` in `|Ψ(L, N_d)⟩`.
pub fn block_spectrum_finite(params: EtaParams, block: &BlockSpec) -> Result<Spectrum> {
    if block.lattice_len() != params.length() {
        return Err(Error::InvalidBlock(format!(
            "block is defined on L = {}, state on L = {}",
            block.lattice_len(),
            params.length()
        )));
    }
    match block.picture() {
        Picture::Direct => direct_block_spectrum(params, block.size()),
        Picture::Momentum => momentum_spectrum_finite(params, block.d1(), block.d2()),
    }
}

/// [`block_spectrum_finite`] by class `(D₁, D₂)`; the spectrum depends on nothing else.
pub fn momentum_spectrum_finite(params: EtaParams, d1: usize, d2: usize) -> Result<Spectrum> {
    let (l, n) = (params.length(), params.pairs());
    let touched = 2 * d1 + d2;
    if touched > l {
        return Err(Error::InvalidBlock(format!(
            "D₁ = {d1}, D₂ = {d2} needs {touched} pair slots but L = {l}"
        )));
    }
    let mut levels = Vec::with_capacity((2 * d1 + 1) * (d2 + 1));
    for m in 0..=2 * d1 {
        let mult = multiplicity(2 * d1, m)?;
        for alpha in 0..=d2 {
            let w = log_hypergeometric_weight(l, n, touched, m + alpha)?;
            levels.push(Level::new(choose_weight(d2 as u64, alpha as i64) * w, mult));
        }
    }
    Ok(with_dimension(levels, pow_dim(4, d1 + d2)))
}

/// The finite-size spectrum as the product of separately normalized unpaired and
/// paired factors. Exact only as `L → ∞`; kept to quantify the finite-size deviation.
pub fn block_spectrum_finite_factorized(
    params: EtaParams,
    d1: usize,
    d2: usize,
) -> Result<Spectrum> {
    let unpaired = momentum_spectrum_finite(params, d1, 0)?;
    let paired = momentum_spectrum_finite(params, 0, d2)?;
    Ok(unpaired.tensor(&paired))
}

/// Thermodynamic-limit spectrum at filling `a`: levels `a^{2D₁−M} b^M` (multiplicity
/// `C(2D₁, M)`) times `C(D₂, α) a^{D₂−α} b^α`.
pub fn block_spectrum_tdl(filling: Filling, d1: usize, d2: usize) -> Result<Spectrum> {
    Ok(unpaired_spectrum_tdl(filling, d1)?.tensor(&paired_spectrum_tdl(filling, d2)))
}

pub(crate) fn unpaired_spectrum_tdl(filling: Filling, d1: usize) -> Result<Spectrum> {
    let (ln_a, ln_b) = (filling.ln_a(), filling.ln_b());
    let units = 2 * d1;
    let levels = (0..=units)
        .map(|m| {
            let w = ln_a.powi((units - m) as i32) * ln_b.powi(m as i32);
            Ok(Level::new(w, multiplicity(units, m)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(with_dimension(levels, pow_dim(4, d1)))
}

/// Binomial pair spectrum; levels are listed in order `α = 0, 1, …, D₂`.
pub(crate) fn paired_spectrum_tdl(filling: Filling, d2: usize) -> Spectrum {
    let (ln_a, ln_b) = (filling.ln_a(), filling.ln_b());
    let levels = (0..=d2)
        .map(|alpha| {
            let w = choose_weight(d2 as u64, alpha as i64)
                * ln_a.powi((d2 - alpha) as i32)
                * ln_b.powi(alpha as i32);
            Level::new(w, 1)
        })
        .collect();
    with_dimension(levels, pow_dim(4, d2))
}

/// RDM of a `(−k, k)` mode pair in the thermodynamic limit, on the basis
/// `|0,0⟩, |↑,↓⟩, |↓,↑⟩, |↑↓,↑↓⟩` (labels 0, 9, 6, 15 with `↑ = bit 0`, `↓ = bit 1`
/// per mode and the `−k` mode first).
pub fn pair_rdm_tdl(filling: Filling) -> DensityMatrix {
    let (a, b) = (filling.a(), filling.b());
    let ab = a * b;
    let triples = [
        (0, 0, a * a),
        (9, 9, ab),
        (9, 6, ab),
        (6, 9, ab),
        (6, 6, ab),
        (15, 15, b * b),
    ];
    let m = HermitianMatrix::from_triples(4, 2, triples).expect("valid labels");
    DensityMatrix::new(m).expect("unit trace for a valid filling")
}

/// Spectrum of `D` lattice sites: `C(D, l) C(L − D, N_d − l) / C(L, N_d)`, `l = 0..=D`.
pub fn direct_block_spectrum(params: EtaParams, d: usize) -> Result<Spectrum> {
    let (l, n) = (params.length(), params.pairs());
    if d > l {
        return Err(Error::InvalidBlock(format!("D = {d} exceeds L = {l}")));
    }
    let levels = (0..=d)
        .map(|k| {
            let w: LogProb = log_hypergeometric_weight(l, n, d, k)?;
            Ok(Level::new(choose_weight(d as u64, k as i64) * w, 1))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(with_dimension(levels, pow_dim(2, d)))
}
