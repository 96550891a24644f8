//! Closed-form correlation measures of the eta-pairing state.
//!
//! Entropies are in bits. Two negativity conventions are reported for a `(−k, k)` pair:
//! the definitional `(‖ρ^{T_A}‖₁ − 1)/2 = ab` and the value `ab/3` stated in the
//! literature this crate reproduces. Neither replaces the other.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    choose_weight, compensated_sum, hypergeometric_weight, shannon_entropy, Filling, NeumaierSum,
};
use crate::slotstate::EtaParams;
use crate::spectra::{pair_rdm_tdl, paired_spectrum_tdl, unpaired_spectrum_tdl};

/// `x log₂ x` with `0 log 0 = 0`.
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Local entropies, mutual informations and negativities in the thermodynamic limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairMeasures {
    /// Entropy of one momentum mode.
    pub s_single: f64,
    /// Entropy of a `(−k, k)` pair.
    pub s_pair: f64,
    /// Mutual information between `k` and `−k`.
    pub i_pair: f64,
    /// Definitional negativity of the `(−k, k)` pair, `ab`.
    pub n_pair_raw: f64,
    /// The same negativity in the `ab/3` convention.
    pub n_pair_third: f64,
    /// Entropy of two `(−k, k)` pairs (four modes).
    pub s_fourmode: f64,
    /// Mutual information between two distinct pairs.
    pub i_twopair: f64,
    /// Negativity between two distinct pairs; always zero.
    pub n_twopair: f64,
}

/// All local measures at filling `a`, from their closed forms.
pub fn local_measures(filling: Filling) -> PairMeasures {
    let ab = filling.ab();
    let h = xlog2x(filling.a()) + xlog2x(filling.b());
    let s_single = -2.0 * h;
    let s_pair = -2.0 * (h + ab);
    let log2_3 = 3f64.log2();
    let s_fourmode = -4.0 * h - 8.0 * ab + ab * ab * (10.0 - 6.0 * log2_3);
    let i_twopair = 4.0 * ab + ab * ab * (6.0 * log2_3 - 10.0);
    PairMeasures {
        s_single,
        s_pair,
        i_pair: s_single + 2.0 * ab,
        n_pair_raw: ab,
        n_pair_third: ab / 3.0,
        s_fourmode,
        i_twopair,
        n_twopair: 0.0,
    }
}

/// The same measures computed from explicit spectra and the explicit pair RDM.
pub fn local_measures_via_spectra(filling: Filling) -> Result<PairMeasures> {
    let s_single = shannon_entropy(&unpaired_spectrum_tdl(filling, 1)?)?;
    let s_pair = shannon_entropy(&paired_spectrum_tdl(filling, 2))?;
    let s_fourmode = shannon_entropy(&paired_spectrum_tdl(filling, 4))?;
    let n_pair_raw = pair_rdm_tdl(filling).negativity(&[0])?;
    Ok(PairMeasures {
        s_single,
        s_pair,
        i_pair: 2.0 * s_single - s_pair,
        n_pair_raw,
        n_pair_third: n_pair_raw / 3.0,
        s_fourmode,
        i_twopair: 2.0 * s_pair - s_fourmode,
        n_twopair: 0.0,
    })
}

/// Entropy of `D₁` unpaired modes, `−2D₁(a log₂ a + b log₂ b)`.
pub fn block_entropy_unpaired(filling: Filling, d1: usize) -> f64 {
    -2.0 * d1 as f64 * (xlog2x(filling.a()) + xlog2x(filling.b()))
}

/// Entropy of `D₂` paired modes: the Shannon entropy of `Binomial(D₂, b)`, summed in
/// the log domain.
pub fn block_entropy_paired(filling: Filling, d2: usize) -> f64 {
    let (ln_a, ln_b) = (filling.ln_a(), filling.ln_b());
    let mut nats = NeumaierSum::new();
    for alpha in 0..=d2 {
        let w = choose_weight(d2 as u64, alpha as i64)
            * ln_a.powi((d2 - alpha) as i32)
            * ln_b.powi(alpha as i32);
        if !w.is_zero() {
            nats.add(-w.value() * w.ln());
        }
    }
    nats.total() / std::f64::consts::LN_2
}

/// Gaussian asymptote `½ log₂(2πe · D₂ab)` of [`block_entropy_paired`].
///
/// Valid when the binomial variance `D₂ab` is at least one; below that an
/// [`Error::OutsideValidity`] is returned instead of a number.
pub fn block_entropy_paired_asymptotic(filling: Filling, d2: usize) -> Result<f64> {
    let var = d2 as f64 * filling.ab();
    check_variance(var)?;
    Ok(0.5 * (std::f64::consts::TAU * std::f64::consts::E * var).log2())
}

/// `½ log₂ D₂ + ½ log₂(2π ab)`: the asymptote without the `e` of the Gaussian
/// entropy. Same validity domain.
pub fn block_entropy_paired_asymptotic_without_e(filling: Filling, d2: usize) -> Result<f64> {
    check_variance(d2 as f64 * filling.ab())?;
    Ok(0.5 * (d2 as f64).log2() + 0.5 * (std::f64::consts::TAU * filling.ab()).log2())
}

fn check_variance(var: f64) -> Result<()> {
    if var < 1.0 {
        return Err(Error::OutsideValidity(format!(
            "binomial variance D₂·ab = {var} < 1; the Gaussian asymptote does not apply"
        )));
    }
    Ok(())
}

/// `S(D₁ unpaired ∪ D₂ paired) = S_{D₁} + S_{D₂}`, exact in the thermodynamic limit.
pub fn block_entropy_mixed(filling: Filling, d1: usize, d2: usize) -> f64 {
    block_entropy_unpaired(filling, d1) + block_entropy_paired(filling, d2)
}

/// Variance of the pair-number distribution carried by the paired-block spectrum.
pub fn paired_spectrum_variance(filling: Filling, d2: usize) -> f64 {
    paired_spectrum_tdl(filling, d2).sector_variance()
}

/// Thermodynamic-limit ODLRO `⟨η†_l η_m⟩ → n_d(1 − n_d) = ab`.
pub fn odlro(filling: Filling) -> f64 {
    filling.ab()
}

/// `⟨η†_l η_m⟩ = N_d(L − N_d) / (L(L − 1))` for any `l ≠ m`; zero when `L = 1`.
pub fn odlro_finite(params: EtaParams) -> f64 {
    let (l, n) = (params.length() as f64, params.pairs() as f64);
    if params.length() < 2 {
        return 0.0;
    }
    n * (l - n) / (l * (l - 1.0))
}

/// Finite-size negativity between two disjoint `(−k, k)` pairs.
///
/// Each pair block is two full pair slots, so the four slots form a 4-qubit marginal of a
/// Dicke state: `ρ(x, y) = C(L − 4, N_d − |x|)/C(L, N_d)` whenever `|x| = |y|`. The partial
/// transpose is taken on the first pair. The value vanishes like `1/L`, which is why the
/// thermodynamic-limit entry [`PairMeasures::n_twopair`] is zero.
pub fn two_pair_negativity_finite(params: EtaParams) -> Result<f64> {
    let l = params.length();
    if l < 4 {
        return Err(Error::InvalidParameters(format!(
            "two disjoint pairs need L ≥ 4, got {l}"
        )));
    }
    let weight = |w: u32| hypergeometric_weight(l, params.pairs(), 4, w as usize).unwrap_or(0.0);
    // bits 0–1: first pair, bits 2–3: second pair
    let pt = nalgebra::DMatrix::from_fn(16, 16, |r, c| {
        let (r, c) = (r as u32, c as u32);
        let swap = |x: u32, y: u32| (y & 0b0011) | (x & 0b1100);
        let (x, y) = (swap(r, c), swap(c, r));
        if x.count_ones() == y.count_ones() {
            weight(x.count_ones())
        } else {
            0.0
        }
    });
    let eig = pt.symmetric_eigen().eigenvalues;
    Ok(compensated_sum(
        eig.iter().filter(|&&e| e < 0.0).map(|e| -e),
    ))
}

/// The negativity of a `(−k, k)` pair against the lattice-averaged pair correlator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativityOdlro {
    pub length: usize,
    pub pairs: usize,
    /// `|↑,↓⟩⟨↓,↑|` coherence of the pair RDM, `C(L − 2, N_d − 1)/C(L, N_d)`.
    pub pair_coherence: f64,
    /// Definitional negativity of the pair; equals the coherence.
    pub negativity_raw: f64,
    /// `negativity_raw / 3`.
    pub negativity_third: f64,
    /// `(1/L²) Σ_{l≠m} ⟨η†_l η_m⟩`.
    pub lattice_average: f64,
    /// `pair_coherence − lattice_average`, which is `pair_coherence / L`.
    pub residual: f64,
}

pub fn negativity_odlro_identity(params: EtaParams) -> NegativityOdlro {
    let l = params.length();
    let coherence = odlro_finite(params);
    let lattice_average = compensated_sum([coherence, -coherence / l as f64]);
    NegativityOdlro {
        length: l,
        pairs: params.pairs(),
        pair_coherence: coherence,
        negativity_raw: coherence,
        negativity_third: coherence / 3.0,
        lattice_average,
        residual: coherence - lattice_average,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: f64) -> Filling {
        Filling::new(a).unwrap()
    }

    #[test]
    fn half_filling_values() {
        let m = local_measures(f(0.5));
        assert!((m.s_single - 2.0).abs() < 1e-15);
        assert!((m.s_pair - 1.5).abs() < 1e-15);
        assert!((m.i_pair - 2.5).abs() < 1e-15);
        assert_eq!(m.n_pair_raw, 0.25);
        assert!((m.s_fourmode - 2.03064).abs() < 1e-5);
        assert!((m.i_twopair - 0.96936).abs() < 1e-5);
        assert_eq!(m.n_twopair, 0.0);
    }

    #[test]
    fn two_pair_negativity_is_a_finite_size_effect() {
        // dense 4-qubit Dicke marginals, partial transpose done in numpy
        let p = |l, n| EtaParams::new(l, n).unwrap();
        assert!((two_pair_negativity_finite(p(5, 2)).unwrap() - 0.39058).abs() < 1e-5);
        assert!((two_pair_negativity_finite(p(12, 6)).unwrap() - 0.10606).abs() < 1e-5);
        assert!((two_pair_negativity_finite(p(100, 50)).unwrap() - 0.01026).abs() < 1e-5);
        assert_eq!(two_pair_negativity_finite(p(8, 0)).unwrap(), 0.0);
        let mut last = f64::INFINITY;
        for l in [8, 16, 32, 64, 128, 256] {
            let n = two_pair_negativity_finite(p(l, l / 2)).unwrap();
            assert!(n < last);
            last = n;
        }
        assert!(last * 256.0 < 1.5);
    }

    #[test]
    fn product_state_is_trivial() {
        for a in [0.0, 1.0] {
            let m = local_measures(f(a));
            for v in [
                m.s_single,
                m.s_pair,
                m.i_pair,
                m.n_pair_raw,
                m.s_fourmode,
                m.i_twopair,
            ] {
                assert!(v.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn closed_forms_match_spectra() {
        for i in 1..10 {
            let fl = f(i as f64 / 10.0);
            let c = local_measures(fl);
            let s = local_measures_via_spectra(fl).unwrap();
            for (x, y) in [
                (c.s_single, s.s_single),
                (c.s_pair, s.s_pair),
                (c.i_pair, s.i_pair),
                (c.n_pair_raw, s.n_pair_raw),
                (c.s_fourmode, s.s_fourmode),
                (c.i_twopair, s.i_twopair),
            ] {
                assert!((x - y).abs() < 1e-12, "{x} vs {y} at a = {}", fl.a());
            }
        }
    }

    #[test]
    fn block_entropy_examples() {
        assert!((block_entropy_unpaired(f(0.5), 3) - 6.0).abs() < 1e-14);
        assert_eq!(block_entropy_unpaired(f(1.0), 7), 0.0);
        assert!((block_entropy_paired(f(0.5), 2) - 1.5).abs() < 1e-14);
        assert!((block_entropy_paired(f(0.5), 4) - 2.03064).abs() < 1e-5);
        assert!((block_entropy_mixed(f(0.5), 1, 2) - 3.5).abs() < 1e-14);
        assert_eq!(block_entropy_paired(f(0.0), 50), 0.0);
    }

    #[test]
    fn asymptote_validity() {
        assert!(matches!(
            block_entropy_paired_asymptotic(f(1.0), 1000),
            Err(Error::OutsideValidity(_))
        ));
        assert!(block_entropy_paired_asymptotic(f(0.5), 2).is_err());
        let exact = block_entropy_paired(f(0.5), 100);
        let gauss = block_entropy_paired_asymptotic(f(0.5), 100).unwrap();
        assert!((exact - gauss).abs() < 0.01);
        let no_e = block_entropy_paired_asymptotic_without_e(f(0.5), 100).unwrap();
        assert!((gauss - no_e - 0.5 * std::f64::consts::E.log2()).abs() < 1e-12);
    }

    #[test]
    fn odlro_examples() {
        assert_eq!(odlro(f(0.5)), 0.25);
        assert_eq!(odlro(f(0.0)), 0.0);
        let r = negativity_odlro_identity(EtaParams::new(4, 2).unwrap());
        assert!((r.pair_coherence - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.lattice_average - 0.25).abs() < 1e-15);
        assert!((r.residual - 1.0 / 12.0).abs() < 1e-15);
        assert_eq!(odlro_finite(EtaParams::new(1, 1).unwrap()), 0.0);
    }
}
