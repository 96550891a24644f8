//! Oracle-versus-closed-form suite behind `etapair verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::two_pair_negativity_finite;
use crate::numerics::hypergeometric_weight;
use crate::qmeasure::{q_direct, q_kspace_over_modes};
use crate::slotstate::{
    build_eta_state_capped, measure_with_rng, mutual_information, reduce_with_ordering, subsets,
    two_block_negativity, Caps, EtaParams, OrbitalOrdering, Picture, SlotState,
};
use crate::spectra::{block_spectrum_finite, generic_modes, momentum_spectrum_finite, BlockSpec};

/// Largest lattice the suite enumerates.
pub const VERIFY_MAX_LENGTH: usize = 12;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyOptions {
    pub lmax: usize,
    pub dmax: usize,
    pub seed: u64,
    /// Replaces every tolerance when set.
    pub tolerance: Option<f64>,
    pub caps: Caps,
}

/// One identity checked at one lattice length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub check: &'static str,
    pub length: usize,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

struct Acc {
    check: &'static str,
    length: usize,
    cases: usize,
    max_error: f64,
}

impl Acc {
    fn new(check: &'static str, length: usize) -> Self {
        Acc {
            check,
            length,
            cases: 0,
            max_error: 0.0,
        }
    }

    fn add(&mut self, error: f64) {
        self.cases += 1;
        // NaN must poison the row
        if error.is_nan() || error > self.max_error {
            self.max_error = error;
        }
    }

    fn finish(self, tolerance: f64, rows: &mut Vec<VerifyRow>) {
        if self.cases == 0 {
            return;
        }
        rows.push(VerifyRow {
            check: self.check,
            length: self.length,
            cases: self.cases,
            max_error: self.max_error,
            tolerance,
            pass: self.max_error <= tolerance,
        });
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Pair representatives `j` with `0 < j < L − j`.
fn pair_reps(l: usize) -> Vec<usize> {
    (1..=(l - 1) / 2).collect()
}

/// One block per `(D₁, D₂)` class: unpaired modes on the first representatives
/// (alternating `k` and `−k`), complete pairs on the following ones.
pub fn representative_block(l: usize, d1: usize, d2: usize) -> Option<BlockSpec> {
    let reps = pair_reps(l);
    if d2 % 2 == 1 || d1 + d2 / 2 > reps.len() {
        return None;
    }
    let unpaired: Vec<usize> = reps[..d1]
        .iter()
        .enumerate()
        .map(|(i, &j)| if i % 2 == 0 { j } else { l - j })
        .collect();
    BlockSpec::momentum(l, &unpaired, &reps[d1..d1 + d2 / 2]).ok()
}

/// `1 − Tr ρ²` averaged over every `D`-subset of the generic modes, by brute force.
pub fn oracle_mean_purity_generic(state: &SlotState, d: usize, caps: &Caps) -> Result<f64> {
    let l = state.lattice_len();
    let modes = generic_modes(l);
    let mut total = 0.0;
    let mut count = 0usize;
    for mask in subsets(modes.len(), d) {
        let chosen: Vec<usize> = (0..modes.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| modes[i])
            .collect();
        let block = BlockSpec::momentum_modes(l, &chosen)?;
        total += reduce_with_ordering(state, &block, OrbitalOrdering::SlotMajor, caps)?.purity();
        count += 1;
    }
    Ok(total / count as f64)
}

pub fn run_suite(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    if opts.lmax > VERIFY_MAX_LENGTH {
        return Err(Error::LengthCapExceeded {
            length: opts.lmax,
            cap: VERIFY_MAX_LENGTH,
        });
    }
    let tol = |t: f64| opts.tolerance.unwrap_or(t);
    let caps = &opts.caps;
    let mut rows = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    for l in 2..=opts.lmax {
        let mut spec_k = Acc::new("spectrum_momentum", l);
        let mut spec_x = Acc::new("spectrum_direct", l);
        let mut coherence = Acc::new("pair_negativity_equals_coherence", l);
        let mut disjoint = Acc::new("negativity_disjoint_pairs_finite_size", l);
        let mut nonpartner = Acc::new("negativity_nonpartner_modes_zero", l);
        let mut mi = Acc::new("mutual_information_nonpartner_finite", l);
        let mut similar = Acc::new("self_similarity", l);
        let mut qk = Acc::new("q_kspace_generic_oracle", l);
        let mut qx = Acc::new("q_direct_oracle", l);

        for n in 0..=l {
            let params = EtaParams::new(l, n)?;
            let state = build_eta_state_capped(params, caps)?;

            for d1 in 0..=3usize {
                for d2 in (0..=6usize).step_by(2) {
                    if d1 + d2 == 0 || d1 + d2 > opts.dmax {
                        continue;
                    }
                    let Some(block) = representative_block(l, d1, d2) else {
                        continue;
                    };
                    let rho =
                        reduce_with_ordering(&state, &block, OrbitalOrdering::SlotMajor, caps)?;
                    let closed = block_spectrum_finite(params, &block)?;
                    spec_k.add(max_abs_diff(
                        &rho.sorted_eigenvalues(),
                        &closed.sorted_eigenvalues(),
                    ));
                }
            }
            for d in 1..=opts.dmax.min(l) {
                let sites: Vec<usize> = (0..d).collect();
                let block = BlockSpec::direct(l, &sites)?;
                let rho = reduce_with_ordering(&state, &block, OrbitalOrdering::SlotMajor, caps)?;
                let closed = block_spectrum_finite(params, &block)?;
                spec_x.add(max_abs_diff(
                    &rho.sorted_eigenvalues(),
                    &closed.sorted_eigenvalues(),
                ));
            }

            if l >= 3 {
                let pair = BlockSpec::momentum(l, &[], &[1])?;
                let neg = reduce_with_ordering(&state, &pair, OrbitalOrdering::SlotMajor, caps)?
                    .negativity(&[0])?;
                let c = if n == 0 {
                    0.0
                } else {
                    hypergeometric_weight(l, n, 2, 1)?
                };
                let corr = state.odlro_correlator(0, 1)?;
                coherence.add((neg - c).abs().max((corr - c).abs()));
            }
            if l >= 5 {
                let a = BlockSpec::momentum(l, &[], &[1])?;
                let b = BlockSpec::momentum(l, &[], &[2])?;
                disjoint.add(
                    (two_block_negativity(&state, &a, &b)? - two_pair_negativity_finite(params)?)
                        .abs(),
                );
                let ka = BlockSpec::momentum_modes(l, &[1])?;
                let kb = BlockSpec::momentum_modes(l, &[2])?;
                nonpartner.add(two_block_negativity(&state, &ka, &kb)?);
                let closed = 2.0 * momentum_spectrum_finite(params, 1, 0)?.entropy()?
                    - momentum_spectrum_finite(params, 2, 0)?.entropy()?;
                mi.add((mutual_information(&state, &ka, &kb)? - closed).abs());
            }
            if l <= 10 {
                for picture in [Picture::Direct, Picture::Momentum] {
                    similar.add(sampled_deviation(&state, picture, &mut rng)?);
                }
            }
            if l <= 8 {
                let modes = generic_modes(l).len();
                for d in [2usize, 4] {
                    if d > modes || d > opts.dmax {
                        continue;
                    }
                    let oracle = oracle_mean_purity_generic(&state, d, caps)?;
                    let closed = q_kspace_over_modes(params, d, modes)?.mean_purity;
                    qk.add((oracle - closed).abs());
                }
                for d in 1..=opts.dmax.min(l).min(4) {
                    let sites: Vec<usize> = (0..d).collect();
                    let block = BlockSpec::direct(l, &sites)?;
                    let oracle =
                        reduce_with_ordering(&state, &block, OrbitalOrdering::SlotMajor, caps)?
                            .purity();
                    qx.add((oracle - q_direct(params, d)?.mean_purity).abs());
                }
            }
        }
        spec_k.finish(tol(1e-12), &mut rows);
        spec_x.finish(tol(1e-12), &mut rows);
        coherence.finish(tol(1e-12), &mut rows);
        disjoint.finish(tol(1e-12), &mut rows);
        nonpartner.finish(tol(1e-12), &mut rows);
        mi.finish(tol(1e-10), &mut rows);
        similar.finish(tol(1e-12), &mut rows);
        qk.finish(tol(1e-10), &mut rows);
        qx.finish(tol(1e-10), &mut rows);
    }
    Ok(rows)
}

/// Measures random indices until the state factorizes; returns the largest deviation
/// of any post-measurement state from the canonical eta state.
fn sampled_deviation(state: &SlotState, picture: Picture, rng: &mut ChaCha8Rng) -> Result<f64> {
    let l = state.lattice_len();
    let mut state = state.clone();
    let mut worst = 0.0f64;
    loop {
        if state.params().is_product() {
            return Ok(worst);
        }
        let live: Vec<usize> = match picture {
            Picture::Direct => state.slots().to_vec(),
            Picture::Momentum => generic_modes(l)
                .into_iter()
                .filter(|&m| {
                    state.slots().binary_search(&m).is_ok()
                        && state.slots().binary_search(&((l - m) % l)).is_ok()
                })
                .collect(),
        };
        if live.is_empty() {
            return Ok(worst);
        }
        let index = live[rng.gen_range(0..live.len())];
        let m = measure_with_rng(&state, picture, index, rng)?;
        worst = worst.max(m.post_state.deviation_from_canonical());
        state = m.post_state;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(lmax: usize) -> VerifyOptions {
        VerifyOptions {
            lmax,
            dmax: 4,
            seed: 1,
            tolerance: None,
            caps: Caps::default(),
        }
    }

    #[test]
    fn representative_blocks_have_requested_class() {
        let b = representative_block(12, 2, 4).unwrap();
        assert_eq!((b.d1(), b.d2()), (2, 4));
        assert!(representative_block(6, 2, 2).is_none());
    }

    #[test]
    fn small_suite_passes() {
        let rows = run_suite(&opts(6)).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.pass), "{rows:#?}");
    }

    #[test]
    fn negative_tolerance_fails() {
        let mut o = opts(4);
        o.tolerance = Some(-1.0);
        assert!(run_suite(&o).unwrap().iter().any(|r| !r.pass));
    }

    #[test]
    fn length_cap() {
        assert!(run_suite(&opts(13)).unwrap_err().is_cap());
    }
}
