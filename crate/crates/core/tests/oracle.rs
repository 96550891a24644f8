//! Brute-force oracle against closed forms, beyond the acceptance sweep.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use etapair::measures::{negativity_odlro_identity, odlro_finite, two_pair_negativity_finite};
use etapair::numerics::log_choose;
use etapair::qmeasure::{direct_block_purity, q_direct, q_kspace_over_modes};
use etapair::slotstate::{
    build_eta_state, mutual_information, reduce, reduce_with_ordering, two_block_negativity, Caps,
    OrbitalOrdering,
};
use etapair::spectra::{
    block_spectrum_finite, block_spectrum_finite_factorized, generic_modes,
    momentum_spectrum_finite,
};
use etapair::{BlockSpec, EtaParams, Picture};

fn p(l: usize, n: usize) -> EtaParams {
    EtaParams::new(l, n).unwrap()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn log_choose_matches_big_integers() {
    for n in [0u64, 1, 5, 60, 67, 200, 1000, 5000] {
        let mut c = BigUint::one();
        for k in 0..=n {
            let exact = c.to_f64().unwrap().ln();
            let got = log_choose(n, k as i64);
            let tol = 1e-12 * exact.abs().max(1.0);
            if exact.is_finite() {
                assert!((got - exact).abs() <= tol, "C({n},{k}): {got} vs {exact}");
            }
            c = c * (n - k) / (k + 1);
        }
        assert_eq!(log_choose(n, -1), f64::NEG_INFINITY);
        assert_eq!(log_choose(n, n as i64 + 1), f64::NEG_INFINITY);
    }
}

#[test]
fn orderings_agree_and_slot_major_is_nonnegative() {
    let caps = Caps::default();
    for (l, n) in [(6, 2), (7, 3), (8, 4)] {
        let state = build_eta_state(p(l, n)).unwrap();
        for text in ["u:1", "p:1", "u:1,2;p:3", "u:2;p:1", "u:1,5"] {
            let Ok(block) = BlockSpec::parse(l, Picture::Momentum, text) else {
                continue;
            };
            let slot =
                reduce_with_ordering(&state, &block, OrbitalOrdering::SlotMajor, &caps).unwrap();
            let mode =
                reduce_with_ordering(&state, &block, OrbitalOrdering::ModeMajor, &caps).unwrap();
            assert!(max_abs_diff(&slot.sorted_eigenvalues(), &mode.sorted_eigenvalues()) < 1e-12);
            assert!(slot.matrix().min_entry() >= 0.0, "{text} at L={l}");
        }
    }
}

#[test]
fn factorized_spectrum_is_only_asymptotic() {
    // at L = 8 the joint spectrum of one unpaired mode and one pair differs from the
    // product of the two marginal spectra
    let params = p(8, 4);
    let exact = momentum_spectrum_finite(params, 1, 2).unwrap();
    let product = block_spectrum_finite_factorized(params, 1, 2).unwrap();
    let state = build_eta_state(params).unwrap();
    let oracle = reduce(&state, &BlockSpec::momentum(8, &[1], &[2]).unwrap()).unwrap();
    assert!(exact.max_sorted_deviation(&oracle.spectrum()) < 1e-12);
    let dev = product.max_sorted_deviation(&oracle.spectrum());
    assert!(dev > 1e-3, "factorized deviation {dev}");
}

#[test]
fn direct_blocks_match_oracle() {
    for l in 1..=10 {
        for n in 0..=l {
            let state = build_eta_state(p(l, n)).unwrap();
            for d in 1..=l.min(5) {
                let sites: Vec<usize> = (l - d..l).collect();
                let block = BlockSpec::direct(l, &sites).unwrap();
                let rho = reduce(&state, &block).unwrap();
                let closed = block_spectrum_finite(p(l, n), &block).unwrap();
                assert!(
                    max_abs_diff(&rho.sorted_eigenvalues(), &closed.sorted_eigenvalues()) < 1e-12
                );
                assert!((rho.purity() - direct_block_purity(p(l, n), d).unwrap()).abs() < 1e-12);
                assert!((rho.purity() - q_direct(p(l, n), d).unwrap().mean_purity).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn q_kspace_matches_subset_average() {
    let caps = Caps::default();
    for l in [5, 6, 7, 8] {
        let modes = generic_modes(l);
        for n in 0..=l {
            let state = build_eta_state(p(l, n)).unwrap();
            for d in [2, 4] {
                let mut total = 0.0;
                let mut count = 0;
                for mask in 0u32..(1 << modes.len()) {
                    if mask.count_ones() as usize != d {
                        continue;
                    }
                    let chosen: Vec<usize> = (0..modes.len())
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| modes[i])
                        .collect();
                    let block = BlockSpec::momentum_modes(l, &chosen).unwrap();
                    total +=
                        reduce_with_ordering(&state, &block, OrbitalOrdering::SlotMajor, &caps)
                            .unwrap()
                            .purity();
                    count += 1;
                }
                let closed = q_kspace_over_modes(p(l, n), d, modes.len())
                    .unwrap()
                    .mean_purity;
                assert!(
                    (total / count as f64 - closed).abs() < 1e-10,
                    "L={l} N={n} D={d}"
                );
            }
        }
    }
}

#[test]
fn pair_correlator_and_negativity_identity() {
    for (l, n) in [(4, 2), (7, 3), (12, 6), (12, 1)] {
        let state = build_eta_state(p(l, n)).unwrap();
        let expected = odlro_finite(p(l, n));
        for (a, b) in [(0, 1), (1, l - 1), (2, 3)] {
            assert!((state.odlro_correlator(a, b).unwrap() - expected).abs() < 1e-15);
        }
        assert!(state.odlro_correlator(0, 0).is_err());
        let id = negativity_odlro_identity(p(l, n));
        assert!((id.residual - expected / l as f64).abs() < 1e-15);
    }
    let id = negativity_odlro_identity(p(4, 2));
    assert!((id.pair_coherence - 1.0 / 3.0).abs() < 1e-15);
    assert!((id.lattice_average - 0.25).abs() < 1e-15);
}

#[test]
fn mutual_information_between_modes() {
    for (l, n) in [(6, 3), (9, 4), (10, 2)] {
        let state = build_eta_state(p(l, n)).unwrap();
        let k = |m: &[usize]| BlockSpec::momentum_modes(l, m).unwrap();
        let single = momentum_spectrum_finite(p(l, n), 1, 0)
            .unwrap()
            .entropy()
            .unwrap();
        let two = momentum_spectrum_finite(p(l, n), 2, 0)
            .unwrap()
            .entropy()
            .unwrap();
        // finite L: the residual correlation of two unpaired modes follows the closed forms
        let mi = mutual_information(&state, &k(&[1]), &k(&[2])).unwrap();
        assert!((mi - (2.0 * single - two)).abs() < 1e-10);
        assert!(
            two_block_negativity(&state, &k(&[1]), &k(&[2]))
                .unwrap()
                .abs()
                < 1e-12
        );
        // partners are the only two-mode quantum correlations
        assert!(two_block_negativity(&state, &k(&[1]), &k(&[l - 1])).unwrap() > 0.0 || n == 0);
    }
}

#[test]
fn two_pair_negativity_matches_oracle() {
    for l in 5..=11 {
        for n in 0..=l {
            let state = build_eta_state(p(l, n)).unwrap();
            let a = BlockSpec::momentum(l, &[], &[1]).unwrap();
            let b = BlockSpec::momentum(l, &[], &[2]).unwrap();
            let oracle = two_block_negativity(&state, &a, &b).unwrap();
            let closed = two_pair_negativity_finite(p(l, n)).unwrap();
            assert!(
                (oracle - closed).abs() < 1e-12,
                "L={l} N={n}: {oracle} vs {closed}"
            );
        }
    }
}
