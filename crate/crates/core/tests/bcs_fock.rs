//! Fock-space brute force for the BCS correlators on tiny rings.
//!
//! The product state is built explicitly over the `2L` momentum spin-orbitals and the
//! real-space operators `c_{xσ} = L^{-1/2} Σ_k e^{ikx} c_{kσ}` are applied term by term,
//! so none of the Wick bookkeeping of the library is reused.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use etapair::bcs::{
    anomalous_f, pair_amplitude, two_particle_correlator, BcsProfile, Orbital, Spin,
};

type Ket = Vec<Complex64>;

fn orbital(j: usize, spin: Spin) -> usize {
    2 * j + if spin == Spin::Up { 0 } else { 1 }
}

fn sign_below(state: usize, p: usize) -> f64 {
    if (state & ((1 << p) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn create(ket: &Ket, p: usize) -> Ket {
    let mut out = vec![Complex64::new(0.0, 0.0); ket.len()];
    for (s, &a) in ket.iter().enumerate() {
        if a.norm() > 0.0 && s >> p & 1 == 0 {
            out[s | 1 << p] += a * sign_below(s, p);
        }
    }
    out
}

fn annihilate(ket: &Ket, p: usize) -> Ket {
    let mut out = vec![Complex64::new(0.0, 0.0); ket.len()];
    for (s, &a) in ket.iter().enumerate() {
        if a.norm() > 0.0 && s >> p & 1 == 1 {
            out[s & !(1 << p)] += a * sign_below(s, p);
        }
    }
    out
}

fn axpy(acc: &mut Ket, c: Complex64, x: &Ket) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += c * b;
    }
}

/// Applies `c_{xσ}` in the real-space basis.
fn real_space(ket: &Ket, l: usize, o: Orbital) -> Ket {
    let mut out = vec![Complex64::new(0.0, 0.0); ket.len()];
    for j in 0..l {
        let phase =
            Complex64::from_polar(1.0 / (l as f64).sqrt(), TAU * (j * o.x) as f64 / l as f64);
        let p = orbital(j, o.spin);
        axpy(&mut out, phase, &annihilate(ket, p));
    }
    out
}

fn inner(a: &Ket, b: &Ket) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `∏_k (u_k + v_k c†_{k↑} c†_{−k↓})|vac⟩`.
fn bcs_ket(profile: &BcsProfile) -> Ket {
    let l = profile.len();
    let mut ket = vec![Complex64::new(0.0, 0.0); 1 << (2 * l)];
    ket[0] = Complex64::new(1.0, 0.0);
    for j in 0..l {
        let pair = create(
            &create(&ket, orbital((l - j) % l, Spin::Down)),
            orbital(j, Spin::Up),
        );
        let mut next: Ket = ket.iter().map(|a| a * profile.u()[j]).collect();
        axpy(&mut next, Complex64::new(profile.v()[j], 0.0), &pair);
        ket = next;
    }
    ket
}

fn random_profile(l: usize, rng: &mut ChaCha8Rng) -> BcsProfile {
    let theta: Vec<f64> = (0..l)
        .map(|_| rng.gen_range(0.0..std::f64::consts::FRAC_PI_2))
        .collect();
    BcsProfile::new(
        theta.iter().map(|t| t.cos()).collect(),
        theta.iter().map(|t| t.sin()).collect(),
    )
    .unwrap()
}

fn all_orbitals(l: usize) -> Vec<Orbital> {
    (0..l)
        .flat_map(|x| [Orbital::new(x, Spin::Up), Orbital::new(x, Spin::Down)])
        .collect()
}

#[test]
fn anomalous_and_pair_amplitudes_match_fock_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for l in [2, 3, 4] {
        let profile = random_profile(l, &mut rng);
        let psi = bcs_ket(&profile);
        assert!((inner(&psi, &psi).re - 1.0).abs() < 1e-12);
        for a in all_orbitals(l) {
            for b in all_orbitals(l) {
                let brute = inner(&psi, &real_space(&real_space(&psi, l, b), l, a));
                let lib = pair_amplitude(&profile, a, b);
                assert!(
                    (brute - lib).norm() < 1e-12,
                    "L={l} {a:?} {b:?}: {brute} vs {lib}"
                );
            }
        }
        // ⟨c_{x↑} c_{0↓}⟩ = −f(x)
        for x in 0..l {
            let brute = inner(
                &psi,
                &real_space(
                    &real_space(&psi, l, Orbital::new(0, Spin::Down)),
                    l,
                    Orbital::new(x, Spin::Up),
                ),
            );
            assert!((brute + anomalous_f(&profile, x as i64)).norm() < 1e-12);
        }
    }
}

#[test]
fn two_particle_density_matrix_matches_fock_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for l in [3, 4] {
        let profile = random_profile(l, &mut rng);
        let psi = bcs_ket(&profile);
        let orbs = all_orbitals(l);
        let mut worst = 0.0f64;
        for &o1 in &orbs {
            let c1 = real_space(&psi, l, o1);
            for &o2 in &orbs {
                let c21 = real_space(&c1, l, o2);
                for &o1p in &orbs {
                    let c1p = real_space(&psi, l, o1p);
                    for &o2p in &orbs {
                        // ⟨c†_{1'} c†_{2'} c_2 c_1⟩ = ⟨c_{2'} c_{1'} ψ | c_2 c_1 ψ⟩
                        let bra = real_space(&c1p, l, o2p);
                        let brute = 0.5 * inner(&bra, &c21);
                        let lib = two_particle_correlator(&profile, o1, o2, o1p, o2p);
                        worst = worst.max((brute - lib).norm());
                    }
                }
            }
        }
        assert!(worst < 1e-12, "L={l}: worst {worst}");
    }
}
