//! BCS pairing correlations on a one-dimensional ring of `L` momenta `k_j = 2πj/L`.
//!
//! The state is `∏_k (u_k + v_k c†_{k↑} c†_{−k↓})|vac⟩` with real, nonnegative coherence
//! factors. Equal-time correlators:
//!
//! - anomalous `f(Δx) = (1/L) Σ_k u_k v_k e^{ikΔx}`, so `⟨c_{x₁↑} c_{x₂↓}⟩ = −f(x₁ − x₂)`;
//! - normal `g_σ(Δx) = (1/L) Σ_k ⟨n_{kσ}⟩ e^{ikΔx}` with `⟨n_{k↑}⟩ = v_k²`,
//!   `⟨n_{k↓}⟩ = v_{−k}²`.
//!
//! Each `(k↑, −k↓)` pair is the two-mode state `u|00⟩ + v|11⟩`. Its concurrence is
//! `2uv`; its negativity is `uv` by the definition `(‖ρ^{T_A}‖₁ − 1)/2` and `2uv` in the
//! `‖ρ^{T_A}‖₁ − 1` convention, which is the one under which `f` is half the Fourier
//! series of pair negativities.

use std::f64::consts::TAU;
use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::NeumaierSum;
use crate::slotstate::{DensityMatrix, HermitianMatrix};

/// Tolerance on `u_k² + v_k² = 1`.
pub const PROFILE_TOLERANCE: f64 = 1e-12;

/// Coherence factors `u_k, v_k` on the ring.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BcsProfile {
    u: Vec<f64>,
    v: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ProfileRow {
    k_index: usize,
    u: f64,
    v: f64,
}

impl BcsProfile {
    /// Validates `u_k, v_k ≥ 0` and `u_k² + v_k² = 1` for every `k`.
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::InvalidParameters(format!(
                "{} values of u but {} of v",
                u.len(),
                v.len()
            )));
        }
        if u.len() < 2 {
            return Err(Error::InvalidParameters(
                "the ring needs L ≥ 2 momenta".into(),
            ));
        }
        for (k, (&uk, &vk)) in u.iter().zip(&v).enumerate() {
            if !(uk >= 0.0 && vk >= 0.0) {
                return Err(Error::InvalidProfile {
                    k,
                    reason: format!(
                        "coherence factors must be nonnegative, got u = {uk}, v = {vk}"
                    ),
                });
            }
            let norm = uk * uk + vk * vk;
            if (norm - 1.0).abs() > PROFILE_TOLERANCE {
                return Err(Error::InvalidProfile {
                    k,
                    reason: format!("u² + v² = {norm}"),
                });
            }
        }
        Ok(BcsProfile { u, v })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn momentum(&self, k_index: usize) -> f64 {
        TAU * k_index as f64 / self.len() as f64
    }

    /// Reads `k_index,u,v` rows; every index `0..L` must appear once.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rows: Vec<ProfileRow> = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader)
            .deserialize()
            .collect::<std::result::Result<_, _>>()?;
        rows.sort_by_key(|r| r.k_index);
        for (i, r) in rows.iter().enumerate() {
            if r.k_index != i {
                return Err(Error::InvalidProfile {
                    k: i,
                    reason: "missing or duplicated k_index".into(),
                });
            }
        }
        Self::new(
            rows.iter().map(|r| r.u).collect(),
            rows.iter().map(|r| r.v).collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for (k_index, (&u, &v)) in self.u.iter().zip(&self.v).enumerate() {
            w.serialize(ProfileRow { k_index, u, v })?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Mean-field profile of the tight-binding ring: `ξ_k = −2t cos k − μ`,
/// `E_k = √(ξ_k² + Δ²)`, `v_k² = (1 − ξ_k/E_k)/2`. A level with `ξ_k = Δ = 0` gets
/// `v_k² = ½`.
pub fn bcs_profile(length: usize, hopping: f64, mu: f64, gap: f64) -> Result<BcsProfile> {
    if length < 2 {
        return Err(Error::InvalidParameters(
            "the ring needs L ≥ 2 momenta".into(),
        ));
    }
    if gap.is_nan() || gap < 0.0 {
        return Err(Error::InvalidParameters(format!(
            "gap Δ = {gap} must be nonnegative"
        )));
    }
    let (mut u, mut v) = (Vec::with_capacity(length), Vec::with_capacity(length));
    for j in 0..length {
        let k = TAU * j as f64 / length as f64;
        let xi = -2.0 * hopping * k.cos() - mu;
        let e = xi.hypot(gap);
        let ratio = if e == 0.0 { 0.0 } else { xi / e };
        u.push(((1.0 + ratio) / 2.0).sqrt());
        v.push(((1.0 - ratio) / 2.0).sqrt());
    }
    BcsProfile::new(u, v)
}

/// Entanglement of one `(k↑, −k↓)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairEntanglement {
    pub k_index: usize,
    pub k: f64,
    /// `2 u_k v_k`.
    pub concurrence: f64,
    /// `‖ρ^{T_A}‖₁ − 1 = 2 u_k v_k`.
    pub negativity_norm: f64,
    /// `(‖ρ^{T_A}‖₁ − 1)/2 = u_k v_k`.
    pub negativity_raw: f64,
}

pub fn pair_entanglement(profile: &BcsProfile) -> Vec<PairEntanglement> {
    (0..profile.len())
        .map(|j| {
            let uv = profile.u[j] * profile.v[j];
            PairEntanglement {
                k_index: j,
                k: profile.momentum(j),
                concurrence: 2.0 * uv,
                negativity_norm: 2.0 * uv,
                negativity_raw: uv,
            }
        })
        .collect()
}

/// Definitional negativity of `u|00⟩ + v|11⟩` from an explicit partial transpose.
pub fn pair_negativity_numeric(u: f64, v: f64) -> Result<f64> {
    let rho = HermitianMatrix::from_triples(
        2,
        2,
        [(0, 0, u * u), (0, 3, u * v), (3, 0, u * v), (3, 3, v * v)],
    )?;
    DensityMatrix::new(rho)?.negativity(&[0])
}

fn fourier(profile: &BcsProfile, weights: impl Fn(usize) -> f64, dx: i64) -> Complex64 {
    let l = profile.len();
    let shift = dx.rem_euclid(l as i64) as usize;
    let (mut re, mut im) = (NeumaierSum::new(), NeumaierSum::new());
    for j in 0..l {
        let w = weights(j);
        // phase index j·Δx mod L keeps the argument small
        let phase = TAU * ((j * shift) % l) as f64 / l as f64;
        re.add(w * phase.cos());
        im.add(w * phase.sin());
    }
    Complex64::new(re.total(), im.total()) / l as f64
}

/// `f(Δx) = (1/L) Σ_k u_k v_k e^{ikΔx}`.
pub fn anomalous_f(profile: &BcsProfile, dx: i64) -> Complex64 {
    fourier(profile, |j| profile.u[j] * profile.v[j], dx)
}

/// `f(Δx)` as `(1/2L) Σ_k N_k e^{ikΔx}` with `N_k` twice the numerically computed
/// definitional negativity of pair `k`.
pub fn anomalous_f_from_negativity(profile: &BcsProfile, dx: i64) -> Result<Complex64> {
    let negativities = norm_negativities(profile)?;
    Ok(fourier(profile, |j| negativities[j], dx) / 2.0)
}

fn norm_negativities(profile: &BcsProfile) -> Result<Vec<f64>> {
    (0..profile.len())
        .map(|j| pair_negativity_numeric(profile.u[j], profile.v[j]).map(|n| 2.0 * n))
        .collect()
}

/// `g(Δx) = (1/L) Σ_k v_k² e^{ikΔx}`, the spin-up normal correlator.
pub fn normal_g(profile: &BcsProfile, dx: i64) -> Complex64 {
    fourier(profile, |j| profile.v[j] * profile.v[j], dx)
}

fn normal_g_spin(profile: &BcsProfile, spin: Spin, dx: i64) -> Complex64 {
    match spin {
        Spin::Up => normal_g(profile, dx),
        Spin::Down => {
            let l = profile.len();
            fourier(profile, |j| profile.v[(l - j) % l].powi(2), dx)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];
}

/// A real-space spin-orbital `(x, σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbital {
    pub x: usize,
    pub spin: Spin,
}

impl Orbital {
    pub fn new(x: usize, spin: Spin) -> Self {
        Orbital { x, spin }
    }
}

/// Correlators on every separation `Δx = 0..L`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelatorGrid {
    pub f: Vec<Complex64>,
    pub f_from_negativity: Vec<Complex64>,
    pub g: Vec<Complex64>,
}

impl CorrelatorGrid {
    pub fn new(profile: &BcsProfile) -> Result<Self> {
        let negativities = norm_negativities(profile)?;
        let l = profile.len() as i64;
        Ok(CorrelatorGrid {
            f: (0..l).map(|d| anomalous_f(profile, d)).collect(),
            f_from_negativity: (0..l)
                .map(|d| fourier(profile, |j| negativities[j], d) / 2.0)
                .collect(),
            g: (0..l).map(|d| normal_g(profile, d)).collect(),
        })
    }

    /// `max_Δx |f − f_from_negativity|`.
    pub fn route_residual(&self) -> f64 {
        self.f
            .iter()
            .zip(&self.f_from_negativity)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `|Σ_Δx |f(Δx)|² − (1/L) Σ_k (u_k v_k)²|`.
pub fn parseval_residual(profile: &BcsProfile) -> f64 {
    let l = profile.len();
    let lhs: NeumaierSum = (0..l as i64)
        .map(|d| anomalous_f(profile, d).norm_sqr())
        .collect();
    let rhs: NeumaierSum = (0..l)
        .map(|j| (profile.u[j] * profile.v[j]).powi(2))
        .collect();
    (lhs.total() - rhs.total() / l as f64).abs()
}

/// `⟨c†_{x's'} c_{xσ}⟩`.
fn normal(profile: &BcsProfile, a: Orbital, b: Orbital) -> Complex64 {
    if a.spin != b.spin {
        return Complex64::new(0.0, 0.0);
    }
    normal_g_spin(profile, a.spin, a.x as i64 - b.x as i64)
}

/// `⟨c_a c_b⟩`.
pub fn pair_amplitude(profile: &BcsProfile, a: Orbital, b: Orbital) -> Complex64 {
    match (a.spin, b.spin) {
        (Spin::Up, Spin::Down) => -anomalous_f(profile, a.x as i64 - b.x as i64),
        (Spin::Down, Spin::Up) => anomalous_f(profile, b.x as i64 - a.x as i64),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// Equal-time two-particle density matrix
/// `ρ⁽²⁾(1, 2; 1′, 2′) = ½ ⟨c†_{1′} c†_{2′} c_2 c_1⟩`, assembled by Wick's theorem from
/// the normal and anomalous correlators.
pub fn two_particle_correlator(
    profile: &BcsProfile,
    o1: Orbital,
    o2: Orbital,
    o1p: Orbital,
    o2p: Orbital,
) -> Complex64 {
    let direct = normal(profile, o1, o1p) * normal(profile, o2, o2p);
    let exchange = normal(profile, o1, o2p) * normal(profile, o2, o1p);
    let pairing = pair_amplitude(profile, o1, o2) * pair_amplitude(profile, o1p, o2p).conj();
    0.5 * (direct - exchange + pairing)
}

/// The long-distance limit `½ ⟨c_1 c_2⟩ ⟨c_{1′} c_{2′}⟩*`, i.e. `½ I I f f*` with the
/// singlet factor `I = ±1` for `↑↓` / `↓↑`.
pub fn odlro_limit(
    profile: &BcsProfile,
    o1: Orbital,
    o2: Orbital,
    o1p: Orbital,
    o2p: Orbital,
) -> Complex64 {
    0.5 * pair_amplitude(profile, o1, o2) * pair_amplitude(profile, o1p, o2p).conj()
}

/// Largest `|ρ⁽²⁾ − ½ I I f f*|` between a pair at `(0, δ)` and a pair at
/// `(r, r + δ′)` with `δ, δ′ ∈ {0, 1}`, all spin assignments, and `r` one of the two
/// largest ring separations `⌊L/2⌋ − 1`, `⌊L/2⌋`.
///
/// Using both separations and offsets matters at half filling, where `g` vanishes at
/// every even distance and `f` at every odd one.
pub fn factorization_residual(profile: &BcsProfile) -> f64 {
    let l = profile.len();
    let half = l / 2;
    let mut worst = 0.0f64;
    for r in [half.saturating_sub(1), half] {
        for d in [0, 1] {
            for dp in [0, 1] {
                for s in spin_quads() {
                    let o1 = Orbital::new(0, s[0]);
                    let o2 = Orbital::new(d % l, s[1]);
                    let o1p = Orbital::new(r % l, s[2]);
                    let o2p = Orbital::new((r + dp) % l, s[3]);
                    let diff = two_particle_correlator(profile, o1, o2, o1p, o2p)
                        - odlro_limit(profile, o1, o2, o1p, o2p);
                    worst = worst.max(diff.norm());
                }
            }
        }
    }
    worst
}

fn spin_quads() -> impl Iterator<Item = [Spin; 4]> {
    (0..16u8).map(|m| {
        let s = |b: u8| {
            if m >> b & 1 == 0 {
                Spin::Up
            } else {
                Spin::Down
            }
        };
        [s(0), s(1), s(2), s(3)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> BcsProfile {
        bcs_profile(64, 1.0, 0.0, 0.5).unwrap()
    }

    #[test]
    fn profile_spot_values() {
        let p = reference();
        for j in [0, 5, 16, 40] {
            let k = TAU * j as f64 / 64.0;
            let xi = -2.0 * k.cos();
            let e = (xi * xi + 0.25f64).sqrt();
            assert!((p.v()[j].powi(2) - (1.0 - xi / e) / 2.0).abs() < 1e-14);
            assert!((p.u()[j].powi(2) + p.v()[j].powi(2) - 1.0).abs() < 1e-15);
        }
        let e = pair_entanglement(&p);
        assert!((e[16].concurrence - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normal_state_has_no_pairing() {
        let p = bcs_profile(30, 1.0, 0.3, 0.0).unwrap();
        assert!(pair_entanglement(&p)
            .iter()
            .all(|e| e.concurrence.abs() < 1e-12));
        assert!((0..30).all(|d| anomalous_f(&p, d).norm() < 1e-12));
    }

    #[test]
    fn large_gap_pairs_everything_equally() {
        let p = bcs_profile(16, 1.0, 0.3, 1e9).unwrap();
        assert!(p
            .u()
            .iter()
            .zip(p.v())
            .all(|(u, v)| (u * v - 0.5).abs() < 1e-12));
        assert!((anomalous_f(&p, 0).re - 0.5).abs() < 1e-12);
        assert!((1..16).all(|d| anomalous_f(&p, d).norm() < 1e-9));
    }

    #[test]
    fn pair_negativity_conventions() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((pair_negativity_numeric(s, s).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(pair_negativity_numeric(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn invalid_profiles_name_the_momentum() {
        let err = BcsProfile::new(vec![1.0, 0.8, 1.0], vec![0.0, 0.63, 0.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidProfile { k: 1, .. }));
        assert!(BcsProfile::new(vec![1.0, -1.0], vec![0.0, 0.0]).is_err());
        assert!(bcs_profile(1, 1.0, 0.0, 0.5).is_err());
        assert!(bcs_profile(8, 1.0, 0.0, -0.5).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let p = reference();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        assert!(buf.starts_with(b"k_index,u,v\n"));
        assert_eq!(BcsProfile::read_csv(buf.as_slice()).unwrap(), p);
        let bad = "k_index,u,v\n0,1,0\n1,0.8,0.62\n";
        assert!(matches!(
            BcsProfile::read_csv(bad.as_bytes()),
            Err(Error::InvalidProfile { k: 1, .. })
        ));
        let gap = "k_index,u,v\n0,1,0\n2,1,0\n";
        assert!(BcsProfile::read_csv(gap.as_bytes()).is_err());
    }

    #[test]
    fn exchange_antisymmetry() {
        let p = bcs_profile(12, 1.0, 0.4, 0.7).unwrap();
        let (a, b) = (Orbital::new(1, Spin::Up), Orbital::new(4, Spin::Down));
        let (c, d) = (Orbital::new(7, Spin::Up), Orbital::new(9, Spin::Down));
        let x = two_particle_correlator(&p, a, b, c, d);
        let y = two_particle_correlator(&p, b, a, c, d);
        assert!((x + y).norm() < 1e-15);
        assert!(x.norm() > 1e-6);
    }

    #[test]
    fn routes_and_parseval() {
        let grid = CorrelatorGrid::new(&reference()).unwrap();
        assert!(grid.route_residual() < 1e-12);
        assert!(parseval_residual(&reference()) < 1e-10);
    }
}
