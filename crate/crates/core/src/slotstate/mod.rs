//! Brute-force eta-pairing state over pair slots.
//!
//! `|Ψ(L, N_d)⟩` is stored as one amplitude per `N_d`-subset of the `L` pair slots,
//! indexed by the colex rank of the subset. Slot `l` is site `l` in the direct picture
//! and the orbital pair `((−k_l, ↑), (k_l, ↓))` in the momentum picture, so mode `k_m`
//! takes its `↓` content from slot `m` and its `↑` content from slot `L − m (mod L)`.
//!
//! This module is the independent oracle for every closed form in [`crate::spectra`],
//! [`crate::measures`] and [`crate::qmeasure`].

mod matrix;
mod measure;
mod reduce;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use matrix::{negativity, partial_transpose, DensityMatrix, HermitianMatrix, TRACE_TOLERANCE};
pub use measure::{
    measure, measure_with_rng, outcome_probabilities, project, LocalOutcome, MeasurementOutcome,
};
pub use reduce::{
    mutual_information, reduce, reduce_with_ordering, two_block_negativity, OrbitalOrdering,
};

/// Which degrees of freedom a slot decodes into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    /// Slot `l` is lattice site `l`, local basis `{empty, ↑↓}`.
    Direct,
    /// Slot `j` is the orbital pair `((−k_j, ↑), (k_j, ↓))`, local mode basis `{0, ↑, ↓, ↑↓}`.
    Momentum,
}

impl Picture {
    pub fn local_dim(self) -> usize {
        match self {
            Picture::Direct => 2,
            Picture::Momentum => 4,
        }
    }
}

impl std::fmt::Display for Picture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Picture::Direct => "direct",
            Picture::Momentum => "momentum",
        })
    }
}

impl std::str::FromStr for Picture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Picture::Direct),
            "momentum" | "kspace" | "k" => Ok(Picture::Momentum),
            other => Err(Error::InvalidParameters(format!(
                "unknown picture `{other}`"
            ))),
        }
    }
}

/// Lattice length `L` and pair number `N_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EtaParams {
    length: usize,
    pairs: usize,
}

impl EtaParams {
    pub fn new(length: usize, pairs: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidParameters("L must be positive".into()));
        }
        if pairs > length {
            return Err(Error::InvalidParameters(format!(
                "N_d = {pairs} exceeds L = {length}"
            )));
        }
        Ok(EtaParams { length, pairs })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    /// `n_d = N_d / L`.
    pub fn pair_density(&self) -> f64 {
        self.pairs as f64 / self.length as f64
    }

    /// True for `N_d ∈ {0, L}`, where the state is a product state.
    pub fn is_product(&self) -> bool {
        self.pairs == 0 || self.pairs == self.length
    }
}

/// Enumeration limits for the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum number of slot configurations `C(L, N_d)`.
    pub max_states: u128,
    /// Maximum reduced Hilbert-space dimension `d^D`.
    pub max_dimension: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_states: 10_000_000,
            max_dimension: 65_536,
        }
    }
}

/// Pascal table; `C(64, 32)` still fits in a `u64`.
fn pascal() -> &'static [[u64; 65]; 65] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[[u64; 65]; 65]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[0u64; 65]; 65];
        for n in 0..65 {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            }
        }
        t
    })
}

pub(crate) fn small_choose(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        pascal()[n][k]
    }
}

/// Colex rank of a subset bitmask.
pub(crate) fn colex_rank(mut mask: u64) -> usize {
    let mut rank = 0u64;
    let mut i = 1;
    while mask != 0 {
        let p = mask.trailing_zeros() as usize;
        rank += small_choose(p, i);
        i += 1;
        mask &= mask - 1;
    }
    rank as usize
}

/// All `k`-subsets of `0..n` as bitmasks, in colex (= increasing integer) order.
pub(crate) fn subsets(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let count = small_choose(n, k);
    let first = if k == 0 {
        0
    } else if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    };
    let mut current = first;
    (0..count).map(move |i| {
        if i > 0 {
            // Gosper's hack
            let c = current & current.wrapping_neg();
            let r = current + c;
            current = (((r ^ current) >> 2) / c) | r;
        }
        current
    })
}

/// Amplitudes of an eta-family state over the live pair slots.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotState {
    lattice_len: usize,
    slots: Vec<usize>,
    pairs: usize,
    amplitudes: Vec<f64>,
}

/// Builds `|Ψ(L, N_d)⟩` with the default [`Caps`].
pub fn build_eta_state(params: EtaParams) -> Result<SlotState> {
    build_eta_state_capped(params, &Caps::default())
}

/// Builds `|Ψ(L, N_d)⟩`, every amplitude equal to `1/√C(L, N_d)`.
pub fn build_eta_state_capped(params: EtaParams, caps: &Caps) -> Result<SlotState> {
    let l = params.length();
    if l > 64 {
        return Err(Error::StateCapExceeded {
            required: crate::numerics::log_choose(l as u64, params.pairs() as i64)
                .exp()
                .round() as u128,
            cap: caps.max_states,
        });
    }
    let count = small_choose(l, params.pairs()) as u128;
    if count > caps.max_states {
        return Err(Error::StateCapExceeded {
            required: count,
            cap: caps.max_states,
        });
    }
    let amp = 1.0 / (count as f64).sqrt();
    Ok(SlotState {
        lattice_len: l,
        slots: (0..l).collect(),
        pairs: params.pairs(),
        amplitudes: vec![amp; count as usize],
    })
}

impl SlotState {
    pub(crate) fn from_parts(
        lattice_len: usize,
        slots: Vec<usize>,
        pairs: usize,
        amplitudes: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(amplitudes.len() as u64, small_choose(slots.len(), pairs));
        SlotState {
            lattice_len,
            slots,
            pairs,
            amplitudes,
        }
    }

    /// Parameters `(L', N'_d)` of the live slots.
    pub fn params(&self) -> EtaParams {
        EtaParams {
            length: self.slots.len(),
            pairs: self.pairs,
        }
    }

    /// Length of the original lattice; fixes the momentum decoding.
    pub fn lattice_len(&self) -> usize {
        self.lattice_len
    }

    /// Original labels of the live slots, ascending.
    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// `(bitmask over live-slot positions, amplitude)` in rank order.
    pub fn configurations(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        subsets(self.slots.len(), self.pairs).zip(self.amplitudes.iter().copied())
    }

    pub fn norm_sq(&self) -> f64 {
        crate::numerics::compensated_sum(self.amplitudes.iter().map(|a| a * a))
    }

    pub(crate) fn position_of(&self, slot: usize) -> Option<usize> {
        self.slots.binary_search(&slot).ok()
    }

    pub(crate) fn amplitude_of(&self, mask: u64) -> f64 {
        self.amplitudes[colex_rank(mask)]
    }

    /// Largest amplitude deviation from the canonical `|Ψ(L', N'_d)⟩` of the same
    /// parameters.
    pub fn deviation_from_canonical(&self) -> f64 {
        let canonical = 1.0 / (self.amplitudes.len() as f64).sqrt();
        self.amplitudes
            .iter()
            .map(|a| (a - canonical).abs())
            .fold(0.0, f64::max)
    }

    fn live_position(&self, slot: usize) -> Result<usize> {
        self.position_of(slot)
            .ok_or_else(|| Error::InvalidBlock(format!("slot {slot} is not part of the state")))
    }

    /// `⟨η†_l η_m⟩` for two distinct live sites.
    pub fn odlro_correlator(&self, l: usize, m: usize) -> Result<f64> {
        if l == m {
            return Err(Error::InvalidParameters(
                "l = m is the pair density; use pair_density".into(),
            ));
        }
        let pl = self.live_position(l)?;
        let pm = self.live_position(m)?;
        let (bl, bm) = (1u64 << pl, 1u64 << pm);
        let terms = self
            .configurations()
            .filter(|&(mask, _)| mask & bm != 0 && mask & bl == 0)
            .map(|(mask, amp)| amp * self.amplitude_of((mask & !bm) | bl));
        Ok(crate::numerics::compensated_sum(terms))
    }

    /// `⟨η†_l η_l⟩`, the double occupancy of site `l`.
    pub fn pair_density(&self, l: usize) -> Result<f64> {
        let bl = 1u64 << self.live_position(l)?;
        Ok(crate::numerics::compensated_sum(
            self.configurations()
                .filter(|&(mask, _)| mask & bl != 0)
                .map(|(_, a)| a * a),
        ))
    }
}

/// Free-function form of [`SlotState::odlro_correlator`].
pub fn odlro_correlator(state: &SlotState, l: usize, m: usize) -> Result<f64> {
    state.odlro_correlator(l, m)
}
