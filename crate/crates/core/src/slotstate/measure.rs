//! Projective occupation measurements on a single site or momentum mode.
//!
//! Sampling contract: the outcome is drawn by comparing one `f64` uniform on `[0, 1)`
//! from `ChaCha8Rng::seed_from_u64(seed)` against the cumulative Born probabilities in
//! the fixed outcome order `0, ↑, ↓, ↑↓`. The same seed gives the same outcome on
//! every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{colex_rank, small_choose, Picture, SlotState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocalOutcome {
    Empty,
    Up,
    Down,
    Double,
}

impl LocalOutcome {
    pub const ALL: [LocalOutcome; 4] = [
        LocalOutcome::Empty,
        LocalOutcome::Up,
        LocalOutcome::Down,
        LocalOutcome::Double,
    ];

    /// Pairs removed from the state by this outcome. A doubly occupied site holds one
    /// pair; a doubly occupied mode draws on two pair slots.
    pub fn pairs_removed(self, picture: Picture) -> usize {
        match (self, picture) {
            (LocalOutcome::Empty, _) => 0,
            (LocalOutcome::Up | LocalOutcome::Down, _) => 1,
            (LocalOutcome::Double, Picture::Direct) => 1,
            (LocalOutcome::Double, Picture::Momentum) => 2,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            LocalOutcome::Empty => "0",
            LocalOutcome::Up => "↑",
            LocalOutcome::Down => "↓",
            LocalOutcome::Double => "↑↓",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub picture: Picture,
    pub index: usize,
    pub outcome: LocalOutcome,
    pub probability: f64,
    pub post_state: SlotState,
}

/// Live-slot positions probed by a measurement, with the outcome each occupation
/// pattern maps to.
struct Probe {
    positions: Vec<usize>,
}

impl Probe {
    fn new(state: &SlotState, picture: Picture, index: usize) -> Result<Self> {
        let l = state.lattice_len();
        if index >= l {
            return Err(Error::InvalidParameters(format!(
                "index {index} out of range for L = {l}"
            )));
        }
        let live = |slot: usize| {
            state.position_of(slot).ok_or_else(|| {
                Error::InvalidParameters(format!("index {index} was already measured"))
            })
        };
        let positions = match picture {
            Picture::Direct => vec![live(index)?],
            Picture::Momentum => {
                let partner = (l - index) % l;
                if partner == index {
                    return Err(Error::SelfConjugateMode(index));
                }
                // (↑ slot, ↓ slot)
                vec![live(partner)?, live(index)?]
            }
        };
        Ok(Probe { positions })
    }

    fn outcome(&self, mask: u64) -> LocalOutcome {
        let occ = |p: usize| mask >> p & 1 == 1;
        match self.positions.as_slice() {
            [p] => {
                if occ(*p) {
                    LocalOutcome::Double
                } else {
                    LocalOutcome::Empty
                }
            }
            [up, down] => match (occ(*up), occ(*down)) {
                (false, false) => LocalOutcome::Empty,
                (true, false) => LocalOutcome::Up,
                (false, true) => LocalOutcome::Down,
                (true, true) => LocalOutcome::Double,
            },
            _ => unreachable!(),
        }
    }
}

/// Born probabilities in the order `0, ↑, ↓, ↑↓`.
pub fn outcome_probabilities(
    state: &SlotState,
    picture: Picture,
    index: usize,
) -> Result<[f64; 4]> {
    let probe = Probe::new(state, picture, index)?;
    let mut sums = [crate::numerics::NeumaierSum::new(); 4];
    for (mask, amp) in state.configurations() {
        sums[probe.outcome(mask) as usize].add(amp * amp);
    }
    Ok(sums.map(|s| s.total()))
}

/// Projects onto `outcome` and renormalizes; the measured slots are removed.
pub fn project(
    state: &SlotState,
    picture: Picture,
    index: usize,
    outcome: LocalOutcome,
) -> Result<MeasurementOutcome> {
    let probe = Probe::new(state, picture, index)?;
    let probability = outcome_probabilities(state, picture, index)?[outcome as usize];
    if probability <= 0.0 {
        return Err(Error::InvalidParameters(format!(
            "outcome {} has zero probability",
            outcome.symbol()
        )));
    }
    let mut removed: Vec<usize> = probe.positions.clone();
    removed.sort_unstable();
    let new_slots: Vec<usize> = state
        .slots()
        .iter()
        .enumerate()
        .filter(|(p, _)| !removed.contains(p))
        .map(|(_, &s)| s)
        .collect();
    let new_pairs = state.params().pairs() - outcome.pairs_removed(picture);
    let mut amplitudes = vec![0.0; small_choose(new_slots.len(), new_pairs) as usize];
    let norm = probability.sqrt();
    for (mask, amp) in state.configurations() {
        if probe.outcome(mask) != outcome {
            continue;
        }
        amplitudes[colex_rank(compress(mask, &removed))] = amp / norm;
    }
    Ok(MeasurementOutcome {
        picture,
        index,
        outcome,
        probability,
        post_state: SlotState::from_parts(state.lattice_len(), new_slots, new_pairs, amplitudes),
    })
}

/// Drops the bits at `removed` (ascending) and closes the gaps.
fn compress(mask: u64, removed: &[usize]) -> u64 {
    let mut out = mask;
    for &p in removed.iter().rev() {
        let low = out & ((1u64 << p) - 1);
        out = ((out >> (p + 1)) << p) | low;
    }
    out
}

/// Samples one measurement outcome with the documented seeded generator.
pub fn measure(
    state: &SlotState,
    picture: Picture,
    index: usize,
    seed: u64,
) -> Result<MeasurementOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    measure_with_rng(state, picture, index, &mut rng)
}

pub fn measure_with_rng<R: Rng + ?Sized>(
    state: &SlotState,
    picture: Picture,
    index: usize,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    let probs = outcome_probabilities(state, picture, index)?;
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut chosen = None;
    for (o, &p) in LocalOutcome::ALL.iter().zip(&probs) {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        chosen = Some(*o);
        if u < acc {
            break;
        }
    }
    let outcome = chosen.ok_or_else(|| Error::InvalidParameters("state has zero norm".into()))?;
    project(state, picture, index, outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slotstate::{build_eta_state, EtaParams};

    fn eta(l: usize, n: usize) -> SlotState {
        build_eta_state(EtaParams::new(l, n).unwrap()).unwrap()
    }

    #[test]
    fn compress_closes_gaps() {
        assert_eq!(compress(0b10110, &[1]), 0b1010);
        assert_eq!(compress(0b10110, &[1, 2]), 0b100);
        assert_eq!(compress(0b1, &[0]), 0);
    }

    #[test]
    fn direct_measurement_collapses_to_smaller_eta_state() {
        let s = eta(4, 2);
        let p = outcome_probabilities(&s, Picture::Direct, 1).unwrap();
        assert!((p[3] - 0.5).abs() < 1e-15 && (p[0] - 0.5).abs() < 1e-15);
        let m = project(&s, Picture::Direct, 1, LocalOutcome::Double).unwrap();
        assert_eq!(m.post_state.params(), EtaParams::new(3, 1).unwrap());
        assert!(m.post_state.deviation_from_canonical() < 1e-15);
        assert_eq!(m.post_state.slots(), &[0, 2, 3]);
    }

    #[test]
    fn momentum_probabilities_are_hypergeometric() {
        let s = eta(6, 3);
        let p = outcome_probabilities(&s, Picture::Momentum, 1).unwrap();
        assert!((p[0] - 4.0 / 20.0).abs() < 1e-15);
        assert!((p[1] - 6.0 / 20.0).abs() < 1e-15);
        assert!((p[2] - 6.0 / 20.0).abs() < 1e-15);
        assert!((p[3] - 4.0 / 20.0).abs() < 1e-15);
        for o in LocalOutcome::ALL {
            let m = project(&s, Picture::Momentum, 1, o).unwrap();
            assert_eq!(m.post_state.params().length(), 4);
            assert_eq!(
                m.post_state.params().pairs(),
                3 - o.pairs_removed(Picture::Momentum)
            );
            assert!(m.post_state.deviation_from_canonical() < 1e-15);
        }
    }

    #[test]
    fn vacuum_is_certain() {
        let m = measure(&eta(5, 0), Picture::Direct, 2, 7).unwrap();
        assert_eq!(m.outcome, LocalOutcome::Empty);
        assert_eq!(m.probability, 1.0);
        assert_eq!(m.post_state.params(), EtaParams::new(4, 0).unwrap());
    }

    #[test]
    fn self_conjugate_and_repeated_indices_rejected() {
        let s = eta(6, 3);
        assert!(matches!(
            measure(&s, Picture::Momentum, 0, 1),
            Err(Error::SelfConjugateMode(0))
        ));
        assert!(matches!(
            measure(&s, Picture::Momentum, 3, 1),
            Err(Error::SelfConjugateMode(3))
        ));
        let m = measure(&s, Picture::Momentum, 1, 1).unwrap();
        assert!(measure(&m.post_state, Picture::Momentum, 5, 1).is_err());
        assert!(measure(&s, Picture::Direct, 6, 1).is_err());
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let s = eta(8, 4);
        let a: Vec<_> = (0..20)
            .map(|seed| measure(&s, Picture::Momentum, 2, seed).unwrap().outcome)
            .collect();
        let b: Vec<_> = (0..20)
            .map(|seed| measure(&s, Picture::Momentum, 2, seed).unwrap().outcome)
            .collect();
        assert_eq!(a, b);
        assert!(a.iter().any(|&o| o != a[0]));
    }
}
