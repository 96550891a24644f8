//! Persistency of entanglement: how many local occupation measurements it takes to
//! turn `|Ψ(L, N_d)⟩` into a product state.
//!
//! A site measurement maps `|Ψ(L, N_d)⟩` to `|Ψ(L − 1, N_d)⟩` (empty) or
//! `|Ψ(L − 1, N_d − 1)⟩` (doubly occupied). A mode measurement removes two pair slots
//! and `0`, `1` or `2` pairs. The state is a product exactly when `N_d ∈ {0, L}`.
//!
//! Two readings are provided. The *optimistic* value picks the most favourable outcome
//! at every step; the *guaranteed* value is the worst case over outcomes.

use std::collections::HashMap;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::slotstate::{
    build_eta_state_capped, measure_with_rng, Caps, EtaParams, LocalOutcome, Picture,
};
use crate::spectra::is_self_conjugate;

/// Post-measurement amplitudes must match the canonical eta state this closely.
pub const SELF_SIMILARITY_TOLERANCE: f64 = 1e-12;

/// `min(N_d, L − N_d)`: every measured site comes out doubly occupied (below half
/// filling) or empty (above).
pub fn persistency_direct(params: EtaParams) -> usize {
    params.pairs().min(params.length() - params.pairs())
}

/// `⌈min(N_d, L − N_d) / 2⌉`.
///
/// Below half filling a `↑↓` outcome removes two pairs at once; with an odd count the
/// last measurement removes the final pair through a `↑` or `↓` outcome. Above half
/// filling the same holds for holes with the `0` outcome.
pub fn persistency_kspace(params: EtaParams) -> usize {
    persistency_direct(params).div_ceil(2)
}

pub fn persistency_optimistic(params: EtaParams, picture: Picture) -> usize {
    match picture {
        Picture::Direct => persistency_direct(params),
        Picture::Momentum => persistency_kspace(params),
    }
}

/// Worst case over outcomes: `W(L, N) = 0` for `N ∈ {0, L}`, else
/// `1 + max W(L', N')` over the collapsed parameters of every outcome with nonzero
/// probability.
///
/// The momentum recursion treats every remaining slot pair as measurable.
pub fn guaranteed_persistency(params: EtaParams, picture: Picture) -> usize {
    let mut memo = HashMap::new();
    worst_case(params.length(), params.pairs(), picture, &mut memo)
}

fn worst_case(
    l: usize,
    n: usize,
    picture: Picture,
    memo: &mut HashMap<(usize, usize), usize>,
) -> usize {
    if n == 0 || n == l {
        return 0;
    }
    if let Some(&w) = memo.get(&(l, n)) {
        return w;
    }
    let outcomes: Vec<(usize, usize)> = match picture {
        Picture::Direct => vec![(l - 1, n), (l - 1, n - 1)],
        Picture::Momentum => (0..=2usize)
            .filter(|&x| x <= n && n - x <= l - 2)
            .map(|x| (l - 2, n - x))
            .collect(),
    };
    let w = 1 + outcomes
        .into_iter()
        .map(|(l2, n2)| worst_case(l2, n2, picture, memo))
        .max()
        .unwrap_or(0);
    memo.insert((l, n), w);
    w
}

/// Order in which sites or modes are measured along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Ascending index.
    FixedOrder,
    /// A fresh uniformly random permutation per trajectory.
    Random,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed-order" | "fixed" => Ok(Strategy::FixedOrder),
            "random" => Ok(Strategy::Random),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::FixedOrder => "fixed-order",
            Strategy::Random => "random",
        })
    }
}

/// One simulated measurement sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Measurements performed.
    pub measurements: usize,
    /// True when every measurable index was used up before the state factorized.
    pub censored: bool,
    /// Every outcome was `0` or `↑↓`.
    pub extremal_only: bool,
    /// Largest amplitude deviation of a post-measurement state from the canonical
    /// eta state of its parameters.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryStats {
    pub trajectories: usize,
    pub censored: usize,
    pub mean: f64,
    pub min: Option<usize>,
    pub max: Option<usize>,
    pub p10: Option<usize>,
    pub p50: Option<usize>,
    pub p90: Option<usize>,
    /// Trajectories that used only `0` and `↑↓` outcomes, and their shortest length.
    pub extremal_trajectories: usize,
    pub extremal_min: Option<usize>,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PersistencyResult {
    pub length: usize,
    pub pairs: usize,
    pub picture: Picture,
    pub strategy: Strategy,
    pub seed: u64,
    pub optimistic: usize,
    pub guaranteed: usize,
    pub stats: TrajectoryStats,
}

/// Measurable indices: all sites, or all generic modes.
fn candidates(l: usize, picture: Picture) -> Vec<usize> {
    match picture {
        Picture::Direct => (0..l).collect(),
        Picture::Momentum => (0..l).filter(|&m| !is_self_conjugate(l, m)).collect(),
    }
}

/// Runs trajectory `index` of the ensemble defined by `seed`.
///
/// The generator is `ChaCha8Rng::seed_from_u64(seed)` switched to stream `index`, so
/// every trajectory is reproducible on its own and independent of scheduling.
pub fn run_trajectory(
    params: EtaParams,
    picture: Picture,
    strategy: Strategy,
    seed: u64,
    index: u64,
    caps: &Caps,
) -> Result<Trajectory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let l = params.length();
    let mut order = candidates(l, picture);
    if strategy == Strategy::Random {
        order.shuffle(&mut rng);
    }
    let mut state = build_eta_state_capped(params, caps)?;
    let mut out = Trajectory {
        measurements: 0,
        censored: false,
        extremal_only: true,
        max_deviation: 0.0,
    };
    let mut next = order.into_iter();
    while !state.params().is_product() {
        let live = |m: usize| {
            let slots = state.slots();
            match picture {
                Picture::Direct => slots.binary_search(&m).is_ok(),
                Picture::Momentum => {
                    slots.binary_search(&m).is_ok() && slots.binary_search(&((l - m) % l)).is_ok()
                }
            }
        };
        let Some(index) = next.by_ref().find(|&m| live(m)) else {
            out.censored = true;
            break;
        };
        let m = measure_with_rng(&state, picture, index, &mut rng)?;
        out.measurements += 1;
        if matches!(m.outcome, LocalOutcome::Up | LocalOutcome::Down) {
            out.extremal_only = false;
        }
        out.max_deviation = out
            .max_deviation
            .max(m.post_state.deviation_from_canonical());
        state = m.post_state;
    }
    Ok(out)
}

/// Nearest-rank percentile of a sorted slice.
fn percentile(sorted: &[usize], p: f64) -> Option<usize> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((p / 100.0) * sorted.len() as f64).ceil().max(1.0) as usize;
    Some(sorted[rank.min(sorted.len()) - 1])
}

pub fn summarize(trajectories: &[Trajectory]) -> TrajectoryStats {
    let mut counts: Vec<usize> = trajectories
        .iter()
        .filter(|t| !t.censored)
        .map(|t| t.measurements)
        .collect();
    counts.sort_unstable();
    let extremal: Vec<usize> = trajectories
        .iter()
        .filter(|t| !t.censored && t.extremal_only)
        .map(|t| t.measurements)
        .collect();
    let mean = if counts.is_empty() {
        f64::NAN
    } else {
        counts.iter().sum::<usize>() as f64 / counts.len() as f64
    };
    TrajectoryStats {
        trajectories: trajectories.len(),
        censored: trajectories.len() - counts.len(),
        mean,
        min: counts.first().copied(),
        max: counts.last().copied(),
        p10: percentile(&counts, 10.0),
        p50: percentile(&counts, 50.0),
        p90: percentile(&counts, 90.0),
        extremal_trajectories: extremal.len(),
        extremal_min: extremal.iter().copied().min(),
        max_deviation: trajectories
            .iter()
            .map(|t| t.max_deviation)
            .fold(0.0, f64::max),
    }
}

/// Simulates `n_traj` Born-sampled measurement sequences in parallel.
pub fn simulate_trajectories(
    params: EtaParams,
    picture: Picture,
    strategy: Strategy,
    n_traj: usize,
    seed: u64,
) -> Result<PersistencyResult> {
    simulate_trajectories_capped(params, picture, strategy, n_traj, seed, &Caps::default())
}

pub fn simulate_trajectories_capped(
    params: EtaParams,
    picture: Picture,
    strategy: Strategy,
    n_traj: usize,
    seed: u64,
    caps: &Caps,
) -> Result<PersistencyResult> {
    // Fail fast on the cap before spawning work.
    build_eta_state_capped(params, caps)?;
    let trajectories = (0..n_traj as u64)
        .into_par_iter()
        .map(|i| run_trajectory(params, picture, strategy, seed, i, caps))
        .collect::<Result<Vec<_>>>()?;
    Ok(PersistencyResult {
        length: params.length(),
        pairs: params.pairs(),
        picture,
        strategy,
        seed,
        optimistic: persistency_optimistic(params, picture),
        guaranteed: guaranteed_persistency(params, picture),
        stats: summarize(&trajectories),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(l: usize, n: usize) -> EtaParams {
        EtaParams::new(l, n).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(persistency_direct(p(10, 3)), 3);
        assert_eq!(persistency_direct(p(10, 7)), 3);
        assert_eq!(persistency_direct(p(10, 0)), 0);
        assert_eq!(persistency_kspace(p(10, 4)), 2);
        assert_eq!(persistency_kspace(p(10, 3)), 2);
        assert_eq!(persistency_kspace(p(10, 0)), 0);
    }

    #[test]
    fn guaranteed_examples() {
        assert_eq!(guaranteed_persistency(p(2, 1), Picture::Direct), 1);
        assert_eq!(guaranteed_persistency(p(3, 1), Picture::Direct), 2);
        assert_eq!(guaranteed_persistency(p(7, 7), Picture::Direct), 0);
        assert_eq!(guaranteed_persistency(p(7, 7), Picture::Momentum), 0);
        for l in 2..=12 {
            for n in 1..l {
                assert_eq!(guaranteed_persistency(p(l, n), Picture::Direct), l - 1);
            }
        }
    }

    #[test]
    fn optimistic_never_exceeds_guaranteed() {
        for l in 1..=16 {
            for n in 0..=l {
                for pic in [Picture::Direct, Picture::Momentum] {
                    assert!(
                        persistency_optimistic(p(l, n), pic)
                            <= guaranteed_persistency(p(l, n), pic)
                    );
                }
            }
        }
    }

    #[test]
    fn strategy_names() {
        assert_eq!("random".parse::<Strategy>().unwrap(), Strategy::Random);
        assert_eq!(
            "fixed-order".parse::<Strategy>().unwrap(),
            Strategy::FixedOrder
        );
        assert!(matches!(
            "greedy".parse::<Strategy>(),
            Err(Error::UnknownStrategy(_))
        ));
    }

    #[test]
    fn vacuum_trajectories_are_empty() {
        let r = simulate_trajectories(p(6, 0), Picture::Direct, Strategy::Random, 50, 3).unwrap();
        assert_eq!(r.stats.max, Some(0));
        assert_eq!(r.stats.censored, 0);
    }

    #[test]
    fn trajectories_are_reproducible() {
        let a =
            simulate_trajectories(p(6, 3), Picture::Momentum, Strategy::Random, 200, 9).unwrap();
        let b =
            simulate_trajectories(p(6, 3), Picture::Momentum, Strategy::Random, 200, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn percentiles_use_nearest_rank() {
        let v = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];
        assert_eq!(percentile(&v, 50.0), Some(5));
        assert_eq!(percentile(&v, 90.0), Some(9));
        assert_eq!(percentile(&v, 10.0), Some(1));
        assert_eq!(percentile(&[], 50.0), None);
    }
}
