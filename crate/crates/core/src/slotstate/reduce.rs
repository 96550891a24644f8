//! Reduced density matrices of slot states.
//!
//! Every slot holds two orbitals, `(−k_s, ↑)` at in-slot position 0 and `(k_s, ↓)` at
//! position 1. A block selects orbitals; a slot is *full* when both of its orbitals
//! are in the block, *partial* when one is, and *environment* otherwise. The RDM is
//! `ρ(b, b') = Σ_e ψ(b, e) ψ(b', e)` after rewriting every configuration in an
//! occupation basis where all block orbitals precede all environment orbitals.
//! The fermionic sign of that rewrite is computed explicitly for the chosen global
//! orbital ordering.

use std::collections::HashMap;

use super::matrix::{bits_per_unit, DensityMatrix, HermitianMatrix};
use super::{Caps, Picture, SlotState};
use crate::error::{Error, Result};
use crate::spectra::BlockSpec;

/// Global ordering of spin-orbitals used to define occupation-basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrbitalOrdering {
    /// Slots ascending; within a slot `(−k, ↑)` before `(k, ↓)`.
    /// Every eta-state RDM entry is real and nonnegative in this ordering.
    #[default]
    SlotMajor,
    /// `(k_0 ↑, k_0 ↓, k_1 ↑, k_1 ↓, …)`.
    ModeMajor,
}

impl OrbitalOrdering {
    fn key(self, lattice_len: usize, slot: usize, pos: usize) -> usize {
        match self {
            OrbitalOrdering::SlotMajor => 2 * slot + pos,
            OrbitalOrdering::ModeMajor => {
                if pos == 0 {
                    2 * ((lattice_len - slot) % lattice_len)
                } else {
                    2 * slot + 1
                }
            }
        }
    }
}

/// Reduced density matrix of `block` in the canonical slot-major ordering.
pub fn reduce(state: &SlotState, block: &BlockSpec) -> Result<DensityMatrix> {
    reduce_with_ordering(state, block, OrbitalOrdering::SlotMajor, &Caps::default())
}

struct BlockOrbital {
    position: usize,
    label_bit: u32,
}

pub fn reduce_with_ordering(
    state: &SlotState,
    block: &BlockSpec,
    ordering: OrbitalOrdering,
    caps: &Caps,
) -> Result<DensityMatrix> {
    if block.lattice_len() != state.lattice_len() {
        return Err(Error::InvalidBlock(format!(
            "block is defined on L = {}, state on L = {}",
            block.lattice_len(),
            state.lattice_len()
        )));
    }
    let picture = block.picture();
    let unit_dim = picture.local_dim();
    let units = block.units().len();
    let dim = (unit_dim as u128).checked_pow(units as u32);
    match dim {
        Some(d) if d <= caps.max_dimension => {}
        _ => {
            return Err(Error::DimensionCapExceeded {
                required: dim.unwrap_or(u128::MAX),
                cap: caps.max_dimension,
            })
        }
    }
    let l = state.lattice_len();
    let nslots = state.slots().len();

    // Block orbitals and, for the direct picture, whole slots.
    let mut orbitals = Vec::new();
    let mut in_block = vec![[false; 2]; nslots];
    let bits = bits_per_unit(unit_dim);
    for (u, &unit) in block.units().iter().enumerate() {
        match picture {
            Picture::Direct => {
                let p = state.live_position(unit)?;
                in_block[p] = [true, true];
                orbitals.push(BlockOrbital {
                    position: p,
                    label_bit: (u * bits) as u32,
                });
            }
            Picture::Momentum => {
                // ↑ of mode m lives in slot L − m at position 0, ↓ in slot m at position 1.
                let up = state.live_position((l - unit) % l)?;
                let down = state.live_position(unit)?;
                in_block[up][0] = true;
                in_block[down][1] = true;
                orbitals.push(BlockOrbital {
                    position: up,
                    label_bit: (u * bits) as u32,
                });
                orbitals.push(BlockOrbital {
                    position: down,
                    label_bit: (u * bits + 1) as u32,
                });
            }
        }
    }
    let full_mask: u64 = in_block
        .iter()
        .enumerate()
        .filter(|(_, b)| b[0] && b[1])
        .fold(0, |m, (p, _)| m | 1 << p);

    // Sort key of every orbital: block orbitals first, each group in global order.
    let slot_labels = state.slots();
    let target = |p: usize, pos: usize| -> (bool, usize) {
        (!in_block[p][pos], ordering.key(l, slot_labels[p], pos))
    };
    let needs_sign = picture == Picture::Momentum;

    let mut groups: HashMap<u64, Vec<(u64, f64)>> = HashMap::new();
    let mut seq: Vec<(bool, usize)> = Vec::with_capacity(2 * state.params().pairs());
    for (mask, amp) in state.configurations() {
        let mut label = 0u64;
        for o in &orbitals {
            if mask >> o.position & 1 == 1 {
                label |= 1 << o.label_bit;
            }
        }
        let mut sign = 1.0;
        if needs_sign {
            // Pair-product order (slot by slot) → (block | environment) order.
            seq.clear();
            let mut m = mask;
            while m != 0 {
                let p = m.trailing_zeros() as usize;
                seq.push(target(p, 0));
                seq.push(target(p, 1));
                m &= m - 1;
            }
            let mut inversions = 0usize;
            for i in 0..seq.len() {
                for j in i + 1..seq.len() {
                    if seq[j] < seq[i] {
                        inversions += 1;
                    }
                }
            }
            if inversions % 2 == 1 {
                sign = -1.0;
            }
        }
        groups
            .entry(mask & !full_mask)
            .or_default()
            .push((label, sign * amp));
    }

    let mut keys: Vec<u64> = groups.keys().copied().collect();
    keys.sort_unstable();
    let mut triples = Vec::new();
    for key in keys {
        let members = &groups[&key];
        for &(r, ar) in members {
            for &(c, ac) in members {
                triples.push((r, c, ar * ac));
            }
        }
    }
    DensityMatrix::new(HermitianMatrix::from_triples(unit_dim, units, triples)?)
}

/// `S(A) + S(B) − S(AB)` in bits, for disjoint unit lists of the same picture.
pub fn mutual_information(state: &SlotState, a: &BlockSpec, b: &BlockSpec) -> Result<f64> {
    let ab = a.join(b)?;
    let sa = reduce(state, a)?.entropy()?;
    let sb = reduce(state, b)?.entropy()?;
    let sab = reduce(state, &ab)?.entropy()?;
    Ok(sa + sb - sab)
}

/// Negativity of `ρ_AB` with the partial transpose taken on `A`.
pub fn two_block_negativity(state: &SlotState, a: &BlockSpec, b: &BlockSpec) -> Result<f64> {
    let ab = a.join(b)?;
    let rho = reduce(state, &ab)?;
    let sub: Vec<usize> = (0..a.units().len()).collect();
    rho.negativity(&sub)
}
