//! Exact correlation structure of eta-pairing and BCS states.
//!
//! The eta-pairing state `|Ψ(L, N_d)⟩ ∝ (η†)^{N_d}|vac⟩` is a uniform superposition of
//! `N_d` pairs over `L` pair slots. A slot is a lattice site in the direct picture and a
//! pair of spin-orbitals `((−k_j, ↑), (k_j, ↓))` in the momentum picture. Everything in
//! this crate is built on that one combinatorial skeleton:
//!
//! - [`numerics`]: log-domain binomials, hypergeometric weights, compensated sums, entropies.
//! - [`slotstate`]: brute-force oracle (explicit amplitudes, reduced density matrices,
//!   partial transposition, projective measurement, pair correlators).
//! - [`spectra`]: closed-form reduced-density-matrix spectra, finite size and thermodynamic limit.
//! - [`measures`]: entropies, mutual informations, negativities, block-entropy laws, ODLRO.
//! - [`qmeasure`]: generalized Meyer–Wallach measure in momentum and direct pictures.
//! - [`persistency`]: persistency of entanglement (optimistic, guaranteed, Monte Carlo).
//! - [`bcs`]: BCS coherence factors, anomalous and normal correlators, ODLRO factorization.
//! - [`cli`]: sweep drivers that emit CSV/JSON, used by the `etapair` binary.
//!
//! Entropies are in bits throughout.

pub mod bcs;
pub mod cli;
pub mod error;
pub mod measures;
pub mod numerics;
pub mod persistency;
pub mod qmeasure;
pub mod slotstate;
pub mod spectra;

pub use error::{Error, Result};
pub use numerics::{Filling, LogProb};
pub use slotstate::{
    DensityMatrix, EtaParams, HermitianMatrix, MeasurementOutcome, Picture, SlotState,
};
pub use spectra::{BlockSpec, Spectrum};
