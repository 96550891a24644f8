use serde::Serialize;

use crate::error::Result;
use crate::numerics::{compensated_sum, shannon_entropy, LogProb, NeumaierSum};

/// One distinct eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub value: f64,
    /// Natural log of `value`, kept so that entropies of tiny levels stay accurate.
    pub ln_value: f64,
    pub multiplicity: u128,
}

impl Level {
    pub fn new(weight: LogProb, multiplicity: u128) -> Self {
        Level {
            value: weight.value(),
            ln_value: weight.ln(),
            multiplicity,
        }
    }

    fn from_value(value: f64) -> Self {
        Level {
            value,
            ln_value: if value > 0.0 {
                value.ln()
            } else {
                f64::NEG_INFINITY
            },
            multiplicity: 1,
        }
    }
}

/// Eigenvalues of a density matrix as `(value, multiplicity)` levels plus an explicit
/// count of zero eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    levels: Vec<Level>,
    /// `None` when the full dimension does not fit in a `u128`.
    nulls: Option<u128>,
}

impl Spectrum {
    /// Builds a spectrum from nonzero levels; zero-weight levels are folded into the
    /// null count.
    pub fn from_levels<I>(levels: I, nulls: Option<u128>) -> Self
    where
        I: IntoIterator<Item = Level>,
    {
        let mut nulls = nulls;
        let mut kept = Vec::new();
        for level in levels {
            if level.multiplicity == 0 {
                continue;
            }
            if level.value == 0.0 {
                nulls = nulls.and_then(|n| n.checked_add(level.multiplicity));
            } else {
                kept.push(level);
            }
        }
        Spectrum {
            levels: kept,
            nulls,
        }
    }

    /// Every entry is its own level of multiplicity one, zeros included.
    pub fn from_eigenvalues(eigenvalues: &[f64]) -> Self {
        Spectrum {
            levels: eigenvalues.iter().map(|&v| Level::from_value(v)).collect(),
            nulls: Some(0),
        }
    }

    /// Eigenvalues of a supported subspace plus `nulls` unsupported zero directions.
    pub fn from_eigenvalues_with_nulls(eigenvalues: &[f64], nulls: Option<u128>) -> Self {
        Spectrum {
            levels: eigenvalues.iter().map(|&v| Level::from_value(v)).collect(),
            nulls,
        }
    }

    /// The pure-state spectrum `{1}` in a space of dimension `dimension`.
    pub fn pure(dimension: Option<u128>) -> Self {
        Spectrum {
            levels: vec![Level::new(LogProb::ONE, 1)],
            nulls: dimension.map(|d| d - 1),
        }
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Number of zero eigenvalues outside [`Self::levels`].
    pub fn null_count(&self) -> Option<u128> {
        self.nulls
    }

    /// Total number of eigenvalues, zeros included.
    pub fn dimension(&self) -> Option<u128> {
        self.levels
            .iter()
            .try_fold(self.nulls?, |acc, l| acc.checked_add(l.multiplicity))
    }

    /// `Σ multiplicity · value`.
    pub fn total_weight(&self) -> f64 {
        compensated_sum(self.levels.iter().map(|l| l.multiplicity as f64 * l.value))
    }

    /// `Tr ρ² = Σ multiplicity · value²`.
    pub fn purity(&self) -> f64 {
        compensated_sum(
            self.levels
                .iter()
                .map(|l| l.multiplicity as f64 * (2.0 * l.ln_value).exp()),
        )
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        shannon_entropy(self)
    }

    /// Spectrum of `ρ ⊗ σ`.
    pub fn tensor(&self, other: &Spectrum) -> Spectrum {
        let mut levels = Vec::with_capacity(self.levels.len() * other.levels.len());
        for x in &self.levels {
            for y in &other.levels {
                let w = LogProb::from_ln(x.ln_value) * LogProb::from_ln(y.ln_value);
                levels.push(Level::new(w, x.multiplicity * y.multiplicity));
            }
        }
        let nulls = match (self.dimension(), other.dimension()) {
            (Some(d1), Some(d2)) => d1
                .checked_mul(d2)
                .map(|d| d - levels.iter().map(|l: &Level| l.multiplicity).sum::<u128>()),
            _ => None,
        };
        Spectrum { levels, nulls }
    }

    /// Every eigenvalue including zeros, descending.
    ///
    /// # Panics
    /// If the dimension is unknown or above `2^32`.
    pub fn sorted_eigenvalues(&self) -> Vec<f64> {
        let dim = self
            .dimension()
            .filter(|&d| d <= 1 << 32)
            .expect("spectrum too large to expand") as usize;
        let mut out = Vec::with_capacity(dim);
        for l in &self.levels {
            out.extend(std::iter::repeat_n(l.value, l.multiplicity as usize));
        }
        out.resize(dim, 0.0);
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }

    /// Largest entrywise difference between the two sorted eigenvalue lists; the
    /// shorter list is padded with zeros.
    pub fn max_sorted_deviation(&self, other: &Spectrum) -> f64 {
        let mut x = self.sorted_eigenvalues();
        let mut y = other.sorted_eigenvalues();
        let n = x.len().max(y.len());
        x.resize(n, 0.0);
        y.resize(n, 0.0);
        x.iter()
            .zip(&y)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    }

    /// Variance of the level index weighted by the level probabilities, for spectra
    /// whose levels are listed in sector order `0, 1, 2, …`.
    pub(crate) fn sector_variance(&self) -> f64 {
        let weight = |l: &Level| l.multiplicity as f64 * l.value;
        let mut mean = NeumaierSum::new();
        for (i, l) in self.levels.iter().enumerate() {
            mean.add(i as f64 * weight(l));
        }
        let mean = mean.total();
        // centred second moment; the raw one cancels badly for large D₂
        let mut var = NeumaierSum::new();
        for (i, l) in self.levels.iter().enumerate() {
            var.add((i as f64 - mean).powi(2) * weight(l));
        }
        var.total()
    }
}
