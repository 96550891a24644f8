//! Sparse real-symmetric matrices over occupation-basis labels.
//!
//! Reduced density matrices of eta states are supported on a small subset of the
//! `d^D` local configurations and are block diagonal with tiny blocks, so they are
//! stored as a label list plus a sparse entry map. Eigenvalues are obtained by
//! splitting the sparsity graph into connected components and diagonalizing each
//! component densely.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, NeumaierSum};
use crate::spectra::Spectrum;

/// Trace tolerance accepted by [`DensityMatrix::new`].
pub const TRACE_TOLERANCE: f64 = 1e-10;

/// Real symmetric operator on a tensor product of `units` local spaces of dimension
/// `unit_dim` (2 for a lattice site, 4 for a momentum mode).
///
/// A label packs one digit per unit, unit `u` occupying bits `[u·w, (u+1)·w)` with
/// `w = log2(unit_dim)`. For momentum modes the digit is `0, ↑ = 1, ↓ = 2, ↑↓ = 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    unit_dim: usize,
    units: usize,
    labels: Vec<u64>,
    entries: BTreeMap<(usize, usize), f64>,
}

impl HermitianMatrix {
    /// Builds a matrix from `(row_label, col_label, value)` triples, accumulating
    /// duplicates. Only the given triples are stored; callers provide both triangles.
    pub fn from_triples<I>(unit_dim: usize, units: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64, f64)>,
    {
        if unit_dim != 2 && unit_dim != 4 {
            return Err(Error::InvalidParameters(format!(
                "unit dimension {unit_dim} is not 2 or 4"
            )));
        }
        let bits = bits_per_unit(unit_dim);
        if units * bits > 64 {
            return Err(Error::InvalidParameters(format!(
                "{units} units do not fit a 64-bit label"
            )));
        }
        let triples: Vec<_> = triples.into_iter().collect();
        let limit = if units * bits == 64 {
            u64::MAX
        } else {
            (1u64 << (units * bits)) - 1
        };
        let mut label_set = BTreeSet::new();
        for &(r, c, _) in &triples {
            if r > limit || c > limit {
                return Err(Error::InvalidParameters(format!(
                    "label {} out of range for {units} units",
                    r.max(c)
                )));
            }
            label_set.insert(r);
            label_set.insert(c);
        }
        let labels: Vec<u64> = label_set.into_iter().collect();
        let mut accum: BTreeMap<(usize, usize), NeumaierSum> = BTreeMap::new();
        for (r, c, v) in triples {
            let i = labels.binary_search(&r).unwrap();
            let j = labels.binary_search(&c).unwrap();
            accum.entry((i, j)).or_default().add(v);
        }
        let entries = accum
            .into_iter()
            .map(|(k, s)| (k, s.total()))
            .filter(|&(_, v)| v != 0.0)
            .collect();
        Ok(HermitianMatrix {
            unit_dim,
            units,
            labels,
            entries,
        })
    }

    pub fn unit_dim(&self) -> usize {
        self.unit_dim
    }

    pub fn units(&self) -> usize {
        self.units
    }

    /// Full Hilbert-space dimension `unit_dim^units`, if it fits in 128 bits.
    pub fn dimension(&self) -> Option<u128> {
        (self.unit_dim as u128).checked_pow(self.units as u32)
    }

    /// Labels with at least one stored entry, ascending.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn get(&self, row: u64, col: u64) -> f64 {
        match (
            self.labels.binary_search(&row),
            self.labels.binary_search(&col),
        ) {
            (Ok(i), Ok(j)) => self.entries.get(&(i, j)).copied().unwrap_or(0.0),
            _ => 0.0,
        }
    }

    /// Nonzero entries as `(row_label, col_label, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, f64)> + '_ {
        self.entries
            .iter()
            .map(|(&(i, j), &v)| (self.labels[i], self.labels[j], v))
    }

    pub fn trace(&self) -> f64 {
        compensated_sum(
            self.entries
                .iter()
                .filter(|((i, j), _)| i == j)
                .map(|(_, &v)| v),
        )
    }

    /// `Tr M²` for symmetric `M`.
    pub fn frobenius_sq(&self) -> f64 {
        compensated_sum(self.entries.values().map(|v| v * v))
    }

    pub fn max_asymmetry(&self) -> f64 {
        self.entries
            .iter()
            .map(|(&(i, j), &v)| (v - self.entries.get(&(j, i)).copied().unwrap_or(0.0)).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.values().copied().fold(f64::INFINITY, f64::min)
    }

    /// Dense copy over [`labels`](Self::labels).
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.labels.len();
        let mut m = DMatrix::zeros(n, n);
        for (&(i, j), &v) in &self.entries {
            m[(i, j)] = v;
        }
        m
    }

    /// Eigenvalues on the stored support (labels absent from the matrix contribute
    /// exact zeros that are not listed), ascending.
    pub fn support_eigenvalues(&self) -> Vec<f64> {
        let n = self.labels.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(i, j) in self.entries.keys() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            components.entry(r).or_default().push(i);
        }
        let mut eig = Vec::with_capacity(n);
        for members in components.values() {
            if members.len() == 1 {
                let i = members[0];
                eig.push(self.entries.get(&(i, i)).copied().unwrap_or(0.0));
                continue;
            }
            let k = members.len();
            let mut block = DMatrix::zeros(k, k);
            for (a, &i) in members.iter().enumerate() {
                for (b, &j) in members.iter().enumerate() {
                    if let Some(&v) = self.entries.get(&(i, j)) {
                        block[(a, b)] = v;
                    }
                }
            }
            eig.extend(SymmetricEigen::new(block).eigenvalues.iter().copied());
        }
        eig.sort_by(f64::total_cmp);
        eig
    }

    /// `‖M‖₁ = Σ |λ|`.
    pub fn trace_norm(&self) -> f64 {
        compensated_sum(self.support_eigenvalues().into_iter().map(f64::abs))
    }

    /// Partial transpose with respect to the listed unit positions.
    pub fn partial_transpose(&self, subsystem: &[usize]) -> Result<HermitianMatrix> {
        let mask = self.unit_mask(subsystem)?;
        let triples = self
            .entries()
            .map(|(r, c, v)| ((r & !mask) | (c & mask), (c & !mask) | (r & mask), v));
        HermitianMatrix::from_triples(self.unit_dim, self.units, triples)
    }

    fn unit_mask(&self, subsystem: &[usize]) -> Result<u64> {
        let bits = bits_per_unit(self.unit_dim);
        let digit = (1u64 << bits) - 1;
        let mut mask = 0u64;
        for &u in subsystem {
            if u >= self.units {
                return Err(Error::NonFactorizable(format!(
                    "unit {u} is outside the {}-unit basis",
                    self.units
                )));
            }
            let m = digit << (u * bits);
            if mask & m != 0 {
                return Err(Error::NonFactorizable(format!("unit {u} listed twice")));
            }
            mask |= m;
        }
        Ok(mask)
    }
}

pub(crate) fn bits_per_unit(unit_dim: usize) -> usize {
    if unit_dim == 2 {
        1
    } else {
        2
    }
}

/// A unit-trace, symmetric, positive semidefinite [`HermitianMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if (tr - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::Unnormalized { total: tr });
        }
        if matrix.max_asymmetry() > TRACE_TOLERANCE {
            return Err(Error::InvalidParameters(
                "density matrix is not symmetric".into(),
            ));
        }
        Ok(DensityMatrix(matrix))
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.0
    }

    /// Full spectrum, including the zeros of unsupported labels.
    pub fn spectrum(&self) -> Spectrum {
        let eig = self.0.support_eigenvalues();
        let nulls = self.0.dimension().map(|d| d - eig.len() as u128);
        Spectrum::from_eigenvalues_with_nulls(&eig, nulls)
    }

    /// Full sorted eigenvalue list (descending) of length `unit_dim^units`.
    pub fn sorted_eigenvalues(&self) -> Vec<f64> {
        let mut eig = self.0.support_eigenvalues();
        let dim = self.0.dimension().expect("dimension overflow") as usize;
        eig.resize(dim, 0.0);
        eig.sort_by(|a, b| b.total_cmp(a));
        eig
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        crate::numerics::shannon_entropy(&self.spectrum())
    }

    pub fn purity(&self) -> f64 {
        self.0.frobenius_sq()
    }

    pub fn partial_transpose(&self, subsystem: &[usize]) -> Result<HermitianMatrix> {
        self.0.partial_transpose(subsystem)
    }

    /// `(‖ρ^{T_A}‖₁ − 1) / 2`.
    pub fn negativity(&self, subsystem: &[usize]) -> Result<f64> {
        let norm = self.partial_transpose(subsystem)?.trace_norm();
        Ok(((norm - 1.0) / 2.0).max(0.0))
    }
}

impl std::ops::Deref for DensityMatrix {
    type Target = HermitianMatrix;

    fn deref(&self) -> &HermitianMatrix {
        &self.0
    }
}

/// Negativity of `dm` across the cut `subsystem | rest`.
pub fn negativity(dm: &DensityMatrix, subsystem: &[usize]) -> Result<f64> {
    dm.negativity(subsystem)
}

/// Partial transpose of `dm` on `subsystem`.
pub fn partial_transpose(dm: &DensityMatrix, subsystem: &[usize]) -> Result<HermitianMatrix> {
    dm.partial_transpose(subsystem)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(unit_dim: usize, units: usize, values: &[(u64, f64)]) -> DensityMatrix {
        let h =
            HermitianMatrix::from_triples(unit_dim, units, values.iter().map(|&(l, v)| (l, l, v)))
                .unwrap();
        DensityMatrix::new(h).unwrap()
    }

    #[test]
    fn diagonal_matrix_is_pt_invariant() {
        let dm = diag(4, 2, &[(0, 0.25), (5, 0.25), (10, 0.5)]);
        let pt = dm.partial_transpose(&[0]).unwrap();
        assert_eq!(&pt, dm.matrix());
        assert_eq!(dm.negativity(&[0]).unwrap(), 0.0);
    }

    #[test]
    fn bell_pair_of_qubits() {
        // (|00> + |11>)/√2 on two sites
        let h = HermitianMatrix::from_triples(
            2,
            2,
            [(0, 0, 0.5), (3, 3, 0.5), (0, 3, 0.5), (3, 0, 0.5)],
        )
        .unwrap();
        let dm = DensityMatrix::new(h).unwrap();
        assert!((dm.negativity(&[0]).unwrap() - 0.5).abs() < 1e-14);
        assert!((dm.entropy().unwrap()).abs() < 1e-12);
        let pt = dm.partial_transpose(&[1]).unwrap();
        assert!((pt.trace() - 1.0).abs() < 1e-15);
        assert_eq!(pt.max_asymmetry(), 0.0);
    }

    #[test]
    fn product_state_spectrum_survives_transposition() {
        // ρ_A ⊗ ρ_B with ρ_A = diag(0.3, 0.7), ρ_B = [[0.5, 0.2], [0.2, 0.5]]
        let a = [0.3, 0.7];
        let b = [[0.5, 0.2], [0.2, 0.5]];
        let mut triples = vec![];
        for (ia, &pa) in a.iter().enumerate() {
            for (r, row) in b.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    let lr = ia as u64 | (r as u64) << 1;
                    let lc = ia as u64 | (c as u64) << 1;
                    triples.push((lr, lc, pa * v));
                }
            }
        }
        let dm = DensityMatrix::new(HermitianMatrix::from_triples(2, 2, triples).unwrap()).unwrap();
        let before = dm.support_eigenvalues();
        let after = dm.partial_transpose(&[0]).unwrap().support_eigenvalues();
        for (x, y) in before.iter().zip(&after) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_subsystems() {
        let dm = diag(4, 2, &[(0, 1.0)]);
        assert!(matches!(
            dm.partial_transpose(&[2]),
            Err(Error::NonFactorizable(_))
        ));
        assert!(matches!(
            dm.partial_transpose(&[0, 0]),
            Err(Error::NonFactorizable(_))
        ));
    }

    #[test]
    fn rejects_unnormalized() {
        let h = HermitianMatrix::from_triples(2, 1, [(0, 0, 0.5)]).unwrap();
        assert!(matches!(
            DensityMatrix::new(h),
            Err(Error::Unnormalized { .. })
        ));
    }
}
