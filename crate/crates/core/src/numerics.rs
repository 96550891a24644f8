//! Log-domain combinatorics and entropy helpers.
//!
//! Binomials are carried as natural logs so that weights such as
//! `C(1000, 500)^2 / C(1000, 500)^2` never pass through an overflowing intermediate.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::spectra::Spectrum;

/// Eigenvalues at or below this are exact zeros in entropy sums.
pub const ZERO_EIGENVALUE: f64 = 1e-14;

/// Tolerance on `Σ λ = 1` accepted by [`shannon_entropy`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Natural log of a nonnegative weight. `-inf` encodes weight zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogProb(f64);

impl LogProb {
    pub const ZERO: LogProb = LogProb(f64::NEG_INFINITY);
    pub const ONE: LogProb = LogProb(0.0);

    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(!ln.is_nan());
        LogProb(ln)
    }

    pub fn from_value(value: f64) -> Self {
        debug_assert!(value >= 0.0);
        LogProb(value.ln())
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn powi(self, n: i32) -> Self {
        if self.is_zero() {
            return if n == 0 { Self::ONE } else { Self::ZERO };
        }
        LogProb(self.0 * n as f64)
    }
}

impl std::ops::Mul for LogProb {
    type Output = LogProb;

    fn mul(self, rhs: LogProb) -> LogProb {
        if self.is_zero() || rhs.is_zero() {
            LogProb::ZERO
        } else {
            LogProb(self.0 + rhs.0)
        }
    }
}

impl std::ops::Div for LogProb {
    type Output = LogProb;

    fn div(self, rhs: LogProb) -> LogProb {
        assert!(!rhs.is_zero(), "division by a zero weight");
        if self.is_zero() {
            LogProb::ZERO
        } else {
            LogProb(self.0 - rhs.0)
        }
    }
}

/// Asymptotic filling: `a = 1 − n_d` (hole fraction), `b = n_d` (pair fraction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Filling {
    a: f64,
}

impl Filling {
    pub fn new(a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidParameters(format!(
                "filling a = {a} must lie in [0, 1]"
            )));
        }
        Ok(Filling { a })
    }

    /// Filling from the pair density `n_d = N_d / L`.
    pub fn from_pair_density(n_d: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&n_d) {
            return Err(Error::InvalidParameters(format!(
                "pair density n_d = {n_d} must lie in [0, 1]"
            )));
        }
        Ok(Filling { a: 1.0 - n_d })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        1.0 - self.a
    }

    pub fn pair_density(&self) -> f64 {
        self.b()
    }

    /// `a · b = n_d (1 − n_d)`.
    pub fn ab(&self) -> f64 {
        self.a * self.b()
    }

    /// The particle-hole partner `a ↔ b`.
    pub fn conjugate(&self) -> Filling {
        Filling { a: self.b() }
    }

    pub(crate) fn ln_a(&self) -> LogProb {
        LogProb::from_value(self.a)
    }

    pub(crate) fn ln_b(&self) -> LogProb {
        LogProb::from_value(self.b())
    }
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<NeumaierSum>().total()
}

const LN_FACTORIAL_TABLE: usize = 1 << 16;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LN_FACTORIAL_TABLE);
        let mut acc = NeumaierSum::new();
        table.push(0.0);
        for k in 1..LN_FACTORIAL_TABLE {
            acc.add((k as f64).ln());
            table.push(acc.total());
        }
        table
    })
}

/// `ln n!`, tabulated below 2^16 and from the Stirling series above.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < LN_FACTORIAL_TABLE {
        return ln_factorial_table()[n as usize];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x
        + 0.5 * (std::f64::consts::TAU * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// `C(n, k)` for `k ≤ n`, or `None` on `u128` overflow.
pub(crate) fn exact_choose(n: u64, k: u64) -> Option<u128> {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(c)
}

/// `ln C(n, k)`; `-inf` when `k < 0` or `k > n`.
pub fn log_choose(n: u64, k: i64) -> f64 {
    if k < 0 || k as u64 > n {
        return f64::NEG_INFINITY;
    }
    let k = k as u64;
    if k == 0 || k == n {
        return 0.0;
    }
    if n <= 1024 {
        if let Some(c) = exact_choose(n, k) {
            return (c as f64).ln();
        }
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `C(n, k)` as a weight in the log domain.
pub fn choose_weight(n: u64, k: i64) -> LogProb {
    LogProb::from_ln(log_choose(n, k))
}

fn check_lattice(l: usize, n_d: usize) -> Result<()> {
    if l == 0 {
        return Err(Error::InvalidParameters("L must be positive".into()));
    }
    if n_d > l {
        return Err(Error::InvalidParameters(format!(
            "N_d = {n_d} exceeds L = {l}"
        )));
    }
    Ok(())
}

/// `C(L − excluded, N_d − removed) / C(L, N_d)` in the log domain.
pub fn log_hypergeometric_weight(
    l: usize,
    n_d: usize,
    excluded: usize,
    removed: usize,
) -> Result<LogProb> {
    check_lattice(l, n_d)?;
    if excluded > l {
        return Err(Error::InvalidParameters(format!(
            "excluded = {excluded} exceeds L = {l}"
        )));
    }
    let top = log_choose((l - excluded) as u64, n_d as i64 - removed as i64);
    Ok(LogProb::from_ln(top) / choose_weight(l as u64, n_d as i64))
}

/// Probability that a fixed set of `excluded` slots carries exactly the `removed`
/// pairs of a uniformly random `N_d`-subset configuration specified on those slots.
pub fn hypergeometric_weight(l: usize, n_d: usize, excluded: usize, removed: usize) -> Result<f64> {
    log_hypergeometric_weight(l, n_d, excluded, removed).map(LogProb::value)
}

/// `−Σ λ log₂ λ` over a normalized spectrum.
pub fn shannon_entropy(spectrum: &Spectrum) -> Result<f64> {
    let total = spectrum.total_weight();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Unnormalized { total });
    }
    if spectrum
        .levels()
        .iter()
        .any(|l| l.value < -NORMALIZATION_TOLERANCE)
    {
        return Err(Error::InvalidParameters(
            "spectrum has negative eigenvalues".into(),
        ));
    }
    let nats = spectrum
        .levels()
        .iter()
        .filter(|l| l.value > ZERO_EIGENVALUE)
        .map(|l| -(l.multiplicity as f64) * l.value * l.ln_value)
        .collect::<NeumaierSum>()
        .total();
    Ok(nats / std::f64::consts::LN_2)
}

/// Entropy in bits of a raw list of eigenvalues, e.g. from a numerical solver.
pub fn entropy_of_eigenvalues(eigenvalues: &[f64]) -> Result<f64> {
    shannon_entropy(&Spectrum::from_eigenvalues(eigenvalues))
}

pub fn bits_to_nats(bits: f64) -> f64 {
    bits * std::f64::consts::LN_2
}
