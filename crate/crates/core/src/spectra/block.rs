use serde::Serialize;

use crate::error::{Error, Result};
use crate::slotstate::Picture;

/// A subsystem: lattice sites (direct picture) or momentum modes `k_m = 2πm/L`.
///
/// Momentum units keep the order they were given in; the RDM basis follows that order.
/// A mode is *paired* when its partner `−k` is also in the block and *unpaired* otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockSpec {
    picture: Picture,
    lattice_len: usize,
    units: Vec<usize>,
}

/// Partner index of mode `m`, i.e. `−k_m`.
pub fn partner(lattice_len: usize, m: usize) -> usize {
    (lattice_len - m) % lattice_len
}

/// `k = 0` and, for even `L`, `k = π`.
pub fn is_self_conjugate(lattice_len: usize, m: usize) -> bool {
    partner(lattice_len, m) == m
}

/// Modes with a distinct partner, ascending.
pub fn generic_modes(lattice_len: usize) -> Vec<usize> {
    (0..lattice_len)
        .filter(|&m| !is_self_conjugate(lattice_len, m))
        .collect()
}

impl BlockSpec {
    /// Unpaired modes followed by `(−k_j, k_j)` for each pair representative `j`.
    pub fn momentum(lattice_len: usize, unpaired: &[usize], pair_reps: &[usize]) -> Result<Self> {
        let mut units = unpaired.to_vec();
        for &j in pair_reps {
            check_mode(lattice_len, j)?;
            units.push(partner(lattice_len, j));
            units.push(j);
        }
        let block = Self::momentum_modes(lattice_len, &units)?;
        for &m in unpaired {
            if units.contains(&partner(lattice_len, m)) {
                return Err(Error::InvalidBlock(format!(
                    "mode {m} is listed as unpaired but its partner {} is in the block",
                    partner(lattice_len, m)
                )));
            }
        }
        Ok(block)
    }

    /// An arbitrary list of distinct generic modes.
    pub fn momentum_modes(lattice_len: usize, modes: &[usize]) -> Result<Self> {
        for &m in modes {
            check_mode(lattice_len, m)?;
        }
        check_distinct(modes)?;
        Ok(BlockSpec {
            picture: Picture::Momentum,
            lattice_len,
            units: modes.to_vec(),
        })
    }

    pub fn direct(lattice_len: usize, sites: &[usize]) -> Result<Self> {
        if lattice_len == 0 {
            return Err(Error::InvalidParameters("L must be positive".into()));
        }
        if let Some(&s) = sites.iter().find(|&&s| s >= lattice_len) {
            return Err(Error::InvalidBlock(format!(
                "site {s} out of range for L = {lattice_len}"
            )));
        }
        check_distinct(sites)?;
        Ok(BlockSpec {
            picture: Picture::Direct,
            lattice_len,
            units: sites.to_vec(),
        })
    }

    /// Parses `u:k1,k2;p:k3` (momentum; `p` lists pair representatives) or a plain
    /// comma list, optionally prefixed by `s:` (direct).
    pub fn parse(lattice_len: usize, picture: Picture, text: &str) -> Result<Self> {
        let parse_list = |s: &str| -> Result<Vec<usize>> {
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::InvalidBlock(format!("`{t}` is not a mode index")))
                })
                .collect()
        };
        let mut unpaired = Vec::new();
        let mut pairs = Vec::new();
        let mut plain = Vec::new();
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            match part.split_once(':') {
                Some(("u", rest)) => unpaired.extend(parse_list(rest)?),
                Some(("p", rest)) => pairs.extend(parse_list(rest)?),
                Some(("s", rest)) => plain.extend(parse_list(rest)?),
                Some((tag, _)) => {
                    return Err(Error::InvalidBlock(format!("unknown block tag `{tag}`")))
                }
                None => plain.extend(parse_list(part)?),
            }
        }
        match picture {
            Picture::Direct => {
                if !unpaired.is_empty() || !pairs.is_empty() {
                    return Err(Error::InvalidBlock(
                        "u:/p: groups only apply to the momentum picture".into(),
                    ));
                }
                Self::direct(lattice_len, &plain)
            }
            Picture::Momentum => {
                if plain.is_empty() {
                    Self::momentum(lattice_len, &unpaired, &pairs)
                } else if unpaired.is_empty() && pairs.is_empty() {
                    Self::momentum_modes(lattice_len, &plain)
                } else {
                    Err(Error::InvalidBlock(
                        "mix of tagged and untagged mode lists".into(),
                    ))
                }
            }
        }
    }

    /// `A ∪ B` with the units of `self` first.
    pub fn join(&self, other: &BlockSpec) -> Result<BlockSpec> {
        if self.picture != other.picture || self.lattice_len != other.lattice_len {
            return Err(Error::InvalidBlock(
                "blocks live on different lattices".into(),
            ));
        }
        let units: Vec<usize> = self.units.iter().chain(&other.units).copied().collect();
        match self.picture {
            Picture::Direct => Self::direct(self.lattice_len, &units),
            Picture::Momentum => Self::momentum_modes(self.lattice_len, &units),
        }
    }

    pub fn picture(&self) -> Picture {
        self.picture
    }

    pub fn lattice_len(&self) -> usize {
        self.lattice_len
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    /// Block size `D`.
    pub fn size(&self) -> usize {
        self.units.len()
    }

    /// Number of unpaired modes `D₁` (zero in the direct picture).
    pub fn d1(&self) -> usize {
        match self.picture {
            Picture::Direct => 0,
            Picture::Momentum => self.unpaired().count(),
        }
    }

    /// Number of paired modes `D₂` (the site count in the direct picture).
    pub fn d2(&self) -> usize {
        self.size() - self.d1()
    }

    pub fn unpaired(&self) -> impl Iterator<Item = usize> + '_ {
        self.units
            .iter()
            .copied()
            .filter(|&m| !self.units.contains(&partner(self.lattice_len, m)))
    }
}

fn check_mode(lattice_len: usize, m: usize) -> Result<()> {
    if lattice_len == 0 {
        return Err(Error::InvalidParameters("L must be positive".into()));
    }
    if m >= lattice_len {
        return Err(Error::InvalidBlock(format!(
            "mode {m} out of range for L = {lattice_len}"
        )));
    }
    if is_self_conjugate(lattice_len, m) {
        return Err(Error::SelfConjugateMode(m));
    }
    Ok(())
}

fn check_distinct(units: &[usize]) -> Result<()> {
    let mut seen = units.to_vec();
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidBlock(format!("unit {} listed twice", w[0])));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let b = BlockSpec::momentum(12, &[1, 2], &[3]).unwrap();
        assert_eq!(b.units(), &[1, 2, 9, 3]);
        assert_eq!((b.d1(), b.d2()), (2, 2));
        let b = BlockSpec::momentum_modes(12, &[5, 7, 1]).unwrap();
        assert_eq!((b.d1(), b.d2()), (1, 2));
    }

    #[test]
    fn rejects_bad_blocks() {
        assert!(matches!(
            BlockSpec::momentum(8, &[0], &[]),
            Err(Error::SelfConjugateMode(0))
        ));
        assert!(matches!(
            BlockSpec::momentum(8, &[], &[4]),
            Err(Error::SelfConjugateMode(4))
        ));
        assert!(BlockSpec::momentum(8, &[1], &[1]).is_err());
        assert!(BlockSpec::momentum(8, &[1, 7], &[]).is_err());
        assert!(BlockSpec::momentum_modes(8, &[2, 2]).is_err());
        assert!(BlockSpec::direct(4, &[4]).is_err());
        assert!(BlockSpec::direct(4, &[1, 1]).is_err());
        // odd L has a single self-conjugate mode
        assert!(BlockSpec::momentum(7, &[], &[3]).is_ok());
    }

    #[test]
    fn parse_syntax() {
        let b = BlockSpec::parse(12, Picture::Momentum, "u:1,2;p:3").unwrap();
        assert_eq!(b, BlockSpec::momentum(12, &[1, 2], &[3]).unwrap());
        let b = BlockSpec::parse(12, Picture::Momentum, "1, 11").unwrap();
        assert_eq!(b.d2(), 2);
        let b = BlockSpec::parse(6, Picture::Direct, "s:0,2").unwrap();
        assert_eq!(b.units(), &[0, 2]);
        assert!(BlockSpec::parse(6, Picture::Direct, "p:1").is_err());
        assert!(BlockSpec::parse(6, Picture::Momentum, "x:1").is_err());
        assert!(BlockSpec::parse(6, Picture::Momentum, "u:one").is_err());
    }

    #[test]
    fn join_keeps_order_and_reclassifies() {
        let a = BlockSpec::momentum_modes(8, &[1]).unwrap();
        let b = BlockSpec::momentum_modes(8, &[7]).unwrap();
        let ab = a.join(&b).unwrap();
        assert_eq!(ab.units(), &[1, 7]);
        assert_eq!(ab.d2(), 2);
        assert!(a.join(&a).is_err());
        assert!(a.join(&BlockSpec::direct(8, &[7]).unwrap()).is_err());
    }

    #[test]
    fn generic_mode_lists() {
        assert_eq!(generic_modes(6), vec![1, 2, 4, 5]);
        assert_eq!(generic_modes(5), vec![1, 2, 3, 4]);
    }
}
