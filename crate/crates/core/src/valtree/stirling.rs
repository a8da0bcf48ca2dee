//! Empirical class structure of `n -> v_p(S(n, k))`.
//!
//! There is no Taylor expansion of `S(n, k)` in `n`, so a class is only
//! *empirically* terminal: every member up to `n_max` happens to share one
//! valuation. The report is evidence, not proof.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::padic::{stirling_column_valuations, Prime, Valuation};

/// Each class at the deepest level must contain at least this many members.
pub const MIN_CLASS_MEMBERS: u64 = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCount {
    pub level: u32,
    pub classes: u64,
    /// Classes whose sampled members do not share a single valuation.
    pub non_terminal: u64,
    /// Residues `j` of the non-terminal classes `{n ≡ j mod p^level}`.
    pub non_terminal_residues: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingExplorerReport {
    pub k: u64,
    pub p: Prime,
    pub n_max: u64,
    pub levels: Vec<LevelCount>,
    /// Least level from which the non-terminal count stays constant through
    /// the last explored level.
    pub stable_from: u32,
    /// The constant count from `stable_from` on.
    pub stable_count: u64,
}

impl StirlingExplorerReport {
    /// True when the count was constant over at least two explored levels.
    pub fn stabilized(&self) -> bool {
        self.levels.last().is_some_and(|l| self.stable_from < l.level)
    }
}

/// Partitions `k <= n <= n_max` into classes modulo `p^m` for `m <= max_level`
/// and counts the classes on which `v_p(S(n, k))` is not constant.
pub fn stirling_class_explorer(k: u64, max_level: u32, n_max: u64, p: Prime) -> Result<StirlingExplorerReport> {
    if k == 0 || max_level == 0 || n_max < k {
        return Err(Error::InvalidRange);
    }
    let modulus = p.pow_u64(max_level).ok_or(Error::InvalidRange)?;
    let span = n_max - k + 1;
    // The smallest class at the deepest level has floor(span / p^max_level) members.
    if span / modulus < MIN_CLASS_MEMBERS {
        let residue = (k + span) % modulus;
        return Err(Error::InsufficientData {
            level: max_level,
            residue,
            members: span / modulus,
            required: MIN_CLASS_MEMBERS,
        });
    }

    let vals = stirling_column_valuations(k, n_max, p);
    let mut levels = Vec::with_capacity(max_level as usize + 1);
    for level in 0..=max_level {
        let m = p.pow_u64(level).expect("below the checked modulus");
        let mut first: Vec<Option<Valuation>> = alloc::vec![None; m as usize];
        let mut mixed = alloc::vec![false; m as usize];
        for (i, v) in vals.iter().enumerate() {
            let j = ((k + i as u64) % m) as usize;
            match first[j] {
                None => first[j] = Some(*v),
                Some(w) if w != *v => mixed[j] = true,
                Some(_) => {}
            }
        }
        let non_terminal_residues: Vec<u64> = (0..m).filter(|&j| mixed[j as usize]).collect();
        levels.push(LevelCount {
            level,
            classes: m,
            non_terminal: non_terminal_residues.len() as u64,
            non_terminal_residues,
        });
    }

    let last = levels.last().expect("at least one level").non_terminal;
    let stable_from = levels
        .iter()
        .rev()
        .take_while(|l| l.non_terminal == last)
        .last()
        .expect("last level matches itself")
        .level;
    Ok(StirlingExplorerReport {
        k,
        p,
        n_max,
        levels,
        stable_from,
        stable_count: last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_k_terminate_at_level_one() {
        for k in [3, 4] {
            let report = stirling_class_explorer(k, 6, 5000, Prime::TWO).unwrap();
            assert_eq!(report.levels[0].non_terminal, 1);
            assert!(report.levels[1..].iter().all(|l| l.non_terminal == 0), "k = {k}");
            assert_eq!((report.stable_from, report.stable_count), (1, 0));
            assert!(report.stabilized());
        }
    }

    #[test]
    fn constant_columns_never_split() {
        let report = stirling_class_explorer(1, 4, 2000, Prime::TWO).unwrap();
        assert!(report.levels.iter().all(|l| l.non_terminal == 0));
        assert_eq!(report.stable_from, 0);
    }

    #[test]
    fn membership_floor() {
        assert!(matches!(
            stirling_class_explorer(5, 10, 10_000, Prime::TWO),
            Err(Error::InsufficientData {
                level: 10,
                required: 30,
                ..
            })
        ));
    }
}
