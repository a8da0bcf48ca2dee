//! The published 25-row rule table for `α = 0`, stored as data.
//!
//! Rows are transcribed as printed, wildcards included. For `α = 1` every
//! label is swapped. [`cross_validate`] compares the table with the parity
//! formula over all contexts and offsets.

use alloc::vec::Vec;

use super::{ChildKind, ChildOffset, SplitContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
    Any,
}

impl Parity {
    pub fn matches(self, odd: bool) -> bool {
        match self {
            Parity::Odd => odd,
            Parity::Even => !odd,
            Parity::Any => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootSet {
    Any,
    Pairs(&'static [(u8, u8)]),
}

impl RootSet {
    pub fn contains(self, i0: bool, j0: bool) -> bool {
        match self {
            RootSet::Any => true,
            RootSet::Pairs(pairs) => pairs.contains(&(i0 as u8, j0 as u8)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitRule {
    pub serial: u8,
    pub offset: ChildOffset,
    pub c: Parity,
    pub d: Parity,
    pub e: Parity,
    pub roots: RootSet,
    /// Label when `α = 0`.
    pub label: ChildKind,
}

impl SplitRule {
    pub fn matches(&self, ctx: SplitContext, offset: ChildOffset) -> bool {
        self.offset == offset
            && self.c.matches(ctx.c_odd)
            && self.d.matches(ctx.d_odd)
            && self.e.matches(ctx.e_odd)
            && self.roots.contains(ctx.i0, ctx.j0)
    }
}

const fn row(
    serial: u8,
    offset: (bool, bool),
    c: Parity,
    d: Parity,
    e: Parity,
    roots: RootSet,
    label: ChildKind,
) -> SplitRule {
    SplitRule {
        serial,
        offset: ChildOffset::new(offset.0, offset.1),
        c,
        d,
        e,
        roots,
        label,
    }
}

use ChildKind::{Star as S, Terminal as K};
use Parity::{Any as X, Even as E, Odd as O};

const O0: (bool, bool) = (false, false);
const O1: (bool, bool) = (false, true);
const O2: (bool, bool) = (true, false);
const O3: (bool, bool) = (true, true);

const ANY: RootSet = RootSet::Any;
const fn pairs(p: &'static [(u8, u8)]) -> RootSet {
    RootSet::Pairs(p)
}

pub const SPLIT_RULES: &[SplitRule] = &[
    row(1, O0, X, X, X, ANY, S),
    row(2, O2, O, O, X, pairs(&[(0, 0), (1, 0)]), K),
    row(3, O2, O, O, X, pairs(&[(0, 1), (1, 1)]), S),
    row(4, O2, O, E, X, pairs(&[(0, 0), (1, 0)]), S),
    row(5, O2, O, E, X, pairs(&[(1, 1), (0, 1)]), K),
    row(6, O2, E, O, X, ANY, K),
    row(7, O2, E, E, X, ANY, S),
    row(8, O1, O, X, O, pairs(&[(0, 0), (0, 1)]), K),
    row(9, O1, O, X, O, pairs(&[(1, 0), (1, 1)]), S),
    row(10, O1, O, X, E, pairs(&[(0, 0), (1, 0)]), S),
    row(11, O1, O, X, E, pairs(&[(1, 1), (0, 1)]), K),
    row(12, O1, E, X, O, ANY, K),
    row(13, O1, E, X, E, ANY, S),
    row(14, O3, O, O, E, pairs(&[(0, 0), (1, 1)]), K),
    row(15, O3, O, O, E, pairs(&[(1, 0), (0, 1)]), S),
    row(16, O3, O, O, O, pairs(&[(0, 0), (1, 1)]), S),
    row(17, O3, O, O, O, pairs(&[(1, 0), (0, 1)]), K),
    row(18, O3, O, E, E, pairs(&[(0, 0), (1, 1)]), S),
    row(19, O3, O, E, E, pairs(&[(1, 0), (0, 1)]), K),
    row(20, O3, O, E, O, pairs(&[(0, 0), (1, 1)]), K),
    row(21, O3, O, E, O, pairs(&[(1, 0), (0, 1)]), S),
    row(22, O3, E, O, E, ANY, K),
    row(23, O3, E, O, O, ANY, S),
    row(24, O3, E, E, E, ANY, S),
    row(25, O3, E, E, O, ANY, K),
];

/// Rows of `table` matching `ctx` and `offset`.
pub fn lookup(table: &[SplitRule], ctx: SplitContext, offset: ChildOffset) -> Vec<SplitRule> {
    table.iter().copied().filter(|r| r.matches(ctx, offset)).collect()
}

/// The label shared by all `rows` after the α swap, if there is exactly one.
pub(crate) fn agreed_kind(rows: &[SplitRule], alpha: bool) -> Option<ChildKind> {
    let first = rows.first()?.label;
    rows.iter()
        .all(|r| r.label == first)
        .then(|| if alpha { first.swapped() } else { first })
}

/// A context and offset on which the table disagrees with the formula or
/// does not give a unique label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDiscrepancy {
    pub ctx: SplitContext,
    pub offset: ChildOffset,
    pub formula: ChildKind,
    pub table: Option<ChildKind>,
    pub serials: Vec<u8>,
}

/// Compares `table` with the parity formula on all 64 contexts and 4 offsets.
pub fn cross_validate(table: &[SplitRule]) -> Vec<TableDiscrepancy> {
    let mut out = Vec::new();
    for ctx in SplitContext::all() {
        for offset in ChildOffset::ALL {
            let formula = if ctx.parity(offset) {
                ChildKind::Terminal
            } else {
                ChildKind::Star
            };
            let rows = lookup(table, ctx, offset);
            let kind = agreed_kind(&rows, ctx.alpha);
            if kind != Some(formula) {
                out.push(TableDiscrepancy {
                    ctx,
                    offset,
                    formula,
                    table: kind,
                    serials: rows.iter().map(|r| r.serial).collect(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape() {
        assert_eq!(SPLIT_RULES.len(), 25);
        for (n, r) in SPLIT_RULES.iter().enumerate() {
            assert_eq!(r.serial as usize, n + 1);
        }
    }

    #[test]
    fn every_case_is_covered_exactly_once() {
        for ctx in SplitContext::all() {
            for offset in ChildOffset::ALL {
                assert_eq!(lookup(SPLIT_RULES, ctx, offset).len(), 1, "{ctx} {offset}");
            }
        }
    }

    #[test]
    fn discrepancies_are_confined_to_rows_ten_and_eleven() {
        let bad = cross_validate(SPLIT_RULES);
        assert_eq!(bad.len(), 8);
        for d in &bad {
            assert!(d.serials == [10] || d.serials == [11], "{:?}", d);
            assert_eq!(d.offset, ChildOffset::new(false, true));
            assert!(d.ctx.c_odd && !d.ctx.e_odd);
            assert_ne!(d.ctx.i0, d.ctx.j0);
        }
    }

    #[test]
    fn corrected_rows_agree_with_formula() {
        let mut fixed: Vec<SplitRule> = SPLIT_RULES.to_vec();
        fixed[9].roots = RootSet::Pairs(&[(0, 0), (0, 1)]);
        fixed[10].roots = RootSet::Pairs(&[(1, 1), (1, 0)]);
        assert!(cross_validate(&fixed).is_empty());
    }

    #[test]
    fn flipped_row_is_detected() {
        let mut mutated: Vec<SplitRule> = SPLIT_RULES.to_vec();
        mutated[5].label = mutated[5].label.swapped();
        let bad = cross_validate(&mutated);
        assert!(bad.iter().any(|d| d.serials == [6]));
    }
}
