//! 2-adic splitting of star nodes for `f = ax^2 + by^2 + cxy + dx + ey + g`.
//!
//! Let a star node at level `k >= 1` have representative `(b, c)` with
//! `f(b, c) = 2^k (α + 2t)`. Its child with new digits `(i_k, j_k)` has
//! representative `(b + 2^k i_k, c + 2^k j_k)` and, modulo `2^(k+1)`,
//!
//! ```text
//! f(child) / 2^k ≡ α + i_k (c j0 + d) + j_k (c i0 + e)   (mod 2)
//! ```
//!
//! where `(i0, j0) = (b, c) mod 2`: the `a`, `b` and `i_k j_k` cross terms are
//! multiples of `2^(k+1)`. The child is a star iff the parity is even, and
//! `Terminal(k)` otherwise.

mod table;
mod theorems;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::Prime;
use crate::polynomial::{Polynomial, QuadraticCoefficients};
use crate::valtree::ResidueClass;

pub use table::{cross_validate, lookup, Parity, RootSet, SplitRule, TableDiscrepancy, SPLIT_RULES};
pub use theorems::{
    assemble_split_report, check_theorem, quadratic_grid, verify_quadratic, verify_split_rules, InstanceOutcome,
    ScaledParams, SplitCounts, TheoremId, TheoremParams, TheoremReport, Witness, WitnessKind, MAX_GRID_INSTANCES,
    MAX_WITNESSES,
};

/// Parities describing one star node of a quadratic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitContext {
    pub c_odd: bool,
    pub d_odd: bool,
    pub e_odd: bool,
    pub i0: bool,
    pub j0: bool,
    pub alpha: bool,
}

impl SplitContext {
    /// Builds a context from 0/1 values.
    pub fn from_bits(c: i64, d: i64, e: i64, i0: i64, j0: i64, alpha: i64) -> Result<Self> {
        let bit = |v: i64| match v {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(Error::InvalidBit(other)),
        };
        Ok(SplitContext {
            c_odd: bit(c)?,
            d_odd: bit(d)?,
            e_odd: bit(e)?,
            i0: bit(i0)?,
            j0: bit(j0)?,
            alpha: bit(alpha)?,
        })
    }

    /// Context of a star node `cls` of the quadratic `q`.
    pub fn of_node(q: &QuadraticCoefficients, cls: &ResidueClass, alpha: bool) -> Self {
        let odd = |v: &BigInt| v.is_odd();
        SplitContext {
            c_odd: odd(&q.c),
            d_odd: odd(&q.d),
            e_odd: odd(&q.e),
            i0: odd(&cls.rep()[0]),
            j0: odd(&cls.rep()[1]),
            alpha,
        }
    }

    /// All 64 contexts, in increasing order of the bit vector `(c, d, e, i0, j0, α)`.
    pub fn all() -> impl Iterator<Item = SplitContext> {
        (0u8..64).map(|bits| {
            let b = |shift: u8| bits >> shift & 1 == 1;
            SplitContext {
                c_odd: b(5),
                d_odd: b(4),
                e_odd: b(3),
                i0: b(2),
                j0: b(1),
                alpha: b(0),
            }
        })
    }

    /// `α + i_k (c j0 + d) + j_k (c i0 + e) mod 2`.
    pub fn parity(&self, offset: ChildOffset) -> bool {
        let x_coeff = (self.c_odd & self.j0) ^ self.d_odd;
        let y_coeff = (self.c_odd & self.i0) ^ self.e_odd;
        self.alpha ^ (offset.i & x_coeff) ^ (offset.j & y_coeff)
    }
}

impl fmt::Display for SplitContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |v: bool| v as u8;
        write!(
            f,
            "c={} d={} e={} (i0,j0)=({},{}) alpha={}",
            b(self.c_odd),
            b(self.d_odd),
            b(self.e_odd),
            b(self.i0),
            b(self.j0),
            b(self.alpha)
        )
    }
}

/// The new digits `(i_k, j_k)` of a child.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChildOffset {
    pub i: bool,
    pub j: bool,
}

impl ChildOffset {
    pub const fn new(i: bool, j: bool) -> Self {
        ChildOffset { i, j }
    }

    /// The four offsets in tree child order.
    pub const ALL: [ChildOffset; 4] = [
        ChildOffset::new(false, false),
        ChildOffset::new(false, true),
        ChildOffset::new(true, false),
        ChildOffset::new(true, true),
    ];
}

impl fmt::Display for ChildOffset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i as u8, self.j as u8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChildKind {
    Star,
    /// `Terminal(k)` where `k` is the parent level.
    Terminal,
}

impl ChildKind {
    pub fn swapped(self) -> Self {
        match self {
            ChildKind::Star => ChildKind::Terminal,
            ChildKind::Terminal => ChildKind::Star,
        }
    }
}

impl fmt::Display for ChildKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChildKind::Star => "*",
            ChildKind::Terminal => "k",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    /// The label from the parity formula.
    pub kind: ChildKind,
    /// Serial numbers of the table rows matching the context and offset.
    pub serials: Vec<u8>,
    /// The label those rows give after the α swap, when they agree.
    pub table_kind: Option<ChildKind>,
}

/// Classifies one child with the parity formula and reports the table rows
/// that cover the same case.
pub fn classify_child(ctx: SplitContext, offset: ChildOffset) -> Classification {
    let kind = if ctx.parity(offset) {
        ChildKind::Terminal
    } else {
        ChildKind::Star
    };
    let rows = lookup(SPLIT_RULES, ctx, offset);
    let table_kind = table::agreed_kind(&rows, ctx.alpha);
    Classification {
        kind,
        serials: rows.iter().map(|r| r.serial).collect(),
        table_kind,
    }
}

/// The carry bit `α = (f(rep) / 2^level) mod 2` of a 2-adic star node.
pub fn eq_residue_check(f: &Polynomial, node: &ResidueClass) -> Result<bool> {
    if node.p() != Prime::TWO {
        return Err(Error::RequiresTwoAdic);
    }
    let value = f.eval_exact(node.rep())?;
    let m = node.modulus();
    let (quotient, rem) = value.div_mod_floor(&m);
    if !rem.is_zero() {
        return Err(Error::NotStar { level: node.level() });
    }
    Ok(quotient.is_odd())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_poly;

    fn ctx(c: i64, d: i64, e: i64, i0: i64, j0: i64, alpha: i64) -> SplitContext {
        SplitContext::from_bits(c, d, e, i0, j0, alpha).unwrap()
    }

    #[test]
    fn classifier_examples() {
        let r = classify_child(ctx(1, 1, 0, 0, 0, 0), ChildOffset::new(true, false));
        assert_eq!(r.kind, ChildKind::Terminal);
        assert_eq!(r.serials, vec![2]);
        assert_eq!(r.table_kind, Some(ChildKind::Terminal));

        for e in 0..2 {
            for (i0, j0) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let r = classify_child(ctx(0, 0, e, i0, j0, 0), ChildOffset::new(true, false));
                assert_eq!(r.kind, ChildKind::Star);
                assert_eq!(r.serials, vec![7]);
            }
        }

        for c in SplitContext::all().filter(|c| !c.alpha) {
            let r = classify_child(c, ChildOffset::new(false, false));
            assert_eq!(r.kind, ChildKind::Star);
            assert_eq!(r.serials, vec![1]);
        }
    }

    #[test]
    fn alpha_swaps_every_label() {
        for c in SplitContext::all().filter(|c| !c.alpha) {
            let flipped = SplitContext { alpha: true, ..c };
            for off in ChildOffset::ALL {
                assert_eq!(classify_child(c, off).kind.swapped(), classify_child(flipped, off).kind);
            }
        }
    }

    #[test]
    fn star_count_law() {
        for c in SplitContext::all() {
            let stars = ChildOffset::ALL.iter().filter(|&&o| !c.parity(o)).count();
            assert!(matches!(stars, 0 | 2 | 4), "{c}");
            if !c.alpha {
                assert!(stars == 2 || stars == 4, "{c}");
            }
        }
    }

    #[test]
    fn invalid_bits() {
        assert_eq!(SplitContext::from_bits(2, 0, 0, 0, 0, 0), Err(Error::InvalidBit(2)));
        assert_eq!(SplitContext::from_bits(0, 0, 0, 0, 0, -1), Err(Error::InvalidBit(-1)));
    }

    #[test]
    fn carry_bits() {
        let one = BigInt::from(1);
        let node = ResidueClass::of_point(Prime::TWO, 1, &[one.clone(), one]);
        let cases = [("x*y+x+y+1", false), ("x^2+y^2+x*y+x+y+1", true), ("x^2*y+5", true)];
        for (text, alpha) in cases {
            assert_eq!(eq_residue_check(&parse_poly(text).unwrap(), &node), Ok(alpha), "{text}");
        }
        let f = parse_poly("x^2+y^2+1").unwrap();
        assert_eq!(eq_residue_check(&f, &node), Err(Error::NotStar { level: 1 }));
        let node3 = ResidueClass::of_point(Prime::new(3).unwrap(), 1, &[BigInt::from(0), BigInt::from(0)]);
        assert_eq!(eq_residue_check(&f, &node3), Err(Error::RequiresTwoAdic));
        // Negative values divide with floor semantics.
        let g = parse_poly("x-y-2").unwrap();
        let zero = ResidueClass::of_point(Prime::TWO, 1, &[BigInt::from(0), BigInt::from(0)]);
        assert_eq!(eq_residue_check(&g, &zero), Ok(true));
        let h = parse_poly("x-y").unwrap();
        assert_eq!(eq_residue_check(&h, &zero), Ok(false));
    }
}
