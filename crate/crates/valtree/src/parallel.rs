//! Parallel drivers. Results are merged in grid order, so reports do not
//! depend on scheduling.

use rayon::prelude::*;
use valtree_core::splitting::{
    assemble_split_report, check_theorem, quadratic_grid, verify_quadratic, SplitRule, TheoremId, TheoremParams,
    TheoremReport, SPLIT_RULES,
};
use valtree_core::Result;

pub fn verify_split_rules(lo: i64, hi: i64, depth: u32, table: &[SplitRule]) -> Result<TheoremReport> {
    let grid: Vec<_> = quadratic_grid(lo, hi)?.collect();
    let outcomes = grid
        .par_iter()
        .map(|q| verify_quadratic(q, depth, table))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_split_report(lo, hi, depth, table, outcomes))
}

/// [`check_theorem`] with the coefficient grid spread over the thread pool.
pub fn check(theorem: TheoremId, depth: u32, params: &TheoremParams) -> Result<TheoremReport> {
    match (theorem, params) {
        (TheoremId::GeneralQuadratic, TheoremParams::Range { lo, hi }) => {
            verify_split_rules(*lo, *hi, depth, SPLIT_RULES)
        }
        (TheoremId::GeneralQuadratic, _) => verify_split_rules(-2, 2, depth, SPLIT_RULES),
        _ => check_theorem(theorem, depth, params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_matches_sequential() {
        let seq = valtree_core::splitting::verify_split_rules(-1, 1, 4, SPLIT_RULES).unwrap();
        let par = verify_split_rules(-1, 1, 4, SPLIT_RULES).unwrap();
        assert_eq!(seq, par);
    }
}
