use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{NodeLabel, ResidueClass, ValuationTree};
use crate::padic::{vp, Valuation};

/// Sample members are `rep + p^level * t` with `0 <= t < 2^SAMPLE_SPAN_BITS`.
pub const SAMPLE_SPAN_BITS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A sampled member of a terminal class has a different valuation.
    TerminalMismatch {
        class: ResidueClass,
        member: Vec<BigInt>,
        expected: Valuation,
        observed: Valuation,
    },
    /// A star class whose representative is not a root modulo `p^level`.
    StarNotZero { class: ResidueClass, residue: BigInt },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SampleReport {
    pub terminal_nodes: usize,
    pub star_nodes: usize,
    pub samples: usize,
    pub violations: Vec<Violation>,
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-checks every label of `tree` against direct evaluation.
///
/// Terminal nodes are probed at `samples_per_leaf` random members; star nodes
/// are re-evaluated at their representative. The RNG is seeded, so reports
/// are reproducible.
pub fn sample_check(tree: &ValuationTree, samples_per_leaf: usize, seed: u64) -> SampleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = tree.polynomial();
    let mut report = SampleReport::default();
    for node in tree.nodes().filter(|n| n.level() > 0) {
        let class = &node.class;
        match node.label {
            NodeLabel::Star => {
                report.star_nodes += 1;
                let residue = f.eval_mod(class.rep(), &class.modulus()).expect("tree arity");
                if !residue.is_zero() {
                    report.violations.push(Violation::StarNotZero {
                        class: class.clone(),
                        residue,
                    });
                }
            }
            NodeLabel::Terminal(expected) => {
                report.terminal_nodes += 1;
                let step = class.modulus();
                for _ in 0..samples_per_leaf {
                    let member: Vec<BigInt> = class
                        .rep()
                        .iter()
                        .map(|r| r + &step * BigInt::from(rng.gen_range(0u32..1 << SAMPLE_SPAN_BITS)))
                        .collect();
                    let observed = vp(&f.eval_exact(&member).expect("tree arity"), class.p());
                    report.samples += 1;
                    if observed != expected {
                        report.violations.push(Violation::TerminalMismatch {
                            class: class.clone(),
                            member,
                            expected,
                            observed,
                        });
                    }
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedFormReport {
    /// Every class resolved: `v_p(f) < bound` everywhere, with `bound` one
    /// more than the largest terminal valuation.
    Bounded {
        bound: u64,
        cases: Vec<(ResidueClass, u64)>,
    },
    /// Star classes survive at the maximum depth.
    Unresolved { depth: u32, fringe: Vec<ResidueClass> },
    /// `f` is the zero polynomial.
    IdenticallyZero,
}

/// Decides whether the built tree already yields a finite case analysis.
pub fn closed_form_report(tree: &ValuationTree) -> ClosedFormReport {
    let fringe: Vec<ResidueClass> = tree
        .nodes()
        .filter(|n| n.depth_capped)
        .map(|n| n.class.clone())
        .collect();
    if !fringe.is_empty() {
        return ClosedFormReport::Unresolved {
            depth: tree.max_depth(),
            fringe,
        };
    }
    let mut cases = Vec::new();
    for node in tree.nodes() {
        match node.label {
            NodeLabel::Terminal(Valuation::Finite(v)) => cases.push((node.class.clone(), v)),
            NodeLabel::Terminal(Valuation::Infinity) => return ClosedFormReport::IdenticallyZero,
            NodeLabel::Star => {}
        }
    }
    let bound = 1 + cases.iter().map(|(_, v)| *v).max().unwrap_or(0);
    ClosedFormReport::Bounded { bound, cases }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Prime;
    use crate::polynomial::parse_poly;
    use crate::valtree::{build_tree, LabelingMode};

    fn tree(text: &str, depth: u32, mode: LabelingMode) -> ValuationTree {
        build_tree(&parse_poly(text).unwrap(), Prime::TWO, depth, mode).unwrap()
    }

    #[test]
    fn golden_trees_have_no_violations() {
        let t = tree("x^2+y^2+x*y+x+y+1", 2, LabelingMode::Congruence);
        let report = sample_check(&t, 100, 7);
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.samples, 100 * report.terminal_nodes);

        let t = tree("x^2+y^2", 4, LabelingMode::Congruence);
        assert!(sample_check(&t, 50, 1).passed());

        let t = tree("n^2+7", 12, LabelingMode::Constancy);
        assert!(sample_check(&t, 200, 3).passed());
    }

    #[test]
    fn corrupted_label_is_detected() {
        let mut t = tree("x^2+y^2+x*y+x+y+1", 2, LabelingMode::Congruence);
        let one = BigInt::from(1);
        let node = t.find_mut(1, &[one.clone(), one]).unwrap();
        node.label = NodeLabel::Terminal(Valuation::Finite(2));
        node.children.clear();
        let report = sample_check(&t, 10, 0);
        assert!(!report.passed());
        assert!(matches!(
            report.violations[0],
            Violation::TerminalMismatch {
                expected: Valuation::Finite(2),
                ..
            }
        ));
    }

    #[test]
    fn corrupted_star_is_detected() {
        let mut t = tree("x^2+y^2", 3, LabelingMode::Congruence);
        let node = t.find_mut(1, &[BigInt::from(0), BigInt::from(1)]).unwrap();
        node.label = NodeLabel::Star;
        assert!(matches!(
            sample_check(&t, 1, 0).violations[..],
            [Violation::StarNotZero { .. }]
        ));
    }

    #[test]
    fn closed_forms() {
        let t = tree("x^2+y^2+x*y+x+y+1", 2, LabelingMode::Congruence);
        match closed_form_report(&t) {
            ClosedFormReport::Bounded { bound, cases } => {
                assert_eq!(bound, 2);
                assert_eq!(cases.len(), 7);
            }
            other => panic!("{other:?}"),
        }
        let t = tree("x^2+y^2", 8, LabelingMode::Congruence);
        match closed_form_report(&t) {
            ClosedFormReport::Unresolved { depth, fringe } => {
                assert_eq!(depth, 8);
                assert!(!fringe.is_empty());
                assert!(fringe.iter().all(|c| c.level() == 8));
            }
            other => panic!("{other:?}"),
        }
        let t = tree("n^2+5", 2, LabelingMode::Constancy);
        assert!(matches!(
            closed_form_report(&t),
            ClosedFormReport::Bounded { bound: 2, .. }
        ));
        let t = tree("0", 2, LabelingMode::Constancy);
        assert_eq!(closed_form_report(&t), ClosedFormReport::IdenticallyZero);
    }
}
