//! Valuation trees of univariate and bivariate integer polynomials.
//!
//! A node at level `l` is a residue class modulo `p^l` (one residue per
//! variable). Its children refine the class by one more base-`p` digit per
//! variable. A node is labelled `Terminal(v)` when `v_p(f)` is known to be
//! the constant `v` on the class, and `Star` otherwise.
//!
//! Two labelling rules are supported:
//!
//! * [`LabelingMode::Congruence`]: `Terminal(v_p(f(rep)))` iff
//!   `f(rep) ≢ 0 (mod p^l)`. Every terminal label is exact because all class
//!   members agree with `rep` modulo `p^l`.
//! * [`LabelingMode::Constancy`]: integer Taylor expansion around `rep`,
//!   `f(rep + p^l h) = Σ_t D_t f(rep) p^{l|t|} h^t` with Hasse derivatives
//!   `D_t`. If `v = v_p(f(rep))` is below `min_{|t|≥1} (l|t| + v_p(D_t f(rep)))`
//!   then the constant term dominates every member of the class and the
//!   label is `Terminal(v)`. This can terminate a class before the
//!   congruence rule does (e.g. `n^2 + 5` at `1 mod 2`).

mod check;
mod stirling;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{vp, Prime, Valuation};
use crate::polynomial::{Arity, Polynomial, ReducedPolynomial};

pub use check::{closed_form_report, sample_check, ClosedFormReport, SampleReport, Violation, SAMPLE_SPAN_BITS};
pub use stirling::{stirling_class_explorer, LevelCount, StirlingExplorerReport, MIN_CLASS_MEMBERS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelingMode {
    Congruence,
    Constancy,
}

impl LabelingMode {
    /// Constancy for univariate, congruence for bivariate polynomials.
    pub fn default_for(arity: Arity) -> Self {
        match arity {
            Arity::One => LabelingMode::Constancy,
            Arity::Two => LabelingMode::Congruence,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LabelingMode::Congruence => "congruence",
            LabelingMode::Constancy => "constancy",
        }
    }
}

/// A residue class modulo `p^level`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    p: Prime,
    level: u32,
    rep: Vec<BigInt>,
}

impl ResidueClass {
    /// The whole of `Z` or `Z^2`: level 0, representative all zeros.
    pub fn root(p: Prime, arity: Arity) -> Self {
        ResidueClass {
            p,
            level: 0,
            rep: vec![BigInt::zero(); arity.vars()],
        }
    }

    /// The class of `point` modulo `p^level`.
    pub fn of_point(p: Prime, level: u32, point: &[BigInt]) -> Self {
        let m = p.pow(level);
        ResidueClass {
            p,
            level,
            rep: point.iter().map(|v| v.mod_floor(&m)).collect(),
        }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Representative residues, each in `[0, p^level)`.
    pub fn rep(&self) -> &[BigInt] {
        &self.rep
    }

    pub fn arity(&self) -> Arity {
        if self.rep.len() == 1 {
            Arity::One
        } else {
            Arity::Two
        }
    }

    pub fn modulus(&self) -> BigInt {
        self.p.pow(self.level)
    }

    /// The child obtained by appending one base-`p` digit per coordinate.
    pub fn child(&self, digits: &[u32]) -> ResidueClass {
        debug_assert_eq!(digits.len(), self.rep.len());
        let step = self.modulus();
        ResidueClass {
            p: self.p,
            level: self.level + 1,
            rep: self
                .rep
                .iter()
                .zip(digits)
                .map(|(r, &d)| r + &step * BigInt::from(d))
                .collect(),
        }
    }

    /// All `p` or `p^2` children, in lexicographic order of the new digits.
    pub fn children(&self) -> Vec<ResidueClass> {
        let p = self.p.get();
        match self.rep.len() {
            1 => (0..p).map(|i| self.child(&[i])).collect(),
            _ => (0..p)
                .flat_map(|i| (0..p).map(move |j| [i, j]))
                .map(|d| self.child(&d))
                .collect(),
        }
    }

    /// The base-`p` digit of each coordinate at position `index` (`< level`).
    pub fn digits_at(&self, index: u32) -> Vec<u32> {
        let div = self.p.pow(index);
        let p = BigInt::from(self.p.get());
        self.rep
            .iter()
            .map(|r| {
                let d: BigInt = (r / &div) % &p;
                u32::try_from(&d).expect("digit below p")
            })
            .collect()
    }

    pub fn contains(&self, point: &[BigInt]) -> bool {
        let m = self.modulus();
        point.len() == self.rep.len() && point.iter().zip(&self.rep).all(|(v, r)| v.mod_floor(&m) == *r)
    }

    /// Stable identifier `n<level>_<rep joined by '_'>`.
    pub fn node_id(&self) -> alloc::string::String {
        use core::fmt::Write;
        let mut id = alloc::format!("n{}", self.level);
        for r in &self.rep {
            let _ = write!(id, "_{r}");
        }
        id
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            return f.write_str("root");
        }
        match self.rep.as_slice() {
            [x] => write!(f, "{x} mod {}^{}", self.p, self.level),
            [x, y] => write!(f, "({x},{y}) mod {}^{}", self.p, self.level),
            _ => unreachable!("arity is 1 or 2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeLabel {
    Star,
    Terminal(Valuation),
}

impl NodeLabel {
    pub fn is_star(self) -> bool {
        matches!(self, NodeLabel::Star)
    }

    pub fn terminal(self) -> Option<Valuation> {
        match self {
            NodeLabel::Terminal(v) => Some(v),
            NodeLabel::Star => None,
        }
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeLabel::Star => f.write_str("*"),
            NodeLabel::Terminal(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub class: ResidueClass,
    pub label: NodeLabel,
    /// A star node at the maximum depth whose children were not built.
    pub depth_capped: bool,
    /// `f(rep) = 0` exactly; every class containing `rep` stays a star.
    pub exact_zero: bool,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn level(&self) -> u32 {
        self.class.level
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Preorder traversal of this subtree, including `self`.
    pub fn descendants(&self) -> impl Iterator<Item = &TreeNode> {
        let mut stack = vec![self];
        core::iter::from_fn(move || {
            let node = stack.pop()?;
            stack.extend(node.children.iter().rev());
            Some(node)
        })
    }
}

/// Resource limits for [`build_tree_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeConfig {
    pub node_budget: usize,
    pub univariate_depth_cap: u32,
    pub bivariate_depth_cap: u32,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            node_budget: 10_000_000,
            univariate_depth_cap: 64,
            bivariate_depth_cap: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationTree {
    p: Prime,
    polynomial: Polynomial,
    mode: LabelingMode,
    max_depth: u32,
    root: TreeNode,
}

impl ValuationTree {
    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.polynomial
    }

    pub fn arity(&self) -> Arity {
        self.polynomial.arity()
    }

    pub fn mode(&self) -> LabelingMode {
        self.mode
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    /// Preorder traversal of every node, root first.
    pub fn nodes(&self) -> impl Iterator<Item = &TreeNode> {
        self.root.descendants()
    }

    pub fn node_count(&self) -> usize {
        self.nodes().count()
    }

    /// The node for the class of `rep` at `level`, if it was built.
    pub fn find(&self, level: u32, rep: &[BigInt]) -> Option<&TreeNode> {
        let target = ResidueClass::of_point(self.p, level, rep);
        let mut node = &self.root;
        while node.level() < level {
            node = node.children.iter().find(|c| c.class.contains(target.rep()))?;
        }
        (node.class == target).then_some(node)
    }

    /// Mutable access to a built node. Intended for fault-injection tests of
    /// the checkers; a modified tree no longer satisfies the build invariants.
    pub fn find_mut(&mut self, level: u32, rep: &[BigInt]) -> Option<&mut TreeNode> {
        let target = ResidueClass::of_point(self.p, level, rep);
        let mut node = &mut self.root;
        while node.level() < level {
            node = node.children.iter_mut().find(|c| c.class.contains(target.rep()))?;
        }
        (node.class == target).then_some(node)
    }

    /// The deepest built node whose class contains `point`.
    pub fn locate(&self, point: &[BigInt]) -> &TreeNode {
        let mut node = &self.root;
        while let Some(next) = node.children.iter().find(|c| c.class.contains(point)) {
            node = next;
        }
        node
    }
}

/// Labels nodes of one polynomial, caching derivatives and reduced forms.
pub(crate) struct Labeler<'a> {
    f: &'a Polynomial,
    mode: LabelingMode,
    derivatives: Vec<(u64, Polynomial)>,
    reduced: Vec<Option<ReducedPolynomial>>,
}

impl<'a> Labeler<'a> {
    pub(crate) fn new(f: &'a Polynomial, mode: LabelingMode) -> Self {
        let mut derivatives = Vec::new();
        if mode == LabelingMode::Constancy {
            let max_x = f.terms().map(|(m, _)| m.x).max().unwrap_or(0);
            let max_y = f.terms().map(|(m, _)| m.y).max().unwrap_or(0);
            for tx in 0..=max_x {
                for ty in 0..=max_y {
                    if tx + ty == 0 {
                        continue;
                    }
                    let d = f.hasse_derivative(tx, ty);
                    if !d.is_zero() {
                        derivatives.push(((tx + ty) as u64, d));
                    }
                }
            }
        }
        Labeler {
            f,
            mode,
            derivatives,
            reduced: Vec::new(),
        }
    }

    fn reduced_at(&mut self, cls: &ResidueClass) -> &ReducedPolynomial {
        let level = cls.level as usize;
        if self.reduced.len() <= level {
            self.reduced.resize(level + 1, None);
        }
        let f = self.f;
        self.reduced[level].get_or_insert_with(|| f.reduce_mod(&cls.modulus()))
    }

    /// Label and exact-zero flag of a class at level `>= 1`.
    pub(crate) fn label(&mut self, cls: &ResidueClass) -> (NodeLabel, bool) {
        match self.mode {
            LabelingMode::Congruence => {
                let residue = self.reduced_at(cls).eval(cls.rep());
                if residue.is_zero() {
                    let exact = self.f.eval_exact(cls.rep()).expect("arity checked at build");
                    (NodeLabel::Star, exact.is_zero())
                } else {
                    (NodeLabel::Terminal(vp(&residue, cls.p)), false)
                }
            }
            LabelingMode::Constancy => {
                let value = self.f.eval_exact(cls.rep()).expect("arity checked at build");
                if self.f.is_zero() {
                    return (NodeLabel::Terminal(Valuation::Infinity), true);
                }
                let v = vp(&value, cls.p);
                let level = cls.level as u64;
                let bound = self
                    .derivatives
                    .iter()
                    .map(|(order, d)| {
                        let dv = d.eval_exact(cls.rep()).expect("arity checked at build");
                        vp(&dv, cls.p).shift(level * order)
                    })
                    .min()
                    .unwrap_or(Valuation::Infinity);
                let label = if v < bound {
                    NodeLabel::Terminal(v)
                } else {
                    NodeLabel::Star
                };
                (label, value.is_zero())
            }
        }
    }
}

/// Labels a single class (`level >= 1`) of `f`.
pub fn label_node(f: &Polynomial, cls: &ResidueClass, mode: LabelingMode) -> Result<NodeLabel> {
    if cls.rep.len() != f.arity().vars() {
        return Err(Error::ArityMismatch {
            expected: f.arity().vars(),
            found: cls.rep.len(),
        });
    }
    Ok(Labeler::new(f, mode).label(cls).0)
}

/// Builds the tree of `f` to `depth` levels with the default limits.
pub fn build_tree(f: &Polynomial, p: Prime, depth: u32, mode: LabelingMode) -> Result<ValuationTree> {
    build_tree_with(f, p, depth, mode, &TreeConfig::default())
}

pub fn build_tree_with(
    f: &Polynomial,
    p: Prime,
    depth: u32,
    mode: LabelingMode,
    config: &TreeConfig,
) -> Result<ValuationTree> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    let cap = match f.arity() {
        Arity::One => config.univariate_depth_cap,
        Arity::Two => config.bivariate_depth_cap,
    };
    if depth > cap {
        return Err(Error::DepthCapExceeded { depth, cap });
    }
    let mut labeler = Labeler::new(f, mode);
    let mut count = 1usize;
    let mut root = TreeNode {
        class: ResidueClass::root(p, f.arity()),
        label: NodeLabel::Star,
        depth_capped: false,
        exact_zero: f.eval_exact(&vec![BigInt::zero(); f.arity().vars()])?.is_zero(),
        children: Vec::new(),
    };
    expand(&mut root, &mut labeler, depth, config.node_budget, &mut count)?;
    Ok(ValuationTree {
        p,
        polynomial: f.clone(),
        mode,
        max_depth: depth,
        root,
    })
}

fn expand(node: &mut TreeNode, labeler: &mut Labeler<'_>, depth: u32, budget: usize, count: &mut usize) -> Result<()> {
    let children = node.class.children();
    *count += children.len();
    if *count > budget {
        return Err(Error::NodeBudgetExceeded(budget));
    }
    node.children.reserve(children.len());
    for class in children {
        let (label, exact_zero) = labeler.label(&class);
        let mut child = TreeNode {
            class,
            label,
            depth_capped: false,
            exact_zero,
            children: Vec::new(),
        };
        if label.is_star() {
            if child.level() < depth {
                expand(&mut child, labeler, depth, budget, count)?;
            } else {
                child.depth_capped = true;
            }
        }
        node.children.push(child);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_poly;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn labels(node: &TreeNode) -> Vec<NodeLabel> {
        node.children.iter().map(|c| c.label).collect()
    }

    const T0: NodeLabel = NodeLabel::Terminal(Valuation::Finite(0));
    const T1: NodeLabel = NodeLabel::Terminal(Valuation::Finite(1));
    const STAR: NodeLabel = NodeLabel::Star;

    #[test]
    fn label_examples() {
        let f = parse_poly("x^2+5").unwrap();
        let cls = ResidueClass::of_point(Prime::TWO, 1, &[int(1)]);
        assert_eq!(label_node(&f, &cls, LabelingMode::Constancy).unwrap(), T1);
        // The congruence rule cannot terminate this class at level 1.
        assert_eq!(label_node(&f, &cls, LabelingMode::Congruence).unwrap(), STAR);

        let g = parse_poly("x^2+y^2+x*y+x+y+1").unwrap();
        let cls = ResidueClass::of_point(Prime::TWO, 1, &[int(1), int(1)]);
        assert_eq!(label_node(&g, &cls, LabelingMode::Congruence).unwrap(), STAR);

        let h = parse_poly("n^2+7").unwrap();
        let cls = ResidueClass::of_point(Prime::TWO, 3, &[int(1)]);
        assert_eq!(
            label_node(&h, &cls, LabelingMode::Constancy).unwrap(),
            NodeLabel::Terminal(Valuation::Finite(3))
        );
        // Brute-force oracle: every member 1 + 8t has v_2 = 3.
        for t in 0..1000i64 {
            let n = 1 + 8 * t;
            let v = vp(&int(n * n + 7), Prime::TWO);
            assert_eq!(v, Valuation::Finite(3), "n = {n}");
        }
    }

    #[test]
    fn univariate_example_tree() {
        let f = parse_poly("n^2+5").unwrap();
        let tree = build_tree(&f, Prime::TWO, 2, LabelingMode::Constancy).unwrap();
        assert_eq!(labels(tree.root()), vec![T0, T1]);
        assert_eq!(tree.node_count(), 3);
    }

    #[test]
    fn bivariate_example_tree() {
        let f = parse_poly("x^2+y^2+x*y+x+y+1").unwrap();
        let tree = build_tree(&f, Prime::TWO, 2, LabelingMode::Congruence).unwrap();
        let root = tree.root();
        assert_eq!(labels(root), vec![T0, T0, T0, STAR]);
        assert_eq!(labels(&root.children[3]), vec![T1; 4]);
        assert!(root.children[3].children.iter().all(|c| c.is_leaf() && !c.depth_capped));
    }

    #[test]
    fn cubic_root_split() {
        let f = parse_poly("x^2*y+5").unwrap();
        let tree = build_tree(&f, Prime::TWO, 1, LabelingMode::Congruence).unwrap();
        assert_eq!(labels(tree.root()), vec![T0, T0, T0, STAR]);
        assert!(tree.root().children[3].depth_capped);
        let reps: Vec<_> = tree.root().children.iter().map(|c| c.class.rep().to_vec()).collect();
        assert_eq!(
            reps,
            vec![
                vec![int(0), int(0)],
                vec![int(0), int(1)],
                vec![int(1), int(0)],
                vec![int(1), int(1)]
            ]
        );
    }

    #[test]
    fn exact_zero_annotation() {
        let f = parse_poly("x*y+x+y+1").unwrap();
        let tree = build_tree(&f, Prime::TWO, 3, LabelingMode::Congruence).unwrap();
        // f(7, 7) = 64 vanishes mod 8 but is not an exact zero.
        let zero_line = tree.find(3, &[int(7), int(7)]).unwrap();
        assert!(!zero_line.exact_zero);
        let g = parse_poly("x-y").unwrap();
        let tree = build_tree(&g, Prime::TWO, 3, LabelingMode::Congruence).unwrap();
        let diag = tree.find(3, &[int(5), int(5)]).unwrap();
        assert!(diag.exact_zero && diag.label.is_star() && diag.depth_capped);
    }

    #[test]
    fn budgets_and_caps() {
        let f = parse_poly("x^2+y^2").unwrap();
        let small = TreeConfig {
            node_budget: 50,
            ..TreeConfig::default()
        };
        assert_eq!(
            build_tree_with(&f, Prime::TWO, 8, LabelingMode::Congruence, &small),
            Err(Error::NodeBudgetExceeded(50))
        );
        assert_eq!(
            build_tree(&f, Prime::TWO, 25, LabelingMode::Congruence),
            Err(Error::DepthCapExceeded { depth: 25, cap: 24 })
        );
        assert_eq!(
            build_tree(&f, Prime::TWO, 0, LabelingMode::Congruence),
            Err(Error::ZeroDepth)
        );
    }

    #[test]
    fn odd_prime_tree_partitions_classes() {
        let f = parse_poly("x^2+y^2+1").unwrap();
        let p = Prime::new(3).unwrap();
        let tree = build_tree(&f, p, 3, LabelingMode::Congruence).unwrap();
        for node in tree.nodes().filter(|n| !n.is_leaf()) {
            assert_eq!(node.children.len(), 9);
            let parent_m = node.class.modulus();
            for c in &node.children {
                assert!(c
                    .class
                    .rep()
                    .iter()
                    .zip(node.class.rep())
                    .all(|(a, b)| a.mod_floor(&parent_m) == *b));
            }
        }
    }

    #[test]
    fn locate_descends_to_leaf() {
        let f = parse_poly("x^2+y^2").unwrap();
        let tree = build_tree(&f, Prime::TWO, 4, LabelingMode::Congruence).unwrap();
        let node = tree.locate(&[int(13), int(6)]);
        assert_eq!(node.label, T0);
        assert_eq!(node.level(), 1);
        let node = tree.locate(&[int(0), int(0)]);
        assert_eq!(node.level(), 4);
        assert!(node.depth_capped && node.exact_zero);
    }

    #[test]
    fn digits_and_ids() {
        let cls = ResidueClass::of_point(Prime::TWO, 3, &[int(5), int(6)]);
        assert_eq!(cls.digits_at(0), vec![1, 0]);
        assert_eq!(cls.digits_at(2), vec![1, 1]);
        assert_eq!(cls.node_id(), "n3_5_6");
        assert_eq!(ResidueClass::root(Prime::TWO, Arity::One).node_id(), "n0_0");
    }

    #[test]
    fn zero_polynomial_constancy() {
        let f = Polynomial::zero(Arity::One);
        let tree = build_tree(&f, Prime::TWO, 3, LabelingMode::Constancy).unwrap();
        assert!(tree
            .root()
            .children
            .iter()
            .all(|c| c.label == NodeLabel::Terminal(Valuation::Infinity)));
    }
}
