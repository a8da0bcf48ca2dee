//! Exhaustive checkers for the splitting statements about 2-adic trees.
//!
//! Every checker builds the relevant trees and compares the stated split
//! pattern with the labels computed by modular evaluation. Failures carry
//! the polynomial, the node, the observed labels and the claimed labels.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::table::{agreed_kind, cross_validate, lookup, SplitRule, SPLIT_RULES};
use super::{eq_residue_check, ChildKind, ChildOffset, SplitContext};
use crate::error::{Error, Result};
use crate::padic::{vp, Prime, Valuation};
use crate::polynomial::{parse_poly, Polynomial, QuadraticCoefficients};
use crate::valtree::{build_tree, LabelingMode, NodeLabel, ResidueClass, TreeNode, ValuationTree};

/// Upper bound on the number of quadratics in one grid.
pub const MAX_GRID_INSTANCES: usize = 1 << 21;

/// Witnesses kept per report; further failures are only counted.
pub const MAX_WITNESSES: usize = 256;

const ORACLE_POINTS: usize = 10_000;
const ORACLE_SEED: u64 = 0x7e57_0dd5;
const ORACLE_SPAN: i64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// `n^2 + 7`: every deep star has one terminal and one star child.
    NSquaredPlusSeven,
    /// `x^2 + y^2`: descent below nodes whose lower digits vanish.
    SumOfSquares,
    /// `x^2 + y^2 + xy + x + y`: two-and-two splits.
    MixedQuadratic,
    /// `xy + x + y + 1`: splits governed by the root residue and the carry.
    ProductOfShifts,
    /// `2^n α x^2 + 2^m β y^2`: descent shifted by `min(n, m)`.
    ScaledSumOfSquares,
    /// General quadratic: parity classifier against brute force.
    GeneralQuadratic,
    /// `x^2 y + 5`: two-and-two splits below a three-terminal root.
    SquareTimesYPlusFive,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::NSquaredPlusSeven,
        TheoremId::SumOfSquares,
        TheoremId::MixedQuadratic,
        TheoremId::ProductOfShifts,
        TheoremId::ScaledSumOfSquares,
        TheoremId::GeneralQuadratic,
        TheoremId::SquareTimesYPlusFive,
    ];

    /// The identifier used on the command line and in reports.
    pub fn id(self) -> &'static str {
        match self {
            TheoremId::NSquaredPlusSeven => "1.3",
            TheoremId::SumOfSquares => "2.2",
            TheoremId::MixedQuadratic => "2.4",
            TheoremId::ProductOfShifts => "2.6",
            TheoremId::ScaledSumOfSquares => "4.1",
            TheoremId::GeneralQuadratic => "5.1",
            TheoremId::SquareTimesYPlusFive => "6.1",
        }
    }

    pub fn parse(id: &str) -> Option<TheoremId> {
        TheoremId::ALL.into_iter().find(|t| t.id() == id)
    }

    /// The fixed polynomial, for the statements about a single polynomial.
    pub fn polynomial(self) -> Option<&'static str> {
        match self {
            TheoremId::NSquaredPlusSeven => Some("n^2+7"),
            TheoremId::SumOfSquares => Some("x^2+y^2"),
            TheoremId::MixedQuadratic => Some("x^2+y^2+x*y+x+y"),
            TheoremId::ProductOfShifts => Some("x*y+x+y+1"),
            TheoremId::SquareTimesYPlusFive => Some("x^2*y+5"),
            TheoremId::ScaledSumOfSquares | TheoremId::GeneralQuadratic => None,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// `a = 2^n α`, `b = 2^m β` with `α`, `β` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScaledParams {
    pub n: u32,
    pub m: u32,
    pub alpha: i64,
    pub beta: i64,
}

impl ScaledParams {
    pub fn new(n: u32, m: u32, alpha: i64, beta: i64) -> Result<Self> {
        if alpha % 2 == 0 || beta % 2 == 0 || n > 32 || m > 32 {
            return Err(Error::InvalidRange);
        }
        Ok(ScaledParams { n, m, alpha, beta })
    }

    pub fn gamma(&self) -> u32 {
        self.n.min(self.m)
    }

    pub fn polynomial(&self) -> Polynomial {
        let a = BigInt::from(self.alpha) << self.n as usize;
        let b = BigInt::from(self.beta) << self.m as usize;
        QuadraticCoefficients {
            a,
            b,
            c: BigInt::zero(),
            d: BigInt::zero(),
            e: BigInt::zero(),
            g: BigInt::zero(),
        }
        .to_polynomial()
    }

    /// `(n, m) ∈ {0,1,2}^2`, `α, β ∈ {1, 3}`.
    pub fn default_grid() -> Vec<ScaledParams> {
        let mut grid = Vec::with_capacity(36);
        for n in 0..3 {
            for m in 0..3 {
                for alpha in [1, 3] {
                    for beta in [1, 3] {
                        grid.push(ScaledParams { n, m, alpha, beta });
                    }
                }
            }
        }
        grid
    }
}

impl fmt::Display for ScaledParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={} alpha={} beta={}", self.n, self.m, self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremParams {
    Default,
    Scaled(ScaledParams),
    Range { lo: i64, hi: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    /// The checked claim (or, for general quadratics, the parity formula)
    /// disagrees with the tree.
    Claim,
    /// The rule table disagrees with the tree.
    Table,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub polynomial: Polynomial,
    pub node: ResidueClass,
    pub rule: String,
    pub observed: String,
    pub claimed: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: node {} of {}: observed {}, claimed {}",
            self.rule, self.node, self.polynomial, self.observed, self.claimed
        )
    }
}

/// How many children of each checked star node are stars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SplitCounts {
    pub four_star: usize,
    pub two_star: usize,
    pub no_star: usize,
    pub other: usize,
}

impl SplitCounts {
    fn record(&mut self, stars: usize) {
        match stars {
            4 => self.four_star += 1,
            2 => self.two_star += 1,
            0 => self.no_star += 1,
            _ => self.other += 1,
        }
    }

    fn add(&mut self, other: &SplitCounts) {
        self.four_star += other.four_star;
        self.two_star += other.two_star;
        self.no_star += other.no_star;
        self.other += other.other;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub params: Vec<(&'static str, String)>,
    pub depth: u32,
    pub instances_checked: usize,
    pub nodes_checked: usize,
    pub splits: SplitCounts,
    pub claim_failures: usize,
    pub table_failures: usize,
    /// The first [`MAX_WITNESSES`] failures of each kind.
    pub failures: Vec<Witness>,
    /// Nodes the claim was asserted at, for the single-polynomial statements.
    pub cited: Vec<ResidueClass>,
    pub notes: Vec<String>,
}

impl TheoremReport {
    fn new(theorem: TheoremId, depth: u32) -> Self {
        TheoremReport {
            theorem,
            params: Vec::new(),
            depth,
            instances_checked: 0,
            nodes_checked: 0,
            splits: SplitCounts::default(),
            claim_failures: 0,
            table_failures: 0,
            failures: Vec::new(),
            cited: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.claim_failures == 0 && self.table_failures == 0
    }

    fn fail(&mut self, witness: Witness) {
        let count = match witness.kind {
            WitnessKind::Claim => &mut self.claim_failures,
            WitnessKind::Table => &mut self.table_failures,
        };
        *count += 1;
        if *count <= MAX_WITNESSES {
            self.failures.push(witness);
        }
    }

    fn claim(&mut self, f: &Polynomial, node: &ResidueClass, rule: String, observed: String, claimed: String) {
        self.fail(Witness {
            kind: WitnessKind::Claim,
            polynomial: f.clone(),
            node: node.clone(),
            rule,
            observed,
            claimed,
        });
    }
}

fn label_list(node: &TreeNode) -> String {
    let labels: Vec<String> = node.children.iter().map(|c| c.label.to_string()).collect();
    format!("[{}]", labels.join(", "))
}

fn star_count(node: &TreeNode) -> usize {
    node.children.iter().filter(|c| c.label.is_star()).count()
}

fn terminal(v: u64) -> NodeLabel {
    NodeLabel::Terminal(Valuation::Finite(v))
}

/// Checks one statement at the given depth.
pub fn check_theorem(theorem: TheoremId, depth: u32, params: &TheoremParams) -> Result<TheoremReport> {
    match theorem {
        TheoremId::NSquaredPlusSeven => check_n_squared_plus_seven(depth),
        TheoremId::SumOfSquares => {
            let mut report = TheoremReport::new(theorem, depth);
            let f = parse_poly("x^2+y^2")?;
            check_descent(&mut report, &f, 0, "")?;
            Ok(report)
        }
        TheoremId::ScaledSumOfSquares => {
            let grid = match params {
                TheoremParams::Scaled(p) => alloc::vec![*p],
                _ => ScaledParams::default_grid(),
            };
            let mut report = TheoremReport::new(theorem, depth);
            match params {
                TheoremParams::Scaled(p) => report.params = scaled_params(p),
                _ => report
                    .params
                    .push(("grid", "n,m in {0,1,2}; alpha,beta in {1,3}".into())),
            }
            for p in &grid {
                check_descent(&mut report, &p.polynomial(), p.gamma(), &format!("{p}: "))?;
            }
            Ok(report)
        }
        TheoremId::MixedQuadratic => check_two_two(theorem, depth, 3),
        TheoremId::SquareTimesYPlusFive => check_two_two(theorem, depth, 1),
        TheoremId::ProductOfShifts => check_product_of_shifts(depth),
        TheoremId::GeneralQuadratic => {
            let (lo, hi) = match params {
                TheoremParams::Range { lo, hi } => (*lo, *hi),
                _ => (-2, 2),
            };
            verify_split_rules(lo, hi, depth, SPLIT_RULES)
        }
    }
}

fn scaled_params(p: &ScaledParams) -> Vec<(&'static str, String)> {
    alloc::vec![
        ("n", p.n.to_string()),
        ("m", p.m.to_string()),
        ("alpha", p.alpha.to_string()),
        ("beta", p.beta.to_string()),
    ]
}

fn congruence_tree(f: &Polynomial, depth: u32) -> Result<ValuationTree> {
    build_tree(f, Prime::TWO, depth, LabelingMode::Congruence)
}

/// One terminal child with valuation `k + 1` and one star child below every
/// star at level `k`, asserted from the first level where it holds.
fn check_n_squared_plus_seven(depth: u32) -> Result<TheoremReport> {
    let mut report = TheoremReport::new(TheoremId::NSquaredPlusSeven, depth);
    report.params.push(("mode", "constancy".into()));
    let f = parse_poly("n^2+7")?;
    let tree = build_tree(&f, Prime::TWO, depth, LabelingMode::Constancy)?;
    report.instances_checked = 1;

    let holds = |node: &TreeNode| {
        let k = node.level() as u64;
        let terminals = node.children.iter().filter(|c| c.label == terminal(k + 1)).count();
        terminals == 1 && star_count(node) == 1
    };
    let parents: Vec<&TreeNode> = tree
        .nodes()
        .filter(|n| n.level() > 0 && n.label.is_star() && !n.is_leaf())
        .collect();
    let max_level = parents.iter().map(|n| n.level()).max().unwrap_or(0);
    let mut start = None;
    for level in 1..=max_level {
        let at: Vec<&&TreeNode> = parents.iter().filter(|n| n.level() == level).collect();
        let ok = at.iter().filter(|n| holds(n)).count();
        report.notes.push(format!(
            "level {level}: {ok} of {} star nodes split as claimed",
            at.len()
        ));
        if start.is_none() && ok == at.len() {
            start = Some(level);
        }
    }
    let stated = parents
        .iter()
        .filter(|n| n.children.iter().any(|c| c.label == terminal(n.level() as u64)))
        .count();
    report.notes.push(format!(
        "terminal children carry valuation k+1 for a star at level k; {stated} nodes show valuation k"
    ));
    let Some(start) = start else {
        report.claim(
            &f,
            &tree.root().class,
            "one terminal and one star child".into(),
            "no level satisfies the pattern".into(),
            "pattern from some level on".into(),
        );
        return Ok(report);
    };
    report.params.push(("from_level", start.to_string()));
    for node in parents.into_iter().filter(|n| n.level() >= start) {
        report.nodes_checked += 1;
        report.cited.push(node.class.clone());
        if !holds(node) {
            let k = node.level() as u64;
            report.claim(
                &f,
                &node.class,
                "one terminal and one star child".into(),
                label_list(node),
                format!("one of {} and one *", k + 1),
            );
        }
    }
    Ok(report)
}

/// Root split into `root_stars` stars (the rest `Terminal(0)`), then two
/// stars and two `Terminal(k)` below every star at level `k >= 1`.
fn check_two_two(theorem: TheoremId, depth: u32, root_stars: usize) -> Result<TheoremReport> {
    let mut report = TheoremReport::new(theorem, depth);
    let f = parse_poly(theorem.polynomial().expect("fixed polynomial"))?;
    let tree = congruence_tree(&f, depth)?;
    report.instances_checked = 1;
    let root = tree.root();
    let root_ok = star_count(root) == root_stars
        && root
            .children
            .iter()
            .all(|c| c.label.is_star() || c.label == terminal(0));
    report.nodes_checked += 1;
    report.cited.push(root.class.clone());
    if !root_ok {
        report.claim(
            &f,
            &root.class,
            "root split".into(),
            label_list(root),
            format!("{root_stars} * and {} 0", 4 - root_stars),
        );
    }
    for node in tree
        .nodes()
        .filter(|n| n.level() > 0 && n.label.is_star() && !n.is_leaf())
    {
        let k = node.level() as u64;
        report.nodes_checked += 1;
        report.cited.push(node.class.clone());
        report.splits.record(star_count(node));
        let ok = star_count(node) == 2
            && node
                .children
                .iter()
                .all(|c| c.label.is_star() || c.label == terminal(k));
        if !ok {
            report.claim(
                &f,
                &node.class,
                "two-and-two split".into(),
                label_list(node),
                format!("2 * and 2 {k}"),
            );
        }
    }
    Ok(report)
}

fn check_product_of_shifts(depth: u32) -> Result<TheoremReport> {
    let theorem = TheoremId::ProductOfShifts;
    let mut report = TheoremReport::new(theorem, depth);
    let f = parse_poly(theorem.polynomial().expect("fixed polynomial"))?;
    let tree = congruence_tree(&f, depth)?;
    report.instances_checked = 1;
    report.notes.push(format!(
        "root children: {} (the (0,0) class is terminal, so not every root child is a star)",
        label_list(tree.root())
    ));
    for node in tree
        .nodes()
        .filter(|n| n.level() > 0 && n.label.is_star() && !n.is_leaf())
    {
        let k = node.level() as u64;
        report.nodes_checked += 1;
        report.cited.push(node.class.clone());
        report.splits.record(star_count(node));
        let rep = node.class.rep();
        let odd_odd = rep.iter().all(|r| r.bit(0));
        let (ok, claimed) = if odd_odd {
            let alpha = eq_residue_check(&f, &node.class)?;
            if alpha {
                (
                    node.children.iter().all(|c| c.label == terminal(k)),
                    format!("4 {k} (alpha = 1)"),
                )
            } else {
                (star_count(node) == 4, "4 * (alpha = 0)".to_string())
            }
        } else {
            let ok = star_count(node) == 2
                && node
                    .children
                    .iter()
                    .all(|c| c.label.is_star() || c.label == terminal(k));
            (ok, format!("2 * and 2 {k}"))
        };
        if !ok {
            report.claim(&f, &node.class, "root-residue split".into(), label_list(node), claimed);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    let one = BigInt::one();
    for _ in 0..ORACLE_POINTS {
        let x = BigInt::from(rng.gen_range(-ORACLE_SPAN..ORACLE_SPAN));
        let y = BigInt::from(rng.gen_range(-ORACLE_SPAN..ORACLE_SPAN));
        let point = [x.clone(), y.clone()];
        let exact = vp(&f.eval_exact(&point)?, Prime::TWO);
        let factored = vp(&(&x + &one), Prime::TWO) + vp(&(&y + &one), Prime::TWO);
        let node = tree.locate(&point);
        let consistent = match node.label {
            NodeLabel::Terminal(v) => v == exact,
            NodeLabel::Star => exact >= Valuation::Finite(node.level() as u64),
        };
        if exact != factored || !consistent {
            report.claim(
                &f,
                &ResidueClass::of_point(Prime::TWO, node.level(), &point),
                format!("factorization oracle at ({x}, {y})"),
                format!("v = {exact}, node label {}", node.label),
                format!("v = {factored}"),
            );
        }
    }
    report
        .notes
        .push(format!("factorization oracle: {ORACLE_POINTS} random points"));
    Ok(report)
}

/// Descent below nodes `v` at level `k` whose representative is
/// `2^(k-1) (i, j)`: stars to level `s`, then `Terminal(s)` at level `s + 1`,
/// with `s = 2k + γ - 1` for `(i, j) = (1, 1)` and `2k + γ - 2` for a single
/// odd digit. For `(0, 0)` all four children are stars.
fn check_descent(report: &mut TheoremReport, f: &Polynomial, gamma: u32, prefix: &str) -> Result<()> {
    let depth = report.depth;
    let tree = congruence_tree(f, depth)?;
    report.instances_checked += 1;
    for v in tree.nodes().filter(|n| n.level() > 0) {
        let k = v.level();
        let half = BigInt::one() << (k - 1) as usize;
        let digit = |r: &BigInt| {
            if r.is_zero() {
                Some(false)
            } else if *r == half {
                Some(true)
            } else {
                None
            }
        };
        let (Some(i), Some(j)) = (digit(&v.class.rep()[0]), digit(&v.class.rep()[1])) else {
            continue;
        };
        let (k64, g64) = (k as u64, gamma as u64);
        match (i, j) {
            (false, false) => {
                if v.is_leaf() {
                    continue;
                }
                report.nodes_checked += 1;
                report.cited.push(v.class.clone());
                if star_count(v) != 4 {
                    report.claim(f, &v.class, format!("{prefix}zero digits"), label_list(v), "4 *".into());
                }
            }
            _ => {
                let s = if i && j { 2 * k64 + g64 - 1 } else { 2 * k64 + g64 - 2 };
                let rule = format!("{prefix}descent from ({},{})", i as u8, j as u8);
                report.nodes_checked += 1;
                report.cited.push(v.class.clone());
                descend(report, f, v, k64, s, &rule);
            }
        }
    }
    Ok(())
}

fn descend(report: &mut TheoremReport, f: &Polynomial, v: &TreeNode, k: u64, s: u64, rule: &str) {
    let t = s + 1;
    if let NodeLabel::Terminal(label) = v.label {
        if label != Valuation::Finite(s) {
            report.claim(
                f,
                &v.class,
                rule.into(),
                format!("{label} at level {k}"),
                format!("valuation {s}"),
            );
        }
        return;
    }
    if t <= k {
        report.claim(f, &v.class, rule.into(), "*".into(), format!("{s} at level {k}"));
        return;
    }
    for w in v.descendants().filter(|w| (k + 1..=t).contains(&(w.level() as u64))) {
        let l = w.level() as u64;
        report.nodes_checked += 1;
        if l <= s && !w.label.is_star() {
            report.claim(f, &w.class, rule.into(), w.label.to_string(), format!("* at level {l}"));
        } else if l == t && w.label != terminal(s) {
            report.claim(
                f,
                &w.class,
                rule.into(),
                w.label.to_string(),
                format!("{s} at level {l}"),
            );
        }
    }
}

/// Per-quadratic result of the split-rule verifier.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InstanceOutcome {
    pub nodes_checked: usize,
    pub splits: SplitCounts,
    /// Star nodes above level 1 whose children are all terminal.
    pub all_terminal_above_one: usize,
    pub failures: Vec<Witness>,
}

/// All quadratics with every coefficient in `lo..=hi`, in lexicographic
/// order of `(a, b, c, d, e, g)`.
pub fn quadratic_grid(lo: i64, hi: i64) -> Result<impl Iterator<Item = QuadraticCoefficients>> {
    if lo > hi {
        return Err(Error::InvalidRange);
    }
    let width = (hi - lo + 1) as u64;
    let count = width
        .checked_pow(6)
        .filter(|&c| c <= MAX_GRID_INSTANCES as u64)
        .ok_or(Error::InvalidRange)?;
    Ok((0..count).map(move |mut idx| {
        let mut c = [0i64; 6];
        for slot in c.iter_mut().rev() {
            *slot = lo + (idx % width) as i64;
            idx /= width;
        }
        QuadraticCoefficients::new(c[0], c[1], c[2], c[3], c[4], c[5])
    }))
}

/// Compares the parity formula and `table` with the child labels of every
/// star node (level `>= 1`) of the tree of `q`.
pub fn verify_quadratic(q: &QuadraticCoefficients, depth: u32, table: &[SplitRule]) -> Result<InstanceOutcome> {
    let f = q.to_polynomial();
    let tree = congruence_tree(&f, depth)?;
    let mut out = InstanceOutcome::default();
    for node in tree
        .nodes()
        .filter(|n| n.level() > 0 && n.label.is_star() && !n.is_leaf())
    {
        let k = node.level() as u64;
        let alpha = eq_residue_check(&f, &node.class)?;
        let ctx = SplitContext::of_node(q, &node.class, alpha);
        out.nodes_checked += 1;
        let stars = star_count(node);
        out.splits.record(stars);
        if stars == 0 && k > 1 {
            out.all_terminal_above_one += 1;
        }
        for (child, offset) in node.children.iter().zip(ChildOffset::ALL) {
            let actual = match child.label {
                NodeLabel::Star => Some(ChildKind::Star),
                l if l == terminal(k) => Some(ChildKind::Terminal),
                _ => None,
            };
            let formula = if ctx.parity(offset) {
                ChildKind::Terminal
            } else {
                ChildKind::Star
            };
            let observed = child.label.to_string();
            let show = |kind: ChildKind| match kind {
                ChildKind::Star => "*".to_string(),
                ChildKind::Terminal => k.to_string(),
            };
            if actual != Some(formula) {
                out.failures.push(Witness {
                    kind: WitnessKind::Claim,
                    polynomial: f.clone(),
                    node: child.class.clone(),
                    rule: format!("parity formula, {ctx}, offset {offset}"),
                    observed: observed.clone(),
                    claimed: show(formula),
                });
            }
            let rows = lookup(table, ctx, offset);
            let table_kind = agreed_kind(&rows, alpha);
            if actual.is_none() || actual != table_kind {
                let serials: Vec<String> = rows.iter().map(|r| r.serial.to_string()).collect();
                out.failures.push(Witness {
                    kind: WitnessKind::Table,
                    polynomial: f.clone(),
                    node: child.class.clone(),
                    rule: format!("table rows [{}], {ctx}, offset {offset}", serials.join(", ")),
                    observed,
                    claimed: table_kind.map_or_else(|| "no unique row".to_string(), show),
                });
            }
        }
    }
    Ok(out)
}

/// Merges per-instance outcomes, in grid order, into one report.
pub fn assemble_split_report(
    lo: i64,
    hi: i64,
    depth: u32,
    table: &[SplitRule],
    outcomes: impl IntoIterator<Item = InstanceOutcome>,
) -> TheoremReport {
    let mut report = TheoremReport::new(TheoremId::GeneralQuadratic, depth);
    report.params.push(("lo", lo.to_string()));
    report.params.push(("hi", hi.to_string()));
    let mut all_terminal = 0;
    for outcome in outcomes {
        report.instances_checked += 1;
        report.nodes_checked += outcome.nodes_checked;
        report.splits.add(&outcome.splits);
        all_terminal += outcome.all_terminal_above_one;
        for w in outcome.failures {
            report.fail(w);
        }
    }
    report.notes.push(format!(
        "split shapes: {} all star, {} two star, {} no star",
        report.splits.four_star, report.splits.two_star, report.splits.no_star
    ));
    report.notes.push(format!(
        "{all_terminal} star nodes above level 1 split into four terminal children"
    ));
    let discrepancies = cross_validate(table);
    if !discrepancies.is_empty() {
        let mut serials: Vec<u8> = discrepancies.iter().flat_map(|d| d.serials.iter().copied()).collect();
        serials.sort_unstable();
        serials.dedup();
        report.notes.push(format!(
            "table disagrees with the parity formula on {} of 256 cases (rows {:?})",
            discrepancies.len(),
            serials
        ));
    }
    report
}

/// Sequential split-rule verification over the coefficient grid `lo..=hi`.
pub fn verify_split_rules(lo: i64, hi: i64, depth: u32, table: &[SplitRule]) -> Result<TheoremReport> {
    let outcomes = quadratic_grid(lo, hi)?
        .map(|q| verify_quadratic(&q, depth, table))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_split_report(lo, hi, depth, table, outcomes))
}
