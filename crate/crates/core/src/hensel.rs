//! Newton–Hensel lifting for systems of two polynomials in `x, y`.
//!
//! At a point `a` let `v` be the least valuation of the two components and
//! `w = v_p(det J(a))`. The Newton step is
//!
//! ```text
//! a' = a - adj(J(a)) F(a) / det J(a)
//! ```
//!
//! computed as `(adj(J) F / p^w) * u^{-1} mod p^K` with `det J = p^w u`.
//! The correction has valuation at least `v - w` and the new residual at
//! least `2(v - w)`, so the iteration converges once `v > 2w`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{vp, Prime, Valuation};
use crate::polynomial::{jacobian_determinant, Arity, Polynomial};
use crate::valtree::ResidueClass;

/// Newton steps allowed before giving up.
pub const MAX_NEWTON_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    f: Polynomial,
    g: Polynomial,
    fx: Polynomial,
    fy: Polynomial,
    gx: Polynomial,
    gy: Polynomial,
    det: Polynomial,
}

impl PolySystem {
    /// Univariate components are read as polynomials in `x, y`.
    pub fn new(f: &Polynomial, g: &Polynomial) -> Result<Self> {
        let f = f.with_arity(Arity::Two)?;
        let g = g.with_arity(Arity::Two)?;
        let det = jacobian_determinant(&f, &g)?;
        Ok(PolySystem {
            fx: f.partial_x(),
            fy: f.partial_y(),
            gx: g.partial_x(),
            gy: g.partial_y(),
            det,
            f,
            g,
        })
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn g(&self) -> &Polynomial {
        &self.g
    }

    pub fn jacobian_determinant(&self) -> &Polynomial {
        &self.det
    }

    pub fn eval(&self, a: &[BigInt; 2]) -> [BigInt; 2] {
        [
            self.f.eval_exact(a).expect("arity two"),
            self.g.eval_exact(a).expect("arity two"),
        ]
    }

    fn residual_valuation(&self, a: &[BigInt; 2], p: Prime) -> Valuation {
        let [fa, ga] = self.eval(a);
        vp(&fa, p).min(vp(&ga, p))
    }
}

impl fmt::Display for PolySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f, self.g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HenselCondition {
    /// Least valuation of the components at the point.
    pub v: Valuation,
    /// Valuation of the Jacobian determinant at the point.
    pub w: Valuation,
    /// `2v > w`.
    pub holds: bool,
    /// `v > 2w`, the hypothesis under which Newton steps always make progress.
    pub classical: bool,
}

pub fn hensel_condition(sys: &PolySystem, a: &[BigInt; 2], p: Prime) -> HenselCondition {
    let v = sys.residual_valuation(a, p);
    let w = vp(&sys.det.eval_exact(a).expect("arity two"), p);
    let (holds, classical) = match (v, w) {
        (_, Valuation::Infinity) => (false, false),
        (Valuation::Infinity, Valuation::Finite(_)) => (true, true),
        (Valuation::Finite(v), Valuation::Finite(w)) => (2 * v > w, v > 2 * w),
    };
    HenselCondition { v, w, holds, classical }
}

/// One recorded Newton iterate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iterate {
    /// Balanced representative, in `(-p^K / 2, p^K / 2]`.
    pub point: [BigInt; 2],
    pub residual_valuation: Valuation,
    pub jacobian_valuation: Valuation,
    /// Working precision `K` used for the step that produced this iterate.
    pub precision: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HenselCertificate {
    pub p: Prime,
    pub base: [BigInt; 2],
    pub condition: HenselCondition,
    /// Requested precision `N`.
    pub precision: u32,
    /// Residues modulo `p^N` of the lifted root.
    pub approximation: [BigInt; 2],
    /// The last iterate is an exact integer root.
    pub exact_root: bool,
    pub trace: Vec<Iterate>,
}

impl HenselCertificate {
    /// `v_{n+1} >= min(2(v_n - w_n), K_n)` between consecutive iterates.
    pub fn quadratic_progress(&self) -> bool {
        self.trace.windows(2).all(|pair| {
            let (a, b) = (&pair[0], &pair[1]);
            match (a.residual_valuation, a.jacobian_valuation) {
                (Valuation::Finite(v), Valuation::Finite(w)) => {
                    let bound = (2 * v).saturating_sub(2 * w).min(b.precision as u64);
                    b.residual_valuation >= Valuation::Finite(bound)
                }
                _ => true,
            }
        })
    }

    /// Consecutive iterates agree modulo `p^(v_n - w_n)`.
    pub fn cauchy(&self) -> bool {
        self.trace.windows(2).all(|pair| {
            let (a, b) = (&pair[0], &pair[1]);
            match (a.residual_valuation, a.jacobian_valuation) {
                (Valuation::Finite(v), Valuation::Finite(w)) => {
                    let e = v.saturating_sub(w) as u32;
                    let m = self.p.pow(e);
                    a.point
                        .iter()
                        .zip(&b.point)
                        .all(|(x, y)| (x - y).mod_floor(&m).is_zero())
                }
                _ => true,
            }
        })
    }
}

fn balanced(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r + &r > *m {
        r - m
    } else {
        r
    }
}

fn strip(x: &BigInt, p: Prime) -> (u64, BigInt) {
    let v = vp(x, p).finite().expect("nonzero");
    (v, x / p.pow(v as u32))
}

/// Lifts `a` to a root of `sys` modulo `p^target`.
pub fn newton_lift(sys: &PolySystem, a: &[BigInt; 2], p: Prime, target: u32) -> Result<HenselCertificate> {
    newton_lift_from(sys, a, p, target, 0)
}

fn newton_lift_from(sys: &PolySystem, a: &[BigInt; 2], p: Prime, target: u32, level: u32) -> Result<HenselCertificate> {
    let condition = hensel_condition(sys, a, p);
    let (true, Valuation::Finite(w0)) = (condition.holds, condition.w) else {
        let two_v = match condition.v {
            Valuation::Finite(v) => format!("{}", 2 * v),
            Valuation::Infinity => String::from("∞"),
        };
        return Err(Error::HenselConditionViolated {
            two_v,
            w: format!("{}", condition.w),
        });
    };
    let cap = target + w0 as u32;
    let mut precision = (w0 as u32 + 1).max(level).min(cap).max(1);
    let mut point = a.clone();
    let mut trace = alloc::vec![Iterate {
        point: point.clone(),
        residual_valuation: condition.v,
        jacobian_valuation: condition.w,
        precision,
    }];
    let goal = Valuation::Finite(target as u64);
    for _ in 0..MAX_NEWTON_STEPS {
        let last = trace.last().expect("non-empty trace");
        let v = last.residual_valuation;
        if v >= goal {
            let m = p.pow(target);
            let exact = v == Valuation::Infinity;
            return Ok(HenselCertificate {
                p,
                base: a.clone(),
                condition,
                precision: target,
                approximation: [point[0].mod_floor(&m), point[1].mod_floor(&m)],
                exact_root: exact,
                trace,
            });
        }
        let Valuation::Finite(vn) = v else {
            unreachable!("infinite valuation meets every goal")
        };
        let det = sys.det.eval_exact(&point)?;
        if det.is_zero() {
            return Err(Error::NonConvergence {
                target,
                iterations: trace.len() - 1,
            });
        }
        let (w, unit) = strip(&det, p);
        precision = (2 * precision).max(2 * vn as u32).min(cap).max(1);
        let m = p.pow(precision);
        let [fa, ga] = sys.eval(&point);
        let d = [
            &sys.gy.eval_exact(&point)? * &fa - &sys.fy.eval_exact(&point)? * &ga,
            &sys.fx.eval_exact(&point)? * &ga - &sys.gx.eval_exact(&point)? * &fa,
        ];
        let scale = p.pow(w as u32);
        for di in &d {
            if !di.is_zero() && !di.mod_floor(&scale).is_zero() {
                return Err(Error::NonIntegralStep {
                    numerator: vp(di, p).finite().unwrap_or(0),
                    jacobian: w,
                });
            }
        }
        let inv = unit.mod_floor(&m).extended_gcd(&m).x;
        let next = [
            balanced(&(&point[0] - &d[0] / &scale * &inv), &m),
            balanced(&(&point[1] - &d[1] / &scale * &inv), &m),
        ];
        let nv = sys.residual_valuation(&next, p);
        if nv <= v {
            return Err(Error::NonConvergence {
                target,
                iterations: trace.len(),
            });
        }
        point = next;
        trace.push(Iterate {
            point: point.clone(),
            residual_valuation: nv,
            jacobian_valuation: Valuation::Finite(w),
            precision,
        });
    }
    Err(Error::NonConvergence {
        target,
        iterations: MAX_NEWTON_STEPS,
    })
}

/// The auxiliary equation paired with `f` in a branch certificate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `x - r = 0`
    X(BigInt),
    /// `y - s = 0`
    Y(BigInt),
    Custom(Polynomial),
}

impl Constraint {
    pub fn polynomial(&self) -> Polynomial {
        match self {
            Constraint::X(r) => &Polynomial::x(Arity::Two) - &Polynomial::constant(Arity::Two, r.clone()),
            Constraint::Y(s) => &Polynomial::y() - &Polynomial::constant(Arity::Two, s.clone()),
            Constraint::Custom(g) => g.clone(),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.polynomial())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Certified,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub constraint: Constraint,
    pub point: [BigInt; 2],
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchCertificate {
    pub node: ResidueClass,
    pub verdict: Verdict,
    pub constraint: Option<Constraint>,
    pub certificate: Option<HenselCertificate>,
    pub trials: Vec<Trial>,
}

/// Default number of auxiliary lines tried: `2 p^min(level, 4)`.
pub fn default_trial_budget(node: &ResidueClass) -> usize {
    let p = node.p().get() as usize;
    2 * p.pow(node.level().min(4))
}

/// Lifts of `r mod p^level` ordered by absolute value, negative first.
fn lifts(r: &BigInt, p: Prime, level: u32, count: usize) -> Vec<BigInt> {
    let m = p.pow(level);
    let base = balanced(r, &m);
    let mut out = Vec::with_capacity(count);
    let mut lo = base.clone();
    let mut hi = base;
    if lo.is_positive() {
        lo -= &m;
    } else {
        hi += &m;
    }
    while out.len() < count {
        out.push(lo.clone());
        if out.len() < count {
            out.push(hi.clone());
        }
        lo -= &m;
        hi += &m;
    }
    out
}

fn check_star(f: &Polynomial, node: &ResidueClass) -> Result<Polynomial> {
    if f.arity() != Arity::Two || node.rep().len() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: node.rep().len(),
        });
    }
    if node.level() > 0 && !f.eval_mod(node.rep(), &node.modulus())?.is_zero() {
        return Err(Error::NotStar { level: node.level() });
    }
    Ok(f.clone())
}

/// Searches lines `x = r` and `y = s` through the class of `node` for one
/// where the lifting condition holds and lifts to a root inside the class.
pub fn certify_branch(f: &Polynomial, node: &ResidueClass, precision: u32) -> Result<BranchCertificate> {
    certify_branch_with_budget(f, node, precision, default_trial_budget(node))
}

pub fn certify_branch_with_budget(
    f: &Polynomial,
    node: &ResidueClass,
    precision: u32,
    budget: usize,
) -> Result<BranchCertificate> {
    let f = check_star(f, node)?;
    let p = node.p();
    let m = node.modulus();
    let per_axis = budget.div_ceil(2).max(1);
    let rx = lifts(&node.rep()[0], p, node.level(), per_axis);
    let ry = lifts(&node.rep()[1], p, node.level(), per_axis);
    let (bx, by) = (balanced(&node.rep()[0], &m), balanced(&node.rep()[1], &m));
    let candidates = rx
        .into_iter()
        .map(|r| (Constraint::X(r.clone()), [r, by.clone()]))
        .chain(ry.into_iter().map(|s| (Constraint::Y(s.clone()), [bx.clone(), s])))
        .take(budget);
    let mut trials = Vec::new();
    for (constraint, point) in candidates {
        let sys = PolySystem::new(&f, &constraint.polynomial())?;
        match attempt(&sys, node, &point, precision) {
            Ok(cert) => {
                trials.push(Trial {
                    constraint: constraint.clone(),
                    point,
                    outcome: String::from("certified"),
                });
                return Ok(BranchCertificate {
                    node: node.clone(),
                    verdict: Verdict::Certified,
                    constraint: Some(constraint),
                    certificate: Some(cert),
                    trials,
                });
            }
            Err(e) => trials.push(Trial {
                constraint,
                point,
                outcome: format!("{e}"),
            }),
        }
    }
    Ok(BranchCertificate {
        node: node.clone(),
        verdict: Verdict::Unknown,
        constraint: None,
        certificate: None,
        trials,
    })
}

/// Certifies with a caller-chosen auxiliary polynomial, starting from the
/// balanced representative of `node`.
pub fn certify_with(f: &Polynomial, g: &Polynomial, node: &ResidueClass, precision: u32) -> Result<BranchCertificate> {
    let f = check_star(f, node)?;
    let m = node.modulus();
    let point = [balanced(&node.rep()[0], &m), balanced(&node.rep()[1], &m)];
    let sys = PolySystem::new(&f, g)?;
    let constraint = Constraint::Custom(sys.g().clone());
    let result = attempt(&sys, node, &point, precision);
    let outcome = match &result {
        Ok(_) => String::from("certified"),
        Err(e) => format!("{e}"),
    };
    let trials = alloc::vec![Trial {
        constraint: constraint.clone(),
        point,
        outcome,
    }];
    Ok(match result {
        Ok(cert) => BranchCertificate {
            node: node.clone(),
            verdict: Verdict::Certified,
            constraint: Some(constraint),
            certificate: Some(cert),
            trials,
        },
        Err(_) => BranchCertificate {
            node: node.clone(),
            verdict: Verdict::Unknown,
            constraint: None,
            certificate: None,
            trials,
        },
    })
}

fn attempt(sys: &PolySystem, node: &ResidueClass, point: &[BigInt; 2], precision: u32) -> Result<HenselCertificate> {
    let target = precision.max(node.level());
    let cert = if sys.eval(point).iter().all(Zero::is_zero) {
        exact_certificate(sys, point, node.p(), target)
    } else {
        newton_lift_from(sys, point, node.p(), target, node.level())?
    };
    let m = node.modulus();
    let inside = cert
        .approximation
        .iter()
        .zip(node.rep())
        .all(|(x, r)| x.mod_floor(&m) == *r);
    if !inside {
        return Err(Error::Inconsistent(String::from("lifted root leaves the class")));
    }
    if precision < target {
        return Err(Error::PrecisionShortfall {
            available: precision,
            requested: target,
        });
    }
    Ok(cert)
}

/// An exact integer root needs no lifting, even where the Jacobian vanishes.
fn exact_certificate(sys: &PolySystem, point: &[BigInt; 2], p: Prime, target: u32) -> HenselCertificate {
    let condition = hensel_condition(sys, point, p);
    let m = p.pow(target);
    HenselCertificate {
        p,
        base: point.clone(),
        condition,
        precision: target,
        approximation: [point[0].mod_floor(&m), point[1].mod_floor(&m)],
        exact_root: true,
        trace: alloc::vec![Iterate {
            point: point.clone(),
            residual_valuation: condition.v,
            jacobian_valuation: condition.w,
            precision: target,
        }],
    }
}

/// The first `count` base-`p` digits of each coordinate, least significant first.
pub fn digits_of_root(cert: &HenselCertificate, count: u32) -> Result<[Vec<u32>; 2]> {
    if count > cert.precision {
        return Err(Error::PrecisionShortfall {
            available: cert.precision,
            requested: count,
        });
    }
    let p = BigInt::from(cert.p.get());
    let digits = |x: &BigInt| {
        let mut x = x.mod_floor(&cert.p.pow(count));
        (0..count)
            .map(|_| {
                let (q, r) = x.div_mod_floor(&p);
                x = q;
                u32::try_from(&r).expect("digit below p")
            })
            .collect::<Vec<u32>>()
    };
    Ok([digits(&cert.approximation[0]), digits(&cert.approximation[1])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_poly;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn sys(f: &str, g: &str) -> PolySystem {
        PolySystem::new(&parse_poly(f).unwrap(), &parse_poly(g).unwrap()).unwrap()
    }

    fn pt(x: i64, y: i64) -> [BigInt; 2] {
        [int(x), int(y)]
    }

    #[test]
    fn condition_examples() {
        let s = sys("x^2*y+5", "x+1");
        let c = hensel_condition(&s, &pt(1, 1), Prime::TWO);
        assert_eq!((c.v, c.w, c.holds), (Valuation::Finite(1), Valuation::Finite(0), true));
        let c = hensel_condition(&s, &pt(0, 0), Prime::TWO);
        assert_eq!(c.v, Valuation::Finite(0));
        assert!(!c.holds);
        let c = hensel_condition(&sys("x", "y"), &pt(0, 0), Prime::TWO);
        assert_eq!((c.v, c.w, c.holds), (Valuation::Infinity, Valuation::Finite(0), true));
    }

    #[test]
    fn lifts_to_known_roots() {
        let m = Prime::TWO.pow(64);
        let cert = newton_lift(&sys("x^2*y+5", "x+1"), &pt(1, 1), Prime::TWO, 64).unwrap();
        assert_eq!(cert.approximation, [int(-1).mod_floor(&m), int(-5).mod_floor(&m)]);
        assert!(cert.exact_root && cert.quadratic_progress() && cert.cauchy());
        let cert = newton_lift(&sys("x^2*y+5", "y+5"), &pt(1, 1), Prime::TWO, 64).unwrap();
        assert_eq!(cert.approximation, [int(1), int(-5).mod_floor(&m)]);
        let cert = newton_lift(&sys("x+1", "y-1"), &pt(1, 1), Prime::TWO, 10).unwrap();
        assert_eq!(cert.approximation, [int(1023), int(1)]);
        assert_eq!(cert.trace.len(), 2);
    }

    #[test]
    fn lifts_irrational_root() {
        // x^2 = -7 has two roots in Z_2; start from 1 with the line y = 0.
        let s = sys("x^2+7+y", "y");
        let cert = newton_lift(&s, &pt(1, 0), Prime::TWO, 40).unwrap();
        assert_eq!(
            (cert.condition.v, cert.condition.w),
            (Valuation::Finite(3), Valuation::Finite(1))
        );
        let m = Prime::TWO.pow(40);
        let x = &cert.approximation[0];
        assert!((x * x + BigInt::from(7)).mod_floor(&m).is_zero());
        assert!(cert.quadratic_progress() && cert.cauchy());
        assert!(!cert.exact_root);
    }

    #[test]
    fn violated_condition_is_an_error() {
        let s = sys("x^2*y+5", "x+1");
        assert!(matches!(
            newton_lift(&s, &pt(0, 0), Prime::TWO, 8),
            Err(Error::HenselConditionViolated { .. })
        ));
    }

    #[test]
    fn branch_certificates() {
        let node = ResidueClass::of_point(Prime::TWO, 1, &pt(1, 1));
        let b = certify_branch(&parse_poly("x^2*y+5").unwrap(), &node, 64).unwrap();
        assert_eq!(b.verdict, Verdict::Certified);
        assert_eq!(b.constraint, Some(Constraint::X(int(-1))));
        assert_eq!(b.constraint.as_ref().unwrap().to_string(), "x+1");
        let m = Prime::TWO.pow(64);
        assert_eq!(
            b.certificate.unwrap().approximation,
            [int(-1).mod_floor(&m), int(-5).mod_floor(&m)]
        );

        let b = certify_branch(&parse_poly("x*y+x+y+1").unwrap(), &node, 32).unwrap();
        assert_eq!(b.verdict, Verdict::Certified);
        assert_eq!(b.constraint, Some(Constraint::X(int(-1))));
        assert!(b.certificate.unwrap().exact_root);

        let f = parse_poly("x^2+y^2+x*y+x+y+1").unwrap();
        for budget in [1, 2, 4, 16, 64] {
            let b = certify_branch_with_budget(&f, &node, 16, budget).unwrap();
            assert_eq!(b.verdict, Verdict::Unknown);
            assert_eq!(b.trials.len(), budget);
        }
    }

    #[test]
    fn non_star_nodes_are_rejected() {
        let node = ResidueClass::of_point(Prime::TWO, 1, &pt(0, 0));
        assert_eq!(
            certify_branch(&parse_poly("x^2*y+5").unwrap(), &node, 8).map(|b| b.verdict),
            Err(Error::NotStar { level: 1 })
        );
    }

    #[test]
    fn digit_expansion() {
        let cert = newton_lift(&sys("x^2*y+5", "x+1"), &pt(1, 1), Prime::TWO, 6).unwrap();
        let [x, y] = digits_of_root(&cert, 6).unwrap();
        assert_eq!(x, vec![1, 1, 1, 1, 1, 1]);
        assert_eq!(y, vec![1, 1, 0, 1, 1, 1]);
        let cert = newton_lift(&sys("x^2*y+5", "y+5"), &pt(1, 1), Prime::TWO, 3).unwrap();
        assert_eq!(digits_of_root(&cert, 3).unwrap(), [vec![1, 0, 0], vec![1, 1, 0]]);
        let cert = newton_lift(&sys("x", "y"), &pt(0, 0), Prime::TWO, 5).unwrap();
        assert_eq!(digits_of_root(&cert, 5).unwrap(), [vec![0; 5], vec![0; 5]]);
        assert_eq!(
            digits_of_root(&cert, 6),
            Err(Error::PrecisionShortfall {
                available: 5,
                requested: 6
            })
        );
    }
}
