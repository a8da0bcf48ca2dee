//! JSON documents for theorem reports, root certificates and the other
//! analyses exposed by the command line.

use serde_json::{json, Map, Number, Value};
use valtree_core::hensel::{BranchCertificate, HenselCertificate, Iterate, Verdict};
use valtree_core::padic::Valuation;
use valtree_core::splitting::{TheoremReport, Witness, WitnessKind};
use valtree_core::valtree::{ClosedFormReport, ResidueClass, SampleReport, StirlingExplorerReport, Violation};
use valtree_core::BigInt;

pub const THEOREM_SCHEMA: &str = "padic-theoremreport/1";
pub const HENSEL_SCHEMA: &str = "padic-hensel/1";

/// A JSON number holding an arbitrary-size integer.
pub fn int(v: &BigInt) -> Value {
    Value::Number(v.to_string().parse::<Number>().expect("integers are JSON numbers"))
}

pub fn valuation(v: Valuation) -> Value {
    match v {
        Valuation::Finite(v) => json!(v),
        Valuation::Infinity => json!("infinity"),
    }
}

pub fn class(c: &ResidueClass) -> Value {
    json!({
        "level": c.level(),
        "rep": c.rep().iter().map(int).collect::<Vec<_>>(),
    })
}

fn witness(w: &Witness) -> Value {
    json!({
        "kind": match w.kind { WitnessKind::Claim => "claim", WitnessKind::Table => "table" },
        "polynomial": w.polynomial.to_string(),
        "node": class(&w.node),
        "rule": w.rule,
        "observed": w.observed,
        "claimed": w.claimed,
    })
}

pub fn theorem_report(r: &TheoremReport) -> Value {
    let params: Map<String, Value> = r.params.iter().map(|(k, v)| ((*k).to_string(), json!(v))).collect();
    json!({
        "schema": THEOREM_SCHEMA,
        "theorem_id": r.theorem.id(),
        "params": params,
        "depth": r.depth,
        "passed": r.passed(),
        "instances_checked": r.instances_checked,
        "nodes_checked": r.nodes_checked,
        "claim_failures": r.claim_failures,
        "table_failures": r.table_failures,
        "splits": {
            "four_star": r.splits.four_star,
            "two_star": r.splits.two_star,
            "no_star": r.splits.no_star,
            "other": r.splits.other,
        },
        "failures": r.failures.iter().map(witness).collect::<Vec<_>>(),
        "cited": r.cited.iter().map(class).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

fn iterate(it: &Iterate) -> Value {
    json!({
        "point": it.point.iter().map(int).collect::<Vec<_>>(),
        "residual_valuation": valuation(it.residual_valuation),
        "jacobian_valuation": valuation(it.jacobian_valuation),
        "precision": it.precision,
    })
}

pub fn hensel_certificate(c: &HenselCertificate) -> Value {
    json!({
        "p": c.p.get(),
        "base": c.base.iter().map(int).collect::<Vec<_>>(),
        "v": valuation(c.condition.v),
        "w": valuation(c.condition.w),
        "condition_holds": c.condition.holds,
        "classical_condition": c.condition.classical,
        "precision": c.precision,
        "approximation": c.approximation.iter().map(int).collect::<Vec<_>>(),
        "exact_root": c.exact_root,
        "quadratic_progress": c.quadratic_progress(),
        "cauchy": c.cauchy(),
        "trace": c.trace.iter().map(iterate).collect::<Vec<_>>(),
    })
}

pub fn branch_certificate(b: &BranchCertificate) -> Value {
    json!({
        "schema": HENSEL_SCHEMA,
        "node": class(&b.node),
        "verdict": match b.verdict { Verdict::Certified => "certified", Verdict::Unknown => "unknown" },
        "constraint": b.constraint.as_ref().map(|c| c.to_string()),
        "certificate": b.certificate.as_ref().map(hensel_certificate),
        "trials": b.trials.iter().map(|t| json!({
            "constraint": t.constraint.to_string(),
            "point": t.point.iter().map(int).collect::<Vec<_>>(),
            "outcome": t.outcome,
        })).collect::<Vec<_>>(),
    })
}

pub fn closed_form(r: &ClosedFormReport) -> Value {
    match r {
        ClosedFormReport::Bounded { bound, cases } => json!({
            "result": "bounded",
            "bound": bound,
            "cases": cases.iter().map(|(c, v)| json!({"class": class(c), "valuation": v})).collect::<Vec<_>>(),
        }),
        ClosedFormReport::Unresolved { depth, fringe } => json!({
            "result": "unresolved",
            "depth": depth,
            "fringe": fringe.iter().map(class).collect::<Vec<_>>(),
        }),
        ClosedFormReport::IdenticallyZero => json!({"result": "identically_zero"}),
    }
}

pub fn stirling(r: &StirlingExplorerReport) -> Value {
    json!({
        "evidence": "empirical",
        "k": r.k,
        "p": r.p.get(),
        "n_max": r.n_max,
        "levels": r.levels.iter().map(|l| json!({
            "level": l.level,
            "classes": l.classes,
            "non_terminal": l.non_terminal,
            "non_terminal_residues": l.non_terminal_residues,
        })).collect::<Vec<_>>(),
        "stable_from": r.stable_from,
        "stable_count": r.stable_count,
        "stabilized": r.stabilized(),
    })
}

pub fn sample(r: &SampleReport) -> Value {
    json!({
        "terminal_nodes": r.terminal_nodes,
        "star_nodes": r.star_nodes,
        "samples": r.samples,
        "violations": r.violations.iter().map(|v| match v {
            Violation::TerminalMismatch { class: c, member, expected, observed } => json!({
                "kind": "terminal_mismatch",
                "class": class(c),
                "member": member.iter().map(int).collect::<Vec<_>>(),
                "expected": valuation(*expected),
                "observed": valuation(*observed),
            }),
            Violation::StarNotZero { class: c, residue } => json!({
                "kind": "star_not_zero",
                "class": class(c),
                "residue": int(residue),
            }),
        }).collect::<Vec<_>>(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use valtree_core::padic::Prime;

    #[test]
    fn big_integers_stay_exact() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(
            serde_json::to_string(&int(&big)).unwrap(),
            "123456789012345678901234567890"
        );
        assert_eq!(valuation(Valuation::Infinity), json!("infinity"));
    }

    #[test]
    fn class_shape() {
        let c = ResidueClass::of_point(Prime::TWO, 3, &[BigInt::from(-1), BigInt::from(5)]);
        assert_eq!(class(&c), json!({"level": 3, "rep": [7, 5]}));
    }
}
