//! JSON views of solver results, oracle results and certificate reports.
//! Rationals as strings; money and ratio values additionally carry a
//! 6-significant-digit decimal convenience field. Output is deterministic.

use serde_json::{json, Value};

use vchc_core::assignment::DemandAssignment;
use vchc_core::certify::CertificateReport;
use vchc_core::cover::AugmentedRun;
use vchc_core::oracle::OracleResult;
use vchc_core::primal_dual::DualSolution;
use vchc_core::rational::{rat_to_decimal, rat_to_string, Rat};

fn money(value: &Rat) -> (String, String) {
    (rat_to_string(value), rat_to_decimal(value, 6))
}

fn assignment_json(h: &DemandAssignment) -> Value {
    let entries: Vec<Value> = h
        .iter()
        .map(|(e, v, amount)| json!({"edge": e, "vertex": v, "amount": rat_to_string(amount)}))
        .collect();
    Value::Array(entries)
}

fn dual_json(dual: &DualSolution) -> Value {
    json!({
        "y": dual.y.iter().map(rat_to_string).collect::<Vec<_>>(),
        "z": dual.z.iter().map(rat_to_string).collect::<Vec<_>>(),
        "eta": dual.eta.iter().map(rat_to_string).collect::<Vec<_>>(),
        "g": dual
            .g
            .iter()
            .map(|(&(e, v), value)| json!({
                "edge": e,
                "vertex": v,
                "value": rat_to_string(value),
            }))
            .collect::<Vec<_>>(),
    })
}

pub fn certificate_json(report: &CertificateReport) -> Value {
    json!({
        "overall": report.overall(),
        "checks": report
            .checks
            .iter()
            .map(|c| json!({
                "name": c.name,
                "status": c.status.as_str(),
                "detail": c.detail,
            }))
            .collect::<Vec<_>>(),
    })
}

/// The solve subcommand's output document. `include_moves` adds the
/// reassignment move log; `certificate` embeds the verification report.
pub fn cover_result_json(
    run: &AugmentedRun,
    include_moves: bool,
    certificate: Option<&CertificateReport>,
) -> Value {
    let cover = &run.cover;
    let (cost, cost_dec) = money(&cover.cost);
    let (bound, bound_dec) = money(&cover.dual_lower_bound);
    let (ratio, ratio_dec) = money(&cover.guaranteed_ratio);
    let mut doc = json!({
        "k": cover.k,
        "f": cover.f,
        "cost": cost,
        "cost_decimal": cost_dec,
        "guaranteed_ratio": ratio,
        "guaranteed_ratio_decimal": ratio_dec,
        "dual_lower_bound": bound,
        "dual_lower_bound_decimal": bound_dec,
        "multiplicities": cover.multiplicities,
        "assignment": assignment_json(&cover.assignment),
        "pending_history": cover.pending_history.iter().collect::<Vec<_>>(),
        "dual": dual_json(&cover.dual),
    });
    let obj = doc.as_object_mut().expect("document is an object");
    if include_moves {
        obj.insert(
            "moves".into(),
            Value::Array(
                cover
                    .moves
                    .iter()
                    .map(|m| {
                        json!({
                            "edge": m.edge,
                            "donor": m.donor,
                            "receiver": m.receiver,
                            "amount": rat_to_string(&m.amount),
                        })
                    })
                    .collect(),
            ),
        );
    }
    if let Some(report) = certificate {
        obj.insert("certificate".into(), certificate_json(report));
    }
    doc
}

pub fn oracle_result_json(result: &OracleResult) -> Value {
    match &result.opt_cost {
        None => json!({ "feasible": false }),
        Some(cost) => {
            let (opt, opt_dec) = money(cost);
            json!({
                "feasible": true,
                "opt_cost": opt,
                "opt_cost_decimal": opt_dec,
                "witness_x": result.witness_x,
                "witness_h": assignment_json(&result.witness_h),
            })
        }
    }
}

/// Pretty-printed document with a trailing newline; byte-deterministic.
pub fn to_output_string(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("reports serialize");
    out.push('\n');
    out
}
