//! LP text exporters for the primal relaxation and its dual, in the common
//! LP file format, for cross-checking with external solvers.
//!
//! Variable naming is stable: `x_v<i>` (multiplicity of vertex `i`),
//! `h_e<j>_v<i>` (demand of edge `j` assigned to vertex `i`), `y_e<j>`,
//! `z_v<i>`, `g_e<j>_v<i>`, `eta_v<i>`.
//!
//! Primal rows: `cover_e<j>` (demand coverage), `cap_v<i>` (received demand
//! within selected capacity), `link_e<j>_v<i>` (no assignment without a
//! selected unit); multiplicity caps go to the `Bounds` section. Rows that
//! are trivially true (capacity rows of isolated vertices) are omitted.
//!
//! Coefficients are written as exact decimals when the expansion
//! terminates; otherwise they are rounded to 30 fractional digits (nearest,
//! ties away from zero) and the row is preceded by a comment carrying the
//! exact fraction. External LP solvers are float-based, so the export is a
//! cross-check aid, not a proof artifact.

use std::fmt::Write as _;

use vchc_core::num_bigint::BigInt;
use vchc_core::num_integer::Integer;
use vchc_core::num_traits::{Signed, Zero};

use vchc_core::instance::Instance;
use vchc_core::rational::{rat_decimal_exact, Rat};

const ROUNDING_DIGITS: usize = 30;

/// Decimal form for LP output plus the exact fraction when rounding was
/// needed.
fn coefficient(value: &Rat) -> (String, Option<String>) {
    if let Some(exact) = rat_decimal_exact(value, ROUNDING_DIGITS) {
        return (exact, None);
    }
    // Round |value| * 10^digits to nearest, ties away from zero.
    let scale = BigInt::from(10).pow(ROUNDING_DIGITS as u32);
    let scaled_num = value.numer().abs() * &scale;
    let (q, r) = scaled_num.div_rem(value.denom());
    let rounded = if &r * 2 >= *value.denom() { q + 1 } else { q };
    let digits = rounded.to_string();
    let padded = format!("{:0>width$}", digits, width = ROUNDING_DIGITS + 1);
    let split = padded.len() - ROUNDING_DIGITS;
    let mut text = format!("{}.{}", &padded[..split], &padded[split..]);
    text = text.trim_end_matches('0').trim_end_matches('.').to_string();
    if value.is_negative() {
        text.insert(0, '-');
    }
    (text, Some(value.to_string()))
}

struct Row {
    name: String,
    terms: Vec<(Rat, String)>,
    relation: &'static str,
    rhs: Rat,
}

fn write_row(out: &mut String, row: &Row) {
    let mut exact_notes: Vec<String> = Vec::new();
    let mut body = String::new();
    let mut first = true;
    for (coef, var) in &row.terms {
        if coef.is_zero() {
            continue;
        }
        let (text, exact) = coefficient(&coef.abs());
        if let Some(exact) = exact {
            exact_notes.push(format!(
                "{} {}",
                if coef.is_negative() { "-" } else { "" },
                exact
            ));
        }
        if first {
            if coef.is_negative() {
                body.push_str("- ");
            }
            first = false;
        } else {
            body.push_str(if coef.is_negative() { " - " } else { " + " });
        }
        if text == "1" {
            let _ = write!(body, "{}", var);
        } else {
            let _ = write!(body, "{} {}", text, var);
        }
    }
    if first {
        body.push('0');
    }
    let (rhs_text, rhs_exact) = coefficient(&row.rhs);
    if let Some(exact) = rhs_exact {
        exact_notes.push(exact);
    }
    if !exact_notes.is_empty() {
        let _ = writeln!(
            out,
            "\\ {}: exact values {}",
            row.name,
            exact_notes.join(", ")
        );
    }
    let _ = writeln!(out, " {}: {} {} {}", row.name, body, row.relation, rhs_text);
}

/// The primal relaxation: minimize total weighted multiplicity subject to
/// coverage, capacity, linking and multiplicity-cap constraints.
pub fn export_lp(inst: &Instance) -> String {
    let mut out = String::from("\\ capacitated-cover primal relaxation\n");
    let mut obj = String::from(" obj:");
    let mut exact_notes: Vec<String> = Vec::new();
    let mut first = true;
    for v in &inst.vertices {
        if v.weight.is_zero() {
            continue;
        }
        let (text, exact) = coefficient(&v.weight);
        if let Some(exact) = exact {
            exact_notes.push(format!("w_v{} = {}", v.id, exact));
        }
        let _ = write!(
            obj,
            "{} {} x_v{}",
            if first { "" } else { " +" },
            text,
            v.id
        );
        first = false;
    }
    if first {
        obj.push_str(" 0 x_v0");
    }
    out.push_str("Minimize\n");
    if !exact_notes.is_empty() {
        let _ = writeln!(out, "\\ obj: exact values {}", exact_notes.join(", "));
    }
    out.push_str(&obj);
    out.push('\n');
    out.push_str("Subject To\n");
    for e in &inst.edges {
        let row = Row {
            name: format!("cover_e{}", e.id),
            terms: e
                .members
                .iter()
                .map(|&v| (Rat::from_integer(1.into()), format!("h_e{}_v{}", e.id, v)))
                .collect(),
            relation: ">=",
            rhs: e.demand.clone(),
        };
        write_row(&mut out, &row);
    }
    for v in &inst.vertices {
        let incident = inst.incident_edges(v.id);
        if incident.is_empty() {
            continue;
        }
        let mut terms = vec![(v.capacity.clone(), format!("x_v{}", v.id))];
        for e in incident {
            terms.push((-Rat::from_integer(1.into()), format!("h_e{}_v{}", e, v.id)));
        }
        write_row(
            &mut out,
            &Row {
                name: format!("cap_v{}", v.id),
                terms,
                relation: ">=",
                rhs: Rat::zero(),
            },
        );
    }
    for e in &inst.edges {
        for &v in &e.members {
            let row = Row {
                name: format!("link_e{}_v{}", e.id, v),
                terms: vec![
                    (e.demand.clone(), format!("x_v{}", v)),
                    (-Rat::from_integer(1.into()), format!("h_e{}_v{}", e.id, v)),
                ],
                relation: ">=",
                rhs: Rat::zero(),
            };
            write_row(&mut out, &row);
        }
    }
    out.push_str("Bounds\n");
    for v in &inst.vertices {
        let _ = writeln!(out, " x_v{} <= {}", v.id, v.multiplicity);
    }
    out.push_str("End\n");
    out
}

/// The dual program: maximize packed demand value net of multiplicity
/// charges, subject to the per-vertex budget and per-incidence linking
/// constraints. Vertex rows for isolated vertices are trivially true and
/// omitted.
pub fn export_dual_lp(inst: &Instance) -> String {
    let mut out = String::from("\\ capacitated-cover dual program\n");
    let mut obj = String::from(" obj:");
    let mut exact_notes: Vec<String> = Vec::new();
    let mut first = true;
    for e in &inst.edges {
        if e.demand.is_zero() {
            continue;
        }
        let (text, exact) = coefficient(&e.demand);
        if let Some(exact) = exact {
            exact_notes.push(format!("d_e{} = {}", e.id, exact));
        }
        let _ = write!(
            obj,
            "{} {} y_e{}",
            if first { "" } else { " +" },
            text,
            e.id
        );
        first = false;
    }
    for v in &inst.vertices {
        if v.multiplicity == 0 {
            continue;
        }
        let _ = write!(obj, " - {} eta_v{}", v.multiplicity, v.id);
        first = false;
    }
    if first {
        obj.push_str(" 0 y_e0");
    }
    out.push_str("Maximize\n");
    if !exact_notes.is_empty() {
        let _ = writeln!(out, "\\ obj: exact values {}", exact_notes.join(", "));
    }
    out.push_str(&obj);
    out.push('\n');
    out.push_str("Subject To\n");
    for v in &inst.vertices {
        let incident = inst.incident_edges(v.id);
        if incident.is_empty() {
            continue;
        }
        let mut terms = vec![(v.capacity.clone(), format!("z_v{}", v.id))];
        for e in incident {
            terms.push((inst.edges[e].demand.clone(), format!("g_e{}_v{}", e, v.id)));
        }
        terms.push((-Rat::from_integer(1.into()), format!("eta_v{}", v.id)));
        write_row(
            &mut out,
            &Row {
                name: format!("vert_v{}", v.id),
                terms,
                relation: "<=",
                rhs: v.weight.clone(),
            },
        );
    }
    for e in &inst.edges {
        for &v in &e.members {
            let row = Row {
                name: format!("link_e{}_v{}", e.id, v),
                terms: vec![
                    (Rat::from_integer(1.into()), format!("y_e{}", e.id)),
                    (-Rat::from_integer(1.into()), format!("z_v{}", v)),
                    (-Rat::from_integer(1.into()), format!("g_e{}_v{}", e.id, v)),
                ],
                relation: "<=",
                rhs: Rat::zero(),
            };
            write_row(&mut out, &row);
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use vchc_core::instance::{Edge, Vertex};
    use vchc_core::rational::{rat, rat_int};

    fn i1() -> Instance {
        Instance::new(
            vec![
                Vertex {
                    id: 0,
                    weight: rat_int(1),
                    capacity: rat_int(2),
                    multiplicity: 1,
                },
                Vertex {
                    id: 1,
                    weight: rat_int(10),
                    capacity: rat_int(2),
                    multiplicity: 1,
                },
            ],
            vec![Edge {
                id: 0,
                members: vec![0, 1],
                demand: rat_int(2),
            }],
        )
    }

    fn constraint_rows(text: &str) -> usize {
        let mut rows = 0;
        let mut in_body = false;
        for line in text.lines() {
            match line.trim() {
                "Subject To" | "Bounds" => in_body = true,
                "End" => in_body = false,
                l if in_body && !l.is_empty() && !l.starts_with('\\') => rows += 1,
                _ => {}
            }
        }
        rows
    }

    #[test]
    fn primal_row_counts_for_the_two_vertex_fixture() {
        let text = export_lp(&i1());
        // 1 coverage + 2 capacity + 2 linking rows + 2 multiplicity bounds.
        assert_eq!(constraint_rows(&text), 7);
        assert!(text.contains("cover_e0: h_e0_v0 + h_e0_v1 >= 2"));
        assert!(text.contains("cap_v0: 2 x_v0 - h_e0_v0 >= 0"));
        assert!(text.contains("link_e0_v1: 2 x_v1 - h_e0_v1 >= 0"));
        assert!(text.contains(" x_v0 <= 1"));
    }

    #[test]
    fn dual_row_counts_for_the_two_vertex_fixture() {
        let text = export_dual_lp(&i1());
        // 2 vertex rows + 2 linking rows.
        assert_eq!(constraint_rows(&text), 4);
        assert!(text.contains("vert_v0: 2 z_v0 + 2 g_e0_v0 - eta_v0 <= 1"));
        assert!(text.contains("link_e0_v0: y_e0 - z_v0 - g_e0_v0 <= 0"));
        assert!(text.contains("obj: 2 y_e0 - 1 eta_v0 - 1 eta_v1"));
    }

    #[test]
    fn edgeless_instance_exports_objective_only() {
        let inst = Instance::new(
            vec![Vertex {
                id: 0,
                weight: rat_int(3),
                capacity: rat_int(1),
                multiplicity: 2,
            }],
            vec![],
        );
        let text = export_lp(&inst);
        let subject_to = text
            .lines()
            .skip_while(|l| l.trim() != "Subject To")
            .skip(1)
            .take_while(|l| l.trim() != "Bounds")
            .filter(|l| !l.trim().is_empty())
            .count();
        assert_eq!(subject_to, 0);
    }

    #[test]
    fn non_terminating_coefficients_get_comments() {
        let inst = Instance::new(
            vec![Vertex {
                id: 0,
                weight: rat_int(1),
                capacity: rat(1, 3),
                multiplicity: 1,
            }],
            vec![Edge {
                id: 0,
                members: vec![0],
                demand: rat_int(1),
            }],
        );
        let text = export_lp(&inst);
        assert!(text.contains("exact values"));
        assert!(text.contains("1/3"));
        assert!(text.contains("0.333333333333333333333333333333"));
    }

    #[test]
    fn decimal_coefficients_are_exact_when_terminating() {
        let inst = Instance::new(
            vec![Vertex {
                id: 0,
                weight: rat(1, 2),
                capacity: rat(3, 4),
                multiplicity: 1,
            }],
            vec![Edge {
                id: 0,
                members: vec![0],
                demand: rat(5, 8),
            }],
        );
        let primal = export_lp(&inst);
        assert!(primal.contains("0.5 x_v0"));
        assert!(primal.contains("0.75 x_v0"));
        assert!(primal.contains(">= 0.625"));
    }
}
