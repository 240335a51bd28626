//! Instance file format and artifact serialization.
//!
//! Instances are UTF-8 JSON documents:
//!
//! ```json
//! {"vertices":[{"id":0,"weight":"1","capacity":"2","multiplicity":1}],
//!  "edges":[{"id":0,"vertices":[0,1],"demand":"2"}]}
//! ```
//!
//! Rationals travel as strings in integer (`"3"`), decimal (`"0.5"`) or
//! fraction (`"7/3"`) form; the canonical form emitted by
//! [`serialize_instance`] is integer-or-fraction. Ids must be dense and in
//! positional order. Parsing re-validates the instance and surfaces every
//! error with the entity it refers to.

use serde_json::{json, Map, Value};

use vchc_core::instance::{Edge, Instance, Severity, Vertex};
use vchc_core::primal_dual::{SaturationMode, SolverTrace, TraceEvent};
use vchc_core::rational::{parse_rat, rat_to_string, Rat};

/// Errors with exit-code-relevant classification.
#[derive(Debug)]
pub enum FormatError {
    /// Malformed JSON or schema violation; message carries the location.
    Parse(String),
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormatError::Parse(m) => write!(f, "{}", m),
        }
    }
}

impl std::error::Error for FormatError {}

fn parse_err(msg: impl Into<String>) -> FormatError {
    FormatError::Parse(msg.into())
}

fn rat_field(obj: &Map<String, Value>, field: &str, at: &str) -> Result<Rat, FormatError> {
    let value = obj
        .get(field)
        .ok_or_else(|| parse_err(format!("{}: missing field {:?}", at, field)))?;
    let text = value
        .as_str()
        .ok_or_else(|| parse_err(format!("{}.{}: rationals must be strings", at, field)))?;
    parse_rat(text).map_err(|e| parse_err(format!("{}.{}: {}", at, field, e)))
}

fn u64_field(obj: &Map<String, Value>, field: &str, at: &str) -> Result<u64, FormatError> {
    obj.get(field)
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err(format!("{}.{}: expected a nonnegative integer", at, field)))
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        parse_err(format!(
            "invalid JSON at line {} column {}",
            e.line(),
            e.column()
        ))
    })?;
    let root = root
        .as_object()
        .ok_or_else(|| parse_err("document root must be an object"))?;
    let vertices_json = root
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing \"vertices\" array"))?;
    let edges_json = root
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing \"edges\" array"))?;

    let mut vertices = Vec::with_capacity(vertices_json.len());
    for (i, v) in vertices_json.iter().enumerate() {
        let at = format!("vertices[{}]", i);
        let obj = v
            .as_object()
            .ok_or_else(|| parse_err(format!("{}: expected an object", at)))?;
        vertices.push(Vertex {
            id: u64_field(obj, "id", &at)? as usize,
            weight: rat_field(obj, "weight", &at)?,
            capacity: rat_field(obj, "capacity", &at)?,
            multiplicity: u64_field(obj, "multiplicity", &at)?,
        });
    }
    let mut edges = Vec::with_capacity(edges_json.len());
    for (j, e) in edges_json.iter().enumerate() {
        let at = format!("edges[{}]", j);
        let obj = e
            .as_object()
            .ok_or_else(|| parse_err(format!("{}: expected an object", at)))?;
        let members_json = obj
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(format!("{}: missing \"vertices\" array", at)))?;
        let mut members = Vec::with_capacity(members_json.len());
        for m in members_json {
            members.push(
                m.as_u64()
                    .ok_or_else(|| parse_err(format!("{}.vertices: expected integers", at)))?
                    as usize,
            );
        }
        members.sort_unstable();
        edges.push(Edge {
            id: u64_field(obj, "id", &at)? as usize,
            members,
            demand: rat_field(obj, "demand", &at)?,
        });
    }
    let inst = Instance::new(vertices, edges);
    let report = inst.validate();
    if !report.ok() {
        let mut messages: Vec<String> = report
            .issues
            .iter()
            .filter(|i| i.severity == Severity::Error)
            .map(|i| format!("{}: {}", i.entity, i.message))
            .collect();
        messages.sort();
        return Err(parse_err(messages.join("; ")));
    }
    Ok(inst)
}

/// Canonical serialization: rationals in reduced integer-or-fraction form,
/// keys in a fixed order, two-space indentation, trailing newline.
pub fn serialize_instance(inst: &Instance) -> String {
    let vertices: Vec<Value> = inst
        .vertices
        .iter()
        .map(|v| {
            json!({
                "id": v.id,
                "weight": rat_to_string(&v.weight),
                "capacity": rat_to_string(&v.capacity),
                "multiplicity": v.multiplicity,
            })
        })
        .collect();
    let edges: Vec<Value> = inst
        .edges
        .iter()
        .map(|e| {
            json!({
                "id": e.id,
                "vertices": e.members,
                "demand": rat_to_string(&e.demand),
            })
        })
        .collect();
    let doc = json!({ "vertices": vertices, "edges": edges });
    let mut out = serde_json::to_string_pretty(&doc).expect("instances serialize");
    out.push('\n');
    out
}

/// One trace event per line, documented shape:
///
/// ```json
/// {"event":"saturation","vertex":0,"time":"1/2","mode":"g-mode"}
/// {"event":"self_containment","vertex":0,"group":[0],"assigned_edges":1,"assigned_total":"2"}
/// {"event":"pending_added","vertex":0}
/// {"event":"group_removed","group":[0],"edges":[0],"stranded":[]}
/// ```
pub fn trace_to_jsonl(trace: &SolverTrace) -> String {
    let mut out = String::new();
    for event in &trace.events {
        let value = match event {
            TraceEvent::Saturation { vertex, time, mode } => json!({
                "event": "saturation",
                "vertex": vertex,
                "time": rat_to_string(time),
                "mode": mode.as_str(),
            }),
            TraceEvent::SelfContainment {
                vertex,
                group,
                assigned_edges,
                assigned_total,
            } => {
                json!({
                    "event": "self_containment",
                    "vertex": vertex,
                    "group": group.iter().collect::<Vec<_>>(),
                    "assigned_edges": assigned_edges,
                    "assigned_total": rat_to_string(assigned_total),
                })
            }
            TraceEvent::PendingAdded { vertex } => json!({
                "event": "pending_added",
                "vertex": vertex,
            }),
            TraceEvent::GroupRemoved {
                group,
                edges,
                stranded,
            } => json!({
                "event": "group_removed",
                "group": group.iter().collect::<Vec<_>>(),
                "edges": edges.iter().collect::<Vec<_>>(),
                "stranded": stranded.iter().collect::<Vec<_>>(),
            }),
        };
        out.push_str(&serde_json::to_string(&value).expect("events serialize"));
        out.push('\n');
    }
    out
}

/// Inverse of [`trace_to_jsonl`], for auditing serialized traces.
pub fn trace_from_jsonl(text: &str) -> Result<SolverTrace, FormatError> {
    let mut events = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let at = format!("trace line {}", lineno + 1);
        let value: Value = serde_json::from_str(line)
            .map_err(|e| parse_err(format!("{}: invalid JSON ({})", at, e)))?;
        let obj = value
            .as_object()
            .ok_or_else(|| parse_err(format!("{}: expected an object", at)))?;
        let kind = obj
            .get("event")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_err(format!("{}: missing event kind", at)))?;
        let vertex_of = |obj: &Map<String, Value>| -> Result<usize, FormatError> {
            Ok(u64_field(obj, "vertex", &at)? as usize)
        };
        let set_of = |field: &str| -> Result<std::collections::BTreeSet<usize>, FormatError> {
            obj.get(field)
                .and_then(Value::as_array)
                .ok_or_else(|| parse_err(format!("{}: missing {:?}", at, field)))?
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| parse_err(format!("{}.{}: expected integers", at, field)))
                })
                .collect()
        };
        let event = match kind {
            "saturation" => TraceEvent::Saturation {
                vertex: vertex_of(obj)?,
                time: rat_field(obj, "time", &at)?,
                mode: match obj.get("mode").and_then(Value::as_str) {
                    Some("z-mode") => SaturationMode::Heavy,
                    Some("g-mode") => SaturationMode::Light,
                    _ => return Err(parse_err(format!("{}: unknown saturation mode", at))),
                },
            },
            "self_containment" => TraceEvent::SelfContainment {
                vertex: vertex_of(obj)?,
                group: set_of("group")?,
                assigned_edges: u64_field(obj, "assigned_edges", &at)? as usize,
                assigned_total: rat_field(obj, "assigned_total", &at)?,
            },
            "pending_added" => TraceEvent::PendingAdded {
                vertex: vertex_of(obj)?,
            },
            "group_removed" => TraceEvent::GroupRemoved {
                group: set_of("group")?,
                edges: set_of("edges")?,
                stranded: set_of("stranded")?,
            },
            other => return Err(parse_err(format!("{}: unknown event {:?}", at, other))),
        };
        events.push(event);
    }
    Ok(SolverTrace { events })
}
