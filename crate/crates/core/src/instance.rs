//! Problem instances: hypergraphs with per-edge demands and per-vertex
//! weight, capacity and multiplicity.
//!
//! An instance is immutable after construction, so it can be shared freely
//! across concurrent solver runs. All checks here are exact; feasibility of
//! the whole instance is decided by a single max-flow computation over the
//! bipartite demand/capacity network with every multiplicity selected.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Signed;

use crate::maxflow;
use crate::rational::Rat;

/// Dense vertex index, `0..|V|`.
pub type VertexId = usize;
/// Dense edge index, `0..|E|`.
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub weight: Rat,
    pub capacity: Rat,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    /// Member vertex ids; kept sorted and duplicate-free.
    pub members: Vec<VertexId>,
    pub demand: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// Which part of the instance an issue refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityRef {
    Vertex(VertexId),
    Edge(EdgeId),
    Document,
}

impl fmt::Display for EntityRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityRef::Vertex(v) => write!(f, "vertex {}", v),
            EntityRef::Edge(e) => write!(f, "edge {}", e),
            EntityRef::Document => write!(f, "document"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Issue {
    pub severity: Severity,
    pub message: String,
    pub entity: EntityRef,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    /// True iff no issue has `Severity::Error`.
    pub fn ok(&self) -> bool {
        self.issues.iter().all(|i| i.severity != Severity::Error)
    }

    fn error(&mut self, entity: EntityRef, message: String) {
        self.issues.push(Issue {
            severity: Severity::Error,
            message,
            entity,
        });
    }

    fn warning(&mut self, entity: EntityRef, message: String) {
        self.issues.push(Issue {
            severity: Severity::Warning,
            message,
            entity,
        });
    }
}

/// Errors from [`Instance::augment_multiplicities`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentError {
    /// The augmentation factor must be at least 1.
    FactorTooSmall,
    /// `k * m_v` does not fit in a `u64`.
    MultiplicityOverflow(VertexId),
}

impl fmt::Display for AugmentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AugmentError::FactorTooSmall => write!(f, "augmentation factor must be >= 1"),
            AugmentError::MultiplicityOverflow(v) => {
                write!(f, "augmented multiplicity overflows at vertex {}", v)
            }
        }
    }
}

impl core::error::Error for AugmentError {}

impl Instance {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        Instance { vertices, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Structural validation. `ok()` on the report means the instance is
    /// safe to hand to any other operation in the toolkit.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.vertices.len();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                report.error(
                    EntityRef::Vertex(v.id),
                    alloc::format!(
                        "vertex ids must be dense 0..{}, found {} at position {}",
                        n,
                        v.id,
                        i
                    ),
                );
            }
            if v.weight.is_negative() {
                report.error(EntityRef::Vertex(v.id), String::from("negative weight"));
            }
            if v.capacity.is_negative() {
                report.error(EntityRef::Vertex(v.id), String::from("negative capacity"));
            }
        }
        for (j, e) in self.edges.iter().enumerate() {
            if e.id != j {
                report.error(
                    EntityRef::Edge(e.id),
                    alloc::format!(
                        "edge ids must be dense 0..{}, found {} at position {}",
                        self.edges.len(),
                        e.id,
                        j
                    ),
                );
            }
            if e.members.is_empty() {
                report.error(EntityRef::Edge(e.id), String::from("edge has no members"));
            }
            let mut seen = BTreeSet::new();
            for &m in &e.members {
                if m >= n {
                    report.error(
                        EntityRef::Edge(e.id),
                        alloc::format!("unknown vertex {} in member list", m),
                    );
                } else if !seen.insert(m) {
                    report.error(
                        EntityRef::Edge(e.id),
                        alloc::format!("duplicate member vertex {}", m),
                    );
                }
            }
            if e.demand.is_negative() {
                report.error(EntityRef::Edge(e.id), String::from("negative demand"));
            }
        }
        if self.edges.is_empty() {
            report.warning(
                EntityRef::Document,
                String::from("no edges: maximum edge size is 0; ratio formulas clamp it to 2"),
            );
        }
        report
    }

    /// Edges incident to `v`.
    pub fn incident_edges(&self, v: VertexId) -> BTreeSet<EdgeId> {
        self.edges
            .iter()
            .filter(|e| e.members.contains(&v))
            .map(|e| e.id)
            .collect()
    }

    /// Edges incident to any vertex of `set` (the union of the per-vertex
    /// incident-edge sets).
    pub fn incident_edges_of_set<'a, I>(&self, set: I) -> BTreeSet<EdgeId>
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        let vs: BTreeSet<VertexId> = set.into_iter().copied().collect();
        self.edges
            .iter()
            .filter(|e| e.members.iter().any(|m| vs.contains(m)))
            .map(|e| e.id)
            .collect()
    }

    /// Maximum edge size; 0 when there are no edges (flagged as a warning by
    /// [`Instance::validate`], and clamped to 2 by ratio formulas).
    pub fn max_edge_size(&self) -> usize {
        self.edges
            .iter()
            .map(|e| e.members.len())
            .max()
            .unwrap_or(0)
    }

    /// Ids of edges with strictly positive demand.
    pub fn positive_edges(&self) -> BTreeSet<EdgeId> {
        self.edges
            .iter()
            .filter(|e| e.demand.is_positive())
            .map(|e| e.id)
            .collect()
    }

    /// Sum of demands over positive-demand edges.
    pub fn total_positive_demand(&self) -> Rat {
        self.edges
            .iter()
            .filter(|e| e.demand.is_positive())
            .fold(Rat::from_integer(0.into()), |acc, e| acc + &e.demand)
    }

    pub fn multiplicities(&self) -> Vec<u64> {
        self.vertices.iter().map(|v| v.multiplicity).collect()
    }

    /// Whether a feasible demand assignment exists, decided by selecting all
    /// available multiplicities and testing whether the max-flow through the
    /// demand/capacity network saturates every positive-demand edge.
    pub fn is_feasible(&self) -> bool {
        let all: BTreeSet<VertexId> = (0..self.vertices.len()).collect();
        let active = self.positive_edges();
        let net = maxflow::build_flow_graph(self, &all, &active, &self.multiplicities());
        let flow = maxflow::max_flow(&net);
        flow.value == self.total_positive_demand()
    }

    /// The same instance with every multiplicity scaled by `k >= 1`.
    pub fn augment_multiplicities(&self, k: u64) -> Result<Instance, AugmentError> {
        if k < 1 {
            return Err(AugmentError::FactorTooSmall);
        }
        let mut vertices = self.vertices.clone();
        for v in &mut vertices {
            v.multiplicity = v
                .multiplicity
                .checked_mul(k)
                .ok_or(AugmentError::MultiplicityOverflow(v.id))?;
        }
        Ok(Instance {
            vertices,
            edges: self.edges.clone(),
        })
    }
}
