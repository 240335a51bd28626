//! The primal-dual event loop.
//!
//! Dual variables rise simultaneously for all active edges; each event
//! saturates the vertex whose slack runs out first. A saturated vertex is
//! handed to the recursive self-containment procedure, which either extracts
//! a group of saturated vertices that can fully serve every active edge in
//! its vicinity (assigning that demand via a max-flow) or leaves the
//! decision pending. The loop ends when no active edges remain; the
//! accumulated assignment fully serves every positive-demand edge and the
//! dual solution is feasible throughout.
//!
//! Bookkeeping notes, fixed once here:
//! * Slack starts at the vertex weight `w_v`.
//! * The candidate set initially requires `m_v * c_v * d(v) > 0`, i.e.
//!   vertices with no positive-demand incident edge never enter it.
//! * Time advances in jumps: per event every rising dual moves by the same
//!   `dt`, which is equivalent to continuous raising by linearity and keeps
//!   every event boundary exactly representable.
//! * A vertex's rising variable is re-read from its current residual demand
//!   every event, so a vertex can switch from raising `z_v` to raising
//!   `g_{e,v}` after removals shrink its residual demand.
//! * For a pending vertex, `eta_v` rises at rate `c_v` alongside `z_v`; this
//!   is the unique rate that keeps the saturated constraint tight when only
//!   `z_v` among its terms is rising, and tightness is asserted after every
//!   event rather than assumed.
//! * A vertex with `m_v * c_v = 0` never becomes a candidate but may sit on
//!   active edges whose `y_e` keeps rising; it gets the same
//!   `z_v`/`eta_v` treatment as a pending vertex, which costs nothing (its
//!   objective term and capacity term both vanish) and preserves dual
//!   feasibility of the edge constraints.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::assignment::DemandAssignment;
use crate::instance::{EdgeId, Instance, VertexId};
use crate::maxflow;
use crate::rational::Rat;

/// Feasible solution of the dual LP: one `y` per edge, one `z` and `eta`
/// per vertex, and a sparse `g` per incidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSolution {
    pub y: Vec<Rat>,
    pub z: Vec<Rat>,
    pub g: BTreeMap<(EdgeId, VertexId), Rat>,
    pub eta: Vec<Rat>,
}

impl DualSolution {
    pub fn zero(inst: &Instance) -> Self {
        DualSolution {
            y: alloc::vec![Rat::zero(); inst.edges.len()],
            z: alloc::vec![Rat::zero(); inst.vertices.len()],
            g: BTreeMap::new(),
            eta: alloc::vec![Rat::zero(); inst.vertices.len()],
        }
    }

    pub fn g_at(&self, e: EdgeId, v: VertexId) -> Rat {
        self.g.get(&(e, v)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Left-hand side of the vertex constraint:
    /// `c_v * z_v + sum_e d_e * g_{e,v} - eta_v`.
    pub fn vertex_constraint_lhs(&self, inst: &Instance, v: VertexId) -> Rat {
        let mut acc = &inst.vertices[v].capacity * &self.z[v];
        for (&(e, vertex), g) in &self.g {
            if vertex == v {
                acc += &inst.edges[e].demand * g;
            }
        }
        acc - &self.eta[v]
    }

    /// Remaining slack `w_v - lhs` of the vertex constraint.
    pub fn vertex_slack(&self, inst: &Instance, v: VertexId) -> Rat {
        &inst.vertices[v].weight - self.vertex_constraint_lhs(inst, v)
    }
}

/// Which dual variable was rising for the vertex when it saturated: `Heavy`
/// vertices (residual demand above capacity) raise `z_v`, `Light` vertices
/// raise `g_{e,v}` on each active incident edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaturationMode {
    Heavy,
    Light,
}

impl SaturationMode {
    /// Stable names used in trace serialization.
    pub fn as_str(self) -> &'static str {
        match self {
            SaturationMode::Heavy => "z-mode",
            SaturationMode::Light => "g-mode",
        }
    }
}

/// Snapshot taken the first time a vertex's residual demand drops to at
/// most its capacity: which of its incident edges were removed in that very
/// event and which stayed active.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityCrossing {
    pub removed: BTreeSet<EdgeId>,
    pub remaining: BTreeSet<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    /// A vertex's constraint became tight at `time`.
    Saturation {
        vertex: VertexId,
        time: Rat,
        mode: SaturationMode,
    },
    /// Result of the self-containment call triggered by `vertex`.
    SelfContainment {
        vertex: VertexId,
        group: BTreeSet<VertexId>,
        assigned_edges: usize,
        assigned_total: Rat,
    },
    /// Self-containment came back empty; the vertex joined the pending set.
    PendingAdded { vertex: VertexId },
    /// A self-containing group and all its active edges left the system.
    /// `stranded` flags pending vertices that lost their last active edge
    /// without being part of the group (never observed; see the audit).
    GroupRemoved {
        group: BTreeSet<VertexId>,
        edges: BTreeSet<EdgeId>,
        stranded: BTreeSet<VertexId>,
    },
}

impl TraceEvent {
    /// Event time when the event carries one.
    pub fn time(&self) -> Option<&Rat> {
        match self {
            TraceEvent::Saturation { time, .. } => Some(time),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolverTrace {
    pub events: Vec<TraceEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// The instance admits no feasible assignment even with every
    /// multiplicity selected.
    Infeasible,
    /// An internal invariant failed; carries a diagnostic.
    InvariantViolation(String),
}

impl core::fmt::Display for SolveError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SolveError::Infeasible => write!(f, "instance is infeasible"),
            SolveError::InvariantViolation(msg) => write!(f, "invariant violation: {}", msg),
        }
    }
}

impl core::error::Error for SolveError {}

/// Mutable state of one solver run over the instance whose multiplicities
/// are in force (the augmented instance in the full pipeline).
pub struct SolverState<'a> {
    pub inst: &'a Instance,
    incident: Vec<Vec<EdgeId>>,
    pub active_edges: BTreeSet<EdgeId>,
    pub candidates: BTreeSet<VertexId>,
    pub pending: BTreeSet<VertexId>,
    pub pending_history: BTreeSet<VertexId>,
    pub residual_demand: Vec<Rat>,
    pub slack: Vec<Rat>,
    pub clock: Rat,
    pub assignment: DemandAssignment,
    pub dual: DualSolution,
    pub crossings: BTreeMap<VertexId, CapacityCrossing>,
    pub initial_light: Vec<bool>,
    pub saturation_mode: BTreeMap<VertexId, SaturationMode>,
    pub trace: SolverTrace,
}

/// Everything a run produces: the assignment, the dual solution, the event
/// trace, and the saturation bookkeeping the cover pipeline consumes.
#[derive(Debug, Clone)]
pub struct SolverOutput {
    pub assignment: DemandAssignment,
    pub dual: DualSolution,
    pub trace: SolverTrace,
    pub pending_history: BTreeSet<VertexId>,
    pub crossings: BTreeMap<VertexId, CapacityCrossing>,
    pub initial_light: Vec<bool>,
    pub saturation_mode: BTreeMap<VertexId, SaturationMode>,
}

impl<'a> SolverState<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        let n = inst.vertices.len();
        let mut incident: Vec<Vec<EdgeId>> = alloc::vec![Vec::new(); n];
        for e in &inst.edges {
            for &v in &e.members {
                incident[v].push(e.id);
            }
        }
        let active_edges = inst.positive_edges();
        let residual_demand: Vec<Rat> = (0..n)
            .map(|v| {
                incident[v]
                    .iter()
                    .filter(|e| active_edges.contains(e))
                    .fold(Rat::zero(), |acc, &e| acc + &inst.edges[e].demand)
            })
            .collect();
        let candidates = (0..n)
            .filter(|&v| {
                inst.vertices[v].multiplicity > 0
                    && inst.vertices[v].capacity.is_positive()
                    && residual_demand[v].is_positive()
            })
            .collect();
        let initial_light = (0..n)
            .map(|v| residual_demand[v] <= inst.vertices[v].capacity)
            .collect();
        SolverState {
            inst,
            incident,
            active_edges,
            candidates,
            pending: BTreeSet::new(),
            pending_history: BTreeSet::new(),
            residual_demand,
            slack: inst.vertices.iter().map(|v| v.weight.clone()).collect(),
            clock: Rat::zero(),
            assignment: DemandAssignment::new(),
            dual: DualSolution::zero(inst),
            crossings: BTreeMap::new(),
            initial_light,
            saturation_mode: BTreeMap::new(),
            trace: SolverTrace::default(),
        }
    }

    /// Active edges incident to `v`, ascending.
    pub fn active_incident(&self, v: VertexId) -> Vec<EdgeId> {
        self.incident[v]
            .iter()
            .copied()
            .filter(|e| self.active_edges.contains(e))
            .collect()
    }

    /// The next vertex to saturate and the time step that gets it there:
    /// the candidate minimizing `slack / min(capacity, residual demand)`,
    /// ties broken by smallest vertex id.
    pub fn select_next_saturation(&self) -> Result<(VertexId, Rat), SolveError> {
        let mut best: Option<(VertexId, Rat)> = None;
        for &v in &self.candidates {
            let vert = &self.inst.vertices[v];
            let denom = if vert.capacity <= self.residual_demand[v] {
                vert.capacity.clone()
            } else {
                self.residual_demand[v].clone()
            };
            debug_assert!(denom.is_positive());
            let rate = &self.slack[v] / denom;
            match &best {
                Some((_, current)) if *current <= rate => {}
                _ => best = Some((v, rate)),
            }
        }
        best.ok_or_else(|| {
            SolveError::InvariantViolation(String::from(
                "no saturation candidate while active edges remain (instance infeasible for the \
                 multiplicities in force)",
            ))
        })
    }

    /// Advances the clock by `dt`, raising every rising dual variable and
    /// updating slacks. See the module docs for which variable rises for
    /// which vertex.
    pub fn advance_duals(&mut self, dt: &Rat) -> Result<(), SolveError> {
        if dt.is_negative() {
            return Err(SolveError::InvariantViolation(String::from(
                "negative time step",
            )));
        }
        if dt.is_zero() {
            return Ok(());
        }
        self.clock += dt;
        for &e in &self.active_edges {
            self.dual.y[e] += dt;
        }
        for v in 0..self.inst.vertices.len() {
            let active_inc = self.active_incident(v);
            if active_inc.is_empty() {
                continue;
            }
            let vert = &self.inst.vertices[v];
            if self.candidates.contains(&v) {
                if self.residual_demand[v] > vert.capacity {
                    self.dual.z[v] += dt;
                    self.slack[v] -= &vert.capacity * dt;
                } else {
                    for e in active_inc {
                        let g = self.dual.g.entry((e, v)).or_insert_with(Rat::zero);
                        *g += dt;
                    }
                    self.slack[v] -= &self.residual_demand[v] * dt;
                }
                if self.slack[v].is_negative() {
                    return Err(SolveError::InvariantViolation(alloc::format!(
                        "slack of vertex {} went negative",
                        v
                    )));
                }
            } else if self.pending.contains(&v) {
                self.dual.z[v] += dt;
                let bump = &vert.capacity * dt;
                self.dual.eta[v] += bump;
                debug_assert!(self.dual.vertex_slack(self.inst, v).is_zero());
            } else {
                // Outside candidates and pending with active edges: only
                // possible for vertices that can serve nothing.
                if vert.multiplicity > 0 && vert.capacity.is_positive() {
                    return Err(SolveError::InvariantViolation(alloc::format!(
                        "vertex {} with serving capacity is outside both the candidate and \
                         pending sets while it still has active edges",
                        v
                    )));
                }
                self.dual.z[v] += dt;
                let bump = &vert.capacity * dt;
                self.dual.eta[v] += bump;
            }
        }
        Ok(())
    }

    /// The recursive group extraction. Starting from `seed` (all saturated
    /// vertices), repeatedly: build the flow network over the seed's active
    /// edges, compute a max-flow (minimizing throughput of `u` whenever `u`
    /// is still in the set), and keep the vertices all of whose active
    /// edges are saturated by the flow. Stops when the kept set is the
    /// whole set (self-containing: return it with the flow's assignment) or
    /// empty.
    pub fn self_containment(
        &self,
        seed: BTreeSet<VertexId>,
        u: VertexId,
    ) -> (BTreeSet<VertexId>, DemandAssignment) {
        let mut group = seed;
        loop {
            let net = maxflow::build_flow_graph(
                self.inst,
                &group,
                &self.active_edges,
                &self.inst.multiplicities(),
            );
            let flow = if group.contains(&u) {
                maxflow::max_flow_min_through(&net, u)
            } else {
                maxflow::max_flow(&net)
            };
            let kept: BTreeSet<VertexId> = group
                .iter()
                .copied()
                .filter(|&v| {
                    self.active_incident(v)
                        .iter()
                        .all(|&e| flow.edge_saturated(e, &self.inst.edges[e].demand))
                })
                .collect();
            if kept.is_empty() {
                return (kept, DemandAssignment::new());
            }
            if kept == group {
                let full = maxflow::flow_to_assignment(&flow);
                let mut restricted = DemandAssignment::new();
                for (e, v, amount) in full.iter() {
                    if kept.contains(&v) {
                        restricted.set(e, v, amount.clone());
                    }
                }
                return (kept, restricted);
            }
            group = kept;
        }
    }

    fn finish(self) -> SolverOutput {
        SolverOutput {
            assignment: self.assignment,
            dual: self.dual,
            trace: self.trace,
            pending_history: self.pending_history,
            crossings: self.crossings,
            initial_light: self.initial_light,
            saturation_mode: self.saturation_mode,
        }
    }
}

/// Runs the full event loop on an instance whose multiplicities are the
/// ones in force. Errors out before the loop when the instance is
/// infeasible.
pub fn run_dual_vchc(inst_aug: &Instance) -> Result<SolverOutput, SolveError> {
    if !inst_aug.is_feasible() {
        return Err(SolveError::Infeasible);
    }
    let mut state = SolverState::new(inst_aug);
    let mut iterations = 0usize;
    while !state.active_edges.is_empty() {
        iterations += 1;
        if iterations > inst_aug.vertices.len() {
            return Err(SolveError::InvariantViolation(String::from(
                "event loop exceeded |V| iterations",
            )));
        }
        let (u, dt) = state.select_next_saturation()?;
        state.advance_duals(&dt)?;
        if !state.dual.vertex_slack(inst_aug, u).is_zero() {
            return Err(SolveError::InvariantViolation(alloc::format!(
                "vertex {} selected for saturation but its constraint is not tight",
                u
            )));
        }
        let mode = if state.residual_demand[u] > inst_aug.vertices[u].capacity {
            SaturationMode::Heavy
        } else {
            SaturationMode::Light
        };
        state.saturation_mode.insert(u, mode);
        state.candidates.remove(&u);
        state.trace.events.push(TraceEvent::Saturation {
            vertex: u,
            time: state.clock.clone(),
            mode,
        });

        let mut seed = state.pending.clone();
        seed.insert(u);
        let (group, partial) = state.self_containment(seed, u);
        state.trace.events.push(TraceEvent::SelfContainment {
            vertex: u,
            group: group.clone(),
            assigned_edges: partial
                .iter()
                .map(|(e, _, _)| e)
                .collect::<BTreeSet<_>>()
                .len(),
            assigned_total: partial.iter().fold(Rat::zero(), |acc, (_, _, a)| acc + a),
        });

        if group.is_empty() {
            state.pending.insert(u);
            state.pending_history.insert(u);
            state
                .trace
                .events
                .push(TraceEvent::PendingAdded { vertex: u });
            continue;
        }

        let removed: BTreeSet<EdgeId> = group
            .iter()
            .flat_map(|&v| state.active_incident(v))
            .collect();
        // Capacity crossings: first time residual demand drops to <= c_v.
        for v in 0..inst_aug.vertices.len() {
            if state.crossings.contains_key(&v) {
                continue;
            }
            let cap = &inst_aug.vertices[v].capacity;
            if state.residual_demand[v] <= *cap {
                continue;
            }
            let lost: BTreeSet<EdgeId> = state
                .active_incident(v)
                .into_iter()
                .filter(|e| removed.contains(e))
                .collect();
            let after = state.residual_demand[v].clone()
                - lost
                    .iter()
                    .fold(Rat::zero(), |acc, &e| acc + &inst_aug.edges[e].demand);
            if after <= *cap {
                let remaining: BTreeSet<EdgeId> = state
                    .active_incident(v)
                    .into_iter()
                    .filter(|e| !removed.contains(e))
                    .collect();
                state.crossings.insert(
                    v,
                    CapacityCrossing {
                        removed: lost,
                        remaining,
                    },
                );
            }
        }
        for &e in &removed {
            state.active_edges.remove(&e);
            for &v in &inst_aug.edges[e].members {
                let next = &state.residual_demand[v] - &inst_aug.edges[e].demand;
                state.residual_demand[v] = next;
            }
        }
        for &v in &group {
            state.pending.remove(&v);
        }
        state.assignment.merge(&partial);
        let stranded: BTreeSet<VertexId> = state
            .pending
            .iter()
            .copied()
            .filter(|&v| state.active_incident(v).is_empty())
            .collect();
        state.trace.events.push(TraceEvent::GroupRemoved {
            group,
            edges: removed,
            stranded,
        });
        let keep: BTreeSet<VertexId> = state
            .candidates
            .iter()
            .copied()
            .filter(|&v| state.residual_demand[v].is_positive())
            .collect();
        state.candidates = keep;
    }
    Ok(state.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::{i1, i2};
    use crate::instance::{Edge, Vertex};
    use crate::rational::{rat, rat_int};

    fn assert_slacks_consistent(state: &SolverState<'_>) {
        for v in 0..state.inst.vertices.len() {
            if state.candidates.contains(&v) {
                assert_eq!(
                    state.slack[v],
                    state.dual.vertex_slack(state.inst, v),
                    "stored slack of vertex {} disagrees with the dual variables",
                    v
                );
            }
        }
    }

    #[test]
    fn selection_on_i1_matches_hand_computed_rates() {
        let inst = i1();
        let state = SolverState::new(&inst);
        // Rates from first principles: slack / min(capacity, residual).
        for (v, expected) in [(0, rat(1, 2)), (1, rat_int(5))] {
            let denom = core::cmp::min(
                inst.vertices[v].capacity.clone(),
                state.residual_demand[v].clone(),
            );
            assert_eq!(&state.slack[v] / denom, expected);
        }
        assert_eq!(state.select_next_saturation().unwrap(), (0, rat(1, 2)));
    }

    #[test]
    fn tie_break_takes_smallest_id() {
        let inst = Instance::new(
            alloc::vec![
                Vertex {
                    id: 0,
                    weight: rat_int(2),
                    capacity: rat_int(1),
                    multiplicity: 1
                },
                Vertex {
                    id: 1,
                    weight: rat_int(2),
                    capacity: rat_int(1),
                    multiplicity: 1
                },
            ],
            alloc::vec![
                Edge {
                    id: 0,
                    members: alloc::vec![0],
                    demand: rat_int(1)
                },
                Edge {
                    id: 1,
                    members: alloc::vec![1],
                    demand: rat_int(1)
                },
            ],
        );
        let state = SolverState::new(&inst);
        assert_eq!(state.select_next_saturation().unwrap(), (0, rat_int(2)));
    }

    #[test]
    fn advance_by_zero_is_identity() {
        let inst = i2();
        let mut state = SolverState::new(&inst);
        let before_dual = state.dual.clone();
        let before_slack = state.slack.clone();
        state.advance_duals(&Rat::zero()).unwrap();
        assert_eq!(state.dual, before_dual);
        assert_eq!(state.slack, before_slack);
        assert_eq!(state.clock, Rat::zero());
    }

    #[test]
    fn pending_vertex_stays_tight_under_advance() {
        // One pending vertex with capacity 3; advance by 1/2 and check eta
        // rose by 3/2 while the pending constraint stays tight.
        let inst = Instance::new(
            alloc::vec![
                Vertex {
                    id: 0,
                    weight: rat_int(2),
                    capacity: rat_int(3),
                    multiplicity: 1
                },
                Vertex {
                    id: 1,
                    weight: rat_int(50),
                    capacity: rat_int(1),
                    multiplicity: 9
                },
            ],
            alloc::vec![Edge {
                id: 0,
                members: alloc::vec![0, 1],
                demand: rat_int(6)
            }],
        );
        let mut state = SolverState::new(&inst);
        // Saturate vertex 0 by hand: residual 6 > capacity 3, so z rises.
        let dt0 = state.select_next_saturation().unwrap().1;
        state.advance_duals(&dt0).unwrap();
        assert!(state.dual.vertex_slack(&inst, 0).is_zero());
        state.candidates.remove(&0);
        state.pending.insert(0);
        let eta_before = state.dual.eta[0].clone();
        state.advance_duals(&rat(1, 2)).unwrap();
        assert_eq!(&state.dual.eta[0] - &eta_before, rat(3, 2));
        assert!(state.dual.vertex_slack(&inst, 0).is_zero());
        assert_slacks_consistent(&state);
    }

    #[test]
    fn self_containment_singleton_cases() {
        let fits = Instance::new(
            alloc::vec![Vertex {
                id: 0,
                weight: rat_int(1),
                capacity: rat_int(2),
                multiplicity: 2
            }],
            alloc::vec![Edge {
                id: 0,
                members: alloc::vec![0],
                demand: rat_int(2)
            }],
        );
        let state = SolverState::new(&fits);
        let (group, h) = state.self_containment(BTreeSet::from([0]), 0);
        assert_eq!(group, BTreeSet::from([0]));
        assert_eq!(h.get(0, 0), rat_int(2));

        let too_big = Instance::new(
            alloc::vec![Vertex {
                id: 0,
                weight: rat_int(1),
                capacity: rat_int(2),
                multiplicity: 2
            }],
            alloc::vec![Edge {
                id: 0,
                members: alloc::vec![0],
                demand: rat_int(5)
            }],
        );
        let state = SolverState::new(&too_big);
        let (group, h) = state.self_containment(BTreeSet::from([0]), 0);
        assert!(group.is_empty());
        assert!(h.is_empty());
    }

    #[test]
    fn run_on_zero_demand_instance_is_trivial() {
        let inst = Instance::new(
            alloc::vec![Vertex {
                id: 0,
                weight: rat_int(1),
                capacity: rat_int(1),
                multiplicity: 1
            }],
            alloc::vec![Edge {
                id: 0,
                members: alloc::vec![0],
                demand: rat_int(0)
            }],
        );
        let out = run_dual_vchc(&inst).unwrap();
        assert!(out.assignment.is_empty());
        assert_eq!(out.dual, DualSolution::zero(&inst));
        assert!(out.trace.events.is_empty());
        assert!(out.pending_history.is_empty());
    }

    #[test]
    fn run_on_augmented_i1_matches_hand_trace() {
        let inst = i1().augment_multiplicities(2).unwrap();
        let out = run_dual_vchc(&inst).unwrap();
        assert_eq!(out.assignment.get(0, 0), rat_int(2));
        assert_eq!(out.assignment.received(1), rat_int(0));
        assert_eq!(out.dual.y, alloc::vec![rat(1, 2)]);
        assert_eq!(out.dual.g_at(0, 0), rat(1, 2));
        assert_eq!(out.dual.g_at(0, 1), rat(1, 2));
        assert_eq!(out.dual.z, alloc::vec![rat_int(0); 2]);
        assert_eq!(out.dual.eta, alloc::vec![rat_int(0); 2]);
        assert!(out.pending_history.is_empty());
        assert_eq!(out.saturation_mode.get(&0), Some(&SaturationMode::Light));
    }

    #[test]
    fn run_on_augmented_i2_matches_hand_trace() {
        let inst = i2().augment_multiplicities(2).unwrap();
        let out = run_dual_vchc(&inst).unwrap();
        // Vertex 0 pends after its saturation (its multiplicity cannot
        // absorb both edges' demand at that point), then exits fully
        // loaded when vertex 1 saturates.
        assert_eq!(out.pending_history, BTreeSet::from([0]));
        assert_eq!(out.dual.y, alloc::vec![rat(3, 2), rat(3, 2)]);
        assert_eq!(out.dual.z[0], rat(3, 2));
        assert_eq!(out.dual.eta[0], rat(1, 2));
        assert_eq!(out.dual.z[1], rat_int(0));
        assert_eq!(out.dual.eta[1], rat_int(0));
        assert_eq!(out.dual.g_at(1, 1), rat(3, 2));
        assert_eq!(out.assignment.received(0), rat_int(2));
        assert_eq!(out.assignment.received(1), rat_int(1));
        assert_eq!(out.saturation_mode.get(&0), Some(&SaturationMode::Heavy));
        assert_eq!(out.saturation_mode.get(&1), Some(&SaturationMode::Light));
        // Full coverage of both edges.
        assert_eq!(out.assignment.assigned(0), rat_int(1));
        assert_eq!(out.assignment.assigned(1), rat_int(2));
    }

    #[test]
    fn zero_weight_vertices_saturate_first_in_id_order() {
        let inst = Instance::new(
            alloc::vec![
                Vertex {
                    id: 0,
                    weight: rat_int(4),
                    capacity: rat_int(1),
                    multiplicity: 1
                },
                Vertex {
                    id: 1,
                    weight: rat_int(0),
                    capacity: rat_int(1),
                    multiplicity: 1
                },
                Vertex {
                    id: 2,
                    weight: rat_int(0),
                    capacity: rat_int(1),
                    multiplicity: 1
                },
            ],
            alloc::vec![
                Edge {
                    id: 0,
                    members: alloc::vec![0, 1],
                    demand: rat_int(1)
                },
                Edge {
                    id: 1,
                    members: alloc::vec![1, 2],
                    demand: rat_int(1)
                },
            ],
        );
        let out = run_dual_vchc(&inst).unwrap();
        let saturations: Vec<(VertexId, Rat)> = out
            .trace
            .events
            .iter()
            .filter_map(|ev| match ev {
                TraceEvent::Saturation { vertex, time, .. } => Some((*vertex, time.clone())),
                _ => None,
            })
            .collect();
        assert_eq!(saturations[0], (1, rat_int(0)));
        assert!(
            saturations.windows(2).all(|w| w[0].1 <= w[1].1),
            "event times must be nondecreasing"
        );
        // Zero-weight capacity suffices here, so the weighted vertex never
        // pays anything.
        assert_eq!(out.assignment.received(0), rat_int(0));
    }

    #[test]
    fn infeasible_instance_is_rejected_before_the_loop() {
        let inst = Instance::new(
            alloc::vec![Vertex {
                id: 0,
                weight: rat_int(1),
                capacity: rat_int(1),
                multiplicity: 1
            }],
            alloc::vec![Edge {
                id: 0,
                members: alloc::vec![0],
                demand: rat_int(2)
            }],
        );
        assert!(matches!(run_dual_vchc(&inst), Err(SolveError::Infeasible)));
    }

    #[test]
    fn zero_capacity_member_keeps_dual_feasible() {
        // Vertices 1 and 2 sit on the edge but can serve nothing (m*c = 0);
        // their z must rise with y so the edge constraints stay feasible.
        let inst = Instance::new(
            alloc::vec![
                Vertex {
                    id: 0,
                    weight: rat_int(3),
                    capacity: rat_int(2),
                    multiplicity: 2
                },
                Vertex {
                    id: 1,
                    weight: rat_int(1),
                    capacity: rat_int(0),
                    multiplicity: 5
                },
                Vertex {
                    id: 2,
                    weight: rat_int(1),
                    capacity: rat_int(4),
                    multiplicity: 0
                },
            ],
            alloc::vec![Edge {
                id: 0,
                members: alloc::vec![0, 1, 2],
                demand: rat_int(3)
            }],
        );
        let out = run_dual_vchc(&inst).unwrap();
        for v in 1..=2 {
            assert!(out.dual.y[0] <= &out.dual.z[v] + out.dual.g_at(0, v));
            assert!(
                !out.dual.vertex_slack(&inst, v).is_negative(),
                "vertex constraint violated at {}",
                v
            );
        }
        assert_eq!(out.assignment.received(1), rat_int(0));
        assert_eq!(out.assignment.received(2), rat_int(0));
    }

    #[test]
    fn corrupted_state_error_paths() {
        let inst = i2();
        let mut state = SolverState::new(&inst);
        state.candidates.clear();
        assert!(matches!(
            state.select_next_saturation(),
            Err(SolveError::InvariantViolation(_))
        ));
    }
}
