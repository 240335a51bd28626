//! The augmentation pipeline: run the event loop on the instance with
//! multiplicities scaled by `k`, construct light profiles for vertices that
//! saturated with residual demand within capacity, rebalance the assignment
//! so those vertices absorb load from overloaded ones, and report the final
//! cover with its dual certificate and lower bound.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::assignment::DemandAssignment;
use crate::instance::{EdgeId, Instance, VertexId};
use crate::primal_dual::{self, CapacityCrossing, SolveError, SolverOutput, SolverTrace};
use crate::rational::Rat;

/// Per-vertex earmarking of incident demand whose dual values exactly pay
/// for the vertex weight; the receiving budget of the reassignment step.
///
/// Construction requires that the vertex saturated while its residual
/// demand was within capacity. Three conditions are checked exactly at
/// construction: every earmark is between the vertex's current assignment
/// and the edge demand, the earmarks total at most the capacity, and the
/// earmarks priced at the edge duals total exactly the vertex weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LightProfile {
    pub vertex: VertexId,
    /// Earmarked amount per incident edge; missing entries are zero.
    pub amounts: BTreeMap<EdgeId, Rat>,
}

impl LightProfile {
    pub fn amount(&self, e: EdgeId) -> Rat {
        self.amounts.get(&e).cloned().unwrap_or_else(Rat::zero)
    }
}

/// Which of the three profile conditions failed, with a diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileError {
    NotApplicable(String),
    BoundViolated(String),
    CapacityExceeded(String),
    PaymentMismatch(String),
}

impl core::fmt::Display for ProfileError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let (name, msg) = match self {
            ProfileError::NotApplicable(m) => ("not applicable", m),
            ProfileError::BoundViolated(m) => ("per-edge bound", m),
            ProfileError::CapacityExceeded(m) => ("capacity bound", m),
            ProfileError::PaymentMismatch(m) => ("exact payment", m),
        };
        write!(f, "light profile condition failed ({}): {}", name, msg)
    }
}

impl core::error::Error for ProfileError {}

/// One demand move of the rebalancing loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReassignmentMove {
    pub edge: EdgeId,
    pub donor: VertexId,
    pub receiver: VertexId,
    pub amount: Rat,
}

/// Final output of [`solve_augmented`].
#[derive(Debug, Clone)]
pub struct CoverResult {
    pub assignment: DemandAssignment,
    pub multiplicities: Vec<u64>,
    pub cost: Rat,
    pub dual: primal_dual::DualSolution,
    /// Dual objective evaluated with the original multiplicities: a valid
    /// lower bound on the unaugmented optimum. May be nonpositive, in which
    /// case ratio checks against it are vacuous.
    pub dual_lower_bound: Rat,
    pub k: u64,
    /// Maximum edge size of the instance (0 when edgeless).
    pub f: usize,
    /// `(1 + 1/(k-1)) * (max(f, 2) - 1)`.
    pub guaranteed_ratio: Rat,
    pub pending_history: BTreeSet<VertexId>,
    pub moves: Vec<ReassignmentMove>,
}

/// Everything a pipeline run produces, for certification and tests: the
/// final cover, the light profiles, and the raw solver output (whose
/// assignment is the pre-rebalancing one).
#[derive(Debug, Clone)]
pub struct AugmentedRun {
    pub cover: CoverResult,
    pub profiles: BTreeMap<VertexId, LightProfile>,
    pub solver: SolverOutput,
}

impl AugmentedRun {
    /// The assignment as the event loop produced it, before rebalancing.
    pub fn pre_assignment(&self) -> &DemandAssignment {
        &self.solver.assignment
    }

    pub fn trace(&self) -> &SolverTrace {
        &self.solver.trace
    }
}

/// Errors of the full pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverError {
    /// `k` must be at least 2 for the augmented guarantee.
    FactorTooSmall,
    Solve(SolveError),
    Profile(ProfileError),
    Augment(crate::instance::AugmentError),
}

impl core::fmt::Display for CoverError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CoverError::FactorTooSmall => write!(f, "augmentation factor k must be >= 2"),
            CoverError::Solve(e) => write!(f, "{}", e),
            CoverError::Profile(e) => write!(f, "{}", e),
            CoverError::Augment(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for CoverError {}

impl From<SolveError> for CoverError {
    fn from(e: SolveError) -> Self {
        CoverError::Solve(e)
    }
}

impl From<ProfileError> for CoverError {
    fn from(e: ProfileError) -> Self {
        CoverError::Profile(e)
    }
}

/// Total demand vertex `v` received under `h`.
pub fn received(h: &DemandAssignment, v: VertexId) -> Rat {
    h.received(v)
}

/// Cost of an assignment: `sum_v w_v * ceil(received_v / c_v)`, with
/// zero-capacity vertices contributing nothing (they can receive nothing).
pub fn cost(inst: &Instance, h: &DemandAssignment) -> Rat {
    let mult = h.multiplicities(inst);
    inst.vertices
        .iter()
        .zip(mult)
        .fold(Rat::zero(), |acc, (v, x)| {
            acc + &v.weight * Rat::from_integer(x.into())
        })
}

/// The guarantee ratio `(1 + 1/(k-1)) * (max(f, 2) - 1)` for `k >= 2`.
/// `f <= 1` instances are degenerate for the ratio formula and clamp to 2.
pub fn guaranteed_ratio(f: usize, k: u64) -> Rat {
    assert!(k >= 2, "ratio defined for k >= 2");
    let f_eff = f.max(2) as i64;
    let k = Rat::from_integer(k.into());
    let factor = Rat::one() + Rat::one() / (k - Rat::one());
    factor * Rat::from_integer((f_eff - 1).into())
}

/// Builds the light profile of `v` from the saturation bookkeeping.
///
/// If the vertex's residual demand was within capacity from the start, every
/// incident edge is earmarked at its full demand. Otherwise the crossing
/// snapshot drives the construction: edges that stayed active at the
/// crossing are earmarked fully, and the edges removed at the crossing are
/// filled in ascending edge id against the remaining capacity budget.
/// Edges incident to `v` outside both sets are earmarked zero.
pub fn build_light_profile(
    inst_aug: &Instance,
    v: VertexId,
    crossing: Option<&CapacityCrossing>,
    initially_light: bool,
    h: &DemandAssignment,
    y: &[Rat],
) -> Result<LightProfile, ProfileError> {
    let incident = inst_aug.incident_edges(v);
    let capacity = &inst_aug.vertices[v].capacity;
    let mut amounts: BTreeMap<EdgeId, Rat> = BTreeMap::new();
    if initially_light {
        for &e in &incident {
            amounts.insert(e, inst_aug.edges[e].demand.clone());
        }
    } else {
        let crossing = crossing.ok_or_else(|| {
            ProfileError::NotApplicable(alloc::format!(
                "vertex {} was never light while saturated: no crossing snapshot",
                v
            ))
        })?;
        let mut budget = capacity.clone();
        for &e in &crossing.remaining {
            amounts.insert(e, inst_aug.edges[e].demand.clone());
            budget -= &inst_aug.edges[e].demand;
        }
        if budget.is_negative() {
            return Err(ProfileError::CapacityExceeded(alloc::format!(
                "vertex {}: edges remaining at the crossing already exceed capacity",
                v
            )));
        }
        for &e in &crossing.removed {
            if budget.is_zero() {
                break;
            }
            let demand = &inst_aug.edges[e].demand;
            if &budget >= demand {
                amounts.insert(e, demand.clone());
                budget -= demand;
            } else {
                amounts.insert(e, budget.clone());
                budget = Rat::zero();
            }
        }
    }
    amounts.retain(|_, amount| !amount.is_zero());

    // Exact checks of the three profile conditions.
    let mut total = Rat::zero();
    let mut paid = Rat::zero();
    for &e in &incident {
        let earmark = amounts.get(&e).cloned().unwrap_or_else(Rat::zero);
        let assigned = h.get(e, v);
        if assigned > earmark || earmark > inst_aug.edges[e].demand {
            return Err(ProfileError::BoundViolated(alloc::format!(
                "vertex {}, edge {}: assignment {} <= earmark {} <= demand {} fails",
                v,
                e,
                assigned,
                earmark,
                inst_aug.edges[e].demand
            )));
        }
        total += &earmark;
        paid += earmark * &y[e];
    }
    if &total > capacity {
        return Err(ProfileError::CapacityExceeded(alloc::format!(
            "vertex {}: earmarks total {} exceed capacity {}",
            v,
            total,
            capacity
        )));
    }
    if paid != inst_aug.vertices[v].weight {
        return Err(ProfileError::PaymentMismatch(alloc::format!(
            "vertex {}: earmarks pay {} but the weight is {}",
            v,
            paid,
            inst_aug.vertices[v].weight
        )));
    }
    Ok(LightProfile { vertex: v, amounts })
}

/// The rebalancing loop. For each edge in ascending id order, repeatedly
/// move demand from an overloaded donor (not in the pending history) to a
/// profiled receiver with spare earmark, until no such pair exists. Pair
/// selection is smallest donor id, then smallest receiver id; each move
/// transfers `min(donor's entry, receiver's free earmark)`. Per-edge totals
/// are preserved exactly and pending-history vertices are never touched.
pub fn reassign(
    inst_aug: &Instance,
    h: &DemandAssignment,
    profiles: &BTreeMap<VertexId, LightProfile>,
    pending_history: &BTreeSet<VertexId>,
) -> (DemandAssignment, Vec<ReassignmentMove>) {
    let mut result = h.clone();
    let mut moves = Vec::new();
    let mut load: Vec<Rat> = (0..inst_aug.vertices.len())
        .map(|v| result.received(v))
        .collect();
    let original_load: Vec<Rat> = load.clone();
    for edge in &inst_aug.edges {
        let members: BTreeSet<VertexId> = edge.members.iter().copied().collect();
        loop {
            let donor = members.iter().copied().find(|&u| {
                !pending_history.contains(&u)
                    && result.get(edge.id, u).is_positive()
                    && load[u] > inst_aug.vertices[u].capacity
            });
            let Some(donor) = donor else { break };
            let receiver = members.iter().copied().find(|&v| {
                profiles.get(&v).is_some_and(|p| {
                    original_load[v] < inst_aug.vertices[v].capacity
                        && result.get(edge.id, v) < p.amount(edge.id)
                })
            });
            let Some(receiver) = receiver else { break };
            let donor_entry = result.get(edge.id, donor);
            let free = profiles[&receiver].amount(edge.id) - result.get(edge.id, receiver);
            let amount = if donor_entry <= free {
                donor_entry
            } else {
                free
            };
            debug_assert!(amount.is_positive());
            result.add(edge.id, donor, &-amount.clone());
            result.add(edge.id, receiver, &amount);
            load[donor] -= &amount;
            load[receiver] += &amount;
            moves.push(ReassignmentMove {
                edge: edge.id,
                donor,
                receiver,
                amount,
            });
        }
    }
    (result, moves)
}

/// Vertices qualifying for a light profile after a run: saturated with
/// residual demand within capacity at that moment.
fn profile_candidates(out: &SolverOutput) -> Vec<VertexId> {
    out.saturation_mode
        .iter()
        .filter(|(_, mode)| **mode == primal_dual::SaturationMode::Light)
        .map(|(&v, _)| v)
        .collect()
}

/// The full pipeline for `k >= 2`: augment multiplicities, run the
/// primal-dual loop, build light profiles, rebalance, and assemble the
/// result. The dual lower bound is evaluated against the original
/// multiplicities, where it bounds the unaugmented optimum from below.
pub fn solve_augmented(inst: &Instance, k: u64) -> Result<AugmentedRun, CoverError> {
    if k < 2 {
        return Err(CoverError::FactorTooSmall);
    }
    // The guarantee compares against the unaugmented optimum, so the
    // original instance must be feasible; augmentation can mask that.
    if !inst.is_feasible() {
        return Err(CoverError::Solve(SolveError::Infeasible));
    }
    let inst_aug = inst
        .augment_multiplicities(k)
        .map_err(CoverError::Augment)?;
    let solver = primal_dual::run_dual_vchc(&inst_aug)?;
    let mut profiles = BTreeMap::new();
    for v in profile_candidates(&solver) {
        let profile = build_light_profile(
            &inst_aug,
            v,
            solver.crossings.get(&v),
            solver.initial_light[v],
            &solver.assignment,
            &solver.dual.y,
        )?;
        profiles.insert(v, profile);
    }
    let (assignment, moves) = reassign(
        &inst_aug,
        &solver.assignment,
        &profiles,
        &solver.pending_history,
    );
    let multiplicities = assignment.multiplicities(inst);
    let total_cost = cost(inst, &assignment);
    let dual_lower_bound = crate::certify::dual_objective(inst, &solver.dual);
    let cover = CoverResult {
        assignment,
        multiplicities,
        cost: total_cost,
        dual: solver.dual.clone(),
        dual_lower_bound,
        k,
        f: inst.max_edge_size(),
        guaranteed_ratio: guaranteed_ratio(inst.max_edge_size(), k),
        pending_history: solver.pending_history.clone(),
        moves,
    };
    Ok(AugmentedRun {
        cover,
        profiles,
        solver,
    })
}
