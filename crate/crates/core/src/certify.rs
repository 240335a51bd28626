//! Independent verification of solver artifacts.
//!
//! Everything here recomputes its verdicts from the passed-in data (the
//! instance, an assignment, a dual solution, a serialized trace) and shares
//! no state with the solver. `check_primal` and `check_dual` verify the two
//! LP constraint families exactly; `audit_trace` replays a trace's set
//! operations and re-verifies the structural invariants the analysis rests
//! on; the `Vacuous` status marks checks that cannot conclude (for example
//! a ratio check whose lower bound is nonpositive) so they are never
//! mistaken for passes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::assignment::DemandAssignment;
use crate::cover::LightProfile;
use crate::instance::{EdgeId, Instance, VertexId};
use crate::maxflow;
use crate::primal_dual::{DualSolution, SaturationMode, SolverTrace, TraceEvent};
use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check could not conclude either way; never counts as a pass.
    Vacuous,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Vacuous => "vacuous",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct CertificateReport {
    pub checks: Vec<Check>,
}

impl CertificateReport {
    /// True iff no check failed (vacuous checks do not fail the report).
    pub fn overall(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn push(&mut self, name: &str, status: CheckStatus, detail: String) {
        self.checks.push(Check {
            name: String::from(name),
            status,
            detail,
        });
    }

    fn pass(&mut self, name: &str) {
        self.push(name, CheckStatus::Pass, String::new());
    }

    fn fail(&mut self, name: &str, detail: String) {
        self.push(name, CheckStatus::Fail, detail);
    }

    /// Merge another report's checks under a prefix.
    pub fn absorb(&mut self, prefix: &str, other: CertificateReport) {
        for check in other.checks {
            self.checks.push(Check {
                name: alloc::format!("{}/{}", prefix, check.name),
                status: check.status,
                detail: check.detail,
            });
        }
    }
}

/// Verifies an assignment as an augmented cover with factor `beta`:
/// nonnegativity (structural in [`DemandAssignment`]), incidence, full
/// coverage of every edge, and the multiplicity cap `x_v <= beta * m_v`.
pub fn check_primal(inst: &Instance, beta: u64, h: &DemandAssignment) -> CertificateReport {
    let mut report = CertificateReport::default();

    let mut incidence_ok = true;
    for (e, v, amount) in h.iter() {
        if e >= inst.edges.len() || !inst.edges[e].members.contains(&v) {
            report.fail(
                "incidence",
                alloc::format!(
                    "assignment routes {} from edge {} to non-member vertex {}",
                    amount,
                    e,
                    v
                ),
            );
            incidence_ok = false;
        }
    }
    if incidence_ok {
        report.pass("incidence");
    }

    let mut coverage_ok = true;
    for edge in &inst.edges {
        let assigned = h.assigned(edge.id);
        if assigned < edge.demand {
            report.fail(
                "coverage",
                alloc::format!(
                    "edge {} undercovered: assigned {} of demand {}",
                    edge.id,
                    assigned,
                    edge.demand
                ),
            );
            coverage_ok = false;
        }
    }
    if coverage_ok {
        report.pass("coverage");
    }

    let mult = h.multiplicities(inst);
    let mut mult_ok = true;
    for vertex in &inst.vertices {
        let cap = vertex.multiplicity.saturating_mul(beta);
        if mult[vertex.id] > cap {
            report.fail(
                "multiplicity",
                alloc::format!(
                    "vertex {} uses {} units, above the augmented cap {}",
                    vertex.id,
                    mult[vertex.id],
                    cap
                ),
            );
            mult_ok = false;
        }
    }
    if mult_ok {
        report.pass("multiplicity");
    }
    report
}

/// Verifies both dual constraint families and nonnegativity, exactly. The
/// dual feasible region does not depend on the multiplicities, so one check
/// certifies a solution for the original and the augmented instance alike.
pub fn check_dual(inst: &Instance, dual: &DualSolution) -> CertificateReport {
    let mut report = CertificateReport::default();

    let mut nonneg_ok = true;
    for (e, y) in dual.y.iter().enumerate() {
        if y.is_negative() {
            report.fail(
                "nonnegativity",
                alloc::format!("y[{}] = {} is negative", e, y),
            );
            nonneg_ok = false;
        }
    }
    for v in 0..inst.vertices.len() {
        if dual.z.get(v).map(|z| z.is_negative()).unwrap_or(true) {
            report.fail(
                "nonnegativity",
                alloc::format!("z[{}] missing or negative", v),
            );
            nonneg_ok = false;
        }
        if dual.eta.get(v).map(|eta| eta.is_negative()).unwrap_or(true) {
            report.fail(
                "nonnegativity",
                alloc::format!("eta[{}] missing or negative", v),
            );
            nonneg_ok = false;
        }
    }
    for (&(e, v), g) in &dual.g {
        if g.is_negative() {
            report.fail(
                "nonnegativity",
                alloc::format!("g[{},{}] = {} is negative", e, v, g),
            );
            nonneg_ok = false;
        }
    }
    if nonneg_ok {
        report.pass("nonnegativity");
    }

    let mut vertex_ok = true;
    for v in 0..inst.vertices.len() {
        let slack = dual.vertex_slack(inst, v);
        if slack.is_negative() {
            report.fail(
                "vertex-constraint",
                alloc::format!("vertex {} constraint exceeded by {}", v, -slack),
            );
            vertex_ok = false;
        }
    }
    if vertex_ok {
        report.pass("vertex-constraint");
    }

    let mut edge_ok = true;
    for edge in &inst.edges {
        for &v in &edge.members {
            let bound = &dual.z[v] + dual.g_at(edge.id, v);
            if dual.y[edge.id] > bound {
                report.fail(
                    "edge-constraint",
                    alloc::format!(
                        "y[{}] = {} exceeds z[{}] + g = {}",
                        edge.id,
                        dual.y[edge.id],
                        v,
                        bound
                    ),
                );
                edge_ok = false;
            }
        }
    }
    if edge_ok {
        report.pass("edge-constraint");
    }
    report
}

/// The dual objective `sum_e d_e * y_e - sum_v m_v * eta_v`, evaluated with
/// the multiplicities of the instance passed in. With the original instance
/// this is a lower bound on the unaugmented optimum.
pub fn dual_objective(inst: &Instance, dual: &DualSolution) -> Rat {
    let edges: Rat = inst
        .edges
        .iter()
        .fold(Rat::zero(), |acc, e| acc + &e.demand * &dual.y[e.id]);
    let vertices: Rat = inst.vertices.iter().fold(Rat::zero(), |acc, v| {
        acc + Rat::from_integer(v.multiplicity.into()) * &dual.eta[v.id]
    });
    edges - vertices
}

/// Inputs to [`audit_trace`]: the artifacts of one pipeline run.
pub struct AuditInputs<'a> {
    pub inst: &'a Instance,
    pub k: u64,
    pub trace: &'a SolverTrace,
    pub pre_assignment: &'a DemandAssignment,
    pub assignment: &'a DemandAssignment,
    pub dual: &'a DualSolution,
    pub pending_history: &'a BTreeSet<VertexId>,
    pub profiles: &'a BTreeMap<VertexId, LightProfile>,
}

/// Largest pending set audited exhaustively for group maximality; beyond
/// this the subset enumeration is skipped and reported as vacuous.
pub const MAXIMALITY_AUDIT_LIMIT: usize = 12;

/// Replays a trace and re-verifies the structural invariants of a run from
/// serialized artifacts only:
///
/// * event times are nondecreasing and saturated constraints end tight;
/// * every edge price equals the time of the event that removed the edge
///   (a full reconstruction of `y` from the trace alone);
/// * heavy-saturated vertices have `z_v = y_e` on every edge they serve,
///   and `eta_v > 0` only for pending-history vertices;
/// * pending-history vertices end fully loaded (`received = m'_v c_v`) and
///   their weight identity `w_v m'_v = received * y_e - m'_v eta_v` holds
///   on every served edge;
/// * `eta_v <= c_v z_v` everywhere;
/// * every light profile satisfies its three conditions against the
///   pre-reassignment assignment;
/// * per-edge totals survive the reassignment and pending-history entries
///   are untouched;
/// * after every self-containment event, no nonempty subset of the pending
///   set can fully serve its active vicinity (exhaustive enumeration while
///   the pending set is small).
pub fn audit_trace(inputs: &AuditInputs<'_>) -> CertificateReport {
    let mut report = CertificateReport::default();
    let inst = inputs.inst;
    let Ok(inst_aug) = inst.augment_multiplicities(inputs.k) else {
        report.fail(
            "augmentation",
            String::from("could not scale multiplicities"),
        );
        return report;
    };
    let dual = inputs.dual;
    let h = inputs.pre_assignment;

    // --- Replay the trace's set operations.
    let mut active: BTreeSet<EdgeId> = inst_aug.positive_edges();
    let mut pending: BTreeSet<VertexId> = BTreeSet::new();
    let mut seen_history: BTreeSet<VertexId> = BTreeSet::new();
    let mut saturated: BTreeMap<VertexId, SaturationMode> = BTreeMap::new();
    let mut times_ok = true;
    let mut replay_ok = true;
    let mut maximality_ok = true;
    let mut maximality_skipped = false;
    let mut last_time = Rat::zero();
    let mut audited_events = 0usize;
    // Every edge price is reconstructible from the trace: y_e rises with
    // the clock while the edge is active and freezes when its group is
    // removed, so it must equal the time of the saturation event that
    // triggered the removal.
    let mut expected_y: BTreeMap<EdgeId, Rat> = BTreeMap::new();

    for event in &inputs.trace.events {
        match event {
            TraceEvent::Saturation { vertex, time, mode } => {
                if time < &last_time {
                    times_ok = false;
                }
                last_time = time.clone();
                saturated.insert(*vertex, *mode);
            }
            TraceEvent::PendingAdded { vertex } => {
                pending.insert(*vertex);
                seen_history.insert(*vertex);
                audit_pending_maximality(
                    &inst_aug,
                    &active,
                    &pending,
                    &mut maximality_ok,
                    &mut maximality_skipped,
                    &mut audited_events,
                    &mut report,
                );
            }
            TraceEvent::SelfContainment { .. } => {}
            TraceEvent::GroupRemoved {
                group,
                edges,
                stranded,
            } => {
                if !stranded.is_empty() {
                    replay_ok = false;
                    report.fail(
                        "no-stranding",
                        alloc::format!("pending vertices {:?} lost all active edges", stranded),
                    );
                }
                for e in edges {
                    if !active.remove(e) {
                        replay_ok = false;
                        report.fail(
                            "replay",
                            alloc::format!("edge {} removed twice or never active", e),
                        );
                    }
                    expected_y.insert(*e, last_time.clone());
                }
                for v in group {
                    pending.remove(v);
                    if !saturated.contains_key(v) {
                        replay_ok = false;
                        report.fail(
                            "replay",
                            alloc::format!("vertex {} removed in a group before saturating", v),
                        );
                    }
                }
                audit_pending_maximality(
                    &inst_aug,
                    &active,
                    &pending,
                    &mut maximality_ok,
                    &mut maximality_skipped,
                    &mut audited_events,
                    &mut report,
                );
            }
        }
    }
    if !active.is_empty() {
        replay_ok = false;
        report.fail(
            "replay",
            alloc::format!("{} edges never left the active set", active.len()),
        );
    }
    if seen_history != *inputs.pending_history {
        replay_ok = false;
        report.fail(
            "replay",
            String::from("pending history disagrees with the trace"),
        );
    }
    if times_ok {
        report.pass("event-times-nondecreasing");
    } else {
        report.fail(
            "event-times-nondecreasing",
            String::from("event times regressed"),
        );
    }
    if replay_ok {
        report.pass("replay");
    }
    let mut prices_ok = true;
    for edge in &inst_aug.edges {
        let expected = expected_y.get(&edge.id).cloned().unwrap_or_else(Rat::zero);
        if dual.y.get(edge.id) != Some(&expected) {
            prices_ok = false;
            report.fail(
                "edge-price-reconstruction",
                alloc::format!(
                    "y[{}] should equal its removal time {} per the trace",
                    edge.id,
                    expected
                ),
            );
        }
    }
    if prices_ok {
        report.pass("edge-price-reconstruction");
    }
    if maximality_ok {
        if maximality_skipped {
            report.push(
                "pending-maximality",
                CheckStatus::Vacuous,
                alloc::format!(
                    "pending set exceeded {} vertices; enumeration skipped",
                    MAXIMALITY_AUDIT_LIMIT
                ),
            );
        } else {
            report.push(
                "pending-maximality",
                CheckStatus::Pass,
                alloc::format!("{} events audited by subset enumeration", audited_events),
            );
        }
    }

    // --- Saturated constraints end tight.
    let mut tight_ok = true;
    for &v in saturated.keys() {
        if !dual.vertex_slack(&inst_aug, v).is_zero() {
            tight_ok = false;
            report.fail(
                "saturation-tightness",
                alloc::format!("vertex {} saturated but its constraint is not tight", v),
            );
        }
    }
    if tight_ok {
        report.pass("saturation-tightness");
    }

    // --- Heavy vertices: z_v = y_e on served edges; eta > 0 only in the
    // pending history.
    let mut heavy_ok = true;
    for (&v, &mode) in &saturated {
        if mode != SaturationMode::Heavy {
            continue;
        }
        for edge in &inst_aug.edges {
            if edge.members.contains(&v)
                && h.get(edge.id, v).is_positive()
                && dual.z[v] != dual.y[edge.id]
            {
                heavy_ok = false;
                report.fail(
                    "heavy-served-price",
                    alloc::format!(
                        "heavy vertex {} has z = {} but serves edge {} with y = {}",
                        v,
                        dual.z[v],
                        edge.id,
                        dual.y[edge.id]
                    ),
                );
            }
        }
        if dual.eta[v].is_positive() && !inputs.pending_history.contains(&v) {
            heavy_ok = false;
            report.fail(
                "eta-only-in-history",
                alloc::format!("vertex {} has positive eta outside the pending history", v),
            );
        }
    }
    if heavy_ok {
        report.pass("heavy-served-price");
    }

    // --- Pending-history vertices end fully loaded and their weight
    // identity holds on every served edge.
    let mut history_ok = true;
    for &v in inputs.pending_history {
        let vert = &inst_aug.vertices[v];
        let full = Rat::from_integer(vert.multiplicity.into()) * &vert.capacity;
        let got = h.received(v);
        if got != full {
            history_ok = false;
            report.fail(
                "history-fully-loaded",
                alloc::format!("vertex {} received {} instead of {}", v, got, full),
            );
        }
        let m_aug = Rat::from_integer(vert.multiplicity.into());
        let lhs = &vert.weight * &m_aug;
        for edge in &inst_aug.edges {
            if edge.members.contains(&v) && h.get(edge.id, v).is_positive() {
                let rhs = &got * &dual.y[edge.id] - &m_aug * &dual.eta[v];
                if lhs != rhs {
                    history_ok = false;
                    report.fail(
                        "history-weight-identity",
                        alloc::format!(
                            "vertex {} on edge {}: w*m' = {} but received*y - m'*eta = {}",
                            v,
                            edge.id,
                            lhs,
                            rhs
                        ),
                    );
                }
            }
        }
    }
    if history_ok {
        report.pass("history-fully-loaded");
    }

    // --- eta_v <= c_v * z_v everywhere.
    let mut eta_ok = true;
    for v in 0..inst_aug.vertices.len() {
        let cap_z = &inst_aug.vertices[v].capacity * &dual.z[v];
        if dual.eta[v] > cap_z {
            eta_ok = false;
            report.fail(
                "eta-bounded-by-cz",
                alloc::format!(
                    "vertex {}: eta = {} exceeds c*z = {}",
                    v,
                    dual.eta[v],
                    cap_z
                ),
            );
        }
    }
    if eta_ok {
        report.pass("eta-bounded-by-cz");
    }

    // --- Light profiles: the three conditions, against the
    // pre-reassignment assignment.
    let mut profile_ok = true;
    for (&v, profile) in inputs.profiles {
        let vert = &inst_aug.vertices[v];
        let mut total = Rat::zero();
        let mut paid = Rat::zero();
        for e in inst_aug.incident_edges(v) {
            let earmark = profile.amount(e);
            let assigned = h.get(e, v);
            if assigned > earmark || earmark > inst_aug.edges[e].demand {
                profile_ok = false;
                report.fail(
                    "profile-bounds",
                    alloc::format!("vertex {} edge {}: earmark out of bounds", v, e),
                );
            }
            total += &earmark;
            paid += earmark * &dual.y[e];
        }
        if total > vert.capacity {
            profile_ok = false;
            report.fail(
                "profile-capacity",
                alloc::format!("vertex {}: earmarks exceed capacity", v),
            );
        }
        if paid != vert.weight {
            profile_ok = false;
            report.fail(
                "profile-payment",
                alloc::format!(
                    "vertex {}: earmarks pay {} instead of {}",
                    v,
                    paid,
                    vert.weight
                ),
            );
        }
    }
    if profile_ok {
        report.pass("profile-conditions");
    }

    // --- Reassignment conservation: per-edge totals identical, pending
    // history untouched.
    let mut conserve_ok = true;
    for edge in &inst_aug.edges {
        if h.assigned(edge.id) != inputs.assignment.assigned(edge.id) {
            conserve_ok = false;
            report.fail(
                "reassignment-conservation",
                alloc::format!("edge {} total changed across reassignment", edge.id),
            );
        }
    }
    for &v in inputs.pending_history {
        for edge in &inst_aug.edges {
            if h.get(edge.id, v) != inputs.assignment.get(edge.id, v) {
                conserve_ok = false;
                report.fail(
                    "reassignment-conservation",
                    alloc::format!(
                        "pending-history vertex {} entry changed on edge {}",
                        v,
                        edge.id
                    ),
                );
            }
        }
    }
    if conserve_ok {
        report.pass("reassignment-conservation");
    }

    report
}

/// Exhaustively verifies that no nonempty subset of the pending set can
/// fully serve the active edges it touches (with the multiplicities in
/// force). Skips silently past the enumeration limit.
fn audit_pending_maximality(
    inst_aug: &Instance,
    active: &BTreeSet<EdgeId>,
    pending: &BTreeSet<VertexId>,
    ok: &mut bool,
    skipped: &mut bool,
    audited: &mut usize,
    report: &mut CertificateReport,
) {
    if pending.is_empty() {
        *audited += 1;
        return;
    }
    if pending.len() > MAXIMALITY_AUDIT_LIMIT {
        *skipped = true;
        return;
    }
    *audited += 1;
    let mult = inst_aug.multiplicities();
    if let Some(subset) = find_serving_pending_subset(inst_aug, active, pending, &mult) {
        *ok = false;
        report.fail(
            "pending-maximality",
            alloc::format!(
                "pending subset {:?} can fully serve its active vicinity",
                subset
            ),
        );
    }
}

/// Standalone maximality audit: replays the trace's set operations and
/// runs the subset enumeration of [`audit_trace`] after every
/// self-containment event, erroring on the first pending subset that could
/// fully serve its vicinity. Returns the number of events audited
/// exhaustively (events with a pending set beyond
/// [`MAXIMALITY_AUDIT_LIMIT`] are skipped).
pub fn maximality_events(inst_aug: &Instance, trace: &SolverTrace) -> Result<usize, String> {
    let mut active: BTreeSet<EdgeId> = inst_aug.positive_edges();
    let mut pending: BTreeSet<VertexId> = BTreeSet::new();
    let mult = inst_aug.multiplicities();
    let mut audited = 0usize;
    for event in &trace.events {
        match event {
            TraceEvent::PendingAdded { vertex } => {
                pending.insert(*vertex);
            }
            TraceEvent::GroupRemoved { group, edges, .. } => {
                for e in edges {
                    active.remove(e);
                }
                for v in group {
                    pending.remove(v);
                }
            }
            _ => continue,
        }
        if pending.is_empty() {
            audited += 1;
            continue;
        }
        if pending.len() > MAXIMALITY_AUDIT_LIMIT {
            continue;
        }
        audited += 1;
        find_serving_pending_subset(inst_aug, &active, &pending, &mult).map_or(
            Ok(()),
            |subset| {
                Err(alloc::format!(
                    "pending subset {:?} can fully serve its active vicinity",
                    subset
                ))
            },
        )?;
    }
    Ok(audited)
}

/// First nonempty subset of `pending` (by mask order) that can fully serve
/// the active edges it touches, if any.
fn find_serving_pending_subset(
    inst_aug: &Instance,
    active: &BTreeSet<EdgeId>,
    pending: &BTreeSet<VertexId>,
    multiplicities: &[u64],
) -> Option<BTreeSet<VertexId>> {
    let members: Vec<VertexId> = pending.iter().copied().collect();
    for mask in 1u32..(1u32 << members.len()) {
        let subset: BTreeSet<VertexId> = members
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &v)| v)
            .collect();
        if subset_fully_serves(inst_aug, active, &subset, multiplicities) {
            return Some(subset);
        }
    }
    None
}

/// Whether `subset` can fully serve every active edge it touches,
/// including the vacuous case of touching no active edge at all (which can
/// never arise for pending vertices; see the solver docs).
pub fn subset_fully_serves(
    inst: &Instance,
    active: &BTreeSet<EdgeId>,
    subset: &BTreeSet<VertexId>,
    multiplicities: &[u64],
) -> bool {
    let net = maxflow::build_flow_graph(inst, subset, active, multiplicities);
    let touched: Rat = active
        .iter()
        .filter(|&&e| inst.edges[e].members.iter().any(|m| subset.contains(m)))
        .fold(Rat::zero(), |acc, &e| acc + &inst.edges[e].demand);
    maxflow::max_flow(&net).value == touched
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::solve_augmented;
    use crate::instance::fixtures::{i1, i2};
    use crate::rational::{rat, rat_int};

    fn audit_run(inst: &Instance, k: u64) -> (CertificateReport, crate::cover::AugmentedRun) {
        let run = solve_augmented(inst, k).unwrap();
        let report = audit_trace(&AuditInputs {
            inst,
            k,
            trace: run.trace(),
            pre_assignment: run.pre_assignment(),
            assignment: &run.cover.assignment,
            dual: &run.cover.dual,
            pending_history: &run.cover.pending_history,
            profiles: &run.profiles,
        });
        (report, run)
    }

    #[test]
    fn primal_check_passes_on_valid_cover() {
        let run = solve_augmented(&i1(), 2).unwrap();
        let report = check_primal(&i1(), 2, &run.cover.assignment);
        assert!(report.overall(), "{:?}", report.checks);
    }

    #[test]
    fn primal_check_flags_non_incident_assignment() {
        let inst = i1();
        let mut h = DemandAssignment::new();
        h.set(0, 0, rat_int(2));
        let mut bad = h.clone();
        bad.set(0, 1, rat_int(0));
        // Route some of edge 0 to a vertex of another instance position:
        // vertex 1 is a member, so use an out-of-range vertex instead.
        bad.set(0, 5, rat_int(1));
        let report = check_primal(&inst, 1, &bad);
        assert!(!report.overall());
        assert!(report
            .checks
            .iter()
            .any(|c| c.name == "incidence" && c.status == CheckStatus::Fail));
    }

    #[test]
    fn primal_check_flags_undercoverage() {
        let inst = i1();
        let mut h = DemandAssignment::new();
        h.set(0, 0, rat(3, 2));
        let report = check_primal(&inst, 1, &h);
        assert!(report
            .checks
            .iter()
            .any(|c| c.name == "coverage" && c.status == CheckStatus::Fail));
    }

    #[test]
    fn dual_check_accepts_zero_and_rejects_violation() {
        let inst = i2();
        assert!(check_dual(&inst, &DualSolution::zero(&inst)).overall());
        let mut bad = DualSolution::zero(&inst);
        // y above z + g on a singleton edge.
        bad.y[0] = &inst.vertices[0].weight / &inst.edges[0].demand + rat_int(1);
        let report = check_dual(&inst, &bad);
        assert!(!report.overall());
        assert!(report
            .checks
            .iter()
            .any(|c| c.name == "edge-constraint" && c.status == CheckStatus::Fail));
    }

    #[test]
    fn dual_objective_on_i1_equals_hand_value() {
        let inst = i1();
        let run = solve_augmented(&inst, 2).unwrap();
        assert_eq!(dual_objective(&inst, &run.cover.dual), rat_int(1));
        // Same dual against the augmented instance: eta is zero here, so
        // the multiplicities are irrelevant.
        let aug = inst.augment_multiplicities(2).unwrap();
        assert_eq!(dual_objective(&aug, &run.cover.dual), rat_int(1));
    }

    #[test]
    fn audit_passes_on_untampered_runs() {
        for inst in [i1(), i2()] {
            for k in [2, 3] {
                let (report, _) = audit_run(&inst, k);
                assert!(report.overall(), "audit failed: {:?}", report.checks);
            }
        }
    }

    #[test]
    fn audit_catches_perturbed_eta() {
        let inst = i2();
        let run = solve_augmented(&inst, 2).unwrap();
        let mut dual = run.cover.dual.clone();
        dual.eta[0] += rat_int(1);
        let report = audit_trace(&AuditInputs {
            inst: &inst,
            k: 2,
            trace: run.trace(),
            pre_assignment: run.pre_assignment(),
            assignment: &run.cover.assignment,
            dual: &dual,
            pending_history: &run.cover.pending_history,
            profiles: &run.profiles,
        });
        assert!(!report.overall());
        assert!(report
            .checks
            .iter()
            .any(|c| c.name == "saturation-tightness" && c.status == CheckStatus::Fail));
    }

    #[test]
    fn audit_reconstructs_edge_prices_from_the_trace() {
        let inst = i2();
        let run = solve_augmented(&inst, 2).unwrap();
        let mut dual = run.cover.dual.clone();
        dual.y[1] += rat(1, 7);
        let report = audit_trace(&AuditInputs {
            inst: &inst,
            k: 2,
            trace: run.trace(),
            pre_assignment: run.pre_assignment(),
            assignment: &run.cover.assignment,
            dual: &dual,
            pending_history: &run.cover.pending_history,
            profiles: &run.profiles,
        });
        assert!(report
            .checks
            .iter()
            .any(|c| c.name == "edge-price-reconstruction" && c.status == CheckStatus::Fail));
    }

    #[test]
    fn audit_catches_tampered_history_load() {
        let inst = i2();
        let run = solve_augmented(&inst, 2).unwrap();
        // Vertex 0 is in the pending history with received 2; remove some.
        let mut h = run.pre_assignment().clone();
        h.set(1, 0, rat(1, 2));
        let report = audit_trace(&AuditInputs {
            inst: &inst,
            k: 2,
            trace: run.trace(),
            pre_assignment: &h,
            assignment: &run.cover.assignment,
            dual: &run.cover.dual,
            pending_history: &run.cover.pending_history,
            profiles: &run.profiles,
        });
        assert!(report
            .checks
            .iter()
            .any(|c| c.name == "history-fully-loaded" && c.status == CheckStatus::Fail));
    }

    #[test]
    fn region_identity_of_the_dual_check() {
        let inst = i2();
        let run = solve_augmented(&inst, 3).unwrap();
        let aug = inst.augment_multiplicities(3).unwrap();
        let original = check_dual(&inst, &run.cover.dual);
        let augmented = check_dual(&aug, &run.cover.dual);
        assert_eq!(original.overall(), augmented.overall());
        assert!(original.overall());
    }

    #[test]
    fn subset_service_detection() {
        let inst = i2().augment_multiplicities(2).unwrap();
        let active = inst.positive_edges();
        let mult = inst.multiplicities();
        // Vertex 0 alone cannot serve both its edges (demand 3, cap 2).
        assert!(!subset_fully_serves(
            &inst,
            &active,
            &BTreeSet::from([0]),
            &mult
        ));
        // Both vertices together can.
        assert!(subset_fully_serves(
            &inst,
            &active,
            &BTreeSet::from([0, 1]),
            &mult
        ));
    }
}
