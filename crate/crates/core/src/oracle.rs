//! Exact optimum for small instances by exhaustive enumeration of
//! multiplicity vectors, each tested for feasibility with a max-flow. The
//! ground truth behind every ratio test in the suite.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::assignment::DemandAssignment;
use crate::certify;
use crate::instance::{Instance, VertexId};
use crate::maxflow;
use crate::rational::Rat;

/// Default enumeration budget: the product of `(m_v + 1)` over all vertices
/// must not exceed this.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub feasible: bool,
    /// Present iff `feasible`.
    pub opt_cost: Option<Rat>,
    pub witness_x: Vec<u64>,
    pub witness_h: DemandAssignment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The search space exceeds the budget.
    BudgetExceeded {
        required: u64,
        budget: u64,
    },
    Augment(crate::instance::AugmentError),
}

impl core::fmt::Display for OracleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OracleError::BudgetExceeded { required, budget } => write!(
                f,
                "too large for oracle: {} multiplicity vectors exceed the budget of {}",
                required, budget
            ),
            OracleError::Augment(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for OracleError {}

fn feasible_with(inst: &Instance, x: &[u64]) -> Option<maxflow::Flow> {
    let all: BTreeSet<VertexId> = (0..inst.vertices.len()).collect();
    let active = inst.positive_edges();
    let net = maxflow::build_flow_graph(inst, &all, &active, x);
    let flow = maxflow::max_flow(&net);
    (flow.value == inst.total_positive_demand()).then_some(flow)
}

struct Search<'a> {
    inst: &'a Instance,
    /// Vertex order for branching: descending weight, then ascending id,
    /// to commit expensive choices early and prune sooner.
    order: Vec<VertexId>,
    best_cost: Option<Rat>,
    best_x: Vec<u64>,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize, x: &mut Vec<u64>, committed: Rat) {
        if let Some(best) = &self.best_cost {
            // Strict pruning so equal-cost leaves still compete on the
            // lexicographic tie-break.
            if &committed > best {
                return;
            }
        }
        if depth == self.order.len() {
            if feasible_with(self.inst, x).is_some() {
                let better = match &self.best_cost {
                    None => true,
                    Some(best) => {
                        &committed < best || (&committed == best && x[..] < self.best_x[..])
                    }
                };
                if better {
                    self.best_cost = Some(committed);
                    self.best_x = x.clone();
                }
            }
            return;
        }
        let v = self.order[depth];
        // Zero-capacity vertices can serve nothing; buying there is never
        // needed and the lexicographic tie-break prefers 0 anyway.
        let top = if self.inst.vertices[v].capacity.is_zero() {
            0
        } else {
            self.inst.vertices[v].multiplicity
        };
        for units in 0..=top {
            x[v] = units;
            let cost = &committed + &self.inst.vertices[v].weight * Rat::from_integer(units.into());
            self.descend(depth + 1, x, cost);
        }
        x[v] = 0;
    }
}

/// Exhaustive optimum. Enumerates every multiplicity vector within the
/// available multiplicities (branch and bound on the committed cost,
/// vertices in descending-weight order), testing feasibility by max-flow.
/// Returns the cheapest feasible vector, ties broken by the
/// lexicographically smallest vector in vertex-id order, together with a
/// witness assignment extracted from its feasibility flow.
pub fn exact_opt(inst: &Instance, budget: u64) -> Result<OracleResult, OracleError> {
    let mut required: u64 = 1;
    for v in &inst.vertices {
        required = required.saturating_mul(v.multiplicity + 1);
        if required > budget {
            return Err(OracleError::BudgetExceeded { required, budget });
        }
    }
    // Quick verdict: infeasible even with everything selected.
    if feasible_with(inst, &inst.multiplicities()).is_none() {
        return Ok(OracleResult {
            feasible: false,
            opt_cost: None,
            witness_x: Vec::new(),
            witness_h: DemandAssignment::new(),
        });
    }
    let mut order: Vec<VertexId> = (0..inst.vertices.len()).collect();
    order.sort_by(|&a, &b| {
        inst.vertices[b]
            .weight
            .cmp(&inst.vertices[a].weight)
            .then(a.cmp(&b))
    });
    let mut search = Search {
        inst,
        order,
        best_cost: None,
        best_x: Vec::new(),
    };
    let mut x = alloc::vec![0u64; inst.vertices.len()];
    search.descend(0, &mut x, Rat::zero());
    let best_x = search.best_x;
    let flow = feasible_with(inst, &best_x).expect("incumbent is feasible");
    let witness_h = maxflow::flow_to_assignment(&flow);
    // Report the multiplicities the witness actually uses; they can only
    // round down from the enumerated vector and stay optimal.
    let witness_x = witness_h.multiplicities(inst);
    let opt_cost = inst
        .vertices
        .iter()
        .zip(&witness_x)
        .fold(Rat::zero(), |acc, (v, &x)| {
            acc + &v.weight * Rat::from_integer(x.into())
        });
    debug_assert_eq!(Some(&opt_cost), search.best_cost.as_ref());
    debug_assert!(certify::check_primal(inst, 1, &witness_h).overall());
    Ok(OracleResult {
        feasible: true,
        opt_cost: Some(opt_cost),
        witness_x,
        witness_h,
    })
}

/// [`exact_opt`] on the instance with multiplicities scaled by `beta`.
pub fn exact_opt_augmented(
    inst: &Instance,
    beta: u64,
    budget: u64,
) -> Result<OracleResult, OracleError> {
    let aug = inst
        .augment_multiplicities(beta)
        .map_err(OracleError::Augment)?;
    exact_opt(&aug, budget)
}
