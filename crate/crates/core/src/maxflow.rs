//! Exact-rational max-flow on the bipartite demand/capacity networks used by
//! the solver: a source feeding one node per active hyperedge (arc capacity
//! = demand), interior arcs from each hyperedge to its member vertices, and
//! one arc per vertex into the sink (capacity = multiplicity * capacity).
//!
//! Flows are computed with shortest augmenting paths over a fixed arc
//! ordering, so results are bitwise deterministic. Interior capacities are
//! conceptually unbounded and materialized as the total demand of the
//! network, which no single arc can exceed.
//!
//! [`max_flow_min_through`] returns the max-flow that routes as little flow
//! as possible through a designated vertex's sink arc. It works in two
//! phases: first find a max-flow `F0` with that arc removed, then restore
//! the arc and augment to maximality `F`. Writing `phi(f)` for the value a
//! flow `f` routes through the other sink arcs: `phi` of any feasible flow
//! is at most `F0` (its path decomposition avoiding the designated arc is
//! feasible with the arc removed), every phase-two augmenting path ends at
//! some sink arc and raises `phi` exactly when it avoids the designated one,
//! and `phi` starts at `F0`. So no phase-two path can avoid the designated
//! arc, the result routes exactly `F - F0` through it, and no max-flow can
//! route less.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use core::fmt::Write as _;

use num_traits::Zero;

use crate::assignment::DemandAssignment;
use crate::instance::{EdgeId, Instance, VertexId};
use crate::rational::{rat_to_string, Rat};

const SOURCE: usize = 0;
const SINK: usize = 1;

#[derive(Debug, Clone)]
struct Arc {
    from: usize,
    to: usize,
    capacity: Rat,
}

/// Role of an arc, used when reading a computed flow back out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ArcKind {
    /// source -> edge-node, capacity d_e
    Source(EdgeId),
    /// edge-node -> vertex-node
    Interior(EdgeId, VertexId),
    /// vertex-node -> sink, capacity m_v * c_v
    Sink(VertexId),
}

/// The flow network over a vertex set `A` and a set of active hyperedges.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    node_count: usize,
    arcs: Vec<Arc>,
    kinds: Vec<ArcKind>,
    edge_nodes: BTreeMap<EdgeId, usize>,
    vertex_nodes: BTreeMap<VertexId, usize>,
    source_arc_of_edge: BTreeMap<EdgeId, usize>,
    sink_arc_of_vertex: BTreeMap<VertexId, usize>,
}

/// A computed flow, decoupled from the network internals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    /// Net outflow of the source (= net inflow of the sink).
    pub value: Rat,
    /// Flow on each source arc, keyed by hyperedge id.
    pub edge_inflow: BTreeMap<EdgeId, Rat>,
    /// Flow on each interior arc with positive flow.
    pub interior: BTreeMap<(EdgeId, VertexId), Rat>,
    /// Flow on each sink arc, keyed by vertex id.
    pub vertex_outflow: BTreeMap<VertexId, Rat>,
}

impl Flow {
    pub fn through_vertex(&self, v: VertexId) -> Rat {
        self.vertex_outflow
            .get(&v)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn edge_saturated(&self, e: EdgeId, demand: &Rat) -> bool {
        self.edge_inflow
            .get(&e)
            .map(|f| f == demand)
            .unwrap_or(demand.is_zero())
    }
}

/// Builds the flow network for vertex set `A`: one node per edge in
/// `E[A] ∩ active_edges`, one node per vertex of `A`, sink-arc capacities
/// `multiplicities[v] * c_v`. An empty `A` yields a network whose max-flow
/// is 0.
pub fn build_flow_graph(
    inst: &Instance,
    vertex_set: &BTreeSet<VertexId>,
    active_edges: &BTreeSet<EdgeId>,
    multiplicities: &[u64],
) -> FlowNetwork {
    let touched: Vec<EdgeId> = active_edges
        .iter()
        .copied()
        .filter(|&e| inst.edges[e].members.iter().any(|m| vertex_set.contains(m)))
        .collect();
    let total: Rat = touched
        .iter()
        .fold(Rat::zero(), |acc, &e| acc + &inst.edges[e].demand);

    let mut net = FlowNetwork {
        node_count: 2,
        arcs: Vec::new(),
        kinds: Vec::new(),
        edge_nodes: BTreeMap::new(),
        vertex_nodes: BTreeMap::new(),
        source_arc_of_edge: BTreeMap::new(),
        sink_arc_of_vertex: BTreeMap::new(),
    };
    for &e in &touched {
        let node = net.node_count;
        net.node_count += 1;
        net.edge_nodes.insert(e, node);
        net.source_arc_of_edge.insert(e, net.arcs.len());
        net.arcs.push(Arc {
            from: SOURCE,
            to: node,
            capacity: inst.edges[e].demand.clone(),
        });
        net.kinds.push(ArcKind::Source(e));
    }
    for &v in vertex_set {
        let node = net.node_count;
        net.node_count += 1;
        net.vertex_nodes.insert(v, node);
        let cap = Rat::from_integer(multiplicities[v].into()) * &inst.vertices[v].capacity;
        net.sink_arc_of_vertex.insert(v, net.arcs.len());
        net.arcs.push(Arc {
            from: node,
            to: SINK,
            capacity: cap,
        });
        net.kinds.push(ArcKind::Sink(v));
    }
    // Interior arcs in (edge id, member order): deterministic.
    for &e in &touched {
        let from = net.edge_nodes[&e];
        for &v in &inst.edges[e].members {
            if let Some(&to) = net.vertex_nodes.get(&v) {
                net.arcs.push(Arc {
                    from,
                    to,
                    capacity: total.clone(),
                });
                net.kinds.push(ArcKind::Interior(e, v));
            }
        }
    }
    net
}

impl FlowNetwork {
    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edge_nodes.keys().copied()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertex_nodes.keys().copied()
    }

    pub fn source_capacity(&self, e: EdgeId) -> Option<&Rat> {
        self.source_arc_of_edge
            .get(&e)
            .map(|&i| &self.arcs[i].capacity)
    }

    pub fn sink_capacity(&self, v: VertexId) -> Option<&Rat> {
        self.sink_arc_of_vertex
            .get(&v)
            .map(|&i| &self.arcs[i].capacity)
    }

    /// DOT rendering of the network, with flow values when given.
    pub fn to_dot(&self, flow: Option<&Flow>) -> String {
        let mut out = String::from("digraph flow_network {\n  rankdir=LR;\n");
        let _ = writeln!(out, "  s_plus [shape=diamond];\n  s_minus [shape=diamond];");
        for &e in self.edge_nodes.keys() {
            let _ = writeln!(out, "  e{} [shape=box];", e);
        }
        for &v in self.vertex_nodes.keys() {
            let _ = writeln!(out, "  v{} [shape=ellipse];", v);
        }
        for (i, arc) in self.arcs.iter().enumerate() {
            let (from, to) = match self.kinds[i] {
                ArcKind::Source(e) => (String::from("s_plus"), alloc::format!("e{}", e)),
                ArcKind::Interior(e, v) => (alloc::format!("e{}", e), alloc::format!("v{}", v)),
                ArcKind::Sink(v) => (alloc::format!("v{}", v), String::from("s_minus")),
            };
            let label = match (flow, self.kinds[i]) {
                (Some(f), ArcKind::Source(e)) => alloc::format!(
                    "{}/{}",
                    rat_to_string(&f.edge_inflow.get(&e).cloned().unwrap_or_else(Rat::zero)),
                    rat_to_string(&arc.capacity)
                ),
                (Some(f), ArcKind::Interior(e, v)) => alloc::format!(
                    "{}/{}",
                    rat_to_string(&f.interior.get(&(e, v)).cloned().unwrap_or_else(Rat::zero)),
                    rat_to_string(&arc.capacity)
                ),
                (Some(f), ArcKind::Sink(v)) => alloc::format!(
                    "{}/{}",
                    rat_to_string(&f.through_vertex(v)),
                    rat_to_string(&arc.capacity)
                ),
                (None, _) => rat_to_string(&arc.capacity),
            };
            let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", from, to, label);
        }
        out.push_str("}\n");
        out
    }
}

/// Mutable residual state for one run.
struct Residual {
    adj: Vec<Vec<usize>>,
    // Paired arcs: index 2i is the forward arc, 2i+1 its reverse.
    to: Vec<usize>,
    residual: Vec<Rat>,
}

impl Residual {
    fn new(net: &FlowNetwork) -> Self {
        let mut r = Residual {
            adj: alloc::vec![Vec::new(); net.node_count],
            to: Vec::with_capacity(net.arcs.len() * 2),
            residual: Vec::with_capacity(net.arcs.len() * 2),
        };
        for arc in &net.arcs {
            r.adj[arc.from].push(r.to.len());
            r.to.push(arc.to);
            r.residual.push(arc.capacity.clone());
            r.adj[arc.to].push(r.to.len());
            r.to.push(arc.from);
            r.residual.push(Rat::zero());
        }
        r
    }

    /// One BFS augmentation; returns the pushed amount (zero when the sink
    /// is unreachable).
    fn augment(&mut self) -> Rat {
        let n = self.adj.len();
        let mut parent_arc: Vec<Option<usize>> = alloc::vec![None; n];
        let mut queue: Vec<usize> = alloc::vec![SOURCE];
        let mut head = 0;
        'bfs: while head < queue.len() {
            let node = queue[head];
            head += 1;
            for &a in &self.adj[node] {
                let next = self.to[a];
                if next != SOURCE && parent_arc[next].is_none() && !self.residual[a].is_zero() {
                    parent_arc[next] = Some(a);
                    if next == SINK {
                        break 'bfs;
                    }
                    queue.push(next);
                }
            }
        }
        let Some(_) = parent_arc[SINK] else {
            return Rat::zero();
        };
        let mut bottleneck: Option<Rat> = None;
        let mut node = SINK;
        while node != SOURCE {
            let a = parent_arc[node].expect("path arc");
            let r = &self.residual[a];
            bottleneck = Some(match bottleneck {
                None => r.clone(),
                Some(b) if r < &b => r.clone(),
                Some(b) => b,
            });
            node = self.to[a ^ 1];
        }
        let delta = bottleneck.expect("nonempty path");
        let mut node = SINK;
        while node != SOURCE {
            let a = parent_arc[node].expect("path arc");
            self.residual[a] -= &delta;
            let back = &self.residual[a ^ 1] + &delta;
            self.residual[a ^ 1] = back;
            node = self.to[a ^ 1];
        }
        delta
    }

    fn run_to_maximality(&mut self) -> Rat {
        let mut value = Rat::zero();
        loop {
            let delta = self.augment();
            if delta.is_zero() {
                return value;
            }
            value += delta;
        }
    }

    fn extract(&self, net: &FlowNetwork, value: Rat) -> Flow {
        let mut flow = Flow {
            value,
            edge_inflow: BTreeMap::new(),
            interior: BTreeMap::new(),
            vertex_outflow: BTreeMap::new(),
        };
        for (i, arc) in net.arcs.iter().enumerate() {
            let sent = &arc.capacity - &self.residual[2 * i];
            match net.kinds[i] {
                ArcKind::Source(e) => {
                    flow.edge_inflow.insert(e, sent);
                }
                ArcKind::Interior(e, v) => {
                    if !sent.is_zero() {
                        flow.interior.insert((e, v), sent);
                    }
                }
                ArcKind::Sink(v) => {
                    flow.vertex_outflow.insert(v, sent);
                }
            }
        }
        flow
    }
}

/// Maximum flow, deterministic for the network's fixed arc ordering.
pub fn max_flow(net: &FlowNetwork) -> Flow {
    let mut state = Residual::new(net);
    let value = state.run_to_maximality();
    state.extract(net, value)
}

/// A max-flow minimizing the flow through `u`'s sink arc among all
/// max-flows (see the module docs for why the two-phase method achieves
/// exactly `F - F0`). `u` must have a node in the network.
pub fn max_flow_min_through(net: &FlowNetwork, u: VertexId) -> Flow {
    let sink_arc = *net
        .sink_arc_of_vertex
        .get(&u)
        .expect("designated vertex has a node in the network");
    let mut state = Residual::new(net);
    // Phase one: suppress u's sink arc entirely.
    let full_cap = core::mem::replace(&mut state.residual[2 * sink_arc], Rat::zero());
    let base = state.run_to_maximality();
    debug_assert!(state.residual[2 * sink_arc + 1].is_zero());
    // Phase two: restore the arc and augment to maximality.
    state.residual[2 * sink_arc] = full_cap;
    let extra = state.run_to_maximality();
    state.extract(net, base + extra)
}

/// Assignment induced by a flow: one entry per interior arc with positive
/// flow.
pub fn flow_to_assignment(flow: &Flow) -> DemandAssignment {
    flow.interior
        .iter()
        .map(|(&(e, v), amount)| ((e, v), amount.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::i1;
    use crate::instance::{Edge, Instance, Vertex};
    use crate::rational::{rat, rat_int};

    fn net_of(
        vertices: Vec<(i64, u64)>, // (capacity, multiplicity)
        edges: Vec<(Vec<usize>, Rat)>,
    ) -> (Instance, FlowNetwork) {
        let inst = Instance::new(
            vertices
                .into_iter()
                .enumerate()
                .map(|(id, (c, m))| Vertex {
                    id,
                    weight: rat_int(1),
                    capacity: rat_int(c),
                    multiplicity: m,
                })
                .collect(),
            edges
                .into_iter()
                .enumerate()
                .map(|(id, (members, demand))| Edge {
                    id,
                    members,
                    demand,
                })
                .collect(),
        );
        let all: BTreeSet<usize> = (0..inst.vertices.len()).collect();
        let active = inst.positive_edges();
        let mult = inst.multiplicities();
        let net = build_flow_graph(&inst, &all, &active, &mult);
        (inst, net)
    }

    #[test]
    fn three_arc_network() {
        let (_, net) = net_of(
            alloc::vec![(4, 1)],
            alloc::vec![(alloc::vec![0], rat_int(2))],
        );
        assert_eq!(net.arcs.len(), 3);
        assert_eq!(net.source_capacity(0).unwrap(), &rat_int(2));
        assert_eq!(net.sink_capacity(0).unwrap(), &rat_int(4));
        let flow = max_flow(&net);
        assert_eq!(flow.value, rat_int(2));
        assert!(flow.edge_saturated(0, &rat_int(2)));
    }

    #[test]
    fn empty_vertex_set_gives_zero_flow() {
        let inst = i1();
        let net = build_flow_graph(
            &inst,
            &BTreeSet::new(),
            &inst.positive_edges(),
            &inst.multiplicities(),
        );
        assert_eq!(max_flow(&net).value, rat_int(0));
    }

    #[test]
    fn augmented_i1_sink_capacities() {
        let inst = i1().augment_multiplicities(2).unwrap();
        let all: BTreeSet<usize> = [0, 1].into();
        let net = build_flow_graph(&inst, &all, &inst.positive_edges(), &inst.multiplicities());
        assert_eq!(net.sink_capacity(0).unwrap(), &rat_int(4));
        assert_eq!(net.sink_capacity(1).unwrap(), &rat_int(4));
    }

    #[test]
    fn sink_bottleneck() {
        let (_, net) = net_of(
            alloc::vec![(4, 1)],
            alloc::vec![(alloc::vec![0], rat_int(2)), (alloc::vec![0], rat_int(3))],
        );
        assert_eq!(max_flow(&net).value, rat_int(4));
    }

    #[test]
    fn min_through_when_other_routes_exist() {
        // Both vertices can absorb the whole edge; min-through(0) routes 0
        // through vertex 0, plain max-flow is free to use it.
        let (_, net) = net_of(
            alloc::vec![(2, 1), (2, 1)],
            alloc::vec![(alloc::vec![0, 1], rat_int(2))],
        );
        let plain = max_flow(&net);
        let constrained = max_flow_min_through(&net, 0);
        assert_eq!(plain.value, rat_int(2));
        assert_eq!(constrained.value, rat_int(2));
        assert_eq!(constrained.through_vertex(0), rat_int(0));
        assert!(constrained.through_vertex(0) <= plain.through_vertex(0));
    }

    #[test]
    fn min_through_when_only_u_reaches_sink() {
        let (_, net) = net_of(
            alloc::vec![(5, 1)],
            alloc::vec![(alloc::vec![0], rat_int(3))],
        );
        let constrained = max_flow_min_through(&net, 0);
        assert_eq!(constrained.value, rat_int(3));
        assert_eq!(constrained.through_vertex(0), rat_int(3));
    }

    #[test]
    fn assignment_extraction_conserves_edges() {
        let (inst, net) = net_of(
            alloc::vec![(1, 1), (3, 1)],
            alloc::vec![(alloc::vec![0, 1], rat(3, 2)), (alloc::vec![1], rat(1, 2)),],
        );
        let flow = max_flow(&net);
        let h = flow_to_assignment(&flow);
        for e in &inst.edges {
            assert_eq!(
                h.assigned(e.id),
                flow.edge_inflow
                    .get(&e.id)
                    .cloned()
                    .unwrap_or_else(Rat::zero)
            );
        }
        assert!(!flow_to_assignment(&max_flow_min_through(&net, 1)).is_empty());
        let zero_net = build_flow_graph(
            &inst,
            &BTreeSet::new(),
            &inst.positive_edges(),
            &inst.multiplicities(),
        );
        assert!(flow_to_assignment(&max_flow(&zero_net)).is_empty());
    }

    #[test]
    fn dot_dump_mentions_every_arc() {
        let (_, net) = net_of(
            alloc::vec![(4, 1)],
            alloc::vec![(alloc::vec![0], rat_int(2))],
        );
        let dot = net.to_dot(None);
        assert!(dot.contains("s_plus -> e0"));
        assert!(dot.contains("e0 -> v0"));
        assert!(dot.contains("v0 -> s_minus"));
        let with_flow = net.to_dot(Some(&max_flow(&net)));
        assert!(with_flow.contains("2/2"));
    }
}
