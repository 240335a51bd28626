//! Deterministic, seedable instance generators.
//!
//! All randomness comes from a SplitMix64 stream seeded with the caller's
//! 64-bit seed, so identical parameters produce identical instances across
//! runs, platforms and reimplementations. The draw protocol is part of the
//! contract:
//!
//! * `next_u64`: SplitMix64 (Steele, Lea, Flood 2014): state advances by
//!   `0x9E3779B97F4A7C15`; the output mixes the state with the
//!   xor-shift-multiply constants `0xBF58476D1CE4E5B9` and
//!   `0x94D049BB133111EB`, final shift 31.
//! * integers in `[lo, hi]`: `lo + next_u64() % (hi - lo + 1)`.
//! * rationals in `[lo, hi]` with denominators up to `Q`: draw a
//!   denominator `q` uniformly from `[1, Q]`, advance `q` cyclically until
//!   some integer `p` lies in `[lo*q, hi*q]` (guaranteed to happen because
//!   range endpoints must themselves have denominators at most `Q`), then
//!   draw `p` uniformly from that interval and return `p/q`.
//! * random edges: size `s` uniform in `[1, f]`, members via a partial
//!   Fisher-Yates shuffle of `0..n` taking the first `s` entries, sorted.
//! * draw order for [`gen_random`]: per vertex weight, capacity,
//!   multiplicity (vertices in id order), then per edge size, members,
//!   demand (edges in id order). Feasibilization draws, when any, follow.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::instance::{Edge, Instance, Vertex, VertexId};
use crate::rational::{rat, Rat};

/// SplitMix64; the single source of randomness for generation.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[lo, hi]` (inclusive); `lo <= hi` required.
    pub fn int_in(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        let span = hi - lo + 1;
        lo + self.next_u64() % span
    }

    /// Partial Fisher-Yates: `count` distinct values from `0..n`, sorted.
    pub fn distinct_sorted(&mut self, n: usize, count: usize) -> Vec<usize> {
        debug_assert!(count <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..count {
            let j = i + self.int_in(0, (n - i - 1) as u64) as usize;
            pool.swap(i, j);
        }
        let mut taken: Vec<usize> = pool[..count].to_vec();
        taken.sort_unstable();
        taken
    }
}

/// Closed rational interval with a denominator cap; endpoints must respect
/// the cap themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatRange {
    pub lo: Rat,
    pub hi: Rat,
    pub max_denominator: u64,
}

impl RatRange {
    pub fn new(lo: Rat, hi: Rat, max_denominator: u64) -> Self {
        RatRange {
            lo,
            hi,
            max_denominator,
        }
    }

    /// Integer-only range `[lo, hi]`.
    pub fn integers(lo: i64, hi: i64) -> Self {
        RatRange {
            lo: rat(lo, 1),
            hi: rat(hi, 1),
            max_denominator: 1,
        }
    }

    fn valid(&self) -> bool {
        self.max_denominator >= 1
            && self.lo <= self.hi
            && !self.lo.is_negative()
            && self.lo.denom() <= &BigInt::from(self.max_denominator)
            && self.hi.denom() <= &BigInt::from(self.max_denominator)
    }

    /// Draws per the protocol in the module docs.
    pub fn sample(&self, rng: &mut SplitMix64) -> Rat {
        let q0 = rng.int_in(1, self.max_denominator);
        for step in 0..self.max_denominator {
            let q = (q0 - 1 + step) % self.max_denominator + 1;
            let qi = BigInt::from(q);
            let lo_scaled = (&self.lo * Rat::from_integer(qi.clone()))
                .ceil()
                .to_integer();
            let hi_scaled = (&self.hi * Rat::from_integer(qi.clone()))
                .floor()
                .to_integer();
            if lo_scaled > hi_scaled {
                continue;
            }
            let span = (&hi_scaled - &lo_scaled + 1u32)
                .to_u64()
                .expect("range span fits in u64");
            let p = lo_scaled + BigInt::from(rng.next_u64() % span);
            return Rat::new(p, qi);
        }
        unreachable!("range endpoints satisfy the denominator cap");
    }
}

/// Inclusive integer range for multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: u64,
    pub hi: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub max_edge_size: usize,
    pub demand: RatRange,
    pub capacity: RatRange,
    pub weight: RatRange,
    pub multiplicity: IntRange,
    pub seed: u64,
    pub ensure_feasible: bool,
}

impl GenParams {
    /// Defaults matched to the desk-scale test suites: small vertex and
    /// edge counts with denominators up to 4.
    pub fn small(vertex_count: usize, edge_count: usize, max_edge_size: usize, seed: u64) -> Self {
        GenParams {
            vertex_count,
            edge_count,
            max_edge_size,
            demand: RatRange::new(rat(1, 4), rat(3, 1), 4),
            capacity: RatRange::new(rat(1, 4), rat(3, 1), 4),
            weight: RatRange::new(rat(0, 1), rat(4, 1), 2),
            multiplicity: IntRange { lo: 0, hi: 2 },
            seed,
            ensure_feasible: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    BadParams(String),
    /// Feasibilization failed within the retry budget.
    Uncoverable(String),
}

impl core::fmt::Display for GenError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GenError::BadParams(m) => write!(f, "bad generator parameters: {}", m),
            GenError::Uncoverable(m) => write!(f, "cannot make instance feasible: {}", m),
        }
    }
}

impl core::error::Error for GenError {}

const CAPACITY_RETRIES: usize = 32;
const FEASIBILIZE_STEPS: usize = 100_000;

/// Random instance per the documented draw protocol. With
/// `ensure_feasible`, edges whose members all lack capacity get their
/// members' capacities resampled (bounded retries), and multiplicities are
/// then raised one unit at a time, cycling over positive-capacity vertices
/// in id order, until the instance is feasible.
pub fn gen_random(params: &GenParams) -> Result<Instance, GenError> {
    if params.vertex_count == 0 {
        return Err(GenError::BadParams(String::from(
            "vertex count must be positive",
        )));
    }
    if params.max_edge_size < 1 || params.max_edge_size > params.vertex_count {
        return Err(GenError::BadParams(String::from(
            "max edge size must lie in [1, vertex count]",
        )));
    }
    if !params.demand.valid() || !params.capacity.valid() || !params.weight.valid() {
        return Err(GenError::BadParams(String::from(
            "ranges must be nonempty, nonnegative, with endpoint denominators within the cap",
        )));
    }
    if params.multiplicity.lo > params.multiplicity.hi {
        return Err(GenError::BadParams(String::from(
            "empty multiplicity range",
        )));
    }
    let mut rng = SplitMix64::new(params.seed);
    let mut vertices: Vec<Vertex> = (0..params.vertex_count)
        .map(|id| {
            let weight = params.weight.sample(&mut rng);
            let capacity = params.capacity.sample(&mut rng);
            let multiplicity = rng.int_in(params.multiplicity.lo, params.multiplicity.hi);
            Vertex {
                id,
                weight,
                capacity,
                multiplicity,
            }
        })
        .collect();
    let edges: Vec<Edge> = (0..params.edge_count)
        .map(|id| {
            let size = rng.int_in(1, params.max_edge_size as u64) as usize;
            let members = rng.distinct_sorted(params.vertex_count, size);
            let demand = params.demand.sample(&mut rng);
            Edge {
                id,
                members,
                demand,
            }
        })
        .collect();
    let mut inst = Instance::new(vertices, edges);
    debug_assert!(inst.validate().ok());
    if !params.ensure_feasible {
        return Ok(inst);
    }

    // An edge whose members all have zero capacity can never be covered:
    // resample those capacities.
    for e in 0..inst.edges.len() {
        if !inst.edges[e].demand.is_positive() {
            continue;
        }
        let mut tries = 0;
        while inst.edges[e]
            .members
            .iter()
            .all(|&v| inst.vertices[v].capacity.is_zero())
        {
            tries += 1;
            if tries > CAPACITY_RETRIES {
                return Err(GenError::Uncoverable(alloc::format!(
                    "edge {} kept drawing zero capacities for all members",
                    e
                )));
            }
            let members = inst.edges[e].members.clone();
            for v in members {
                inst.vertices[v].capacity = params.capacity.sample(&mut rng);
            }
        }
    }
    vertices = inst.vertices;
    let edges = inst.edges;
    let serving: Vec<VertexId> = (0..params.vertex_count)
        .filter(|&v| vertices[v].capacity.is_positive())
        .collect();
    inst = Instance::new(vertices, edges);
    let mut cursor = 0usize;
    let mut steps = 0usize;
    while !inst.is_feasible() {
        steps += 1;
        if steps > FEASIBILIZE_STEPS || serving.is_empty() {
            return Err(GenError::Uncoverable(String::from(
                "multiplicity raising did not reach feasibility",
            )));
        }
        let v = serving[cursor % serving.len()];
        cursor += 1;
        inst.vertices[v].multiplicity += 1;
    }
    Ok(inst)
}

/// Adversarial families.
///
/// * `star`: one low-capacity hub on every edge; the hub's capacity cannot
///   absorb the total demand, which exercises the pending path.
/// * `tight`: a ring where total demand equals total selected capacity
///   exactly; removing any single multiplicity breaks feasibility.
/// * `heavy_light`: paired vertices where one must saturate overloaded and
///   the other must saturate with room to spare, so every trace contains
///   both saturation modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Star,
    Tight,
    HeavyLight,
}

impl Family {
    pub fn parse(name: &str) -> Option<Family> {
        match name {
            "star" => Some(Family::Star),
            "tight" => Some(Family::Tight),
            "heavy_light" => Some(Family::HeavyLight),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::Tight => "tight",
            Family::HeavyLight => "heavy_light",
        }
    }
}

pub fn gen_family(family: Family, size: usize, seed: u64) -> Instance {
    let mut rng = SplitMix64::new(seed);
    match family {
        Family::Star => {
            let size = size.max(2);
            let leaf_demand = RatRange::new(rat(1, 2), rat(2, 1), 2);
            let leaf_weight = RatRange::new(rat(2, 1), rat(5, 1), 2);
            let hub_weight = RatRange::new(rat(1, 4), rat(1, 1), 4);
            let hub_capacity = RatRange::new(rat(1, 2), rat(1, 1), 4);
            let demands: Vec<Rat> = (0..size).map(|_| leaf_demand.sample(&mut rng)).collect();
            let mut vertices = alloc::vec![Vertex {
                id: 0,
                weight: hub_weight.sample(&mut rng),
                capacity: hub_capacity.sample(&mut rng),
                multiplicity: 1,
            }];
            for (i, d) in demands.iter().enumerate() {
                vertices.push(Vertex {
                    id: i + 1,
                    weight: leaf_weight.sample(&mut rng),
                    capacity: d.clone(),
                    multiplicity: 1,
                });
            }
            let edges = demands
                .into_iter()
                .enumerate()
                .map(|(i, demand)| Edge {
                    id: i,
                    members: alloc::vec![0, i + 1],
                    demand,
                })
                .collect();
            Instance::new(vertices, edges)
        }
        Family::Tight => {
            let size = size.max(3);
            let capacity = RatRange::new(rat(1, 2), rat(3, 1), 4).sample(&mut rng);
            let weight_range = RatRange::new(rat(1, 2), rat(4, 1), 2);
            let vertices = (0..size)
                .map(|id| Vertex {
                    id,
                    weight: weight_range.sample(&mut rng),
                    capacity: capacity.clone(),
                    multiplicity: 1,
                })
                .collect();
            let edges = (0..size)
                .map(|id| {
                    let mut members = alloc::vec![id, (id + 1) % size];
                    members.sort_unstable();
                    Edge {
                        id,
                        members,
                        demand: capacity.clone(),
                    }
                })
                .collect();
            Instance::new(vertices, edges)
        }
        Family::HeavyLight => {
            let size = size.max(1);
            let heavy_weight = RatRange::new(rat(1, 4), rat(2, 1), 4);
            let light_weight = RatRange::new(rat(1, 1), rat(4, 1), 2);
            let mut vertices = Vec::new();
            let mut edges = Vec::new();
            for pair in 0..size {
                let heavy = 2 * pair;
                let light = 2 * pair + 1;
                vertices.push(Vertex {
                    id: heavy,
                    weight: heavy_weight.sample(&mut rng),
                    capacity: rat(1, 1),
                    multiplicity: 2,
                });
                vertices.push(Vertex {
                    id: light,
                    weight: light_weight.sample(&mut rng),
                    capacity: rat(10, 1),
                    multiplicity: 1,
                });
                // Overload the heavy vertex, keep the light one roomy.
                edges.push(Edge {
                    id: 3 * pair,
                    members: alloc::vec![heavy],
                    demand: rat(2, 1),
                });
                edges.push(Edge {
                    id: 3 * pair + 1,
                    members: alloc::vec![light],
                    demand: rat(1, 1),
                });
                edges.push(Edge {
                    id: 3 * pair + 2,
                    members: alloc::vec![heavy, light],
                    demand: rat(1, 2),
                });
            }
            Instance::new(vertices, edges)
        }
    }
}
