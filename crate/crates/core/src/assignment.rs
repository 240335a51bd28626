//! Sparse demand assignments: how much of each edge's demand is routed to
//! each of its member vertices.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::instance::{EdgeId, Instance, VertexId};
use crate::rational::Rat;

/// Sparse map `(edge, vertex) -> amount`. Zero entries are never stored, so
/// iteration order (sorted by edge, then vertex) is canonical.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DemandAssignment {
    entries: BTreeMap<(EdgeId, VertexId), Rat>,
}

impl DemandAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, edge: EdgeId, vertex: VertexId) -> Rat {
        self.entries
            .get(&(edge, vertex))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Sets an amount, dropping the entry when it is zero. Panics on
    /// negative amounts; assignments are nonnegative by construction.
    pub fn set(&mut self, edge: EdgeId, vertex: VertexId, amount: Rat) {
        assert!(!amount.is_negative(), "negative assignment amount");
        if amount.is_zero() {
            self.entries.remove(&(edge, vertex));
        } else {
            self.entries.insert((edge, vertex), amount);
        }
    }

    pub fn add(&mut self, edge: EdgeId, vertex: VertexId, delta: &Rat) {
        let current = self.get(edge, vertex);
        self.set(edge, vertex, current + delta);
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, VertexId, &Rat)> {
        self.entries.iter().map(|(&(e, v), amount)| (e, v, amount))
    }

    /// Total demand vertex `v` has received.
    pub fn received(&self, v: VertexId) -> Rat {
        self.entries
            .iter()
            .filter(|(&(_, vertex), _)| vertex == v)
            .fold(Rat::zero(), |acc, (_, amount)| acc + amount)
    }

    /// Total amount assigned from edge `e`.
    pub fn assigned(&self, e: EdgeId) -> Rat {
        self.entries
            .iter()
            .filter(|(&(edge, _), _)| edge == e)
            .fold(Rat::zero(), |acc, (_, amount)| acc + amount)
    }

    /// Merges `other` into `self`, adding amounts entrywise.
    pub fn merge(&mut self, other: &DemandAssignment) {
        for (e, v, amount) in other.iter() {
            self.add(e, v, amount);
        }
    }

    /// Multiplicity vector induced by the assignment:
    /// `ceil(received / capacity)` per vertex, 0 for zero-capacity vertices
    /// (which can never receive demand).
    pub fn multiplicities(&self, inst: &Instance) -> Vec<u64> {
        use num_traits::ToPrimitive;
        inst.vertices
            .iter()
            .map(|v| {
                let received = self.received(v.id);
                if v.capacity.is_zero() {
                    debug_assert!(received.is_zero(), "demand routed to zero-capacity vertex");
                    0
                } else {
                    (received / &v.capacity)
                        .ceil()
                        .to_integer()
                        .to_u64()
                        .expect("multiplicity fits in u64")
                }
            })
            .collect()
    }
}

impl FromIterator<((EdgeId, VertexId), Rat)> for DemandAssignment {
    fn from_iter<T: IntoIterator<Item = ((EdgeId, VertexId), Rat)>>(iter: T) -> Self {
        let mut a = DemandAssignment::new();
        for ((e, v), amount) in iter {
            a.set(e, v, amount);
        }
        a
    }
}
