//! Spare Bell-pair store keyed by unordered node pair.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Unordered pair of distinct QPU indices, stored as `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePair {
    lo: u32,
    hi: u32,
}

impl NodePair {
    /// Accepts only the canonical form `lo < hi`.
    pub fn new(lo: u32, hi: u32) -> Result<Self> {
        if lo >= hi {
            return Err(Error::NonCanonicalPair { lo, hi });
        }
        Ok(NodePair { lo, hi })
    }

    /// Canonicalizes `(a, b)` in either order; rejects `a == b`.
    pub fn unordered(a: u32, b: u32) -> Result<Self> {
        NodePair::new(a.min(b), a.max(b))
    }

    pub fn lo(&self) -> u32 {
        self.lo
    }

    pub fn hi(&self) -> u32 {
        self.hi
    }

    /// Whether both endpoints are valid indices in a network of `n` QPUs.
    pub fn fits(&self, n: u32) -> bool {
        self.hi < n
    }
}

impl fmt::Display for NodePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Bounded per-pair store of heralded spare Bell pairs.
///
/// Stored pairs never expire. At most one spare is accepted per deposit call
/// regardless of how many surplus successes a round produced.
#[derive(Debug, Clone, Default)]
pub struct EntanglementCache {
    capacity: u32,
    stored: HashMap<NodePair, u32>,
    hits: u64,
    deposits: u64,
}

impl EntanglementCache {
    pub fn new(capacity: u32) -> Self {
        EntanglementCache {
            capacity,
            ..Default::default()
        }
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    /// Spares currently held for `pair`.
    pub fn stored(&self, pair: NodePair) -> u32 {
        self.stored.get(&pair).copied().unwrap_or(0)
    }

    /// Total spares held across all pairs.
    pub fn total_stored(&self) -> u64 {
        self.stored.values().map(|&c| u64::from(c)).sum()
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn deposits(&self) -> u64 {
        self.deposits
    }

    /// Takes one spare for `pair` if available.
    pub fn try_consume(&mut self, pair: NodePair) -> bool {
        match self.stored.get_mut(&pair) {
            Some(count) if *count > 0 => {
                *count -= 1;
                if *count == 0 {
                    self.stored.remove(&pair);
                }
                self.hits += 1;
                true
            }
            _ => false,
        }
    }

    /// Offers `surplus` extra same-round successes; keeps at most one of them
    /// if there is room. Returns how many were stored.
    pub fn deposit(&mut self, pair: NodePair, surplus: u32) -> u32 {
        let held = self.stored(pair);
        let room = self.capacity.saturating_sub(held);
        let take = surplus.min(1).min(room);
        if take > 0 {
            *self.stored.entry(pair).or_insert(0) += take;
            self.deposits += u64::from(take);
        }
        take
    }

    /// Empties the store and zeroes both counters.
    pub fn reset(&mut self) {
        self.stored.clear();
        self.hits = 0;
        self.deposits = 0;
    }
}
