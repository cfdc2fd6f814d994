use serde::Serialize;

/// Caps on every bounded search. Exceeding a cap yields `Unknown` or a
/// truncated result, never a wrong answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Budget {
    /// Search-tree node cap.
    pub max_nodes: u64,
    /// Largest denominator considered by rational searches.
    pub max_denominator: u64,
    /// Largest absolute coordinate considered by lattice-region searches.
    pub max_coordinate: i64,
    pub max_results: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 2_000_000, max_denominator: 12, max_coordinate: 8, max_results: 10_000 }
    }
}

impl Budget {
    pub fn with_nodes(mut self, n: u64) -> Self {
        self.max_nodes = n.max(1);
        self
    }

    pub fn with_denominator(mut self, d: u64) -> Self {
        self.max_denominator = d.max(1);
        self
    }

    pub fn with_coordinate(mut self, c: i64) -> Self {
        self.max_coordinate = c.max(1);
        self
    }

    pub fn with_results(mut self, r: usize) -> Self {
        self.max_results = r.max(1);
        self
    }

    /// Componentwise `<=`.
    pub fn le(&self, other: &Budget) -> bool {
        self.max_nodes <= other.max_nodes
            && self.max_denominator <= other.max_denominator
            && self.max_coordinate <= other.max_coordinate
            && self.max_results <= other.max_results
    }

    pub(crate) fn meter(&self) -> Meter {
        Meter { used: 0, limit: self.max_nodes }
    }
}

/// Node counter shared by one search.
#[derive(Debug)]
pub(crate) struct Meter {
    used: u64,
    limit: u64,
}

impl Meter {
    pub(crate) fn with_limit(limit: u64) -> Self {
        Meter { used: 0, limit }
    }

    /// Counts one node; false once the cap is exceeded.
    pub(crate) fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.used > self.limit
    }
}
