//! Union-find with undo, used to keep edge-subset searches acyclic.
//!
//! Union by size without path compression keeps every union reversible in
//! O(1), at the cost of O(log n) finds.

#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    // (absorbed root, surviving root) for each successful union.
    history: Vec<(usize, usize)>,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len).collect(),
            size: vec![1; len],
            history: Vec::new(),
        }
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    pub fn same_set(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Merges the sets of `a` and `b`. Returns `false` (and records nothing)
    /// when they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.history.push((rb, ra));
        true
    }

    /// Reverts the most recent successful union.
    pub fn undo(&mut self) {
        let (absorbed, survivor) = self.history.pop().expect("undo without a union");
        self.parent[absorbed] = absorbed;
        self.size[survivor] -= self.size[absorbed];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_and_undo() {
        let mut sets = DisjointSets::new(5);
        assert!(sets.union(0, 1));
        assert!(sets.union(2, 3));
        assert!(sets.union(1, 3));
        assert!(!sets.union(0, 2));
        assert!(sets.same_set(0, 3));
        sets.undo();
        assert!(!sets.same_set(0, 3));
        assert!(sets.same_set(2, 3));
        sets.undo();
        sets.undo();
        assert!((0..5).all(|i| sets.find(i) == i));
    }
}
