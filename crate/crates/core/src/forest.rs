//! Cycle detection for small edge sets.

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Joins the sets of `a` and `b`. Returns false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// True iff the undirected edge set on vertices `1..=n` has no cycle.
///
/// Loops and repeated edges count as cycles.
pub fn is_forest(edges: &[(u8, u8)], n: usize) -> bool {
    // |E| >= n already forces a cycle
    if edges.len() >= n.max(1) && !edges.is_empty() {
        return false;
    }
    let mut sets = DisjointSets::new(n);
    edges.iter().all(|&(a, b)| {
        assert!(
            (1..=n).contains(&(a as usize)) && (1..=n).contains(&(b as usize)),
            "edge ({a},{b}) has an endpoint outside 1..={n}"
        );
        sets.union(a as usize - 1, b as usize - 1)
    })
}

/// True iff the graph given by neighbor masks (bit `v` = vertex `v`, 0-based)
/// connects all `n` vertices.
#[inline]
pub(crate) fn masks_connected(adj: &[u32], n: usize) -> bool {
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut seen = 1u32;
    let mut frontier = 1u32;
    while frontier != 0 {
        let mut next = 0u32;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen == full
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_is_forest() {
        assert!(is_forest(&[(1, 2), (2, 3), (3, 4)], 4));
    }

    #[test]
    fn triangle_is_not() {
        assert!(!is_forest(&[(1, 2), (2, 3), (1, 3)], 4));
    }

    #[test]
    fn triangle_with_pendants_is_not() {
        assert!(!is_forest(&[(1, 2), (1, 4), (1, 6), (2, 4), (2, 5)], 6));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(is_forest(&[], 0));
        assert!(is_forest(&[], 3));
        assert!(!is_forest(&[(1, 2), (1, 2)], 3));
        assert!(!is_forest(&[(2, 2)], 3));
    }

    #[test]
    fn masks_connectivity() {
        // 0-1-2 path, 3 isolated
        let adj = [0b0010, 0b0101, 0b0010, 0];
        assert!(!masks_connected(&adj, 4));
        assert!(masks_connected(&adj[..3], 3));
    }
}
