//! Maximum bipartite matching by augmenting paths.

use crate::error::{invalid, Result};

/// A matching between left vertices `0..left_count` and right vertices
/// `0..right_count`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matching {
    left: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(left_count: usize, right_count: usize) -> Self {
        Matching { left: vec![None; left_count], right: vec![None; right_count] }
    }

    pub fn size(&self) -> usize {
        self.left.iter().flatten().count()
    }

    /// Matched pairs `(left, right)` in increasing left order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.left
            .iter()
            .enumerate()
            .filter_map(|(l, r)| r.map(|r| (l, r)))
            .collect()
    }

    pub fn partner_of_left(&self, l: usize) -> Option<usize> {
        self.left[l]
    }

    pub fn partner_of_right(&self, r: usize) -> Option<usize> {
        self.right[r]
    }

    /// True when every left vertex is matched.
    pub fn saturates_left(&self) -> bool {
        self.left.iter().all(Option::is_some)
    }

    /// Maximum matching for the bigraph given as per-left-vertex neighbor
    /// lists. Left vertices are processed in index order and neighbors in
    /// list order, so the result is deterministic.
    pub fn maximum(right_count: usize, adjacency: &[Vec<usize>]) -> Self {
        let mut m = Matching::empty(adjacency.len(), right_count);
        let mut seen = vec![false; right_count];
        for l in 0..adjacency.len() {
            seen.iter_mut().for_each(|s| *s = false);
            m.augment(l, adjacency, &mut seen);
        }
        m
    }

    fn augment(&mut self, l: usize, adjacency: &[Vec<usize>], seen: &mut [bool]) -> bool {
        for &r in &adjacency[l] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            let free = match self.right[r] {
                None => true,
                Some(other) => self.augment(other, adjacency, seen),
            };
            if free {
                self.left[l] = Some(r);
                self.right[r] = Some(l);
                return true;
            }
        }
        false
    }
}

/// Maximum-cardinality matching of the bigraph with the given edge list.
pub fn max_bipartite_matching(
    left_count: usize,
    right_count: usize,
    edges: &[(usize, usize)],
) -> Result<Matching> {
    let mut adjacency = vec![Vec::new(); left_count];
    for &(l, r) in edges {
        if l >= left_count || r >= right_count {
            return invalid(format!("edge ({l}, {r}) is outside {left_count}x{right_count}"));
        }
        adjacency[l].push(r);
    }
    for a in &mut adjacency {
        a.sort_unstable();
        a.dedup();
    }
    Ok(Matching::maximum(right_count, &adjacency))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_max(left: usize, right: usize, edges: &[(usize, usize)]) -> usize {
        let mut best = 0;
        for mask in 0u32..(1 << edges.len()) {
            let chosen: Vec<_> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
            let mut lu = vec![false; left];
            let mut ru = vec![false; right];
            let ok = chosen.iter().all(|&(l, r)| {
                let fresh = !lu[l] && !ru[r];
                lu[l] = true;
                ru[r] = true;
                fresh
            });
            if ok {
                best = best.max(chosen.len());
            }
        }
        best
    }

    #[test]
    fn complete_two_by_two() {
        let m = max_bipartite_matching(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert_eq!(m.size(), 2);
        assert!(m.saturates_left());
    }

    #[test]
    fn hall_violation() {
        let m = max_bipartite_matching(2, 1, &[(0, 0), (1, 0)]).unwrap();
        assert_eq!(m.size(), 1);
        assert!(!m.saturates_left());
    }

    #[test]
    fn cycle_lists_are_perfect() {
        // lists {1,2},{2,3},{3,4},{4,1} with color c at index c-1
        let edges = [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 0)];
        let m = max_bipartite_matching(4, 4, &edges).unwrap();
        assert_eq!(m.size(), 4);
        for (l, r) in m.pairs() {
            assert!(edges.contains(&(l, r)));
            assert_eq!(m.partner_of_right(r), Some(l));
        }
    }

    #[test]
    fn rejects_out_of_range_edges() {
        assert!(max_bipartite_matching(1, 1, &[(0, 1)]).is_err());
    }

    #[test]
    fn agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let left = rng.gen_range(1..5);
            let right = rng.gen_range(1..5);
            let mut edges = Vec::new();
            for l in 0..left {
                for r in 0..right {
                    if rng.gen_bool(0.4) {
                        edges.push((l, r));
                    }
                }
            }
            let m = max_bipartite_matching(left, right, &edges).unwrap();
            assert_eq!(m.size(), brute_max(left, right, &edges), "{edges:?}");
        }
    }
}
