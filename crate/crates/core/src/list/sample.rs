use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Color, ListAssignment};
use crate::error::{invalid, Result};
use crate::graph::Graph;

/// A uniformly random k-subset of `1..=palette_size` for every vertex,
/// reproducible from `seed`.
pub fn sample_assignment(g: &Graph, k: usize, palette_size: usize, seed: u64) -> Result<ListAssignment> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    if palette_size < k {
        return invalid(format!("palette of {palette_size} colors cannot fill lists of size {k}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lists = (0..g.vertex_count())
        .map(|_| {
            index::sample(&mut rng, palette_size, k)
                .into_iter()
                .map(|i| i as Color + 1)
                .collect()
        })
        .collect();
    ListAssignment::new(lists)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_palette_gives_constant_lists() {
        let g = Graph::complete_multipartite(&[2, 3]).unwrap();
        for seed in 0..5 {
            let l = sample_assignment(&g, 3, 3, seed).unwrap();
            assert_eq!(l, ListAssignment::constant(5, &[1, 2, 3]).unwrap());
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let g = Graph::complete_multipartite(&[1, 1]).unwrap();
        assert_eq!(sample_assignment(&g, 1, 2, 42).unwrap(), sample_assignment(&g, 1, 2, 42).unwrap());
    }

    #[test]
    fn rejects_small_palette() {
        let g = Graph::complete_multipartite(&[1, 1]).unwrap();
        assert!(sample_assignment(&g, 3, 2, 0).is_err());
    }

    #[test]
    fn mean_multiplicity_is_proportional() {
        // E[η(c)] = |V| * k / palette = 5 * 3 / 6
        let g = Graph::complete_multipartite(&[2, 3]).unwrap();
        let trials = 1000;
        let mut total = 0usize;
        for seed in 0..trials {
            let l = sample_assignment(&g, 3, 6, seed).unwrap();
            total += (1..=6).map(|c| l.multiplicity(c)).sum::<usize>();
        }
        let mean = total as f64 / (trials as f64 * 6.0);
        assert!((mean - 2.5).abs() <= 0.2, "{mean}");
        // per-color means as well
        for c in 1..=6 {
            let m: usize = (0..trials).map(|s| sample_assignment(&g, 3, 6, s).unwrap().multiplicity(c)).sum();
            assert!((m as f64 / trials as f64 - 2.5).abs() <= 0.2, "color {c}");
        }
    }
}
