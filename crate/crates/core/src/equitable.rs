//! Equitable colorings of complete multipartite graphs and equitable
//! L-colorings.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::list::{Color, ListAssignment};
use crate::solver::Coloring;

/// Largest graph handled by the brute-force routines.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 10;

/// Part sizes and a number of colors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquitableInstance {
    pub parts: Vec<usize>,
    pub s: usize,
}

impl EquitableInstance {
    pub fn new(parts: Vec<usize>, s: usize) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return invalid("parts must be a nonempty list of positive sizes");
        }
        if s == 0 {
            return invalid("s must be at least 1");
        }
        Ok(EquitableInstance { parts, s })
    }

    pub fn p(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn wu(&self) -> bool {
        wu_equitable(&self.parts, self.s)
    }
}

/// Closed-form test for equitable s-colorability of `K_{parts}`.
pub fn wu_equitable(parts: &[usize], s: usize) -> bool {
    if s == 0 {
        return false;
    }
    let p: usize = parts.iter().sum();
    if s > p {
        return true;
    }
    let up = p.div_ceil(s);
    let down = p / s;
    let fits = parts.iter().all(|&n| n >= n.div_ceil(up) * down);
    let most: usize = parts.iter().map(|&n| n / down).sum();
    let least: usize = parts.iter().map(|&n| n.div_ceil(up)).sum();
    fits && most >= s && s >= least
}

fn guard(g: &Graph) -> Result<()> {
    if g.vertex_count() > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::ResourceLimit(format!(
            "brute force is limited to {BRUTE_FORCE_MAX_VERTICES} vertices, graph has {}",
            g.vertex_count()
        )));
    }
    Ok(())
}

/// A proper coloring with colors `1..=k` whose `k` classes all have size
/// `⌊|V|/k⌋` or `⌈|V|/k⌉`, or `None`.
pub fn equitable_k_colorable_bruteforce(g: &Graph, k: usize) -> Result<Option<Coloring>> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    guard(g)?;
    let n = g.vertex_count();
    let (lo, hi) = (n / k, n.div_ceil(k));
    let mut classes = vec![VertexSet::EMPTY; k];
    let mut colors = vec![0 as Color; n];
    fn go(
        g: &Graph,
        v: usize,
        used: usize,
        lo: usize,
        hi: usize,
        classes: &mut [VertexSet],
        colors: &mut [Color],
    ) -> bool {
        let n = g.vertex_count();
        let deficit: usize = classes.iter().map(|c| lo.saturating_sub(c.len())).sum();
        if deficit > n - v {
            return false;
        }
        if v == n {
            return true;
        }
        let limit = (used + 1).min(classes.len());
        for j in 0..limit {
            if classes[j].len() >= hi || classes[j].intersects(g.neighbors(v)) {
                continue;
            }
            classes[j].insert(v);
            colors[v] = j as Color + 1;
            if go(g, v + 1, used.max(j + 1), lo, hi, classes, colors) {
                return true;
            }
            classes[j].remove(v);
        }
        false
    }
    Ok(go(g, 0, 0, lo, hi, &mut classes, &mut colors).then(|| Coloring::new(colors)))
}

/// A proper L-coloring using every color at most `⌈|V|/k⌉` times, or `None`.
pub fn equitable_list_colorable(g: &Graph, l: &ListAssignment) -> Result<Option<Coloring>> {
    let k = crate::solver::check_instance(g, l)?;
    guard(g)?;
    let n = g.vertex_count();
    let cap = n.div_ceil(k);
    let mut classes: HashMap<Color, VertexSet> = HashMap::new();
    let mut colors = vec![0 as Color; n];
    fn go(
        g: &Graph,
        l: &ListAssignment,
        v: usize,
        cap: usize,
        classes: &mut HashMap<Color, VertexSet>,
        colors: &mut [Color],
    ) -> bool {
        if v == g.vertex_count() {
            return true;
        }
        for &c in l.list(v) {
            let class = classes.get(&c).copied().unwrap_or_default();
            if class.len() >= cap || class.intersects(g.neighbors(v)) {
                continue;
            }
            classes.insert(c, class.with(v));
            colors[v] = c;
            if go(g, l, v + 1, cap, classes, colors) {
                return true;
            }
            classes.insert(c, class);
        }
        false
    }
    Ok(go(g, l, 0, cap, &mut classes, &mut colors).then(|| Coloring::new(colors)))
}

/// All part lists (as sorted multisets) with total `p`.
pub fn part_lists(p: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            let mut parts = cur.clone();
            parts.reverse();
            out.push(parts);
            return;
        }
        for x in (1..=rest.min(max)).rev() {
            cur.push(x);
            go(rest - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(p, p, &mut Vec::new(), &mut out);
    out
}

/// Result of comparing the closed form with brute force.
#[derive(Clone, Debug, Default)]
pub struct CrossCheck {
    pub instances: usize,
    pub disagreements: Vec<(Vec<usize>, usize, bool, bool)>,
}

/// Compares [`wu_equitable`] with brute force for every part list with
/// `p ≤ max_p` and every `s ∈ [1, p + 1]`.
pub fn cross_check_wu(max_p: usize) -> Result<CrossCheck> {
    let mut out = CrossCheck::default();
    for p in 1..=max_p {
        for parts in part_lists(p) {
            let g = Graph::complete_multipartite(&parts)?;
            for s in 1..=p + 1 {
                let formula = wu_equitable(&parts, s);
                let brute = equitable_k_colorable_bruteforce(&g, s)?.is_some();
                out.instances += 1;
                if formula != brute {
                    out.disagreements.push((parts.clone(), s, formula, brute));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(parts: &[usize]) -> Graph {
        Graph::complete_multipartite(parts).unwrap()
    }

    fn is_equitable(g: &Graph, f: &Coloring, k: usize) -> bool {
        let n = g.vertex_count();
        let proper = g.edges().iter().all(|&(u, v)| f.color(u) != f.color(v));
        let sizes: Vec<usize> = (1..=k as Color).map(|c| f.class_size(c)).collect();
        let in_range = f.colors().iter().all(|&c| c >= 1 && c as usize <= k);
        proper && in_range && sizes.iter().all(|&s| s == n / k || s == n.div_ceil(k))
    }

    #[test]
    fn k33_facts() {
        assert!(wu_equitable(&[3, 3], 2));
        assert!(!wu_equitable(&[3, 3], 3));
        assert!(wu_equitable(&[5, 5], 11));
        let f = equitable_k_colorable_bruteforce(&k(&[3, 3]), 2).unwrap().unwrap();
        assert!(is_equitable(&k(&[3, 3]), &f, 2));
        assert_eq!(equitable_k_colorable_bruteforce(&k(&[3, 3]), 3).unwrap(), None);
        assert_eq!(equitable_k_colorable_bruteforce(&k(&[1]), 1).unwrap(), Some(Coloring::new(vec![1])));
    }

    #[test]
    fn brute_force_guard() {
        assert!(matches!(equitable_k_colorable_bruteforce(&k(&[6, 5]), 2), Err(Error::ResourceLimit(_))));
        assert!(equitable_k_colorable_bruteforce(&k(&[1]), 0).is_err());
    }

    #[test]
    fn list_examples() {
        let l = ListAssignment::constant(3, &[1, 2]).unwrap();
        let f = equitable_list_colorable(&k(&[1, 2]), &l).unwrap().unwrap();
        assert!(f.class_sizes().values().all(|&s| s <= 2));
        let l = ListAssignment::constant(2, &[1]).unwrap();
        assert_eq!(equitable_list_colorable(&k(&[1, 1]), &l).unwrap(), None);
        let l = ListAssignment::new(vec![vec![1]]).unwrap();
        assert_eq!(equitable_list_colorable(&k(&[1]), &l).unwrap(), Some(Coloring::new(vec![1])));
    }

    #[test]
    fn part_list_counts_are_partition_numbers() {
        let counts: Vec<usize> = (1..=8).map(|p| part_lists(p).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        assert!(part_lists(4).iter().all(|p| p.windows(2).all(|w| w[0] <= w[1])));
    }

    #[test]
    fn cross_check_small() {
        let r = cross_check_wu(6).unwrap();
        assert!(r.disagreements.is_empty(), "{:?}", r.disagreements);
        assert_eq!(r.instances, (1..=6).map(|p| part_lists(p).len() * (p + 1)).sum::<usize>());
    }

    #[test]
    fn hajnal_szemeredi_sanity() {
        for parts in [vec![1, 2], vec![2, 3], vec![1, 1, 3], vec![2, 2, 2], vec![3, 4]] {
            let g = k(&parts);
            for kk in g.max_degree() + 1..=8 {
                let f = equitable_k_colorable_bruteforce(&g, kk).unwrap();
                assert!(f.is_some_and(|f| is_equitable(&g, &f, kk)), "{parts:?} k={kk}");
            }
        }
    }
}
