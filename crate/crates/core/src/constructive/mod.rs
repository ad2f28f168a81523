//! Colorers that follow the constructive upper-bound arguments for
//! complete bipartite graphs: distinct-color list colorings by matching,
//! repair of colorings without excess into proportional ones, and the
//! colorer for `K_{n,m}` with `(m+n−d−1)`-assignments.

mod knm;

pub use crate::matching::{max_bipartite_matching, Matching};
pub use knm::{
    color_knm, color_knm_many_high, color_knm_sides, color_knm_traced, ConstructStep, ConstructTrace, RepairState,
    Sides, Subcase,
};

use std::collections::BTreeSet;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::list::{class_size_bounds, Color, ListAssignment};
use crate::solver::{check_instance, find_proportional, verify_proportional, Coloring};

/// Gives the vertices distinct colors from their lists, skipping colors in
/// `exclude`. Lowest-index vertices and colors are preferred.
pub(crate) fn distinct_colors(
    l: &ListAssignment,
    vertices: &[usize],
    exclude: &BTreeSet<Color>,
) -> Option<Vec<(usize, Color)>> {
    let palette: Vec<Color> = l.palette().into_iter().filter(|c| !exclude.contains(c)).collect();
    let adjacency: Vec<Vec<usize>> = vertices
        .iter()
        .map(|&v| {
            l.list(v)
                .iter()
                .filter_map(|c| palette.binary_search(c).ok())
                .collect()
        })
        .collect();
    let m = Matching::maximum(palette.len(), &adjacency);
    if !m.saturates_left() {
        return None;
    }
    Some(
        vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, palette[m.partner_of_left(i).unwrap()]))
            .collect(),
    )
}

/// A proper L-coloring giving every vertex a different color, for
/// k-assignments in which no color lies in more than `k` lists.
pub fn hall_proper_coloring(g: &Graph, l: &ListAssignment) -> Result<Coloring> {
    let k = check_instance(g, l)?;
    if let Some((c, s)) = l.supports().into_iter().find(|(_, s)| s.len() > k) {
        return invalid(format!("color {c} lies in {} lists, more than k = {k}", s.len()));
    }
    let vertices: Vec<usize> = (0..g.vertex_count()).collect();
    let pairs = distinct_colors(l, &vertices, &BTreeSet::new()).ok_or_else(|| {
        Error::Internal("matching does not saturate the vertices although every multiplicity is at most k".into())
    })?;
    Ok(Coloring::new(pairs.into_iter().map(|(_, c)| c).collect()))
}

/// How [`repair_no_excess`] reached a proportional coloring.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct RepairStats {
    /// Recolorings along alternating chains.
    pub moves: usize,
    /// Exact search was needed.
    pub fallback: bool,
}

/// Turns a proper L-coloring that uses no color excessively into a
/// proportional one, for k-assignments with every multiplicity below `2k`.
pub fn repair_no_excess(g: &Graph, l: &ListAssignment, f: &Coloring) -> Result<Coloring> {
    repair_no_excess_traced(g, l, f).map(|(f, _)| f)
}

pub fn repair_no_excess_traced(g: &Graph, l: &ListAssignment, f: &Coloring) -> Result<(Coloring, RepairStats)> {
    let k = check_instance(g, l)?;
    if f.vertex_count() != g.vertex_count() {
        return invalid("coloring and graph differ in size");
    }
    let supports = l.supports();
    if let Some((c, s)) = supports.iter().find(|(_, s)| s.len() >= 2 * k) {
        return invalid(format!("color {c} has multiplicity {} >= 2k = {}", s.len(), 2 * k));
    }
    for v in 0..g.vertex_count() {
        if !l.contains(v, f.color(v)) {
            return invalid(format!("vertex {v} is colored {} outside its list", f.color(v)));
        }
    }
    if let Some((u, v)) = g.edges().into_iter().find(|&(u, v)| f.color(u) == f.color(v)) {
        return invalid(format!("coloring is not proper on edge {u}-{v}"));
    }
    let bounds = |c: Color| class_size_bounds(supports[&c].len(), k);
    for (c, size) in f.class_sizes() {
        if size > bounds(c).1 {
            return invalid(format!("color {c} is used excessively ({size} times)"));
        }
    }

    let mut f = f.clone();
    let mut stats = RepairStats::default();
    loop {
        let sizes = f.class_sizes();
        let count = |c: Color| sizes.get(&c).copied().unwrap_or(0);
        let Some(&under) = supports.keys().find(|&&c| count(c) < bounds(c).0) else {
            break;
        };
        match alternating_chain(&f, &supports, under, &count, &bounds) {
            Some(chain) => {
                stats.moves += chain.len();
                for (v, c) in chain {
                    f.set(v, c);
                }
            }
            None => {
                stats.fallback = true;
                let exact = find_proportional(g, l)?.ok_or_else(|| {
                    Error::Internal(
                        "no proportional coloring exists although a coloring without excess was given \
                         and every multiplicity is below 2k"
                            .into(),
                    )
                })?;
                return Ok((exact, stats));
            }
        }
    }
    let violations = verify_proportional(g, l, &f);
    if let Some(v) = violations.first() {
        return Err(Error::Internal(format!("repair produced an invalid coloring: {v}")));
    }
    Ok((f, stats))
}

/// Breadth-first search for recolorings `v_1 → under, v_2 → f(v_1), ...`
/// ending at a vertex whose color has room to spare. Every color on the
/// chain except the last is used exactly once, so each receiving class is a
/// singleton afterwards and the result stays proper.
fn alternating_chain(
    f: &Coloring,
    supports: &std::collections::BTreeMap<Color, VertexSet>,
    under: Color,
    count: &dyn Fn(Color) -> usize,
    bounds: &dyn Fn(Color) -> (usize, usize),
) -> Option<Vec<(usize, Color)>> {
    use std::collections::{BTreeMap, VecDeque};
    let mut parent: BTreeMap<Color, Option<(usize, Color)>> = BTreeMap::new();
    parent.insert(under, None);
    let mut queue = VecDeque::from([under]);
    while let Some(a) = queue.pop_front() {
        for v in supports[&a] {
            let b = f.color(v);
            if b == a {
                continue;
            }
            if count(b) > bounds(b).0 {
                let mut chain = vec![(v, a)];
                let mut cur = a;
                while let Some(&Some((w, prev))) = parent.get(&cur) {
                    chain.push((w, prev));
                    cur = prev;
                }
                return Some(chain);
            }
            if count(b) == 1 && !parent.contains_key(&b) {
                parent.insert(b, Some((v, a)));
                queue.push_back(b);
            }
        }
    }
    None
}
