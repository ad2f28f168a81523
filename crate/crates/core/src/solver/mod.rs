//! Proportional colorings: verification, search and choosability decisions.

mod decide;
mod search;

pub use decide::{chi_pc, decide_choosable, ChiPc, ChiValue, DecideOptions, Outcome, Progress, Verdict};

pub(crate) use search::{ClassSpec, Search};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::list::{class_size_bounds, Color, ListAssignment, SupportEntry};

/// A color for every vertex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Coloring { colors }
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn set(&mut self, v: usize, c: Color) {
        self.colors[v] = c;
    }

    /// `f⁻¹(c)`.
    pub fn class(&self, c: Color) -> VertexSet {
        (0..self.colors.len()).filter(|&v| self.colors[v] == c).collect()
    }

    pub fn class_size(&self, c: Color) -> usize {
        self.colors.iter().filter(|&&x| x == c).count()
    }

    /// Sizes of all nonempty classes.
    pub fn class_sizes(&self) -> BTreeMap<Color, usize> {
        let mut out = BTreeMap::new();
        for &c in &self.colors {
            *out.entry(c).or_insert(0) += 1;
        }
        out
    }

    /// Number of distinct colors used.
    pub fn range_size(&self) -> usize {
        self.class_sizes().len()
    }

    /// One `<vertex>: <color>` line per vertex.
    pub fn to_file_string(&self) -> String {
        self.colors
            .iter()
            .enumerate()
            .map(|(v, c)| format!("{v}: {c}\n"))
            .collect()
    }

    pub fn parse_file(text: &str) -> Result<Coloring> {
        let mut colors: Vec<Option<Color>> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = || Error::Parse(format!("line {}: expected `<vertex>: <color>`", no + 1));
            let (v, c) = line.split_once(':').ok_or_else(parse_err)?;
            let v: usize = v.trim().parse().map_err(|_| parse_err())?;
            let c: Color = c.trim().parse().map_err(|_| parse_err())?;
            if v >= colors.len() {
                colors.resize(v + 1, None);
            }
            if colors[v].replace(c).is_some() {
                return Err(Error::Parse(format!("vertex {v} colored twice")));
            }
        }
        let colors: Option<Vec<Color>> = colors.into_iter().collect();
        match colors {
            Some(c) if !c.is_empty() => Ok(Coloring { colors: c }),
            _ => Err(Error::Parse("coloring does not cover vertices 0..n".into())),
        }
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.colors.iter().enumerate().map(|(v, c)| format!("{v}:{c}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A reason a coloring is not a proportional L-coloring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    WrongVertexCount { expected: usize, found: usize },
    ListSizesDiffer,
    NotInList { vertex: usize, color: Color },
    ImproperEdge { u: usize, v: usize, color: Color },
    ClassSize { color: Color, size: usize, lo: usize, hi: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongVertexCount { expected, found } => {
                write!(f, "coloring has {found} vertices, expected {expected}")
            }
            Violation::ListSizesDiffer => write!(f, "lists do not all have the same size"),
            Violation::NotInList { vertex, color } => write!(f, "vertex {vertex} colored {color}, not in its list"),
            Violation::ImproperEdge { u, v, color } => write!(f, "edge {u}-{v} has both ends colored {color}"),
            Violation::ClassSize { color, size, lo, hi } => {
                write!(f, "color {color} used {size} times, allowed {lo}..={hi}")
            }
        }
    }
}

/// All violations of the proportional-coloring conditions; empty means valid.
pub fn verify_proportional(g: &Graph, l: &ListAssignment, f: &Coloring) -> Vec<Violation> {
    let n = g.vertex_count();
    if l.vertex_count() != n || f.vertex_count() != n {
        return vec![Violation::WrongVertexCount {
            expected: n,
            found: if l.vertex_count() != n { l.vertex_count() } else { f.vertex_count() },
        }];
    }
    let Some(k) = l.uniform_size() else {
        return vec![Violation::ListSizesDiffer];
    };
    let mut out = Vec::new();
    for v in 0..n {
        if !l.contains(v, f.color(v)) {
            out.push(Violation::NotInList { vertex: v, color: f.color(v) });
        }
    }
    for (u, v) in g.edges() {
        if f.color(u) == f.color(v) {
            out.push(Violation::ImproperEdge { u, v, color: f.color(u) });
        }
    }
    let used = f.class_sizes();
    for (c, support) in l.supports() {
        let (lo, hi) = class_size_bounds(support.len(), k);
        let size = used.get(&c).copied().unwrap_or(0);
        if size < lo || size > hi {
            out.push(Violation::ClassSize { color: c, size, lo, hi });
        }
    }
    out
}

pub fn is_proportional(g: &Graph, l: &ListAssignment, f: &Coloring) -> bool {
    verify_proportional(g, l, f).is_empty()
}

pub(crate) fn check_instance(g: &Graph, l: &ListAssignment) -> Result<usize> {
    if l.vertex_count() != g.vertex_count() {
        return invalid(format!(
            "assignment has {} vertices but the graph has {}",
            l.vertex_count(),
            g.vertex_count()
        ));
    }
    l.require_uniform()
}

/// A proportional L-coloring, or `None` when none exists. The search is
/// exhaustive.
pub fn find_proportional(g: &Graph, l: &ListAssignment) -> Result<Option<Coloring>> {
    let k = check_instance(g, l)?;
    let supports = l.supports();
    let colors: Vec<Color> = supports.keys().copied().collect();
    let specs: Vec<ClassSpec> = supports.values().map(|&s| spec_for(s, k)).collect();
    let adjacency: Vec<VertexSet> = (0..g.vertex_count()).map(|v| g.neighbors(v)).collect();
    let found = Search::new(&adjacency, &specs).solve();
    Ok(found.map(|idx| Coloring::new(idx.into_iter().map(|i| colors[i]).collect())))
}

pub(crate) fn spec_for(support: VertexSet, k: usize) -> ClassSpec {
    let (lo, hi) = class_size_bounds(support.len(), k);
    ClassSpec { support, lo: lo as u32, hi: hi as u32 }
}

/// Whether the assignment described by `entries` (colors with identical
/// supports grouped) admits a proportional coloring.
pub(crate) fn entries_colorable(adjacency: &[VertexSet], entries: &[SupportEntry], k: usize, buf: &mut Vec<ClassSpec>) -> bool {
    buf.clear();
    for e in entries {
        let spec = spec_for(e.support, k);
        for _ in 0..e.multiplicity {
            buf.push(spec);
        }
    }
    Search::new(adjacency, buf).solve().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(m: usize) -> Graph {
        Graph::complete_multipartite(&[1, m]).unwrap()
    }

    #[test]
    fn verify_examples() {
        let g = star(2);
        let l = ListAssignment::constant(3, &[1, 2]).unwrap();
        assert!(verify_proportional(&g, &l, &Coloring::new(vec![1, 2, 2])).is_empty());
        let bad = verify_proportional(&g, &l, &Coloring::new(vec![1, 1, 1]));
        assert!(bad.iter().any(|v| matches!(v, Violation::ImproperEdge { .. })));
        assert!(bad.contains(&Violation::ClassSize { color: 2, size: 0, lo: 1, hi: 2 }));
        let k2 = Graph::complete_multipartite(&[1, 1]).unwrap();
        let l = ListAssignment::new(vec![vec![1], vec![2]]).unwrap();
        assert!(verify_proportional(&k2, &l, &Coloring::new(vec![1, 2])).is_empty());
        assert!(!verify_proportional(&k2, &l, &Coloring::new(vec![2, 2])).is_empty());
    }

    #[test]
    fn find_examples() {
        let k22 = Graph::complete_multipartite(&[2, 2]).unwrap();
        let witness = ListAssignment::new(vec![vec![1, 2], vec![1, 2], vec![1, 3], vec![1, 3]]).unwrap();
        assert_eq!(find_proportional(&k22, &witness).unwrap(), None);

        let k23 = Graph::complete_multipartite(&[2, 3]).unwrap();
        let l = ListAssignment::constant(5, &[1, 2, 3]).unwrap();
        let f = find_proportional(&k23, &l).unwrap().unwrap();
        assert!(is_proportional(&k23, &l, &f));
        let mut sizes: Vec<usize> = f.class_sizes().into_values().collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 2]);

        let k1 = Graph::complete_multipartite(&[1]).unwrap();
        let l = ListAssignment::new(vec![vec![1]]).unwrap();
        assert_eq!(find_proportional(&k1, &l).unwrap(), Some(Coloring::new(vec![1])));
    }

    #[test]
    fn find_rejects_mismatched_instances() {
        let g = star(2);
        let l = ListAssignment::constant(2, &[1, 2]).unwrap();
        assert!(find_proportional(&g, &l).is_err());
        let ragged = ListAssignment::new(vec![vec![1], vec![1, 2], vec![2]]).unwrap();
        assert!(find_proportional(&g, &ragged).is_err());
    }

    #[test]
    fn coloring_file_round_trip() {
        let f = Coloring::new(vec![3, 1, 4]);
        assert_eq!(Coloring::parse_file(&f.to_file_string()).unwrap(), f);
        assert!(Coloring::parse_file("0: 1\n2: 1\n").is_err());
        assert!(Coloring::parse_file("0: 1\n0: 2\n").is_err());
    }
}
