//! List assignments, multiplicities and renaming-invariant forms.

mod canonical;
mod enumerate;
mod io;
mod sample;

pub use canonical::{canonical_form, SupportEntry, SupportMultiset, SymmetryGroup};
pub use enumerate::{
    enumerate_assignments, AssignmentEnumerator, EnumLimits, EnumTask, DEFAULT_MAX_K,
    DEFAULT_MAX_VERTICES,
};
pub use sample::sample_assignment;

use std::collections::BTreeMap;

use crate::error::{invalid, Result};
use crate::graph::VertexSet;

/// Colors are dense small integers; names never matter.
pub type Color = u32;

/// A list of allowed colors for every vertex.
///
/// Lists are stored sorted and duplicate-free; every list is nonempty.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ListAssignment {
    lists: Vec<Vec<Color>>,
}

impl ListAssignment {
    pub fn new(lists: Vec<Vec<Color>>) -> Result<Self> {
        if lists.is_empty() {
            return invalid("list assignment has no vertices");
        }
        let mut out = Vec::with_capacity(lists.len());
        for (v, mut list) in lists.into_iter().enumerate() {
            if list.is_empty() {
                return invalid(format!("vertex {v} has an empty list"));
            }
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return invalid(format!("vertex {v} lists a color twice"));
            }
            out.push(list);
        }
        Ok(ListAssignment { lists: out })
    }

    /// Every vertex gets the same list.
    pub fn constant(vertex_count: usize, colors: &[Color]) -> Result<Self> {
        Self::new(vec![colors.to_vec(); vertex_count])
    }

    pub fn vertex_count(&self) -> usize {
        self.lists.len()
    }

    pub fn list(&self, v: usize) -> &[Color] {
        &self.lists[v]
    }

    pub fn lists(&self) -> &[Vec<Color>] {
        &self.lists
    }

    pub fn contains(&self, v: usize, c: Color) -> bool {
        self.lists[v].binary_search(&c).is_ok()
    }

    /// `Some(k)` when every list has exactly `k` colors.
    pub fn uniform_size(&self) -> Option<usize> {
        let k = self.lists[0].len();
        self.lists.iter().all(|l| l.len() == k).then_some(k)
    }

    pub(crate) fn require_uniform(&self) -> Result<usize> {
        self.uniform_size()
            .map_or_else(|| invalid("lists do not all have the same size"), Ok)
    }

    /// True when all lists are identical.
    pub fn is_constant(&self) -> bool {
        self.lists.windows(2).all(|w| w[0] == w[1])
    }

    /// The palette, sorted.
    pub fn palette(&self) -> Vec<Color> {
        let mut p: Vec<Color> = self.lists.iter().flatten().copied().collect();
        p.sort_unstable();
        p.dedup();
        p
    }

    pub fn max_color(&self) -> Color {
        self.lists.iter().flatten().copied().max().unwrap_or(0)
    }

    /// η(c): the number of lists containing `c`.
    pub fn multiplicity(&self, c: Color) -> usize {
        self.lists.iter().filter(|l| l.binary_search(&c).is_ok()).count()
    }

    /// The support of every palette color, keyed by color.
    pub fn supports(&self) -> BTreeMap<Color, VertexSet> {
        let mut out: BTreeMap<Color, VertexSet> = BTreeMap::new();
        for (v, list) in self.lists.iter().enumerate() {
            for &c in list {
                out.entry(c).or_default().insert(v);
            }
        }
        out
    }

    pub fn support(&self, c: Color) -> VertexSet {
        (0..self.vertex_count()).filter(|&v| self.contains(v, c)).collect()
    }

    /// Allowed class sizes `(⌊η(c)/k⌋, ⌈η(c)/k⌉)` for color `c`.
    pub fn class_size_bounds(&self, k: usize, c: Color) -> Result<(usize, usize)> {
        if k == 0 {
            return invalid("k must be at least 1");
        }
        match self.multiplicity(c) {
            0 => invalid(format!("color {c} is not in the palette")),
            eta => Ok(class_size_bounds(eta, k)),
        }
    }

    /// Colors with η(c) > k. The count is usually called α.
    pub fn high_multiplicity_colors(&self, k: usize) -> Result<Vec<Color>> {
        if self.uniform_size() != Some(k) {
            return invalid(format!("not a {k}-assignment"));
        }
        Ok(self
            .supports()
            .into_iter()
            .filter(|(_, s)| s.len() > k)
            .map(|(c, _)| c)
            .collect())
    }

    /// Replaces `from` by `to` in the lists of the given vertices.
    pub fn substitute(&self, vertices: VertexSet, from: Color, to: Color) -> Result<Self> {
        let mut lists = self.lists.clone();
        for v in vertices {
            let list = &mut lists[v];
            let Ok(pos) = list.binary_search(&from) else {
                return invalid(format!("vertex {v} does not list color {from}"));
            };
            list.remove(pos);
            list.push(to);
        }
        Self::new(lists)
    }

    /// Same assignment with colors renamed through `rename`.
    pub fn recolored(&self, rename: impl Fn(Color) -> Color) -> Result<Self> {
        Self::new(
            self.lists
                .iter()
                .map(|l| l.iter().map(|&c| rename(c)).collect())
                .collect(),
        )
    }
}

/// `(⌊η/k⌋, ⌈η/k⌉)`.
#[inline]
pub fn class_size_bounds(eta: usize, k: usize) -> (usize, usize) {
    (eta / k, eta.div_ceil(k))
}
