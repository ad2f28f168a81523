//! Backtracking search for colorings with per-color class-size windows.
//!
//! Colors with a positive lower bound are placed one at a time by choosing
//! an independent class inside the color's support. Colors with lower bound
//! zero have upper bound one, so once the mandatory classes are fixed the
//! rest of the graph only needs a system of distinct representatives, found
//! by matching. Every node is pruned by a capacitated matching of the
//! uncolored vertices into the remaining class capacity.

use crate::graph::VertexSet;

const NONE: usize = usize::MAX;

/// A color seen by the search: its support and allowed class sizes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct ClassSpec {
    pub support: VertexSet,
    pub lo: u32,
    pub hi: u32,
}

pub(crate) struct Search<'a> {
    adjacency: &'a [VertexSet],
    specs: &'a [ClassSpec],
    /// Mandatory spec indices in processing order.
    order: Vec<usize>,
    /// `order[i]` is interchangeable with `order[i - 1]`.
    twin: Vec<bool>,
    suffix_cover: Vec<VertexSet>,
    suffix_lo: Vec<u32>,
    optional: Vec<usize>,
    optional_cover: VertexSet,
    /// Capacity slots: `(order position or NONE, spec index)`; mandatory
    /// colors contribute `hi` slots, optional colors one.
    slots: Vec<(usize, usize)>,
    vertex_slots: Vec<Vec<usize>>,
    slot_owner: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    classes: Vec<VertexSet>,
    pub nodes: u64,
}

impl<'a> Search<'a> {
    pub fn new(adjacency: &'a [VertexSet], specs: &'a [ClassSpec]) -> Self {
        let n = adjacency.len();
        let mut order: Vec<usize> = (0..specs.len()).filter(|&i| specs[i].lo > 0).collect();
        order.sort_by_key(|&i| {
            let s = &specs[i];
            (std::cmp::Reverse(s.lo), std::cmp::Reverse(s.support.len()), i)
        });
        let twin = (0..order.len())
            .map(|i| i > 0 && specs[order[i]] == specs[order[i - 1]])
            .collect();
        let mut suffix_cover = vec![VertexSet::EMPTY; order.len() + 1];
        let mut suffix_lo = vec![0; order.len() + 1];
        for i in (0..order.len()).rev() {
            suffix_cover[i] = suffix_cover[i + 1] | specs[order[i]].support;
            suffix_lo[i] = suffix_lo[i + 1] + specs[order[i]].lo;
        }
        let optional: Vec<usize> = (0..specs.len()).filter(|&i| specs[i].lo == 0 && specs[i].hi > 0).collect();
        let optional_cover = optional.iter().fold(VertexSet::EMPTY, |a, &i| a | specs[i].support);

        let mut slots = Vec::new();
        for (pos, &i) in order.iter().enumerate() {
            for _ in 0..specs[i].hi {
                slots.push((pos, i));
            }
        }
        for &i in &optional {
            slots.push((NONE, i));
        }
        let vertex_slots = (0..n)
            .map(|v| (0..slots.len()).filter(|&s| specs[slots[s].1].support.contains(v)).collect())
            .collect();
        let slot_count = slots.len();
        Search {
            adjacency,
            specs,
            classes: vec![VertexSet::EMPTY; order.len()],
            order,
            twin,
            suffix_cover,
            suffix_lo,
            optional,
            optional_cover,
            slots,
            vertex_slots,
            slot_owner: vec![NONE; slot_count],
            stamp: vec![0; slot_count],
            epoch: 0,
            nodes: 0,
        }
    }

    /// Per-vertex spec index of a valid coloring, or `None` when none exists.
    pub fn solve(&mut self) -> Option<Vec<usize>> {
        let n = self.adjacency.len();
        let optional_slots = self.optional.len() as u64;
        let total_hi: u64 = self.order.iter().map(|&i| self.specs[i].hi as u64).sum();
        if total_hi + optional_slots < n as u64 {
            return None;
        }
        if !self.place(0, VertexSet::full(n)) {
            return None;
        }
        let mut out = vec![NONE; n];
        for (pos, &class) in self.classes.iter().enumerate() {
            for v in class {
                out[v] = self.order[pos];
            }
        }
        for (s, &(pos, spec)) in self.slots.iter().enumerate() {
            if pos == NONE && self.slot_owner[s] != NONE {
                out[self.slot_owner[s]] = spec;
            }
        }
        debug_assert!(out.iter().all(|&c| c != NONE));
        Some(out)
    }

    fn place(&mut self, pos: usize, uncolored: VertexSet) -> bool {
        self.nodes += 1;
        let left = uncolored.len() as u32;
        if self.suffix_lo[pos] > left {
            return false;
        }
        if !uncolored.is_subset(self.suffix_cover[pos] | self.optional_cover) {
            return false;
        }
        if !self.saturate(pos, uncolored) {
            return false;
        }
        if pos == self.order.len() {
            return true;
        }
        let spec = self.specs[self.order[pos]];
        let avail = spec.support & uncolored;
        if (avail.len() as u32) < spec.lo {
            return false;
        }
        let first_allowed = if self.twin[pos] {
            self.classes[pos - 1].first().map_or(0, |f| f + 1)
        } else {
            0
        };
        let starts = avail & !VertexSet::full(first_allowed);
        self.extend(pos, uncolored, spec, VertexSet::EMPTY, starts, avail)
    }

    /// Grows the class of `order[pos]` by vertices drawn from `cand`, larger
    /// classes first.
    fn extend(
        &mut self,
        pos: usize,
        uncolored: VertexSet,
        spec: ClassSpec,
        chosen: VertexSet,
        cand: VertexSet,
        avail: VertexSet,
    ) -> bool {
        if (chosen.len() as u32) < spec.hi {
            for v in cand {
                let later = avail & !VertexSet::full(v + 1) & !self.adjacency[v];
                if self.extend(pos, uncolored, spec, chosen.with(v), later, avail & !self.adjacency[v]) {
                    return true;
                }
            }
        }
        if chosen.len() as u32 >= spec.lo {
            self.classes[pos] = chosen;
            if self.place(pos + 1, uncolored - chosen) {
                return true;
            }
        }
        false
    }

    /// Matches every vertex of `uncolored` to a distinct capacity slot of a
    /// color not yet placed.
    fn saturate(&mut self, pos: usize, uncolored: VertexSet) -> bool {
        self.slot_owner.iter_mut().for_each(|o| *o = NONE);
        for v in uncolored {
            self.epoch = self.epoch.wrapping_add(1);
            if self.epoch == 0 {
                self.stamp.iter_mut().for_each(|s| *s = 0);
                self.epoch = 1;
            }
            if !self.augment(v, pos) {
                return false;
            }
        }
        true
    }

    fn augment(&mut self, v: usize, pos: usize) -> bool {
        for idx in 0..self.vertex_slots[v].len() {
            let s = self.vertex_slots[v][idx];
            let slot_pos = self.slots[s].0;
            if slot_pos != NONE && slot_pos < pos {
                continue;
            }
            if self.stamp[s] == self.epoch {
                continue;
            }
            self.stamp[s] = self.epoch;
            let owner = self.slot_owner[s];
            if owner == NONE || self.augment(owner, pos) {
                self.slot_owner[s] = v;
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(bits: u64, lo: u32, hi: u32) -> ClassSpec {
        ClassSpec { support: VertexSet::from_bits(bits), lo, hi }
    }

    #[test]
    fn edge_with_shared_color_needs_two_classes() {
        let adjacency = [VertexSet::singleton(1), VertexSet::singleton(0)];
        let specs = [spec(0b11, 1, 1)];
        assert!(Search::new(&adjacency, &specs).solve().is_none());
        let specs = [spec(0b11, 1, 1), spec(0b11, 1, 1)];
        let out = Search::new(&adjacency, &specs).solve().unwrap();
        assert_ne!(out[0], out[1]);
    }

    #[test]
    fn optional_colors_are_matched() {
        let adjacency = [VertexSet::EMPTY; 3];
        let specs = [spec(0b011, 0, 1), spec(0b110, 0, 1), spec(0b100, 0, 1)];
        let out = Search::new(&adjacency, &specs).solve().unwrap();
        assert_eq!(out, vec![0, 1, 2]);
    }

    #[test]
    fn lower_bounds_are_enforced() {
        let adjacency = [VertexSet::EMPTY; 2];
        let specs = [spec(0b11, 2, 2), spec(0b11, 1, 1)];
        assert!(Search::new(&adjacency, &specs).solve().is_none());
    }
}
