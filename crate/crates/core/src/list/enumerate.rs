//! Exhaustive generation of k-assignments up to color renaming and graph
//! automorphism.
//!
//! A k-assignment up to renaming is a multiset of nonempty supports in which
//! every vertex lies in exactly `k` supports (counted with multiplicity).
//! Supports are generated in increasing numeric order, grouped by their
//! highest vertex, so the partial multiset after finishing the supports
//! inside `{0..=h}` is a prefix of the final sorted entry list. At each such
//! boundary the prefix is tested against the automorphisms that fix
//! `{0..=h}` setwise; any of them producing a smaller prefix proves that no
//! completion is an orbit minimum. Leaves are tested against the whole group.
//! Classes are therefore emitted exactly once, as their lexicographically
//! smallest form, and in increasing lexicographic order.

use std::ops::ControlFlow;

use super::canonical::{SupportEntry, SupportMultiset, SymmetryGroup};
use super::ListAssignment;
use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexSet};

pub const DEFAULT_MAX_VERTICES: usize = 10;
pub const DEFAULT_MAX_K: usize = 6;

/// Hard ceiling for the generator's bitmask arithmetic, independent of overrides.
const ABSOLUTE_MAX_VERTICES: usize = 24;

/// Resource guard for exhaustive enumeration.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EnumLimits {
    pub max_vertices: usize,
    pub max_k: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits { max_vertices: DEFAULT_MAX_VERTICES, max_k: DEFAULT_MAX_K }
    }
}

impl EnumLimits {
    pub fn check(&self, vertex_count: usize, k: usize) -> Result<()> {
        if vertex_count > self.max_vertices.min(ABSOLUTE_MAX_VERTICES) {
            return Err(Error::ResourceLimit(format!(
                "{vertex_count} vertices exceeds the enumeration guard of {} (override with --max-vertices)",
                self.max_vertices.min(ABSOLUTE_MAX_VERTICES)
            )));
        }
        if k > self.max_k {
            return Err(Error::ResourceLimit(format!(
                "k = {k} exceeds the enumeration guard of {}",
                self.max_k
            )));
        }
        Ok(())
    }
}

/// A subtree of the generation tree: the state after the supports inside
/// `{0..next_level}` have been fixed.
#[derive(Clone, Debug)]
pub struct EnumTask {
    entries: Vec<SupportEntry>,
    residual: Vec<u32>,
    next_level: usize,
}

impl EnumTask {
    pub fn prefix(&self) -> &[SupportEntry] {
        &self.entries
    }
}

#[derive(Clone, Debug)]
pub struct AssignmentEnumerator {
    n: usize,
    k: usize,
    group: SymmetryGroup,
    /// Group elements fixing `{0..=h}` setwise and acting non-trivially on
    /// it, one per distinct action, per `h`.
    stabilizers: Vec<Vec<usize>>,
}

impl AssignmentEnumerator {
    pub fn new(g: &Graph, k: usize, limits: EnumLimits) -> Result<Self> {
        if k == 0 {
            return invalid("k must be at least 1");
        }
        limits.check(g.vertex_count(), k)?;
        let n = g.vertex_count();
        let group = SymmetryGroup::new(g);
        // Only the action on the prefix matters: keep one element per distinct
        // non-trivial restriction to {0..=h}.
        let stabilizers = (0..n)
            .map(|h| {
                let prefix = VertexSet::full(h + 1);
                let mut seen = std::collections::HashSet::new();
                (1..group.len())
                    .filter(|&e| group.map_set(e, prefix) == prefix)
                    .filter(|&e| {
                        let action: Vec<usize> =
                            (0..=h).map(|v| group.elements()[e].apply(v)).collect();
                        let trivial = action.iter().enumerate().all(|(i, &v)| i == v);
                        !trivial && seen.insert(action)
                    })
                    .collect()
            })
            .collect();
        Ok(AssignmentEnumerator { n, k, group, stabilizers })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn group(&self) -> &SymmetryGroup {
        &self.group
    }

    /// Visits every canonical class in increasing order; the visitor may stop
    /// the walk early.
    pub fn for_each<F>(&self, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[SupportEntry]) -> ControlFlow<()>,
    {
        let mut w = Walker::new(self, Vec::new(), vec![self.k as u32; self.n]);
        w.level(0, 0, &mut Sink::Visit(&mut visit))
    }

    /// Number of classes.
    pub fn count(&self) -> u64 {
        let mut n = 0u64;
        let _ = self.for_each(|_| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }

    /// Splits the walk into independent subtrees, in emission order.
    /// Concatenating the output of [`Self::run_task`] over the tasks
    /// reproduces [`Self::for_each`] exactly.
    pub fn tasks(&self) -> Vec<EnumTask> {
        let split = self.default_split_level();
        self.tasks_at(split)
    }

    pub fn tasks_at(&self, split_level: usize) -> Vec<EnumTask> {
        let split_level = split_level.min(self.n - 1);
        let mut out = Vec::new();
        let mut w = Walker::new(self, Vec::new(), vec![self.k as u32; self.n]);
        let _ = w.level::<fn(&[SupportEntry]) -> ControlFlow<()>>(
            0,
            0,
            &mut Sink::Split { at: split_level, out: &mut out },
        );
        out
    }

    fn default_split_level(&self) -> usize {
        (self.n / 2).saturating_sub(1)
    }

    pub fn run_task<F>(&self, task: &EnumTask, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[SupportEntry]) -> ControlFlow<()>,
    {
        if task.next_level >= self.n {
            return visit(&task.entries);
        }
        let mut w = Walker::new(self, task.entries.clone(), task.residual.clone());
        w.level(task.next_level, 0, &mut Sink::Visit(&mut visit))
    }

    /// Lazy stream of canonical forms, one subtree buffered at a time.
    pub fn iter(&self) -> impl Iterator<Item = SupportMultiset> + '_ {
        self.tasks().into_iter().flat_map(move |task| {
            let mut buf = Vec::new();
            let _ = self.run_task(&task, |e| {
                buf.push(SupportMultiset::from_sorted(self.n, e.to_vec()));
                ControlFlow::Continue(())
            });
            buf
        })
    }
}

/// One representative k-assignment per equivalence class, colors numbered
/// 1, 2, ... in canonical support order.
pub fn enumerate_assignments(
    g: &Graph,
    k: usize,
    limits: EnumLimits,
) -> Result<impl Iterator<Item = ListAssignment>> {
    let en = AssignmentEnumerator::new(g, k, limits)?;
    let forms: Vec<SupportMultiset> = en.iter().collect();
    Ok(forms.into_iter().map(|f| f.materialize()))
}

enum Sink<'a, F> {
    Visit(&'a mut F),
    Split { at: usize, out: &'a mut Vec<EnumTask> },
}

struct Walker<'a> {
    en: &'a AssignmentEnumerator,
    entries: Vec<SupportEntry>,
    residual: Vec<u32>,
    scratch: Vec<SupportEntry>,
}

impl<'a> Walker<'a> {
    fn new(en: &'a AssignmentEnumerator, entries: Vec<SupportEntry>, residual: Vec<u32>) -> Self {
        Walker { en, entries, residual, scratch: Vec::new() }
    }

    fn positive(&self) -> u64 {
        self.residual
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0)
            .fold(0u64, |acc, (v, _)| acc | 1 << v)
    }

    /// Chooses further supports whose highest vertex is `h`, each at least
    /// `min_mask`, then closes the level.
    fn level<F>(&mut self, h: usize, min_mask: u64, sink: &mut Sink<'_, F>) -> ControlFlow<()>
    where
        F: FnMut(&[SupportEntry]) -> ControlFlow<()>,
    {
        let n = self.en.n;
        let last = h + 1 == n;
        let top = 1u64 << h;
        let below = top - 1;
        if last {
            let rh = self.residual[h];
            if rh == 0 {
                return if self.residual.iter().all(|&r| r == 0) {
                    self.close(h, sink)
                } else {
                    ControlFlow::Continue(())
                };
            }
            // every remaining support contains h, so no vertex may need more than h does
            if self.residual[..h].iter().any(|&r| r > rh) {
                return ControlFlow::Continue(());
            }
        }
        let positive = self.positive();
        if positive & top != 0 {
            let (forced, free) = if last {
                let rh = self.residual[h];
                let forced = (0..h)
                    .filter(|&u| self.residual[u] == rh)
                    .fold(0u64, |acc, u| acc | 1 << u);
                (forced | top, positive & below & !forced)
            } else {
                (top, positive & below)
            };
            // ascending submasks of `free`
            let mut sub = 0u64;
            loop {
                let mask = forced | sub;
                if mask >= min_mask {
                    let set = VertexSet::from_bits(mask);
                    let cap = set.iter().map(|v| self.residual[v]).min().unwrap_or(0);
                    for mult in 1..=cap {
                        for v in set {
                            self.residual[v] -= mult;
                        }
                        self.entries.push(SupportEntry::new(set, mult));
                        let flow = self.level(h, mask + 1, sink);
                        self.entries.pop();
                        for v in set {
                            self.residual[v] += mult;
                        }
                        flow?;
                    }
                }
                if sub == free {
                    break;
                }
                sub = ((sub | !free).wrapping_add(1)) & free;
            }
        }
        if last {
            // the last level only closes once every residual reaches zero
            return ControlFlow::Continue(());
        }
        self.close(h, sink)
    }

    fn close<F>(&mut self, h: usize, sink: &mut Sink<'_, F>) -> ControlFlow<()>
    where
        F: FnMut(&[SupportEntry]) -> ControlFlow<()>,
    {
        let en = self.en;
        if en
            .group
            .has_smaller_image(&en.stabilizers[h], &self.entries, &mut self.scratch)
        {
            return ControlFlow::Continue(());
        }
        match sink {
            Sink::Split { at, out } if *at == h => {
                out.push(EnumTask {
                    entries: self.entries.clone(),
                    residual: self.residual.clone(),
                    next_level: h + 1,
                });
                ControlFlow::Continue(())
            }
            Sink::Visit(visit) if h + 1 == en.n => visit(&self.entries),
            _ => self.level(h + 1, 0, sink),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::list::canonical_form;

    fn k(parts: &[usize]) -> Graph {
        Graph::complete_multipartite(parts).unwrap()
    }

    /// All k-assignments over the palette `1..=n*k` (enough for every class),
    /// quotiented by renaming and automorphism via their canonical forms.
    fn brute_force_classes(g: &Graph, kk: usize) -> Vec<SupportMultiset> {
        let n = g.vertex_count();
        let palette = (n * kk) as u32;
        let subsets: Vec<Vec<u32>> = (0u64..1 << palette)
            .filter(|m| m.count_ones() as usize == kk)
            .map(|m| (0..palette).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect())
            .collect();
        let mut forms = std::collections::BTreeSet::new();
        let mut idx = vec![0usize; n];
        loop {
            let l = ListAssignment::new(idx.iter().map(|&i| subsets[i].clone()).collect()).unwrap();
            forms.insert(canonical_form(g, &l).unwrap());
            let mut pos = 0;
            loop {
                if pos == n {
                    return forms.into_iter().collect();
                }
                idx[pos] += 1;
                if idx[pos] < subsets.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    fn all(en: &AssignmentEnumerator) -> Vec<SupportMultiset> {
        en.iter().collect()
    }

    #[test]
    fn k2_class_counts() {
        let g = k(&[1, 1]);
        let one = all(&AssignmentEnumerator::new(&g, 1, EnumLimits::default()).unwrap());
        assert_eq!(one.len(), 2);
        let two = all(&AssignmentEnumerator::new(&g, 2, EnumLimits::default()).unwrap());
        assert_eq!(two.len(), 3);
        assert_eq!(two, brute_force_classes(&g, 2));
    }

    #[test]
    fn single_vertex() {
        let g = k(&[1]);
        let forms = all(&AssignmentEnumerator::new(&g, 3, EnumLimits::default()).unwrap());
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].entries(), &[SupportEntry::new(VertexSet::full(1), 3)]);
    }

    #[test]
    fn matches_brute_force_oracle() {
        for (parts, kk) in [(vec![1, 1], 1), (vec![1, 2], 1), (vec![1, 2], 2), (vec![3], 2)] {
            let g = k(&parts);
            let en = AssignmentEnumerator::new(&g, kk, EnumLimits::default()).unwrap();
            assert_eq!(all(&en), brute_force_classes(&g, kk), "{parts:?} k={kk}");
        }
    }

    #[test]
    fn emitted_forms_are_canonical_sorted_and_regular() {
        let g = k(&[2, 3]);
        let en = AssignmentEnumerator::new(&g, 2, EnumLimits::default()).unwrap();
        let forms = all(&en);
        assert!(forms.windows(2).all(|w| w[0] < w[1]));
        for f in &forms {
            assert_eq!(f.uniform_degree(), Some(2));
            assert_eq!(&canonical_form(&g, &f.materialize()).unwrap(), f);
        }
    }

    #[test]
    fn identity_symmetry_counts_labelled_set_systems() {
        // Without symmetry, 1-assignments of n vertices are set partitions (Bell numbers).
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let en = AssignmentEnumerator::new(&path, 1, EnumLimits::default()).unwrap();
        assert_eq!(en.count(), 15);
        // Raw count of 2-regular multisets of subsets of a 3-set.
        let tri = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(AssignmentEnumerator::new(&tri, 2, EnumLimits::default()).unwrap().count(), 16);
    }

    #[test]
    fn tasks_reproduce_the_full_walk() {
        let g = k(&[2, 2]);
        let en = AssignmentEnumerator::new(&g, 3, EnumLimits::default()).unwrap();
        let mut direct = Vec::new();
        let _ = en.for_each(|e| {
            direct.push(e.to_vec());
            ControlFlow::Continue(())
        });
        for split in 0..4 {
            let mut via = Vec::new();
            for t in en.tasks_at(split) {
                let _ = en.run_task(&t, |e| {
                    via.push(e.to_vec());
                    ControlFlow::Continue(())
                });
            }
            assert_eq!(via, direct, "split {split}");
        }
    }

    #[test]
    fn guard_fails_loudly() {
        let g = k(&[5, 6]);
        assert!(matches!(
            AssignmentEnumerator::new(&g, 2, EnumLimits::default()),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            AssignmentEnumerator::new(&k(&[1, 1]), 7, EnumLimits::default()),
            Err(Error::ResourceLimit(_))
        ));
        let wide = EnumLimits { max_vertices: 11, max_k: 6 };
        assert!(AssignmentEnumerator::new(&g, 1, wide).is_ok());
    }
}
