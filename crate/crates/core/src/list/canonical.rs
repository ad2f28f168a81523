use std::collections::BTreeMap;
use std::fmt;

use super::{Color, ListAssignment};
use crate::error::{invalid, Result};
use crate::graph::{Graph, Permutation, VertexSet};

/// One color class of a k-assignment up to renaming: the set of vertices
/// whose lists contain the color, and how many colors share that support.
///
/// Ordered by the numeric value of the support bitmask, then multiplicity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SupportEntry {
    pub support: VertexSet,
    pub multiplicity: u32,
}

impl SupportEntry {
    pub fn new(support: VertexSet, multiplicity: u32) -> Self {
        SupportEntry { support, multiplicity }
    }
}

/// A list assignment with color names forgotten: the sorted multiset of
/// color supports.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SupportMultiset {
    vertex_count: usize,
    entries: Vec<SupportEntry>,
}

impl SupportMultiset {
    /// Builds a multiset from arbitrary entries; equal supports are merged.
    pub fn new(vertex_count: usize, entries: impl IntoIterator<Item = SupportEntry>) -> Result<Self> {
        let all = VertexSet::full(vertex_count);
        let mut merged: BTreeMap<VertexSet, u32> = BTreeMap::new();
        for e in entries {
            if e.support.is_empty() || !e.support.is_subset(all) || e.multiplicity == 0 {
                return invalid(format!("bad support entry {e:?}"));
            }
            *merged.entry(e.support).or_default() += e.multiplicity;
        }
        Ok(SupportMultiset {
            vertex_count,
            entries: merged.into_iter().map(|(s, m)| SupportEntry::new(s, m)).collect(),
        })
    }

    /// Entries must already be sorted with distinct supports.
    pub(crate) fn from_sorted(vertex_count: usize, entries: Vec<SupportEntry>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].support < w[1].support));
        SupportMultiset { vertex_count, entries }
    }

    /// Forgets color names (no graph symmetry applied).
    pub fn from_assignment(l: &ListAssignment) -> Self {
        let mut merged: BTreeMap<VertexSet, u32> = BTreeMap::new();
        for s in l.supports().into_values() {
            *merged.entry(s).or_default() += 1;
        }
        SupportMultiset {
            vertex_count: l.vertex_count(),
            entries: merged.into_iter().map(|(s, m)| SupportEntry::new(s, m)).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn entries(&self) -> &[SupportEntry] {
        &self.entries
    }

    /// Number of colors (sum of multiplicities).
    pub fn color_count(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity as usize).sum()
    }

    /// Σ multiplicity over supports containing `v`: the list size at `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.entries
            .iter()
            .filter(|e| e.support.contains(v))
            .map(|e| e.multiplicity as usize)
            .sum()
    }

    /// `Some(k)` when every vertex has degree `k`.
    pub fn uniform_degree(&self) -> Option<usize> {
        let k = self.degree(0);
        (1..self.vertex_count).all(|v| self.degree(v) == k).then_some(k)
    }

    /// A concrete assignment: fresh colors 1, 2, ... in entry order.
    pub fn materialize(&self) -> ListAssignment {
        let mut lists = vec![Vec::new(); self.vertex_count];
        let mut next: Color = 1;
        for e in &self.entries {
            for _ in 0..e.multiplicity {
                for v in e.support {
                    lists[v].push(next);
                }
                next += 1;
            }
        }
        ListAssignment::new(lists).expect("every vertex lies in some support")
    }

    /// Image under a vertex permutation, re-sorted.
    pub fn permuted(&self, perm: &Permutation) -> SupportMultiset {
        let mut entries: Vec<SupportEntry> = self
            .entries
            .iter()
            .map(|e| SupportEntry::new(e.support.map(perm), e.multiplicity))
            .collect();
        entries.sort_unstable();
        SupportMultiset { vertex_count: self.vertex_count, entries }
    }

    /// 64-bit FNV-1a over the entry encoding: for each entry in order, the
    /// support bitmask as 8 little-endian bytes followed by the multiplicity
    /// as 4 little-endian bytes.
    pub fn hash64(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        for e in &self.entries {
            for b in e.support.bits().to_le_bytes().into_iter().chain(e.multiplicity.to_le_bytes()) {
                h ^= b as u64;
                h = h.wrapping_mul(PRIME);
            }
        }
        h
    }
}

impl fmt::Display for SupportMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            f.write_str("{")?;
            for (j, v) in e.support.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "}}x{}", e.multiplicity)?;
        }
        Ok(())
    }
}

/// Table entries allowed before falling back from byte-wide to nibble-wide
/// lookup chunks.
const BYTE_TABLE_BUDGET: usize = 1 << 22;

/// The automorphism group of a graph, with per-element lookup tables for
/// mapping bitmasks chunk by chunk.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    vertex_count: usize,
    elements: Vec<Permutation>,
    chunk_bits: usize,
    chunks: usize,
    /// `[element][chunk][chunk value]`, flattened.
    tables: Vec<u64>,
}

impl SymmetryGroup {
    pub fn new(g: &Graph) -> Self {
        Self::from_elements(g.vertex_count(), g.automorphism_group())
    }

    pub fn from_elements(vertex_count: usize, elements: Vec<Permutation>) -> Self {
        let byte_chunks = vertex_count.div_ceil(8).max(1);
        let chunk_bits = if elements.len() * byte_chunks * 256 <= BYTE_TABLE_BUDGET { 8 } else { 4 };
        let chunks = vertex_count.div_ceil(chunk_bits).max(1);
        let width = 1usize << chunk_bits;
        let mut tables = Vec::with_capacity(elements.len() * chunks * width);
        for p in &elements {
            for c in 0..chunks {
                for value in 0..width {
                    let mut img = 0u64;
                    for b in 0..chunk_bits {
                        let v = c * chunk_bits + b;
                        if value >> b & 1 == 1 && v < vertex_count {
                            img |= 1 << p.apply(v);
                        }
                    }
                    tables.push(img);
                }
            }
        }
        SymmetryGroup { vertex_count, elements, chunk_bits, chunks, tables }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    pub fn map_set(&self, element: usize, s: VertexSet) -> VertexSet {
        let width = 1usize << self.chunk_bits;
        let mask = (width - 1) as u64;
        let base = element * self.chunks * width;
        let mut bits = s.bits();
        let mut out = 0u64;
        let mut offset = base;
        while bits != 0 {
            out |= self.tables[offset + (bits & mask) as usize];
            bits >>= self.chunk_bits;
            offset += width;
        }
        VertexSet::from_bits(out)
    }

    /// Writes the sorted image of `entries` under `element` into `out`.
    #[inline]
    pub(crate) fn image_into(&self, element: usize, entries: &[SupportEntry], out: &mut Vec<SupportEntry>) {
        out.clear();
        out.extend(
            entries
                .iter()
                .map(|e| SupportEntry::new(self.map_set(element, e.support), e.multiplicity)),
        );
        out.sort_unstable();
    }

    /// True when some listed element maps the sorted `entries` to a
    /// lexicographically smaller sorted sequence.
    #[inline]
    pub(crate) fn has_smaller_image(
        &self,
        elements: &[usize],
        entries: &[SupportEntry],
        scratch: &mut Vec<SupportEntry>,
    ) -> bool {
        elements.iter().any(|&g| self.image_is_smaller(g, entries, scratch))
    }

    /// Compares the sorted image with `entries` by repeatedly extracting the
    /// smallest image entry; most images differ within the first step or two,
    /// so this beats sorting the whole image.
    #[inline]
    fn image_is_smaller(&self, element: usize, entries: &[SupportEntry], scratch: &mut Vec<SupportEntry>) -> bool {
        let Some(&first) = entries.first() else {
            return false;
        };
        scratch.clear();
        for e in entries {
            let img = SupportEntry::new(self.map_set(element, e.support), e.multiplicity);
            if img < first {
                return true;
            }
            scratch.push(img);
        }
        for target in entries {
            let (pos, min) = scratch
                .iter()
                .enumerate()
                .min_by_key(|(_, e)| **e)
                .map(|(i, e)| (i, *e))
                .expect("image has as many entries as the form");
            if min != *target {
                return min < *target;
            }
            scratch.swap_remove(pos);
        }
        false
    }

    /// Lexicographic minimum of the orbit of `form`.
    pub fn canonicalize(&self, form: &SupportMultiset) -> SupportMultiset {
        let mut best = form.entries.clone();
        let mut scratch = Vec::with_capacity(best.len());
        for g in 0..self.len() {
            self.image_into(g, &form.entries, &mut scratch);
            if scratch < best {
                std::mem::swap(&mut best, &mut scratch);
            }
        }
        SupportMultiset { vertex_count: form.vertex_count, entries: best }
    }
}

/// Canonical form of a k-assignment: supports with multiplicities,
/// minimized over the automorphism group of `g`.
pub fn canonical_form(g: &Graph, l: &ListAssignment) -> Result<SupportMultiset> {
    if g.vertex_count() != l.vertex_count() {
        return invalid(format!(
            "assignment covers {} vertices, graph has {}",
            l.vertex_count(),
            g.vertex_count()
        ));
    }
    Ok(SymmetryGroup::new(g).canonicalize(&SupportMultiset::from_assignment(l)))
}
