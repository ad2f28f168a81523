//! Small simple graphs with optional complete-multipartite structure.
//!
//! Vertex sets are single machine words, so graphs are capped at 64 vertices.
//! Graphs built by [`Graph::complete_multipartite`] index their vertices part
//! by part, parts sorted by ascending size (stable for equal sizes).

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Sub};
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

pub const MAX_VERTICES: usize = 64;

/// A set of vertex indices stored as a bitmask (bit `v` set iff `v` is in the set).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1 << v)
    }

    /// `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    /// Vertices `lo..hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        VertexSet(Self::full(hi).0 & !Self::full(lo).0)
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    #[inline]
    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1 << v)
    }

    #[inline]
    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1 << v))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest vertex in the set.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest vertex in the set.
    #[inline]
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Image of the set under a vertex map.
    pub fn map(self, perm: &Permutation) -> VertexSet {
        self.iter().map(|v| perm.apply(v)).collect()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & rhs.0)
    }
}

impl BitXor for VertexSet {
    type Output = VertexSet;
    fn bitxor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 ^ rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    fn not(self) -> VertexSet {
        VertexSet(!self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A vertex permutation; `apply(v)` is the image of `v`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return invalid(format!("{images:?} is not a permutation"));
            }
        }
        Ok(Permutation(images))
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(a, b);
        p
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self` after `other`: `v -> self(other(v))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&v| self.0[v]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    adjacency: Vec<VertexSet>,
    parts: Option<Vec<usize>>,
}

impl Graph {
    /// Simple graph from an edge list on vertices `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return invalid(format!("vertex count {n} outside 1..={MAX_VERTICES}"));
        }
        let mut adjacency = vec![VertexSet::EMPTY; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u}, {v}) references a vertex >= {n}"));
            }
            if u == v {
                return invalid(format!("loop at vertex {u}"));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        Ok(Graph { adjacency, parts: None })
    }

    /// `K_{n_1,...,n_t}`. Part sizes are sorted ascending (stable) and
    /// vertices are numbered part by part in that order.
    pub fn complete_multipartite(parts: &[usize]) -> Result<Self> {
        if parts.is_empty() {
            return invalid("part list is empty");
        }
        if parts.contains(&0) {
            return invalid(format!("zero-size part in {parts:?}"));
        }
        let n: usize = parts.iter().sum();
        if n > MAX_VERTICES {
            return invalid(format!("{n} vertices exceeds the cap of {MAX_VERTICES}"));
        }
        let mut sorted = parts.to_vec();
        sorted.sort();
        Ok(Self::multipartite_unsorted(sorted))
    }

    fn multipartite_unsorted(parts: Vec<usize>) -> Self {
        let n: usize = parts.iter().sum();
        let all = VertexSet::full(n);
        let mut adjacency = Vec::with_capacity(n);
        let mut start = 0;
        for &size in &parts {
            let part = VertexSet::range(start, start + size);
            adjacency.extend(std::iter::repeat_n(all - part, size));
            start += size;
        }
        Graph { adjacency, parts: Some(parts) }
    }

    /// The empty graph on `n` vertices.
    pub fn edgeless(n: usize) -> Result<Self> {
        Self::from_edges(n, &[])
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adjacency[v]
    }

    #[inline]
    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.vertex_count() {
            for v in self.adjacency[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// Part sizes, when the graph is complete multipartite by construction.
    pub fn parts(&self) -> Option<&[usize]> {
        self.parts.as_deref()
    }

    /// Vertex sets of the parts, in index order.
    pub fn part_sets(&self) -> Option<Vec<VertexSet>> {
        let parts = self.parts.as_ref()?;
        let mut start = 0;
        Some(
            parts
                .iter()
                .map(|&size| {
                    let s = VertexSet::range(start, start + size);
                    start += size;
                    s
                })
                .collect(),
        )
    }

    /// Δ(G).
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    pub fn is_independent(&self, s: VertexSet) -> bool {
        s.iter().all(|v| !self.adjacency[v].intersects(s))
    }

    /// `G[S]`, with vertices renumbered densely in increasing order.
    pub fn induced_subgraph(&self, s: VertexSet) -> Result<Graph> {
        if s.is_empty() {
            return invalid("induced subgraph of the empty set");
        }
        if !s.is_subset(self.vertices()) {
            return invalid(format!("{s:?} is not a subset of the vertex set"));
        }
        let keep: Vec<usize> = s.iter().collect();
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let adjacency = keep
            .iter()
            .map(|&v| (self.adjacency[v] & s).iter().map(|u| index[u]).collect())
            .collect();
        let parts = self.part_sets().map(|sets| {
            sets.iter()
                .map(|&p| (p & s).len())
                .filter(|&size| size > 0)
                .collect()
        });
        Ok(Graph { adjacency, parts })
    }

    pub fn is_automorphism(&self, perm: &Permutation) -> bool {
        perm.len() == self.vertex_count()
            && (0..self.vertex_count())
                .all(|v| self.adjacency[v].map(perm) == self.adjacency[perm.apply(v)])
    }

    /// Generators of the automorphism group of a complete multipartite
    /// graph: adjacent transpositions inside every part, plus a swap of each
    /// part with the next part of the same size. Graphs without part
    /// structure get the identity only.
    pub fn automorphism_generators(&self) -> Vec<Permutation> {
        let n = self.vertex_count();
        let (Some(parts), Some(sets)) = (self.parts(), self.part_sets()) else {
            return vec![Permutation::identity(n)];
        };
        let mut gens = Vec::new();
        for set in &sets {
            let members: Vec<usize> = set.iter().collect();
            for w in members.windows(2) {
                gens.push(Permutation::transposition(n, w[0], w[1]));
            }
        }
        for i in 0..parts.len() {
            if let Some(j) = (i + 1..parts.len()).find(|&j| parts[j] == parts[i]) {
                let mut images: Vec<usize> = (0..n).collect();
                for (a, b) in sets[i].iter().zip(sets[j].iter()) {
                    images[a] = b;
                    images[b] = a;
                }
                gens.push(Permutation(images));
            }
        }
        if gens.is_empty() {
            gens.push(Permutation::identity(n));
        }
        gens
    }

    /// Every element of the group generated by [`Self::automorphism_generators`],
    /// identity first, then in breadth-first order from the generators.
    pub fn automorphism_group(&self) -> Vec<Permutation> {
        close_group(self.vertex_count(), &self.automorphism_generators())
    }

    /// Compact description used as a cache key: `K2,3` for multipartite
    /// graphs, `G<n>:<edges>` otherwise.
    pub fn describe(&self) -> String {
        match &self.parts {
            Some(parts) => {
                let sizes: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                format!("K{}", sizes.join(","))
            }
            None => {
                let edges: Vec<String> =
                    self.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
                format!("G{}:{}", self.vertex_count(), edges.join(","))
            }
        }
    }

    /// Parses `K<n1>,<n2>,...`.
    pub fn parse_spec(spec: &str) -> Result<Graph> {
        let body = spec
            .trim()
            .strip_prefix(['K', 'k'])
            .ok_or_else(|| Error::Parse(format!("graph spec {spec:?} must start with K")))?;
        let parts = parse_part_list(body)?;
        Graph::complete_multipartite(&parts)
    }

    /// Parses the edge-list format: a `p <n>` header, then `e <u> <v>` lines
    /// (0-indexed). Blank lines and lines starting with `c` or `#` are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut n = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad number {s:?}", lineno + 1)))
            };
            match fields.as_slice() {
                ["p", count] if n.is_none() => n = Some(num(count)?),
                ["e", u, v] if n.is_some() => edges.push((num(u)?, num(v)?)),
                _ => return Err(Error::Parse(format!("line {}: unexpected {line:?}", lineno + 1))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing `p <n>` header".into()))?;
        Graph::from_edges(n, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("p {}\n", self.vertex_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Graph> {
        Graph::parse_spec(s)
    }
}

/// Parses `2,3,4` into part sizes.
pub fn parse_part_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad part size {t:?} in {text:?}")))
        })
        .collect()
}

fn close_group(n: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                order.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    order
}
