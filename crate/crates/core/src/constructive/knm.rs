use std::collections::BTreeSet;
use std::fmt;

use super::{distinct_colors, hall_proper_coloring, repair_no_excess_traced, RepairStats};
use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::list::{Color, ListAssignment};
use crate::solver::{check_instance, verify_proportional, Coloring};

/// The two sides of `K_{n,m}`: `a` has `n` vertices, `b` has `m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sides {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl Sides {
    /// Uses part `b_part` (0 or 1) of a two-part graph as `B`.
    pub fn of(g: &Graph, b_part: usize) -> Result<Sides> {
        let sets = match g.part_sets() {
            Some(sets) if sets.len() == 2 => sets,
            _ => return invalid(format!("{} is not a complete bipartite graph", g.describe())),
        };
        if b_part > 1 {
            return invalid("b_part must be 0 or 1");
        }
        Ok(Sides { a: sets[1 - b_part].iter().collect(), b: sets[b_part].iter().collect() })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    fn b_set(&self) -> VertexSet {
        self.b.iter().copied().collect()
    }
}

/// Which branch of the many-high-colors construction produced a coloring.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Subcase {
    /// `m − d` even, remaining vertices take distinct colors.
    EvenDistinct,
    /// `m − d` even, constant assignment, explicit pairing.
    EvenConstant,
    /// `m − d` even, one pair's color moved to two vertices of `A`.
    EvenMoved,
    /// `m − d` odd, the last high color covers two remaining `B` vertices.
    OddPair,
    /// `m − d` odd, the last high color goes on two vertices of `A`.
    OddOnA,
}

impl fmt::Display for Subcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subcase::EvenDistinct => "even/distinct",
            Subcase::EvenConstant => "even/constant",
            Subcase::EvenMoved => "even/moved",
            Subcase::OddPair => "odd/pair",
            Subcase::OddOnA => "odd/on-a",
        })
    }
}

/// One level of the recursion in [`color_knm`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ConstructStep {
    /// No color of high multiplicity: distinct colors, then repair.
    NoHigh,
    ManyHigh(Subcase),
    /// `z` unused by the recursive coloring.
    DropZ,
    /// `c` unused, `z` recolored to `c`.
    ZToC,
    /// `c` and `z` both on `B`, `z` recolored to `c`.
    SwapInB,
    /// `u_1` takes an unused color `w`, `v_1` takes `c`.
    FreeColor,
    /// `v` takes `c`, `u_1` takes `f(v)`, `v_1` takes `c`.
    ThreeWay,
}

impl fmt::Display for ConstructStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructStep::NoHigh => f.write_str("no-high"),
            ConstructStep::ManyHigh(s) => write!(f, "many-high/{s}"),
            ConstructStep::DropZ => f.write_str("drop-z"),
            ConstructStep::ZToC => f.write_str("z-to-c"),
            ConstructStep::SwapInB => f.write_str("swap-in-b"),
            ConstructStep::FreeColor => f.write_str("free-color"),
            ConstructStep::ThreeWay => f.write_str("three-way"),
        }
    }
}

/// Bookkeeping for one substitution of a high color `c` by a fresh `z`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepairState {
    pub c: Color,
    pub z: Color,
    /// Number of `B` vertices whose lists contain `c`.
    pub m_c: usize,
    /// Vertices whose `c` was replaced by `z`.
    pub substituted: VertexSet,
    /// Colors used twice on `B`, when the ladder reached that point.
    pub d_set: Vec<Color>,
    /// Colors used once on `B − {v_1}`, when the ladder reached that point.
    pub s_set: Vec<Color>,
}

#[derive(Clone, Debug, Default)]
pub struct ConstructTrace {
    /// Innermost level first.
    pub steps: Vec<ConstructStep>,
    pub states: Vec<RepairState>,
    pub repair: RepairStats,
}

impl ConstructTrace {
    fn absorb(&mut self, r: RepairStats) {
        self.repair.moves += r.moves;
        self.repair.fallback |= r.fallback;
    }

    pub fn describe(&self) -> String {
        self.steps.iter().map(ToString::to_string).collect::<Vec<_>>().join(" > ")
    }
}

struct Instance<'a> {
    g: &'a Graph,
    sides: &'a Sides,
    d: usize,
    k: usize,
}

fn check(g: &Graph, l: &ListAssignment, sides: &Sides, d: usize) -> Result<usize> {
    let k = check_instance(g, l)?;
    let (n, m) = (sides.n(), sides.m());
    if d == 0 {
        return invalid("d must be at least 1");
    }
    if n < 2 {
        return invalid(format!("need n >= 2, got n = {n}"));
    }
    if m < 3 * d {
        return invalid(format!("need m >= 3d, got m = {m}, d = {d}"));
    }
    if k != m + n - d - 1 {
        return invalid(format!("expected an {}-assignment, got lists of size {k}", m + n - d - 1));
    }
    Ok(k)
}

/// High-multiplicity colors, largest multiplicity first, ties by color.
fn high_colors(l: &ListAssignment, k: usize) -> Vec<(Color, VertexSet)> {
    let mut high: Vec<(Color, VertexSet)> = l.supports().into_iter().filter(|(_, s)| s.len() > k).collect();
    high.sort_by_key(|&(c, s)| (std::cmp::Reverse(s.len()), c));
    high
}

fn finish(
    inst: &Instance,
    l: &ListAssignment,
    f: Coloring,
    step: &str,
    trace: &mut ConstructTrace,
) -> Result<Coloring> {
    let (f, stats) = repair_no_excess_traced(inst.g, l, &f)
        .map_err(|e| Error::Internal(format!("{step}: repair failed: {e}")))?;
    trace.absorb(stats);
    Ok(f)
}

fn validated(g: &Graph, l: &ListAssignment, f: Coloring, trace: &ConstructTrace) -> Result<Coloring> {
    match verify_proportional(g, l, &f).first() {
        None => Ok(f),
        Some(v) => Err(Error::Internal(format!("output fails verification ({v}) after {}", trace.describe()))),
    }
}

/// Proportional coloring of `K_{n,m}` from an `(m+n−d−1)`-assignment with
/// at least `(m−d)/2` colors of high multiplicity. `B` is the larger part.
pub fn color_knm_many_high(g: &Graph, l: &ListAssignment, d: usize) -> Result<Coloring> {
    let sides = Sides::of(g, 1)?;
    let k = check(g, l, &sides, d)?;
    let inst = Instance { g, sides: &sides, d, k };
    let alpha = high_colors(l, k).len();
    if 2 * alpha < sides.m() - d {
        return invalid(format!("alpha = {alpha} is below (m-d)/2 = {}/2", sides.m() - d));
    }
    let mut trace = ConstructTrace::default();
    let f = many_high(&inst, l, &mut trace)?;
    validated(g, l, f, &trace)
}

fn many_high(inst: &Instance, l: &ListAssignment, trace: &mut ConstructTrace) -> Result<Coloring> {
    let (n, m, d, k) = (inst.sides.n(), inst.sides.m(), inst.d, inst.k);
    let a = &inst.sides.a;
    let even = (m - d) % 2 == 0;
    let pairs = (m - d).div_ceil(2);
    let high = high_colors(l, k);
    let chosen: Vec<Color> = high.iter().take(pairs).map(|&(c, _)| c).collect();
    let chosen_set: BTreeSet<Color> = chosen.iter().copied().collect();

    // Reorder B so that chosen color i covers positions 2i and 2i+1.
    let full_pairs = if even { pairs } else { pairs - 1 };
    let mut order: Vec<usize> = Vec::with_capacity(m);
    let mut free: Vec<usize> = inst.sides.b.clone();
    let take = |c: Color, free: &mut Vec<usize>, order: &mut Vec<usize>| -> bool {
        match free.iter().position(|&v| l.contains(v, c)) {
            Some(i) => {
                order.push(free.remove(i));
                true
            }
            None => false,
        }
    };
    for &c in &chosen[..full_pairs] {
        if !(take(c, &mut free, &mut order) && take(c, &mut free, &mut order)) {
            return Err(Error::Internal(format!(
                "pairing: high color {c} misses more than d vertices of B"
            )));
        }
    }
    let mut f = Coloring::new(vec![0; inst.g.vertex_count()]);
    for (i, &c) in chosen[..full_pairs].iter().enumerate() {
        f.set(order[2 * i], c);
        f.set(order[2 * i + 1], c);
    }

    if even {
        let rest: Vec<usize> = a.iter().chain(free.iter()).copied().collect();
        if let Some(sdr) = distinct_colors(l, &rest, &chosen_set) {
            for (v, c) in sdr {
                f.set(v, c);
            }
            trace.steps.push(ConstructStep::ManyHigh(Subcase::EvenDistinct));
            return finish(inst, l, f, "even case", trace);
        }
        let reduced: Vec<Vec<Color>> = rest
            .iter()
            .map(|&v| l.list(v).iter().copied().filter(|c| !chosen_set.contains(c)).collect())
            .collect();
        if !(reduced.windows(2).all(|w| w[0] == w[1]) && reduced[0].len() == n + d - 1) {
            return Err(Error::Internal(
                "even case: remaining lists are not a constant (n+d-1)-assignment yet have no distinct representatives"
                    .into(),
            ));
        }
        if l.is_constant() {
            let palette = l.palette();
            let mut g_color = Coloring::new(vec![0; inst.g.vertex_count()]);
            let b = &inst.sides.b;
            for i in 0..n / 2 {
                g_color.set(a[2 * i], palette[i]);
                g_color.set(a[2 * i + 1], palette[i]);
            }
            for i in 0..m / 2 {
                g_color.set(b[2 * i], palette[n / 2 + i]);
                g_color.set(b[2 * i + 1], palette[n / 2 + i]);
            }
            let mut next = n / 2 + m / 2;
            if n % 2 == 1 {
                g_color.set(a[n - 1], palette[next]);
                next += 1;
            }
            if m % 2 == 1 {
                g_color.set(b[m - 1], palette[next]);
            }
            trace.steps.push(ConstructStep::ManyHigh(Subcase::EvenConstant));
            return finish(inst, l, g_color, "even case (a)", trace);
        }
        let last = free[free.len() - 1];
        let j = (0..full_pairs)
            .find(|&j| l.list(order[2 * j]) != l.list(last) || l.list(order[2 * j + 1]) != l.list(last))
            .ok_or_else(|| {
                Error::Internal("even case (b): every paired list equals L(v_m) yet L is not constant".into())
            })?;
        let cj = chosen[j];
        if !(l.contains(a[0], cj) && l.contains(a[1], cj)) {
            return Err(Error::Internal(format!("even case (b): color {cj} missing from L(u_1) or L(u_2)")));
        }
        f.set(a[0], cj);
        f.set(a[1], cj);
        let rest: Vec<usize> = a[2..]
            .iter()
            .chain([order[2 * j], order[2 * j + 1]].iter())
            .chain(free.iter())
            .copied()
            .collect();
        let sdr = distinct_colors(l, &rest, &chosen_set)
            .ok_or_else(|| Error::Internal("even case (b): no distinct representatives for G''".into()))?;
        for (v, c) in sdr {
            f.set(v, c);
        }
        trace.steps.push(ConstructStep::ManyHigh(Subcase::EvenMoved));
        return finish(inst, l, f, "even case (b)", trace);
    }

    let cp = chosen[pairs - 1];
    if !take(cp, &mut free, &mut order) {
        return Err(Error::Internal(format!("odd case: color {cp} is on no remaining vertex of B")));
    }
    let v_last = order[m - d - 1];
    f.set(v_last, cp);
    if take(cp, &mut free, &mut order) {
        f.set(order[m - d], cp);
        let rest: Vec<usize> = a.iter().chain(free.iter()).copied().collect();
        let sdr = distinct_colors(l, &rest, &chosen_set)
            .ok_or_else(|| Error::Internal("odd case (a): no distinct representatives for G'''".into()))?;
        for (v, c) in sdr {
            f.set(v, c);
        }
        trace.steps.push(ConstructStep::ManyHigh(Subcase::OddPair));
        return finish(inst, l, f, "odd case (a)", trace);
    }
    if !(l.contains(a[0], cp) && l.contains(a[1], cp)) {
        return Err(Error::Internal(format!("odd case (b): color {cp} missing from L(u_1) or L(u_2)")));
    }
    f.set(a[0], cp);
    f.set(a[1], cp);
    let rest: Vec<usize> = a[2..].iter().chain([v_last].iter()).chain(free.iter()).copied().collect();
    let sdr = distinct_colors(l, &rest, &chosen_set)
        .ok_or_else(|| Error::Internal("odd case (b): no distinct representatives for G(4)".into()))?;
    for (v, c) in sdr {
        f.set(v, c);
    }
    trace.steps.push(ConstructStep::ManyHigh(Subcase::OddOnA));
    finish(inst, l, f, "odd case (b)", trace)
}

/// Proportional coloring of `K_{n,m}` (`B` the larger part) from any
/// `(m+n−d−1)`-assignment, for `m ≥ 3d` and `n ≥ 2`.
pub fn color_knm(g: &Graph, l: &ListAssignment, d: usize) -> Result<Coloring> {
    color_knm_traced(g, l, d).map(|(f, _)| f)
}

pub fn color_knm_traced(g: &Graph, l: &ListAssignment, d: usize) -> Result<(Coloring, ConstructTrace)> {
    color_knm_sides(g, l, d, 1)
}

/// As [`color_knm_traced`], with part `b_part` playing the role of `B`.
pub fn color_knm_sides(
    g: &Graph,
    l: &ListAssignment,
    d: usize,
    b_part: usize,
) -> Result<(Coloring, ConstructTrace)> {
    let sides = Sides::of(g, b_part)?;
    let k = check(g, l, &sides, d)?;
    let inst = Instance { g, sides: &sides, d, k };
    let mut trace = ConstructTrace::default();
    let f = recurse(&inst, l, &mut trace)?;
    Ok((f, trace))
}

fn recurse(inst: &Instance, l: &ListAssignment, trace: &mut ConstructTrace) -> Result<Coloring> {
    let (n, m, d, k) = (inst.sides.n(), inst.sides.m(), inst.d, inst.k);
    let high = high_colors(l, k);
    let alpha = high.len();
    if alpha == 0 {
        let f = hall_proper_coloring(inst.g, l)
            .map_err(|e| Error::Internal(format!("no high colors: distinct coloring failed: {e}")))?;
        trace.steps.push(ConstructStep::NoHigh);
        let f = finish(inst, l, f, "no high colors", trace)?;
        return validated(inst.g, l, f, trace);
    }
    if 2 * alpha >= m - d {
        let f = many_high(inst, l, trace)?;
        return validated(inst.g, l, f, trace);
    }

    let (c, support) = high[0];
    let b_support: Vec<usize> = inst.sides.b.iter().copied().filter(|&v| support.contains(v)).collect();
    if b_support.len() < m - d {
        return Err(Error::Internal(format!(
            "substitution: color {c} lies on only {} vertices of B",
            b_support.len()
        )));
    }
    let substituted: VertexSet = b_support[..m - d].iter().copied().collect();
    let z = l.max_color() + 1;
    let l2 = l.substitute(substituted, c, z)?;
    let alpha2 = high_colors(&l2, k).len();
    if alpha2 + 1 != alpha {
        return Err(Error::Internal(format!(
            "substitution: high colors went from {alpha} to {alpha2}, expected one fewer"
        )));
    }
    if l2.multiplicity(z) != m - d || l2.multiplicity(c) > n + d {
        return Err(Error::Internal("substitution: multiplicities of z and c out of range".into()));
    }
    let mut state = RepairState { c, z, m_c: b_support.len(), substituted, d_set: Vec::new(), s_set: Vec::new() };

    let mut f = recurse(inst, &l2, trace)?;
    let class_z = f.class(z);
    let class_c = f.class(c);
    let b_set = inst.sides.b_set();
    let step = if class_z.is_empty() {
        trace.steps.push(ConstructStep::DropZ);
        trace.states.push(state);
        let f = finish(inst, l, f, "z unused", trace)?;
        return validated(inst.g, l, f, trace);
    } else if class_z.len() != 1 || class_c.len() > 1 {
        return Err(Error::Internal(format!(
            "ladder: class sizes |f^-1(c)| = {}, |f^-1(z)| = {} are not proportional for L'",
            class_c.len(),
            class_z.len()
        )));
    } else {
        let v1 = class_z.first().unwrap();
        if class_c.is_empty() {
            f.set(v1, c);
            ConstructStep::ZToC
        } else if class_c.is_subset(b_set) {
            f.set(v1, c);
            ConstructStep::SwapInB
        } else {
            let u1 = class_c.first().unwrap();
            let on_b = |x: Color| inst.sides.b.iter().filter(|&&v| f.color(v) == x).count();
            let used_on_a: BTreeSet<Color> = inst.sides.a.iter().map(|&v| f.color(v)).collect();
            let used_on_b: BTreeSet<Color> = inst.sides.b.iter().map(|&v| f.color(v)).collect();
            let d_set: BTreeSet<Color> = used_on_b.iter().copied().filter(|&x| on_b(x) == 2).collect();
            let s_set: BTreeSet<Color> =
                used_on_b.iter().copied().filter(|&x| x != z && !d_set.contains(&x)).collect();
            let l3: Vec<Color> = l2
                .list(u1)
                .iter()
                .copied()
                .filter(|x| !used_on_a.contains(x) && !d_set.contains(x))
                .collect();
            state.d_set = d_set.iter().copied().collect();
            state.s_set = s_set.iter().copied().collect();
            if l3.len() < d + 1 {
                return Err(Error::Internal(format!(
                    "ladder: |L''(u_1)| = {} is below d + 1 = {}",
                    l3.len(),
                    d + 1
                )));
            }
            if let Some(&w) = l3.iter().find(|x| !s_set.contains(x)) {
                f.set(u1, w);
                f.set(v1, c);
                ConstructStep::FreeColor
            } else {
                let v = inst
                    .sides
                    .b
                    .iter()
                    .copied()
                    .find(|&v| v != v1 && l3.contains(&f.color(v)) && l.contains(v, c))
                    .ok_or_else(|| Error::Internal("case (2): no v with c in L(v)".into()))?;
                let fv = f.color(v);
                f.set(v, c);
                f.set(u1, fv);
                f.set(v1, c);
                ConstructStep::ThreeWay
            }
        }
    };
    trace.steps.push(step);
    trace.states.push(state);
    validated(inst.g, l, f, trace)
}
