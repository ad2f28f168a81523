//! Closed-form bounds on the proportional choice number of complete
//! multipartite graphs, and the explicit assignment refuting the even case.

use std::fmt;

use crate::equitable::wu_equitable;
use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::list::{Color, ListAssignment};
use crate::solver::{decide_choosable, find_proportional, DecideOptions, Outcome};

/// Which result produced a lower bound.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BoundSource {
    /// `Σ ⌈n_i/2⌉`.
    General,
    /// `1 + Σ n_i/2` for all-even parts with `max n_i ≤ Σ n_i/2`.
    EvenCase,
    /// `n + 1` for `K_{n,m}` with `2 ≤ n ≤ m`.
    SmallSide,
    /// `1 + ⌈m/2⌉` for `K_{1,m}`.
    Star,
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundSource::General => "general",
            BoundSource::EvenCase => "even-case",
            BoundSource::SmallSide => "small-side",
            BoundSource::Star => "star",
        })
    }
}

fn check_bipartite(n: usize, m: usize) -> Result<()> {
    if n < 2 || n > m {
        return invalid(format!("bipartite bounds need 2 <= n <= m, got n={n}, m={m}"));
    }
    Ok(())
}

/// `max{n + 1, ⌈n/2⌉ + ⌈m/2⌉}`.
pub fn lower_bound_knm(n: usize, m: usize) -> Result<usize> {
    check_bipartite(n, m)?;
    Ok((n + 1).max(n.div_ceil(2) + m.div_ceil(2)))
}

/// `n + m − 1 − ⌊m/3⌋`.
pub fn upper_bound_knm(n: usize, m: usize) -> Result<usize> {
    check_bipartite(n, m)?;
    Ok(n + m - 1 - m / 3)
}

/// The proportional choice number of the star `K_{1,m}`.
pub fn star_chi_pc(m: usize) -> usize {
    1 + m.div_ceil(2)
}

fn check_parts(parts: &[usize]) -> Result<()> {
    if parts.len() < 2 {
        return invalid("need at least two parts");
    }
    if parts.contains(&0) {
        return invalid("part sizes must be positive");
    }
    Ok(())
}

fn half_sum(parts: &[usize]) -> usize {
    parts.iter().map(|n| n.div_ceil(2)).sum()
}

/// The best lower bound available for `K_{parts}` and where it comes from.
pub fn lower_bound_multipartite(parts: &[usize]) -> Result<(usize, BoundSource)> {
    check_parts(parts)?;
    let s = half_sum(parts);
    let max = *parts.iter().max().unwrap();
    let mut best = if parts.iter().all(|n| n % 2 == 0) && max <= s {
        (s + 1, BoundSource::EvenCase)
    } else {
        (s, BoundSource::General)
    };
    if parts.len() == 2 {
        let n = parts[0].min(parts[1]);
        let m = parts[0].max(parts[1]);
        if n == 1 {
            best = (star_chi_pc(m), BoundSource::Star);
        } else if n + 1 > best.0 {
            best = (n + 1, BoundSource::SmallSide);
        }
    }
    Ok(best)
}

/// Replaces every even part size by one less.
pub fn odd_reduction(parts: &[usize]) -> Vec<usize> {
    parts.iter().map(|&n| if n % 2 == 0 { n - 1 } else { n }).collect()
}

/// The s-assignment with lists `[s−1] ∪ {s−1+i}` on part `i`, where
/// `s = Σ n_i/2`. Parts are taken in ascending order to match the vertex
/// numbering of [`Graph::complete_multipartite`].
pub fn even_case_witness(parts: &[usize]) -> Result<ListAssignment> {
    check_parts(parts)?;
    if let Some(odd) = parts.iter().find(|&&n| n % 2 == 1) {
        return invalid(format!("part size {odd} is odd; every part must be even"));
    }
    let s: usize = parts.iter().sum::<usize>() / 2;
    let max = *parts.iter().max().unwrap();
    if max > s {
        return invalid(format!("largest part {max} exceeds s = {s}"));
    }
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    let mut lists = Vec::new();
    for (i, &size) in sorted.iter().enumerate() {
        let mut list: Vec<Color> = (1..s as Color).collect();
        list.push((s + i) as Color);
        lists.extend(std::iter::repeat_n(list, size));
    }
    ListAssignment::new(lists)
}

/// Everything known in closed form about `χ_pc(K_{parts})`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundReport {
    /// Sorted ascending.
    pub parts: Vec<usize>,
    pub lower: usize,
    pub lower_source: BoundSource,
    /// Only for `K_{n,m}` with `2 ≤ n ≤ m`.
    pub upper: Option<usize>,
    pub forced: bool,
}

pub fn bound_report(parts: &[usize]) -> Result<BoundReport> {
    let (lower, lower_source) = lower_bound_multipartite(parts)?;
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    let upper = match sorted[..] {
        [n, m] if n >= 2 => Some(upper_bound_knm(n, m)?),
        _ => None,
    };
    Ok(BoundReport { parts: sorted, lower, lower_source, upper, forced: upper == Some(lower) })
}

/// Bounds for a graph built with at least two parts.
pub fn known_bounds(g: &Graph) -> Result<Option<BoundReport>> {
    match g.parts() {
        Some(parts) if parts.len() >= 2 => bound_report(parts).map(Some),
        _ => Ok(None),
    }
}

/// One step of the lower-bound argument, re-executed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PipelineStep {
    pub name: String,
    /// `None` when skipped.
    pub held: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct LowerBoundCheck {
    pub parts: Vec<usize>,
    pub bound: usize,
    pub source: BoundSource,
    pub witness: Option<ListAssignment>,
    pub steps: Vec<PipelineStep>,
}

impl LowerBoundCheck {
    /// No executed step failed.
    pub fn holds(&self) -> bool {
        self.steps.iter().all(|s| s.held != Some(false))
    }

    /// Every step ran and held.
    pub fn certified(&self) -> bool {
        self.steps.iter().all(|s| s.held == Some(true))
    }
}

/// Re-runs the arguments behind [`lower_bound_multipartite`]: the odd
/// reduction, the equitable-coloring obstruction, the even-case witness
/// refutation, and (when `search` is given) an exhaustive decision at
/// `bound − 1`.
pub fn verify_lower_bound(parts: &[usize], search: Option<&DecideOptions>) -> Result<LowerBoundCheck> {
    let (bound, source) = lower_bound_multipartite(parts)?;
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    let s = half_sum(&sorted);
    let mut steps = Vec::new();

    let reduced = odd_reduction(&sorted);
    let kept = half_sum(&reduced) == s;
    steps.push(PipelineStep {
        name: "odd reduction keeps s".into(),
        held: Some(kept),
        detail: format!("{sorted:?} -> {reduced:?}, s = {s}"),
    });
    let equitable = wu_equitable(&reduced, s - 1);
    steps.push(PipelineStep {
        name: "reduced graph not equitably (s-1)-colorable".into(),
        held: Some(!equitable),
        detail: format!("wu_equitable({reduced:?}, {}) = {equitable}", s - 1),
    });

    let mut witness = None;
    if source == BoundSource::EvenCase {
        let w = even_case_witness(&sorted)?;
        let g = Graph::complete_multipartite(&sorted)?;
        let found = find_proportional(&g, &w)?;
        steps.push(PipelineStep {
            name: "even-case witness has no proportional coloring".into(),
            held: Some(found.is_none()),
            detail: match &found {
                None => format!("searched {s}-assignment exhaustively"),
                Some(f) => format!("found coloring {f}"),
            },
        });
        witness = Some(w);
    }

    if bound >= 2 {
        let name = format!("not proportionally {}-choosable", bound - 1);
        let step = match search {
            None => PipelineStep { name, held: None, detail: "search not requested".into() },
            Some(opts) => {
                let g = Graph::complete_multipartite(&sorted)?;
                let v = decide_choosable(&g, bound - 1, opts)?;
                if witness.is_none() {
                    witness = v.witness.clone();
                }
                let held = match v.outcome {
                    Outcome::NotChoosable => Some(true),
                    Outcome::Choosable => Some(false),
                    Outcome::Undecided => None,
                };
                let detail = match v.outcome {
                    Outcome::Undecided => v.reason.unwrap_or_default(),
                    o => format!("{o} after {} classes", v.classes_checked),
                };
                PipelineStep { name, held, detail }
            }
        };
        steps.push(step);
    }
    Ok(LowerBoundCheck { parts: sorted, bound, source, witness, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartite_formulas() {
        assert_eq!(lower_bound_knm(2, 2).unwrap(), 3);
        assert_eq!(lower_bound_knm(2, 5).unwrap(), 4);
        assert_eq!(lower_bound_knm(4, 4).unwrap(), 5);
        assert_eq!(upper_bound_knm(2, 2).unwrap(), 3);
        assert_eq!(upper_bound_knm(2, 3).unwrap(), 3);
        assert_eq!(upper_bound_knm(3, 9).unwrap(), 8);
        assert!(lower_bound_knm(1, 3).is_err());
        assert!(upper_bound_knm(4, 3).is_err());
    }

    #[test]
    fn bounds_are_consistent() {
        for n in 2..=12 {
            for m in n..=12 {
                assert!(lower_bound_knm(n, m).unwrap() <= upper_bound_knm(n, m).unwrap(), "{n},{m}");
            }
        }
    }

    #[test]
    fn multipartite_lower_bounds() {
        assert_eq!(lower_bound_multipartite(&[2, 2]).unwrap(), (3, BoundSource::EvenCase));
        assert_eq!(lower_bound_multipartite(&[2, 2, 2]).unwrap(), (4, BoundSource::EvenCase));
        assert_eq!(lower_bound_multipartite(&[3, 5]).unwrap(), (5, BoundSource::General));
        assert_eq!(lower_bound_multipartite(&[1, 5]).unwrap(), (4, BoundSource::Star));
        assert_eq!(lower_bound_multipartite(&[2, 4]).unwrap(), (3, BoundSource::General));
        assert_eq!(lower_bound_multipartite(&[5, 5]).unwrap(), (6, BoundSource::General));
        assert!(lower_bound_multipartite(&[3]).is_err());
        for n in 2..=8 {
            for m in n..=8 {
                assert_eq!(lower_bound_multipartite(&[n, m]).unwrap().0, lower_bound_knm(n, m).unwrap());
            }
        }
    }

    #[test]
    fn odd_reduction_examples() {
        assert_eq!(odd_reduction(&[2, 3]), vec![1, 3]);
        assert_eq!(odd_reduction(&[4, 4]), vec![3, 3]);
        assert_eq!(odd_reduction(&[1, 1]), vec![1, 1]);
    }

    #[test]
    fn witness_examples() {
        let w = even_case_witness(&[2, 2]).unwrap();
        assert_eq!(w.lists(), &[vec![1, 2], vec![1, 2], vec![1, 3], vec![1, 3]]);
        let w = even_case_witness(&[2, 2, 2]).unwrap();
        assert_eq!(w.list(0), &[1, 2, 3]);
        assert_eq!(w.list(2), &[1, 2, 4]);
        assert_eq!(w.list(5), &[1, 2, 5]);
        let err = even_case_witness(&[2, 4]).unwrap_err().to_string();
        assert!(err.contains("exceeds"), "{err}");
        assert!(even_case_witness(&[2, 3]).unwrap_err().to_string().contains("odd"));
    }

    #[test]
    fn reports() {
        let r = bound_report(&[3, 2]).unwrap();
        assert_eq!((r.lower, r.upper, r.forced), (3, Some(3), true));
        assert_eq!(r.parts, vec![2, 3]);
        let r = bound_report(&[2, 4]).unwrap();
        assert_eq!((r.lower, r.upper, r.forced), (3, Some(4), false));
        let r = bound_report(&[1, 3]).unwrap();
        assert_eq!((r.lower, r.upper), (3, None));
        let g = Graph::complete_multipartite(&[4]).unwrap();
        assert!(known_bounds(&g).unwrap().is_none());
    }

    #[test]
    fn pipeline_without_search() {
        let c = verify_lower_bound(&[2, 2], None).unwrap();
        assert!(c.holds());
        assert!(!c.certified());
        assert_eq!(c.bound, 3);
        let c = verify_lower_bound(&[3, 3], None).unwrap();
        assert!(c.holds());
        assert!(c.witness.is_none());
    }

    #[test]
    fn pipeline_with_search() {
        let opts = DecideOptions::default();
        for parts in [[2, 2], [1, 3], [2, 3]] {
            let c = verify_lower_bound(&parts, Some(&opts)).unwrap();
            assert!(c.certified(), "{parts:?}: {:?}", c.steps);
        }
    }
}
