use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{entries_colorable, ClassSpec};
use crate::bounds::{known_bounds, BoundReport};
use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::list::{AssignmentEnumerator, EnumLimits, EnumTask, ListAssignment, SupportEntry, SupportMultiset};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Outcome {
    Choosable,
    NotChoosable,
    Undecided,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Choosable => "choosable",
            Outcome::NotChoosable => "not-choosable",
            Outcome::Undecided => "undecided",
        })
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "choosable" => Ok(Outcome::Choosable),
            "not-choosable" => Ok(Outcome::NotChoosable),
            "undecided" => Ok(Outcome::Undecided),
            _ => Err(Error::Parse(format!("unknown outcome `{s}`"))),
        }
    }
}

/// How far an exhaustive run got: the first `tasks_done` subtrees of the
/// enumeration are fully checked.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Progress {
    pub tasks_done: usize,
    pub tasks_total: usize,
    pub classes_checked: u64,
}

#[derive(Clone, Debug)]
pub struct DecideOptions {
    pub jobs: usize,
    pub limits: EnumLimits,
    pub time_limit: Option<Duration>,
    pub resume: Option<Progress>,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { jobs: 1, limits: EnumLimits::default(), time_limit: None, resume: None }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub graph: String,
    pub k: usize,
    pub outcome: Outcome,
    /// Present exactly for `NotChoosable`: the first failing class in
    /// canonical order, colors numbered from 1.
    pub witness: Option<ListAssignment>,
    pub witness_form: Option<SupportMultiset>,
    pub classes_checked: u64,
    pub elapsed: Duration,
    /// Present for `Undecided` runs that started enumerating.
    pub progress: Option<Progress>,
    pub reason: Option<String>,
}

impl Verdict {
    pub fn witness_hash(&self) -> Option<u64> {
        self.witness_form.as_ref().map(SupportMultiset::hash64)
    }

    pub fn is_choosable(&self) -> bool {
        self.outcome == Outcome::Choosable
    }
}

/// Decides proportional k-choosability by checking one assignment per
/// canonical class. The verdict, witness and class count do not depend on
/// `jobs`.
pub fn decide_choosable(g: &Graph, k: usize, opts: &DecideOptions) -> Result<Verdict> {
    let started = Instant::now();
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let mut verdict = Verdict {
        graph: g.describe(),
        k,
        outcome: Outcome::Undecided,
        witness: None,
        witness_form: None,
        classes_checked: 0,
        elapsed: Duration::ZERO,
        progress: None,
        reason: None,
    };
    let en = match AssignmentEnumerator::new(g, k, opts.limits) {
        Ok(en) => en,
        Err(Error::ResourceLimit(msg)) => {
            verdict.reason = Some(msg);
            verdict.elapsed = started.elapsed();
            return Ok(verdict);
        }
        Err(e) => return Err(e),
    };
    let tasks = en.tasks();
    let mut progress = Progress { tasks_done: 0, tasks_total: tasks.len(), classes_checked: 0 };
    if let Some(resume) = opts.resume {
        if resume.tasks_total != tasks.len() || resume.tasks_done > tasks.len() {
            return invalid(format!(
                "checkpoint covers {}/{} tasks but this run has {} tasks",
                resume.tasks_done,
                resume.tasks_total,
                tasks.len()
            ));
        }
        progress = resume;
    }
    let adjacency: Vec<VertexSet> = (0..g.vertex_count()).map(|v| g.neighbors(v)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
    let window = opts.jobs.max(1) * 8;

    while progress.tasks_done < tasks.len() {
        if let Some(limit) = opts.time_limit {
            if started.elapsed() >= limit {
                verdict.reason = Some(format!("time limit of {:.1}s reached", limit.as_secs_f64()));
                verdict.classes_checked = progress.classes_checked;
                verdict.progress = Some(progress);
                verdict.elapsed = started.elapsed();
                return Ok(verdict);
            }
        }
        let end = (progress.tasks_done + window).min(tasks.len());
        let batch = &tasks[progress.tasks_done..end];
        let results: Vec<(u64, Option<Vec<SupportEntry>>)> =
            pool.install(|| batch.par_iter().map(|t| check_task(&en, &adjacency, k, t)).collect());
        for (count, failure) in results {
            progress.classes_checked += count;
            if let Some(entries) = failure {
                let form = SupportMultiset::from_sorted(g.vertex_count(), entries);
                verdict.outcome = Outcome::NotChoosable;
                verdict.witness = Some(form.materialize());
                verdict.witness_form = Some(form);
                verdict.classes_checked = progress.classes_checked;
                verdict.elapsed = started.elapsed();
                return Ok(verdict);
            }
            progress.tasks_done += 1;
        }
    }
    verdict.outcome = Outcome::Choosable;
    verdict.classes_checked = progress.classes_checked;
    verdict.elapsed = started.elapsed();
    Ok(verdict)
}

/// Classes checked in the subtree up to and including the first failure.
fn check_task(
    en: &AssignmentEnumerator,
    adjacency: &[VertexSet],
    k: usize,
    task: &EnumTask,
) -> (u64, Option<Vec<SupportEntry>>) {
    let mut count = 0u64;
    let mut failure = None;
    let mut buf: Vec<ClassSpec> = Vec::new();
    let _ = en.run_task(task, |entries| {
        count += 1;
        if entries_colorable(adjacency, entries, k, &mut buf) {
            ControlFlow::Continue(())
        } else {
            failure = Some(entries.to_vec());
            ControlFlow::Break(())
        }
    });
    (count, failure)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChiValue {
    Exact(usize),
    Interval { lower: usize, upper: Option<usize> },
}

impl fmt::Display for ChiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChiValue::Exact(k) => write!(f, "{k}"),
            ChiValue::Interval { lower, upper: Some(u) } => write!(f, "[{lower}, {u}]"),
            ChiValue::Interval { lower, upper: None } => write!(f, "[{lower}, ?]"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChiPc {
    pub value: ChiValue,
    /// Closed-form bounds for graphs built with parts, if any apply.
    pub bounds: Option<BoundReport>,
    /// The first `k` tried.
    pub start: usize,
    pub verdicts: Vec<Verdict>,
}

/// Smallest `k ≤ k_max` for which `g` is proportionally k-choosable,
/// starting from the best known lower bound. Stops at the first choosable
/// `k`; an undecided `k` yields an interval.
pub fn chi_pc(g: &Graph, k_max: usize, opts: &DecideOptions) -> Result<ChiPc> {
    if k_max == 0 {
        return invalid("k_max must be at least 1");
    }
    let bounds = known_bounds(g)?;
    let start = bounds.as_ref().map_or(1, |b| b.lower);
    let upper = bounds.as_ref().and_then(|b| b.upper);
    let mut verdicts = Vec::new();
    for k in start..=k_max {
        let v = decide_choosable(g, k, opts)?;
        let outcome = v.outcome;
        verdicts.push(v);
        match outcome {
            Outcome::Choosable => {
                return Ok(ChiPc { value: ChiValue::Exact(k), bounds, start, verdicts });
            }
            Outcome::NotChoosable => {}
            Outcome::Undecided => {
                return Ok(ChiPc { value: ChiValue::Interval { lower: k, upper }, bounds, start, verdicts });
            }
        }
    }
    let lower = start.max(k_max + 1);
    Ok(ChiPc { value: ChiValue::Interval { lower, upper }, bounds, start, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::find_proportional;

    fn k(parts: &[usize]) -> Graph {
        Graph::complete_multipartite(parts).unwrap()
    }

    #[test]
    fn small_decisions() {
        let opts = DecideOptions::default();
        assert!(decide_choosable(&k(&[1, 2]), 2, &opts).unwrap().is_choosable());
        assert!(decide_choosable(&k(&[2, 2]), 3, &opts).unwrap().is_choosable());
        let v = decide_choosable(&k(&[2, 2]), 2, &opts).unwrap();
        assert_eq!(v.outcome, Outcome::NotChoosable);
        let w = v.witness.unwrap();
        assert_eq!(find_proportional(&k(&[2, 2]), &w).unwrap(), None);
    }

    #[test]
    fn guard_gives_undecided() {
        let v = decide_choosable(&k(&[6, 6]), 3, &DecideOptions::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Undecided);
        assert!(v.reason.unwrap().contains("guard"));
    }

    #[test]
    fn time_limit_and_resume() {
        let g = k(&[2, 3]);
        let full = decide_choosable(&g, 3, &DecideOptions::default()).unwrap();
        let cut = DecideOptions { time_limit: Some(Duration::ZERO), ..Default::default() };
        let v = decide_choosable(&g, 3, &cut).unwrap();
        assert_eq!(v.outcome, Outcome::Undecided);
        let p = v.progress.unwrap();
        assert_eq!(p.tasks_done, 0);
        let resumed = DecideOptions { resume: Some(p), ..Default::default() };
        let v = decide_choosable(&g, 3, &resumed).unwrap();
        assert_eq!(v.outcome, full.outcome);
        assert_eq!(v.classes_checked, full.classes_checked);
        let bogus = DecideOptions {
            resume: Some(Progress { tasks_done: 1, tasks_total: 1, classes_checked: 0 }),
            ..Default::default()
        };
        assert!(decide_choosable(&g, 3, &bogus).is_err());
    }

    #[test]
    fn jobs_do_not_change_verdicts() {
        let g = k(&[2, 2]);
        let one = decide_choosable(&g, 2, &DecideOptions::default()).unwrap();
        let four = decide_choosable(&g, 2, &DecideOptions { jobs: 4, ..Default::default() }).unwrap();
        assert_eq!(one.witness_hash(), four.witness_hash());
        assert_eq!(one.classes_checked, four.classes_checked);
    }

    #[test]
    fn chi_pc_small() {
        let opts = DecideOptions::default();
        assert_eq!(chi_pc(&k(&[1, 3]), 6, &opts).unwrap().value, ChiValue::Exact(3));
        assert_eq!(chi_pc(&k(&[2, 2]), 6, &opts).unwrap().value, ChiValue::Exact(3));
        assert_eq!(chi_pc(&k(&[2, 3]), 6, &opts).unwrap().value, ChiValue::Exact(3));
        let r = chi_pc(&k(&[9, 9]), 5, &opts).unwrap();
        assert_eq!(r.value, ChiValue::Interval { lower: 10, upper: Some(14) });
        assert!(r.verdicts.is_empty());
    }

    #[test]
    fn outcome_round_trip() {
        for o in [Outcome::Choosable, Outcome::NotChoosable, Outcome::Undecided] {
            assert_eq!(o.to_string().parse::<Outcome>().unwrap(), o);
        }
    }
}
