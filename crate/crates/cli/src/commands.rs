use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use propchoose::acceptance::{Suite, CRITERIA};
use propchoose::bounds::{bound_report, star_chi_pc, verify_lower_bound};
use propchoose::constructive::color_knm_sides;
use propchoose::equitable::cross_check_wu;
use propchoose::graph::parse_part_list;
use propchoose::list::{sample_assignment, EnumLimits};
use propchoose::solver::{chi_pc, decide_choosable, is_proportional, ChiValue, DecideOptions, Outcome, Verdict};
use propchoose::{Error, Graph};

use crate::cache::{Cache, CacheRecord};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug)]
pub struct Fail {
    pub code: u8,
    pub message: String,
}

impl Fail {
    pub fn usage(message: impl Into<String>) -> Self {
        Fail { code: EXIT_USAGE, message: message.into() }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        Fail { code: EXIT_FAILURE, message: message.into() }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::Parse(_) => EXIT_USAGE,
            Error::ResourceLimit(_) => EXIT_RESOURCE,
            Error::Internal(_) => EXIT_FAILURE,
        };
        Fail { code, message: e.to_string() }
    }
}

impl fmt::Display for Fail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CmdResult = Result<u8, Fail>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Text,
    Tsv,
}

pub struct Context {
    pub jobs: usize,
    pub max_vertices: Option<usize>,
    pub time_limit: Option<Duration>,
    pub format: Format,
    pub cache: Option<Cache>,
}

impl Context {
    fn options(&self) -> DecideOptions {
        let mut limits = EnumLimits::default();
        if let Some(n) = self.max_vertices {
            limits.max_vertices = n;
        }
        DecideOptions { jobs: self.jobs, limits, time_limit: self.time_limit, resume: None }
    }

    fn record(&mut self, v: &Verdict) -> Result<(), Fail> {
        match &mut self.cache {
            Some(cache) => cache.record(CacheRecord::from_verdict(v)).map_err(Fail::failure),
            None => Ok(()),
        }
    }
}

/// `K<parts>` or the path of an edge-list file.
pub fn load_graph(spec: &str) -> Result<Graph, Fail> {
    if spec.starts_with(['K', 'k']) {
        return Ok(Graph::parse_spec(spec)?);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Fail::usage(format!("cannot read graph file {spec}: {e}")))?;
    Ok(Graph::parse_edge_list(&text)?)
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn verdict_line(v: &Verdict) -> String {
    let mut line = format!("{} k={}: {} ({} classes, {})", v.graph, v.k, v.outcome, v.classes_checked, secs(v.elapsed));
    if let Some(h) = v.witness_hash() {
        line.push_str(&format!(", witness {h:016x}"));
    }
    if let Some(r) = &v.reason {
        line.push_str(&format!(": {r}"));
    }
    line
}

pub fn chi_pc_cmd(ctx: &mut Context, spec: &str, kmax: usize) -> CmdResult {
    let g = load_graph(spec)?;
    let opts = ctx.options();
    let r = chi_pc(&g, kmax, &opts)?;
    println!("graph {}", g.describe());
    if let Some(b) = &r.bounds {
        let upper = b.upper.map_or("-".to_string(), |u| u.to_string());
        println!("bounds: lower {} ({}), upper {upper}", b.lower, b.lower_source);
    }
    for v in &r.verdicts {
        println!("  {}", verdict_line(v));
        ctx.record(v)?;
    }
    let total: Duration = r.verdicts.iter().map(|v| v.elapsed).sum();
    match r.value {
        ChiValue::Exact(k) => {
            let forced = r.bounds.as_ref().is_some_and(|b| b.forced && b.lower == k);
            println!("chi_pc = {k}{}", if forced { " (forced: lower=upper)" } else { "" });
            println!("time {}", secs(total));
            Ok(EXIT_OK)
        }
        value => {
            let reason = r
                .verdicts
                .last()
                .and_then(|v| v.reason.clone())
                .or_else(|| opts.limits.check(g.vertex_count(), r.start).err().map(|e| e.to_string()))
                .unwrap_or_else(|| format!("no decision up to k_max = {kmax}"));
            println!("chi_pc in {value}");
            println!("undecided: {reason}");
            Ok(EXIT_RESOURCE)
        }
    }
}

pub fn decide_cmd(ctx: &mut Context, spec: &str, k: usize, resume: bool, witness_out: Option<&Path>) -> CmdResult {
    let g = load_graph(spec)?;
    let mut opts = ctx.options();
    if resume {
        opts.resume = ctx.cache.as_ref().and_then(|c| c.checkpoint(&g.describe(), k));
        if let Some(p) = opts.resume {
            println!("resuming at task {}/{} ({} classes)", p.tasks_done, p.tasks_total, p.classes_checked);
        }
    }
    let v = decide_choosable(&g, k, &opts)?;
    println!("{}", verdict_line(&v));
    ctx.record(&v)?;
    if let Some(w) = &v.witness {
        print!("{}", w.to_file_string());
        if let Some(path) = witness_out {
            write_file(path, &w.to_file_string())?;
        }
    }
    match v.outcome {
        Outcome::Undecided => {
            if let Some(p) = v.progress {
                println!("checkpoint: {}/{} tasks, {} classes", p.tasks_done, p.tasks_total, p.classes_checked);
            }
            Ok(EXIT_RESOURCE)
        }
        _ => Ok(EXIT_OK),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Fail> {
    std::fs::write(path, text).map_err(|e| Fail::failure(format!("cannot write {}: {e}", path.display())))
}

/// `a..b`, `a-b` or a single number.
pub fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad range {text:?}"));
    let (a, b) = match text.split_once("..").or_else(|| text.split_once('-')) {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(text)?, num(text)?),
    };
    if a == 0 || a > b {
        return Err(format!("bad range {text:?}"));
    }
    Ok((a, b))
}

pub struct TableRow {
    pub n: usize,
    pub m: usize,
    pub lower: usize,
    pub upper: Option<usize>,
    pub value: Option<usize>,
    pub route: &'static str,
}

impl TableRow {
    pub fn status(&self) -> &'static str {
        match self.value {
            None => "open",
            Some(v) if v == self.lower => "conjecture holds",
            Some(_) => "conjecture fails",
        }
    }

    fn cells(&self) -> Vec<String> {
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |x| x.to_string());
        vec![
            self.n.to_string(),
            self.m.to_string(),
            self.lower.to_string(),
            opt(self.upper),
            self.value.map_or("open".to_string(), |v| v.to_string()),
            self.status().to_string(),
            self.value.map_or("-".to_string(), |v| format!("{:.3}", v as f64 / self.m as f64)),
            self.route.to_string(),
        ]
    }
}

pub fn table_rows(cache: Option<&Cache>, n_range: (usize, usize), m_range: (usize, usize)) -> Result<Vec<TableRow>, Fail> {
    let mut rows = Vec::new();
    for n in n_range.0..=n_range.1 {
        for m in m_range.0.max(n)..=m_range.1 {
            let row = if n == 1 {
                let v = star_chi_pc(m);
                TableRow { n, m, lower: v, upper: Some(v), value: Some(v), route: "star" }
            } else {
                let b = bound_report(&[n, m])?;
                let graph = Graph::complete_multipartite(&[n, m])?.describe();
                let (value, route) = if b.forced {
                    (Some(b.lower), "forced")
                } else {
                    match cache.and_then(|c| c.value(&graph, b.lower)) {
                        Some(v) => (Some(v), "cache"),
                        None => (None, "-"),
                    }
                };
                TableRow { n, m, lower: b.lower, upper: b.upper, value, route }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn table_cmd(ctx: &Context, n_range: (usize, usize), m_range: (usize, usize)) -> CmdResult {
    let rows = table_rows(ctx.cache.as_ref(), n_range, m_range)?;
    let header: Vec<String> =
        ["n", "m", "lower", "upper", "value", "status", "chi/m", "route"].iter().map(|s| s.to_string()).collect();
    let body: Vec<Vec<String>> = rows.iter().map(TableRow::cells).collect();
    match ctx.format {
        Format::Tsv => {
            println!("{}", header.join("\t"));
            for r in &body {
                println!("{}", r.join("\t"));
            }
        }
        Format::Text => {
            let widths: Vec<usize> = (0..header.len())
                .map(|i| body.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap())
                .collect();
            for r in std::iter::once(&header).chain(&body) {
                let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                println!("{}", cells.join("  ").trim_end());
            }
        }
    }
    Ok(EXIT_OK)
}

pub fn cross_check_cmd(max_p: usize) -> CmdResult {
    if max_p > 10 {
        return Err(Fail { code: EXIT_RESOURCE, message: format!("max-p {max_p} exceeds the brute-force limit of 10") });
    }
    let r = cross_check_wu(max_p)?;
    for (parts, s, formula, brute) in &r.disagreements {
        println!("disagreement: parts {parts:?} s={s}: formula {formula}, brute force {brute}");
    }
    println!("{} disagreements / {} instances", r.disagreements.len(), r.instances);
    Ok(if r.disagreements.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}

/// Seed of sample `i`, spread so neighbouring samples are unrelated.
pub fn sample_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub struct ConstructArgs<'a> {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub samples: u64,
    pub seed: u64,
    pub dump: Option<&'a Path>,
    pub colorings: Option<&'a Path>,
}

pub fn construct_cmd(a: &ConstructArgs) -> CmdResult {
    let (n, m, d) = (a.n, a.m, a.d);
    if n < 2 || d == 0 || m < 3 * d {
        return Err(Fail::usage(format!("construct needs n >= 2, d >= 1 and m >= 3d, got n={n}, m={m}, d={d}")));
    }
    let g = Graph::complete_multipartite(&[n, m])?;
    let b_part = if n <= m { 1 } else { 0 };
    let k = n + m - d - 1;
    let started = Instant::now();
    let mut histogram: BTreeMap<String, u64> = BTreeMap::new();
    let mut fallbacks = 0;
    let mut passed = 0;
    let mut first_failure = None;
    let mut emitted = String::new();
    for i in 0..a.samples {
        let s = sample_seed(a.seed, i);
        let palette = k + (s % (k as u64 + 1)) as usize;
        let l = sample_assignment(&g, k, palette, s)?;
        match color_knm_sides(&g, &l, d, b_part) {
            Ok((f, trace)) if is_proportional(&g, &l, &f) => {
                passed += 1;
                for step in &trace.steps {
                    *histogram.entry(step.to_string()).or_default() += 1;
                }
                fallbacks += trace.repair.fallback as u64;
                if a.colorings.is_some() {
                    emitted.push_str(&format!("# sample {i} seed {s}\n{}", f.to_file_string()));
                }
            }
            outcome => {
                let reason = match outcome {
                    Err(e) => e.to_string(),
                    Ok(_) => "output fails verification".to_string(),
                };
                println!("sample {i} (seed {s}) failed: {reason}");
                first_failure.get_or_insert((i, l, reason));
            }
        }
    }
    println!("K{n},{m} d={d} k={k}: {passed}/{} verified ({})", a.samples, secs(started.elapsed()));
    for (step, count) in &histogram {
        println!("  {step}: {count}");
    }
    println!("  exact repair fallback: {fallbacks}");
    if let Some(path) = a.colorings {
        write_file(path, &emitted)?;
    }
    match first_failure {
        None => Ok(EXIT_OK),
        Some((i, l, reason)) => {
            let path = a
                .dump
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from(format!("construct-failure-{n}-{m}-{d}-{}.txt", a.seed)));
            write_file(&path, &format!("# sample {i}: {reason}\n{}", l.to_file_string()))?;
            println!("failing assignment written to {}", path.display());
            Ok(EXIT_FAILURE)
        }
    }
}

pub fn witness_cmd(ctx: &Context, parts: &str, out: Option<&Path>) -> CmdResult {
    let parts = parse_part_list(parts)?;
    let check = verify_lower_bound(&parts, Some(&ctx.options()))?;
    for step in &check.steps {
        let status = match step.held {
            Some(true) => "ok",
            Some(false) => "FAILED",
            None => "skipped",
        };
        println!("  [{status}] {}: {}", step.name, step.detail);
    }
    if let Some(w) = &check.witness {
        let joined: Vec<String> = check.parts.iter().map(|p| p.to_string()).collect();
        let path = out
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from(format!("witness-K{}.txt", joined.join("_"))));
        write_file(&path, &w.to_file_string())?;
        println!("witness written to {}", path.display());
    }
    if check.certified() {
        println!("lower bound {} certified ({})", check.bound, check.source);
        Ok(EXIT_OK)
    } else if check.holds() {
        println!("lower bound {} not certified: a step did not finish", check.bound);
        Ok(EXIT_RESOURCE)
    } else {
        println!("lower bound {} FAILED", check.bound);
        Ok(EXIT_FAILURE)
    }
}

pub fn verify_bounds_cmd(ctx: &Context, only: &[u8]) -> CmdResult {
    if let Some(bad) = only.iter().find(|id| !CRITERIA.iter().any(|c| c.0 == **id)) {
        return Err(Fail::usage(format!("no criterion {bad}")));
    }
    let mut suite = Suite::new(ctx.jobs);
    let mut failed = 0;
    for &(id, _) in CRITERIA.iter().filter(|c| only.is_empty() || only.contains(&c.0)) {
        let r = suite.run(id);
        println!("{r}");
        failed += !r.passed as usize;
    }
    println!("{failed} criteria failed");
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..3").unwrap(), (2, 3));
        assert_eq!(parse_range("2..=4").unwrap(), (2, 4));
        assert_eq!(parse_range("1-5").unwrap(), (1, 5));
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        assert!(parse_range("3..2").is_err());
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn rows_without_cache() {
        let rows = table_rows(None, (1, 3), (2, 5)).unwrap();
        let find = |n, m| rows.iter().find(|r| r.n == n && r.m == m).unwrap();
        assert_eq!(find(2, 2).value, Some(3));
        assert_eq!(find(3, 3).value, Some(4));
        assert_eq!(find(2, 3).status(), "conjecture holds");
        let r = find(2, 4);
        assert_eq!((r.lower, r.upper, r.value, r.status()), (3, Some(4), None, "open"));
        assert_eq!(find(1, 5).value, Some(4));
        assert!(rows.iter().all(|r| r.n <= r.m));
    }

    #[test]
    fn seeds_differ() {
        let seeds: std::collections::BTreeSet<u64> = (0..100).map(|i| sample_seed(7, i)).collect();
        assert_eq!(seeds.len(), 100);
        assert_eq!(sample_seed(7, 3), sample_seed(7, 3));
    }
}
