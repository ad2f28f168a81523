//! Append-only result log: one `key=value ...` record per line.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use propchoose::solver::{Outcome, Progress, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheRecord {
    pub graph: String,
    pub k: usize,
    pub outcome: Outcome,
    pub witness_hash: Option<u64>,
    pub classes: u64,
    pub elapsed_ms: u128,
    pub version: String,
    pub timestamp: u64,
    pub progress: Option<Progress>,
}

impl CacheRecord {
    pub fn from_verdict(v: &Verdict) -> Self {
        CacheRecord {
            graph: v.graph.clone(),
            k: v.k,
            outcome: v.outcome,
            witness_hash: v.witness_hash(),
            classes: v.classes_checked,
            elapsed_ms: v.elapsed.as_millis(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            progress: v.progress,
        }
    }

    pub fn is_decided(&self) -> bool {
        self.outcome != Outcome::Undecided
    }

    pub fn to_line(&self) -> String {
        let hash = self.witness_hash.map_or("-".to_string(), |h| format!("{h:016x}"));
        let progress = self
            .progress
            .map_or("-".to_string(), |p| format!("{}/{}/{}", p.tasks_done, p.tasks_total, p.classes_checked));
        format!(
            "graph={} k={} outcome={} witness_hash={hash} classes={} elapsed_ms={} version={} timestamp={} progress={progress}",
            self.graph, self.k, self.outcome, self.classes, self.elapsed_ms, self.version, self.timestamp
        )
    }

    pub fn parse(line: &str) -> Result<Self, String> {
        let mut rec = CacheRecord {
            graph: String::new(),
            k: 0,
            outcome: Outcome::Undecided,
            witness_hash: None,
            classes: 0,
            elapsed_ms: 0,
            version: String::new(),
            timestamp: 0,
            progress: None,
        };
        let mut seen = 0;
        for field in line.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(|| format!("field {field:?} is not key=value"))?;
            let bad = || format!("bad value for {key}: {value:?}");
            match key {
                "graph" => rec.graph = value.to_string(),
                "k" => rec.k = value.parse().map_err(|_| bad())?,
                "outcome" => rec.outcome = value.parse().map_err(|_| bad())?,
                "witness_hash" => {
                    rec.witness_hash = match value {
                        "-" => None,
                        h => Some(u64::from_str_radix(h, 16).map_err(|_| bad())?),
                    }
                }
                "classes" => rec.classes = value.parse().map_err(|_| bad())?,
                "elapsed_ms" => rec.elapsed_ms = value.parse().map_err(|_| bad())?,
                "version" => rec.version = value.to_string(),
                "timestamp" => rec.timestamp = value.parse().map_err(|_| bad())?,
                "progress" => {
                    rec.progress = match value {
                        "-" => None,
                        p => {
                            let nums: Vec<u64> =
                                p.split('/').map(|x| x.parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
                            match nums[..] {
                                [done, total, classes] => Some(Progress {
                                    tasks_done: done as usize,
                                    tasks_total: total as usize,
                                    classes_checked: classes,
                                }),
                                _ => return Err(bad()),
                            }
                        }
                    }
                }
                _ => continue,
            }
            seen += 1;
        }
        if rec.graph.is_empty() || rec.k == 0 || seen < 3 {
            return Err(format!("incomplete record {line:?}"));
        }
        Ok(rec)
    }
}

pub struct Cache {
    path: PathBuf,
    records: Vec<CacheRecord>,
}

impl Cache {
    pub fn open(path: &Path) -> Result<Self, String> {
        let records = match std::fs::read_to_string(path) {
            Ok(text) => text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
                .map(|(i, l)| CacheRecord::parse(l).map_err(|e| format!("{}:{}: {e}", path.display(), i + 1)))
                .collect::<Result<_, _>>()?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(format!("cannot read {}: {e}", path.display())),
        };
        Ok(Cache { path: path.to_path_buf(), records })
    }

    /// The first decided record for `(graph, k)`.
    pub fn decided(&self, graph: &str, k: usize) -> Option<&CacheRecord> {
        self.records.iter().find(|r| r.graph == graph && r.k == k && r.is_decided())
    }

    /// The most advanced checkpoint for an undecided `(graph, k)`.
    pub fn checkpoint(&self, graph: &str, k: usize) -> Option<Progress> {
        self.records
            .iter()
            .filter(|r| r.graph == graph && r.k == k)
            .filter_map(|r| r.progress)
            .max_by_key(|p| p.tasks_done)
    }

    /// Appends a record unless it contradicts an earlier decided one.
    pub fn record(&mut self, rec: CacheRecord) -> Result<(), String> {
        if rec.is_decided() {
            if let Some(old) = self.decided(&rec.graph, rec.k) {
                if old.outcome != rec.outcome || old.witness_hash != rec.witness_hash {
                    return Err(format!(
                        "cache contradiction for {} at k={}: cached {} (witness {:?}), now {} (witness {:?})",
                        rec.graph, rec.k, old.outcome, old.witness_hash, rec.outcome, rec.witness_hash
                    ));
                }
            }
        }
        let mut file: File = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| format!("cannot open {}: {e}", self.path.display()))?;
        writeln!(file, "{}", rec.to_line()).map_err(|e| format!("cannot write {}: {e}", self.path.display()))?;
        self.records.push(rec);
        Ok(())
    }

    /// Smallest `k` known to be the proportional choice number of `graph`:
    /// choosable at `k`, and either `k = lower` or not choosable at `k − 1`.
    pub fn value(&self, graph: &str, lower: usize) -> Option<usize> {
        let mut ks: Vec<usize> = self
            .records
            .iter()
            .filter(|r| r.graph == graph && r.outcome == Outcome::Choosable)
            .map(|r| r.k)
            .collect();
        ks.sort_unstable();
        ks.into_iter().find(|&k| {
            k == lower || self.decided(graph, k - 1).is_some_and(|r| r.outcome == Outcome::NotChoosable)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(graph: &str, k: usize, outcome: Outcome, hash: Option<u64>) -> CacheRecord {
        CacheRecord {
            graph: graph.into(),
            k,
            outcome,
            witness_hash: hash,
            classes: 10,
            elapsed_ms: 5,
            version: "0.1.0".into(),
            timestamp: 1,
            progress: None,
        }
    }

    #[test]
    fn line_round_trip() {
        let mut r = rec("K2,3", 3, Outcome::NotChoosable, Some(0xdead_beef));
        assert_eq!(CacheRecord::parse(&r.to_line()).unwrap(), r);
        r.outcome = Outcome::Undecided;
        r.witness_hash = None;
        r.progress = Some(Progress { tasks_done: 2, tasks_total: 9, classes_checked: 77 });
        assert_eq!(CacheRecord::parse(&r.to_line()).unwrap(), r);
        assert!(CacheRecord::parse("k=3").is_err());
        assert!(CacheRecord::parse("graph=K2 k=x outcome=choosable").is_err());
    }

    #[test]
    fn contradictions_abort() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.txt");
        let mut c = Cache::open(&path).unwrap();
        c.record(rec("K2,2", 2, Outcome::NotChoosable, Some(1))).unwrap();
        c.record(rec("K2,2", 2, Outcome::NotChoosable, Some(1))).unwrap();
        assert!(c.record(rec("K2,2", 2, Outcome::NotChoosable, Some(2))).is_err());
        assert!(c.record(rec("K2,2", 2, Outcome::Choosable, None)).is_err());
        c.record(rec("K2,2", 3, Outcome::Choosable, None)).unwrap();
        let reopened = Cache::open(&path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 3);
        assert_eq!(reopened.value("K2,2", 3), Some(3));
        assert_eq!(reopened.value("K2,4", 3), None);
    }

    #[test]
    fn value_needs_refutation_below() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = Cache::open(&dir.path().join("c")).unwrap();
        c.record(rec("K2,4", 4, Outcome::Choosable, None)).unwrap();
        assert_eq!(c.value("K2,4", 3), None);
        c.record(rec("K2,4", 3, Outcome::NotChoosable, Some(5))).unwrap();
        assert_eq!(c.value("K2,4", 3), Some(4));
    }
}
