//! Text formats for assignments and colorings.
//!
//! Assignment file:
//!
//! ```text
//! k 2
//! 0: 1 2
//! 1: 1 3
//! ```
//!
//! Every vertex `0..n` appears exactly once. Lines starting with `#` are
//! comments.

use std::fmt::Write;

use super::{Color, ListAssignment};
use crate::error::{Error, Result};

impl ListAssignment {
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let k = self.uniform_size().unwrap_or(0);
        writeln!(out, "k {k}").unwrap();
        for (v, list) in self.lists().iter().enumerate() {
            let colors: Vec<String> = list.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{v}: {}", colors.join(" ")).unwrap();
        }
        out
    }

    pub fn parse_file(text: &str) -> Result<ListAssignment> {
        let mut k: Option<usize> = None;
        let mut lists: Vec<Option<Vec<Color>>> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}: {line:?}", i + 1));
            if k.is_none() {
                let size = line
                    .strip_prefix('k')
                    .and_then(|r| r.trim().parse::<usize>().ok())
                    .ok_or_else(|| err("expected `k <k>` header"))?;
                k = Some(size);
                continue;
            }
            let (head, rest) = line.split_once(':').ok_or_else(|| err("expected `<vertex>: colors`"))?;
            let v: usize = head.trim().parse().map_err(|_| err("bad vertex index"))?;
            let colors = rest
                .split_whitespace()
                .map(|t| t.parse::<Color>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| err("bad color"))?;
            if v >= lists.len() {
                lists.resize(v + 1, None);
            }
            if lists[v].replace(colors).is_some() {
                return Err(err("vertex listed twice"));
            }
        }
        let k = k.ok_or_else(|| Error::Parse("missing `k <k>` header".into()))?;
        let lists = lists
            .into_iter()
            .enumerate()
            .map(|(v, l)| l.ok_or_else(|| Error::Parse(format!("vertex {v} has no list"))))
            .collect::<Result<Vec<_>>>()?;
        let l = ListAssignment::new(lists)?;
        if k != 0 && l.uniform_size() != Some(k) {
            return Err(Error::Parse(format!("lists are not all of size {k}")));
        }
        Ok(l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let l = ListAssignment::new(vec![vec![1, 2], vec![1, 3], vec![4, 2]]).unwrap();
        let text = l.to_file_string();
        assert!(text.starts_with("k 2\n0: 1 2\n"));
        assert_eq!(ListAssignment::parse_file(&text).unwrap(), l);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(ListAssignment::parse_file("0: 1 2\n").is_err());
        assert!(ListAssignment::parse_file("k 2\n0: 1 2\n0: 1 3\n").is_err());
        assert!(ListAssignment::parse_file("k 2\n1: 1 2\n").is_err());
        assert!(ListAssignment::parse_file("k 2\n0: 1 2 3\n").is_err());
        assert!(ListAssignment::parse_file("k 2\n0: 1 x\n").is_err());
    }
}
