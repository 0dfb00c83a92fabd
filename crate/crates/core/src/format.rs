//! Text formats for instances and allocations.
//!
//! Instance:
//! ```text
//! nsw2v 1
//! <n> <m> <p> <q>
//! <sorted goods of B_0>
//! ...
//! <sorted goods of B_{n-1}>
//! ```
//! Allocation: header `alloc 1`, then `<n> <m>`, then one bundle per line.
//! Indices are 0-based, separated by single spaces; an empty line is an
//! empty set. Lines end in LF.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::CoreError;
use crate::instance::{Allocation, Instance};

pub const INSTANCE_MAGIC: &str = "nsw2v 1";
pub const ALLOCATION_MAGIC: &str = "alloc 1";

pub(crate) struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Lines {
            lines: text.lines().collect(),
            pos: 0,
        }
    }

    /// 1-based number of the line most recently returned.
    pub(crate) fn line_no(&self) -> usize {
        self.pos
    }

    pub(crate) fn next(&mut self, what: &str) -> Result<&'a str, CoreError> {
        let line = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| CoreError::parse(self.pos + 1, format!("missing {what}")))?;
        self.pos += 1;
        Ok(line)
    }

    pub(crate) fn expect(&mut self, magic: &str) -> Result<(), CoreError> {
        let line = self.next("header")?;
        if line != magic {
            return Err(CoreError::parse(
                self.pos,
                format!("expected header {magic:?}, got {line:?}"),
            ));
        }
        Ok(())
    }

    /// Only blank lines may follow the last record.
    pub(crate) fn finish(&mut self) -> Result<(), CoreError> {
        while self.pos < self.lines.len() {
            self.pos += 1;
            if !self.lines[self.pos - 1].trim().is_empty() {
                return Err(CoreError::parse(self.pos, "unexpected trailing content"));
            }
        }
        Ok(())
    }
}

pub(crate) fn parse_fields<T: FromStr>(
    line: &str,
    line_no: usize,
    count: usize,
) -> Result<Vec<T>, CoreError> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != count {
        return Err(CoreError::parse(
            line_no,
            format!("expected {count} fields, got {:?}", line),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse()
                .map_err(|_| CoreError::parse(line_no, format!("bad number {f:?}")))
        })
        .collect()
}

/// Strictly increasing, single-space separated indices below `bound`.
pub(crate) fn parse_index_set(
    line: &str,
    line_no: usize,
    bound: usize,
) -> Result<Vec<usize>, CoreError> {
    if line.is_empty() {
        return Ok(Vec::new());
    }
    let mut out: Vec<usize> = Vec::new();
    for tok in line.split(' ') {
        let g: usize = tok
            .parse()
            .map_err(|_| CoreError::parse(line_no, format!("bad index {tok:?}")))?;
        if g >= bound {
            return Err(CoreError::parse(
                line_no,
                format!("index {g} out of range (m={bound})"),
            ));
        }
        if out.last().is_some_and(|&last| last >= g) {
            return Err(CoreError::parse(
                line_no,
                "indices must be strictly increasing",
            ));
        }
        out.push(g);
    }
    Ok(out)
}

fn write_index_set(out: &mut String, set: &[usize]) {
    for (k, g) in set.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        write!(out, "{g}").unwrap();
    }
    out.push('\n');
}

pub fn parse_instance(text: &str) -> Result<Instance, CoreError> {
    let mut lines = Lines::new(text);
    lines.expect(INSTANCE_MAGIC)?;
    let header = lines.next("size line")?;
    let line_no = lines.line_no();
    let f: Vec<u64> = parse_fields(header, line_no, 4)?;
    let (n, m) = (f[0] as usize, f[1] as usize);
    if n == 0 {
        return Err(CoreError::parse(line_no, "n must be positive"));
    }
    let mut sets = Vec::with_capacity(n);
    for agent in 0..n {
        let line = lines.next(&format!("big set of agent {agent}"))?;
        sets.push(parse_index_set(line, lines.line_no(), m)?);
    }
    lines.finish()?;
    Instance::new(n, m, f[2], f[3], sets).map_err(|e| match e {
        CoreError::InvalidValues { .. } => CoreError::parse(line_no, e.to_string()),
        other => other,
    })
}

pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "{INSTANCE_MAGIC}").unwrap();
    writeln!(out, "{} {} {} {}", inst.n(), inst.m(), inst.p(), inst.q()).unwrap();
    for set in inst.big_sets() {
        write_index_set(&mut out, set);
    }
    out
}

/// Parse an allocation file; returns the allocation and its good count `m`.
pub fn parse_allocation(text: &str) -> Result<(Allocation, usize), CoreError> {
    let mut lines = Lines::new(text);
    lines.expect(ALLOCATION_MAGIC)?;
    let header = lines.next("size line")?;
    let f: Vec<usize> = parse_fields(header, lines.line_no(), 2)?;
    let (n, m) = (f[0], f[1]);
    let mut bundles = Vec::with_capacity(n);
    for agent in 0..n {
        let line = lines.next(&format!("bundle of agent {agent}"))?;
        bundles.push(parse_index_set(line, lines.line_no(), m)?);
    }
    lines.finish()?;
    Ok((Allocation::from_bundles(bundles), m))
}

pub fn serialize_allocation(alloc: &Allocation, m: usize) -> String {
    let mut out = String::new();
    writeln!(out, "{ALLOCATION_MAGIC}").unwrap();
    writeln!(out, "{} {}", alloc.n(), m).unwrap();
    for bundle in alloc.bundles() {
        write_index_set(&mut out, bundle);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_example_one() {
        let inst = parse_instance("nsw2v 1\n2 5 2 3\n0 1\n0 1\n").unwrap();
        assert_eq!((inst.n(), inst.m(), inst.p(), inst.q()), (2, 5, 2, 3));
        assert_eq!(inst.big_set(0), &[0, 1]);
        assert_eq!(inst.big_set(1), &[0, 1]);
    }

    #[test]
    fn parses_empty_agent_line() {
        let inst = parse_instance("nsw2v 1\n1 0 1 2\n\n").unwrap();
        assert_eq!((inst.n(), inst.m()), (1, 0));
        assert!(inst.big_set(0).is_empty());
    }

    #[test]
    fn canonicalizes_on_parse() {
        let inst = parse_instance("nsw2v 1\n1 2 2 4\n1\n").unwrap();
        assert_eq!((inst.p(), inst.q()), (1, 2));
        assert_eq!(serialize_instance(&inst), "nsw2v 1\n1 2 1 2\n1\n");
    }

    #[test]
    fn rejects_malformed() {
        for text in [
            "nsw2v 2\n1 1 1 2\n0\n",
            "nsw2v 1\n1 1 1\n0\n",
            "nsw2v 1\n1 1 2 2\n0\n",
            "nsw2v 1\n1 1 1 2\n1\n",
            "nsw2v 1\n1 3 1 2\n2 1\n",
            "nsw2v 1\n1 3 1 2\n0  1\n",
            "nsw2v 1\n2 3 1 2\n0\n",
            "nsw2v 1\n1 3 1 2\n0\n1\n",
            "nsw2v 1\n0 3 1 2\n",
        ] {
            assert!(
                matches!(parse_instance(text), Err(CoreError::Parse { .. })),
                "accepted {text:?}"
            );
        }
    }

    #[test]
    fn allocation_round_trip() {
        let alloc = Allocation::from_bundles(vec![vec![0, 2, 4], vec![], vec![1]]);
        let text = serialize_allocation(&alloc, 6);
        assert_eq!(text, "alloc 1\n3 6\n0 2 4\n\n1\n");
        assert_eq!(parse_allocation(&text).unwrap(), (alloc, 6));
    }
}
