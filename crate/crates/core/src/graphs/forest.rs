//! Disjoint unions of directed lines: the canonical basis of the graph
//! quotient, and formal linear combinations of them.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use thiserror::Error;

use crate::algebra::{scalar, Scalar};

use super::digraph::DiGraph;

/// A disjoint union of directed lines covering `1..=n`, in canonical form:
/// every line starts at its smallest vertex, and the starting vertices
/// increase from line to line (so the first line starts at 1).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LineForest {
    n: u32,
    lines: Vec<Vec<u32>>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ForestError {
    #[error("lines must cover 1..={0} exactly once")]
    NotAPartition(u32),
    #[error("line {0} does not start at its smallest vertex")]
    LineNotAnchored(usize),
    #[error("line starting vertices must strictly increase")]
    LeadersNotIncreasing,
    #[error("forest text: {0}")]
    Syntax(String),
}

impl LineForest {
    pub fn new(n: u32, lines: Vec<Vec<u32>>) -> Result<Self, ForestError> {
        let mut seen = vec![false; n as usize + 1];
        let mut count = 0u32;
        for line in &lines {
            if line.is_empty() {
                return Err(ForestError::NotAPartition(n));
            }
            for &v in line {
                if v == 0 || v > n || seen[v as usize] {
                    return Err(ForestError::NotAPartition(n));
                }
                seen[v as usize] = true;
                count += 1;
            }
        }
        if count != n {
            return Err(ForestError::NotAPartition(n));
        }
        for (idx, line) in lines.iter().enumerate() {
            if line[0] != *line.iter().min().expect("non-empty") {
                return Err(ForestError::LineNotAnchored(idx));
            }
        }
        for pair in lines.windows(2) {
            if pair[0][0] >= pair[1][0] {
                return Err(ForestError::LeadersNotIncreasing);
            }
        }
        Ok(LineForest { n, lines })
    }

    /// The unique forest on zero vertices.
    pub fn empty() -> Self {
        LineForest {
            n: 0,
            lines: Vec::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn num_edges(&self) -> usize {
        self.n as usize - self.lines.len()
    }

    /// The 1-based index of the line containing vertex `v`.
    pub fn line_of(&self, v: u32) -> usize {
        self.lines
            .iter()
            .position(|l| l.contains(&v))
            .map(|i| i + 1)
            .expect("vertex in range")
    }

    /// Consecutive pairs of every line, in line order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for line in &self.lines {
            for w in line.windows(2) {
                out.push((w[0], w[1]));
            }
        }
        out
    }

    pub fn to_digraph(&self) -> DiGraph {
        DiGraph::new(self.n, self.edges()).expect("forest edges are valid")
    }

    /// Serializes as `1>2>3 | 4>5`.
    pub fn display_text(&self) -> String {
        self.lines
            .iter()
            .map(|l| {
                l.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(">")
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }

    /// Parses the `display_text` format; `n` is inferred from the content.
    pub fn parse(text: &str) -> Result<Self, ForestError> {
        let mut lines = Vec::new();
        let mut max_v = 0u32;
        for chunk in text.split('|') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                return Err(ForestError::Syntax("empty line".into()));
            }
            let mut line = Vec::new();
            for tok in chunk.split('>') {
                let v: u32 = tok
                    .trim()
                    .parse()
                    .map_err(|_| ForestError::Syntax(format!("bad vertex `{tok}`")))?;
                max_v = max_v.max(v);
                line.push(v);
            }
            lines.push(line);
        }
        LineForest::new(max_v, lines)
    }
}

impl fmt::Display for LineForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_text())
    }
}

/// Enumerates the canonical line forests on `1..=n` with exactly `p` lines.
///
/// Recursive order: the first line takes the smallest remaining vertex as
/// its head and then any arrangement of a subset of the rest as its tail,
/// longer tails first and lexicographic among tails of equal length.
pub fn enumerate_line_forests(n: u32, p: u32) -> Vec<LineForest> {
    if n == 0 {
        return if p == 0 {
            vec![LineForest::empty()]
        } else {
            Vec::new()
        };
    }
    if p == 0 || p > n {
        return Vec::new();
    }
    let verts: Vec<u32> = (1..=n).collect();
    let mut out = Vec::new();
    let mut acc: Vec<Vec<u32>> = Vec::new();
    fill(&verts, p, &mut acc, &mut out);
    out.into_iter()
        .map(|lines| LineForest::new(n, lines).expect("construction is canonical"))
        .collect()
}

fn fill(remaining: &[u32], p: u32, acc: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
    if remaining.is_empty() {
        if p == 0 {
            out.push(acc.clone());
        }
        return;
    }
    if p == 0 || (remaining.len() as u32) < p {
        return;
    }
    let head = remaining[0];
    let rest: Vec<u32> = remaining[1..].to_vec();
    // Tail size is bounded so the other p-1 lines stay non-empty; when this
    // is the last line it must absorb everything.
    let max_tail = rest.len() as u32 - (p - 1);
    let sizes: Vec<u32> = if p == 1 {
        vec![rest.len() as u32]
    } else {
        (0..=max_tail).rev().collect()
    };
    for size in sizes {
        for tail in arrangements(&rest, size as usize) {
            let mut line = vec![head];
            line.extend_from_slice(&tail);
            let leftover: Vec<u32> = rest.iter().copied().filter(|v| !tail.contains(v)).collect();
            acc.push(line);
            fill(&leftover, p - 1, acc, out);
            acc.pop();
        }
    }
}

/// All ordered arrangements of `k` elements drawn from the sorted slice,
/// in lexicographic order.
fn arrangements(items: &[u32], k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in arrangements(&rest, k - 1) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// All canonical line forests on `1..=n`, every line count, fewest lines
/// first. For `n == 0` this is the single empty forest.
pub fn enumerate_all_line_forests(n: u32) -> Vec<LineForest> {
    if n == 0 {
        return vec![LineForest::empty()];
    }
    (1..=n).flat_map(|p| enumerate_line_forests(n, p)).collect()
}

/// A finite formal linear combination of canonical line forests.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LineCombo {
    n: u32,
    terms: BTreeMap<LineForest, Scalar>,
}

impl LineCombo {
    pub fn zero(n: u32) -> Self {
        LineCombo {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn add_term(&mut self, forest: LineForest, c: Scalar) {
        assert_eq!(forest.n(), self.n, "forest arity mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(forest) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &LineCombo) -> LineCombo {
        assert_eq!(self.n, other.n, "arity mismatch");
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> LineCombo {
        if s.is_zero() {
            return LineCombo::zero(self.n);
        }
        LineCombo {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(f, c)| (f.clone(), c.clone() * s))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LineForest, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, f: &LineForest) -> Scalar {
        self.terms.get(f).cloned().unwrap_or_else(scalar::zero)
    }
}

impl fmt::Display for LineCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (forest, c) in &self.terms {
            if first {
                if scalar::is_negative(c) {
                    write!(f, "- ")?;
                }
                first = false;
            } else if scalar::is_negative(c) {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = if scalar::is_negative(c) {
                -c.clone()
            } else {
                c.clone()
            };
            write!(f, "{} [{}]", scalar::display(&abs), forest)?;
        }
        Ok(())
    }
}
