//! Dimension of the table space over a one-dimensional module with
//! trivial slot derivative, and the bracket-word basis matching
//! connected lines.
//!
//! With a single degree-zero generator killed by the derivative, a
//! table entry at a forest with `p` lines is a polynomial in the line
//! variables modulo the ideal generated by their sum, and the shift
//! rule collapses to `L_l * y = 0` in that quotient for every line
//! `l`. [`classical_dimension`] sets this up as exact linear algebra
//! over the rationals, capped at polynomial degree two, and checks on
//! the way that only connected forests carry solutions and that every
//! solution is a constant. The total comes out to `(n-1)!`, matching
//! the count of right-nested bracket words with first letter `1`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{scalar, Monomial, MPoly, Scalar, VarId};
use crate::graphs::{enumerate_all_line_forests, LineForest};
use crate::linalg::RowSpace;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("forest `{0}` is not a single connected line")]
    Disconnected(String),
    #[error("word {0:?} is not a permutation of 1..=n with first letter 1")]
    InvalidWord(Vec<u32>),
}

/// A right-nested bracket word `[x_{w1}, [x_{w2}, [..., x_{wn}]...]]`,
/// stored as the sequence of subscripts. The first subscript is pinned
/// to 1, which makes the words a basis of the multilinear bracket span
/// in each arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BracketWord {
    word: Vec<u32>,
}

impl BracketWord {
    /// Validates that `word` is a permutation of `1..=n` starting at 1.
    pub fn new(word: Vec<u32>) -> Result<Self, LieError> {
        let n = word.len() as u32;
        if n == 0 || word[0] != 1 {
            return Err(LieError::InvalidWord(word));
        }
        let mut seen = vec![false; word.len()];
        for &v in &word {
            if v < 1 || v > n || seen[(v - 1) as usize] {
                return Err(LieError::InvalidWord(word));
            }
            seen[(v - 1) as usize] = true;
        }
        Ok(BracketWord { word })
    }

    pub fn n(&self) -> u32 {
        self.word.len() as u32
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    /// Renders the right-nested bracketing, e.g. `[x1,[x3,x2]]`.
    pub fn display_text(&self) -> String {
        let mut out = format!("x{}", self.word[self.word.len() - 1]);
        for &v in self.word.iter().rev().skip(1) {
            out = format!("[x{v},{out}]");
        }
        out
    }
}

/// All bracket words on `n` letters, in lexicographic order of the
/// subscript sequence. There are `(n-1)!` of them.
pub fn bracket_words(n: u32) -> Vec<BracketWord> {
    assert!(n >= 1, "arity must be at least 1");
    let mut rest: Vec<u32> = (2..=n).collect();
    let mut out = Vec::new();
    let mut cur = vec![1];
    extend_words(&mut rest, &mut cur, &mut out);
    out
}

fn extend_words(rest: &mut Vec<u32>, cur: &mut Vec<u32>, out: &mut Vec<BracketWord>) {
    if rest.is_empty() {
        out.push(BracketWord { word: cur.clone() });
        return;
    }
    for i in 0..rest.len() {
        let v = rest.remove(i);
        cur.push(v);
        extend_words(rest, cur, out);
        cur.pop();
        rest.insert(i, v);
    }
}

/// The bracket word read off a connected line. Rejects forests with
/// more than one line.
pub fn line_to_bracket(forest: &LineForest) -> Result<BracketWord, LieError> {
    if forest.num_lines() != 1 {
        return Err(LieError::Disconnected(forest.display_text()));
    }
    BracketWord::new(forest.lines()[0].clone())
}

/// The connected line visiting the word's subscripts in order.
pub fn bracket_to_line(word: &BracketWord) -> LineForest {
    LineForest::new(word.n(), vec![word.word.clone()]).expect("bracket words are valid lines")
}

/// What a table entry at line `l` of a `p`-line forest gets multiplied
/// by under the shift rule, expressed in the surviving variables after
/// the last line variable is eliminated against the sum relation.
fn shift_multiplier(p: u32, line: u32) -> MPoly {
    if line < p {
        MPoly::var(VarId::BigLambda(line))
    } else {
        let mut acc = MPoly::zero();
        for ell in 1..p {
            acc = acc.sub(&MPoly::var(VarId::BigLambda(ell)));
        }
        acc
    }
}

/// Dimension of the solution space at one forest: unknowns are the
/// monomials of degree at most `cap` in the surviving line variables,
/// and each line contributes the equation `multiplier * y = 0`.
fn block_dimension(forest: &LineForest, cap: u32) -> usize {
    let p = forest.num_lines() as u32;
    let unknowns = crate::modules::lambda_monomials(p.saturating_sub(1), cap);
    let mut space: RowSpace<(u32, Monomial)> = RowSpace::new();
    let mut rank = 0usize;
    for mono in &unknowns {
        let base = MPoly::from_mono(mono.clone(), scalar::one());
        let mut column: BTreeMap<(u32, Monomial), Scalar> = BTreeMap::new();
        for line in 1..=p {
            let image = base.mul(&shift_multiplier(p, line));
            for (m, c) in image.terms() {
                column.insert((line, m.clone()), c.clone());
            }
        }
        if space.insert(column) {
            rank += 1;
        }
    }
    unknowns.len() - rank
}

/// Whether the constant table entry solves every line equation; the
/// constants contribute this many dimensions (0 or 1) to the block.
fn constant_solutions(forest: &LineForest) -> usize {
    let p = forest.num_lines() as u32;
    let all_zero = (1..=p).all(|line| shift_multiplier(p, line).is_zero());
    usize::from(all_zero)
}

/// Total solution-space dimension over all canonical forests on `n`
/// vertices for the one-dimensional module with trivial derivative.
///
/// Every forest block is solved with unknowns up to polynomial degree
/// two; the result is checked to come entirely from constants on
/// connected forests (so raising the cap cannot add solutions), and
/// equals `(n-1)!`.
pub fn classical_dimension(n: u32) -> u64 {
    assert!(n >= 1, "arity must be at least 1");
    let mut total = 0u64;
    for forest in enumerate_all_line_forests(n) {
        let dim = block_dimension(&forest, 2);
        let constants = constant_solutions(&forest);
        assert_eq!(
            dim, constants,
            "non-constant solution at forest `{}`",
            forest.display_text()
        );
        assert!(
            forest.num_lines() == 1 || dim == 0,
            "disconnected forest `{}` carries solutions",
            forest.display_text()
        );
        total += dim as u64;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn falling_factorial(n: u32) -> u64 {
        (1..u64::from(n)).product::<u64>().max(1)
    }

    #[test]
    fn dimensions_match_the_word_count() {
        for n in 1..=5 {
            assert_eq!(classical_dimension(n), falling_factorial(n), "n = {n}");
        }
        assert_eq!(
            (1..=5).map(classical_dimension).collect::<Vec<_>>(),
            vec![1, 1, 2, 6, 24]
        );
    }

    #[test]
    fn words_are_distinct_lex_ordered_and_counted() {
        for n in 1..=6 {
            let words = bracket_words(n);
            assert_eq!(words.len() as u64, falling_factorial(n));
            for w in &words {
                assert_eq!(w.word()[0], 1);
            }
            let mut sorted = words.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted, words);
        }
    }

    #[test]
    fn line_correspondence_round_trips_both_ways() {
        for n in 1..=6 {
            let connected: Vec<LineForest> = enumerate_all_line_forests(n)
                .into_iter()
                .filter(|f| f.num_lines() == 1)
                .collect();
            assert_eq!(connected.len() as u64, falling_factorial(n));
            for forest in &connected {
                let word = line_to_bracket(forest).expect("connected");
                assert_eq!(&bracket_to_line(&word), forest);
            }
            for word in bracket_words(n) {
                let back = line_to_bracket(&bracket_to_line(&word)).expect("connected");
                assert_eq!(back, word);
            }
        }
    }

    #[test]
    fn display_nests_to_the_right() {
        let cases = [
            (vec![1], "x1"),
            (vec![1, 2], "[x1,x2]"),
            (vec![1, 3, 2], "[x1,[x3,x2]]"),
            (vec![1, 2, 3, 4], "[x1,[x2,[x3,x4]]]"),
        ];
        for (word, text) in cases {
            assert_eq!(BracketWord::new(word).expect("valid").display_text(), text);
        }
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(BracketWord::new(vec![]).is_err());
        assert!(BracketWord::new(vec![2, 1]).is_err());
        assert!(BracketWord::new(vec![1, 1]).is_err());
        assert!(BracketWord::new(vec![1, 3]).is_err());
        let split = LineForest::new(2, vec![vec![1], vec![2]]).expect("valid forest");
        assert_eq!(
            line_to_bracket(&split),
            Err(LieError::Disconnected(split.display_text()))
        );
    }

    #[test]
    fn only_connected_blocks_are_nonzero() {
        for n in 2..=4 {
            for forest in enumerate_all_line_forests(n) {
                let dim = block_dimension(&forest, 2);
                if forest.num_lines() == 1 {
                    assert_eq!(dim, 1, "forest `{}`", forest.display_text());
                } else {
                    assert_eq!(dim, 0, "forest `{}`", forest.display_text());
                }
            }
        }
    }
}
