//! Finite integer sequences, the upper and lower trimming operators, and the
//! prefix-level doubly fractal check.
//!
//! Every operator here works on a finite prefix of a (conceptually infinite)
//! sequence of positive integers. Both trims commute with taking prefixes: a
//! first occurrence inside a prefix stays a first occurrence in every
//! extension, and lower trimming is pointwise. So "trimmed prefix is a prefix
//! of the original" is the right finite form of `trim(S) = S`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A term of a sequence. Always `>= 1`.
pub type Term = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("term {index} is zero; sequences hold positive integers only")]
    ZeroTerm { index: usize },
    #[error("cannot parse {token:?} as a positive integer")]
    BadToken { token: String },
}

/// A finite prefix of positive integers.
///
/// Accessors taking an index are 1-based so that `get(k)` is the `k`th term.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sequence(Vec<Term>);

impl Sequence {
    pub fn new(terms: Vec<Term>) -> Result<Self, SequenceError> {
        if let Some(pos) = terms.iter().position(|&t| t == 0) {
            return Err(SequenceError::ZeroTerm { index: pos + 1 });
        }
        Ok(Sequence(terms))
    }

    /// Builds a sequence from terms already known to be positive.
    pub(crate) fn from_positive(terms: Vec<Term>) -> Self {
        debug_assert!(terms.iter().all(|&t| t >= 1));
        Sequence(terms)
    }

    pub fn empty() -> Self {
        Sequence(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `k`th term, 1-based.
    pub fn get(&self, k: usize) -> Option<Term> {
        k.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.0
    }

    pub fn max_term(&self) -> Option<Term> {
        self.0.iter().copied().max()
    }

    /// The first `len` terms (or all of them when shorter).
    pub fn prefix(&self, len: usize) -> Sequence {
        Sequence(self.0[..len.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Sequence) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Term> + '_ {
        self.0.iter().copied()
    }
}

impl From<Sequence> for Vec<Term> {
    fn from(s: Sequence) -> Self {
        s.0
    }
}

impl TryFrom<Vec<Term>> for Sequence {
    type Error = SequenceError;

    fn try_from(terms: Vec<Term>) -> Result<Self, Self::Error> {
        Sequence::new(terms)
    }
}

/// Whitespace separated decimal integers; position gives the index.
impl FromStr for Sequence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let terms = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Term>().map_err(|_| SequenceError::BadToken {
                    token: tok.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Sequence::new(terms)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A term paired with its occurrence rank: `value + rank * theta` is the
/// multiset element the term stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnotatedTerm {
    pub value: Term,
    pub rank: u64,
}

impl AnnotatedTerm {
    pub fn new(value: Term, rank: u64) -> Self {
        AnnotatedTerm { value, rank }
    }
}

/// Shape of the opening terms of a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialSegmentClass {
    /// Starts `(1, 2, ..., n, 1)`.
    Type1(u64),
    /// Starts with `n` ones followed by a 2.
    Type2(u64),
    /// Consistent so far but the deciding term has not arrived yet.
    Indeterminate,
    /// Cannot begin a doubly fractal sequence.
    Invalid,
}

/// Result of [`check_doubly_fractal_prefix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FractalReport {
    pub starts_with_one: bool,
    pub upper_ok: bool,
    pub lower_ok: bool,
    /// Earliest 1-based index at which either trimmed sequence departs from
    /// the input (index 1 when the first term is not 1).
    pub first_violation_index: Option<usize>,
}

impl FractalReport {
    pub fn is_ok(&self) -> bool {
        self.starts_with_one && self.upper_ok && self.lower_ok
    }
}

/// Removes the first occurrence of every value.
pub fn upper_trim(s: &Sequence) -> Sequence {
    let mut seen = std::collections::HashSet::new();
    Sequence(s.iter().filter(|&t| !seen.insert(t)).collect())
}

/// Subtracts one from every term and drops the zeros.
pub fn lower_trim(s: &Sequence) -> Sequence {
    Sequence(s.iter().filter(|&t| t > 1).map(|t| t - 1).collect())
}

/// 1-based index of the `k`th occurrence of `value`.
pub fn occurrence_index(s: &Sequence, value: Term, k: usize) -> Option<usize> {
    if k == 0 {
        return None;
    }
    s.iter()
        .enumerate()
        .filter(|&(_, t)| t == value)
        .nth(k - 1)
        .map(|(i, _)| i + 1)
}

pub fn annotate_ranks(s: &Sequence) -> Vec<AnnotatedTerm> {
    let mut counts: HashMap<Term, u64> = HashMap::new();
    s.iter()
        .map(|value| {
            let rank = counts.entry(value).or_insert(0);
            *rank += 1;
            AnnotatedTerm::new(value, *rank)
        })
        .collect()
}

/// The rank column of [`annotate_ranks`] as a sequence.
pub fn rank_stream(s: &Sequence) -> Sequence {
    Sequence(annotate_ranks(s).into_iter().map(|a| a.rank).collect())
}

pub fn classify_initial_segment(s: &Sequence) -> InitialSegmentClass {
    use InitialSegmentClass::*;
    let t = s.terms();
    match t {
        [] => Indeterminate,
        [first, ..] if *first != 1 => Invalid,
        [_] => Indeterminate,
        [_, second, ..] if *second > 2 => Invalid,
        [_, 2, ..] => {
            // run 1, 2, ..., n must end with a 1
            let mut n = 2u64;
            for &next in &t[2..] {
                if next == n + 1 {
                    n += 1;
                } else if next == 1 {
                    return Type1(n);
                } else {
                    return Invalid;
                }
            }
            Indeterminate
        }
        _ => {
            // a run of ones must end with a 2
            let ones = t.iter().take_while(|&&x| x == 1).count();
            match t.get(ones) {
                None => Indeterminate,
                Some(2) => Type2(ones as u64),
                Some(_) => Invalid,
            }
        }
    }
}

/// First 1-based index where `trimmed` is not a prefix of `s`.
fn prefix_mismatch(trimmed: &Sequence, s: &Sequence) -> Option<usize> {
    trimmed
        .iter()
        .zip(s.iter())
        .position(|(a, b)| a != b)
        .map(|i| i + 1)
        .or_else(|| (trimmed.len() > s.len()).then_some(s.len() + 1))
}

pub fn check_doubly_fractal_prefix(s: &Sequence) -> FractalReport {
    let starts_with_one = s.get(1).is_none_or(|t| t == 1);
    let upper = prefix_mismatch(&upper_trim(s), s);
    let lower = prefix_mismatch(&lower_trim(s), s);
    let first_violation_index = [(!starts_with_one).then_some(1), upper, lower]
        .into_iter()
        .flatten()
        .min();
    FractalReport {
        starts_with_one,
        upper_ok: upper.is_none(),
        lower_ok: lower.is_none(),
        first_violation_index,
    }
}
