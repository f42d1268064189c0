//! Recovering the parameters consistent with a sequence prefix.
//!
//! A prefix `s_1, ..., s_N` with ranks `a_1, ..., a_N` is the start of `S_theta`
//! exactly when
//!
//! * consecutive elements are ordered: `s_h + a_h*theta <= s_{h+1} + a_{h+1}*theta`;
//! * nothing left out comes earlier: for every value `v` in `1..=max+1` seen
//!   `r_v` times so far, `s_N + a_N*theta <= v + (r_v + 1)*theta`.
//!
//! The second family rules out gaps such as `(1, 3)`, where `2 + theta` would
//! have to appear before `3 + theta`. Each constraint is linear in `theta`
//! with integer coefficients, so the solution set is an interval with rational
//! endpoints. Bounds are closed; at a rational endpoint ties may reorder terms,
//! so regeneration is the final word on membership there.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::ExactNumber;
use crate::seqcore::{annotate_ranks, Sequence};
use crate::signature::SignatureGenerator;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InverseError {
    #[error("the two parameters are equal ({0}); their signatures never diverge")]
    EqualParameters(String),
    #[error("need at least 2 main terms, got {0}")]
    TooFewMainTerms(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endpoint {
    pub value: BigRational,
    pub closed: bool,
}

impl Endpoint {
    pub fn closed(value: BigRational) -> Self {
        Endpoint {
            value,
            closed: true,
        }
    }

    pub fn open(value: BigRational) -> Self {
        Endpoint {
            value,
            closed: false,
        }
    }
}

/// A set of real parameters. `None` bounds are unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaInterval {
    Empty,
    Range {
        lo: Option<Endpoint>,
        hi: Option<Endpoint>,
    },
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

impl ThetaInterval {
    /// `(0, inf)`.
    pub fn positive() -> Self {
        ThetaInterval::Range {
            lo: Some(Endpoint::open(BigRational::zero())),
            hi: None,
        }
    }

    pub fn closed(lo: BigRational, hi: BigRational) -> Self {
        ThetaInterval::Range {
            lo: Some(Endpoint::closed(lo)),
            hi: Some(Endpoint::closed(hi)),
        }
        .normalized()
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ThetaInterval::Empty)
    }

    pub fn lower(&self) -> Option<&Endpoint> {
        match self {
            ThetaInterval::Range { lo, .. } => lo.as_ref(),
            ThetaInterval::Empty => None,
        }
    }

    pub fn upper(&self) -> Option<&Endpoint> {
        match self {
            ThetaInterval::Range { hi, .. } => hi.as_ref(),
            ThetaInterval::Empty => None,
        }
    }

    fn normalized(self) -> Self {
        if let ThetaInterval::Range {
            lo: Some(l),
            hi: Some(h),
        } = &self
        {
            match l.value.cmp(&h.value) {
                Ordering::Greater => return ThetaInterval::Empty,
                Ordering::Equal if !(l.closed && h.closed) => return ThetaInterval::Empty,
                _ => {}
            }
        }
        self
    }

    /// Intersects with `theta >= bound` (or `>` when `closed` is false).
    pub fn restrict_below(self, bound: BigRational, closed: bool) -> Self {
        match self {
            ThetaInterval::Empty => ThetaInterval::Empty,
            ThetaInterval::Range { lo, hi } => {
                let tighter = match &lo {
                    None => true,
                    Some(l) => match bound.cmp(&l.value) {
                        Ordering::Greater => true,
                        Ordering::Equal => l.closed && !closed,
                        Ordering::Less => false,
                    },
                };
                let lo = if tighter {
                    Some(Endpoint {
                        value: bound,
                        closed,
                    })
                } else {
                    lo
                };
                ThetaInterval::Range { lo, hi }.normalized()
            }
        }
    }

    /// Intersects with `theta <= bound` (or `<` when `closed` is false).
    pub fn restrict_above(self, bound: BigRational, closed: bool) -> Self {
        match self {
            ThetaInterval::Empty => ThetaInterval::Empty,
            ThetaInterval::Range { lo, hi } => {
                let tighter = match &hi {
                    None => true,
                    Some(h) => match bound.cmp(&h.value) {
                        Ordering::Less => true,
                        Ordering::Equal => h.closed && !closed,
                        Ordering::Greater => false,
                    },
                };
                let hi = if tighter {
                    Some(Endpoint {
                        value: bound,
                        closed,
                    })
                } else {
                    hi
                };
                ThetaInterval::Range { lo, hi }.normalized()
            }
        }
    }

    pub fn intersect(self, other: &ThetaInterval) -> Self {
        match other {
            ThetaInterval::Empty => ThetaInterval::Empty,
            ThetaInterval::Range { lo, hi } => {
                let mut out = self;
                if let Some(l) = lo {
                    out = out.restrict_below(l.value.clone(), l.closed);
                }
                if let Some(h) = hi {
                    out = out.restrict_above(h.value.clone(), h.closed);
                }
                out
            }
        }
    }

    /// Imposes `e1 + f1*theta <= e2 + f2*theta`.
    fn require_le(self, e1: i64, f1: i64, e2: i64, f2: i64) -> Self {
        // (e1 - e2) <= (f2 - f1) theta
        let (c0, c1) = (e1 - e2, f2 - f1);
        match c1.cmp(&0) {
            Ordering::Greater => self.restrict_below(rat(c0, c1), true),
            Ordering::Less => self.restrict_above(rat(c0, c1), true),
            Ordering::Equal if c0 <= 0 => self,
            Ordering::Equal => ThetaInterval::Empty,
        }
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        self.contains_by(|r| x.cmp(r))
    }

    pub fn contains(&self, theta: &ExactNumber) -> bool {
        self.contains_by(|r| theta.cmp_rational(r))
    }

    fn contains_by(&self, cmp: impl Fn(&BigRational) -> Ordering) -> bool {
        match self {
            ThetaInterval::Empty => false,
            ThetaInterval::Range { lo, hi } => {
                let above_lo = lo.as_ref().is_none_or(|l| match cmp(&l.value) {
                    Ordering::Greater => true,
                    Ordering::Equal => l.closed,
                    Ordering::Less => false,
                });
                let below_hi = hi.as_ref().is_none_or(|h| match cmp(&h.value) {
                    Ordering::Less => true,
                    Ordering::Equal => h.closed,
                    Ordering::Greater => false,
                });
                above_lo && below_hi
            }
        }
    }

    pub fn is_subset_of(&self, other: &ThetaInterval) -> bool {
        self.clone().intersect(other) == *self
    }

    /// A rational member: the midpoint when bounded, otherwise a point past
    /// the finite end.
    pub fn witness(&self) -> Option<BigRational> {
        let two = BigRational::from_integer(BigInt::from(2));
        match self {
            ThetaInterval::Empty => None,
            ThetaInterval::Range { lo, hi } => Some(match (lo, hi) {
                (Some(l), Some(h)) => (&l.value + &h.value) / two,
                (Some(l), None) => l.value.clone() + BigRational::one(),
                (None, Some(h)) => h.value.clone() - BigRational::one(),
                (None, None) => BigRational::one(),
            }),
        }
    }
}

impl fmt::Display for ThetaInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaInterval::Empty => f.write_str("EMPTY"),
            ThetaInterval::Range { lo, hi } => {
                match lo {
                    Some(l) => write!(f, "{}{}", if l.closed { "[" } else { "(" }, l.value)?,
                    None => f.write_str("(-inf")?,
                }
                f.write_str(", ")?;
                match hi {
                    Some(h) => write!(f, "{}{}", h.value, if h.closed { "]" } else { ")" }),
                    None => f.write_str("inf)"),
                }
            }
        }
    }
}

/// Every `theta > 0` whose signature begins with `s` (up to ties at the
/// endpoints). `Empty` certifies that `s` starts no signature.
pub fn theta_interval_from_prefix(s: &Sequence) -> ThetaInterval {
    let annotated = annotate_ranks(s);
    let mut iv = ThetaInterval::positive();
    for pair in annotated.windows(2) {
        let (x, y) = (pair[0], pair[1]);
        iv = iv.require_le(x.value as i64, x.rank as i64, y.value as i64, y.rank as i64);
        if iv.is_empty() {
            return iv;
        }
    }
    let Some(last) = annotated.last() else {
        return iv;
    };
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for t in &annotated {
        *counts.entry(t.value).or_insert(0) += 1;
    }
    let max = s.max_term().unwrap_or(0);
    for v in 1..=max + 1 {
        let next_rank = counts.get(&v).copied().unwrap_or(0) + 1;
        iv = iv.require_le(
            last.value as i64,
            last.rank as i64,
            v as i64,
            next_rank as i64,
        );
        if iv.is_empty() {
            break;
        }
    }
    iv
}

/// Smallest 1-based index at which the two signatures differ, searching at
/// most `max_terms` terms.
pub fn first_divergence(
    theta1: &ExactNumber,
    theta2: &ExactNumber,
    max_terms: usize,
) -> Result<Option<usize>, InverseError> {
    if theta1 == theta2 {
        return Err(InverseError::EqualParameters(theta1.to_string()));
    }
    let g1 = SignatureGenerator::new(theta1);
    let g2 = SignatureGenerator::new(theta2);
    Ok(g1
        .zip(g2)
        .take(max_terms)
        .position(|(a, b)| a.value != b.value)
        .map(|i| i + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentType {
    /// `(1, 2, ..., n, 1, n + 1)`
    Type1,
    /// `n` ones, then `(2, 1)`
    Type2,
}

/// Parameters whose signature opens with the given segment shape.
///
/// Type 1 gives `[n - 1, n]`. Type 2 with `n` leading ones gives
/// `[1/n, 1/(n - 1)]`: the chain `1 + n*theta <= 2 + theta <= 1 + (n+1)*theta`
/// solves to exactly that range.
pub fn lemma8_interval(n: u64, segment: SegmentType) -> Result<ThetaInterval, InverseError> {
    if n < 2 {
        return Err(InverseError::TooFewMainTerms(n));
    }
    let n = n as i64;
    Ok(match segment {
        SegmentType::Type1 => ThetaInterval::closed(rat(n - 1, 1), rat(n, 1)),
        SegmentType::Type2 => ThetaInterval::closed(rat(1, n), rat(1, n - 1)),
    })
}

/// The leading segment [`lemma8_interval`] describes, `n + 2` terms long.
pub fn leading_segment(n: u64, segment: SegmentType) -> Sequence {
    let terms = match segment {
        SegmentType::Type1 => (1..=n).chain([1, n + 1]).collect(),
        SegmentType::Type2 => std::iter::repeat_n(1, n as usize).chain([2, 1]).collect(),
    };
    Sequence::from_positive(terms)
}

/// `hi - lo` of a bounded interval.
pub fn width(iv: &ThetaInterval) -> Option<BigRational> {
    match (iv.lower(), iv.upper()) {
        (Some(l), Some(h)) => Some(&h.value - &l.value),
        _ => None,
    }
}
