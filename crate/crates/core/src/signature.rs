//! Signature sequences.
//!
//! The signature of `theta > 0` lists the `i` components of the multiset
//! `{ i + j*theta : i, j >= 1 }` sorted in nondecreasing order. When `theta` is
//! rational, equal values are emitted with the larger `i` first.
//!
//! [`SignatureGenerator`] walks the multiset lazily. The frontier holds one
//! element per opened row `j` plus the head of the next unopened row, so its
//! size stays near the number of distinct ranks emitted so far.

use std::cmp::Ordering;

use binary_heap_plus::BinaryHeap;
use compare::Compare;
use thiserror::Error;

use crate::exact::{AffineComparator, ExactNumber};
use crate::seqcore::{AnnotatedTerm, Sequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("term count must be at least 1")]
    ZeroTerms,
    #[error("index {0} does not fit a signed 64-bit affine coefficient")]
    Overflow(u64),
}

/// A multiset element `i + j*theta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultisetElement {
    pub i: u64,
    pub j: u64,
}

impl From<MultisetElement> for AnnotatedTerm {
    fn from(e: MultisetElement) -> Self {
        AnnotatedTerm::new(e.i, e.j)
    }
}

/// Emission order: by value, ties broken towards the larger `i`.
#[derive(Clone, Debug)]
pub struct EmissionOrder {
    cmp: AffineComparator,
}

impl EmissionOrder {
    pub fn new(theta: &ExactNumber) -> Self {
        EmissionOrder {
            cmp: AffineComparator::new(theta),
        }
    }

    pub fn order(&self, x: &MultisetElement, y: &MultisetElement) -> Ordering {
        self.cmp
            .compare(x.i as i64, x.j as i64, y.i as i64, y.j as i64)
            .then_with(|| y.i.cmp(&x.i))
    }
}

/// `binary_heap_plus` pops the greatest element, so the frontier uses the
/// reversed emission order.
#[derive(Clone, Debug)]
struct FrontierOrder(EmissionOrder);

impl Compare<MultisetElement> for FrontierOrder {
    fn compare(&self, l: &MultisetElement, r: &MultisetElement) -> Ordering {
        self.0.order(r, l)
    }
}

/// Lazy, unbounded enumeration of `S_theta` as `(value, rank)` pairs.
#[derive(Clone)]
pub struct SignatureGenerator {
    theta: ExactNumber,
    frontier: BinaryHeap<MultisetElement, FrontierOrder>,
    emitted: u64,
}

impl SignatureGenerator {
    pub fn new(theta: &ExactNumber) -> Self {
        let mut frontier =
            BinaryHeap::from_vec_cmp(Vec::new(), FrontierOrder(EmissionOrder::new(theta)));
        frontier.push(MultisetElement { i: 1, j: 1 });
        SignatureGenerator {
            theta: theta.clone(),
            frontier,
            emitted: 0,
        }
    }

    pub fn theta(&self) -> &ExactNumber {
        &self.theta
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    pub fn frontier_len(&self) -> usize {
        self.frontier.len()
    }

    pub fn next_element(&mut self) -> MultisetElement {
        let e = self.frontier.pop().expect("frontier is never empty");
        self.frontier.push(MultisetElement { i: e.i + 1, j: e.j });
        if e.i == 1 {
            self.frontier.push(MultisetElement { i: 1, j: e.j + 1 });
        }
        self.emitted += 1;
        e
    }
}

impl Iterator for SignatureGenerator {
    type Item = AnnotatedTerm;

    fn next(&mut self) -> Option<AnnotatedTerm> {
        Some(self.next_element().into())
    }
}

/// The first `n_terms` pairs `(s_h, a_h)` of the signature of `theta`.
pub fn generate_signature(
    theta: &ExactNumber,
    n_terms: usize,
) -> Result<Vec<AnnotatedTerm>, SignatureError> {
    if n_terms == 0 {
        return Err(SignatureError::ZeroTerms);
    }
    Ok(SignatureGenerator::new(theta).take(n_terms).collect())
}

/// Just the values of [`generate_signature`].
pub fn signature_values(theta: &ExactNumber, n_terms: usize) -> Result<Sequence, SignatureError> {
    let terms = generate_signature(theta, n_terms)?;
    Ok(Sequence::from_positive(
        terms.into_iter().map(|t| t.value).collect(),
    ))
}

/// Independent oracle: enumerate every element with value at most a cutoff
/// `V`, sort, and keep the first `n_terms`. Elements outside the enumeration
/// exceed `V`, so the kept prefix is complete once at least `n_terms`
/// elements were found. `V` starts at 2 and doubles.
pub fn brute_force_signature(
    theta: &ExactNumber,
    n_terms: usize,
) -> Result<Vec<AnnotatedTerm>, SignatureError> {
    if n_terms == 0 {
        return Err(SignatureError::ZeroTerms);
    }
    let order = EmissionOrder::new(theta);
    let mut cutoff: i64 = 2;
    loop {
        let mut box_elems = Vec::new();
        let mut j: i64 = 1;
        // rows j with 1 + j*theta <= V
        while super::exact::compare_affine(1, j, cutoff, 0, theta) != Ordering::Greater {
            let mut i: i64 = 1;
            while super::exact::compare_affine(i, j, cutoff, 0, theta) != Ordering::Greater {
                box_elems.push(MultisetElement {
                    i: i as u64,
                    j: j as u64,
                });
                i += 1;
            }
            j += 1;
        }
        if box_elems.len() >= n_terms {
            box_elems.sort_by(|x, y| order.order(x, y));
            return Ok(box_elems
                .into_iter()
                .take(n_terms)
                .map(Into::into)
                .collect());
        }
        cutoff = cutoff
            .checked_mul(2)
            .ok_or(SignatureError::Overflow(cutoff as u64))?;
    }
}
