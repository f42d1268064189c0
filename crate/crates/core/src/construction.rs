//! Block-extension construction of doubly fractal sequences.
//!
//! A type-1 construction starts from the main terms `(1, 2, ..., n)`. The
//! second block interleaves a fresh value after every main term but `n`.
//! Every later block is derived from the previous one:
//!
//! 1. `t` is the run strictly between the last `n - 1` and the block-final
//!    `n`, each term plus one; `t'` is the run strictly between the previous
//!    block-final `n` and the last `n + 1`.
//! 2. Apart from one special element `L` in `t` and one `1` in `t'`, the two
//!    runs are identical. Merging them gives `P`, and
//!    `d = index_P(1) - index_P(L)`. If `L` and `1` compete for the same slot,
//!    either order is admissible and the caller picks a [`Branch`].
//! 3. The part of `P` before the `1` is appended, then the previous block is
//!    replayed with a fresh value placed `d` positions before each main term
//!    (after it when `d < 0`), skipping placements that would leave the
//!    block's span from its leading 1 to its final `n`.
//!
//! Every step is checked with [`check_doubly_fractal_prefix`] before it is
//! committed.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::seqcore::{check_doubly_fractal_prefix, rank_stream, Sequence, Term};

/// Order of `1` and the fresh-class element when they land on the same slot
/// of the merged run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `(1, L)`
    OneFirst,
    /// `(L, 1)`
    FreshFirst,
}

impl Branch {
    pub fn bit(self) -> u8 {
        match self {
            Branch::OneFirst => 0,
            Branch::FreshFirst => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Option<Branch> {
        match bit {
            0 => Some(Branch::OneFirst),
            1 => Some(Branch::FreshFirst),
            _ => None,
        }
    }
}

/// Comma separated bits, `-` when empty.
pub fn format_branches(branches: &[Branch]) -> String {
    if branches.is_empty() {
        return "-".to_string();
    }
    branches
        .iter()
        .map(|b| b.bit().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchPolicy {
    /// Same choice at every fork.
    Fixed(Branch),
    /// Consumed in fork order; falls back to `OneFirst` once exhausted.
    Explicit(Vec<Branch>),
    /// Explore both choices at every fork.
    All,
}

impl Default for BranchPolicy {
    fn default() -> Self {
        BranchPolicy::Fixed(Branch::OneFirst)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("need at least 2 main terms, got {0}")]
    TooFewMainTerms(u64),
    #[error("block count must be at least 1")]
    ZeroBlocks,
    #[error("the second block can only extend the initial segment")]
    NotInitial,
    #[error("at least two blocks are required before this step")]
    TooFewBlocks,
    #[error("structural error: {0}")]
    Structural(String),
    #[error("t = ({t}) and t' = ({t_prime}) differ in more than their special elements")]
    MergeMismatch { t: Sequence, t_prime: Sequence },
    #[error("fresh element and 1 share slot {slot}; a branch choice is required")]
    BranchRequired { slot: usize },
    #[error("fresh element and 1 occupy different slots; no branch choice applies")]
    BranchUnexpected,
    #[error("block {block} fails the doubly fractal check at index {index}")]
    NotFractal { block: usize, index: usize },
    #[error("this operation needs a single branch path, not the `All` policy")]
    AmbiguousPolicy,
}

/// The merge of `t` and `t'` for one extension step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergePlan {
    pub t: Sequence,
    pub t_prime: Sequence,
    /// The element of `t` with no counterpart in `t'`.
    pub special: Term,
    /// 1-based position of `special` in `t`.
    pub special_pos: usize,
    /// 1-based position of the `1` in `t'`.
    pub one_pos: usize,
    pub merged: Sequence,
    /// `index_P(1) - index_P(special)`.
    pub offset: i64,
    pub branch: Option<Branch>,
}

impl MergePlan {
    /// The part of `P` that precedes its `1`.
    pub fn truncated(&self) -> &[Term] {
        let merged = self.merged.terms();
        let cut = merged.iter().position(|&x| x == 1).unwrap_or(merged.len());
        &merged[..cut]
    }
}

/// Merges `t` and `t'` around their shared run.
pub fn merge_p(
    t: &Sequence,
    t_prime: &Sequence,
    branch: Option<Branch>,
) -> Result<MergePlan, ConstructionError> {
    let mismatch = || ConstructionError::MergeMismatch {
        t: t.clone(),
        t_prime: t_prime.clone(),
    };
    let tp = t_prime.terms();
    let one_slot = match tp
        .iter()
        .enumerate()
        .filter(|&(_, &x)| x == 1)
        .map(|(i, _)| i)
        .collect::<Vec<_>>()[..]
    {
        [i] => i,
        _ => return Err(mismatch()),
    };
    let common: Vec<Term> = tp.iter().copied().filter(|&x| x != 1).collect();
    let tt = t.terms();
    if tt.len() != common.len() + 1 {
        return Err(mismatch());
    }
    let special_slot = tt
        .iter()
        .zip(&common)
        .position(|(a, b)| a != b)
        .unwrap_or(common.len());
    let special = tt[special_slot];
    if tt[special_slot + 1..] != common[special_slot..] || special == 1 || common.contains(&special)
    {
        return Err(mismatch());
    }

    let one_first = match (special_slot == one_slot, branch) {
        (true, Some(b)) => b == Branch::OneFirst,
        (true, None) => return Err(ConstructionError::BranchRequired { slot: one_slot + 1 }),
        (false, Some(_)) => return Err(ConstructionError::BranchUnexpected),
        (false, None) => one_slot < special_slot,
    };
    let mut merged = Vec::with_capacity(common.len() + 2);
    for slot in 0..=common.len() {
        let (first, second) = if one_first {
            (one_slot, special_slot)
        } else {
            (special_slot, one_slot)
        };
        let (first_val, second_val) = if one_first {
            (1, special)
        } else {
            (special, 1)
        };
        if slot == first {
            merged.push(first_val);
        }
        if slot == second {
            merged.push(second_val);
        }
        if let Some(&c) = common.get(slot) {
            merged.push(c);
        }
    }
    let idx = |v: Term| merged.iter().position(|&x| x == v).expect("inserted above") as i64;
    let offset = idx(1) - idx(special);
    Ok(MergePlan {
        t: t.clone(),
        t_prime: t_prime.clone(),
        special,
        special_pos: special_slot + 1,
        one_pos: one_slot + 1,
        merged: Sequence::from_positive(merged),
        offset,
        branch: (special_slot == one_slot).then_some(branch).flatten(),
    })
}

/// A type-1 construction in progress.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionState {
    n: u64,
    seq: Vec<Term>,
    /// 0-based index of each block's leading 1.
    block_starts: Vec<usize>,
    /// 0-based index of each block's final `n`.
    block_ends: Vec<usize>,
    fresh: Term,
    branch_log: Vec<Branch>,
    plans: Vec<MergePlan>,
}

impl ConstructionState {
    pub fn init_type1(n: u64) -> Result<Self, ConstructionError> {
        if n < 2 {
            return Err(ConstructionError::TooFewMainTerms(n));
        }
        Ok(ConstructionState {
            n,
            seq: (1..=n).collect(),
            block_starts: vec![0],
            block_ends: vec![n as usize - 1],
            fresh: n + 1,
            branch_log: Vec::new(),
            plans: Vec::new(),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn sequence(&self) -> Sequence {
        Sequence::from_positive(self.seq.clone())
    }

    pub fn terms(&self) -> &[Term] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn blocks(&self) -> usize {
        self.block_starts.len()
    }

    /// 1-based index of each block's leading 1.
    pub fn block_starts(&self) -> Vec<usize> {
        self.block_starts.iter().map(|i| i + 1).collect()
    }

    /// Terms of block `k` (1-based), from its leading 1 to its final `n`.
    pub fn block(&self, k: usize) -> Option<&[Term]> {
        let i = k.checked_sub(1)?;
        Some(&self.seq[*self.block_starts.get(i)?..=self.block_ends[i]])
    }

    /// The least value not yet used.
    pub fn fresh(&self) -> Term {
        self.fresh
    }

    pub fn branch_log(&self) -> &[Branch] {
        &self.branch_log
    }

    /// Merge plans of the steps from block 3 onwards, in order.
    pub fn plans(&self) -> &[MergePlan] {
        &self.plans
    }

    fn last_block(&self) -> &[Term] {
        self.block(self.blocks()).expect("at least one block")
    }

    pub fn extend_second_block(&mut self) -> Result<(), ConstructionError> {
        if self.blocks() != 1 || self.seq.len() != self.n as usize {
            return Err(ConstructionError::NotInitial);
        }
        let block = self.replay(self.last_block(), -1, self.fresh);
        self.commit(Vec::new(), block, None)
    }

    pub fn extract_t(&self) -> Result<Sequence, ConstructionError> {
        if self.blocks() < 2 {
            return Err(ConstructionError::TooFewBlocks);
        }
        let block = self.last_block();
        let before = block
            .iter()
            .rposition(|&x| x == self.n - 1)
            .ok_or_else(|| {
                ConstructionError::Structural(format!("no {} in the last block", self.n - 1))
            })?;
        let after = before
            + 1
            + block[before + 1..]
                .iter()
                .position(|&x| x == self.n)
                .ok_or_else(|| {
                    ConstructionError::Structural(format!(
                        "no {} after the last {}",
                        self.n,
                        self.n - 1
                    ))
                })?;
        Ok(Sequence::from_positive(
            block[before + 1..after].iter().map(|x| x + 1).collect(),
        ))
    }

    pub fn extract_t_prime(&self) -> Result<Sequence, ConstructionError> {
        let k = self.blocks();
        if k < 2 {
            return Err(ConstructionError::TooFewBlocks);
        }
        let prev_end = self.block_ends[k - 2];
        let (start, end) = (self.block_starts[k - 1], self.block_ends[k - 1]);
        let last_succ = start
            + self.seq[start..=end]
                .iter()
                .rposition(|&x| x == self.n + 1)
                .ok_or_else(|| {
                    ConstructionError::Structural(format!("no {} in the last block", self.n + 1))
                })?;
        Ok(Sequence::from_positive(
            self.seq[prev_end + 1..last_succ].to_vec(),
        ))
    }

    /// Merge plan for the next step, without committing anything.
    pub fn plan_next(&self, branch: Option<Branch>) -> Result<MergePlan, ConstructionError> {
        merge_p(&self.extract_t()?, &self.extract_t_prime()?, branch)
    }

    /// Whether the next step forks, i.e. needs a [`Branch`].
    pub fn next_step_forks(&self) -> Result<bool, ConstructionError> {
        match self.plan_next(None) {
            Ok(_) => Ok(false),
            Err(ConstructionError::BranchRequired { .. }) => Ok(true),
            Err(e) => Err(e),
        }
    }

    pub fn extend_next_block(&mut self, branch: Option<Branch>) -> Result<(), ConstructionError> {
        if self.blocks() < 2 {
            return Err(ConstructionError::TooFewBlocks);
        }
        let plan = self.plan_next(branch)?;
        let appended = plan.truncated().to_vec();
        let fresh = appended
            .iter()
            .copied()
            .max()
            .map_or(self.fresh, |m| m.max(self.fresh - 1) + 1);
        let block = self.replay(self.last_block(), plan.offset, fresh);
        self.commit(appended, block, Some(plan))
    }

    /// Replays `prev`, placing a fresh value `offset` positions before each
    /// main term (after it when `offset < 0`) when the placement stays inside
    /// the new block.
    fn replay(&self, prev: &[Term], offset: i64, mut fresh: Term) -> Vec<Term> {
        let mut out = Vec::with_capacity(prev.len() + self.n as usize);
        let mut pending = VecDeque::new();
        let gap = offset.unsigned_abs() as usize;
        for &term in prev {
            while pending.front() == Some(&out.len()) {
                pending.pop_front();
                out.push(fresh);
                fresh += 1;
            }
            if term > self.n {
                out.push(term);
                continue;
            }
            if offset > 0 && out.len() >= gap {
                out.insert(out.len() + 1 - gap, fresh);
                fresh += 1;
            }
            if offset < 0 {
                pending.push_back(out.len() + gap);
            }
            out.push(term);
        }
        out
    }

    fn commit(
        &mut self,
        appended: Vec<Term>,
        block: Vec<Term>,
        plan: Option<MergePlan>,
    ) -> Result<(), ConstructionError> {
        let mut seq = self.seq.clone();
        seq.extend_from_slice(&appended);
        let start = seq.len();
        seq.extend_from_slice(&block);
        if block.first() != Some(&1) || block.last() != Some(&self.n) {
            return Err(ConstructionError::Structural(format!(
                "block {} does not run from 1 to {}",
                self.blocks() + 1,
                self.n
            )));
        }
        let report = check_doubly_fractal_prefix(&Sequence::from_positive(seq.clone()));
        if let Some(index) = report.first_violation_index {
            return Err(ConstructionError::NotFractal {
                block: self.blocks() + 1,
                index,
            });
        }
        self.fresh = seq.iter().copied().max().unwrap_or(0) + 1;
        self.block_ends.push(seq.len() - 1);
        self.block_starts.push(start);
        self.seq = seq;
        if let Some(plan) = plan {
            if let Some(b) = plan.branch {
                self.branch_log.push(b);
            }
            self.plans.push(plan);
        }
        Ok(())
    }

    /// Performs the next step, whatever block it is.
    pub fn extend(&mut self, branch: Option<Branch>) -> Result<(), ConstructionError> {
        if self.blocks() == 1 {
            self.extend_second_block()
        } else {
            self.extend_next_block(branch)
        }
    }

    /// Extends until `blocks` blocks exist, drawing fork choices from `next`.
    fn extend_to(
        &mut self,
        blocks: usize,
        mut next: impl FnMut() -> Branch,
    ) -> Result<(), ConstructionError> {
        while self.blocks() < blocks {
            let branch = if self.blocks() >= 2 && self.next_step_forks()? {
                Some(next())
            } else {
                None
            };
            self.extend(branch)?;
        }
        Ok(())
    }
}

impl fmt::Display for ConstructionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sequence())
    }
}

fn chooser(policy: &BranchPolicy) -> Result<impl FnMut() -> Branch + '_, ConstructionError> {
    let mut used = 0;
    match policy {
        BranchPolicy::All => Err(ConstructionError::AmbiguousPolicy),
        _ => Ok(move || {
            let b = match policy {
                BranchPolicy::Fixed(b) => *b,
                BranchPolicy::Explicit(list) => list.get(used).copied().unwrap_or(Branch::OneFirst),
                BranchPolicy::All => unreachable!(),
            };
            used += 1;
            b
        }),
    }
}

/// Builds `blocks` blocks over the main terms `1..=n`. Returns one state per
/// branch path: a single one unless `policy` is [`BranchPolicy::All`].
pub fn construct_type1(
    n: u64,
    blocks: usize,
    policy: &BranchPolicy,
) -> Result<Vec<ConstructionState>, ConstructionError> {
    if blocks == 0 {
        return Err(ConstructionError::ZeroBlocks);
    }
    let state = ConstructionState::init_type1(n)?;
    if *policy != BranchPolicy::All {
        let mut state = state;
        state.extend_to(blocks, chooser(policy)?)?;
        return Ok(vec![state]);
    }
    let mut done = Vec::new();
    let mut stack = vec![state];
    while let Some(mut state) = stack.pop() {
        if state.blocks() == blocks {
            done.push(state);
        } else if state.blocks() >= 2 && state.next_step_forks()? {
            // push FreshFirst first so OneFirst paths come out first
            for b in [Branch::FreshFirst, Branch::OneFirst] {
                let mut child = state.clone();
                child.extend(Some(b))?;
                stack.push(child);
            }
        } else {
            state.extend(None)?;
            stack.push(state);
        }
    }
    Ok(done)
}

/// The type-2 sequence with `n` leading ones: the occurrence-rank stream of
/// the type-1 construction over `1..=n`, cut to `length` terms.
pub fn translate_type2(
    n: u64,
    length: usize,
    policy: &BranchPolicy,
) -> Result<Sequence, ConstructionError> {
    let mut state = ConstructionState::init_type1(n)?;
    let mut next = chooser(policy)?;
    while state.len() < length {
        let target = state.blocks() + 1;
        state.extend_to(target, &mut next)?;
    }
    Ok(rank_stream(&state.sequence()).prefix(length))
}
