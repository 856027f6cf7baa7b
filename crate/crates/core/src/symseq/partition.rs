//! Set partitions of `{1..n}` as restricted-growth strings.
//!
//! A partition is stored as a block assignment `a[0..n]` with `a[0] = 0` and
//! `a[i] ≤ 1 + max(a[0..i])`. Enumeration runs in lexicographic order of these
//! strings, which is also the order of first appearance of blocks.

use crate::{Limits, Result, SocError};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    assignment: Vec<usize>,
}

/// One block of a partition: its size and its 1-based members in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub size: usize,
    pub members: Vec<usize>,
}

fn validate_rgs(assignment: &[usize]) -> Result<()> {
    let mut max_seen: Option<usize> = None;
    for (i, &b) in assignment.iter().enumerate() {
        let allowed = max_seen.map_or(0, |m| m + 1);
        if b > allowed {
            return Err(SocError::Validation(format!(
                "block index {b} at position {i} breaks restricted growth (at most {allowed} allowed)"
            )));
        }
        max_seen = Some(max_seen.map_or(b, |m| m.max(b)));
    }
    Ok(())
}

impl SetPartition {
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        validate_rgs(&assignment)?;
        Ok(SetPartition { assignment })
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Number of blocks `|π|`.
    pub fn num_blocks(&self) -> usize {
        self.assignment.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Block> {
        blocks_from_valid(&self.assignment)
    }
}

fn blocks_from_valid(assignment: &[usize]) -> Vec<Block> {
    let k = assignment.iter().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &b) in assignment.iter().enumerate() {
        members[b].push(i + 1);
    }
    members
        .into_iter()
        .map(|m| Block {
            size: m.len(),
            members: m,
        })
        .collect()
}

/// Blocks of a raw block assignment, validating restricted growth first.
pub fn blocks_of(assignment: &[usize]) -> Result<Vec<Block>> {
    validate_rgs(assignment)?;
    Ok(blocks_from_valid(assignment))
}

/// Lexicographic successor of a restricted-growth string; false at the end.
fn advance(a: &mut [usize], prefix_max: &mut [usize]) -> bool {
    let n = a.len();
    for i in (1..n).rev() {
        if a[i] <= prefix_max[i - 1] {
            a[i] += 1;
            prefix_max[i] = prefix_max[i - 1].max(a[i]);
            for j in i + 1..n {
                a[j] = 0;
                prefix_max[j] = prefix_max[i];
            }
            return true;
        }
    }
    false
}

/// Calls `visit` with every restricted-growth string of length `n`, in
/// lexicographic order. `n = 0` visits the empty partition once.
pub(crate) fn for_each_rgs(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut a = vec![0usize; n];
    let mut prefix_max = vec![0usize; n];
    loop {
        visit(&a);
        if !advance(&mut a, &mut prefix_max) {
            break;
        }
    }
}

fn check_cap(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.max_partition_n {
        return Err(SocError::capacity(
            "set-partition size",
            n as u128,
            limits.max_partition_n as u128,
        ));
    }
    Ok(())
}

/// All set partitions of `{1..n}`, lexicographic in restricted-growth form.
pub fn enumerate_set_partitions(n: usize, limits: &Limits) -> Result<Vec<SetPartition>> {
    if n == 0 {
        return Err(SocError::Validation(
            "set partitions are enumerated for n ≥ 1".into(),
        ));
    }
    check_cap(n, limits)?;
    let mut out = Vec::new();
    for_each_rgs(n, |a| {
        out.push(SetPartition {
            assignment: a.to_vec(),
        })
    });
    Ok(out)
}

/// Block-size type of every partition of `{1..n}`, tallied: keys are block
/// sizes sorted in decreasing order, values count the partitions of that type.
/// `n = 0` yields the empty type once.
///
/// A type `λ` with multiplicities `m_j` is realized by `n! / (Π λᵢ! · Π m_j!)`
/// set partitions.
pub fn partition_type_counts(n: usize, limits: &Limits) -> Result<BTreeMap<Vec<usize>, u64>> {
    check_cap(n, limits)?;
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    let mut tally = BTreeMap::new();
    let mut parts = Vec::new();
    integer_partitions(n, n, &mut parts, &mut |lambda| {
        let mut denom: u128 = lambda.iter().map(|&p| fact(p)).product();
        let mut i = 0;
        while i < lambda.len() {
            let run = lambda[i..].iter().take_while(|&&p| p == lambda[i]).count();
            denom *= fact(run);
            i += run;
        }
        let count = u64::try_from(fact(n) / denom).expect("count fits in u64 under the cap");
        tally.insert(lambda.to_vec(), count);
    });
    Ok(tally)
}

/// Integer partitions of `n` with parts at most `max`, parts non-increasing.
fn integer_partitions(n: usize, max: usize, parts: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if n == 0 {
        visit(parts);
        return;
    }
    for p in (1..=max.min(n)).rev() {
        parts.push(p);
        integer_partitions(n - p, p, parts, visit);
        parts.pop();
    }
}
