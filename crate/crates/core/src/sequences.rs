//! Sequences of sincere choices and sequenceability.
//!
//! A sequence is a length-`m` vector of agents; executing it lets each agent
//! in turn pick one of her top remaining objects. Indifference makes the
//! execution nondeterministic, so one sequence can generate several
//! allocations. An allocation is *sequenceable* when some sequence generates
//! it; this is decided by greedy peeling: repeatedly hand out an object that
//! is simultaneously a top remaining object of its owner. When the peeling
//! gets stuck, the remaining objects form a frustrating sub-allocation,
//! which is returned as a non-sequenceability witness.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use crate::allocation::{check_enum_budget, Allocation};
use crate::error::{Error, Result};
use crate::instance::Instance;

/// A picking order: `picks[t]` is the agent choosing at step `t` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequence {
    picks: Vec<usize>,
}

impl Sequence {
    pub fn new(picks: Vec<usize>, n: usize) -> Result<Self> {
        if let Some(&bad) = picks.iter().find(|&&i| i >= n) {
            return Err(Error::Index(format!(
                "agent {} out of range (instance has {} agents)",
                bad + 1,
                n
            )));
        }
        Ok(Sequence { picks })
    }

    pub fn picks(&self) -> &[usize] {
        &self.picks
    }

    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }

    /// Parses the `2,1,2` text form (1-based agent indices).
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut picks = Vec::new();
        for token in text.split(',') {
            let token = token.trim();
            let agent: usize = token
                .parse()
                .map_err(|_| Error::Parse(format!("invalid agent index `{token}`")))?;
            if agent == 0 || agent > n {
                return Err(Error::Parse(format!(
                    "agent index `{token}` out of range 1..{n}"
                )));
            }
            picks.push(agent - 1);
        }
        Ok(Sequence { picks })
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self.picks.iter().map(|i| (i + 1).to_string()).collect();
        f.write_str(&tokens.join(","))
    }
}

/// Outcome of [`sequence_of`]: a generating sequence, or a frustrating
/// sub-allocation proving that none exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceabilityVerdict {
    Sequenceable(Sequence),
    NonSequenceable { witness: Allocation },
}

impl SequenceabilityVerdict {
    pub fn is_sequenceable(&self) -> bool {
        matches!(self, SequenceabilityVerdict::Sequenceable(_))
    }
}

/// All allocations obtainable by executing `sequence`, resolving every
/// indifference in every possible way (duplicates merged).
///
/// Panics if the sequence length differs from the object count.
pub fn execute_all(instance: &Instance, sequence: &Sequence) -> BTreeSet<Allocation> {
    assert_eq!(
        sequence.len(),
        instance.m(),
        "sequence length must equal the object count"
    );
    let mut out = BTreeSet::new();
    let mut owners: Vec<Option<usize>> = vec![None; instance.m()];
    let mut remaining: BTreeSet<usize> = (0..instance.m()).collect();
    branch(instance, sequence, 0, &mut remaining, &mut owners, &mut out);
    out
}

fn branch(
    instance: &Instance,
    sequence: &Sequence,
    step: usize,
    remaining: &mut BTreeSet<usize>,
    owners: &mut Vec<Option<usize>>,
    out: &mut BTreeSet<Allocation>,
) {
    if step == sequence.len() {
        let owners: Vec<usize> = owners.iter().map(|o| o.unwrap()).collect();
        out.insert(Allocation::full(instance.n(), owners).unwrap());
        return;
    }
    let agent = sequence.picks()[step];
    let choices = instance.best_objects(agent, remaining).unwrap();
    for k in choices {
        owners[k] = Some(agent);
        remaining.remove(&k);
        branch(instance, sequence, step + 1, remaining, owners, out);
        remaining.insert(k);
        owners[k] = None;
    }
}

/// Greedy peeling ("sequencing an allocation"): returns a sequence
/// generating the full allocation, or a frustrating witness. Ties are broken
/// deterministically: lowest agent index first, then lowest object index.
pub fn sequence_of(instance: &Instance, allocation: &Allocation) -> SequenceabilityVerdict {
    assert!(allocation.is_full(), "sequenceability needs a full allocation");
    assert_eq!(allocation.n(), instance.n(), "allocation agent count mismatch");
    assert_eq!(allocation.m(), instance.m(), "allocation object count mismatch");

    let rows = &instance.scaled().rows;
    let mut remaining: Vec<bool> = vec![true; instance.m()];
    let mut left = instance.m();
    let mut picks = Vec::with_capacity(instance.m());

    while left > 0 {
        let mut chosen: Option<(usize, usize)> = None;
        'agents: for (agent, row) in rows.iter().enumerate() {
            let mut best: Option<&BigInt> = None;
            for k in 0..instance.m() {
                if remaining[k] && best.is_none_or(|b| &row[k] > b) {
                    best = Some(&row[k]);
                }
            }
            let best = best.unwrap();
            for k in 0..instance.m() {
                if remaining[k] && &row[k] == best && allocation.owner(k) == Some(agent) {
                    chosen = Some((agent, k));
                    break 'agents;
                }
            }
        }
        match chosen {
            Some((agent, object)) => {
                picks.push(agent);
                remaining[object] = false;
                left -= 1;
            }
            None => {
                let scope: BTreeSet<usize> =
                    (0..instance.m()).filter(|&k| remaining[k]).collect();
                let witness = allocation.restricted(&scope);
                debug_assert!(instance.is_frustrating(&witness).unwrap());
                return SequenceabilityVerdict::NonSequenceable { witness };
            }
        }
    }
    SequenceabilityVerdict::Sequenceable(Sequence { picks })
}

/// True iff some sequence of sincere choices generates the allocation.
pub fn is_sequenceable(instance: &Instance, allocation: &Allocation) -> bool {
    sequence_of(instance, allocation).is_sequenceable()
}

/// The full relation between sequences and the allocations they generate,
/// in lexicographic sequence order.
pub fn relation(instance: &Instance, budget: u64) -> Result<Vec<(Sequence, Allocation)>> {
    check_enum_budget(instance.n(), instance.m(), budget)?;
    let (n, m) = (instance.n(), instance.m());
    let mut pairs = Vec::new();
    let mut picks = vec![0usize; m];
    loop {
        let sequence = Sequence {
            picks: picks.clone(),
        };
        for allocation in execute_all(instance, &sequence) {
            pairs.push((sequence.clone(), allocation));
        }
        let mut done = true;
        for t in (0..m).rev() {
            if picks[t] + 1 < n {
                picks[t] += 1;
                done = false;
                break;
            }
            picks[t] = 0;
        }
        if done {
            break;
        }
    }
    Ok(pairs)
}
