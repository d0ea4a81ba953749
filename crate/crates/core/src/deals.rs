//! Cycle deals: cyclic exchanges of object bundles among agents, the
//! exhaustive search for improving deals, and the constructive path from a
//! frustrating sub-allocation to a strictly improving single-object cycle.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::allocation::Allocation;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::sequences::{sequence_of, SequenceabilityVerdict};

/// Required improvement for a deal: strict (every involved agent gains) or
/// weak (nobody loses, someone gains).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DealStrength {
    Strict,
    Weak,
}

/// Verdict of [`classify_deal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DealClassification {
    NotImproving,
    WeaklyImproving,
    StrictlyImproving,
}

impl DealClassification {
    pub fn at_least(&self, strength: DealStrength) -> bool {
        match strength {
            DealStrength::Strict => matches!(self, DealClassification::StrictlyImproving),
            DealStrength::Weak => !matches!(self, DealClassification::NotImproving),
        }
    }
}

/// An ordered cycle of transfers: agent `i_j` passes the bundle `X_j` to the
/// next agent in the cycle (the last agent passes to the first). Agents are
/// pairwise distinct and every transferred bundle is nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDeal {
    transfers: Vec<(usize, BTreeSet<usize>)>,
}

impl CycleDeal {
    pub fn new(transfers: Vec<(usize, BTreeSet<usize>)>) -> Result<Self> {
        if transfers.len() < 2 {
            return Err(Error::Domain("a cycle deal involves at least two agents".into()));
        }
        let agents: BTreeSet<usize> = transfers.iter().map(|(i, _)| *i).collect();
        if agents.len() != transfers.len() {
            return Err(Error::Domain("cycle deal agents must be pairwise distinct".into()));
        }
        if transfers.iter().any(|(_, x)| x.is_empty()) {
            return Err(Error::Domain("cycle deal transfers must be nonempty".into()));
        }
        Ok(CycleDeal { transfers })
    }

    pub fn transfers(&self) -> &[(usize, BTreeSet<usize>)] {
        &self.transfers
    }

    /// Number of agents in the cycle.
    pub fn len(&self) -> usize {
        self.transfers.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Size of the largest transferred bundle.
    pub fn max_transfer_size(&self) -> usize {
        self.transfers.iter().map(|(_, x)| x.len()).max().unwrap()
    }

    fn check_applicable(&self, allocation: &Allocation) -> Result<()> {
        for (agent, bundle) in &self.transfers {
            if *agent >= allocation.n() {
                return Err(Error::Index(format!(
                    "agent {} out of range (allocation has {} agents)",
                    agent + 1,
                    allocation.n()
                )));
            }
            for &k in bundle {
                if k >= allocation.m() {
                    return Err(Error::Index(format!(
                        "object {} out of range (allocation has {} objects)",
                        k + 1,
                        allocation.m()
                    )));
                }
                if allocation.owner(k) != Some(*agent) {
                    return Err(Error::Precondition(format!(
                        "agent {} does not own object {}",
                        agent + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for CycleDeal {
    /// `2 -{3}-> 1 -{4}-> 2` with 1-based indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (agent, bundle) in &self.transfers {
            let objs: Vec<String> = bundle.iter().map(|k| (k + 1).to_string()).collect();
            write!(f, "{} -{{{}}}-> ", agent + 1, objs.join(","))?;
        }
        write!(f, "{}", self.transfers[0].0 + 1)
    }
}

/// Applies the deal: each agent loses the bundle she passes on and gains the
/// one passed by her predecessor; uninvolved agents keep their bundles.
pub fn apply_deal(allocation: &Allocation, deal: &CycleDeal) -> Result<Allocation> {
    deal.check_applicable(allocation)?;
    let count = deal.len();
    let mut bundles: Vec<Vec<usize>> = (0..allocation.n())
        .map(|i| allocation.bundle_iter(i).collect())
        .collect();
    for (j, (agent, outgoing)) in deal.transfers().iter().enumerate() {
        bundles[*agent].retain(|k| !outgoing.contains(k));
        let receiver = deal.transfers()[(j + 1) % count].0;
        bundles[receiver].extend(outgoing.iter().copied());
    }
    Allocation::from_bundles(allocation.n(), allocation.m(), &bundles)
}

/// Per-agent utility changes: `deltas[j]` is the gain of the deal's `j`-th
/// agent, in that agent's scaled-integer utility space.
fn deal_deltas(instance: &Instance, deal: &CycleDeal) -> Vec<BigInt> {
    let scaled = instance.scaled();
    let count = deal.len();
    (0..count)
        .map(|j| {
            let (agent, outgoing) = &deal.transfers()[j];
            let incoming = &deal.transfers()[(j + count - 1) % count].1;
            scaled.bundle_utility(*agent, incoming.iter().copied())
                - scaled.bundle_utility(*agent, outgoing.iter().copied())
        })
        .collect()
}

/// Classifies a deal against an allocation it applies to.
pub fn classify_deal(
    instance: &Instance,
    allocation: &Allocation,
    deal: &CycleDeal,
) -> Result<DealClassification> {
    assert_eq!(allocation.n(), instance.n(), "allocation agent count mismatch");
    assert_eq!(allocation.m(), instance.m(), "allocation object count mismatch");
    deal.check_applicable(allocation)?;
    let deltas = deal_deltas(instance, deal);
    let zero = BigInt::zero();
    if deltas.iter().all(|d| d > &zero) {
        Ok(DealClassification::StrictlyImproving)
    } else if deltas.iter().all(|d| d >= &zero) && deltas.iter().any(|d| d > &zero) {
        Ok(DealClassification::WeaklyImproving)
    } else {
        Ok(DealClassification::NotImproving)
    }
}

/// Exhaustive search for an improving cycle deal with at most `n_max` agents
/// and at most `m_max` objects per transfer. Cycles are explored with the
/// smallest involved agent first, remaining agents and transfers in
/// lexicographic order, so the returned witness is deterministic. Returns
/// the first deal of at least the requested strength, or `None` when no such
/// deal exists (the search is exhaustive, so `None` is an exact verdict).
pub fn find_improving_cycle(
    instance: &Instance,
    allocation: &Allocation,
    n_max: usize,
    m_max: usize,
    strength: DealStrength,
) -> Option<CycleDeal> {
    assert!(allocation.is_full(), "cycle search needs a full allocation");
    assert!(n_max <= instance.n(), "cycle length cap exceeds agent count");
    assert!(m_max >= 1, "transfer size cap must be at least 1");

    let bundles: Vec<Vec<usize>> = (0..instance.n())
        .map(|i| allocation.bundle_iter(i).collect())
        .collect();
    let transfer_choices: Vec<Vec<BTreeSet<usize>>> = bundles
        .iter()
        .map(|bundle| subsets_up_to(bundle, m_max))
        .collect();

    for cycle_len in 2..=n_max {
        let mut tuple = Vec::with_capacity(cycle_len);
        if let Some(deal) = search_tuples(
            instance,
            &transfer_choices,
            cycle_len,
            &mut tuple,
            strength,
        ) {
            return Some(deal);
        }
    }
    None
}

/// Nonempty subsets of `items` with at most `cap` elements, lexicographic by
/// the ascending element list.
fn subsets_up_to(items: &[usize], cap: usize) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn recur(
        items: &[usize],
        from: usize,
        cap: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<BTreeSet<usize>>,
    ) {
        for idx in from..items.len() {
            current.push(items[idx]);
            out.push(current.iter().copied().collect());
            if current.len() < cap {
                recur(items, idx + 1, cap, current, out);
            }
            current.pop();
        }
    }
    recur(items, 0, cap, &mut current, &mut out);
    out
}

/// Enumerates agent tuples of the given length. The first agent is the
/// smallest of the tuple, which rules out rotations of the same cycle but
/// keeps both traversal directions.
fn search_tuples(
    instance: &Instance,
    transfer_choices: &[Vec<BTreeSet<usize>>],
    cycle_len: usize,
    tuple: &mut Vec<usize>,
    strength: DealStrength,
) -> Option<CycleDeal> {
    if tuple.len() == cycle_len {
        let mut transfers: Vec<(usize, BTreeSet<usize>)> = Vec::with_capacity(cycle_len);
        return search_transfers(instance, transfer_choices, tuple, &mut transfers, strength);
    }
    let lower = if tuple.is_empty() { 0 } else { tuple[0] + 1 };
    for agent in lower..instance.n() {
        if tuple.contains(&agent) {
            continue;
        }
        if transfer_choices[agent].is_empty() {
            continue; // empty bundle, nothing to pass on
        }
        tuple.push(agent);
        if let Some(deal) = search_tuples(instance, transfer_choices, cycle_len, tuple, strength) {
            return Some(deal);
        }
        tuple.pop();
    }
    None
}

/// Chooses a transfer for each tuple position in order, pruning as soon as
/// an agent's gain (determined once her outgoing and incoming bundles are
/// fixed) falls below the requested strength.
fn search_transfers(
    instance: &Instance,
    transfer_choices: &[Vec<BTreeSet<usize>>],
    tuple: &[usize],
    transfers: &mut Vec<(usize, BTreeSet<usize>)>,
    strength: DealStrength,
) -> Option<CycleDeal> {
    let scaled = instance.scaled();
    let position = transfers.len();
    let agent = tuple[position];
    let last = position == tuple.len() - 1;
    let zero = BigInt::zero();

    for choice in &transfer_choices[agent] {
        // Gain of this agent: she receives the previous transfer (if fixed
        // yet) and gives `choice`.
        if position > 0 {
            let incoming = &transfers[position - 1].1;
            let gain = scaled.bundle_utility(agent, incoming.iter().copied())
                - scaled.bundle_utility(agent, choice.iter().copied());
            let ok = match strength {
                DealStrength::Strict => gain > zero,
                DealStrength::Weak => gain >= zero,
            };
            if !ok {
                continue;
            }
        }
        transfers.push((agent, choice.clone()));
        if last {
            // Close the cycle: the first agent receives this transfer.
            let first = tuple[0];
            let first_gain = scaled.bundle_utility(first, choice.iter().copied())
                - scaled.bundle_utility(first, transfers[0].1.iter().copied());
            let closes = match strength {
                DealStrength::Strict => first_gain > zero,
                DealStrength::Weak => first_gain >= zero,
            };
            if closes {
                let deal = CycleDeal::new(transfers.clone()).unwrap();
                // Weak deals additionally need one strict gain somewhere.
                let accept = match strength {
                    DealStrength::Strict => true,
                    DealStrength::Weak => deal_deltas(instance, &deal).iter().any(|d| d > &zero),
                };
                if accept {
                    transfers.pop();
                    return Some(deal);
                }
            }
        } else if let Some(deal) =
            search_transfers(instance, transfer_choices, tuple, transfers, strength)
        {
            transfers.pop();
            return Some(deal);
        }
        transfers.pop();
    }
    None
}

/// True iff no improving cycle within the caps exists.
pub fn is_cycle_optimal(
    instance: &Instance,
    allocation: &Allocation,
    n_max: usize,
    m_max: usize,
    strength: DealStrength,
) -> bool {
    find_improving_cycle(instance, allocation, n_max, m_max, strength).is_none()
}

/// For a non-sequenceable allocation, builds a strictly improving cycle of
/// singleton transfers (length at most `n`) out of the frustrating witness:
/// starting from the lowest-index agent holding something in the witness,
/// follow "top object -> its owner" links until an agent repeats, then close
/// the cycle. Returns `None` iff the allocation is sequenceable.
pub fn improving_cycle_from_frustration(
    instance: &Instance,
    allocation: &Allocation,
) -> Option<CycleDeal> {
    let witness = match sequence_of(instance, allocation) {
        SequenceabilityVerdict::Sequenceable(_) => return None,
        SequenceabilityVerdict::NonSequenceable { witness } => witness,
    };
    let scope = witness.scope();

    let start = (0..instance.n())
        .find(|&i| witness.bundle_size(i) > 0)
        .expect("frustrating witness has a nonempty scope");

    let mut agents: Vec<usize> = vec![start];
    let mut wants: Vec<usize> = Vec::new();
    loop {
        let agent = *agents.last().unwrap();
        // Lowest-index top object of this agent within the witness scope.
        let want = *instance
            .best_objects(agent, &scope)
            .unwrap()
            .iter()
            .next()
            .unwrap();
        wants.push(want);
        let owner = witness
            .owner(want)
            .expect("witness scope objects are owned");
        if let Some(t) = agents.iter().position(|&a| a == owner) {
            // Cycle found over agents[t..] and wants[t..].
            let j = agents.len() - 1;
            let mut transfers: Vec<(usize, BTreeSet<usize>)> = Vec::with_capacity(j - t + 1);
            for r in (t + 1..=j).rev() {
                transfers.push((agents[r], BTreeSet::from([wants[r - 1]])));
            }
            transfers.push((agents[t], BTreeSet::from([wants[j]])));
            let deal = CycleDeal::new(transfers).unwrap();
            debug_assert_eq!(
                classify_deal(instance, allocation, &deal).unwrap(),
                DealClassification::StrictlyImproving
            );
            return Some(deal);
        }
        agents.push(owner);
    }
}
