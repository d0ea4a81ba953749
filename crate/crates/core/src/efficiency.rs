//! Pareto dominance and the four-level efficiency scale:
//! Pareto-optimal, sequenceable, swap-optimal, none.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::allocation::{enumerate_allocations, Allocation};
use crate::deals::{is_cycle_optimal, DealStrength};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::sequences::is_sequenceable;

/// Highest efficiency property an allocation satisfies, strongest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EfficiencyLevel {
    ParetoOptimal,
    Sequenceable,
    SwapOptimal,
    None,
}

impl EfficiencyLevel {
    pub const ALL: [EfficiencyLevel; 4] = [
        EfficiencyLevel::ParetoOptimal,
        EfficiencyLevel::Sequenceable,
        EfficiencyLevel::SwapOptimal,
        EfficiencyLevel::None,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            EfficiencyLevel::ParetoOptimal => "PO",
            EfficiencyLevel::Sequenceable => "Seq",
            EfficiencyLevel::SwapOptimal => "Swap",
            EfficiencyLevel::None => "none",
        }
    }

    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|l| l == self).unwrap()
    }
}

impl fmt::Display for EfficiencyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Per-agent utility vector in scaled-integer space; componentwise
/// comparisons agree with the exact rational ones.
fn utility_vector(instance: &Instance, allocation: &Allocation) -> Vec<BigInt> {
    let rows = &instance.scaled().rows;
    let mut utilities = vec![BigInt::zero(); instance.n()];
    for (k, agent) in allocation.iter_owned() {
        utilities[agent] += &rows[agent][k];
    }
    utilities
}

enum VecOrder {
    Dominates,
    Equal,
    Incomparable,
}

fn compare_vectors(a: &[BigInt], b: &[BigInt]) -> VecOrder {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Less => return VecOrder::Incomparable,
            Ordering::Greater => strict = true,
            Ordering::Equal => {}
        }
    }
    if strict {
        VecOrder::Dominates
    } else {
        VecOrder::Equal
    }
}

/// True iff `a` makes every agent at least as happy as `b` and someone
/// strictly happier. Both allocations must be full.
pub fn dominates(instance: &Instance, a: &Allocation, b: &Allocation) -> Result<bool> {
    for (name, alloc) in [("first", a), ("second", b)] {
        if alloc.n() != instance.n() || alloc.m() != instance.m() || !alloc.is_full() {
            return Err(Error::Domain(format!(
                "{name} allocation does not cover the instance's objects"
            )));
        }
    }
    let ua = utility_vector(instance, a);
    let ub = utility_vector(instance, b);
    Ok(matches!(compare_vectors(&ua, &ub), VecOrder::Dominates))
}

/// Brute-force Pareto check: scans all `n^m` allocations and returns the
/// first dominating one in enumeration order, or `None` when the allocation
/// is Pareto-optimal. (The problem is coNP-complete in general; at this
/// crate's desk scale exhaustive search is the exact oracle.)
pub fn pareto_witness(
    instance: &Instance,
    allocation: &Allocation,
    budget: u64,
) -> Result<Option<Allocation>> {
    assert!(allocation.is_full(), "Pareto test needs a full allocation");
    let target = utility_vector(instance, allocation);
    for candidate in enumerate_allocations(instance, budget)? {
        let vec = utility_vector(instance, &candidate);
        if matches!(compare_vectors(&vec, &target), VecOrder::Dominates) {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

pub fn is_pareto_optimal(instance: &Instance, allocation: &Allocation, budget: u64) -> Result<bool> {
    Ok(pareto_witness(instance, allocation, budget)?.is_none())
}

/// Pareto flags for a batch of full allocations, relative to that batch:
/// `flags[i]` is true iff no other allocation in `allocations` dominates
/// allocation `i`. Passing all `n^m` allocations gives the Pareto-optimality
/// verdict for each.
///
/// A dominating allocation has strictly larger total scaled welfare, so the
/// batch is scanned in decreasing welfare order against the running set of
/// non-dominated vectors instead of all pairs.
pub fn pareto_flags(instance: &Instance, allocations: &[Allocation]) -> Vec<bool> {
    let vectors: Vec<Vec<BigInt>> = allocations
        .iter()
        .map(|a| {
            assert!(a.is_full(), "Pareto flags need full allocations");
            utility_vector(instance, a)
        })
        .collect();
    let totals: Vec<BigInt> = vectors
        .iter()
        .map(|v| v.iter().sum())
        .collect();
    let mut order: Vec<usize> = (0..vectors.len()).collect();
    order.sort_by(|&a, &b| totals[b].cmp(&totals[a]).then(a.cmp(&b)));

    let mut flags = vec![true; vectors.len()];
    let mut skyline: Vec<usize> = Vec::new();
    'next: for &idx in &order {
        for &s in &skyline {
            match compare_vectors(&vectors[s], &vectors[idx]) {
                VecOrder::Dominates => {
                    flags[idx] = false;
                    continue 'next;
                }
                // Equal to a non-dominated vector: same verdict, no need to
                // keep a duplicate in the skyline.
                VecOrder::Equal => continue 'next,
                VecOrder::Incomparable => {}
            }
        }
        skyline.push(idx);
    }
    flags
}

/// Highest satisfied level of the efficiency scale, testing top-down.
pub fn efficiency_level(
    instance: &Instance,
    allocation: &Allocation,
    budget: u64,
) -> Result<EfficiencyLevel> {
    if is_pareto_optimal(instance, allocation, budget)? {
        return Ok(EfficiencyLevel::ParetoOptimal);
    }
    if is_sequenceable(instance, allocation) {
        return Ok(EfficiencyLevel::Sequenceable);
    }
    let swap_cap = instance.n().min(2);
    if is_cycle_optimal(instance, allocation, swap_cap, 1, DealStrength::Strict) {
        return Ok(EfficiencyLevel::SwapOptimal);
    }
    Ok(EfficiencyLevel::None)
}
