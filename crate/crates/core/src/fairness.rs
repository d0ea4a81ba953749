//! Fairness tests and the six-level fairness scale:
//! CEEI, envy-freeness, min-max share, proportionality, max-min share, none.
//!
//! CEEI is decided exactly: prices in `[0,1]^m` form a competitive
//! equilibrium with budget 1 per agent iff every share is affordable and
//! every strictly better bundle is unaffordable. The strict inequalities are
//! handled by maximizing a margin variable with the exact LP solver; the
//! allocation passes the test iff the optimal margin is positive.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::allocation::{enumerate_allocations, Allocation};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::Rational;
use crate::ratlp::{solve_max, Constraint, LinearProgram, LpOutcome, Relation, VarBounds};

/// Highest fairness property an allocation satisfies, strongest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FairnessLevel {
    Ceei,
    EnvyFree,
    MinMaxShare,
    Proportional,
    MaxMinShare,
    None,
}

impl FairnessLevel {
    pub const ALL: [FairnessLevel; 6] = [
        FairnessLevel::Ceei,
        FairnessLevel::EnvyFree,
        FairnessLevel::MinMaxShare,
        FairnessLevel::Proportional,
        FairnessLevel::MaxMinShare,
        FairnessLevel::None,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            FairnessLevel::Ceei => "CEEI",
            FairnessLevel::EnvyFree => "EF",
            FairnessLevel::MinMaxShare => "mFS",
            FairnessLevel::Proportional => "PFS",
            FairnessLevel::MaxMinShare => "MFS",
            FairnessLevel::None => "none",
        }
    }

    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|l| l == self).unwrap()
    }
}

impl fmt::Display for FairnessLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Object prices, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceVector {
    prices: Vec<Rational>,
}

impl PriceVector {
    pub fn new(prices: Vec<Rational>) -> Result<Self> {
        if let Some(p) = prices
            .iter()
            .find(|p| **p < Rational::zero() || **p > Rational::one())
        {
            return Err(Error::Domain(format!("price {p} outside [0, 1]")));
        }
        Ok(PriceVector { prices })
    }

    pub fn prices(&self) -> &[Rational] {
        &self.prices
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }
}

impl fmt::Display for PriceVector {
    /// Comma-separated exact rationals, e.g. `1/2,1,1,1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self.prices.iter().map(|p| p.to_string()).collect();
        f.write_str(&tokens.join(","))
    }
}

/// Per-agent utilities for every agent's bundle: `sums[i][j]` is agent `i`'s
/// scaled utility for agent `j`'s bundle.
fn cross_utilities(instance: &Instance, allocation: &Allocation) -> Vec<Vec<BigInt>> {
    let rows = &instance.scaled().rows;
    let n = instance.n();
    let mut sums = vec![vec![BigInt::zero(); n]; n];
    for (k, owner) in allocation.iter_owned() {
        for (i, row) in rows.iter().enumerate() {
            sums[i][owner] += &row[k];
        }
    }
    sums
}

/// True iff no agent values another agent's bundle above her own.
pub fn is_envy_free(instance: &Instance, allocation: &Allocation) -> bool {
    assert!(allocation.is_full(), "envy-freeness needs a full allocation");
    assert_eq!(allocation.n(), instance.n(), "allocation agent count mismatch");
    let sums = cross_utilities(instance, allocation);
    (0..instance.n()).all(|i| (0..instance.n()).all(|j| sums[i][i] >= sums[i][j]))
}

/// The proportional fair share `u_i(O) / n`.
pub fn proportional_share(instance: &Instance, agent: usize) -> Rational {
    instance.total_utility(agent) / Rational::from_integer(BigInt::from(instance.n()))
}

/// All three per-agent share thresholds, computed in one sweep over every
/// full allocation: the max-min share (best worst bundle the agent could
/// guarantee by partitioning herself), the min-max share (the best bundle of
/// the adversarially flattest partition) and the proportional share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairShares {
    pub proportional: Vec<Rational>,
    pub max_min: Vec<Rational>,
    pub min_max: Vec<Rational>,
}

impl FairShares {
    pub fn compute(instance: &Instance, budget: u64) -> Result<Self> {
        let n = instance.n();
        let scaled = instance.scaled();
        let mut max_min: Vec<Option<BigInt>> = vec![None; n];
        let mut min_max: Vec<Option<BigInt>> = vec![None; n];
        for allocation in enumerate_allocations(instance, budget)? {
            let sums = cross_utilities(instance, &allocation);
            for i in 0..n {
                let low = sums[i].iter().min().unwrap();
                let high = sums[i].iter().max().unwrap();
                match &max_min[i] {
                    Some(cur) if cur >= low => {}
                    _ => max_min[i] = Some(low.clone()),
                }
                match &min_max[i] {
                    Some(cur) if cur <= high => {}
                    _ => min_max[i] = Some(high.clone()),
                }
            }
        }
        let to_rational = |values: Vec<Option<BigInt>>| -> Vec<Rational> {
            values
                .into_iter()
                .enumerate()
                .map(|(i, v)| Rational::new(v.unwrap(), scaled.denoms[i].clone()))
                .collect()
        };
        Ok(FairShares {
            proportional: (0..n).map(|i| proportional_share(instance, i)).collect(),
            max_min: to_rational(max_min),
            min_max: to_rational(min_max),
        })
    }

    fn satisfied(&self, instance: &Instance, allocation: &Allocation, thresholds: &[Rational]) -> bool {
        (0..instance.n()).all(|i| {
            let utility = instance.utility(i, allocation.bundle_iter(i)).unwrap();
            utility >= thresholds[i]
        })
    }

    pub fn satisfies_proportionality(&self, instance: &Instance, allocation: &Allocation) -> bool {
        self.satisfied(instance, allocation, &self.proportional)
    }

    pub fn satisfies_max_min(&self, instance: &Instance, allocation: &Allocation) -> bool {
        self.satisfied(instance, allocation, &self.max_min)
    }

    pub fn satisfies_min_max(&self, instance: &Instance, allocation: &Allocation) -> bool {
        self.satisfied(instance, allocation, &self.min_max)
    }
}

/// Max-min share of one agent (brute force over all allocations).
pub fn max_min_share(instance: &Instance, agent: usize, budget: u64) -> Result<Rational> {
    Ok(FairShares::compute(instance, budget)?.max_min[agent].clone())
}

/// Min-max share of one agent (brute force over all allocations).
pub fn min_max_share(instance: &Instance, agent: usize, budget: u64) -> Result<Rational> {
    Ok(FairShares::compute(instance, budget)?.min_max[agent].clone())
}

/// True iff every agent's utility reaches her proportional share.
pub fn satisfies_proportionality(instance: &Instance, allocation: &Allocation) -> bool {
    (0..instance.n()).all(|i| {
        let utility = instance.utility(i, allocation.bundle_iter(i)).unwrap();
        utility >= proportional_share(instance, i)
    })
}

pub fn satisfies_max_min_share(
    instance: &Instance,
    allocation: &Allocation,
    budget: u64,
) -> Result<bool> {
    Ok(FairShares::compute(instance, budget)?.satisfies_max_min(instance, allocation))
}

pub fn satisfies_min_max_share(
    instance: &Instance,
    allocation: &Allocation,
    budget: u64,
) -> Result<bool> {
    Ok(FairShares::compute(instance, budget)?.satisfies_min_max(instance, allocation))
}

/// Checks definitionally whether `(allocation, prices)` forms a competitive
/// equilibrium from equal incomes: every share costs at most 1 and every
/// strictly better bundle costs strictly more than 1. Exponential in the
/// object count (all `2^m` bundles per agent are compared exactly).
pub fn verify_ceei(instance: &Instance, allocation: &Allocation, prices: &PriceVector) -> bool {
    assert!(allocation.is_full(), "CEEI needs a full allocation");
    assert_eq!(prices.len(), instance.m(), "one price per object required");
    let m = instance.m();
    assert!(m < 60, "bundle enumeration is infeasible at this size");

    // price_sum[mask] and per-agent utility sums over bundle bitmasks.
    let mut price_sum = vec![Rational::zero(); 1 << m];
    for mask in 1usize..(1 << m) {
        let low = mask.trailing_zeros() as usize;
        price_sum[mask] = &price_sum[mask & (mask - 1)] + &prices.prices()[low];
    }

    let one = Rational::one();
    let scaled = instance.scaled();
    for agent in 0..instance.n() {
        let row = &scaled.rows[agent];
        let mut utility = vec![BigInt::zero(); 1 << m];
        for mask in 1usize..(1 << m) {
            let low = mask.trailing_zeros() as usize;
            utility[mask] = &utility[mask & (mask - 1)] + &row[low];
        }
        let own_mask = allocation
            .bundle_iter(agent)
            .fold(0usize, |acc, k| acc | 1 << k);
        if price_sum[own_mask] > one {
            return false;
        }
        for mask in 0usize..(1 << m) {
            if utility[mask] > utility[own_mask] && price_sum[mask] <= one {
                return false;
            }
        }
    }
    true
}

/// Bitmasks of the bundles agent `agent` strictly prefers to her share.
/// With `minimal_only`, only inclusion-minimal better bundles are kept:
/// prices are nonnegative, so a superset's price constraint is implied by
/// its subset's. Pruning never changes the CEEI verdict.
fn better_bundles(
    instance: &Instance,
    allocation: &Allocation,
    agent: usize,
    minimal_only: bool,
) -> Vec<usize> {
    let m = instance.m();
    let row = &instance.scaled().rows[agent];
    let mut utility = vec![BigInt::zero(); 1 << m];
    for mask in 1usize..(1 << m) {
        let low = mask.trailing_zeros() as usize;
        utility[mask] = &utility[mask & (mask - 1)] + &row[low];
    }
    let own_mask = allocation
        .bundle_iter(agent)
        .fold(0usize, |acc, k| acc | 1 << k);
    let own = utility[own_mask].clone();

    let mut out = Vec::new();
    'masks: for mask in 1usize..(1 << m) {
        if utility[mask] <= own {
            continue;
        }
        if minimal_only {
            let mut rest = mask;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                if utility[mask ^ bit] > own {
                    continue 'masks; // a strict sub-bundle is already better
                }
                rest ^= bit;
            }
        }
        out.push(mask);
    }
    out
}

/// CEEI test: searches for certifying prices by maximizing the worst margin
/// by which better bundles exceed the unit budget. Decided by one exact LP.
pub fn ceei_test(
    instance: &Instance,
    allocation: &Allocation,
    budget: u64,
) -> Result<Option<PriceVector>> {
    ceei_test_with_pruning(instance, allocation, budget, true)
}

/// [`ceei_test`] with the inclusion-minimal constraint pruning switchable,
/// for cross-checking that pruning does not change verdicts.
pub fn ceei_test_with_pruning(
    instance: &Instance,
    allocation: &Allocation,
    budget: u64,
    prune: bool,
) -> Result<Option<PriceVector>> {
    assert!(allocation.is_full(), "CEEI needs a full allocation");
    assert_eq!(allocation.n(), instance.n(), "allocation agent count mismatch");
    let (n, m) = (instance.n(), instance.m());
    let constraint_count = (n as u128) << m;
    if constraint_count > budget as u128 {
        return Err(Error::Capacity {
            required: constraint_count,
            budget,
        });
    }

    // Variables p_1..p_m >= 0 and the shifted margin y = delta + 2 in [0, 3].
    // Every constraint is <= with nonnegative right-hand side, so the solver
    // starts from the all-zero point without a feasibility phase.
    //
    // Upper price bounds are implied: the allocation is full, so each object
    // appears in some share whose total price is constrained to at most 1.
    let one = Rational::one();
    let mut bounds = vec![VarBounds::at_least(Rational::zero()); m];
    bounds.push(VarBounds::between(
        Rational::zero(),
        Rational::from_integer(3.into()),
    ));
    let mut objective = vec![Rational::zero(); m];
    objective.push(one.clone());

    let mut constraints = Vec::new();
    for agent in 0..n {
        let bundle: Vec<usize> = allocation.bundle_iter(agent).collect();
        if bundle.is_empty() {
            continue;
        }
        // p(share) <= 1
        let mut coeffs = vec![Rational::zero(); m + 1];
        for &k in &bundle {
            coeffs[k] = one.clone();
        }
        constraints.push(Constraint::new(coeffs, Relation::Le, one.clone()));
    }
    for agent in 0..n {
        for mask in better_bundles(instance, allocation, agent, prune) {
            // p(B) >= 1 + delta, written as -p(B) + y <= 1.
            let mut coeffs = vec![Rational::zero(); m + 1];
            for (k, coeff) in coeffs[..m].iter_mut().enumerate() {
                if mask >> k & 1 == 1 {
                    *coeff = -one.clone();
                }
            }
            coeffs[m] = one.clone();
            constraints.push(Constraint::new(coeffs, Relation::Le, one.clone()));
        }
    }

    let lp = LinearProgram {
        objective,
        constraints,
        bounds,
    };
    let outcome = solve_max(&lp)?;
    let LpOutcome::Optimal { mut point, .. } = outcome else {
        unreachable!("the CEEI margin program is feasible and bounded");
    };
    let margin = point.pop().unwrap() - Rational::from_integer(2.into());
    if margin <= Rational::zero() {
        return Ok(None);
    }
    let prices =
        PriceVector::new(point).expect("full-allocation price constraints imply prices in [0,1]");
    assert!(
        verify_ceei(instance, allocation, &prices),
        "CEEI certificate check failed"
    );
    Ok(Some(prices))
}

/// Highest satisfied level of the fairness scale.
///
/// A CEEI allocation is always envy-free (any other agent's bundle costs at
/// most that agent's unit budget, so it was affordable), so the CEEI price
/// search only runs when envy-freeness already holds.
pub fn fairness_level(
    instance: &Instance,
    allocation: &Allocation,
    budget: u64,
) -> Result<FairnessLevel> {
    if is_envy_free(instance, allocation) {
        if ceei_test(instance, allocation, budget)?.is_some() {
            Ok(FairnessLevel::Ceei)
        } else {
            Ok(FairnessLevel::EnvyFree)
        }
    } else {
        let shares = FairShares::compute(instance, budget)?;
        if shares.satisfies_min_max(instance, allocation) {
            Ok(FairnessLevel::MinMaxShare)
        } else if shares.satisfies_proportionality(instance, allocation) {
            Ok(FairnessLevel::Proportional)
        } else if shares.satisfies_max_min(instance, allocation) {
            Ok(FairnessLevel::MaxMinShare)
        } else {
            Ok(FairnessLevel::None)
        }
    }
}
