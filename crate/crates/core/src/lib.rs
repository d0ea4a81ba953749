//! Classification of indivisible-good allocations under additive preferences.
//!
//! Given an instance (agents, objects, a non-negative weight matrix), this
//! crate places each allocation on two scales, using exact rational
//! arithmetic throughout:
//!
//! * efficiency: Pareto-optimal, sequenceable (reachable by a sequence of
//!   sincere choices), swap-optimal, or none;
//! * fairness: CEEI, envy-free, min-max share, proportional, max-min share,
//!   or none.
//!
//! Beyond the individual tests it provides sequence execution with full
//! indifference branching, greedy sequencing with frustrating-sub-allocation
//! witnesses, exhaustive improving-cycle-deal search, the constructive path
//! from frustration to a strictly improving cycle, share-threshold
//! computation by brute force, a CEEI price search backed by a small exact
//! simplex, random instance generators and preference-domain predicates.

pub mod allocation;
pub mod deals;
pub mod efficiency;
pub mod error;
pub mod fairness;
pub mod generate;
pub mod instance;
pub mod ratlp;
pub mod rational;
pub mod sequences;

pub use allocation::{allocation_count, enumerate_allocations, Allocation, AllocationEnumeration};
pub use deals::{
    apply_deal, classify_deal, find_improving_cycle, improving_cycle_from_frustration,
    is_cycle_optimal, CycleDeal, DealClassification, DealStrength,
};
pub use efficiency::{
    dominates, efficiency_level, is_pareto_optimal, pareto_flags, pareto_witness, EfficiencyLevel,
};
pub use error::{Error, Result};
pub use fairness::{
    ceei_test, fairness_level, is_envy_free, max_min_share, min_max_share, proportional_share,
    satisfies_max_min_share, satisfies_min_max_share, satisfies_proportionality, verify_ceei,
    FairShares, FairnessLevel, PriceVector,
};
pub use generate::{generate, GeneratorConfig, Model};
pub use instance::Instance;
pub use rational::Rational;
pub use sequences::{
    execute_all, is_sequenceable, relation, sequence_of, Sequence, SequenceabilityVerdict,
};

/// Default cap on exhaustive enumerations (`n^m` allocations, `n * 2^m` CEEI
/// constraints). Operations that would exceed it fail with a capacity error
/// instead of running away.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
