//! Human-readable reports for the `analyze`, `classify` and `sequence`
//! subcommands. Everything is printed as exact rationals; certificates
//! (generating sequences, dominating allocations, improving cycles) are
//! attached wherever they pin down the level boundary.

use std::fmt::Write as _;

use fairdiv_core::deals::{find_improving_cycle, improving_cycle_from_frustration, DealStrength};
use fairdiv_core::efficiency::{pareto_witness, EfficiencyLevel};
use fairdiv_core::fairness::{ceei_test, is_envy_free, FairShares, FairnessLevel};
use fairdiv_core::sequences::{execute_all, sequence_of, Sequence, SequenceabilityVerdict};
use fairdiv_core::{Allocation, Instance, Result};

/// Full report: utilities, efficiency level with a boundary certificate,
/// fairness level with prices and share thresholds.
pub fn analyze_report(instance: &Instance, allocation: &Allocation, budget: u64) -> Result<String> {
    let mut out = String::new();
    writeln!(
        out,
        "instance: {} agents, {} objects",
        instance.n(),
        instance.m()
    )
    .unwrap();
    writeln!(out, "allocation: {allocation}").unwrap();
    for agent in 0..instance.n() {
        let utility = instance.utility(agent, allocation.bundle_iter(agent))?;
        writeln!(out, "  agent {}: utility {}", agent + 1, utility).unwrap();
    }

    let witness = pareto_witness(instance, allocation, budget)?;
    let verdict = sequence_of(instance, allocation);
    let swap_cap = instance.n().min(2);
    let swap =
        find_improving_cycle(instance, allocation, swap_cap, 1, DealStrength::Strict);

    let efficiency = match (&witness, &verdict, &swap) {
        (None, _, _) => EfficiencyLevel::ParetoOptimal,
        (Some(_), SequenceabilityVerdict::Sequenceable(_), _) => EfficiencyLevel::Sequenceable,
        (Some(_), SequenceabilityVerdict::NonSequenceable { .. }, None) => {
            EfficiencyLevel::SwapOptimal
        }
        (Some(_), SequenceabilityVerdict::NonSequenceable { .. }, Some(_)) => {
            EfficiencyLevel::None
        }
    };
    writeln!(out, "efficiency: {efficiency}").unwrap();
    match &verdict {
        SequenceabilityVerdict::Sequenceable(sequence) => {
            writeln!(out, "  generating sequence: {sequence}").unwrap();
        }
        SequenceabilityVerdict::NonSequenceable { witness } => {
            let scope: Vec<String> = witness.scope().iter().map(|k| (k + 1).to_string()).collect();
            writeln!(
                out,
                "  non-sequenceable: frustrating sub-allocation on objects {{{}}}: {}",
                scope.join(","),
                witness
            )
            .unwrap();
            let cycle = improving_cycle_from_frustration(instance, allocation)
                .expect("non-sequenceable allocations admit an improving cycle");
            writeln!(out, "  improving cycle: {cycle}").unwrap();
        }
    }
    if let Some(dominating) = &witness {
        writeln!(out, "  dominated by: {dominating}").unwrap();
    }
    if efficiency == EfficiencyLevel::None {
        if let Some(swap) = &swap {
            writeln!(out, "  improving swap: {swap}").unwrap();
        }
    }

    let envy_free = is_envy_free(instance, allocation);
    let prices = if envy_free {
        ceei_test(instance, allocation, budget)?
    } else {
        None
    };
    let shares = FairShares::compute(instance, budget)?;
    let fairness = if prices.is_some() {
        FairnessLevel::Ceei
    } else if envy_free {
        FairnessLevel::EnvyFree
    } else if shares.satisfies_min_max(instance, allocation) {
        FairnessLevel::MinMaxShare
    } else if shares.satisfies_proportionality(instance, allocation) {
        FairnessLevel::Proportional
    } else if shares.satisfies_max_min(instance, allocation) {
        FairnessLevel::MaxMinShare
    } else {
        FairnessLevel::None
    };
    writeln!(out, "fairness: {fairness}").unwrap();
    writeln!(out, "  envy-free: {}", if envy_free { "yes" } else { "no" }).unwrap();
    match &prices {
        Some(prices) => writeln!(out, "  CEEI prices: {prices}").unwrap(),
        None if envy_free => writeln!(out, "  CEEI: no certifying prices exist").unwrap(),
        None => {}
    }
    writeln!(out, "  share thresholds (utility vs mFS / PFS / MFS):").unwrap();
    for agent in 0..instance.n() {
        let utility = instance.utility(agent, allocation.bundle_iter(agent))?;
        writeln!(
            out,
            "    agent {}: {} vs {} / {} / {}",
            agent + 1,
            utility,
            shares.min_max[agent],
            shares.proportional[agent],
            shares.max_min[agent]
        )
        .unwrap();
    }
    Ok(out)
}

/// One-line classification of a single allocation.
pub fn classify_line(instance: &Instance, allocation: &Allocation, budget: u64) -> Result<String> {
    let efficiency = fairdiv_core::efficiency_level(instance, allocation, budget)?;
    let fairness = fairdiv_core::fairness_level(instance, allocation, budget)?;
    Ok(format!("efficiency={efficiency} fairness={fairness}"))
}

/// All allocations a sequence can generate, one per line.
pub fn sequence_executions(instance: &Instance, sequence: &Sequence) -> String {
    let results = execute_all(instance, sequence);
    let mut out = format!(
        "sequence {} generates {} allocation(s):\n",
        sequence,
        results.len()
    );
    for allocation in results {
        writeln!(out, "  {allocation}").unwrap();
    }
    out
}

/// Generating sequence of an allocation, or its frustration witness.
pub fn sequence_verdict(instance: &Instance, allocation: &Allocation) -> String {
    match sequence_of(instance, allocation) {
        SequenceabilityVerdict::Sequenceable(sequence) => {
            format!("generated by sequence: {sequence}\n")
        }
        SequenceabilityVerdict::NonSequenceable { witness } => {
            let scope: Vec<String> = witness.scope().iter().map(|k| (k + 1).to_string()).collect();
            format!(
                "non-sequenceable: frustrating sub-allocation on objects {{{}}}: {}\n",
                scope.join(","),
                witness
            )
        }
    }
}
