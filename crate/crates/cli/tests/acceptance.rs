//! Acceptance suite.
//!
//! Criteria 1-6 pin down worked examples exactly; criteria 7-14 are
//! randomized equivalence and implication checks run exhaustively over every
//! allocation of hundreds of small instances (zero violations tolerated);
//! criteria 15-16 reproduce the full classification experiment and check its
//! qualitative shape and determinism. Each test prints one PASS line.

use std::collections::BTreeSet;

use rayon::prelude::*;

use fairdiv_cli::{per_instance_csv, plot_table, run_experiment, summary_csv};
use fairdiv_core::allocation::enumerate_allocations;
use fairdiv_core::deals::{
    improving_cycle_from_frustration, is_cycle_optimal, DealStrength,
};
use fairdiv_core::efficiency::{dominates, is_pareto_optimal, pareto_flags, pareto_witness, EfficiencyLevel};
use fairdiv_core::fairness::{
    ceei_test, fairness_level, is_envy_free, verify_ceei, FairShares, PriceVector,
};
use fairdiv_core::generate::{generate, GeneratorConfig, Model};
use fairdiv_core::rational::{frac, int};
use fairdiv_core::sequences::{is_sequenceable, relation, sequence_of, SequenceabilityVerdict};
use fairdiv_core::{efficiency_level, Allocation, FairnessLevel, Instance};

const BUDGET: u64 = 10_000_000;

fn alloc(text: &str, n: usize, m: usize) -> Allocation {
    Allocation::parse_full(text, n, m).unwrap()
}

fn random_instance(model: Model, agents: usize, objects: usize, seed: u64) -> Instance {
    let config = GeneratorConfig {
        model,
        agents,
        objects,
        weight_cap: 40,
        seed,
        count: 1,
    };
    generate(&config).unwrap().into_iter().next().unwrap()
}

/// 200 instances cycling through n in {2,3} and m in {3..=max_m}.
fn sample_instances(seed_base: u64, max_m: usize) -> Vec<Instance> {
    (0..200)
        .map(|i| {
            let n = 2 + (i % 2);
            let m = 3 + (i % (max_m - 2));
            random_instance(Model::Uniform, n, m, seed_base + i as u64)
        })
        .collect()
}

#[test]
fn criterion_01_relation_of_the_tie_instance() {
    let inst = Instance::from_ints(&[&[8, 2, 1], &[5, 1, 5]]);
    let pairs = relation(&inst, BUDGET).unwrap();
    let edges: BTreeSet<(String, String)> = pairs
        .iter()
        .map(|(s, a)| (s.to_string(), a.to_string()))
        .collect();
    let expected: BTreeSet<(String, String)> = [
        ("1,1,1", "1,2,3|"),
        ("1,1,2", "1,2|3"),
        ("1,2,1", "1,2|3"),
        ("1,2,2", "1|2,3"),
        ("2,1,1", "1,2|3"),
        ("2,1,1", "2,3|1"),
        ("2,1,2", "1|2,3"),
        ("2,1,2", "2|1,3"),
        ("2,2,1", "2|1,3"),
        ("2,2,2", "|1,2,3"),
    ]
    .into_iter()
    .map(|(s, a)| (s.to_string(), a.to_string()))
    .collect();
    assert_eq!(edges, expected);
    assert_eq!(pairs.len(), 10);
    assert!(!is_sequenceable(&inst, &alloc("1,3|2", 2, 3)));
    assert!(!is_sequenceable(&inst, &alloc("3|1,2", 2, 3)));
    println!("criterion 01 PASS: relation has exactly the 10 expected pairs");
}

#[test]
fn criterion_02_top_objects_do_not_save_an_allocation() {
    let inst = Instance::from_ints(&[&[9, 8, 2, 1], &[2, 5, 1, 4]]);
    let target = alloc("1,4|2,3", 2, 4);
    match sequence_of(&inst, &target) {
        SequenceabilityVerdict::NonSequenceable { witness } => {
            assert_eq!(witness.scope(), BTreeSet::from([2, 3]));
            assert!(inst.is_frustrating(&witness).unwrap());
        }
        other => panic!("expected non-sequenceable, got {other:?}"),
    }
    println!("criterion 02 PASS: non-sequenceable with frustrating witness on objects {{3,4}}");
}

#[test]
fn criterion_03_sequenceable_but_dominated() {
    let inst = Instance::from_ints(&[&[5, 4, 2], &[8, 2, 1]]);
    let target = alloc("1|2,3", 2, 3);
    match sequence_of(&inst, &target) {
        SequenceabilityVerdict::Sequenceable(seq) => assert_eq!(seq.to_string(), "1,2,2"),
        other => panic!("expected sequenceable, got {other:?}"),
    }
    let witness = pareto_witness(&inst, &target, BUDGET).unwrap().unwrap();
    assert_eq!(witness, alloc("2,3|1", 2, 3));
    println!("criterion 03 PASS: generated by 1,2,2 and dominated by <23,1>");
}

#[test]
fn criterion_04_envy_free_yet_non_sequenceable() {
    let inst = Instance::from_ints(&[
        &[12, 15, 11, 7, 2],
        &[2, 12, 7, 15, 11],
        &[15, 20, 9, 2, 1],
    ]);
    let circled = alloc("1,4|3,5|2", 3, 5);
    assert!(inst.is_strict_on_shares());
    assert!(is_envy_free(&inst, &circled));
    assert!(!is_sequenceable(&inst, &circled));
    let cycle = improving_cycle_from_frustration(&inst, &circled).unwrap();
    assert_eq!(cycle.to_string(), "2 -{3}-> 1 -{4}-> 2");
    assert_eq!(cycle.len(), 2);
    println!("criterion 04 PASS: envy-free, non-sequenceable, cycle 2 -{{3}}-> 1 -{{4}}-> 2");
}

#[test]
fn criterion_05_competitive_equilibrium_example() {
    let inst = Instance::from_ints(&[&[2, 3, 3, 2], &[2, 3, 4, 1], &[0, 4, 2, 4]]);
    let circled = alloc("1,4|3|2", 3, 4);
    let stated = PriceVector::new(vec![frac(1, 2), int(1), int(1), frac(1, 2)]).unwrap();
    assert!(verify_ceei(&inst, &circled, &stated));
    let found = ceei_test(&inst, &circled, BUDGET).unwrap().expect("CEEI prices");
    assert!(verify_ceei(&inst, &circled, &found));
    let dag = alloc("1,2|3|4", 3, 4);
    assert!(dominates(&inst, &dag, &circled).unwrap());
    println!("criterion 05 PASS: prices 1/2,1,1,1/2 verify; LP certifies; allocation is dominated");
}

#[test]
fn criterion_06_swap_optimal_but_dominated_single_peaked() {
    let inst = Instance::from_ints(&[
        &[1, 2, 3, 4, 5, 6],
        &[1, 3, 4, 5, 6, 2],
        &[1, 2, 4, 5, 6, 3],
    ]);
    assert!(inst.is_single_peaked(&[0, 1, 2, 3, 4, 5]).unwrap());
    let circled = alloc("1,2|3,4|5,6", 3, 6);
    assert!(is_cycle_optimal(&inst, &circled, 2, 1, DealStrength::Strict));
    assert!(!is_pareto_optimal(&inst, &circled, BUDGET).unwrap());
    println!("criterion 06 PASS: strict-swap-optimal and not Pareto-optimal");
}

#[test]
fn criterion_07_sequenceable_iff_no_frustrating_sub_allocation() {
    let instances = sample_instances(70_000, 6);
    let violations: usize = instances
        .par_iter()
        .map(|inst| {
            let mut bad = 0;
            for allocation in enumerate_allocations(inst, BUDGET).unwrap() {
                let fast = is_sequenceable(inst, &allocation);
                let oracle = !(1usize..(1 << inst.m())).any(|mask| {
                    let objects: BTreeSet<usize> =
                        (0..inst.m()).filter(|k| mask >> k & 1 == 1).collect();
                    inst.is_frustrating(&allocation.restricted(&objects)).unwrap()
                });
                if fast != oracle {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    assert_eq!(violations, 0);
    println!("criterion 07 PASS: 200 instances, zero violations of the subset-oracle equivalence");
}

#[test]
fn criterion_08_pareto_optimal_implies_sequenceable() {
    let instances = sample_instances(80_000, 6);
    let violations: usize = instances
        .par_iter()
        .map(|inst| {
            let allocations: Vec<Allocation> =
                enumerate_allocations(inst, BUDGET).unwrap().collect();
            let pareto = pareto_flags(inst, &allocations);
            allocations
                .iter()
                .zip(&pareto)
                .filter(|(a, po)| **po && !is_sequenceable(inst, a))
                .count()
        })
        .sum();
    assert_eq!(violations, 0);
    println!("criterion 08 PASS: 200 instances, every Pareto-optimal allocation is sequenceable");
}

#[test]
fn criterion_09_sequenceable_iff_strict_n_cycle_optimal() {
    let instances = sample_instances(90_000, 6);
    let violations: usize = instances
        .par_iter()
        .map(|inst| {
            enumerate_allocations(inst, BUDGET)
                .unwrap()
                .filter(|allocation| {
                    is_sequenceable(inst, allocation)
                        != is_cycle_optimal(inst, allocation, inst.n(), 1, DealStrength::Strict)
                })
                .count()
        })
        .sum();
    assert_eq!(violations, 0);
    println!("criterion 09 PASS: 200 instances, sequenceable iff no strict single-object cycle");
}

#[test]
fn criterion_10_domain_restrictions_shape_the_relation() {
    // Strict-on-objects iff the relation is a function; with same-order
    // preferences on top, iff it is a bijection. Mixed draws cover the
    // negative side; sorted rows build the same-order side.
    let mixed: Vec<Instance> = (0..100)
        .map(|i| random_instance(Model::Uniform, 2 + (i % 2), 3 + (i % 2), 100_000 + i as u64))
        .collect();
    let sorted: Vec<Instance> = (0..100)
        .map(|i| {
            let raw = random_instance(Model::Uniform, 2 + (i % 2), 3 + (i % 2), 110_000 + i as u64);
            let mut rows: Vec<Vec<fairdiv_core::Rational>> = (0..raw.n())
                .map(|a| (0..raw.m()).map(|k| raw.weight(a, k).clone()).collect())
                .collect();
            for row in &mut rows {
                row.sort_by(|x, y| y.cmp(x));
            }
            Instance::new(rows).unwrap()
        })
        .collect();

    let mut checked_function = 0;
    let mut checked_bijection = 0;
    for inst in mixed.iter().chain(&sorted) {
        let pairs = relation(inst, BUDGET).unwrap();
        let total = enumerate_allocations(inst, BUDGET).unwrap().count();
        let sequences: BTreeSet<String> = pairs.iter().map(|(s, _)| s.to_string()).collect();
        let functional = pairs.len() == sequences.len();
        assert_eq!(inst.is_strict_on_objects(), functional, "{inst}");
        checked_function += 1;

        let distinct_allocs: BTreeSet<&Allocation> = pairs.iter().map(|(_, a)| a).collect();
        let bijective = pairs.len() == total && distinct_allocs.len() == total;
        assert_eq!(
            inst.is_strict_on_objects() && inst.is_same_order(),
            bijective,
            "{inst}"
        );
        if bijective {
            checked_bijection += 1;
        }
    }
    // Same-order instances (sorted rows) have every allocation sequenceable.
    for inst in &sorted {
        assert!(inst.is_same_order());
        for allocation in enumerate_allocations(inst, BUDGET).unwrap() {
            assert!(is_sequenceable(inst, &allocation), "{inst} {allocation}");
        }
    }
    assert_eq!(checked_function, 200);
    assert!(checked_bijection > 30, "bijective side undersampled");
    println!("criterion 10 PASS: strictness/same-order characterizations hold on 200 instances");
}

#[test]
fn criterion_11_single_peaked_hierarchy_collapse() {
    let instances: Vec<Instance> = (0..200)
        .map(|i| {
            let n = 2 + (i % 2);
            let m = 3 + (i % 4);
            random_instance(Model::SinglePeaked, n, m, 120_000 + i as u64)
        })
        .collect();
    let violations: usize = instances
        .par_iter()
        .map(|inst| {
            let axis: Vec<usize> = (0..inst.m()).collect();
            assert!(inst.is_single_peaked(&axis).unwrap());
            enumerate_allocations(inst, BUDGET)
                .unwrap()
                .filter(|allocation| {
                    let weak_n = is_cycle_optimal(inst, allocation, inst.n(), 1, DealStrength::Weak);
                    let weak_swap = is_cycle_optimal(inst, allocation, 2, 1, DealStrength::Weak);
                    let seq = is_sequenceable(inst, allocation);
                    let strict_swap =
                        is_cycle_optimal(inst, allocation, 2, 1, DealStrength::Strict);
                    weak_n != weak_swap || seq != strict_swap
                })
                .count()
        })
        .sum();
    assert_eq!(violations, 0);
    println!("criterion 11 PASS: 200 single-peaked instances, cycle hierarchy collapses to swaps");
}

#[test]
fn criterion_12_ceei_implies_sequenceable_and_envy_free() {
    let instances: Vec<Instance> = (0..200)
        .map(|i| {
            let n = 2 + (i % 2);
            let m = 3 + (i % 3);
            random_instance(Model::Uniform, n, m, 130_000 + i as u64)
        })
        .collect();
    let (mut ceei_seen, mut violations) = (0usize, 0usize);
    let results: Vec<(usize, usize)> = instances
        .par_iter()
        .map(|inst| {
            let mut seen = 0;
            let mut bad = 0;
            for allocation in enumerate_allocations(inst, BUDGET).unwrap() {
                if let Some(prices) = ceei_test(inst, &allocation, BUDGET).unwrap() {
                    seen += 1;
                    if !verify_ceei(inst, &allocation, &prices)
                        || !is_sequenceable(inst, &allocation)
                        || !is_envy_free(inst, &allocation)
                    {
                        bad += 1;
                    }
                }
            }
            (seen, bad)
        })
        .collect();
    for (seen, bad) in results {
        ceei_seen += seen;
        violations += bad;
    }
    assert_eq!(violations, 0);
    assert!(ceei_seen > 50, "only {ceei_seen} CEEI allocations sampled");
    println!(
        "criterion 12 PASS: {ceei_seen} CEEI allocations, all sequenceable and envy-free"
    );
}

#[test]
fn criterion_13_fairness_scale_chain() {
    let instances = sample_instances(140_000, 6);
    let violations: usize = instances
        .par_iter()
        .map(|inst| {
            let shares = FairShares::compute(inst, BUDGET).unwrap();
            let mut bad = 0;
            for allocation in enumerate_allocations(inst, BUDGET).unwrap() {
                let ef = is_envy_free(inst, &allocation);
                let min_max = shares.satisfies_min_max(inst, &allocation);
                let prop = shares.satisfies_proportionality(inst, &allocation);
                let max_min = shares.satisfies_max_min(inst, &allocation);
                if (ef && !min_max) || (min_max && !prop) || (prop && !max_min) {
                    bad += 1;
                }
                // The CEEI link of the chain, kept to the LP-friendly sizes.
                if inst.m() <= 5 && ceei_test(inst, &allocation, BUDGET).unwrap().is_some() && !ef {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    assert_eq!(violations, 0);
    println!("criterion 13 PASS: CEEI => EF => mFS => PFS => MFS with zero violations");
}

#[test]
fn criterion_14_normalization_changes_no_verdict() {
    let instances = sample_instances(150_000, 6);
    let violations: usize = instances
        .par_iter()
        .map(|inst| {
            let norm = inst.normalize().unwrap();
            let shares_raw = FairShares::compute(inst, BUDGET).unwrap();
            let shares_norm = FairShares::compute(&norm, BUDGET).unwrap();
            let mut bad = 0;
            for allocation in enumerate_allocations(inst, BUDGET).unwrap() {
                if efficiency_level(inst, &allocation, BUDGET).unwrap()
                    != efficiency_level(&norm, &allocation, BUDGET).unwrap()
                {
                    bad += 1;
                }
                if fairness_level(inst, &allocation, BUDGET).unwrap()
                    != fairness_level(&norm, &allocation, BUDGET).unwrap()
                {
                    bad += 1;
                }
                if shares_raw.satisfies_proportionality(inst, &allocation)
                    != shares_norm.satisfies_proportionality(&norm, &allocation)
                    || shares_raw.satisfies_min_max(inst, &allocation)
                        != shares_norm.satisfies_min_max(&norm, &allocation)
                    || shares_raw.satisfies_max_min(inst, &allocation)
                        != shares_norm.satisfies_max_min(&norm, &allocation)
                {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    assert_eq!(violations, 0);
    println!("criterion 14 PASS: classification is invariant under row normalization");
}

fn experiment_config(model: Model) -> GeneratorConfig {
    GeneratorConfig {
        model,
        agents: 3,
        objects: 8,
        weight_cap: 100,
        seed: 42,
        count: 50,
    }
}

#[test]
fn criterion_15_uniform_experiment_reproduction() {
    let config = experiment_config(Model::Uniform);
    let (summary, _) = run_experiment(&config, BUDGET, false).unwrap();

    assert_eq!(summary.matrices.len(), 50);
    for matrix in &summary.matrices {
        assert_eq!(matrix.total(), 6561);
        assert_eq!(matrix.cell(FairnessLevel::Ceei, EfficiencyLevel::SwapOptimal), 0);
        assert_eq!(matrix.cell(FairnessLevel::Ceei, EfficiencyLevel::None), 0);
    }
    // The (none, none) cell carries the largest mean count.
    let none_none = summary
        .cell(FairnessLevel::None, EfficiencyLevel::None)
        .mean
        .clone();
    for cell in &summary.cells {
        if cell.fairness != FairnessLevel::None || cell.efficiency != EfficiencyLevel::None {
            assert!(
                cell.mean < none_none,
                "cell ({}, {}) mean {} >= (none, none) mean {}",
                cell.fairness,
                cell.efficiency,
                cell.mean,
                none_none
            );
        }
    }

    // Byte-for-byte determinism of every emitted table.
    let (again, _) = run_experiment(&config, BUDGET, false).unwrap();
    assert_eq!(per_instance_csv(&summary), per_instance_csv(&again));
    assert_eq!(summary_csv(&summary), summary_csv(&again));
    assert_eq!(plot_table(&summary), plot_table(&again));
    println!(
        "criterion 15 PASS: 50 uniform instances; (none,none) dominates; CEEI rows confined; deterministic"
    );
}

#[test]
fn criterion_16_single_peaked_experiment_reproduction() {
    let config = experiment_config(Model::SinglePeaked);
    let (summary, _) = run_experiment(&config, BUDGET, false).unwrap();

    assert_eq!(summary.matrices.len(), 50);
    for matrix in &summary.matrices {
        assert_eq!(matrix.total(), 6561);
        assert_eq!(matrix.cell(FairnessLevel::Ceei, EfficiencyLevel::SwapOptimal), 0);
        assert_eq!(matrix.cell(FairnessLevel::Ceei, EfficiencyLevel::None), 0);
        // Single-peaked: swap-optimal collapses into sequenceable, so the
        // SwapOptimal column is empty at every fairness level.
        for fairness in FairnessLevel::ALL {
            assert_eq!(matrix.cell(fairness, EfficiencyLevel::SwapOptimal), 0);
        }
    }
    println!("criterion 16 PASS: 50 single-peaked instances; swap-optimal column empty everywhere");
}
