//! The classification experiment: generate instances, classify every
//! allocation of each one on the fairness and efficiency scales, and emit
//! per-instance counts, cross-instance summary statistics and plot data.

use std::fmt::Write as _;

use rayon::prelude::*;

use fairdiv_core::allocation::enumerate_allocations;
use fairdiv_core::deals::{is_cycle_optimal, DealStrength};
use fairdiv_core::efficiency::{pareto_flags, EfficiencyLevel};
use fairdiv_core::fairness::{ceei_test, is_envy_free, FairShares, FairnessLevel};
use fairdiv_core::generate::{generate, GeneratorConfig};
use fairdiv_core::rational::{format_decimal, Rational};
use fairdiv_core::sequences::is_sequenceable;
use fairdiv_core::{allocation_count, Error, Instance, Result};

/// How one allocation landed on both scales.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationRecord {
    pub allocation: String,
    pub fairness: FairnessLevel,
    pub efficiency: EfficiencyLevel,
}

/// 6 x 4 grid counting one instance's allocations by (highest fairness,
/// highest efficiency) level. The total over all cells is `n^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationMatrix {
    pub instance_id: usize,
    counts: [[u64; 4]; 6],
}

impl ClassificationMatrix {
    fn new(instance_id: usize) -> Self {
        ClassificationMatrix {
            instance_id,
            counts: [[0; 4]; 6],
        }
    }

    pub fn cell(&self, fairness: FairnessLevel, efficiency: EfficiencyLevel) -> u64 {
        self.counts[fairness.index()][efficiency.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

/// Classifies every allocation of `instance` (after normalization, which
/// changes no verdict). Returns the cell counts and, on request, the
/// per-allocation records backing them.
pub fn classify_instance(
    instance: &Instance,
    instance_id: usize,
    budget: u64,
    keep_records: bool,
) -> Result<(ClassificationMatrix, Vec<AllocationRecord>)> {
    let norm = instance.normalize()?;
    let allocations: Vec<_> = enumerate_allocations(&norm, budget)?.collect();
    let pareto = pareto_flags(&norm, &allocations);
    let shares = FairShares::compute(&norm, budget)?;

    let mut matrix = ClassificationMatrix::new(instance_id);
    let mut records = Vec::with_capacity(if keep_records { allocations.len() } else { 0 });
    let swap_cap = norm.n().min(2);

    for (idx, allocation) in allocations.iter().enumerate() {
        let sequenceable = is_sequenceable(&norm, allocation);
        let efficiency = if pareto[idx] {
            EfficiencyLevel::ParetoOptimal
        } else if sequenceable {
            EfficiencyLevel::Sequenceable
        } else if is_cycle_optimal(&norm, allocation, swap_cap, 1, DealStrength::Strict) {
            EfficiencyLevel::SwapOptimal
        } else {
            EfficiencyLevel::None
        };

        // The CEEI price search (an LP) only runs on allocations that are
        // envy-free and sequenceable: a CEEI allocation could afford every
        // other agent's bundle (so it is envy-free) and admits no strictly
        // improving cycle (so it is sequenceable). The acceptance suite
        // checks both implications against the ungated test.
        let fairness = if is_envy_free(&norm, allocation) {
            if sequenceable && ceei_test(&norm, allocation, budget)?.is_some() {
                FairnessLevel::Ceei
            } else {
                FairnessLevel::EnvyFree
            }
        } else if shares.satisfies_min_max(&norm, allocation) {
            FairnessLevel::MinMaxShare
        } else if shares.satisfies_proportionality(&norm, allocation) {
            FairnessLevel::Proportional
        } else if shares.satisfies_max_min(&norm, allocation) {
            FairnessLevel::MaxMinShare
        } else {
            FairnessLevel::None
        };

        matrix.counts[fairness.index()][efficiency.index()] += 1;
        if keep_records {
            records.push(AllocationRecord {
                allocation: allocation.to_string(),
                fairness,
                efficiency,
            });
        }
    }
    debug_assert_eq!(matrix.total() as u128, allocation_count(norm.n(), norm.m()));
    Ok((matrix, records))
}

/// Cross-instance statistics for one (fairness, efficiency) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellStats {
    pub fairness: FairnessLevel,
    pub efficiency: EfficiencyLevel,
    pub min: u64,
    pub max: u64,
    pub mean: Rational,
    /// Share of this cell among all allocations at the same fairness level,
    /// totalled over instances; zero when the level never occurs.
    pub proportion: Rational,
}

/// Summary over all classified instances, plus an echo of the run config.
#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub config: GeneratorConfig,
    pub matrices: Vec<ClassificationMatrix>,
    pub cells: Vec<CellStats>,
}

impl ExperimentSummary {
    pub fn cell(&self, fairness: FairnessLevel, efficiency: EfficiencyLevel) -> &CellStats {
        &self.cells[fairness.index() * EfficiencyLevel::ALL.len() + efficiency.index()]
    }
}

fn summarize(config: &GeneratorConfig, matrices: Vec<ClassificationMatrix>) -> ExperimentSummary {
    let count = Rational::from_integer((matrices.len() as i64).into());
    let mut cells = Vec::new();
    for fairness in FairnessLevel::ALL {
        let level_total: u64 = matrices
            .iter()
            .map(|m| {
                EfficiencyLevel::ALL
                    .iter()
                    .map(|&e| m.cell(fairness, e))
                    .sum::<u64>()
            })
            .sum();
        for efficiency in EfficiencyLevel::ALL {
            let values: Vec<u64> = matrices.iter().map(|m| m.cell(fairness, efficiency)).collect();
            let total: u64 = values.iter().sum();
            let proportion = if level_total == 0 {
                Rational::from_integer(0.into())
            } else {
                Rational::new((total as i64).into(), (level_total as i64).into())
            };
            cells.push(CellStats {
                fairness,
                efficiency,
                min: values.iter().copied().min().unwrap_or(0),
                max: values.iter().copied().max().unwrap_or(0),
                mean: Rational::new((total as i64).into(), 1.into()) / &count,
                proportion,
            });
        }
    }
    ExperimentSummary {
        config: config.clone(),
        matrices,
        cells,
    }
}

/// Runs the experiment: generates `config.count` instances, classifies all
/// `n^m` allocations of each (instances dispatched across threads; results
/// are assembled in instance order so output is independent of scheduling).
pub fn run_experiment(
    config: &GeneratorConfig,
    budget: u64,
    keep_records: bool,
) -> Result<(ExperimentSummary, Vec<Vec<AllocationRecord>>)> {
    // Fail on capacity before doing any work at all.
    let required = allocation_count(config.agents, config.objects);
    if required > budget as u128 {
        return Err(Error::Capacity {
            required,
            budget,
        });
    }
    let ceei_constraints = (config.agents as u128) << config.objects;
    if ceei_constraints > budget as u128 {
        return Err(Error::Capacity {
            required: ceei_constraints,
            budget,
        });
    }

    let instances = generate(config)?;
    let classified: Result<Vec<_>> = instances
        .par_iter()
        .enumerate()
        .map(|(id, instance)| classify_instance(instance, id, budget, keep_records))
        .collect();
    let classified = classified?;

    let mut matrices = Vec::with_capacity(classified.len());
    let mut records = Vec::with_capacity(classified.len());
    for (matrix, recs) in classified {
        matrices.push(matrix);
        records.push(recs);
    }
    Ok((summarize(config, matrices), records))
}

/// Per-instance CSV: `instance_id,fairness,efficiency,count`, all 24 cells
/// per instance in scale order.
pub fn per_instance_csv(summary: &ExperimentSummary) -> String {
    let mut out = String::from("instance_id,fairness,efficiency,count\n");
    for matrix in &summary.matrices {
        for fairness in FairnessLevel::ALL {
            for efficiency in EfficiencyLevel::ALL {
                writeln!(
                    out,
                    "{},{},{},{}",
                    matrix.instance_id,
                    fairness.label(),
                    efficiency.label(),
                    matrix.cell(fairness, efficiency)
                )
                .unwrap();
            }
        }
    }
    out
}

/// Summary CSV with exact rational means and per-fairness-level efficiency
/// proportions.
pub fn summary_csv(summary: &ExperimentSummary) -> String {
    let mut out = String::from("fairness,efficiency,min,mean,max,proportion\n");
    for cell in &summary.cells {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            cell.fairness.label(),
            cell.efficiency.label(),
            cell.min,
            cell.mean,
            cell.max,
            cell.proportion
        )
        .unwrap();
    }
    out
}

/// Whitespace-separated table for generic plotting tools; means and
/// proportions as decimals (the exact values live in the summary CSV).
pub fn plot_table(summary: &ExperimentSummary) -> String {
    let mut out = String::from("# fairness efficiency min mean max proportion\n");
    for cell in &summary.cells {
        writeln!(
            out,
            "{} {} {} {} {} {}",
            cell.fairness.label(),
            cell.efficiency.label(),
            cell.min,
            format_decimal(&cell.mean, 6),
            cell.max,
            format_decimal(&cell.proportion, 6),
        )
        .unwrap();
    }
    out
}

/// Raw per-allocation dump: `instance_id,allocation,fairness,efficiency`.
pub fn dump_csv(records: &[Vec<AllocationRecord>]) -> String {
    let mut out = String::from("instance_id,allocation,fairness,efficiency\n");
    for (id, instance_records) in records.iter().enumerate() {
        for record in instance_records {
            writeln!(
                out,
                "{},{},{},{}",
                id,
                record.allocation,
                record.fairness.label(),
                record.efficiency.label()
            )
            .unwrap();
        }
    }
    out
}
