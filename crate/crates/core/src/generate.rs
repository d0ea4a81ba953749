//! Random instance generation: uniform integer weights, and single-peaked
//! profiles built by placing sorted weights around a random peak.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::Rational;

/// Weight-generation model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Each weight i.i.d. uniform on the integers `0..=weight_cap`.
    Uniform,
    /// Per-agent distinct weights arranged single-peaked along the identity
    /// axis.
    SinglePeaked,
}

impl Model {
    pub fn label(&self) -> &'static str {
        match self {
            Model::Uniform => "uniform",
            Model::SinglePeaked => "single-peaked",
        }
    }
}

/// Configuration for [`generate`]. Generation is a pure function of the
/// config: identical configs give bitwise-identical instance lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub model: Model,
    pub agents: usize,
    pub objects: usize,
    pub weight_cap: u32,
    pub seed: u64,
    pub count: usize,
}

impl GeneratorConfig {
    fn validate(&self) -> Result<()> {
        if self.agents == 0 || self.objects == 0 {
            return Err(Error::Domain("need at least one agent and one object".into()));
        }
        if self.weight_cap == 0 {
            return Err(Error::Domain("weight cap must be at least 1".into()));
        }
        if self.count == 0 {
            return Err(Error::Domain("instance count must be at least 1".into()));
        }
        if self.model == Model::SinglePeaked && (self.weight_cap as usize) + 1 < self.objects {
            return Err(Error::Domain(format!(
                "single-peaked generation needs {} distinct weights but only {} values are available",
                self.objects,
                self.weight_cap as usize + 1
            )));
        }
        Ok(())
    }
}

/// RNG for instance `index` under master seed `seed`. Each instance gets an
/// independent stream, so generation order (and any parallel dispatch over
/// instances) cannot change the output.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&index.to_le_bytes());
    ChaCha20Rng::from_seed(bytes)
}

/// Generates `config.count` instances. Single-peaked instances carry the
/// identity axis as metadata and always pass
/// [`Instance::is_single_peaked`](crate::Instance::is_single_peaked) on it.
pub fn generate(config: &GeneratorConfig) -> Result<Vec<Instance>> {
    config.validate()?;
    (0..config.count)
        .map(|index| generate_one(config, index as u64))
        .collect()
}

fn generate_one(config: &GeneratorConfig, index: u64) -> Result<Instance> {
    let mut rng = instance_rng(config.seed, index);
    let mut weights = Vec::with_capacity(config.agents);
    for _ in 0..config.agents {
        let row = match config.model {
            Model::Uniform => (0..config.objects)
                .map(|_| rng.random_range(0..=config.weight_cap))
                .collect(),
            Model::SinglePeaked => single_peaked_row(config, &mut rng),
        };
        weights.push(
            row.into_iter()
                .map(|w| Rational::from_integer(BigInt::from(w)))
                .collect(),
        );
    }
    let inst = Instance::new(weights)?;
    match config.model {
        Model::Uniform => Ok(inst),
        Model::SinglePeaked => inst.with_axis((0..config.objects).collect()),
    }
}

/// Draws `m` pairwise-distinct weights (duplicates are re-drawn, since
/// single-peakedness needs strict comparisons around the peak), sorts them
/// descending, drops the largest at a uniform peak position and then keeps
/// attaching the next-largest weight to a uniformly chosen free end of the
/// occupied interval.
fn single_peaked_row(config: &GeneratorConfig, rng: &mut ChaCha20Rng) -> Vec<u32> {
    let m = config.objects;
    let mut values: Vec<u32> = Vec::with_capacity(m);
    while values.len() < m {
        let draw = rng.random_range(0..=config.weight_cap);
        if !values.contains(&draw) {
            values.push(draw);
        }
    }
    values.sort_unstable_by(|a, b| b.cmp(a));

    let mut row = vec![0u32; m];
    let peak = rng.random_range(0..m);
    row[peak] = values[0];
    let (mut lo, mut hi) = (peak, peak);
    for &value in &values[1..] {
        let can_left = lo > 0;
        let can_right = hi + 1 < m;
        let go_left = match (can_left, can_right) {
            (true, true) => rng.random_range(0..2u32) == 0,
            (true, false) => true,
            (false, true) => false,
            (false, false) => unreachable!("interval already covers the axis"),
        };
        if go_left {
            lo -= 1;
            row[lo] = value;
        } else {
            hi += 1;
            row[hi] = value;
        }
    }
    row
}
