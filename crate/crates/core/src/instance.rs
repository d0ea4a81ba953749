//! Allocation problem instances: agents, objects and an additive weight
//! matrix, together with the preference-domain predicates (strictness,
//! same-order, single-peakedness) and row normalization.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::allocation::Allocation;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

/// An additive resource-allocation instance: `n` agents, `m` objects and a
/// non-negative `n × m` weight matrix. Agent `i`'s utility for a bundle is
/// the sum of her weights over the bundle's objects.
///
/// Instances are immutable after construction; all methods are pure and safe
/// to call from many threads.
#[derive(Debug, Clone)]
pub struct Instance {
    weights: Vec<Vec<Rational>>,
    axis: Option<Vec<usize>>,
    scaled: OnceLock<Scaled>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights && self.axis == other.axis
    }
}

impl Eq for Instance {}

/// Integer view of the weight matrix: row `i` scaled by the lcm of its
/// denominators. Per-agent comparisons of weights and bundle utilities are
/// order-isomorphic to the rational ones, so every comparison-based
/// algorithm runs on plain big integers.
#[derive(Debug, Clone)]
pub(crate) struct Scaled {
    pub rows: Vec<Vec<BigInt>>,
    pub denoms: Vec<BigInt>,
}

impl Scaled {
    fn from_weights(weights: &[Vec<Rational>]) -> Self {
        let mut rows = Vec::with_capacity(weights.len());
        let mut denoms = Vec::with_capacity(weights.len());
        for row in weights {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
            rows.push(
                row.iter()
                    .map(|w| w.numer() * (&lcm / w.denom()))
                    .collect(),
            );
            denoms.push(lcm);
        }
        Scaled { rows, denoms }
    }

    /// Scaled utility of `agent` for the objects selected by `bundle`.
    pub fn bundle_utility<I: IntoIterator<Item = usize>>(&self, agent: usize, bundle: I) -> BigInt {
        let row = &self.rows[agent];
        bundle.into_iter().fold(BigInt::zero(), |acc, k| acc + &row[k])
    }
}

impl Instance {
    /// Builds an instance from a rectangular, non-negative weight matrix.
    pub fn new(weights: Vec<Vec<Rational>>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Domain("instance needs at least one agent".into()));
        }
        let m = weights[0].len();
        if m == 0 {
            return Err(Error::Domain("instance needs at least one object".into()));
        }
        for (i, row) in weights.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Domain(format!(
                    "weight matrix is not rectangular: row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    m
                )));
            }
            if let Some(w) = row.iter().find(|w| w.is_negative()) {
                return Err(Error::Domain(format!(
                    "negative weight {} in row {}",
                    w,
                    i + 1
                )));
            }
        }
        Ok(Instance {
            weights,
            axis: None,
            scaled: OnceLock::new(),
        })
    }

    /// Convenience constructor from integer rows; panics on invalid input.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let weights = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&w| Rational::from_integer(BigInt::from(w)))
                    .collect()
            })
            .collect();
        Self::new(weights).expect("invalid integer weight matrix")
    }

    /// Attaches a single-peaked axis (a 0-based permutation of the objects).
    pub fn with_axis(mut self, axis: Vec<usize>) -> Result<Self> {
        check_permutation(&axis, self.m())?;
        self.axis = Some(axis);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn m(&self) -> usize {
        self.weights[0].len()
    }

    /// Weight given by `agent` to `object`.
    pub fn weight(&self, agent: usize, object: usize) -> &Rational {
        &self.weights[agent][object]
    }

    pub fn axis(&self) -> Option<&[usize]> {
        self.axis.as_deref()
    }

    pub(crate) fn scaled(&self) -> &Scaled {
        self.scaled
            .get_or_init(|| Scaled::from_weights(&self.weights))
    }

    fn check_agent(&self, agent: usize) -> Result<()> {
        if agent >= self.n() {
            return Err(Error::Index(format!(
                "agent {} out of range (instance has {} agents)",
                agent + 1,
                self.n()
            )));
        }
        Ok(())
    }

    fn check_object(&self, object: usize) -> Result<()> {
        if object >= self.m() {
            return Err(Error::Index(format!(
                "object {} out of range (instance has {} objects)",
                object + 1,
                self.m()
            )));
        }
        Ok(())
    }

    /// Exact utility of `agent` for a bundle of distinct objects.
    pub fn utility<I: IntoIterator<Item = usize>>(&self, agent: usize, bundle: I) -> Result<Rational> {
        self.check_agent(agent)?;
        let mut sum = Rational::zero();
        for k in bundle {
            self.check_object(k)?;
            sum += &self.weights[agent][k];
        }
        Ok(sum)
    }

    /// Utility of `agent` for the whole object set.
    pub fn total_utility(&self, agent: usize) -> Rational {
        self.weights[agent].iter().sum()
    }

    /// The subset of `objects` with maximal weight for `agent` (all ties).
    pub fn best_objects(&self, agent: usize, objects: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        self.check_agent(agent)?;
        if objects.is_empty() {
            return Err(Error::Domain(
                "best objects are undefined on an empty object set".into(),
            ));
        }
        for &k in objects {
            self.check_object(k)?;
        }
        let row = &self.scaled().rows[agent];
        let best = objects.iter().map(|&k| &row[k]).max().unwrap();
        Ok(objects.iter().copied().filter(|&k| &row[k] == best).collect())
    }

    /// True iff no agent holds any of her top objects within the
    /// sub-allocation's scope. Undefined (an error) on an empty scope.
    pub fn is_frustrating(&self, sub: &Allocation) -> Result<bool> {
        assert_eq!(sub.n(), self.n(), "allocation agent count mismatch");
        assert_eq!(sub.m(), self.m(), "allocation object count mismatch");
        let scope = sub.scope();
        if scope.is_empty() {
            return Err(Error::Domain(
                "frustration is undefined on an empty scope".into(),
            ));
        }
        for agent in 0..self.n() {
            let best = self.best_objects(agent, &scope)?;
            if best.iter().any(|&k| sub.owner(k) == Some(agent)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff every agent gives pairwise-distinct weights to the objects.
    pub fn is_strict_on_objects(&self) -> bool {
        self.scaled().rows.iter().all(|row| {
            let mut sorted: Vec<&BigInt> = row.iter().collect();
            sorted.sort();
            sorted.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// True iff every agent gives pairwise-distinct utilities to all 2^m
    /// bundles. Exponential in the number of objects.
    pub fn is_strict_on_shares(&self) -> bool {
        self.scaled().rows.iter().all(|row| {
            let mut sums = vec![BigInt::zero()];
            for w in row {
                let mut extended: Vec<BigInt> = sums.iter().map(|s| s + w).collect();
                sums.append(&mut extended);
            }
            sums.sort();
            sums.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// True iff some object order makes every agent's weights non-increasing.
    ///
    /// Decided pairwise: an object pair is in conflict when one agent
    /// strictly prefers `k` to `l` and another strictly prefers `l` to `k`;
    /// same-order preferences exist iff no pair conflicts.
    pub fn is_same_order(&self) -> bool {
        let rows = &self.scaled().rows;
        for k in 0..self.m() {
            for l in (k + 1)..self.m() {
                let mut k_over_l = false;
                let mut l_over_k = false;
                for row in rows {
                    match row[k].cmp(&row[l]) {
                        std::cmp::Ordering::Greater => k_over_l = true,
                        std::cmp::Ordering::Less => l_over_k = true,
                        std::cmp::Ordering::Equal => {}
                    }
                }
                if k_over_l && l_over_k {
                    return false;
                }
            }
        }
        true
    }

    /// True iff every agent's weights strictly increase along `axis` up to a
    /// unique peak and strictly decrease after it. Agents with tied top
    /// objects are rejected.
    pub fn is_single_peaked(&self, axis: &[usize]) -> Result<bool> {
        check_permutation(axis, self.m())?;
        let rows = &self.scaled().rows;
        for row in rows {
            let line: Vec<&BigInt> = axis.iter().map(|&k| &row[k]).collect();
            let top = line.iter().max().unwrap();
            if line.iter().filter(|w| *w == top).count() != 1 {
                return Ok(false);
            }
            let peak = line.iter().position(|w| w == top).unwrap();
            let rising = line[..=peak].windows(2).all(|w| w[0] < w[1]);
            let falling = line[peak..].windows(2).all(|w| w[0] > w[1]);
            if !rising || !falling {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Scales every row so it sums to 1. Per-agent positive scaling keeps all
    /// bundle-utility comparisons, hence every classification verdict.
    pub fn normalize(&self) -> Result<Instance> {
        let mut weights = Vec::with_capacity(self.n());
        for (i, row) in self.weights.iter().enumerate() {
            let total: Rational = row.iter().sum();
            if total.is_zero() {
                return Err(Error::Domain(format!(
                    "agent {} has an all-zero weight row; normalization needs a positive total",
                    i + 1
                )));
            }
            weights.push(row.iter().map(|w| w / &total).collect());
        }
        let inst = Instance::new(weights)?;
        match &self.axis {
            Some(axis) => inst.with_axis(axis.clone()),
            None => Ok(inst),
        }
    }

    /// Parses the instance text format: a `n m` header line, then `n` rows
    /// of `m` weights (integers or `p/q`), then an optional
    /// `axis: k1 ... km` line. `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Instance> {
        let mut lines = text
            .lines()
            .map(|line| match line.find('#') {
                Some(pos) => line[..pos].trim(),
                None => line.trim(),
            })
            .filter(|line| !line.is_empty());

        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty instance file".into()))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(Error::Parse(format!(
                "expected header `n m`, found `{header}`"
            )));
        }
        let n: usize = dims[0]
            .parse()
            .map_err(|_| Error::Parse(format!("invalid agent count `{}`", dims[0])))?;
        let m: usize = dims[1]
            .parse()
            .map_err(|_| Error::Parse(format!("invalid object count `{}`", dims[1])))?;

        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing weight row {}", i + 1)))?;
            let row: Vec<Rational> = line
                .split_whitespace()
                .map(parse_rational)
                .collect::<Result<_>>()?;
            if row.len() != m {
                return Err(Error::Parse(format!(
                    "weight row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    m
                )));
            }
            weights.push(row);
        }

        let mut axis = None;
        if let Some(line) = lines.next() {
            let rest = line
                .strip_prefix("axis:")
                .ok_or_else(|| Error::Parse(format!("unexpected trailing line `{line}`")))?;
            let parsed: Vec<usize> = rest
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .ok()
                        .and_then(|k| k.checked_sub(1))
                        .ok_or_else(|| Error::Parse(format!("invalid axis entry `{tok}`")))
                })
                .collect::<Result<_>>()?;
            axis = Some(parsed);
        }
        if let Some(line) = lines.next() {
            return Err(Error::Parse(format!("unexpected trailing line `{line}`")));
        }

        let inst = Instance::new(weights).map_err(|e| Error::Parse(e.to_string()))?;
        match axis {
            Some(axis) => inst
                .with_axis(axis)
                .map_err(|e| Error::Parse(e.to_string())),
            None => Ok(inst),
        }
    }

    /// Renders the instance in the text format accepted by [`Instance::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for row in &self.weights {
            let tokens: Vec<String> = row.iter().map(|w| w.to_string()).collect();
            out.push_str(&tokens.join(" "));
            out.push('\n');
        }
        if let Some(axis) = &self.axis {
            let tokens: Vec<String> = axis.iter().map(|k| (k + 1).to_string()).collect();
            out.push_str("axis: ");
            out.push_str(&tokens.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn check_permutation(axis: &[usize], m: usize) -> Result<()> {
    if axis.len() != m {
        return Err(Error::Domain(format!(
            "axis has {} entries, expected {}",
            axis.len(),
            m
        )));
    }
    let mut seen = vec![false; m];
    for &k in axis {
        if k >= m || seen[k] {
            return Err(Error::Domain(format!(
                "axis is not a permutation of 1..{m}"
            )));
        }
        seen[k] = true;
    }
    Ok(())
}
