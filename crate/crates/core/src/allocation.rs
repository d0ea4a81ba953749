//! Allocations and sub-allocations of objects to agents, plus exhaustive
//! enumeration of all full allocations.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::instance::Instance;

/// A (sub-)allocation: each object is owned by at most one agent. Bundles
/// are pairwise disjoint by construction, and the scope is exactly the set
/// of owned objects. An allocation is *full* when every object is owned.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Allocation {
    n: usize,
    owner: Vec<Option<usize>>,
}

impl Allocation {
    /// Full allocation from an owner vector (`owners[k]` = agent of object `k`).
    pub fn full(n: usize, owners: Vec<usize>) -> Result<Self> {
        if owners.is_empty() {
            return Err(Error::Domain("allocation needs at least one object".into()));
        }
        if let Some(&bad) = owners.iter().find(|&&i| i >= n) {
            return Err(Error::Index(format!(
                "agent {} out of range (allocation has {} agents)",
                bad + 1,
                n
            )));
        }
        Ok(Allocation {
            n,
            owner: owners.into_iter().map(Some).collect(),
        })
    }

    /// (Sub-)allocation from per-agent bundles over `m` objects; objects not
    /// listed in any bundle stay unowned.
    pub fn from_bundles(n: usize, m: usize, bundles: &[Vec<usize>]) -> Result<Self> {
        if bundles.len() != n {
            return Err(Error::Domain(format!(
                "expected {} bundles, found {}",
                n,
                bundles.len()
            )));
        }
        let mut owner = vec![None; m];
        for (agent, bundle) in bundles.iter().enumerate() {
            for &k in bundle {
                if k >= m {
                    return Err(Error::Index(format!(
                        "object {} out of range (instance has {} objects)",
                        k + 1,
                        m
                    )));
                }
                if owner[k].is_some() {
                    return Err(Error::Domain(format!(
                        "object {} allocated to more than one agent",
                        k + 1
                    )));
                }
                owner[k] = Some(agent);
            }
        }
        Ok(Allocation { n, owner })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.owner.len()
    }

    /// Owner of `object`, if it is in scope.
    pub fn owner(&self, object: usize) -> Option<usize> {
        self.owner[object]
    }

    pub fn is_full(&self) -> bool {
        self.owner.iter().all(Option::is_some)
    }

    /// Agent `agent`'s bundle.
    pub fn bundle(&self, agent: usize) -> BTreeSet<usize> {
        self.bundle_iter(agent).collect()
    }

    pub fn bundle_iter(&self, agent: usize) -> impl Iterator<Item = usize> + '_ {
        self.owner
            .iter()
            .enumerate()
            .filter(move |(_, o)| **o == Some(agent))
            .map(|(k, _)| k)
    }

    pub fn bundle_size(&self, agent: usize) -> usize {
        self.bundle_iter(agent).count()
    }

    /// All `(object, owner)` pairs in scope.
    pub fn iter_owned(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.owner
            .iter()
            .enumerate()
            .filter_map(|(k, o)| o.map(|agent| (k, agent)))
    }

    /// Objects covered by this (sub-)allocation.
    pub fn scope(&self) -> BTreeSet<usize> {
        self.owner
            .iter()
            .enumerate()
            .filter(|(_, o)| o.is_some())
            .map(|(k, _)| k)
            .collect()
    }

    pub fn scope_len(&self) -> usize {
        self.owner.iter().filter(|o| o.is_some()).count()
    }

    /// Sub-allocation keeping only the given objects.
    pub fn restricted(&self, objects: &BTreeSet<usize>) -> Allocation {
        let owner = self
            .owner
            .iter()
            .enumerate()
            .map(|(k, o)| if objects.contains(&k) { *o } else { None })
            .collect();
        Allocation { n: self.n, owner }
    }

    /// Parses the `1,4|2|3` text form: one `|`-separated segment per agent,
    /// each a comma list of 1-based object indices (empty segment = empty
    /// bundle). The result may be partial; see [`Allocation::parse_full`].
    pub fn parse(text: &str, n: usize, m: usize) -> Result<Self> {
        let segments: Vec<&str> = text.split('|').collect();
        if segments.len() != n {
            return Err(Error::Parse(format!(
                "allocation `{text}` has {} bundles, expected {} (one per agent)",
                segments.len(),
                n
            )));
        }
        let mut bundles = Vec::with_capacity(n);
        for segment in segments {
            let mut bundle = Vec::new();
            for token in segment.split(',') {
                let token = token.trim();
                if token.is_empty() {
                    continue;
                }
                let k: usize = token
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid object index `{token}`")))?;
                if k == 0 || k > m {
                    return Err(Error::Parse(format!(
                        "object index `{token}` out of range 1..{m}"
                    )));
                }
                bundle.push(k - 1);
            }
            bundles.push(bundle);
        }
        Self::from_bundles(n, m, &bundles).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Like [`Allocation::parse`] but requires every object to be allocated.
    pub fn parse_full(text: &str, n: usize, m: usize) -> Result<Self> {
        let alloc = Self::parse(text, n, m)?;
        if !alloc.is_full() {
            let missing: Vec<String> = (0..m)
                .filter(|&k| alloc.owner(k).is_none())
                .map(|k| (k + 1).to_string())
                .collect();
            return Err(Error::Parse(format!(
                "allocation `{text}` leaves objects {{{}}} unallocated",
                missing.join(",")
            )));
        }
        Ok(alloc)
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for agent in 0..self.n {
            if agent > 0 {
                f.write_str("|")?;
            }
            let objs: Vec<String> = self.bundle_iter(agent).map(|k| (k + 1).to_string()).collect();
            f.write_str(&objs.join(","))?;
        }
        Ok(())
    }
}

/// Number of full allocations (`n^m`), saturating at `u128::MAX`.
pub fn allocation_count(n: usize, m: usize) -> u128 {
    let mut count: u128 = 1;
    for _ in 0..m {
        count = count.saturating_mul(n as u128);
    }
    count
}

/// Checks `n^m` against the enumeration budget.
pub(crate) fn check_enum_budget(n: usize, m: usize, budget: u64) -> Result<()> {
    let required = allocation_count(n, m);
    if required > budget as u128 {
        return Err(Error::Capacity { required, budget });
    }
    Ok(())
}

/// Streams all `n^m` full allocations of `instance` in a fixed order:
/// a base-`n` counter over owner vectors with object 1 varying slowest.
pub fn enumerate_allocations(
    instance: &Instance,
    budget: u64,
) -> Result<AllocationEnumeration> {
    check_enum_budget(instance.n(), instance.m(), budget)?;
    Ok(AllocationEnumeration::new(instance.n(), instance.m()))
}

/// Iterator over all full allocations for a given shape.
#[derive(Debug, Clone)]
pub struct AllocationEnumeration {
    n: usize,
    next: Option<Vec<usize>>,
}

impl AllocationEnumeration {
    fn new(n: usize, m: usize) -> Self {
        AllocationEnumeration {
            n,
            next: Some(vec![0; m]),
        }
    }

    /// Stream positioned at a given index of the enumeration order; allows
    /// carving independent sub-streams for parallel consumers.
    pub fn starting_at(instance: &Instance, index: u128) -> Self {
        let (n, m) = (instance.n(), instance.m());
        if index >= allocation_count(n, m) {
            return AllocationEnumeration { n, next: None };
        }
        // Decode base-n, object 1 most significant.
        let mut owners = vec![0; m];
        let mut rest = index;
        for k in (0..m).rev() {
            owners[k] = (rest % n as u128) as usize;
            rest /= n as u128;
        }
        AllocationEnumeration {
            n,
            next: Some(owners),
        }
    }
}

impl Iterator for AllocationEnumeration {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        let owners = self.next.take()?;
        let item = Allocation {
            n: self.n,
            owner: owners.iter().map(|&i| Some(i)).collect(),
        };
        // Odometer increment, least significant digit last.
        let mut owners = owners;
        for k in (0..owners.len()).rev() {
            if owners[k] + 1 < self.n {
                owners[k] += 1;
                self.next = Some(owners);
                return Some(item);
            }
            owners[k] = 0;
        }
        Some(item)
    }
}
