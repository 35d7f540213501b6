use std::fmt;

use serde::{Deserialize, Serialize};

use super::AGE_GROUPS;

pub const STRATEGY_COUNT: usize = 1 << AGE_GROUPS;

/// Which age groups receive vaccine, ordered pre-school, school-age, young
/// adult, older adult, elderly.
///
/// The index of a strategy is the tuple read as a binary number with the
/// pre-school flag as the most significant bit, so index 8 is school-age only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VaccineStrategy {
    pub allocate: [bool; AGE_GROUPS],
}

impl VaccineStrategy {
    pub fn from_index(index: usize) -> Option<VaccineStrategy> {
        if index >= STRATEGY_COUNT {
            return None;
        }
        let mut allocate = [false; AGE_GROUPS];
        for (g, slot) in allocate.iter_mut().enumerate() {
            *slot = (index >> (AGE_GROUPS - 1 - g)) & 1 == 1;
        }
        Some(VaccineStrategy { allocate })
    }

    pub fn index(&self) -> usize {
        self.allocate.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }
}

impl fmt::Display for VaccineStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: Vec<&str> = self.allocate.iter().map(|&b| if b { "1" } else { "0" }).collect();
        write!(f, "<{}>", bits.join(","))
    }
}

pub fn enumerate_strategies() -> Vec<VaccineStrategy> {
    (0..STRATEGY_COUNT).filter_map(VaccineStrategy::from_index).collect()
}

/// Splits `doses` over the selected groups in proportion to group size, using
/// largest-remainder rounding and never exceeding a group's size.
pub fn allocate_doses(
    strategy: &VaccineStrategy,
    doses: u64,
    group_sizes: &[u64; AGE_GROUPS],
) -> [u64; AGE_GROUPS] {
    let mut alloc = [0u64; AGE_GROUPS];
    let selected: Vec<usize> = (0..AGE_GROUPS).filter(|&g| strategy.allocate[g] && group_sizes[g] > 0).collect();
    let pool: u64 = selected.iter().map(|&g| group_sizes[g]).sum();
    if pool == 0 || doses == 0 {
        return alloc;
    }
    if doses >= pool {
        for &g in &selected {
            alloc[g] = group_sizes[g];
        }
        return alloc;
    }

    // exact integer quotas: doses * size / pool, remainders ranked for the leftovers
    let mut remainders = Vec::with_capacity(selected.len());
    let mut assigned = 0;
    for &g in &selected {
        let num = u128::from(doses) * u128::from(group_sizes[g]);
        let q = (num / u128::from(pool)) as u64;
        alloc[g] = q;
        assigned += q;
        remainders.push((num % u128::from(pool), g));
    }
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, g) in remainders.iter().take((doses - assigned) as usize) {
        alloc[g] += 1;
    }
    alloc
}
