//! Symmetric chain decomposition of the subset lattice by bracket matching:
//! members read as closing brackets, non-members as opening brackets; a
//! chain grows by closing the leftmost unmatched open position. The chains
//! partition the lattice into `C(n, floor(n/2))` saturated chains whose
//! minimum and maximum sizes are symmetric about `n/2`.

use crate::lattice::{middle_layer_size, LatticeError, Subset};
use num_bigint::BigUint;
use thiserror::Error;

/// Output size is `2^n`; keep it desk-scale.
pub const SCD_GROUND_LIMIT: u32 = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScdError {
    #[error("ground size {0} exceeds the decomposition limit {SCD_GROUND_LIMIT}")]
    GroundTooLarge(u32),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug)]
pub struct SymChainDecomp {
    n: u32,
    chains: Vec<Vec<Subset>>,
}

impl SymChainDecomp {
    pub fn ground(&self) -> u32 {
        self.n
    }

    pub fn chains(&self) -> &[Vec<Subset>] {
        &self.chains
    }

    /// Index of the chain containing each mask.
    pub fn chain_index_map(&self) -> std::collections::HashMap<u64, usize> {
        let mut map = std::collections::HashMap::new();
        for (i, chain) in self.chains.iter().enumerate() {
            for s in chain {
                map.insert(s.mask(), i);
            }
        }
        map
    }

    /// Checks the decomposition invariants exactly: partition of the full
    /// lattice, saturated chains, symmetric end sizes, and chain count
    /// `C(n, floor(n/2))`.
    pub fn validate(&self) -> bool {
        let n = self.n;
        let mut seen = vec![false; 1usize << n];
        for chain in &self.chains {
            if chain.is_empty() {
                return false;
            }
            let lo = chain.first().unwrap().size();
            let hi = chain.last().unwrap().size();
            if lo + hi != n {
                return false;
            }
            for (i, s) in chain.iter().enumerate() {
                if s.size() != lo + i as u32 {
                    return false;
                }
                if i > 0 && !chain[i - 1].is_proper_subset_of(s) {
                    return false;
                }
                if seen[s.mask() as usize] {
                    return false;
                }
                seen[s.mask() as usize] = true;
            }
        }
        seen.iter().all(|&b| b) && BigUint::from(self.chains.len()) == middle_layer_size(n as u64)
    }
}

/// Unmatched close count and the mask of unmatched open positions for the
/// bracket string of `mask` (bit set = close).
fn bracket_state(mask: u64, n: u32) -> (u32, u64) {
    let mut open_stack = 0u64;
    let mut unmatched_close = 0u32;
    for i in 0..n {
        if mask >> i & 1 == 1 {
            if open_stack != 0 {
                // Pop the nearest unmatched open (highest set bit).
                let top = 63 - open_stack.leading_zeros();
                open_stack ^= 1 << top;
            } else {
                unmatched_close += 1;
            }
        } else {
            open_stack |= 1 << i;
        }
    }
    (unmatched_close, open_stack)
}

pub fn scd_decompose(n: u32) -> Result<SymChainDecomp, ScdError> {
    if n > SCD_GROUND_LIMIT {
        return Err(ScdError::GroundTooLarge(n));
    }
    let mut chains = Vec::new();
    for bottom in 0..1u64 << n {
        let (closes, _) = bracket_state(bottom, n);
        if closes != 0 {
            continue; // not a chain bottom
        }
        let mut chain = Vec::new();
        let mut cur = bottom;
        loop {
            chain.push(Subset::new(n, cur)?);
            let (_, opens) = bracket_state(cur, n);
            if opens == 0 {
                break;
            }
            cur |= opens & opens.wrapping_neg(); // leftmost unmatched open
        }
        chains.push(chain);
    }
    Ok(SymChainDecomp { n, chains })
}

/// The chains of the decomposition that pass through the layer of size `k`,
/// exactly `C(n, k)` of them.
pub fn chains_through_layer(scd: &SymChainDecomp, k: u32) -> Vec<&Vec<Subset>> {
    scd.chains()
        .iter()
        .filter(|c| {
            let lo = c.first().unwrap().size();
            let hi = c.last().unwrap().size();
            lo <= k && k <= hi
        })
        .collect()
}
