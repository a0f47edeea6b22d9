//! Exact extremal numbers for diamond-free families on small ground sets:
//! exhaustive enumeration, a depth-first branch-and-bound with chain-capacity
//! pruning, the two-middle-layers lower-bound construction, and the balanced
//! pair/triple local construction with its exact chain-count guarantee.

use crate::census::{chain_census, CensusError};
use crate::lattice::{binom, factorial, layer, middle_layer_size, Family, LatticeError};
use crate::local::{validate_local, LocalError, LocalFamily};
use crate::pattern::{contains_pattern, PosetPattern};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("exhaustive search supports n <= {1}, got {0}")]
    BruteForceTooLarge(u32, u32),
    #[error("branch and bound supports n <= {1}, got {0}")]
    BnbTooLarge(u32, u32),
    #[error("construction requires an even ground size >= 4, got {0}")]
    BadBalancedGround(u32),
    #[error("exact chain check supports even m in 4..=12, got {0}")]
    BalancedCheckRange(u32),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub const BRUTE_FORCE_LIMIT: u32 = 4;
pub const BNB_LIMIT: u32 = 8;

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub n: u32,
    pub best_size: usize,
    pub best_family: Family,
    pub nodes_expanded: u64,
    pub proved_optimal: bool,
    pub wall_time: Duration,
}

fn verify_result_family(f: &Family) {
    // Re-verification goes through the generic pattern matcher, independent
    // of the incremental detection used during the search.
    assert!(
        contains_pattern(f, &PosetPattern::q2()).is_none(),
        "search produced a family containing a diamond"
    );
}

/// Exhaustive optimum: enumerates every one of the `2^(2^n)` families.
pub fn brute_force_ex(n: u32) -> Result<SearchResult, SearchError> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(SearchError::BruteForceTooLarge(n, BRUTE_FORCE_LIMIT));
    }
    let start = Instant::now();
    let num_subsets = 1u32 << n;
    let mut best_size = 0usize;
    let mut best_bits = 0u64;
    let mut examined = 0u64;
    for bits in 0u64..1u64 << num_subsets {
        examined += 1;
        let size = bits.count_ones() as usize;
        if size <= best_size {
            continue;
        }
        let family = Family::new(n, (0..num_subsets as u64).filter(|&m| bits >> m & 1 == 1))
            .expect("masks below 2^n are valid");
        if crate::pattern::q2_witness(&family).is_none() {
            best_size = size;
            best_bits = bits;
        }
    }
    let best_family = Family::new(
        n,
        (0..num_subsets as u64).filter(|&m| best_bits >> m & 1 == 1),
    )
    .expect("masks below 2^n are valid");
    verify_result_family(&best_family);
    Ok(SearchResult {
        n,
        best_size,
        best_family,
        nodes_expanded: examined,
        proved_optimal: true,
        wall_time: start.elapsed(),
    })
}

/// Union of the two largest layers; diamond-free of size
/// `C(n, floor(n/2)) + C(n, floor(n/2)+1)`.
pub fn construct_two_middle_layers(n: u32) -> Family {
    assert!(n >= 1, "construction requires n >= 1");
    let k = n / 2;
    let mut masks: Vec<u64> = layer(n, k).expect("k in range").masks().collect();
    masks.extend(layer(n, k + 1).expect("k+1 in range").masks());
    let family = Family::new(n, masks).expect("two distinct layers never collide");
    debug_assert!(crate::pattern::q2_witness(&family).is_none());
    family
}

struct BnbState {
    candidates: Vec<u64>,
    chain_ids_by_mask: Vec<Vec<u32>>,
    cnt_chosen: Vec<u8>,
    cnt_possible: Vec<u8>,
    sum_f: i64,
    chosen: Vec<u64>,
    best_size: usize,
    best_masks: Vec<u64>,
    nodes: u64,
    double_factorial: i64,
    two_nfact: i64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl BnbState {
    /// Per-chain contribution to the optimistic bound on the difference of
    /// 3-member and 1-member chain counts over all diamond-free completions.
    fn chain_term(c: u8, cr: u8) -> i64 {
        if cr >= 3 {
            1
        } else if cr == 1 && c == 1 {
            -1
        } else {
            0
        }
    }

    fn touch_chains(&mut self, mask: u64, d_chosen: i8, d_possible: i8) {
        let ids = std::mem::take(&mut self.chain_ids_by_mask[mask as usize]);
        for &ci in &ids {
            let ci = ci as usize;
            let old = Self::chain_term(self.cnt_chosen[ci], self.cnt_possible[ci]);
            self.cnt_chosen[ci] = (self.cnt_chosen[ci] as i8 + d_chosen) as u8;
            self.cnt_possible[ci] = (self.cnt_possible[ci] as i8 + d_possible) as u8;
            self.sum_f += Self::chain_term(self.cnt_chosen[ci], self.cnt_possible[ci]) - old;
        }
        self.chain_ids_by_mask[mask as usize] = ids;
    }

    fn capacity_bound(&self) -> i64 {
        (self.two_nfact + self.sum_f).div_euclid(self.double_factorial)
    }

    fn dfs(&mut self, pos: usize) {
        self.nodes += 1;
        if self.timed_out {
            return;
        }
        if self.nodes & 0xFFF == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.timed_out = true;
                    return;
                }
            }
        }
        if pos == self.candidates.len() {
            return;
        }
        // Counting prune: even taking every remaining candidate cannot beat
        // the incumbent.
        if self.chosen.len() + (self.candidates.len() - pos) <= self.best_size {
            return;
        }
        // Chain-capacity prune: every diamond-free completion F satisfies
        // |F| * fl! * ce! <= 2 n! + (Y3 - Y1), and sum_f bounds Y3 - Y1 from
        // above over all completions of the current node.
        if self.capacity_bound() <= self.best_size as i64 {
            return;
        }
        let x = self.candidates[pos];
        if crate::pattern::extends_q2_free(&self.chosen, x) {
            self.chosen.push(x);
            self.touch_chains(x, 1, 0);
            if self.chosen.len() > self.best_size {
                self.best_size = self.chosen.len();
                self.best_masks = self.chosen.clone();
            }
            self.dfs(pos + 1);
            self.touch_chains(x, -1, 0);
            self.chosen.pop();
        }
        self.touch_chains(x, 0, -1);
        self.dfs(pos + 1);
        self.touch_chains(x, 0, 1);
    }
}

/// Depth-first branch and bound over all subsets in middle-heavy order with
/// incremental diamond detection and the chain-capacity prune. The incumbent
/// is seeded with the two-middle-layers construction. `proved_optimal` is
/// true iff the search exhausted within the budget.
pub fn branch_and_bound_ex(n: u32, budget: Option<Duration>) -> Result<SearchResult, SearchError> {
    if n > BNB_LIMIT {
        return Err(SearchError::BnbTooLarge(n, BNB_LIMIT));
    }
    let start = Instant::now();

    let mut candidates: Vec<u64> = (0..1u64 << n).collect();
    candidates.sort_by_key(|&m| {
        let size = m.count_ones();
        ((2 * size as i64 - n as i64).abs(), size, m)
    });

    // Full chains as permutations; chain_ids_by_mask[mask] lists the chains
    // through that subset.
    let nfact = factorial(n as u64).to_u64().expect("n <= 8") as usize;
    let mut chain_ids_by_mask: Vec<Vec<u32>> = vec![Vec::new(); 1 << n];
    {
        let mut order: Vec<u32> = (0..n).collect();
        let mut chain_id = 0u32;
        fn permute(
            order: &mut Vec<u32>,
            k: usize,
            chain_id: &mut u32,
            by_mask: &mut Vec<Vec<u32>>,
        ) {
            if k == order.len() {
                let mut mask = 0u64;
                by_mask[0].push(*chain_id);
                for &bit in order.iter() {
                    mask |= 1 << bit;
                    by_mask[mask as usize].push(*chain_id);
                }
                *chain_id += 1;
                return;
            }
            for i in k..order.len() {
                order.swap(k, i);
                permute(order, k + 1, chain_id, by_mask);
                order.swap(k, i);
            }
        }
        permute(&mut order, 0, &mut chain_id, &mut chain_ids_by_mask);
        debug_assert_eq!(chain_id as usize, nfact);
    }

    let seed: Vec<u64> = if n >= 1 {
        construct_two_middle_layers(n).masks().collect()
    } else {
        vec![0u64]
    };

    let fl = factorial(n as u64 / 2).to_u64().unwrap() as i64;
    let ce = factorial(n as u64 - n as u64 / 2).to_u64().unwrap() as i64;
    let mut state = BnbState {
        candidates,
        chain_ids_by_mask,
        cnt_chosen: vec![0; nfact],
        cnt_possible: vec![n as u8 + 1; nfact],
        sum_f: 0,
        chosen: Vec::new(),
        best_size: seed.len(),
        best_masks: seed,
        nodes: 0,
        double_factorial: fl * ce,
        two_nfact: 2 * nfact as i64,
        deadline: budget.map(|b| start + b),
        timed_out: false,
    };
    state.sum_f = (0..nfact)
        .map(|ci| BnbState::chain_term(state.cnt_chosen[ci], state.cnt_possible[ci]))
        .sum();

    state.dfs(0);

    let best_family = Family::new(n, state.best_masks.clone()).expect("chosen masks valid");
    verify_result_family(&best_family);
    Ok(SearchResult {
        n,
        best_size: state.best_size,
        best_family,
        nodes_expanded: state.nodes,
        proved_optimal: !state.timed_out,
        wall_time: start.elapsed(),
    })
}

/// The balanced local construction: ground `[m]` split into halves, minimal
/// members all within-half pairs, upper members all mixed triples. Every
/// mixed triple contains exactly one within-half pair, so the family is a
/// valid local family.
pub fn construct_balanced_local(m: u32) -> Result<LocalFamily, SearchError> {
    if m < 4 || !m.is_multiple_of(2) {
        return Err(SearchError::BadBalancedGround(m));
    }
    let half = m / 2;
    let low_mask = crate::lattice::full_mask(half);
    let mut masks: Vec<u64> = vec![0];
    for i in 0..m {
        for j in i + 1..m {
            let same_side = (i < half) == (j < half);
            if same_side {
                masks.push(1 << i | 1 << j);
            }
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let t = 1u64 << i | 1 << j | 1 << k;
                let low = (t & low_mask).count_ones();
                if low == 1 || low == 2 {
                    masks.push(t);
                }
            }
        }
    }
    let local = LocalFamily::from_masks(m, masks)?;
    assert!(
        validate_local(&local).is_none(),
        "balanced construction must be a valid local family"
    );
    Ok(local)
}

/// Exact chain-count check for the balanced construction: the number of full
/// chains meeting it in three members is at least
/// `4 C(m/2, 2) (m/2) (m-3)!`, which itself is at least `m!/4`.
#[derive(Clone, Debug)]
pub struct BalancedLocalReport {
    pub upsilon3: BigUint,
    pub lower: BigUint,
    pub ratio: BigRational,
    pub holds: bool,
}

pub fn balanced_local_check(m: u32) -> Result<BalancedLocalReport, SearchError> {
    if !(4..=12).contains(&m) || !m.is_multiple_of(2) {
        return Err(SearchError::BalancedCheckRange(m));
    }
    let local = construct_balanced_local(m)?;
    let census = chain_census(local.family())?;
    let upsilon3 = census.count(3);
    let m64 = m as u64;
    let lower =
        BigUint::from(4u32) * binom(m64 / 2, 2) * BigUint::from(m64 / 2) * factorial(m64 - 3);
    let mfact = factorial(m64);
    let holds = upsilon3 >= lower && &lower * BigUint::from(4u32) >= mfact;
    let ratio = BigRational::new(upsilon3.clone().into(), mfact.into());
    Ok(BalancedLocalReport {
        upsilon3,
        lower,
        ratio,
        holds,
    })
}

/// Reference values `2N` and `2.283261N` to put a computed size against
/// (report only; the asymptotic slack is not assertable at fixed n).
#[derive(Clone, Copy, Debug)]
pub struct ExtremalReferences {
    pub lower_ref: f64,
    pub upper_ref: f64,
}

pub fn extremal_references(n: u32) -> ExtremalReferences {
    let middle = middle_layer_size(n as u64)
        .to_f64()
        .expect("middle layer fits f64 for supported n");
    ExtremalReferences {
        lower_ref: 2.0 * middle,
        upper_ref: 2.283261 * middle,
    }
}
