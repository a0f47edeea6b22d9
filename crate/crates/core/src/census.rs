//! Exact full-chain censuses over the subset lattice.
//!
//! A full chain of the lattice over `[n]` is a maximal chain
//! `∅ ⊂ … ⊂ [n]` of `n+1` sets; there are `n!` of them. The census of a
//! family counts, for each `i`, the full chains containing exactly `i`
//! members. Counts are computed by a layer-by-layer dynamic program and are
//! exact.

use crate::lattice::{binom, factorial, full_mask, Family, Subset};
use crate::pattern::{q2_witness, Q2Witness};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashSet;
use thiserror::Error;

/// Default ground-size limit for the census DP (the state space is `2^n`).
pub const DP_GROUND_LIMIT: u32 = 22;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CensusError {
    #[error("ground size {0} exceeds the census DP limit {1}")]
    GroundTooLarge(u32, u32),
    #[error("subset ground size {got} does not match family ground size {expected}")]
    MixedGround { expected: u32, got: u32 },
    #[error("census cap must be at least 1")]
    ZeroCap,
}

/// Exact counts of full chains by number of family members they contain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCensus {
    n: u32,
    cap: usize,
    counts: Vec<BigUint>,
}

impl ChainCensus {
    pub fn ground(&self) -> u32 {
        self.n
    }

    /// `counts()[i]` is the number of full chains meeting the family in
    /// exactly `i` members. With the default cap the vector has `n+2`
    /// entries (indices `0..=n+1`); with a smaller cap the last entry
    /// aggregates all chains with at least `cap-1` members.
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, i: usize) -> BigUint {
        self.counts.get(i).cloned().unwrap_or_default()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

fn layer_masks(n: u32, k: u32) -> Vec<u64> {
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut mask = full_mask(k);
    let top = full_mask(k) << (n - k);
    loop {
        out.push(mask);
        if mask == top {
            break;
        }
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    out
}

/// Census with a truncation cap on the tracked member count: chains with
/// `cap-1` or more members are lumped into the final bucket. The default
/// cap `n+2` tracks everything exactly.
pub fn chain_census_capped(family: &Family, cap: usize) -> Result<ChainCensus, CensusError> {
    chain_census_limited(family, cap, DP_GROUND_LIMIT)
}

/// Full-precision census (cap `n+2`).
pub fn chain_census(family: &Family) -> Result<ChainCensus, CensusError> {
    chain_census_capped(family, family.ground() as usize + 2)
}

pub fn chain_census_limited(
    family: &Family,
    cap: usize,
    ground_limit: u32,
) -> Result<ChainCensus, CensusError> {
    let n = family.ground();
    if n > ground_limit {
        return Err(CensusError::GroundTooLarge(n, ground_limit));
    }
    if cap == 0 {
        return Err(CensusError::ZeroCap);
    }
    let len = cap.min(n as usize + 2);
    let members: HashSet<u64> = family.masks().collect();
    let sat = len - 1;

    // g[state][j] = saturated chains ∅ -> state meeting the family in
    // exactly j sets (j saturates at `sat`). Values stay within u128:
    // each is at most n! and n <= 22.
    let mut prev_masks = vec![0u64];
    let mut prev_vecs: Vec<Vec<u128>> = {
        let mut v = vec![0u128; len];
        let idx = usize::from(members.contains(&0)).min(sat);
        v[idx] = 1;
        vec![v]
    };

    for k in 1..=n {
        let masks = layer_masks(n, k);
        let mut vecs: Vec<Vec<u128>> = Vec::with_capacity(masks.len());
        for &mask in &masks {
            let mut raw = vec![0u128; len];
            let mut bits = mask;
            while bits != 0 {
                let bit = bits & bits.wrapping_neg();
                bits ^= bit;
                let below = mask ^ bit;
                let idx = prev_masks.binary_search(&below).expect("predecessor");
                for (j, v) in prev_vecs[idx].iter().enumerate() {
                    raw[j] += v;
                }
            }
            if members.contains(&mask) {
                let mut shifted = vec![0u128; len];
                for (j, v) in raw.iter().enumerate() {
                    shifted[(j + 1).min(sat)] += v;
                }
                raw = shifted;
            }
            vecs.push(raw);
        }
        prev_masks = masks;
        prev_vecs = vecs;
    }

    let final_vec = &prev_vecs[0];
    Ok(ChainCensus {
        n,
        cap: len,
        counts: final_vec.iter().map(|&v| BigUint::from(v)).collect(),
    })
}

/// Extracts the positions of set bits of `selector` from `value`, packing
/// them into the low bits (software PEXT).
fn extract_bits(value: u64, selector: u64) -> u64 {
    let mut out = 0u64;
    let mut out_bit = 0u32;
    let mut sel = selector;
    while sel != 0 {
        let bit = sel & sel.wrapping_neg();
        sel ^= bit;
        if value & bit != 0 {
            out |= 1 << out_bit;
        }
        out_bit += 1;
    }
    out
}

/// Census of full chains through a fixed subset `a`: entry `i` is the number
/// of full chains containing `a` whose intersection with the family has
/// exactly `i` members.
///
/// When `a` is a member this matches the convention "`a` plus `i-1` other
/// members"; when `a` is not a member the entry counts chains with exactly
/// `i` members of the family in total.
pub fn census_through(family: &Family, a: Subset) -> Result<Vec<BigUint>, CensusError> {
    let n = family.ground();
    if a.ground() != n {
        return Err(CensusError::MixedGround {
            expected: n,
            got: a.ground(),
        });
    }
    if n > DP_GROUND_LIMIT {
        return Err(CensusError::GroundTooLarge(n, DP_GROUND_LIMIT));
    }
    let a_mask = a.mask();
    let q = a.size();
    let r = n - q;
    let comp_mask = full_mask(n) & !a_mask;

    // Members inside [∅, a] relabeled onto a ground of size |a| (a itself
    // included), and members strictly above a relabeled onto the complement.
    let below = Family::new(
        q,
        family
            .masks()
            .filter(|&m| m & !a_mask == 0)
            .map(|m| extract_bits(m, a_mask)),
    )
    .expect("relabeled members are duplicate-free");
    let above = Family::new(
        r,
        family
            .masks()
            .filter(|&m| m != a_mask && m & a_mask == a_mask)
            .map(|m| extract_bits(m, comp_mask)),
    )
    .expect("relabeled members are duplicate-free");

    let below_counts = chain_census(&below)?;
    let above_counts = chain_census(&above)?;

    // A full chain through `a` splits into a lower chain ∅ -> a and an upper
    // chain a -> [n]; member counts add.
    let mut entries = vec![BigUint::zero(); n as usize + 2];
    for (j, bj) in below_counts.counts().iter().enumerate() {
        if bj.is_zero() {
            continue;
        }
        for (l, al) in above_counts.counts().iter().enumerate() {
            if al.is_zero() {
                continue;
            }
            entries[j + l] += bj * al;
        }
    }
    Ok(entries)
}

/// Exact LYM sum `Σ 1/C(n,|A|)` over the members.
pub fn lym_sum(family: &Family) -> BigRational {
    let n = family.ground() as u64;
    family
        .iter()
        .map(|s| BigRational::new(BigInt::one(), BigInt::from(binom(n, s.size() as i64))))
        .sum()
}

/// Exact chain-count inequality report for a diamond-free family:
/// `|F| * floor(n/2)! * ceil(n/2)! <= 2*n! + Y3 - Y1`.
#[derive(Clone, Debug)]
pub struct ChainCapacityReport {
    pub lhs: BigUint,
    pub rhs: BigInt,
    pub holds: bool,
    pub census: ChainCensus,
}

#[derive(Debug, Error)]
pub enum ChainCapacityError {
    #[error("family is not diamond-free: witness {0}")]
    NotQ2Free(Q2Witness),
    #[error(transparent)]
    Census(#[from] CensusError),
}

pub fn chain_capacity_check(family: &Family) -> Result<ChainCapacityReport, ChainCapacityError> {
    if let Some(w) = q2_witness(family) {
        return Err(ChainCapacityError::NotQ2Free(w));
    }
    let census = chain_census(family)?;
    // A full chain meets a diamond-free family in at most 3 sets.
    for (i, c) in census.counts().iter().enumerate() {
        if i >= 4 {
            assert!(
                c.is_zero(),
                "diamond-free family met a chain {i} times: internal invariant breach"
            );
        }
    }
    let n = family.ground() as u64;
    let lhs = BigUint::from(family.len()) * factorial(n / 2) * factorial(n - n / 2);
    let rhs = BigInt::from(factorial(n) * 2u32) + BigInt::from(census.count(3))
        - BigInt::from(census.count(1));
    let holds = BigInt::from(lhs.clone()) <= rhs;
    Ok(ChainCapacityReport {
        lhs,
        rhs,
        holds,
        census,
    })
}

/// Incidence weight `Σ_{A∈F} |A|! (n-|A|)!` — the number of (member, chain)
/// incidences, which equals `Σ_i i * counts[i]`.
pub fn incidence_weight(family: &Family) -> BigUint {
    let n = family.ground() as u64;
    family
        .iter()
        .map(|s| factorial(s.size() as u64) * factorial(n - s.size() as u64))
        .sum()
}

#[cfg(test)]
pub(crate) mod oracle {
    use super::*;

    /// Brute-force census: walk all n! permutations, materialize each full
    /// chain, count members directly. Usable for n <= 7.
    pub fn census_by_permutations(family: &Family) -> Vec<BigUint> {
        let n = family.ground();
        let members: HashSet<u64> = family.masks().collect();
        let mut counts = vec![0u64; n as usize + 2];
        let mut order: Vec<u32> = (0..n).collect();
        permute(&mut order, 0, &mut |perm| {
            let mut mask = 0u64;
            let mut hits = usize::from(members.contains(&0));
            for &bit in perm {
                mask |= 1 << bit;
                if members.contains(&mask) {
                    hits += 1;
                }
            }
            counts[hits] += 1;
        });
        counts.into_iter().map(BigUint::from).collect()
    }

    /// Chains through a fixed set, counted the same brute-force way.
    pub fn through_by_permutations(family: &Family, a: Subset) -> Vec<BigUint> {
        let n = family.ground();
        let members: HashSet<u64> = family.masks().collect();
        let mut counts = vec![0u64; n as usize + 2];
        let mut order: Vec<u32> = (0..n).collect();
        permute(&mut order, 0, &mut |perm| {
            let mut mask = 0u64;
            let mut hits = usize::from(members.contains(&0));
            let mut through = a.mask() == 0;
            for &bit in perm {
                mask |= 1 << bit;
                if members.contains(&mask) {
                    hits += 1;
                }
                if mask == a.mask() {
                    through = true;
                }
            }
            if through {
                counts[hits] += 1;
            }
        });
        counts.into_iter().map(BigUint::from).collect()
    }

    fn permute(order: &mut Vec<u32>, k: usize, f: &mut impl FnMut(&[u32])) {
        if k == order.len() {
            f(order);
            return;
        }
        for i in k..order.len() {
            order.swap(k, i);
            permute(order, k + 1, f);
            order.swap(k, i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::layer;
    use rand::prelude::*;
    use rand_pcg::Pcg64Mcg;

    fn family_from_bits(n: u32, bits: u64) -> Family {
        let masks = (0..1u64 << n).filter(|&m| bits >> m & 1 == 1);
        Family::new(n, masks).unwrap()
    }

    #[test]
    fn census_tiny_by_hand() {
        // n=2, F = {{1},{1,2}}: chain ∅{1}{12} has 2 members, ∅{2}{12} has 1.
        let f = Family::new(2, [0b01, 0b11]).unwrap();
        let c = chain_census(&f).unwrap();
        assert_eq!(c.counts(), &[0u32, 1, 1, 0].map(BigUint::from));

        // All four subsets: every full chain contains 3 sets.
        let f = Family::new(2, [0b00, 0b01, 0b10, 0b11]).unwrap();
        let c = chain_census(&f).unwrap();
        assert_eq!(c.count(3), BigUint::from(2u32));
        assert_eq!(c.total(), BigUint::from(2u32));
    }

    #[test]
    fn census_matches_permutation_oracle_random() {
        let mut rng = Pcg64Mcg::seed_from_u64(0x5eed);
        for n in 2..=6u32 {
            for _ in 0..40 {
                let p: f64 = rng.gen_range(0.05..0.95);
                let masks = (0..1u64 << n).filter(|_| rng.gen_bool(p));
                let f = Family::new(n, masks).unwrap();
                let c = chain_census(&f).unwrap();
                assert_eq!(c.counts(), &oracle::census_by_permutations(&f)[..]);
                assert_eq!(c.total(), factorial(n as u64));
            }
        }
    }

    #[test]
    fn capped_census_lumps_high_counts() {
        // Full lattice of Q_3: every chain has 4 members.
        let f = family_from_bits(3, 0xff);
        let c = chain_census_capped(&f, 3).unwrap();
        assert_eq!(c.counts(), &[0u32, 0, 6].map(BigUint::from));
        assert_eq!(c.total(), factorial(3));
        let full = chain_census(&f).unwrap();
        assert_eq!(full.count(4), BigUint::from(6u32));
    }

    #[test]
    fn census_rejects_large_ground() {
        let f = Family::empty(23);
        assert!(matches!(
            chain_census(&f),
            Err(CensusError::GroundTooLarge(23, _))
        ));
        // The DP limit is configurable.
        let f = Family::empty(10);
        assert!(matches!(
            chain_census_limited(&f, 12, 8),
            Err(CensusError::GroundTooLarge(10, 8))
        ));
        assert!(chain_census_limited(&f, 12, 12).is_ok());
    }

    #[test]
    fn through_tiny_by_hand() {
        let f = Family::new(2, [0b01]).unwrap();
        let a = Subset::new(2, 0b01).unwrap();
        let t = census_through(&f, a).unwrap();
        assert_eq!(t, [0u32, 1, 0, 0].map(BigUint::from));
    }

    #[test]
    fn through_empty_set_sums_to_factorial() {
        let f = Family::new(3, [0b000, 0b001, 0b011]).unwrap();
        let t = census_through(&f, Subset::empty(3)).unwrap();
        let total: BigUint = t.iter().sum();
        assert_eq!(total, factorial(3));
    }

    #[test]
    fn through_matches_permutation_oracle_random() {
        let mut rng = Pcg64Mcg::seed_from_u64(0xcafe);
        for _ in 0..60 {
            let n = rng.gen_range(2..=5u32);
            let p: f64 = rng.gen_range(0.1..0.9);
            let masks: Vec<u64> = (0..1u64 << n).filter(|_| rng.gen_bool(p)).collect();
            if masks.is_empty() {
                continue;
            }
            let f = Family::new(n, masks.clone()).unwrap();
            let a_mask = *masks.choose(&mut rng).unwrap();
            let a = Subset::new(n, a_mask).unwrap();
            assert_eq!(
                census_through(&f, a).unwrap(),
                oracle::through_by_permutations(&f, a)
            );
        }
    }

    #[test]
    fn through_weighted_sum_reproduces_census() {
        // Σ_{A∈F} (chains through A with i members) = i * counts[i].
        let mut rng = Pcg64Mcg::seed_from_u64(7);
        for _ in 0..30 {
            let n = rng.gen_range(2..=6u32);
            let p: f64 = rng.gen_range(0.1..0.7);
            let f = Family::new(n, (0..1u64 << n).filter(|_| rng.gen_bool(p))).unwrap();
            let census = chain_census(&f).unwrap();
            let mut sums = vec![BigUint::zero(); n as usize + 2];
            for a in f.iter() {
                for (i, v) in census_through(&f, *a).unwrap().into_iter().enumerate() {
                    sums[i] += v;
                }
            }
            for (i, s) in sums.iter().enumerate() {
                assert_eq!(*s, census.count(i) * BigUint::from(i), "i={i}");
            }
        }
    }

    #[test]
    fn lym_full_layer_is_one() {
        let f = layer(5, 2).unwrap();
        assert_eq!(lym_sum(&f), BigRational::one());
    }

    #[test]
    fn lym_single_small_member() {
        let f = Family::new(4, [0b0001]).unwrap();
        assert_eq!(
            lym_sum(&f),
            BigRational::new(BigInt::one(), BigInt::from(4))
        );
    }

    #[test]
    fn lym_random_antichains_at_most_one() {
        let mut rng = Pcg64Mcg::seed_from_u64(99);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12u32);
            let mut pool: Vec<u64> = (0..1u64 << n).collect();
            pool.shuffle(&mut rng);
            let mut chosen: Vec<u64> = Vec::new();
            for m in pool {
                let s = Subset::new(n, m).unwrap();
                let ok = chosen.iter().all(|&c| {
                    let c = Subset::new(n, c).unwrap();
                    !c.is_subset_of(&s) && !s.is_subset_of(&c)
                });
                if ok && rng.gen_bool(0.6) {
                    chosen.push(m);
                }
            }
            let f = Family::new(n, chosen).unwrap();
            assert!(f.is_antichain());
            assert!(lym_sum(&f) <= BigRational::one());
        }
    }

    #[test]
    fn lemma2_tiny_by_hand() {
        let f = Family::new(2, [0b01]).unwrap();
        let r = chain_capacity_check(&f).unwrap();
        assert_eq!(r.lhs, BigUint::one());
        assert_eq!(r.census.counts(), &[1u32, 1, 0, 0].map(BigUint::from));
        assert_eq!(r.rhs, BigInt::from(3));
        assert!(r.holds);
    }

    #[test]
    fn lemma2_two_middle_layers() {
        let mut masks: Vec<u64> = layer(4, 2).unwrap().masks().collect();
        masks.extend(layer(4, 3).unwrap().masks());
        let f = Family::new(4, masks).unwrap();
        let r = chain_capacity_check(&f).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn lemma2_rejects_non_free_family() {
        let f = Family::new(2, [0b00, 0b01, 0b10, 0b11]).unwrap();
        assert!(matches!(
            chain_capacity_check(&f),
            Err(ChainCapacityError::NotQ2Free(_))
        ));
    }

    #[test]
    fn incidence_weight_equals_weighted_census() {
        let mut rng = Pcg64Mcg::seed_from_u64(1234);
        for _ in 0..40 {
            let n = rng.gen_range(1..=6u32);
            let p: f64 = rng.gen_range(0.1..0.9);
            let f = Family::new(n, (0..1u64 << n).filter(|_| rng.gen_bool(p))).unwrap();
            let census = chain_census(&f).unwrap();
            let weighted: BigUint = census
                .counts()
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigUint::from(i))
                .sum();
            assert_eq!(weighted, incidence_weight(&f));
        }
    }
}
