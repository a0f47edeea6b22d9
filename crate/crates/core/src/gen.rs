//! Seeded instance generators for the randomized verification suites, plus
//! the root-seed fan-out scheme. Every generator is deterministic in the
//! supplied RNG, so suite cases replay exactly from `(root seed, index)`.

use crate::graph::AuxGraphStats;
use crate::lattice::{layer, Family};
use crate::local::LocalFamily;
use crate::pattern::extends_q2_free;
use crate::three_layer::ThreeLayerFamily;
use rand::prelude::*;
use rand_pcg::Pcg64Mcg;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Splittable counter scheme: `case_seed = splitmix64(root + splitmix64(index + 1))`.
pub fn case_seed(root: u64, index: u64) -> u64 {
    splitmix64(root.wrapping_add(splitmix64(index.wrapping_add(1))))
}

pub fn case_rng(root: u64, index: u64) -> Pcg64Mcg {
    Pcg64Mcg::seed_from_u64(case_seed(root, index))
}

/// Uniformly dense random family: a density is drawn first, then each subset
/// joins independently.
pub fn random_family(rng: &mut impl Rng, n: u32) -> Family {
    let p: f64 = rng.gen_range(0.05..0.95);
    Family::new(n, (0..1u64 << n).filter(|_| rng.gen_bool(p))).expect("masks below 2^n are valid")
}

/// Diamond-free family built by shuffled insertion with incremental
/// rejection, stopping at a random target size (so sparse and near-maximal
/// families both occur).
pub fn random_q2_free_family(rng: &mut impl Rng, n: u32) -> Family {
    let mut pool: Vec<u64> = (0..1u64 << n).collect();
    pool.shuffle(rng);
    let target = rng.gen_range(0..=pool.len());
    let mut chosen: Vec<u64> = Vec::new();
    for mask in pool {
        if chosen.len() >= target {
            break;
        }
        if extends_q2_free(&chosen, mask) {
            chosen.push(mask);
        }
    }
    let family = Family::new(n, chosen).expect("insertion keeps masks distinct");
    debug_assert!(crate::pattern::q2_witness(&family).is_none());
    family
}

/// Random antichain via greedy filtering of a shuffled pool.
pub fn random_antichain(rng: &mut impl Rng, n: u32) -> Family {
    let mut pool: Vec<u64> = (0..1u64 << n).collect();
    pool.shuffle(rng);
    let mut chosen: Vec<u64> = Vec::new();
    for mask in pool {
        let incomparable = chosen.iter().all(|&c| c & mask != c && mask & c != mask);
        if incomparable && rng.gen_bool(0.6) {
            chosen.push(mask);
        }
    }
    let family = Family::new(n, chosen).expect("pool is duplicate-free");
    debug_assert!(family.is_antichain());
    family
}

/// Random valid local family: minimal members sampled as an antichain of
/// small sets, then at most one upper member attached per minimal member,
/// avoiding other minimals and comparabilities.
pub fn random_valid_local(rng: &mut impl Rng, m: u32) -> LocalFamily {
    let mut pool: Vec<u64> = (1..1u64 << m).filter(|x| x.count_ones() <= 3).collect();
    pool.shuffle(rng);
    let target = rng.gen_range(0..=(m as usize + 2));
    let mut minimals: Vec<u64> = Vec::new();
    for c in pool {
        if minimals.len() >= target {
            break;
        }
        if minimals.iter().all(|&t| t & c != t && c & t != c) {
            minimals.push(c);
        }
    }

    let mut uppers: Vec<u64> = Vec::new();
    for &t in &minimals {
        if !rng.gen_bool(0.6) {
            continue;
        }
        let free_bits: Vec<u32> = (0..m).filter(|&b| t >> b & 1 == 0).collect();
        if free_bits.is_empty() {
            continue;
        }
        for _ in 0..8 {
            let extra = rng.gen_range(1..=free_bits.len().min(3));
            let mut v = t;
            for &b in free_bits.choose_multiple(rng, extra) {
                v |= 1 << b;
            }
            let other_minimal = minimals.iter().any(|&t0| t0 != t && v & t0 == t0);
            let comparable_upper = uppers.iter().any(|&u| u & v == u || v & u == v);
            if !other_minimal && !comparable_upper {
                uppers.push(v);
                break;
            }
        }
    }

    let mut masks = vec![0u64];
    masks.extend(&minimals);
    masks.extend(&uppers);
    let local = LocalFamily::from_masks(m, masks).expect("constructed family is valid");
    debug_assert!(crate::local::validate_local(&local).is_none());
    local
}

/// Random auxiliary-graph instance with `4 <= eta < m <= max_m`.
pub fn random_graph_instance(rng: &mut impl Rng, max_m: u32) -> AuxGraphStats {
    let m = rng.gen_range(5..=max_m);
    let eta = rng.gen_range(4..m);
    let p: f64 = rng.gen_range(0.0..=1.0);
    let mut edges = Vec::new();
    for i in 1..=eta {
        for j in i + 1..=eta {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    AuxGraphStats::from_parts(m, eta, &edges).expect("generated edges are valid")
}

/// Random diamond-free three-layer instance over layers `k-1, k, k+1`.
pub fn random_three_layer(rng: &mut impl Rng, n: u32, k: u32) -> ThreeLayerFamily {
    assert!(k >= 1 && k < n);
    let mut pool: Vec<u64> = Vec::new();
    for kk in [k - 1, k, k + 1] {
        pool.extend(layer(n, kk).expect("layer in range").masks());
    }
    pool.shuffle(rng);
    let target = rng.gen_range(0..=pool.len());
    let mut chosen: Vec<u64> = Vec::new();
    for mask in pool {
        if chosen.len() >= target {
            break;
        }
        if extends_q2_free(&chosen, mask) {
            chosen.push(mask);
        }
    }
    let pick = |size: u32| -> Family {
        Family::new(n, chosen.iter().copied().filter(|c| c.count_ones() == size))
            .expect("chosen masks distinct")
    };
    let fam = ThreeLayerFamily::new(n, k, pick(k - 1), pick(k), pick(k + 1))
        .expect("layer sizes match by construction");
    debug_assert!(fam.q2_witness().is_none());
    fam
}

/// Random diamond-free family with exactly three distinct member sizes
/// `k - d1 < k < k + d2`; each size class is nonempty.
pub fn random_three_size_family(rng: &mut impl Rng, n: u32) -> Family {
    assert!(n >= 4);
    let d1 = rng.gen_range(1..=2u32);
    let d2 = rng.gen_range(1..=2u32);
    let k = rng.gen_range(d1..=(n - d2));
    let sizes = [k - d1, k, k + d2];

    // One member per size first (any three sets are diamond-free), then
    // random fill.
    let mut chosen: Vec<u64> = Vec::new();
    for &s in &sizes {
        let members: Vec<u64> = layer(n, s).expect("in range").masks().collect();
        loop {
            let c = *members.choose(rng).unwrap();
            if !chosen.contains(&c) {
                chosen.push(c);
                break;
            }
        }
    }
    let mut pool: Vec<u64> = Vec::new();
    for &s in &sizes {
        pool.extend(layer(n, s).expect("in range").masks());
    }
    pool.shuffle(rng);
    let target = rng.gen_range(3..=pool.len());
    for mask in pool {
        if chosen.len() >= target {
            break;
        }
        if !chosen.contains(&mask) && extends_q2_free(&chosen, mask) {
            chosen.push(mask);
        }
    }
    let family = Family::new(n, chosen).expect("chosen masks distinct");
    debug_assert!(crate::pattern::q2_witness(&family).is_none());
    family
}
