//! Acceptance suite: one test per acceptance criterion, each printing a
//! single pass line (failures panic with context). Tolerances and case
//! counts are pinned here.

use num_bigint::BigUint;
use num_traits::Zero;
use q2lab_core::census::chain_census;
use q2lab_core::gen;
use q2lab_core::lattice::{factorial, middle_layer_size, tail_bound_check, Family};
use q2lab_core::optimize::{
    maximize_qprime_region, maximize_qprime_with, maximize_three_layer_surface_with, QprimeRegion,
};
use q2lab_core::scd::scd_decompose;
use q2lab_core::search::{
    balanced_local_check, branch_and_bound_ex, brute_force_ex, construct_two_middle_layers,
};
use q2lab_core::suites::{run_case, run_shift_case, SuiteKind};
use std::collections::HashSet;
use std::time::{Duration, Instant};

const ROOT_SEED: u64 = 0x51D2_F00D;

fn run_suite(kind: SuiteKind, cases: u64) {
    for i in 0..cases {
        let outcome = run_case(kind, ROOT_SEED, i);
        assert!(
            outcome.ok(),
            "suite {} case {i} (seed {}) failed checks {:?}",
            kind.name(),
            outcome.seed,
            outcome.failed_checks()
        );
    }
}

#[test]
fn criterion_01_qprime_maximum() {
    let start = Instant::now();
    let global = maximize_qprime_with(2048, 1e-12);
    assert!(
        global.max_value >= 0.2832 && global.max_value <= 0.283261,
        "global max {} outside [0.2832, 0.283261]",
        global.max_value
    );
    assert!(
        (global.argmax.0 - 0.935).abs() <= 0.01 && (global.argmax.1 - 0.285).abs() <= 0.01,
        "argmax {:?} not within 0.01 of (0.935, 0.285)",
        global.argmax
    );
    let low = maximize_qprime_region(QprimeRegion::LowA, 2048, 1e-12);
    assert!(
        (low.max_value - 0.25).abs() <= 1e-6,
        "low-region supremum {} not 0.25 +- 1e-6",
        low.max_value
    );
    assert!(
        (low.argmax.0 - 0.5).abs() <= 1e-6 && (low.argmax.1 - 1.0).abs() <= 1e-6,
        "low-region argmax {:?} not at (0.5, 1)",
        low.argmax
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "criterion 01 PASS: qprime max {:.9} at ({:.4}, {:.4}); low region {:.9} ({:?})",
        global.max_value, global.argmax.0, global.argmax.1, low.max_value, elapsed
    );
}

#[test]
fn criterion_02_surface_maximum() {
    let start = Instant::now();
    let r = maximize_three_layer_surface_with(2048, 1e-12);
    let expect = 3.0 + 2.0f64.sqrt();
    let t = (2.0 + 2.0f64.sqrt()) / 4.0;
    assert!(
        (r.max_value - expect).abs() <= 1e-9,
        "max {} vs 3+sqrt(2)",
        r.max_value
    );
    assert!(
        (r.argmax.0 - t).abs() <= 1e-4 && (r.argmax.1 - t).abs() <= 1e-4,
        "argmax {:?} vs ({t}, {t})",
        r.argmax
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "criterion 02 PASS: surface max {:.12} at ({:.6}, {:.6}) ({:?})",
        r.max_value, r.argmax.0, r.argmax.1, elapsed
    );
}

#[test]
fn criterion_03_lemma2_suite() {
    // Case index i uses n = 4 + (i % 5), so 5000 cases give exactly 1000
    // per n in {4..8}. Checks: the chain-count inequality, the weighted
    // census identity, and zero chains with four or more members.
    run_suite(SuiteKind::Lemma2, 5000);
    println!("criterion 03 PASS: lemma2 suite, 1000 cases per n in 4..=8");
}

/// Brute-force census oracle: walk all permutations and tally directly.
fn census_by_permutations(family: &Family) -> Vec<BigUint> {
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

#[test]
fn criterion_04_census_vs_permutations() {
    for n in 3..=7u32 {
        for i in 0..200u64 {
            let mut rng = gen::case_rng(ROOT_SEED ^ n as u64, i);
            let family = gen::random_family(&mut rng, n);
            let census = chain_census(&family).expect("n within DP limit");
            let oracle = census_by_permutations(&family);
            assert_eq!(census.counts(), &oracle[..], "n={n} case={i}");
            assert_eq!(census.total(), factorial(n as u64), "n={n} case={i}");
        }
    }
    println!("criterion 04 PASS: census equals permutation enumeration, 200 cases per n in 3..=7");
}

#[test]
fn criterion_05_three_layer_suite() {
    run_suite(SuiteKind::ThreeLayer, 1000);
    println!("criterion 05 PASS: three-layer suite, 1000 cases");
}

#[test]
fn criterion_06_local_suite() {
    run_suite(SuiteKind::Local, 1000);
    run_suite(SuiteKind::StarUb3, 1000);
    run_suite(SuiteKind::Compression, 1000);
    println!("criterion 06 PASS: local validity/scaling, star and ub3 bounds, compression monotonicity, 1000 cases each");
}

#[test]
fn criterion_07_graph_identities_suite() {
    run_suite(SuiteKind::GraphIdentities, 1000);
    println!("criterion 07 PASS: graph identities suite, 1000 cases");
}

#[test]
fn criterion_08_scd_and_shift() {
    for n in 0..=16u32 {
        let scd = scd_decompose(n).expect("n within limit");
        assert!(scd.validate(), "decomposition invalid at n={n}");
        assert_eq!(
            BigUint::from(scd.chains().len()),
            middle_layer_size(n as u64),
            "chain count at n={n}"
        );
    }
    for i in 0..500u64 {
        let outcome = run_shift_case(ROOT_SEED, i);
        assert!(
            outcome.ok(),
            "shift case {i} (seed {}) failed {:?}",
            outcome.seed,
            outcome.failed_checks()
        );
    }
    println!("criterion 08 PASS: decomposition valid for n <= 16; 500 shift cases");
}

#[test]
fn criterion_09_exact_extremal_values() {
    let r2 = brute_force_ex(2).expect("n=2");
    assert_eq!(r2.best_size, 3, "largest diamond-free family on [2]");

    let t4 = Instant::now();
    let mut solved = vec![(2u32, r2.best_size)];
    for n in 3..=4u32 {
        let brute = brute_force_ex(n).expect("brute");
        let bnb = branch_and_bound_ex(n, None).expect("bnb");
        assert!(bnb.proved_optimal);
        assert_eq!(brute.best_size, bnb.best_size, "methods disagree at n={n}");
        solved.push((n, brute.best_size));
    }
    let elapsed4 = t4.elapsed();
    assert!(
        elapsed4 < Duration::from_secs(60),
        "n in 3..=4 took {elapsed4:?}"
    );

    let r5 = branch_and_bound_ex(5, Some(Duration::from_secs(3600))).expect("bnb n=5");
    assert!(r5.proved_optimal, "n=5 did not close within the budget");
    solved.push((5, r5.best_size));

    for w in solved.windows(2) {
        assert!(w[0].1 <= w[1].1, "extremal values must be nondecreasing");
    }
    for &(n, size) in &solved {
        let construction = construct_two_middle_layers(n).len();
        assert!(
            size >= construction,
            "n={n}: optimum {size} below construction {construction}"
        );
    }
    println!(
        "criterion 09 PASS: sizes {:?}; n=5 closed in {:?} ({} nodes)",
        solved, r5.wall_time, r5.nodes_expanded
    );
}

#[test]
fn criterion_10_balanced_construction() {
    for m in [4u32, 6, 8, 10] {
        let r = balanced_local_check(m).expect("even m in range");
        assert!(r.holds, "m={m}: three-member chain bound failed");
        assert!(r.upsilon3 >= r.lower, "m={m}");
        assert!(
            &r.lower * BigUint::from(4u32) >= factorial(m as u64),
            "m={m}: lower bound below m!/4"
        );
        assert!(!r.upsilon3.is_zero());
    }
    println!("criterion 10 PASS: balanced construction chain counts for m in {{4,6,8,10}}");
}

#[test]
fn criterion_11_tail_bound() {
    for n in [27u64, 64, 125, 216, 343, 512, 729, 1000] {
        let r = tail_bound_check(n).expect("n >= 8");
        assert!(
            r.holds,
            "tail bound failed at n={n}: lhs {} rhs {}",
            r.lhs_log2, r.rhs_log2
        );
    }
    println!(
        "criterion 11 PASS: exact tail sums below 2^(n+1) e^(-n^(1/3)) for the eight cube sizes"
    );
}
