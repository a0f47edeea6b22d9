//! Randomized verification suites: each case is generated from
//! `(root seed, case index)`, runs a batch of exact checks, and reports one
//! boolean per check. Pure functions of their arguments, so cases can run in
//! any order or in parallel with identical results.

use crate::census::{census_through, chain_capacity_check, chain_census, incidence_weight};
use crate::gen;
use crate::graph::{
    alpha1_identity_check, census_structure_check, degree_relaxation_check, degree_sum_identities,
    graph_census_bound,
};
use crate::lattice::factorial;
use crate::local::{compress, extract_local, star_lower_bound, ub3_upper_bound, validate_local};
use crate::three_layer::{
    main_ineq_check, profile_exclusion_check, shift_three_layers, three_layer_upsilons,
    upsilons_ineq_check,
};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Lemma2,
    Local,
    GraphIdentities,
    ThreeLayer,
    Compression,
    StarUb3,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 6] = [
        SuiteKind::Lemma2,
        SuiteKind::Local,
        SuiteKind::GraphIdentities,
        SuiteKind::ThreeLayer,
        SuiteKind::Compression,
        SuiteKind::StarUb3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SuiteKind::Lemma2 => "lemma2",
            SuiteKind::Local => "local",
            SuiteKind::GraphIdentities => "graph-identities",
            SuiteKind::ThreeLayer => "three-layer",
            SuiteKind::Compression => "compression",
            SuiteKind::StarUb3 => "star-ub3",
        }
    }

    pub fn parse(name: &str) -> Option<SuiteKind> {
        Self::ALL.iter().copied().find(|k| k.name() == name)
    }
}

/// A parameter of a suite case, for reporting. Values that may exceed 53
/// bits (and all rationals, as `p/q`) are carried as strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    Int(i64),
    IntList(Vec<i64>),
    Text(String),
}

/// Outcome of one suite case: the inputs that were generated and the result
/// of every check.
#[derive(Clone, Debug)]
pub struct CaseOutcome {
    pub suite: SuiteKind,
    pub case_index: u64,
    pub seed: u64,
    pub params: Vec<(&'static str, ParamValue)>,
    pub checks: Vec<(&'static str, bool)>,
}

impl CaseOutcome {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|&(_, ok)| ok)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|&&(_, ok)| !ok)
            .map(|&(name, _)| name)
            .collect()
    }
}

/// Runs one case of a suite. Deterministic in `(root_seed, index)`.
pub fn run_case(suite: SuiteKind, root_seed: u64, index: u64) -> CaseOutcome {
    let seed = gen::case_seed(root_seed, index);
    let mut rng = gen::case_rng(root_seed, index);
    let mut params = Vec::new();
    let mut checks = Vec::new();

    match suite {
        SuiteKind::Lemma2 => {
            let n = 4 + (index % 5) as u32; // 4..=8
            let family = gen::random_q2_free_family(&mut rng, n);
            params.push(("n", ParamValue::Int(n as i64)));
            params.push(("family_size", ParamValue::Int(family.len() as i64)));
            let report = chain_capacity_check(&family).expect("generator output is diamond-free");
            let high_zero = report.census.counts()[4..].iter().all(BigUint::is_zero);
            let weighted: BigUint = report
                .census
                .counts()
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigUint::from(i))
                .sum();
            checks.push(("lemma2", report.holds));
            checks.push(("high_counts_zero", high_zero));
            checks.push(("identity", weighted == incidence_weight(&family)));
        }
        SuiteKind::Local => {
            let n = 4 + (index % 5) as u32; // 4..=8
            let family = gen::random_q2_free_family(&mut rng, n);
            params.push(("n", ParamValue::Int(n as i64)));
            params.push(("family_size", ParamValue::Int(family.len() as i64)));
            let mut all_valid = true;
            let mut scaling_ok = true;
            for s in family.minimal_members() {
                let extract = extract_local(&family, s).expect("s is a minimal member");
                if validate_local(&extract.local).is_some() {
                    all_valid = false;
                }
                if n <= 7 {
                    let lhs = census_through(&family, s).expect("n within DP limit");
                    let local_census =
                        chain_census(extract.local.family()).expect("m within DP limit");
                    let s_fact = factorial(s.size() as u64);
                    for (i, lhs_count) in lhs.iter().enumerate() {
                        if *lhs_count != local_census.count(i) * &s_fact {
                            scaling_ok = false;
                        }
                    }
                }
            }
            checks.push(("validate", all_valid));
            if n <= 7 {
                checks.push(("scaling", scaling_ok));
            }
        }
        SuiteKind::GraphIdentities => {
            let stats = gen::random_graph_instance(&mut rng, 20);
            params.push(("m", ParamValue::Int(stats.m as i64)));
            params.push(("eta", ParamValue::Int(stats.eta as i64)));
            params.push(("e", ParamValue::Int(stats.e as i64)));
            let ids = degree_sum_identities(&stats).expect("eta >= 4");
            checks.push(("deg_degbar2", ids.deg_degbar2));
            checks.push(("deg3", ids.deg3));
            checks.push(("degbar_deg2", ids.degbar_deg2));
            checks.push(("degbar3", ids.degbar3));
            checks.push((
                "alpha1_identity",
                alpha1_identity_check(&stats).expect("eta >= 4"),
            ));
            checks.push(("census_structure", census_structure_check(&stats)));
            let l7 = graph_census_bound(&stats).expect("4 <= eta < m");
            params.push((
                "q",
                ParamValue::Text(format!("{}/{}", l7.q.numer(), l7.q.denom())),
            ));
            params.push((
                "midline_rhs",
                ParamValue::Text(format!(
                    "{}/{}",
                    l7.midline_rhs.numer(),
                    l7.midline_rhs.denom()
                )),
            ));
            checks.push(("midline", l7.midline_holds));
            checks.push((
                "degree_relaxation",
                degree_relaxation_check(&stats).expect("eta >= 2"),
            ));
        }
        SuiteKind::ThreeLayer => {
            let n = 4 + (index % 7) as u32; // 4..=10
            let k = rng.gen_range(1..n);
            let fam = gen::random_three_layer(&mut rng, n, k);
            params.push(("n", ParamValue::Int(n as i64)));
            params.push(("k", ParamValue::Int(k as i64)));
            params.push((
                "sizes",
                ParamValue::IntList(vec![
                    fam.lower().len() as i64,
                    fam.middle().len() as i64,
                    fam.upper().len() as i64,
                ]),
            ));
            let ups = three_layer_upsilons(&fam);
            let total_ok = ups.total == fam.middle_layer_count() * k as u128 * (n - k) as u128;
            let prof = crate::three_layer::profiles(&fam);
            let profile_ok = prof.sum_f() == prof.sum_fbreve() && prof.sum_g() == prof.sum_gbreve();
            let main = main_ineq_check(&fam).expect("generator output is diamond-free");
            let upsi = upsilons_ineq_check(&fam).expect("diamond-free");
            let l6 = profile_exclusion_check(&fam).expect("diamond-free");
            checks.push(("total", total_ok));
            checks.push(("profile_identities", profile_ok));
            checks.push(("main_ineq", main.holds));
            checks.push(("upsilons", upsi.holds));
            checks.push(("upsilons_identity", upsi.identity_ok));
            checks.push(("lemma6_u", l6.holds_u));
            checks.push(("lemma6_s", l6.holds_s));
        }
        SuiteKind::Compression => {
            let m = 4 + (index % 6) as u32; // 4..=9
            let local = gen::random_valid_local(&mut rng, m);
            params.push(("m", ParamValue::Int(m as i64)));
            params.push(("size", ParamValue::Int(local.family().len() as i64)));
            let compressed = compress(&local).expect("generator output is valid");
            let valid = validate_local(&compressed).is_none();
            let before = chain_census(local.family()).expect("m small").count(3);
            let after = chain_census(compressed.family()).expect("m small").count(3);
            checks.push(("compressed_valid", valid));
            checks.push(("monotone", before <= after));
        }
        SuiteKind::StarUb3 => {
            let m = 4 + (index % 6) as u32; // 4..=9
            let local = gen::random_valid_local(&mut rng, m);
            params.push(("m", ParamValue::Int(m as i64)));
            params.push(("size", ParamValue::Int(local.family().len() as i64)));
            let star = star_lower_bound(&local).expect("m >= 3 and valid");
            let ub3 = ub3_upper_bound(&local).expect("m >= 4 and valid");
            params.push(("star_bound", ParamValue::Text(star.bound.to_string())));
            params.push(("star_actual", ParamValue::Text(star.actual.to_string())));
            params.push(("ub3_bound", ParamValue::Text(ub3.bound.to_string())));
            params.push(("ub3_actual", ParamValue::Text(ub3.actual.to_string())));
            checks.push(("star", star.holds));
            checks.push(("ub3", ub3.holds));
        }
    }

    CaseOutcome {
        suite,
        case_index: index,
        seed,
        params,
        checks,
    }
}

/// Outcome of a chain-decomposition shift case (used by the decomposition
/// acceptance checks; not one of the named CLI suites).
pub fn run_shift_case(root_seed: u64, index: u64) -> CaseOutcome {
    let seed = gen::case_seed(root_seed, index);
    let mut rng = gen::case_rng(root_seed, index);
    let n = 5 + (index % 6) as u32; // 5..=10
    let family = gen::random_three_size_family(&mut rng, n);
    let mut params = vec![
        ("n", ParamValue::Int(n as i64)),
        ("family_size", ParamValue::Int(family.len() as i64)),
    ];
    let out = shift_three_layers(&family).expect("three sizes by construction");
    let k = out.shifted.middle_index();
    params.push(("k", ParamValue::Int(k as i64)));

    let big_n = crate::lattice::middle_layer_size(n as u64)
        .to_u128()
        .unwrap();
    let n_prime = out.shifted.middle_layer_count();
    let free = out.shifted.q2_witness().is_none();
    let size_ok = family.len() as u128 <= out.shifted.len() as u128 + 2 * (big_n - n_prime);
    let unshifted_ok = out.unshifted_lower as u128 <= big_n - n_prime
        && out.unshifted_upper as u128 <= big_n - n_prime;
    let checks = vec![
        ("shift_free", free),
        ("size_bound", size_ok),
        ("unshifted_bound", unshifted_ok),
    ];
    CaseOutcome {
        suite: SuiteKind::ThreeLayer,
        case_index: index,
        seed,
        params,
        checks,
    }
}
