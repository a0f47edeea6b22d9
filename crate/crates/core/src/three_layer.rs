//! Families spread over three consecutive layers `k-1, k, k+1`: containment
//! profiles, exact counts of 3-element chains by number of members they
//! carry, the chain-count and profile inequalities that every diamond-free
//! instance satisfies, and the chain-decomposition shift that moves an
//! arbitrary three-size family onto consecutive layers.
//!
//! The exact inequalities here hold for every diamond-free instance as
//! given; no preliminary trimming of oversized extreme layers is needed or
//! performed.

use crate::lattice::{binom, Family, LatticeError, Subset};
use crate::pattern::{q2_witness, Q2Witness};
use crate::scd::{chains_through_layer, scd_decompose, ScdError};
use num_traits::ToPrimitive;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThreeLayerError {
    #[error("middle index k={k} out of range for n={n} (need 1 <= k <= n-1)")]
    BadK { n: u32, k: u32 },
    #[error("member {member} has size {got}, expected layer size {expected}")]
    LayerMismatch {
        member: Subset,
        expected: u32,
        got: u32,
    },
    #[error("family is not diamond-free: witness {0}")]
    NotQ2Free(Q2Witness),
    #[error("family has {0} distinct member sizes, expected exactly 3")]
    NotThreeSizes(usize),
    #[error(transparent)]
    Scd(#[from] ScdError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Sub-families of the three consecutive layers `k-1`, `k`, `k+1`.
#[derive(Clone, Debug)]
pub struct ThreeLayerFamily {
    n: u32,
    k: u32,
    lower: Family,
    middle: Family,
    upper: Family,
}

impl ThreeLayerFamily {
    pub fn new(
        n: u32,
        k: u32,
        lower: Family,
        middle: Family,
        upper: Family,
    ) -> Result<Self, ThreeLayerError> {
        if k == 0 || k >= n {
            return Err(ThreeLayerError::BadK { n, k });
        }
        for (fam, expected) in [(&lower, k - 1), (&middle, k), (&upper, k + 1)] {
            if fam.ground() != n {
                return Err(LatticeError::MixedGround {
                    expected: n,
                    got: fam.ground(),
                }
                .into());
            }
            for s in fam.iter() {
                if s.size() != expected {
                    return Err(ThreeLayerError::LayerMismatch {
                        member: *s,
                        expected,
                        got: s.size(),
                    });
                }
            }
        }
        Ok(ThreeLayerFamily {
            n,
            k,
            lower,
            middle,
            upper,
        })
    }

    pub fn ground(&self) -> u32 {
        self.n
    }

    pub fn middle_index(&self) -> u32 {
        self.k
    }

    pub fn lower(&self) -> &Family {
        &self.lower
    }

    pub fn middle(&self) -> &Family {
        &self.middle
    }

    pub fn upper(&self) -> &Family {
        &self.upper
    }

    pub fn len(&self) -> usize {
        self.lower.len() + self.middle.len() + self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All members as one family (sizes are distinct across layers).
    pub fn union_family(&self) -> Family {
        let mut members: Vec<Subset> = Vec::with_capacity(self.len());
        members.extend(self.lower.iter());
        members.extend(self.middle.iter());
        members.extend(self.upper.iter());
        Family::from_subsets(self.n, members).expect("layers are disjoint")
    }

    pub fn q2_witness(&self) -> Option<Q2Witness> {
        q2_witness(&self.union_family())
    }

    fn require_q2_free(&self) -> Result<(), ThreeLayerError> {
        match self.q2_witness() {
            None => Ok(()),
            Some(w) => Err(ThreeLayerError::NotQ2Free(w)),
        }
    }

    /// `C(n, k)` as u128.
    pub fn middle_layer_count(&self) -> u128 {
        binom(self.n as u64, self.k as i64)
            .to_u128()
            .expect("layer size fits u128 for n <= 64")
    }
}

/// Containment profiles: how many middle members sit above each lower member
/// (`f`) and below each upper member (`g`), and how many lower/upper members
/// sit below/above each middle member (`fbreve`/`gbreve`). Count vectors are
/// aligned with the canonical member order of the respective layer family.
#[derive(Clone, Debug)]
pub struct Profiles {
    pub f: Vec<u64>,
    pub g: Vec<u64>,
    pub fbreve: Vec<u64>,
    pub gbreve: Vec<u64>,
}

impl Profiles {
    pub fn sum_f(&self) -> u128 {
        self.f.iter().map(|&x| x as u128).sum()
    }

    pub fn sum_g(&self) -> u128 {
        self.g.iter().map(|&x| x as u128).sum()
    }

    pub fn sum_fbreve(&self) -> u128 {
        self.fbreve.iter().map(|&x| x as u128).sum()
    }

    pub fn sum_gbreve(&self) -> u128 {
        self.gbreve.iter().map(|&x| x as u128).sum()
    }
}

pub fn profiles(fam: &ThreeLayerFamily) -> Profiles {
    let t_masks: HashSet<u64> = fam.middle.masks().collect();
    let s_masks: HashSet<u64> = fam.lower.masks().collect();
    let u_masks: HashSet<u64> = fam.upper.masks().collect();
    let n = fam.n;

    let f = fam
        .lower
        .iter()
        .map(|x| {
            (0..n)
                .filter(|&b| x.mask() >> b & 1 == 0 && t_masks.contains(&(x.mask() | 1 << b)))
                .count() as u64
        })
        .collect();
    let g = fam
        .upper
        .iter()
        .map(|z| {
            (0..n)
                .filter(|&b| z.mask() >> b & 1 == 1 && t_masks.contains(&(z.mask() ^ 1 << b)))
                .count() as u64
        })
        .collect();
    let fbreve = fam
        .middle
        .iter()
        .map(|y| {
            (0..n)
                .filter(|&b| y.mask() >> b & 1 == 1 && s_masks.contains(&(y.mask() ^ 1 << b)))
                .count() as u64
        })
        .collect();
    let gbreve = fam
        .middle
        .iter()
        .map(|y| {
            (0..n)
                .filter(|&b| y.mask() >> b & 1 == 0 && u_masks.contains(&(y.mask() | 1 << b)))
                .count() as u64
        })
        .collect();
    Profiles {
        f,
        g,
        fbreve,
        gbreve,
    }
}

/// Exact counts of the 3-element chains `X ⊂ Y ⊂ Z` through the three layers
/// by the number of family members among `{X, Y, Z}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripleChainCounts {
    pub counts: [u128; 4],
    pub total: u128,
}

pub fn three_layer_upsilons(fam: &ThreeLayerFamily) -> TripleChainCounts {
    let n = fam.n;
    let k = fam.k;
    let s_masks: HashSet<u64> = fam.lower.masks().collect();
    let t_masks: HashSet<u64> = fam.middle.masks().collect();
    let u_masks: HashSet<u64> = fam.upper.masks().collect();

    let mut counts = [0u128; 4];
    let layer_k = crate::lattice::layer(n, k).expect("k in range");
    for y in layer_k.iter() {
        let ym = y.mask();
        let fb = (0..n)
            .filter(|&b| ym >> b & 1 == 1 && s_masks.contains(&(ym ^ 1 << b)))
            .count() as u128;
        let gb = (0..n)
            .filter(|&b| ym >> b & 1 == 0 && u_masks.contains(&(ym | 1 << b)))
            .count() as u128;
        let t_in = usize::from(t_masks.contains(&ym));
        let below = k as u128;
        let above = (n - k) as u128;
        counts[t_in + 2] += fb * gb;
        counts[t_in + 1] += fb * (above - gb) + (below - fb) * gb;
        counts[t_in] += (below - fb) * (above - gb);
    }
    let total: u128 = counts.iter().sum();
    let expected = fam.middle_layer_count() * fam.k as u128 * (fam.n - fam.k) as u128;
    assert_eq!(total, expected, "triple-chain total must be N'*k*(n-k)");
    TripleChainCounts { counts, total }
}

/// `(k+1)k|U| + k(n-k)|T| + (n-k+1)(n-k)|S| <= 2 N' k(n-k) + Y3 - Y1`.
#[derive(Clone, Copy, Debug)]
pub struct MainIneqReport {
    pub lhs: u128,
    pub rhs: i128,
    pub holds: bool,
}

pub fn main_ineq_check(fam: &ThreeLayerFamily) -> Result<MainIneqReport, ThreeLayerError> {
    fam.require_q2_free()?;
    let (n, k) = (fam.n as u128, fam.k as u128);
    let ups = three_layer_upsilons(fam);
    let lhs = (k + 1) * k * fam.upper.len() as u128
        + k * (n - k) * fam.middle.len() as u128
        + (n - k + 1) * (n - k) * fam.lower.len() as u128;
    let rhs = 2 * (fam.middle_layer_count() * k * (n - k)) as i128 + ups.counts[3] as i128
        - ups.counts[1] as i128;
    Ok(MainIneqReport {
        lhs,
        rhs,
        holds: (lhs as i128) <= rhs,
    })
}

/// `Y3 - Y1 <= Σ_Y [fbreve(Y) gbreve(Y) - (k - fbreve(Y))(n-k - gbreve(Y))]`,
/// with the algebraic rewrite of the bound checked exactly.
#[derive(Clone, Copy, Debug)]
pub struct UpsilonsIneqReport {
    pub lhs_diff: i128,
    pub bound: i128,
    pub identity_ok: bool,
    pub holds: bool,
}

pub fn upsilons_ineq_check(fam: &ThreeLayerFamily) -> Result<UpsilonsIneqReport, ThreeLayerError> {
    fam.require_q2_free()?;
    let (n, k) = (fam.n as i128, fam.k as i128);
    let ups = three_layer_upsilons(fam);
    let prof = profiles(fam);
    let bound: i128 = prof
        .fbreve
        .iter()
        .zip(&prof.gbreve)
        .map(|(&fb, &gb)| fb as i128 * gb as i128 - (k - fb as i128) * (n - k - gb as i128))
        .sum();
    let rewrite = (n - k) * prof.sum_f() as i128 + k * prof.sum_g() as i128
        - fam.middle.len() as i128 * k * (n - k);
    let lhs_diff = ups.counts[3] as i128 - ups.counts[1] as i128;
    Ok(UpsilonsIneqReport {
        lhs_diff,
        bound,
        identity_ok: bound == rewrite,
        holds: lhs_diff <= bound,
    })
}

/// The two exact profile inequalities bounding `Σ f` and `Σ g`: upper members
/// above a lower member exclude pairs of its middle supersets, and dually.
#[derive(Clone, Copy, Debug)]
pub struct ProfileExclusionReport {
    pub holds_u: bool,
    pub holds_s: bool,
}

fn choose2_u128(x: u128) -> u128 {
    x * x.saturating_sub(1) / 2
}

pub fn profile_exclusion_check(
    fam: &ThreeLayerFamily,
) -> Result<ProfileExclusionReport, ThreeLayerError> {
    fam.require_q2_free()?;
    let (n, k) = (fam.n as u128, fam.k as u128);
    let prof = profiles(fam);
    let binom_u128 = |n: u64, k: i64| -> u128 { binom(n, k).to_u128().expect("fits for n <= 64") };

    let lhs_u = choose2_u128(k + 1) * fam.upper.len() as u128
        + prof
            .f
            .iter()
            .map(|&fx| choose2_u128(fx as u128))
            .sum::<u128>();
    let rhs_u = binom_u128(fam.n as u64, fam.k as i64 - 1) * choose2_u128(n - k + 1);

    let lhs_s = choose2_u128(n - k + 1) * fam.lower.len() as u128
        + prof
            .g
            .iter()
            .map(|&gz| choose2_u128(gz as u128))
            .sum::<u128>();
    let rhs_s = binom_u128(fam.n as u64, fam.k as i64 + 1) * choose2_u128(k + 1);

    Ok(ProfileExclusionReport {
        holds_u: lhs_u <= rhs_u,
        holds_s: lhs_s <= rhs_s,
    })
}

/// Size report against `(3+sqrt(2))/2 * N'` (report only: the comparison
/// carries lower-order terms that vanish only asymptotically).
#[derive(Clone, Copy, Debug)]
pub struct SizeBoundReport {
    pub size: usize,
    pub bound: f64,
}

pub fn size_bound_report(fam: &ThreeLayerFamily) -> Result<SizeBoundReport, ThreeLayerError> {
    fam.require_q2_free()?;
    let bound = (3.0 + 2.0f64.sqrt()) / 2.0 * fam.middle_layer_count() as f64;
    Ok(SizeBoundReport {
        size: fam.len(),
        bound,
    })
}

/// Outcome of shifting a three-size family onto consecutive layers along the
/// chains of the symmetric chain decomposition.
#[derive(Clone, Debug)]
pub struct ShiftOutcome {
    pub shifted: ThreeLayerFamily,
    pub unshifted_lower: usize,
    pub unshifted_upper: usize,
}

/// Shifts the extreme layers of a family with exactly three distinct member
/// sizes onto the layers adjacent to the middle one. Lower/upper members are
/// moved along their decomposition chain when that chain meets the middle
/// layer; members on chains missing the middle layer are dropped and counted.
/// Preserves diamond-freeness.
pub fn shift_three_layers(family: &Family) -> Result<ShiftOutcome, ThreeLayerError> {
    let mut sizes: Vec<u32> = family.iter().map(Subset::size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() != 3 {
        return Err(ThreeLayerError::NotThreeSizes(sizes.len()));
    }
    let n = family.ground();
    let k = sizes[1];
    let was_free = q2_witness(family).is_none();

    let lower_in: Vec<Subset> = family
        .iter()
        .filter(|s| s.size() == sizes[0])
        .copied()
        .collect();
    let middle: Vec<Subset> = family.iter().filter(|s| s.size() == k).copied().collect();
    let upper_in: Vec<Subset> = family
        .iter()
        .filter(|s| s.size() == sizes[2])
        .copied()
        .collect();

    let scd = scd_decompose(n)?;
    let chain_of = scd.chain_index_map();
    let through: HashSet<usize> = chains_through_layer(&scd, k)
        .into_iter()
        .map(|c| chain_of[&c[0].mask()])
        .collect();

    let shift_to = |members: &[Subset], target: u32| -> (Vec<Subset>, usize) {
        let mut out = Vec::new();
        let mut dropped = 0usize;
        for s in members {
            let ci = chain_of[&s.mask()];
            if through.contains(&ci) {
                let chain = &scd.chains()[ci];
                let lo = chain[0].size();
                out.push(chain[(target - lo) as usize]);
            } else {
                dropped += 1;
            }
        }
        (out, dropped)
    };

    let (lower_shifted, unshifted_lower) = shift_to(&lower_in, k - 1);
    let (upper_shifted, unshifted_upper) = shift_to(&upper_in, k + 1);

    // Each chain holds at most one member per layer, and distinct chains map
    // to distinct layer sets, so the shifted lists are duplicate-free.
    let shifted = ThreeLayerFamily::new(
        n,
        k,
        Family::from_subsets(n, lower_shifted)?,
        Family::from_subsets(n, middle)?,
        Family::from_subsets(n, upper_shifted)?,
    )?;
    if was_free {
        assert!(
            shifted.q2_witness().is_none(),
            "shift must preserve diamond-freeness"
        );
    }
    Ok(ShiftOutcome {
        shifted,
        unshifted_lower,
        unshifted_upper,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::layer;

    fn full_three(n: u32, k: u32) -> ThreeLayerFamily {
        ThreeLayerFamily::new(
            n,
            k,
            layer(n, k - 1).unwrap(),
            layer(n, k).unwrap(),
            layer(n, k + 1).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(matches!(
            ThreeLayerFamily::new(4, 0, Family::empty(4), Family::empty(4), Family::empty(4)),
            Err(ThreeLayerError::BadK { .. })
        ));
        let bad = ThreeLayerFamily::new(
            4,
            2,
            layer(4, 2).unwrap(), // wrong size for the lower layer
            Family::empty(4),
            Family::empty(4),
        );
        assert!(matches!(bad, Err(ThreeLayerError::LayerMismatch { .. })));
    }

    #[test]
    fn profiles_full_layers() {
        let fam = full_three(5, 2);
        let prof = profiles(&fam);
        // Every lower member has all n-k+1 middle supersets present.
        assert!(prof.f.iter().all(|&v| v == 4));
        assert_eq!(prof.sum_f(), prof.sum_fbreve());
        assert_eq!(prof.sum_g(), prof.sum_gbreve());
    }

    #[test]
    fn profiles_empty_middle() {
        let fam = ThreeLayerFamily::new(
            5,
            2,
            layer(5, 1).unwrap(),
            Family::empty(5),
            layer(5, 3).unwrap(),
        )
        .unwrap();
        let prof = profiles(&fam);
        assert!(prof.f.iter().all(|&v| v == 0));
        assert!(prof.g.iter().all(|&v| v == 0));
        assert!(prof.fbreve.is_empty());
        assert!(prof.gbreve.is_empty());
    }

    #[test]
    fn upsilons_full_and_empty() {
        let fam = full_three(6, 3);
        let ups = three_layer_upsilons(&fam);
        let expected = fam.middle_layer_count() * 3 * 3;
        assert_eq!(ups.counts, [0, 0, 0, expected]);

        let empty =
            ThreeLayerFamily::new(6, 3, Family::empty(6), Family::empty(6), Family::empty(6))
                .unwrap();
        let ups = three_layer_upsilons(&empty);
        assert_eq!(ups.counts[0], ups.total);
    }

    #[test]
    fn upsilons_match_enumeration_oracle() {
        let cases = [
            full_three(5, 2),
            ThreeLayerFamily::new(
                5,
                2,
                Family::new(5, [0b00001]).unwrap(),
                Family::new(5, [0b00011, 0b00101, 0b01001]).unwrap(),
                Family::new(5, [0b11100]).unwrap(),
            )
            .unwrap(),
            ThreeLayerFamily::new(
                6,
                3,
                Family::empty(6),
                layer(6, 3).unwrap(),
                Family::empty(6),
            )
            .unwrap(),
        ];
        for fam in &cases {
            let ups = three_layer_upsilons(fam);
            assert_eq!(ups.counts, oracle::upsilons_by_enumeration(fam));
        }
    }

    #[test]
    fn upsilons_match_oracle_on_random_instances() {
        // Arbitrary sub-families of the three layers, diamonds allowed.
        use rand::prelude::*;
        let mut rng = rand_pcg::Pcg64Mcg::seed_from_u64(0x3a7e);
        for _ in 0..60 {
            let n = rng.gen_range(3..=6u32);
            let k = rng.gen_range(1..n);
            let p: f64 = rng.gen_range(0.1..0.9);
            let pick = |kk: u32, rng: &mut rand_pcg::Pcg64Mcg| {
                Family::new(n, layer(n, kk).unwrap().masks().filter(|_| rng.gen_bool(p))).unwrap()
            };
            let lower = pick(k - 1, &mut rng);
            let middle = pick(k, &mut rng);
            let upper = pick(k + 1, &mut rng);
            let fam = ThreeLayerFamily::new(n, k, lower, middle, upper).unwrap();
            let ups = three_layer_upsilons(&fam);
            assert_eq!(ups.counts, oracle::upsilons_by_enumeration(&fam));
        }
    }

    #[test]
    fn upsilons_ineq_empty_middle() {
        // Empty middle layer: the bound is an empty sum and no triple can
        // carry three members.
        let fam = ThreeLayerFamily::new(
            5,
            2,
            layer(5, 1).unwrap(),
            Family::empty(5),
            layer(5, 3).unwrap(),
        )
        .unwrap();
        let r = upsilons_ineq_check(&fam).unwrap();
        assert_eq!(r.bound, 0);
        assert!(r.identity_ok);
        assert!(r.holds);
    }

    #[test]
    fn main_ineq_middle_layer_equality() {
        // T = full middle layer, S = U = empty: lhs = k(n-k)N' and
        // rhs = 2N'k(n-k) - N'k(n-k), equality.
        let n = 5u32;
        let k = 2u32;
        let fam = ThreeLayerFamily::new(
            n,
            k,
            Family::empty(n),
            layer(n, k).unwrap(),
            Family::empty(n),
        )
        .unwrap();
        let r = main_ineq_check(&fam).unwrap();
        assert_eq!(r.lhs as i128, r.rhs);
        assert!(r.holds);
    }

    #[test]
    fn main_ineq_empty_family() {
        let fam = ThreeLayerFamily::new(4, 2, Family::empty(4), Family::empty(4), Family::empty(4))
            .unwrap();
        let r = main_ineq_check(&fam).unwrap();
        assert_eq!(r.lhs, 0);
        assert!(r.holds);
    }

    #[test]
    fn main_ineq_rejects_diamond() {
        // Full three layers contain diamonds for n >= 4.
        let fam = full_three(4, 2);
        assert!(matches!(
            main_ineq_check(&fam),
            Err(ThreeLayerError::NotQ2Free(_))
        ));
    }

    #[test]
    fn upsilons_ineq_middle_layer_equality() {
        let fam = ThreeLayerFamily::new(
            5,
            2,
            Family::empty(5),
            layer(5, 2).unwrap(),
            Family::empty(5),
        )
        .unwrap();
        let r = upsilons_ineq_check(&fam).unwrap();
        assert_eq!(r.lhs_diff, r.bound);
        assert!(r.identity_ok);
        assert!(r.holds);
    }

    #[test]
    fn lemma6_structured_example() {
        // S = {{1}}, T = all middle supersets of {1}: every upper member
        // above {1} would close a diamond, so U ⊆ {{2,3,4}} only.
        let n = 4u32;
        let s = Family::new(n, [0b0001]).unwrap();
        let t = Family::new(n, [0b0011, 0b0101, 0b1001]).unwrap();
        for u_masks in [vec![], vec![0b1110u64]] {
            let u = Family::new(n, u_masks).unwrap();
            let fam = ThreeLayerFamily::new(n, 2, s.clone(), t.clone(), u).unwrap();
            let r = profile_exclusion_check(&fam).unwrap();
            assert!(r.holds_u && r.holds_s);
        }
        // Adding an upper member above {1} creates a diamond and is rejected.
        let bad = ThreeLayerFamily::new(n, 2, s, t, Family::new(n, [0b0111]).unwrap()).unwrap();
        assert!(matches!(
            profile_exclusion_check(&bad),
            Err(ThreeLayerError::NotQ2Free(_))
        ));
    }

    #[test]
    fn profile_exclusion_empty_lower() {
        let fam = ThreeLayerFamily::new(
            5,
            2,
            Family::empty(5),
            Family::empty(5),
            layer(5, 3).unwrap(),
        )
        .unwrap();
        let r = profile_exclusion_check(&fam).unwrap();
        assert!(r.holds_u && r.holds_s);
    }

    #[test]
    fn size_bound_report_values() {
        let fam = ThreeLayerFamily::new(4, 2, Family::empty(4), Family::empty(4), Family::empty(4))
            .unwrap();
        let r = size_bound_report(&fam).unwrap();
        assert_eq!(r.size, 0);
        assert!((r.bound - 13.242640687).abs() < 1e-6);
    }

    #[test]
    fn shift_consecutive_even_middle_keeps_everything() {
        // n even, k = n/2: every chain through layers k±1 also meets layer k.
        let n = 6u32;
        let k = 3u32;
        let fam = Family::new(
            n,
            [
                0b000011u64, // size 2
                0b000111,    // size 3
                0b011100,
                0b111100, // size 4
            ],
        )
        .unwrap();
        let out = shift_three_layers(&fam).unwrap();
        assert_eq!(out.unshifted_lower, 0);
        assert_eq!(out.unshifted_upper, 0);
        assert_eq!(out.shifted.len(), fam.len());
        assert_eq!(out.shifted.middle_index(), k);
    }

    #[test]
    fn shift_requires_three_sizes() {
        let fam = Family::new(4, [0b0001, 0b0011]).unwrap();
        assert!(matches!(
            shift_three_layers(&fam),
            Err(ThreeLayerError::NotThreeSizes(2))
        ));
    }

    #[test]
    fn shift_spread_sizes() {
        // Sizes (1, 3, 5) over n = 6 collapse onto layers 2, 3, 4.
        let fam = Family::new(6, [0b000001, 0b000111, 0b011111]).unwrap();
        let out = shift_three_layers(&fam).unwrap();
        assert_eq!(out.shifted.middle_index(), 3);
        assert!(out.shifted.lower().iter().all(|s| s.size() == 2));
        assert!(out.shifted.upper().iter().all(|s| s.size() == 4));
        assert!(out.shifted.q2_witness().is_none());
    }
}
