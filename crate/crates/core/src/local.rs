//! Local sub-lattice machinery: the family `{F∖S : S ⊆ F ∈ ℱ}` seen from a
//! minimal member `S`, its minimal/upper partition, canonical relabeling,
//! compression, and the exact lower/upper chain-count bounds that hold for
//! every valid local family.

use crate::census::{chain_census, CensusError};
use crate::graph::{AuxGraphStats, GraphError};
use crate::lattice::{factorial, full_mask, Family, LatticeError, Subset};
use num_bigint::{BigInt, BigUint};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LocalError {
    #[error("the empty set must be a member of a local family")]
    EmptyNotMember,
    #[error("local structure violated: {1} and {2} are both proper nonempty subsets of {0}")]
    NotLocal(Subset, Subset, Subset),
    #[error("{0} is not a member of the family")]
    NotMember(Subset),
    #[error("{0} is not a minimal member of the family")]
    NotMinimal(Subset),
    #[error("ground size {m} too small, need at least {required}")]
    GroundTooSmall { m: u32, required: u32 },
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A family over `[m]` containing the empty set. Extracted local families of
/// a diamond-free family additionally satisfy: every nonempty member has at
/// most one nonempty proper subset among the members ([`validate_local`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFamily {
    family: Family,
}

impl LocalFamily {
    pub fn new(family: Family) -> Result<Self, LocalError> {
        if !family.contains_mask(0) {
            return Err(LocalError::EmptyNotMember);
        }
        Ok(LocalFamily { family })
    }

    pub fn from_masks(m: u32, masks: impl IntoIterator<Item = u64>) -> Result<Self, LocalError> {
        Self::new(Family::new(m, masks)?)
    }

    pub fn ground(&self) -> u32 {
        self.family.ground()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Nonempty members.
    pub fn nonempty(&self) -> impl Iterator<Item = &Subset> {
        self.family.iter().filter(|s| s.size() > 0)
    }
}

/// The local family at a minimal member `s`: `{F∖S : S ⊆ F ∈ ℱ}` relabeled
/// onto `[m]`, `m = n - |S|`, plus the relabeling (index `i-1` holds the
/// original element that became element `i`).
#[derive(Clone, Debug)]
pub struct LocalExtract {
    pub local: LocalFamily,
    pub new_to_old: Vec<u32>,
}

pub fn extract_local(family: &Family, s: Subset) -> Result<LocalExtract, LocalError> {
    let n = family.ground();
    if !family.contains_mask(s.mask()) {
        return Err(LocalError::NotMember(s));
    }
    if family.iter().any(|f| f.is_proper_subset_of(&s)) {
        return Err(LocalError::NotMinimal(s));
    }
    let comp = full_mask(n) & !s.mask();
    let m = n - s.size();
    let new_to_old: Vec<u32> = (1..=n).filter(|&i| comp >> (i - 1) & 1 == 1).collect();
    let masks = family
        .masks()
        .filter(|&f| f & s.mask() == s.mask())
        .map(|f| compress_mask(f & comp, comp));
    let local = LocalFamily::new(Family::new(m, masks)?)?;
    Ok(LocalExtract { local, new_to_old })
}

fn compress_mask(value: u64, selector: u64) -> u64 {
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

/// `None` iff no nonempty member has two distinct nonempty proper subsets
/// among the members (which also rules out chains of three nonempty
/// members). Otherwise a violating triple `(y1, y2, x)` with `y1, y2 ⊊ x`.
pub fn validate_local(g: &LocalFamily) -> Option<(Subset, Subset, Subset)> {
    let nonempty: Vec<&Subset> = g.nonempty().collect();
    for x in &nonempty {
        let mut first: Option<Subset> = None;
        for y in &nonempty {
            if y.is_proper_subset_of(x) {
                match first {
                    None => first = Some(**y),
                    Some(y1) => return Some((y1, **y, **x)),
                }
            }
        }
    }
    None
}

fn require_valid(g: &LocalFamily) -> Result<(), LocalError> {
    match validate_local(g) {
        None => Ok(()),
        Some((y1, y2, x)) => Err(LocalError::NotLocal(x, y1, y2)),
    }
}

/// Minimal nonempty members, the rest, and the minimals grouped by size
/// (`by_size[i]` holds the minimal members of size `i+1`).
#[derive(Clone, Debug)]
pub struct TuPartition {
    pub minimals: Family,
    pub uppers: Family,
    pub by_size: Vec<Family>,
}

pub fn partition_tu(g: &LocalFamily) -> Result<TuPartition, LocalError> {
    require_valid(g)?;
    let m = g.ground();
    let nonempty: Vec<Subset> = g.nonempty().copied().collect();
    let mut t = Vec::new();
    let mut u = Vec::new();
    for x in &nonempty {
        if nonempty.iter().any(|y| y.is_proper_subset_of(x)) {
            u.push(*x);
        } else {
            t.push(*x);
        }
    }
    let max_size = t.iter().map(|s| s.size()).max().unwrap_or(0);
    let by_size = (1..=max_size)
        .map(|k| {
            Family::from_subsets(m, t.iter().filter(|s| s.size() == k).copied().collect())
                .expect("size group of a family is a family")
        })
        .collect();
    Ok(TuPartition {
        minimals: Family::from_subsets(m, t).expect("minimals are duplicate-free"),
        uppers: Family::from_subsets(m, u).expect("uppers are duplicate-free"),
        by_size,
    })
}

/// A local family relabeled so the singleton minimal members occupy
/// `{eta+1}, …, {m}`; all 2-element minimal members then lie inside `[eta]`.
#[derive(Clone, Debug)]
pub struct RelabeledLocal {
    pub local: LocalFamily,
    pub eta: u32,
    /// `perm[i-1]` is the new label of original element `i`.
    pub perm: Vec<u32>,
}

pub fn relabel_eta(g: &LocalFamily) -> Result<RelabeledLocal, LocalError> {
    require_valid(g)?;
    let m = g.ground();
    let parts = partition_tu(g)?;
    let t1_mask: u64 = parts
        .minimals
        .iter()
        .filter(|s| s.size() == 1)
        .fold(0u64, |acc, s| acc | s.mask());
    let eta = m - t1_mask.count_ones();

    let mut perm = vec![0u32; m as usize];
    let mut next_low = 1u32;
    let mut next_high = eta + 1;
    for i in 1..=m {
        if t1_mask >> (i - 1) & 1 == 1 {
            perm[(i - 1) as usize] = next_high;
            next_high += 1;
        } else {
            perm[(i - 1) as usize] = next_low;
            next_low += 1;
        }
    }

    let relabel = |mask: u64| -> u64 {
        let mut out = 0u64;
        for i in 1..=m {
            if mask >> (i - 1) & 1 == 1 {
                out |= 1 << (perm[(i - 1) as usize] - 1);
            }
        }
        out
    };
    let local = LocalFamily::new(Family::new(m, g.family.masks().map(relabel))?)?;

    // Minimality forces every 2-element minimal member inside [eta].
    let parts = partition_tu(&local)?;
    for s in parts.minimals.iter().filter(|s| s.size() == 2) {
        assert!(
            s.mask() & !full_mask(eta) == 0,
            "2-element minimal member {s} escapes [eta] after relabeling"
        );
    }
    Ok(RelabeledLocal { local, eta, perm })
}

/// The compressed family: keeps `∅` and the minimal members, and replaces all
/// upper members by every `(|T|+1)`-element superset of each minimal `T` that
/// contains no other minimal member.
pub fn compress(g: &LocalFamily) -> Result<LocalFamily, LocalError> {
    require_valid(g)?;
    let m = g.ground();
    let parts = partition_tu(g)?;
    let minimals: Vec<u64> = parts.minimals.masks().collect();
    let mut masks: Vec<u64> = vec![0];
    masks.extend(&minimals);
    for &t in &minimals {
        for x in 0..m {
            if t >> x & 1 == 1 {
                continue;
            }
            let v = t | 1 << x;
            let blocked = minimals.iter().any(|&t0| t0 != t && v & t0 == t0);
            if !blocked {
                masks.push(v);
            }
        }
    }
    let out = LocalFamily::new(Family::new(m, masks)?)?;
    debug_assert!(validate_local(&out).is_none());
    Ok(out)
}

/// Exact lower bound on the number of full chains meeting the local family
/// only in `∅`, derived from the non-edges of the auxiliary graph.
#[derive(Clone, Debug)]
pub struct StarReport {
    pub bound: BigInt,
    pub actual: BigUint,
    pub holds: bool,
    pub eta: u32,
}

pub fn star_lower_bound(g: &LocalFamily) -> Result<StarReport, LocalError> {
    let m = g.ground();
    if m < 3 {
        return Err(LocalError::GroundTooSmall { m, required: 3 });
    }
    require_valid(g)?;
    let rel = relabel_eta(g)?;
    let stats = AuxGraphStats::from_relabeled(&rel)?;
    let eta = rel.eta;

    let inner: i128 = 2 * stats.ebar as i128
        - stats
            .degbar
            .iter()
            .map(|&d| 0i128.max(2 * d as i128 - m as i128 + 2))
            .sum::<i128>();
    let bound = BigInt::from((m - eta) as u64) * BigInt::from(factorial(m as u64 - 3)) * inner;
    let actual = chain_census(g.family())?.count(1);
    let holds = BigInt::from(actual.clone()) >= bound;
    Ok(StarReport {
        bound,
        actual,
        holds,
        eta,
    })
}

/// Exact upper bound on the number of full chains meeting the local family
/// in `∅` plus two more members, in terms of the auxiliary graph.
#[derive(Clone, Debug)]
pub struct Ub3Report {
    pub bound: BigUint,
    pub actual: BigUint,
    pub holds: bool,
    pub eta: u32,
}

pub fn ub3_upper_bound(g: &LocalFamily) -> Result<Ub3Report, LocalError> {
    let m = g.ground() as u64;
    if m < 4 {
        return Err(LocalError::GroundTooSmall {
            m: m as u32,
            required: 4,
        });
    }
    require_valid(g)?;
    let rel = relabel_eta(g)?;
    let stats = AuxGraphStats::from_relabeled(&rel)?;
    let eta = rel.eta as u64;

    let bound = BigUint::from((m - eta) * eta) * factorial(m - 2)
        + BigUint::from(2u32) * factorial(m - 3) * BigUint::from(stats.alpha1)
        + BigUint::from(6u32) * factorial(m - 4) * BigUint::from(stats.beta.beta0);
    let actual = chain_census(g.family())?.count(3);
    let holds = actual <= bound;
    Ok(Ub3Report {
        bound,
        actual,
        holds,
        eta: eta as u32,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn extract_simple() {
        let f = Family::new(3, [0b001, 0b011, 0b101]).unwrap();
        let s = Subset::new(3, 0b001).unwrap();
        let ex = extract_local(&f, s).unwrap();
        assert_eq!(ex.local.ground(), 2);
        assert_eq!(
            ex.local.family().masks().collect::<Vec<_>>(),
            vec![0b00, 0b01, 0b10]
        );
        assert_eq!(ex.new_to_old, vec![2, 3]);
    }

    #[test]
    fn extract_single_member() {
        let f = Family::new(4, [0b0011]).unwrap();
        let s = Subset::new(4, 0b0011).unwrap();
        let ex = extract_local(&f, s).unwrap();
        assert_eq!(ex.local.ground(), 2);
        assert_eq!(ex.local.family().len(), 1);
        assert!(ex.local.family().contains_mask(0));
    }

    #[test]
    fn extract_rejects_non_member_and_non_minimal() {
        let f = Family::new(3, [0b001, 0b011]).unwrap();
        let not_member = Subset::new(3, 0b100).unwrap();
        assert!(matches!(
            extract_local(&f, not_member),
            Err(LocalError::NotMember(_))
        ));
        let not_minimal = Subset::new(3, 0b011).unwrap();
        assert!(matches!(
            extract_local(&f, not_minimal),
            Err(LocalError::NotMinimal(_))
        ));
    }

    #[test]
    fn validate_finds_violation() {
        let g = LocalFamily::from_masks(2, [0b00, 0b01, 0b10, 0b11]).unwrap();
        let (y1, y2, x) = validate_local(&g).unwrap();
        assert_eq!(x.mask(), 0b11);
        assert_eq!([y1.mask(), y2.mask()], [0b01, 0b10]);

        let g = LocalFamily::from_masks(2, [0b00, 0b01, 0b11]).unwrap();
        assert!(validate_local(&g).is_none());
    }

    #[test]
    fn validate_catches_three_chains() {
        let g = LocalFamily::from_masks(3, [0b000, 0b001, 0b011, 0b111]).unwrap();
        assert!(validate_local(&g).is_some());
    }

    #[test]
    fn partition_examples() {
        let g = LocalFamily::from_masks(2, [0b00, 0b01, 0b11]).unwrap();
        let p = partition_tu(&g).unwrap();
        assert_eq!(p.minimals.masks().collect::<Vec<_>>(), vec![0b01]);
        assert_eq!(p.uppers.masks().collect::<Vec<_>>(), vec![0b11]);
        assert_eq!(p.by_size.len(), 1);

        let g = LocalFamily::from_masks(3, [0b000]).unwrap();
        let p = partition_tu(&g).unwrap();
        assert!(p.minimals.is_empty());
        assert!(p.uppers.is_empty());
        assert!(p.by_size.is_empty());
    }

    #[test]
    fn partition_rejects_invalid() {
        let g = LocalFamily::from_masks(3, [0b000, 0b001, 0b110, 0b111]).unwrap();
        assert!(matches!(partition_tu(&g), Err(LocalError::NotLocal(..))));
    }

    #[test]
    fn relabel_moves_singletons_up() {
        // T1 = {{2}} over m=3: element 2 relabels to 3, eta = 2.
        let g = LocalFamily::from_masks(3, [0b000, 0b010, 0b101]).unwrap();
        let rel = relabel_eta(&g).unwrap();
        assert_eq!(rel.eta, 2);
        assert_eq!(rel.perm, vec![1, 3, 2]);
        assert!(rel.local.family().contains_mask(0b100)); // {2} -> {3}
        assert!(rel.local.family().contains_mask(0b011)); // {1,3} -> {1,2}
    }

    #[test]
    fn relabel_identity_when_no_singletons() {
        let g = LocalFamily::from_masks(3, [0b000, 0b011]).unwrap();
        let rel = relabel_eta(&g).unwrap();
        assert_eq!(rel.eta, 3);
        assert_eq!(rel.perm, vec![1, 2, 3]);
    }

    #[test]
    fn relabel_figure_scale_example() {
        // m = 9 with four singleton minimal members: eta = 5.
        let g = LocalFamily::from_masks(
            9,
            [
                0b000000000,
                0b000000010, // {2}
                0b000001000, // {4}
                0b001000000, // {7}
                0b100000000, // {9}
                0b000100100, // {3,6}
            ],
        )
        .unwrap();
        let rel = relabel_eta(&g).unwrap();
        assert_eq!(rel.eta, 5);
        // {3,6} must land inside [5].
        let parts = partition_tu(&rel.local).unwrap();
        let two: Vec<Subset> = parts
            .minimals
            .iter()
            .filter(|s| s.size() == 2)
            .copied()
            .collect();
        assert_eq!(two.len(), 1);
        assert!(two[0].mask() & !0b11111 == 0);
    }

    #[test]
    fn compress_definition_example() {
        // {∅,{1},{1,2,3}} over m=3 compresses to {∅,{1},{1,2},{1,3}}.
        let g = LocalFamily::from_masks(3, [0b000, 0b001, 0b111]).unwrap();
        let c = compress(&g).unwrap();
        assert_eq!(
            c.family().masks().collect::<Vec<_>>(),
            vec![0b000, 0b001, 0b011, 0b101]
        );
    }

    #[test]
    fn compress_ignores_old_uppers() {
        // Upper sets do not influence the compressed family.
        let g1 = LocalFamily::from_masks(4, [0b0000, 0b0001, 0b0011]).unwrap();
        let g2 = LocalFamily::from_masks(4, [0b0000, 0b0001, 0b1011]).unwrap();
        assert_eq!(compress(&g1).unwrap(), compress(&g2).unwrap());
    }

    #[test]
    fn compress_blocks_other_minimals() {
        // T = {{1},{2}}: supersets of {1} may not contain {2}.
        let g = LocalFamily::from_masks(3, [0b000, 0b001, 0b010]).unwrap();
        let c = compress(&g).unwrap();
        assert!(!c.family().contains_mask(0b011));
        assert!(c.family().contains_mask(0b101));
        assert!(c.family().contains_mask(0b110));
    }

    #[test]
    fn star_trivial_cases() {
        // eta = m (no singleton minimals): bound = 0.
        let g = LocalFamily::from_masks(4, [0b0000, 0b0011]).unwrap();
        let r = star_lower_bound(&g).unwrap();
        assert_eq!(r.eta, 4);
        assert!(r.bound.is_zero());
        assert!(r.holds);

        // T1 covers everything: eta = 0, bound = 0.
        let g = LocalFamily::from_masks(3, [0b000, 0b001, 0b010, 0b100]).unwrap();
        let r = star_lower_bound(&g).unwrap();
        assert_eq!(r.eta, 0);
        assert!(r.bound.is_zero());
        assert!(r.holds);

        let tiny = LocalFamily::from_masks(2, [0b00]).unwrap();
        assert!(matches!(
            star_lower_bound(&tiny),
            Err(LocalError::GroundTooSmall { .. })
        ));
    }

    #[test]
    fn star_pinned_arithmetic() {
        // Two singleton minimal members over m = 6: eta = 4, no edges, so
        // ebar = 6 and every complement degree is 3. The bound is
        // (m-eta) * (m-3)! * (2*6 - 4*max(0, 2*3-6+2)) = 2 * 6 * 4 = 48,
        // and the census counts 4 * 5! = 480 chains meeting only the empty
        // set.
        let g = LocalFamily::from_masks(6, [0b000000, 0b010000, 0b100000]).unwrap();
        let r = star_lower_bound(&g).unwrap();
        assert_eq!(r.eta, 4);
        assert_eq!(r.bound, BigInt::from(48));
        assert_eq!(r.actual, BigUint::from(480u32));
        assert!(r.holds);
    }

    #[test]
    fn ub3_pinned_arithmetic() {
        // {∅, {1}, {1,2}} over m = 4: after relabeling eta = 3, no edges,
        // alpha1 = 0, beta0 = 0 (no 4-subsets), so the bound reduces to
        // (m-eta) * eta * (m-2)! = 1 * 3 * 2 = 6 against an actual of 2.
        let g = LocalFamily::from_masks(4, [0b0000, 0b0001, 0b0011]).unwrap();
        let r = ub3_upper_bound(&g).unwrap();
        assert_eq!(r.eta, 3);
        assert_eq!(r.bound, BigUint::from(6u32));
        assert_eq!(r.actual, BigUint::from(2u32));
        assert!(r.holds);
    }

    #[test]
    fn ub3_small_by_hand() {
        // {∅,{1},{1,2}} over m=4: chains through all three = 1!*1!*2! = 2.
        let g = LocalFamily::from_masks(4, [0b0000, 0b0001, 0b0011]).unwrap();
        let r = ub3_upper_bound(&g).unwrap();
        assert_eq!(r.actual, BigUint::from(2u32));
        assert!(r.holds);

        let empty_only = LocalFamily::from_masks(4, [0b0000]).unwrap();
        let r = ub3_upper_bound(&empty_only).unwrap();
        assert!(r.actual.is_zero());
        assert!(r.holds);
    }
}
