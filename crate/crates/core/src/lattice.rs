//! Ground representations: subsets of `[n]` as bitmasks, families in canonical
//! order, exact binomials/factorials, the family file format, and the exact
//! binomial tail-sum check.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

/// Largest supported ground size. Masks are single `u64` words.
pub const MAX_GROUND: u32 = 64;

/// One element of the Boolean lattice over `[n] = {1..n}`.
///
/// Element `i` (1-based) is present iff bit `i-1` of `mask` is set.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    mask: u64,
    n: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("ground size {0} exceeds the supported maximum {MAX_GROUND}")]
    GroundTooLarge(u32),
    #[error("mask {mask:#x} has bits above ground size {n}")]
    MaskOutOfRange { mask: u64, n: u32 },
    #[error("layer index {k} out of range for ground size {n}")]
    LayerOutOfRange { n: u32, k: u32 },
    #[error("duplicate subset in family: {0}")]
    DuplicateMember(String),
    #[error("subset ground size {got} does not match family ground size {expected}")]
    MixedGround { expected: u32, got: u32 },
}

/// Mask with the low `n` bits set.
pub fn full_mask(n: u32) -> u64 {
    if n == 0 {
        0
    } else {
        u64::MAX >> (64 - n)
    }
}

impl Subset {
    pub fn new(n: u32, mask: u64) -> Result<Self, LatticeError> {
        if n > MAX_GROUND {
            return Err(LatticeError::GroundTooLarge(n));
        }
        if mask & !full_mask(n) != 0 {
            return Err(LatticeError::MaskOutOfRange { mask, n });
        }
        Ok(Subset { mask, n })
    }

    pub fn empty(n: u32) -> Self {
        Subset { mask: 0, n }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn ground(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn contains_element(&self, i: u32) -> bool {
        debug_assert!((1..=self.n).contains(&i));
        self.mask >> (i - 1) & 1 == 1
    }

    /// 1-based elements, ascending.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        let mask = self.mask;
        (1..=self.n).filter(move |i| mask >> (i - 1) & 1 == 1)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.mask & !other.mask == 0
    }

    pub fn is_proper_subset_of(&self, other: &Subset) -> bool {
        self.mask != other.mask && self.is_subset_of(other)
    }

    /// Canonical order: by size, then by numeric mask.
    pub fn canonical_key(&self) -> (u32, u64) {
        (self.size(), self.mask)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for e in self.elements() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// A duplicate-free collection of subsets of a common ground set, kept in
/// canonical order (size, then mask).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Family {
    n: u32,
    members: Vec<Subset>,
}

impl Family {
    pub fn new(n: u32, masks: impl IntoIterator<Item = u64>) -> Result<Self, LatticeError> {
        let subsets = masks
            .into_iter()
            .map(|m| Subset::new(n, m))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_subsets(n, subsets)
    }

    pub fn from_subsets(n: u32, mut members: Vec<Subset>) -> Result<Self, LatticeError> {
        if n > MAX_GROUND {
            return Err(LatticeError::GroundTooLarge(n));
        }
        for s in &members {
            if s.ground() != n {
                return Err(LatticeError::MixedGround {
                    expected: n,
                    got: s.ground(),
                });
            }
        }
        members.sort_by_key(Subset::canonical_key);
        for w in members.windows(2) {
            if w[0].mask == w[1].mask {
                return Err(LatticeError::DuplicateMember(w[0].to_string()));
            }
        }
        Ok(Family { n, members })
    }

    pub fn empty(n: u32) -> Self {
        Family {
            n,
            members: Vec::new(),
        }
    }

    pub fn ground(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Subset> {
        self.members.iter()
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.members.iter().any(|s| s.mask() == mask)
    }

    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().map(Subset::mask)
    }

    /// True iff no member properly contains another.
    pub fn is_antichain(&self) -> bool {
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                if a.is_proper_subset_of(b) || b.is_proper_subset_of(a) {
                    return false;
                }
            }
        }
        true
    }

    /// Members with no proper subset among the members.
    pub fn minimal_members(&self) -> Vec<Subset> {
        self.members
            .iter()
            .filter(|a| !self.members.iter().any(|b| b.is_proper_subset_of(a)))
            .copied()
            .collect()
    }
}

/// Exact binomial coefficient; 0 when `k` is out of range.
pub fn binom(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k as u64))
}

/// Exact `n!`.
pub fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// Size of a middle layer, `C(n, floor(n/2))`.
pub fn middle_layer_size(n: u64) -> BigUint {
    binom(n, (n / 2) as i64)
}

/// All subsets of size `k`, canonically ordered.
pub fn layer(n: u32, k: u32) -> Result<Family, LatticeError> {
    if k > n {
        return Err(LatticeError::LayerOutOfRange { n, k });
    }
    let mut members = Vec::new();
    if k == 0 {
        members.push(Subset::empty(n));
    } else {
        // Gosper's hack enumerates k-subsets in increasing mask order.
        let mut mask = full_mask(k);
        let limit = full_mask(n);
        loop {
            members.push(Subset::new(n, mask)?);
            if mask == full_mask(k) << (n - k) {
                break;
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
            if mask > limit {
                break;
            }
        }
    }
    Family::from_subsets(n, members)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TailBoundError {
    #[error("tail bound check requires n >= 8, got {0}")]
    TooSmall(u64),
}

/// Result of the exact binomial tail-sum comparison, in the log2 domain.
#[derive(Debug, Clone, PartialEq)]
pub struct TailBoundReport {
    /// log2 of the exact sum of C(n,k) over the tail k's.
    pub lhs_log2: f64,
    /// log2 of `2^(n+1) * e^(-n^(1/3))`.
    pub rhs_log2: f64,
    pub holds: bool,
    /// Tail threshold actually used: least integer t with t^3 >= n^2.
    pub threshold: u64,
}

/// Least integer `t` with `t^3 >= n^2`, i.e. `ceil(n^(2/3))`.
fn ceil_two_thirds_power(n: u64) -> u64 {
    let n2 = (n as u128) * (n as u128);
    let mut t = (n as f64).powf(2.0 / 3.0).round() as u64;
    while t > 0 && (t as u128 - 1).pow(3) >= n2 {
        t -= 1;
    }
    while (t as u128).pow(3) < n2 {
        t += 1;
    }
    t
}

/// log2 of a positive big integer, accurate to ~1e-15 relative.
pub fn log2_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log2 of zero");
    let bits = x.bits();
    if bits <= 64 {
        (x.to_u64().unwrap() as f64).log2()
    } else {
        let shift = bits - 64;
        let mant = (x >> shift).to_u64().unwrap() as f64;
        mant.log2() + shift as f64
    }
}

/// Sums `C(n,k)` exactly over all k with `|k - n/2| >= ceil(n^(2/3))` and
/// compares against `2^(n+1) e^(-n^(1/3))` in the log2 domain.
///
/// The binomials are summed as exact integers; only the final comparison is
/// floating point. The threshold comparison `|2k - n| >= 2t` is pure integer
/// arithmetic.
pub fn tail_bound_check(n: u64) -> Result<TailBoundReport, TailBoundError> {
    if n < 8 {
        return Err(TailBoundError::TooSmall(n));
    }
    let t = ceil_two_thirds_power(n);
    let mut sum = BigUint::zero();
    let mut c = BigUint::one(); // C(n, 0)
    for k in 0..=n {
        if k > 0 {
            // C(n,k) = C(n,k-1) * (n-k+1) / k, exact at every step.
            c = c * BigUint::from(n - k + 1) / BigUint::from(k);
        }
        let dist2 = (2 * k as i128 - n as i128).unsigned_abs() as u64;
        if dist2 >= 2 * t {
            sum += &c;
        }
    }
    let lhs_log2 = if sum.is_zero() {
        f64::NEG_INFINITY
    } else {
        log2_biguint(&sum)
    };
    let rhs_log2 = (n as f64 + 1.0) - (n as f64).cbrt() * std::f64::consts::LOG2_E;
    Ok(TailBoundReport {
        lhs_log2,
        rhs_log2,
        holds: lhs_log2 <= rhs_log2,
        threshold: t,
    })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing `n=<size>` header line")]
    MissingHeader,
    #[error("invalid header line: {0:?}")]
    InvalidHeader(String),
    #[error("line {line_no}: expected {expected} characters, got {got}")]
    LineLength {
        line_no: usize,
        expected: u32,
        got: usize,
    },
    #[error("line {line_no}: invalid character {ch:?} (expected '0' or '1')")]
    InvalidChar { line_no: usize, ch: char },
    #[error("line {line_no}: duplicate subset {line:?}")]
    DuplicateSubset { line_no: usize, line: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Parses the family file format: header `n=<decimal>`, then one `{0,1}`
/// string of exactly `n` characters per non-empty line (character i = element
/// i), with `#` comment lines.
pub fn parse_family(text: &str) -> Result<Family, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let n: u32 = header
        .strip_prefix("n=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| ParseError::InvalidHeader(header.to_string()))?;
    if n > MAX_GROUND {
        return Err(LatticeError::GroundTooLarge(n).into());
    }
    let mut masks: Vec<u64> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (line_no, line) in lines {
        if line.chars().count() != n as usize {
            return Err(ParseError::LineLength {
                line_no,
                expected: n,
                got: line.chars().count(),
            });
        }
        let mut mask = 0u64;
        for (i, ch) in line.chars().enumerate() {
            match ch {
                '1' => mask |= 1 << i,
                '0' => {}
                ch => return Err(ParseError::InvalidChar { line_no, ch }),
            }
        }
        if !seen.insert(mask) {
            return Err(ParseError::DuplicateSubset {
                line_no,
                line: line.to_string(),
            });
        }
        masks.push(mask);
    }
    Ok(Family::new(n, masks)?)
}

/// Renders one member as its `{0,1}` line.
pub fn subset_line(s: &Subset) -> String {
    (1..=s.ground())
        .map(|i| if s.contains_element(i) { '1' } else { '0' })
        .collect()
}

/// Inverse of [`parse_family`]; members appear in canonical order.
///
/// A family over an empty ground set can only be serialized when it has no
/// members: the line for `∅` would be empty, and the format skips empty
/// lines.
pub fn serialize_family(f: &Family) -> String {
    assert!(
        f.ground() >= 1 || f.is_empty(),
        "the file format cannot represent members over an empty ground set"
    );
    let mut out = format!("n={}\n", f.ground());
    for s in f.iter() {
        out.push_str(&subset_line(s));
        out.push('\n');
    }
    out
}
