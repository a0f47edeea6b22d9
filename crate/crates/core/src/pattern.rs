//! Subposet pattern detection: small abstract posets given by strict
//! relations, a backtracking embedding search, and the specialized
//! diamond (Q2) witness finder.
//!
//! Containment is non-induced: an embedding must preserve every stated
//! relation as strict inclusion, but incomparabilities need not be preserved
//! (so, for example, a 4-chain contains a diamond).

use crate::lattice::{Family, Subset};
use thiserror::Error;

/// A small poset on elements `1..=size` given by strict relations `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetPattern {
    size: usize,
    relations: Vec<(usize, usize)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern size must be at least 1")]
    EmptyPattern,
    #[error("relation ({0}, {1}) out of range")]
    RelationOutOfRange(usize, usize),
    #[error("reflexive relation ({0}, {0}) not allowed")]
    Reflexive(usize),
    #[error("relations contain a cycle")]
    Cyclic,
    #[error("invalid pattern text: {0}")]
    Parse(String),
}

impl PosetPattern {
    pub fn new(size: usize, relations: Vec<(usize, usize)>) -> Result<Self, PatternError> {
        if size == 0 {
            return Err(PatternError::EmptyPattern);
        }
        for &(i, j) in &relations {
            if i == 0 || j == 0 || i > size || j > size {
                return Err(PatternError::RelationOutOfRange(i, j));
            }
            if i == j {
                return Err(PatternError::Reflexive(i));
            }
        }
        let p = PosetPattern { size, relations };
        if p.has_cycle() {
            return Err(PatternError::Cyclic);
        }
        Ok(p)
    }

    fn has_cycle(&self) -> bool {
        // Kahn toposort over the relation digraph.
        let mut indeg = vec![0usize; self.size + 1];
        for &(_, j) in &self.relations {
            indeg[j] += 1;
        }
        let mut queue: Vec<usize> = (1..=self.size).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &(i, j) in &self.relations {
                if i == v {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        queue.push(j);
                    }
                }
            }
        }
        seen != self.size
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relations(&self) -> &[(usize, usize)] {
        &self.relations
    }

    /// The diamond: a < b, a < c, b < d, c < d.
    pub fn q2() -> Self {
        PosetPattern::new(4, vec![(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap()
    }

    /// A k-element chain.
    pub fn chain(k: usize) -> Result<Self, PatternError> {
        PosetPattern::new(k, (1..k).map(|i| (i, i + 1)).collect())
    }

    /// The V with two arms: a < b, a < c.
    pub fn v2() -> Self {
        PosetPattern::new(3, vec![(1, 2), (1, 3)]).unwrap()
    }

    /// The butterfly: a, b < c, d.
    pub fn butterfly() -> Self {
        PosetPattern::new(4, vec![(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap()
    }

    /// Named built-ins: `q2`, `v2`, `butterfly`, `chain<k>`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "q2" => Some(Self::q2()),
            "v2" => Some(Self::v2()),
            "butterfly" => Some(Self::butterfly()),
            _ => name
                .strip_prefix("chain")
                .and_then(|k| k.parse::<usize>().ok())
                .and_then(|k| Self::chain(k).ok()),
        }
    }

    /// Parses `p=<size>` followed by one `i<j` relation per line.
    pub fn parse(text: &str) -> Result<Self, PatternError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| PatternError::Parse("missing `p=<size>` header".into()))?;
        let size: usize = header
            .strip_prefix("p=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| PatternError::Parse(format!("bad header {header:?}")))?;
        let mut relations = Vec::new();
        for line in lines {
            let (i, j) = line
                .split_once('<')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| PatternError::Parse(format!("bad relation {line:?}")))?;
            relations.push((i, j));
        }
        PosetPattern::new(size, relations)
    }
}

/// Searches for a non-induced embedding of `pattern` into the inclusion order
/// of `family`. Returns the image of each pattern element (index `i-1` holds
/// the image of element `i`), or `None` if no embedding exists.
pub fn contains_pattern(family: &Family, pattern: &PosetPattern) -> Option<Vec<Subset>> {
    let members = family.members();
    if members.len() < pattern.size() {
        return None;
    }
    let mut assignment: Vec<Option<usize>> = vec![None; pattern.size()];
    let mut used = vec![false; members.len()];
    fn backtrack(
        members: &[Subset],
        pattern: &PosetPattern,
        assignment: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        elem: usize,
    ) -> bool {
        if elem == pattern.size() {
            return true;
        }
        'cand: for cand in 0..members.len() {
            if used[cand] {
                continue;
            }
            for &(i, j) in pattern.relations() {
                // Check every relation both of whose endpoints are assigned
                // once `elem` is tentatively mapped to `cand`.
                let img = |e: usize| -> Option<usize> {
                    if e == elem + 1 {
                        Some(cand)
                    } else {
                        assignment[e - 1]
                    }
                };
                if let (Some(a), Some(b)) = (img(i), img(j)) {
                    if !members[a].is_proper_subset_of(&members[b]) {
                        continue 'cand;
                    }
                }
            }
            assignment[elem] = Some(cand);
            used[cand] = true;
            if backtrack(members, pattern, assignment, used, elem + 1) {
                return true;
            }
            assignment[elem] = None;
            used[cand] = false;
        }
        false
    }
    if backtrack(members, pattern, &mut assignment, &mut used, 0) {
        Some(
            assignment
                .into_iter()
                .map(|i| members[i.unwrap()])
                .collect(),
        )
    } else {
        None
    }
}

/// A concrete diamond inside a family: `a ⊊ b, a ⊊ c, b ⊊ d, c ⊊ d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Q2Witness {
    pub a: Subset,
    pub b: Subset,
    pub c: Subset,
    pub d: Subset,
}

impl std::fmt::Display for Q2Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} < {}, {} < {}", self.a, self.b, self.c, self.d)
    }
}

/// Finds a diamond witness, or `None` iff the family is Q2-free.
///
/// Specialized criterion: a witness exists iff some pair `A ⊊ D` of members
/// has at least two members strictly between them. Agrees with
/// `contains_pattern(family, q2)` on every input.
///
/// Middles between `A` and `D` are found by enumerating the proper submasks
/// of `D∖A` against a membership set, so pairs two sizes apart cost two
/// lookups and pairs of adjacent sizes are skipped outright.
pub fn q2_witness(family: &Family) -> Option<Q2Witness> {
    let members = family.members();
    if members.len() < 4 {
        return None;
    }
    let n = family.ground();
    let present: std::collections::HashSet<u64> = family.masks().collect();
    let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); n as usize + 1];
    for s in members {
        by_size[s.size() as usize].push(s.mask());
    }
    // Scan pairs in canonical order so the reported witness is deterministic.
    for sa in 0..=n as usize {
        for sd in sa + 2..=n as usize {
            for &a in &by_size[sa] {
                for &d in &by_size[sd] {
                    if a & d != a {
                        continue;
                    }
                    let diff = d ^ a;
                    let mut mids = [0u64; 2];
                    let mut found = 0usize;
                    // Proper nonempty submasks of the gap, ascending.
                    let mut sub = diff & diff.wrapping_neg();
                    while sub != diff && found < 2 {
                        if present.contains(&(a | sub)) {
                            mids[found] = a | sub;
                            found += 1;
                        }
                        sub = (sub.wrapping_sub(diff)) & diff;
                    }
                    if found == 2 {
                        return Some(Q2Witness {
                            a: Subset::new(n, a).expect("member mask"),
                            b: Subset::new(n, mids[0]).expect("member mask"),
                            c: Subset::new(n, mids[1]).expect("member mask"),
                            d: Subset::new(n, d).expect("member mask"),
                        });
                    }
                }
            }
        }
    }
    None
}

/// Convenience predicate over [`q2_witness`].
pub fn is_q2_free(family: &Family) -> bool {
    q2_witness(family).is_none()
}

/// Incremental freeness test: given a diamond-free, duplicate-free set of
/// masks, decides whether adding `x` keeps it diamond-free. Any new diamond
/// must involve `x`, as the top, the bottom, or one of the two middles.
pub fn extends_q2_free(chosen: &[u64], x: u64) -> bool {
    let subs: Vec<u64> = chosen
        .iter()
        .copied()
        .filter(|&b| b != x && b & x == b)
        .collect();
    let sups: Vec<u64> = chosen
        .iter()
        .copied()
        .filter(|&d| d != x && d & x == x)
        .collect();
    // x as the top: two chosen sets strictly between a chosen b and x.
    for &b in &subs {
        if subs.iter().filter(|&&m| m != b && m & b == b).count() >= 2 {
            return false;
        }
    }
    // x as the bottom.
    for &d in &sups {
        if sups.iter().filter(|&&m| m != d && m & d == m).count() >= 2 {
            return false;
        }
    }
    // x as one of the two middles: a chosen m with b ⊊ m ⊊ d for some
    // subset b and superset d of x makes m and x two middles of (b, d).
    for &m in chosen {
        let has_b = subs.iter().any(|&b| b != m && m & b == b);
        let has_d = sups.iter().any(|&d| d != m && d & m == m);
        if has_b && has_d {
            return false;
        }
    }
    true
}
