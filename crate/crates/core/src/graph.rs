//! The auxiliary graph of a relabeled local family: vertices `[eta]`, edges
//! the 2-element minimal members. Carries degree sequences, the count of
//! triples inducing exactly one edge, and the full typed census of 4-vertex
//! induced subgraphs, together with the exact degree-sum identities they
//! satisfy.

use crate::local::RelabeledLocal;
use num_rational::Rational64;
use num_traits::Zero;
use thiserror::Error;

/// Hard cap on vertex count for the 4-subset census.
pub const CENSUS_ETA_LIMIT: u32 = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("eta {0} exceeds the 4-subset census limit {1}")]
    EtaTooLarge(u32, u32),
    #[error("eta {eta} exceeds ground size {m}")]
    EtaExceedsGround { eta: u32, m: u32 },
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(u32, u32),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),
    #[error("operation requires eta >= {required}, got {eta}")]
    EtaTooSmall { eta: u32, required: u32 },
    #[error("operation requires eta < m, got eta = {eta}, m = {m}")]
    EtaNotBelowGround { eta: u32, m: u32 },
    #[error("invalid graph text: {0}")]
    Parse(String),
}

/// Typed counts of 4-vertex induced subgraphs by edge count, with the
/// 2-edge and 3-edge classes split by shape.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BetaCensus {
    /// No edges.
    pub beta0: u64,
    /// Exactly one edge.
    pub beta1: u64,
    /// Two disjoint edges.
    pub beta_par: u64,
    /// Two adjacent edges.
    pub beta_wedge: u64,
    /// A triangle (plus an isolated vertex).
    pub beta_triangle: u64,
    /// A star with three edges.
    pub beta_star: u64,
    /// A path with three edges.
    pub beta_path: u64,
    /// Four edges.
    pub beta4: u64,
    /// Five edges.
    pub beta5: u64,
    /// Six edges.
    pub beta6: u64,
}

impl BetaCensus {
    pub fn total(&self) -> u64 {
        self.beta0
            + self.beta1
            + self.beta_par
            + self.beta_wedge
            + self.beta_triangle
            + self.beta_star
            + self.beta_path
            + self.beta4
            + self.beta5
            + self.beta6
    }
}

/// Statistics of the auxiliary graph on `[eta]` inside a ground of size `m`.
#[derive(Clone, Debug)]
pub struct AuxGraphStats {
    pub m: u32,
    pub eta: u32,
    /// Edges as 1-based pairs `(i, j)`, `i < j`, sorted.
    pub edges: Vec<(u32, u32)>,
    pub e: u64,
    pub ebar: u64,
    /// `eta / m`.
    pub a: Rational64,
    /// `e / C(eta, 2)`, defined as 0 when `eta < 2`.
    pub b: Rational64,
    pub deg: Vec<u32>,
    pub degbar: Vec<u32>,
    /// Triples of `[eta]` inducing exactly one edge.
    pub alpha1: u64,
    pub beta: BetaCensus,
    /// Census of the complement graph.
    pub beta_bar: BetaCensus,
}

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

fn choose3(x: u64) -> u64 {
    if x < 3 {
        0
    } else {
        x * (x - 1) * (x - 2) / 6
    }
}

fn choose4(x: u64) -> u64 {
    if x < 4 {
        0
    } else {
        x * (x - 1) * (x - 2) * (x - 3) / 24
    }
}

fn classify(census: &mut BetaCensus, degs: [u32; 4], edge_count: u32) {
    let max_deg = *degs.iter().max().unwrap();
    match edge_count {
        0 => census.beta0 += 1,
        1 => census.beta1 += 1,
        2 => {
            if max_deg == 1 {
                census.beta_par += 1
            } else {
                census.beta_wedge += 1
            }
        }
        3 => {
            if max_deg == 3 {
                census.beta_star += 1
            } else if degs.contains(&0) {
                census.beta_triangle += 1
            } else {
                census.beta_path += 1
            }
        }
        4 => census.beta4 += 1,
        5 => census.beta5 += 1,
        6 => census.beta6 += 1,
        _ => unreachable!(),
    }
}

impl AuxGraphStats {
    /// Builds the statistics from an explicit vertex count, ground size and
    /// edge list, under the default census limit.
    pub fn from_parts(m: u32, eta: u32, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        Self::from_parts_with_limit(m, eta, edges, CENSUS_ETA_LIMIT)
    }

    pub fn from_parts_with_limit(
        m: u32,
        eta: u32,
        edges: &[(u32, u32)],
        eta_limit: u32,
    ) -> Result<Self, GraphError> {
        if eta > eta_limit {
            return Err(GraphError::EtaTooLarge(eta, eta_limit));
        }
        if eta > m {
            return Err(GraphError::EtaExceedsGround { eta, m });
        }
        let mut sorted: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(i, j) in edges {
            if i == 0 || j == 0 || i >= j || j > eta {
                return Err(GraphError::InvalidEdge(i, j));
            }
            sorted.push((i, j));
        }
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }

        // Adjacency as vertex bitmasks (eta <= 24).
        let mut adj = vec![0u32; eta as usize];
        for &(i, j) in &sorted {
            adj[(i - 1) as usize] |= 1 << (j - 1);
            adj[(j - 1) as usize] |= 1 << (i - 1);
        }
        let deg: Vec<u32> = adj.iter().map(|a| a.count_ones()).collect();
        let degbar: Vec<u32> = deg.iter().map(|&d| eta.saturating_sub(1) - d).collect();
        let e = sorted.len() as u64;
        let ebar = choose2(eta as u64) - e;

        let mut alpha1 = 0u64;
        for x in 0..eta as usize {
            for y in x + 1..eta as usize {
                for z in y + 1..eta as usize {
                    let induced = (adj[x] >> y & 1) + (adj[x] >> z & 1) + (adj[y] >> z & 1);
                    if induced == 1 {
                        alpha1 += 1;
                    }
                }
            }
        }

        let mut beta = BetaCensus::default();
        let mut beta_bar = BetaCensus::default();
        for p in 0..eta as usize {
            for q in p + 1..eta as usize {
                for r in q + 1..eta as usize {
                    for s in r + 1..eta as usize {
                        let verts = [p, q, r, s];
                        let mut degs = [0u32; 4];
                        let mut count = 0u32;
                        for (ai, &va) in verts.iter().enumerate() {
                            for (bi, &vb) in verts.iter().enumerate().skip(ai + 1) {
                                if adj[va] >> vb & 1 == 1 {
                                    degs[ai] += 1;
                                    degs[bi] += 1;
                                    count += 1;
                                }
                            }
                        }
                        classify(&mut beta, degs, count);
                        let bar_degs = [3 - degs[0], 3 - degs[1], 3 - degs[2], 3 - degs[3]];
                        classify(&mut beta_bar, bar_degs, 6 - count);
                    }
                }
            }
        }
        debug_assert_eq!(beta.total(), choose4(eta as u64));
        debug_assert_eq!(beta_bar.total(), choose4(eta as u64));

        let a = if m == 0 {
            Rational64::zero()
        } else {
            Rational64::new(eta as i64, m as i64)
        };
        let b = if eta < 2 {
            Rational64::zero()
        } else {
            Rational64::new(e as i64, choose2(eta as u64) as i64)
        };
        Ok(AuxGraphStats {
            m,
            eta,
            edges: sorted,
            e,
            ebar,
            a,
            b,
            deg,
            degbar,
            alpha1,
            beta,
            beta_bar,
        })
    }

    /// Builds the auxiliary graph of a relabeled local family: vertex set
    /// `[eta]`, edges the 2-element minimal members.
    pub fn from_relabeled(rel: &RelabeledLocal) -> Result<Self, GraphError> {
        let parts = crate::local::partition_tu(&rel.local)
            .expect("relabeled local family validated at construction");
        let mut edges = Vec::new();
        for s in parts.minimals.iter().filter(|s| s.size() == 2) {
            let elems: Vec<u32> = s.elements().collect();
            edges.push((elems[0], elems[1]));
        }
        Self::from_parts(rel.local.ground(), rel.eta, &edges)
    }

    /// Parses `eta=<int>` followed by one `i j` edge per line (1-based,
    /// i < j); the ground size is supplied separately.
    pub fn parse(text: &str, m: u32) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| GraphError::Parse("missing `eta=<int>` header".into()))?;
        let eta: u32 = header
            .strip_prefix("eta=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| GraphError::Parse(format!("bad header {header:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let parse_pair = (|| Some((it.next()?.parse().ok()?, it.next()?.parse().ok()?)))();
            match parse_pair {
                Some(pair) => edges.push(pair),
                None => return Err(GraphError::Parse(format!("bad edge line {line:?}"))),
            }
        }
        Self::from_parts(m, eta, &edges)
    }
}

/// The four exact degree-sum identities relating degree statistics to the
/// typed 4-subset censuses of the graph and its complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeSumIdentities {
    pub deg_degbar2: bool,
    pub deg3: bool,
    pub degbar_deg2: bool,
    pub degbar3: bool,
}

impl DegreeSumIdentities {
    pub fn all_hold(&self) -> bool {
        self.deg_degbar2 && self.deg3 && self.degbar_deg2 && self.degbar3
    }
}

pub fn degree_sum_identities(stats: &AuxGraphStats) -> Result<DegreeSumIdentities, GraphError> {
    if stats.eta < 4 {
        return Err(GraphError::EtaTooSmall {
            eta: stats.eta,
            required: 4,
        });
    }
    let (beta, bar) = (&stats.beta, &stats.beta_bar);
    let lhs1: u64 = stats
        .deg
        .iter()
        .zip(&stats.degbar)
        .map(|(&d, &db)| d as u64 * choose2(db as u64))
        .sum();
    let rhs1 = 2 * beta.beta1
        + 4 * beta.beta_par
        + 2 * beta.beta_wedge
        + 2 * beta.beta_path
        + 3 * beta.beta_star
        + bar.beta_wedge;

    let lhs2: u64 = stats.deg.iter().map(|&d| choose3(d as u64)).sum();
    let rhs2 = beta.beta_star + bar.beta_wedge + 2 * bar.beta1 + 4 * bar.beta0;

    let lhs3: u64 = stats
        .deg
        .iter()
        .zip(&stats.degbar)
        .map(|(&d, &db)| db as u64 * choose2(d as u64))
        .sum();
    let rhs3 = 2 * bar.beta1
        + 4 * bar.beta_par
        + 2 * bar.beta_wedge
        + 2 * bar.beta_path
        + 3 * bar.beta_star
        + beta.beta_wedge;

    let lhs4: u64 = stats.degbar.iter().map(|&d| choose3(d as u64)).sum();
    let rhs4 = bar.beta_star + beta.beta_wedge + 2 * beta.beta1 + 4 * beta.beta0;

    Ok(DegreeSumIdentities {
        deg_degbar2: lhs1 == rhs1,
        deg3: lhs2 == rhs2,
        degbar_deg2: lhs3 == rhs3,
        degbar3: lhs4 == rhs4,
    })
}

/// Exact check of `alpha1 * (eta - 3) = 2*beta1 + 4*beta_par + 2*beta_wedge
/// + 3*beta_triangle + 2*beta_path + beta_bar_wedge`.
pub fn alpha1_identity_check(stats: &AuxGraphStats) -> Result<bool, GraphError> {
    if stats.eta < 4 {
        return Err(GraphError::EtaTooSmall {
            eta: stats.eta,
            required: 4,
        });
    }
    let beta = &stats.beta;
    let lhs = stats.alpha1 * (stats.eta as u64 - 3);
    let rhs = 2 * beta.beta1
        + 4 * beta.beta_par
        + 2 * beta.beta_wedge
        + 3 * beta.beta_triangle
        + 2 * beta.beta_path
        + stats.beta_bar.beta_wedge;
    Ok(lhs == rhs)
}

/// Decomposition of `C(eta, 4)` into the typed census classes, plus the two
/// complement coincidences (complement of a triangle is a 3-star and the
/// 3-path class is self-complementary).
pub fn census_structure_check(stats: &AuxGraphStats) -> bool {
    let beta = &stats.beta;
    let bar = &stats.beta_bar;
    let decomposition = beta.beta0
        + beta.beta1
        + (beta.beta_par + beta.beta_wedge)
        + (beta.beta_triangle + beta.beta_path + beta.beta_star)
        + beta.beta4
        + beta.beta5
        + beta.beta6
        == choose4(stats.eta as u64);
    decomposition && bar.beta_triangle == beta.beta_star && bar.beta_path == beta.beta_path
}

/// Piecewise weight used by the chain-count bounds: 1 below 1/2, else
/// `(1-a)/a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuValue {
    pub a: Rational64,
    pub mu: Rational64,
}

pub fn mu(a: Rational64) -> MuValue {
    let half = Rational64::new(1, 2);
    let mu = if a < half {
        Rational64::from_integer(1)
    } else {
        (Rational64::from_integer(1) - a) / a
    };
    MuValue { a, mu }
}

/// Exact midline of the 4-subset counting argument plus the floating-point
/// final bound (reported, not asserted — it absorbs lower-order terms).
#[derive(Clone, Debug)]
pub struct CensusBoundReport {
    pub q: Rational64,
    pub midline_rhs: Rational64,
    pub midline_holds: bool,
    pub final_bound: f64,
}

/// The midline compares `Q = (eta-3) * (alpha1 + 3*beta0/(m-3))` against the
/// typed-census expression; the inequality is strict exactly when `beta0 > 0`
/// (and an equality when `beta0 = 0`), so `midline_holds` demands strictness
/// only in the former case.
pub fn graph_census_bound(stats: &AuxGraphStats) -> Result<CensusBoundReport, GraphError> {
    if stats.eta < 4 {
        return Err(GraphError::EtaTooSmall {
            eta: stats.eta,
            required: 4,
        });
    }
    if stats.eta >= stats.m {
        return Err(GraphError::EtaNotBelowGround {
            eta: stats.eta,
            m: stats.m,
        });
    }
    let eta = stats.eta as i64;
    let m = stats.m as i64;
    let beta = &stats.beta;
    let bar = &stats.beta_bar;
    let rat = Rational64::from_integer;

    let q =
        rat(eta - 3) * (rat(stats.alpha1 as i64) + rat(3) * rat(beta.beta0 as i64) / rat(m - 3));
    let a = stats.a;
    let midline_rhs = rat(3 * choose4(stats.eta as u64) as i64)
        + (rat(3) * a - rat(3)) * rat(beta.beta0 as i64)
        - rat(beta.beta1 as i64)
        + rat(beta.beta_par as i64)
        - rat(beta.beta_wedge as i64)
        - rat(beta.beta_path as i64)
        - rat(3 * beta.beta_star as i64)
        - rat(2 * bar.beta_wedge as i64)
        - rat(3 * bar.beta_par as i64)
        - rat(3 * bar.beta1 as i64)
        - rat(3 * bar.beta0 as i64);
    let midline_holds = if beta.beta0 > 0 {
        q < midline_rhs
    } else {
        q <= midline_rhs
    };

    let etaf = stats.eta as f64;
    let ef = stats.e as f64;
    let af = stats.eta as f64 / stats.m as f64;
    let final_bound =
        etaf.powi(3) / 8.0 + (ef * ef / etaf) * (af - 2.0) + (ef * etaf / 4.0) * (4.0 - 3.0 * af)
            - (1.0 - af) * etaf.powi(3) / 8.0;

    Ok(CensusBoundReport {
        q,
        midline_rhs,
        midline_holds,
        final_bound,
    })
}

/// Exact form of the degree-sequence relaxation: the truncated excess-degree
/// sum of the complement is at most `(2*ebar/(eta-1)) * (2*eta - m)`, clamped
/// below at zero. Requires `eta >= 2`.
pub fn degree_relaxation_check(stats: &AuxGraphStats) -> Result<bool, GraphError> {
    if stats.eta < 2 {
        return Err(GraphError::EtaTooSmall {
            eta: stats.eta,
            required: 2,
        });
    }
    let m = stats.m as i64;
    let lhs: i64 = stats
        .degbar
        .iter()
        .map(|&d| 0i64.max(2 * d as i64 - m + 2))
        .sum();
    let raw = Rational64::new(
        2 * stats.ebar as i64 * (2 * stats.eta as i64 - m),
        stats.eta as i64 - 1,
    );
    let rhs = raw.max(Rational64::zero());
    Ok(Rational64::from_integer(lhs) <= rhs)
}
