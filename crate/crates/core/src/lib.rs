//! Exact verification toolkit for diamond-free (Q2-free) families in the
//! Boolean lattice: chain censuses, local structure, three-layer
//! inequalities, bound optimization, and exact extremal search.
//!
//! A family is diamond-free when no four members `a, b, c, d` satisfy
//! `a ⊂ b, c ⊂ d` under inclusion. All counts are exact.
//!
//! ```
//! use q2lab_core::census::{chain_capacity_check, chain_census};
//! use q2lab_core::lattice::{factorial, parse_family};
//!
//! // The two sets {1} and {1,2} of the lattice over {1,2}.
//! let family = parse_family("n=2\n10\n11\n").unwrap();
//!
//! // One full chain meets the family twice, the other once.
//! let census = chain_census(&family).unwrap();
//! assert_eq!(census.count(1), 1u32.into());
//! assert_eq!(census.count(2), 1u32.into());
//! assert_eq!(census.total(), factorial(2));
//!
//! // The chain-capacity inequality is exact and holds here.
//! assert!(chain_capacity_check(&family).unwrap().holds);
//! ```

pub mod census;
pub mod gen;
pub mod graph;
pub mod lattice;
pub mod local;
pub mod optimize;
pub mod pattern;
pub mod scd;
pub mod search;
pub mod suites;
pub mod three_layer;
