//! Exact classification of k-selfdual projective toric embeddings given by
//! lattice point configurations.
//!
//! ```
//! use kselfdual::{classify, families};
//!
//! let hexagon = families::togliatti();
//! let verdict = classify(&hexagon, 2);
//! assert!(verdict.selfdual);
//! assert_eq!(verdict.c_k, 1);
//! ```

pub mod claims;
pub mod config;
pub mod dualdim;
pub mod exactla;
pub mod families;
pub mod osculation;
pub mod search;
pub mod selfdual;
pub mod serde_num;

pub use config::{parse, LatticeConfiguration};
pub use osculation::{hilbert_function, jet_matrix, JetData};
pub use selfdual::{classify, SelfdualVerdict};
