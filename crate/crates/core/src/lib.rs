//! Self-embeddings of the cyclic Hamming Steiner triple system over GF(2^m)
//! induced by power permutations x^t: rotation lines and spectra, the
//! invariants v and V*, APN tests, the codes C_F, surface topology, an
//! isomorphism search, and full per-degree classification surveys.
//!
//! ```
//! use sts_atlas::{FieldCtx, Permutation, Convention, rotation};
//!
//! let ctx = FieldCtx::new(5, None).unwrap();
//! let f = Permutation::monomial(&ctx, 3).unwrap();
//! let s = rotation::spectrum(&ctx, &f, 1, Convention::default()).unwrap();
//! assert_eq!(s.to_string(), "(2; 10, 20)");
//! ```

pub mod classify;
pub mod codes;
pub mod cosets;
pub mod error;
pub mod geometry;
pub mod gf2m;
pub mod golden;
pub mod invariants;
pub mod iso;
pub mod labels;
pub mod perm;
pub mod rotation;

pub use classify::{survey, ClassRecord, ClassReport, SurveyOptions};
pub use error::{AtlasError, Result};
pub use gf2m::FieldCtx;
pub use invariants::{InvariantRecord, VStar};
pub use labels::{PointLabel, Triple};
pub use perm::{Convention, LinearMap, Permutation};
pub use rotation::{RotationLine, Spectrum};
