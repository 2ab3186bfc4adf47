//! Exact-arithmetic engine for twisted chiral differential operators on the
//! projective line.
//!
//! The crate is organised bottom-up:
//!
//! - [`qseries`]: truncated integer power series and the closed-form characters.
//! - [`linalg`]: exact sparse linear algebra (ranks, kernels, echelon spans).
//! - [`modespace`]: the beta-gamma Fock engine with the commutative twist sector.
//! - [`zhu`]: Zhu products and reduction to twisted differential operators.
//! - [`p1tcdo`]: charts, gluing maps and the critical-level `sl2` embedding.
//! - [`cech`]: bigraded Čech cohomology of the chiral sheaves `O(n)^ch`.
//! - [`affine`]: PBW model of critical-level `sl2`-hat highest-weight modules.
//!
//! All arithmetic is exact; there are no floating point values anywhere in the
//! computational path.

pub mod affine;
pub mod cech;
pub mod error;
pub mod linalg;
pub mod modespace;
pub mod p1tcdo;
pub mod qseries;
pub mod report;
pub mod scalar;
pub mod zhu;

pub use error::{Error, Result};
pub use scalar::Q;
