//! Rational inner skew-products on the bidisk: construction, fiberwise
//! Möbius analysis, fixed-point curves, rotation belts and orbit datasets.

pub mod analysis;
pub mod catalog;
pub mod error;
pub mod io;
pub mod iterate;
pub mod mobius;
pub mod poly;
pub mod rif;
pub mod roots;

pub use error::{Error, Result};
pub use poly::{cis, BiPoly, Cpx, UniPoly};
pub use rif::{Rif, Risp, RispKind};

/// Shared numerical thresholds.
pub mod tol {
    /// Distance from the unit circle still counted as "on the circle".
    pub const EPS_T: f64 = 1e-9;
    /// Root cluster radius used to call multiplicities.
    pub const CLUSTER_RADIUS: f64 = 1e-6;
    /// `|p|, |p~| <= EPS_SING * ||p||_1` marks a singular boundary point.
    pub const EPS_SING: f64 = 1e-9;
    /// Points this close to the torus are projected back onto it.
    pub const TORUS: f64 = 1e-7;
    /// Angular exclusion radius around collapsing and `p2 = 0` fibers.
    pub const EXCLUSION: f64 = 1e-4;
    /// Default sample count for curve tracing.
    pub const N_SAMPLES: usize = 4096;
}
