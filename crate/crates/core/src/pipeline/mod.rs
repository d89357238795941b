//! End-to-end counting: curves via auxiliary forms, affine surfaces via
//! the second-form dichotomy and congruence classes, hypersurfaces via
//! hyperplane slices, projective varieties via projection and cones, and
//! exponent fitting.

mod curve;
mod fit;
mod hyper;
mod projection;
mod report;
mod surface;

pub use curve::{count_curve, curve_is_integral};
pub use fit::{exponent_fit, geometric_grid, ExponentFit};
pub use hyper::{count_hypersurface, slice_polynomial, slice_direction};
pub use projection::{count_projective, project_to_hypersurface, ProjectionData};
pub use report::{CountReport, Mode, Query, TraceStep};
pub use surface::count_surface;

use crate::detmethod::DEFAULT_EPS;
use crate::enumerate::EnumOptions;

/// Tunables shared by the counting routines.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineOptions {
    pub eps: f64,
    pub seed: u64,
    pub enumerate: EnumOptions,
    /// Run the exhaustive enumeration alongside and record agreement.
    pub oracle_check: bool,
    /// Largest auxiliary form degree tried.
    pub k_cap: u32,
    /// Number of primes in each prime window.
    pub window: usize,
    /// Bad slices tolerated before a warning is recorded.
    pub bad_slice_warn: usize,
    /// Caller assertion that the hypersurface contains finitely many
    /// codimension-one linear subspaces, where no test is implemented.
    pub assert_planes_finite: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            eps: DEFAULT_EPS,
            seed: 0,
            enumerate: EnumOptions::default(),
            oracle_check: false,
            k_cap: 12,
            window: 3,
            bad_slice_warn: 8,
            assert_planes_finite: false,
        }
    }
}

/// Cap on fibration slices where the whole line lies on the curve.
pub(crate) const EXCEPTIONAL_CAP: usize = 1 << 20;

/// Cap on `F_q`-point scans.
pub(crate) const SCAN_CAP: u128 = 50_000_000;
