//! Large-`s` analysis: the leading-order algebraic curve for the resolvent
//! `G₀`, its branch points, spectral edges, quantization and the eigenvalue
//! density.
//!
//! Everything here depends on the bath polarization only through `|p|`: the
//! spin flip `S_z → -S_z` maps `p → -p` and leaves the spectrum invariant.

pub mod contour;
pub mod counting;
pub mod curve;
pub mod density;
pub mod edges;
pub mod elliptic;
pub mod quad;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    I,
    II,
    Boundary,
    Outside,
}

pub use contour::{contour_integral, contour_integral_g0, ContourSpec};
pub use counting::{cut_geometry, fraction_above, level_index, predict_sector_eigenvalue, quantize_lambda, CutGeometry};
pub use curve::{g0_branches, quartic_branch_points, BranchPoints, Curve};
pub use density::{density, density_grid, density_quadrature, marginal_integral, DensityGrid, DensityValue};
pub use edges::{classify_lambda, spectral_edges, SpectralEdges};
pub use elliptic::{carlson_rf, ellip_k, ellip_k_tilde};
