//! Network assembly, fixed-step integration and post-processing.
//!
//! State layout is compartment-major: `x = (x₁, …, x_N)` with each
//! `xᵢ ∈ ℝⁿ`, which is the layout the coupling `(𝓛 ⊗ D) x` assumes.

mod bounds;
mod integrate;
mod modal;
mod network;
mod output;
mod pde;
mod series;

pub use bounds::{fit_grid_bound, star_alpha, verify_bound, BoundForm, BoundReport};
pub use integrate::{integrate_rk4, OdeSystem, Trajectory};
pub use modal::{modal_decompose, ModalDecomposition};
pub use network::{assemble_network, two_compartment, uncoupled, Boundary, Coupling, CouplingFn, NetworkSystem};
pub use output::{write_series_csv, write_trajectory_csv};
pub use pde::{discretize_pde_1d, sine_weighted_norm_series, weighted_gradient_norm, weighted_gradient_series, MeshBoundary};
pub use series::{deviation_series, difference_series, edge_series, pair_series, stacked_edge_series, Series};
