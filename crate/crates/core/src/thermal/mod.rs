//! Finite-volume spatial discretization of the heat equation over a voxel
//! mesh, and its exact zero-order-hold time discretization.

mod mesh;
mod model;

pub use mesh::{build_mesh, Mesh, OccupancyGrid};
pub use model::{
    assemble_continuous, discretize, select_input_cells, thermal_step, ContinuousThermalModel,
    DiscreteThermalModel, MaterialProps, GAUSSIAN_TRUNCATION,
};
