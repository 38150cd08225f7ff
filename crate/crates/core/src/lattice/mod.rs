//! Lattice structure, Dirichlet weights and environments.
//!
//! Directions are 0-based: direction `j < d` is `+e_j` and direction `j + d`
//! is `-e_j`. An edge of a torus is the pair (tail vertex, direction) and its
//! index is `tail * 2d + direction`, so the exit row of a vertex is a
//! contiguous slice of any edge field.

mod capacities;
mod dirichlet;
mod environment;
mod field;
mod torus;
mod weights;

pub use capacities::LatticeCapacities;
pub use dirichlet::{
    dirichlet_path_moment, dirichlet_torus_moment, ln_dirichlet_path_moment, DirichletSampler, LatticeEdge,
};
pub use environment::{sample_environment, translate_environment, Environment};
pub use field::{divergence, EdgeField, VertexField};
pub use torus::{ball_size, TorusGraph};
pub use weights::{Regime, Weights};

/// A point of `Z^d`.
pub type Site = Vec<i64>;

/// Unit vector of a direction as a coordinate increment.
#[inline]
pub fn direction_axis(dim: usize, dir: usize) -> (usize, i64) {
    if dir < dim {
        (dir, 1)
    } else {
        (dir - dim, -1)
    }
}

#[inline]
pub fn opposite(dim: usize, dir: usize) -> usize {
    if dir < dim {
        dir + dim
    } else {
        dir - dim
    }
}

/// Moves a site one step in `dir`.
pub fn step(site: &mut [i64], dir: usize) {
    let (axis, sign) = direction_axis(site.len(), dir);
    site[axis] += sign;
}
