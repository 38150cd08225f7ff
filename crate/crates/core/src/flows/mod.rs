//! Flows on finite digraphs and tori: max-flow, feasibility under demands,
//! dispersed path flows and the bounded-energy flow used by the density bound.

mod construct;
mod feasibility;
mod network;
mod paths;
mod truncated;

pub use construct::{
    construct_theta_n, minimal_side, torus_digraph, Certification, ConstructionOptions, ConstructionSummary,
    FlowConstructionTrace,
};
pub use feasibility::{feasible_flow, CutViolation, Feasibility, FlowProblem, FEASIBILITY_TOLERANCE};
pub use network::{
    complement_components, in_boundary, max_flow_min_cut, out_boundary, reachable_within, CutSet, DiGraph, MaxFlow,
};
pub use paths::{
    aggregate_flow, canonical_discrete_path, dispersed_unit_flow, displacement, path_flow, vertex_throughput,
    DEFAULT_PATH_SAMPLES,
};
pub use truncated::{lattice_ball, min_cut_truncated_lattice};
