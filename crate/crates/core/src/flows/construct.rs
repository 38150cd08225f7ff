use serde::{Deserialize, Serialize};

use super::feasibility::{feasible_flow, Feasibility, FlowProblem};
use super::network::DiGraph;
use super::paths::{aggregate_flow, DEFAULT_PATH_SAMPLES};
use crate::error::{Error, Result};
use crate::lattice::{ball_size, divergence, EdgeField, LatticeCapacities, TorusGraph};
use crate::stationary::required_divergence;

/// The torus as a digraph whose arc `e` is torus edge `e`.
pub fn torus_digraph(graph: &TorusGraph) -> DiGraph {
    let arcs = (0..graph.edge_count())
        .map(|e| (graph.edge_tail(e), graph.edge_head(e)))
        .collect();
    DiGraph::from_arcs(graph.vertex_count(), arcs).expect("torus edges are in range")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certification {
    /// Refuse sides below the computed `N_0`.
    Strict,
    /// Below `N_0`, grow the protected ball from `eta_0 + 1` until the
    /// flow problem becomes feasible.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstructionOptions {
    pub samples: usize,
    /// Lower capacity constant; defaults to `0.99 * min c`.
    pub c_low: Option<f64>,
    /// Upper capacity constant; defaults to `1.01 * max c`.
    pub c_high: Option<f64>,
    pub certification: Certification,
    pub seed: u64,
}

impl Default for ConstructionOptions {
    fn default() -> Self {
        ConstructionOptions {
            samples: DEFAULT_PATH_SAMPLES,
            c_low: None,
            c_high: None,
            certification: Certification::Adaptive,
            seed: 0,
        }
    }
}

/// Scalar record of a construction, suitable for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionSummary {
    pub side: usize,
    pub strength: f64,
    pub samples: usize,
    pub seed: u64,
    pub c_low: f64,
    pub c_high: f64,
    pub eta0: usize,
    pub eta1: usize,
    /// Radius of the ball on which capacities were restored.
    pub eta_used: usize,
    pub n0: usize,
    pub certified: bool,
    pub touching_edges: usize,
    pub norm_tilde: f64,
    pub norm_theta: f64,
    pub norm_bound: f64,
    pub divergence_error: f64,
    pub dominated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowConstructionTrace {
    pub theta_tilde: EdgeField,
    pub theta: EdgeField,
    pub summary: ConstructionSummary,
}

/// Smallest `N >= 2 eta_1` with `N^d >= m |B(0, eta_1)| / C'`.
pub fn minimal_side(dim: usize, eta1: usize, strength: f64, c_low: f64) -> usize {
    let need = strength * ball_size(dim, eta1) as f64 / c_low;
    let mut n = 2 * eta1;
    while (n as f64).powi(dim as i32) < need {
        n += 1;
    }
    n
}

/// Builds a flow `theta_N` on the torus of side `side` with divergence
/// `(m / N^d) sum_y (delta_0 - delta_y)` and `theta_N <= c` edgewise.
pub fn construct_theta_n(
    caps: &LatticeCapacities,
    strength: f64,
    side: usize,
    opts: &ConstructionOptions,
) -> Result<FlowConstructionTrace> {
    let graph = TorusGraph::new(caps.dim(), side)?;
    if !(strength > 0.0 && strength.is_finite()) {
        return Err(Error::InvalidArgument(format!("strength {strength} must be positive")));
    }
    let c = caps.on_torus(&graph);
    let c_min = c.values().iter().copied().fold(f64::INFINITY, f64::min);
    let c_max = c.max_abs();
    if !(c_min > 0.0) {
        return Err(Error::InvalidArgument("capacities must be positive".into()));
    }
    let c_low = opts.c_low.unwrap_or(0.99 * c_min);
    let c_high = opts.c_high.unwrap_or(1.01 * c_max);
    if !(0.0 < c_low && c_low < c_min && c_max < c_high) {
        return Err(Error::InvalidArgument(format!(
            "constants {c_low}, {c_high} do not bracket capacities in [{c_min}, {c_max}]"
        )));
    }

    let theta_tilde = aggregate_flow(&graph, strength, opts.samples, opts.seed)?;
    let dist = graph.distances_from_origin();
    let edge_reach = |e: usize| dist[graph.edge_tail(e)].max(dist[graph.edge_head(e)]);
    let eta0 = (0..graph.edge_count())
        .filter(|&e| theta_tilde[e] > c_low / 2.0)
        .map(edge_reach)
        .max()
        .unwrap_or(0);
    let eta1 = eta0 + (2.0 * strength / c_low).ceil() as usize;
    let n0 = minimal_side(graph.dim(), eta1, strength, c_low);
    let certified = side >= n0;
    if !certified && opts.certification == Certification::Strict {
        return Err(Error::Precondition(format!(
            "side {side} is below the certified minimum {n0}"
        )));
    }

    let g = torus_digraph(&graph);
    let mut demands = vec![strength / graph.vertex_count() as f64; graph.vertex_count()];
    demands[0] = 0.0;
    let attempts: Vec<usize> = if certified {
        vec![eta1]
    } else {
        ((eta0 + 1)..=graph.diameter().max(eta0 + 1)).collect()
    };
    let mut last_violation = None;
    for eta in attempts {
        let touches = |e: usize| dist[graph.edge_tail(e)].min(dist[graph.edge_head(e)]) <= eta;
        let c_tilde: Vec<f64> = (0..graph.edge_count())
            .map(|e| if touches(e) { c[e] } else { theta_tilde[e].min(c[e]) })
            .collect();
        let problem = FlowProblem {
            graph: g.clone(),
            capacities: c_tilde,
            source: 0,
            demands: demands.clone(),
        };
        match feasible_flow(&problem)? {
            Feasibility::Feasible(flow) => {
                let theta = EdgeField::from_values(graph, flow)?;
                let touching_edges = (0..graph.edge_count()).filter(|&e| touches(e)).count();
                let divergence_error = divergence(&theta).max_abs_diff(&required_divergence(&graph, strength));
                let dominated = theta.values().iter().zip(c.values()).all(|(t, c)| t <= c);
                let norm_tilde = theta_tilde.norm_squared();
                let summary = ConstructionSummary {
                    side,
                    strength,
                    samples: opts.samples,
                    seed: opts.seed,
                    c_low,
                    c_high,
                    eta0,
                    eta1,
                    eta_used: eta,
                    n0,
                    certified,
                    touching_edges,
                    norm_tilde,
                    norm_theta: theta.norm_squared(),
                    norm_bound: norm_tilde + touching_edges as f64 * c_high * c_high,
                    divergence_error,
                    dominated,
                };
                if divergence_error > 1e-9 {
                    return Err(Error::DivergenceCondition {
                        max_error: divergence_error,
                    });
                }
                return Ok(FlowConstructionTrace {
                    theta_tilde,
                    theta,
                    summary,
                });
            }
            Feasibility::Infeasible(v) => last_violation = Some(v),
        }
    }
    let v = last_violation.expect("at least one radius is tried");
    Err(Error::Infeasible {
        cut_capacity: v.cut.capacity,
        demand: v.demand,
        vertices: v.cut.vertices,
    })
}
