use serde::{Deserialize, Serialize};

use super::network::{max_flow_min_cut, CutSet, DiGraph};
use crate::error::{Error, Result};

/// Capacities and per-vertex demands served from one source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowProblem {
    pub graph: DiGraph,
    pub capacities: Vec<f64>,
    pub source: usize,
    pub demands: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutViolation {
    pub cut: CutSet,
    /// Total demand outside the cut.
    pub demand: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Feasibility {
    /// A flow with divergence `sum_x p_x (delta_source - delta_x)` below capacity.
    Feasible(Vec<f64>),
    /// A set `K` containing the source with `c(out K) < p(outside K)`.
    Infeasible(CutViolation),
}

impl Feasibility {
    pub fn flow(&self) -> Option<&[f64]> {
        match self {
            Feasibility::Feasible(f) => Some(f),
            Feasibility::Infeasible(_) => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn into_result(self) -> Result<Vec<f64>> {
        match self {
            Feasibility::Feasible(f) => Ok(f),
            Feasibility::Infeasible(v) => Err(Error::Infeasible {
                cut_capacity: v.cut.capacity,
                demand: v.demand,
                vertices: v.cut.vertices,
            }),
        }
    }
}

/// Relative slack accepted between served and requested demand.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-9;

impl FlowProblem {
    pub fn validate(&self) -> Result<()> {
        let n = self.graph.vertex_count();
        if self.capacities.len() != self.graph.arc_count() {
            return Err(Error::FieldLength {
                expected: self.graph.arc_count(),
                found: self.capacities.len(),
            });
        }
        if self.demands.len() != n {
            return Err(Error::FieldLength {
                expected: n,
                found: self.demands.len(),
            });
        }
        if self.source >= n {
            return Err(Error::InvalidArgument(format!("source {} out of range", self.source)));
        }
        if self
            .demands
            .iter()
            .chain(&self.capacities)
            .any(|v| !(v.is_finite() && *v >= 0.0))
        {
            return Err(Error::InvalidArgument(
                "capacities and demands must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Demand outside `members`, the source excluded.
    pub fn outside_demand(&self, members: &[bool]) -> f64 {
        (0..self.graph.vertex_count())
            .filter(|&v| v != self.source && !members[v])
            .map(|v| self.demands[v])
            .sum()
    }
}

/// Decides feasibility by a max flow to an added sink fed by arcs of
/// capacity `p_x` from every vertex.
pub fn feasible_flow(problem: &FlowProblem) -> Result<Feasibility> {
    problem.validate()?;
    let n = problem.graph.vertex_count();
    let mut g = problem.graph.clone();
    let mut caps = problem.capacities.clone();
    let sink = g.add_vertex();
    for v in 0..n {
        if v != problem.source {
            g.add_arc(v, sink);
            caps.push(problem.demands[v]);
        }
    }
    let total: f64 = (0..n)
        .filter(|&v| v != problem.source)
        .map(|v| problem.demands[v])
        .sum();
    let mf = max_flow_min_cut(&g, &caps, problem.source, sink)?;
    if mf.value >= total - FEASIBILITY_TOLERANCE * (1.0 + total) {
        let mut flow = mf.flow;
        flow.truncate(problem.graph.arc_count());
        return Ok(Feasibility::Feasible(flow));
    }
    let mut members = vec![false; n];
    for &v in &mf.cut.vertices {
        if v < n {
            members[v] = true;
        }
    }
    let cut = CutSet::from_members(&problem.graph, &problem.capacities, &members);
    let demand = problem.outside_demand(&members);
    Ok(Feasibility::Infeasible(CutViolation { cut, demand }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_demands_give_zero_flow() {
        let g = DiGraph::from_arcs(3, vec![(0, 1), (1, 2)]).unwrap();
        let p = FlowProblem {
            graph: g,
            capacities: vec![1.0, 1.0],
            source: 0,
            demands: vec![0.0; 3],
        };
        assert_eq!(feasible_flow(&p).unwrap(), Feasibility::Feasible(vec![0.0, 0.0]));
    }

    #[test]
    fn two_vertex_path() {
        let g = DiGraph::from_arcs(2, vec![(0, 1)]).unwrap();
        let p = FlowProblem {
            graph: g,
            capacities: vec![1.0],
            source: 0,
            demands: vec![0.0, 1.0],
        };
        assert_eq!(feasible_flow(&p).unwrap().flow(), Some(&[1.0][..]));
    }

    #[test]
    fn infeasible_reports_violated_cut() {
        let g = DiGraph::from_arcs(3, vec![(0, 1), (1, 2)]).unwrap();
        let p = FlowProblem {
            graph: g,
            capacities: vec![2.0, 0.5],
            source: 0,
            demands: vec![0.0, 1.0, 1.0],
        };
        match feasible_flow(&p).unwrap() {
            Feasibility::Infeasible(v) => {
                assert_eq!(v.cut.vertices, vec![0, 1]);
                assert_eq!(v.cut.capacity, 0.5);
                assert_eq!(v.demand, 1.0);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }
}
