use std::ops::{Index, IndexMut};

use super::TorusGraph;
use crate::error::{Error, Result};

/// One real value per directed edge of a torus.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeField {
    graph: TorusGraph,
    values: Vec<f64>,
}

/// One real value per vertex of a torus.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexField {
    graph: TorusGraph,
    values: Vec<f64>,
}

macro_rules! field_common {
    ($ty:ident, $count:ident) => {
        impl $ty {
            pub fn zeros(graph: TorusGraph) -> Self {
                $ty {
                    graph,
                    values: vec![0.0; graph.$count()],
                }
            }

            pub fn from_values(graph: TorusGraph, values: Vec<f64>) -> Result<Self> {
                if values.len() != graph.$count() {
                    return Err(Error::FieldLength {
                        expected: graph.$count(),
                        found: values.len(),
                    });
                }
                Ok($ty { graph, values })
            }

            pub fn graph(&self) -> &TorusGraph {
                &self.graph
            }

            pub fn values(&self) -> &[f64] {
                &self.values
            }

            pub fn values_mut(&mut self) -> &mut [f64] {
                &mut self.values
            }

            pub fn into_values(self) -> Vec<f64> {
                self.values
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                self.values.is_empty()
            }

            pub fn sum(&self) -> f64 {
                self.values.iter().sum()
            }

            pub fn max_abs(&self) -> f64 {
                self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
            }

            pub fn norm_squared(&self) -> f64 {
                self.values.iter().map(|v| v * v).sum()
            }

            pub fn scale(&mut self, factor: f64) {
                self.values.iter_mut().for_each(|v| *v *= factor);
            }

            /// Max-norm distance to another field on the same graph.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                self.values
                    .iter()
                    .zip(&other.values)
                    .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
            }
        }

        impl Index<usize> for $ty {
            type Output = f64;
            fn index(&self, i: usize) -> &f64 {
                &self.values[i]
            }
        }

        impl IndexMut<usize> for $ty {
            fn index_mut(&mut self, i: usize) -> &mut f64 {
                &mut self.values[i]
            }
        }
    };
}

field_common!(EdgeField, edge_count);
field_common!(VertexField, vertex_count);

impl EdgeField {
    /// `theta_check(x, y) = theta(y, x)`.
    pub fn reversed(&self) -> EdgeField {
        let values = (0..self.values.len())
            .map(|e| self.values[self.graph.reverse_edge(e)])
            .collect();
        EdgeField {
            graph: self.graph,
            values,
        }
    }

    /// Outgoing throughput `theta(z) = sum over edges leaving z`.
    pub fn throughput(&self) -> VertexField {
        let deg = self.graph.degree();
        let values = self.values.chunks(deg).map(|row| row.iter().sum()).collect();
        VertexField {
            graph: self.graph,
            values,
        }
    }

    pub fn row(&self, v: usize) -> &[f64] {
        let deg = self.graph.degree();
        &self.values[v * deg..(v + 1) * deg]
    }
}

/// `div(theta)(x) = sum_{tail = x} theta(e) - sum_{head = x} theta(e)`.
pub fn divergence(theta: &EdgeField) -> VertexField {
    let g = theta.graph;
    let mut out = vec![0.0; g.vertex_count()];
    for (e, &t) in theta.values.iter().enumerate() {
        if t != 0.0 {
            out[g.edge_tail(e)] += t;
            out[g.edge_head(e)] -= t;
        }
    }
    VertexField { graph: g, values: out }
}
