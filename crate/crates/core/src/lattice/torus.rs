use serde::{Deserialize, Serialize};

use super::{direction_axis, opposite};
use crate::error::{Error, Result};

/// The directed nearest-neighbour graph of `(Z/NZ)^d`.
///
/// Vertex `x = (x_0, ..., x_{d-1})` has index `sum_k x_k N^k`. Side lengths
/// below 3 are rejected: at `N = 2` the two neighbours `x + e_j` and
/// `x - e_j` coincide and the graph has multi-edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusGraph {
    dim: usize,
    side: usize,
    vertices: usize,
}

impl TorusGraph {
    pub fn new(dim: usize, side: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGraph("dimension must be at least 1".into()));
        }
        if side < 3 {
            return Err(Error::InvalidGraph(format!(
                "torus side {side} < 3 would create multiple edges"
            )));
        }
        let vertices = u32::try_from(dim)
            .ok()
            .and_then(|d| side.checked_pow(d))
            .filter(|&v| v.checked_mul(2 * dim).is_some())
            .ok_or_else(|| Error::InvalidGraph(format!("torus {side}^{dim} is too large")))?;
        Ok(TorusGraph { dim, side, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn degree(&self) -> usize {
        2 * self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices * 2 * self.dim
    }

    pub fn coords(&self, v: usize) -> Vec<usize> {
        let mut c = Vec::with_capacity(self.dim);
        let mut rest = v;
        for _ in 0..self.dim {
            c.push(rest % self.side);
            rest /= self.side;
        }
        c
    }

    /// Index of the vertex at the given (possibly negative or unreduced) lattice point.
    pub fn vertex_at(&self, point: &[i64]) -> usize {
        debug_assert_eq!(point.len(), self.dim);
        let n = self.side as i64;
        point
            .iter()
            .rev()
            .fold(0usize, |acc, &x| acc * self.side + x.rem_euclid(n) as usize)
    }

    /// Representative of `v` in `[-N/2, N/2)^d`.
    pub fn centered(&self, v: usize) -> Vec<i64> {
        let n = self.side as i64;
        self.coords(v)
            .into_iter()
            .map(|c| {
                let c = c as i64;
                if 2 * c >= n {
                    c - n
                } else {
                    c
                }
            })
            .collect()
    }

    pub fn neighbor(&self, v: usize, dir: usize) -> usize {
        let (axis, sign) = direction_axis(self.dim, dir);
        let stride = self.side.pow(axis as u32);
        let c = (v / stride) % self.side;
        if sign > 0 {
            if c + 1 == self.side {
                v + stride - self.side * stride
            } else {
                v + stride
            }
        } else if c == 0 {
            v + (self.side - 1) * stride
        } else {
            v - stride
        }
    }

    #[inline]
    pub fn edge(&self, tail: usize, dir: usize) -> usize {
        tail * 2 * self.dim + dir
    }

    #[inline]
    pub fn edge_tail(&self, e: usize) -> usize {
        e / (2 * self.dim)
    }

    #[inline]
    pub fn edge_direction(&self, e: usize) -> usize {
        e % (2 * self.dim)
    }

    pub fn edge_head(&self, e: usize) -> usize {
        self.neighbor(self.edge_tail(e), self.edge_direction(e))
    }

    /// The edge `(head, tail)` traversed backwards; `(x, j)` maps to `(x + e_j, j ± d)`.
    pub fn reverse_edge(&self, e: usize) -> usize {
        let dir = self.edge_direction(e);
        self.edge(self.edge_head(e), opposite(self.dim, dir))
    }

    /// Edge index of `(u, v)` if the two vertices are adjacent.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        (0..self.degree())
            .find(|&dir| self.neighbor(u, dir) == v)
            .map(|dir| self.edge(u, dir))
    }

    /// Shortest-path (wrapped `L1`) distance.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        let (mut a, mut b) = (u, v);
        let mut total = 0;
        for _ in 0..self.dim {
            let (x, y) = (a % self.side, b % self.side);
            let diff = x.abs_diff(y);
            total += diff.min(self.side - diff);
            a /= self.side;
            b /= self.side;
        }
        total
    }

    /// Distance from the origin for every vertex.
    pub fn distances_from_origin(&self) -> Vec<usize> {
        (0..self.vertices).map(|v| self.distance(0, v)).collect()
    }

    /// Largest possible distance, `d * floor(N/2)`.
    pub fn diameter(&self) -> usize {
        self.dim * (self.side / 2)
    }

    /// Vertex `v + x`, the translation used by environment shifts.
    pub fn translate(&self, v: usize, by: usize) -> usize {
        let mut out = 0;
        let mut stride = 1;
        let (mut a, mut b) = (v, by);
        for _ in 0..self.dim {
            out += ((a % self.side + b % self.side) % self.side) * stride;
            a /= self.side;
            b /= self.side;
            stride *= self.side;
        }
        out
    }

    /// Vertex `-v`.
    pub fn negate(&self, v: usize) -> usize {
        let mut out = 0;
        let mut stride = 1;
        let mut a = v;
        for _ in 0..self.dim {
            out += ((self.side - a % self.side) % self.side) * stride;
            a /= self.side;
            stride *= self.side;
        }
        out
    }
}

/// Number of points of `Z^d` within `L1` distance `r` of the origin.
pub fn ball_size(dim: usize, r: usize) -> u64 {
    // |B_d(r)| = sum_k 2^k C(d,k) C(r,k)
    let mut total = 0u64;
    let mut binom_d = 1u64;
    let mut binom_r = 1u64;
    for k in 0..=dim.min(r) {
        if k > 0 {
            binom_d = binom_d * (dim - k + 1) as u64 / k as u64;
            binom_r = binom_r * (r - k + 1) as u64 / k as u64;
        }
        total += (1u64 << k) * binom_d * binom_r;
    }
    total
}
