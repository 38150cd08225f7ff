use std::io::{BufRead, Read, Write};

use rand::Rng;

use super::{DirichletSampler, EdgeField, TorusGraph, Weights};
use crate::error::{Error, Result};

const ROW_TOLERANCE: f64 = 1e-12;
const BINARY_MAGIC: &[u8; 8] = b"RWDEENV1";

/// Exit probabilities `omega(x, x + e_i)` on every torus vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    graph: TorusGraph,
    probs: Vec<f64>,
}

impl Environment {
    /// Validates that every row is positive and sums to one within `1e-12`.
    pub fn new(graph: TorusGraph, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != graph.edge_count() {
            return Err(Error::FieldLength {
                expected: graph.edge_count(),
                found: probs.len(),
            });
        }
        for (v, row) in probs.chunks(graph.degree()).enumerate() {
            if let Some(p) = row.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
                return Err(Error::InvalidEnvironment(format!(
                    "probability {p} at vertex {v} outside (0, 1]"
                )));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_TOLERANCE {
                return Err(Error::InvalidEnvironment(format!("row {v} sums to {s}")));
            }
        }
        Ok(Environment { graph, probs })
    }

    /// The same exit vector at every vertex.
    pub fn constant(graph: TorusGraph, row: &[f64]) -> Result<Self> {
        if row.len() != graph.degree() {
            return Err(Error::InvalidEnvironment(format!(
                "row has {} entries, expected {}",
                row.len(),
                graph.degree()
            )));
        }
        let probs = row.iter().copied().cycle().take(graph.edge_count()).collect();
        Environment::new(graph, probs)
    }

    pub fn graph(&self) -> &TorusGraph {
        &self.graph
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, e: usize) -> f64 {
        self.probs[e]
    }

    pub fn row(&self, v: usize) -> &[f64] {
        let deg = self.graph.degree();
        &self.probs[v * deg..(v + 1) * deg]
    }

    pub fn to_edge_field(&self) -> EdgeField {
        EdgeField::from_values(self.graph, self.probs.clone()).expect("same graph")
    }

    pub fn max_abs_diff(&self, other: &Environment) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// CSV edge list with header `edge,probability`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "edge,probability")?;
        for (e, p) in self.probs.iter().enumerate() {
            writeln!(out, "{e},{p}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(graph: TorusGraph, input: R) -> Result<Self> {
        let mut probs = vec![f64::NAN; graph.edge_count()];
        for (lineno, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::InvalidEnvironment(e.to_string()))?;
            if lineno == 0 {
                if line.trim() != "edge,probability" {
                    return Err(Error::InvalidEnvironment(format!("unexpected header {line:?}")));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let parse_err = || Error::InvalidEnvironment(format!("bad line {}: {line:?}", lineno + 1));
            let (e, p) = line.split_once(',').ok_or_else(parse_err)?;
            let e: usize = e.trim().parse().map_err(|_| parse_err())?;
            let p: f64 = p.trim().parse().map_err(|_| parse_err())?;
            *probs.get_mut(e).ok_or_else(parse_err)? = p;
        }
        Environment::new(graph, probs)
    }

    /// Flat binary form: magic, `u32` dimension, `u32` side, then one
    /// little-endian `f64` per edge in index order.
    pub fn write_binary<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(BINARY_MAGIC)?;
        out.write_all(&(self.graph.dim() as u32).to_le_bytes())?;
        out.write_all(&(self.graph.side() as u32).to_le_bytes())?;
        for p in &self.probs {
            out.write_all(&p.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let io = |e: std::io::Error| Error::InvalidEnvironment(e.to_string());
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic).map_err(io)?;
        if &magic != BINARY_MAGIC {
            return Err(Error::InvalidEnvironment("bad magic".into()));
        }
        let mut word = [0u8; 4];
        input.read_exact(&mut word).map_err(io)?;
        let dim = u32::from_le_bytes(word) as usize;
        input.read_exact(&mut word).map_err(io)?;
        let side = u32::from_le_bytes(word) as usize;
        let graph = TorusGraph::new(dim, side)?;
        let mut probs = Vec::with_capacity(graph.edge_count());
        let mut buf = [0u8; 8];
        for _ in 0..graph.edge_count() {
            input.read_exact(&mut buf).map_err(io)?;
            probs.push(f64::from_le_bytes(buf));
        }
        Environment::new(graph, probs)
    }
}

/// I.i.d. Dirichlet(alpha) exit vectors, one per vertex in index order.
pub fn sample_environment<R: Rng + ?Sized>(w: &Weights, graph: &TorusGraph, rng: &mut R) -> Result<Environment> {
    if w.dim() != graph.dim() {
        return Err(Error::InvalidArgument(format!(
            "weights of dimension {} on a {}-dimensional torus",
            w.dim(),
            graph.dim()
        )));
    }
    let sampler = DirichletSampler::from_weights(w);
    let mut probs = vec![0.0; graph.edge_count()];
    for row in probs.chunks_mut(graph.degree()) {
        sampler.sample_into(rng, row);
    }
    Ok(Environment { graph: *graph, probs })
}

/// `tau_x omega (y, z) = omega(x + y, x + z)`.
pub fn translate_environment(env: &Environment, x: usize) -> Environment {
    let g = env.graph;
    let deg = g.degree();
    let mut probs = vec![0.0; env.probs.len()];
    for (y, row) in probs.chunks_mut(deg).enumerate() {
        row.copy_from_slice(env.row(g.translate(x, y)));
    }
    Environment { graph: g, probs }
}
