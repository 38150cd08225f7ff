use std::collections::BTreeMap;

use super::{EdgeField, Site, TorusGraph, Weights};

/// Edge capacities on `Z^d`: one value per direction, translation invariant
/// except for a finite set of overridden edges.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeCapacities {
    dim: usize,
    base: Vec<f64>,
    overrides: BTreeMap<(Site, usize), f64>,
}

impl LatticeCapacities {
    pub fn from_weights(w: &Weights) -> Self {
        LatticeCapacities {
            dim: w.dim(),
            base: w.alpha().to_vec(),
            overrides: BTreeMap::new(),
        }
    }

    pub fn uniform(dim: usize, value: f64) -> Self {
        LatticeCapacities {
            dim,
            base: vec![value; 2 * dim],
            overrides: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set_override(&mut self, tail: Site, dir: usize, value: f64) {
        self.overrides.insert((tail, dir), value);
    }

    pub fn capacity(&self, tail: &[i64], dir: usize) -> f64 {
        // BTreeMap lookups need an owned key; the override set is tiny, so scan it.
        self.overrides
            .iter()
            .find(|((site, d), _)| *d == dir && site.as_slice() == tail)
            .map(|(_, &v)| v)
            .unwrap_or(self.base[dir])
    }

    /// All capacities multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        LatticeCapacities {
            dim: self.dim,
            base: self.base.iter().map(|c| c * factor).collect(),
            overrides: self.overrides.iter().map(|(k, v)| (k.clone(), v * factor)).collect(),
        }
    }

    pub fn min_value(&self) -> f64 {
        self.base
            .iter()
            .chain(self.overrides.values())
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.base
            .iter()
            .chain(self.overrides.values())
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Capacities of torus edges, identifying each torus edge with the
    /// lattice edge whose tail lies in `[-N/2, N/2)^d`.
    pub fn on_torus(&self, graph: &TorusGraph) -> EdgeField {
        assert_eq!(graph.dim(), self.dim, "dimension mismatch");
        let deg = graph.degree();
        let mut field = EdgeField::zeros(*graph);
        for (dir, &c) in self.base.iter().enumerate() {
            for v in 0..graph.vertex_count() {
                field[v * deg + dir] = c;
            }
        }
        for ((site, dir), &c) in &self.overrides {
            let v = graph.vertex_at(site);
            if graph.centered(v) == *site {
                field[graph.edge(v, *dir)] = c;
            }
        }
        field
    }
}
