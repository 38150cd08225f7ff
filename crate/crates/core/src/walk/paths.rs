use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::{ln_dirichlet_path_moment, step, LatticeEdge, Site, Weights};

fn check_path(w: &Weights, path: &[usize]) -> Result<()> {
    if let Some(&d) = path.iter().find(|&&d| d >= w.degree()) {
        return Err(Error::InvalidPath(format!("direction {d} out of range")));
    }
    Ok(())
}

/// Crossing counts of each directed edge along a path from the origin.
pub fn crossing_counts(dim: usize, path: &[usize]) -> Vec<(LatticeEdge, f64)> {
    let mut counts: HashMap<LatticeEdge, f64> = HashMap::new();
    let mut pos: Site = vec![0; dim];
    for &dir in path {
        *counts.entry(LatticeEdge::new(pos.clone(), dir)).or_insert(0.0) += 1.0;
        step(&mut pos, dir);
    }
    let mut out: Vec<_> = counts.into_iter().collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Annealed probability of a path from the origin: the Dirichlet moment of
/// its crossing counts.
pub fn annealed_path_probability(w: &Weights, path: &[usize]) -> Result<f64> {
    check_path(w, path)?;
    Ok(ln_dirichlet_path_moment(w, &crossing_counts(w.dim(), path))?.exp())
}

/// The same probability as a product of reinforced transition probabilities
/// `(alpha_i + N_i(x)) / (alpha_0 + N(x))`.
pub fn reinforcement_path_probability(w: &Weights, path: &[usize]) -> Result<f64> {
    check_path(w, path)?;
    let deg = w.degree();
    let mut counts: HashMap<Site, Vec<u32>> = HashMap::new();
    let mut pos: Site = vec![0; w.dim()];
    let mut prob = 1.0;
    for &dir in path {
        let row = counts.entry(pos.clone()).or_insert_with(|| vec![0; deg]);
        let seen: u32 = row.iter().sum();
        prob *= (w.get(dir) + row[dir] as f64) / (w.total() + seen as f64);
        row[dir] += 1;
        step(&mut pos, dir);
    }
    Ok(prob)
}

/// All `(2d)^len` direction sequences, in lexicographic order.
pub fn enumerate_paths(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let deg = 2 * dim;
    let total = deg.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let mut path = vec![0; len];
            for slot in path.iter_mut().rev() {
                *slot = code % deg;
                code /= deg;
            }
            path
        })
        .collect()
}
