use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{step, Environment, Site, Weights};

/// A nearest-neighbour path in `Z^d`, stored as its increments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start: Site,
    /// Direction index of each step.
    pub increments: Vec<u8>,
    /// Unwrapped final position.
    pub position: Site,
    /// `R_n = |{X_0, ..., X_{n-1}}|`.
    pub range: usize,
    /// Steps that crossed a period boundary of the environment; zero when the
    /// environment is not periodic.
    pub wraps: usize,
}

impl Trajectory {
    fn from_increments(start: Site, increments: Vec<u8>, wraps: usize) -> Self {
        let mut pos = start.clone();
        let mut visited: HashSet<Site> = HashSet::with_capacity(increments.len());
        for &dir in &increments {
            if !visited.contains(pos.as_slice()) {
                visited.insert(pos.clone());
            }
            step(&mut pos, dir as usize);
        }
        Trajectory {
            start,
            range: visited.len(),
            increments,
            position: pos,
            wraps,
        }
    }

    pub fn steps(&self) -> usize {
        self.increments.len()
    }

    /// The first `k` steps, with range recomputed. Wrap counts are not kept.
    pub fn prefix(&self, k: usize) -> Trajectory {
        Trajectory::from_increments(self.start.clone(), self.increments[..k.min(self.steps())].to_vec(), 0)
    }

    /// Positions `X_0, ..., X_n`.
    pub fn positions(&self) -> Vec<Site> {
        let mut pos = self.start.clone();
        let mut out = Vec::with_capacity(self.steps() + 1);
        out.push(pos.clone());
        for &dir in &self.increments {
            step(&mut pos, dir as usize);
            out.push(pos.clone());
        }
        out
    }

    /// CSV with header `step,direction`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "step,direction")?;
        for (i, dir) in self.increments.iter().enumerate() {
            writeln!(out, "{},{}", i + 1, dir)?;
        }
        Ok(())
    }
}

fn pick<R: Rng + ?Sized>(rng: &mut R, weights: &[f64], total: f64) -> usize {
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    // rounding left u at the top of the range
    weights.iter().rposition(|&w| w > 0.0).expect("some positive weight")
}

fn check_steps(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("a trajectory needs at least one step".into()));
    }
    if n > u32::MAX as usize {
        return Err(Error::InvalidArgument(format!("{n} steps is too many")));
    }
    Ok(())
}

/// Walk in a fixed environment on the torus, with the position tracked in `Z^d`.
pub fn simulate_quenched<R: Rng + ?Sized>(
    env: &Environment,
    start: usize,
    n: usize,
    rng: &mut R,
) -> Result<Trajectory> {
    check_steps(n)?;
    let g = env.graph();
    if start >= g.vertex_count() {
        return Err(Error::InvalidArgument(format!("start vertex {start} out of range")));
    }
    let d = g.dim();
    let mut v = start;
    let mut increments = Vec::with_capacity(n);
    let mut wraps = 0;
    for _ in 0..n {
        let dir = pick(rng, env.row(v), 1.0);
        let (axis, sign) = crate::lattice::direction_axis(d, dir);
        let c = g.coords(v)[axis] as i64 + sign;
        if c < 0 || c >= g.side() as i64 {
            wraps += 1;
        }
        v = g.neighbor(v, dir);
        increments.push(dir as u8);
    }
    let start_site = g.coords(start).iter().map(|&c| c as i64).collect();
    Ok(Trajectory::from_increments(start_site, increments, wraps))
}

/// Directed-edge reinforced walk: from `x` it steps in direction `i` with
/// probability proportional to `alpha_i + N_i(x)`, where `N_i(x)` counts
/// earlier crossings of `(x, x + e_i)`. Its law is the annealed law.
pub fn simulate_annealed_reinforced<R: Rng + ?Sized>(
    w: &Weights,
    start: Site,
    n: usize,
    rng: &mut R,
) -> Result<Trajectory> {
    check_steps(n)?;
    if start.len() != w.dim() {
        return Err(Error::InvalidShape(format!(
            "start has {} coordinates, expected {}",
            start.len(),
            w.dim()
        )));
    }
    let deg = w.degree();
    let alpha0 = w.total();
    let mut counts: HashMap<Site, Vec<u32>> = HashMap::new();
    let mut pos = start.clone();
    let mut increments = Vec::with_capacity(n);
    let mut weights = vec![0.0; deg];
    for _ in 0..n {
        let row = counts.get(pos.as_slice());
        let mut total = alpha0;
        for (dir, slot) in weights.iter_mut().enumerate() {
            let c = row.map_or(0, |r| r[dir]);
            *slot = w.get(dir) + c as f64;
            total += c as f64;
        }
        let dir = pick(rng, &weights, total);
        match counts.get_mut(pos.as_slice()) {
            Some(r) => r[dir] += 1,
            None => {
                let mut r = vec![0u32; deg];
                r[dir] = 1;
                counts.insert(pos.clone(), r);
            }
        }
        step(&mut pos, dir);
        increments.push(dir as u8);
    }
    Ok(Trajectory::from_increments(start, increments, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::TorusGraph;
    use crate::rng::stream;
    use crate::stats::chi_square_test;

    #[test]
    fn bookkeeping() {
        let w = Weights::uniform(3, 1.0).unwrap();
        let t = simulate_annealed_reinforced(&w, vec![0, 0, 0], 500, &mut stream(1, &[])).unwrap();
        let mut pos = t.start.clone();
        for &d in &t.increments {
            step(&mut pos, d as usize);
        }
        assert_eq!(pos, t.position);
        assert!(t.range >= 1 && t.range <= 500);
        assert_eq!(t.prefix(1).range, 1);
        assert_eq!(t.positions().len(), 501);
    }

    #[test]
    fn degenerate_environment_goes_straight() {
        let g = TorusGraph::new(3, 8).unwrap();
        let eps = 1e-12;
        let env = Environment::constant(g, &[1.0 - 5.0 * eps, eps, eps, eps, eps, eps]).unwrap();
        let t = simulate_quenched(&env, 0, 100, &mut stream(2, &[])).unwrap();
        assert_eq!(t.position, vec![100, 0, 0]);
        assert_eq!(t.range, 100);
        assert_eq!(t.wraps, 12);
    }

    #[test]
    fn first_step_follows_the_row() {
        let g = TorusGraph::new(3, 4).unwrap();
        let row = [0.3, 0.1, 0.2, 0.05, 0.15, 0.2];
        let env = Environment::constant(g, &row).unwrap();
        let mut rng = stream(3, &[]);
        let mut observed = [0u64; 6];
        for _ in 0..100_000 {
            observed[simulate_quenched(&env, 5, 1, &mut rng).unwrap().increments[0] as usize] += 1;
        }
        assert!(chi_square_test(&observed, &row).unwrap().p_value.unwrap() > 1e-4);
    }

    #[test]
    fn zero_steps_rejected() {
        let w = Weights::uniform(3, 1.0).unwrap();
        assert!(simulate_annealed_reinforced(&w, vec![0, 0, 0], 0, &mut stream(1, &[])).is_err());
    }
}
