use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Environment, VertexField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    Direct,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    /// Direct below `direct_limit` vertices, iterative above.
    Auto,
    Direct,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Max-norm bound on `pi P - pi`.
    pub tol: f64,
    /// Cap on lazy power-iteration sweeps.
    pub max_iterations: usize,
    /// Largest vertex count solved by dense elimination under `Auto`.
    pub direct_limit: usize,
    pub method: MethodChoice,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-12,
            max_iterations: 1_000_000,
            direct_limit: 4096,
            method: MethodChoice::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationarySolution {
    pub pi: VertexField,
    pub residual: f64,
    pub iterations: usize,
    pub method: SolveMethod,
    /// Smallest entry of `pi`; tiny values flag near-underflow environments.
    pub min_mass: f64,
}

/// `max_y |(pi P)(y) - pi(y)|`.
pub fn stationary_residual(env: &Environment, pi: &[f64]) -> f64 {
    let next = push_forward(env, pi);
    next.iter().zip(pi).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

fn push_forward(env: &Environment, pi: &[f64]) -> Vec<f64> {
    let g = env.graph();
    let deg = g.degree();
    let mut out = vec![0.0; pi.len()];
    for (x, &mass) in pi.iter().enumerate() {
        for (dir, &p) in env.row(x).iter().enumerate() {
            out[g.neighbor(x, dir)] += mass * p;
        }
        debug_assert_eq!(env.row(x).len(), deg);
    }
    out
}

/// Grassmann–Taksar–Heyman state reduction on the dense kernel.
///
/// Only additions and multiplications of nonnegative numbers occur, so every
/// entry of the result keeps full relative accuracy even when the measure
/// spans hundreds of orders of magnitude.
fn solve_gth(env: &Environment) -> Vec<f64> {
    let g = env.graph();
    let n = g.vertex_count();
    let mut a = vec![0.0f64; n * n];
    for x in 0..n {
        for (dir, &p) in env.row(x).iter().enumerate() {
            a[x * n + g.neighbor(x, dir)] += p;
        }
    }
    for k in (1..n).rev() {
        let (upper, lower) = a.split_at_mut(k * n);
        let row_k = &lower[..k];
        let s: f64 = row_k.iter().sum();
        for i in 0..k {
            let row_i = &mut upper[i * n..(i + 1) * n];
            row_i[k] /= s;
            let f = row_i[k];
            if f != 0.0 {
                for (dst, &src) in row_i[..k].iter_mut().zip(row_k) {
                    *dst += f * src;
                }
            }
        }
    }
    let mut pi = vec![0.0; n];
    pi[0] = 1.0;
    for k in 1..n {
        pi[k] = (0..k).map(|i| pi[i] * a[i * n + k]).sum();
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|p| *p /= total);
    pi
}

/// Power iteration on the lazy kernel `(I + P) / 2`, which shares the
/// stationary vector of `P` but is aperiodic on even tori.
fn solve_lazy_power(env: &Environment, opts: &SolverOptions) -> Result<(Vec<f64>, usize, f64)> {
    let n = env.graph().vertex_count();
    let mut pi = vec![1.0 / n as f64; n];
    let check_every = 64;
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iterations {
        let next = push_forward(env, &pi);
        let mut total = 0.0;
        for (p, q) in pi.iter_mut().zip(&next) {
            *p = 0.5 * (*p + q);
            total += *p;
        }
        pi.iter_mut().for_each(|p| *p /= total);
        if it % check_every == 0 || it == opts.max_iterations {
            residual = stationary_residual(env, &pi);
            if residual <= opts.tol {
                return Ok((pi, it, residual));
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iterations,
        residual,
    })
}

/// The invariant probability `pi` of the chain on the torus.
pub fn stationary_distribution(env: &Environment, opts: &SolverOptions) -> Result<StationarySolution> {
    let n = env.graph().vertex_count();
    let method = match opts.method {
        MethodChoice::Direct => SolveMethod::Direct,
        MethodChoice::Iterative => SolveMethod::Iterative,
        MethodChoice::Auto if n <= opts.direct_limit => SolveMethod::Direct,
        MethodChoice::Auto => SolveMethod::Iterative,
    };
    let (pi, iterations, residual) = match method {
        SolveMethod::Direct => {
            let pi = solve_gth(env);
            let r = stationary_residual(env, &pi);
            (pi, 1, r)
        }
        SolveMethod::Iterative => solve_lazy_power(env, opts)?,
    };
    if !(residual <= opts.tol) {
        return Err(Error::NonConvergence { iterations, residual });
    }
    let min_mass = pi.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(StationarySolution {
        pi: VertexField::from_values(*env.graph(), pi)?,
        residual,
        iterations,
        method,
        min_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{sample_environment, TorusGraph, Weights};
    use crate::rng::stream;

    /// Plain Gaussian elimination on (P^T - I) with the last equation
    /// replaced by normalization; independent of the GTH reduction.
    fn brute_force(env: &Environment) -> Vec<f64> {
        let g = env.graph();
        let n = g.vertex_count();
        let mut m = vec![vec![0.0; n + 1]; n];
        for x in 0..n {
            for (dir, &p) in env.row(x).iter().enumerate() {
                m[g.neighbor(x, dir)][x] += p;
            }
            m[x][x] -= 1.0;
        }
        m[n - 1] = vec![1.0; n + 1];
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
                .unwrap();
            m.swap(col, piv);
            let pivot = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != col {
                    let f = row[col] / pivot[col];
                    for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                        *x -= f * p;
                    }
                }
            }
        }
        (0..n).map(|i| m[i][n] / m[i][i]).collect()
    }

    #[test]
    fn constant_environment_is_uniform() {
        let g = TorusGraph::new(3, 4).unwrap();
        let env = Environment::constant(g, &[0.3, 0.1, 0.2, 0.05, 0.15, 0.2]).unwrap();
        let sol = stationary_distribution(&env, &SolverOptions::default()).unwrap();
        for &p in sol.pi.values() {
            assert!((p - 1.0 / 64.0).abs() < 1e-12);
        }
    }

    #[test]
    fn one_dimensional_ring_matches_direct_solve() {
        let g = TorusGraph::new(1, 3).unwrap();
        let env = Environment::new(g, vec![0.9, 0.1, 0.25, 0.75, 0.6, 0.4]).unwrap();
        let sol = stationary_distribution(&env, &SolverOptions::default()).unwrap();
        let oracle = brute_force(&env);
        for (a, b) in sol.pi.values().iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!((sol.pi.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_environment_matches_brute_force() {
        let w = Weights::new(3, vec![0.4, 1.0, 2.0, 0.3, 0.8, 1.5]).unwrap();
        let g = TorusGraph::new(3, 4).unwrap();
        let env = sample_environment(&w, &g, &mut stream(6, &[])).unwrap();
        let sol = stationary_distribution(&env, &SolverOptions::default()).unwrap();
        let oracle = brute_force(&env);
        for (a, b) in sol.pi.values().iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(sol.residual <= 1e-12);
        assert!((sol.pi.sum() - 1.0).abs() < 1e-12);
        assert!(sol.min_mass > 0.0);
    }

    #[test]
    fn methods_agree_on_even_torus() {
        let w = Weights::uniform(3, 1.0).unwrap();
        let g = TorusGraph::new(3, 4).unwrap();
        let env = sample_environment(&w, &g, &mut stream(7, &[])).unwrap();
        let direct = stationary_distribution(
            &env,
            &SolverOptions {
                method: MethodChoice::Direct,
                ..Default::default()
            },
        )
        .unwrap();
        let iter = stationary_distribution(
            &env,
            &SolverOptions {
                method: MethodChoice::Iterative,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(iter.method, SolveMethod::Iterative);
        assert!(direct.pi.max_abs_diff(&iter.pi) < 1e-10);
    }

    #[test]
    fn non_convergence_is_reported() {
        let w = Weights::uniform(3, 0.5).unwrap();
        let g = TorusGraph::new(3, 6).unwrap();
        let env = sample_environment(&w, &g, &mut stream(8, &[])).unwrap();
        let opts = SolverOptions {
            method: MethodChoice::Iterative,
            max_iterations: 10,
            ..Default::default()
        };
        assert!(matches!(
            stationary_distribution(&env, &opts),
            Err(Error::NonConvergence { iterations: 10, .. })
        ));
    }

    #[test]
    fn tiny_weights_keep_positive_mass() {
        let w = Weights::uniform(3, 0.05).unwrap();
        let g = TorusGraph::new(3, 6).unwrap();
        for s in 0..20 {
            let env = sample_environment(&w, &g, &mut stream(9, &[s])).unwrap();
            let sol = stationary_distribution(&env, &SolverOptions::default()).unwrap();
            assert!(sol.min_mass > 0.0);
            assert!((sol.pi.sum() - 1.0).abs() < 1e-12);
        }
    }
}
