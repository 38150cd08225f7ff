use crate::error::{Error, Result};
use crate::lattice::{divergence, opposite, EdgeField, Environment, VertexField};

use super::{stationary_distribution, SolverOptions, StationarySolution};

/// `f_N = N^d pi(0)`.
pub fn density_from(sol: &StationarySolution) -> f64 {
    sol.pi.len() as f64 * sol.pi[0]
}

pub fn density_f(env: &Environment, opts: &SolverOptions) -> Result<f64> {
    Ok(density_from(&stationary_distribution(env, opts)?))
}

/// Time reversal `omega_check(x, y) = pi(y) omega(y, x) / pi(x)`.
///
/// Rows of the result sum to one up to rounding, which is removed by a final
/// renormalization.
pub fn time_reverse(env: &Environment, pi: &VertexField) -> Result<Environment> {
    let g = env.graph();
    if let Some(v) = pi.values().iter().position(|&p| !(p > 0.0)) {
        return Err(Error::NonPositiveMeasure { vertex: v });
    }
    let deg = g.degree();
    let mut probs = vec![0.0; g.edge_count()];
    for (x, row) in probs.chunks_mut(deg).enumerate() {
        let mut total = 0.0;
        for (dir, slot) in row.iter_mut().enumerate() {
            let y = g.neighbor(x, dir);
            *slot = pi[y] * env.prob(g.edge(y, opposite(g.dim(), dir))) / pi[x];
            total += *slot;
        }
        row.iter_mut().for_each(|p| *p /= total);
    }
    Environment::new(*g, probs)
}

/// Both sides of `omega_check^theta_check / omega^theta = pi^div(theta)`, in log form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    /// `sum_e theta_check(e) ln omega_check(e) - sum_e theta(e) ln omega(e)`
    pub lhs: f64,
    /// `sum_x div(theta)(x) ln pi(x)`
    pub rhs: f64,
}

impl IdentityCheck {
    pub fn relative_error(&self) -> f64 {
        (self.lhs - self.rhs).abs() / (1.0 + self.rhs.abs())
    }
}

/// `ln(omega_check^theta_check / omega^theta)`.
pub fn log_quotient(env: &Environment, reversed: &Environment, theta: &EdgeField) -> f64 {
    let theta_check = theta.reversed();
    let mut acc = 0.0;
    for e in 0..theta.len() {
        if theta_check[e] != 0.0 {
            acc += theta_check[e] * reversed.prob(e).ln();
        }
        if theta[e] != 0.0 {
            acc -= theta[e] * env.prob(e).ln();
        }
    }
    acc
}

pub fn reversal_identity_with(env: &Environment, sol: &StationarySolution, theta: &EdgeField) -> Result<IdentityCheck> {
    let reversed = time_reverse(env, &sol.pi)?;
    let lhs = log_quotient(env, &reversed, theta);
    let div = divergence(theta);
    let rhs = div
        .values()
        .iter()
        .zip(sol.pi.values())
        .filter(|(d, _)| **d != 0.0)
        .map(|(d, p)| d * p.ln())
        .sum();
    Ok(IdentityCheck { lhs, rhs })
}

pub fn reversal_identity_check(env: &Environment, theta: &EdgeField, opts: &SolverOptions) -> Result<IdentityCheck> {
    let sol = stationary_distribution(env, opts)?;
    reversal_identity_with(env, &sol, theta)
}

/// `(p / N^d) sum_y (delta_0 - delta_y)`: the divergence a flow must have
/// for the density bound.
pub fn required_divergence(graph: &crate::lattice::TorusGraph, p: f64) -> VertexField {
    let n = graph.vertex_count() as f64;
    let mut field = VertexField::zeros(*graph);
    field.values_mut().iter_mut().for_each(|v| *v = -p / n);
    field[0] += p;
    field
}

/// `p ln f_N <= ln(omega_check^theta_check / omega^theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub log_lhs: f64,
    pub log_rhs: f64,
    pub holds: bool,
    pub divergence_error: f64,
}

const DIVERGENCE_TOLERANCE: f64 = 1e-9;

pub fn density_bound_check_with(
    env: &Environment,
    sol: &StationarySolution,
    p: f64,
    theta: &EdgeField,
) -> Result<BoundCheck> {
    let target = required_divergence(env.graph(), p);
    let divergence_error = divergence(theta).max_abs_diff(&target);
    if divergence_error > DIVERGENCE_TOLERANCE {
        return Err(Error::DivergenceCondition {
            max_error: divergence_error,
        });
    }
    let reversed = time_reverse(env, &sol.pi)?;
    let log_lhs = p * density_from(sol).ln();
    let log_rhs = log_quotient(env, &reversed, theta);
    // equality holds for uniform pi, so allow rounding
    let holds = log_lhs <= log_rhs + 1e-9 * (1.0 + log_rhs.abs());
    Ok(BoundCheck {
        log_lhs,
        log_rhs,
        holds,
        divergence_error,
    })
}

pub fn density_bound_check(env: &Environment, p: f64, theta: &EdgeField, opts: &SolverOptions) -> Result<BoundCheck> {
    let target_check = divergence(theta).max_abs_diff(&required_divergence(env.graph(), p));
    if target_check > DIVERGENCE_TOLERANCE {
        return Err(Error::DivergenceCondition {
            max_error: target_check,
        });
    }
    let sol = stationary_distribution(env, opts)?;
    density_bound_check_with(env, &sol, p, theta)
}
