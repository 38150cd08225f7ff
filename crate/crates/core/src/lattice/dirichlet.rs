use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Gamma, Open01};
use statrs::function::gamma::ln_gamma;

use super::{EdgeField, Site, Weights};
use crate::error::{Error, Result};

/// Samples Dirichlet vectors as normalized Gamma variates.
///
/// Gamma draws are taken in log space: for shape `a < 1` we use
/// `G(a) = G(a + 1) U^{1/a}`, whose logarithm stays finite even when the draw
/// itself is far below the smallest double. A vector with an entry that still
/// underflows after normalization is redrawn.
#[derive(Debug, Clone)]
pub struct DirichletSampler {
    shapes: Vec<f64>,
    gammas: Vec<Gamma<f64>>,
}

impl DirichletSampler {
    pub fn new(shapes: &[f64]) -> Result<Self> {
        if shapes.len() < 2 {
            return Err(Error::InvalidShape("Dirichlet needs at least two components".into()));
        }
        let gammas = shapes
            .iter()
            .map(|&a| {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::InvalidShape(format!("shape {a} must be positive")));
                }
                let boosted = if a < 1.0 { a + 1.0 } else { a };
                Gamma::new(boosted, 1.0).map_err(|e| Error::InvalidShape(e.to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(DirichletSampler {
            shapes: shapes.to_vec(),
            gammas,
        })
    }

    pub fn from_weights(w: &Weights) -> Self {
        DirichletSampler::new(w.alpha()).expect("weights are validated")
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    fn log_gamma_draw<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> f64 {
        let a = self.shapes[i];
        let g: f64 = self.gammas[i].sample(rng);
        if a < 1.0 {
            let u: f64 = Open01.sample(rng);
            g.ln() + u.ln() / a
        } else {
            g.ln()
        }
    }

    /// Writes one draw into `out`; entries are positive and sum to one.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        assert_eq!(out.len(), self.shapes.len());
        loop {
            let mut top = f64::NEG_INFINITY;
            for (i, slot) in out.iter_mut().enumerate() {
                let lg = self.log_gamma_draw(i, rng);
                *slot = lg;
                top = top.max(lg);
            }
            if !top.is_finite() {
                continue;
            }
            let mut total = 0.0;
            for slot in out.iter_mut() {
                *slot = (*slot - top).exp();
                total += *slot;
            }
            let mut ok = true;
            for slot in out.iter_mut() {
                *slot /= total;
                ok &= *slot > 0.0;
            }
            if ok {
                return;
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.shapes.len()];
        self.sample_into(rng, &mut out);
        out
    }
}

/// A directed lattice edge `(tail, tail + e_dir)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeEdge {
    pub tail: Site,
    pub dir: usize,
}

impl LatticeEdge {
    pub fn new(tail: Site, dir: usize) -> Self {
        LatticeEdge { tail, dir }
    }
}

fn ln_site_moment(w: &Weights, exponents: &[f64], site: &str) -> Result<f64> {
    let total = w.total();
    let mut lambda_site = 0.0;
    let mut acc = 0.0;
    for (dir, &l) in exponents.iter().enumerate() {
        if l == 0.0 {
            continue;
        }
        let a = w.get(dir);
        if !(a + l > 0.0) {
            return Err(Error::Integrability(format!(
                "alpha + lambda = {} on edge ({site}, {dir})",
                a + l
            )));
        }
        acc += ln_gamma(a + l) - ln_gamma(a);
        lambda_site += l;
    }
    if lambda_site != 0.0 {
        if !(total + lambda_site > 0.0) {
            return Err(Error::Integrability(format!(
                "alpha_0 + lambda(x) = {} at site {site}",
                total + lambda_site
            )));
        }
        acc += ln_gamma(total) - ln_gamma(total + lambda_site);
    }
    Ok(acc)
}

/// `E[prod_e omega(e)^lambda_e]` under i.i.d. Dirichlet sites, by the
/// Gamma-product formula
/// `prod_x Gamma(alpha_0)/Gamma(alpha_0 + lambda(x)) * prod_e Gamma(alpha(e) + lambda_e)/Gamma(alpha(e))`.
///
/// Evaluated in log space and exponentiated once. Repeated edges accumulate.
pub fn dirichlet_path_moment(w: &Weights, lambda: &[(LatticeEdge, f64)]) -> Result<f64> {
    Ok(ln_dirichlet_path_moment(w, lambda)?.exp())
}

pub fn ln_dirichlet_path_moment(w: &Weights, lambda: &[(LatticeEdge, f64)]) -> Result<f64> {
    let deg = w.degree();
    let mut by_site: BTreeMap<&Site, Vec<f64>> = BTreeMap::new();
    for (edge, l) in lambda {
        if edge.tail.len() != w.dim() || edge.dir >= deg {
            return Err(Error::InvalidArgument(format!(
                "edge {edge:?} does not fit dimension {}",
                w.dim()
            )));
        }
        by_site.entry(&edge.tail).or_insert_with(|| vec![0.0; deg])[edge.dir] += l;
    }
    by_site
        .into_iter()
        .map(|(site, row)| ln_site_moment(w, &row, &format!("{site:?}")))
        .sum()
}

/// The same moment for an exponent field on a torus (sites are the torus vertices).
pub fn dirichlet_torus_moment(w: &Weights, lambda: &EdgeField) -> Result<f64> {
    let g = lambda.graph();
    if g.dim() != w.dim() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let mut acc = 0.0;
    for v in 0..g.vertex_count() {
        acc += ln_site_moment(w, lambda.row(v), &v.to_string())?;
    }
    Ok(acc.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn origin() -> Site {
        vec![0, 0, 0]
    }

    #[test]
    fn first_moment() {
        let w = Weights::uniform(3, 1.0).unwrap();
        let m = dirichlet_path_moment(&w, &[(LatticeEdge::new(origin(), 0), 1.0)]).unwrap();
        assert!((m - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn second_moment_and_empty_product() {
        let w = Weights::uniform(3, 1.0).unwrap();
        let m = dirichlet_path_moment(&w, &[(LatticeEdge::new(origin(), 0), 2.0)]).unwrap();
        assert!((m - 1.0 / 21.0).abs() < 1e-14);
        assert_eq!(dirichlet_path_moment(&w, &[]).unwrap(), 1.0);
    }

    #[test]
    fn integrability_violation() {
        let w = Weights::uniform(3, 1.0).unwrap();
        let err = dirichlet_path_moment(&w, &[(LatticeEdge::new(origin(), 2), -1.0)]).unwrap_err();
        assert!(matches!(err, Error::Integrability(_)));
        // negative exponents are fine while alpha + lambda stays positive
        assert!(dirichlet_path_moment(&w, &[(LatticeEdge::new(origin(), 2), -0.5)]).is_ok());
    }

    #[test]
    fn disjoint_sites_factorize() {
        let w = Weights::new(3, vec![0.7, 1.3, 2.0, 0.4, 1.1, 0.9]).unwrap();
        let a = vec![
            (LatticeEdge::new(origin(), 0), 1.5),
            (LatticeEdge::new(origin(), 4), 0.3),
        ];
        let b = vec![
            (LatticeEdge::new(vec![1, 0, 0], 3), 2.0),
            (LatticeEdge::new(vec![0, 2, 0], 5), 0.7),
        ];
        let joint: Vec<_> = a.iter().chain(&b).cloned().collect();
        let lhs = dirichlet_path_moment(&w, &joint).unwrap();
        let rhs = dirichlet_path_moment(&w, &a).unwrap() * dirichlet_path_moment(&w, &b).unwrap();
        assert!((lhs - rhs).abs() <= 1e-14 * rhs);
    }

    #[test]
    fn second_moment_matches_monte_carlo() {
        // 10^6 independent single-site draws; E[omega_1^2] = 1/21 for alpha = 1, d = 3.
        let w = Weights::uniform(3, 1.0).unwrap();
        let sampler = DirichletSampler::from_weights(&w);
        let mut rng = stream(11, &[0]);
        let mut row = [0.0; 6];
        let n = 1_000_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            sampler.sample_into(&mut rng, &mut row);
            let x = row[0] * row[0];
            s += x;
            s2 += x * x;
        }
        let mean = s / n as f64;
        let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!((mean - 1.0 / 21.0).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn rows_normalized_for_tiny_shapes() {
        let sampler = DirichletSampler::new(&[0.02; 6]).unwrap();
        let mut rng = stream(3, &[]);
        for _ in 0..10_000 {
            let row = sampler.sample(&mut rng);
            assert!(row.iter().all(|&x| x > 0.0));
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn large_shapes_concentrate() {
        let sampler = DirichletSampler::new(&[1e6; 6]).unwrap();
        let mut rng = stream(5, &[]);
        let row = sampler.sample(&mut rng);
        assert!(row.iter().all(|&x| (x - 1.0 / 6.0).abs() < 1e-2));
    }
}
