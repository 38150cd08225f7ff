use std::collections::HashMap;

use super::network::{max_flow_min_cut, DiGraph};
use crate::error::{Error, Result};
use crate::lattice::{step, LatticeCapacities, Site};

/// Sites of `Z^d` with L1 norm at most `radius`, in lexicographic order.
pub fn lattice_ball(dim: usize, radius: usize) -> Vec<Site> {
    let r = radius as i64;
    let mut out = Vec::new();
    let mut site = vec![-r; dim];
    loop {
        if site.iter().map(|c| c.abs()).sum::<i64>() <= r {
            out.push(site.clone());
        }
        let mut k = dim;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if site[k] < r {
                site[k] += 1;
                break;
            }
            site[k] = -r;
        }
    }
}

/// Minimal cut between the origin and infinity, approximated on the ball
/// `B(0, R)` whose boundary-crossing edges all lead to one extra sink.
/// Nonincreasing in `R`.
pub fn min_cut_truncated_lattice(caps: &LatticeCapacities, radius: usize) -> Result<f64> {
    if radius < 2 {
        return Err(Error::InvalidArgument(format!("radius {radius} below 2")));
    }
    let d = caps.dim();
    let sites = lattice_ball(d, radius);
    let index: HashMap<&Site, usize> = sites.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut g = DiGraph::new(sites.len() + 1);
    let sink = sites.len();
    let mut capacities = Vec::new();
    for (i, site) in sites.iter().enumerate() {
        for dir in 0..2 * d {
            let mut head = site.clone();
            step(&mut head, dir);
            g.add_arc(i, index.get(&head).copied().unwrap_or(sink));
            capacities.push(caps.capacity(site, dir));
        }
    }
    let origin = index[&vec![0; d]];
    Ok(max_flow_min_cut(&g, &capacities, origin, sink)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ball_size, Weights};

    #[test]
    fn ball_enumeration() {
        for (d, r) in [(1, 3), (2, 2), (3, 3)] {
            assert_eq!(lattice_ball(d, r).len() as u64, ball_size(d, r));
        }
    }

    #[test]
    fn uniform_cut_is_degree() {
        let caps = LatticeCapacities::uniform(3, 1.0);
        for r in [2, 3] {
            assert!((min_cut_truncated_lattice(&caps, r).unwrap() - 6.0).abs() < 1e-12);
        }
        let scaled = caps.scaled(2.5);
        assert!((min_cut_truncated_lattice(&scaled, 2).unwrap() - 15.0).abs() < 1e-12);
    }

    #[test]
    fn boosted_cut_is_kappa() {
        let w = Weights::uniform(3, 1.0).unwrap();
        let v = min_cut_truncated_lattice(&w.boosted(0).unwrap(), 3).unwrap();
        assert!((v - 10.0).abs() < 1e-12);
    }

    #[test]
    fn small_radius_rejected() {
        assert!(min_cut_truncated_lattice(&LatticeCapacities::uniform(3, 1.0), 1).is_err());
    }
}
