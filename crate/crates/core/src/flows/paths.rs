use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::lattice::{EdgeField, TorusGraph, VertexField};
use crate::par::map_indexed;
use crate::rng::{domain, stream};

/// Default number of curves averaged per unit flow.
pub const DEFAULT_PATH_SAMPLES: usize = 1024;

/// Unit flow along a vertex path: one unit on every traversed edge.
pub fn path_flow(graph: &TorusGraph, path: &[usize]) -> Result<EdgeField> {
    let mut theta = EdgeField::zeros(*graph);
    for w in path.windows(2) {
        let e = graph
            .edge_between(w[0], w[1])
            .ok_or_else(|| Error::InvalidPath(format!("vertices {} and {} are not adjacent", w[0], w[1])))?;
        theta[e] += 1.0;
    }
    Ok(theta)
}

/// Max of outgoing and incoming flow at each vertex.
pub fn vertex_throughput(theta: &EdgeField) -> VertexField {
    let g = *theta.graph();
    let mut inflow = vec![0.0; g.vertex_count()];
    for (e, &t) in theta.values().iter().enumerate() {
        inflow[g.edge_head(e)] += t;
    }
    let mut out = theta.throughput();
    for (o, i) in out.values_mut().iter_mut().zip(inflow) {
        *o = o.max(i);
    }
    out
}

/// Positive lattice path from `0` to `y >= 0` following the integer parts
/// of the broken line `[0, u] + [u, y]`, parametrized by L1 length.
///
/// Returns the sequence of axes stepped along. Coordinates crossing an
/// integer at the same time are increased in axis order.
pub fn canonical_discrete_path(u: &[f64], y: &[i64]) -> Result<Vec<usize>> {
    if u.len() != y.len() {
        return Err(Error::InvalidShape(format!(
            "u has {} coordinates, y has {}",
            u.len(),
            y.len()
        )));
    }
    if y.iter().any(|&v| v < 0) {
        return Err(Error::InvalidArgument(
            "target must have nonnegative coordinates".into(),
        ));
    }
    let total: i64 = y.iter().sum();
    let s = total as f64 / 2.0;
    let sum_u: f64 = u.iter().sum();
    let out_of_box = u.iter().zip(y).any(|(&ui, &yi)| !(ui >= 0.0 && ui <= yi as f64));
    if out_of_box || (sum_u - s).abs() > 1e-9 * (1.0 + s) {
        return Err(Error::InvalidArgument(format!(
            "u = {u:?} is not on the slice of the box [0, {y:?}]"
        )));
    }
    let len = total as f64;
    let mut events: Vec<(f64, usize)> = Vec::with_capacity(total as usize);
    for (i, (&ui, &yi)) in u.iter().zip(y).enumerate() {
        for m in 1..=yi {
            let m = m as f64;
            let t = if m <= ui {
                s * m / ui
            } else {
                s + (m - ui) * (len - s) / (yi as f64 - ui)
            };
            events.push((t, i));
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(events.into_iter().map(|(_, i)| i).collect())
}

/// Signed displacement of each axis used to route from `x` to `y`: the
/// representative of length at least `N/2`, or zero.
pub fn displacement(graph: &TorusGraph, x: usize, y: usize) -> Vec<i64> {
    let n = graph.side() as i64;
    graph
        .coords(x)
        .iter()
        .zip(graph.coords(y))
        .map(|(&a, b)| {
            let delta = (b as i64 - a as i64).rem_euclid(n);
            if delta == 0 {
                0
            } else if 2 * delta >= n {
                delta
            } else {
                delta - n
            }
        })
        .collect()
}

/// Uniform point of `{u in [0, y] : sum u = |y|_1 / 2}`.
fn sample_slice<R: Rng + ?Sized>(y: &[i64], rng: &mut R) -> Vec<f64> {
    let active: Vec<usize> = (0..y.len()).filter(|&i| y[i] > 0).collect();
    let s = y.iter().sum::<i64>() as f64 / 2.0;
    let mut u = vec![0.0; y.len()];
    if active.is_empty() {
        return u;
    }
    // normalized exponentials are uniform on the simplex
    let mut buf = vec![0.0; active.len()];
    loop {
        let mut total = 0.0;
        for b in buf.iter_mut() {
            *b = rng.sample::<f64, _>(Exp1);
            total += *b;
        }
        if active.iter().zip(&buf).all(|(&i, &b)| b / total * s <= y[i] as f64) {
            for (&i, &b) in active.iter().zip(&buf) {
                u[i] = b / total * s;
            }
            return u;
        }
    }
}

/// Edge traversal counts of `samples` dispersed paths from `x` to `y`.
fn unit_flow_counts(graph: &TorusGraph, x: usize, y: usize, samples: usize, seed: u64, counts: &mut [u64]) {
    if x == y {
        return;
    }
    let d = graph.dim();
    let disp = displacement(graph, x, y);
    let magnitude: Vec<i64> = disp.iter().map(|v| v.abs()).collect();
    let mut rng = stream(seed, &[domain::UNIT_FLOW, graph.side() as u64, x as u64, y as u64]);
    for _ in 0..samples {
        let u = sample_slice(&magnitude, &mut rng);
        let axes = canonical_discrete_path(&u, &magnitude).expect("sampled point lies on the slice");
        let mut v = x;
        for axis in axes {
            let dir = if disp[axis] > 0 { axis } else { axis + d };
            let e = graph.edge(v, dir);
            counts[e] += 1;
            v = graph.edge_head(e);
        }
        debug_assert_eq!(v, y);
    }
}

/// Unit flow from `x` to `y` averaging the canonical paths of `samples`
/// uniform points of the slice. Exact divergence `delta_x - delta_y`.
pub fn dispersed_unit_flow(graph: &TorusGraph, x: usize, y: usize, samples: usize, seed: u64) -> Result<EdgeField> {
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let mut counts = vec![0u64; graph.edge_count()];
    unit_flow_counts(graph, x, y, samples, seed, &mut counts);
    let w = 1.0 / samples as f64;
    EdgeField::from_values(*graph, counts.iter().map(|&c| c as f64 * w).collect())
}

/// `theta_tilde = (m / N^d) sum_y theta_{0,y}` over all torus vertices `y`.
///
/// Traversal counts are integers, so the parallel sum does not depend on
/// the schedule.
pub fn aggregate_flow(graph: &TorusGraph, strength: f64, samples: usize, seed: u64) -> Result<EdgeField> {
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let n = graph.vertex_count();
    let chunks = n.min(64);
    let partial = map_indexed(chunks, |c| {
        let mut counts = vec![0u64; graph.edge_count()];
        for y in (c * n / chunks)..((c + 1) * n / chunks) {
            unit_flow_counts(graph, 0, y, samples, seed, &mut counts);
        }
        counts
    });
    let mut total = vec![0u64; graph.edge_count()];
    for counts in partial {
        for (t, c) in total.iter_mut().zip(counts) {
            *t += c;
        }
    }
    let w = strength / (n as f64 * samples as f64);
    EdgeField::from_values(*graph, total.iter().map(|&c| c as f64 * w).collect())
}
