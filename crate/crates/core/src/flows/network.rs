use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite directed multigraph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiGraph {
    vertices: usize,
    arcs: Vec<(usize, usize)>,
}

impl DiGraph {
    pub fn new(vertices: usize) -> Self {
        DiGraph {
            vertices,
            arcs: Vec::new(),
        }
    }

    pub fn from_arcs(vertices: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = arcs.iter().find(|(u, v)| *u >= vertices || *v >= vertices) {
            return Err(Error::InvalidGraph(format!(
                "arc ({u}, {v}) leaves a graph of {vertices} vertices"
            )));
        }
        Ok(DiGraph { vertices, arcs })
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertices += 1;
        self.vertices - 1
    }

    pub fn add_arc(&mut self, tail: usize, head: usize) -> usize {
        assert!(
            tail < self.vertices && head < self.vertices,
            "arc endpoint out of range"
        );
        self.arcs.push((tail, head));
        self.arcs.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc(&self, a: usize) -> (usize, usize) {
        self.arcs[a]
    }

    /// `div(f)(x) = out(x) - in(x)`.
    pub fn divergence(&self, flow: &[f64]) -> Vec<f64> {
        let mut div = vec![0.0; self.vertices];
        for (&(u, v), &f) in self.arcs.iter().zip(flow) {
            div[u] += f;
            div[v] -= f;
        }
        div
    }
}

/// A vertex set containing the source, with its outgoing arc boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutSet {
    pub vertices: Vec<usize>,
    pub boundary: Vec<usize>,
    pub capacity: f64,
}

impl CutSet {
    pub fn from_members(g: &DiGraph, capacities: &[f64], members: &[bool]) -> Self {
        let vertices = (0..g.vertex_count()).filter(|&v| members[v]).collect();
        let boundary = out_boundary(g, members);
        let capacity = boundary.iter().map(|&a| capacities[a]).sum();
        CutSet {
            vertices,
            boundary,
            capacity,
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// Arcs leaving the set.
pub fn out_boundary(g: &DiGraph, members: &[bool]) -> Vec<usize> {
    (0..g.arc_count())
        .filter(|&a| {
            let (u, v) = g.arc(a);
            members[u] && !members[v]
        })
        .collect()
}

/// Arcs entering the set.
pub fn in_boundary(g: &DiGraph, members: &[bool]) -> Vec<usize> {
    (0..g.arc_count())
        .filter(|&a| {
            let (u, v) = g.arc(a);
            !members[u] && members[v]
        })
        .collect()
}

/// Weakly connected components of the complement of `members`.
pub fn complement_components(g: &DiGraph, members: &[bool]) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in g.arcs() {
        if !members[u] && !members[v] {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut seen = members.to_vec();
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            for &w in &adj[comp[i]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Vertices of `within` reachable from `source` along arcs that stay in `within`.
pub fn reachable_within(g: &DiGraph, source: usize, within: &[bool]) -> Vec<bool> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for &(u, v) in g.arcs() {
        adj[u].push(v);
    }
    let mut reached = vec![false; g.vertex_count()];
    reached[source] = true;
    let mut stack = vec![source];
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if within[v] && !reached[v] {
                reached[v] = true;
                stack.push(v);
            }
        }
    }
    reached
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxFlow {
    pub value: f64,
    pub cut: CutSet,
    /// Flow per arc, in `[0, capacity]`.
    pub flow: Vec<f64>,
}

/// Residual network for Dinic's algorithm. Arc `a` of the input is stored at
/// `2a` with its reverse at `2a + 1`.
struct Residual {
    head: Vec<usize>,
    res: Vec<f64>,
    adj: Vec<Vec<usize>>,
    level: Vec<usize>,
    next: Vec<usize>,
    eps: f64,
}

const UNREACHED: usize = usize::MAX;

impl Residual {
    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = UNREACHED);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &k in &self.adj[u] {
                let v = self.head[k];
                if self.res[k] > self.eps && self.level[v] == UNREACHED {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] != UNREACHED
    }

    fn dfs(&mut self, u: usize, t: usize, limit: f64) -> f64 {
        if u == t {
            return limit;
        }
        while self.next[u] < self.adj[u].len() {
            let k = self.adj[u][self.next[u]];
            let v = self.head[k];
            if self.res[k] > self.eps && self.level[v] == self.level[u] + 1 {
                let pushed = self.dfs(v, t, limit.min(self.res[k]));
                if pushed > 0.0 {
                    self.res[k] -= pushed;
                    self.res[k ^ 1] += pushed;
                    return pushed;
                }
            }
            self.next[u] += 1;
        }
        0.0
    }
}

/// Maximum `source -> sink` flow with Dinic's layered augmentation.
///
/// Residual capacities at or below `1e-12 * max(1, max capacity)` count as
/// saturated. The returned cut is the residual-reachable set pruned to the
/// part reachable from the source inside it.
pub fn max_flow_min_cut(g: &DiGraph, capacities: &[f64], source: usize, sink: usize) -> Result<MaxFlow> {
    let n = g.vertex_count();
    if capacities.len() != g.arc_count() {
        return Err(Error::FieldLength {
            expected: g.arc_count(),
            found: capacities.len(),
        });
    }
    if source >= n || sink >= n || source == sink {
        return Err(Error::InvalidArgument(format!("bad terminals {source} -> {sink}")));
    }
    if let Some(c) = capacities.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "capacity {c} is not a finite nonnegative number"
        )));
    }
    let max_cap = capacities.iter().copied().fold(1.0, f64::max);
    let mut net = Residual {
        head: Vec::with_capacity(2 * g.arc_count()),
        res: Vec::with_capacity(2 * g.arc_count()),
        adj: vec![Vec::new(); n],
        level: vec![UNREACHED; n],
        next: vec![0; n],
        eps: 1e-12 * max_cap,
    };
    for (a, (&(u, v), &c)) in g.arcs().iter().zip(capacities).enumerate() {
        net.head.push(v);
        net.res.push(c);
        net.head.push(u);
        net.res.push(0.0);
        net.adj[u].push(2 * a);
        net.adj[v].push(2 * a + 1);
    }
    while net.bfs(source, sink) {
        net.next.iter_mut().for_each(|p| *p = 0);
        while net.dfs(source, sink, f64::INFINITY) > 0.0 {}
    }
    let flow: Vec<f64> = capacities
        .iter()
        .enumerate()
        .map(|(a, &c)| (c - net.res[2 * a]).clamp(0.0, c))
        .collect();
    net.bfs(source, sink);
    let residual_side: Vec<bool> = net.level.iter().map(|&l| l != UNREACHED).collect();
    let members = reachable_within(g, source, &residual_side);
    let cut = CutSet::from_members(g, capacities, &members);
    let value = g.divergence(&flow)[source];
    Ok(MaxFlow { value, cut, flow })
}
