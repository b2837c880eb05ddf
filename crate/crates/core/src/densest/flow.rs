//! Dinic max-flow on integer capacities.

use std::collections::VecDeque;
use std::fmt::Write as _;

/// Stands in for an infinite capacity; far above any cut value used here.
pub const INFINITE: i64 = i64::MAX / 4;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    flow: i64,
}

impl Arc {
    fn residual(&self) -> i64 {
        self.cap - self.flow
    }
}

/// Directed network. Arc `2k` is a forward arc, `2k + 1` its reverse.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    labels: Vec<String>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork::with_labels((0..nodes).map(|i| i.to_string()).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adj: vec![Vec::new(); labels.len()],
            labels,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> usize {
        assert!(cap >= 0, "negative capacity");
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, flow: 0 });
        self.arcs.push(Arc { to: from, cap: 0, flow: 0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    pub fn flow_on(&self, edge: usize) -> i64 {
        self.arcs[edge].flow
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let a = &self.arcs[e];
                if a.residual() > 0 && level[a.to] == usize::MAX {
                    level[a.to] = level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        (level[t] != usize::MAX).then_some(level)
    }

    fn augment(&mut self, u: usize, t: usize, limit: i64, level: &[usize], next: &mut [usize]) -> i64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let e = self.adj[u][next[u]];
            let (to, res) = (self.arcs[e].to, self.arcs[e].residual());
            if res > 0 && level[to] == level[u] + 1 {
                let pushed = self.augment(to, t, limit.min(res), level, next);
                if pushed > 0 {
                    self.arcs[e].flow += pushed;
                    self.arcs[e ^ 1].flow -= pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0
    }

    /// Maximum `s`-`t` flow value. Leaves the flow in place for cut queries.
    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while let Some(level) = self.levels(s, t) {
            let mut next = vec![0; self.adj.len()];
            loop {
                let pushed = self.augment(s, t, INFINITE, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    /// Nodes with no residual path to `t`: the source side of the min cut
    /// with the largest source side.
    pub fn cannot_reach(&self, t: usize) -> Vec<bool> {
        let mut reaches = vec![false; self.adj.len()];
        reaches[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let w = self.arcs[e].to;
                if !reaches[w] && self.arcs[e ^ 1].residual() > 0 {
                    reaches[w] = true;
                    queue.push_back(w);
                }
            }
        }
        reaches.into_iter().map(|r| !r).collect()
    }

    /// Graphviz rendering; arcs are labelled `flow/capacity`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph flow {\n");
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", l.replace('"', "\\\""));
        }
        for (u, arcs) in self.adj.iter().enumerate() {
            for &e in arcs.iter().filter(|&&e| e % 2 == 0) {
                let a = &self.arcs[e];
                let cap = if a.cap >= INFINITE { "inf".to_string() } else { a.cap.to_string() };
                let _ = writeln!(out, "  n{u} -> n{} [label=\"{}/{cap}\"];", a.to, a.flow);
            }
        }
        out.push_str("}\n");
        out
    }
}
