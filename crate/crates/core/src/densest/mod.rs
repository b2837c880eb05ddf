//! Exact densest sub(hyper)graph by parametric min-cut.
//!
//! For a guess `g = p/q` the network is source → edge node (capacity `q`),
//! edge node → each endpoint (infinite), vertex → sink (capacity `p`). A vertex
//! set denser than `g` exists iff the min cut is below `q·|E|`. The optimum is
//! one of the grid values `e/s` with `e ≤ |E|`, `s ≤ |V|`, so a binary search
//! over that sorted grid finds it exactly.

pub mod flow;
pub mod price;

use std::collections::BTreeSet;

use num_rational::Rational64;

use crate::error::{Error, Result};
pub use flow::FlowNetwork;
pub use price::{min_price_candidate, GreedyContext, PricedCandidate};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergraphDensityInstance {
    pub num_vertices: usize,
    pub edges: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteDensityInstance {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSubset {
    pub vertices: Vec<usize>,
    pub density: Rational64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseBipartite {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub density: Rational64,
}

impl HypergraphDensityInstance {
    /// Sorted, deduplicated edges; rejects out-of-range or empty edges.
    fn normalized_edges(&self) -> Result<Vec<Vec<usize>>> {
        let mut set = BTreeSet::new();
        for e in &self.edges {
            if e.is_empty() || e.iter().any(|&v| v >= self.num_vertices) {
                return Err(Error::InvalidInstance(format!("bad hyperedge {e:?}")));
            }
            let mut e = e.clone();
            e.sort_unstable();
            e.dedup();
            set.insert(e);
        }
        Ok(set.into_iter().collect())
    }

    /// `|{e ⊆ S}| / |S|`, or `None` for an empty set.
    pub fn density_of(&self, set: &[usize]) -> Option<Rational64> {
        if set.is_empty() {
            return None;
        }
        let members: BTreeSet<usize> = set.iter().copied().collect();
        let inside = self
            .normalized_edges()
            .ok()?
            .iter()
            .filter(|e| e.iter().all(|v| members.contains(v)))
            .count();
        Some(Rational64::new(inside as i64, members.len() as i64))
    }
}

impl BipartiteDensityInstance {
    fn as_hypergraph(&self) -> HypergraphDensityInstance {
        HypergraphDensityInstance {
            num_vertices: self.left + self.right,
            edges: self.edges.iter().map(|&(x, y)| vec![x, self.left + y]).collect(),
        }
    }
}

/// The density network for guess `g`; returns it with its source and sink.
pub fn density_network(edges: &[Vec<usize>], num_vertices: usize, g: Rational64) -> (FlowNetwork, usize, usize) {
    let (p, q) = (*g.numer(), *g.denom());
    let source = 0;
    let sink = 1;
    let edge_base = 2;
    let vertex_base = edge_base + edges.len();
    let mut labels = vec!["s".to_string(), "t".to_string()];
    labels.extend((0..edges.len()).map(|i| format!("e{i}")));
    labels.extend((0..num_vertices).map(|v| format!("v{v}")));
    let mut net = FlowNetwork::with_labels(labels);
    for (i, e) in edges.iter().enumerate() {
        net.add_edge(source, edge_base + i, q);
        for &v in e {
            net.add_edge(edge_base + i, vertex_base + v, flow::INFINITE);
        }
    }
    for v in 0..num_vertices {
        net.add_edge(vertex_base + v, sink, p);
    }
    (net, source, sink)
}

pub fn densest_hypergraph(inst: &HypergraphDensityInstance) -> Result<DenseSubset> {
    let edges = inst.normalized_edges()?;
    if edges.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    // isolated vertices never help; compact the rest
    let used: BTreeSet<usize> = edges.iter().flatten().copied().collect();
    let index: Vec<usize> = used.iter().copied().collect();
    let compact: Vec<Vec<usize>> = edges
        .iter()
        .map(|e| e.iter().map(|v| index.binary_search(v).expect("used vertex")).collect())
        .collect();
    let (m, n) = (compact.len() as i64, index.len() as i64);

    let grid: Vec<Rational64> = (1..=m)
        .flat_map(|e| (1..=n).map(move |s| Rational64::new(e, s)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let denser_than = |g: Rational64| {
        let (mut net, s, t) = density_network(&compact, index.len(), g);
        net.max_flow(s, t) < g.denom() * m
    };
    // first grid value that nothing beats; the optimum is attained on the grid
    let (mut lo, mut hi) = (0, grid.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if denser_than(grid[mid]) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let best = grid[lo];
    let (mut net, s, t) = density_network(&compact, index.len(), best);
    net.max_flow(s, t);
    let side = net.cannot_reach(t);
    let vertex_base = 2 + compact.len();
    let vertices: Vec<usize> = (0..index.len())
        .filter(|&v| side[vertex_base + v])
        .map(|v| index[v])
        .collect();
    let density = inst.density_of(&vertices).ok_or_else(|| {
        Error::InternalInconsistency("min cut at the optimal density selected no vertices".into())
    })?;
    if density != best {
        return Err(Error::InternalInconsistency(format!(
            "selected set has density {density}, expected {best}"
        )));
    }
    Ok(DenseSubset { vertices, density })
}

pub fn densest_bipartite(inst: &BipartiteDensityInstance) -> Result<DenseBipartite> {
    if inst.edges.iter().any(|&(x, y)| x >= inst.left || y >= inst.right) {
        return Err(Error::InvalidInstance("edge endpoint out of range".into()));
    }
    let best = densest_hypergraph(&inst.as_hypergraph())?;
    let (left, right): (Vec<usize>, Vec<usize>) = best.vertices.iter().partition(|&&v| v < inst.left);
    Ok(DenseBipartite {
        left,
        right: right.into_iter().map(|v| v - inst.left).collect(),
        density: best.density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    fn enumerate(inst: &HypergraphDensityInstance) -> Rational64 {
        (1u32..(1 << inst.num_vertices))
            .filter_map(|mask| {
                let set: Vec<usize> = (0..inst.num_vertices).filter(|v| mask >> v & 1 == 1).collect();
                inst.density_of(&set)
            })
            .max()
            .unwrap()
    }

    #[test]
    fn complete_bipartite() {
        let inst = BipartiteDensityInstance {
            left: 2,
            right: 2,
            edges: vec![(0, 0), (0, 1), (1, 0), (1, 1)],
        };
        let d = densest_bipartite(&inst).unwrap();
        assert_eq!((d.left, d.right, d.density), (vec![0, 1], vec![0, 1], r(1, 1)));
    }

    #[test]
    fn single_edge() {
        let inst = BipartiteDensityInstance {
            left: 1,
            right: 1,
            edges: vec![(0, 0)],
        };
        assert_eq!(densest_bipartite(&inst).unwrap().density, r(1, 2));
    }

    #[test]
    fn star_with_isolated_vertex() {
        let inst = BipartiteDensityInstance {
            left: 2,
            right: 3,
            edges: vec![(0, 0), (0, 1), (0, 2)],
        };
        let d = densest_bipartite(&inst).unwrap();
        assert_eq!((d.left, d.right, d.density), (vec![0], vec![0, 1, 2], r(3, 4)));
    }

    #[test]
    fn hypergraph_examples() {
        let one = HypergraphDensityInstance {
            num_vertices: 3,
            edges: vec![vec![0, 1, 2]],
        };
        let d = densest_hypergraph(&one).unwrap();
        assert_eq!((d.vertices, d.density), (vec![0, 1, 2], r(1, 3)));

        let two = HypergraphDensityInstance {
            num_vertices: 4,
            edges: vec![vec![0, 1], vec![2, 3]],
        };
        assert_eq!(densest_hypergraph(&two).unwrap().density, r(1, 2));
    }

    #[test]
    fn empty_edge_set() {
        let inst = HypergraphDensityInstance {
            num_vertices: 3,
            edges: vec![],
        };
        assert!(matches!(densest_hypergraph(&inst), Err(Error::EmptyEdgeSet)));
    }

    proptest! {
        #[test]
        fn flow_matches_enumeration(
            n in 2usize..9,
            raw in prop::collection::vec(prop::collection::vec(0usize..9, 1..4), 1..12),
        ) {
            let edges: Vec<Vec<usize>> = raw.into_iter().map(|e| e.into_iter().map(|v| v % n).collect()).collect();
            let inst = HypergraphDensityInstance { num_vertices: n, edges };
            let d = densest_hypergraph(&inst).unwrap();
            prop_assert_eq!(d.density, enumerate(&inst));
            prop_assert_eq!(inst.density_of(&d.vertices), Some(d.density));
        }

        #[test]
        fn bipartite_agrees_with_hypergraph(
            l in 1usize..5, rr in 1usize..5,
            raw in prop::collection::vec((0usize..5, 0usize..5), 1..12),
        ) {
            let edges: Vec<(usize, usize)> = raw.into_iter().map(|(x, y)| (x % l, y % rr)).collect();
            let bi = BipartiteDensityInstance { left: l, right: rr, edges };
            let d = densest_bipartite(&bi).unwrap();
            prop_assert_eq!(d.density, enumerate(&bi.as_hypergraph()));
        }
    }
}
