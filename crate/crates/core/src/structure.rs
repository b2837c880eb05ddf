//! Structural analysis of a query: connectivity graphs, acyclicity,
//! free-connexity, head-cluster and head-domination, and the two hardness
//! certificates (free sequences and nested cliques of the renamed query).
//!
//! Everything here depends on the query alone, never on data.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::query::{Attribute, Query, RelationSchema};

/// Small undirected graph over named vertices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UndirectedGraph {
    pub vertices: Vec<String>,
    /// Each edge stored once with endpoints in ascending order.
    pub edges: BTreeSet<(String, String)>,
}

impl UndirectedGraph {
    fn add_edge(&mut self, a: &str, b: &str) {
        if a != b {
            let (x, y) = if a < b { (a, b) } else { (b, a) };
            self.edges.insert((x.to_string(), y.to_string()));
        }
    }

    /// Connected components, each sorted, ordered by their smallest member.
    pub fn components(&self) -> Vec<Vec<String>> {
        let index: BTreeMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let n = p[c];
                p[c] = r;
                c = n;
            }
            r
        }
        for (a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, index[a.as_str()]), find(&mut parent, index[b.as_str()]));
            parent[ra] = rb;
        }
        let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(v.clone());
        }
        let mut comps: Vec<Vec<String>> = groups
            .into_values()
            .map(|mut g| {
                g.sort();
                g
            })
            .collect();
        comps.sort();
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// The three connectivity graphs of a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureGraphs {
    /// Relations, adjacent when they share any attribute.
    pub gq: UndirectedGraph,
    /// Relations with a non-output attribute, adjacent when they share one.
    pub gq_exists: UndirectedGraph,
    /// Non-output attributes, adjacent when some relation holds both.
    pub hq: UndirectedGraph,
}

pub fn build_graphs(query: &Query) -> StructureGraphs {
    let rels = query.relations();
    let mut gq = UndirectedGraph {
        vertices: rels.iter().map(|r| r.name.clone()).collect(),
        ..Default::default()
    };
    let mut gq_exists = UndirectedGraph {
        vertices: rels
            .iter()
            .filter(|r| !query.is_head_only(r))
            .map(|r| r.name.clone())
            .collect(),
        ..Default::default()
    };
    for (i, a) in rels.iter().enumerate() {
        for b in &rels[i + 1..] {
            let shared: Vec<&String> = a.attrs.iter().filter(|x| b.contains(x)).collect();
            if !shared.is_empty() {
                gq.add_edge(&a.name, &b.name);
            }
            if shared.iter().any(|x| !query.is_head(x)) {
                gq_exists.add_edge(&a.name, &b.name);
            }
        }
    }
    let mut hq = UndirectedGraph {
        vertices: query.non_output_attrs(),
        ..Default::default()
    };
    for r in rels {
        let nonout: Vec<&String> = r.attrs.iter().filter(|x| !query.is_head(x)).collect();
        for (i, x) in nonout.iter().enumerate() {
            for y in &nonout[i + 1..] {
                hq.add_edge(x, y);
            }
        }
    }
    StructureGraphs { gq, gq_exists, hq }
}

/// Join tree produced by GYO ear removal. Every relation except the last one
/// removed has a parent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JoinTree {
    pub parent: BTreeMap<String, Option<String>>,
    /// Relations in removal order (leaves first, root last).
    pub elimination_order: Vec<String>,
}

impl JoinTree {
    pub fn root(&self) -> Option<&str> {
        self.elimination_order.last().map(String::as_str)
    }
}

/// GYO reduction over named hyperedges. Always removes the smallest-named
/// eligible ear and attaches it to the smallest-named witness edge.
fn gyo(edges: &[(String, BTreeSet<String>)]) -> Option<JoinTree> {
    let mut remaining: BTreeMap<&str, &BTreeSet<String>> = edges.iter().map(|(n, a)| (n.as_str(), a)).collect();
    let mut parent = BTreeMap::new();
    let mut order = Vec::new();
    while remaining.len() > 1 {
        let mut removed = None;
        'ears: for (&name, attrs) in &remaining {
            let shared: BTreeSet<&String> = attrs
                .iter()
                .filter(|a| remaining.iter().any(|(&o, oa)| o != name && oa.contains(*a)))
                .collect();
            for (&other, other_attrs) in &remaining {
                if other != name && shared.iter().all(|a| other_attrs.contains(*a)) {
                    removed = Some((name, other));
                    break 'ears;
                }
            }
        }
        let (ear, host) = removed?;
        remaining.remove(ear);
        parent.insert(ear.to_string(), Some(host.to_string()));
        order.push(ear.to_string());
    }
    if let Some((&last, _)) = remaining.iter().next() {
        parent.insert(last.to_string(), None);
        order.push(last.to_string());
    }
    Some(JoinTree {
        parent,
        elimination_order: order,
    })
}

fn hyperedges(query: &Query) -> Vec<(String, BTreeSet<String>)> {
    query
        .relations()
        .iter()
        .map(|r| (r.name.clone(), r.attrs.iter().cloned().collect()))
        .collect()
}

/// Join tree of `query`, or `None` when it is cyclic.
pub fn join_tree(query: &Query) -> Option<JoinTree> {
    gyo(&hyperedges(query))
}

pub fn is_acyclic(query: &Query) -> bool {
    join_tree(query).is_some()
}

/// Acyclic, and still acyclic after adding an atom over exactly `head(Q)`.
pub fn is_free_connex(query: &Query) -> bool {
    if !is_acyclic(query) {
        return false;
    }
    let mut edges = hyperedges(query);
    // '<' cannot occur in identifiers, so the name never clashes
    edges.push(("<head>".to_string(), query.head().iter().cloned().collect()));
    gyo(&edges).is_some()
}

fn head_set<'a>(query: &Query, rel: &'a RelationSchema) -> BTreeSet<&'a str> {
    rel.attrs
        .iter()
        .filter(|a| query.is_head(a))
        .map(String::as_str)
        .collect()
}

/// Pairwise form: relations with different heads share only output attributes.
pub fn has_head_cluster(query: &Query) -> bool {
    let rels = query.relations();
    let pairwise = rels.iter().enumerate().all(|(i, a)| {
        rels[i + 1..].iter().all(|b| {
            head_set(query, a) == head_set(query, b)
                || a.attrs.iter().filter(|x| b.contains(x)).all(|x| query.is_head(x))
        })
    });
    debug_assert_eq!(pairwise, head_cluster_by_components(query));
    pairwise
}

/// Component form: every relation of every existential component is dominant
/// for its component.
pub fn head_cluster_by_components(query: &Query) -> bool {
    existential_components(query).iter().all(|c| {
        let needed: BTreeSet<&str> = c.output_attrs.iter().map(String::as_str).collect();
        c.relations.iter().all(|name| {
            let rel = query.relation(name).expect("component member exists");
            needed.is_subset(&head_set(query, rel))
        })
    })
}

/// One connected component of the existential-connectivity graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExistentialComponent {
    pub relations: Vec<String>,
    /// Output attributes occurring in the component, in head order.
    pub output_attrs: Vec<Attribute>,
    /// A relation whose head contains `output_attrs`, preferring members of
    /// the component, then query order.
    pub dominant: Option<String>,
}

pub fn existential_components(query: &Query) -> Vec<ExistentialComponent> {
    let graphs = build_graphs(query);
    graphs
        .gq_exists
        .components()
        .into_iter()
        .map(|relations| {
            let output_attrs: Vec<Attribute> = query
                .head()
                .iter()
                .filter(|a| {
                    relations
                        .iter()
                        .any(|r| query.relation(r).is_some_and(|s| s.contains(a)))
                })
                .cloned()
                .collect();
            let dominates = |r: &RelationSchema| output_attrs.iter().all(|a| r.contains(a));
            let dominant = query
                .relations()
                .iter()
                .filter(|r| relations.contains(&r.name))
                .find(|r| dominates(r))
                .or_else(|| query.relations().iter().find(|r| dominates(r)))
                .map(|r| r.name.clone());
            ExistentialComponent {
                relations,
                output_attrs,
                dominant,
            }
        })
        .collect()
}

pub fn has_head_domination(query: &Query) -> bool {
    existential_components(query).iter().all(|c| c.dominant.is_some())
}

/// Attribute pairs held together by some relation.
fn cooccurrence(query: &Query) -> BTreeMap<&str, BTreeSet<&str>> {
    let mut adj: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in query.relations() {
        for a in &r.attrs {
            let entry = adj.entry(a.as_str()).or_default();
            for b in &r.attrs {
                if a != b {
                    entry.insert(b.as_str());
                }
            }
        }
    }
    adj
}

/// A shortest free sequence `⟨A_1, …, A_k⟩`, ties broken by comparing the
/// attribute names position by position.
pub fn find_free_sequence(query: &Query) -> Option<Vec<Attribute>> {
    let adj = cooccurrence(query);
    let mut heads: Vec<&str> = query.head().iter().map(String::as_str).collect();
    heads.sort();
    let mut best: Option<Vec<&str>> = None;
    for &target in &heads {
        // distance from each non-output attribute to `target` through non-output attributes
        let mut dist: BTreeMap<&str, usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &n in &adj[target] {
            if !query.is_head(n) {
                dist.insert(n, 1);
                queue.push_back(n);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v];
            for &n in &adj[v] {
                if !query.is_head(n) && !dist.contains_key(n) {
                    dist.insert(n, d + 1);
                    queue.push_back(n);
                }
            }
        }
        for &source in &heads {
            if source == target || adj[source].contains(target) {
                continue;
            }
            let Some(first_len) = adj[source].iter().filter_map(|n| dist.get(n)).min().copied() else {
                continue;
            };
            let mut path = vec![source];
            let mut need = first_len;
            let mut cur = source;
            while need > 0 {
                let next = adj[cur]
                    .iter()
                    .copied()
                    .find(|n| !query.is_head(n) && dist.get(n) == Some(&need))
                    .expect("distance labels guarantee a successor");
                path.push(next);
                cur = next;
                need -= 1;
            }
            path.push(target);
            let better = match &best {
                None => true,
                Some(b) => (path.len(), &path) < (b.len(), b),
            };
            if better {
                best = Some(path);
            }
        }
    }
    best.map(|p| p.into_iter().map(str::to_string).collect())
}

/// Collapses each connected component of non-output attributes to one fresh
/// attribute `F1, F2, …` (numbered by component order).
pub fn rename(query: &Query) -> Query {
    let graphs = build_graphs(query);
    let mut fresh: BTreeMap<String, String> = BTreeMap::new();
    let mut taken: BTreeSet<String> = query.head().iter().cloned().collect();
    for (j, comp) in graphs.hq.components().into_iter().enumerate() {
        let mut name = format!("F{}", j + 1);
        while taken.contains(&name) {
            name.push('_');
        }
        taken.insert(name.clone());
        for a in comp {
            fresh.insert(a, name.clone());
        }
    }
    let relations = query
        .relations()
        .iter()
        .map(|r| {
            let mut attrs: Vec<Attribute> = Vec::new();
            for a in &r.attrs {
                let mapped = fresh.get(a).unwrap_or(a);
                if !attrs.contains(mapped) {
                    attrs.push(mapped.clone());
                }
            }
            RelationSchema::new(r.name.clone(), attrs)
        })
        .collect();
    Query::with_name(query.name(), query.head().to_vec(), relations).expect("renaming preserves well-formedness")
}

/// A minimum-cardinality nested clique, ties broken lexicographically over the
/// sorted attribute names. Callers pass the renamed query.
pub fn find_nested_clique(query: &Query) -> Option<Vec<Attribute>> {
    let adj = cooccurrence(query);
    let mut attrs: Vec<&str> = adj.keys().copied().collect();
    attrs.sort();
    let heads: Vec<BTreeSet<&str>> = query.relations().iter().map(|r| head_set(query, r)).collect();
    let is_nested = |p: &[&str]| {
        let hp: BTreeSet<&str> = p.iter().copied().filter(|a| query.is_head(a)).collect();
        !hp.is_empty() && hp.len() < p.len() && !heads.iter().any(|h| hp.is_subset(h))
    };
    fn extend<'a>(
        start: usize,
        size: usize,
        attrs: &[&'a str],
        adj: &BTreeMap<&str, BTreeSet<&str>>,
        chosen: &mut Vec<&'a str>,
        accept: &dyn Fn(&[&str]) -> bool,
    ) -> bool {
        if chosen.len() == size {
            return accept(chosen);
        }
        for i in start..attrs.len() {
            let cand = attrs[i];
            if chosen.iter().all(|c| adj[c].contains(cand)) {
                chosen.push(cand);
                if extend(i + 1, size, attrs, adj, chosen, accept) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    for size in 2..=attrs.len() {
        let mut chosen = Vec::new();
        if extend(0, size, &attrs, &adj, &mut chosen, &is_nested) {
            return Some(chosen.into_iter().map(str::to_string).collect());
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Label {
    /// Head-cluster: exactly solvable in polynomial time.
    ExactPTime,
    /// Head-domination without head-cluster: constant-factor approximable.
    ConstApprox,
    /// No head-domination: no `(1 - o(1)) log N` approximation unless P = NP.
    LogHard,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    FreeSequence {
        attributes: Vec<Attribute>,
    },
    NestedClique {
        attributes: Vec<Attribute>,
        in_renamed_query: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub label: Label,
    pub connected: bool,
    pub acyclic: bool,
    pub free_connex: bool,
    pub full: bool,
    pub head_cluster: bool,
    pub head_domination: bool,
    pub components: Vec<ExistentialComponent>,
    pub certificate: Option<Certificate>,
}

pub fn classify(query: &Query) -> Result<Classification> {
    let graphs = build_graphs(query);
    let head_cluster = has_head_cluster(query);
    let components = existential_components(query);
    let head_domination = components.iter().all(|c| c.dominant.is_some());
    let (label, certificate) = if head_cluster {
        (Label::ExactPTime, None)
    } else if head_domination {
        (Label::ConstApprox, None)
    } else if let Some(seq) = find_free_sequence(query) {
        (Label::LogHard, Some(Certificate::FreeSequence { attributes: seq }))
    } else if let Some(clique) = find_nested_clique(&rename(query)) {
        (
            Label::LogHard,
            Some(Certificate::NestedClique {
                attributes: clique,
                in_renamed_query: true,
            }),
        )
    } else {
        return Err(Error::InternalInconsistency(format!(
            "`{query}` lacks head-domination but has neither a free sequence nor a nested clique"
        )));
    };
    Ok(Classification {
        label,
        connected: graphs.gq.is_connected(),
        acyclic: is_acyclic(query),
        free_connex: is_free_connex(query),
        full: query.is_full(),
        head_cluster,
        head_domination,
        components,
        certificate,
    })
}
