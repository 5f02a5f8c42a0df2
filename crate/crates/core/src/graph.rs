//! Exchange-graph enumeration: breadth-first search over clusters reachable
//! by mutation, identifying seeds that carry the same cluster up to
//! relabeling.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::Result;
use crate::seed::json::seed_value;
use crate::seed::Seed;
use crate::tropical::{initial_state, TropicalState};

#[derive(Debug, Clone)]
pub struct GraphNode {
    pub id: usize,
    /// Canonical key of the cluster.
    pub key: String,
    /// A shortest path from the initial seed.
    pub path: Vec<String>,
    pub state: TropicalState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    /// Mutable label mutated at `from`.
    pub direction: String,
}

#[derive(Debug, Clone)]
pub struct ExchangeGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    /// Every neighbour of every node was found among the nodes.
    pub closed: bool,
    pub max_seeds: usize,
}

pub fn exchange_graph(s: &Seed, max_seeds: usize) -> Result<ExchangeGraph> {
    let root = initial_state(s)?;
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut closed = true;
    let key = root.cluster_key();
    if max_seeds == 0 {
        return Ok(ExchangeGraph { nodes, edges, closed: false, max_seeds });
    }
    index.insert(key.clone(), 0);
    nodes.push(GraphNode { id: 0, key, path: Vec::new(), state: root });
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let st = nodes[i].state.clone();
        for k in st.current().directions() {
            let next = st.mutate(&k)?;
            let key = next.cluster_key();
            let j = match index.get(&key) {
                Some(&j) => j,
                None if nodes.len() < max_seeds => {
                    let j = nodes.len();
                    index.insert(key.clone(), j);
                    let mut path = nodes[i].path.clone();
                    path.push(k.clone());
                    nodes.push(GraphNode { id: j, key, path, state: next });
                    queue.push_back(j);
                    j
                }
                None => {
                    closed = false;
                    continue;
                }
            };
            if j > i {
                edges.push(GraphEdge { from: i, to: j, direction: k });
            }
        }
    }
    Ok(ExchangeGraph { nodes, edges, closed, max_seeds })
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl ExchangeGraph {
    pub fn summary(&self) -> String {
        if self.closed {
            format!("finite type, {} seeds", self.nodes.len())
        } else {
            format!("not closed after {} seeds", self.nodes.len())
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph exchange {\n");
        for n in &self.nodes {
            let _ = writeln!(out, "  n{} [label=\"{}\"];", n.id, escape(&n.key));
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -- n{} [label=\"{}\"];", e.from, e.to, escape(&e.direction));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .map(|n| {
                json!({
                    "id": n.id,
                    "key": n.key,
                    "path": n.path,
                    "seed": seed_value(n.state.current(), None),
                })
            })
            .collect();
        let edges: Vec<Value> =
            self.edges.iter().map(|e| json!({"from": e.from, "to": e.to, "direction": e.direction})).collect();
        json!({
            "closed": self.closed,
            "seeds": self.nodes.len(),
            "max_seeds": self.max_seeds,
            "summary": self.summary(),
            "nodes": nodes,
            "edges": edges,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::fixtures;

    #[test]
    fn a2_pentagon() {
        for s in [fixtures::a2(), fixtures::a2f()] {
            let g = exchange_graph(&s, 100).unwrap();
            assert!(g.closed);
            assert_eq!(g.nodes.len(), 5);
            assert_eq!(g.edges.len(), 5);
        }
    }

    #[test]
    fn markov_open() {
        let g = exchange_graph(&fixtures::markov(), 50).unwrap();
        assert!(!g.closed);
        assert_eq!(g.nodes.len(), 50);
    }

    #[test]
    fn deterministic_output() {
        let a = exchange_graph(&fixtures::a2f(), 10).unwrap();
        let b = exchange_graph(&fixtures::a2f(), 10).unwrap();
        assert_eq!(a.to_dot(), b.to_dot());
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
    }

    #[test]
    fn a3_has_fourteen() {
        let s = Seed::from_dense(&["1", "2", "3"], &[], &[1, 1, 1], &[vec![0, -1, 0], vec![1, 0, -1], vec![0, 1, 0]])
            .unwrap();
        let g = exchange_graph(&s, 100).unwrap();
        assert!(g.closed);
        assert_eq!(g.nodes.len(), 14);
        assert_eq!(g.edges.len(), 21);
    }
}
