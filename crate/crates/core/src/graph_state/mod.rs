//! Graph-level resource-state engine.
//!
//! Node ids are stable: deleting a node marks it dead instead of
//! re-indexing, so schedules and traces can keep referring to the same ids.

mod check;
mod frame;
mod rules;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use check::rule_agrees_with_oracle;
pub use frame::{logical_outcome, physical_basis, FrameTracker, MeasurementStep, PauliFrame};
pub use rules::CorrectionSpec;

use crate::error::{Error, Result};
use crate::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<BTreeSet<NodeId>>,
    alive: Vec<bool>,
}

impl Graph {
    /// `n` isolated live nodes.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
            alive: vec![true; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Path `1 - 2 - ... - n` over ids `0..=n`, with id 0 an isolated
    /// padding node so that network labels start at 1.
    pub fn line(n: usize) -> Self {
        let mut g = Graph::new(n + 1);
        for i in 1..n {
            g.adj[i].insert(i + 1);
            g.adj[i + 1].insert(i);
        }
        g
    }

    /// Number of id slots, alive or not.
    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn is_alive(&self, a: NodeId) -> bool {
        self.alive.get(a).copied().unwrap_or(false)
    }

    pub fn alive_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.len()).filter(|&a| self.alive[a])
    }

    pub fn neighbors(&self, a: NodeId) -> &BTreeSet<NodeId> {
        &self.adj[a]
    }

    pub fn degree(&self, a: NodeId) -> usize {
        self.adj[a].len()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adj.get(a).is_some_and(|s| s.contains(&b))
    }

    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for (a, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.range(a + 1..).map(|&b| (a, b)));
        }
        out
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<()> {
        self.require_alive(a)?;
        self.require_alive(b)?;
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        Ok(())
    }

    fn toggle_edge(&mut self, a: NodeId, b: NodeId) {
        if !self.adj[a].remove(&b) {
            self.adj[a].insert(b);
            self.adj[b].insert(a);
        } else {
            self.adj[b].remove(&a);
        }
    }

    /// `G - a`: drops every edge at `a` and marks it deleted.
    pub fn delete_node(&self, a: NodeId) -> Result<Graph> {
        self.require_alive(a)?;
        let mut g = self.clone();
        for b in std::mem::take(&mut g.adj[a]) {
            g.adj[b].remove(&a);
        }
        g.alive[a] = false;
        Ok(g)
    }

    /// Local complementation: complements the edge set inside `N(a)`.
    pub fn local_complement(&self, a: NodeId) -> Result<Graph> {
        self.require_alive(a)?;
        let mut g = self.clone();
        let nbrs: Vec<NodeId> = self.adj[a].iter().copied().collect();
        for (i, &u) in nbrs.iter().enumerate() {
            for &v in &nbrs[i + 1..] {
                g.toggle_edge(u, v);
            }
        }
        Ok(g)
    }

    /// True iff no two nodes of `set` share an edge.
    pub fn is_independent(&self, set: &[NodeId]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| !self.has_edge(a, b)))
    }

    pub(crate) fn require_alive(&self, a: NodeId) -> Result<()> {
        if a >= self.len() {
            Err(Error::UnknownNode(a))
        } else if !self.alive[a] {
            Err(Error::DeletedNode(a))
        } else {
            Ok(())
        }
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.len(),
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            deleted: (0..self.len()).filter(|&a| !self.alive[a]).collect(),
        }
    }

    pub fn from_json(doc: &GraphJson) -> Result<Graph> {
        let mut g = Graph::new(doc.n);
        for &[a, b] in &doc.edges {
            g.add_edge(a, b)?;
        }
        for &a in &doc.deleted {
            g = g.delete_node(a)?;
        }
        Ok(g)
    }
}

/// `{"n": 3, "edges": [[0,1],[1,2]]}`; `deleted` is optional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[NodeId; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub deleted: Vec<NodeId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn local_complement_path_gives_triangle() {
        let g = path3().local_complement(1).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.local_complement(1).unwrap(), path3());
    }

    #[test]
    fn local_complement_star_gives_clique() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let g = star.local_complement(0).unwrap();
        assert_eq!(g.edges().len(), 6);
    }

    #[test]
    fn errors_on_dead_or_unknown() {
        let g = path3().delete_node(1).unwrap();
        assert!(g.edges().is_empty());
        assert_eq!(g.local_complement(1), Err(Error::DeletedNode(1)));
        assert_eq!(g.local_complement(7), Err(Error::UnknownNode(7)));
        assert_eq!(Graph::from_edges(2, &[(1, 1)]), Err(Error::SelfLoop(1)));
    }

    #[test]
    fn line_uses_one_based_labels() {
        let g = Graph::line(4);
        assert_eq!(g.len(), 5);
        assert_eq!(g.edges(), vec![(1, 2), (2, 3), (3, 4)]);
        assert_eq!(g.degree(0), 0);
    }

    #[test]
    fn json_shape() {
        let g = path3().delete_node(2).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(text, r#"{"n":3,"edges":[[0,1]],"deleted":[2]}"#);
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Graph::from_json(&back).unwrap(), g);
        let plain: GraphJson = serde_json::from_str(r#"{"n":2,"edges":[[0,1]]}"#).unwrap();
        assert_eq!(Graph::from_json(&plain).unwrap().edges(), vec![(0, 1)]);
        assert!(serde_json::from_str::<GraphJson>(r#"{"n":2,"edges":[],"x":1}"#).is_err());
    }
}
