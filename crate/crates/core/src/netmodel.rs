//! Immutable network data model.
//!
//! Nodes carry a swap success probability `k` and a memory decoherence time
//! `sigma`. Links are undirected and carry a generation probability `p`, a
//! one-way classical latency `t` and a Werner parameter `gamma`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Werner parameter at or below which a pair carries no entanglement.
pub const ENTANGLEMENT_THRESHOLD: f64 = 1.0 / 3.0;

/// Dense index of a node inside a [`Network`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeIndex(pub usize);

/// Dense index of a link inside a [`Network`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkIndex(pub usize);

impl fmt::Display for NodeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeParams {
    pub id: String,
    /// Entanglement swapping success probability, in (0, 1].
    pub k: f64,
    /// Memory decoherence time, positive.
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkParams {
    pub u: NodeIndex,
    pub v: NodeIndex,
    /// Entanglement generation success probability, in (0, 1].
    pub p: f64,
    /// One-way classical communication time, positive.
    pub t: f64,
    /// Werner parameter, in (1/3, 1].
    pub gamma: f64,
}

impl LinkParams {
    /// The endpoint opposite to `node`, if `node` is an endpoint at all.
    pub fn opposite(&self, node: NodeIndex) -> Option<NodeIndex> {
        if node == self.u {
            Some(self.v)
        } else if node == self.v {
            Some(self.u)
        } else {
            None
        }
    }

    /// Pair fidelity `F = (3 gamma + 1) / 4`.
    pub fn fidelity(&self) -> f64 {
        (3.0 * self.gamma + 1.0) / 4.0
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("node `{id}`: {reason}")]
    InvalidNode { id: String, reason: &'static str },
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("link {u}-{v}: {reason}")]
    InvalidLink { u: String, v: String, reason: &'static str },
    #[error("link {u}-{v} below entanglement threshold (gamma = {gamma}, must exceed 1/3)")]
    BelowThreshold { u: String, v: String, gamma: f64 },
    #[error("link {u}-{v} references unknown node `{missing}`")]
    UnknownNode { u: String, v: String, missing: String },
    #[error("duplicate link {u}-{v}")]
    DuplicateLink { u: String, v: String },
    #[error("self-loop on node `{0}`")]
    SelfLoop(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TerminalError {
    #[error("unknown terminal node `{0}`")]
    UnknownNode(String),
    #[error("terminal `{0}` listed more than once")]
    Duplicate(String),
    #[error("at least 2 terminals are required, got {0}")]
    TooFew(usize),
}

/// Undirected quantum network. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    nodes: Vec<NodeParams>,
    links: Vec<LinkParams>,
    adjacency: Vec<Vec<(NodeIndex, LinkIndex)>>,
    by_id: BTreeMap<String, NodeIndex>,
}

impl Network {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn nodes(&self) -> &[NodeParams] {
        &self.nodes
    }

    pub fn links(&self) -> &[LinkParams] {
        &self.links
    }

    pub fn node(&self, n: NodeIndex) -> &NodeParams {
        &self.nodes[n.0]
    }

    pub fn link(&self, l: LinkIndex) -> &LinkParams {
        &self.links[l.0]
    }

    pub fn node_indices(&self) -> impl Iterator<Item = NodeIndex> {
        (0..self.nodes.len()).map(NodeIndex)
    }

    /// Looks a node up by its identifier.
    pub fn index_of(&self, id: &str) -> Option<NodeIndex> {
        self.by_id.get(id).copied()
    }

    pub fn id(&self, n: NodeIndex) -> &str {
        &self.nodes[n.0].id
    }

    /// Neighbours of `n` together with the connecting link, in link insertion order.
    pub fn neighbors(&self, n: NodeIndex) -> &[(NodeIndex, LinkIndex)] {
        &self.adjacency[n.0]
    }

    pub fn link_between(&self, a: NodeIndex, b: NodeIndex) -> Option<LinkIndex> {
        self.adjacency[a.0]
            .iter()
            .find(|(other, _)| *other == b)
            .map(|&(_, l)| l)
    }

    pub fn degree(&self, n: NodeIndex) -> usize {
        self.adjacency[n.0].len()
    }
}

/// Collects node and link records by identifier and validates them into a [`Network`].
#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    nodes: Vec<NodeParams>,
    links: Vec<(String, String, f64, f64, f64)>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, id: impl Into<String>, k: f64, sigma: f64) -> Self {
        self.add_node(id, k, sigma);
        self
    }

    pub fn link(mut self, u: impl Into<String>, v: impl Into<String>, p: f64, t: f64, gamma: f64) -> Self {
        self.add_link(u, v, p, t, gamma);
        self
    }

    pub fn add_node(&mut self, id: impl Into<String>, k: f64, sigma: f64) {
        self.nodes.push(NodeParams { id: id.into(), k, sigma });
    }

    pub fn add_link(&mut self, u: impl Into<String>, v: impl Into<String>, p: f64, t: f64, gamma: f64) {
        self.links.push((u.into(), v.into(), p, t, gamma));
    }

    pub fn build(self) -> Result<Network, NetworkError> {
        let mut by_id = BTreeMap::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if !(node.k > 0.0 && node.k <= 1.0) {
                return Err(NetworkError::InvalidNode {
                    id: node.id.clone(),
                    reason: "swap probability k must lie in (0, 1]",
                });
            }
            if !(node.sigma > 0.0 && node.sigma.is_finite()) {
                return Err(NetworkError::InvalidNode {
                    id: node.id.clone(),
                    reason: "decoherence time sigma must be positive and finite",
                });
            }
            if by_id.insert(node.id.clone(), NodeIndex(i)).is_some() {
                return Err(NetworkError::DuplicateNode(node.id.clone()));
            }
        }

        let mut adjacency = alloc::vec![Vec::new(); self.nodes.len()];
        let mut links = Vec::with_capacity(self.links.len());
        for (u_id, v_id, p, t, gamma) in self.links {
            let lookup = |id: &String| {
                by_id.get(id).copied().ok_or_else(|| NetworkError::UnknownNode {
                    u: u_id.clone(),
                    v: v_id.clone(),
                    missing: id.clone(),
                })
            };
            let u = lookup(&u_id)?;
            let v = lookup(&v_id)?;
            let invalid = |reason| NetworkError::InvalidLink { u: u_id.clone(), v: v_id.clone(), reason };
            if u == v {
                return Err(NetworkError::SelfLoop(u_id));
            }
            if !(p > 0.0 && p <= 1.0) {
                return Err(invalid("generation probability p must lie in (0, 1]"));
            }
            if !(t > 0.0 && t.is_finite()) {
                return Err(invalid("communication time t must be positive and finite"));
            }
            if gamma.is_nan() || gamma > 1.0 {
                return Err(invalid("gamma must not exceed 1"));
            }
            if gamma <= ENTANGLEMENT_THRESHOLD {
                return Err(NetworkError::BelowThreshold { u: u_id, v: v_id, gamma });
            }
            let adj_u: &Vec<(NodeIndex, LinkIndex)> = &adjacency[u.0];
            if adj_u.iter().any(|(other, _)| *other == v) {
                return Err(NetworkError::DuplicateLink { u: u_id, v: v_id });
            }
            let index = LinkIndex(links.len());
            adjacency[u.0].push((v, index));
            adjacency[v.0].push((u, index));
            links.push(LinkParams { u, v, p, t, gamma });
        }

        Ok(Network { nodes: self.nodes, links, adjacency, by_id })
    }
}

/// A validated set of distinct terminal nodes, `T >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalSet {
    terminals: Vec<NodeIndex>,
}

impl TerminalSet {
    /// Validates raw node indices against `net`.
    pub fn from_indices(net: &Network, terminals: Vec<NodeIndex>) -> Result<Self, TerminalError> {
        for (i, t) in terminals.iter().enumerate() {
            if t.0 >= net.node_count() {
                return Err(TerminalError::UnknownNode(t.to_string()));
            }
            if terminals[..i].contains(t) {
                return Err(TerminalError::Duplicate(net.id(*t).into()));
            }
        }
        if terminals.len() < 2 {
            return Err(TerminalError::TooFew(terminals.len()));
        }
        Ok(Self { terminals })
    }

    pub fn as_slice(&self) -> &[NodeIndex] {
        &self.terminals
    }

    pub fn len(&self) -> usize {
        self.terminals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terminals.is_empty()
    }

    pub fn contains(&self, n: NodeIndex) -> bool {
        self.terminals.contains(&n)
    }

    /// Position (within this set) of the terminal with the smallest identifier.
    pub fn canonical_initial(&self, net: &Network) -> usize {
        (0..self.terminals.len())
            .min_by(|&a, &b| net.id(self.terminals[a]).cmp(net.id(self.terminals[b])))
            .unwrap_or(0)
    }
}

/// Resolves terminal identifiers against `net`, checking existence, uniqueness and size.
pub fn validate_terminals<S: AsRef<str>>(net: &Network, ids: &[S]) -> Result<TerminalSet, TerminalError> {
    let mut terminals = Vec::with_capacity(ids.len());
    for id in ids {
        let id = id.as_ref();
        let n = net.index_of(id).ok_or_else(|| TerminalError::UnknownNode(id.into()))?;
        if terminals.contains(&n) {
            return Err(TerminalError::Duplicate(id.into()));
        }
        terminals.push(n);
    }
    if terminals.len() < 2 {
        return Err(TerminalError::TooFew(terminals.len()));
    }
    Ok(TerminalSet { terminals })
}
