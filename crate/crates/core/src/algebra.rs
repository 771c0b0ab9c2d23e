//! Path signatures, their aggregation rules, and Pareto dominance.
//!
//! A path is summarised by four independently routed metrics:
//!
//! | metric      | aggregation                                    | better  |
//! |-------------|------------------------------------------------|---------|
//! | `p`         | product of link `p`, times `k` of interior nodes | larger  |
//! | `t`         | twice the sum of link latencies                 | smaller |
//! | `gamma`     | product of link Werner parameters               | larger  |
//! | `inv_sigma` | sum of `2 / sigma` over every node on the path   | smaller |
//!
//! Each metric is monotone and isotone on its own. Their contraction into a
//! single branch fidelity is not, which is why the solver keeps all four.

use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::netmodel::{LinkIndex, Network, NodeIndex, ENTANGLEMENT_THRESHOLD};

/// Optimisation direction of a single objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Outcome of comparing two signatures under Pareto dominance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParetoOrdering {
    Dominates,
    DominatedBy,
    Equal,
    Incomparable,
}

/// Compares two objective vectors. Comparisons are exact; no epsilon.
pub fn pareto_cmp(x: &[f64], y: &[f64], senses: &[Sense]) -> ParetoOrdering {
    debug_assert!(x.len() == y.len() && x.len() == senses.len());
    let mut x_better = false;
    let mut y_better = false;
    for ((&a, &b), sense) in x.iter().zip(y).zip(senses) {
        let ord = match sense {
            Sense::Minimize => b.partial_cmp(&a),
            Sense::Maximize => a.partial_cmp(&b),
        };
        match ord {
            Some(Ordering::Greater) => x_better = true,
            Some(Ordering::Less) => y_better = true,
            Some(Ordering::Equal) => {}
            None => return ParetoOrdering::Incomparable,
        }
    }
    match (x_better, y_better) {
        (true, false) => ParetoOrdering::Dominates,
        (false, true) => ParetoOrdering::DominatedBy,
        (false, false) => ParetoOrdering::Equal,
        (true, true) => ParetoOrdering::Incomparable,
    }
}

/// `x` is no worse than `y` in every objective and strictly better in one.
pub fn dominates(x: &[f64], y: &[f64], senses: &[Sense]) -> bool {
    pareto_cmp(x, y, senses) == ParetoOrdering::Dominates
}

/// Types that can be compared under Pareto dominance.
pub trait Dominance {
    fn pareto_cmp(&self, other: &Self) -> ParetoOrdering;

    fn dominates(&self, other: &Self) -> bool {
        self.pareto_cmp(other) == ParetoOrdering::Dominates
    }
}

/// A set of mutually non-dominated items.
///
/// Items equal in every objective are treated as duplicates unless the set was
/// created with [`ParetoSet::with_ties`], in which case they are kept as long as
/// they differ as values.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoSet<T> {
    members: Vec<T>,
    keep_ties: bool,
}

impl<T> Default for ParetoSet<T> {
    fn default() -> Self {
        Self { members: Vec::new(), keep_ties: false }
    }
}

impl<T: Dominance + PartialEq> ParetoSet<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_ties() -> Self {
        Self { members: Vec::new(), keep_ties: true }
    }

    /// Inserts `candidate` unless a member dominates (or duplicates) it; drops
    /// every member the candidate dominates. Returns whether it was inserted.
    pub fn insert(&mut self, candidate: T) -> bool {
        if !self.admits(&candidate) {
            return false;
        }
        self.members.retain(|m| !candidate.dominates(m));
        self.members.push(candidate);
        true
    }

    /// Whether [`insert`](Self::insert) would accept `candidate`.
    pub fn admits(&self, candidate: &T) -> bool {
        for m in &self.members {
            match m.pareto_cmp(candidate) {
                ParetoOrdering::Dominates => return false,
                ParetoOrdering::Equal if !self.keep_ties || m == candidate => return false,
                _ => {}
            }
        }
        true
    }

    /// Whether `candidate` dominates at least one member.
    pub fn improves_on_any(&self, candidate: &T) -> bool {
        self.members.iter().any(|m| candidate.dominates(m))
    }
}

impl<T> ParetoSet<T> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, T> {
        self.members.iter()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.members
    }

    pub fn iter_mut(&mut self) -> core::slice::IterMut<'_, T> {
        self.members.iter_mut()
    }

    pub fn retain(&mut self, f: impl FnMut(&T) -> bool) {
        self.members.retain(f);
    }

    pub fn into_vec(self) -> Vec<T> {
        self.members
    }
}

impl<'a, T> IntoIterator for &'a ParetoSet<T> {
    type Item = &'a T;
    type IntoIter = core::slice::Iter<'a, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Why an extension produced no signature.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ExtendError {
    /// The accumulated Werner parameter dropped below 1/3: no entanglement survives.
    #[error("accumulated gamma {gamma} fell below the entanglement threshold")]
    BelowThreshold { gamma: f64 },
    /// Caller bug: the link does not touch the head of the path.
    #[error("link is not incident to the path head")]
    NotIncident,
    /// Caller bug: the extension would revisit a node.
    #[error("extension revisits node {0}")]
    Revisit(NodeIndex),
}

impl ExtendError {
    /// True for the ordinary threshold rejection, false for precondition violations.
    pub fn is_rejection(&self) -> bool {
        matches!(self, ExtendError::BelowThreshold { .. })
    }
}

/// Four-metric signature of a simple path, plus its node sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSignature {
    pub p: f64,
    pub t: f64,
    pub gamma: f64,
    pub inv_sigma: f64,
    nodes: Vec<NodeIndex>,
}

/// Objective directions of [`PathSignature`]: `(p, t, gamma, inv_sigma)`.
pub const PATH_SENSES: [Sense; 4] = [Sense::Maximize, Sense::Minimize, Sense::Maximize, Sense::Minimize];

impl PathSignature {
    /// The empty path sitting at `source`.
    pub fn source(net: &Network, source: NodeIndex) -> Self {
        Self {
            p: 1.0,
            t: 0.0,
            gamma: 1.0,
            inv_sigma: 2.0 / net.node(source).sigma,
            nodes: alloc::vec![source],
        }
    }

    /// Builds a signature from raw values. Meant for tests and deserialisation;
    /// the node sequence must be non-empty.
    pub fn from_parts(p: f64, t: f64, gamma: f64, inv_sigma: f64, nodes: Vec<NodeIndex>) -> Self {
        assert!(!nodes.is_empty(), "a path has at least one node");
        Self { p, t, gamma, inv_sigma, nodes }
    }

    pub fn nodes(&self) -> &[NodeIndex] {
        &self.nodes
    }

    pub fn origin(&self) -> NodeIndex {
        self.nodes[0]
    }

    pub fn head(&self) -> NodeIndex {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn hops(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn objectives(&self) -> [f64; 4] {
        [self.p, self.t, self.gamma, self.inv_sigma]
    }

    /// Extends the path by `link`, arriving at the link's far endpoint.
    ///
    /// The current head becomes an interior node, so its swap probability is
    /// charged here (unless the head is the origin).
    pub fn extend(&self, net: &Network, link: LinkIndex) -> Result<Self, ExtendError> {
        let l = net.link(link);
        let head = self.head();
        let next = l.opposite(head).ok_or(ExtendError::NotIncident)?;
        if self.nodes.contains(&next) {
            return Err(ExtendError::Revisit(next));
        }
        let gamma = self.gamma * l.gamma;
        if gamma < ENTANGLEMENT_THRESHOLD {
            return Err(ExtendError::BelowThreshold { gamma });
        }
        let swap = if self.nodes.len() > 1 { net.node(head).k } else { 1.0 };
        let mut nodes = Vec::with_capacity(self.nodes.len() + 1);
        nodes.extend_from_slice(&self.nodes);
        nodes.push(next);
        Ok(Self {
            p: self.p * l.p * swap,
            t: self.t + 2.0 * l.t,
            gamma,
            inv_sigma: self.inv_sigma + 2.0 / net.node(next).sigma,
            nodes,
        })
    }

    /// Contracts the four metrics to `(p, t, F)` with `(4F - 1)/3 = gamma * exp(-t * inv_sigma)`.
    pub fn contract(&self) -> BranchMetrics {
        let decayed = self.gamma * libm::exp(-self.t * self.inv_sigma);
        BranchMetrics { p: self.p, t: self.t, fidelity: (3.0 * decayed + 1.0) / 4.0 }
    }

    /// Same metrics, node sequence reversed. All four aggregations are symmetric
    /// in path direction, so this is the signature of the reverse path.
    pub fn reversed(&self) -> Self {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        Self { nodes, ..*self }
    }
}

impl Dominance for PathSignature {
    fn pareto_cmp(&self, other: &Self) -> ParetoOrdering {
        pareto_cmp(&self.objectives(), &other.objectives(), &PATH_SENSES)
    }
}

/// Contracted per-branch metrics fed into the star/tree maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchMetrics {
    pub p: f64,
    pub t: f64,
    pub fidelity: f64,
}

impl BranchMetrics {
    /// A perfect, instantaneous branch (the centre talking to itself).
    pub const NEUTRAL: BranchMetrics = BranchMetrics { p: 1.0, t: 0.0, fidelity: 1.0 };
}

/// Objective directions of [`BranchMetrics`]: `(p, t, F)`.
pub const BRANCH_SENSES: [Sense; 3] = [Sense::Maximize, Sense::Minimize, Sense::Maximize];

impl Dominance for BranchMetrics {
    fn pareto_cmp(&self, other: &Self) -> ParetoOrdering {
        pareto_cmp(&[self.p, self.t, self.fidelity], &[other.p, other.t, other.fidelity], &BRANCH_SENSES)
    }
}
