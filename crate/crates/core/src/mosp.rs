//! Multi-objective shortest paths from one source.
//!
//! Label-correcting search over nodes: every node owns a Pareto set of path
//! signatures, nodes wait in a priority queue, and a node whose set improves
//! after it was visited is queued again. A label is extended at most once.
//! Extensions that revisit a node or drop `gamma` below 1/3 are discarded, so
//! only simple, entangled paths are ever stored.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::algebra::{Dominance, ExtendError, ParetoOrdering, ParetoSet, PathSignature};
use crate::netmodel::{LinkIndex, Network, NodeIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MospOptions {
    /// Keep distinct paths whose four metrics coincide exactly.
    pub keep_ties: bool,
    /// Approximation: stop growing a node's front once it holds this many
    /// labels (a candidate is still admitted if it dominates a member).
    /// `None` keeps the solver exact.
    pub front_cap: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("source node {0} does not exist")]
pub struct UnknownSource(pub NodeIndex);

/// Counters describing one solver run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverStats {
    /// Times a node was taken from the queue.
    pub node_visits: usize,
    /// Labels that were extended to the neighbours of their node.
    pub labels_expanded: usize,
    /// Labels ever admitted into some front (including ones removed later).
    pub labels_admitted: usize,
    /// Candidate signatures produced by extension.
    pub candidates: usize,
}

#[derive(Debug, Clone)]
struct Label {
    sig: PathSignature,
    expanded: bool,
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig
    }
}

impl Dominance for Label {
    fn pareto_cmp(&self, other: &Self) -> ParetoOrdering {
        self.sig.pareto_cmp(&other.sig)
    }
}

/// Queue priority: `t` ascending, then `-p`, `-gamma`, `inv_sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct QueueKey([f64; 4]);

impl QueueKey {
    fn of(sig: &PathSignature) -> Self {
        QueueKey([sig.t, -sig.p, -sig.gamma, sig.inv_sigma])
    }
}

impl Eq for QueueKey {}

impl PartialOrd for QueueKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

/// Per-node Pareto fronts of paths from a single source.
#[derive(Debug, Clone)]
pub struct ParetoFronts {
    source: NodeIndex,
    fronts: Vec<ParetoSet<PathSignature>>,
    stats: SolverStats,
}

impl ParetoFronts {
    pub fn source(&self) -> NodeIndex {
        self.source
    }

    pub fn front(&self, node: NodeIndex) -> &ParetoSet<PathSignature> {
        &self.fronts[node.0]
    }

    pub fn is_reachable(&self, node: NodeIndex) -> bool {
        !self.fronts[node.0].is_empty()
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeIndex, &ParetoSet<PathSignature>)> {
        self.fronts.iter().enumerate().map(|(i, f)| (NodeIndex(i), f))
    }
}

/// Computes, for every node, the Pareto front of simple paths from `source`
/// under the four-metric dominance.
pub fn shortest_paths(net: &Network, source: NodeIndex, opts: MospOptions) -> Result<ParetoFronts, UnknownSource> {
    if source.0 >= net.node_count() {
        return Err(UnknownSource(source));
    }
    let n = net.node_count();
    let empty = || if opts.keep_ties { ParetoSet::with_ties() } else { ParetoSet::new() };
    let mut fronts: Vec<ParetoSet<Label>> = (0..n).map(|_| empty()).collect();
    let mut stats = SolverStats::default();

    // B: queued nodes keyed by their best pending label. A: visited nodes.
    let mut queue: BTreeSet<(QueueKey, NodeIndex)> = BTreeSet::new();
    let mut queued: Vec<Option<QueueKey>> = alloc::vec![None; n];
    let mut visited = alloc::vec![false; n];

    let start = PathSignature::source(net, source);
    queued[source.0] = Some(QueueKey::of(&start));
    queue.insert((QueueKey::of(&start), source));
    fronts[source.0].insert(Label { sig: start, expanded: false });
    stats.labels_admitted += 1;

    let mut pending: Vec<PathSignature> = Vec::new();
    while let Some((_, node)) = queue.pop_first() {
        queued[node.0] = None;
        visited[node.0] = true;
        stats.node_visits += 1;

        pending.clear();
        for label in fronts[node.0].iter_mut().filter(|l| !l.expanded) {
            label.expanded = true;
            pending.push(label.sig.clone());
        }
        stats.labels_expanded += pending.len();

        for &(next, link) in net.neighbors(node) {
            let mut improved = false;
            for sig in &pending {
                let candidate = match sig.extend(net, link) {
                    Ok(c) => Label { sig: c, expanded: false },
                    Err(ExtendError::BelowThreshold { .. } | ExtendError::Revisit(_)) => continue,
                    Err(ExtendError::NotIncident) => unreachable!("adjacency lists only hold incident links"),
                };
                stats.candidates += 1;
                let front = &mut fronts[next.0];
                if let Some(cap) = opts.front_cap {
                    if front.len() >= cap && !front.improves_on_any(&candidate) {
                        continue;
                    }
                }
                if front.insert(candidate) {
                    stats.labels_admitted += 1;
                    improved = true;
                }
            }
            if improved {
                visited[next.0] = false;
                let best = fronts[next.0]
                    .iter()
                    .filter(|l| !l.expanded)
                    .map(|l| QueueKey::of(&l.sig))
                    .min();
                if let Some(old) = queued[next.0].take() {
                    queue.remove(&(old, next));
                }
                if let Some(key) = best {
                    queued[next.0] = Some(key);
                    queue.insert((key, next));
                }
            }
        }
    }
    debug_assert!(visited.iter().zip(&queued).all(|(_, q)| q.is_none()));

    let fronts = fronts
        .into_iter()
        .map(|set| {
            let mut out: ParetoSet<PathSignature> = if opts.keep_ties { ParetoSet::with_ties() } else { ParetoSet::new() };
            for label in set.into_vec() {
                out.insert(label.sig);
            }
            out
        })
        .collect();
    Ok(ParetoFronts { source, fronts, stats })
}

/// Resolves `source` by identifier, then runs [`shortest_paths`].
pub fn shortest_paths_from(net: &Network, source: &str, opts: MospOptions) -> Option<ParetoFronts> {
    let s = net.index_of(source)?;
    shortest_paths(net, s, opts).ok()
}

/// Links traversed by `sig`, in path order.
///
/// Panics if consecutive nodes of `sig` are not adjacent in `net`, which can
/// only happen when the signature came from a different network.
pub fn reconstruct(net: &Network, sig: &PathSignature) -> Vec<LinkIndex> {
    sig.nodes()
        .windows(2)
        .map(|w| net.link_between(w[0], w[1]).expect("path signature does not belong to this network"))
        .collect()
}

/// Recomputes a signature by folding [`PathSignature::extend`] over `links`.
pub fn replay(net: &Network, source: NodeIndex, links: &[LinkIndex]) -> Result<PathSignature, ExtendError> {
    links
        .iter()
        .try_fold(PathSignature::source(net, source), |sig, &l| sig.extend(net, l))
}
