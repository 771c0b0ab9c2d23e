//! Rate and fidelity of GHZ states distributed over a star or a tree.
//!
//! Star scheme with branch metrics `(p_i, t_i, F_i)`:
//!
//! ```text
//! xi = prod p_i / (2 max t_i)
//! f  = 1/2 [ prod (1+2F_i)/3 + prod 2(1-F_i)/3 + prod (4F_i-1)/3 ]
//! ```
//!
//! The tree scheme generalises both. Its fidelity tracks even/odd parity
//! weights `E`, `O` over the Steiner branches, folded one branch at a time.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use thiserror::Error;

use crate::algebra::BranchMetrics;

/// Smallest GHZ fidelity a solution may have; below it the state is discarded.
pub const GHZ_FIDELITY_FLOOR: f64 = 0.5;

/// Rate `xi = prod p / (2 max t)` of a star.
pub fn star_rate(branches: &[BranchMetrics]) -> f64 {
    let mut prob = 1.0;
    let mut slowest: f64 = 0.0;
    for b in branches {
        prob *= b.p;
        slowest = slowest.max(b.t);
    }
    prob / (2.0 * slowest)
}

/// Untruncated GHZ fidelity of a star from its branch metrics.
pub fn star_fidelity(branches: &[BranchMetrics]) -> f64 {
    let mut sig = GhzFidelitySignature::NEUTRAL;
    for b in branches {
        sig = sig.extend(b.fidelity);
    }
    sig.raw()
}

/// Untruncated GHZ fidelity of a star given only the branch fidelities.
pub fn ghz_fidelity(fidelities: &[f64]) -> f64 {
    fidelities
        .iter()
        .fold(GhzFidelitySignature::NEUTRAL, |sig, &f| sig.extend(f))
        .raw()
}

/// Applies the fidelity floor: values under 1/2 collapse to 0.
pub fn truncate(f: f64) -> f64 {
    if f >= GHZ_FIDELITY_FLOOR {
        f
    } else {
        0.0
    }
}

/// The three products a star fidelity is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzFidelitySignature {
    /// Product of `(1+2F)/3`.
    pub a: f64,
    /// Product of `2(1-F)/3`.
    pub b: f64,
    /// Product of `(4F-1)/3`.
    pub c: f64,
}

impl GhzFidelitySignature {
    pub const NEUTRAL: Self = Self { a: 1.0, b: 1.0, c: 1.0 };

    #[must_use]
    pub fn extend(self, fidelity: f64) -> Self {
        Self {
            a: self.a * (1.0 + 2.0 * fidelity) / 3.0,
            b: self.b * 2.0 * (1.0 - fidelity) / 3.0,
            c: self.c * (4.0 * fidelity - 1.0) / 3.0,
        }
    }

    /// `(a + b + c) / 2` without truncation.
    pub fn raw(&self) -> f64 {
        (self.a + self.b + self.c) / 2.0
    }

    /// `(a + b + c) / 2` if at least 1/2, else 0.
    pub fn h(&self) -> f64 {
        truncate(self.raw())
    }
}

/// Accumulated probability product and slowest branch time of a star.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSignature {
    pub a: f64,
    pub b: f64,
}

impl RateSignature {
    pub const NEUTRAL: Self = Self { a: 1.0, b: 0.0 };

    #[must_use]
    pub fn extend(self, p: f64, t: f64) -> Self {
        Self { a: self.a * p, b: self.b.max(t) }
    }

    /// `a / (2 b)`.
    pub fn g(&self) -> f64 {
        self.a / (2.0 * self.b)
    }
}

/// Parity-weighted accumulator for the tree-scheme fidelity.
///
/// Steiner branches are folded with the parity recursion
/// `E' = E F~ + O (1 - F~)`, `O' = O F~ + E (1 - F~)` where `F~ = (1+2F)/3`;
/// terminal branches multiply `a`, `b`, `c` as in the star.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeFidelityAccumulator {
    pub even: f64,
    pub odd: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for TreeFidelityAccumulator {
    fn default() -> Self {
        Self { even: 1.0, odd: 0.0, a: 1.0, b: 1.0, c: 1.0 }
    }
}

impl TreeFidelityAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[must_use]
    pub fn fold_steiner(self, fidelity: f64) -> Self {
        let keep = (1.0 + 2.0 * fidelity) / 3.0;
        let flip = 1.0 - keep;
        Self {
            even: self.even * keep + self.odd * flip,
            odd: self.odd * keep + self.even * flip,
            c: self.c * (4.0 * fidelity - 1.0) / 3.0,
            ..self
        }
    }

    #[must_use]
    pub fn fold_terminal(self, fidelity: f64) -> Self {
        Self {
            a: self.a * (1.0 + 2.0 * fidelity) / 3.0,
            b: self.b * 2.0 * (1.0 - fidelity) / 3.0,
            c: self.c * (4.0 * fidelity - 1.0) / 3.0,
            ..self
        }
    }

    pub fn fidelity(&self) -> f64 {
        (self.even * self.a + self.odd * self.b + self.c) / 2.0
    }
}

/// Closed-form tree fidelity from channel fidelities.
///
/// `terminal[i]` is the channel on terminal qubit `i`; the entry at `initial`
/// is ignored since that qubit instead receives one channel per Steiner node
/// (`steiner`).
pub fn tree_fidelity_from_channels(terminal: &[f64], steiner: &[f64], initial: usize) -> f64 {
    let acc = steiner
        .iter()
        .fold(TreeFidelityAccumulator::new(), |acc, &f| acc.fold_steiner(f));
    terminal
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != initial)
        .fold(acc, |acc, (_, &f)| acc.fold_terminal(f))
        .fidelity()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("branch endpoint {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("a tree on {vertices} vertices needs {} branches, got {branches}", vertices - 1)]
    WrongBranchCount { vertices: usize, branches: usize },
    #[error("branches do not connect every vertex")]
    Disconnected,
    #[error("vertex {0} is listed twice")]
    Duplicate(usize),
    #[error("vertex {0} is neither a terminal nor a Steiner node")]
    Uncovered(usize),
    #[error("at least 2 terminals and 1 Steiner node are required")]
    TooSmall,
    #[error("initial vertex {0} is not a terminal")]
    InitialNotTerminal(usize),
}

/// One bipartite branch of a distribution tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeBranch {
    pub ends: (usize, usize),
    pub metrics: BranchMetrics,
}

/// A user-supplied distribution tree over abstract vertices `0..vertices`.
///
/// Every vertex is a terminal, a Steiner node, or both (a terminal that also
/// acts as a branching point, such as a star centre placed on a terminal).
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionTree {
    vertices: usize,
    branches: Vec<TreeBranch>,
    terminals: Vec<usize>,
    steiner: Vec<usize>,
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Multiplies the expected distribution time per Steiner node.
    overhead: Vec<f64>,
}

/// Channel fidelities a tree induces on the GHZ qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeChannels {
    /// One entry per terminal, in terminal order; 1 at the initial terminal.
    pub terminal: Vec<f64>,
    /// One entry per Steiner node, all acting on the initial terminal.
    pub steiner: Vec<f64>,
    pub initial: usize,
}

impl DistributionTree {
    pub fn new(
        vertices: usize,
        branches: Vec<TreeBranch>,
        terminals: Vec<usize>,
        steiner: Vec<usize>,
    ) -> Result<Self, TreeError> {
        if terminals.len() < 2 || steiner.is_empty() {
            return Err(TreeError::TooSmall);
        }
        for list in [&terminals, &steiner] {
            for (i, &v) in list.iter().enumerate() {
                if v >= vertices {
                    return Err(TreeError::VertexOutOfRange(v));
                }
                if list[..i].contains(&v) {
                    return Err(TreeError::Duplicate(v));
                }
            }
        }
        if let Some(v) = (0..vertices).find(|v| !terminals.contains(v) && !steiner.contains(v)) {
            return Err(TreeError::Uncovered(v));
        }
        if branches.len() + 1 != vertices {
            return Err(TreeError::WrongBranchCount { vertices, branches: branches.len() });
        }
        let mut adjacency = alloc::vec![Vec::new(); vertices];
        for (i, b) in branches.iter().enumerate() {
            let (u, v) = b.ends;
            for x in [u, v] {
                if x >= vertices {
                    return Err(TreeError::VertexOutOfRange(x));
                }
            }
            adjacency[u].push((v, i));
            adjacency[v].push((u, i));
        }
        let overhead = alloc::vec![1.0; steiner.len()];
        let tree = Self { vertices, branches, terminals, steiner, adjacency, overhead };
        if tree.distances_from(0).iter().any(|d| d.is_none()) {
            return Err(TreeError::Disconnected);
        }
        Ok(tree)
    }

    /// Builds the star with centre vertex 0 and one branch per terminal
    /// (vertices `1..=branches.len()`).
    pub fn star(branches: &[BranchMetrics]) -> Result<Self, TreeError> {
        let n = branches.len();
        let edges = branches
            .iter()
            .enumerate()
            .map(|(i, &metrics)| TreeBranch { ends: (0, i + 1), metrics })
            .collect();
        Self::new(n + 1, edges, (1..=n).collect(), alloc::vec![0])
    }

    /// Sets a multiplicative time overhead for the operations at Steiner node
    /// `steiner_pos` (position in the Steiner list). Defaults to 1.
    pub fn set_overhead(&mut self, steiner_pos: usize, factor: f64) {
        self.overhead[steiner_pos] = factor;
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn steiner(&self) -> &[usize] {
        &self.steiner
    }

    pub fn branches(&self) -> &[TreeBranch] {
        &self.branches
    }

    /// Sum of branch times from `root` to every vertex; `None` if unreachable.
    fn distances_from(&self, root: usize) -> Vec<Option<f64>> {
        self.walk(root).into_iter().map(|w| w.map(|(d, _)| d)).collect()
    }

    /// BFS from `root`: per vertex, the summed time and the parent branch.
    fn walk(&self, root: usize) -> Vec<Option<(f64, Option<usize>)>> {
        let mut out = alloc::vec![None; self.vertices];
        out[root] = Some((0.0, None));
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let (du, _) = out[u].expect("queued vertices are labelled");
            for &(v, b) in &self.adjacency[u] {
                if out[v].is_none() {
                    out[v] = Some((du + self.branches[b].metrics.t, Some(b)));
                    queue.push_back(v);
                }
            }
        }
        out
    }

    /// Depolarising channels induced by this tree when the expansion starts at
    /// terminal `initial` (a position in the terminal list).
    ///
    /// Rooting the tree at that terminal, each vertex inherits the fidelity of
    /// the branch towards its parent. A terminal that is also a Steiner node
    /// holds its qubit locally, so its own terminal channel is perfect.
    pub fn channels(&self, initial: usize) -> Result<TreeChannels, TreeError> {
        let root = *self.terminals.get(initial).ok_or(TreeError::InitialNotTerminal(initial))?;
        let walk = self.walk(root);
        let parent_f = |v: usize| match walk[v] {
            Some((_, Some(b))) => self.branches[b].metrics.fidelity,
            _ => 1.0,
        };
        let terminal = self
            .terminals
            .iter()
            .map(|&v| if v == root || self.steiner.contains(&v) { 1.0 } else { parent_f(v) })
            .collect();
        let steiner = self.steiner.iter().map(|&s| parent_f(s)).collect();
        Ok(TreeChannels { terminal, steiner, initial })
    }
}

/// Tree-scheme rate: `1 / T` with
/// `T = 2 min_s max_tau t(s, tau) / prod p`, scaled by the Steiner overheads.
pub fn tree_rate(tree: &DistributionTree) -> f64 {
    let worst_case = tree
        .steiner
        .iter()
        .map(|&s| {
            let d = tree.distances_from(s);
            tree.terminals
                .iter()
                .map(|&t| d[t].expect("tree is connected"))
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min);
    let prob: f64 = tree.branches.iter().map(|b| b.metrics.p).product();
    let overhead: f64 = tree.overhead.iter().product();
    let expected_time = 2.0 * worst_case / prob * overhead;
    1.0 / expected_time
}

/// Tree-scheme GHZ fidelity (untruncated) with the expansion starting at
/// terminal position `initial`.
pub fn tree_fidelity(tree: &DistributionTree, initial: usize) -> Result<f64, TreeError> {
    let ch = tree.channels(initial)?;
    Ok(tree_fidelity_from_channels(&ch.terminal, &ch.steiner, ch.initial))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn branch(p: f64, t: f64, fidelity: f64) -> BranchMetrics {
        BranchMetrics { p, t, fidelity }
    }

    #[test]
    fn star_rate_examples() {
        let r = star_rate(&[branch(0.5, 10.0, 1.0), branch(0.5, 20.0, 1.0), branch(1.0, 5.0, 1.0)]);
        assert!((r - 0.00625).abs() < 1e-15);
        assert_eq!(star_rate(&[branch(1.0, 1.0, 1.0); 3]), 0.5);
        let mut last = f64::INFINITY;
        for p in [0.5, 0.1, 1e-3, 1e-9] {
            let r = star_rate(&[branch(p, 1.0, 1.0), branch(1.0, 1.0, 1.0)]);
            assert!(r < last);
            last = r;
        }
    }

    #[test]
    fn star_fidelity_examples() {
        assert_eq!(ghz_fidelity(&[1.0, 1.0, 1.0]), 1.0);
        assert!((ghz_fidelity(&[0.25, 1.0, 1.0]) - 0.25).abs() < 1e-15);
        // Frozen from the density-matrix oracle (three channels with p = 0.95 on GHZ_3).
        assert!((ghz_fidelity(&[0.95; 3]) - 0.858_185_185_185_185_5).abs() < 1e-12);
        let f = star_fidelity(&[branch(0.3, 1.0, 0.95); 3]);
        assert_eq!(f, ghz_fidelity(&[0.95; 3]));
    }

    #[test]
    fn signature_examples() {
        let one = GhzFidelitySignature::NEUTRAL.extend(1.0);
        assert_eq!(one, GhzFidelitySignature { a: 1.0, b: 0.0, c: 1.0 });
        assert_eq!(one.h(), 1.0);
        let three = GhzFidelitySignature::NEUTRAL.extend(0.95).extend(0.95).extend(0.95);
        assert!((three.h() - 0.858_185_185_185_185_5).abs() < 1e-12);
        let low = GhzFidelitySignature { a: 0.5, b: 0.18, c: 0.3 };
        assert!((low.raw() - 0.49).abs() < 1e-15);
        assert_eq!(low.h(), 0.0);
        assert_eq!(truncate(0.5), 0.5);
    }

    #[test]
    fn rate_signature_matches_star_rate() {
        let bs = [branch(0.5, 10.0, 1.0), branch(0.7, 20.0, 1.0)];
        let sig = bs.iter().fold(RateSignature::NEUTRAL, |s, b| s.extend(b.p, b.t));
        assert_eq!(sig.g(), star_rate(&bs));
    }

    #[test]
    fn tree_rate_star_example() {
        let mut tree = DistributionTree::star(&[
            branch(0.5, 10.0, 1.0),
            branch(1.0, 20.0, 1.0),
            branch(1.0, 30.0, 1.0),
        ])
        .unwrap();
        assert!((1.0 / tree_rate(&tree) - 120.0).abs() < 1e-12);
        tree.set_overhead(0, 2.0);
        assert!((1.0 / tree_rate(&tree) - 240.0).abs() < 1e-12);
    }

    #[test]
    fn caterpillar_rate_picks_best_coordinator() {
        // terminals 0,1 hang off Steiner 4; terminals 2,3 hang off Steiner 5.
        let b = |u, v, t| TreeBranch { ends: (u, v), metrics: branch(0.9, t, 0.9) };
        let tree = DistributionTree::new(
            6,
            alloc::vec![b(0, 4, 1.0), b(1, 4, 2.0), b(4, 5, 3.0), b(2, 5, 10.0), b(3, 5, 4.0)],
            alloc::vec![0, 1, 2, 3],
            alloc::vec![4, 5],
        )
        .unwrap();
        // From 4: max(1, 2, 13, 7) = 13. From 5: max(4, 5, 10, 4) = 10.
        let expected = 0.9f64.powi(5) / (2.0 * 10.0);
        assert!((tree_rate(&tree) - expected).abs() < 1e-15);
    }

    #[test]
    fn path_tree_reduces_to_star() {
        // a - b - c with terminals {a, b, c} and b as the branching point.
        let ab = branch(0.8, 3.0, 0.9);
        let bc = branch(0.7, 5.0, 0.85);
        let tree = DistributionTree::new(
            3,
            alloc::vec![TreeBranch { ends: (0, 1), metrics: ab }, TreeBranch { ends: (1, 2), metrics: bc }],
            alloc::vec![0, 1, 2],
            alloc::vec![1],
        )
        .unwrap();
        let star = [ab, BranchMetrics::NEUTRAL, bc];
        assert!((tree_rate(&tree) - star_rate(&star)).abs() < 1e-15);
        for initial in 0..3 {
            let f = tree_fidelity(&tree, initial).unwrap();
            assert!((f - star_fidelity(&star)).abs() < 1e-12);
        }
    }

    #[test]
    fn star_tree_matches_star_fidelity() {
        let bs = [branch(0.5, 1.0, 0.8), branch(0.5, 1.0, 0.93), branch(0.5, 1.0, 0.61)];
        let tree = DistributionTree::star(&bs).unwrap();
        for initial in 0..3 {
            let ch = tree.channels(initial).unwrap();
            assert_eq!(ch.steiner, [bs[initial].fidelity]);
            let f = tree_fidelity(&tree, initial).unwrap();
            assert!((f - star_fidelity(&bs)).abs() < 1e-12);
        }
        // E and O after the single Steiner fold.
        let acc = TreeFidelityAccumulator::new().fold_steiner(0.8);
        assert!((acc.even - (1.0 + 1.6) / 3.0).abs() < 1e-15);
        assert!((acc.odd - 2.0 * 0.2 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tree_validation() {
        let b = |u, v| TreeBranch { ends: (u, v), metrics: BranchMetrics::NEUTRAL };
        assert_eq!(
            DistributionTree::new(3, alloc::vec![b(0, 1)], alloc::vec![0, 1, 2], alloc::vec![1]),
            Err(TreeError::WrongBranchCount { vertices: 3, branches: 1 })
        );
        assert_eq!(
            DistributionTree::new(4, alloc::vec![b(0, 1), b(1, 0), b(2, 3)], alloc::vec![0, 2, 3], alloc::vec![1]),
            Err(TreeError::Disconnected)
        );
        assert_eq!(
            DistributionTree::new(3, alloc::vec![b(0, 1), b(1, 2)], alloc::vec![0, 2], alloc::vec![]),
            Err(TreeError::TooSmall)
        );
        assert_eq!(
            DistributionTree::new(4, alloc::vec![b(0, 1), b(1, 2), b(1, 3)], alloc::vec![0, 2], alloc::vec![1]),
            Err(TreeError::Uncovered(3))
        );
        let ok = DistributionTree::new(3, alloc::vec![b(0, 1), b(1, 2)], alloc::vec![0, 2], alloc::vec![1]).unwrap();
        assert_eq!(tree_fidelity(&ok, 5), Err(TreeError::InitialNotTerminal(5)));
        assert_eq!(tree_fidelity(&ok, 0), Ok(1.0));
    }
}
