//! Exact T-star search.
//!
//! Runs the multi-objective path solver from every terminal, keeps the nodes
//! reachable from all of them as candidate centres, and combines one
//! Pareto-optimal path per terminal into stars scored by `(rate, fidelity)`.
//! Stars whose fidelity falls under 1/2 are dropped; the rest are Pareto
//! filtered across all centres.
//!
//! Combinations are enumerated depth first with an optimistic bound on the
//! remaining branches. A partial star is abandoned only when an already kept
//! solution beats its bound in both objectives by a margin well above
//! rounding noise, so the result is the same as full enumeration.

use alloc::vec::Vec;

use crate::algebra::{pareto_cmp, BranchMetrics, Dominance, ParetoOrdering, ParetoSet, PathSignature, Sense};
use crate::ghz::{star_fidelity, star_rate, GhzFidelitySignature, GHZ_FIDELITY_FLOOR};
use crate::mosp::{shortest_paths, MospOptions, ParetoFronts};
use crate::netmodel::{LinkIndex, Network, NodeIndex, TerminalSet};

/// Relative margin used when discarding partial stars by their bound.
const BOUND_SLACK: f64 = 1e-12;

/// What to do with stars that use some link in more than one branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OverlapPolicy {
    /// Keep them (links may carry several pairs). The front is then exact.
    #[default]
    Keep,
    /// Drop them after filtering; the front may then be incomplete.
    Discard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StarOptions {
    pub overlap: OverlapPolicy,
    pub mosp: MospOptions,
}

/// A star: a centre and one path per terminal, with its rate and fidelity.
#[derive(Debug, Clone, PartialEq)]
pub struct StarSolution {
    pub center: NodeIndex,
    /// Paths from the centre to each terminal, in terminal order.
    pub branches: Vec<PathSignature>,
    pub rate: f64,
    pub fidelity: f64,
    /// Some link is used by two branches.
    pub overlap: bool,
}

const STAR_SENSES: [Sense; 2] = [Sense::Maximize, Sense::Maximize];

impl Dominance for StarSolution {
    fn pareto_cmp(&self, other: &Self) -> ParetoOrdering {
        pareto_cmp(&[self.rate, self.fidelity], &[other.rate, other.fidelity], &STAR_SENSES)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarStatus {
    Feasible,
    /// Some terminal cannot reach any node that every other terminal reaches.
    NoCandidateCenter,
    /// Centres exist, but every star falls under the fidelity floor.
    BelowFidelityFloor,
    /// Every surviving star reused a link and overlap was discarded.
    NoDisjointStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StarStats {
    /// Complete stars whose rate and fidelity were evaluated.
    pub stars_evaluated: usize,
    /// Partial stars abandoned by the bound.
    pub pruned: usize,
}

#[derive(Debug, Clone)]
pub struct StarSearch {
    pub status: StarStatus,
    pub solutions: Vec<StarSolution>,
    /// False when discarding overlapping stars may have hidden optimal ones.
    pub complete: bool,
    pub candidate_centers: Vec<NodeIndex>,
    /// Path fronts from each terminal, in terminal order.
    pub fronts: Vec<ParetoFronts>,
    pub stats: StarStats,
}

impl StarSearch {
    pub fn is_feasible(&self) -> bool {
        self.status == StarStatus::Feasible
    }
}

/// Nodes with a non-empty path front from every terminal.
pub fn feasibility_check(fronts: &[ParetoFronts]) -> Vec<NodeIndex> {
    let Some(first) = fronts.first() else {
        return Vec::new();
    };
    first
        .iter()
        .map(|(n, _)| n)
        .filter(|&n| fronts.iter().all(|f| f.is_reachable(n)))
        .collect()
}

struct Candidate<'a> {
    metrics: BranchMetrics,
    path: &'a PathSignature,
}

/// Per-terminal options at one centre, reduced to `(p, t, F)`-Pareto paths.
fn branch_options<'a>(front: &'a ParetoSet<PathSignature>) -> Vec<Candidate<'a>> {
    let mut kept: ParetoSet<BranchMetrics> = ParetoSet::new();
    for sig in front {
        kept.insert(sig.contract());
    }
    let mut out: Vec<Candidate<'a>> = Vec::with_capacity(kept.len());
    for sig in front {
        let metrics = sig.contract();
        let wanted = kept.iter().any(|k| *k == metrics);
        if wanted && !out.iter().any(|c| c.metrics == metrics) {
            out.push(Candidate { metrics, path: sig });
        }
    }
    out.sort_by(|a, b| b.metrics.fidelity.total_cmp(&a.metrics.fidelity).then(b.metrics.p.total_cmp(&a.metrics.p)));
    out
}

struct Bests {
    p: f64,
    t: f64,
    fidelity: f64,
}

struct CenterSearch<'a, 'n> {
    net: &'n Network,
    center: NodeIndex,
    options: Vec<Vec<Candidate<'a>>>,
    bests: Vec<Bests>,
    chosen: Vec<usize>,
    metrics: Vec<BranchMetrics>,
}

impl CenterSearch<'_, '_> {
    /// Upper bounds on rate and fidelity for any completion of a prefix of length `depth`.
    fn bound(&self, depth: usize, prob: f64, slowest: f64, sig: GhzFidelitySignature) -> (f64, f64) {
        let mut prob = prob;
        let mut slowest = slowest;
        let mut sig = sig;
        for b in &self.bests[depth..] {
            prob *= b.p;
            slowest = slowest.max(b.t);
            sig = sig.extend(b.fidelity);
        }
        (prob / (2.0 * slowest), sig.raw())
    }

    fn hopeless(&self, found: &ParetoSet<StarSolution>, rate_ub: f64, fid_ub: f64) -> bool {
        if fid_ub + BOUND_SLACK < GHZ_FIDELITY_FLOOR {
            return true;
        }
        found
            .iter()
            .any(|s| s.rate >= rate_ub * (1.0 + BOUND_SLACK) && s.fidelity >= fid_ub + BOUND_SLACK)
    }

    fn run(
        &mut self,
        depth: usize,
        prob: f64,
        slowest: f64,
        sig: GhzFidelitySignature,
        found: &mut ParetoSet<StarSolution>,
        stats: &mut StarStats,
    ) {
        if depth == self.options.len() {
            self.leaf(found, stats);
            return;
        }
        for i in 0..self.options[depth].len() {
            let m = self.options[depth][i].metrics;
            let (p2, t2, s2) = (prob * m.p, slowest.max(m.t), sig.extend(m.fidelity));
            let (rate_ub, fid_ub) = self.bound(depth + 1, p2, t2, s2);
            if self.hopeless(found, rate_ub, fid_ub) {
                stats.pruned += 1;
                continue;
            }
            self.chosen.push(i);
            self.metrics.push(m);
            self.run(depth + 1, p2, t2, s2, found, stats);
            self.chosen.pop();
            self.metrics.pop();
        }
    }

    fn leaf(&self, found: &mut ParetoSet<StarSolution>, stats: &mut StarStats) {
        stats.stars_evaluated += 1;
        let fidelity = star_fidelity(&self.metrics);
        if fidelity < GHZ_FIDELITY_FLOOR {
            return;
        }
        let rate = star_rate(&self.metrics);
        let mut probe = StarSolution { center: self.center, branches: Vec::new(), rate, fidelity, overlap: false };
        if !found.admits(&probe) {
            return;
        }
        let paths: Vec<&PathSignature> = self
            .chosen
            .iter()
            .enumerate()
            .map(|(term, &i)| self.options[term][i].path)
            .collect();
        probe.overlap = has_overlap(self.net, &paths);
        probe.branches = paths.into_iter().map(PathSignature::reversed).collect();
        found.insert(probe);
    }
}

/// Whether any link appears in more than one of `paths`.
pub fn has_overlap(net: &Network, paths: &[&PathSignature]) -> bool {
    let mut used: Vec<LinkIndex> = Vec::new();
    for path in paths {
        let start = used.len();
        for w in path.nodes().windows(2) {
            let link = net.link_between(w[0], w[1]).expect("path belongs to the network");
            if used[..start].contains(&link) {
                return true;
            }
            used.push(link);
        }
    }
    false
}

/// Exact Pareto front of stars connecting `terminals`.
pub fn t_star_exact(net: &Network, terminals: &TerminalSet, opts: StarOptions) -> StarSearch {
    let fronts: Vec<ParetoFronts> = terminals
        .as_slice()
        .iter()
        .map(|&t| shortest_paths(net, t, opts.mosp).expect("terminal set was validated against this network"))
        .collect();
    let candidate_centers = feasibility_check(&fronts);
    let mut stats = StarStats::default();
    if candidate_centers.is_empty() {
        return StarSearch {
            status: StarStatus::NoCandidateCenter,
            solutions: Vec::new(),
            complete: true,
            candidate_centers,
            fronts,
            stats,
        };
    }

    let mut found: ParetoSet<StarSolution> = ParetoSet::new();
    let mut searches: Vec<(f64, CenterSearch<'_, '_>)> = candidate_centers
        .iter()
        .map(|&center| {
            let options: Vec<Vec<Candidate<'_>>> = fronts.iter().map(|f| branch_options(f.front(center))).collect();
            let bests = options
                .iter()
                .map(|opts| Bests {
                    p: opts.iter().map(|c| c.metrics.p).fold(0.0, f64::max),
                    t: opts.iter().map(|c| c.metrics.t).fold(f64::INFINITY, f64::min),
                    fidelity: opts.iter().map(|c| c.metrics.fidelity).fold(0.0, f64::max),
                })
                .collect();
            let search = CenterSearch {
                net,
                center,
                options,
                bests,
                chosen: Vec::new(),
                metrics: Vec::new(),
            };
            let (_, fid_ub) = search.bound(0, 1.0, 0.0, GhzFidelitySignature::NEUTRAL);
            (fid_ub, search)
        })
        .collect();
    // Promising centres first so the bound bites early; order does not change the result.
    searches.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.center.cmp(&b.1.center)));
    for (_, search) in &mut searches {
        let (rate_ub, fid_ub) = search.bound(0, 1.0, 0.0, GhzFidelitySignature::NEUTRAL);
        if search.hopeless(&found, rate_ub, fid_ub) {
            stats.pruned += 1;
            continue;
        }
        search.run(0, 1.0, 0.0, GhzFidelitySignature::NEUTRAL, &mut found, &mut stats);
    }

    let mut solutions = found.into_vec();
    let mut complete = true;
    if opts.overlap == OverlapPolicy::Discard {
        let before = solutions.len();
        solutions.retain(|s| !s.overlap);
        complete = solutions.len() == before;
    }
    solutions.sort_by(|a, b| b.fidelity.total_cmp(&a.fidelity).then(a.rate.total_cmp(&b.rate)));

    let status = if !solutions.is_empty() {
        StarStatus::Feasible
    } else if complete {
        StarStatus::BelowFidelityFloor
    } else {
        StarStatus::NoDisjointStar
    };
    StarSearch { status, solutions, complete, candidate_centers, fronts, stats }
}
