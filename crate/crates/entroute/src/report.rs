//! JSON reports for the `paths` and `star` commands.

use entroute_core::star::{StarSearch, StarStatus};
use entroute_core::{Network, ParetoFronts, PathSignature};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathEntry {
    pub p: f64,
    pub t: f64,
    pub gamma: f64,
    pub inv_sigma: f64,
    /// Contracted branch fidelity.
    pub fidelity: f64,
    pub path: Vec<String>,
}

impl PathEntry {
    pub fn new(net: &Network, sig: &PathSignature) -> Self {
        PathEntry {
            p: sig.p,
            t: sig.t,
            gamma: sig.gamma,
            inv_sigma: sig.inv_sigma,
            fidelity: sig.contract().fidelity,
            path: sig.nodes().iter().map(|&n| net.id(n).to_owned()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeFront {
    pub node: String,
    /// Empty when the node cannot be reached.
    pub front: Vec<PathEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathsReport {
    pub source: String,
    pub nodes: Vec<NodeFront>,
}

fn sort_entries(entries: &mut [PathEntry]) {
    entries.sort_by(|a, b| {
        a.t.total_cmp(&b.t)
            .then(b.p.total_cmp(&a.p))
            .then(b.gamma.total_cmp(&a.gamma))
            .then(a.inv_sigma.total_cmp(&b.inv_sigma))
            .then_with(|| a.path.cmp(&b.path))
    });
}

impl PathsReport {
    pub fn new(net: &Network, fronts: &ParetoFronts) -> Self {
        let nodes = fronts
            .iter()
            .map(|(n, set)| {
                let mut front: Vec<PathEntry> = set.iter().map(|s| PathEntry::new(net, s)).collect();
                sort_entries(&mut front);
                NodeFront { node: net.id(n).to_owned(), front }
            })
            .collect();
        PathsReport { source: net.id(fronts.source()).to_owned(), nodes }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchEntry {
    pub terminal: String,
    #[serde(flatten)]
    pub path: PathEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionEntry {
    pub center: String,
    pub xi: f64,
    pub f: f64,
    pub overlap: bool,
    pub branches: Vec<BranchEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarReport {
    pub terminals: Vec<String>,
    pub status: &'static str,
    /// False if discarding overlapping stars may have hidden optimal ones.
    pub complete: bool,
    pub candidate_centers: Vec<String>,
    pub solutions: Vec<SolutionEntry>,
}

pub fn status_name(status: StarStatus) -> &'static str {
    match status {
        StarStatus::Feasible => "feasible",
        StarStatus::NoCandidateCenter => "no_candidate_center",
        StarStatus::BelowFidelityFloor => "below_fidelity_floor",
        StarStatus::NoDisjointStar => "no_disjoint_star",
    }
}

impl StarReport {
    pub fn new(net: &Network, terminals: &[entroute_core::NodeIndex], search: &StarSearch) -> Self {
        let solutions = search
            .solutions
            .iter()
            .map(|s| SolutionEntry {
                center: net.id(s.center).to_owned(),
                xi: s.rate,
                f: s.fidelity,
                overlap: s.overlap,
                branches: s
                    .branches
                    .iter()
                    .zip(terminals)
                    .map(|(b, &t)| BranchEntry { terminal: net.id(t).to_owned(), path: PathEntry::new(net, b) })
                    .collect(),
            })
            .collect();
        StarReport {
            terminals: terminals.iter().map(|&t| net.id(t).to_owned()).collect(),
            status: status_name(search.status),
            complete: search.complete,
            candidate_centers: search.candidate_centers.iter().map(|&c| net.id(c).to_owned()).collect(),
            solutions,
        }
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("plain data serialises");
    s.push('\n');
    s
}
