//! Randomized verification suites: closed forms against the density-matrix
//! oracle, and the algebraic laws the search relies on.
//!
//! Each suite draws its cases from a seeded generator and returns a
//! [`SuiteReport`]; nothing panics on a violation.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{pareto_cmp, Dominance, ParetoOrdering, ParetoSet, PathSignature, Sense};
use crate::ghz::{
    ghz_fidelity, tree_fidelity, tree_fidelity_from_channels, DistributionTree, GhzFidelitySignature, RateSignature,
    TreeBranch, TreeFidelityAccumulator,
};
use crate::algebra::BranchMetrics;
use crate::brute::{path_fronts, sort_tuples, star_front};
use crate::mosp::{shortest_paths, MospOptions};
use crate::netmodel::{LinkIndex, Network, NetworkBuilder, NodeIndex};
use crate::oracle::{star_oracle, tree_oracle};
use crate::star::{t_star_exact, StarOptions};

/// Cases per suite used by [`run_all`].
pub const DEFAULT_CASES: usize = 1000;

/// Agreement required between closed forms and the oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-12;

/// Slack for laws whose two sides are computed along different rounding paths.
const ROUNDING: f64 = 1e-14;

/// Signature of a closed-form star fidelity, so a faulty one can be injected.
pub type StarClosedForm = fn(&[f64]) -> f64;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, cases: 0, failures: 0, first_failure: None }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }
}

fn fidelity(rng: &mut ChaCha8Rng) -> f64 {
    // Mix in exact 1s now and then; they exercise the degenerate products.
    if rng.random_bool(0.05) {
        1.0
    } else {
        rng.random_range(0.5..1.0)
    }
}

fn fidelities(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| fidelity(rng)).collect()
}

/// Closed-form star fidelity against the oracle for 2 to 5 terminals.
pub fn star_vs_oracle(closed: StarClosedForm, cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("star_fidelity");
    for i in 0..cases {
        let fs = fidelities(&mut rng, 2 + i % 4);
        let want = star_oracle(&fs).expect("at most 5 qubits");
        let got = closed(&fs);
        report.check((got - want).abs() <= ORACLE_TOLERANCE, || format!("F = {fs:?}: closed form {got}, oracle {want}"));
    }
    report
}

/// Random tree over at most 5 terminals: leaves are terminals, inner vertices
/// Steiner nodes, and some inner vertices are terminals as well.
fn random_tree(rng: &mut ChaCha8Rng) -> DistributionTree {
    loop {
        let vertices = rng.random_range(3..=7);
        let mut degree = alloc::vec![0usize; vertices];
        let mut branches = Vec::with_capacity(vertices - 1);
        for v in 1..vertices {
            let u = rng.random_range(0..v);
            degree[u] += 1;
            degree[v] += 1;
            let metrics = BranchMetrics { p: rng.random_range(0.1..1.0), t: rng.random_range(1.0..100.0), fidelity: fidelity(rng) };
            branches.push(TreeBranch { ends: (u, v), metrics });
        }
        let mut terminals: Vec<usize> = (0..vertices).filter(|&v| degree[v] == 1).collect();
        let steiner: Vec<usize> = (0..vertices).filter(|&v| degree[v] > 1).collect();
        for &s in &steiner {
            if terminals.len() < 5 && rng.random_bool(0.3) {
                terminals.push(s);
            }
        }
        if terminals.len() > 5 {
            continue;
        }
        return DistributionTree::new(vertices, branches, terminals, steiner).expect("random tree is valid");
    }
}

/// Tree-scheme closed form against the oracle, on raw channels and on random trees.
pub fn tree_vs_oracle(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("tree_fidelity");
    for i in 0..cases {
        if i % 2 == 0 {
            let n = rng.random_range(2..=5);
            let terminal = fidelities(&mut rng, n);
            let count = rng.random_range(1..=3);
            let steiner = fidelities(&mut rng, count);
            let initial = rng.random_range(0..n);
            let want = tree_oracle(&terminal, &steiner, initial).expect("at most 5 qubits");
            let got = tree_fidelity_from_channels(&terminal, &steiner, initial);
            report.check((got - want).abs() <= ORACLE_TOLERANCE, || {
                format!("terminal {terminal:?}, steiner {steiner:?}, initial {initial}: closed form {got}, oracle {want}")
            });
        } else {
            let tree = random_tree(&mut rng);
            let initial = rng.random_range(0..tree.terminals().len());
            let ch = tree.channels(initial).expect("initial is a terminal position");
            let want = tree_oracle(&ch.terminal, &ch.steiner, initial).expect("at most 5 qubits");
            let got = tree_fidelity(&tree, initial).expect("initial is a terminal position");
            report.check((got - want).abs() <= ORACLE_TOLERANCE, || format!("{tree:?} from {initial}: closed form {got}, oracle {want}"));
        }
    }
    report
}

/// Complete graph on `n` nodes with random parameters.
fn random_complete(rng: &mut ChaCha8Rng, n: usize) -> Network {
    let mut b = NetworkBuilder::new();
    for i in 0..n {
        b.add_node(format!("v{i}"), rng.random_range(0.5..=1.0), rng.random_range(1e2..1e5));
    }
    for u in 0..n {
        for v in u + 1..n {
            b.add_link(
                format!("v{u}"),
                format!("v{v}"),
                rng.random_range(0.5..=1.0),
                rng.random_range(1.0..100.0),
                rng.random_range(0.8..=1.0),
            );
        }
    }
    b.build().expect("random parameters are valid")
}

fn random_walk(rng: &mut ChaCha8Rng, net: &Network, from: NodeIndex, hops: usize) -> PathSignature {
    let mut sig = PathSignature::source(net, from);
    for _ in 0..hops {
        let options: Vec<LinkIndex> = net
            .neighbors(sig.head())
            .iter()
            .filter(|(n, _)| !sig.nodes().contains(n))
            .map(|&(_, l)| l)
            .collect();
        if options.is_empty() {
            break;
        }
        match sig.extend(net, options[rng.random_range(0..options.len())]) {
            Ok(next) => sig = next,
            Err(_) => break,
        }
    }
    sig
}

/// Extension never improves any single path metric.
pub fn path_monotonicity(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("path_monotonicity");
    while report.cases < cases {
        let net = random_complete(&mut rng, 7);
        for _ in 0..20 {
            let hops = rng.random_range(0..5);
            let sig = random_walk(&mut rng, &net, NodeIndex(0), hops);
            let free: Vec<LinkIndex> = net
                .neighbors(sig.head())
                .iter()
                .filter(|(n, _)| !sig.nodes().contains(n))
                .map(|&(_, l)| l)
                .collect();
            let Some(&link) = free.get(rng.random_range(0..free.len().max(1))) else { continue };
            let Ok(next) = sig.extend(&net, link) else { continue };
            report.check(
                next.p <= sig.p && next.t >= sig.t && next.gamma <= sig.gamma && next.inv_sigma >= sig.inv_sigma,
                || format!("{sig:?} extended to {next:?}"),
            );
        }
    }
    report
}

/// Extending two paths with the same ends by the same link preserves their
/// order in every metric separately.
pub fn path_isotonicity(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("path_isotonicity");
    while report.cases < cases {
        let net = random_complete(&mut rng, 7);
        for _ in 0..50 {
            let (h1, h2) = (rng.random_range(1..5), rng.random_range(1..5));
            let first = random_walk(&mut rng, &net, NodeIndex(0), h1);
            let second = random_walk(&mut rng, &net, NodeIndex(0), h2);
            if first.head() != second.head() || first.hops() == 0 || second.hops() == 0 {
                continue;
            }
            let head = first.head();
            let free: Vec<LinkIndex> = net
                .neighbors(head)
                .iter()
                .filter(|(n, _)| !first.nodes().contains(n) && !second.nodes().contains(n))
                .map(|&(_, l)| l)
                .collect();
            if free.is_empty() {
                continue;
            }
            let link = free[rng.random_range(0..free.len())];
            let (Ok(a), Ok(b)) = (first.extend(&net, link), second.extend(&net, link)) else { continue };
            let before = [first.p >= second.p, first.t <= second.t, first.gamma >= second.gamma, first.inv_sigma <= second.inv_sigma];
            let after = [a.p >= b.p, a.t <= b.t, a.gamma >= b.gamma, a.inv_sigma <= b.inv_sigma];
            let ok = before.iter().zip(&after).all(|(&was, &is)| !was || is);
            report.check(ok, || format!("{first:?} and {second:?} extended by {link:?}"));
        }
    }
    report
}

/// Better `gamma`, `t` and `inv_sigma` together imply a better contracted fidelity.
pub fn contraction_dominance(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("contraction_dominance");
    let node = NodeIndex(0);
    for _ in 0..cases {
        let worse = PathSignature::from_parts(
            1.0,
            rng.random_range(0.0..2000.0),
            rng.random_range(0.34..=1.0),
            rng.random_range(2e-5..1e-2),
            alloc::vec![node],
        );
        let shrink = |rng: &mut ChaCha8Rng, x: f64| if rng.random_bool(0.2) { x } else { x * rng.random_range(0.0..=1.0) };
        let gamma = if rng.random_bool(0.2) { worse.gamma } else { rng.random_range(worse.gamma..=1.0) };
        let t = shrink(&mut rng, worse.t);
        let inv_sigma = shrink(&mut rng, worse.inv_sigma);
        let better = PathSignature::from_parts(1.0, t, gamma, inv_sigma, alloc::vec![node]);
        let (fb, fw) = (better.contract().fidelity, worse.contract().fidelity);
        report.check(fb >= fw, || format!("{better:?} -> {fb} but {worse:?} -> {fw}"));
    }
    report
}

/// Appending a branch never raises the star fidelity; a perfect branch only
/// removes the all-flipped term.
pub fn ghz_monotonicity(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("ghz_monotonicity");
    for _ in 0..cases {
        let n = rng.random_range(1..=6);
        let sig = fidelities(&mut rng, n).into_iter().fold(GhzFidelitySignature::NEUTRAL, GhzFidelitySignature::extend);
        let f = fidelity(&mut rng);
        let next = sig.extend(f);
        let perfect = sig.extend(1.0);
        let ok = next.raw() <= sig.raw()
            && next.h() <= sig.h()
            && perfect.a == sig.a
            && perfect.c == sig.c
            && perfect.b == 0.0
            && (perfect.raw() - (sig.raw() - sig.b / 2.0)).abs() <= ROUNDING;
        report.check(ok, || format!("{sig:?} extended by {f}"));
    }
    report
}

/// Appending a branch with `p <= 1` never raises the rate.
pub fn rate_monotonicity(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("rate_monotonicity");
    for _ in 0..cases {
        let n = rng.random_range(1..=6);
        let sig = (0..n).fold(RateSignature::NEUTRAL, |s, _| s.extend(rng.random_range(0.01..=1.0), rng.random_range(1.0..200.0)));
        let (p, t) = (rng.random_range(0.01..=1.0), rng.random_range(1.0..200.0));
        let next = sig.extend(p, t);
        report.check(next.g() <= sig.g(), || format!("{sig:?} extended by p={p}, t={t}"));
    }
    report
}

/// A better branch fidelity gives a better (truncated) star fidelity after
/// combination with any accumulated `{a, b, c}`.
pub fn ghz_label_isotonicity(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("ghz_label_isotonicity");
    for _ in 0..cases {
        let n = rng.random_range(0..=6);
        let sig = fidelities(&mut rng, n).into_iter().fold(GhzFidelitySignature::NEUTRAL, GhzFidelitySignature::extend);
        let (x, y) = (fidelity(&mut rng), fidelity(&mut rng));
        let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
        let (up, down) = (sig.extend(hi), sig.extend(lo));
        let slope = 2.0 * sig.a - 2.0 * sig.b + 4.0 * sig.c;
        let ok = slope >= 0.0 && up.raw() + ROUNDING >= down.raw() && (up.h() + ROUNDING >= down.h() || down.h() == 0.0);
        report.check(ok, || format!("{sig:?} extended by {hi} and {lo}"));
    }
    report
}

/// A branch with better `p` and smaller `t` gives a better rate after
/// combination with any accumulated `{a, b}`.
pub fn rate_label_isotonicity(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("rate_label_isotonicity");
    for _ in 0..cases {
        let n = rng.random_range(0..=6);
        let sig = (0..n).fold(RateSignature::NEUTRAL, |s, _| s.extend(rng.random_range(0.01..=1.0), rng.random_range(1.0..200.0)));
        let (p2, t2) = (rng.random_range(0.01..=1.0), rng.random_range(1.0..200.0));
        let p1 = if rng.random_bool(0.2) { p2 } else { rng.random_range(p2..=1.0) };
        let t1 = if rng.random_bool(0.2) { t2 } else { rng.random_range(1.0..=t2) };
        let (better, worse) = (sig.extend(p1, t1), sig.extend(p2, t2));
        report.check(better.g() >= worse.g(), || format!("{sig:?} with (p={p1}, t={t1}) vs (p={p2}, t={t2})"));
    }
    report
}

/// Even/odd parity weights: `E + O = 1`, `E >= O`, the fold recursion, and
/// `E(S) - E(S+s) = O(S+s) - O(S) = (E(S) - O(S)) * 2(1 - F_s)/3`.
pub fn parity_identities(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("parity_identities");
    for _ in 0..cases {
        let n = rng.random_range(0..=6);
        let acc = fidelities(&mut rng, n).into_iter().fold(TreeFidelityAccumulator::new(), TreeFidelityAccumulator::fold_steiner);
        let f = fidelity(&mut rng);
        let next = acc.fold_steiner(f);
        let keep = (1.0 + 2.0 * f) / 3.0;
        let flip = 2.0 * (1.0 - f) / 3.0;
        let close = |x: f64, y: f64| (x - y).abs() <= ORACLE_TOLERANCE;
        let ok = close(acc.even + acc.odd, 1.0)
            && close(next.even + next.odd, 1.0)
            && acc.even + ORACLE_TOLERANCE >= acc.odd
            && next.even + ORACLE_TOLERANCE >= next.odd
            && close(next.even, acc.even * keep + acc.odd * (1.0 - keep))
            && close(acc.even - next.even, (acc.even - acc.odd) * flip)
            && close(next.odd - acc.odd, (acc.even - acc.odd) * flip);
        report.check(ok, || format!("{acc:?} folded with {f}"));
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Point([f64; 3]);

const POINT_SENSES: [Sense; 3] = [Sense::Maximize, Sense::Minimize, Sense::Maximize];

impl Dominance for Point {
    fn pareto_cmp(&self, other: &Self) -> ParetoOrdering {
        pareto_cmp(&self.0, &other.0, &POINT_SENSES)
    }
}

/// After any insertion sequence the set equals the non-dominated filter of
/// everything inserted (one representative per tie).
pub fn pareto_invariant(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("pareto_invariant");
    for _ in 0..cases {
        let n = rng.random_range(1..30);
        // Coarse grid values so ties and exact dominance both occur.
        let points: Vec<Point> = (0..n)
            .map(|_| Point([0, 1, 2].map(|_| f64::from(rng.random_range(0..5u8)))))
            .collect();
        let mut set = ParetoSet::new();
        for &p in &points {
            set.insert(p);
        }
        let mut expected: Vec<Point> = Vec::new();
        for &p in &points {
            if !points.iter().any(|q| q.dominates(&p)) && !expected.contains(&p) {
                expected.push(p);
            }
        }
        let members = set.as_slice();
        let ok = members.len() == expected.len()
            && expected.iter().all(|e| members.contains(e))
            && members.iter().all(|m| members.iter().all(|o| !o.dominates(m)));
        report.check(ok, || format!("inserted {points:?}, kept {members:?}, expected {expected:?}"));
    }
    report
}

/// Connected random network on `n` nodes: a random spanning tree plus each
/// remaining pair with probability `extra`.
pub fn small_network(seed: u64, n: usize, extra: f64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = NetworkBuilder::new();
    for i in 0..n {
        b.add_node(format!("v{i}"), rng.random_range(0.5..1.0), rng.random_range(1e3..1e5));
    }
    let mut linked = alloc::vec![alloc::vec![false; n]; n];
    for v in 1..n {
        let u = rng.random_range(0..v);
        linked[u][v] = true;
    }
    for u in 0..n {
        for v in u + 1..n {
            if !linked[u][v] {
                linked[u][v] = rng.random_bool(extra);
            }
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            if linked[u][v] {
                let f: f64 = rng.random_range(0.75..1.0);
                b.add_link(
                    format!("v{u}"),
                    format!("v{v}"),
                    rng.random_range(0.5..1.0),
                    rng.random_range(1.0..100.0),
                    (4.0 * f - 1.0) / 3.0,
                );
            }
        }
    }
    b.build().expect("random parameters are valid")
}

/// Solver fronts against exhaustive enumeration, from every source of
/// `instances` random networks with 5 to 10 nodes. Exact tuple equality.
pub fn mosp_vs_brute(instances: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("mosp_vs_brute_force");
    for i in 0..instances {
        let n = 5 + i % 6;
        let net = small_network(seed.wrapping_add(i as u64), n, 0.3);
        for s in net.node_indices() {
            let fronts = shortest_paths(&net, s, MospOptions::default()).expect("source exists");
            let expected = path_fronts(&net, s);
            let ok = net.node_indices().all(|v| {
                let mut got: Vec<[f64; 4]> = fronts.front(v).iter().map(PathSignature::objectives).collect();
                sort_tuples(&mut got);
                got == expected[v.0]
            });
            report.check(ok, || format!("network {i} ({n} nodes), source {s:?}"));
        }
    }
    report
}

/// Outcome of comparing the star search with exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct StarComparison {
    /// Same `(center, rate, fidelity)` set, values within 1e-12.
    pub equivalence: SuiteReport,
    /// Every returned branch is a member of its terminal's path front.
    pub front_membership: SuiteReport,
    /// No returned solution uses a link twice.
    pub disjointness: SuiteReport,
    /// Returned solutions have fidelity at least 1/2 and positive rate.
    pub floors: SuiteReport,
}

impl StarComparison {
    pub fn reports(&self) -> [&SuiteReport; 4] {
        [&self.equivalence, &self.front_membership, &self.disjointness, &self.floors]
    }
}

/// Star search against exhaustive search on `instances` random 8-node
/// networks with `terminals` random terminals each.
pub fn star_vs_brute(instances: usize, terminals: usize, seed: u64) -> StarComparison {
    let mut cmp = StarComparison {
        equivalence: SuiteReport::new("star_vs_brute_force"),
        front_membership: SuiteReport::new("branch_front_membership"),
        disjointness: SuiteReport::new("branch_link_disjointness"),
        floors: SuiteReport::new("solution_floors"),
    };
    for i in 0..instances {
        let instance_seed = seed.wrapping_add(i as u64);
        let net = small_network(instance_seed, 8, 0.25);
        let ts = crate::netgen::sample_terminals(&net, terminals, instance_seed).expect("8 nodes suffice");
        let search = t_star_exact(&net, &ts, StarOptions::default());
        let expected = star_front(&net, ts.as_slice());

        let mut got: Vec<(NodeIndex, f64, f64)> = search.solutions.iter().map(|s| (s.center, s.rate, s.fidelity)).collect();
        got.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.total_cmp(&y.2)));
        let want: Vec<(NodeIndex, f64, f64)> = expected.iter().map(|s| (s.center, s.rate, s.fidelity)).collect();
        let same = got.len() == want.len()
            && got.iter().zip(&want).all(|(g, w)| {
                g.0 == w.0 && (g.1 - w.1).abs() <= ORACLE_TOLERANCE && (g.2 - w.2).abs() <= ORACLE_TOLERANCE
            });
        cmp.equivalence.check(same, || format!("instance {i} terminals {:?}: got {got:?}, want {want:?}", ts.as_slice()));

        for s in &search.solutions {
            let member = s.branches.iter().zip(&search.fronts).all(|(b, fronts)| {
                let back = b.reversed();
                fronts.front(s.center).iter().any(|m| *m == back)
            });
            cmp.front_membership.check(member, || format!("instance {i}: {s:?}"));
            let paths: Vec<&PathSignature> = s.branches.iter().collect();
            let reused = crate::star::has_overlap(&net, &paths);
            cmp.disjointness.check(!reused && !s.overlap, || {
                format!("instance {i} ({} terminals {:?}): centre {:?} branches {:?}", net.node_count(), ts.as_slice(), s.center, s.branches)
            });
            cmp.floors.check(s.fidelity >= 0.5 && s.rate > 0.0, || format!("instance {i}: {s:?}"));
        }
    }
    cmp
}

/// A stored pair of paths showing that the contracted fidelity alone is not
/// isotone, while `gamma`, `t` and `inv_sigma` each are.
#[derive(Debug, Clone, PartialEq)]
pub struct NonIsotoneWitness {
    pub network: Network,
    /// Slow direct path `s-h` with a long-lived memory at both ends.
    pub direct: PathSignature,
    /// Fast detour `s-a-h` through a short-lived memory.
    pub detour: PathSignature,
    /// Common extension `h-x` into a short-lived node.
    pub extension: LinkIndex,
}

impl NonIsotoneWitness {
    pub fn new() -> Self {
        let network = NetworkBuilder::new()
            .node("s", 1.0, 2e5)
            .node("a", 1.0, 11_111.111_111_111_111)
            .node("h", 1.0, 2e5)
            .node("x", 1.0, 1e3)
            .link("s", "h", 1.0, 500.0, 0.99)
            .link("s", "a", 1.0, 2.0, 0.985)
            .link("a", "h", 1.0, 3.0, 0.985)
            .link("h", "x", 1.0, 500.0, 1.0)
            .build()
            .expect("witness network is valid");
        let s = PathSignature::source(&network, NodeIndex(0));
        let direct = s.extend(&network, LinkIndex(0)).expect("valid extension");
        let detour = s
            .extend(&network, LinkIndex(1))
            .and_then(|p| p.extend(&network, LinkIndex(2)))
            .expect("valid extension");
        NonIsotoneWitness { network, direct, detour, extension: LinkIndex(3) }
    }

    /// Contracted fidelities `(direct, detour)` before the extension.
    pub fn before(&self) -> (f64, f64) {
        (self.direct.contract().fidelity, self.detour.contract().fidelity)
    }

    /// Contracted fidelities `(direct, detour)` after the extension.
    pub fn after(&self) -> (f64, f64) {
        let ext = |p: &PathSignature| p.extend(&self.network, self.extension).expect("valid extension");
        (ext(&self.direct).contract().fidelity, ext(&self.detour).contract().fidelity)
    }

    /// The fidelity order flips under the common extension.
    pub fn flips(&self) -> bool {
        let (b, a) = (self.before(), self.after());
        b.0 >= b.1 && a.0 < a.1
    }
}

impl Default for NonIsotoneWitness {
    fn default() -> Self {
        Self::new()
    }
}

/// Every suite with [`DEFAULT_CASES`] cases.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    run_all_with(ghz_fidelity, DEFAULT_CASES, seed)
}

/// Every suite, with a caller-supplied star closed form.
pub fn run_all_with(star: StarClosedForm, cases: usize, seed: u64) -> Vec<SuiteReport> {
    let suites: [fn(usize, u64) -> SuiteReport; 10] = [
        tree_vs_oracle,
        path_monotonicity,
        path_isotonicity,
        contraction_dominance,
        ghz_monotonicity,
        rate_monotonicity,
        ghz_label_isotonicity,
        rate_label_isotonicity,
        parity_identities,
        pareto_invariant,
    ];
    let mut reports = alloc::vec![star_vs_oracle(star, cases, seed)];
    for (i, suite) in suites.iter().enumerate() {
        reports.push(suite(cases, seed.wrapping_add(i as u64 + 1)));
    }
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flipped_sign(fs: &[f64]) -> f64 {
        let sig = fs.iter().fold(GhzFidelitySignature::NEUTRAL, |s, &f| s.extend(f));
        (sig.a + sig.b - sig.c) / 2.0
    }

    #[test]
    fn all_suites_pass() {
        for r in run_all_with(ghz_fidelity, 200, 3) {
            assert!(r.passed(), "{r:?}");
            assert!(r.cases >= 200);
        }
    }

    #[test]
    fn mutation_is_caught() {
        let r = star_vs_oracle(flipped_sign, 50, 1);
        assert_eq!(r.name, "star_fidelity");
        assert!(!r.passed());
        assert!(r.first_failure.is_some());
    }
}
