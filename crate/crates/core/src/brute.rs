//! Exhaustive reference solvers for small networks.
//!
//! These enumerate every simple path (and every star built from them) and
//! filter afterwards. They share no code with the label-correcting solver or
//! the star search and are only practical up to about ten nodes.

use alloc::vec::Vec;

use crate::netmodel::{Network, NodeIndex, ENTANGLEMENT_THRESHOLD};

/// A simple path from some source with its four metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePath {
    pub nodes: Vec<NodeIndex>,
    pub p: f64,
    pub t: f64,
    pub gamma: f64,
    pub inv_sigma: f64,
}

impl SimplePath {
    pub fn objectives(&self) -> [f64; 4] {
        [self.p, self.t, self.gamma, self.inv_sigma]
    }

    pub fn head(&self) -> NodeIndex {
        self.nodes[self.nodes.len() - 1]
    }

    /// `(p, t, F)` of the path.
    pub fn contracted(&self) -> (f64, f64, f64) {
        let decayed = self.gamma * libm::exp(-self.t * self.inv_sigma);
        (self.p, self.t, (3.0 * decayed + 1.0) / 4.0)
    }
}

/// Every simple path from `source` whose `gamma` stays at or above 1/3,
/// including the empty path.
pub fn simple_paths(net: &Network, source: NodeIndex) -> Vec<SimplePath> {
    let mut out = Vec::new();
    let start = SimplePath {
        nodes: alloc::vec![source],
        p: 1.0,
        t: 0.0,
        gamma: 1.0,
        inv_sigma: 2.0 / net.node(source).sigma,
    };
    let mut stack = alloc::vec![start];
    while let Some(path) = stack.pop() {
        let head = path.head();
        for &(next, link) in net.neighbors(head) {
            if path.nodes.contains(&next) {
                continue;
            }
            let l = net.link(link);
            let gamma = path.gamma * l.gamma;
            if gamma < ENTANGLEMENT_THRESHOLD {
                continue;
            }
            let swap = if path.nodes.len() > 1 { net.node(head).k } else { 1.0 };
            let mut nodes = path.nodes.clone();
            nodes.push(next);
            stack.push(SimplePath {
                nodes,
                p: path.p * l.p * swap,
                t: path.t + 2.0 * l.t,
                gamma,
                inv_sigma: path.inv_sigma + 2.0 / net.node(next).sigma,
            });
        }
        out.push(path);
    }
    out
}

fn path_dominates(x: &[f64; 4], y: &[f64; 4]) -> bool {
    let no_worse = x[0] >= y[0] && x[1] <= y[1] && x[2] >= y[2] && x[3] <= y[3];
    no_worse && x != y
}

/// Per node, the distinct non-dominated metric tuples of paths from `source`,
/// sorted lexicographically.
pub fn path_fronts(net: &Network, source: NodeIndex) -> Vec<Vec<[f64; 4]>> {
    let mut by_node: Vec<Vec<[f64; 4]>> = alloc::vec![Vec::new(); net.node_count()];
    for path in simple_paths(net, source) {
        by_node[path.head().0].push(path.objectives());
    }
    by_node
        .into_iter()
        .map(|all| {
            let mut front: Vec<[f64; 4]> = all
                .iter()
                .filter(|x| !all.iter().any(|y| path_dominates(y, x)))
                .copied()
                .collect();
            sort_tuples(&mut front);
            front.dedup();
            front
        })
        .collect()
}

/// Sorts metric tuples lexicographically with `total_cmp`.
pub fn sort_tuples<const N: usize>(v: &mut [[f64; N]]) {
    v.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
}

/// One star found by exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteStar {
    pub center: NodeIndex,
    pub rate: f64,
    pub fidelity: f64,
    /// Node sequences from each terminal to the centre.
    pub paths: Vec<Vec<NodeIndex>>,
}

fn star_dominates(x: &BruteStar, y: &BruteStar) -> bool {
    x.rate >= y.rate && x.fidelity >= y.fidelity && (x.rate, x.fidelity) != (y.rate, y.fidelity)
}

/// Every non-dominated star over all centres and all combinations of simple
/// paths, after dropping stars with fidelity under 1/2. Stars with identical
/// `(center, rate, fidelity)` are reported once; equal values at different
/// centres are all kept.
pub fn star_front(net: &Network, terminals: &[NodeIndex]) -> Vec<BruteStar> {
    let mut ending: Vec<Vec<Vec<SimplePath>>> = terminals
        .iter()
        .map(|_| alloc::vec![Vec::new(); net.node_count()])
        .collect();
    for (i, &term) in terminals.iter().enumerate() {
        for path in simple_paths(net, term) {
            let head = path.head().0;
            ending[i][head].push(path);
        }
    }

    let mut front: Vec<BruteStar> = Vec::new();
    for center in 0..net.node_count() {
        let options: Vec<&Vec<SimplePath>> = ending.iter().map(|per_node| &per_node[center]).collect();
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        let mut choice = alloc::vec![0usize; terminals.len()];
        loop {
            let mut prob = 1.0;
            let mut slowest: f64 = 0.0;
            let (mut a, mut b, mut c) = (1.0, 1.0, 1.0);
            for (opt, &i) in options.iter().zip(&choice) {
                let (p, t, f) = opt[i].contracted();
                prob *= p;
                slowest = slowest.max(t);
                a *= (1.0 + 2.0 * f) / 3.0;
                b *= 2.0 * (1.0 - f) / 3.0;
                c *= (4.0 * f - 1.0) / 3.0;
            }
            let fidelity = (a + b + c) / 2.0;
            if fidelity >= 0.5 {
                let star = BruteStar {
                    center: NodeIndex(center),
                    rate: prob / (2.0 * slowest),
                    fidelity,
                    paths: Vec::new(),
                };
                let beaten = front.iter().any(|m| star_dominates(m, &star));
                let duplicate = front
                    .iter()
                    .any(|m| m.center == star.center && (m.rate, m.fidelity) == (star.rate, star.fidelity));
                if !beaten && !duplicate {
                    front.retain(|m| !star_dominates(&star, m));
                    let paths = options.iter().zip(&choice).map(|(opt, &i)| opt[i].nodes.clone()).collect();
                    front.push(BruteStar { paths, ..star });
                }
            }
            // Next combination, odometer style.
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    break;
                }
                choice[pos] += 1;
                if choice[pos] < options[pos].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == choice.len() {
                break;
            }
        }
    }
    front.sort_by(|x, y| x.center.cmp(&y.center).then(x.rate.total_cmp(&y.rate)).then(x.fidelity.total_cmp(&y.fidelity)));
    front
}
