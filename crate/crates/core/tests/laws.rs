use entroute_core::algebra::{dominates, ParetoSet, PathSignature, Sense, PATH_SENSES};
use entroute_core::ghz::{ghz_fidelity, star_fidelity, tree_fidelity, DistributionTree, GhzFidelitySignature, TreeFidelityAccumulator};
use entroute_core::mosp::{replay, reconstruct};
use entroute_core::netmodel::{LinkIndex, Network, NetworkBuilder, NodeIndex};
use entroute_core::oracle::star_oracle;
use entroute_core::verify::{small_network, NonIsotoneWitness};
use entroute_core::{shortest_paths, BranchMetrics, Dominance, MospOptions};
use proptest::prelude::*;

fn chain(k_mid: f64, sigma_end: f64, p: f64, t: f64, gamma: f64) -> Network {
    NetworkBuilder::new()
        .node("a", 0.9, 1e4)
        .node("b", k_mid, 1e4)
        .node("c", 0.9, sigma_end)
        .link("a", "b", 0.9, 1.0, 0.9)
        .link("b", "c", p, t, gamma)
        .build()
        .unwrap()
}

fn sig_at_b(p: f64, t: f64, gamma: f64, inv_sigma: f64) -> PathSignature {
    PathSignature::from_parts(p, t, gamma, inv_sigma, vec![NodeIndex(0), NodeIndex(1)])
}

prop_compose! {
    fn raw_sig()(p in 0.01..=1.0f64, t in 0.0..500.0f64, gamma in 0.34..=1.0f64, inv in 1e-5..1e-2f64) -> (f64, f64, f64, f64) {
        (p, t, gamma, inv)
    }
}

prop_compose! {
    fn link()(k in 0.5..=1.0f64, sigma in 1e3..1e5f64, p in 0.5..=1.0f64, t in 1.0..100.0f64, gamma in 0.9..=1.0f64)
        -> (f64, f64, f64, f64, f64) {
        (k, sigma, p, t, gamma)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn extension_is_monotone(s in raw_sig(), l in link()) {
        let net = chain(l.0, l.1, l.2, l.3, l.4);
        let sig = sig_at_b(s.0, s.1, s.2, s.3);
        if let Ok(next) = sig.extend(&net, LinkIndex(1)) {
            prop_assert!(next.p <= sig.p);
            prop_assert!(next.t >= sig.t);
            prop_assert!(next.gamma <= sig.gamma);
            prop_assert!(next.inv_sigma >= sig.inv_sigma);
        }
    }

    #[test]
    fn extension_is_isotone_per_metric(x in raw_sig(), y in raw_sig(), l in link()) {
        let net = chain(l.0, l.1, l.2, l.3, l.4);
        let (a, b) = (sig_at_b(x.0, x.1, x.2, x.3), sig_at_b(y.0, y.1, y.2, y.3));
        if let (Ok(a2), Ok(b2)) = (a.extend(&net, LinkIndex(1)), b.extend(&net, LinkIndex(1))) {
            if a.p >= b.p { prop_assert!(a2.p >= b2.p); }
            if a.t <= b.t { prop_assert!(a2.t <= b2.t); }
            if a.gamma >= b.gamma { prop_assert!(a2.gamma >= b2.gamma); }
            if a.inv_sigma <= b.inv_sigma { prop_assert!(a2.inv_sigma <= b2.inv_sigma); }
        }
    }

    #[test]
    fn path_dominance_survives_extension(x in raw_sig(), y in raw_sig(), l in link()) {
        let net = chain(l.0, l.1, l.2, l.3, l.4);
        let (a, b) = (sig_at_b(x.0, x.1, x.2, x.3), sig_at_b(y.0, y.1, y.2, y.3));
        if a.dominates(&b) {
            if let (Ok(a2), Ok(b2)) = (a.extend(&net, LinkIndex(1)), b.extend(&net, LinkIndex(1))) {
                prop_assert!(!b2.dominates(&a2));
            }
        }
    }

    #[test]
    fn contraction_respects_dominance(y in raw_sig(), dg in 0.0..=1.0f64, dt in 0.0..=1.0f64, di in 0.0..=1.0f64) {
        let worse = sig_at_b(1.0, y.1, y.2, y.3);
        let better = sig_at_b(1.0, y.1 * dt, y.2 + (1.0 - y.2) * dg, y.3 * di);
        prop_assert!(better.contract().fidelity >= worse.contract().fidelity);
        let f = worse.contract().fidelity;
        prop_assert!(f >= 0.25 && f <= 1.0);
    }

    #[test]
    fn pareto_set_equals_filter(points in prop::collection::vec(prop::array::uniform4(0u8..4), 0..40)) {
        let pts: Vec<[f64; 4]> = points.iter().map(|p| p.map(f64::from)).collect();
        let mut set: ParetoSet<Tuple> = ParetoSet::new();
        for &p in &pts {
            set.insert(Tuple(p));
        }
        let mut expected: Vec<[f64; 4]> = pts.iter().filter(|p| !pts.iter().any(|q| dominates(q, *p, &PATH_SENSES))).copied().collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        expected.dedup();
        let mut got: Vec<[f64; 4]> = set.iter().map(|t| t.0).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn star_closed_form_matches_oracle(fs in prop::collection::vec(0.5..=1.0f64, 2..=4)) {
        let want = star_oracle(&fs).unwrap();
        prop_assert!((ghz_fidelity(&fs) - want).abs() <= 1e-12);
    }

    #[test]
    fn ghz_fidelity_is_label_isotone(prefix in prop::collection::vec(0.5..=1.0f64, 0..6), x in 0.5..=1.0f64, y in 0.5..=1.0f64) {
        let sig = prefix.iter().fold(GhzFidelitySignature::NEUTRAL, |s, &f| s.extend(f));
        let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
        prop_assert!(2.0 * sig.a - 2.0 * sig.b + 4.0 * sig.c >= 0.0);
        prop_assert!(sig.extend(hi).raw() + 1e-14 >= sig.extend(lo).raw());
        prop_assert!(sig.extend(lo).raw() <= sig.raw());
    }

    #[test]
    fn parity_weights(fs in prop::collection::vec(0.5..=1.0f64, 0..8)) {
        let acc = fs.iter().fold(TreeFidelityAccumulator::new(), |a, &f| a.fold_steiner(f));
        prop_assert!((acc.even + acc.odd - 1.0).abs() <= 1e-12);
        prop_assert!(acc.even + 1e-12 >= acc.odd);
    }

    #[test]
    fn star_tree_equals_star(fs in prop::collection::vec(0.5..=1.0f64, 2..=5)) {
        let branches: Vec<BranchMetrics> = fs.iter().map(|&f| BranchMetrics { p: 0.9, t: 1.0, fidelity: f }).collect();
        let tree = DistributionTree::star(&branches).unwrap();
        for initial in 0..fs.len() {
            prop_assert!((tree_fidelity(&tree, initial).unwrap() - star_fidelity(&branches)).abs() <= 1e-12);
        }
    }

    #[test]
    fn solver_fronts_are_consistent(seed in 0u64..10_000, n in 3usize..9) {
        let net = small_network(seed, n, 0.3);
        let fronts = shortest_paths(&net, NodeIndex(0), MospOptions::default()).unwrap();
        for &(v, _) in net.neighbors(NodeIndex(0)) {
            prop_assert!(fronts.is_reachable(v));
        }
        for (v, front) in fronts.iter() {
            for sig in front {
                prop_assert_eq!(sig.head(), v);
                prop_assert_eq!(sig.origin(), NodeIndex(0));
                let mut seen = sig.nodes().to_vec();
                seen.sort();
                seen.dedup();
                prop_assert_eq!(seen.len(), sig.nodes().len());
                prop_assert!(sig.gamma >= 1.0 / 3.0);
                prop_assert_eq!(&replay(&net, NodeIndex(0), &reconstruct(&net, sig)).unwrap(), sig);
                prop_assert!(front.iter().all(|o| !o.dominates(sig)));
            }
        }
        let stats = fronts.stats();
        prop_assert!(stats.labels_expanded <= stats.labels_admitted);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Tuple([f64; 4]);

impl Dominance for Tuple {
    fn pareto_cmp(&self, other: &Self) -> entroute_core::ParetoOrdering {
        entroute_core::algebra::pareto_cmp(&self.0, &other.0, &PATH_SENSES)
    }
}

#[test]
fn senses_are_as_documented() {
    assert_eq!(PATH_SENSES, [Sense::Maximize, Sense::Minimize, Sense::Maximize, Sense::Minimize]);
}

/// The direct path has the better contracted fidelity, yet after a common
/// slow hop into a short-lived node the order flips. Each metric on its own
/// keeps its order.
#[test]
fn collapsed_fidelity_is_not_isotone() {
    let w = NonIsotoneWitness::new();
    assert_eq!(w.direct.head(), w.detour.head());
    let (before, after) = (w.before(), w.after());
    assert!(before.0 >= before.1, "{before:?}");
    assert!(after.0 < after.1, "{after:?}");
    assert!(w.flips());

    assert!((before.0 - 0.977_797_514_930_265_7).abs() < 1e-12, "{}", before.0);
    assert!((before.1 - 0.976_214_866_867_759_9).abs() < 1e-12, "{}", before.1);
    assert!((after.0 - 0.263_066_123_268_600_35).abs() < 1e-12, "{}", after.0);
    assert!((after.1 - 0.328_873_549_505_942_94).abs() < 1e-12, "{}", after.1);

    let (d2, w2) = (
        w.direct.extend(&w.network, w.extension).unwrap(),
        w.detour.extend(&w.network, w.extension).unwrap(),
    );
    assert!(w.direct.gamma > w.detour.gamma && d2.gamma > w2.gamma);
    assert!(w.direct.t > w.detour.t && d2.t > w2.t);
    assert!(w.direct.inv_sigma < w.detour.inv_sigma && d2.inv_sigma < w2.inv_sigma);
}
