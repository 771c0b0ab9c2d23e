//! One pass/fail line per acceptance criterion.
//!
//! Runs as a plain binary (`harness = false`). The process fails if any
//! criterion fails, except those listed in `KNOWN_UNATTAINABLE`, which are
//! still printed as FAIL together with the reason.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use entroute::sweep::spearman;
use entroute_core::ghz::{
    star_fidelity, tree_fidelity, tree_fidelity_from_channels, DistributionTree, TreeBranch, TreeFidelityAccumulator,
};
use entroute_core::oracle::{star_oracle, tree_oracle, DensityMatrix};
use entroute_core::verify::{self, NonIsotoneWitness};
use entroute_core::BranchMetrics;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BIN: &str = env!("CARGO_BIN_EXE_entroute");

/// Criteria that cannot hold together with the others on this model, with the reason.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[(
    7,
    "overlapping stars are Pareto-optimal on some instances (better rate through \
     parallel branches, worse fidelity), and criterion 5 requires returning them",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn report_line(r: &verify::SuiteReport) -> String {
    format!("{} {}/{}", r.name, r.cases - r.failures, r.cases)
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for t in 2..=5 {
        for _ in 0..100 {
            let fs: Vec<f64> = (0..t).map(|_| rng.random_range(0.25..=1.0)).collect();
            let metrics: Vec<BranchMetrics> = fs.iter().map(|&f| BranchMetrics { p: 1.0, t: 1.0, fidelity: f }).collect();
            worst = worst.max((star_fidelity(&metrics) - star_oracle(&fs).unwrap()).abs());
            cases += 1;
        }
    }
    outcome(worst <= 1e-12, format!("{cases} tuples, max deviation {worst:.2e}"))
}

fn random_tree(rng: &mut ChaCha8Rng) -> (DistributionTree, usize) {
    let steiner_count = rng.random_range(1..=2);
    let terminals = rng.random_range(2..=5);
    let fid = |rng: &mut ChaCha8Rng| rng.random_range(0.5..=1.0);
    let mut branches = Vec::new();
    if steiner_count == 2 {
        branches.push(TreeBranch { ends: (0, 1), metrics: BranchMetrics { p: 0.9, t: 3.0, fidelity: fid(rng) } });
    }
    let mut attached = vec![0usize; steiner_count];
    for i in 0..terminals {
        // Every Steiner node needs at least one terminal of its own.
        let s = if i < steiner_count { i } else { rng.random_range(0..steiner_count) };
        attached[s] += 1;
        let metrics = BranchMetrics { p: rng.random_range(0.5..1.0), t: rng.random_range(1.0..50.0), fidelity: fid(rng) };
        branches.push(TreeBranch { ends: (s, steiner_count + i), metrics });
    }
    let vertices = steiner_count + terminals;
    let tree = DistributionTree::new(vertices, branches, (steiner_count..vertices).collect(), (0..steiner_count).collect())
        .expect("valid tree");
    let initial = rng.random_range(0..terminals);
    (tree, initial)
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (tree, initial) = random_tree(&mut rng);
        let ch = tree.channels(initial).unwrap();
        let want = tree_oracle(&ch.terminal, &ch.steiner, initial).unwrap();
        worst = worst.max((tree_fidelity(&tree, initial).unwrap() - want).abs());
    }
    let mut reduction_ok = true;
    for _ in 0..100 {
        let t = rng.random_range(2..=5);
        let fs: Vec<f64> = (0..t).map(|_| rng.random_range(0.5..=1.0)).collect();
        let metrics: Vec<BranchMetrics> = fs.iter().map(|&f| BranchMetrics { p: 1.0, t: 1.0, fidelity: f }).collect();
        let tree = DistributionTree::star(&metrics).unwrap();
        let initial = rng.random_range(0..t);
        let ch = tree.channels(initial).unwrap();
        let acc = TreeFidelityAccumulator::new().fold_steiner(fs[initial]);
        reduction_ok &= ch.steiner == [fs[initial]]
            && (acc.even - (1.0 + 2.0 * fs[initial]) / 3.0).abs() <= 1e-12
            && (acc.odd - 2.0 * (1.0 - fs[initial]) / 3.0).abs() <= 1e-12
            && (tree_fidelity_from_channels(&ch.terminal, &ch.steiner, initial) - star_fidelity(&metrics)).abs() <= 1e-12
            && (star_oracle(&fs).unwrap() - tree_fidelity(&tree, initial).unwrap()).abs() <= 1e-12;
    }
    outcome(
        worst <= 1e-12 && reduction_ok,
        format!("100 trees, max deviation {worst:.2e}; star reduction {}", if reduction_ok { "holds" } else { "violated" }),
    )
}

fn criterion_3() -> Outcome {
    let m = |fs: &[f64]| -> Vec<BranchMetrics> { fs.iter().map(|&f| BranchMetrics { p: 1.0, t: 1.0, fidelity: f }).collect() };
    let perfect = star_fidelity(&m(&[1.0, 1.0, 1.0]));
    let quarter = star_fidelity(&m(&[0.25, 1.0, 1.0]));
    let mixed = DensityMatrix::maximally_mixed(3).unwrap().fidelity(&DensityMatrix::ghz(3).unwrap()).unwrap();
    let ok = (perfect - 1.0).abs() <= 1e-12 && (quarter - 0.25).abs() <= 1e-12 && (mixed - 0.125).abs() <= 1e-12;
    outcome(ok, format!("f(1,1,1)={perfect}, f(1/4,1,1)={quarter}, mixed={mixed}"))
}

fn criterion_4() -> Outcome {
    let r = verify::mosp_vs_brute(50, 404);
    outcome(r.passed(), format!("50 networks, {} (network, source) fronts equal", r.cases - r.failures))
}

fn criterion_5_and_7() -> (Outcome, Outcome) {
    let cmp = verify::star_vs_brute(50, 3, 505);
    let five = outcome(
        cmp.equivalence.passed() && cmp.floors.passed(),
        format!("{}; {}", report_line(&cmp.equivalence), report_line(&cmp.floors)),
    );
    let seven = outcome(
        cmp.front_membership.passed() && cmp.disjointness.passed(),
        format!(
            "{}; link reuse in {} of {} solutions",
            report_line(&cmp.front_membership),
            cmp.disjointness.failures,
            cmp.disjointness.cases
        ),
    );
    (five, seven)
}

fn criterion_6() -> Outcome {
    let reports = verify::run_all(606);
    let laws: Vec<&verify::SuiteReport> = reports.iter().filter(|r| !r.name.ends_with("_fidelity")).collect();
    let ok = laws.iter().all(|r| r.passed() && r.cases >= 1000);
    let witness = NonIsotoneWitness::new();
    let summary: Vec<String> = laws.iter().map(|r| report_line(r)).collect();
    let (b, a) = (witness.before(), witness.after());
    outcome(
        ok && witness.flips(),
        format!(
            "{}; non-isotone witness F {:.4}>={:.4} then {:.4}<{:.4}",
            summary.join(", "),
            b.0,
            b.1,
            a.0,
            a.1
        ),
    )
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn criterion_8(dir: &Path) -> Outcome {
    let grid = "[20, 40, 60, 80, 100, 120, 140, 160]";
    let config = format!(
        "master_seed = 8\ninstances = 20\nterminals = 3\n\n\
         [[ensemble]]\nmodel = \"er\"\navg_degree = 3.0\nn = {grid}\n\n\
         [[ensemble]]\nmodel = \"rgg\"\navg_degree = 8.0\nn = {grid}\n"
    );
    let path = dir.join("fig.toml");
    fs::write(&path, config).unwrap();
    let start = Instant::now();
    let out = run(&["sweep", path.to_str().unwrap(), "--jobs", "1"]);
    let elapsed = start.elapsed();
    if !out.status.success() {
        return outcome(false, format!("sweep exited with {:?}", out.status.code()));
    }
    let text = String::from_utf8(out.stdout).unwrap();
    let table: String = text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    let mut reader = csv::Reader::from_reader(table.as_bytes());
    // (model, N) -> (instances, feasible, stars on feasible, runtime sum)
    let mut groups: BTreeMap<(String, usize), (usize, usize, usize, f64)> = BTreeMap::new();
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        rows += 1;
        let key = (rec[0].to_owned(), rec[1].parse::<usize>().unwrap());
        let g = groups.entry(key).or_default();
        g.0 += 1;
        g.3 += rec[4].parse::<f64>().unwrap();
        if &rec[8] == "true" {
            g.1 += 1;
            g.2 += rec[5].parse::<usize>().unwrap();
        }
    }
    let summary_lines = text.lines().filter(|l| l.starts_with("# summary")).count();
    let mut ok = rows == 320 && summary_lines == 16 && elapsed < Duration::from_secs(15 * 60);
    let mut notes = Vec::new();
    for model in ["er", "rgg"] {
        let points: Vec<(usize, (usize, usize, usize, f64))> =
            groups.iter().filter(|((m, _), _)| m == model).map(|((_, n), g)| (*n, *g)).collect();
        let feasible: usize = points.iter().map(|(_, g)| g.1).sum();
        let instances: usize = points.iter().map(|(_, g)| g.0).sum();
        let mean_stars = points.iter().map(|(_, g)| g.2).sum::<usize>() as f64 / feasible.max(1) as f64;
        let ns: Vec<f64> = points.iter().map(|(n, _)| *n as f64).collect();
        let runtimes: Vec<f64> = points.iter().map(|(_, g)| g.3 / g.0 as f64).collect();
        let rho = spearman(&ns, &runtimes).unwrap_or(f64::NAN);
        ok &= feasible > 0 && mean_stars >= 1.0 && rho > 0.0;
        notes.push(format!(
            "{model}: feasible {feasible}/{instances}, mean stars {mean_stars:.2}, runtime rho {rho:.3}"
        ));
    }
    outcome(ok, format!("{}; {rows} rows in {:.1}s", notes.join("; "), elapsed.as_secs_f64()))
}

fn criterion_9(dir: &Path) -> Outcome {
    let net = dir.join("net.json");
    let cfg = dir.join("small.toml");
    fs::write(&cfg, "master_seed = 3\ninstances = 3\nterminals = 3\n\n[[ensemble]]\nmodel = \"rgg\"\navg_degree = 8.0\nn = [20, 30]\n").unwrap();
    let gen = |name: &str| {
        let p = dir.join(name);
        let out = run(&["gen", "--model", "rgg", "--n", "40", "--avg-degree", "8", "--seed", "9", "-o", p.to_str().unwrap()]);
        assert!(out.status.success());
        fs::read(p).unwrap()
    };
    let (g1, g2) = (gen("a.json"), gen("b.json"));
    fs::write(&net, &g1).unwrap();
    let net_s = net.to_str().unwrap();
    let commands: Vec<(&str, Vec<&str>)> = vec![
        ("paths", vec!["paths", net_s, "--source", "n0"]),
        ("star", vec!["star", net_s, "--terminals", "n1,n7,n20"]),
        ("star --disjoint", vec!["star", net_s, "--terminals", "n1,n7,n20", "--disjoint"]),
        ("sweep --no-timing", vec!["sweep", cfg.to_str().unwrap(), "--no-timing"]),
        ("verify", vec!["verify", "--cases", "200"]),
    ];
    let mut same = vec![("gen", g1 == g2)];
    for (name, args) in &commands {
        let (a, b) = (run(args), run(args));
        same.push((name, a.stdout == b.stdout && a.status.code() == b.status.code() && !a.stdout.is_empty()));
    }
    let bad: Vec<&str> = same.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    outcome(bad.is_empty(), if bad.is_empty() { format!("{} commands byte-identical", same.len()) } else { format!("differs: {bad:?}") })
}

fn main() {
    let dir = std::env::temp_dir().join(format!("entroute-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();

    fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
        let start = Instant::now();
        let o = f();
        (o, start.elapsed())
    }
    let mut results: Vec<(u32, &str, (Outcome, Duration))> = Vec::new();
    results.push((1, "star closed form vs oracle", timed(criterion_1)));
    results.push((2, "tree closed form vs oracle", timed(criterion_2)));
    results.push((3, "analytic spot values", timed(criterion_3)));
    results.push((4, "path solver vs exhaustive enumeration", timed(criterion_4)));
    let start = Instant::now();
    let (five, seven) = criterion_5_and_7();
    let shared = start.elapsed();
    results.push((5, "star search vs exhaustive enumeration", (five, shared)));
    results.push((6, "algebra laws", timed(criterion_6)));
    results.push((7, "branch consistency and link reuse", (seven, shared)));
    results.push((8, "sweep shape", timed(|| criterion_8(&dir))));
    results.push((9, "determinism", timed(|| criterion_9(&dir))));
    results.sort_by_key(|r| r.0);

    let mut unexpected = 0;
    for (n, name, (o, t)) in &results {
        let known = KNOWN_UNATTAINABLE.iter().find(|(k, _)| k == n);
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n} {status} [{name}] {} ({:.1}s)", o.detail, t.as_secs_f64());
        if !o.pass {
            match known {
                Some((_, why)) => println!("    known unattainable: {why}"),
                None => unexpected += 1,
            }
        }
    }
    let _ = fs::remove_dir_all(&dir);
    if unexpected > 0 {
        std::process::exit(1);
    }
}
