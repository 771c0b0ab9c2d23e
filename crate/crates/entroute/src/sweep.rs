//! Batch experiments over random ensembles.
//!
//! A TOML config lists ensembles (model, average degree, node counts) plus
//! the instance count, terminal count and master seed:
//!
//! ```toml
//! master_seed = 1
//! instances = 20
//! terminals = 3
//!
//! [[ensemble]]
//! model = "er"
//! avg_degree = 3.0
//! n = [20, 40, 80]
//! ```
//!
//! Generator bounds (`p_min`, `t_min`, `t_max`, `sigma_min`, `sigma_max`,
//! `f_trunc`, `alpha`) may be overridden per ensemble.
//!
//! Instance `i` (counted across the whole config, in file order) uses seed
//! `derive_seed(master_seed, i)` for the network and `derive_seed(seed, 1)`
//! for its terminals.

use std::io::{self, Write};
use std::time::Instant;

use entroute_core::netgen::{derive_seed, generate, sample_terminals, ConfigError, GeneratorConfig, GraphModel};
use entroute_core::{t_star_exact, StarOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub model: String,
    pub avg_degree: f64,
    pub n: Vec<usize>,
    pub p_min: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub sigma_min: Option<f64>,
    pub sigma_max: Option<f64>,
    pub f_trunc: Option<f64>,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub master_seed: u64,
    pub instances: usize,
    pub terminals: usize,
    pub ensemble: Vec<EnsembleSpec>,
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("malformed sweep config: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("unknown model {0:?} (expected \"er\" or \"rgg\")")]
    UnknownModel(String),
    #[error("sweep config has no instances")]
    Empty,
    #[error("ensemble {model} N={n}: {source}")]
    Generator { model: String, n: usize, source: ConfigError },
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub model: &'static str,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub seed: u64,
    pub runtime_ms: f64,
    pub num_pareto_stars: usize,
    pub best_f: Option<f64>,
    pub best_xi: Option<f64>,
    pub feasible: bool,
}

/// Per `(model, N)` aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryLine {
    pub model: &'static str,
    pub n: usize,
    pub instances: usize,
    pub feasible_fraction: f64,
    pub mean_runtime_ms: f64,
    /// Over feasible instances only; 0 when none is feasible.
    pub mean_num_pareto_stars: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<SweepResult>,
    pub summary: Vec<SummaryLine>,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, SweepError> {
        Ok(toml::from_str(text)?)
    }

    /// Generator configs of every instance in order, without the seed-dependent work.
    pub fn instances(&self) -> Result<Vec<GeneratorConfig>, SweepError> {
        let mut out = Vec::new();
        for e in &self.ensemble {
            let model = GraphModel::from_short_name(&e.model).ok_or_else(|| SweepError::UnknownModel(e.model.clone()))?;
            for &n in &e.n {
                let mut cfg = GeneratorConfig::new(model, n, e.avg_degree, 0);
                let overrides = [
                    (&mut cfg.p_min, e.p_min),
                    (&mut cfg.t_min, e.t_min),
                    (&mut cfg.t_max, e.t_max),
                    (&mut cfg.sigma_min, e.sigma_min),
                    (&mut cfg.sigma_max, e.sigma_max),
                    (&mut cfg.f_trunc, e.f_trunc),
                    (&mut cfg.alpha, e.alpha),
                ];
                for (field, value) in overrides {
                    if let Some(v) = value {
                        *field = v;
                    }
                }
                cfg.validate()
                    .map_err(|source| SweepError::Generator { model: e.model.clone(), n, source })?;
                if self.terminals > n || self.terminals < 2 {
                    let source = if self.terminals < 2 {
                        ConfigError::TooFewTerminals(self.terminals)
                    } else {
                        ConfigError::TooManyTerminals { wanted: self.terminals, available: n }
                    };
                    return Err(SweepError::Generator { model: e.model.clone(), n, source });
                }
                for _ in 0..self.instances {
                    let seed = derive_seed(self.master_seed, out.len() as u64);
                    out.push(GeneratorConfig { seed, ..cfg.clone() });
                }
            }
        }
        if out.is_empty() {
            return Err(SweepError::Empty);
        }
        Ok(out)
    }
}

fn run_instance(cfg: &GeneratorConfig, terminals: usize, timing: bool) -> SweepResult {
    let net = generate(cfg).expect("config validated");
    let ts = sample_terminals(&net, terminals, derive_seed(cfg.seed, 1)).expect("terminal count validated");
    let start = Instant::now();
    let search = t_star_exact(&net, &ts, StarOptions::default());
    let elapsed = start.elapsed();
    let best_f = search.solutions.iter().map(|s| s.fidelity).reduce(f64::max);
    let best_xi = search.solutions.iter().map(|s| s.rate).reduce(f64::max);
    SweepResult {
        model: cfg.model.short_name(),
        n: cfg.n,
        t: terminals,
        seed: cfg.seed,
        runtime_ms: if timing { elapsed.as_secs_f64() * 1e3 } else { 0.0 },
        num_pareto_stars: search.solutions.len(),
        best_f,
        best_xi,
        feasible: search.is_feasible(),
    }
}

/// Runs every instance on `jobs` worker threads. Rows come back in config order.
pub fn run_sweep(cfg: &SweepConfig, jobs: usize, timing: bool) -> Result<SweepOutput, SweepError> {
    let instances = cfg.instances()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let rows: Vec<SweepResult> =
        pool.install(|| instances.par_iter().map(|g| run_instance(g, cfg.terminals, timing)).collect());
    Ok(SweepOutput { summary: summarize(&rows), rows })
}

pub fn summarize(rows: &[SweepResult]) -> Vec<SummaryLine> {
    let mut groups: Vec<((&'static str, usize), Vec<&SweepResult>)> = Vec::new();
    for r in rows {
        match groups.iter_mut().find(|(key, _)| *key == (r.model, r.n)) {
            Some((_, members)) => members.push(r),
            None => groups.push(((r.model, r.n), vec![r])),
        }
    }
    groups
        .into_iter()
        .map(|((model, n), members)| {
            let count = members.len() as f64;
            let feasible: Vec<&&SweepResult> = members.iter().filter(|r| r.feasible).collect();
            SummaryLine {
                model,
                n,
                instances: members.len(),
                feasible_fraction: feasible.len() as f64 / count,
                mean_runtime_ms: members.iter().map(|r| r.runtime_ms).sum::<f64>() / count,
                mean_num_pareto_stars: if feasible.is_empty() {
                    0.0
                } else {
                    feasible.iter().map(|r| r.num_pareto_stars as f64).sum::<f64>() / feasible.len() as f64
                },
            }
        })
        .collect()
}

/// CSV rows with a header, then one `#`-prefixed summary line per `(model, N)`.
pub fn write_csv<W: Write>(out: &SweepOutput, mut w: W) -> io::Result<()> {
    {
        let mut csv = csv::Writer::from_writer(&mut w);
        for r in &out.rows {
            csv.serialize(r)?;
        }
        csv.flush()?;
    }
    for s in &out.summary {
        writeln!(
            w,
            "# summary model={} N={} instances={} feasible_fraction={} mean_runtime_ms={} mean_num_pareto_stars={}",
            s.model, s.n, s.instances, s.feasible_fraction, s.mean_runtime_ms, s.mean_num_pareto_stars
        )?;
    }
    Ok(())
}

/// Spearman rank correlation (average ranks for ties). `None` if either side is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    assert_eq!(x.len(), y.len());
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
master_seed = 5
instances = 10
terminals = 3

[[ensemble]]
model = "er"
avg_degree = 3.0
n = [20, 40, 80]
"#;

    #[test]
    fn bookkeeping() {
        let cfg = SweepConfig::parse(SMALL).unwrap();
        let out = run_sweep(&cfg, 1, false).unwrap();
        assert_eq!(out.rows.len(), 30);
        assert_eq!(out.summary.len(), 3);
        for r in &out.rows {
            assert_eq!(r.feasible, r.num_pareto_stars >= 1);
            if r.feasible {
                assert!(r.best_f.unwrap() >= 0.5);
            } else {
                assert!(r.best_f.is_none());
            }
        }
        let mut text = Vec::new();
        write_csv(&out, &mut text).unwrap();
        let text = String::from_utf8(text).unwrap();
        assert_eq!(text.lines().next().unwrap(), "model,N,T,seed,runtime_ms,num_pareto_stars,best_f,best_xi,feasible");
        assert_eq!(text.lines().count(), 1 + 30 + 3);
    }

    #[test]
    fn parallel_rows_keep_order() {
        let cfg = SweepConfig::parse(SMALL).unwrap();
        assert_eq!(run_sweep(&cfg, 1, false).unwrap(), run_sweep(&cfg, 3, false).unwrap());
    }

    #[test]
    fn config_errors() {
        assert!(matches!(SweepConfig::parse("master_seed = 1"), Err(SweepError::Syntax(_))));
        let bad_model = SMALL.replace("\"er\"", "\"ba\"");
        assert!(matches!(SweepConfig::parse(&bad_model).unwrap().instances(), Err(SweepError::UnknownModel(_))));
        let bad_bounds = format!("{SMALL}t_min = 500.0\n");
        assert!(matches!(SweepConfig::parse(&bad_bounds).unwrap().instances(), Err(SweepError::Generator { .. })));
    }

    #[test]
    fn rank_correlation() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]), Some(1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), Some(-1.0));
        assert_eq!(spearman(&[1.0, 2.0], &[5.0, 5.0]), None);
        let rho = spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((rho - 0.8).abs() < 1e-12);
    }
}
