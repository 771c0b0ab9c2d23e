//! Random network ensembles: Erdős–Rényi and random geometric graphs with
//! uniformly sampled node and link parameters.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::netmodel::{Network, NetworkBuilder, NodeIndex, TerminalSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphModel {
    ErdosRenyi,
    RandomGeometric,
}

impl GraphModel {
    pub fn short_name(self) -> &'static str {
        match self {
            GraphModel::ErdosRenyi => "er",
            GraphModel::RandomGeometric => "rgg",
        }
    }

    pub fn from_short_name(name: &str) -> Option<Self> {
        match name {
            "er" => Some(GraphModel::ErdosRenyi),
            "rgg" => Some(GraphModel::RandomGeometric),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub model: GraphModel,
    pub n: usize,
    pub avg_degree: f64,
    pub p_min: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub f_trunc: f64,
    pub alpha: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("need at least 3 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("average degree {avg_degree} must lie in (0, {n})")]
    AvgDegree { avg_degree: f64, n: usize },
    #[error("Erdős–Rényi fidelity scaling needs average degree above 1, got {0}")]
    SubcriticalDegree(f64),
    #[error("{name} out of range: {detail}")]
    Bounds { name: &'static str, detail: alloc::string::String },
    #[error("minimum link fidelity {0} is not above 1/2")]
    FidelityFloor(f64),
    #[error("cannot pick {wanted} terminals from {available} nodes")]
    TooManyTerminals { wanted: usize, available: usize },
    #[error("need at least 2 terminals, got {0}")]
    TooFewTerminals(usize),
}

impl GeneratorConfig {
    /// Defaults of the reference experiments: `p_min = 0.5`, `t` in `[1, 100]`,
    /// `sigma` in `[1e4, 1e5]`, `f_trunc = 0.9`, `alpha = 2`.
    pub fn new(model: GraphModel, n: usize, avg_degree: f64, seed: u64) -> Self {
        GeneratorConfig {
            model,
            n,
            avg_degree,
            p_min: 0.5,
            t_min: 1.0,
            t_max: 100.0,
            sigma_min: 1e4,
            sigma_max: 1e5,
            f_trunc: 0.9,
            alpha: 2.0,
            seed,
        }
    }

    /// Typical hop count used to scale the fidelity floor.
    pub fn d_max(&self) -> f64 {
        let n = self.n as f64;
        match self.model {
            GraphModel::ErdosRenyi => libm::log(n) / libm::log(self.avg_degree),
            GraphModel::RandomGeometric => libm::sqrt(n / libm::log(n)),
        }
    }

    /// Lower end of the link fidelity range, `f_trunc^(alpha / d_max)`.
    pub fn f_min(&self) -> f64 {
        libm::pow(self.f_trunc, self.alpha / self.d_max())
    }

    /// Connection radius of the geometric model.
    pub fn radius(&self) -> f64 {
        libm::sqrt(self.avg_degree / (core::f64::consts::PI * self.n as f64))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 3 {
            return Err(ConfigError::TooFewNodes(self.n));
        }
        if !(self.avg_degree > 0.0 && self.avg_degree < self.n as f64) {
            return Err(ConfigError::AvgDegree { avg_degree: self.avg_degree, n: self.n });
        }
        if self.model == GraphModel::ErdosRenyi && self.avg_degree <= 1.0 {
            return Err(ConfigError::SubcriticalDegree(self.avg_degree));
        }
        let bounds = |name, ok: bool, detail| if ok { Ok(()) } else { Err(ConfigError::Bounds { name, detail }) };
        bounds("p_min", self.p_min > 0.0 && self.p_min < 1.0, format!("{} not in (0, 1)", self.p_min))?;
        bounds(
            "t",
            self.t_min > 0.0 && self.t_min <= self.t_max && self.t_max.is_finite(),
            format!("need 0 < t_min <= t_max, got [{}, {}]", self.t_min, self.t_max),
        )?;
        bounds(
            "sigma",
            self.sigma_min > 0.0 && self.sigma_min <= self.sigma_max && self.sigma_max.is_finite(),
            format!("need 0 < sigma_min <= sigma_max, got [{}, {}]", self.sigma_min, self.sigma_max),
        )?;
        bounds("f_trunc", self.f_trunc > 0.0 && self.f_trunc < 1.0, format!("{} not in (0, 1)", self.f_trunc))?;
        bounds("alpha", self.alpha > 0.0 && self.alpha.is_finite(), format!("{} not positive", self.alpha))?;
        let f_min = self.f_min();
        if !(f_min > 0.5) {
            return Err(ConfigError::FidelityFloor(f_min));
        }
        Ok(())
    }
}

fn uniform_half_open(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo < hi {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

fn uniform_closed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..=hi)
}

/// Builds one random network. Node identifiers are `n0, n1, ...`.
pub fn generate(cfg: &GeneratorConfig) -> Result<Network, ConfigError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n;

    let positions: Vec<(f64, f64)> = match cfg.model {
        GraphModel::RandomGeometric => (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect(),
        GraphModel::ErdosRenyi => Vec::new(),
    };
    let mut builder = NetworkBuilder::new();
    for i in 0..n {
        let k = uniform_half_open(&mut rng, cfg.p_min, 1.0);
        let sigma = uniform_closed(&mut rng, cfg.sigma_min, cfg.sigma_max);
        builder.add_node(format!("n{i}"), k, sigma);
    }

    let f_min = cfg.f_min();
    let edge_prob = cfg.avg_degree / (n - 1) as f64;
    let r2 = cfg.radius() * cfg.radius();
    for u in 0..n {
        for v in u + 1..n {
            let linked = match cfg.model {
                GraphModel::ErdosRenyi => rng.random::<f64>() < edge_prob,
                GraphModel::RandomGeometric => {
                    let (dx, dy) = (positions[u].0 - positions[v].0, positions[u].1 - positions[v].1);
                    dx * dx + dy * dy <= r2
                }
            };
            if !linked {
                continue;
            }
            let fidelity = uniform_half_open(&mut rng, f_min, 1.0);
            let p = uniform_half_open(&mut rng, cfg.p_min, 1.0);
            let t = uniform_closed(&mut rng, cfg.t_min, cfg.t_max);
            let gamma = (4.0 * fidelity - 1.0) / 3.0;
            assert!(gamma > 1.0 / 3.0, "sampled link below entanglement threshold");
            builder.add_link(format!("n{u}"), format!("n{v}"), p, t, gamma);
        }
    }
    Ok(builder.build().expect("generated parameters are valid by construction"))
}

/// Picks `count` distinct nodes uniformly at random, returned in index order.
pub fn sample_terminals(net: &Network, count: usize, seed: u64) -> Result<TerminalSet, ConfigError> {
    let available = net.node_count();
    if count > available {
        return Err(ConfigError::TooManyTerminals { wanted: count, available });
    }
    if count < 2 {
        return Err(ConfigError::TooFewTerminals(count));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<NodeIndex> = rand::seq::index::sample(&mut rng, available, count)
        .into_iter()
        .map(NodeIndex)
        .collect();
    picked.sort();
    Ok(TerminalSet::from_indices(net, picked).expect("sampled indices are distinct and in range"))
}

/// Seed of the `index`-th instance drawn from `master` (splitmix64 finaliser).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
