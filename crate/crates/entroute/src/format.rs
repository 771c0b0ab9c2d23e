//! JSON network files.
//!
//! ```json
//! {"nodes": [{"id": "a", "k": 0.9, "sigma": 10000.0}, ...],
//!  "links": [{"u": "a", "v": "b", "p": 0.8, "t": 12.5, "gamma": 0.93}, ...]}
//! ```
//!
//! Floats are written in shortest round-trip form, so load(save(net)) == net.

use std::fs;
use std::path::{Path, PathBuf};

use entroute_core::netmodel::NetworkError;
use entroute_core::{Network, NetworkBuilder};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: String,
    pub k: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkRecord {
    pub u: String,
    pub v: String,
    pub p: f64,
    pub t: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub nodes: Vec<NodeRecord>,
    pub links: Vec<LinkRecord>,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed network file: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid network: {0}")]
    Invalid(#[from] NetworkError),
}

impl NetworkFile {
    pub fn from_network(net: &Network) -> Self {
        NetworkFile {
            nodes: net
                .nodes()
                .iter()
                .map(|n| NodeRecord { id: n.id.clone(), k: n.k, sigma: n.sigma })
                .collect(),
            links: net
                .links()
                .iter()
                .map(|l| LinkRecord {
                    u: net.id(l.u).to_owned(),
                    v: net.id(l.v).to_owned(),
                    p: l.p,
                    t: l.t,
                    gamma: l.gamma,
                })
                .collect(),
        }
    }

    pub fn into_network(self) -> Result<Network, NetworkError> {
        let mut b = NetworkBuilder::new();
        for n in self.nodes {
            b.add_node(n.id, n.k, n.sigma);
        }
        for l in self.links {
            b.add_link(l.u, l.v, l.p, l.t, l.gamma);
        }
        b.build()
    }
}

pub fn parse_network(text: &str) -> Result<Network, FormatError> {
    let file: NetworkFile = serde_json::from_str(text)?;
    Ok(file.into_network()?)
}

pub fn network_to_json(net: &Network) -> String {
    let mut s = serde_json::to_string_pretty(&NetworkFile::from_network(net)).expect("plain data serialises");
    s.push('\n');
    s
}

pub fn load_network(path: &Path) -> Result<Network, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_owned(), source })?;
    parse_network(&text)
}

pub fn save_network(net: &Network, path: &Path) -> std::io::Result<()> {
    fs::write(path, network_to_json(net))
}

#[cfg(test)]
mod tests {
    use super::*;
    use entroute_core::netgen::{generate, GeneratorConfig, GraphModel};

    #[test]
    fn round_trip_is_exact() {
        for model in [GraphModel::ErdosRenyi, GraphModel::RandomGeometric] {
            let net = generate(&GeneratorConfig::new(model, 30, 4.0, 9)).unwrap();
            let text = network_to_json(&net);
            let back = parse_network(&text).unwrap();
            assert_eq!(back, net);
            assert_eq!(network_to_json(&back), text);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_network("{"), Err(FormatError::Syntax(_))));
        assert!(matches!(parse_network(r#"{"nodes": [], "links": [], "extra": 1}"#), Err(FormatError::Syntax(_))));
        let below = r#"{"nodes": [{"id": "a", "k": 1, "sigma": 1e4}, {"id": "b", "k": 1, "sigma": 1e4}],
                       "links": [{"u": "a", "v": "b", "p": 1, "t": 1, "gamma": 0.2}]}"#;
        let err = parse_network(below).unwrap_err();
        assert!(err.to_string().contains("below entanglement threshold"), "{err}");
    }
}
