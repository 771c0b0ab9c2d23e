//! Pareto-optimal distribution of GHZ entanglement over noisy quantum networks.
//!
//! The crate is `no_std` (it needs `alloc`) and holds every algorithmic piece:
//!
//! * [`netmodel`]: the immutable network graph and terminal sets,
//! * [`algebra`]: path signatures, their aggregation rules and Pareto sets,
//! * [`mosp`]: the multi-objective shortest-path solver,
//! * [`ghz`]: star and tree metrics for GHZ distribution (rate and fidelity),
//! * [`star`]: the exact T-star search,
//! * [`brute`]: exhaustive reference solvers for small networks,
//! * [`oracle`]: a small density-matrix simulator used to check the closed forms,
//! * [`netgen`]: seeded random network ensembles,
//! * [`verify`]: the randomized verification suites shared by tests and the CLI.
//!
//! File formats, reports and the command line live in the `entroute` crate.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod brute;
pub mod ghz;
pub mod mosp;
pub mod netgen;
pub mod netmodel;
pub mod oracle;
pub mod star;
pub mod verify;

pub use algebra::{BranchMetrics, Dominance, ParetoOrdering, ParetoSet, PathSignature, Sense};
pub use mosp::{shortest_paths, MospOptions, ParetoFronts};
pub use netmodel::{LinkIndex, LinkParams, Network, NetworkBuilder, NodeIndex, NodeParams, TerminalSet};
pub use star::{t_star_exact, OverlapPolicy, StarOptions, StarSearch, StarSolution};
