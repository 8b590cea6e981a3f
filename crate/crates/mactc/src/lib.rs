//! Rate optimization for the half-duplex Gaussian multiple-access channel
//! with cooperating transmitters.
//!
//! Two users overhear each other and send to a common destination over
//! three time phases: each user broadcasts a cooperative message part in
//! its own phase, then both transmit together, coherently combining the
//! exchanged parts.  This crate computes
//!
//! - every decoding bound of the scheme and the resulting rate region
//!   ([`channel`], [`region`]),
//! - KKT-exact power allocations maximizing the individual or the sum
//!   rate at fixed phase durations, with scheme classification
//!   ([`individual`], [`sum`]),
//! - phase-duration searches by grid or quadratic interpolation, with
//!   precomputed lookup tables ([`phase`]),
//! - brute-force oracle verification of every optimizer ([`oracle`]),
//! - pathloss-driven scheme maps and rate profiles for network planning
//!   ([`planner`]),
//! - a file-based CLI over all of the above ([`cli`]).
//!
//! Powers are noise-normalized (unit noise variance), rates are in
//! bits/s/Hz.  All types are plain values and all solvers are pure
//! functions, safe to call concurrently; sweeps parallelize internally.
//!
//! ```
//! use mactc::channel::ChannelGains;
//! use mactc::sum::maximize_sum_fixed_alphas;
//!
//! let ch = ChannelGains::new(5.0, 5.0, 1.0, 1.0, 2.0, 2.0).unwrap();
//! let sol = maximize_sum_fixed_alphas(&ch, 0.15, 0.15).unwrap();
//! assert!(sol.sum_rate > 2.32); // beats the classical MAC
//! ```

pub mod channel;
pub mod cli;
pub mod error;
pub mod individual;
mod numerics;
pub mod oracle;
pub mod phase;
pub mod planner;
pub mod region;
pub mod sum;

pub use channel::{
    capacity, eval_constraints, eval_zeta, ChannelGains, PhaseDurations, PowerAllocation,
    RateConstraints,
};
pub use error::{Error, Result};
pub use individual::{maximize_individual_fixed_alpha, IndividualCase, IndividualSolution};
pub use oracle::{oracle_best_phases, oracle_individual, oracle_sum, OracleConfig, OracleObjective};
pub use phase::{
    grid_search_individual, grid_search_sum, interpolate_individual,
    interpolate_individual_vs_grid, interpolate_sum, interpolate_sum_vs_grid, PhaseSearchResult,
    SearchMethod,
};
pub use planner::{gains_from_topology, individual_scheme_map, sum_scheme_map, SchemeMap, Topology};
pub use region::{classical_mac_region, envelope_region, outer_bound_region, RateRegion};
pub use sum::{
    gain_vs_mac, maximize_sum_fixed_alphas, maximize_sum_symmetric, CooperationGains, SumCase,
    SumSolution,
};
