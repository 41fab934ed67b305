use thiserror::Error;

/// Errors surfaced by the simulators and solvers.
#[derive(Debug, Error)]
pub enum SimError {
    /// A hard resource cap was exceeded; usually a sign of a runaway
    /// horizon (the branching process grows exponentially).
    #[error("resource cap exceeded: {what} reached {value} (cap {cap})")]
    ResourceCap {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    /// A hitting level or cover condition was queried on a trajectory
    /// that stopped before reaching it.
    #[error("{what} not reached: trajectory stopped at t = {stopped_at}")]
    NotReached { what: &'static str, stopped_at: f64 },

    /// Invalid configuration value; names the offending parameter.
    #[error("invalid configuration: {key} = {value} ({reason})")]
    Config {
        key: &'static str,
        value: String,
        reason: &'static str,
    },

    /// A requested evaluation point lies outside the feasible domain.
    #[error("domain error: {what}; feasible window is [{lo}, {hi}]")]
    Domain { what: String, lo: f64, hi: f64 },
}

impl SimError {
    pub(crate) fn config(key: &'static str, value: impl ToString, reason: &'static str) -> Self {
        SimError::Config {
            key,
            value: value.to_string(),
            reason,
        }
    }
}
