//! Global size caps. Defaults can be overridden through the `SSLAB_CAPS`
//! environment variable, e.g. `SSLAB_CAPS=states=100000,closure=500`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of distinct states visited by one exploration.
    pub states: usize,
    /// Maximum size of a state closure.
    pub closure: usize,
    /// Maximum number of factors in a composed transducer.
    pub factors: usize,
    /// Maximum number of vertices of a Schreier graph or ball.
    pub vertices: usize,
    /// Maximum number of period repetitions scanned by ray evaluation.
    pub ray_periods: usize,
    /// Maximum number of extra letters read while resolving lookahead.
    pub lookahead: usize,
    /// Depth used for unconfirmed triviality checks on level-dependent machines.
    pub triviality_depth: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            states: 2_000_000,
            closure: 10_000,
            factors: 96,
            vertices: 1 << 22,
            ray_periods: 4096,
            lookahead: 24,
            triviality_depth: 24,
        }
    }
}

impl Caps {
    pub fn parse(spec: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("bad cap `{item}`, expected key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("bad cap value in `{item}`")))?;
            match key.trim() {
                "states" => caps.states = value,
                "closure" => caps.closure = value,
                "factors" => caps.factors = value,
                "vertices" => caps.vertices = value,
                "ray_periods" => caps.ray_periods = value,
                "lookahead" => caps.lookahead = value,
                "triviality_depth" => caps.triviality_depth = value,
                other => return Err(Error::Usage(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }

    pub fn from_env() -> Result<Caps> {
        match std::env::var("SSLAB_CAPS") {
            Ok(spec) => Caps::parse(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "states={},closure={},factors={},vertices={},ray_periods={},lookahead={},triviality_depth={}",
            self.states,
            self.closure,
            self.factors,
            self.vertices,
            self.ray_periods,
            self.lookahead,
            self.triviality_depth
        )
    }
}
