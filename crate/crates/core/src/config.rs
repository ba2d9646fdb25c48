//! Runtime configuration shared by the CLI and the verification suite.

/// Band limit, quadrature resolution, and RNG seed. Environment variables
/// SPHEREVAL_KMAX, SPHEREVAL_QUAD, and SPHEREVAL_SEED override the defaults.
#[derive(Debug, Clone)]
pub struct Config {
    /// Highest harmonic degree kept in profile expansions.
    pub kmax: usize,
    /// Base point count for quadrature rules.
    pub quad_points: usize,
    /// Seed for the Monte Carlo oracles; fixed seed means reproducible runs.
    pub seed: u64,
    /// Sample count for Haar Monte Carlo checks.
    pub mc_samples: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            kmax: 32,
            quad_points: 128,
            seed: 0,
            mc_samples: 1_000_000,
        }
    }
}

impl Config {
    /// Default configuration with environment-variable overrides applied.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(v) = env_usize("SPHEREVAL_KMAX") {
            cfg.kmax = v;
        }
        if let Some(v) = env_usize("SPHEREVAL_QUAD") {
            cfg.quad_points = v;
        }
        if let Ok(s) = std::env::var("SPHEREVAL_SEED") {
            if let Ok(v) = s.parse() {
                cfg.seed = v;
            }
        }
        if let Some(v) = env_usize("SPHEREVAL_MC_SAMPLES") {
            cfg.mc_samples = v;
        }
        cfg
    }
}

fn env_usize(name: &str) -> Option<usize> {
    std::env::var(name).ok()?.parse().ok()
}
