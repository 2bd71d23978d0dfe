//! Flat `key = value` run configuration with `#` comments.
//!
//! Every physical and numerical parameter of the pipeline is settable; the
//! resolved values (defaults included) go into the run manifest so
//! experiments diff cleanly.

use std::path::Path;

use crate::ansatz::VortexConfig;
use crate::error::{Error, Result};
use crate::norms::NormParams;
use crate::params::GLParams;
use crate::profile::RadialGrid;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub a_plus: f64,
    pub a_minus: f64,
    pub b: f64,
    pub t_plus: f64,
    pub t_minus: f64,
    pub epsilon: f64,
    pub eps_list: Vec<f64>,
    pub k: usize,
    pub d_hat: f64,
    pub central: bool,
    pub conjugate_minus: bool,
    pub alpha: f64,
    pub sigma: f64,
    pub alpha0: f64,
    pub holder_region: f64,
    pub grid_h: f64,
    pub grid_margin: f64,
    pub radial_first: f64,
    pub radial_ratio: f64,
    pub radial_l_max: f64,
    pub newton_tol: f64,
    pub seed: u64,
    pub n_theta: usize,
    pub k_max_modes: usize,
    pub helix_samples: usize,
    pub slice_t: f64,
    pub dump_stride: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            a_plus: 1.0,
            a_minus: 1.0,
            b: -0.3,
            t_plus: std::f64::consts::FRAC_1_SQRT_2,
            t_minus: std::f64::consts::FRAC_1_SQRT_2,
            epsilon: 1e-2,
            eps_list: vec![1e-2, 3e-3, 1e-3],
            k: 2,
            d_hat: 1.0,
            central: false,
            conjugate_minus: false,
            alpha: 0.3,
            sigma: 0.5,
            alpha0: 0.5,
            holder_region: 2.0,
            grid_h: 0.25,
            grid_margin: 20.0,
            radial_first: 1e-3,
            radial_ratio: 1.02,
            radial_l_max: 60.0,
            newton_tol: 1e-10,
            seed: 7,
            n_theta: 256,
            k_max_modes: 16,
            helix_samples: 64,
            slice_t: 0.0,
            dump_stride: 4,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.trim().parse().map_err(|_| Error::ConfigParse {
        line,
        msg: format!("cannot parse value '{value}' for key '{key}'"),
    })
}

fn parse_bool(key: &str, value: &str, line: usize) -> Result<bool> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::ConfigParse {
            line,
            msg: format!("cannot parse boolean '{other}' for key '{key}'"),
        }),
    }
}

impl RunConfig {
    pub fn parse_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let Some((key, value)) = stripped.split_once('=') else {
                return Err(Error::ConfigParse {
                    line,
                    msg: format!("expected 'key = value', got '{stripped}'"),
                });
            };
            cfg.set(key.trim(), value.trim(), line)?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        match key {
            "a_plus" => self.a_plus = parse(key, value, line)?,
            "a_minus" => self.a_minus = parse(key, value, line)?,
            "b" => self.b = parse(key, value, line)?,
            "t_plus" => self.t_plus = parse(key, value, line)?,
            "t_minus" => self.t_minus = parse(key, value, line)?,
            "epsilon" => self.epsilon = parse(key, value, line)?,
            "eps_list" => {
                let mut list = Vec::new();
                for part in value.split(',') {
                    list.push(parse(key, part, line)?);
                }
                self.eps_list = list;
            }
            "k" => self.k = parse(key, value, line)?,
            "d_hat" => self.d_hat = parse(key, value, line)?,
            "central" => self.central = parse_bool(key, value, line)?,
            "conjugate_minus" => self.conjugate_minus = parse_bool(key, value, line)?,
            "alpha" => self.alpha = parse(key, value, line)?,
            "sigma" => self.sigma = parse(key, value, line)?,
            "alpha0" => self.alpha0 = parse(key, value, line)?,
            "holder_region" => self.holder_region = parse(key, value, line)?,
            "grid_h" => self.grid_h = parse(key, value, line)?,
            "grid_margin" => self.grid_margin = parse(key, value, line)?,
            "radial_first" => self.radial_first = parse(key, value, line)?,
            "radial_ratio" => self.radial_ratio = parse(key, value, line)?,
            "radial_l_max" => self.radial_l_max = parse(key, value, line)?,
            "newton_tol" => self.newton_tol = parse(key, value, line)?,
            "seed" => self.seed = parse(key, value, line)?,
            "n_theta" => self.n_theta = parse(key, value, line)?,
            "k_max_modes" => self.k_max_modes = parse(key, value, line)?,
            "helix_samples" => self.helix_samples = parse(key, value, line)?,
            "slice_t" => self.slice_t = parse(key, value, line)?,
            "dump_stride" => self.dump_stride = parse(key, value, line)?,
            other => {
                return Err(Error::ConfigParse {
                    line,
                    msg: format!("unknown key '{other}'"),
                })
            }
        }
        Ok(())
    }

    /// Sorted `key = value` lines of the resolved configuration.
    pub fn manifest_lines(&self) -> Vec<String> {
        let eps_list =
            self.eps_list.iter().map(|e| format!("{e:e}")).collect::<Vec<_>>().join(",");
        let mut lines = vec![
            format!("a_minus = {}", self.a_minus),
            format!("a_plus = {}", self.a_plus),
            format!("alpha = {}", self.alpha),
            format!("alpha0 = {}", self.alpha0),
            format!("b = {}", self.b),
            format!("central = {}", self.central),
            format!("conjugate_minus = {}", self.conjugate_minus),
            format!("d_hat = {}", self.d_hat),
            format!("dump_stride = {}", self.dump_stride),
            format!("eps_list = {eps_list}"),
            format!("epsilon = {:e}", self.epsilon),
            format!("grid_h = {}", self.grid_h),
            format!("grid_margin = {}", self.grid_margin),
            format!("helix_samples = {}", self.helix_samples),
            format!("holder_region = {}", self.holder_region),
            format!("k = {}", self.k),
            format!("k_max_modes = {}", self.k_max_modes),
            format!("n_theta = {}", self.n_theta),
            format!("newton_tol = {:e}", self.newton_tol),
            format!("radial_first = {:e}", self.radial_first),
            format!("radial_l_max = {}", self.radial_l_max),
            format!("radial_ratio = {}", self.radial_ratio),
            format!("seed = {}", self.seed),
            format!("sigma = {}", self.sigma),
            format!("slice_t = {}", self.slice_t),
            format!("t_minus = {}", self.t_minus),
            format!("t_plus = {}", self.t_plus),
        ];
        lines.sort();
        lines
    }

    pub fn gl_params(&self) -> Result<GLParams> {
        GLParams::new(self.a_plus, self.a_minus, self.b, self.t_plus, self.t_minus)
    }

    pub fn vortex_config(&self) -> Result<VortexConfig> {
        self.vortex_config_at(self.epsilon, self.d_hat)
    }

    pub fn vortex_config_at(&self, epsilon: f64, d_hat: f64) -> Result<VortexConfig> {
        let mut cfg = VortexConfig::new(epsilon, self.k, d_hat)?;
        if self.central {
            cfg = cfg.with_central_antivortex()?;
        }
        if self.conjugate_minus {
            cfg = cfg.with_conjugate_minus();
        }
        Ok(cfg)
    }

    pub fn radial_grid(&self) -> Result<RadialGrid> {
        RadialGrid::geometric(self.radial_first, self.radial_l_max, self.radial_ratio)
    }

    pub fn norm_params(&self, config: &VortexConfig) -> Result<NormParams> {
        let mut np = NormParams::new(self.alpha, self.sigma, self.alpha0, config)?;
        np.holder_region = self.holder_region;
        Ok(np)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_values_comments_and_lists() {
        let text = "
# a comment
b = -0.25
eps_list = 1e-2, 3e-3,1e-3  # trailing comment
k = 3
central = false
";
        let cfg = RunConfig::parse_str(text).unwrap();
        assert_eq!(cfg.b, -0.25);
        assert_eq!(cfg.eps_list, vec![1e-2, 3e-3, 1e-3]);
        assert_eq!(cfg.k, 3);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = RunConfig::parse_str("bogus_key = 1\n").unwrap_err();
        match err {
            Error::ConfigParse { line, msg } => {
                assert_eq!(line, 1);
                assert!(msg.contains("bogus_key"), "{msg}");
            }
            other => panic!("expected ConfigParse, got {other:?}"),
        }
    }

    #[test]
    fn manifest_is_sorted_and_complete() {
        let cfg = RunConfig::default();
        let lines = cfg.manifest_lines();
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
        assert_eq!(lines.len(), 27);
    }
}
