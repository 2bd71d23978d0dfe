//! Multi-vortex product fields on 2D grids.
//!
//! The approximate solution places `k` copies of the radial vortex at the
//! scaled polygon vertices `e_j = d̃·exp(2πi(j-1)/k)` and normalizes the
//! product so the modulus tends to `t±` at infinity. An optional central
//! anti-vortex factor (conjugate phase) sits at the origin.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ComplexField2D, Grid2D};
use crate::interp::ProfileCurves;
use crate::params::GLParams;

/// Geometry of a helical vortex configuration at fixed `ε`.
#[derive(Debug, Clone, Copy)]
pub struct VortexConfig {
    pub epsilon: f64,
    pub k: usize,
    pub d_hat: f64,
    pub central_antivortex: bool,
    pub conjugate_minus: bool,
}

impl VortexConfig {
    pub fn new(epsilon: f64, k: usize, d_hat: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.2) {
            return Err(Error::InvalidParams(format!(
                "epsilon {epsilon} outside (0, 0.2)"
            )));
        }
        if k < 1 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        if !(d_hat > 0.0) {
            return Err(Error::InvalidParams("d_hat must be positive".into()));
        }
        Ok(Self { epsilon, k, d_hat, central_antivortex: false, conjugate_minus: false })
    }

    pub fn with_central_antivortex(mut self) -> Result<Self> {
        if self.k < 4 {
            return Err(Error::InvalidParams(format!(
                "central anti-vortex needs k >= 4, got {}",
                self.k
            )));
        }
        self.central_antivortex = true;
        Ok(self)
    }

    pub fn with_conjugate_minus(mut self) -> Self {
        self.conjugate_minus = true;
        self
    }

    pub fn abs_ln_eps(&self) -> f64 {
        -self.epsilon.ln()
    }

    /// `d̃ = d̂ / (ε·√|ln ε|)`, the unscaled polygon radius.
    pub fn d_tilde(&self) -> f64 {
        self.d_hat / (self.epsilon * self.abs_ln_eps().sqrt())
    }

    pub fn centers(&self) -> Vec<Complex64> {
        let d = self.d_tilde();
        (0..self.k)
            .map(|j| Complex64::from_polar(d, 2.0 * std::f64::consts::PI * j as f64 / self.k as f64))
            .collect()
    }

    /// Local polar coordinates `(ℓ_j, θ_j)` about center `j` (0-based).
    pub fn local_polar(&self, z: Complex64, j: usize) -> (f64, f64) {
        let w = z - self.centers()[j];
        (w.norm(), w.arg())
    }

    /// Default square grid: half-width `2·d̃ + margin`, spacing at most `h`.
    pub fn default_grid(&self, margin: f64, h: f64) -> Grid2D {
        Grid2D::square(2.0 * self.d_tilde() + margin, h)
    }

    /// Centers that are not strictly interior to `grid` (empty when fine).
    pub fn centers_outside(&self, grid: &Grid2D) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .centers()
            .iter()
            .enumerate()
            .filter(|(_, &c)| !grid.is_interior(c))
            .map(|(j, _)| j)
            .collect();
        if self.central_antivortex && !grid.is_interior(Complex64::new(0.0, 0.0)) {
            out.push(self.k);
        }
        out
    }
}

/// Evaluator of a single radial vortex `(W+(ℓ)e^{i·sign·θ}, W-(ℓ)e^{i·sign·θ})`.
///
/// Inside the stored grid the radial part is the cubic interpolant; beyond it
/// the closed-form tail takes over.
pub struct VortexEvaluator<'a> {
    pub curves: &'a ProfileCurves,
    pub center: Complex64,
    pub sign: i32,
}

impl<'a> VortexEvaluator<'a> {
    pub fn new(curves: &'a ProfileCurves, center: Complex64, sign: i32) -> Self {
        Self { curves, center, sign }
    }

    pub fn value(&self, z: Complex64) -> [Complex64; 2] {
        let d = z - self.center;
        let ell = d.norm();
        let w = self.curves.value(ell);
        if ell == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        let phase = d / ell;
        let phase = if self.sign >= 0 { phase } else { phase.conj() };
        [w[0] * phase, w[1] * phase]
    }
}

/// Evaluator of the normalized `k`-vortex product (with optional central
/// anti-vortex and optional conjugation of the minus-component factors).
pub struct AnsatzEvaluator<'a> {
    curves: &'a ProfileCurves,
    pub config: VortexConfig,
    centers: Vec<Complex64>,
}

impl<'a> AnsatzEvaluator<'a> {
    pub fn new(curves: &'a ProfileCurves, config: VortexConfig) -> Self {
        Self { curves, config, centers: config.centers() }
    }

    pub fn value(&self, z: Complex64) -> [Complex64; 2] {
        let t = self.curves.t();
        let n_factors = self.centers.len() + usize::from(self.config.central_antivortex);
        let mut out = [
            Complex64::new(t[0].powi(1 - n_factors as i32), 0.0),
            Complex64::new(t[1].powi(1 - n_factors as i32), 0.0),
        ];
        let mut mul = |c: Complex64, conj_all: bool| {
            let d = z - c;
            let ell = d.norm();
            let w = self.curves.value(ell);
            let phase = if ell == 0.0 { Complex64::new(0.0, 0.0) } else { d / ell };
            let phase = if conj_all { phase.conj() } else { phase };
            out[0] *= w[0] * phase;
            out[1] *= w[1] * if self.config.conjugate_minus { phase.conj() } else { phase };
        };
        for &c in &self.centers {
            mul(c, false);
        }
        if self.config.central_antivortex {
            mul(Complex64::new(0.0, 0.0), true);
        }
        out
    }
}

/// Sample the product ansatz on a grid. Callers that need a warning when a
/// center is not interior should consult [`VortexConfig::centers_outside`].
pub fn build_ansatz(
    curves: &ProfileCurves,
    config: &VortexConfig,
    grid: &Grid2D,
) -> ComplexField2D {
    let ev = AnsatzEvaluator::new(curves, *config);
    ComplexField2D::from_fn(*grid, |z| ev.value(z))
}

/// Sup over grid-boundary nodes of `| |v|² - (t+² + t-²) |`.
pub fn modulus_limit_check(field: &ComplexField2D, params: &GLParams) -> f64 {
    let target = params.t_plus * params.t_plus + params.t_minus * params.t_minus;
    let g = &field.grid;
    let mut sup = 0.0f64;
    let mut look = |i: usize, j: usize| {
        let q = g.idx(i, j);
        let m = field.plus[q].norm_sqr() + field.minus[q].norm_sqr();
        sup = sup.max((m - target).abs());
    };
    for i in 0..g.n1 {
        look(i, 0);
        look(i, g.n2 - 1);
    }
    for j in 0..g.n2 {
        look(0, j);
        look(g.n1 - 1, j);
    }
    sup
}

/// Winding number of `f` around a circle, by summed phase increments.
/// Returns the raw (un-rounded) winding and the nearest integer.
pub fn winding_number(
    f: impl Fn(Complex64) -> Complex64,
    center: Complex64,
    radius: f64,
    n_samples: usize,
) -> (f64, i64) {
    let mut total = 0.0;
    let mut prev = f(center + Complex64::new(radius, 0.0));
    for m in 1..=n_samples {
        let ang = 2.0 * std::f64::consts::PI * m as f64 / n_samples as f64;
        let cur = f(center + Complex64::from_polar(radius, ang));
        total += (cur / prev).arg();
        prev = cur;
    }
    let w = total / (2.0 * std::f64::consts::PI);
    (w, w.round() as i64)
}
