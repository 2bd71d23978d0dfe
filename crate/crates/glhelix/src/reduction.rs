//! The one-dimensional reduction that pins the vortex distance: projections
//! of the two error pieces onto the translation mode, and the root of their
//! balance.
//!
//! With the error split `R = R₀ + R₁`, the projections over the disk
//! `B_{R_ε}` around one vortex,
//!
//! ```text
//! 𝒯_j = Σ_± Re ∫ i conj(w±_{x₁})(z) w±(z) R_j±(z + e₁) dA,
//! ```
//!
//! behave like `𝒯₁ ≈ +π d̂ ε√|ln ε|` and `𝒯₀ ≈ -π ε√|ln ε|/d̂` for small ε,
//! so their sum crosses zero at `d̂* → 1`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::ansatz::VortexConfig;
use crate::error::{Error, Result};
use crate::interp::ProfileCurves;
use crate::kernel::TranslationMode;
use crate::params::GLParams;
use crate::residual::AnsatzAnalytic;

/// Quadrature layout for the reduction integrals: midpoint in angle and in
/// the radial cells of the profile grid (continued geometrically past its
/// truncation radius when `R_ε` exceeds it).
#[derive(Debug, Clone, Copy)]
pub struct QuadSpec {
    pub n_theta: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self { n_theta: 256 }
    }
}

fn radial_cells(curves: &ProfileCurves, r_max: f64) -> Vec<f64> {
    // reuse the geometric layout of the profile grid: ratio from its ends
    let lo = curves.first_node();
    let ratio = 1.02;
    let mut nodes = vec![lo];
    let mut l = lo;
    while l < r_max {
        l *= ratio;
        nodes.push(l.min(r_max));
    }
    nodes
}

/// The projections `(𝒯₀, 𝒯₁)` of the error pieces onto `w_{x₁}` over
/// `B_{R_ε}(e₁)`, by midpoint polar quadrature.
pub fn reduction_integrals(
    curves: &ProfileCurves,
    config: &VortexConfig,
    params: &GLParams,
    alpha0: f64,
    quad: QuadSpec,
) -> Result<(f64, f64)> {
    if quad.n_theta < 64 {
        return Err(Error::QuadratureUnderresolved(quad.n_theta));
    }
    let analytic = AnsatzAnalytic::new(curves, *config, *params)?;
    let e1 = config.centers()[0];
    let r_eps = (alpha0 / (config.epsilon * config.abs_ln_eps().sqrt()))
        .min(0.5 * config.d_tilde());
    let mode = TranslationMode::new(curves);
    let origin = Complex64::new(0.0, 0.0);
    let nodes = radial_cells(curves, r_eps);
    let dtheta = 2.0 * std::f64::consts::PI / quad.n_theta as f64;

    let sums: Vec<(f64, f64)> = (0..quad.n_theta)
        .into_par_iter()
        .map(|m| {
            let th = (m as f64 + 0.5) * dtheta;
            let dir = Complex64::from_polar(1.0, th);
            let mut t0 = 0.0;
            let mut t1 = 0.0;
            for cell in nodes.windows(2) {
                let lm = 0.5 * (cell[0] + cell[1]);
                let dl = cell[1] - cell[0];
                let z = lm * dir;
                let area = lm * dl * dtheta;
                let w = crate::ansatz::VortexEvaluator::new(curves, origin, 1).value(z);
                let wx1 = mode.dx1(z);
                let (r0, r1) = match (analytic.residual_s0(z + e1), analytic.residual_s1(z + e1))
                {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => continue, // innermost sliver below the profile grid
                };
                for c in 0..2 {
                    let weight = Complex64::new(0.0, 1.0) * wx1[c].conj() * w[c];
                    t0 += (weight * r0[c]).re * area;
                    t1 += (weight * r1[c]).re * area;
                }
            }
            (t0, t1)
        })
        .collect();
    let t0: f64 = sums.iter().map(|s| s.0).sum();
    let t1: f64 = sums.iter().map(|s| s.1).sum();
    Ok((t0, t1))
}

/// Bisection root of a continuous function on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange(lo, hi));
    }
    let mut fa = fa;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Solve the reduced equation: the `d̂` at which `𝒯₀ + 𝒯₁` crosses zero,
/// bracketed on `[0.3, 3]` and bisected to `1e-4`.
pub fn solve_dhat(
    curves: &ProfileCurves,
    params: &GLParams,
    epsilon: f64,
    alpha0: f64,
    quad: QuadSpec,
) -> Result<f64> {
    let g = |d_hat: f64| -> Result<f64> {
        let config = VortexConfig::new(epsilon, 2, d_hat)?;
        let (t0, t1) = reduction_integrals(curves, &config, params, alpha0, quad)?;
        Ok(t0 + t1)
    };
    bisect(g, 0.3, 3.0, 1e-4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{solve_profile, RadialGrid};

    fn setup() -> (GLParams, ProfileCurves) {
        let p = GLParams::balanced(-0.3).unwrap();
        let grid = RadialGrid::geometric(1e-3, 60.0, 1.02).unwrap();
        (p, ProfileCurves::new(&solve_profile(&p, (1, 1), &grid, 1e-10).unwrap()))
    }

    #[test]
    fn bisection_solves_the_leading_order_surrogate() {
        // π d̂ - π/d̂ has the root 1 exactly
        let f = |d: f64| Ok(std::f64::consts::PI * d - std::f64::consts::PI / d);
        let root = bisect(f, 0.3, 3.0, 1e-10).unwrap();
        assert!((root - 1.0).abs() < 1e-9);
        let bad = bisect(|_| Ok(1.0), 0.3, 3.0, 1e-10);
        assert!(matches!(bad, Err(Error::NoSignChange(_, _))));
    }

    #[test]
    fn quadrature_guard() {
        let (p, cur) = setup();
        let cfg = VortexConfig::new(1e-2, 2, 1.0).unwrap();
        let r = reduction_integrals(&cur, &cfg, &p, 0.5, QuadSpec { n_theta: 32 });
        assert!(matches!(r, Err(Error::QuadratureUnderresolved(32))));
    }

    #[test]
    fn projections_have_the_predicted_size_and_signs() {
        let (p, cur) = setup();
        let eps = 1e-3;
        let cfg = VortexConfig::new(eps, 2, 1.0).unwrap();
        let (t0, t1) = reduction_integrals(&cur, &cfg, &p, 0.5, QuadSpec::default()).unwrap();
        let l = cfg.abs_ln_eps();
        let scale = std::f64::consts::PI * eps * l.sqrt();
        // leading constants carry t+² + t-² = 1; the o(1) defect at finite ε
        // is the ln(R_ε)/|ln ε| ratio for 𝒯₁
        assert!((-1.2..=-0.8).contains(&(t0 / scale)), "T0/scale = {}", t0 / scale);
        assert!((0.6..=1.2).contains(&(t1 / scale)), "T1/scale = {}", t1 / scale);
    }

    #[test]
    fn dhat_doubles_and_halves_the_projections() {
        let (p, cur) = setup();
        let eps = 1e-3;
        let quad = QuadSpec::default();
        let cfg1 = VortexConfig::new(eps, 2, 1.0).unwrap();
        let cfg2 = VortexConfig::new(eps, 2, 2.0).unwrap();
        let (t0a, t1a) = reduction_integrals(&cur, &cfg1, &p, 0.5, quad).unwrap();
        let (t0b, t1b) = reduction_integrals(&cur, &cfg2, &p, 0.5, quad).unwrap();
        assert!((t1b / t1a - 2.0).abs() < 0.25, "T1 ratio {}", t1b / t1a);
        assert!((t0b / t0a - 0.5).abs() < 0.15, "T0 ratio {}", t0b / t0a);
    }

    #[test]
    fn the_balance_is_increasing_in_dhat() {
        let (p, cur) = setup();
        let eps = 3e-3;
        let quad = QuadSpec::default();
        let mut prev = f64::NEG_INFINITY;
        for &dh in &[0.3, 0.7, 1.0, 1.7, 3.0] {
            let cfg = VortexConfig::new(eps, 2, dh).unwrap();
            let (t0, t1) = reduction_integrals(&cur, &cfg, &p, 0.5, quad).unwrap();
            assert!(t0 + t1 > prev, "not increasing at d_hat = {dh}");
            prev = t0 + t1;
        }
    }
}
