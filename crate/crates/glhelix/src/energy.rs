//! Renormalized interaction energy of rotating helical filaments, its
//! equilibrium polygon radii, and a gradient flow over filament positions.
//!
//! For the rotating ansatz `g_l(t) = z_l e^{it}` the per-period energy is
//!
//! ```text
//! E(z)/2π² = (|ln ε|/2) Σ|z_l|² - Σ_{j≠l} ln|z_j - z_l| + 2·Σ_l ln|z_l|·[central]
//! ```
//!
//! The regular k-gon at scaled radius `ρ√|ln ε| = √(k-1)` (or `√(k-3)` with
//! a central anti-vortex filament, which adds the sign-flipped logarithms but
//! no kinetic term) is the stationary configuration.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Rotating filament polygon at fixed `ε`.
#[derive(Debug, Clone, Copy)]
pub struct FilamentConfig {
    pub k: usize,
    /// `ρ·√|ln ε|`
    pub radius_scaled: f64,
    pub epsilon: f64,
    /// 0 or -1 (straight anti-vortex on the axis)
    pub central_degree: i32,
}

impl FilamentConfig {
    pub fn new(k: usize, radius_scaled: f64, epsilon: f64, central_degree: i32) -> Result<Self> {
        if !(radius_scaled > 0.0) {
            return Err(Error::InvalidParams("radius must be positive".into()));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParams("epsilon must lie in (0,1)".into()));
        }
        match central_degree {
            0 => {}
            -1 if k >= 4 => {}
            -1 => {
                return Err(Error::InvalidParams(format!(
                    "central anti-vortex needs k >= 4, got {k}"
                )))
            }
            _ => return Err(Error::InvalidParams("central degree must be 0 or -1".into())),
        }
        Ok(Self { k, radius_scaled, epsilon, central_degree })
    }

    pub fn abs_ln_eps(&self) -> f64 {
        -self.epsilon.ln()
    }

    /// Unscaled polygon radius `ρ`.
    pub fn radius(&self) -> f64 {
        self.radius_scaled / self.abs_ln_eps().sqrt()
    }
}

/// Closed-form per-period energy of the regular polygon at radius `ρ`:
/// `2π²[ (L k/2) ρ² - k(k-1) ln ρ - k ln k + 2k ln ρ·[central] ]` with
/// `L = |ln ε|`. The constant `Σ_{j≠l} ln(2 sin(π|j-l|/k)) = k ln k` is
/// ρ-independent but kept so values are comparable across k.
pub fn polygon_energy(k: usize, abs_ln_eps: f64, central: bool, rho: f64) -> f64 {
    let kf = k as f64;
    let two_pi_sq = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mut e = abs_ln_eps * 0.5 * kf * rho * rho - kf * (kf - 1.0) * rho.ln() - kf * kf.ln();
    if central {
        e += 2.0 * kf * rho.ln();
    }
    two_pi_sq * e
}

/// Energy of a [`FilamentConfig`] polygon.
pub fn interaction_energy(cfg: &FilamentConfig) -> f64 {
    polygon_energy(cfg.k, cfg.abs_ln_eps(), cfg.central_degree == -1, cfg.radius())
}

/// Minimize the polygon energy over the radius by golden-section search plus
/// a few Newton polishing steps on the numerical derivative. Returns the
/// unscaled radius `ρ*`.
pub fn equilibrium_radius(k: usize, epsilon: f64, central_degree: i32) -> Result<f64> {
    let central = central_degree == -1;
    if central && k < 4 {
        return Err(Error::InvalidParams("central anti-vortex needs k >= 4".into()));
    }
    let l = -epsilon.ln();
    let f = |rho: f64| polygon_energy(k, l, central, rho);
    let (mut a, mut b) = (1e-8, 40.0 / l.sqrt());
    // the energy is strictly increasing iff there is no log repulsion
    if k == 1 && !central {
        return Err(Error::NoInteriorMinimum(k));
    }
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..120 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
        if b - a < 1e-12 * b.max(1.0) {
            break;
        }
    }
    let mut rho = 0.5 * (a + b);
    if rho < 2e-8 {
        return Err(Error::NoInteriorMinimum(k));
    }
    // Newton on the centered numerical derivative
    for _ in 0..8 {
        let h = 1e-5 * rho;
        let d1 = (f(rho + h) - f(rho - h)) / (2.0 * h);
        let d2 = (f(rho + h) - 2.0 * f(rho) + f(rho - h)) / (h * h);
        if d2 <= 0.0 {
            break;
        }
        let step = d1 / d2;
        rho -= step;
        if step.abs() < 1e-14 * rho {
            break;
        }
    }
    Ok(rho)
}

/// Curvature of the radius energy at `ρ`, by central differences.
pub fn radial_curvature(k: usize, epsilon: f64, central_degree: i32, rho: f64) -> f64 {
    let l = -epsilon.ln();
    let central = central_degree == -1;
    let h = 1e-5 * rho;
    (polygon_energy(k, l, central, rho + h) - 2.0 * polygon_energy(k, l, central, rho)
        + polygon_energy(k, l, central, rho - h))
        / (h * h)
}

/// Per-period energy for general filament positions.
pub fn positions_energy(z: &[Complex64], abs_ln_eps: f64, central: bool) -> f64 {
    let two_pi_sq = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mut e = 0.0;
    for (j, &zj) in z.iter().enumerate() {
        e += 0.5 * abs_ln_eps * zj.norm_sqr();
        if central {
            e += 2.0 * zj.norm().ln();
        }
        for (l, &zl) in z.iter().enumerate() {
            if l != j {
                e -= (zj - zl).norm().ln();
            }
        }
    }
    two_pi_sq * e
}

/// Gradient of [`positions_energy`] with respect to the positions.
pub fn positions_gradient(z: &[Complex64], abs_ln_eps: f64, central: bool) -> Vec<Complex64> {
    let two_pi_sq = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
    z.iter()
        .enumerate()
        .map(|(j, &zj)| {
            let mut g = abs_ln_eps * zj;
            if central {
                g += 2.0 * zj / zj.norm_sqr();
            }
            for (l, &zl) in z.iter().enumerate() {
                if l != j {
                    g -= 2.0 * (zj - zl) / (zj - zl).norm_sqr();
                }
            }
            two_pi_sq * g
        })
        .collect()
}

/// Outcome of the gradient flow over filament positions.
#[derive(Debug, Clone)]
pub struct RelaxOutcome {
    pub positions: Vec<Complex64>,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// sampled states of the descent, first = initial, last = final
    pub trajectory: Vec<Vec<Complex64>>,
}

/// Gradient descent on the per-period energy over general positions,
/// starting from the polygon at `ρ*` displaced by `perturbation` (one offset
/// per filament). Diverges (error) on near-collision.
pub fn relax_polygon(
    k: usize,
    epsilon: f64,
    central_degree: i32,
    perturbation: &[Complex64],
) -> Result<RelaxOutcome> {
    if perturbation.len() != k {
        return Err(Error::InvalidParams(format!(
            "need {k} perturbation offsets, got {}",
            perturbation.len()
        )));
    }
    let rho = equilibrium_radius(k, epsilon, central_degree)?;
    let l = -epsilon.ln();
    let central = central_degree == -1;
    let mut z: Vec<Complex64> = (0..k)
        .map(|j| {
            Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * j as f64 / k as f64)
                + perturbation[j]
        })
        .collect();

    let min_sep = |z: &[Complex64]| {
        let mut m = f64::INFINITY;
        for j in 0..z.len() {
            for l in 0..j {
                m = m.min((z[j] - z[l]).norm());
            }
            if central {
                m = m.min(z[j].norm());
            }
        }
        m
    };

    let mut trajectory = vec![z.clone()];
    let mut energy = positions_energy(&z, l, central);
    let mut step = 0.05 / l;
    let mut iterations = 0;
    let mut gradient_norm = f64::INFINITY;
    for it in 0..200_000 {
        iterations = it;
        let sep = min_sep(&z);
        if sep < 1e-6 {
            return Err(Error::Divergence(sep));
        }
        let grad = positions_gradient(&z, l, central);
        gradient_norm = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
        if gradient_norm < 1e-12 {
            break;
        }
        // backtracking step
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<Complex64> =
                z.iter().zip(&grad).map(|(&p, &g)| p - step * g).collect();
            if min_sep(&trial) < 1e-6 {
                step *= 0.5;
                continue;
            }
            let etrial = positions_energy(&trial, l, central);
            if etrial < energy {
                z = trial;
                energy = etrial;
                step *= 1.3;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break; // energy differences below roundoff; polish on the gradient
        }
        if it % 200 == 0 {
            trajectory.push(z.clone());
        }
    }
    // near the minimum the energy is flat to machine precision while the
    // gradient is still resolvable; plain contraction steps finish the job
    let mut eta = 0.02 / l;
    for _ in 0..2000 {
        let grad = positions_gradient(&z, l, central);
        gradient_norm = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
        if gradient_norm < 1e-13 {
            break;
        }
        let trial: Vec<Complex64> = z.iter().zip(&grad).map(|(&p, &g)| p - eta * g).collect();
        if min_sep(&trial) < 1e-6 {
            return Err(Error::Divergence(min_sep(&trial)));
        }
        let gtrial = positions_gradient(&trial, l, central);
        let gn: f64 = gtrial.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
        if gn < gradient_norm {
            z = trial;
        } else {
            eta *= 0.5;
            if eta < 1e-18 {
                break;
            }
        }
    }
    trajectory.push(z.clone());
    Ok(RelaxOutcome { positions: z, iterations, gradient_norm, trajectory })
}

/// Rotation angle best aligning `a` onto `b` in least squares.
pub fn align_rotation(a: &[Complex64], b: &[Complex64]) -> f64 {
    let s: Complex64 = a.iter().zip(b).map(|(&x, &y)| y * x.conj()).sum();
    s.arg()
}
