//! Angular Fourier analysis of error fields around the vortex centers, the
//! odd/even mode splitting by reflection, and the closed-form slow-decay
//! split of the odd part.
//!
//! Fields antisymmetric under conjugation (`H(z̄) = -conj(H(z))`) expand
//! locally as `Σ_k H¹_k(ℓ) sin(kθ) + i H²_k(ℓ) cos(kθ)` with real pairs
//! `(H¹, H²)`; odd `k` carries the reduction information and is extracted
//! pointwise by the reflection average across the vertical line through each
//! center.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::ansatz::VortexConfig;
use crate::error::{Error, Result};
use crate::field::ComplexField2D;
use crate::norms::{FieldEval, NormParams};
use crate::residual::r_slow_term;

/// Smooth cutoff: 1 on `[0,1]`, quintic C² bridge on `[1,2]`, 0 beyond.
pub fn eta1(x: f64) -> f64 {
    if x <= 1.0 {
        1.0
    } else if x >= 2.0 {
        0.0
    } else {
        let u = x - 1.0;
        1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
    }
}

/// Reflection across the vertical line through `center`.
pub fn reflect(center: Complex64, z: Complex64) -> Complex64 {
    Complex64::new(2.0 * center.re - z.re, z.im)
}

/// Complex angular Fourier coefficients on circles around one center, with
/// the derived real mode pairs.
#[derive(Debug, Clone)]
pub struct ModeTable {
    pub center_index: usize,
    pub center: Complex64,
    pub radii: Vec<f64>,
    pub n_theta: usize,
    pub k_max: usize,
    /// raw coefficients `c_m`, `[component][radius][m]`, `m = 0..n_theta`
    pub coeffs: [Vec<Vec<Complex64>>; 2],
    /// `H¹_k` pairs, `[component][radius][k]`, `k = 0..=k_max`
    pub h1: [Vec<Vec<f64>>; 2],
    /// `H²_k` pairs
    pub h2: [Vec<Vec<f64>>; 2],
}

impl ModeTable {
    /// Evaluate the truncated Fourier series back at an angle.
    pub fn reconstruct(&self, comp: usize, r_idx: usize, theta: f64) -> Complex64 {
        let n = self.n_theta as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &c) in self.coeffs[comp][r_idx].iter().enumerate() {
            let freq = if (m as i64) <= n / 2 { m as i64 } else { m as i64 - n };
            acc += c * Complex64::from_polar(1.0, freq as f64 * theta);
        }
        acc
    }

    /// Mean squared coefficient magnitude of angular frequency `±k` over all
    /// radii and components.
    pub fn mode_energy(&self, k: usize) -> f64 {
        let n = self.n_theta;
        let mut acc = 0.0;
        let mut cnt = 0usize;
        for comp in 0..2 {
            for row in &self.coeffs[comp] {
                acc += row[k].norm_sqr();
                if k > 0 && k < n {
                    acc += row[n - k].norm_sqr();
                }
                cnt += 1;
            }
        }
        acc / cnt as f64
    }

    /// Total energies in even and odd modes up to `k_max`.
    pub fn even_odd_energy(&self) -> (f64, f64) {
        let mut even = 0.0;
        let mut odd = 0.0;
        for k in 0..=self.k_max {
            if k % 2 == 0 {
                even += self.mode_energy(k);
            } else {
                odd += self.mode_energy(k);
            }
        }
        (even, odd)
    }
}

/// Sample `h` on circles of the given radii about `center` and take angular
/// FFTs. Needs every circle point to evaluate; `n_θ = max(4·k_max, 64)`
/// rounded up to a power of two.
pub fn angular_modes(
    h: &impl FieldEval,
    center: Complex64,
    center_index: usize,
    radii: &[f64],
    k_max: usize,
) -> Result<ModeTable> {
    let n_theta = (4 * k_max).max(64).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n_theta);
    let mut coeffs: [Vec<Vec<Complex64>>; 2] = [Vec::new(), Vec::new()];
    let mut h1: [Vec<Vec<f64>>; 2] = [Vec::new(), Vec::new()];
    let mut h2: [Vec<Vec<f64>>; 2] = [Vec::new(), Vec::new()];
    for &r in radii {
        let mut rows: [Vec<Complex64>; 2] =
            [Vec::with_capacity(n_theta), Vec::with_capacity(n_theta)];
        for m in 0..n_theta {
            let th = 2.0 * std::f64::consts::PI * m as f64 / n_theta as f64;
            let z = center + Complex64::from_polar(r, th);
            let v = h.eval(z).ok_or(Error::CircleOutsideGrid(r))?;
            rows[0].push(v[0]);
            rows[1].push(v[1]);
        }
        for comp in 0..2 {
            fft.process(&mut rows[comp]);
            let scale = 1.0 / n_theta as f64;
            let cs: Vec<Complex64> = rows[comp].iter().map(|c| c * scale).collect();
            let mut p1 = Vec::with_capacity(k_max + 1);
            let mut p2 = Vec::with_capacity(k_max + 1);
            p1.push(0.0);
            p2.push(cs[0].im);
            for k in 1..=k_max {
                let ck = cs[k];
                let cmk = cs[n_theta - k];
                p1.push(cmk.im - ck.im);
                p2.push(ck.im + cmk.im);
            }
            coeffs[comp].push(cs);
            h1[comp].push(p1);
            h2[comp].push(p2);
        }
    }
    Ok(ModeTable { center_index, center, radii: radii.to_vec(), n_theta, k_max, coeffs, h1, h2 })
}

/// Pointwise odd part `Σ_j η_{j,R_ε}(z) · ½[H(z) + conj(H(𝓡_j z))]`.
pub struct OddPartEval<'a, F: FieldEval> {
    pub h: &'a F,
    pub centers: Vec<Complex64>,
    pub r_eps: f64,
}

impl<'a, F: FieldEval> OddPartEval<'a, F> {
    pub fn new(h: &'a F, config: &VortexConfig, normp: &NormParams) -> Self {
        Self { h, centers: config.centers(), r_eps: normp.r_eps }
    }
}

impl<F: FieldEval> FieldEval for OddPartEval<'_, F> {
    fn eval(&self, z: Complex64) -> Option<[Complex64; 2]> {
        let mut acc = [Complex64::new(0.0, 0.0); 2];
        let mut any = false;
        for &c in &self.centers {
            let cut = eta1((z - c).norm() / self.r_eps);
            if cut == 0.0 {
                continue;
            }
            any = true;
            let here = self.h.eval(z)?;
            let there = self.h.eval(reflect(c, z))?;
            for comp in 0..2 {
                acc[comp] += cut * 0.5 * (here[comp] + there[comp].conj());
            }
        }
        if !any {
            return Some([Complex64::new(0.0, 0.0); 2]);
        }
        Some(acc)
    }
}

/// Split a grid field into its windowed odd part and the even remainder
/// `H_e = H - H_o`. Every node within `2R_ε` of a center must reflect into
/// the grid.
pub fn odd_even_split(
    h: &ComplexField2D,
    config: &VortexConfig,
    normp: &NormParams,
) -> Result<(ComplexField2D, ComplexField2D)> {
    let g = h.grid;
    let centers = config.centers();
    let mut odd = ComplexField2D::zeros(g);
    let mut even = h.clone();
    for j in 0..g.n2 {
        for i in 0..g.n1 {
            let q = g.idx(i, j);
            if !h.mask[q] {
                odd.mask[q] = false;
                even.mask[q] = false;
                continue;
            }
            let z = g.point(i, j);
            let mut acc = [Complex64::new(0.0, 0.0); 2];
            for &c in &centers {
                let cut = eta1((z - c).norm() / normp.r_eps);
                if cut == 0.0 {
                    continue;
                }
                let rz = reflect(c, z);
                let there = h.sample(rz).ok_or_else(|| {
                    Error::ReflectionOutsideGrid(format!("{rz}"))
                })?;
                let here = [h.plus[q], h.minus[q]];
                for comp in 0..2 {
                    acc[comp] += cut * 0.5 * (here[comp] + there[comp].conj());
                }
            }
            odd.plus[q] = acc[0];
            odd.minus[q] = acc[1];
            even.plus[q] -= acc[0];
            even.minus[q] -= acc[1];
        }
    }
    Ok((odd, even))
}

/// Windowed odd projection of the closed-form slow-decay terms,
/// `R_o^α(z) = Σ_j η_{j,R_ε}(z) · ½[r_slow(z) + conj(r_slow(𝓡_j z))]`,
/// identical in both components.
pub fn r_o_alpha(config: &VortexConfig, normp: &NormParams, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in &config.centers() {
        let cut = eta1((z - c).norm() / normp.r_eps);
        if cut == 0.0 {
            continue;
        }
        let here = r_slow_term(config, z);
        let there = r_slow_term(config, reflect(c, z));
        acc += cut * 0.5 * (here + there.conj());
    }
    acc
}

/// Split the odd part of the error into the closed-form slow-decay piece and
/// the remainder: `R_o = R_o^α + R_o^β` nodewise (two-vortex configuration).
pub fn split_r_alpha_beta(
    r_o: &ComplexField2D,
    config: &VortexConfig,
    normp: &NormParams,
) -> (ComplexField2D, ComplexField2D) {
    let g = r_o.grid;
    let mut alpha = ComplexField2D::zeros(g);
    let mut beta = r_o.clone();
    for j in 0..g.n2 {
        for i in 0..g.n1 {
            let q = g.idx(i, j);
            let a = r_o_alpha(config, normp, g.point(i, j));
            alpha.plus[q] = a;
            alpha.minus[q] = a;
            alpha.mask[q] = r_o.mask[q];
            beta.plus[q] -= a;
            beta.minus[q] -= a;
        }
    }
    (alpha, beta)
}
