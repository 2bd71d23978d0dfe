//! The reduced operators `S₀`, `S₁`, `S` and the closed-form expansions of
//! their action on the two-vortex ansatz.
//!
//! `S₀` is the planar Ginzburg-Landau operator; `S₁` carries the axial part
//! left over by the screw-symmetric reduction with `k` helices,
//!
//! ```text
//! S₁ = ε²(∂²_ss - 2ik ∂_s - k²),      ∂_s = -x₂∂₁ + x₁∂₂.
//! ```
//!
//! Everything exists twice: as a nodewise finite-difference map on grid
//! fields, and (for `k = 2`) as closed forms exact in the radial profile,
//! used by the error-norm sweeps and the reduction integrals.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::ansatz::VortexConfig;
use crate::error::{Error, Result};
use crate::field::ComplexField2D;
use crate::interp::ProfileCurves;
use crate::params::GLParams;

fn check_h(field: &ComplexField2D) -> Result<f64> {
    let h = field.grid.h();
    if h > 0.5 {
        return Err(Error::GridTooCoarse(h));
    }
    Ok(h)
}

/// `S₀(v)± = Δv± + [A±(t±² - |v±|²) + B(t∓² - |v∓|²)]v±` with a 5-point
/// Laplacian; the boundary ring is masked out.
pub fn apply_s0(field: &ComplexField2D, params: &GLParams) -> Result<ComplexField2D> {
    let h = check_h(field)?;
    let g = field.grid;
    let h2 = h * h;
    let (a, t) = ([params.a_plus, params.a_minus], [params.t_plus, params.t_minus]);
    let b = params.b;
    let mut out = ComplexField2D::zeros(g);
    let comps = [&field.plus, &field.minus];

    let rows: Vec<usize> = (0..g.n2).collect();
    let results: Vec<Vec<(usize, [Complex64; 2], bool)>> = rows
        .par_iter()
        .map(|&j| {
            let mut row = Vec::with_capacity(g.n1);
            for i in 0..g.n1 {
                let q = g.idx(i, j);
                if i == 0 || j == 0 || i == g.n1 - 1 || j == g.n2 - 1 {
                    row.push((q, [Complex64::new(0.0, 0.0); 2], false));
                    continue;
                }
                let ids = [q, g.idx(i - 1, j), g.idx(i + 1, j), g.idx(i, j - 1), g.idx(i, j + 1)];
                if ids.iter().any(|&s| !field.mask[s]) {
                    row.push((q, [Complex64::new(0.0, 0.0); 2], false));
                    continue;
                }
                let mut val = [Complex64::new(0.0, 0.0); 2];
                let m0 = comps[0][q].norm_sqr();
                let m1 = comps[1][q].norm_sqr();
                for c in 0..2 {
                    let f = comps[c];
                    let lap = (f[ids[1]] + f[ids[2]] + f[ids[3]] + f[ids[4]] - 4.0 * f[q]) / h2;
                    let (mc, mo) = if c == 0 { (m0, m1) } else { (m1, m0) };
                    let o = 1 - c;
                    let pot = a[c] * (t[c] * t[c] - mc) + b * (t[o] * t[o] - mo);
                    val[c] = lap + pot * f[q];
                }
                row.push((q, val, true));
            }
            row
        })
        .collect();
    for row in results {
        for (q, val, ok) in row {
            out.plus[q] = val[0];
            out.minus[q] = val[1];
            out.mask[q] = ok;
        }
    }
    Ok(out)
}

/// `S₁(v)± = ε²(∂²_ss - 2ik ∂_s - k²) v±` on the grid, via the rotational
/// vector field on the Cartesian stencil. The boundary ring is masked out.
pub fn apply_s1(field: &ComplexField2D, config: &VortexConfig) -> Result<ComplexField2D> {
    let h = check_h(field)?;
    let g = field.grid;
    let eps2 = config.epsilon * config.epsilon;
    let kf = config.k as f64;
    let mut out = ComplexField2D::zeros(g);
    let comps = [&field.plus, &field.minus];

    let rows: Vec<usize> = (0..g.n2).collect();
    let results: Vec<Vec<(usize, [Complex64; 2], bool)>> = rows
        .par_iter()
        .map(|&j| {
            let mut row = Vec::with_capacity(g.n1);
            for i in 0..g.n1 {
                let q = g.idx(i, j);
                if i == 0 || j == 0 || i == g.n1 - 1 || j == g.n2 - 1 {
                    row.push((q, [Complex64::new(0.0, 0.0); 2], false));
                    continue;
                }
                let stencil = [
                    g.idx(i - 1, j - 1), g.idx(i, j - 1), g.idx(i + 1, j - 1),
                    g.idx(i - 1, j),     q,               g.idx(i + 1, j),
                    g.idx(i - 1, j + 1), g.idx(i, j + 1), g.idx(i + 1, j + 1),
                ];
                if stencil.iter().any(|&s| !field.mask[s]) {
                    row.push((q, [Complex64::new(0.0, 0.0); 2], false));
                    continue;
                }
                let x1 = g.x1(i);
                let x2 = g.x2(j);
                let mut val = [Complex64::new(0.0, 0.0); 2];
                for c in 0..2 {
                    let f = comps[c];
                    let f1 = (f[stencil[5]] - f[stencil[3]]) / (2.0 * h);
                    let f2 = (f[stencil[7]] - f[stencil[1]]) / (2.0 * h);
                    let f11 = (f[stencil[5]] - 2.0 * f[q] + f[stencil[3]]) / (h * h);
                    let f22 = (f[stencil[7]] - 2.0 * f[q] + f[stencil[1]]) / (h * h);
                    let f12 = (f[stencil[8]] - f[stencil[6]] - f[stencil[2]] + f[stencil[0]])
                        / (4.0 * h * h);
                    let ds = -x2 * f1 + x1 * f2;
                    let dss = x2 * x2 * f11 - 2.0 * x1 * x2 * f12 + x1 * x1 * f22
                        - x1 * f1
                        - x2 * f2;
                    val[c] = eps2
                        * (dss - Complex64::new(0.0, 2.0 * kf) * ds - kf * kf * f[q]);
                }
                row.push((q, val, true));
            }
            row
        })
        .collect();
    for row in results {
        for (q, val, ok) in row {
            out.plus[q] = val[0];
            out.minus[q] = val[1];
            out.mask[q] = ok;
        }
    }
    Ok(out)
}

/// `S = S₀ + S₁` (masks intersect).
pub fn apply_s(
    field: &ComplexField2D,
    params: &GLParams,
    config: &VortexConfig,
) -> Result<ComplexField2D> {
    let s0 = apply_s0(field, params)?;
    let s1 = apply_s1(field, config)?;
    let mut out = s0;
    for q in 0..out.plus.len() {
        out.plus[q] += s1.plus[q];
        out.minus[q] += s1.minus[q];
        out.mask[q] = out.mask[q] && s1.mask[q];
    }
    Ok(out)
}

/// `R± = -i S± / v_d±` on nodes where `|v_d±| > 1e-6·t±`; others masked.
pub fn compute_r(
    field_sv: &ComplexField2D,
    v_d: &ComplexField2D,
    params: &GLParams,
) -> ComplexField2D {
    let mut out = ComplexField2D::zeros(field_sv.grid);
    let thresh = [1e-6 * params.t_plus, 1e-6 * params.t_minus];
    let minus_i = Complex64::new(0.0, -1.0);
    for q in 0..out.plus.len() {
        let ok = field_sv.mask[q]
            && v_d.mask[q]
            && v_d.plus[q].norm() > thresh[0]
            && v_d.minus[q].norm() > thresh[1];
        out.mask[q] = ok;
        if ok {
            out.plus[q] = minus_i * field_sv.plus[q] / v_d.plus[q];
            out.minus[q] = minus_i * field_sv.minus[q] / v_d.minus[q];
        }
    }
    out
}

/// Chain-rule derivatives of a single radial vortex about one center,
/// component by component.
#[derive(Debug, Clone, Copy)]
pub struct VortexParts {
    pub ell: f64,
    pub theta: f64,
    /// `w`, `∂₁w`, `∂₂w`, `∂₂₂w` for (plus, minus)
    pub w: [Complex64; 2],
    pub wx1: [Complex64; 2],
    pub wx2: [Complex64; 2],
    pub wx2x2: [Complex64; 2],
}

pub fn vortex_parts(curves: &ProfileCurves, z: Complex64, center: Complex64) -> VortexParts {
    let d = z - center;
    let ell = d.norm();
    let theta = d.arg();
    let (sin, cos) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, theta);
    let w = curves.value(ell);
    let dw = curves.deriv(ell);
    let ddw = curves.second(ell);
    let mut parts = VortexParts {
        ell,
        theta,
        w: [Complex64::new(0.0, 0.0); 2],
        wx1: [Complex64::new(0.0, 0.0); 2],
        wx2: [Complex64::new(0.0, 0.0); 2],
        wx2x2: [Complex64::new(0.0, 0.0); 2],
    };
    for c in 0..2 {
        let ratio = w[c] / ell;
        parts.w[c] = w[c] * e;
        parts.wx1[c] = e * Complex64::new(dw[c] * cos, -ratio * sin);
        parts.wx2[c] = e * Complex64::new(dw[c] * sin, ratio * cos);
        let p = ddw[c] * sin * sin + (dw[c] / ell) * cos * cos - (w[c] / (ell * ell)) * cos * cos;
        let q = 2.0 * sin * cos * (dw[c] / ell - w[c] / (ell * ell));
        parts.wx2x2[c] = e * Complex64::new(p, q);
    }
    parts
}

/// The three pieces of the near-vortex expansion of `S₁(v_d)`: the large
/// symmetric term, the small kernel-aligned term, and the remainder.
#[derive(Debug, Clone, Copy)]
pub struct S1Split {
    /// `(d̂²/|ln ε|) (t±)⁻¹ w_{a,x₂x₂} w_b`
    pub lead_x2x2: [Complex64; 2],
    /// `(ε d̂/√|ln ε|) (t±)⁻¹ w_{a,x₁} w_b`
    pub lead_x1: [Complex64; 2],
    pub gamma: [Complex64; 2],
}

/// Closed-form evaluation of `v_d`, `S₀(v_d)`, `S₁(v_d)` and the error
/// `R = -i S(v_d)/v_d` for the plain two-vortex ansatz.
pub struct AnsatzAnalytic<'a> {
    pub curves: &'a ProfileCurves,
    pub config: VortexConfig,
    pub params: GLParams,
    centers: [Complex64; 2],
}

impl<'a> AnsatzAnalytic<'a> {
    pub fn new(curves: &'a ProfileCurves, config: VortexConfig, params: GLParams) -> Result<Self> {
        if config.k != 2 || config.central_antivortex || config.conjugate_minus {
            return Err(Error::InvalidParams(
                "closed forms cover the plain k = 2 ansatz only".into(),
            ));
        }
        let c = config.centers();
        Ok(Self { curves, config, params, centers: [c[0], c[1]] })
    }

    fn guard(&self, z: Complex64) -> Result<(VortexParts, VortexParts)> {
        let pa = vortex_parts(self.curves, z, self.centers[0]);
        let pb = vortex_parts(self.curves, z, self.centers[1]);
        let lo = self.curves.first_node();
        if pa.ell < lo || pb.ell < lo {
            return Err(Error::PointAtVortexCenter(pa.ell.min(pb.ell)));
        }
        Ok((pa, pb))
    }

    pub fn v_d(&self, z: Complex64) -> [Complex64; 2] {
        let pa = vortex_parts(self.curves, z, self.centers[0]);
        let pb = vortex_parts(self.curves, z, self.centers[1]);
        let t = self.curves.t();
        [pa.w[0] * pb.w[0] / t[0], pa.w[1] * pb.w[1] / t[1]]
    }

    /// `S₀(v_d)` from the two single-vortex equations: the potential deficit
    /// bracket times the product, plus twice the gradient interaction.
    pub fn s0(&self, z: Complex64) -> Result<[Complex64; 2]> {
        let (pa, pb) = self.guard(z)?;
        let p = &self.params;
        let (a, t) = ([p.a_plus, p.a_minus], [p.t_plus, p.t_minus]);
        let mut out = [Complex64::new(0.0, 0.0); 2];
        for c in 0..2 {
            let o = 1 - c;
            let def_a = [pa.w[c].norm_sqr() - t[c] * t[c], pa.w[o].norm_sqr() - t[o] * t[o]];
            let fac_b = [
                1.0 - pb.w[c].norm_sqr() / (t[c] * t[c]),
                1.0 - pb.w[o].norm_sqr() / (t[o] * t[o]),
            ];
            let bracket = a[c] * def_a[0] * fac_b[0] + p.b * def_a[1] * fac_b[1];
            let grad = 2.0 * (pa.wx1[c] * pb.wx1[c] + pa.wx2[c] * pb.wx2[c]);
            out[c] = (bracket * pa.w[c] * pb.w[c] + grad) / t[c];
        }
        Ok(out)
    }

    /// `S₁(v_d)` by the exact product-rule expansion
    ///
    /// ```text
    /// S₁± = (εd̂/√|ln ε|)(t±)⁻¹ [w_{a,x₁} w_b - w_a w_{b,x₁}]
    ///     + (d̂²/|ln ε|)(t±)⁻¹ [w_{a,x₂x₂} w_b - 2 w_{a,x₂} w_{b,x₂} + w_a w_{b,x₂x₂}]
    /// ```
    pub fn s1(&self, z: Complex64) -> Result<[Complex64; 2]> {
        let (pa, pb) = self.guard(z)?;
        Ok(self.s1_from_parts(&pa, &pb))
    }

    fn s1_from_parts(&self, pa: &VortexParts, pb: &VortexParts) -> [Complex64; 2] {
        let t = self.curves.t();
        let l = self.config.abs_ln_eps();
        let c1 = self.config.epsilon * self.config.d_hat / l.sqrt();
        let c2 = self.config.d_hat * self.config.d_hat / l;
        let mut out = [Complex64::new(0.0, 0.0); 2];
        for c in 0..2 {
            out[c] = (c1 * (pa.wx1[c] * pb.w[c] - pa.w[c] * pb.wx1[c])
                + c2 * (pa.wx2x2[c] * pb.w[c] - 2.0 * pa.wx2[c] * pb.wx2[c]
                    + pa.w[c] * pb.wx2x2[c]))
                / t[c];
        }
        out
    }

    pub fn s(&self, z: Complex64) -> Result<[Complex64; 2]> {
        let s0 = self.s0(z)?;
        let s1 = self.s1(z)?;
        Ok([s0[0] + s1[0], s0[1] + s1[1]])
    }

    /// `R = -i S(v_d)/v_d`.
    pub fn residual(&self, z: Complex64) -> Result<[Complex64; 2]> {
        let s = self.s(z)?;
        let v = self.v_d(z);
        let minus_i = Complex64::new(0.0, -1.0);
        Ok([minus_i * s[0] / v[0], minus_i * s[1] / v[1]])
    }

    /// `R₀ = -i S₀/v_d` alone.
    pub fn residual_s0(&self, z: Complex64) -> Result<[Complex64; 2]> {
        let s = self.s0(z)?;
        let v = self.v_d(z);
        let minus_i = Complex64::new(0.0, -1.0);
        Ok([minus_i * s[0] / v[0], minus_i * s[1] / v[1]])
    }

    /// `R₁ = -i S₁/v_d` alone.
    pub fn residual_s1(&self, z: Complex64) -> Result<[Complex64; 2]> {
        let s = self.s1(z)?;
        let v = self.v_d(z);
        let minus_i = Complex64::new(0.0, -1.0);
        Ok([minus_i * s[0] / v[0], minus_i * s[1] / v[1]])
    }

    /// Near-vortex decomposition of `S₁(v_d)` about center 1.
    pub fn s1_split(&self, z: Complex64) -> Result<S1Split> {
        let (pa, pb) = self.guard(z)?;
        let t = self.curves.t();
        let l = self.config.abs_ln_eps();
        let c1 = self.config.epsilon * self.config.d_hat / l.sqrt();
        let c2 = self.config.d_hat * self.config.d_hat / l;
        let mut split = S1Split {
            lead_x2x2: [Complex64::new(0.0, 0.0); 2],
            lead_x1: [Complex64::new(0.0, 0.0); 2],
            gamma: [Complex64::new(0.0, 0.0); 2],
        };
        for c in 0..2 {
            split.lead_x2x2[c] = c2 * pa.wx2x2[c] * pb.w[c] / t[c];
            split.lead_x1[c] = c1 * pa.wx1[c] * pb.w[c] / t[c];
            split.gamma[c] = (-c1 * pa.w[c] * pb.wx1[c]
                + c2 * (-2.0 * pa.wx2[c] * pb.wx2[c] + pa.w[c] * pb.wx2x2[c]))
                / t[c];
        }
        Ok(split)
    }

    /// The slow-decay closed-form part of the error; see [`r_slow_term`].
    pub fn r_slow(&self, z: Complex64) -> Complex64 {
        r_slow_term(&self.config, z)
    }
}

/// The slow-decay closed-form part of the two-vortex error, shared by both
/// components: the leading phase-interaction term of `R₀` plus the algebraic
/// `d̂` terms of `R₁`, with the radial-profile factors replaced by their
/// far-field limits.
pub fn r_slow_term(config: &VortexConfig, z: Complex64) -> Complex64 {
    let centers = config.centers();
    let da = z - centers[0];
    let db = z - centers[1];
    let (l1, th1) = (da.norm(), da.arg());
    let (l2, th2) = (db.norm(), db.arg());
    let (s1, c1) = th1.sin_cos();
    let (s2, c2) = th2.sin_cos();
    let l = config.abs_ln_eps();
    let a2 = config.d_hat * config.d_hat / l;
    let b1 = config.epsilon * config.d_hat / l.sqrt();
    let im = 2.0 * (th1 - th2).cos() / (l1 * l2) + a2 * (c1 / l1 - c2 / l2).powi(2);
    let re = b1 * (s2 / l2 - s1 / l1)
        - 2.0 * a2 * (s1 * c1 / (l1 * l1) + s2 * c2 / (l2 * l2));
    Complex64::new(re, im)
}

/// Discrete check of the orthogonality `Re ∫ w_{x₂x₂} conj(w_{x₁}) = 0` over
/// the ball `ℓ ≤ radius` around one vortex. Returns the signed integral and
/// the integral of the absolute integrand, per component.
pub fn orthogonality_defect(
    curves: &ProfileCurves,
    radius: f64,
    n_theta: usize,
) -> [(f64, f64); 2] {
    let lo = curves.first_node();
    let mut radial = vec![lo];
    let mut l = lo;
    while l < radius {
        l *= 1.02;
        radial.push(l.min(radius));
    }
    let origin = Complex64::new(0.0, 0.0);
    let mut out = [(0.0, 0.0); 2];
    for w in radial.windows(2) {
        let lm = 0.5 * (w[0] + w[1]);
        let dl = w[1] - w[0];
        for m in 0..n_theta {
            let th = (m as f64 + 0.5) * 2.0 * std::f64::consts::PI / n_theta as f64;
            let z = Complex64::from_polar(lm, th);
            let parts = vortex_parts(curves, z, origin);
            let area = lm * dl * 2.0 * std::f64::consts::PI / n_theta as f64;
            for c in 0..2 {
                let v = (parts.wx2x2[c] * parts.wx1[c].conj()).re;
                out[c].0 += v * area;
                out[c].1 += v.abs() * area;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::build_ansatz;
    use crate::field::Grid2D;
    use crate::profile::{solve_profile, RadialGrid};

    fn setup() -> (GLParams, ProfileCurves) {
        let p = GLParams::balanced(-0.3).unwrap();
        let grid = RadialGrid::geometric(1e-3, 40.0, 1.03).unwrap();
        (p, ProfileCurves::new(&solve_profile(&p, (1, 1), &grid, 1e-10).unwrap()))
    }

    #[test]
    fn s0_and_s1_on_constant_fields() {
        let (p, _) = setup();
        let cfg = VortexConfig::new(0.05, 2, 1.0).unwrap();
        let grid = Grid2D::square(5.0, 0.25);
        let f = ComplexField2D::from_fn(grid, |_| {
            [Complex64::new(p.t_plus, 0.0), Complex64::new(p.t_minus, 0.0)]
        });
        let s0 = apply_s0(&f, &p).unwrap();
        let s1 = apply_s1(&f, &cfg).unwrap();
        let s = apply_s(&f, &p, &cfg).unwrap();
        let e2 = cfg.epsilon * cfg.epsilon;
        for q in 0..grid.len() {
            if !s0.mask[q] {
                continue;
            }
            assert!(s0.plus[q].norm() < 1e-12);
            assert!((s1.plus[q] - Complex64::new(-4.0 * e2 * p.t_plus, 0.0)).norm() < 1e-10);
            assert!((s.minus[q] - Complex64::new(-4.0 * e2 * p.t_minus, 0.0)).norm() < 1e-10);
        }
        // S(0) = 0
        let zf = ComplexField2D::zeros(grid);
        let sz = apply_s(&zf, &p, &cfg).unwrap();
        assert!(sz.plus.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn s1_kills_angular_independence_up_to_k_squared() {
        let cfg = VortexConfig::new(0.05, 3, 1.0).unwrap();
        let grid = Grid2D::square(6.0, 0.1);
        let f = ComplexField2D::from_fn(grid, |z| {
            let r2 = z.norm_sqr();
            [Complex64::new(1.0 / (1.0 + r2), 0.0), Complex64::new(0.3, -0.1 / (1.0 + r2))]
        });
        let s1 = apply_s1(&f, &cfg).unwrap();
        let e2k2 = cfg.epsilon * cfg.epsilon * 9.0;
        let mut worst = 0.0f64;
        for q in 0..grid.len() {
            if s1.mask[q] {
                worst = worst.max((s1.plus[q] + e2k2 * f.plus[q]).norm());
                worst = worst.max((s1.minus[q] + e2k2 * f.minus[q]).norm());
            }
        }
        assert!(worst < 1e-4, "radial field should see only the -k² term, got {worst}");
    }

    #[test]
    fn s0_of_pure_phase_field_has_inverse_square_modulus() {
        let (p, _) = setup();
        let grid = Grid2D::square(12.0, 0.05);
        let f = ComplexField2D::from_fn(grid, |z| {
            let ph = if z.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { z / z.norm() };
            [p.t_plus * ph, p.t_minus * ph]
        });
        let s0 = apply_s0(&f, &p).unwrap();
        for &(x, y) in &[(6.0, 0.0), (4.0, 3.0), (0.0, -8.0)] {
            let i = ((x - grid.x1_min) / grid.h()).round() as usize;
            let j = ((y - grid.x2_min) / grid.h()).round() as usize;
            let q = grid.idx(i, j);
            let r2 = x * x + y * y;
            let expect = p.t_plus / r2;
            assert!(
                (s0.plus[q].norm() - expect).abs() < 5.0 * grid.h() * grid.h(),
                "at r²={r2}: {} vs {expect}",
                s0.plus[q].norm()
            );
        }
    }

    #[test]
    fn analytic_forms_match_finite_differences_at_second_order() {
        // fine radial grid so the profile-interpolation floor stays far
        // below the Cartesian truncation error being measured
        let p = GLParams::balanced(-0.3).unwrap();
        let rg = RadialGrid::geometric(5e-4, 40.0, 1.005).unwrap();
        let cur = ProfileCurves::new(&solve_profile(&p, (1, 1), &rg, 1e-10).unwrap());
        let cfg = VortexConfig::new(0.05, 2, 1.0).unwrap();
        let ana = AnsatzAnalytic::new(&cur, cfg, p).unwrap();
        let dt = cfg.d_tilde();

        // deterministic probe set away from the cores
        let probes: Vec<Complex64> = (0..60)
            .map(|m| {
                let r = dt * (0.35 + 0.05 * (m % 7) as f64);
                let th = 0.17 + 0.41 * m as f64;
                Complex64::from_polar(r, th)
            })
            .filter(|&z| {
                (z - Complex64::new(dt, 0.0)).norm() > 2.5
                    && (z + Complex64::new(dt, 0.0)).norm() > 2.5
            })
            .collect();
        assert!(probes.len() >= 50);

        let mut errs = Vec::new();
        for &h in &[0.4, 0.2, 0.1] {
            let grid = Grid2D::square(2.0 * dt + 15.0, h);
            let field = build_ansatz(&cur, &cfg, &grid);
            let s0 = apply_s0(&field, &p).unwrap();
            let s1 = apply_s1(&field, &cfg).unwrap();
            let mut worst = 0.0f64;
            for &z in &probes {
                let a0 = ana.s0(z).unwrap();
                let a1 = ana.s1(z).unwrap();
                let g0 = s0.sample(z).unwrap();
                let g1 = s1.sample(z).unwrap();
                for c in 0..2 {
                    worst = worst.max((a0[c] - g0[c]).norm());
                    worst = worst.max((a1[c] - g1[c]).norm());
                }
            }
            errs.push((h, worst));
        }
        let order = ((errs[0].1 / errs[2].1).ln()) / ((errs[0].0 / errs[2].0).ln());
        assert!(
            (1.8..=2.2).contains(&order),
            "convergence order {order}, errors {errs:?}"
        );
    }

    #[test]
    fn s1_split_resums_exactly() {
        let (p, cur) = setup();
        let cfg = VortexConfig::new(0.05, 2, 1.0).unwrap();
        let ana = AnsatzAnalytic::new(&cur, cfg, p).unwrap();
        let dt = cfg.d_tilde();
        for &z in &[
            Complex64::new(dt + 1.5, 0.7),
            Complex64::new(dt - 3.0, -2.0),
            Complex64::new(0.5 * dt, 4.0),
        ] {
            let s1 = ana.s1(z).unwrap();
            let split = ana.s1_split(z).unwrap();
            for c in 0..2 {
                let sum = split.lead_x2x2[c] + split.lead_x1[c] + split.gamma[c];
                assert!((sum - s1[c]).norm() < 1e-10 * s1[c].norm().max(1e-12));
            }
        }
    }

    #[test]
    fn analytic_symmetries() {
        let (p, cur) = setup();
        let cfg = VortexConfig::new(0.05, 2, 1.0).unwrap();
        let ana = AnsatzAnalytic::new(&cur, cfg, p).unwrap();
        let dt = cfg.d_tilde();
        // on the bisector x1 = 0 the two radial moduli agree
        let z = Complex64::new(0.0, 3.7);
        assert!(((z - Complex64::new(dt, 0.0)).norm() - (z + Complex64::new(dt, 0.0)).norm()).abs() < 1e-12);
        // Im S0 is antisymmetric across the real axis; sums on mirror pairs cancel
        for &x in &[dt + 4.0, dt - 5.0, 0.3 * dt] {
            let up = ana.s0(Complex64::new(x, 2.2)).unwrap();
            let dn = ana.s0(Complex64::new(x, -2.2)).unwrap();
            for c in 0..2 {
                assert!((up[c] - dn[c].conj()).norm() < 1e-12);
            }
        }
        // points on the real axis give real S0
        let on_axis = ana.s0(Complex64::new(dt + 6.0, 0.0)).unwrap();
        assert!(on_axis[0].im.abs() < 1e-14);
        // core guard
        assert!(matches!(
            ana.s0(Complex64::new(dt, 0.0) + Complex64::new(1e-9, 0.0)),
            Err(Error::PointAtVortexCenter(_))
        ));
    }

    #[test]
    fn compute_r_inverts_synthetic_s() {
        let (p, cur) = setup();
        let cfg = VortexConfig::new(0.05, 2, 1.0).unwrap();
        let grid = Grid2D::square(2.0 * cfg.d_tilde() + 10.0, 0.5);
        let v_d = build_ansatz(&cur, &cfg, &grid);
        let mut s = v_d.clone();
        for q in 0..s.plus.len() {
            s.plus[q] *= Complex64::new(0.0, 1.0);
            s.minus[q] *= Complex64::new(0.0, 1.0);
        }
        let r = compute_r(&s, &v_d, &p);
        let mut masked = 0usize;
        for q in 0..r.plus.len() {
            if r.mask[q] {
                assert!((r.plus[q] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            } else {
                masked += 1;
            }
        }
        // only the immediate vortex-center nodes drop out
        assert!(masked <= 8, "masked {masked}");
    }

    #[test]
    fn grid_residual_is_symmetric_under_conjugation() {
        let (p, cur) = setup();
        let cfg = VortexConfig::new(0.05, 2, 1.0).unwrap();
        let grid = Grid2D::square(2.0 * cfg.d_tilde() + 10.0, 0.25);
        let field = build_ansatz(&cur, &cfg, &grid);
        let s = apply_s(&field, &p, &cfg).unwrap();
        // S(v_d)(conj z) = conj(S(v_d)(z)) nodewise
        for j in 0..grid.n2 {
            let jm = grid.n2 - 1 - j; // mirror row
            for i in (0..grid.n1).step_by(7) {
                let q = grid.idx(i, j);
                let qm = grid.idx(i, jm);
                if s.mask[q] && s.mask[qm] {
                    assert!((s.plus[q] - s.plus[qm].conj()).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let (p, _) = setup();
        let grid = Grid2D::square(5.0, 0.7);
        let f = ComplexField2D::zeros(grid);
        assert!(matches!(apply_s0(&f, &p), Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn orthogonality_integral_vanishes() {
        let (_, cur) = setup();
        let out = orthogonality_defect(&cur, 30.0, 128);
        for c in 0..2 {
            assert!(out[c].1 > 0.1, "scale sanity");
            assert!(out[c].0.abs() <= 1e-8 * out[c].1, "defect {} vs scale {}", out[c].0, out[c].1);
        }
    }
}
