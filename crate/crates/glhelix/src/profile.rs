//! Radial vortex-profile solver for the coupled system.
//!
//! Solves the singular two-point boundary value problem
//!
//! ```text
//! -W±'' - W±'/ℓ + n±² W±/ℓ² + [A±(W±² - t±²) + B(W∓² - t∓²)] W± = 0
//! ```
//!
//! on a geometrically stretched grid with a damped Newton iteration. The
//! inner boundary enforces the linear behaviour `W± ~ s±·ℓ` through the first
//! two nodes; the outer boundary pins the closed-form tail value
//! `W±(L) = t± - c±/(2L²)`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::linalg::BlockTridiag;
use crate::params::GLParams;

/// Strictly increasing radii `ℓ ∈ (0, L]` with geometric stretching.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    ratio: f64,
}

impl RadialGrid {
    /// Geometric grid from `first` to `l_max` with node ratio `ratio`.
    pub fn geometric(first: f64, l_max: f64, ratio: f64) -> Result<Self> {
        if !(first > 0.0) || !(ratio > 1.0) {
            return Err(Error::InvalidParams(format!(
                "radial grid needs first > 0 and ratio > 1, got {first}, {ratio}"
            )));
        }
        if !(l_max >= 30.0) {
            return Err(Error::InvalidParams(format!(
                "domain truncation {l_max} below 30"
            )));
        }
        let n = ((l_max / first).ln() / ratio.ln()).ceil() as usize;
        let mut nodes: Vec<f64> = (0..=n).map(|i| first * ratio.powi(i as i32)).collect();
        let scale = l_max / *nodes.last().unwrap();
        for x in &mut nodes {
            *x *= scale;
        }
        *nodes.last_mut().unwrap() = l_max;
        Ok(Self { nodes, ratio })
    }

    pub fn default_grid() -> Self {
        Self::geometric(1e-3, 60.0, 1.02).unwrap()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn l_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Grid with a geometric midpoint inserted in every interval.
    pub fn refined(&self) -> RadialGrid {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len());
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push((w[0] * w[1]).sqrt());
        }
        nodes.push(*self.nodes.last().unwrap());
        RadialGrid { nodes, ratio: self.ratio.sqrt() }
    }
}

/// Sampled profile pair `(W+, W-)` with derivatives on a radial grid.
#[derive(Debug, Clone)]
pub struct ProfilePair {
    pub grid: RadialGrid,
    pub w_plus: Vec<f64>,
    pub w_minus: Vec<f64>,
    pub dw_plus: Vec<f64>,
    pub dw_minus: Vec<f64>,
    pub params: GLParams,
    pub degree_pair: (i32, i32),
}

/// Non-uniform central-difference weights for (W'', W') at an interior node.
fn stencil(hm: f64, hp: f64) -> ([f64; 3], [f64; 3]) {
    let d2 = [
        2.0 / (hm * (hm + hp)),
        -2.0 / (hm * hp),
        2.0 / (hp * (hm + hp)),
    ];
    let d1 = [
        -hp / (hm * (hm + hp)),
        (hp - hm) / (hm * hp),
        hm / (hp * (hm + hp)),
    ];
    (d2, d1)
}

struct System<'a> {
    params: &'a GLParams,
    degree: (i32, i32),
    nodes: &'a [f64],
    outer_bc: [f64; 2],
    /// coefficients of the inner rows `a·W₀ + b·W₁ = 0` per component
    inner_bc: [[f64; 2]; 2],
}

impl<'a> System<'a> {
    fn new(params: &'a GLParams, degree: (i32, i32), nodes: &'a [f64]) -> Self {
        let (cp, cm) = params.asymptotic_c_for_degree(degree);
        let l = *nodes.last().unwrap();
        let outer_bc = [
            params.t_plus - cp / (2.0 * l * l),
            params.t_minus - cm / (2.0 * l * l),
        ];
        // linear behaviour through the origin, W ≈ s·ℓ + c₃ℓ³ with the
        // series coefficient c₃ = pot(0)·s/8 of a degree-1 vortex; for
        // |n| ≠ 1 only the leading W₀/ℓ₀ = W₁/ℓ₁ relation is kept
        let (l0, l1) = (nodes[0], nodes[1]);
        let a = [params.a_plus, params.a_minus];
        let t = [params.t_plus, params.t_minus];
        let deg = [degree.0, degree.1];
        let mut inner_bc = [[1.0, -l0 / l1], [1.0, -l0 / l1]];
        for c in 0..2 {
            if deg[c].abs() == 1 {
                let o = 1 - c;
                let pot0 = -(a[c] * t[c] * t[c] + params.b * t[o] * t[o]);
                inner_bc[c][0] = 1.0 - pot0 * (l0 * l0 - l1 * l1) / 8.0;
            }
        }
        Self { params, degree, nodes, outer_bc, inner_bc }
    }

    fn n_sq(&self, comp: usize) -> f64 {
        let n = if comp == 0 { self.degree.0 } else { self.degree.1 };
        f64::from(n * n)
    }

    /// Residual at every node; w is [component][node].
    fn residual(&self, w: &[Vec<f64>; 2]) -> Vec<[f64; 2]> {
        self.residual_scaled(w).0
    }

    /// Residual plus, per row, the magnitude of the largest term entering it.
    /// The magnitudes bound the roundoff floor of the evaluation: near the
    /// origin the 1/h² stencil coefficients leave no room below
    /// `machine ε · magnitude`.
    fn residual_scaled(&self, w: &[Vec<f64>; 2]) -> (Vec<[f64; 2]>, Vec<[f64; 2]>) {
        let n = self.nodes.len();
        let p = self.params;
        let (a, t) = ([p.a_plus, p.a_minus], [p.t_plus, p.t_minus]);
        let mut f = vec![[0.0; 2]; n];
        let mut mag = vec![[1.0; 2]; n];
        for c in 0..2 {
            let o = 1 - c;
            f[0][c] = self.inner_bc[c][0] * w[c][0] + self.inner_bc[c][1] * w[c][1];
            f[n - 1][c] = w[c][n - 1] - self.outer_bc[c];
            for i in 1..n - 1 {
                let hm = self.nodes[i] - self.nodes[i - 1];
                let hp = self.nodes[i + 1] - self.nodes[i];
                let (d2, d1) = stencil(hm, hp);
                let ell = self.nodes[i];
                let lap = d2[0] * w[c][i - 1] + d2[1] * w[c][i] + d2[2] * w[c][i + 1];
                let der = d1[0] * w[c][i - 1] + d1[1] * w[c][i] + d1[2] * w[c][i + 1];
                let pot = a[c] * (w[c][i] * w[c][i] - t[c] * t[c])
                    + p.b * (w[o][i] * w[o][i] - t[o] * t[o]);
                f[i][c] = -lap - der / ell + self.n_sq(c) * w[c][i] / (ell * ell)
                    + pot * w[c][i];
                mag[i][c] = d2[1].abs() * w[c][i].abs()
                    + (d1[1] / ell).abs() * w[c][i].abs()
                    + self.n_sq(c) * w[c][i].abs() / (ell * ell);
            }
        }
        (f, mag)
    }

    fn jacobian(&self, w: &[Vec<f64>; 2]) -> BlockTridiag {
        let n = self.nodes.len();
        let p = self.params;
        let (a, t) = ([p.a_plus, p.a_minus], [p.t_plus, p.t_minus]);
        let mut jac = BlockTridiag::new(n);
        for c in 0..2 {
            let o = 1 - c;
            jac.set(0, 0, c, c, self.inner_bc[c][0]);
            jac.set(0, 1, c, c, self.inner_bc[c][1]);
            jac.set(n - 1, 0, c, c, 1.0);
            for i in 1..n - 1 {
                let hm = self.nodes[i] - self.nodes[i - 1];
                let hp = self.nodes[i + 1] - self.nodes[i];
                let (d2, d1) = stencil(hm, hp);
                let ell = self.nodes[i];
                let pot = a[c] * (3.0 * w[c][i] * w[c][i] - t[c] * t[c])
                    + p.b * (w[o][i] * w[o][i] - t[o] * t[o]);
                jac.set(i, -1, c, c, -d2[0] - d1[0] / ell);
                jac.set(i, 1, c, c, -d2[2] - d1[2] / ell);
                jac.set(i, 0, c, c, -d2[1] - d1[1] / ell + self.n_sq(c) / (ell * ell) + pot);
                jac.set(i, 0, c, o, 2.0 * p.b * w[o][i] * w[c][i]);
            }
        }
        jac
    }
}

fn sup_norm(f: &[[f64; 2]]) -> f64 {
    f.iter().fold(0.0f64, |m, r| m.max(r[0].abs()).max(r[1].abs()))
}

fn rows_converged(f: &[[f64; 2]], mag: &[[f64; 2]], tol: f64, slack: f64) -> bool {
    let eps = f64::EPSILON;
    f.iter()
        .zip(mag)
        .all(|(r, m)| (0..2).all(|c| r[c].abs() <= tol.max(slack * eps * m[c])))
}

/// Derivative of the local degree-4 Lagrange interpolant through the five
/// nodes nearest to node `i`, evaluated at node `i`.
fn lagrange_deriv_at(nodes: &[f64], w: &[f64], i: usize) -> f64 {
    let n = nodes.len();
    let lo = i.saturating_sub(2).min(n.saturating_sub(5));
    let xs = &nodes[lo..lo + 5];
    let ys = &w[lo..lo + 5];
    let xc = nodes[i];
    let mut acc = 0.0;
    for j in 0..5 {
        let mut dl = 0.0;
        for k in 0..5 {
            if k == j {
                continue;
            }
            let mut prod = 1.0 / (xs[j] - xs[k]);
            for m in 0..5 {
                if m != j && m != k {
                    prod *= (xc - xs[m]) / (xs[j] - xs[m]);
                }
            }
            dl += prod;
        }
        acc += ys[j] * dl;
    }
    acc
}

/// Fourth-order derivative samples from the converged values.
fn differentiate(nodes: &[f64], w: &[f64]) -> Vec<f64> {
    (0..nodes.len()).map(|i| lagrange_deriv_at(nodes, w, i)).collect()
}

/// Solve the coupled profile ODE with the default initial guess
/// `W±⁰ = t±·ℓ/√(1+ℓ²)`.
pub fn solve_profile(
    params: &GLParams,
    degree_pair: (i32, i32),
    grid: &RadialGrid,
    tol: f64,
) -> Result<ProfilePair> {
    let t = [params.t_plus, params.t_minus];
    solve_profile_from(params, degree_pair, grid, tol, |ell, c| {
        t[c] * ell / (1.0 + ell * ell).sqrt()
    })
}

/// Same as [`solve_profile`] with a caller-supplied initial guess
/// `guess(ℓ, component_index)`.
pub fn solve_profile_from(
    params: &GLParams,
    degree_pair: (i32, i32),
    grid: &RadialGrid,
    tol: f64,
    guess: impl Fn(f64, usize) -> f64,
) -> Result<ProfilePair> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("tolerance {tol} must be positive")));
    }
    if grid.len() < 8 {
        return Err(Error::InvalidParams("radial grid too small".into()));
    }
    let nodes = grid.nodes();
    let sys = System::new(params, degree_pair, nodes);
    let mut w: [Vec<f64>; 2] = [
        nodes.iter().map(|&l| guess(l, 0)).collect(),
        nodes.iter().map(|&l| guess(l, 1)).collect(),
    ];

    let (mut f, mut mag) = sys.residual_scaled(&w);
    let mut fnorm = sup_norm(&f);
    let finish = |w: &[Vec<f64>; 2]| ProfilePair {
        grid: grid.clone(),
        w_plus: w[0].clone(),
        w_minus: w[1].clone(),
        dw_plus: differentiate(nodes, &w[0]),
        dw_minus: differentiate(nodes, &w[1]),
        params: *params,
        degree_pair,
    };
    for _ in 0..50 {
        if rows_converged(&f, &mag, tol, 16.0) {
            return Ok(finish(&w));
        }
        let jac = sys.jacobian(&w);
        let rhs: Vec<[f64; 2]> = f.iter().map(|r| [-r[0], -r[1]]).collect();
        let delta = jac.solve(rhs)?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let trial: [Vec<f64>; 2] = [
                w[0].iter().zip(&delta).map(|(x, d)| x + lambda * d[0]).collect(),
                w[1].iter().zip(&delta).map(|(x, d)| x + lambda * d[1]).collect(),
            ];
            let (ftrial, mtrial) = sys.residual_scaled(&trial);
            let ftn = sup_norm(&ftrial);
            if ftn < fnorm {
                w = trial;
                f = ftrial;
                mag = mtrial;
                fnorm = ftn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            // the step cannot beat roundoff; accept if every row sits at its
            // floor, otherwise report the stall
            if rows_converged(&f, &mag, tol, 256.0) {
                return Ok(finish(&w));
            }
            return Err(Error::NonConvergence(format!(
                "line search stalled at residual {fnorm:.3e}"
            )));
        }
    }
    Err(Error::NonConvergence(format!(
        "residual {fnorm:.3e} above tol {tol:.3e} after 50 iterations"
    )))
}

impl ProfilePair {
    /// Discrete ODE residual of the stored values at every node.
    pub fn discrete_residual(&self) -> Vec<[f64; 2]> {
        let sys = System::new(&self.params, self.degree_pair, self.grid.nodes());
        sys.residual(&[self.w_plus.clone(), self.w_minus.clone()])
    }

    pub fn max_residual(&self) -> f64 {
        sup_norm(&self.discrete_residual())
    }

    pub fn component(&self, idx: usize) -> (&[f64], &[f64]) {
        if idx == 0 {
            (&self.w_plus, &self.dw_plus)
        } else {
            (&self.w_minus, &self.dw_minus)
        }
    }

    /// CSV dump `ell,w_plus,dw_plus,w_minus,dw_minus`, 17 significant digits.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "ell,w_plus,dw_plus,w_minus,dw_minus")?;
        for (i, &l) in self.grid.nodes().iter().enumerate() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                l, self.w_plus[i], self.dw_plus[i], self.w_minus[i], self.dw_minus[i]
            )?;
        }
        Ok(())
    }
}

/// Least-squares tail fits against the far-field expansion.
#[derive(Debug, Clone, Copy)]
pub struct TailFit {
    /// constant fit of `2ℓ²(t± - W±)`
    pub c_value: (f64, f64),
    /// constant fit of `ℓ³ W±'`
    pub c_deriv: (f64, f64),
}

pub fn tail_fit(profile: &ProfilePair, window: (f64, f64)) -> Result<TailFit> {
    let nodes = profile.grid.nodes();
    let idx: Vec<usize> = nodes
        .iter()
        .enumerate()
        .filter(|(_, &l)| l >= window.0 && l <= window.1)
        .map(|(i, _)| i)
        .collect();
    if idx.len() < 8 {
        return Err(Error::WindowTooSmall(idx.len()));
    }
    let t = [profile.params.t_plus, profile.params.t_minus];
    let mut c_value = [0.0; 2];
    let mut c_deriv = [0.0; 2];
    for c in 0..2 {
        let (w, dw) = profile.component(c);
        let mut sv = 0.0;
        let mut sd = 0.0;
        for &i in &idx {
            let l = nodes[i];
            sv += 2.0 * l * l * (t[c] - w[i]);
            sd += l * l * l * dw[i];
        }
        c_value[c] = sv / idx.len() as f64;
        c_deriv[c] = sd / idx.len() as f64;
    }
    Ok(TailFit {
        c_value: (c_value[0], c_value[1]),
        c_deriv: (c_deriv[0], c_deriv[1]),
    })
}

/// Findings of [`validate_profile`]; empty vectors mean a clean profile.
#[derive(Debug, Clone)]
pub struct ProfileValidation {
    /// nodes where `0 < W± < t±` fails, as (component, node)
    pub bound_violations: Vec<(usize, usize)>,
    /// whether the `W±' > 0` check ran (only for B < 0)
    pub monotonicity_checked: bool,
    pub monotonicity_violations: Vec<(usize, usize)>,
    /// slope `W±/ℓ` at the first node
    pub origin_slope: (f64, f64),
    /// max relative drift of `W±/ℓ` from that slope over `ℓ < 0.1`
    pub origin_linear_dev: (f64, f64),
}

impl ProfileValidation {
    pub fn is_clean(&self) -> bool {
        self.bound_violations.is_empty() && self.monotonicity_violations.is_empty()
    }

    pub fn write_report(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "bound_violations: {}", self.bound_violations.len())?;
        for (c, i) in self.bound_violations.iter().take(20) {
            writeln!(out, "  component {c} node {i}")?;
        }
        writeln!(out, "monotonicity_checked: {}", self.monotonicity_checked)?;
        writeln!(out, "monotonicity_violations: {}", self.monotonicity_violations.len())?;
        writeln!(
            out,
            "origin_slope: {:.6e} {:.6e}",
            self.origin_slope.0, self.origin_slope.1
        )?;
        writeln!(
            out,
            "origin_linear_dev: {:.3e} {:.3e}",
            self.origin_linear_dev.0, self.origin_linear_dev.1
        )
    }
}

pub fn validate_profile(profile: &ProfilePair) -> ProfileValidation {
    let nodes = profile.grid.nodes();
    let t = [profile.params.t_plus, profile.params.t_minus];
    let mut bound_violations = Vec::new();
    let mut monotonicity_violations = Vec::new();
    let monotonicity_checked = profile.params.attractive_coupling();
    let mut origin_slope = [0.0; 2];
    let mut origin_linear_dev = [0.0; 2];
    for c in 0..2 {
        let (w, dw) = profile.component(c);
        for i in 0..nodes.len() {
            if !(w[i] > 0.0 && w[i] < t[c]) {
                bound_violations.push((c, i));
            }
            if monotonicity_checked && !(dw[i] > 0.0) {
                monotonicity_violations.push((c, i));
            }
        }
        origin_slope[c] = w[0] / nodes[0];
        let mut dev = 0.0f64;
        for i in 0..nodes.len() {
            if nodes[i] >= 0.1 {
                break;
            }
            dev = dev.max((w[i] / nodes[i] / origin_slope[c] - 1.0).abs());
        }
        origin_linear_dev[c] = dev;
    }
    ProfileValidation {
        bound_violations,
        monotonicity_checked,
        monotonicity_violations,
        origin_slope: (origin_slope[0], origin_slope[1]),
        origin_linear_dev: (origin_linear_dev[0], origin_linear_dev[1]),
    }
}
