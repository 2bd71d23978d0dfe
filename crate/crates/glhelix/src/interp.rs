//! C¹ radial interpolation of a solved profile pair, with the closed-form
//! far-field tail and the linear behaviour through the origin.

use crate::profile::ProfilePair;

/// Cubic Hermite curves for `(W+, W-)` built from a converged [`ProfilePair`].
///
/// Outside the grid the evaluation switches to `W ~ s·ℓ` below the first node
/// and to `W ~ t - c/(2ℓ²)` beyond the truncation radius. Second derivatives
/// come from the ODE itself, so they stay consistent with the values and the
/// slopes everywhere.
#[derive(Debug, Clone)]
pub struct ProfileCurves {
    nodes: Vec<f64>,
    w: [Vec<f64>; 2],
    dw: [Vec<f64>; 2],
    a: [f64; 2],
    t: [f64; 2],
    b: f64,
    n_sq: [f64; 2],
    c_tail: [f64; 2],
    slope0: [f64; 2],
    cubic0: [f64; 2],
    l_max: f64,
}

impl ProfileCurves {
    pub fn new(profile: &ProfilePair) -> Self {
        let p = profile.params;
        let (cp, cm) = p.asymptotic_c_for_degree(profile.degree_pair);
        let nodes = profile.grid.nodes().to_vec();
        // odd cubic W ≈ s·ℓ + c₃·ℓ³ matched to (W, W') at the first node, so
        // the extension joins the interpolant C¹ and second differences of
        // assembled fields see no value kink across the inner circle
        let l0 = nodes[0];
        let mut slope0 = [0.0; 2];
        let mut cubic0 = [0.0; 2];
        for c in 0..2 {
            let (w0, d0) = if c == 0 {
                (profile.w_plus[0], profile.dw_plus[0])
            } else {
                (profile.w_minus[0], profile.dw_minus[0])
            };
            cubic0[c] = (d0 - w0 / l0) / (2.0 * l0 * l0);
            slope0[c] = w0 / l0 - cubic0[c] * l0 * l0;
        }
        Self {
            l_max: profile.grid.l_max(),
            nodes,
            w: [profile.w_plus.clone(), profile.w_minus.clone()],
            dw: [profile.dw_plus.clone(), profile.dw_minus.clone()],
            a: [p.a_plus, p.a_minus],
            t: [p.t_plus, p.t_minus],
            b: p.b,
            n_sq: [
                f64::from(profile.degree_pair.0 * profile.degree_pair.0),
                f64::from(profile.degree_pair.1 * profile.degree_pair.1),
            ],
            c_tail: [cp, cm],
            slope0,
            cubic0,
        }
    }

    pub fn t(&self) -> [f64; 2] {
        self.t
    }

    pub fn c_tail(&self) -> [f64; 2] {
        self.c_tail
    }

    pub fn l_max(&self) -> f64 {
        self.l_max
    }

    pub fn first_node(&self) -> f64 {
        self.nodes[0]
    }

    fn segment(&self, ell: f64) -> usize {
        // nodes[i] <= ell < nodes[i+1]
        match self.nodes.binary_search_by(|x| x.partial_cmp(&ell).unwrap()) {
            Ok(i) => i.min(self.nodes.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.nodes.len() - 2),
        }
    }

    pub fn value(&self, ell: f64) -> [f64; 2] {
        if ell < self.nodes[0] {
            return [
                self.slope0[0] * ell + self.cubic0[0] * ell * ell * ell,
                self.slope0[1] * ell + self.cubic0[1] * ell * ell * ell,
            ];
        }
        if ell > self.l_max {
            return [
                self.t[0] - self.c_tail[0] / (2.0 * ell * ell),
                self.t[1] - self.c_tail[1] / (2.0 * ell * ell),
            ];
        }
        let i = self.segment(ell);
        let h = self.nodes[i + 1] - self.nodes[i];
        let s = (ell - self.nodes[i]) / h;
        let (h00, h10, h01, h11) = hermite_basis(s);
        let mut out = [0.0; 2];
        for c in 0..2 {
            out[c] = h00 * self.w[c][i]
                + h10 * h * self.dw[c][i]
                + h01 * self.w[c][i + 1]
                + h11 * h * self.dw[c][i + 1];
        }
        out
    }

    pub fn deriv(&self, ell: f64) -> [f64; 2] {
        if ell < self.nodes[0] {
            return [
                self.slope0[0] + 3.0 * self.cubic0[0] * ell * ell,
                self.slope0[1] + 3.0 * self.cubic0[1] * ell * ell,
            ];
        }
        if ell > self.l_max {
            return [
                self.c_tail[0] / (ell * ell * ell),
                self.c_tail[1] / (ell * ell * ell),
            ];
        }
        let i = self.segment(ell);
        let h = self.nodes[i + 1] - self.nodes[i];
        let s = (ell - self.nodes[i]) / h;
        let (d00, d10, d01, d11) = hermite_basis_deriv(s);
        let mut out = [0.0; 2];
        for c in 0..2 {
            out[c] = (d00 * self.w[c][i]
                + d10 * h * self.dw[c][i]
                + d01 * self.w[c][i + 1]
                + d11 * h * self.dw[c][i + 1])
                / h;
        }
        out
    }

    /// `W±''` recovered from the ODE, using interpolated values and slopes.
    pub fn second(&self, ell: f64) -> [f64; 2] {
        if ell > self.l_max {
            return [
                -3.0 * self.c_tail[0] / (ell * ell * ell * ell),
                -3.0 * self.c_tail[1] / (ell * ell * ell * ell),
            ];
        }
        let ell = ell.max(self.nodes[0]);
        let w = self.value(ell);
        let dw = self.deriv(ell);
        let mut out = [0.0; 2];
        for c in 0..2 {
            let o = 1 - c;
            let pot = self.a[c] * (w[c] * w[c] - self.t[c] * self.t[c])
                + self.b * (w[o] * w[o] - self.t[o] * self.t[o]);
            out[c] = -dw[c] / ell + self.n_sq[c] * w[c] / (ell * ell) + pot * w[c];
        }
        out
    }
}

fn hermite_basis(s: f64) -> (f64, f64, f64, f64) {
    (
        (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
        s * (1.0 - s) * (1.0 - s),
        s * s * (3.0 - 2.0 * s),
        s * s * (s - 1.0),
    )
}

fn hermite_basis_deriv(s: f64) -> (f64, f64, f64, f64) {
    (
        6.0 * s * (s - 1.0),
        (1.0 - s) * (1.0 - 3.0 * s),
        6.0 * s * (1.0 - s),
        s * (3.0 * s - 2.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::GLParams;
    use crate::profile::{solve_profile, RadialGrid};

    #[test]
    fn interpolation_reproduces_nodes_and_tail() {
        let p = GLParams::balanced(-0.3).unwrap();
        let grid = RadialGrid::geometric(1e-3, 40.0, 1.03).unwrap();
        let prof = solve_profile(&p, (1, 1), &grid, 1e-10).unwrap();
        let cur = ProfileCurves::new(&prof);
        for (i, &l) in grid.nodes().iter().enumerate().step_by(37) {
            let v = cur.value(l);
            assert!((v[0] - prof.w_plus[i]).abs() < 1e-14);
            assert!((v[1] - prof.w_minus[i]).abs() < 1e-14);
        }
        // far tail
        let l = 400.0;
        let (cp, _) = p.asymptotic_c();
        assert!((cur.value(l)[0] - (p.t_plus - cp / (2.0 * l * l))).abs() < 1e-15);
        assert!((cur.deriv(l)[0] - cp / (l * l * l)).abs() < 1e-18);
        // near origin: linear up to the small matched cubic term
        let l = 1e-5;
        assert!((cur.value(l)[0] / l - cur.value(2e-5)[0] / 2e-5).abs() < 1e-10);
    }

    #[test]
    fn midpoint_values_and_derivatives_are_consistent() {
        let p = GLParams::balanced(-0.3).unwrap();
        let grid = RadialGrid::geometric(1e-3, 40.0, 1.02).unwrap();
        let prof = solve_profile(&p, (1, 1), &grid, 1e-10).unwrap();
        let cur = ProfileCurves::new(&prof);
        // derivative of the interpolant matches a centered difference of itself
        for &l in &[0.7, 2.3, 11.0, 33.0] {
            let h = 1e-6;
            let fd = (cur.value(l + h)[0] - cur.value(l - h)[0]) / (2.0 * h);
            assert!((fd - cur.deriv(l)[0]).abs() < 1e-8);
            // ODE-based second derivative matches a centered difference of deriv
            let fd2 = (cur.deriv(l + h)[0] - cur.deriv(l - h)[0]) / (2.0 * h);
            assert!(
                (fd2 - cur.second(l)[0]).abs() < 2e-4,
                "at {l}: fd2={fd2}, ode={}",
                cur.second(l)[0]
            );
        }
    }
}
