//! Shared test support: an independent solver for the classical scalar
//! Ginzburg-Landau vortex profile, used as the decoupling oracle.
//!
//! Deliberately a different code path from the library solver: uniform grid,
//! scalar Thomas elimination, plain Dirichlet pinning at the origin.

/// Classical degree-1 profile `U'' + U'/s - U/s² + (1-U²)U = 0`,
/// `U(0) = 0`, `U(∞) = 1`, tabulated on a uniform grid.
pub struct ClassicalProfile {
    pub h: f64,
    pub values: Vec<f64>, // U(i·h), i = 0..=n
}

impl ClassicalProfile {
    pub fn solve(l_max: f64, h: f64) -> Self {
        let n = (l_max / h).round() as usize;
        let s: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        let mut u: Vec<f64> = s.iter().map(|&x| x / (1.0 + x * x).sqrt()).collect();
        u[0] = 0.0;
        u[n] = 1.0 - 0.5 / (l_max * l_max);

        let residual = |u: &[f64], f: &mut [f64]| {
            for i in 1..n {
                let upp = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
                let up = (u[i + 1] - u[i - 1]) / (2.0 * h);
                f[i] = upp + up / s[i] - u[i] / (s[i] * s[i]) + (1.0 - u[i] * u[i]) * u[i];
            }
        };

        let mut f = vec![0.0; n + 1];
        for _ in 0..60 {
            residual(&u, &mut f);
            let sup = f.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            if sup < 1e-12 {
                break;
            }
            // tridiagonal Newton step (interior unknowns only)
            let mut lower = vec![0.0; n + 1];
            let mut diag = vec![1.0; n + 1];
            let mut upper = vec![0.0; n + 1];
            let mut rhs = vec![0.0; n + 1];
            for i in 1..n {
                lower[i] = 1.0 / (h * h) - 1.0 / (2.0 * h * s[i]);
                upper[i] = 1.0 / (h * h) + 1.0 / (2.0 * h * s[i]);
                diag[i] = -2.0 / (h * h) - 1.0 / (s[i] * s[i]) + 1.0 - 3.0 * u[i] * u[i];
                rhs[i] = -f[i];
            }
            // Thomas elimination with the Dirichlet rows fixed
            for i in 2..n {
                let m = lower[i] / diag[i - 1];
                diag[i] -= m * upper[i - 1];
                rhs[i] -= m * rhs[i - 1];
            }
            let mut delta = vec![0.0; n + 1];
            delta[n - 1] = rhs[n - 1] / diag[n - 1];
            for i in (1..n - 1).rev() {
                delta[i] = (rhs[i] - upper[i] * delta[i + 1]) / diag[i];
            }
            for i in 1..n {
                u[i] += delta[i];
            }
        }
        Self { h, values: u }
    }

    /// Linear interpolation (the tabulation is fine enough that this stays
    /// below 1e-7).
    pub fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let x = s / self.h;
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let w = x - i as f64;
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }
}
