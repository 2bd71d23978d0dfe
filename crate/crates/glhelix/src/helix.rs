//! Reconstruction of the 3D screw-symmetric field from 2D data, filament
//! curves, and their CSV exports.
//!
//! A 2D solution slice `u(r, s)` lifts to 3D through
//! `value(r, θ, t) = e^{ikt} u(r, θ - t)`, so the whole cylinder is carried
//! by one plane. Vortex zeros trace the helices `(g_j(t), t)`.

use num_complex::Complex64;
use std::io::Write;

use crate::energy::FilamentConfig;
use crate::error::{Error, Result};
use crate::field::ComplexField2D;
use crate::norms::FieldEval;

/// Evaluate the lifted 3D field at `(r, θ, t)`.
pub fn reconstruct_3d(
    u: &ComplexField2D,
    k: usize,
    probes: &[(f64, f64, f64)],
) -> Result<Vec<[Complex64; 2]>> {
    let mut out = Vec::with_capacity(probes.len());
    for &(r, theta, t) in probes {
        let z = Complex64::from_polar(r, theta - t);
        let v = u.eval(z).ok_or(Error::ProbeOutsideGrid(r, theta - t))?;
        let phase = Complex64::from_polar(1.0, k as f64 * t);
        out.push([v[0] * phase, v[1] * phase]);
    }
    Ok(out)
}

/// One filament curve sampled over a period of the axial variable.
#[derive(Debug, Clone)]
pub struct HelixCurve {
    pub branch: usize,
    /// `(t, x, y, z)` with `z = t`
    pub samples: Vec<(f64, f64, f64, f64)>,
}

impl HelixCurve {
    pub fn is_closed(&self) -> bool {
        let first = self.samples.first().unwrap();
        let last = self.samples.last().unwrap();
        (first.1 - last.1).abs() < 1e-12 && (first.2 - last.2).abs() < 1e-12
    }
}

/// The k helices `g_j(t) = ρ e^{it} e^{2πi(j-1)/k}` sampled with `n_samples`
/// points over `t ∈ [0, 2π]` (both ends included), plus the straight axis
/// filament when the configuration carries a central anti-vortex.
pub fn filament_curves(config: &FilamentConfig, n_samples: usize) -> Result<Vec<HelixCurve>> {
    if n_samples < 16 {
        return Err(Error::InvalidParams(format!(
            "need at least 16 samples per curve, got {n_samples}"
        )));
    }
    let rho = config.radius();
    let mut curves = Vec::new();
    for j in 0..config.k {
        let phase = 2.0 * std::f64::consts::PI * j as f64 / config.k as f64;
        let samples = (0..n_samples)
            .map(|m| {
                let t = 2.0 * std::f64::consts::PI * m as f64 / (n_samples - 1) as f64;
                let g = Complex64::from_polar(rho, t + phase);
                (t, g.re, g.im, t)
            })
            .collect();
        curves.push(HelixCurve { branch: j + 1, samples });
    }
    if config.central_degree == -1 {
        let samples = (0..n_samples)
            .map(|m| {
                let t = 2.0 * std::f64::consts::PI * m as f64 / (n_samples - 1) as f64;
                (t, 0.0, 0.0, t)
            })
            .collect();
        curves.push(HelixCurve { branch: 0, samples });
    }
    // branch-major deterministic order
    curves.sort_by_key(|c| c.branch);
    Ok(curves)
}

/// CSV `branch,t,x,y,z`, branch-major then t.
pub fn export_curves(curves: &[HelixCurve], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "branch,t,x,y,z")?;
    for c in curves {
        for &(t, x, y, z) in &c.samples {
            writeln!(out, "{},{:.16e},{:.16e},{:.16e},{:.16e}", c.branch, t, x, y, z)?;
        }
    }
    Ok(())
}

/// Which frame a slice export uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceFrame {
    /// grid coordinates are `s = θ - t`; values get the `e^{ikt}` prefactor
    CoRotating,
    /// grid coordinates are the lab-frame `θ` at height `t`
    Lab,
}

/// CSV `t,x1,x2,re_plus,im_plus,re_minus,im_minus` of the slice at height
/// `t`. Lab-frame slices sample the rotated plane; nodes whose preimage
/// falls off the grid are skipped (at `t = 0` both frames emit every node).
pub fn export_slice(
    u: &ComplexField2D,
    k: usize,
    t: f64,
    frame: SliceFrame,
    out: &mut impl Write,
) -> Result<()> {
    writeln!(out, "t,x1,x2,re_plus,im_plus,re_minus,im_minus")?;
    let g = u.grid;
    let phase = Complex64::from_polar(1.0, k as f64 * t);
    for j in 0..g.n2 {
        for i in 0..g.n1 {
            let z = g.point(i, j);
            let v = match frame {
                SliceFrame::CoRotating => {
                    let q = g.idx(i, j);
                    [u.plus[q], u.minus[q]]
                }
                SliceFrame::Lab => {
                    let rotated = z * Complex64::from_polar(1.0, -t);
                    match u.eval(rotated) {
                        Some(v) => v,
                        None => continue,
                    }
                }
            };
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                t,
                z.re,
                z.im,
                (v[0] * phase).re,
                (v[0] * phase).im,
                (v[1] * phase).re,
                (v[1] * phase).im,
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid2D;

    fn test_field() -> ComplexField2D {
        let grid = Grid2D::square(6.0, 0.1);
        ComplexField2D::from_fn(grid, |z| {
            [
                Complex64::new((0.4 * z.re).sin(), 0.2 * z.im),
                Complex64::new(0.3, (0.3 * z.norm_sqr()).cos()),
            ]
        })
    }

    #[test]
    fn identity_and_period_slices() {
        let u = test_field();
        let probes = [(1.5, 0.7, 0.0), (2.0, -1.1, 2.0 * std::f64::consts::PI)];
        let vals = reconstruct_3d(&u, 2, &probes).unwrap();
        // t = 0: the 2D field itself
        let direct = u.eval(Complex64::from_polar(1.5, 0.7)).unwrap();
        assert!((vals[0][0] - direct[0]).norm() < 1e-14);
        // t = 2π equals t = 0 (e^{ik·2π} = 1)
        let at0 = reconstruct_3d(&u, 2, &[(2.0, -1.1, 0.0)]).unwrap();
        assert!((vals[1][0] - at0[0][0]).norm() < 1e-9);
        assert!((vals[1][1] - at0[0][1]).norm() < 1e-9);
    }

    #[test]
    fn screw_identity_holds_at_probes() {
        let u = test_field();
        let k = 3usize;
        let h = 0.37;
        for &(r, th, t) in &[(1.2, 0.3, 0.9), (2.5, -2.0, 4.0), (0.7, 1.0, 0.1)] {
            let a = reconstruct_3d(&u, k, &[(r, th + h, t + h)]).unwrap()[0];
            let b = reconstruct_3d(&u, k, &[(r, th, t)]).unwrap()[0];
            let phase = Complex64::from_polar(1.0, k as f64 * h);
            for c in 0..2 {
                assert!((a[c] - b[c] * phase).norm() < 1e-12, "screw identity");
            }
        }
        // out-of-grid probe errors out
        assert!(matches!(
            reconstruct_3d(&u, k, &[(20.0, 0.0, 0.0)]),
            Err(Error::ProbeOutsideGrid(_, _))
        ));
    }

    #[test]
    fn curves_counts_closure_and_rotation() {
        let cfg = FilamentConfig::new(2, 1.0, 1e-2, 0).unwrap();
        let curves = filament_curves(&cfg, 64).unwrap();
        assert_eq!(curves.len(), 2);
        for c in &curves {
            assert_eq!(c.samples.len(), 64);
            assert!(c.is_closed());
            // constant radius along the curve
            let r0 = (c.samples[0].1.powi(2) + c.samples[0].2.powi(2)).sqrt();
            for s in &c.samples {
                assert!(((s.1 * s.1 + s.2 * s.2).sqrt() - r0).abs() < 1e-12);
            }
        }
        // second curve = first rotated by π
        for (a, b) in curves[0].samples.iter().zip(&curves[1].samples) {
            assert!((a.1 + b.1).abs() < 1e-12 && (a.2 + b.2).abs() < 1e-12);
        }

        let cfg2 = FilamentConfig::new(4, 1.0, 1e-2, -1).unwrap();
        let curves2 = filament_curves(&cfg2, 32).unwrap();
        assert_eq!(curves2.len(), 5, "4 helices + 1 straight axis filament");
        let axis = &curves2[0]; // branch 0 sorts first
        assert!(axis.samples.iter().all(|s| s.1 == 0.0 && s.2 == 0.0));

        assert!(filament_curves(&cfg, 8).is_err());
    }

    #[test]
    fn export_roundtrip_and_counts() {
        let cfg = FilamentConfig::new(2, 1.0, 1e-2, 0).unwrap();
        let curves = filament_curves(&cfg, 64).unwrap();
        let mut buf = Vec::new();
        export_curves(&curves, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 128, "header + 2×64 rows");
        // re-parse and re-serialize: identical bytes (17 significant digits
        // round-trip f64 exactly)
        let mut reparsed = Vec::new();
        for line in &lines[1..] {
            let parts: Vec<&str> = line.split(',').collect();
            let vals: Vec<f64> = parts[1..].iter().map(|s| s.parse().unwrap()).collect();
            reparsed.push((parts[0].parse::<usize>().unwrap(), vals));
        }
        let mut buf2 = String::from("branch,t,x,y,z\n");
        for (b, v) in &reparsed {
            buf2.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                b, v[0], v[1], v[2], v[3]
            ));
        }
        assert_eq!(text, buf2);

        // header-only file for an empty list
        let mut buf3 = Vec::new();
        export_curves(&[], &mut buf3).unwrap();
        assert_eq!(String::from_utf8(buf3).unwrap(), "branch,t,x,y,z\n");
    }

    #[test]
    fn slice_exports_have_full_node_counts() {
        let u = test_field();
        let mut buf = Vec::new();
        export_slice(&u, 2, 0.0, SliceFrame::CoRotating, &mut buf).unwrap();
        let n_lines = String::from_utf8(buf).unwrap().lines().count();
        assert_eq!(n_lines, 1 + u.grid.len());
    }
}
