//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS line with the measured numbers (run with `-- --nocapture` to see
//! them all).

mod common;

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use glhelix::ansatz::{build_ansatz, AnsatzEvaluator, VortexConfig};
use glhelix::config::RunConfig;
use glhelix::field::{ComplexField2D, Grid2D};
use glhelix::fourier::odd_even_split;
use glhelix::helix::reconstruct_3d;
use glhelix::interp::ProfileCurves;
use glhelix::kernel::{fitted_order, kernel_residual, l0_residual_sweep};
use glhelix::norms::NormParams;
use glhelix::params::GLParams;
use glhelix::profile::{solve_profile, tail_fit, validate_profile, RadialGrid};
use glhelix::reduction::{solve_dhat, QuadSpec};
use glhelix::residual::{apply_s, orthogonality_defect, AnsatzAnalytic};

fn balanced() -> GLParams {
    GLParams::balanced(-0.3).unwrap()
}

fn fine_curves(first: f64, l_max: f64, ratio: f64, params: &GLParams) -> ProfileCurves {
    let grid = RadialGrid::geometric(first, l_max, ratio).unwrap();
    ProfileCurves::new(&solve_profile(params, (1, 1), &grid, 1e-10).unwrap())
}

#[test]
fn c01_profile_tail_matches_the_closed_form_constants() {
    let start = Instant::now();
    let p = balanced();
    let grid = RadialGrid::default_grid();
    let prof = solve_profile(&p, (1, 1), &grid, 1e-10).unwrap();
    let fit = tail_fit(&prof, (30.0, 60.0)).unwrap();
    let (cp, cm) = p.asymptotic_c();
    let mut worst: f64 = 0.0;
    for (got, want) in [
        (fit.c_value.0, cp),
        (fit.c_value.1, cm),
        (fit.c_deriv.0, cp),
        (fit.c_deriv.1, cm),
    ] {
        worst = worst.max((got / want - 1.0).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(worst < 0.02, "tail-fit deviation {worst:.4}");
    assert!(elapsed < 5.0, "runtime {elapsed:.2}s over budget");
    println!(
        "acceptance 01 profile asymptotics: PASS (c± = {cp:.5}, worst fit deviation {:.2}%, {elapsed:.2}s)",
        100.0 * worst
    );
}

#[test]
fn c02_decoupled_profile_matches_the_scalar_oracle() {
    let start = Instant::now();
    let p = GLParams::balanced(0.0).unwrap();
    let grid = RadialGrid::geometric(1e-4, 60.0, 1.002).unwrap();
    let prof = solve_profile(&p, (1, 1), &grid, 1e-10).unwrap();
    // independent oracle: classical profile, rescaled by λ = t·√A
    let oracle = common::ClassicalProfile::solve(80.0, 1e-3);
    let t = p.t_plus;
    let mut sup: f64 = 0.0;
    for (i, &l) in prof.grid.nodes().iter().enumerate() {
        let want = t * oracle.eval(t * l);
        sup = sup.max((prof.w_plus[i] - want).abs());
        sup = sup.max((prof.w_minus[i] - want).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(sup <= 1e-6, "sup deviation from the rescaled classical profile: {sup:.3e}");
    assert!(elapsed < 10.0, "runtime {elapsed:.2}s over budget");
    println!("acceptance 02 decoupling oracle: PASS (sup error {sup:.2e}, {elapsed:.2}s)");
}

#[test]
fn c03_bounds_and_monotonicity_hold_for_negative_coupling() {
    let sets = [
        GLParams::balanced(-0.3).unwrap(),
        GLParams::balanced(-0.7).unwrap(),
        GLParams::new(1.2, 0.9, -0.4, 0.6, 0.8).unwrap(),
    ];
    for p in sets {
        let prof = solve_profile(&p, (1, 1), &RadialGrid::default_grid(), 1e-10).unwrap();
        let v = validate_profile(&prof);
        assert!(v.monotonicity_checked);
        assert!(
            v.is_clean(),
            "B={}: {} bound, {} monotonicity violations",
            p.b,
            v.bound_violations.len(),
            v.monotonicity_violations.len()
        );
    }
    println!("acceptance 03 bounds/monotonicity: PASS (3 parameter sets, zero violations)");
}

#[test]
fn c04_translation_kernel_residual_refines_at_second_order() {
    let start = Instant::now();
    let p = balanced();
    let curves = fine_curves(5e-4, 40.0, 1.0015, &p);
    let hs = [0.2, 0.1, 0.05];
    let rows = kernel_residual(&curves, &p, &hs, 20.0).unwrap();
    let order = fitted_order(&rows);
    assert!((1.8..=2.2).contains(&order), "kernel order {order}, rows {rows:?}");
    let control = |z: Complex64| {
        let den = 1.0 + z.norm_sqr();
        [z / den, Complex64::new(0.3, -0.2) * z / den]
    };
    let crows = l0_residual_sweep(&control, &curves, &p, &hs, 20.0).unwrap();
    let drop = crows[0].1 / crows[2].1;
    assert!(drop < 1.5 && crows[2].1 > 0.01, "control should plateau: {crows:?}");
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "runtime {elapsed:.2}s over budget");
    println!(
        "acceptance 04 kernel check: PASS (order {order:.3}, control plateau {:.2e}, {elapsed:.1}s)",
        crows[2].1
    );
}

#[test]
fn c05_finite_difference_and_analytic_residuals_agree_at_second_order() {
    let start = Instant::now();
    let p = balanced();
    let curves = fine_curves(5e-4, 40.0, 1.003, &p);
    let cfg = VortexConfig::new(0.05, 2, 1.0).unwrap();
    let ana = AnsatzAnalytic::new(&curves, cfg, p).unwrap();
    let dt = cfg.d_tilde();

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut probes = Vec::new();
    while probes.len() < 50 {
        let r = rng.gen_range(0.2..0.8) * dt;
        let th = rng.gen_range(0.0..std::f64::consts::TAU);
        let z = Complex64::from_polar(r, th);
        if (z - Complex64::new(dt, 0.0)).norm() > 2.5
            && (z + Complex64::new(dt, 0.0)).norm() > 2.5
        {
            probes.push(z);
        }
    }

    let mut errs = Vec::new();
    for &h in &[0.4, 0.2, 0.1, 0.05] {
        let grid = Grid2D::square(2.0 * dt + 15.0, h);
        let field = build_ansatz(&curves, &cfg, &grid);
        let s = apply_s(&field, &p, &cfg).unwrap();
        let mut worst = 0.0f64;
        for &z in &probes {
            let grid_val = s.sample(z).unwrap();
            let a = ana.s(z).unwrap();
            for c in 0..2 {
                worst = worst.max((grid_val[c] - a[c]).norm());
            }
        }
        errs.push((h, worst, worst));
    }
    let order = fitted_order(&errs);
    let elapsed = start.elapsed().as_secs_f64();
    assert!((1.8..=2.2).contains(&order), "order {order}, errors {errs:?}");
    assert!(elapsed < 120.0, "runtime {elapsed:.2}s over budget");
    println!(
        "acceptance 05 FD/analytic agreement: PASS (order {order:.3} at {} probes, {elapsed:.1}s)",
        probes.len()
    );
}

fn sweep_measurements() -> Vec<(f64, f64, f64, f64)> {
    let cfg = RunConfig::default();
    let p = cfg.gl_params().unwrap();
    let grid = cfg.radial_grid().unwrap();
    let profile = solve_profile(&p, (1, 1), &grid, cfg.newton_tol).unwrap();
    let curves = ProfileCurves::new(&profile);
    [1e-2, 3e-3, 1e-3]
        .iter()
        .map(|&eps| {
            let (rep, sharp_alpha, beta) =
                glhelix::cli::error_norms_analytic(&curves, &p, &cfg, eps).unwrap();
            (eps, rep.total(), sharp_alpha, beta)
        })
        .collect()
}

#[test]
fn c06_weighted_error_norm_scales_like_inverse_log() {
    let rows = sweep_measurements();
    let scaled: Vec<f64> = rows.iter().map(|r| r.1 * (-r.0.ln())).collect();
    let band = scaled.iter().cloned().fold(f64::MIN, f64::max)
        / scaled.iter().cloned().fold(f64::MAX, f64::min);
    assert!(band < 2.0, "‖R‖_**·|ln ε| band {band:.3}, values {scaled:?}");
    println!(
        "acceptance 06 error-size scaling: PASS (‖R‖_**·|ln ε| ∈ [{:.3}, {:.3}], band {band:.3})",
        scaled.iter().cloned().fold(f64::MAX, f64::min),
        scaled.iter().cloned().fold(f64::MIN, f64::max)
    );
}

#[test]
fn c07_odd_mode_splitting_scales_and_is_exact() {
    let rows = sweep_measurements();
    let alpha_scaled: Vec<f64> =
        rows.iter().map(|r| r.2 / (r.0 / (-r.0.ln()).sqrt())).collect();
    let beta_scaled: Vec<f64> = rows.iter().map(|r| r.3 / (r.0 * (-r.0.ln()).sqrt())).collect();
    let band = |v: &[f64]| {
        v.iter().cloned().fold(f64::MIN, f64::max) / v.iter().cloned().fold(f64::MAX, f64::min)
    };
    let ba = band(&alpha_scaled);
    let bb = band(&beta_scaled);
    assert!(ba < 3.0, "alpha band {ba:.3}: {alpha_scaled:?}");
    assert!(bb < 3.0, "beta band {bb:.3}: {beta_scaled:?}");

    // exactness of the pointwise split on a grid field
    let cfg = VortexConfig::new(0.12, 2, 1.0).unwrap();
    let np = NormParams::defaults(&cfg).unwrap();
    let grid = Grid2D::square(2.0 * cfg.d_tilde() + 8.0, 0.3);
    let h = ComplexField2D::from_fn(grid, |z| {
        [
            Complex64::new((0.3 * z.re).sin(), (0.2 * z.im).cos()),
            Complex64::new(0.1 * z.im, (0.15 * z.re).sin()),
        ]
    });
    let (odd, even) = odd_even_split(&h, &cfg, &np).unwrap();
    let mut worst = 0.0f64;
    for q in 0..h.plus.len() {
        if h.mask[q] {
            worst = worst.max((odd.plus[q] + even.plus[q] - h.plus[q]).norm());
            worst = worst.max((odd.minus[q] + even.minus[q] - h.minus[q]).norm());
        }
    }
    assert!(worst < 1e-14, "split not exact: {worst:.2e}");
    println!(
        "acceptance 07 odd/even splitting: PASS (α band {ba:.3}, β band {bb:.3}, split defect {worst:.1e})"
    );
}

#[test]
fn c08_equilibrium_radii_land_on_the_location_formulas() {
    let start = Instant::now();
    let eps = 1e-3;
    let sqrt_l = (-f64::ln(eps)).sqrt();
    let cases = [
        (2usize, 0i32, 1.0f64),
        (3, 0, 2.0f64.sqrt()),
        (4, 0, 3.0f64.sqrt()),
        (4, -1, 1.0),
        (5, -1, 2.0f64.sqrt()),
    ];
    let mut worst: f64 = 0.0;
    for (k, central, want) in cases {
        let rho = glhelix::energy::equilibrium_radius(k, eps, central).unwrap();
        worst = worst.max((rho * sqrt_l - want).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(worst < 1e-6, "worst deviation {worst:.2e}");
    assert!(elapsed < 1.0, "runtime {elapsed:.3}s over budget");
    println!(
        "acceptance 08 equilibrium radii: PASS (max |ρ*√|ln ε| - target| = {worst:.1e}, {elapsed:.3}s)"
    );
}

#[test]
fn c09_reduction_root_approaches_one() {
    let start = Instant::now();
    let p = balanced();
    let grid = RadialGrid::default_grid();
    let curves = ProfileCurves::new(&solve_profile(&p, (1, 1), &grid, 1e-10).unwrap());
    let quad = QuadSpec::default();
    let mut devs = Vec::new();
    for &eps in &[1e-2, 3e-3, 1e-3] {
        let dh = solve_dhat(&curves, &p, eps, 0.5, quad).unwrap();
        devs.push((eps, dh, (dh - 1.0).abs()));
    }
    assert!(
        devs[0].2 > devs[1].2 && devs[1].2 > devs[2].2,
        "|d̂*-1| should decrease: {devs:?}"
    );
    let last = devs[2].1;
    assert!((0.7..=1.3).contains(&last), "d̂*(1e-3) = {last}");
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0, "runtime {elapsed:.1}s over budget");
    println!(
        "acceptance 09 reduction root: PASS (d̂* = {:.4} → {:.4} → {:.4}, {elapsed:.1}s)",
        devs[0].1, devs[1].1, devs[2].1
    );
}

#[test]
fn c10_reconstructed_field_obeys_the_screw_identity() {
    let p = balanced();
    let curves = fine_curves(1e-3, 40.0, 1.02, &p);
    let k = 2usize;
    let cfg = VortexConfig::new(0.05, k, 1.0).unwrap();
    let grid = cfg.default_grid(10.0, 0.1);
    let field = build_ansatz(&curves, &cfg, &grid);
    let exact = AnsatzEvaluator::new(&curves, cfg);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let r_max = 0.8 * (2.0 * cfg.d_tilde() + 10.0);
    let mut worst_ratio = 0.0f64;
    for _ in 0..100 {
        let r = rng.gen_range(0.5..r_max);
        let th = rng.gen_range(0.0..std::f64::consts::TAU);
        let t = rng.gen_range(0.0..std::f64::consts::TAU);
        let h = 0.37;
        let a = reconstruct_3d(&field, k, &[(r, th + h, t + h)]).unwrap()[0];
        let b = reconstruct_3d(&field, k, &[(r, th, t)]).unwrap()[0];
        let phase = Complex64::from_polar(1.0, k as f64 * h);
        // the defect is pure interpolation error; measure it against the
        // exact evaluator at both sample points
        let z1 = Complex64::from_polar(r, th - t);
        let z2 = Complex64::from_polar(r, th + h - (t + h));
        let mut interp_err = 1e-12f64;
        for &z in &[z1, z2] {
            let fv = field.sample(z).unwrap();
            let ev = exact.value(z);
            interp_err = interp_err.max((fv[0] - ev[0]).norm()).max((fv[1] - ev[1]).norm());
        }
        for c in 0..2 {
            let defect = (a[c] - b[c] * phase).norm();
            assert!(
                defect <= 5.0 * interp_err,
                "screw defect {defect:.2e} vs interpolation error {interp_err:.2e}"
            );
            worst_ratio = worst_ratio.max(defect / interp_err);
        }
    }
    println!(
        "acceptance 10 screw identity: PASS (100 probes, worst defect/interp ratio {worst_ratio:.2})"
    );
}

#[test]
fn c11_leading_term_is_orthogonal_to_the_translation_mode() {
    let p = balanced();
    let grid = RadialGrid::default_grid();
    let curves = ProfileCurves::new(&solve_profile(&p, (1, 1), &grid, 1e-10).unwrap());
    let cfg = VortexConfig::new(1e-2, 2, 1.0).unwrap();
    let out = orthogonality_defect(&curves, cfg.d_tilde(), 256);
    let mut worst: f64 = 0.0;
    for c in 0..2 {
        assert!(out[c].1 > 0.1, "absolute-integrand scale sanity");
        let rel = out[c].0.abs() / out[c].1;
        worst = worst.max(rel);
    }
    assert!(worst <= 1e-8, "relative defect {worst:.2e}");
    println!(
        "acceptance 11 orthogonality: PASS (relative defect {worst:.1e} over B_d̃(e₁))"
    );
}
