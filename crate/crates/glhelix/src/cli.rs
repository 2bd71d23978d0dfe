//! Pipeline driver behind the `glhelix` binary: subcommand orchestration,
//! artifact emission, run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;

use crate::ansatz::{build_ansatz, AnsatzEvaluator, VortexConfig};
use crate::config::RunConfig;
use crate::energy::{equilibrium_radius, FilamentConfig};
use crate::error::{Error, Result};
use crate::field::ComplexField2D;
use crate::fourier::{angular_modes, r_o_alpha, reflect, OddPartEval};
use crate::helix::{export_curves, export_slice, filament_curves, SliceFrame};
use crate::interp::ProfileCurves;
use crate::kernel::{fitted_order, kernel_residual, l0_residual_sweep, write_residual_csv};
use crate::norms::{
    norm_starstar, norm_starstar_eval, seminorm_sharpsharp_eval, FieldEval, FnField, NormSampling,
};
use crate::params::GLParams;
use crate::profile::{solve_profile, tail_fit, validate_profile, ProfilePair};
use crate::reduction::{reduction_integrals, solve_dhat, QuadSpec};
use crate::residual::{apply_s, compute_r, AnsatzAnalytic};

pub const SUBCOMMANDS: [&str; 8] =
    ["profile", "residual", "norms", "fourier", "kernel", "reduce", "sweep", "helix"];

pub struct Invocation {
    pub subcommand: String,
    pub config: RunConfig,
    pub out_dir: PathBuf,
}

/// Parse argv (without the program name): subcommand, `--config`, `--out`,
/// `--eps`, `--k`, `--seed`, `--central`, plus bare `key=value` overrides.
pub fn parse_args(args: &[String]) -> Result<Invocation> {
    let mut sub = None;
    let mut config_path: Option<PathBuf> = None;
    let mut out_dir = PathBuf::from("out");
    let mut overrides: Vec<(String, String)> = Vec::new();
    let mut it = args.iter().peekable();
    let need_value = |it: &mut std::iter::Peekable<std::slice::Iter<String>>,
                          flag: &str|
     -> Result<String> {
        it.next().cloned().ok_or_else(|| Error::ConfigParse {
            line: 0,
            msg: format!("flag {flag} needs a value"),
        })
    };
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => config_path = Some(PathBuf::from(need_value(&mut it, "--config")?)),
            "--out" => out_dir = PathBuf::from(need_value(&mut it, "--out")?),
            "--eps" => overrides.push(("eps_list".into(), need_value(&mut it, "--eps")?)),
            "--k" => overrides.push(("k".into(), need_value(&mut it, "--k")?)),
            "--seed" => overrides.push(("seed".into(), need_value(&mut it, "--seed")?)),
            "--central" => overrides.push(("central".into(), "true".into())),
            other if other.starts_with("--") => {
                return Err(Error::ConfigParse {
                    line: 0,
                    msg: format!("unknown flag '{other}'"),
                })
            }
            other if other.contains('=') => {
                let (k, v) = other.split_once('=').unwrap();
                overrides.push((k.trim().to_string(), v.trim().to_string()));
            }
            other if sub.is_none() => sub = Some(other.to_string()),
            other => {
                return Err(Error::ConfigParse {
                    line: 0,
                    msg: format!("unexpected argument '{other}'"),
                })
            }
        }
    }
    let subcommand = sub.ok_or_else(|| Error::ConfigParse {
        line: 0,
        msg: format!("missing subcommand; expected one of {SUBCOMMANDS:?}"),
    })?;
    if !SUBCOMMANDS.contains(&subcommand.as_str()) {
        return Err(Error::ConfigParse {
            line: 0,
            msg: format!("unknown subcommand '{subcommand}'; expected one of {SUBCOMMANDS:?}"),
        });
    }
    let mut config = match config_path {
        Some(p) => RunConfig::parse_file(&p)?,
        None => RunConfig::default(),
    };
    for (k, v) in &overrides {
        config.set(k, v, 0)?;
    }
    Ok(Invocation { subcommand, config, out_dir })
}

pub fn run(inv: &Invocation) -> Result<()> {
    let started = Instant::now();
    fs::create_dir_all(&inv.out_dir)?;
    match inv.subcommand.as_str() {
        "profile" => cmd_profile(&inv.config, &inv.out_dir)?,
        "residual" => cmd_residual(&inv.config, &inv.out_dir)?,
        "norms" => cmd_norms(&inv.config, &inv.out_dir)?,
        "fourier" => cmd_fourier(&inv.config, &inv.out_dir)?,
        "kernel" => cmd_kernel(&inv.config, &inv.out_dir)?,
        "reduce" => cmd_reduce(&inv.config, &inv.out_dir)?,
        "sweep" => cmd_sweep(&inv.config, &inv.out_dir)?,
        "helix" => cmd_helix(&inv.config, &inv.out_dir)?,
        _ => unreachable!("validated in parse_args"),
    }
    write_manifest(inv, started)?;
    Ok(())
}

fn write_manifest(inv: &Invocation, started: Instant) -> Result<()> {
    let mut f = fs::File::create(inv.out_dir.join("manifest.txt"))?;
    writeln!(f, "subcommand = {}", inv.subcommand)?;
    writeln!(f, "version = {}", env!("CARGO_PKG_VERSION"))?;
    for line in inv.config.manifest_lines() {
        writeln!(f, "{line}")?;
    }
    writeln!(f, "wall_time_s = {:.3}", started.elapsed().as_secs_f64())?;
    Ok(())
}

fn solve_from_config(cfg: &RunConfig) -> Result<(GLParams, ProfilePair)> {
    let params = cfg.gl_params()?;
    let grid = cfg.radial_grid()?;
    let profile = solve_profile(&params, (1, 1), &grid, cfg.newton_tol)?;
    Ok((params, profile))
}

fn cmd_profile(cfg: &RunConfig, out: &Path) -> Result<()> {
    let (params, profile) = solve_from_config(cfg)?;
    let mut f = fs::File::create(out.join("profile.csv"))?;
    profile.write_csv(&mut f)?;
    let validation = validate_profile(&profile);
    let fit = tail_fit(&profile, (0.5 * cfg.radial_l_max, cfg.radial_l_max))?;
    let (cp, cm) = params.asymptotic_c();
    let mut rep = fs::File::create(out.join("profile_report.txt"))?;
    validation.write_report(&mut rep)?;
    writeln!(rep, "tail_fit_value: {:.8e} {:.8e}", fit.c_value.0, fit.c_value.1)?;
    writeln!(rep, "tail_fit_deriv: {:.8e} {:.8e}", fit.c_deriv.0, fit.c_deriv.1)?;
    writeln!(rep, "closed_form_c: {cp:.8e} {cm:.8e}")?;
    writeln!(rep, "max_residual: {:.3e}", profile.max_residual())?;
    if !validation.is_clean() {
        return Err(Error::ValidationFailure(format!(
            "profile violates bounds/monotonicity at {} nodes",
            validation.bound_violations.len() + validation.monotonicity_violations.len()
        )));
    }
    Ok(())
}

fn build_pipeline_field(
    cfg: &RunConfig,
    curves: &ProfileCurves,
    config: &VortexConfig,
) -> (ComplexField2D, Vec<usize>) {
    let grid = config.default_grid(cfg.grid_margin, cfg.grid_h);
    let outside = config.centers_outside(&grid);
    (build_ansatz(curves, config, &grid), outside)
}

fn dump_strided(field: &ComplexField2D, stride: usize, out: &mut impl Write) -> Result<()> {
    writeln!(out, "x1,x2,re_plus,im_plus,re_minus,im_minus,mask")?;
    let g = field.grid;
    let s = stride.max(1);
    for j in (0..g.n2).step_by(s) {
        for i in (0..g.n1).step_by(s) {
            let q = g.idx(i, j);
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                g.x1(i),
                g.x2(j),
                field.plus[q].re,
                field.plus[q].im,
                field.minus[q].re,
                field.minus[q].im,
                u8::from(field.mask[q]),
            )?;
        }
    }
    Ok(())
}

fn cmd_residual(cfg: &RunConfig, out: &Path) -> Result<()> {
    let (params, profile) = solve_from_config(cfg)?;
    let curves = ProfileCurves::new(&profile);
    let config = cfg.vortex_config()?;
    let (field, outside) = build_pipeline_field(cfg, &curves, &config);
    for j in outside {
        eprintln!("warning: vortex center {j} is not interior to the grid");
    }
    let s = apply_s(&field, &params, &config)?;
    let r = compute_r(&s, &field, &params);
    let mut f = fs::File::create(out.join("ansatz.csv"))?;
    dump_strided(&field, cfg.dump_stride, &mut f)?;
    let mut f = fs::File::create(out.join("residual.csv"))?;
    dump_strided(&r, cfg.dump_stride, &mut f)?;
    Ok(())
}

/// The three sweep measurements at one ε: `‖R‖_**`, `|R_o^α|_♯♯`,
/// `‖R_o^β‖_**`, via the closed-form residual (two plain vortices only).
pub fn error_norms_analytic(
    curves: &ProfileCurves,
    params: &GLParams,
    cfg: &RunConfig,
    epsilon: f64,
) -> Result<(crate::norms::NormReport, f64, f64)> {
    let config = cfg.vortex_config_at(epsilon, cfg.d_hat)?;
    let normp = cfg.norm_params(&config)?;
    let ana = AnsatzAnalytic::new(curves, config, *params)?;
    let sampling = NormSampling::polar(&config, &normp);

    let r_eval = FnField(|z: Complex64| ana.residual(z).ok());
    let s_eval = FnField(|z: Complex64| {
        let s = ana.s(z).ok()?;
        let minus_i = Complex64::new(0.0, -1.0);
        Some([minus_i * s[0], minus_i * s[1]])
    });
    let report = norm_starstar_eval(&r_eval, &s_eval, &config, &normp, &sampling)?;

    let odd = OddPartEval::new(&r_eval, &config, &normp);
    let alpha_eval = FnField(|z: Complex64| {
        let a = r_o_alpha(&config, &normp, z);
        Some([a, a])
    });
    // v_d·R_o^α for the core pieces of the seminorm
    let vd_alpha = FnField(|z: Complex64| {
        let a = r_o_alpha(&config, &normp, z);
        let v = ana.v_d(z);
        Some([v[0] * a, v[1] * a])
    });
    let sharp_alpha =
        seminorm_sharpsharp_eval(&alpha_eval, &vd_alpha, &config, &normp, &sampling)?;

    let beta_eval = FnField(|z: Complex64| {
        let o = odd.eval(z)?;
        let a = r_o_alpha(&config, &normp, z);
        Some([o[0] - a, o[1] - a])
    });
    let vd_beta = FnField(|z: Complex64| {
        let b = beta_eval.eval(z)?;
        let v = ana.v_d(z);
        Some([v[0] * b[0], v[1] * b[1]])
    });
    let beta_report = norm_starstar_eval(&beta_eval, &vd_beta, &config, &normp, &sampling)?;
    Ok((report, sharp_alpha, beta_report.total()))
}

fn cmd_norms(cfg: &RunConfig, out: &Path) -> Result<()> {
    let (params, profile) = solve_from_config(cfg)?;
    let curves = ProfileCurves::new(&profile);
    let mut f = fs::File::create(out.join("norms.csv"))?;
    if cfg.k == 2 && !cfg.central && !cfg.conjugate_minus {
        let (report, sharp_alpha, beta_total) =
            error_norms_analytic(&curves, &params, cfg, cfg.epsilon)?;
        report.write_csv(&mut f)?;
        writeln!(f, "seminorm_r_o_alpha,both,2<ell<R_eps,{sharp_alpha:.16e}")?;
        writeln!(f, "norm_r_o_beta,both,all,{beta_total:.16e}")?;
    } else {
        // finite-difference path for configurations without closed forms
        let config = cfg.vortex_config()?;
        let normp = cfg.norm_params(&config)?;
        let (field, _) = build_pipeline_field(cfg, &curves, &config);
        let s = apply_s(&field, &params, &config)?;
        let r = compute_r(&s, &field, &params);
        let report = norm_starstar(&r, &field, &config, &normp)?;
        report.write_csv(&mut f)?;
    }
    Ok(())
}

fn cmd_fourier(cfg: &RunConfig, out: &Path) -> Result<()> {
    let (params, profile) = solve_from_config(cfg)?;
    let curves = ProfileCurves::new(&profile);
    let config = cfg.vortex_config()?;
    let normp = cfg.norm_params(&config)?;
    let ana = AnsatzAnalytic::new(&curves, config, params)?;
    let r_eval = FnField(|z: Complex64| ana.residual(z).ok());
    let radii: Vec<f64> = (0..12)
        .map(|i| 2.0 * (normp.r_eps / 2.0).powf(i as f64 / 11.0))
        .collect();
    let table = angular_modes(&r_eval, config.centers()[0], 0, &radii, cfg.k_max_modes)?;
    let mut f = fs::File::create(out.join("modes.csv"))?;
    writeln!(f, "center,radius,mode,h1_plus,h2_plus,h1_minus,h2_minus,energy")?;
    for (ri, &r) in table.radii.iter().enumerate() {
        for k in 0..=table.k_max {
            writeln!(
                f,
                "1,{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r,
                k,
                table.h1[0][ri][k],
                table.h2[0][ri][k],
                table.h1[1][ri][k],
                table.h2[1][ri][k],
                table.mode_energy(k),
            )?;
        }
    }
    let (even, odd) = table.even_odd_energy();
    writeln!(f, "1,0,-1,0,0,0,0,{:.16e}", even / odd.max(1e-300))?;
    Ok(())
}

fn cmd_kernel(cfg: &RunConfig, out: &Path) -> Result<()> {
    // the kernel check measures the 2D truncation of L0(w_x1); the profile
    // must be resolved well past the finest mesh or its own discretization
    // error floors the refinement sequence
    let params = cfg.gl_params()?;
    let grid = crate::profile::RadialGrid::geometric(
        cfg.radial_first.min(5e-4),
        cfg.radial_l_max,
        cfg.radial_ratio.min(1.0015),
    )?;
    let profile = solve_profile(&params, (1, 1), &grid, cfg.newton_tol)?;
    let curves = ProfileCurves::new(&profile);
    let hs = [0.2, 0.1, 0.05];
    let rows = kernel_residual(&curves, &params, &hs, 20.0)?;
    let mut f = fs::File::create(out.join("kernel.csv"))?;
    write_residual_csv(&rows, &mut f)?;
    let control = |z: Complex64| {
        let den = 1.0 + z.norm_sqr();
        [z / den, Complex64::new(0.3, -0.2) * z / den]
    };
    let control_rows = l0_residual_sweep(&control, &curves, &params, &hs, 20.0)?;
    let mut rep = fs::File::create(out.join("kernel_report.txt"))?;
    writeln!(rep, "kernel_fitted_order: {:.4}", fitted_order(&rows))?;
    writeln!(rep, "control_fitted_order: {:.4}", fitted_order(&control_rows))?;
    writeln!(rep, "control_sup_at_finest: {:.4e}", control_rows.last().unwrap().1)?;
    Ok(())
}

fn cmd_reduce(cfg: &RunConfig, out: &Path) -> Result<()> {
    let (params, profile) = solve_from_config(cfg)?;
    let curves = ProfileCurves::new(&profile);
    let quad = QuadSpec { n_theta: cfg.n_theta };
    let mut f = fs::File::create(out.join("reduce.csv"))?;
    writeln!(f, "epsilon,d_hat_star,T0,T1")?;
    for &eps in &cfg.eps_list {
        let dh = solve_dhat(&curves, &params, eps, cfg.alpha0, quad)?;
        let config = VortexConfig::new(eps, 2, dh)?;
        let (t0, t1) = reduction_integrals(&curves, &config, &params, cfg.alpha0, quad)?;
        writeln!(f, "{eps:.16e},{dh:.16e},{t0:.16e},{t1:.16e}")?;
    }
    let mut g = fs::File::create(out.join("equilibrium.csv"))?;
    writeln!(g, "k,central,rho_star_scaled")?;
    let sqrt_l = (-cfg.epsilon.ln()).sqrt();
    for (k, central) in [(2usize, 0i32), (3, 0), (4, 0), (5, 0), (4, -1), (5, -1)] {
        let rho = equilibrium_radius(k, cfg.epsilon, central)?;
        writeln!(g, "{k},{central},{:.16e}", rho * sqrt_l)?;
    }
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<()> {
    if cfg.k != 2 || cfg.central || cfg.conjugate_minus {
        return Err(Error::ValidationFailure(
            "the sweep uses the closed-form residual of the plain two-vortex ansatz".into(),
        ));
    }
    let (params, profile) = solve_from_config(cfg)?;
    let curves = ProfileCurves::new(&profile);
    let quad = QuadSpec { n_theta: cfg.n_theta };
    let mut f = fs::File::create(out.join("sweep.csv"))?;
    writeln!(f, "epsilon,norm_starstar,seminorm_r_o_alpha,norm_r_o_beta,d_hat_star")?;
    for &eps in &cfg.eps_list {
        let (report, sharp_alpha, beta_total) =
            error_norms_analytic(&curves, &params, cfg, eps)?;
        let dh = solve_dhat(&curves, &params, eps, cfg.alpha0, quad)?;
        writeln!(
            f,
            "{eps:.16e},{:.16e},{sharp_alpha:.16e},{beta_total:.16e},{dh:.16e}",
            report.total(),
        )?;
    }
    Ok(())
}

fn cmd_helix(cfg: &RunConfig, out: &Path) -> Result<()> {
    let (params, profile) = solve_from_config(cfg)?;
    let curves = ProfileCurves::new(&profile);
    let central_degree = if cfg.central { -1 } else { 0 };
    let rho_star = equilibrium_radius(cfg.k, cfg.epsilon, central_degree)?;
    let fil = FilamentConfig::new(
        cfg.k,
        rho_star * (-cfg.epsilon.ln()).sqrt(),
        cfg.epsilon,
        central_degree,
    )?;
    let curves3d = filament_curves(&fil, cfg.helix_samples)?;
    let mut f = fs::File::create(out.join("helix_curves.csv"))?;
    export_curves(&curves3d, &mut f)?;

    // slices are plot data; sample them at dump_stride times the pipeline
    // spacing to keep the files reasonable
    let config = cfg.vortex_config()?;
    let slice_grid =
        config.default_grid(cfg.grid_margin, cfg.grid_h * cfg.dump_stride.max(1) as f64);
    let field = build_ansatz(&curves, &config, &slice_grid);
    let mut f = fs::File::create(out.join("slice_corot.csv"))?;
    export_slice(&field, cfg.k, cfg.slice_t, SliceFrame::CoRotating, &mut f)?;
    let mut f = fs::File::create(out.join("slice_lab.csv"))?;
    export_slice(&field, cfg.k, cfg.slice_t, SliceFrame::Lab, &mut f)?;
    let _ = params;
    Ok(())
}

/// Consistency probe used by tests: the reflection law of the odd part at a
/// few points (cheap smoke check of the analytic pipeline).
pub fn odd_reflection_defect(cfg: &RunConfig) -> Result<f64> {
    let (params, profile) = solve_from_config(cfg)?;
    let curves = ProfileCurves::new(&profile);
    let config = cfg.vortex_config()?;
    let normp = cfg.norm_params(&config)?;
    let ana = AnsatzAnalytic::new(&curves, config, params)?;
    let r_eval = FnField(|z: Complex64| ana.residual(z).ok());
    let odd = OddPartEval::new(&r_eval, &config, &normp);
    let e1 = config.centers()[0];
    let mut worst = 0.0f64;
    for &dz in &[Complex64::new(2.5, 1.0), Complex64::new(-3.0, -2.0)] {
        let z = e1 + dz;
        let a = odd.eval(z).unwrap();
        let b = odd.eval(reflect(e1, z)).unwrap();
        for c in 0..2 {
            worst = worst.max((b[c] - a[c].conj()).norm());
        }
    }
    Ok(worst)
}

/// Evaluate the ansatz on demand (used by the book snippets).
pub fn ansatz_value(cfg: &RunConfig, z: Complex64) -> Result<[Complex64; 2]> {
    let (_, profile) = solve_from_config(cfg)?;
    let curves = ProfileCurves::new(&profile);
    let config = cfg.vortex_config()?;
    Ok(AnsatzEvaluator::new(&curves, config).value(z))
}
