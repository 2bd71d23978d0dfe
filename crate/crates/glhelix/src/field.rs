//! Uniform Cartesian grids and two-component complex fields.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Uniform rectangular grid with equal spacing in both directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x1_min: f64,
    pub x1_max: f64,
    pub x2_min: f64,
    pub x2_max: f64,
    pub n1: usize,
    pub n2: usize,
}

impl Grid2D {
    pub fn new(
        x1_min: f64,
        x1_max: f64,
        x2_min: f64,
        x2_max: f64,
        n1: usize,
        n2: usize,
    ) -> Result<Self> {
        if n1 < 2 || n2 < 2 || x1_max <= x1_min || x2_max <= x2_min {
            return Err(Error::InvalidParams("degenerate grid".into()));
        }
        let h1 = (x1_max - x1_min) / (n1 - 1) as f64;
        let h2 = (x2_max - x2_min) / (n2 - 1) as f64;
        if (h1 - h2).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!(
                "anisotropic spacing: h1={h1}, h2={h2}"
            )));
        }
        Ok(Self { x1_min, x1_max, x2_min, x2_max, n1, n2 })
    }

    /// Square grid centered at the origin; the spacing divides `2·half_width`
    /// exactly and is the largest value not above `h`.
    pub fn square(half_width: f64, h: f64) -> Self {
        let n = ((2.0 * half_width / h).ceil() as usize).max(2) + 1;
        Self {
            x1_min: -half_width,
            x1_max: half_width,
            x2_min: -half_width,
            x2_max: half_width,
            n1: n,
            n2: n,
        }
    }

    pub fn h(&self) -> f64 {
        (self.x1_max - self.x1_min) / (self.n1 - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x1(&self, i: usize) -> f64 {
        self.x1_min + self.h() * i as f64
    }

    pub fn x2(&self, j: usize) -> f64 {
        self.x2_min + self.h() * j as f64
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.n1 + i
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x1(i), self.x2(j))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x1_min && z.re <= self.x1_max && z.im >= self.x2_min && z.im <= self.x2_max
    }

    pub fn is_interior(&self, z: Complex64) -> bool {
        let h = self.h();
        z.re > self.x1_min + h
            && z.re < self.x1_max - h
            && z.im > self.x2_min + h
            && z.im < self.x2_max - h
    }
}

/// Two complex components sampled on a [`Grid2D`], with a validity mask.
#[derive(Debug, Clone)]
pub struct ComplexField2D {
    pub grid: Grid2D,
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
    pub mask: Vec<bool>,
}

impl ComplexField2D {
    pub fn zeros(grid: Grid2D) -> Self {
        let n = grid.len();
        Self {
            grid,
            plus: vec![Complex64::new(0.0, 0.0); n],
            minus: vec![Complex64::new(0.0, 0.0); n],
            mask: vec![true; n],
        }
    }

    /// Sample `f(z) -> (plus, minus)` on every node, rows in parallel.
    pub fn from_fn(grid: Grid2D, f: impl Fn(Complex64) -> [Complex64; 2] + Sync) -> Self {
        let n = grid.len();
        let mut plus = vec![Complex64::new(0.0, 0.0); n];
        let mut minus = vec![Complex64::new(0.0, 0.0); n];
        plus.par_chunks_mut(grid.n1)
            .zip(minus.par_chunks_mut(grid.n1))
            .enumerate()
            .for_each(|(j, (rp, rm))| {
                for i in 0..grid.n1 {
                    let v = f(grid.point(i, j));
                    rp[i] = v[0];
                    rm[i] = v[1];
                }
            });
        Self { grid, plus, minus, mask: vec![true; n] }
    }

    pub fn comp(&self, c: usize) -> &[Complex64] {
        if c == 0 { &self.plus } else { &self.minus }
    }

    pub fn comp_mut(&mut self, c: usize) -> &mut Vec<Complex64> {
        if c == 0 { &mut self.plus } else { &mut self.minus }
    }

    /// Bilinear sample; `None` outside the grid or when a stencil corner is
    /// masked out.
    pub fn sample(&self, z: Complex64) -> Option<[Complex64; 2]> {
        if !self.grid.contains(z) {
            return None;
        }
        let h = self.grid.h();
        let fx = (z.re - self.grid.x1_min) / h;
        let fy = (z.im - self.grid.x2_min) / h;
        let i = (fx.floor() as usize).min(self.grid.n1 - 2);
        let j = (fy.floor() as usize).min(self.grid.n2 - 2);
        let sx = fx - i as f64;
        let sy = fy - j as f64;
        let ids = [
            self.grid.idx(i, j),
            self.grid.idx(i + 1, j),
            self.grid.idx(i, j + 1),
            self.grid.idx(i + 1, j + 1),
        ];
        if ids.iter().any(|&q| !self.mask[q]) {
            return None;
        }
        let wts = [(1.0 - sx) * (1.0 - sy), sx * (1.0 - sy), (1.0 - sx) * sy, sx * sy];
        let mut out = [Complex64::new(0.0, 0.0); 2];
        for c in 0..2 {
            let d = self.comp(c);
            out[c] = ids.iter().zip(&wts).map(|(&q, &w)| d[q] * w).sum();
        }
        Some(out)
    }

    /// CSV dump `x1,x2,re_plus,im_plus,re_minus,im_minus`.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        self.write_csv_impl(out, false)
    }

    /// Same schema plus a trailing `mask` column (1 = valid).
    pub fn write_csv_masked(&self, out: &mut impl Write) -> std::io::Result<()> {
        self.write_csv_impl(out, true)
    }

    fn write_csv_impl(&self, out: &mut impl Write, with_mask: bool) -> std::io::Result<()> {
        if with_mask {
            writeln!(out, "x1,x2,re_plus,im_plus,re_minus,im_minus,mask")?;
        } else {
            writeln!(out, "x1,x2,re_plus,im_plus,re_minus,im_minus")?;
        }
        for j in 0..self.grid.n2 {
            for i in 0..self.grid.n1 {
                let q = self.grid.idx(i, j);
                if with_mask {
                    writeln!(
                        out,
                        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                        self.grid.x1(i),
                        self.grid.x2(j),
                        self.plus[q].re,
                        self.plus[q].im,
                        self.minus[q].re,
                        self.minus[q].im,
                        u8::from(self.mask[q]),
                    )?;
                } else {
                    writeln!(
                        out,
                        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                        self.grid.x1(i),
                        self.grid.x2(j),
                        self.plus[q].re,
                        self.plus[q].im,
                        self.minus[q].re,
                        self.minus[q].im,
                    )?;
                }
            }
        }
        Ok(())
    }
}
