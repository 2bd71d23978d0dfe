//! Block-tridiagonal Thomas solver for the coupled radial Newton step.
//!
//! The radial Jacobian couples the two components pointwise and neighbouring
//! nodes through the difference stencil, giving 2x2 blocks on three diagonals.

use crate::error::{Error, Result};

type Block = [f64; 4]; // row-major 2x2

fn mul2(a: &Block, b: &Block) -> Block {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn mv2(a: &Block, v: &[f64; 2]) -> [f64; 2] {
    [a[0] * v[0] + a[1] * v[1], a[2] * v[0] + a[3] * v[1]]
}

fn inv2(a: &Block) -> Option<Block> {
    let det = a[0] * a[3] - a[1] * a[2];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let d = 1.0 / det;
    Some([a[3] * d, -a[1] * d, -a[2] * d, a[0] * d])
}

/// Block-tridiagonal matrix with 2x2 blocks.
pub struct BlockTridiag {
    n: usize,
    lower: Vec<Block>,
    diag: Vec<Block>,
    upper: Vec<Block>,
}

impl BlockTridiag {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            lower: vec![[0.0; 4]; n],
            diag: vec![[0.0; 4]; n],
            upper: vec![[0.0; 4]; n],
        }
    }

    /// Entry (r, c) of the 2x2 block coupling node `i` to node `i + off`.
    pub fn set(&mut self, i: usize, off: i64, r: usize, c: usize, v: f64) {
        let slot = r * 2 + c;
        match off {
            -1 => self.lower[i][slot] = v,
            0 => self.diag[i][slot] = v,
            1 => self.upper[i][slot] = v,
            _ => panic!("off must be -1, 0, or 1"),
        }
    }

    /// Solve in place by block Thomas elimination.
    pub fn solve(mut self, mut rhs: Vec<[f64; 2]>) -> Result<Vec<[f64; 2]>> {
        assert_eq!(rhs.len(), self.n);
        for i in 1..self.n {
            let dinv =
                inv2(&self.diag[i - 1]).ok_or(Error::SingularSystem("block tridiagonal"))?;
            let l = mul2(&self.lower[i], &dinv);
            let lu = mul2(&l, &self.upper[i - 1]);
            for s in 0..4 {
                self.diag[i][s] -= lu[s];
            }
            let lr = mv2(&l, &rhs[i - 1]);
            rhs[i][0] -= lr[0];
            rhs[i][1] -= lr[1];
        }
        let mut x = vec![[0.0; 2]; self.n];
        let dinv = inv2(&self.diag[self.n - 1]).ok_or(Error::SingularSystem("block tridiagonal"))?;
        x[self.n - 1] = mv2(&dinv, &rhs[self.n - 1]);
        for i in (0..self.n - 1).rev() {
            let ux = mv2(&self.upper[i], &x[i + 1]);
            let r = [rhs[i][0] - ux[0], rhs[i][1] - ux[1]];
            let dinv = inv2(&self.diag[i]).ok_or(Error::SingularSystem("block tridiagonal"))?;
            x[i] = mv2(&dinv, &r);
        }
        Ok(x)
    }
}
