//! Banded LU without pivoting, for the Newton systems of the solver.
//!
//! The linearised Monge-Ampère operator is a uniformly elliptic 9-point (or
//! wide) stencil; in row-major node order its matrix is banded with half
//! bandwidth about one grid row.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let width = kl + ku + 1;
        BandMatrix { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku);
        i * self.width + (j + self.kl - i)
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let o = self.offset(i, j);
        self.data[o] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku {
            0.0
        } else {
            self.data[self.offset(i, j)]
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.data[self.offset(i, j)] * x[j]).sum()
            })
            .collect()
    }

    /// In-place LU factorisation; the unit lower factor is stored below the diagonal.
    pub fn factorize(mut self) -> Result<BandLu> {
        let (n, kl, ku, w) = (self.n, self.kl, self.ku, self.width);
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let pivot = self.data[k * w + kl];
            if pivot.abs() <= 1e-14 * scale {
                return Err(Error::SingularPivot(k));
            }
            let jmax = (k + ku).min(n - 1);
            let imax = (k + kl).min(n - 1);
            for i in k + 1..=imax {
                let oik = i * w + (k + kl - i);
                let f = self.data[oik] / pivot;
                self.data[oik] = f;
                if f == 0.0 {
                    continue;
                }
                let (head, tail) = self.data.split_at_mut(i * w);
                let row_k = &head[k * w + kl + 1..k * w + kl + 1 + (jmax - k)];
                let start = k + 1 + kl - i;
                let row_i = &mut tail[start..start + (jmax - k)];
                for (a, b) in row_i.iter_mut().zip(row_k) {
                    *a -= f * b;
                }
            }
        }
        Ok(BandLu { m: self })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    m: BandMatrix,
}

impl BandLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let BandMatrix { n, kl, ku, width: w, ref data } = self.m;
        let mut x = b.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let mut s = x[i];
            for (j, xj) in x.iter().enumerate().take(i).skip(lo) {
                s -= data[i * w + (j + kl - i)] * xj;
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let hi = (i + ku).min(n - 1);
            let mut s = x[i];
            for (j, xj) in x.iter().enumerate().take(hi + 1).skip(i + 1) {
                s -= data[i * w + (j + kl - i)] * xj;
            }
            x[i] = s / data[i * w + kl];
        }
        x
    }
}
