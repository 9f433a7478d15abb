//! Convection matrices `A_d`, their spectra, and the HLL flux.

use crate::basis::{hermite_roots, max_hermite_root, Frame, IndexLayout, MultiIndex};
use crate::error::Result;
use crate::frames::CoeffVector;

const NONE: u32 = u32::MAX;

/// Matrix-free `A_d` for a fixed frame and truncation.
#[derive(Clone, Debug)]
pub struct Transport {
    frame: Frame,
    max_degree: usize,
    speed: f64,
    up: [Vec<u32>; 3],
    up_coef: [Vec<f64>; 3],
    down: [Vec<u32>; 3],
}

impl Transport {
    pub fn new(frame: Frame, max_degree: usize) -> Result<Self> {
        let layout = IndexLayout::new(max_degree);
        let link = |shift: &dyn Fn(usize, MultiIndex) -> Option<MultiIndex>| {
            [0, 1, 2].map(|d| {
                layout
                    .iter()
                    .map(|a| match shift(d, a) {
                        Some(b) if b.degree() <= max_degree => b.rank() as u32,
                        _ => NONE,
                    })
                    .collect::<Vec<u32>>()
            })
        };
        let up = link(&|d, a| Some(a.plus_axis(d, 1)));
        let down = link(&|d, a| a.minus_axis(d, 1));
        let up_coef = [0, 1, 2].map(|d| layout.iter().map(|a| (a.get(d) + 1) as f64).collect());
        Ok(Transport {
            frame,
            max_degree,
            speed: max_hermite_root(max_degree + 1)?,
            up,
            up_coef,
            down,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `C_{M+1}`, the largest root of `He_{M+1}`.
    pub fn root(&self) -> f64 {
        self.speed
    }

    /// `(λ^L, λ^R) = ū_d ∓ C_{M+1}√θ̄`.
    pub fn wave_speeds(&self, axis: usize) -> (f64, f64) {
        let s = self.speed * self.frame.theta_bar.sqrt();
        let u = self.frame.u_bar[axis];
        (u - s, u + s)
    }

    /// `(A_d f)_α = (α_d+1) f_{α+e_d} + ū_d f_α + θ̄ f_{α−e_d}`.
    pub fn apply(&self, axis: usize, f: &[f64], out: &mut [f64]) {
        let ub = self.frame.u_bar[axis];
        let tb = self.frame.theta_bar;
        let up = &self.up[axis];
        let coef = &self.up_coef[axis];
        let down = &self.down[axis];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = ub * f[i];
            let u = up[i];
            if u != NONE {
                acc += coef[i] * f[u as usize];
            }
            let d = down[i];
            if d != NONE {
                acc += tb * f[d as usize];
            }
            *o = acc;
        }
    }

    /// HLL flux between face states `left` and `right`.
    pub fn hll(&self, axis: usize, left: &[f64], right: &[f64], out: &mut [f64]) {
        let (ll, lr) = self.wave_speeds(axis);
        if ll >= 0.0 {
            self.apply(axis, left, out);
            return;
        }
        if lr <= 0.0 {
            self.apply(axis, right, out);
            return;
        }
        let n = out.len();
        let mut al = vec![0.0; n];
        let mut ar = vec![0.0; n];
        self.apply(axis, left, &mut al);
        self.apply(axis, right, &mut ar);
        let inv = 1.0 / (lr - ll);
        for i in 0..n {
            out[i] = (lr * al[i] - ll * ar[i] + lr * ll * (right[i] - left[i])) * inv;
        }
    }

    /// Largest stable `Δt` for the CFL number `cfl` on cells of width `dx`.
    pub fn max_dt(&self, dx: f64, dims: usize, cfl: f64) -> f64 {
        let s = self.speed * self.frame.theta_bar.sqrt();
        let rate: f64 = (0..dims).map(|d| (self.frame.u_bar[d].abs() + s) / dx).sum();
        cfl / rate
    }
}

/// `A_d f` for a coefficient vector.
pub fn convection_flux(state: &CoeffVector, axis: usize) -> Result<CoeffVector> {
    let t = Transport::new(*state.frame(), state.max_degree())?;
    let mut out = CoeffVector::zeros(*state.frame(), state.max_degree());
    t.apply(axis, state.values(), out.values_mut());
    Ok(out)
}

pub fn hll_flux(left: &CoeffVector, right: &CoeffVector, axis: usize) -> Result<CoeffVector> {
    let t = Transport::new(*left.frame(), left.max_degree())?;
    let mut out = CoeffVector::zeros(*left.frame(), left.max_degree());
    t.hll(axis, left.values(), right.values(), out.values_mut());
    Ok(out)
}

/// Eigenvalues `ū_d + c_i√θ̄` of the block of `A_d` with transverse degree `transverse`.
pub fn block_spectrum(max_degree: usize, transverse: usize, frame: &Frame, axis: usize) -> Result<Vec<f64>> {
    let roots = hermite_roots(max_degree + 1 - transverse)?;
    let s = frame.theta_bar.sqrt();
    Ok(roots.iter().map(|c| frame.u_bar[axis] + c * s).collect())
}
