//! Linearization about the unit Maxwellian and the tail decay rate.

use nalgebra::{DMatrix, SymmetricEigen};

use super::CollisionTensor;
use crate::basis::{IndexLayout, MultiIndex};
use crate::error::{Error, Result};

/// `L_{αβ} = A_α^{0,β} + A_α^{β,0}` over `|α|, |β| ≤ M0`.
#[derive(Clone, Debug)]
pub struct LinearizedMatrix {
    m0: usize,
    matrix: DMatrix<f64>,
    nu: f64,
}

impl LinearizedMatrix {
    pub fn m0(&self) -> usize {
        self.m0
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Decay rate `ν_{M0}`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `out = L h` on the first `N_{M0}` coefficients.
    pub fn apply(&self, h: &[f64], out: &mut [f64]) {
        let n = self.matrix.nrows();
        for (a, o) in out.iter_mut().enumerate().take(n) {
            *o = (0..n).map(|b| self.matrix[(a, b)] * h[b]).sum();
        }
    }

    /// Eigenvalues of `L`, ascending.
    ///
    /// `L` is self-adjoint for the weight `α!`, so `D^{1/2} L D^{-1/2}` with
    /// `D = diag(α!)` is symmetric up to roundoff and shares its spectrum.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let layout = IndexLayout::new(self.m0);
        let sq: Vec<f64> = layout.iter().map(|a| a.factorial().sqrt()).collect();
        let n = self.matrix.nrows();
        let s = DMatrix::from_fn(n, n, |i, j| {
            let x = sq[i] * self.matrix[(i, j)] / sq[j];
            let y = sq[j] * self.matrix[(j, i)] / sq[i];
            0.5 * (x + y)
        });
        let mut ev: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

pub fn linearized_matrix(tensor: &CollisionTensor) -> Result<LinearizedMatrix> {
    let layout = IndexLayout::new(tensor.m0());
    let n = layout.len();
    let mut matrix = DMatrix::zeros(n, n);
    for e in tensor.entries() {
        if e.beta == MultiIndex::ZERO {
            matrix[(e.alpha.rank(), e.gamma.rank())] += e.value;
        }
        if e.gamma == MultiIndex::ZERO {
            matrix[(e.alpha.rank(), e.beta.rank())] += e.value;
        }
    }
    let mut lin = LinearizedMatrix {
        m0: tensor.m0(),
        matrix,
        nu: 0.0,
    };
    lin.nu = decay_rate(&lin)?;
    Ok(lin)
}

/// Spectral radius of `L`.
pub fn decay_rate(lin: &LinearizedMatrix) -> Result<f64> {
    let ev = lin.eigenvalues();
    let nu = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Eigen(format!("degenerate linearized spectrum (radius {nu})")));
    }
    Ok(nu)
}
