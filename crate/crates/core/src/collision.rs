//! The approximate quadratic collision operator `Q*` and its linearization.
//!
//! Both are evaluated by the same three steps: project onto the local
//! Maxwellian frame `(u, θ)`, apply the dimensionless model there, and
//! project back.

use crate::basis::{index_count, Frame, IndexLayout};
use crate::coeffs::{linearized_matrix, viscosity_constant, CollisionTensor, LinearizedMatrix};
use crate::error::Result;
use crate::frames::{change_frame, moments, nondimensionalize, CoeffVector, MomentSet};
use crate::kernels::{viscosity, GasSpec};

/// `Q̂_α = Σ A_α^{β,γ} h̃_β h̃_γ` for `|α| ≤ M0`.
///
/// `h` may be shorter or longer than `N_{M0}`; missing entries count as zero.
pub fn quadratic_rhs(h: &[f64], tensor: &CollisionTensor) -> Vec<f64> {
    let n0 = index_count(tensor.m0());
    let mut padded = vec![0.0; n0];
    let k = h.len().min(n0);
    padded[..k].copy_from_slice(&h[..k]);
    let mut out = vec![0.0; n0];
    tensor.contract(&padded, &mut out);
    out
}

/// Collision operator bound to a gas: the tensor, its linearization and the constants `c`, `ν`.
#[derive(Clone, Debug)]
pub struct CollisionOperator {
    tensor: CollisionTensor,
    linear: LinearizedMatrix,
    gas: GasSpec,
    c: f64,
    tail_density: bool,
}

impl CollisionOperator {
    pub fn new(tensor: CollisionTensor, gas: GasSpec) -> Result<Self> {
        let linear = linearized_matrix(&tensor)?;
        let c = viscosity_constant(&tensor)?;
        Ok(CollisionOperator {
            tensor,
            linear,
            gas,
            c,
            tail_density: true,
        })
    }

    /// Whether the tail damping carries the factor `ρ` (default `true`).
    pub fn with_tail_density(mut self, on: bool) -> Self {
        self.tail_density = on;
        self
    }

    pub fn tensor(&self) -> &CollisionTensor {
        &self.tensor
    }

    pub fn linear(&self) -> &LinearizedMatrix {
        &self.linear
    }

    pub fn gas(&self) -> &GasSpec {
        &self.gas
    }

    pub fn m0(&self) -> usize {
        self.tensor.m0()
    }

    pub fn nu(&self) -> f64 {
        self.linear.nu()
    }

    pub fn viscosity_constant(&self) -> f64 {
        self.c
    }

    /// `cθ/μ(T)`.
    pub fn time_scale(&self, m: &MomentSet) -> Result<f64> {
        let mu = viscosity(&self.gas, self.gas.temperature(m.theta))?;
        Ok(self.c * m.theta / mu)
    }

    /// Rate at which coefficients above `M0` are damped.
    pub fn damping_rate(&self, m: &MomentSet) -> Result<f64> {
        let density = if self.tail_density { m.rho } else { 1.0 };
        Ok(self.time_scale(m)? * self.nu() * density)
    }

    pub fn apply_qstar(&self, c: &CoeffVector) -> Result<CoeffVector> {
        self.apply_with(c, |h| quadratic_rhs(h, &self.tensor))
    }

    pub fn apply_linearized(&self, c: &CoeffVector) -> Result<CoeffVector> {
        self.apply_with(c, |h| {
            let n0 = index_count(self.m0());
            let mut padded = vec![0.0; n0];
            let k = h.len().min(n0);
            padded[..k].copy_from_slice(&h[..k]);
            let mut out = vec![0.0; n0];
            self.linear.apply(&padded, &mut out);
            out
        })
    }

    fn apply_with(&self, c: &CoeffVector, model: impl Fn(&[f64]) -> Vec<f64>) -> Result<CoeffVector> {
        let m = moments(c)?;
        let own = Frame::new(m.u, m.theta)?;
        let local = change_frame(c, &own);
        let h = nondimensionalize(&local)?;
        let q_hat = model(&h);

        let scale = self.time_scale(&m)?;
        let rate = self.damping_rate(&m)?;
        let quad = scale * m.rho * m.rho;
        let sq = m.theta.sqrt();
        let layout = IndexLayout::new(c.max_degree());
        let m0 = self.m0();
        let mut out = CoeffVector::zeros(own, c.max_degree());
        let mut pow = vec![1.0; c.max_degree() + 1];
        for d in 1..pow.len() {
            pow[d] = pow[d - 1] * sq;
        }
        for ((alpha, o), f) in layout.iter().zip(out.values_mut()).zip(local.values()) {
            let d = alpha.degree();
            *o = if d <= m0 {
                quad * pow[d] * q_hat[alpha.rank()]
            } else {
                -rate * f
            };
        }
        Ok(change_frame(&out, c.frame()))
    }
}
