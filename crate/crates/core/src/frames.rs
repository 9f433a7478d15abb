//! Coefficient vectors, the exact change of expansion frame, and moment extraction.

use crate::basis::{index_count, Frame, IndexLayout, MultiIndex};
use crate::error::{Error, Result};

/// Truncated expansion `f_M = Σ_{|α|≤M} f̃_α ℋ_α^{[ū,θ̄]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffVector {
    frame: Frame,
    max_degree: usize,
    values: Vec<f64>,
}

impl CoeffVector {
    pub fn zeros(frame: Frame, max_degree: usize) -> Self {
        CoeffVector {
            frame,
            max_degree,
            values: vec![0.0; index_count(max_degree)],
        }
    }

    pub fn from_values(frame: Frame, max_degree: usize, values: Vec<f64>) -> Result<Self> {
        let n = index_count(max_degree);
        if values.len() != n {
            return Err(Error::InvalidParameter(format!(
                "degree {max_degree} needs {n} coefficients, got {}",
                values.len()
            )));
        }
        Ok(CoeffVector {
            frame,
            max_degree,
            values,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `f̃_α`, zero outside the truncation.
    pub fn get(&self, alpha: MultiIndex) -> f64 {
        if alpha.degree() > self.max_degree {
            0.0
        } else {
            self.values[alpha.rank()]
        }
    }

    pub fn set(&mut self, alpha: MultiIndex, value: f64) -> Result<()> {
        if alpha.degree() > self.max_degree {
            return Err(Error::DegreeOverflow {
                degree: alpha.degree(),
                max: self.max_degree,
            });
        }
        self.values[alpha.rank()] = value;
        Ok(())
    }

    pub fn rho(&self) -> f64 {
        self.values[0]
    }

    /// Relabels the frame without touching the coefficients.
    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }
}

/// Reexpands `c` in `target`.
///
/// In generating-function form the coefficients are multiplied by
/// `exp(s·(w−w*) + (η−η*)|s|²/2)`, which raises polynomial degree only, so the
/// truncated result is exact. The exponential is summed term by term:
/// `φ⁽ᵏ⁾_α = (1/k) Σ_j [(w_j−w*_j) φ⁽ᵏ⁻¹⁾_{α−e_j} + ½(η−η*) φ⁽ᵏ⁻¹⁾_{α−2e_j}]`.
pub fn change_frame(c: &CoeffVector, target: &Frame) -> CoeffVector {
    let src = c.frame;
    let shift = [
        src.u_bar[0] - target.u_bar[0],
        src.u_bar[1] - target.u_bar[1],
        src.u_bar[2] - target.u_bar[2],
    ];
    let half_gap = 0.5 * (src.theta_bar - target.theta_bar);
    if shift == [0.0; 3] && half_gap == 0.0 {
        return c.clone().with_frame(*target);
    }
    let layout = IndexLayout::new(c.max_degree);
    let mut out = c.values.clone();
    let mut phi = c.values.clone();
    let mut next = vec![0.0; phi.len()];
    for k in 1..=c.max_degree {
        let inv_k = 1.0 / k as f64;
        // φ⁽ᵏ⁾ vanishes below degree k.
        let start = index_count(k - 1);
        next[..start].iter_mut().for_each(|x| *x = 0.0);
        for (i, alpha) in layout.indices().iter().enumerate().skip(start) {
            let mut acc = 0.0;
            for j in 0..3 {
                if let Some(b) = alpha.minus_axis(j, 1) {
                    acc += shift[j] * phi[b.rank()];
                }
                if let Some(b) = alpha.minus_axis(j, 2) {
                    acc += half_gap * phi[b.rank()];
                }
            }
            next[i] = acc * inv_k;
        }
        std::mem::swap(&mut phi, &mut next);
        for (o, p) in out.iter_mut().zip(&phi) {
            *o += p;
        }
    }
    CoeffVector {
        frame: *target,
        max_degree: c.max_degree,
        values: out,
    }
}

/// Coefficients of `ρℳ_{u,θ}` in `frame`, truncated at degree `m`.
pub fn maxwellian_coeffs(rho: f64, u: [f64; 3], theta: f64, frame: &Frame, m: usize) -> Result<CoeffVector> {
    if !(rho > 0.0) || !(theta > 0.0) {
        return Err(Error::InadmissibleState { rho, theta });
    }
    let own = Frame::new(u, theta)?;
    let mut c = CoeffVector::zeros(own, m);
    c.values[0] = rho;
    Ok(change_frame(&c, frame))
}

/// Macroscopic quantities of a truncated distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentSet {
    pub rho: f64,
    pub momentum: [f64; 3],
    pub energy: f64,
    pub u: [f64; 3],
    pub theta: f64,
    pub sigma: [[f64; 3]; 3],
    pub q: [f64; 3],
}

impl MomentSet {
    pub fn temperature(&self, mass: f64, kb: f64) -> f64 {
        self.theta * mass / kb
    }

    pub fn pressure(&self) -> f64 {
        self.rho * self.theta
    }
}

fn e2(i: usize, j: usize) -> MultiIndex {
    MultiIndex::unit(i).plus_axis(j, 1)
}

/// Density, momentum, energy, velocity, temperature, stress and heat flux.
///
/// Only coefficients of degree `≤ 3` enter; with `d = ū − u`,
/// `σ_ij = (1+δ_ij) f̃_{e_i+e_j} + δ_ij ρ(θ̄−θ) − ρ d_i d_j` and
/// `q_i = 3f̃_{3e_i} + Σ_{k≠i} f̃_{2e_k+e_i} + Σ_k (1+δ_ki) d_k f̃_{e_k+e_i} + ρ d_i (3(θ−θ̄) − |d|²)/2`.
pub fn moments(c: &CoeffVector) -> Result<MomentSet> {
    let rho = c.rho();
    let ub = c.frame.u_bar;
    let tb = c.frame.theta_bar;
    if !(rho > 0.0) {
        return Err(Error::InadmissibleState {
            rho,
            theta: f64::NAN,
        });
    }
    let flux = [0, 1, 2].map(|i| c.get(MultiIndex::unit(i)));
    let momentum = [0, 1, 2].map(|i| rho * ub[i] + flux[i]);
    let trace2: f64 = (0..3).map(|i| c.get(MultiIndex::unit(i).plus_axis(i, 1))).sum();
    let m_dot_ub: f64 = (0..3).map(|i| momentum[i] * ub[i]).sum();
    let ub2: f64 = ub.iter().map(|x| x * x).sum();
    let energy = m_dot_ub - 0.5 * rho * ub2 + 1.5 * rho * tb + trace2;
    let u = momentum.map(|m| m / rho);
    let u2: f64 = u.iter().map(|x| x * x).sum();
    let theta = (2.0 * energy - rho * u2) / (3.0 * rho);
    if !(theta > 0.0) {
        return Err(Error::InadmissibleState { rho, theta });
    }
    let d = [ub[0] - u[0], ub[1] - u[1], ub[2] - u[2]];
    let d2: f64 = d.iter().map(|x| x * x).sum();

    let mut sigma = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let diag = i == j;
            let base = if diag { 2.0 } else { 1.0 } * c.get(e2(i, j));
            let iso = if diag { rho * (tb - theta) } else { 0.0 };
            sigma[i][j] = base + iso - rho * d[i] * d[j];
        }
    }

    let mut q = [0.0; 3];
    for i in 0..3 {
        let ei = MultiIndex::unit(i);
        let mut acc = 3.0 * c.get(ei.plus_axis(i, 2));
        for k in 0..3 {
            if k != i {
                acc += c.get(ei.plus_axis(k, 2));
            }
            let w = if k == i { 2.0 } else { 1.0 };
            acc += w * d[k] * c.get(e2(k, i));
        }
        acc += 0.5 * rho * d[i] * (3.0 * (theta - tb) - d2);
        q[i] = acc;
    }

    Ok(MomentSet {
        rho,
        momentum,
        energy,
        u,
        theta,
        sigma,
        q,
    })
}

/// `h̃_α = f̃_α / (ρ θ̄^{|α|/2})`.
pub fn nondimensionalize(c: &CoeffVector) -> Result<Vec<f64>> {
    let rho = c.rho();
    if !(rho > 0.0) {
        return Err(Error::InadmissibleState {
            rho,
            theta: c.frame.theta_bar,
        });
    }
    let scale = degree_scales(c.max_degree, 1.0 / c.frame.theta_bar.sqrt());
    let layout = IndexLayout::new(c.max_degree);
    Ok(layout
        .iter()
        .zip(&c.values)
        .map(|(a, v)| v / rho * scale[a.degree()])
        .collect())
}

/// Inverse of [`nondimensionalize`].
pub fn redimensionalize(h: &[f64], rho: f64, frame: &Frame) -> Result<CoeffVector> {
    let m = degree_for_len(h.len()).ok_or_else(|| {
        Error::InvalidParameter(format!("{} is not a full coefficient count", h.len()))
    })?;
    let scale = degree_scales(m, frame.theta_bar.sqrt());
    let layout = IndexLayout::new(m);
    let values = layout
        .iter()
        .zip(h)
        .map(|(a, v)| v * rho * scale[a.degree()])
        .collect();
    CoeffVector::from_values(*frame, m, values)
}

/// `[1, s, s², …, s^m]`.
pub(crate) fn degree_scales(m: usize, s: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(m + 1);
    let mut p = 1.0;
    for _ in 0..=m {
        out.push(p);
        p *= s;
    }
    out
}

/// Truncation degree `M` with `index_count(M) == n`.
pub fn degree_for_len(n: usize) -> Option<usize> {
    (0..).map(|m| (m, index_count(m))).find(|&(_, c)| c >= n).and_then(|(m, c)| (c == n).then_some(m))
}
