//! The relative-velocity integrals `Γ(λ, κ)`.
//!
//! `Γ(λ, κ) = ∫ B [H^λ(g'/√2) - H^λ(g/√2)] H^κ(g/√2) e^{-|g|²/4} dχ dn dg`.
//! Splitting both Hermite polynomials into Laguerre × Ikenberry factors
//! reduces it to a sphere integral, a one-dimensional angular moment of the
//! kernel and a Gauss–Laguerre radial integral.

use rayon::prelude::*;

use super::harmonic::{hermite_to_harmonic, sphere_integral};
use crate::basis::{index_count, laguerre_eval, IndexLayout, MultiIndex};
use crate::error::Result;
use crate::kernels::{ipl_angular_moments, KernelSpec};
use crate::quad::gauss_laguerre;

/// `Φ_ℓ = ∫ b(χ) (P_ℓ(cos χ) - 1) dχ` for `ℓ ≤ l_max`.
pub fn angular_moments(kernel: &KernelSpec, l_max: usize) -> Result<Vec<f64>> {
    match kernel {
        KernelSpec::HardSphere { .. } | KernelSpec::Vhs { .. } => {
            Ok((0..=l_max).map(|l| if l == 0 { 0.0 } else { -2.0 }).collect())
        }
        KernelSpec::Ipl { eta, .. } => ipl_angular_moments(*eta, l_max),
    }
}

/// `R(ℓ, a, b) = C Φ_ℓ 2^{2+s+ℓ} ∫ t^{ℓ+(1+s)/2} L_a^{(ℓ+1/2)} L_b^{(ℓ+1/2)} e^{-t} dt`.
struct Radial {
    a_max: usize,
    b_max: usize,
    values: Vec<f64>,
}

impl Radial {
    fn new(kernel: &KernelSpec, m0: usize, phi: &[f64]) -> Self {
        let s = kernel.speed_exponent();
        let c = kernel.prefactor();
        let a_max = m0 / 2;
        let b_max = m0;
        let rule = gauss_laguerre(2 * m0 + 2, 0.5 * (1.0 + s));
        let mut values = vec![0.0; (m0 + 1) * (a_max + 1) * (b_max + 1)];
        for l in 1..=m0 {
            let alpha = l as f64 + 0.5;
            let lag: Vec<Vec<f64>> = rule
                .nodes
                .iter()
                .map(|&t| (0..=b_max).map(|n| laguerre_eval(n, alpha, t)).collect())
                .collect();
            let scale = c * phi[l] * 2f64.powf(2.0 + s + l as f64);
            for a in 0..=a_max {
                for b in 0..=b_max {
                    let integral: f64 = rule
                        .nodes
                        .iter()
                        .zip(&rule.weights)
                        .zip(&lag)
                        .map(|((&t, &w), lg)| w * t.powi(l as i32) * lg[a] * lg[b])
                        .sum();
                    values[(l * (a_max + 1) + a) * (b_max + 1) + b] = scale * integral;
                }
            }
        }
        Radial {
            a_max,
            b_max,
            values,
        }
    }

    fn get(&self, l: usize, a: usize, b: usize) -> f64 {
        self.values[(l * (self.a_max + 1) + a) * (self.b_max + 1) + b]
    }
}

/// Sphere integrals grouped by common degree.
struct SphereTable {
    per_degree: Vec<Vec<f64>>,
}

impl SphereTable {
    fn new(max_degree: usize) -> Self {
        let per_degree = (0..=max_degree)
            .map(|l| {
                let idx = degree_indices(l);
                let n = idx.len();
                let mut m = vec![0.0; n * n];
                for (i, a) in idx.iter().enumerate() {
                    for (j, b) in idx.iter().enumerate() {
                        m[i * n + j] = sphere_integral(*a, *b);
                    }
                }
                m
            })
            .collect();
        SphereTable { per_degree }
    }

    fn get(&self, a: MultiIndex, b: MultiIndex) -> f64 {
        let l = a.degree();
        let base = if l == 0 { 0 } else { index_count(l - 1) };
        let n = (l + 1) * (l + 2) / 2;
        self.per_degree[l][(a.rank() - base) * n + (b.rank() - base)]
    }
}

fn degree_indices(l: usize) -> Vec<MultiIndex> {
    let lo = if l == 0 { 0 } else { index_count(l - 1) };
    IndexLayout::new(l).indices()[lo..].to_vec()
}

/// Dense table of `Γ(λ, κ)` for `|λ| ≤ M0`, `|κ| ≤ 2M0`.
#[derive(Clone, Debug)]
pub struct GammaTable {
    m0: usize,
    n_kappa: usize,
    values: Vec<f64>,
}

impl GammaTable {
    pub fn new(kernel: &KernelSpec, m0: usize) -> Result<Self> {
        kernel.validate()?;
        let phi = angular_moments(kernel, m0)?;
        let radial = Radial::new(kernel, m0, &phi);
        let sphere = SphereTable::new(m0);
        let lambdas = IndexLayout::new(m0);
        let kappas = IndexLayout::new(2 * m0);
        let split_k: Vec<Vec<(MultiIndex, f64)>> =
            kappas.iter().map(hermite_to_harmonic).collect();
        let n_kappa = kappas.len();
        let rows: Vec<Vec<f64>> = lambdas
            .indices()
            .par_iter()
            .map(|&lambda| {
                let split_l = hermite_to_harmonic(lambda);
                kappas
                    .iter()
                    .map(|kappa| {
                        if (0..3).any(|d| (lambda.0[d] + kappa.0[d]) % 2 != 0) {
                            return 0.0;
                        }
                        gamma_from_parts(lambda, &split_l, kappa, &split_k[kappa.rank()], &radial, &sphere)
                    })
                    .collect()
            })
            .collect();
        Ok(GammaTable {
            m0,
            n_kappa,
            values: rows.concat(),
        })
    }

    pub fn max_degree(&self) -> usize {
        self.m0
    }

    #[inline]
    pub fn get(&self, lambda: MultiIndex, kappa: MultiIndex) -> f64 {
        self.values[lambda.rank() * self.n_kappa + kappa.rank()]
    }
}

fn gamma_from_parts(
    lambda: MultiIndex,
    split_l: &[(MultiIndex, f64)],
    kappa: MultiIndex,
    split_k: &[(MultiIndex, f64)],
    radial: &Radial,
    sphere: &SphereTable,
) -> f64 {
    let (kl, kk) = (lambda.degree(), kappa.degree());
    let mut sum = 0.0;
    for &(m, cm) in split_l {
        let l = kl - 2 * m.degree();
        if l == 0 {
            continue;
        }
        let yl = lambda.checked_sub(m.add(m)).expect("2m <= lambda");
        for &(n, cn) in split_k {
            if kk - 2 * n.degree() != l {
                continue;
            }
            let yk = kappa.checked_sub(n.add(n)).expect("2n <= kappa");
            let s = sphere.get(yl, yk);
            if s != 0.0 {
                sum += cm * cn * s * radial.get(l, m.degree(), n.degree());
            }
        }
    }
    2.0 * std::f64::consts::PI * sum
}

/// Single `Γ(λ, κ)` value; builds the supporting tables for this pair only.
pub fn gamma_coeff(kernel: &KernelSpec, lambda: MultiIndex, kappa: MultiIndex) -> Result<f64> {
    if (0..3).any(|d| (lambda.0[d] + kappa.0[d]) % 2 != 0) {
        return Ok(0.0);
    }
    let m0 = lambda.degree().max(kappa.degree().div_ceil(2)).max(1);
    let phi = angular_moments(kernel, m0)?;
    let radial = Radial::new(kernel, m0, &phi);
    let sphere = SphereTable::new(m0);
    Ok(gamma_from_parts(
        lambda,
        &hermite_to_harmonic(lambda),
        kappa,
        &hermite_to_harmonic(kappa),
        &radial,
        &sphere,
    ))
}
