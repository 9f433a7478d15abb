//! Independent quadrature oracles shared by the integration tests.

use std::f64::consts::PI;

use hermite_kinetic::basis::{hermite_all, IndexLayout, MultiIndex};
use hermite_kinetic::kernels::KernelSpec;
use hermite_kinetic::quad::{gauss_hermite_phys, gauss_laguerre, gauss_legendre};

fn hermite_products(layout: &IndexLayout, x: [f64; 3]) -> Vec<f64> {
    let m = layout.max_degree();
    let h: Vec<Vec<f64>> = x.iter().map(|&xi| hermite_all(m, xi)).collect();
    layout
        .iter()
        .map(|a| h[0][a.0[0]] * h[1][a.0[1]] * h[2][a.0[2]])
        .collect()
}

/// `A_α^{β,γ}` by direct quadrature of
/// `1/((2π)³α!) ∫∫∫∫ B [H_α(v') - H_α(v)] H_β(v) H_γ(v₁) e^{-(|v|²+|v₁|²)/2}`
/// in centre-of-mass and relative variables. Dense `[α][β][γ]` by rank.
/// Only kernels with angular factor `sin χ` (hard sphere, VHS).
pub fn brute_force_tensor(kernel: &KernelSpec, m0: usize) -> Vec<f64> {
    assert!(!matches!(kernel, KernelSpec::Ipl { .. }));
    let layout = IndexLayout::new(m0);
    let n = layout.len();
    let s = kernel.speed_exponent();
    let c = kernel.prefactor();

    let gh = gauss_hermite_phys(3 * m0 / 2 + 2);
    let lag = gauss_laguerre(m0 + 3, 0.5 * (1.0 + s));
    let ndir = 3 * m0 / 2 + 2;
    let gl_dir = gauss_legendre(ndir);
    let nphi = 2 * ndir;
    let gl_chi = gauss_legendre(m0 + 2);
    let neps = 2 * m0 + 2;

    let mut acc = vec![0.0; n * n * n];
    let mut gain = vec![0.0; n];
    for (i1, &h1) in gh.nodes.iter().enumerate() {
        for (i2, &h2) in gh.nodes.iter().enumerate() {
            for (i3, &h3) in gh.nodes.iter().enumerate() {
                let wh = gh.weights[i1] * gh.weights[i2] * gh.weights[i3];
                let h = [h1, h2, h3];
                for (&t, &wt) in lag.nodes.iter().zip(&lag.weights) {
                    let g = 2.0 * t.sqrt();
                    let wr = wt * 2f64.powf(2.0 + s) * c;
                    for (&ct, &wct) in gl_dir.nodes.iter().zip(&gl_dir.weights) {
                        let st = (1.0 - ct * ct).sqrt();
                        for p in 0..nphi {
                            let ph = 2.0 * PI * p as f64 / nphi as f64;
                            let wd = wct * 2.0 * PI / nphi as f64;
                            let gh_ = [st * ph.cos(), st * ph.sin(), ct];
                            let e1 = [ct * ph.cos(), ct * ph.sin(), -st];
                            let e2 = [-ph.sin(), ph.cos(), 0.0];
                            let v: [f64; 3] = std::array::from_fn(|d| h[d] + 0.5 * g * gh_[d]);
                            let v1: [f64; 3] = std::array::from_fn(|d| h[d] - 0.5 * g * gh_[d]);
                            let hv = hermite_products(&layout, v);
                            let hv1 = hermite_products(&layout, v1);
                            gain.iter_mut().for_each(|x| *x = 0.0);
                            let mut wsum = 0.0;
                            for (&x, &wx) in gl_chi.nodes.iter().zip(&gl_chi.weights) {
                                let sx = (1.0 - x * x).sqrt();
                                for q in 0..neps {
                                    let eps = 2.0 * PI * q as f64 / neps as f64;
                                    let w = wx * 2.0 * PI / neps as f64;
                                    let vp: [f64; 3] = std::array::from_fn(|d| {
                                        let nd = eps.cos() * e1[d] + eps.sin() * e2[d];
                                        h[d] + 0.5 * g * (x * gh_[d] - sx * nd)
                                    });
                                    let hvp = hermite_products(&layout, vp);
                                    for a in 0..n {
                                        gain[a] += w * hvp[a];
                                    }
                                    wsum += w;
                                }
                            }
                            let wtot = wh * wr * wd;
                            for a in 0..n {
                                let ga = wtot * (gain[a] - wsum * hv[a]);
                                if ga == 0.0 {
                                    continue;
                                }
                                let base = a * n * n;
                                for b in 0..n {
                                    let gb = ga * hv[b];
                                    let row = &mut acc[base + b * n..base + (b + 1) * n];
                                    for (r, &x) in row.iter_mut().zip(&hv1) {
                                        *r += gb * x;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for (a, alpha) in layout.iter().enumerate() {
        let norm = 1.0 / ((2.0 * PI).powi(3) * alpha.factorial());
        for v in &mut acc[a * n * n..(a + 1) * n * n] {
            *v *= norm;
        }
    }
    acc
}

pub fn tensor_index(layout: &IndexLayout, a: MultiIndex, b: MultiIndex, c: MultiIndex) -> usize {
    let n = layout.len();
    (a.rank() * n + b.rank()) * n + c.rank()
}
