//! Radial/angular splitting of Hermite polynomials and sphere integrals of
//! Ikenberry polynomials.

use std::f64::consts::PI;

use crate::basis::{double_factorial, factorial, MultiIndex};

/// Coefficients `C_m` with `H^κ(v) = Σ_m C_m L_{|m|}^{(k-2|m|+1/2)}(|v|²/2) Y^{κ-2m}(v)`.
///
/// `C_m = (-1)^{|m|} |m|! (2k-4|m|+1)!! / (2(k-|m|)+1)!! · Π κᵢ!/(mᵢ!(κᵢ-2mᵢ)!)`.
pub fn hermite_to_harmonic(kappa: MultiIndex) -> Vec<(MultiIndex, f64)> {
    let k = kappa.degree() as i64;
    let [k1, k2, k3] = kappa.0;
    let mut out = Vec::new();
    for m1 in 0..=k1 / 2 {
        for m2 in 0..=k2 / 2 {
            for m3 in 0..=k3 / 2 {
                let m = MultiIndex::new(m1, m2, m3);
                let mm = m.degree() as i64;
                let sign = if mm % 2 == 0 { 1.0 } else { -1.0 };
                let mut c = sign * factorial(mm as usize) * double_factorial(2 * k - 4 * mm + 1)
                    / double_factorial(2 * (k - mm) + 1);
                for d in 0..3 {
                    let (kd, md) = (kappa.0[d], m.0[d]);
                    c *= factorial(kd) / (factorial(md) * factorial(kd - 2 * md));
                }
                out.push((m, c));
            }
        }
    }
    out
}

/// `∫_{𝕊²} Y^κ Y^λ`, read off as the coefficient of `v^κ w^λ` in
/// `(4π/(2k+1)) κ!λ!/[(2k-1)!!]² (|v||w|)^k P_k(v̂·ŵ)`.
pub fn sphere_integral(kappa: MultiIndex, lambda: MultiIndex) -> f64 {
    let k = kappa.degree();
    if lambda.degree() != k || (0..3).any(|d| (kappa.0[d] + lambda.0[d]) % 2 != 0) {
        return 0.0;
    }
    let ki = k as i64;
    let mut sum = 0.0;
    for j in 0..=k / 2 {
        let p = k - 2 * j;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let cj = sign * factorial(2 * k - 2 * j)
            / (2f64.powi(ki as i32) * factorial(j) * factorial(k - j) * factorial(p));
        let mut inner = 0.0;
        for q1 in 0..=p.min(kappa.0[0]).min(lambda.0[0]) {
            for q2 in 0..=(p - q1).min(kappa.0[1]).min(lambda.0[1]) {
                let q3 = p - q1 - q2;
                let q = MultiIndex::new(q1, q2, q3);
                let (Some(a), Some(b)) = (kappa.checked_sub(q), lambda.checked_sub(q)) else {
                    continue;
                };
                if (0..3).any(|d| a.0[d] % 2 != 0 || b.0[d] % 2 != 0) {
                    continue;
                }
                let r = MultiIndex::new(a.0[0] / 2, a.0[1] / 2, a.0[2] / 2);
                let rp = MultiIndex::new(b.0[0] / 2, b.0[1] / 2, b.0[2] / 2);
                inner += factorial(p) / q.factorial() * factorial(j) / r.factorial() * factorial(j)
                    / rp.factorial();
            }
        }
        sum += cj * inner;
    }
    let dfk = double_factorial(2 * ki - 1);
    4.0 * PI / (2 * k + 1) as f64 * kappa.factorial() * lambda.factorial() / (dfk * dfk) * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{hermite3, ikenberry_poly, laguerre_eval};
    use crate::quad::gauss_legendre;
    use proptest::prelude::*;

    fn all_of_degree(k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for a in 0..=k {
            for b in 0..=k - a {
                out.push(MultiIndex::new(a, b, k - a - b));
            }
        }
        out
    }

    #[test]
    fn simple_sphere_values() {
        let z = MultiIndex::ZERO;
        assert!((sphere_integral(z, z) - 4.0 * PI).abs() < 1e-14);
        let e1 = MultiIndex::unit(0);
        assert!((sphere_integral(e1, e1) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert_eq!(sphere_integral(e1, MultiIndex::new(2, 0, 0)), 0.0);
        assert_eq!(sphere_integral(e1, MultiIndex::unit(1)), 0.0);
    }

    #[test]
    fn sphere_integral_matches_product_quadrature() {
        // Gauss–Legendre in cos θ × trapezoid in φ, exact for degree ≤ 11.
        let gl = gauss_legendre(8);
        let nphi = 16;
        for k in 0..=5 {
            let idx = all_of_degree(k);
            let polys: Vec<_> = idx.iter().map(|&a| ikenberry_poly(a)).collect();
            for (i, a) in idx.iter().enumerate() {
                for (j, b) in idx.iter().enumerate() {
                    let mut q = 0.0;
                    for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
                        let st = (1.0 - x * x).sqrt();
                        for p in 0..nphi {
                            let phi = 2.0 * PI * p as f64 / nphi as f64;
                            let n = [st * phi.cos(), st * phi.sin(), x];
                            q += w * (2.0 * PI / nphi as f64) * polys[i].eval(n) * polys[j].eval(n);
                        }
                    }
                    let s = sphere_integral(*a, *b);
                    assert!((q - s).abs() < 1e-10 * s.abs().max(1.0), "{a} {b}: {q} vs {s}");
                }
            }
        }
    }

    #[test]
    fn hermite_200_split() {
        let c = hermite_to_harmonic(MultiIndex::new(2, 0, 0));
        assert_eq!(c.len(), 2);
        assert!((c[0].1 - 1.0).abs() < 1e-15);
        assert_eq!(c[1].0, MultiIndex::new(1, 0, 0));
        assert!((c[1].1 + 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(hermite_to_harmonic(MultiIndex::ZERO), vec![(MultiIndex::ZERO, 1.0)]);
    }

    proptest! {
        #[test]
        fn harmonic_split_reconstructs_hermite(
            a in 0usize..=3, b in 0usize..=2, c in 0usize..=2,
            x in -2.0f64..2.0, y in -2.0f64..2.0, z in -2.0f64..2.0,
        ) {
            let kappa = MultiIndex::new(a, b, c);
            let v = [x, y, z];
            let r2 = x * x + y * y + z * z;
            let k = kappa.degree() as f64;
            let recon: f64 = hermite_to_harmonic(kappa)
                .into_iter()
                .map(|(m, coef)| {
                    let mm = m.degree() as f64;
                    let lower = kappa.checked_sub(m.add(m)).unwrap();
                    coef * laguerre_eval(m.degree(), k - 2.0 * mm + 0.5, 0.5 * r2)
                        * ikenberry_poly(lower).eval(v)
                })
                .sum();
            let direct = hermite3(kappa, v);
            prop_assert!((recon - direct).abs() <= 1e-10 * direct.abs().max(1.0));
        }
    }
}
