//! One-dimensional orthogonal polynomials, all evaluated by recurrence.

use crate::error::{Error, Result};

/// `n!` as `f64` (exact for `n ≤ 22`, correctly rounded above).
pub fn factorial(n: usize) -> f64 {
    statrs::function::factorial::factorial(n as u64)
}

/// Odd double factorial `(2j-1)!!`-style product `n·(n-2)·…`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// Probabilists' Hermite polynomial `He_n(x)`.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = x * h1 - k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// `[He_0(x), …, He_n(x)]`.
pub fn hermite_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for k in 1..n {
        out.push(x * out[k] - k as f64 * out[k - 1]);
    }
    out
}

/// Normalised `He_n(x)/√(n!)` and its derivative.
fn hermite_scaled(n: usize, x: f64) -> (f64, f64) {
    let (mut h0, mut h1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let h2 = (x * h1 - kf.sqrt() * h0) / (kf + 1.0).sqrt();
        h0 = h1;
        h1 = h2;
    }
    (h1, (n as f64).sqrt() * h0)
}

/// Roots of `He_n` in increasing order.
///
/// Each root of `He_n` is isolated between consecutive roots of `He_{n-1}`,
/// so the roots are built up degree by degree and polished with a Newton
/// iteration that falls back to bisection whenever a step leaves the bracket.
pub fn hermite_roots(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("hermite_roots needs n >= 1".into()));
    }
    let mut roots = vec![0.0];
    for deg in 2..=n {
        let bound = (4.0 * deg as f64 + 2.0).sqrt();
        let mut next = Vec::with_capacity(deg);
        for i in 0..deg {
            let lo = if i == 0 { -bound } else { roots[i - 1] };
            let hi = if i == deg - 1 { bound } else { roots[i] };
            next.push(bracketed_root(deg, lo, hi)?);
        }
        // Enforce exact symmetry; the middle root of odd degree is zero.
        for i in 0..deg / 2 {
            let r = 0.5 * (next[deg - 1 - i] - next[i]);
            next[i] = -r;
            next[deg - 1 - i] = r;
        }
        if deg % 2 == 1 {
            next[deg / 2] = 0.0;
        }
        roots = next;
    }
    Ok(roots)
}

fn bracketed_root(n: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = hermite_scaled(n, lo).0;
    let f_hi = hermite_scaled(n, hi).0;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change for He_{n} on [{lo}, {hi}]"
        )));
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (f, df) = hermite_scaled(n, x);
        if f == 0.0 {
            return Ok(x);
        }
        if f.signum() == f_lo.signum() {
            lo = x;
            f_lo = f;
        } else {
            hi = x;
        }
        let newton = x - f / df;
        let next = if df != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::RootFinding(format!(
        "He_{n} root in [{lo}, {hi}] did not converge"
    )))
}

/// Largest root of `He_n`; the characteristic speed bound of a degree `n-1` system.
pub fn max_hermite_root(n: usize) -> Result<f64> {
    Ok(*hermite_roots(n)?.last().expect("n >= 1"))
}

/// Generalised Laguerre polynomial `L_m^{(a)}(x)`.
pub fn laguerre_eval(m: usize, a: f64, x: f64) -> f64 {
    let (mut l0, mut l1) = (1.0, 1.0 + a - x);
    if m == 0 {
        return l0;
    }
    for k in 1..m {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 + a - x) * l1 - (kf + a) * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// Legendre polynomial `P_k(x)` by Bonnet's recurrence.
pub fn legendre_eval(k: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if k == 0 {
        return p0;
    }
    for n in 1..k {
        let nf = n as f64;
        let p2 = ((2.0 * nf + 1.0) * x * p1 - nf * p0) / (nf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    #[test]
    fn hermite_small_degrees() {
        assert_eq!(hermite_eval(0, 7.3), 1.0);
        assert_eq!(hermite_eval(2, 2.0), 3.0);
        assert_eq!(hermite_eval(3, 1.0), -2.0);
        let all = hermite_all(4, 0.7);
        for (n, v) in all.iter().enumerate() {
            assert!((v - hermite_eval(n, 0.7)).abs() < 1e-14);
        }
    }

    #[test]
    fn hermite_roots_low_degree() {
        assert_eq!(hermite_roots(1).unwrap(), vec![0.0]);
        let r2 = hermite_roots(2).unwrap();
        assert!((r2[0] + 1.0).abs() < 1e-15 && (r2[1] - 1.0).abs() < 1e-15);
        let r3 = hermite_roots(3).unwrap();
        let s3 = 3f64.sqrt();
        assert!((r3[0] + s3).abs() < 1e-14 && r3[1] == 0.0 && (r3[2] - s3).abs() < 1e-14);
        assert!(hermite_roots(0).is_err());
    }

    #[test]
    fn hermite_roots_match_jacobi_eigenvalues() {
        for n in [4, 7, 12, 20, 31] {
            let mut jac = DMatrix::<f64>::zeros(n, n);
            for k in 1..n {
                let s = (k as f64).sqrt();
                jac[(k - 1, k)] = s;
                jac[(k, k - 1)] = s;
            }
            let mut eig: Vec<f64> = jac.symmetric_eigen().eigenvalues.iter().copied().collect();
            eig.sort_by(f64::total_cmp);
            let roots = hermite_roots(n).unwrap();
            for (r, e) in roots.iter().zip(&eig) {
                assert!((r - e).abs() < 1e-12, "n={n}: {r} vs {e}");
            }
            for w in roots.windows(2) {
                assert!(w[0] < w[1]);
            }
            for r in &roots {
                let residual = hermite_scaled(n, *r).0 * (-0.25 * r * r).exp();
                assert!(residual.abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre_eval(0, 0.3, 5.0), 1.0);
        assert!((laguerre_eval(1, 0.5, 2.0) + 0.5).abs() < 1e-15);
        assert!((laguerre_eval(2, 0.5, 0.0) - 1.875).abs() < 1e-15);
    }

    #[test]
    fn legendre_values() {
        assert!((legendre_eval(7, 1.0) - 1.0).abs() < 1e-15);
        assert!((legendre_eval(2, 0.5) + 0.125).abs() < 1e-15);
        assert_eq!(legendre_eval(1, 0.3), 0.3);
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(-1), 1.0);
        assert_eq!(double_factorial(0), 1.0);
        assert_eq!(double_factorial(7), 105.0);
        assert_eq!(double_factorial(8), 384.0);
    }

    proptest! {
        #[test]
        fn laguerre_matches_explicit_sum(m in 0usize..8, a in 0.0f64..3.0, x in 0.0f64..6.0) {
            // L_m^{(a)}(x) = Σ_i (-1)^i C(m+a, m-i) x^i / i!
            let binom = |top: f64, k: usize| -> f64 {
                (0..k).map(|j| (top - j as f64) / (j + 1) as f64).product()
            };
            let explicit: f64 = (0..=m)
                .map(|i| (-1f64).powi(i as i32) * binom(m as f64 + a, m - i) * x.powi(i as i32) / factorial(i))
                .sum();
            let rec = laguerre_eval(m, a, x);
            prop_assert!((rec - explicit).abs() <= 1e-10 * explicit.abs().max(1.0));
        }

        #[test]
        fn hermite_derivative_identity(n in 1usize..20, x in -4.0f64..4.0) {
            // He_n'(x) = n He_{n-1}(x), checked by central differences.
            let h = 1e-5;
            let fd = (hermite_eval(n, x + h) - hermite_eval(n, x - h)) / (2.0 * h);
            let exact = n as f64 * hermite_eval(n - 1, x);
            prop_assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1.0));
        }
    }
}
