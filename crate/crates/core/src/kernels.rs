//! Collision kernels, the inverse-power-law deflection angle and viscosity laws.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quad;

/// Boltzmann constant in J/K, the value used by the argon benchmarks.
pub const BOLTZMANN: f64 = 1.380658e-23;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelSpec {
    HardSphere { d: f64 },
    Vhs { d_ref: f64, g_ref: f64, nu: f64 },
    /// Inverse power law. `kappa` enters only through the prefactor `(2κ/m)^{2/(η-1)}`,
    /// with the mass folded in (`kappa` is the mass-specific intensity κ/m).
    Ipl { eta: f64, kappa: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            KernelSpec::HardSphere { d } if !(d > 0.0) => bad(format!("hard-sphere diameter {d}")),
            KernelSpec::Vhs { d_ref, g_ref, nu } => {
                if !(d_ref > 0.0 && g_ref > 0.0) {
                    bad(format!("VHS reference values d_ref={d_ref}, g_ref={g_ref}"))
                } else if !(nu > 0.0 && nu <= 1.0) {
                    bad(format!("VHS exponent nu={nu} outside (0, 1]"))
                } else {
                    Ok(())
                }
            }
            KernelSpec::Ipl { eta, kappa } => {
                if !(eta > 3.0) || !eta.is_finite() {
                    bad(format!("IPL index eta={eta} must exceed 3"))
                } else if !(kappa > 0.0) {
                    bad(format!("IPL intensity kappa={kappa}"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn id(&self) -> u8 {
        match self {
            KernelSpec::HardSphere { .. } => 0,
            KernelSpec::Vhs { .. } => 1,
            KernelSpec::Ipl { .. } => 2,
        }
    }

    /// Parameter slots as stored in the cache header.
    pub fn params(&self) -> [f64; 3] {
        match *self {
            KernelSpec::HardSphere { d } => [d, 0.0, 0.0],
            KernelSpec::Vhs { d_ref, g_ref, nu } => [d_ref, g_ref, nu],
            KernelSpec::Ipl { eta, kappa } => [eta, kappa, 0.0],
        }
    }

    pub fn from_parts(id: u8, p: [f64; 3]) -> Result<Self> {
        let spec = match id {
            0 => KernelSpec::HardSphere { d: p[0] },
            1 => KernelSpec::Vhs {
                d_ref: p[0],
                g_ref: p[1],
                nu: p[2],
            },
            2 => KernelSpec::Ipl {
                eta: p[0],
                kappa: p[1],
            },
            _ => return Err(Error::BadCache(format!("unknown kernel id {id}"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Exponent `s` in `B = C·g^s·b(χ)`.
    pub fn speed_exponent(&self) -> f64 {
        match *self {
            KernelSpec::HardSphere { .. } => 1.0,
            KernelSpec::Vhs { nu, .. } => 1.0 - 2.0 * nu,
            KernelSpec::Ipl { eta, .. } => (eta - 5.0) / (eta - 1.0),
        }
    }

    /// Constant `C` in `B = C·g^s·b(χ)`.
    pub fn prefactor(&self) -> f64 {
        match *self {
            KernelSpec::HardSphere { d } => 0.25 * d * d,
            KernelSpec::Vhs { d_ref, g_ref, nu } => 0.25 * d_ref * d_ref * g_ref.powf(2.0 * nu),
            KernelSpec::Ipl { eta, kappa } => (2.0 * kappa).powf(2.0 / (eta - 1.0)),
        }
    }

    /// Index `η` of the matching power law (`∞` for hard spheres).
    pub fn viscosity_index(&self) -> f64 {
        match *self {
            KernelSpec::HardSphere { .. } => f64::INFINITY,
            KernelSpec::Vhs { nu, .. } => 1.0 + 2.0 / nu,
            KernelSpec::Ipl { eta, .. } => eta,
        }
    }

    pub fn fingerprint(&self) -> String {
        let [a, b, c] = self.params();
        format!("kernel {} [{a:e}, {b:e}, {c:e}]", self.id())
    }
}

/// Gas properties needed to redimensionalize the collision term.
#[derive(Clone, Debug, PartialEq)]
pub struct GasSpec {
    pub mass: f64,
    pub kernel: KernelSpec,
    pub d_ref: Option<f64>,
    pub t_ref: Option<f64>,
    /// Reference viscosity; when set the power law `μ_ref (T/T_ref)^ω` is used.
    pub mu_ref: Option<f64>,
    pub kb: f64,
}

impl GasSpec {
    pub fn argon(kernel: KernelSpec) -> Self {
        GasSpec {
            mass: 6.63e-26,
            kernel,
            d_ref: Some(4.17e-10),
            t_ref: Some(273.15),
            mu_ref: None,
            kb: BOLTZMANN,
        }
    }

    pub fn temperature(&self, theta: f64) -> f64 {
        self.mass * theta / self.kb
    }

    pub fn theta(&self, temperature: f64) -> f64 {
        self.kb * temperature / self.mass
    }
}

/// Dimensionless root `W₁ ∈ (0, 1)` of `1 - W² - (2/(η-1))(W/W₀)^{η-1}`.
pub fn ipl_turning_point(w0: f64, eta: f64) -> Result<f64> {
    if !(w0 > 0.0) || !(eta > 3.0) {
        return Err(Error::InvalidParameter(format!(
            "turning point needs W0 > 0, eta > 3 (got {w0}, {eta})"
        )));
    }
    let n = eta - 1.0;
    let p = 2.0 / n;
    let f = |w: f64| 1.0 - w * w - p * (w / w0).powf(n);
    let df = |w: f64| -2.0 * w - 2.0 * (w / w0).powf(n) / w;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    // For small W0 the root sits near W0·(n/2)^{1/n}; start there.
    let mut w = (w0 * (0.5 * n).powf(1.0 / n)).min(0.5);
    for _ in 0..300 {
        let fw = f(w);
        if fw > 0.0 {
            lo = w;
        } else {
            hi = w;
        }
        let step = w - fw / df(w);
        let next = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        if (next - w).abs() <= 1e-16 * w.max(1e-300) || hi - lo <= 1e-16 * hi {
            let r = f(next);
            if r.abs() > 1e-13 {
                break;
            }
            return Ok(next);
        }
        w = next;
    }
    let r = f(w);
    if r.abs() <= 1e-13 {
        return Ok(w);
    }
    Err(Error::RootFinding(format!(
        "IPL turning point for W0={w0}, eta={eta}: residual {r:e}"
    )))
}

/// Deflection angle `χ(W₀)`.
///
/// After `W = W₁ sin t` and use of the turning-point equation, `χ/2` is the
/// integral over `t ∈ (0, π/2)` of `(1-W₁²)R / (√a (√a + W₁))` with
/// `a = W₁² + (1-W₁²)R` and `R = (1 - sin^{η-1}t)/cos²t`; the integrand is
/// bounded and there is no cancellation in the grazing limit.
pub fn ipl_deflection(w0: f64, eta: f64) -> Result<f64> {
    let w1 = ipl_turning_point(w0, eta)?;
    let n = eta - 1.0;
    let one_minus_w1sq = (2.0 / n) * (w1 / w0).powf(n);
    let integrand = |t: f64| {
        let c2 = t.cos().powi(2);
        let r = if c2 < 1e-300 {
            0.5 * n
        } else {
            let ln_s = 0.5 * (-c2).ln_1p();
            -(n * ln_s).exp_m1() / c2
        };
        let a = w1 * w1 + one_minus_w1sq * r;
        let sa = a.sqrt();
        one_minus_w1sq * r / (sa * (sa + w1))
    };
    let half = quad::adaptive(integrand, 0.0, FRAC_PI_2, 1e-15, 1e-12)?;
    Ok((2.0 * half).clamp(0.0, PI))
}

/// `W₀` with `χ(W₀) = χ`, by bisection on the monotone map.
pub fn ipl_impact_parameter(chi: f64, eta: f64) -> Result<f64> {
    if !(chi > 0.0 && chi < PI) {
        return Err(Error::InvalidParameter(format!("deflection {chi} outside (0, pi)")));
    }
    let (mut lo, mut hi) = (1e-8f64, 1.0f64);
    while ipl_deflection(hi, eta)? > chi {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::RootFinding(format!("no impact parameter for chi={chi}")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ipl_deflection(mid, eta)? > chi {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Collision kernel `B(g, χ)`.
///
/// For the inverse power law the angular factor `W₀|dW₀/dχ|` is computed by
/// inverting `χ(W₀)` and differencing; this path exists for pointwise checks,
/// the coefficient assembly integrates over `W₀` directly.
pub fn kernel_eval(spec: &KernelSpec, g: f64, chi: f64) -> Result<f64> {
    let gs = if g == 0.0 && spec.speed_exponent() <= 0.0 {
        if spec.speed_exponent() == 0.0 { 1.0 } else { f64::INFINITY }
    } else {
        g.powf(spec.speed_exponent())
    };
    match spec {
        KernelSpec::HardSphere { .. } | KernelSpec::Vhs { .. } => {
            Ok(spec.prefactor() * gs * chi.sin())
        }
        KernelSpec::Ipl { eta, .. } => {
            let w0 = ipl_impact_parameter(chi, *eta)?;
            let h = 1e-5 * w0;
            let dchi = (ipl_deflection(w0 + h, *eta)? - ipl_deflection(w0 - h, *eta)?) / (2.0 * h);
            Ok(spec.prefactor() * gs * w0 / dchi.abs())
        }
    }
}

/// `∫₀^∞ W₀ F(χ(W₀)) dW₀` for a vector-valued `F` that vanishes at `χ = 0`.
///
/// The range is split at `W* = 2`; the tail is mapped by `W₀ = W*/u`.
pub fn impact_integral<F>(eta: f64, dim: usize, mut f: F, rel_tol: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64, &mut [f64]),
{
    const SPLIT: f64 = 2.0;
    let mut err: Option<Error> = None;
    let mut eval = |w0: f64, jac: f64, out: &mut [f64]| match ipl_deflection(w0, eta) {
        Ok(chi) => {
            f(chi, out);
            for o in out.iter_mut() {
                *o *= w0 * jac;
            }
        }
        Err(e) => {
            out.iter_mut().for_each(|o| *o = 0.0);
            err.get_or_insert(e);
        }
    };
    let head = quad::adaptive_vec(
        |w0, out| {
            if w0 <= 0.0 {
                out.iter_mut().for_each(|o| *o = 0.0);
            } else {
                eval(w0, 1.0, out)
            }
        },
        0.0,
        SPLIT,
        dim,
        1e-15,
        rel_tol,
    )?;
    // The tail is small; measure its error against the head.
    let scale = head.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tail = quad::adaptive_vec(
        |u, out| {
            if u <= 0.0 {
                out.iter_mut().for_each(|o| *o = 0.0);
            } else {
                eval(SPLIT / u, SPLIT / (u * u), out)
            }
        },
        0.0,
        1.0,
        dim,
        (rel_tol * scale).max(1e-15),
        rel_tol,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(head.iter().zip(&tail).map(|(a, b)| a + b).collect())
}

/// `A₂(η) = ∫₀^∞ W₀ sin²χ dW₀`.
pub fn a2_eta(eta: f64) -> Result<f64> {
    Ok(impact_integral(eta, 1, |chi, out| out[0] = chi.sin().powi(2), 1e-11)?[0])
}

/// `Φ_ℓ = ∫₀^∞ W₀ (P_ℓ(cos χ) - 1) dW₀` for `ℓ = 0..=l_max`.
pub fn ipl_angular_moments(eta: f64, l_max: usize) -> Result<Vec<f64>> {
    impact_integral(
        eta,
        l_max + 1,
        |chi, out| legendre_minus_one(chi, out),
        1e-11,
    )
}

/// `P_ℓ(cos χ) − 1` for `ℓ = 0..out.len()`, free of cancellation at small `χ`.
///
/// With `D_ℓ = P_ℓ − 1` and `y = cos χ − 1 = −2 sin²(χ/2)`, Bonnet's recurrence becomes
/// `(ℓ+1) D_{ℓ+1} = (2ℓ+1)(1+y) D_ℓ − ℓ D_{ℓ−1} + (2ℓ+1) y`.
pub fn legendre_minus_one(chi: f64, out: &mut [f64]) {
    let y = -2.0 * (0.5 * chi).sin().powi(2);
    let x = 1.0 + y;
    let (mut d0, mut d1) = (0.0, y);
    for (l, o) in out.iter_mut().enumerate() {
        match l {
            0 => *o = 0.0,
            1 => *o = y,
            _ => {
                let k = (l - 1) as f64;
                let d2 = ((2.0 * k + 1.0) * x * d1 - k * d0 + (2.0 * k + 1.0) * y) / (k + 1.0);
                d0 = d1;
                d1 = d2;
                *o = d2;
            }
        }
    }
}

/// DSMC-matching viscosity, or the reference power law when `mu_ref` is set.
///
/// `μ = (15/16)(η-1)²√(m k_B T_ref/π) / ((η-2)(3η-5)d_ref²) · (T/T_ref)^{(η+3)/(2(η-1))}`.
pub fn viscosity(gas: &GasSpec, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(Error::InvalidParameter(format!("temperature {temperature}")));
    }
    let eta = gas.kernel.viscosity_index();
    let t_ref = gas
        .t_ref
        .ok_or_else(|| Error::InvalidParameter("viscosity law needs T_ref".into()))?;
    let omega = if eta.is_infinite() {
        0.5
    } else {
        0.5 * (eta + 3.0) / (eta - 1.0)
    };
    let power = (temperature / t_ref).powf(omega);
    if let Some(mu_ref) = gas.mu_ref {
        return Ok(mu_ref * power);
    }
    let d = gas
        .d_ref
        .ok_or_else(|| Error::InvalidParameter("viscosity law needs d_ref or mu_ref".into()))?;
    let shape = if eta.is_infinite() {
        1.0 / 3.0
    } else {
        (eta - 1.0).powi(2) / ((eta - 2.0) * (3.0 * eta - 5.0))
    };
    Ok(15.0 / 16.0 * shape * (gas.mass * gas.kb * t_ref / PI).sqrt() / (d * d) * power)
}

/// Viscosity of an inverse-power-law gas with potential constant `κ`:
/// `5m(θ/π)^{1/2}(2mθ/κ)^{2/(η-1)} / (8 A₂(η) Γ(4 - 2/(η-1)))`.
pub fn viscosity_grad(gas: &GasSpec, temperature: f64, potential_kappa: f64) -> Result<f64> {
    let KernelSpec::Ipl { eta, .. } = gas.kernel else {
        return Err(Error::InvalidParameter("Grad viscosity law needs an IPL kernel".into()));
    };
    let theta = gas.theta(temperature);
    let m = gas.mass;
    let a2 = a2_eta(eta)?;
    let gamma = statrs::function::gamma::gamma(4.0 - 2.0 / (eta - 1.0));
    Ok(5.0 * m * (theta / PI).sqrt() * (2.0 * m * theta / potential_kappa).powf(2.0 / (eta - 1.0))
        / (8.0 * a2 * gamma))
}
