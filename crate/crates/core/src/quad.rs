//! Quadrature rules: Golub–Welsch Gauss rules and an adaptive Gauss–Kronrod integrator.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Nodes and weights of a one-dimensional rule, nodes ascending.
#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Affine map of a rule on `[-1, 1]` onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Rule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Rule {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }
}

// Jacobi matrix eigenproblem; weights are mu0 times squared first eigenvector components.
fn golub_welsch(diag: &[f64], offdiag: &[f64], mu0: f64) -> Rule {
    let n = diag.len();
    let jac = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            diag[r]
        } else if r == c + 1 {
            offdiag[c]
        } else if c == r + 1 {
            offdiag[r]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jac);
    let mut xw: Vec<(f64, f64)> = eig
        .eigenvalues
        .iter()
        .copied()
        .zip(eig.eigenvectors.row(0).iter().map(|v| mu0 * v * v))
        .collect();
    xw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights) = xw.into_iter().unzip();
    Rule { nodes, weights }
}

/// Gauss–Legendre on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Rule {
    let off: Vec<f64> = (1..n)
        .map(|i| {
            let i = i as f64;
            i / (4.0 * i * i - 1.0).sqrt()
        })
        .collect();
    let mut rule = golub_welsch(&vec![0.0; n], &off, 2.0);
    symmetrize(&mut rule);
    rule
}

/// Gauss–Hermite for the weight `e^{-x²/2}` (probabilists').
pub fn gauss_hermite_prob(n: usize) -> Rule {
    let off: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
    let mut rule = golub_welsch(&vec![0.0; n], &off, (2.0 * std::f64::consts::PI).sqrt());
    symmetrize(&mut rule);
    rule
}

/// Gauss–Hermite for the weight `e^{-x²}` (physicists').
pub fn gauss_hermite_phys(n: usize) -> Rule {
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let mut rule = golub_welsch(&vec![0.0; n], &off, std::f64::consts::PI.sqrt());
    symmetrize(&mut rule);
    rule
}

/// Generalised Gauss–Laguerre for the weight `t^a e^{-t}` on `[0, ∞)`.
pub fn gauss_laguerre(n: usize, a: f64) -> Rule {
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + 1.0 + a).collect();
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            (k * (k + a)).sqrt()
        })
        .collect();
    golub_welsch(&diag, &off, statrs::function::gamma::gamma(a + 1.0))
}

fn symmetrize(rule: &mut Rule) {
    let n = rule.len();
    for i in 0..n / 2 {
        let x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
        let w = 0.5 * (rule.weights[n - 1 - i] + rule.weights[i]);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        rule.nodes[n / 2] = 0.0;
    }
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Segment {
    a: f64,
    b: f64,
    value: Vec<f64>,
    err: f64,
}

fn kronrod15<F: FnMut(f64, &mut [f64])>(f: &mut F, a: f64, b: f64, dim: usize) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut buf = vec![0.0; dim];
    let mut k = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    f(c, &mut buf);
    for i in 0..dim {
        k[i] = WGK[7] * buf[i];
        g[i] = WG[3] * buf[i];
    }
    for (j, &x) in XGK[..7].iter().enumerate() {
        for sign in [-1.0, 1.0] {
            f(c + sign * h * x, &mut buf);
            for i in 0..dim {
                k[i] += WGK[j] * buf[i];
                if j % 2 == 1 {
                    g[i] += WG[j / 2] * buf[i];
                }
            }
        }
    }
    let mut err = 0.0f64;
    for i in 0..dim {
        k[i] *= h;
        g[i] *= h;
        err = err.max((k[i] - g[i]).abs());
    }
    Segment { a, b, value: k, err }
}

/// Adaptive G7/K15 integration of a vector-valued integrand on `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol·‖I‖∞)`.
pub fn adaptive_vec<F>(
    mut f: F,
    a: f64,
    b: f64,
    dim: usize,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Vec<f64>>
where
    F: FnMut(f64, &mut [f64]),
{
    const MAX_SEGMENTS: usize = 2000;
    let mut segs = vec![kronrod15(&mut f, a, b, dim)];
    loop {
        let mut total = vec![0.0; dim];
        let mut err = 0.0;
        for s in &segs {
            for i in 0..dim {
                total[i] += s.value[i];
            }
            err += s.err;
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if err <= abs_tol.max(rel_tol * scale) {
            return Ok(total);
        }
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::Quadrature(format!(
                "[{a}, {b}]: error estimate {err:e} after {MAX_SEGMENTS} segments"
            )));
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .expect("non-empty");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // Interval exhausted at machine resolution; accept what we have.
            segs.push(Segment { err: 0.0, ..s });
            continue;
        }
        segs.push(kronrod15(&mut f, s.a, mid, dim));
        segs.push(kronrod15(&mut f, mid, s.b, dim));
    }
}

/// Scalar form of [`adaptive_vec`].
pub fn adaptive<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    adaptive_vec(|x, out| out[0] = f(x), a, b, 1, abs_tol, rel_tol).map(|v| v[0])
}
