//! Ikenberry harmonic polynomials `Y^κ`, the harmonic projection of `v^κ`.

use std::collections::BTreeMap;

use super::{double_factorial, factorial, MultiIndex};

/// Sparse polynomial in three variables, keyed by exponent triple.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly3 {
    terms: BTreeMap<[usize; 3], f64>,
}

impl Poly3 {
    pub fn monomial(exp: [usize; 3], coeff: f64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0.0 {
            terms.insert(exp, coeff);
        }
        Poly3 { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = ([usize; 3], f64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn coeff(&self, exp: [usize; 3]) -> f64 {
        self.terms.get(&exp).copied().unwrap_or(0.0)
    }

    fn add_term(&mut self, exp: [usize; 3], c: f64) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry(exp).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&exp);
        }
    }

    pub fn add_scaled(&mut self, other: &Poly3, s: f64) {
        for (k, v) in other.terms() {
            self.add_term(k, s * v);
        }
    }

    pub fn laplacian(&self) -> Poly3 {
        let mut out = Poly3::default();
        for (e, c) in self.terms() {
            for d in 0..3 {
                if e[d] >= 2 {
                    let mut f = e;
                    f[d] -= 2;
                    out.add_term(f, c * (e[d] * (e[d] - 1)) as f64);
                }
            }
        }
        out
    }

    /// Product with `|v|^{2j}`.
    pub fn times_norm_pow(&self, j: usize) -> Poly3 {
        let mut out = self.clone();
        for _ in 0..j {
            let mut next = Poly3::default();
            for (e, c) in out.terms() {
                for d in 0..3 {
                    let mut f = e;
                    f[d] += 2;
                    next.add_term(f, c);
                }
            }
            out = next;
        }
        out
    }

    pub fn eval(&self, v: [f64; 3]) -> f64 {
        self.terms()
            .map(|(e, c)| c * v[0].powi(e[0] as i32) * v[1].powi(e[1] as i32) * v[2].powi(e[2] as i32))
            .sum()
    }
}

/// Explicit coefficients of `Y^κ`:
/// `Σ_j (-1)^j (2k-2j-1)!! / ((2k-1)!! 2^j j!) |v|^{2j} Δ^j v^κ`, `k = |κ|`.
pub fn ikenberry_poly(kappa: MultiIndex) -> Poly3 {
    let k = kappa.degree() as i64;
    let mut lap = Poly3::monomial(kappa.0, 1.0);
    let mut out = Poly3::default();
    let mut j = 0usize;
    while !lap.terms.is_empty() {
        let ji = j as i64;
        let c = (-1f64).powi(j as i32) * double_factorial(2 * k - 2 * ji - 1)
            / (double_factorial(2 * k - 1) * 2f64.powi(j as i32) * factorial(j));
        out.add_scaled(&lap.times_norm_pow(j), c);
        lap = lap.laplacian();
        j += 1;
    }
    out
}

pub fn ikenberry_eval(kappa: MultiIndex, v: [f64; 3]) -> f64 {
    ikenberry_poly(kappa).eval(v)
}
