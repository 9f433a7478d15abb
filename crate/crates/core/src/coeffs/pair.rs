//! Per-axis coefficients for rewriting `H_k(v) H_l(v₁)` in centre-of-mass
//! and relative variables.

/// Binomial coefficient as `f64`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `a^{kl}_{k'l'} = Σ_{i+j=k'} C(k,i) C(l,j) (-1)^{l'-k+i} 2^{-k'} 2^{(k'-l')/2}`,
/// zero unless `k' + l' = k + l`.
pub fn pair_coeff(k: usize, l: usize, kp: usize, lp: usize) -> f64 {
    if kp + lp != k + l {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in 0..=kp.min(k) {
        let j = kp - i;
        if j > l {
            continue;
        }
        let parity = (lp + i + k) % 2; // same parity as l' - k + i
        let sign = if parity == 0 { 1.0 } else { -1.0 };
        sum += sign * binomial(k, i) * binomial(l, j);
    }
    sum * 2f64.powi(-(kp as i32)) * 2f64.powf((kp as f64 - lp as f64) / 2.0)
}

/// Dense table of `pair_coeff` for `k, l ≤ max`, indexed by `(k, l, k')`.
#[derive(Clone, Debug)]
pub struct PairTable {
    max: usize,
    values: Vec<f64>,
}

impl PairTable {
    pub fn new(max: usize) -> Self {
        let n = max + 1;
        let mut values = vec![0.0; n * n * (2 * max + 1)];
        for k in 0..=max {
            for l in 0..=max {
                for kp in 0..=k + l {
                    values[(k * n + l) * (2 * max + 1) + kp] = pair_coeff(k, l, kp, k + l - kp);
                }
            }
        }
        PairTable { max, values }
    }

    /// `a^{kl}_{k', k+l-k'}`.
    #[inline]
    pub fn get(&self, k: usize, l: usize, kp: usize) -> f64 {
        debug_assert!(k <= self.max && l <= self.max && kp <= k + l);
        self.values[(k * (self.max + 1) + l) * (2 * self.max + 1) + kp]
    }
}
