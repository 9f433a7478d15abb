//! The collision tensor `A_α^{β,γ}`: assembly, sparsification, contraction,
//! the linearized matrix and the on-disk cache.
//!
//! Assembly follows the centre-of-mass/relative-velocity split. With
//! `γ' = β + γ - α + l'`,
//!
//! `A_α^{β,γ} = π^{3/2} 2^{-|α|/2} / (2π)³ · Σ_{l' ≤ α} Π_s a^{β_s γ_s}_{α_s-l'_s} · Γ(l', γ') / l'!`
//!
//! where `a` are the pair coefficients and `Γ` the relative-velocity integrals.

pub mod cache;
mod gamma;
mod harmonic;
mod linear;
mod pair;

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::basis::{IndexLayout, MultiIndex};
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;

pub use cache::{load_cache, load_cache_checked, save_cache};
pub use gamma::{angular_moments, gamma_coeff, GammaTable};
pub use harmonic::{hermite_to_harmonic, sphere_integral};
pub use linear::{decay_rate, linearized_matrix, LinearizedMatrix};
pub use pair::{binomial, pair_coeff, PairTable};

/// Relative threshold applied when none is given.
pub const DEFAULT_RELATIVE_THRESHOLD: f64 = 1e-14;

/// One raw tensor entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    pub gamma: MultiIndex,
    pub value: f64,
}

/// Entries folded over `β ↔ γ`, grouped by `α` for contraction.
#[derive(Clone, Debug, Default)]
struct Folded {
    offsets: Vec<usize>,
    beta: Vec<u32>,
    gamma: Vec<u32>,
    value: Vec<f64>,
}

impl Folded {
    fn build(n: usize, entries: &[Entry]) -> Self {
        let mut per_alpha: Vec<Vec<(u32, u32, f64)>> = vec![Vec::new(); n];
        for e in entries {
            let (b, g) = (e.beta.rank() as u32, e.gamma.rank() as u32);
            per_alpha[e.alpha.rank()].push((b.min(g), b.max(g), e.value));
        }
        let mut folded = Folded {
            offsets: vec![0],
            ..Default::default()
        };
        for mut row in per_alpha {
            row.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
            let mut i = 0;
            while i < row.len() {
                let (b, g, mut v) = row[i];
                i += 1;
                while i < row.len() && row[i].0 == b && row[i].1 == g {
                    v += row[i].2;
                    i += 1;
                }
                folded.beta.push(b);
                folded.gamma.push(g);
                folded.value.push(v);
            }
            folded.offsets.push(folded.beta.len());
        }
        folded
    }
}

/// Sparse collision tensor for a kernel at truncation degree `M0`.
#[derive(Clone, Debug)]
pub struct CollisionTensor {
    kernel: KernelSpec,
    m0: usize,
    threshold: f64,
    entries: Vec<Entry>,
    folded: Folded,
}

impl CollisionTensor {
    /// Builds a tensor from raw entries; entries are re-sorted by rank.
    pub fn from_entries(
        kernel: KernelSpec,
        m0: usize,
        threshold: f64,
        mut entries: Vec<Entry>,
    ) -> Result<Self> {
        for e in &entries {
            let d = e.alpha.degree().max(e.beta.degree()).max(e.gamma.degree());
            if d > m0 {
                return Err(Error::DegreeOverflow { degree: d, max: m0 });
            }
        }
        entries.sort_by_key(|e| (e.alpha.rank(), e.beta.rank(), e.gamma.rank()));
        let folded = Folded::build(IndexLayout::new(m0).len(), &entries);
        Ok(CollisionTensor {
            kernel,
            m0,
            threshold,
            entries,
            folded,
        })
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn m0(&self) -> usize {
        self.m0
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.value.abs()))
    }

    /// Stored value of `A_α^{β,γ}` (zero if absent).
    pub fn get(&self, alpha: MultiIndex, beta: MultiIndex, gamma: MultiIndex) -> f64 {
        let key = (alpha.rank(), beta.rank(), gamma.rank());
        self.entries
            .binary_search_by_key(&key, |e| (e.alpha.rank(), e.beta.rank(), e.gamma.rank()))
            .map(|i| self.entries[i].value)
            .unwrap_or(0.0)
    }

    /// `A_α^{β,γ} + A_α^{γ,β}`.
    pub fn symmetric(&self, alpha: MultiIndex, beta: MultiIndex, gamma: MultiIndex) -> f64 {
        self.get(alpha, beta, gamma) + self.get(alpha, gamma, beta)
    }

    /// `out_α = Σ_{β,γ} A_α^{β,γ} h_β h_γ` for every `|α| ≤ M0`.
    ///
    /// `h` must hold at least the `N_{M0}` leading coefficients.
    pub fn contract(&self, h: &[f64], out: &mut [f64]) {
        let f = &self.folded;
        for (a, o) in out.iter_mut().enumerate().take(f.offsets.len() - 1) {
            let mut acc = 0.0;
            for i in f.offsets[a]..f.offsets[a + 1] {
                acc += f.value[i] * h[f.beta[i] as usize] * h[f.gamma[i] as usize];
            }
            *o = acc;
        }
    }

    /// Largest violation of the symmetrized conservation identities.
    pub fn conservation_defect(&self) -> f64 {
        let n = IndexLayout::new(self.m0).len();
        // rows: mass, three momenta, energy (sum over 2e_d)
        let mut acc = vec![0.0; 5 * n * n];
        for e in &self.entries {
            let row = match e.alpha.0 {
                [0, 0, 0] => 0,
                [1, 0, 0] => 1,
                [0, 1, 0] => 2,
                [0, 0, 1] => 3,
                [2, 0, 0] | [0, 2, 0] | [0, 0, 2] => 4,
                _ => continue,
            };
            let (b, g) = (e.beta.rank(), e.gamma.rank());
            let (lo, hi) = (b.min(g), b.max(g));
            acc[(row * n + lo) * n + hi] += e.value;
        }
        acc.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|A_α^{0,0}|`.
    pub fn equilibrium_defect(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.beta == MultiIndex::ZERO && e.gamma == MultiIndex::ZERO)
            .fold(0.0, |m, e| m.max(e.value.abs()))
    }

    /// Drops entries with `|A| < ε` and re-checks conservation.
    ///
    /// Fails when the identities are off by more than `10ε` plus a roundoff
    /// floor of `1e-12·max|A|`.
    pub fn sparsify(&self, eps: f64) -> Result<CollisionTensor> {
        if !(eps >= 0.0) {
            return Err(Error::InvalidParameter(format!("threshold {eps}")));
        }
        let kept: Vec<Entry> = self
            .entries
            .iter()
            .copied()
            .filter(|e| e.value.abs() >= eps)
            .collect();
        let floor = 1e-12 * self.max_abs();
        let out = CollisionTensor::from_entries(self.kernel, self.m0, eps.max(self.threshold), kept)?;
        let limit = 10.0 * eps.min(self.max_abs()) + floor;
        let defect = out.conservation_defect();
        if defect > limit {
            return Err(Error::ConservationViolated { defect, limit });
        }
        Ok(out)
    }
}

/// Assembles `A_α^{β,γ}` for `|α|, |β|, |γ| ≤ M0`.
///
/// `threshold` is absolute; `None` selects `1e-14·max|A|`. Work is split
/// over `α` and merged in rank order, so the result does not depend on the
/// number of worker threads.
pub fn assemble_tensor(kernel: &KernelSpec, m0: usize, threshold: Option<f64>) -> Result<CollisionTensor> {
    if m0 < 1 {
        return Err(Error::InvalidParameter("M0 must be at least 1".into()));
    }
    let table = GammaTable::new(kernel, m0)?;
    let pairs = PairTable::new(m0);
    let layout = IndexLayout::new(m0);
    let rows: Vec<Vec<Entry>> = layout
        .indices()
        .par_iter()
        .map(|&alpha| tensor_row(alpha, &layout, &pairs, &table))
        .collect();
    let raw: Vec<Entry> = rows.concat();
    let max = raw.iter().fold(0.0f64, |m, e| m.max(e.value.abs()));
    let eps = threshold.unwrap_or(DEFAULT_RELATIVE_THRESHOLD * max);
    let full = CollisionTensor::from_entries(*kernel, m0, 0.0, raw)?;
    full.sparsify(eps)
}

fn tensor_row(alpha: MultiIndex, layout: &IndexLayout, pairs: &PairTable, table: &GammaTable) -> Vec<Entry> {
    let pref = PI.powf(1.5) * 2f64.powf(-(alpha.degree() as f64) / 2.0) / (2.0 * PI).powi(3);
    let subs: Vec<(MultiIndex, f64)> = alpha
        .sub_indices()
        .filter(|l| l.degree() > 0)
        .map(|l| (l, 1.0 / l.factorial()))
        .collect();
    let mut row = Vec::new();
    for beta in layout.iter() {
        for gamma in layout.iter() {
            if (0..3).any(|d| (alpha.0[d] + beta.0[d] + gamma.0[d]) % 2 != 0) {
                continue;
            }
            let bg = beta.add(gamma);
            let mut sum = 0.0;
            for &(lp, inv_fact) in &subs {
                let Some(gp) = bg.add(lp).checked_sub(alpha) else {
                    continue;
                };
                let g = table.get(lp, gp);
                if g == 0.0 {
                    continue;
                }
                let mut prod = inv_fact * g;
                for d in 0..3 {
                    prod *= pairs.get(beta.0[d], gamma.0[d], alpha.0[d] - lp.0[d]);
                }
                sum += prod;
            }
            if sum != 0.0 {
                row.push(Entry {
                    alpha,
                    beta,
                    gamma,
                    value: pref * sum,
                });
            }
        }
    }
    row
}

/// `c = -1/(A_ς^{0,ς} + A_ς^{ς,0})` with `ς = (1,1,0)`.
pub fn viscosity_constant(tensor: &CollisionTensor) -> Result<f64> {
    let s = MultiIndex::new(1, 1, 0);
    let d = tensor.symmetric(s, MultiIndex::ZERO, s);
    if d >= 0.0 || !d.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "shear damping coefficient {d} is not negative"
        )));
    }
    Ok(-1.0 / d)
}
