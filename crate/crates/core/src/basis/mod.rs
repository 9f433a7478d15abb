//! Multi-index bookkeeping and the orthogonal-polynomial toolkit.
//!
//! Every coefficient array in the crate is addressed through [`IndexLayout`]:
//! multi-indices `α ∈ ℕ³` with `|α| ≤ M`, ranked by degree first and then
//! by descending `α₁`, `α₂` within a degree. Because the order is graded, the
//! coefficients of degree `≤ M'` of a vector built for degree `M ≥ M'` form a
//! prefix of length `N_{M'}`.

mod harmonic;
mod poly;

use std::fmt;

use crate::error::{Error, Result};

pub use harmonic::{ikenberry_eval, ikenberry_poly, Poly3};
pub use poly::{
    double_factorial, factorial, hermite_all, hermite_eval, hermite_roots, laguerre_eval,
    legendre_eval, max_hermite_root,
};

/// Exponent triple `α = (α₁, α₂, α₃)` of a three-dimensional Hermite polynomial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub [usize; 3]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0, 0, 0]);

    pub const fn new(a1: usize, a2: usize, a3: usize) -> Self {
        MultiIndex([a1, a2, a3])
    }

    /// Unit index `e_d` for axis `d ∈ {0, 1, 2}`.
    pub fn unit(axis: usize) -> Self {
        let mut a = [0; 3];
        a[axis] = 1;
        MultiIndex(a)
    }

    pub fn degree(&self) -> usize {
        self.0[0] + self.0[1] + self.0[2]
    }

    pub fn get(&self, axis: usize) -> usize {
        self.0[axis]
    }

    /// `α!` = `α₁! α₂! α₃!`.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    pub fn add(&self, other: MultiIndex) -> MultiIndex {
        MultiIndex([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    /// Componentwise difference, `None` if any component would go negative.
    pub fn checked_sub(&self, other: MultiIndex) -> Option<MultiIndex> {
        Some(MultiIndex([
            self.0[0].checked_sub(other.0[0])?,
            self.0[1].checked_sub(other.0[1])?,
            self.0[2].checked_sub(other.0[2])?,
        ]))
    }

    pub fn plus_axis(&self, axis: usize, n: usize) -> MultiIndex {
        let mut a = self.0;
        a[axis] += n;
        MultiIndex(a)
    }

    pub fn minus_axis(&self, axis: usize, n: usize) -> Option<MultiIndex> {
        let mut a = self.0;
        a[axis] = a[axis].checked_sub(n)?;
        Some(MultiIndex(a))
    }

    /// True when every component of `self` is `≤` the matching one of `other`.
    pub fn le_componentwise(&self, other: &MultiIndex) -> bool {
        (0..3).all(|d| self.0[d] <= other.0[d])
    }

    /// Graded rank of this index. Independent of the layout degree.
    pub fn rank(&self) -> usize {
        let d = self.degree();
        let r = d - self.0[0];
        index_count_below(d) + r * (r + 1) / 2 + (r - self.0[1])
    }

    /// Iterator over all `β ≤ α` componentwise.
    pub fn sub_indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        let [a1, a2, a3] = self.0;
        (0..=a1).flat_map(move |i| {
            (0..=a2).flat_map(move |j| (0..=a3).map(move |k| MultiIndex([i, j, k])))
        })
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

impl From<[usize; 3]> for MultiIndex {
    fn from(a: [usize; 3]) -> Self {
        MultiIndex(a)
    }
}

/// Number of multi-indices with `|α| ≤ m`: `(m+1)(m+2)(m+3)/6`.
pub fn index_count(m: usize) -> usize {
    (m + 1) * (m + 2) * (m + 3) / 6
}

/// Number of multi-indices with `|α| < d`.
fn index_count_below(d: usize) -> usize {
    d * (d + 1) * (d + 2) / 6
}

/// Dense ordering of `{α : |α| ≤ M}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexLayout {
    max_degree: usize,
    indices: Vec<MultiIndex>,
}

impl IndexLayout {
    pub fn new(max_degree: usize) -> Self {
        let mut indices = Vec::with_capacity(index_count(max_degree));
        for d in 0..=max_degree {
            for a1 in (0..=d).rev() {
                let r = d - a1;
                for a2 in (0..=r).rev() {
                    indices.push(MultiIndex([a1, a2, r - a2]));
                }
            }
        }
        IndexLayout {
            max_degree,
            indices,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Number of indices with degree `≤ d` (prefix length).
    pub fn prefix_len(&self, d: usize) -> usize {
        index_count(d.min(self.max_degree))
    }

    pub fn rank(&self, alpha: MultiIndex) -> Result<usize> {
        if alpha.degree() > self.max_degree {
            return Err(Error::DegreeOverflow {
                degree: alpha.degree(),
                max: self.max_degree,
            });
        }
        Ok(alpha.rank())
    }

    /// Rank of `α`, or `None` if it lies outside the layout.
    pub fn try_rank(&self, alpha: MultiIndex) -> Option<usize> {
        (alpha.degree() <= self.max_degree).then(|| alpha.rank())
    }

    pub fn unrank(&self, i: usize) -> Result<MultiIndex> {
        self.indices.get(i).copied().ok_or(Error::DegreeOverflow {
            degree: usize::MAX,
            max: self.max_degree,
        })
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        self.indices.iter().copied()
    }
}

/// Expansion parameters `(ū, θ̄)` of the basis `ℋ_α^{[ū,θ̄]}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub u_bar: [f64; 3],
    pub theta_bar: f64,
}

impl Frame {
    pub fn new(u_bar: [f64; 3], theta_bar: f64) -> Result<Self> {
        if !(theta_bar > 0.0) || !theta_bar.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "frame temperature must be positive, got {theta_bar}"
            )));
        }
        if u_bar.iter().any(|u| !u.is_finite()) {
            return Err(Error::InvalidParameter("frame velocity is not finite".into()));
        }
        Ok(Frame { u_bar, theta_bar })
    }

    /// The unit frame `(0, 1)` used by the dimensionless collision model.
    pub fn standard() -> Self {
        Frame {
            u_bar: [0.0; 3],
            theta_bar: 1.0,
        }
    }
}

/// `H_α(x) = He_{α₁}(x₁) He_{α₂}(x₂) He_{α₃}(x₃)` (probabilists' normalisation).
pub fn hermite3(alpha: MultiIndex, x: [f64; 3]) -> f64 {
    (0..3).map(|d| hermite_eval(alpha.0[d], x[d])).product()
}

/// Basis function `ℋ_α^{[ū,θ̄]}(v) = θ̄^{-|α|/2} H_α((v-ū)/√θ̄) ℳ_{ū,θ̄}(v)`,
/// where the Maxwellian carries the `1/m` factor.
pub fn basis_eval(alpha: MultiIndex, frame: &Frame, mass: f64, v: [f64; 3]) -> f64 {
    let sq = frame.theta_bar.sqrt();
    let xi = [
        (v[0] - frame.u_bar[0]) / sq,
        (v[1] - frame.u_bar[1]) / sq,
        (v[2] - frame.u_bar[2]) / sq,
    ];
    let r2 = xi.iter().map(|x| x * x).sum::<f64>();
    let maxwellian = (-0.5 * r2).exp()
        / (mass * (2.0 * std::f64::consts::PI * frame.theta_bar).powf(1.5));
    frame.theta_bar.powf(-(alpha.degree() as f64) / 2.0) * hermite3(alpha, xi) * maxwellian
}
