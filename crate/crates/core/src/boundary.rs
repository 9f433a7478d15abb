//! Maxwell wall closure for axis-aligned walls.
//!
//! The closure is written for the wall whose outward normal is `+e₁`; other
//! walls are mapped onto it by permuting axes and, for an outward normal
//! pointing down an axis, reflecting that axis (odd normal indices change sign).

use std::f64::consts::PI;

use crate::basis::{double_factorial, factorial, index_count, IndexLayout, MultiIndex};
use crate::error::{Error, Result};
use crate::frames::CoeffVector;

/// Wall with outward normal `±e_axis`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WallSpec {
    pub axis: usize,
    /// `true` when the outward normal is `+e_axis`.
    pub positive: bool,
    /// `θ_w = k_B T_w / m`.
    pub theta: f64,
    pub velocity: [f64; 3],
    pub accommodation: f64,
}

impl WallSpec {
    pub fn new(axis: usize, positive: bool, theta: f64, velocity: [f64; 3], accommodation: f64) -> Result<Self> {
        if axis > 2 {
            return Err(Error::InvalidParameter(format!("wall axis {axis}")));
        }
        if !(theta > 0.0) {
            return Err(Error::InvalidParameter(format!("wall temperature {theta}")));
        }
        if !(0.0..=1.0).contains(&accommodation) {
            return Err(Error::InvalidParameter(format!(
                "accommodation {accommodation} outside [0, 1]"
            )));
        }
        Ok(WallSpec {
            axis,
            positive,
            theta,
            velocity,
            accommodation,
        })
    }

    /// Local axis order: normal first, then the two tangential axes.
    fn axes(&self) -> [usize; 3] {
        match self.axis {
            0 => [0, 1, 2],
            1 => [1, 0, 2],
            _ => [2, 0, 1],
        }
    }
}

/// `K(r, s)` as printed (a factor `2π` above the half-range integral it encodes).
pub fn k_table(r: usize, s: usize) -> f64 {
    if r % 2 == 0 || s % 2 == 1 {
        return 0.0;
    }
    let sign = if ((r + s - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    sign * (2.0 * PI).sqrt() * double_factorial(s as i64 - 1)
        / (r as f64 * 2f64.powi(((r - 1) / 2) as i32) * factorial((r - 1) / 2))
}

/// Recursion tables for a wall and frame.
#[derive(Clone, Debug)]
pub struct HalfSpaceTables {
    pub max_degree: usize,
    /// `J_r` along the two tangential axes.
    pub j: [Vec<f64>; 2],
    pub j_hat: Vec<f64>,
    pub s_seq: Vec<f64>,
    /// `S(r, s)` as printed, row-major `(M+1)²`.
    pub s: Vec<f64>,
}

impl HalfSpaceTables {
    pub fn s_at(&self, r: usize, s: usize) -> f64 {
        self.s[r * (self.max_degree + 1) + s]
    }
}

/// `slip` holds the tangential arguments `u^w_t − ū_t` in local axis order.
pub fn build_tables(theta_bar: f64, theta_w: f64, slip: [f64; 2], m: usize) -> HalfSpaceTables {
    let gap = theta_w - theta_bar;
    let j = slip.map(|u| {
        let mut v = vec![0.0; m + 1];
        v[0] = 1.0;
        for r in 1..=m {
            let back2 = if r >= 2 { v[r - 2] } else { 0.0 };
            v[r] = (gap * back2 + u * v[r - 1]) / r as f64;
        }
        v
    });
    let mut s_seq = vec![0.0; m + 1];
    if m >= 1 {
        s_seq[1] = (theta_w / (2.0 * PI)).sqrt();
    }
    for r in 2..=m {
        s_seq[r] = -((r - 2) as f64) / ((r * (r - 1)) as f64) * theta_bar * s_seq[r - 2];
    }
    let mut j_hat = vec![0.0; m + 1];
    j_hat[0] = 0.5;
    for r in 1..=m {
        let back2 = if r >= 2 { j_hat[r - 2] } else { 0.0 };
        j_hat[r] = gap * back2 / r as f64 - s_seq[r];
    }
    let w = m + 1;
    let mut s = vec![0.0; w * w];
    for r in 0..=m {
        for c in 0..=m {
            s[r * w + c] = match (r, c) {
                (0, 0) => 0.5,
                (0, _) => k_table(1, c - 1),
                (_, 0) => k_table(r, 0),
                _ => k_table(r, c) + s[(r - 1) * w + c - 1] * c as f64 / r as f64,
            };
        }
    }
    HalfSpaceTables {
        max_degree: m,
        j,
        j_hat,
        s_seq,
        s,
    }
}

/// `{α : |α| ≤ M, α₁ odd}`.
pub fn odd_set(m: usize) -> Vec<MultiIndex> {
    IndexLayout::new(m).iter().filter(|a| a.0[0] % 2 == 1).collect()
}

/// `Σ_{|α'| ≤ M} ⌈(M − |α'|)/2⌉` over `α' ∈ ℕ²`.
pub fn boundary_condition_count(m: usize) -> usize {
    (0..=m).map(|d| (d + 1) * (m - d).div_ceil(2)).sum()
}

fn local_index(axes: &[usize; 3], alpha: MultiIndex) -> MultiIndex {
    MultiIndex::new(alpha.0[axes[0]], alpha.0[axes[1]], alpha.0[axes[2]])
}

fn global_index(axes: &[usize; 3], local: MultiIndex) -> MultiIndex {
    let mut a = [0; 3];
    for i in 0..3 {
        a[axes[i]] = local.0[i];
    }
    MultiIndex(a)
}

/// Interior state with its odd-normal coefficients replaced by the Maxwell closure.
pub fn wall_closure(interior: &CoeffVector, wall: &WallSpec) -> Result<CoeffVector> {
    let frame = interior.frame();
    let axes = wall.axes();
    let normal = wall.axis;
    let tol = 1e-12 * (1.0 + frame.u_bar[normal].abs() + wall.velocity[normal].abs());
    if (frame.u_bar[normal] - wall.velocity[normal]).abs() > tol {
        return Err(Error::InvalidParameter(format!(
            "frame velocity {} differs from wall normal velocity {} on axis {normal}",
            frame.u_bar[normal], wall.velocity[normal]
        )));
    }
    let m = interior.max_degree();
    let tb = frame.theta_bar;
    let sign = if wall.positive { 1.0 } else { -1.0 };
    let parity = |k: usize| if k % 2 == 1 { sign } else { 1.0 };
    let slip = [
        wall.velocity[axes[1]] - frame.u_bar[axes[1]],
        wall.velocity[axes[2]] - frame.u_bar[axes[2]],
    ];
    let tables = build_tables(tb, wall.theta, slip, m);
    // Local coefficient in the reflected, permuted frame.
    let get = |local: MultiIndex| parity(local.0[0]) * interior.get(global_index(&axes, local));

    let sq = tb.sqrt();
    let mut pow = vec![1.0; m + 2];
    for k in 1..pow.len() {
        pow[k] = pow[k - 1] / tb;
    }
    let scale = 1.0 / (2.0 * PI);
    let wall_density = (2.0 * PI / wall.theta).sqrt()
        * (0..=m / 2)
            .map(|k| scale * tables.s_at(1, 2 * k) * sq * pow[k] * get(MultiIndex::new(2 * k, 0, 0)))
            .sum::<f64>();
    let factor = 2.0 * wall.accommodation / (2.0 - wall.accommodation);

    let mut out = interior.clone();
    for alpha in IndexLayout::new(m).iter() {
        let local = local_index(&axes, alpha);
        let [a1, a2, a3] = local.0;
        if a1 % 2 == 0 {
            continue;
        }
        let mut reflected = wall_density * tables.j_hat[a1] * tables.j[0][a2] * tables.j[1][a3];
        let kmax = (m - a2 - a3) / 2;
        let half = sq.powi(a1 as i32);
        for k in 0..=kmax {
            let src = MultiIndex::new(2 * k, a2, a3);
            reflected += scale * tables.s_at(a1, 2 * k) * half * pow[k] * get(src);
        }
        out.values_mut()[alpha.rank()] = parity(a1) * factor * reflected;
    }
    debug_assert_eq!(out.values().len(), index_count(m));
    Ok(out)
}

/// Exterior state for the wall face: `2b − L`, so the face average is the closed state `b`.
pub fn ghost_state(face: &CoeffVector, wall: &WallSpec) -> Result<CoeffVector> {
    let b = wall_closure(face, wall)?;
    let mut g = b;
    for (x, l) in g.values_mut().iter_mut().zip(face.values()) {
        *x = 2.0 * *x - l;
    }
    Ok(g)
}
