//! Finite-volume discretization of the moment system on uniform 1D/2D grids.

mod flux;
mod line;
mod scenario;
mod sgs;
mod step;

use crate::basis::Frame;
use crate::boundary::WallSpec;
use crate::error::{Error, Result};
use crate::frames::{moments, CoeffVector, MomentSet};

pub use flux::{block_spectrum, convection_flux, hll_flux, Transport};
pub use line::{reconstruct, FaceStates};
pub use scenario::{knudsen_length, scenario, ScenarioKind, ScenarioParams, Setup};
pub use sgs::{run_steady_sgs, SgsOptions, SgsReport};
pub use step::{max_dt, run_transient, step, CollisionModel, Solver, TimeScheme, TransientOptions, TransientReport};

/// Condition on one face of the domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Face {
    Periodic,
    Wall(WallSpec),
}

/// Uniform grid with `dims ∈ {1, 2}` and square cells of width `dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    dims: usize,
    cells: [usize; 2],
    dx: f64,
    origin: [f64; 2],
    /// `faces[axis] = [low, high]`.
    faces: [[Face; 2]; 2],
}

impl Grid {
    pub fn new_1d(cells: usize, dx: f64, origin: f64, low: Face, high: Face) -> Result<Self> {
        let g = Grid {
            dims: 1,
            cells: [cells, 1],
            dx,
            origin: [origin, 0.0],
            faces: [[low, high], [Face::Periodic, Face::Periodic]],
        };
        g.validate()?;
        Ok(g)
    }

    pub fn new_2d(cells: [usize; 2], dx: f64, origin: [f64; 2], faces: [[Face; 2]; 2]) -> Result<Self> {
        let g = Grid {
            dims: 2,
            cells,
            dx,
            origin,
            faces,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if !(self.dx > 0.0) {
            return Err(Error::InvalidParameter(format!("cell width {}", self.dx)));
        }
        for d in 0..self.dims {
            if self.cells[d] < 2 {
                return Err(Error::InvalidParameter(format!(
                    "axis {d} needs at least 2 cells, got {}",
                    self.cells[d]
                )));
            }
            let [lo, hi] = self.faces[d];
            if (lo == Face::Periodic) != (hi == Face::Periodic) {
                return Err(Error::InvalidParameter(format!(
                    "axis {d}: periodic faces must come in pairs"
                )));
            }
            for (face, positive) in [(lo, false), (hi, true)] {
                if let Face::Wall(w) = face {
                    if w.axis != d || w.positive != positive {
                        return Err(Error::InvalidParameter(format!(
                            "wall on axis {d} has normal axis {} (positive = {})",
                            w.axis, w.positive
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn cells(&self) -> [usize; 2] {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.cells[0] * self.cells[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn faces(&self) -> &[[Face; 2]; 2] {
        &self.faces
    }

    /// Flat index of cell `(i, j)`, `i` running fastest.
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.cells[0] + i
    }

    pub fn center(&self, k: usize) -> [f64; 2] {
        let i = k % self.cells[0];
        let j = k / self.cells[0];
        [
            self.origin[0] + (i as f64 + 0.5) * self.dx,
            self.origin[1] + (j as f64 + 0.5) * self.dx,
        ]
    }

    /// What lies across the `plus`/minus face of cell `k` along `axis`.
    pub(crate) fn neighbor(&self, k: usize, axis: usize, plus: bool) -> Neighbor {
        let mut ij = [k % self.cells[0], k / self.cells[0]];
        let n = self.cells[axis];
        let at_edge = if plus { ij[axis] + 1 == n } else { ij[axis] == 0 };
        if at_edge {
            match self.faces[axis][plus as usize] {
                Face::Wall(w) => return Neighbor::Wall(w),
                Face::Periodic => ij[axis] = if plus { 0 } else { n - 1 },
            }
        } else if plus {
            ij[axis] += 1;
        } else {
            ij[axis] -= 1;
        }
        Neighbor::Cell(self.index(ij[0], ij[1]))
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Neighbor {
    Cell(usize),
    Wall(WallSpec),
}

/// Per-cell coefficient vectors sharing one frame and truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct CellField {
    frame: Frame,
    max_degree: usize,
    cells: Vec<CoeffVector>,
    pub time: f64,
}

impl CellField {
    pub fn uniform(state: &CoeffVector, n: usize) -> Self {
        CellField {
            frame: *state.frame(),
            max_degree: state.max_degree(),
            cells: vec![state.clone(); n],
            time: 0.0,
        }
    }

    pub fn from_cells(cells: Vec<CoeffVector>, time: f64) -> Result<Self> {
        let first = cells
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty cell field".into()))?;
        let (frame, m) = (*first.frame(), first.max_degree());
        if cells.iter().any(|c| *c.frame() != frame || c.max_degree() != m) {
            return Err(Error::InvalidParameter(
                "cells must share one frame and truncation".into(),
            ));
        }
        Ok(CellField {
            frame,
            max_degree: m,
            cells,
            time,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn cells(&self) -> &[CoeffVector] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut [CoeffVector] {
        &mut self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn moments(&self) -> Result<Vec<MomentSet>> {
        self.cells.iter().map(moments).collect()
    }

    /// `Σ_j f̃_{0,j}` (mass per unit cell volume).
    pub fn total_mass(&self) -> f64 {
        self.cells.iter().map(|c| c.rho()).sum()
    }
}

/// Largest change between two fields, in units of `ρ_max θ̄^{|α|/2}` for
/// coefficients and of `ρ`, `√θ̄`, `θ̄` for the moments.
pub fn field_change(old: &CellField, new: &CellField) -> Result<f64> {
    let layout = crate::basis::IndexLayout::new(old.max_degree);
    let tb = old.frame.theta_bar;
    let rho_max = old.cells.iter().fold(0.0f64, |m, c| m.max(c.rho().abs()));
    let scales: Vec<f64> = layout
        .iter()
        .map(|a| 1.0 / (rho_max * tb.powf(a.degree() as f64 / 2.0)))
        .collect();
    let mut worst = 0.0f64;
    for (a, b) in old.cells.iter().zip(&new.cells) {
        for ((x, y), s) in a.values().iter().zip(b.values()).zip(&scales) {
            worst = worst.max((x - y).abs() * s);
        }
        let (ma, mb) = (moments(a)?, moments(b)?);
        worst = worst.max((ma.rho - mb.rho).abs() / ma.rho);
        worst = worst.max((ma.theta - mb.theta).abs() / tb);
        for d in 0..3 {
            worst = worst.max((ma.u[d] - mb.u[d]).abs() / tb.sqrt());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests;
