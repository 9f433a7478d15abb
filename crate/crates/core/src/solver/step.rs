//! Explicit finite-volume stepping.

use rayon::prelude::*;

use super::flux::Transport;
use super::line::face_value;
use super::{field_change, CellField, Grid, Neighbor};
use crate::boundary::{ghost_state, wall_closure, WallSpec};
use crate::collision::CollisionOperator;
use crate::error::{Error, Result};
use crate::frames::{moments, CoeffVector};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CollisionModel {
    #[default]
    Quadratic,
    Linearized,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TimeScheme {
    /// Unstable with the unlimited linear reconstruction; kept for first-order checks.
    Euler,
    #[default]
    SspRk2,
}

/// Spatial operator `−Σ_d (F_{j+½e_d} − F_{j−½e_d})/Δx + Q(f_j)` on a fixed grid and frame.
#[derive(Clone, Debug)]
pub struct Solver {
    grid: Grid,
    transport: Transport,
    collision: Option<CollisionOperator>,
    model: CollisionModel,
    scheme: TimeScheme,
    cfl: f64,
}

impl Solver {
    /// `collision = None` gives the free-transport system.
    pub fn new(grid: Grid, field: &CellField, collision: Option<CollisionOperator>) -> Result<Self> {
        if field.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "field has {} cells, grid has {}",
                field.len(),
                grid.len()
            )));
        }
        if let Some(op) = &collision {
            if op.m0() > field.max_degree() {
                return Err(Error::InvalidParameter(format!(
                    "M0 = {} exceeds M = {}",
                    op.m0(),
                    field.max_degree()
                )));
            }
        }
        Ok(Solver {
            transport: Transport::new(*field.frame(), field.max_degree())?,
            grid,
            collision,
            model: CollisionModel::Quadratic,
            scheme: TimeScheme::SspRk2,
            cfl: 0.45,
        })
    }

    pub fn with_model(mut self, model: CollisionModel) -> Self {
        self.model = model;
        self
    }

    pub fn with_scheme(mut self, scheme: TimeScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_cfl(mut self, cfl: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl < 1.0) {
            return Err(Error::InvalidParameter(format!("CFL number {cfl} outside (0, 1)")));
        }
        self.cfl = cfl;
        Ok(self)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn transport(&self) -> &Transport {
        &self.transport
    }

    pub fn collision(&self) -> Option<&CollisionOperator> {
        self.collision.as_ref()
    }

    pub fn model(&self) -> CollisionModel {
        self.model
    }

    pub fn scheme(&self) -> TimeScheme {
        self.scheme
    }

    pub fn cfl(&self) -> f64 {
        self.cfl
    }

    pub fn dt(&self) -> f64 {
        self.transport.max_dt(self.grid.dx(), self.grid.dims(), self.cfl)
    }

    /// `Σ_d (|ū_d| + C_{M+1}√θ̄)/Δx`.
    pub(crate) fn transport_rate(&self) -> f64 {
        self.transport.max_dt(self.grid.dx(), self.grid.dims(), 1.0).recip()
    }

    /// Collision term of one cell (zero without an operator).
    pub fn source(&self, c: &CoeffVector) -> Result<CoeffVector> {
        match (&self.collision, self.model) {
            (None, _) => Ok(CoeffVector::zeros(*c.frame(), c.max_degree())),
            (Some(op), CollisionModel::Quadratic) => op.apply_qstar(c),
            (Some(op), CollisionModel::Linearized) => op.apply_linearized(c),
        }
    }

    /// Damping rate of the collision term in cell `c`, zero without an operator.
    pub(crate) fn collision_rate(&self, c: &CoeffVector) -> Result<f64> {
        match &self.collision {
            None => Ok(0.0),
            Some(op) => op.damping_rate(&moments(c)?),
        }
    }

    fn face_state(&self, cells: &[CoeffVector], k: usize, axis: usize, plus: bool) -> Vec<f64> {
        let lo = match self.grid.neighbor(k, axis, false) {
            Neighbor::Cell(j) => Some(cells[j].values()),
            Neighbor::Wall(_) => None,
        };
        let hi = match self.grid.neighbor(k, axis, true) {
            Neighbor::Cell(j) => Some(cells[j].values()),
            Neighbor::Wall(_) => None,
        };
        let mut out = vec![0.0; cells[k].values().len()];
        face_value(cells[k].values(), lo, hi, plus, &mut out);
        out
    }

    /// Flux through the `plus`/minus face of cell `k` along `axis`, oriented along `+e_axis`.
    fn face_flux(&self, cells: &[CoeffVector], k: usize, axis: usize, plus: bool) -> Result<Vec<f64>> {
        let own = self.face_state(cells, k, axis, plus);
        let other = match self.grid.neighbor(k, axis, plus) {
            Neighbor::Cell(j) => self.face_state(cells, j, axis, !plus),
            Neighbor::Wall(w) => self.ghost(&own, &w)?,
        };
        let (left, right) = if plus { (&own, &other) } else { (&other, &own) };
        let mut out = vec![0.0; own.len()];
        self.transport.hll(axis, left, right, &mut out);
        Ok(out)
    }

    fn ghost(&self, face: &[f64], wall: &WallSpec) -> Result<Vec<f64>> {
        let c = CoeffVector::from_values(*self.transport.frame(), self.transport.max_degree(), face.to_vec())?;
        Ok(ghost_state(&c, wall)?.into_values())
    }

    /// Time derivative of cell `k`, reading neighbours from `cells`.
    pub fn cell_residual(&self, cells: &[CoeffVector], k: usize) -> Result<Vec<f64>> {
        let mut r = self.source(&cells[k])?.into_values();
        let inv_dx = 1.0 / self.grid.dx();
        for axis in 0..self.grid.dims() {
            let hi = self.face_flux(cells, k, axis, true)?;
            let lo = self.face_flux(cells, k, axis, false)?;
            for ((x, h), l) in r.iter_mut().zip(&hi).zip(&lo) {
                *x -= (h - l) * inv_dx;
            }
        }
        Ok(r)
    }

    pub fn residual(&self, field: &CellField) -> Result<Vec<Vec<f64>>> {
        let cells = field.cells();
        (0..cells.len())
            .into_par_iter()
            .map(|k| self.cell_residual(cells, k))
            .collect()
    }

    /// Closed wall states `b` on every wall face, in cell order.
    pub fn wall_states(&self, field: &CellField) -> Result<Vec<(WallSpec, CoeffVector)>> {
        let cells = field.cells();
        let mut out = Vec::new();
        for k in 0..cells.len() {
            for axis in 0..self.grid.dims() {
                for plus in [false, true] {
                    if let Neighbor::Wall(w) = self.grid.neighbor(k, axis, plus) {
                        let face = self.face_state(cells, k, axis, plus);
                        let c = CoeffVector::from_values(*field.frame(), field.max_degree(), face)?;
                        out.push((w, wall_closure(&c, &w)?));
                    }
                }
            }
        }
        Ok(out)
    }

    fn euler(&self, field: &CellField, dt: f64) -> Result<CellField> {
        let r = self.residual(field)?;
        let mut next = field.clone();
        for (c, r) in next.cells_mut().iter_mut().zip(&r) {
            for (x, d) in c.values_mut().iter_mut().zip(r) {
                *x += dt * d;
            }
        }
        next.time += dt;
        Ok(next)
    }
}

/// Largest stable time step for `field` on cells of width `dx`.
pub fn max_dt(field: &CellField, dx: f64, dims: usize, cfl: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl < 1.0) {
        return Err(Error::InvalidParameter(format!("CFL number {cfl} outside (0, 1)")));
    }
    Ok(Transport::new(*field.frame(), field.max_degree())?.max_dt(dx, dims, cfl))
}

/// One time step with the solver's scheme. Fails on an inadmissible result.
pub fn step(solver: &Solver, field: &CellField, dt: f64) -> Result<CellField> {
    let next = match solver.scheme {
        TimeScheme::Euler => solver.euler(field, dt)?,
        TimeScheme::SspRk2 => {
            let stage = solver.euler(field, dt)?;
            check_admissible(&stage)?;
            let mut two = solver.euler(&stage, dt)?;
            for (c, old) in two.cells_mut().iter_mut().zip(field.cells()) {
                for (x, o) in c.values_mut().iter_mut().zip(old.values()) {
                    *x = 0.5 * (*x + o);
                }
            }
            two.time = field.time + dt;
            two
        }
    };
    check_admissible(&next)?;
    Ok(next)
}

fn check_admissible(field: &CellField) -> Result<()> {
    field.cells().par_iter().try_for_each(|c| moments(c).map(|_| ()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransientOptions {
    /// Defaults to the solver's CFL step.
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub max_steps: usize,
    /// Stop once the steady residual drops below this value.
    pub steady_tol: Option<f64>,
    /// Steps between steady-residual evaluations.
    pub check_every: usize,
}

impl Default for TransientOptions {
    fn default() -> Self {
        TransientOptions {
            dt: None,
            t_end: None,
            max_steps: 1_000_000,
            steady_tol: None,
            check_every: 50,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransientReport {
    pub steps: usize,
    pub time: f64,
    /// Last steady residual: the scaled change per step divided by `Δt·rate`.
    pub residual: f64,
    pub converged: bool,
}

/// Explicit time stepping until `t_end`, steady state or `max_steps`.
pub fn run_transient(solver: &Solver, field: &mut CellField, opts: &TransientOptions) -> Result<TransientReport> {
    let dt = opts.dt.unwrap_or_else(|| solver.dt());
    let rate = solver.transport_rate();
    let check_every = opts.check_every.max(1);
    let mut report = TransientReport {
        steps: 0,
        time: field.time,
        residual: f64::INFINITY,
        converged: false,
    };
    while report.steps < opts.max_steps {
        let mut h = dt;
        if let Some(t_end) = opts.t_end {
            let left = t_end - field.time;
            if left <= 1e-12 * dt {
                break;
            }
            h = h.min(left);
        }
        let next = step(solver, field, h)?;
        report.steps += 1;
        if opts.steady_tol.is_some() && report.steps % check_every == 0 {
            report.residual = field_change(field, &next)? / (h * rate);
        }
        *field = next;
        report.time = field.time;
        if let Some(tol) = opts.steady_tol {
            if report.residual < tol {
                report.converged = true;
                break;
            }
        }
    }
    Ok(report)
}
