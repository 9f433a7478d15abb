//! Channel and cavity flows of argon.

use super::{CellField, Face, Grid};
use crate::basis::Frame;
use crate::boundary::WallSpec;
use crate::error::{Error, Result};
use crate::frames::maxwellian_coeffs;
use crate::kernels::{GasSpec, KernelSpec};

const CHANNEL_DENSITY: f64 = 9.282e-6;
const CHANNEL_T: f64 = 273.15;
const COUETTE_SPEED: f64 = 119.25;
const FOURIER_HOT: f64 = 1092.6;
const CAVITY_SIDE: f64 = 1.25e-6;
const CAVITY_T: f64 = 273.0;
const CAVITY_LID: [f64; 3] = [50.0, 0.0, 0.0];

/// Plate distances with their tabulated Knudsen numbers.
const CHANNEL_WIDTHS: [(f64, f64); 4] = [(0.1, 0.092456), (0.5, 0.018491), (2.5, 0.003698), (12.5, 0.00074)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    Couette,
    Fourier,
    Cavity,
}

impl ScenarioKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "couette" => Ok(ScenarioKind::Couette),
            "fourier" => Ok(ScenarioKind::Fourier),
            "cavity" => Ok(ScenarioKind::Cavity),
            _ => Err(Error::config(
                "scenario.name",
                format!("unknown scenario {name:?} (expected couette, fourier or cavity)"),
            )),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Couette => "couette",
            ScenarioKind::Fourier => "fourier",
            ScenarioKind::Cavity => "cavity",
        }
    }

    /// Default gas: IPL η = 10 with the DSMC-matched viscosity for the
    /// channels, IPL η = 7.45 with `μ_ref = 2.117e−5` for the cavity.
    pub fn default_gas(&self) -> GasSpec {
        match self {
            ScenarioKind::Cavity => GasSpec {
                t_ref: Some(CAVITY_T),
                mu_ref: Some(2.117e-5),
                ..GasSpec::argon(KernelSpec::Ipl { eta: 7.45, kappa: 1.0 })
            },
            _ => GasSpec::argon(KernelSpec::Ipl { eta: 10.0, kappa: 1.0 }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioParams {
    pub kind: ScenarioKind,
    pub kn: f64,
    /// Plate distance or cavity side; derived from `kn` when absent.
    pub length: Option<f64>,
    /// Cells per axis.
    pub cells: usize,
    pub max_degree: usize,
    pub accommodation: f64,
    pub gas: Option<GasSpec>,
    /// Wall temperatures in K: `[left, right]` for channels, `[walls, walls]` for the cavity.
    pub wall_temperature: Option<[f64; 2]>,
    /// Plate speed (channels, applied as `∓v e₂`) or lid speed (cavity, along `e₁`).
    pub wall_speed: Option<f64>,
    pub frame: Option<Frame>,
}

impl ScenarioParams {
    pub fn new(kind: ScenarioKind, kn: f64, cells: usize, max_degree: usize) -> Self {
        ScenarioParams {
            kind,
            kn,
            length: None,
            cells,
            max_degree,
            accommodation: 1.0,
            gas: None,
            wall_temperature: None,
            wall_speed: None,
            frame: None,
        }
    }
}

/// Grid, initial field and gas of a scenario.
#[derive(Clone, Debug)]
pub struct Setup {
    pub kind: ScenarioKind,
    pub grid: Grid,
    pub field: CellField,
    pub gas: GasSpec,
}

/// Plate distance for the channel flows at Knudsen number `kn`.
///
/// Tabulated values are returned exactly; others scale as `1/Kn` from the
/// `Kn = 0.1` entry.
pub fn knudsen_length(kn: f64) -> Result<f64> {
    if !(kn > 0.0) || !kn.is_finite() {
        return Err(Error::config("scenario.kn", format!("Knudsen number {kn} must be positive")));
    }
    for (k, d) in CHANNEL_WIDTHS {
        if (kn - k).abs() <= 1e-12 * k {
            return Ok(d);
        }
    }
    Ok(CHANNEL_WIDTHS[0].1 * CHANNEL_WIDTHS[0].0 / kn)
}

pub fn scenario(p: &ScenarioParams) -> Result<Setup> {
    if p.cells < 2 {
        return Err(Error::config("discretization.cells", format!("need at least 2 cells, got {}", p.cells)));
    }
    if !(0.0..=1.0).contains(&p.accommodation) {
        return Err(Error::config(
            "scenario.accommodation",
            format!("{} outside [0, 1]", p.accommodation),
        ));
    }
    if let Some(l) = p.length {
        if !(l > 0.0) {
            return Err(Error::config("scenario.length", format!("{l} must be positive")));
        }
    }
    let gas = p.gas.clone().unwrap_or_else(|| p.kind.default_gas());
    let omega = p.accommodation;
    match p.kind {
        ScenarioKind::Couette | ScenarioKind::Fourier => {
            let d = match p.length {
                Some(l) => l,
                None => knudsen_length(p.kn)?,
            };
            let (t_left, t_right) = match (p.wall_temperature, p.kind) {
                (Some([l, r]), _) => (l, r),
                (None, ScenarioKind::Couette) => (CHANNEL_T, CHANNEL_T),
                (None, _) => (CHANNEL_T, FOURIER_HOT),
            };
            let v = p.wall_speed.unwrap_or(if p.kind == ScenarioKind::Couette { COUETTE_SPEED } else { 0.0 });
            let left = WallSpec::new(0, false, gas.theta(t_left), [0.0, -v, 0.0], omega)?;
            let right = WallSpec::new(0, true, gas.theta(t_right), [0.0, v, 0.0], omega)?;
            let grid = Grid::new_1d(p.cells, d / p.cells as f64, -0.5 * d, Face::Wall(left), Face::Wall(right))?;
            let frame = match p.frame {
                Some(f) => f,
                None => Frame::new([0.0; 3], gas.theta(t_left.max(t_right)))?,
            };
            let init = maxwellian_coeffs(CHANNEL_DENSITY, [0.0; 3], gas.theta(CHANNEL_T), &frame, p.max_degree)?;
            Ok(Setup {
                kind: p.kind,
                field: CellField::uniform(&init, grid.len()),
                grid,
                gas,
            })
        }
        ScenarioKind::Cavity => {
            if !(p.kn > 0.0) || !p.kn.is_finite() {
                return Err(Error::config("scenario.kn", format!("Knudsen number {} must be positive", p.kn)));
            }
            let side = p.length.unwrap_or(CAVITY_SIDE);
            let rho = 0.0891 / p.kn;
            let theta = gas.theta(p.wall_temperature.map_or(CAVITY_T, |t| t[0]));
            let lid = p.wall_speed.map_or(CAVITY_LID, |v| [v, 0.0, 0.0]);
            let wall = |axis, positive, velocity| WallSpec::new(axis, positive, theta, velocity, omega).map(Face::Wall);
            let faces = [
                [wall(0, false, [0.0; 3])?, wall(0, true, [0.0; 3])?],
                [wall(1, false, [0.0; 3])?, wall(1, true, lid)?],
            ];
            let grid = Grid::new_2d([p.cells; 2], side / p.cells as f64, [0.0; 2], faces)?;
            let frame = match p.frame {
                Some(f) => f,
                None => Frame::new([0.0; 3], theta)?,
            };
            let init = maxwellian_coeffs(rho, [0.0; 3], theta, &frame, p.max_degree)?;
            Ok(Setup {
                kind: p.kind,
                field: CellField::uniform(&init, grid.len()),
                grid,
                gas,
            })
        }
    }
}
