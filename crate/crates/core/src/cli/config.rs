//! TOML run configuration.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::basis::Frame;
use crate::error::{Error, Result};
use crate::kernels::{GasSpec, KernelSpec, BOLTZMANN};
use crate::solver::{scenario, CollisionModel, ScenarioKind, ScenarioParams, TimeScheme};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Transient,
    Steady,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub gas: GasBlock,
    pub discretization: DiscretizationBlock,
    pub scenario: ScenarioBlock,
    #[serde(default)]
    pub frame: FrameBlock,
    #[serde(default)]
    pub run: RunBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

/// Gas and kernel. Missing fields take the scenario defaults.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasBlock {
    pub mass: Option<f64>,
    /// `"hs"`, `"vhs"` or `"ipl"`.
    pub kernel: Option<String>,
    pub eta: Option<f64>,
    pub nu: Option<f64>,
    pub d_ref: Option<f64>,
    pub t_ref: Option<f64>,
    pub mu_ref: Option<f64>,
    pub kb: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizationBlock {
    pub m: usize,
    pub m0: usize,
    pub cells: usize,
    pub dims: Option<usize>,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// `"rk2"` or `"euler"`.
    #[serde(default = "default_scheme")]
    pub scheme: String,
    /// `"quadratic"` or `"linearized"`.
    #[serde(default = "default_model")]
    pub model: String,
    #[serde(default = "default_true")]
    pub tail_density: bool,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioBlock {
    pub name: String,
    pub kn: Option<f64>,
    /// Plate distance or cavity side in m.
    pub length: Option<f64>,
    #[serde(default = "default_one")]
    pub accommodation: f64,
    pub wall_temperature: Option<[f64; 2]>,
    pub wall_speed: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameBlock {
    pub u_bar: Option<[f64; 3]>,
    pub theta_bar: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBlock {
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub t_end: Option<f64>,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default = "default_max_steps")]
    pub max_iterations: usize,
    #[serde(default = "default_one")]
    pub relaxation: f64,
}

impl Default for RunBlock {
    fn default() -> Self {
        RunBlock {
            tolerance: default_tolerance(),
            t_end: None,
            max_steps: default_max_steps(),
            max_iterations: default_max_steps(),
            relaxation: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    /// Final moment profile (CSV).
    #[serde(default = "default_csv")]
    pub path: PathBuf,
    /// Coefficient snapshot written next to the CSV.
    pub snapshot: Option<PathBuf>,
    /// Steps between progress reports and snapshot refreshes.
    #[serde(default = "default_stride")]
    pub stride: usize,
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock {
            path: default_csv(),
            snapshot: None,
            stride: default_stride(),
        }
    }
}

fn default_cfl() -> f64 {
    0.45
}
fn default_scheme() -> String {
    "rk2".into()
}
fn default_model() -> String {
    "quadratic".into()
}
fn default_true() -> bool {
    true
}
fn default_one() -> f64 {
    1.0
}
fn default_tolerance() -> f64 {
    1e-8
}
fn default_max_steps() -> usize {
    1_000_000
}
fn default_csv() -> PathBuf {
    PathBuf::from("moments.csv")
}
fn default_stride() -> usize {
    1000
}

/// Dotted key of the TOML line containing byte `pos`.
fn key_at(text: &str, pos: usize) -> String {
    let before = &text[..pos.min(text.len())];
    let start = before.rfind('\n').map_or(0, |i| i + 1);
    let line = text[start..].lines().next().unwrap_or("");
    let key = line.split('=').next().unwrap_or("").trim().trim_matches(['[', ']']);
    let section = before[..start]
        .lines()
        .rev()
        .map(str::trim)
        .find(|l| l.starts_with('['))
        .map(|l| l.trim_matches(['[', ']']).trim());
    match (section, line.contains('=')) {
        (Some(sec), true) => format!("{sec}.{key}"),
        _ => key.to_string(),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let key = e.span().map_or_else(|| "config".to_string(), |span| key_at(text, span.start));
            Error::config(key, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let d = &self.discretization;
        if d.m0 < 2 {
            return Err(Error::config("discretization.m0", format!("M0 = {} must be at least 2", d.m0)));
        }
        if d.m < d.m0 {
            return Err(Error::config("discretization.m", format!("M = {} must be at least M0 = {}", d.m, d.m0)));
        }
        if d.m < 3 {
            return Err(Error::config("discretization.m", format!("M = {} must be at least 3", d.m)));
        }
        if d.cells < 2 {
            return Err(Error::config("discretization.cells", format!("need at least 2 cells, got {}", d.cells)));
        }
        if !(d.cfl > 0.0 && d.cfl < 1.0) {
            return Err(Error::config("discretization.cfl", format!("{} outside (0, 1)", d.cfl)));
        }
        self.scheme()?;
        self.model()?;
        let kind = self.kind()?;
        let dims = if kind == ScenarioKind::Cavity { 2 } else { 1 };
        if let Some(given) = d.dims {
            if given != dims {
                return Err(Error::config(
                    "discretization.dims",
                    format!("scenario {} is {dims}-dimensional, got {given}", kind.name()),
                ));
            }
        }
        match (self.scenario.kn, self.scenario.length, kind) {
            (Some(kn), _, _) if !(kn > 0.0 && kn.is_finite()) => {
                return Err(Error::config("scenario.kn", format!("{kn} must be positive")));
            }
            (None, None, _) | (None, _, ScenarioKind::Cavity) => {
                return Err(Error::config("scenario.kn", "missing Knudsen number"));
            }
            _ => {}
        }
        if let Some(l) = self.scenario.length {
            if !(l > 0.0) {
                return Err(Error::config("scenario.length", format!("{l} must be positive")));
            }
        }
        if !(0.0..=1.0).contains(&self.scenario.accommodation) {
            return Err(Error::config(
                "scenario.accommodation",
                format!("{} outside [0, 1]", self.scenario.accommodation),
            ));
        }
        if let Some(t) = self.scenario.wall_temperature {
            if t.iter().any(|x| !(*x > 0.0)) {
                return Err(Error::config("scenario.wall_temperature", format!("{t:?} must be positive")));
            }
        }
        if let Some(t) = self.frame.theta_bar {
            if !(t > 0.0) {
                return Err(Error::config("frame.theta_bar", format!("{t} must be positive")));
            }
        }
        if let Some(u) = self.frame.u_bar {
            if u[0] != 0.0 || (kind == ScenarioKind::Cavity && u[1] != 0.0) {
                return Err(Error::config("frame.u_bar", "normal components must match the wall velocity (0)"));
            }
        }
        if !(self.run.tolerance > 0.0) {
            return Err(Error::config("run.tolerance", format!("{} must be positive", self.run.tolerance)));
        }
        if !(self.run.relaxation > 0.0 && self.run.relaxation <= 1.0) {
            return Err(Error::config("run.relaxation", format!("{} outside (0, 1]", self.run.relaxation)));
        }
        if self.output.stride == 0 {
            return Err(Error::config("output.stride", "must be positive"));
        }
        self.gas()?;
        Ok(())
    }

    pub fn kind(&self) -> Result<ScenarioKind> {
        ScenarioKind::parse(&self.scenario.name)
    }

    pub fn scheme(&self) -> Result<TimeScheme> {
        match self.discretization.scheme.as_str() {
            "rk2" => Ok(TimeScheme::SspRk2),
            "euler" => Ok(TimeScheme::Euler),
            s => Err(Error::config("discretization.scheme", format!("unknown scheme {s:?} (rk2 or euler)"))),
        }
    }

    pub fn model(&self) -> Result<CollisionModel> {
        match self.discretization.model.as_str() {
            "quadratic" => Ok(CollisionModel::Quadratic),
            "linearized" => Ok(CollisionModel::Linearized),
            s => Err(Error::config(
                "discretization.model",
                format!("unknown model {s:?} (quadratic or linearized)"),
            )),
        }
    }

    /// Scenario defaults overridden by the `[gas]` block.
    pub fn gas(&self) -> Result<GasSpec> {
        let g = &self.gas;
        let mut gas = self.kind()?.default_gas();
        if let Some(name) = &g.kernel {
            gas.kernel = match name.as_str() {
                "hs" => KernelSpec::HardSphere { d: 1.0 },
                "vhs" => KernelSpec::Vhs {
                    d_ref: 1.0,
                    g_ref: 1.0,
                    nu: g.nu.ok_or_else(|| Error::config("gas.nu", "VHS kernel needs nu"))?,
                },
                "ipl" => KernelSpec::Ipl {
                    eta: g.eta.ok_or_else(|| Error::config("gas.eta", "IPL kernel needs eta"))?,
                    kappa: 1.0,
                },
                k => return Err(Error::config("gas.kernel", format!("unknown kernel {k:?} (hs, vhs or ipl)"))),
            };
        } else if let Some(eta) = g.eta {
            gas.kernel = KernelSpec::Ipl { eta, kappa: 1.0 };
        }
        gas.kernel
            .validate()
            .map_err(|e| Error::config("gas.kernel", e.to_string()))?;
        for (key, v) in [("gas.mass", g.mass), ("gas.d_ref", g.d_ref), ("gas.t_ref", g.t_ref), ("gas.mu_ref", g.mu_ref), ("gas.kb", g.kb)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return Err(Error::config(key, format!("{v} must be positive")));
                }
            }
        }
        gas.mass = g.mass.unwrap_or(gas.mass);
        gas.d_ref = g.d_ref.or(gas.d_ref);
        gas.t_ref = g.t_ref.or(gas.t_ref);
        gas.mu_ref = g.mu_ref.or(gas.mu_ref);
        gas.kb = g.kb.unwrap_or(BOLTZMANN);
        Ok(gas)
    }

    pub fn scenario_params(&self) -> Result<ScenarioParams> {
        let kind = self.kind()?;
        let gas = self.gas()?;
        let mut p = ScenarioParams::new(kind, self.scenario.kn.unwrap_or(f64::NAN), self.discretization.cells, self.discretization.m);
        p.length = self.scenario.length;
        p.accommodation = self.scenario.accommodation;
        p.wall_temperature = self.scenario.wall_temperature;
        p.wall_speed = self.scenario.wall_speed;
        p.gas = Some(gas);
        if self.frame.u_bar.is_some() || self.frame.theta_bar.is_some() {
            let default = *scenario(&p)?.field.frame();
            p.frame = Some(Frame::new(
                self.frame.u_bar.unwrap_or(default.u_bar),
                self.frame.theta_bar.unwrap_or(default.theta_bar),
            )?);
        }
        Ok(p)
    }
}
