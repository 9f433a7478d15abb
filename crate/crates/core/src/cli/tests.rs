use super::*;
use crate::basis::Frame;
use crate::frames::maxwellian_coeffs;
use crate::solver::{CellField, ScenarioKind};

const BASE: &str = r#"
mode = "steady"

[discretization]
m = 4
m0 = 3
cells = 8

[scenario]
name = "couette"
kn = 0.5
"#;

fn with(extra: &str) -> String {
    format!("{BASE}\n{extra}")
}

fn config_key(text: &str) -> String {
    match RunConfig::parse(text) {
        Err(Error::Config { key, .. }) => key,
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn parses_defaults() {
    let cfg = RunConfig::parse(BASE).unwrap();
    assert_eq!(cfg.mode, Mode::Steady);
    assert_eq!(cfg.discretization.cfl, 0.45);
    assert!(cfg.discretization.tail_density);
    assert_eq!(cfg.run.tolerance, 1e-8);
    assert_eq!(cfg.kind().unwrap(), ScenarioKind::Couette);
    let gas = cfg.gas().unwrap();
    assert_eq!(gas.kernel, KernelSpec::Ipl { eta: 10.0, kappa: 1.0 });
    let p = cfg.scenario_params().unwrap();
    assert_eq!((p.cells, p.max_degree, p.kn), (8, 4, 0.5));
    assert_eq!(p.frame, None);
}

#[test]
fn overrides_reach_the_scenario() {
    let text = r#"
[gas]
kernel = "vhs"
nu = 0.5
mu_ref = 2e-5

[discretization]
m = 5
m0 = 3
cells = 4
model = "linearized"
scheme = "euler"
tail_density = false

[scenario]
name = "fourier"
length = 0.01
wall_temperature = [300.0, 600.0]
accommodation = 0.7

[frame]
theta_bar = 50000.0
"#;
    let cfg = RunConfig::parse(text).unwrap();
    assert_eq!(cfg.model().unwrap(), crate::solver::CollisionModel::Linearized);
    assert_eq!(cfg.scheme().unwrap(), crate::solver::TimeScheme::Euler);
    let p = cfg.scenario_params().unwrap();
    let gas = p.gas.clone().unwrap();
    assert_eq!(gas.kernel, KernelSpec::Vhs { d_ref: 1.0, g_ref: 1.0, nu: 0.5 });
    assert_eq!(gas.mu_ref, Some(2e-5));
    let s = scenario(&p).unwrap();
    assert_eq!(s.field.frame().theta_bar, 50000.0);
    assert!((s.grid.dx() * 4.0 - 0.01).abs() < 1e-16);
    let [[crate::solver::Face::Wall(lo), crate::solver::Face::Wall(hi)], _] = *s.grid.faces() else {
        panic!()
    };
    assert!((gas.temperature(hi.theta) - 600.0).abs() < 1e-9);
    assert_eq!(lo.accommodation, 0.7);
}

#[test]
fn rejections_name_the_key() {
    assert_eq!(config_key(&BASE.replace("m0 = 3", "m0 = 1")), "discretization.m0");
    assert_eq!(config_key(&BASE.replace("m = 4", "m = 2").replace("m0 = 3", "m0 = 2")), "discretization.m");
    assert_eq!(config_key(&BASE.replace("m0 = 3", "m0 = 5")), "discretization.m");
    assert_eq!(config_key(&BASE.replace("cells = 8", "cells = 1")), "discretization.cells");
    assert_eq!(config_key(&BASE.replace("couette", "poiseuille")), "scenario.name");
    assert_eq!(config_key(&BASE.replace("kn = 0.5", "kn = -1.0")), "scenario.kn");
    assert_eq!(config_key(&BASE.replace("kn = 0.5", "")), "scenario.kn");
    assert_eq!(config_key(&BASE.replace("cells = 8", "cells = 8\ncfl = 1.5")), "discretization.cfl");
    assert_eq!(config_key(&BASE.replace("cells = 8", "cells = 8\ndims = 2")), "discretization.dims");
    assert_eq!(config_key(&BASE.replace("cells = 8", "cells = 8\nmodel = \"bgk\"")), "discretization.model");
    assert_eq!(config_key(&with("[gas]\nkernel = \"ipl\"")), "gas.eta");
    assert_eq!(config_key(&with("[gas]\neta = 2.0")), "gas.kernel");
    assert_eq!(config_key(&with("[gas]\nmass = -1.0")), "gas.mass");
    assert_eq!(config_key(&with("[frame]\nu_bar = [1.0, 0.0, 0.0]")), "frame.u_bar");
    assert_eq!(config_key(&with("[run]\nrelaxation = 0.0")), "run.relaxation");
    assert_eq!(config_key(&with("[output]\nstride = 0")), "output.stride");
    assert_eq!(config_key(&BASE.replace("kn = 0.5", "kn = 0.5\ncolour = 1")), "scenario.colour");
    assert_eq!(config_key(&BASE.replace("m = 4", "m = \"four\"")), "discretization.m");
    assert_eq!(config_key("mode = \"sideways\"\n"), "mode");
}

fn snapshot() -> Snapshot {
    let frame = Frame::new([0.0; 3], 2.0).unwrap();
    let cells = (0..5)
        .map(|j| maxwellian_coeffs(1.0 + 0.1 * j as f64, [0.0, 0.3, 0.0], 1.5 + 0.01 * j as f64, &frame, 4).unwrap())
        .collect();
    Snapshot {
        field: CellField::from_cells(cells, 0.25).unwrap(),
        dims: 1,
        cells: [5, 1],
        dx: 0.2,
        origin: [-0.5, 0.0],
        mass: 2.0,
        kb: 0.5,
    }
}

#[test]
fn snapshot_round_trip_and_corruption() {
    let s = snapshot();
    let bytes = s.to_bytes();
    assert_eq!(&bytes[..4], b"BHSF");
    assert_eq!(Snapshot::from_bytes(&bytes).unwrap(), s);
    for at in [5, 40, bytes.len() / 2, bytes.len() - 1] {
        let mut bad = bytes.clone();
        bad[at] ^= 0x10;
        assert!(Snapshot::from_bytes(&bad).is_err(), "flip at {at}");
    }
    assert!(Snapshot::from_bytes(&bytes[..bytes.len() - 9]).is_err());
}

#[test]
fn csv_columns_round_trip() {
    let s = snapshot();
    let text = s.moments_csv().unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,rho,u1,u2,u3,T,sigma11,sigma12,q1");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    let m = s.field.moments().unwrap();
    for (k, (row, m)) in rows.iter().zip(&m).enumerate() {
        assert_eq!(row[0], s.center(k)[0]);
        assert_eq!(row[1], m.rho);
        assert_eq!(row[3], m.u[1]);
        assert_eq!(row[5], m.temperature(2.0, 0.5));
        // Maxwellian cells: no stress, no heat flux.
        assert!(row[6].abs() < 1e-12 && row[7].abs() < 1e-12 && row[8].abs() < 1e-12);
    }
    let mut flat = s.clone();
    flat.dims = 2;
    flat.cells = [5, 1];
    assert!(flat.moments_csv().unwrap().starts_with("x,y,rho,u1,u2,u3,T,sigma11,sigma12,sigma22,q1,q2\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(exit_code(&Error::config("a", "b")), 2);
    assert_eq!(exit_code(&Error::InadmissibleState { rho: 1.0, theta: -1.0 }), 3);
    assert_eq!(exit_code(&Error::IterationCap { iterations: 1, residual: 1.0 }), 3);
    assert_eq!(exit_code(&Error::Checksum { stored: 0, computed: 1 }), 4);
    assert_eq!(exit_code(&Error::io("x", std::io::Error::other("y"))), 4);
}

#[test]
fn run_writes_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let snap = dir.path().join("state.bhsf");
    let text = with(&format!(
        "[output]\npath = {:?}\nsnapshot = {:?}\n[run]\ntolerance = 1e-6",
        csv.display().to_string(),
        snap.display().to_string()
    ));
    let cfg = RunConfig::parse(&text).unwrap();
    let s = cmd_run(&cfg, None, None).unwrap();
    assert!(s.converged);
    assert_eq!(s.rows, 8);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 9);
    let again = dir.path().join("again.csv");
    assert_eq!(cmd_moments(&snap, &again).unwrap(), 8);
    assert_eq!(std::fs::read(&csv).unwrap(), std::fs::read(&again).unwrap());

    let mut transient = cfg.clone();
    transient.mode = Mode::Transient;
    transient.run.max_steps = 30;
    transient.output.stride = 20;
    let t = cmd_run(&transient, None, Some(&again)).unwrap();
    assert_eq!(t.iterations, 30);
    assert!(!t.converged && t.time > 0.0);

    let missing = dir.path().join("none.bhsc");
    assert!(matches!(cmd_run(&cfg, Some(&missing), None), Err(Error::Io { .. })));
    let cache = dir.path().join("t.bhsc");
    cmd_coeffs(&KernelSpec::Ipl { eta: 5.0, kappa: 1.0 }, 3, None, &cache).unwrap();
    assert!(matches!(cmd_run(&cfg, Some(&cache), None), Err(Error::Fingerprint { .. })));
}
