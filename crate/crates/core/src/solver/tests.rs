use super::*;
use crate::basis::{IndexLayout, MultiIndex};
use crate::coeffs::assemble_tensor;
use crate::collision::CollisionOperator;
use crate::frames::maxwellian_coeffs;
use crate::kernels::{GasSpec, KernelSpec};
use nalgebra::DMatrix;
use proptest::prelude::*;
use std::sync::OnceLock;

fn unit_gas() -> GasSpec {
    GasSpec {
        mass: 1.0,
        kernel: KernelSpec::HardSphere { d: 1.0 },
        d_ref: None,
        t_ref: Some(1.0),
        mu_ref: Some(0.05),
        kb: 1.0,
    }
}

fn operator() -> CollisionOperator {
    static OP: OnceLock<CollisionOperator> = OnceLock::new();
    OP.get_or_init(|| {
        let gas = unit_gas();
        let t = assemble_tensor(&gas.kernel, 3, None).unwrap();
        CollisionOperator::new(t, gas).unwrap()
    })
    .clone()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Maxwellian plus a smooth, cell-dependent perturbation.
fn wavy_field(n: usize, m: usize, frame: Frame, amp: f64) -> Vec<CoeffVector> {
    let layout = IndexLayout::new(m);
    (0..n)
        .map(|j| {
            let x = (j as f64 + 0.5) / n as f64;
            let phase = 2.0 * std::f64::consts::PI * x;
            let mut c = maxwellian_coeffs(
                1.0 + 0.2 * phase.sin(),
                [0.1 * phase.cos(), 0.05, 0.0],
                1.0 + 0.1 * (2.0 * phase).sin(),
                &frame,
                m,
            )
            .unwrap();
            for (i, (a, v)) in layout.iter().zip(c.values_mut()).enumerate().skip(10) {
                *v += amp * ((i as f64 * 0.7 + phase).sin()) / a.factorial().sqrt();
            }
            c
        })
        .collect()
}

fn periodic_line(n: usize) -> Grid {
    Grid::new_1d(n, 1.0 / n as f64, 0.0, Face::Periodic, Face::Periodic).unwrap()
}

fn walled_line(n: usize, theta_w: [f64; 2], v: f64) -> Grid {
    let lo = WallSpec::new(0, false, theta_w[0], [0.0, -v, 0.0], 1.0).unwrap();
    let hi = WallSpec::new(0, true, theta_w[1], [0.0, v, 0.0], 0.8).unwrap();
    Grid::new_1d(n, 1.0 / n as f64, -0.5, Face::Wall(lo), Face::Wall(hi)).unwrap()
}

#[test]
fn grid_neighbours_and_validation() {
    let g = periodic_line(4);
    assert!(matches!(g.neighbor(0, 0, false), Neighbor::Cell(3)));
    assert!(matches!(g.neighbor(3, 0, true), Neighbor::Cell(0)));
    assert!(matches!(g.neighbor(1, 0, true), Neighbor::Cell(2)));
    let w = walled_line(4, [1.0, 1.0], 0.0);
    assert!(matches!(w.neighbor(0, 0, false), Neighbor::Wall(_)));
    assert!((w.center(0)[0] + 0.375).abs() < 1e-15);

    let wall = |axis, positive| Face::Wall(WallSpec::new(axis, positive, 1.0, [0.0; 3], 1.0).unwrap());
    let g2 = Grid::new_2d([3, 4], 0.5, [0.0; 2], [[wall(0, false), wall(0, true)], [Face::Periodic, Face::Periodic]]).unwrap();
    assert_eq!(g2.len(), 12);
    assert_eq!(g2.index(2, 1), 5);
    assert!(matches!(g2.neighbor(5, 1, true), Neighbor::Cell(8)));
    assert!(matches!(g2.neighbor(10, 1, true), Neighbor::Cell(1)));
    assert!(matches!(g2.neighbor(5, 0, true), Neighbor::Wall(_)));

    assert!(Grid::new_1d(1, 1.0, 0.0, Face::Periodic, Face::Periodic).is_err());
    assert!(Grid::new_1d(4, 0.0, 0.0, Face::Periodic, Face::Periodic).is_err());
    assert!(Grid::new_1d(4, 1.0, 0.0, Face::Periodic, wall(0, true)).is_err());
    assert!(Grid::new_1d(4, 1.0, 0.0, wall(0, true), wall(0, true)).is_err());
    assert!(Grid::new_1d(4, 1.0, 0.0, wall(1, false), wall(0, true)).is_err());
}

#[test]
fn convection_flux_rows() {
    let frame = Frame::new([0.3, -0.2, 0.1], 1.7).unwrap();
    let c0 = CoeffVector::from_values(frame, 0, vec![2.5]).unwrap();
    for d in 0..3 {
        assert_eq!(convection_flux(&c0, d).unwrap().values(), &[frame.u_bar[d] * 2.5]);
    }
    let c = wavy_field(1, 4, frame, 0.05).remove(0);
    for d in 0..3 {
        let f = convection_flux(&c, d).unwrap();
        let mass = c.get(MultiIndex::unit(d)) + frame.u_bar[d] * c.rho();
        assert!((f.values()[0] - mass).abs() < 1e-15);
        // Dense loop over the recursion as an independent check.
        for a in IndexLayout::new(4).iter() {
            let mut expect = frame.u_bar[d] * c.get(a) + (a.get(d) + 1) as f64 * c.get(a.plus_axis(d, 1));
            if let Some(b) = a.minus_axis(d, 1) {
                expect += frame.theta_bar * c.get(b);
            }
            assert!((f.get(a) - expect).abs() < 1e-14 * (1.0 + expect.abs()));
        }
    }
}

#[test]
fn block_spectrum_matches_dense_eigensolve() {
    let frame = Frame::new([0.4, 0.0, -0.3], 0.8).unwrap();
    let m = 7;
    let t = Transport::new(frame, m).unwrap();
    let layout = IndexLayout::new(m);
    for axis in 0..3 {
        for tdeg in 0..=m {
            // One transverse multi-index of degree `tdeg`.
            let mut tr = [0usize; 3];
            tr[(axis + 1) % 3] = tdeg;
            let block: Vec<usize> = (0..=m - tdeg)
                .map(|k| {
                    let mut a = tr;
                    a[axis] = k;
                    MultiIndex(a).rank()
                })
                .collect();
            let n = block.len();
            let mut dense = DMatrix::zeros(n, n);
            let mut e = vec![0.0; layout.len()];
            let mut out = vec![0.0; layout.len()];
            for (col, &r) in block.iter().enumerate() {
                e.iter_mut().for_each(|x| *x = 0.0);
                e[r] = 1.0;
                t.apply(axis, &e, &mut out);
                for (row, &rr) in block.iter().enumerate() {
                    dense[(row, col)] = out[rr];
                }
            }
            let mut numeric: Vec<f64> = dense.complex_eigenvalues().iter().map(|z| z.re).collect();
            numeric.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let exact = block_spectrum(m, tdeg, &frame, axis).unwrap();
            assert_eq!(numeric.len(), exact.len());
            for (a, b) in numeric.iter().zip(&exact) {
                assert!((a - b).abs() < 1e-10, "axis {axis} block {tdeg}: {a} vs {b}");
            }
            let mid = frame.u_bar[axis];
            for (a, b) in exact.iter().zip(exact.iter().rev()) {
                assert!((a - mid + b - mid).abs() < 1e-13);
            }
        }
    }
    let two = block_spectrum(3, 2, &frame, 0).unwrap();
    let s = frame.theta_bar.sqrt();
    assert!((two[0] - (0.4 - s)).abs() < 1e-15 && (two[1] - (0.4 + s)).abs() < 1e-15);
}

#[test]
fn hll_branches() {
    let still = Frame::new([0.0; 3], 1.3).unwrap();
    let l = wavy_field(4, 3, still, 0.05);
    let (a, b) = (&l[0], &l[2]);
    for d in 0..3 {
        let (h, c) = (hll_flux(a, a, d).unwrap(), convection_flux(a, d).unwrap());
        for (x, y) in h.values().iter().zip(c.values()) {
            assert!((x - y).abs() < 1e-15);
        }
    }
    // M = 1: C₂ = 1, so the density row is ½(l_e + r_e) − (√θ̄/2)(r₀ − l₀).
    let lo = CoeffVector::from_values(still, 1, vec![1.0, 0.2, -0.1, 0.3]).unwrap();
    let hi = CoeffVector::from_values(still, 1, vec![0.7, -0.4, 0.5, 0.0]).unwrap();
    let f = hll_flux(&lo, &hi, 0).unwrap();
    let expect = 0.5 * (0.2 - 0.4) - 0.5 * still.theta_bar.sqrt() * (0.7 - 1.0);
    assert!((f.values()[0] - expect).abs() < 1e-15);

    let t = Transport::new(still, 3).unwrap();
    let fast = 3.0 * t.root() * still.theta_bar.sqrt();
    let right_moving = Frame::new([fast, 0.0, 0.0], 1.3).unwrap();
    let (ar, br) = (a.clone().with_frame(right_moving), b.clone().with_frame(right_moving));
    assert_eq!(hll_flux(&ar, &br, 0).unwrap(), convection_flux(&ar, 0).unwrap());
    let left_moving = Frame::new([-fast, 0.0, 0.0], 1.3).unwrap();
    let (al, bl) = (a.clone().with_frame(left_moving), b.clone().with_frame(left_moving));
    assert_eq!(hll_flux(&al, &bl, 0).unwrap(), convection_flux(&bl, 0).unwrap());
}

#[test]
fn reconstruction() {
    let constant = vec![vec![1.5, -2.0]; 5];
    let fs = reconstruct(&constant, false);
    assert_eq!(fs.left.len(), 6);
    assert!(fs.left.iter().chain(&fs.right).all(|v| v == &constant[0]));

    let linear: Vec<Vec<f64>> = (0..5).map(|j| vec![2.0 * j as f64 + 1.0, -(j as f64)]).collect();
    for (periodic, faces) in [(false, 1..5), (true, 2..4)] {
        let fs = reconstruct(&linear, periodic);
        for i in faces {
            assert!((fs.left[i][0] - 2.0 * i as f64).abs() < 1e-14);
            assert!((fs.right[i][0] - 2.0 * i as f64).abs() < 1e-14);
            assert!((fs.left[i][1] + i as f64 - 0.5).abs() < 1e-14);
        }
    }
    // End cells use one-sided slopes, which are exact for linear data too.
    let fs = reconstruct(&linear, false);
    assert!((fs.right[0][0] - 0.0).abs() < 1e-14);
    assert!((fs.left[5][0] - 10.0).abs() < 1e-14);

    // The face values of cell 2 only see cells 1..=3.
    let mut far = linear.clone();
    far[0][0] = 100.0;
    far[4][0] = -50.0;
    let (a, b) = (reconstruct(&linear, true), reconstruct(&far, true));
    assert_eq!(a.left[3], b.left[3]);
    assert_eq!(a.right[2], b.right[2]);
}

#[test]
fn cfl_step() {
    let f = CellField::uniform(&CoeffVector::zeros(Frame::standard(), 1), 4);
    let dt = max_dt(&f, 1.0, 1, 0.9).unwrap();
    assert!((dt - 0.9).abs() < 1e-15);
    assert!(max_dt(&f, 1.0, 1, 1.0).is_err());
    let hot = CellField::uniform(&CoeffVector::zeros(Frame::new([0.0; 3], 2.0).unwrap(), 1), 4);
    let dt2 = max_dt(&hot, 1.0, 1, 0.9).unwrap();
    assert!((dt / dt2 - 2f64.sqrt()).abs() < 1e-14);
    assert!((max_dt(&f, 1.0, 2, 0.9).unwrap() - 0.45).abs() < 1e-15);
}

#[test]
fn periodic_mass_is_conserved() {
    let frame = Frame::new([0.1, 0.0, 0.0], 1.0).unwrap();
    let field = CellField::from_cells(wavy_field(16, 5, frame, 0.02), 0.0).unwrap();
    for collision in [None, Some(operator())] {
        let grid = periodic_line(16);
        let solver = Solver::new(grid, &field, collision).unwrap();
        let mut f = field.clone();
        let m0 = f.total_mass();
        let report = run_transient(&solver, &mut f, &TransientOptions { max_steps: 40, ..Default::default() }).unwrap();
        assert_eq!(report.steps, 40);
        assert!(((f.total_mass() - m0) / m0).abs() < 1e-14);
        assert!((f.time - 40.0 * solver.dt()).abs() < 1e-12 * f.time);
    }
}

#[test]
fn uniform_maxwellian_is_a_fixed_point() {
    let frame = Frame::new([0.0; 3], 1.0).unwrap();
    let eq = maxwellian_coeffs(0.8, [0.0; 3], 1.0, &frame, 5).unwrap();
    let field = CellField::uniform(&eq, 8);
    for grid in [periodic_line(8), walled_line(8, [1.0, 1.0], 0.0)] {
        let solver = Solver::new(grid, &field, Some(operator())).unwrap();
        let r = solver.residual(&field).unwrap();
        let worst = r.iter().map(|v| max_abs(v)).fold(0.0, f64::max);
        assert!(worst < 1e-12, "{worst}");
    }
}

#[test]
fn homogeneous_relaxation() {
    let frame = Frame::new([0.0; 3], 1.0).unwrap();
    let cell = wavy_field(4, 5, frame, 0.05).remove(1);
    let field = CellField::uniform(&cell, 2);
    let solver = Solver::new(periodic_line(2), &field, Some(operator())).unwrap();
    let m = moments(&cell).unwrap();
    let dt = 0.2 / solver.collision().unwrap().damping_rate(&m).unwrap();
    let mut f = field.clone();
    run_transient(&solver, &mut f, &TransientOptions { dt: Some(dt), max_steps: 10_000, ..Default::default() }).unwrap();
    let end = moments(&f.cells()[0]).unwrap();
    assert!(((end.rho - m.rho) / m.rho).abs() < 1e-10);
    assert!(((end.energy - m.energy) / m.energy).abs() < 1e-10);
    for d in 0..3 {
        assert!((end.momentum[d] - m.momentum[d]).abs() < 1e-10 * m.rho * frame.theta_bar.sqrt());
    }
    let target = maxwellian_coeffs(end.rho, end.u, end.theta, &frame, 5).unwrap();
    let gap: Vec<f64> = f.cells()[0].values().iter().zip(target.values()).map(|(a, b)| a - b).collect();
    assert!(max_abs(&gap) < 1e-8, "{}", max_abs(&gap));
}

#[test]
fn walls_carry_no_mass() {
    let frame = Frame::new([0.0; 3], 1.2).unwrap();
    let field = CellField::from_cells(wavy_field(8, 5, frame, 0.03), 0.0).unwrap();
    let solver = Solver::new(walled_line(8, [0.9, 1.4], 0.3), &field, Some(operator())).unwrap();
    let r = solver.residual(&field).unwrap();
    let total: f64 = r.iter().map(|v| v[0]).sum();
    let scale = r.iter().map(|v| v[0].abs()).fold(0.0, f64::max);
    assert!(total.abs() < 1e-12 * scale, "{total} vs {scale}");
    let walls = solver.wall_states(&field).unwrap();
    assert_eq!(walls.len(), 2);
    for (w, b) in walls {
        assert!(b.get(MultiIndex::unit(w.axis)).abs() < 1e-15 * b.rho());
    }

    let mut f = field.clone();
    let m0 = f.total_mass();
    run_transient(&solver, &mut f, &TransientOptions { max_steps: 200, ..Default::default() }).unwrap();
    assert!(((f.total_mass() - m0) / m0).abs() < 1e-12);
}

#[test]
fn cavity_walls_carry_no_mass() {
    let frame = Frame::new([0.0; 3], 1.0).unwrap();
    let wall = |axis, positive, v| Face::Wall(WallSpec::new(axis, positive, 1.0, v, 1.0).unwrap());
    let faces = [
        [wall(0, false, [0.0; 3]), wall(0, true, [0.0; 3])],
        [wall(1, false, [0.0; 3]), wall(1, true, [0.4, 0.0, 0.0])],
    ];
    let grid = Grid::new_2d([4, 4], 0.25, [0.0; 2], faces).unwrap();
    let eq = maxwellian_coeffs(1.0, [0.0; 3], 1.0, &frame, 4).unwrap();
    let mut f = CellField::uniform(&eq, 16);
    let solver = Solver::new(grid, &f, Some(operator())).unwrap();
    run_transient(&solver, &mut f, &TransientOptions { max_steps: 100, ..Default::default() }).unwrap();
    assert!(((f.total_mass() - 16.0) / 16.0).abs() < 1e-12);
    let m = f.moments().unwrap();
    // The lid drags the top row to the right.
    assert!(m[13].u[0] > 0.0 && m[13].u[0] > m[1].u[0]);
    assert_eq!(solver.wall_states(&f).unwrap().len(), 16);
}

#[test]
fn inadmissible_state_aborts() {
    let frame = Frame::standard();
    let mut cells = wavy_field(4, 3, frame, 0.0);
    cells[2].values_mut()[0] = -1.0;
    let field = CellField::from_cells(cells, 0.0).unwrap();
    let solver = Solver::new(periodic_line(4), &field, None).unwrap();
    assert!(matches!(
        step(&solver, &field, solver.dt()),
        Err(crate::Error::InadmissibleState { .. })
    ));
}

fn couette_like(n: usize, m: usize) -> (Solver, CellField) {
    let frame = Frame::new([0.0; 3], 1.0).unwrap();
    let eq = maxwellian_coeffs(1.0, [0.0; 3], 1.0, &frame, m).unwrap();
    let field = CellField::uniform(&eq, n);
    let lo = WallSpec::new(0, false, 1.0, [0.0, -0.3, 0.0], 1.0).unwrap();
    let hi = WallSpec::new(0, true, 1.0, [0.0, 0.3, 0.0], 1.0).unwrap();
    let grid = Grid::new_1d(n, 1.0 / n as f64, -0.5, Face::Wall(lo), Face::Wall(hi)).unwrap();
    (Solver::new(grid, &field, Some(operator())).unwrap(), field)
}

#[test]
fn sgs_agrees_with_explicit_stepping() {
    let (solver, field) = couette_like(12, 4);
    let mut implicit = field.clone();
    let sgs = run_steady_sgs(&solver, &mut implicit, &SgsOptions { tolerance: 1e-10, ..Default::default() }).unwrap();
    let mut explicit = field.clone();
    let ex = run_transient(
        &solver,
        &mut explicit,
        &TransientOptions { steady_tol: Some(1e-10), check_every: 10, ..Default::default() },
    )
    .unwrap();
    assert!(ex.converged);
    assert!(sgs.iterations < ex.steps, "{} vs {}", sgs.iterations, ex.steps);
    let (a, b) = (implicit.moments().unwrap(), explicit.moments().unwrap());
    for (x, y) in a.iter().zip(&b) {
        assert!(((x.rho - y.rho) / y.rho).abs() < 1e-6);
        assert!(((x.theta - y.theta) / y.theta).abs() < 1e-6);
        assert!((x.u[1] - y.u[1]).abs() < 1e-6 * 0.3);
        assert!(((x.sigma[0][1] - y.sigma[0][1]) / y.sigma[0][1]).abs() < 1e-5);
    }
    // Shear drives u₂ antisymmetrically.
    assert!(a[0].u[1] < 0.0 && a[11].u[1] > 0.0);
    assert!((a[0].u[1] + a[11].u[1]).abs() < 1e-8);

    let again = run_steady_sgs(&solver, &mut implicit, &SgsOptions { tolerance: 1e-8, ..Default::default() }).unwrap();
    assert_eq!(again.iterations, 1);
}

#[test]
fn sgs_reports_iteration_cap() {
    let (solver, mut field) = couette_like(8, 3);
    let opts = SgsOptions { tolerance: 1e-14, max_iterations: 3, relaxation: 1.0 };
    assert!(matches!(
        run_steady_sgs(&solver, &mut field, &opts),
        Err(crate::Error::IterationCap { iterations: 3, .. })
    ));
    let bad = SgsOptions { relaxation: 1.5, ..opts };
    assert!(run_steady_sgs(&solver, &mut field, &bad).is_err());
}

#[test]
fn scenarios() {
    let c = scenario(&ScenarioParams::new(ScenarioKind::Couette, 0.1, 16, 5)).unwrap();
    assert!((c.grid.dx() * 16.0 - 0.092456).abs() < 1e-15);
    assert!((c.grid.origin()[0] + 0.046228).abs() < 1e-15);
    let [[Face::Wall(lo), Face::Wall(hi)], _] = *c.grid.faces() else { panic!() };
    assert_eq!((lo.velocity[1], hi.velocity[1]), (-119.25, 119.25));
    assert!((c.gas.temperature(lo.theta) - 273.15).abs() < 1e-9);
    assert!((c.field.cells()[0].rho() - 9.282e-6).abs() < 1e-20);
    assert_eq!(c.field.frame().u_bar, [0.0; 3]);
    assert!((c.gas.temperature(c.field.frame().theta_bar) - 273.15).abs() < 1e-9);

    let f = scenario(&ScenarioParams::new(ScenarioKind::Fourier, 0.5, 16, 5)).unwrap();
    let [[Face::Wall(lo), Face::Wall(hi)], _] = *f.grid.faces() else { panic!() };
    assert!((f.gas.temperature(lo.theta) - 273.15).abs() < 1e-9);
    assert!((f.gas.temperature(hi.theta) - 1092.6).abs() < 1e-9);
    assert!((f.grid.dx() * 16.0 - 0.018491).abs() < 1e-15);

    let k = scenario(&ScenarioParams::new(ScenarioKind::Cavity, 0.1, 4, 4)).unwrap();
    assert_eq!(k.grid.len(), 16);
    assert!((k.grid.dx() * 4.0 - 1.25e-6).abs() < 1e-20);
    assert!((k.field.cells()[5].rho() - 0.891).abs() < 1e-12);
    let Face::Wall(lid) = k.grid.faces()[1][1] else { panic!() };
    assert_eq!((lid.axis, lid.positive, lid.velocity), (1, true, [50.0, 0.0, 0.0]));
    assert_eq!(k.gas.mu_ref, Some(2.117e-5));

    assert!((knudsen_length(2.5).unwrap() - 0.003698).abs() < 1e-18);
    assert!((knudsen_length(0.2).unwrap() - 0.046228).abs() < 1e-15);
    assert!(knudsen_length(0.0).is_err());
    assert!(ScenarioKind::parse("poiseuille").is_err());
    let mut bad = ScenarioParams::new(ScenarioKind::Couette, 0.1, 1, 5);
    assert!(scenario(&bad).is_err());
    bad.cells = 8;
    bad.accommodation = 1.2;
    assert!(scenario(&bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn flux_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, axis in 0usize..3, shift in -0.5f64..0.5) {
        let frame = Frame::new([shift, -shift, 0.2], 0.9).unwrap();
        let cells = wavy_field(5, 4, frame, 0.1);
        let (f, g) = (&cells[1], &cells[3]);
        let mut combo = f.clone();
        for (x, y) in combo.values_mut().iter_mut().zip(g.values()) {
            *x = a * *x + b * y;
        }
        let lhs = convection_flux(&combo, axis).unwrap();
        let (ff, fg) = (convection_flux(f, axis).unwrap(), convection_flux(g, axis).unwrap());
        for ((l, x), y) in lhs.values().iter().zip(ff.values()).zip(fg.values()) {
            prop_assert!((l - (a * x + b * y)).abs() < 1e-12 * (1.0 + l.abs()));
        }
    }

    #[test]
    fn periodic_free_transport_conserves_mass(n in 3usize..12, amp in 0.0f64..0.05, u in -0.3f64..0.3) {
        let frame = Frame::new([u, 0.0, 0.0], 1.0).unwrap();
        let field = CellField::from_cells(wavy_field(n, 3, frame, amp), 0.0).unwrap();
        let solver = Solver::new(periodic_line(n), &field, None).unwrap();
        let r = solver.residual(&field).unwrap();
        let total: f64 = r.iter().map(|v| v[0]).sum();
        let scale = r.iter().map(|v| v[0].abs()).fold(1e-300, f64::max);
        prop_assert!(total.abs() <= 1e-12 * scale.max(1.0));
    }
}
