mod common;

use approx::assert_abs_diff_eq;
use common::active_set_oracle;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tumour_core::fem::{FemSpace, SparseOperator};
use tumour_core::mesh::{Mesh, Rect};
use tumour_core::params::{ModelParams, SweepOrder};
use tumour_core::phase::{build_phase_system, phase_stability, projected_sor, vi_residual, PhaseSystem, SorOptions};
use tumour_core::pressure::{build_pressure_system, pcg_solve};

fn toy() -> PhaseSystem {
    PhaseSystem::new(SparseOperator::from_dense(&[vec![2.0, -1.0], vec![-1.0, 2.0]]), vec![5.0, 0.0], -1.0, 1.0)
}

fn opts(omega: f64) -> SorOptions {
    SorOptions { omega, tol: 1e-12, max_iter: 100_000, order: SweepOrder::Ascending }
}

#[test]
fn toy_system() {
    let sys = toy();
    let out = projected_sor(&sys, &[0.0, 0.0], &opts(1.0)).unwrap();
    assert_abs_diff_eq!(out.solution[0], 1.0, epsilon = 1e-8);
    assert_abs_diff_eq!(out.solution[1], 0.5, epsilon = 1e-8);
    assert_eq!(active_set_oracle(&sys), vec![1.0, 0.5]);
    assert!(vi_residual(&sys, &[1.0, 0.5]) <= 1e-12);
}

#[test]
fn fixed_point_converges_in_one_sweep() {
    let sys = toy();
    let out = projected_sor(&sys, &[1.0, 0.5], &SorOptions { tol: 1e-8, ..opts(1.5) }).unwrap();
    assert_eq!(out.sweeps, 1);
}

#[test]
fn clamping_is_not_solving() {
    let sys = toy();
    // unconstrained solution (10/3, 5/3) clamped to (1, 1)
    let clamped = [1.0, 1.0];
    assert_abs_diff_eq!(sys.residual(&clamped)[1], 1.0, epsilon = 1e-15);
    assert!(vi_residual(&sys, &clamped) > 0.0);
}

#[test]
fn interior_point_residual_vanishes() {
    let sys = PhaseSystem::new(SparseOperator::from_dense(&[vec![2.0, -1.0], vec![-1.0, 2.0]]), vec![0.5, 0.0], -1.0, 1.0);
    let x = [1.0 / 3.0, 1.0 / 6.0];
    assert!(vi_residual(&sys, &x) < 1e-15);
}

#[test]
fn rejects_nonpositive_diagonal() {
    let sys = PhaseSystem::new(SparseOperator::from_dense(&[vec![0.0]]), vec![1.0], -1.0, 1.0);
    assert!(projected_sor(&sys, &[0.0], &opts(1.0)).is_err());
}

#[test]
fn reports_slow_convergence() {
    let sys = toy();
    let out = projected_sor(&sys, &[0.0, 0.0], &SorOptions { max_iter: 1, ..opts(1.0) });
    assert!(out.is_err());
}

fn small_mesh(extra: &[usize]) -> Mesh {
    let mut mesh = Mesh::generate_square_mesh(Rect::quadrant(1.0).unwrap(), 2).unwrap();
    if !extra.is_empty() {
        mesh.bisect(extra).unwrap();
    }
    mesh
}

fn model(dt: f64) -> ModelParams {
    ModelParams { q: 1.0, alpha: 1.0, beta: 0.1, epsilon: 0.1, dt }
}

fn coupled_system(mesh: &Mesh, rng: &mut ChaCha8Rng, m: &ModelParams) -> (FemSpace, Vec<f64>, Vec<f64>, PhaseSystem) {
    let space = FemSpace::new(mesh);
    let phi: Vec<f64> = (0..mesh.num_nodes()).map(|_| rng.gen_range(-1.0..=1.0f64).clamp(-1.0, 1.0)).collect();
    let u: Vec<f64> = (0..mesh.num_nodes()).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let sys = build_phase_system(&space, &space.stiffness(), &phi, &u, m).unwrap();
    (space, phi, u, sys)
}

#[test]
fn pure_phases_are_stationary() {
    let mesh = small_mesh(&[]);
    let space = FemSpace::new(&mesh);
    let m = model(0.05);
    let u = vec![0.0; mesh.num_nodes()];
    for s in [1.0, -1.0] {
        let phi = vec![s; mesh.num_nodes()];
        let sys = build_phase_system(&space, &space.stiffness(), &phi, &u, &m).unwrap();
        let out = projected_sor(&sys, &phi, &opts(1.5)).unwrap();
        assert!(out.solution.iter().all(|&v| v == s));
    }
}

#[test]
fn time_step_guard() {
    let mesh = small_mesh(&[]);
    let space = FemSpace::new(&mesh);
    let m = model(0.2);
    let z = vec![0.0; mesh.num_nodes()];
    assert!(build_phase_system(&space, &space.stiffness(), &z, &z, &m).is_err());
}

#[test]
fn relaxation_factor_changes_only_the_path() {
    let mesh = small_mesh(&[]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (_, phi, _, sys) = coupled_system(&mesh, &mut rng, &model(0.05));
    let a = projected_sor(&sys, &phi, &opts(1.0)).unwrap();
    let b = projected_sor(&sys, &phi, &opts(1.5)).unwrap();
    assert_ne!(a.sweeps, b.sweeps);
    for (x, y) in a.solution.iter().zip(&b.solution) {
        assert_abs_diff_eq!(x, y, epsilon = 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sor_matches_active_set_oracle(seed in any::<u64>(), extra in prop::collection::vec(0usize..8, 0..3), dt in 0.005f64..0.09, colored in any::<bool>()) {
        let mesh = small_mesh(&extra);
        prop_assume!(mesh.num_nodes() <= 12);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, phi, _, sys) = coupled_system(&mesh, &mut rng, &model(dt));
        let order = if colored { SweepOrder::Colored } else { SweepOrder::Ascending };
        let out = projected_sor(&sys, &phi, &SorOptions { tol: 1e-12, max_iter: 100_000, omega: 1.5, order }).unwrap();
        prop_assert!(out.solution.iter().all(|v| (-1.0..=1.0).contains(v)));
        prop_assert!(vi_residual(&sys, &out.solution) <= 1e-8);
        let exact = active_set_oracle(&sys);
        for (x, y) in out.solution.iter().zip(&exact) {
            prop_assert!((x - y).abs() <= 1e-7, "{} vs {}", x, y);
        }
    }

    #[test]
    fn stability_estimate_holds(seed in any::<u64>(), n in 2usize..5, dt in 0.002f64..0.09) {
        let mesh = Mesh::generate_square_mesh(Rect::quadrant(1.0).unwrap(), n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = model(dt);
        let space = FemSpace::new(&mesh);
        let k = space.stiffness();
        let phi: Vec<f64> = mesh.nodes().iter().map(|p| ((0.6 - p[0].hypot(p[1])) / 0.2).clamp(-1.0, 1.0)).collect();
        let u_n: Vec<f64> = (0..mesh.num_nodes()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = build_pressure_system(&space, &phi, &u_n, &m);
        let u = pcg_solve(&p.matrix, &p.rhs, &u_n, 1e-12, None).unwrap().solution;
        let sys = build_phase_system(&space, &k, &phi, &u, &m).unwrap();
        let next = projected_sor(&sys, &phi, &SorOptions { tol: 1e-13, ..opts(1.5) }).unwrap().solution;
        let s = phase_stability(&space, &k, &phi, &next, &u, &m);
        prop_assert!(s.slack() >= -1e-9, "{:?}", s);
    }
}
