use sbp_interface::interp::InterpKind;
use sbp_interface::linalg::Matrix;
use sbp_interface::sat::{symmetric_split, CouplingMode, OuterBc};
use sbp_interface::spectrum::{
    assemble_model_operator, component_kron_interface, compute_spectrum, energy_matrix, interface_block, interface_x,
    CoarseSide, ModelConfig, SemiDiscreteSystem,
};

fn flux() -> Matrix<f64> {
    Matrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, -1.0]])
}

fn interface_energy(sys: &SemiDiscreteSystem) -> Matrix<f64> {
    let blk = interface_block(sys, &energy_matrix(sys));
    Matrix::from_fn(blk.nrows(), blk.ncols(), |i, j| blk[(i, j)])
}

fn max_eig(m: &Matrix<f64>) -> f64 {
    -m.scale(&-1.0).min_sym_eigenvalue().unwrap()
}

#[test]
fn characteristic_interface_energy_is_minus_abar_x() {
    let sys = assemble_model_operator(&ModelConfig::new(InterpKind::P4, CouplingMode::Characteristic, 13)).unwrap();
    let x = interface_x(&sys).unwrap();
    let abar = symmetric_split(&flux()).unwrap().bar;
    let expect = component_kron_interface(&sys, &abar, &x).scale(&-1.0);
    let got = interface_energy(&sys);
    assert!(got.sub(&expect).max_abs() < 1e-13, "{}", got.sub(&expect).max_abs());
}

#[test]
fn quadratic_interface_energy_is_minus_two_omega_x_squared() {
    let sys = assemble_model_operator(&ModelConfig::new(InterpKind::P6, CouplingMode::Quadratic, 19)).unwrap();
    let x = interface_x(&sys).unwrap();
    let omega = symmetric_split(&flux()).unwrap().bar;
    let expect = component_kron_interface(&sys, &omega, &x.matmul(&x)).scale(&-2.0);
    let got = interface_energy(&sys);
    assert!(got.sub(&expect).max_abs() < 1e-13, "{}", got.sub(&expect).max_abs());
    assert!(max_eig(&got) < 1e-13);
}

#[test]
fn non_dissipative_interface_energy_vanishes_for_preserving_pairs() {
    for kind in [InterpKind::P2, InterpKind::P4, InterpKind::P4To2] {
        let sys = assemble_model_operator(&ModelConfig::new(kind, CouplingMode::NonDissipative, 13)).unwrap();
        assert!(interface_energy(&sys).max_abs() < 1e-13, "{kind}");
    }
    let sys = assemble_model_operator(&ModelConfig::new(InterpKind::NonSbpP4, CouplingMode::NonDissipative, 13)).unwrap();
    assert!(interface_energy(&sys).max_abs() > 1e-3);
}

#[test]
fn characteristic_needs_the_side_condition() {
    for kind in [InterpKind::P2, InterpKind::P4] {
        let sys = assemble_model_operator(&ModelConfig::new(kind, CouplingMode::Characteristic, 13)).unwrap();
        assert!(max_eig(&interface_energy(&sys)) < 1e-13, "{kind}");
    }
    let sys = assemble_model_operator(&ModelConfig::new(InterpKind::P6, CouplingMode::Characteristic, 19)).unwrap();
    assert!(max_eig(&interface_energy(&sys)) > 1e-8);
}

#[test]
fn coarse_block_on_the_right_is_stable() {
    for mode in [CouplingMode::NonDissipative, CouplingMode::Quadratic] {
        let mut cfg = ModelConfig::new(InterpKind::P4, mode, 12);
        cfg.coarse_side = CoarseSide::Right;
        let sys = assemble_model_operator(&cfg).unwrap();
        assert_eq!(sys.left.nx, 2 * sys.right.nx);
        let r = compute_spectrum(&sys, sys.h_right()).unwrap();
        assert!(r.max_real_scaled <= 1e-10, "{mode:?}: {}", r.max_real_scaled);
        assert!(r.conjugation_defect() < 1e-8);
    }
}

#[test]
fn missing_outer_penalty_breaks_the_energy_bound() {
    let mut cfg = ModelConfig::scalar(InterpKind::P2, CouplingMode::NonDissipative, 8, 1.0, 0.5);
    let sys = assemble_model_operator(&cfg).unwrap();
    let s = energy_matrix(&sys);
    assert!(s.self_adjoint_eigenvalues(faer::Side::Lower).unwrap().last().unwrap() < &1e-12);
    cfg.outer = OuterBc::Characteristic { strength: 0.0 };
    let sys = assemble_model_operator(&cfg).unwrap();
    let s = energy_matrix(&sys);
    assert!(s.self_adjoint_eigenvalues(faer::Side::Lower).unwrap().last().unwrap() > &1e-6);
}

#[test]
fn viscous_penalties_keep_heat_equation_dissipative() {
    let c = Matrix::identity(1).scale(&0.1);
    let z = Matrix::zeros(1, 1);
    let cfg = ModelConfig::scalar(InterpKind::P4, CouplingMode::NonDissipative, 12, 0.0, 0.0).with_viscous(&c, &z, &z, &c);
    let sys = assemble_model_operator(&cfg).unwrap();
    let top = *energy_matrix(&sys).self_adjoint_eigenvalues(faer::Side::Lower).unwrap().last().unwrap();
    assert!(top < 1e-12, "{top}");
    let r = compute_spectrum(&sys, sys.h_right()).unwrap();
    assert!(r.max_real_scaled <= 1e-10);
}
