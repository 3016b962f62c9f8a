//! The shallow water boundary Riemann problem: left state (3,1), right state
//! (1,1), jump at x = 0, Dirichlet data (2,1) at x = −1.

use cnd_core::diagnostics::{conservation_defect, dlf_boundary_check, entropy_residual, error_norms, Reference};
use cnd_core::linear::LinearModel;
use cnd_core::linear_exact::{exact_sw_solution, reference_sw_fans};
use cnd_core::schemes::{semidiscrete_rhs, SchemeConfig, SchemeKind};
use cnd_core::swlin::{SwLinParams, SwViscosity};
use cnd_core::timeint::{run_to_time, HyperbolicOperator, TimeLoopConfig};
use cnd_core::{init_field, make_grid, BoundaryCondition, State, StateField};

const EDDY_PLATEAU: f64 = 2.585_786_437_626_905;

fn model(v: SwViscosity) -> LinearModel<2> {
    SwLinParams::reference().model(v).unwrap()
}

fn riemann_data(m: &LinearModel<2>, n: usize) -> StateField<2> {
    let grid = make_grid(-1.0, 1.0, n).unwrap();
    init_field(m, &grid, |x| {
        if x < 0.0 {
            State::<2>::new(3.0, 1.0)
        } else {
            State::<2>::new(1.0, 1.0)
        }
    })
    .unwrap()
}

fn dirichlet() -> BoundaryCondition<2> {
    BoundaryCondition::constant(State::<2>::new(2.0, 1.0))
}

fn run(m: &LinearModel<2>, scheme: SchemeConfig, n: usize, t: f64) -> cnd_core::timeint::RunResult<2> {
    let op = HyperbolicOperator::new(m, scheme, dirichlet(), BoundaryCondition::Open);
    run_to_time(&op, &riemann_data(m, n), &TimeLoopConfig::new(t).unwrap()).unwrap()
}

fn plateau(f: &StateField<2>) -> f64 {
    let inside: Vec<f64> = f
        .grid
        .centers
        .iter()
        .zip(&f.data)
        .filter(|(x, _)| (-0.9..=-0.5).contains(*x))
        .map(|(_, u)| u[0])
        .collect();
    inside.iter().sum::<f64>() / inside.len() as f64
}

#[test]
fn initial_rhs_lives_at_the_discontinuities() {
    let m = model(SwViscosity::Eddy);
    let f = riemann_data(&m, 1000);
    let rhs = semidiscrete_rhs(
        &m,
        &SchemeKind::Cnd.into(),
        &f,
        &dirichlet(),
        &BoundaryCondition::Open,
        0.0,
    )
    .unwrap();
    for (j, v) in rhs.values.iter().enumerate() {
        assert!(v.iter().all(|c| c.is_finite()));
        let near = j == 0 || (498..=501).contains(&j);
        if !near {
            assert!(v.amax() < 1e-12, "cell {j}: {v:?}");
        }
    }
    assert!(rhs.values[0].amax() > 0.0 && rhs.values[499].amax() > 0.0);
}

#[test]
fn matching_constant_data_is_steady() {
    let m = model(SwViscosity::Eddy);
    let grid = make_grid(-1.0, 1.0, 100).unwrap();
    let f = init_field(&m, &grid, |_| State::<2>::new(2.0, 1.0)).unwrap();
    let op = HyperbolicOperator::new(&m, SchemeKind::Cnd.into(), dirichlet(), BoundaryCondition::Open);
    let r = run_to_time(&op, &f, &TimeLoopConfig::new(0.25).unwrap()).unwrap();
    assert!(r
        .field
        .data
        .iter()
        .all(|u| (u - State::<2>::new(2.0, 1.0)).amax() < 1e-14));
}

#[test]
fn cnd_and_roe_select_different_traces() {
    let m = model(SwViscosity::Eddy);
    let cnd = run(&m, SchemeKind::Cnd.into(), 1000, 0.25);
    let roe = run(&m, SchemeKind::Roe.into(), 1000, 0.25);
    assert!((plateau(&cnd.field) - EDDY_PLATEAU).abs() < 0.01 * EDDY_PLATEAU);
    assert!((plateau(&roe.field) - 2.5).abs() < 0.01 * 2.5);

    let laplacian = run(&model(SwViscosity::Laplacian), SchemeKind::Cnd.into(), 1000, 0.25);
    assert!((plateau(&laplacian.field) - 2.5).abs() < 0.01 * 2.5);

    let exact = |x: f64| {
        let (h, u) = exact_sw_solution(SwViscosity::Eddy, x, 0.25).unwrap();
        State::<2>::new(h, u)
    };
    let window = Some((-1.0, -0.5));
    let e_cnd = error_norms(&cnd.field, &Reference::Function(&exact), 0, window).unwrap();
    let e_roe = error_norms(&roe.field, &Reference::Function(&exact), 0, window).unwrap();
    assert!(e_cnd.l1 <= 0.5 * e_roe.l1, "{} vs {}", e_cnd.l1, e_roe.l1);
}

#[test]
fn runs_conserve_to_roundoff() {
    for v in [SwViscosity::Eddy, SwViscosity::Laplacian] {
        let m = model(v);
        for kind in [SchemeKind::Roe, SchemeKind::Cnd, SchemeKind::Cnd2] {
            let r = run(&m, kind.into(), 400, 0.25);
            assert!(conservation_defect(&r.trace) <= 1e-10, "{kind:?}");
            assert!(r.trace.max_step_defect <= 1e-11, "{kind:?}");
        }
    }
}

#[test]
fn cnd_satisfies_the_discrete_entropy_inequality() {
    for v in [SwViscosity::Eddy, SwViscosity::Laplacian] {
        let m = model(v);
        let r = run(&m, SchemeKind::Cnd.into(), 200, 0.1);
        let report = entropy_residual(
            &m,
            &SchemeKind::Cnd.into(),
            &r.field,
            &dirichlet(),
            &BoundaryCondition::Open,
            0.1,
        )
        .unwrap();
        assert!(report.max_positive <= 1e-8, "{v:?}: {}", report.max_positive);
        assert!(report.interface_production.iter().all(|p| *p >= -1e-10));
    }
}

#[test]
fn computed_traces_are_dubois_lefloch_admissible() {
    let p = SwLinParams::reference();
    for v in [SwViscosity::Eddy, SwViscosity::Laplacian] {
        let fans = reference_sw_fans(v).unwrap();
        let value = dlf_boundary_check(&p.model(v).unwrap(), &fans.boundary.trace, &State::<2>::new(2.0, 1.0)).unwrap();
        assert!(value <= 1e-12, "{v:?}: {value}");
    }
}

#[test]
fn final_state_converges_under_time_step_refinement() {
    let m = model(SwViscosity::Eddy);
    let runs: Vec<StateField<2>> = [0.45, 0.225, 0.1125]
        .iter()
        .map(|&cfl| run(&m, SchemeConfig::new(SchemeKind::Cnd, cfl).unwrap(), 1000, 0.25).field)
        .collect();
    let d1 = error_norms(&runs[0], &Reference::Field(&runs[1]), 0, None).unwrap().l1;
    let d2 = error_norms(&runs[1], &Reference::Field(&runs[2]), 0, None).unwrap().l1;
    assert!(d1 < 1e-3, "{d1}");
    assert!(d1 / d2 >= 3.0, "{d1} / {d2}");
}

#[test]
fn time_dependent_boundary_data_are_sampled_at_stage_times() {
    let m = model(SwViscosity::Eddy);
    let grid = make_grid(-1.0, 1.0, 50).unwrap();
    let f = init_field(&m, &grid, |_| State::<2>::new(2.0, 1.0)).unwrap();
    let constant = HyperbolicOperator::new(&m, SchemeKind::Cnd.into(), dirichlet(), BoundaryCondition::Open);
    let switched = HyperbolicOperator::new(
        &m,
        SchemeKind::Cnd.into(),
        BoundaryCondition::time_dependent(|t| {
            if t > 0.0 {
                State::<2>::new(3.0, 1.0)
            } else {
                State::<2>::new(2.0, 1.0)
            }
        }),
        BoundaryCondition::Open,
    );
    let a = cnd_core::timeint::ssprk2_step(&constant, &f, 1e-3).unwrap();
    let b = cnd_core::timeint::ssprk2_step(&switched, &f, 1e-3).unwrap();
    assert_eq!(a.field.data[0], State::<2>::new(2.0, 1.0));
    assert!(b.field.data[0][0] > 2.0);
    assert_eq!(a.field.data[1..], b.field.data[1..]);
}
