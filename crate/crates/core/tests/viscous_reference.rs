use cnd_core::diagnostics::{conservation_defect, error_norms, Reference};
use cnd_core::euler::{EulerModel, Primitive};
use cnd_core::linear::LinearModel;
use cnd_core::linear_exact::exact_sw_solution;
use cnd_core::swlin::{SwLinParams, SwViscosity};
use cnd_core::viscous::{run_viscous, DiffusionKind, ViscousSpec};
use cnd_core::{init_field, make_grid, BoundaryCondition, State, StateField};

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

fn viscous_run(v: SwViscosity, eps: f64, n: usize) -> StateField<2> {
    let m = SwLinParams::reference().model(v).unwrap();
    let spec = ViscousSpec::new(eps, DiffusionKind::MatrixB).unwrap();
    let r = run_viscous(
        &m,
        &spec,
        &riemann_data(&m, n),
        &dirichlet(),
        &BoundaryCondition::Open,
        0.25,
    )
    .unwrap();
    assert!(conservation_defect(&r.trace) <= 1e-10);
    r.field
}

/// Distance from the wall at which `h` first lies within 5% of the jump
/// between the wall value and the plateau.
fn layer_width(f: &StateField<2>) -> f64 {
    let plateau = f.data[f.grid.nearest_cell(-0.7)][0];
    let tol = 0.05 * (plateau - 2.0).abs();
    let j = f.data.iter().position(|u| (u[0] - plateau).abs() <= tol).unwrap();
    f.grid.centers[j] - f.grid.x_left
}

#[test]
fn layer_width_scales_with_epsilon() {
    for v in [SwViscosity::Eddy, SwViscosity::Laplacian] {
        let wide = layer_width(&viscous_run(v, 1e-2, 4000));
        let narrow = layer_width(&viscous_run(v, 5e-3, 4000));
        let ratio = wide / narrow;
        assert!((ratio - 2.0).abs() <= 0.3 * 2.0, "{v:?}: {wide} / {narrow}");
    }
}

#[test]
fn small_viscosity_recovers_inviscid_waves_away_from_the_wall() {
    let f = viscous_run(SwViscosity::Eddy, 1e-4, 4000);
    let exact = |x: f64| {
        let (h, u) = exact_sw_solution(SwViscosity::Eddy, x, 0.25).unwrap();
        State::<2>::new(h, u)
    };
    let e = error_norms(&f, &Reference::Function(&exact), 0, Some((0.0, 1.0))).unwrap();
    assert!(e.l1 <= 5e-3, "{}", e.l1);
}

#[test]
fn navier_stokes_mass_changes_only_through_the_boundary() {
    let gas = EulerModel::default();
    let grid = make_grid(-1.0, 1.0, 400).unwrap();
    let init = init_field(&gas, &grid, |x| {
        let w = if x < 0.0 {
            Primitive::new(3.0, 1.0, 3.0)
        } else {
            Primitive::new(1.0, 1.0, 1.0)
        };
        gas.to_conserved(&w).unwrap()
    })
    .unwrap();
    let left = BoundaryCondition::constant(gas.to_conserved(&Primitive::new(2.0, 1.0, 2.0)).unwrap());
    let spec = ViscousSpec::new(1e-3, DiffusionKind::NavierStokes { nu: 1.0, kappa: 1.0 }).unwrap();
    let r = run_viscous(&gas, &spec, &init, &left, &BoundaryCondition::Open, 0.2).unwrap();
    assert!(r.trace.defect()[0] <= 1e-12);
    assert!(conservation_defect(&r.trace) <= 1e-10);
    assert!(r.field.data.iter().all(|u| gas.to_primitive(u).is_ok()));
}
