//! The CND right-hand side agrees with `−F(U)_x + (c_max Δx / 2)(B(U) U_x)_x`
//! up to O(Δx²) on smooth data.

use cnd_core::euler::{EulerModel, Primitive};
use cnd_core::schemes::{semidiscrete_rhs, SchemeKind};
use cnd_core::swlin::{sw_matrix, sw_viscosity, SwLinParams, SwViscosity};
use cnd_core::{init_field, make_grid, BoundaryCondition, HyperbolicModel, State};
use std::f64::consts::PI;

const WINDOW: (f64, f64) = (-0.5, 0.5);

/// Fourth-order central difference.
fn derivative<const M: usize>(f: impl Fn(f64) -> State<M>, x: f64) -> State<M> {
    let h = 1e-3;
    (f(x - 2.0 * h) - f(x - h) * 8.0 + f(x + h) * 8.0 - f(x + 2.0 * h)) / (12.0 * h)
}

fn max_defect<const M: usize, Mdl>(
    model: &Mdl,
    n: usize,
    profile: impl Fn(f64) -> State<M> + Copy,
    target: impl Fn(f64, f64) -> State<M>,
) -> f64
where
    Mdl: HyperbolicModel<M>,
{
    let grid = make_grid(-1.0, 1.0, n).unwrap();
    let field = init_field(model, &grid, profile).unwrap();
    let bc = BoundaryCondition::Open;
    let rhs = semidiscrete_rhs(model, &SchemeKind::Cnd.into(), &field, &bc, &bc, 0.0).unwrap();
    let spread = rhs.c_max * grid.dx / 2.0;
    grid.centers
        .iter()
        .zip(&rhs.values)
        .filter(|(x, _)| (WINDOW.0..=WINDOW.1).contains(*x))
        .map(|(&x, v)| (v - target(x, spread)).amax())
        .fold(0.0, f64::max)
}

fn rates(defects: &[f64]) -> Vec<f64> {
    defects.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[test]
fn linear_shallow_water() {
    let p = SwLinParams::reference();
    let a = sw_matrix(&p);
    let profile = |x: f64| State::<2>::new(2.0 + 0.3 * (PI * x).sin(), 1.0 + 0.2 * (2.0 * PI * x).cos());
    let d1 = |x: f64| State::<2>::new(0.3 * PI * (PI * x).cos(), -0.4 * PI * (2.0 * PI * x).sin());
    let d2 = |x: f64| State::<2>::new(-0.3 * PI * PI * (PI * x).sin(), -0.8 * PI * PI * (2.0 * PI * x).cos());
    for v in [SwViscosity::Eddy, SwViscosity::Laplacian] {
        let m = p.model(v).unwrap();
        let b = sw_viscosity(v);
        let defects: Vec<f64> = [100, 200, 400, 800]
            .iter()
            .map(|&n| max_defect(&m, n, profile, |x, s| -(a * d1(x)) + b * d2(x) * s))
            .collect();
        let r = rates(&defects);
        assert!(r.iter().all(|&q| q >= 1.9), "{v:?}: defects {defects:?}, rates {r:?}");
    }
}

#[test]
fn euler_with_navier_stokes_diffusion() {
    let gas = EulerModel::default();
    let prim = |x: f64| {
        Primitive::new(
            2.0 + 0.3 * (PI * x).sin(),
            1.0 + 0.2 * (PI * x).cos(),
            2.0 + 0.3 * (PI * x + 1.0).sin(),
        )
    };
    let profile = |x: f64| gas.to_conserved(&prim(x)).unwrap();
    let viscous_flux = |x: f64| {
        let d = |y: f64| {
            let w = prim(y);
            State::<2>::new(w.u, gas.temperature(&w))
        };
        let (u, dut) = (prim(x).u, derivative(d, x));
        State::<3>::new(0.0, dut[0], u * dut[0] + dut[1])
    };
    let target = |x: f64, s: f64| -derivative(|y| gas.flux(&profile(y)), x) + derivative(viscous_flux, x) * s;
    let defects: Vec<f64> = [100, 200, 400, 800]
        .iter()
        .map(|&n| max_defect(&gas, n, profile, target))
        .collect();
    let r = rates(&defects);
    assert!(r.iter().all(|&q| q >= 1.9), "defects {defects:?}, rates {r:?}");
}
