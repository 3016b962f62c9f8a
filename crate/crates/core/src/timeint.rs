//! SSP-RK2 time stepping of a semi-discrete system `dU/dt = L(U)`.

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, StateField};
use crate::model::{HyperbolicModel, State};
use crate::schemes::{semidiscrete_rhs, Rhs, SchemeConfig};

/// Blow-up factor (relative to the initial max-norm) treated as instability.
pub const BLOWUP_FACTOR: f64 = 1e6;
pub const DEFAULT_MAX_STEPS: usize = 10_000_000;

/// A right-hand side `L(U, t)` together with its stable step size.
pub trait SpatialOperator<const M: usize> {
    fn rhs(&self, field: &StateField<M>, t: f64) -> Result<Rhs<M>>;

    fn stable_dt(&self, field: &StateField<M>) -> Result<f64>;
}

/// Hyperbolic scheme with its boundary conditions.
#[derive(Debug, Clone)]
pub struct HyperbolicOperator<'a, const M: usize, Mdl: ?Sized> {
    pub model: &'a Mdl,
    pub scheme: SchemeConfig,
    pub left: BoundaryCondition<M>,
    pub right: BoundaryCondition<M>,
}

impl<'a, const M: usize, Mdl> HyperbolicOperator<'a, M, Mdl>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    pub fn new(model: &'a Mdl, scheme: SchemeConfig, left: BoundaryCondition<M>, right: BoundaryCondition<M>) -> Self {
        Self {
            model,
            scheme,
            left,
            right,
        }
    }
}

impl<const M: usize, Mdl> SpatialOperator<M> for HyperbolicOperator<'_, M, Mdl>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    fn rhs(&self, field: &StateField<M>, t: f64) -> Result<Rhs<M>> {
        semidiscrete_rhs(self.model, &self.scheme, field, &self.left, &self.right, t)
    }

    fn stable_dt(&self, field: &StateField<M>) -> Result<f64> {
        let c_max = crate::grid::max_wave_speed(self.model, field)?;
        Ok(if c_max > 0.0 {
            self.scheme.cfl * field.grid.dx / c_max
        } else {
            f64::INFINITY
        })
    }
}

/// Result of one SSP-RK2 step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome<const M: usize> {
    pub field: StateField<M>,
    /// `dt/2 Σ_stages (F_{1/2} − F_{N+1/2})`.
    pub inflow: State<M>,
}

fn check_finite<const M: usize>(data: &[State<M>]) -> Result<()> {
    match data.iter().position(|u| !u.iter().all(|v| v.is_finite())) {
        Some(cell) => Err(Error::NonFinite { cell }),
        None => Ok(()),
    }
}

/// `U* = U + dt L(U, t)`, `U** = U* + dt L(U*, t + dt)`, `U⁺ = ½(U + U**)`.
pub fn ssprk2_step<const M: usize, Op>(op: &Op, field: &StateField<M>, dt: f64) -> Result<StepOutcome<M>>
where
    Op: SpatialOperator<M> + ?Sized,
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    let t = field.time;
    let l1 = op.rhs(field, t)?;
    let stage: Vec<State<M>> = field.data.iter().zip(&l1.values).map(|(u, l)| u + l * dt).collect();
    check_finite(&stage)?;
    let stage = StateField {
        grid: field.grid.clone(),
        data: stage,
        time: t + dt,
    };

    let l2 = op.rhs(&stage, t + dt)?;
    let data: Vec<State<M>> = field
        .data
        .iter()
        .zip(&stage.data)
        .zip(&l2.values)
        .map(|((u, s), l)| (u + (s + l * dt)) * 0.5)
        .collect();
    check_finite(&data)?;

    let inflow = ((l1.flux_left() - l1.flux_right()) + (l2.flux_left() - l2.flux_right())) * (0.5 * dt);
    Ok(StepOutcome {
        field: StateField {
            grid: field.grid.clone(),
            data,
            time: t + dt,
        },
        inflow,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeLoopConfig {
    pub t_final: f64,
    pub max_steps: usize,
}

impl TimeLoopConfig {
    pub fn new(t_final: f64) -> Result<Self> {
        if !(t_final >= 0.0 && t_final.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t_final must be nonnegative, got {t_final}"
            )));
        }
        Ok(Self {
            t_final,
            max_steps: DEFAULT_MAX_STEPS,
        })
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }
}

/// Bookkeeping of a run, used for the conservation check.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace<const M: usize> {
    pub steps: usize,
    pub initial_total: State<M>,
    pub final_total: State<M>,
    /// Accumulated boundary inflow `Σ_n dt (F_left − F_right)`.
    pub inflow: State<M>,
    /// Largest single-step defect, componentwise max.
    pub max_step_defect: f64,
}

impl<const M: usize> RunTrace<M> {
    /// `|Δ(Σ U Δx) − inflow|` per component.
    pub fn defect(&self) -> State<M> {
        (self.final_total - self.initial_total - self.inflow).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<const M: usize> {
    pub field: StateField<M>,
    pub trace: RunTrace<M>,
}

pub fn run_to_time<const M: usize, Op>(op: &Op, initial: &StateField<M>, cfg: &TimeLoopConfig) -> Result<RunResult<M>>
where
    Op: SpatialOperator<M> + ?Sized,
{
    run_to_time_with_progress(op, initial, cfg, &mut |_, _, _| {})
}

/// Steps until `t_final`, calling `progress(step, t, dt)` after each step.
/// The last step is shortened to land exactly on `t_final`.
pub fn run_to_time_with_progress<const M: usize, Op>(
    op: &Op,
    initial: &StateField<M>,
    cfg: &TimeLoopConfig,
    progress: &mut dyn FnMut(usize, f64, f64),
) -> Result<RunResult<M>>
where
    Op: SpatialOperator<M> + ?Sized,
{
    let t_end = initial.time + cfg.t_final;
    let initial_total = initial.total();
    let blowup = BLOWUP_FACTOR * initial.max_abs().max(1.0);

    let mut field = initial.clone();
    let mut inflow = State::<M>::zeros();
    let mut max_step_defect = 0.0_f64;
    let mut steps = 0;
    while field.time < t_end {
        if steps >= cfg.max_steps {
            return Err(Error::MaxSteps(cfg.max_steps));
        }
        let t = field.time;
        let dt_stable = op.stable_dt(&field)?;
        let last = t + dt_stable >= t_end;
        let dt = if last { t_end - t } else { dt_stable };

        let before = field.total();
        let out = ssprk2_step(op, &field, dt)?;
        field = out.field;
        if last {
            field.time = t_end;
        }
        steps += 1;
        let step_defect = (field.total() - before - out.inflow).amax();
        max_step_defect = max_step_defect.max(step_defect);
        inflow += out.inflow;

        if field.max_abs() > blowup {
            return Err(Error::Unstable {
                step: steps,
                t: field.time,
            });
        }
        progress(steps, field.time, dt);
    }

    let trace = RunTrace {
        steps,
        initial_total,
        final_total: field.total(),
        inflow,
        max_step_defect,
    };
    Ok(RunResult { field, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, Grid};

    /// `L(u) = −u` cell by cell, no fluxes.
    struct Decay;

    impl SpatialOperator<1> for Decay {
        fn rhs(&self, field: &StateField<1>, _t: f64) -> Result<Rhs<1>> {
            Ok(Rhs {
                values: field.data.iter().map(|u| -u).collect(),
                fluxes: vec![State::<1>::zeros(); field.data.len() + 1],
                c_max: 0.0,
            })
        }

        fn stable_dt(&self, _field: &StateField<1>) -> Result<f64> {
            Ok(0.1)
        }
    }

    struct Zero;

    impl SpatialOperator<1> for Zero {
        fn rhs(&self, field: &StateField<1>, _t: f64) -> Result<Rhs<1>> {
            Ok(Rhs {
                values: vec![State::<1>::zeros(); field.data.len()],
                fluxes: vec![State::<1>::zeros(); field.data.len() + 1],
                c_max: 0.0,
            })
        }

        fn stable_dt(&self, _field: &StateField<1>) -> Result<f64> {
            Ok(0.3)
        }
    }

    fn scalar_field(grid: &Grid, v: f64) -> StateField<1> {
        StateField::new(grid.clone(), vec![State::<1>::new(v); grid.n_cells], 0.0).unwrap()
    }

    #[test]
    fn zero_operator_keeps_state() {
        let grid = make_grid(0.0, 1.0, 3).unwrap();
        let f = scalar_field(&grid, 1.7);
        let out = ssprk2_step(&Zero, &f, 0.1).unwrap();
        assert_eq!(out.field.data, f.data);
        assert_eq!(out.field.time, 0.1);
    }

    #[test]
    fn heun_on_linear_decay() {
        let grid = make_grid(0.0, 1.0, 1).unwrap();
        let f = scalar_field(&grid, 2.0);
        let dt = 0.1;
        let out = ssprk2_step(&Decay, &f, dt).unwrap();
        let expected = 2.0 * (1.0 - dt + dt * dt / 2.0);
        assert!((out.field.data[0][0] - expected).abs() < 1e-15);
    }

    #[test]
    fn second_order_on_decay() {
        struct Fixed(f64);
        impl SpatialOperator<1> for Fixed {
            fn rhs(&self, field: &StateField<1>, t: f64) -> Result<Rhs<1>> {
                Decay.rhs(field, t)
            }
            fn stable_dt(&self, _field: &StateField<1>) -> Result<f64> {
                Ok(self.0)
            }
        }
        let grid = make_grid(0.0, 1.0, 1).unwrap();
        let f = scalar_field(&grid, 1.0);
        let cfg = TimeLoopConfig::new(1.0).unwrap();
        let err = |dt: f64| {
            let r = run_to_time(&Fixed(dt), &f, &cfg).unwrap();
            (r.field.data[0][0] - (-1.0_f64).exp()).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn zero_final_time_returns_input() {
        let grid = make_grid(0.0, 1.0, 4).unwrap();
        let f = scalar_field(&grid, 0.3);
        let r = run_to_time(&Decay, &f, &TimeLoopConfig::new(0.0).unwrap()).unwrap();
        assert_eq!(r.field, f);
        assert_eq!(r.trace.steps, 0);
    }

    #[test]
    fn lands_exactly_on_final_time() {
        let grid = make_grid(0.0, 1.0, 2).unwrap();
        let f = scalar_field(&grid, 1.0);
        let mut calls = Vec::new();
        let r = run_to_time_with_progress(&Zero, &f, &TimeLoopConfig::new(1.0).unwrap(), &mut |s, t, dt| {
            calls.push((s, t, dt))
        })
        .unwrap();
        assert_eq!(r.field.time, 1.0);
        assert_eq!(r.trace.steps, 4);
        assert!((calls[3].2 - 0.1).abs() < 1e-12);
    }

    #[test]
    fn max_steps_guard() {
        let grid = make_grid(0.0, 1.0, 2).unwrap();
        let f = scalar_field(&grid, 1.0);
        let cfg = TimeLoopConfig::new(1.0).unwrap().with_max_steps(2);
        assert_eq!(run_to_time(&Zero, &f, &cfg).unwrap_err(), Error::MaxSteps(2));
    }

    #[test]
    fn blowup_is_reported() {
        struct Growth;
        impl SpatialOperator<1> for Growth {
            fn rhs(&self, field: &StateField<1>, _t: f64) -> Result<Rhs<1>> {
                Ok(Rhs {
                    values: field.data.iter().map(|u| u * 100.0).collect(),
                    fluxes: vec![State::<1>::zeros(); field.data.len() + 1],
                    c_max: 0.0,
                })
            }
            fn stable_dt(&self, _field: &StateField<1>) -> Result<f64> {
                Ok(1.0)
            }
        }
        let grid = make_grid(0.0, 1.0, 1).unwrap();
        let f = scalar_field(&grid, 1.0);
        let err = run_to_time(&Growth, &f, &TimeLoopConfig::new(10.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Unstable { step: 2, .. }), "{err:?}");
    }

    #[test]
    fn rejects_bad_dt_and_final_time() {
        let grid = make_grid(0.0, 1.0, 1).unwrap();
        let f = scalar_field(&grid, 1.0);
        assert!(ssprk2_step(&Zero, &f, 0.0).is_err());
        assert!(TimeLoopConfig::new(-1.0).is_err());
    }
}
