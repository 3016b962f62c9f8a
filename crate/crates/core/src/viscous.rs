//! Reference solutions of the regularized system `U_t + F(U)_x = ε (B U_x)_x`
//! at a fixed small `ε`: entropy-conservative convection plus a
//! second-difference viscous term,
//! `dU_j/dt = −(F*_{j+1/2} − F*_{j−1/2})/Δx + ε/Δx² (G_{j+1/2} − G_{j−1/2})`.

use crate::error::{Error, Result};
use crate::grid::{extend_with_ghosts, max_wave_speed, max_wave_speed_of, BoundaryCondition, StateField};
use crate::model::{HyperbolicModel, State};
use crate::schemes::{flux_difference, Rhs, DEFAULT_CFL};
use crate::timeint::{run_to_time_with_progress, RunResult, SpatialOperator, TimeLoopConfig};

pub const DEFAULT_CFL_DIFF: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiffusionKind {
    /// `G = U_{j+1} − U_j`.
    IdentityLaplacian,
    /// `G = B(Ū) (U_{j+1} − U_j)` with the model's viscosity matrix at the
    /// arithmetic average.
    MatrixB,
    /// Navier-Stokes: `G = (0, ν Δu, ν ½Δ(u²) + κ Δθ)`. `ν` and `κ` weight
    /// the viscosity and heat conduction relative to `ε`.
    NavierStokes { nu: f64, kappa: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousSpec {
    pub epsilon: f64,
    pub kind: DiffusionKind,
    pub cfl_adv: f64,
    pub cfl_diff: f64,
}

impl ViscousSpec {
    pub fn new(epsilon: f64, kind: DiffusionKind) -> Result<Self> {
        let spec = Self {
            epsilon,
            kind,
            cfl_adv: DEFAULT_CFL,
            cfl_diff: DEFAULT_CFL_DIFF,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_cfl(mut self, cfl_adv: f64, cfl_diff: f64) -> Result<Self> {
        self.cfl_adv = cfl_adv;
        self.cfl_diff = cfl_diff;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if let DiffusionKind::NavierStokes { nu, kappa } = self.kind {
            if !(nu >= 0.0 && kappa >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "nu and kappa must be nonnegative, got {nu}, {kappa}"
                )));
            }
        }
        if !(self.cfl_adv > 0.0 && self.cfl_adv < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "cfl_adv must lie in (0, 1), got {}",
                self.cfl_adv
            )));
        }
        if !(self.cfl_diff > 0.0 && self.cfl_diff <= 0.5) {
            return Err(Error::InvalidArgument(format!(
                "cfl_diff must lie in (0, 0.5], got {}",
                self.cfl_diff
            )));
        }
        Ok(())
    }
}

/// Viscous regularization of a hyperbolic model with its boundary
/// conditions.
#[derive(Debug, Clone)]
pub struct ViscousOperator<'a, const M: usize, Mdl: ?Sized> {
    pub model: &'a Mdl,
    pub spec: ViscousSpec,
    pub left: BoundaryCondition<M>,
    pub right: BoundaryCondition<M>,
}

impl<'a, const M: usize, Mdl> ViscousOperator<'a, M, Mdl>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    pub fn new(
        model: &'a Mdl,
        spec: ViscousSpec,
        left: BoundaryCondition<M>,
        right: BoundaryCondition<M>,
    ) -> Result<Self> {
        spec.validate()?;
        if matches!(spec.kind, DiffusionKind::NavierStokes { .. }) {
            if M != 3 {
                return Err(Error::UnsupportedViscosity(
                    "Navier-Stokes diffusion needs a three-component model".into(),
                ));
            }
            let probe = State::<M>::from_element(1.0);
            if model.velocity_temperature(&probe).is_none() {
                return Err(Error::UnsupportedViscosity(
                    "model has no velocity and temperature".into(),
                ));
            }
        }
        Ok(Self {
            model,
            spec,
            left,
            right,
        })
    }

    fn viscous_flux(&self, l: &State<M>, r: &State<M>) -> State<M> {
        match self.spec.kind {
            DiffusionKind::IdentityLaplacian => r - l,
            DiffusionKind::MatrixB => self.model.viscosity_matrix(&((l + r) * 0.5)) * (r - l),
            DiffusionKind::NavierStokes { nu, kappa } => {
                let (ul, tl) = self.model.velocity_temperature(l).unwrap_or((0.0, 0.0));
                let (ur, tr) = self.model.velocity_temperature(r).unwrap_or((0.0, 0.0));
                let mut g = State::<M>::zeros();
                g[1] = nu * (ur - ul);
                g[2] = nu * 0.5 * (ur * ur - ul * ul) + kappa * (tr - tl);
                g
            }
        }
    }

    /// Bound on the diffusion coefficients over the field.
    fn diffusion_bound(&self, field: &StateField<M>) -> f64 {
        let norm_b = || {
            field
                .data
                .iter()
                .map(|u| self.model.viscosity_matrix(u).abs().row_sum().max())
                .fold(0.0_f64, f64::max)
        };
        match self.spec.kind {
            DiffusionKind::IdentityLaplacian => 1.0,
            DiffusionKind::MatrixB => norm_b(),
            DiffusionKind::NavierStokes { nu, kappa } => nu.max(kappa) * norm_b(),
        }
    }
}

impl<const M: usize, Mdl> SpatialOperator<M> for ViscousOperator<'_, M, Mdl>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    fn rhs(&self, field: &StateField<M>, t: f64) -> Result<Rhs<M>> {
        let ext = extend_with_ghosts(&field.data, &self.left, &self.right, t, 1);
        for u in &ext {
            self.model.check_state(u)?;
        }
        let scale = self.spec.epsilon / field.grid.dx;
        let fluxes: Vec<State<M>> = ext
            .windows(2)
            .map(|w| self.model.ec_flux(&w[0], &w[1]) - self.viscous_flux(&w[0], &w[1]) * scale)
            .collect();
        Ok(Rhs {
            values: flux_difference(&fluxes, field.grid.dx),
            fluxes,
            c_max: max_wave_speed_of(self.model, &field.data)?,
        })
    }

    fn stable_dt(&self, field: &StateField<M>) -> Result<f64> {
        let dx = field.grid.dx;
        let c_max = max_wave_speed(self.model, field)?;
        let adv = if c_max > 0.0 {
            self.spec.cfl_adv * dx / c_max
        } else {
            f64::INFINITY
        };
        let b_max = self.diffusion_bound(field);
        let diff = if b_max > 0.0 {
            self.spec.cfl_diff * dx * dx / (self.spec.epsilon * b_max)
        } else {
            f64::INFINITY
        };
        Ok(adv.min(diff))
    }
}

/// `dU/dt` of the viscous system at time `t`.
pub fn viscous_rhs<const M: usize, Mdl>(
    model: &Mdl,
    spec: &ViscousSpec,
    field: &StateField<M>,
    left: &BoundaryCondition<M>,
    right: &BoundaryCondition<M>,
    t: f64,
) -> Result<Vec<State<M>>>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    let op = ViscousOperator::new(model, *spec, left.clone(), right.clone())?;
    Ok(op.rhs(field, t)?.values)
}

pub fn run_viscous<const M: usize, Mdl>(
    model: &Mdl,
    spec: &ViscousSpec,
    initial: &StateField<M>,
    left: &BoundaryCondition<M>,
    right: &BoundaryCondition<M>,
    t_final: f64,
) -> Result<RunResult<M>>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    run_viscous_with_progress(model, spec, initial, left, right, t_final, &mut |_, _, _| {})
}

pub fn run_viscous_with_progress<const M: usize, Mdl>(
    model: &Mdl,
    spec: &ViscousSpec,
    initial: &StateField<M>,
    left: &BoundaryCondition<M>,
    right: &BoundaryCondition<M>,
    t_final: f64,
    progress: &mut dyn FnMut(usize, f64, f64),
) -> Result<RunResult<M>>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    let op = ViscousOperator::new(model, *spec, left.clone(), right.clone())?;
    run_to_time_with_progress(&op, initial, &TimeLoopConfig::new(t_final)?, progress)
}
