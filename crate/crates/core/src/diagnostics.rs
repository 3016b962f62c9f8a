//! Entropy, conservation and admissibility diagnostics, and error norms.

use crate::error::{Error, Result};
use crate::grid::{extend_with_ghosts, BoundaryCondition, StateField};
use crate::model::{HyperbolicModel, State};
use crate::schemes::{interface_terms, SchemeConfig, SchemeKind};
use crate::timeint::RunTrace;

/// Semi-discrete entropy balance of a scheme at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    /// `dS/dt|_j = V_jᵀ rhs_j`.
    pub rate: Vec<f64>,
    /// `Q̂_{j+1/2} = V̄ᵀ F_c − Ψ̄ − ½ V̄ᵀ D`, one per interface.
    pub entropy_flux: Vec<f64>,
    /// `dS/dt|_j + (Q̂_{j+1/2} − Q̂_{j−1/2}) / Δx`.
    pub residual: Vec<f64>,
    /// `[V]ᵀ D` at every interface.
    pub interface_production: Vec<f64>,
    pub max_positive: f64,
}

/// Entropy residual of a CND-type or entropy-conservative scheme.
pub fn entropy_residual<const M: usize, Mdl>(
    model: &Mdl,
    scheme: &SchemeConfig,
    field: &StateField<M>,
    left: &BoundaryCondition<M>,
    right: &BoundaryCondition<M>,
    t: f64,
) -> Result<EntropyReport>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    if scheme.kind == SchemeKind::Roe {
        return Err(Error::SchemeMismatch(
            "entropy residual is defined for CND-type and EC schemes only".into(),
        ));
    }
    let terms = interface_terms(model, scheme, field, left, right, t)?;
    let ext = extend_with_ghosts(&field.data, left, right, t, 1);
    let v: Vec<State<M>> = ext.iter().map(|u| model.entropy_vars(u)).collect();
    let psi: Vec<f64> = ext.iter().map(|u| model.entropy_potential(u)).collect();

    let n = field.data.len();
    let dx = field.grid.dx;
    let mut entropy_flux = Vec::with_capacity(n + 1);
    let mut interface_production = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let v_avg = (v[i] + v[i + 1]) * 0.5;
        let psi_avg = 0.5 * (psi[i] + psi[i + 1]);
        let d = &terms.diffusion[i];
        entropy_flux.push(v_avg.dot(&terms.central[i]) - psi_avg - 0.5 * v_avg.dot(d));
        interface_production.push((v[i + 1] - v[i]).dot(d));
    }

    let mut rate = Vec::with_capacity(n);
    let mut residual = Vec::with_capacity(n);
    for j in 0..n {
        let rhs = (terms.flux(j) - terms.flux(j + 1)) / dx;
        let r = v[j + 1].dot(&rhs);
        rate.push(r);
        residual.push(r + (entropy_flux[j + 1] - entropy_flux[j]) / dx);
    }
    let max_positive = residual.iter().fold(0.0_f64, |m, &r| m.max(r));
    Ok(EntropyReport {
        rate,
        entropy_flux,
        residual,
        interface_production,
        max_positive,
    })
}

/// Largest per-component conservation defect of a run.
pub fn conservation_defect<const M: usize>(trace: &RunTrace<M>) -> f64 {
    trace.defect().amax()
}

/// `Q(Ū) − Q(U_l) − V(U_l)ᵀ (F(Ū) − F(U_l))`; admissible traces give a
/// nonpositive value.
pub fn dlf_boundary_check<const M: usize, Mdl>(model: &Mdl, trace: &State<M>, data: &State<M>) -> Result<f64>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    model.check_state(trace)?;
    model.check_state(data)?;
    let v = model.entropy_vars(data);
    Ok(model.entropy_flux(trace) - model.entropy_flux(data) - v.dot(&(model.flux(trace) - model.flux(data))))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub window: Option<(f64, f64)>,
    pub cells: usize,
}

/// What a computed field is compared against.
pub enum Reference<'a, const M: usize> {
    Function(&'a dyn Fn(f64) -> State<M>),
    /// Sampled at the nearest cell of its own grid.
    Field(&'a StateField<M>),
}

impl<const M: usize> Reference<'_, M> {
    fn at(&self, x: f64) -> State<M> {
        match self {
            Self::Function(f) => f(x),
            Self::Field(field) => field.data[field.grid.nearest_cell(x)],
        }
    }
}

/// Discrete `L1`, `L2`, `L∞` norms of one component of `field − reference`
/// over the cells whose centres lie in `window`.
pub fn error_norms<const M: usize>(
    field: &StateField<M>,
    reference: &Reference<'_, M>,
    component: usize,
    window: Option<(f64, f64)>,
) -> Result<ErrorReport> {
    if component >= M {
        return Err(Error::InvalidArgument(format!("component {component} out of range")));
    }
    let values: Vec<f64> = field.component(component);
    let reference: Vec<f64> = field.grid.centers.iter().map(|&x| reference.at(x)[component]).collect();
    scalar_error_norms(&field.grid.centers, &values, &reference, field.grid.dx, window)
}

/// Norms of `values − reference` sampled at `x` with uniform spacing `dx`.
pub fn scalar_error_norms(
    x: &[f64],
    values: &[f64],
    reference: &[f64],
    dx: f64,
    window: Option<(f64, f64)>,
) -> Result<ErrorReport> {
    if x.len() != values.len() || x.len() != reference.len() {
        return Err(Error::InvalidArgument("error norm inputs differ in length".into()));
    }
    let inside = |xi: f64| window.is_none_or(|(a, b)| xi >= a && xi <= b);
    let (mut l1, mut l2, mut linf, mut cells) = (0.0, 0.0, 0.0_f64, 0);
    for ((&xi, &v), &r) in x.iter().zip(values).zip(reference) {
        if !inside(xi) {
            continue;
        }
        let d = (v - r).abs();
        l1 += d * dx;
        l2 += d * d * dx;
        linf = linf.max(d);
        cells += 1;
    }
    if cells == 0 {
        return Err(Error::InvalidArgument(format!("no cells inside window {window:?}")));
    }
    Ok(ErrorReport {
        l1,
        l2: l2.sqrt(),
        linf,
        window,
        cells,
    })
}
