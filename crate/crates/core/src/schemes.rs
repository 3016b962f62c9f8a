//! Semi-discrete conservative schemes
//! `dU_j/dt = −(F_{j+1/2} − F_{j−1/2}) / Δx` with Roe, entropy-conservative,
//! CND and second-order CND2 interface fluxes.
//!
//! Every flux is stored as `F = F_c − ½ D`: a central part `F_c` (the
//! entropy-conservative flux, or the flux average for Roe) and a numerical
//! diffusion `D`.

use crate::error::{Error, Result};
use crate::grid::{extend_with_ghosts, max_wave_speed_of, BoundaryCondition, StateField};
use crate::model::{HyperbolicModel, State};

pub const DEFAULT_CFL: f64 = 0.45;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Flux average minus Roe diffusion `R|Λ|R⁻¹[U]`.
    Roe,
    /// Entropy-conservative flux minus viscosity-shaped diffusion.
    Cnd,
    /// CND with diffusion applied to minmod-reconstructed edge values.
    Cnd2,
    /// Entropy-conservative flux alone.
    EntropyConservative,
}

impl SchemeKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Roe => "roe",
            Self::Cnd => "cnd",
            Self::Cnd2 => "cnd2",
            Self::EntropyConservative => "ec",
        }
    }
}

/// Slope limiter for the CND2 reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[non_exhaustive]
pub enum Limiter {
    #[default]
    Minmod,
    /// Zero slopes (piecewise-constant reconstruction).
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    pub cfl: f64,
    pub limiter: Limiter,
}

impl SchemeConfig {
    pub fn new(kind: SchemeKind, cfl: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl < 1.0) {
            return Err(Error::InvalidArgument(format!("cfl must lie in (0, 1), got {cfl}")));
        }
        Ok(Self {
            kind,
            cfl,
            limiter: Limiter::Minmod,
        })
    }

    pub fn with_limiter(mut self, limiter: Limiter) -> Self {
        self.limiter = limiter;
        self
    }

    fn ghost_cells(&self) -> usize {
        match self.kind {
            SchemeKind::Cnd2 => 2,
            _ => 1,
        }
    }
}

impl From<SchemeKind> for SchemeConfig {
    fn from(kind: SchemeKind) -> Self {
        Self {
            kind,
            cfl: DEFAULT_CFL,
            limiter: Limiter::Minmod,
        }
    }
}

/// `sgn(a) min(|a|, |b|)` when the signs agree, else 0.
pub fn minmod(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        a.min(b)
    } else if a < 0.0 && b < 0.0 {
        a.max(b)
    } else {
        0.0
    }
}

pub fn minmod_vec<const M: usize>(a: &State<M>, b: &State<M>) -> State<M> {
    a.zip_map(b, minmod)
}

/// Edge values `U⁻_j` (left) and `U⁺_j` (right) of a piecewise-linear
/// reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedEdges<const M: usize> {
    pub minus: Vec<State<M>>,
    pub plus: Vec<State<M>>,
}

/// Minmod reconstruction of every cell of `ext` that has two neighbours;
/// entry `i` belongs to `ext[i + 1]`.
pub fn reconstruct<const M: usize>(ext: &[State<M>]) -> ReconstructedEdges<M> {
    reconstruct_with(ext, Limiter::Minmod)
}

pub fn reconstruct_with<const M: usize>(ext: &[State<M>], limiter: Limiter) -> ReconstructedEdges<M> {
    let n = ext.len().saturating_sub(2);
    let mut minus = Vec::with_capacity(n);
    let mut plus = Vec::with_capacity(n);
    for w in ext.windows(3) {
        let slope = match limiter {
            Limiter::Minmod => minmod_vec(&(w[2] - w[1]), &(w[1] - w[0])),
            Limiter::Zero => State::<M>::zeros(),
        };
        minus.push(w[1] - slope * 0.5);
        plus.push(w[1] + slope * 0.5);
    }
    ReconstructedEdges { minus, plus }
}

/// `½(F(U_l) + F(U_r)) − ½ R|Λ|R⁻¹ (U_r − U_l)` with `R, Λ` at the
/// arithmetic average.
pub fn roe_interface_flux<const M: usize, Mdl>(model: &Mdl, left: &State<M>, right: &State<M>) -> Result<State<M>>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    let diffusion = roe_diffusion(model, left, right)?;
    Ok((model.flux(left) + model.flux(right)) * 0.5 - diffusion * 0.5)
}

fn roe_diffusion<const M: usize, Mdl>(model: &Mdl, left: &State<M>, right: &State<M>) -> Result<State<M>>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    let avg = (left + right) * 0.5;
    let eig = model.eigen(&avg)?;
    Ok(eig.abs_matrix()? * (right - left))
}

/// `F*(U_l, U_r) − ½ D*(U_l, U_r)`.
pub fn cnd_interface_flux<const M: usize, Mdl>(model: &Mdl, left: &State<M>, right: &State<M>, c_max: f64) -> State<M>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    model.ec_flux(left, right) - model.interface_diffusion(left, right, c_max) * 0.5
}

/// Central flux part and numerical diffusion at each of the `N + 1`
/// interfaces.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceTerms<const M: usize> {
    pub central: Vec<State<M>>,
    pub diffusion: Vec<State<M>>,
    pub c_max: f64,
}

impl<const M: usize> InterfaceTerms<M> {
    pub fn flux(&self, i: usize) -> State<M> {
        self.central[i] - self.diffusion[i] * 0.5
    }
}

/// Interface terms for `field` with ghost cells filled at time `t`.
pub fn interface_terms<const M: usize, Mdl>(
    model: &Mdl,
    scheme: &SchemeConfig,
    field: &StateField<M>,
    left: &BoundaryCondition<M>,
    right: &BoundaryCondition<M>,
    t: f64,
) -> Result<InterfaceTerms<M>>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    let n = field.data.len();
    let g = scheme.ghost_cells();
    let ext = extend_with_ghosts(&field.data, left, right, t, g);
    for u in &ext {
        model.check_state(u)?;
    }
    let c_max = max_wave_speed_of(model, &field.data)?;

    let mut central = Vec::with_capacity(n + 1);
    let mut diffusion = Vec::with_capacity(n + 1);
    match scheme.kind {
        SchemeKind::Roe => {
            for i in 0..=n {
                let (l, r) = (&ext[g - 1 + i], &ext[g + i]);
                central.push((model.flux(l) + model.flux(r)) * 0.5);
                diffusion.push(roe_diffusion(model, l, r)?);
            }
        }
        SchemeKind::Cnd | SchemeKind::EntropyConservative => {
            let dissipative = scheme.kind == SchemeKind::Cnd;
            for i in 0..=n {
                let (l, r) = (&ext[g - 1 + i], &ext[g + i]);
                central.push(model.ec_flux(l, r));
                diffusion.push(if dissipative {
                    model.interface_diffusion(l, r, c_max)
                } else {
                    State::<M>::zeros()
                });
            }
        }
        SchemeKind::Cnd2 => {
            // edges[k] belongs to ext[k + 1]
            let edges = reconstruct_with(&ext, scheme.limiter);
            for i in 0..=n {
                let (l, r) = (&ext[g - 1 + i], &ext[g + i]);
                central.push(model.ec_flux(l, r));
                let left_edge = &edges.plus[g - 2 + i];
                let right_edge = &edges.minus[g - 1 + i];
                diffusion.push(model.interface_diffusion(left_edge, right_edge, c_max));
            }
        }
    }
    Ok(InterfaceTerms {
        central,
        diffusion,
        c_max,
    })
}

/// Right-hand side of the semi-discrete system together with the interface
/// fluxes it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Rhs<const M: usize> {
    pub values: Vec<State<M>>,
    /// `F_{1/2} … F_{N+1/2}`.
    pub fluxes: Vec<State<M>>,
    pub c_max: f64,
}

impl<const M: usize> Rhs<M> {
    pub fn flux_left(&self) -> State<M> {
        self.fluxes[0]
    }

    pub fn flux_right(&self) -> State<M> {
        self.fluxes[self.fluxes.len() - 1]
    }
}

/// Assembles `−(F_{j+1/2} − F_{j−1/2}) / Δx` from interface fluxes.
pub fn flux_difference<const M: usize>(fluxes: &[State<M>], dx: f64) -> Vec<State<M>> {
    fluxes.windows(2).map(|w| (w[0] - w[1]) / dx).collect()
}

pub fn semidiscrete_rhs<const M: usize, Mdl>(
    model: &Mdl,
    scheme: &SchemeConfig,
    field: &StateField<M>,
    left: &BoundaryCondition<M>,
    right: &BoundaryCondition<M>,
    t: f64,
) -> Result<Rhs<M>>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    let terms = interface_terms(model, scheme, field, left, right, t)?;
    let fluxes: Vec<State<M>> = (0..terms.central.len()).map(|i| terms.flux(i)).collect();
    Ok(Rhs {
        values: flux_difference(&fluxes, field.grid.dx),
        fluxes,
        c_max: terms.c_max,
    })
}
