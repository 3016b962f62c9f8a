//! Linearized shallow water equations around a background state `(h̃, ũ)`.

use crate::error::{Error, Result};
use crate::linear::LinearModel;
use crate::model::{Matrix, State};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwLinParams {
    pub h_tilde: f64,
    pub u_tilde: f64,
    pub g: f64,
}

/// Viscous mechanism of the regularized system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwViscosity {
    /// Artificial uniform viscosity on both equations.
    Laplacian,
    /// Eddy viscosity acting on the velocity only.
    Eddy,
}

/// Entropy, entropy flux, entropy variables and entropy potential at a
/// state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPair<const M: usize> {
    pub s: f64,
    pub q: f64,
    pub v: State<M>,
    pub psi: f64,
}

impl SwLinParams {
    /// `h̃ = 2, ũ = 1, g = 1`.
    pub fn reference() -> Self {
        Self {
            h_tilde: 2.0,
            u_tilde: 1.0,
            g: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h_tilde > 0.0 && self.g > 0.0 && self.u_tilde.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "shallow water parameters need h_tilde > 0 and g > 0, got {self:?}"
            )));
        }
        Ok(())
    }

    /// Energy symmetrizer `diag(g, h̃)`.
    pub fn symmetrizer(&self) -> Matrix<2> {
        Matrix::<2>::new(self.g, 0.0, 0.0, self.h_tilde)
    }

    pub fn model(&self, viscosity: SwViscosity) -> Result<LinearModel<2>> {
        self.validate()?;
        LinearModel::new(sw_matrix(self), sw_viscosity(viscosity), self.symmetrizer())
    }
}

/// `A = [[ũ, h̃], [g, ũ]]`.
pub fn sw_matrix(params: &SwLinParams) -> Matrix<2> {
    Matrix::<2>::new(params.u_tilde, params.h_tilde, params.g, params.u_tilde)
}

pub fn sw_viscosity(kind: SwViscosity) -> Matrix<2> {
    match kind {
        SwViscosity::Laplacian => Matrix::<2>::identity(),
        SwViscosity::Eddy => Matrix::<2>::new(0.0, 0.0, 0.0, 1.0),
    }
}

/// Energy `S = ½(g h² + h̃ u²)` and its companions.
pub fn sw_entropy_pair(params: &SwLinParams, u: &State<2>) -> EntropyPair<2> {
    let sym = params.symmetrizer();
    let a = sw_matrix(params);
    let v = sym * u;
    let s = 0.5 * u.dot(&v);
    let q = 0.5 * u.dot(&(sym * a * u));
    let psi = v.dot(&(a * u)) - q;
    EntropyPair { s, q, v, psi }
}

/// `A (U_j + U_{j+1}) / 2`.
pub fn sw_ec_flux(a: &Matrix<2>, left: &State<2>, right: &State<2>) -> State<2> {
    a * ((left + right) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::HyperbolicModel;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn reference_matrix_and_spectrum() {
        let p = SwLinParams::reference();
        assert_eq!(sw_matrix(&p), Matrix::<2>::new(1.0, 2.0, 1.0, 1.0));
        let model = p.model(SwViscosity::Eddy).unwrap();
        let eig = model.eigensystem();
        assert!((eig.lambdas[0] - (1.0 - SQRT2)).abs() < 1e-14);
        assert!((eig.lambdas[1] - (1.0 + SQRT2)).abs() < 1e-14);
        assert!((eig.right_vectors[(1, 0)] + SQRT2 / 2.0).abs() < 1e-14);
        assert!((eig.right_vectors[(1, 1)] - SQRT2 / 2.0).abs() < 1e-14);
        assert_eq!(eig.k_negative, 1);
    }

    #[test]
    fn viscosity_matrices() {
        assert_eq!(sw_viscosity(SwViscosity::Laplacian), Matrix::<2>::identity());
        let eddy = sw_viscosity(SwViscosity::Eddy);
        assert_eq!(eddy, Matrix::<2>::new(0.0, 0.0, 0.0, 1.0));
        assert_eq!(eddy.rank(1e-14), 1);
    }

    #[test]
    fn entropy_pair_basics() {
        let p = SwLinParams::reference();
        let e = sw_entropy_pair(&p, &State::<2>::zeros());
        assert_eq!(e.s, 0.0);
        assert_eq!(e.v, State::<2>::zeros());

        let sa = p.symmetrizer() * sw_matrix(&p);
        assert_eq!(sa, Matrix::<2>::new(1.0, 2.0, 2.0, 2.0));
        assert_eq!(sa, sa.transpose());
    }

    #[test]
    fn entropy_flux_compatibility_by_finite_differences() {
        let p = SwLinParams::reference();
        let a = sw_matrix(&p);
        let u = State::<2>::new(2.0, 1.0);
        let h = 1e-6;
        let e = sw_entropy_pair(&p, &u);
        for i in 0..2 {
            let mut up = u;
            let mut um = u;
            up[i] += h;
            um[i] -= h;
            let dq = (sw_entropy_pair(&p, &up).q - sw_entropy_pair(&p, &um).q) / (2.0 * h);
            let expected = (e.v.transpose() * a)[i];
            assert!((dq - expected).abs() < 1e-6, "component {i}: {dq} vs {expected}");
        }
    }

    #[test]
    fn ec_flux_values() {
        let a = sw_matrix(&SwLinParams::reference());
        let u = State::<2>::new(0.7, -0.2);
        assert_eq!(sw_ec_flux(&a, &u, &u), a * u);

        let l = State::<2>::new(3.0, 1.0);
        let r = State::<2>::new(1.0, 1.0);
        assert_eq!(sw_ec_flux(&a, &l, &r), State::<2>::new(4.0, 3.0));

        let p = SwLinParams::reference();
        let el = sw_entropy_pair(&p, &l);
        let er = sw_entropy_pair(&p, &r);
        let residual = (er.v - el.v).dot(&sw_ec_flux(&a, &l, &r)) - (er.psi - el.psi);
        assert!(residual.abs() <= 1e-12);
    }

    #[test]
    fn model_agrees_with_free_functions() {
        let p = SwLinParams::reference();
        let model = p.model(SwViscosity::Laplacian).unwrap();
        let u = State::<2>::new(1.3, -0.4);
        let e = sw_entropy_pair(&p, &u);
        assert!((model.entropy(&u) - e.s).abs() < 1e-15);
        assert!((model.entropy_flux(&u) - e.q).abs() < 1e-15);
        assert!((model.entropy_potential(&u) - e.psi).abs() < 1e-14);
    }

    #[test]
    fn invalid_params() {
        let p = SwLinParams {
            h_tilde: -1.0,
            u_tilde: 0.0,
            g: 1.0,
        };
        assert!(p.model(SwViscosity::Eddy).is_err());
    }
}
