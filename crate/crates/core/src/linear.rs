//! Constant-coefficient linear systems `U_t + A U_x = ε B U_xx` with a
//! quadratic entropy `S(U) = ½ Uᵀ 𝒮 U`.

use crate::error::{Error, Result};
use crate::linalg::matrix_eigensystem;
use crate::model::{Eigensystem, HyperbolicModel, Matrix, State};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel<const M: usize> {
    a: Matrix<M>,
    b: Matrix<M>,
    symmetrizer: Matrix<M>,
    eigen: Eigensystem<M>,
}

impl<const M: usize> LinearModel<M> {
    /// `symmetrizer` must be symmetric positive definite with `𝒮A`
    /// symmetric.
    pub fn new(a: Matrix<M>, b: Matrix<M>, symmetrizer: Matrix<M>) -> Result<Self> {
        let eigen = matrix_eigensystem(&a)?;
        let scale = symmetrizer.norm() * a.norm();
        let sa = symmetrizer * a;
        if (sa - sa.transpose()).norm() > 1e-12 * scale.max(1.0) {
            return Err(Error::InvalidArgument("symmetrizer does not symmetrize A".into()));
        }
        if (symmetrizer - symmetrizer.transpose()).norm() > 1e-12 * symmetrizer.norm()
            || symmetrizer.cholesky().is_none()
        {
            return Err(Error::InvalidArgument(
                "symmetrizer is not symmetric positive definite".into(),
            ));
        }
        Ok(Self {
            a,
            b,
            symmetrizer,
            eigen,
        })
    }

    /// Uses `𝒮 = R⁻ᵀ R⁻¹`, which symmetrizes any strictly hyperbolic `A`.
    pub fn with_canonical_symmetrizer(a: Matrix<M>, b: Matrix<M>) -> Result<Self> {
        let eigen = matrix_eigensystem(&a)?;
        let r_inv = eigen.inverse_vectors()?;
        let s = r_inv.transpose() * r_inv;
        Self::new(a, b, (s + s.transpose()) * 0.5)
    }

    pub fn a(&self) -> &Matrix<M> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<M> {
        &self.b
    }

    pub fn symmetrizer(&self) -> &Matrix<M> {
        &self.symmetrizer
    }

    pub fn eigensystem(&self) -> &Eigensystem<M> {
        &self.eigen
    }
}

impl<const M: usize> HyperbolicModel<M> for LinearModel<M> {
    fn flux(&self, u: &State<M>) -> State<M> {
        self.a * u
    }

    fn eigen(&self, _u: &State<M>) -> Result<Eigensystem<M>> {
        Ok(self.eigen.clone())
    }

    fn max_abs_eigenvalue(&self, _u: &State<M>) -> Result<f64> {
        Ok(self.eigen.spectral_radius())
    }

    fn entropy(&self, u: &State<M>) -> f64 {
        0.5 * u.dot(&(self.symmetrizer * u))
    }

    /// `Q = ½ Uᵀ 𝒮A U`, so that `Q_U = Uᵀ 𝒮 A = S_U A`.
    fn entropy_flux(&self, u: &State<M>) -> f64 {
        0.5 * u.dot(&(self.symmetrizer * self.a * u))
    }

    fn entropy_vars(&self, u: &State<M>) -> State<M> {
        self.symmetrizer * u
    }

    fn viscosity_matrix(&self, _u: &State<M>) -> Matrix<M> {
        self.b
    }

    /// `A (U_l + U_r) / 2`.
    fn ec_flux(&self, left: &State<M>, right: &State<M>) -> State<M> {
        self.a * ((left + right) * 0.5)
    }
}
