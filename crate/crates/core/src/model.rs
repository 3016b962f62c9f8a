//! The system-model abstraction shared by every scheme.

use nalgebra::{SMatrix, SVector};

use crate::error::{Error, Result};

/// A state vector of an `M`-component system.
pub type State<const M: usize> = SVector<f64, M>;

/// An `M x M` real matrix.
pub type Matrix<const M: usize> = SMatrix<f64, M, M>;

/// Default guard for the non-characteristic boundary check.
pub const SPECTRAL_GAP_TOL: f64 = 1e-10;

/// Real eigenvalues (ascending) and right eigenvectors (columns) of a flux
/// Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem<const M: usize> {
    pub lambdas: State<M>,
    pub right_vectors: Matrix<M>,
    /// Number of strictly negative eigenvalues.
    pub k_negative: usize,
}

impl<const M: usize> Eigensystem<M> {
    /// Sorts the pairs by eigenvalue and checks strict hyperbolicity.
    pub fn new(lambdas: State<M>, right_vectors: Matrix<M>) -> Result<Self> {
        let mut order: Vec<usize> = (0..M).collect();
        order.sort_by(|&a, &b| lambdas[a].total_cmp(&lambdas[b]));

        let sorted_lambdas = State::<M>::from_fn(|i, _| lambdas[order[i]]);
        let sorted_vectors = Matrix::<M>::from_fn(|r, c| right_vectors[(r, order[c])]);

        if sorted_lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::NotHyperbolic("non-finite eigenvalue".into()));
        }
        for i in 1..M {
            if sorted_lambdas[i] <= sorted_lambdas[i - 1] {
                return Err(Error::NotHyperbolic(format!(
                    "repeated eigenvalue {}",
                    sorted_lambdas[i]
                )));
            }
        }
        for c in 0..M {
            if sorted_vectors.column(c).norm() == 0.0 {
                return Err(Error::NotHyperbolic(format!("zero eigenvector {c}")));
            }
        }

        let k_negative = sorted_lambdas.iter().filter(|&&l| l < 0.0).count();
        Ok(Self {
            lambdas: sorted_lambdas,
            right_vectors: sorted_vectors,
            k_negative,
        })
    }

    pub fn spectral_radius(&self) -> f64 {
        self.lambdas.iter().fold(0.0_f64, |acc, l| acc.max(l.abs()))
    }

    /// Rejects eigenvalues within `tol` of zero.
    pub fn check_noncharacteristic(&self, tol: f64) -> Result<()> {
        match self.lambdas.iter().find(|l| l.abs() <= tol) {
            Some(&l) => Err(Error::CharacteristicBoundary(l)),
            None => Ok(()),
        }
    }

    /// `R |Λ| R⁻¹`.
    pub fn abs_matrix(&self) -> Result<Matrix<M>> {
        let inv = self.inverse_vectors()?;
        Ok(self.right_vectors * Matrix::<M>::from_diagonal(&self.lambdas.map(f64::abs)) * inv)
    }

    pub fn inverse_vectors(&self) -> Result<Matrix<M>> {
        self.right_vectors.try_inverse().ok_or_else(|| Error::Singular {
            context: "eigenvector matrix".into(),
            condition: f64::INFINITY,
        })
    }
}

/// A hyperbolic system `U_t + F(U)_x = 0` together with an entropy pair, the
/// viscosity matrix of its physical regularization and an
/// entropy-conservative two-point flux.
pub trait HyperbolicModel<const M: usize>: Sync {
    /// Rejects states outside the admissible set.
    fn check_state(&self, u: &State<M>) -> Result<()> {
        if u.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::Inadmissible(format!("non-finite state {:?}", u.as_slice())))
        }
    }

    fn flux(&self, u: &State<M>) -> State<M>;

    fn eigen(&self, u: &State<M>) -> Result<Eigensystem<M>>;

    /// Largest eigenvalue magnitude of the flux Jacobian at `u`.
    fn max_abs_eigenvalue(&self, u: &State<M>) -> Result<f64> {
        Ok(self.eigen(u)?.spectral_radius())
    }

    fn entropy(&self, u: &State<M>) -> f64;

    fn entropy_flux(&self, u: &State<M>) -> f64;

    /// Entropy variables `V = S_U`.
    fn entropy_vars(&self, u: &State<M>) -> State<M>;

    /// `Ψ = Vᵀ F − Q`.
    fn entropy_potential(&self, u: &State<M>) -> f64 {
        self.entropy_vars(u).dot(&self.flux(u)) - self.entropy_flux(u)
    }

    fn viscosity_matrix(&self, u: &State<M>) -> Matrix<M>;

    /// Two-point flux satisfying `[V]ᵀ F* = [Ψ]`.
    fn ec_flux(&self, left: &State<M>, right: &State<M>) -> State<M>;

    /// Viscosity-shaped numerical diffusion across an interface,
    /// `c_max B(Û) (right − left)` with the arithmetic average `Û`.
    fn interface_diffusion(&self, left: &State<M>, right: &State<M>, c_max: f64) -> State<M> {
        let avg = (left + right) * 0.5;
        self.viscosity_matrix(&avg) * (right - left) * c_max
    }

    /// Velocity and temperature, for models with a Navier-Stokes type
    /// regularization.
    fn velocity_temperature(&self, _u: &State<M>) -> Option<(f64, f64)> {
        None
    }
}

impl<const M: usize, T: HyperbolicModel<M> + ?Sized> HyperbolicModel<M> for &T {
    fn check_state(&self, u: &State<M>) -> Result<()> {
        (**self).check_state(u)
    }
    fn flux(&self, u: &State<M>) -> State<M> {
        (**self).flux(u)
    }
    fn eigen(&self, u: &State<M>) -> Result<Eigensystem<M>> {
        (**self).eigen(u)
    }
    fn max_abs_eigenvalue(&self, u: &State<M>) -> Result<f64> {
        (**self).max_abs_eigenvalue(u)
    }
    fn entropy(&self, u: &State<M>) -> f64 {
        (**self).entropy(u)
    }
    fn entropy_flux(&self, u: &State<M>) -> f64 {
        (**self).entropy_flux(u)
    }
    fn entropy_vars(&self, u: &State<M>) -> State<M> {
        (**self).entropy_vars(u)
    }
    fn entropy_potential(&self, u: &State<M>) -> f64 {
        (**self).entropy_potential(u)
    }
    fn viscosity_matrix(&self, u: &State<M>) -> Matrix<M> {
        (**self).viscosity_matrix(u)
    }
    fn ec_flux(&self, left: &State<M>, right: &State<M>) -> State<M> {
        (**self).ec_flux(left, right)
    }
    fn interface_diffusion(&self, left: &State<M>, right: &State<M>, c_max: f64) -> State<M> {
        (**self).interface_diffusion(left, right, c_max)
    }
    fn velocity_temperature(&self, u: &State<M>) -> Option<(f64, f64)> {
        (**self).velocity_temperature(u)
    }
}
