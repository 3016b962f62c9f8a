//! Exact solutions of the Riemann problem and of the boundary Riemann
//! problem (vanishing-viscosity limit) for constant-coefficient systems
//! `U_t + A U_x = ε B U_xx`.
//!
//! The boundary Riemann solution consists of a boundary layer of zero width,
//! which connects the Dirichlet datum `U_l` to the trace `Ū`, followed by the
//! outgoing waves `λ_{k+1} … λ_m`. Admissible layer jumps `U_l − Ū` span the
//! vectors `R̃_1 … R̃_k` returned by [`boundary_layer_basis`]; these depend on
//! `B`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{
    canonical_basis, matrix_eigensystem, solve_checked, stable_subspace, to_dmatrix, SINGULAR_CONDITION,
};
use crate::model::{Eigensystem, Matrix, State, SPECTRAL_GAP_TOL};
use crate::swlin::{SwLinParams, SwViscosity};

/// `U_t + A U_x = ε B U_xx` with strictly hyperbolic `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<const M: usize> {
    a: Matrix<M>,
    b: Matrix<M>,
    eigen: Eigensystem<M>,
}

impl<const M: usize> LinearSystem<M> {
    pub fn new(a: Matrix<M>, b: Matrix<M>) -> Result<Self> {
        let eigen = matrix_eigensystem(&a)?;
        Ok(Self { a, b, eigen })
    }

    pub fn a(&self) -> &Matrix<M> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<M> {
        &self.b
    }

    pub fn eigensystem(&self) -> &Eigensystem<M> {
        &self.eigen
    }
}

/// Constant states separated by waves travelling at `speeds` from
/// `origin_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilaritySolution<const M: usize> {
    pub origin_x: f64,
    /// Left to right; one more than `speeds`.
    pub states: Vec<State<M>>,
    pub speeds: Vec<f64>,
    pub alphas: Vec<f64>,
    /// Leftmost state. For boundary problems, the trace at the boundary.
    pub trace: State<M>,
}

/// Admissible boundary-layer jump directions.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLayerBasis<const M: usize> {
    pub vectors: Vec<State<M>>,
    pub k: usize,
}

fn dvec<const M: usize>(u: &State<M>) -> DVector<f64> {
    DVector::from_iterator(M, u.iter().cloned())
}

fn svec<const M: usize>(v: &DVector<f64>) -> State<M> {
    State::<M>::from_fn(|i, _| v[i])
}

/// Solves `U⁻ + Σ αᵢ Rᵢ = U⁺` and builds the fan centered at `x = 0`.
pub fn solve_linear_riemann<const M: usize>(
    sys: &LinearSystem<M>,
    u_minus: &State<M>,
    u_plus: &State<M>,
) -> Result<SimilaritySolution<M>> {
    let r = to_dmatrix(&sys.eigen.right_vectors);
    let alphas = solve_checked(&r, &dvec(&(u_plus - u_minus)), "eigenvector matrix")?;

    let mut states = Vec::with_capacity(M + 1);
    let mut current = *u_minus;
    states.push(current);
    for i in 0..M {
        current += sys.eigen.right_vectors.column(i) * alphas[i];
        states.push(current);
    }
    // land exactly on the right datum
    states[M] = *u_plus;

    Ok(SimilaritySolution {
        origin_x: 0.0,
        states,
        speeds: sys.eigen.lambdas.iter().cloned().collect(),
        alphas: alphas.iter().cloned().collect(),
        trace: *u_minus,
    })
}

impl<const M: usize> SimilaritySolution<M> {
    pub fn with_origin(mut self, origin_x: f64) -> Self {
        self.origin_x = origin_x;
        self
    }

    /// State at `(x, t)`. On a wave the right-adjacent state is returned.
    pub fn eval(&self, x: f64, t: f64) -> State<M> {
        let dx = x - self.origin_x;
        if t <= 0.0 {
            return if dx < 0.0 {
                self.states[0]
            } else {
                self.states[self.states.len() - 1]
            };
        }
        let xi = dx / t;
        let slot = self.speeds.iter().position(|&s| xi < s).unwrap_or(self.speeds.len());
        self.states[slot]
    }
}

/// See [`SimilaritySolution::eval`].
pub fn eval_similarity<const M: usize>(sol: &SimilaritySolution<M>, x: f64, t: f64) -> State<M> {
    sol.eval(x, t)
}

fn is_identity<const M: usize>(b: &Matrix<M>) -> bool {
    (b - Matrix::<M>::identity()).amax() <= 1e-14
}

/// Vectors spanning the admissible jumps `U_l − Ū` of boundary layers for
/// `B Ẇ = A (W − Ū)`.
///
/// Supported viscosity matrices: the identity (eigenvectors of the incoming
/// fields), any invertible `B` (stable space of `B⁻¹A`), and singular `B`
/// whose null directions are coordinate axes with zero rows and columns. In
/// the singular case the zero rows are algebraic constraints eliminated
/// before taking the stable space of the reduced system.
pub fn boundary_layer_basis<const M: usize>(sys: &LinearSystem<M>) -> Result<BoundaryLayerBasis<M>> {
    sys.eigen.check_noncharacteristic(SPECTRAL_GAP_TOL)?;
    let k = sys.eigen.k_negative;
    if k == 0 {
        return Ok(BoundaryLayerBasis { vectors: Vec::new(), k });
    }

    if is_identity(&sys.b) {
        let vectors = (0..k).map(|i| sys.eigen.right_vectors.column(i).into_owned()).collect();
        return Ok(BoundaryLayerBasis { vectors, k });
    }

    let a = to_dmatrix(&sys.a);
    let b = to_dmatrix(&sys.b);
    let cond_b = crate::linalg::condition_number(&b);
    let raw = if cond_b.is_finite() && cond_b < SINGULAR_CONDITION {
        let b_inv = b.try_inverse().ok_or_else(|| Error::Singular {
            context: "viscosity matrix".into(),
            condition: cond_b,
        })?;
        stable_subspace(&(b_inv * a))?
    } else {
        reduced_stable_space(&a, &b)?
    };

    if raw.len() != k {
        return Err(Error::UnsupportedViscosity(format!(
            "admissible space has dimension {} but {} characteristics enter the domain",
            raw.len(),
            k
        )));
    }
    let vectors = canonical_basis(&raw).iter().map(svec::<M>).collect();
    Ok(BoundaryLayerBasis { vectors, k })
}

/// Stable space for singular `B` with zero rows/columns on an index set `Z`.
fn reduced_stable_space(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<DVector<f64>>> {
    let n = a.nrows();
    let scale = b.amax().max(f64::MIN_POSITIVE);
    let is_zero_line = |i: usize| (0..n).all(|j| b[(i, j)].abs() <= 1e-14 * scale && b[(j, i)].abs() <= 1e-14 * scale);
    let zero: Vec<usize> = (0..n).filter(|&i| is_zero_line(i)).collect();
    let rest: Vec<usize> = (0..n).filter(|&i| !is_zero_line(i)).collect();
    if zero.is_empty() || rest.is_empty() {
        return Err(Error::UnsupportedViscosity(
            "singular viscosity matrix without a zero row/column block".into(),
        ));
    }

    let sub = |rows: &[usize], cols: &[usize], m: &DMatrix<f64>| {
        DMatrix::from_fn(rows.len(), cols.len(), |r, c| m[(rows[r], cols[c])])
    };
    let b_rr = sub(&rest, &rest, b);
    let cond = crate::linalg::condition_number(&b_rr);
    if !cond.is_finite() || cond > SINGULAR_CONDITION {
        return Err(Error::UnsupportedViscosity(format!(
            "viscous block is singular (condition {cond:.3e})"
        )));
    }
    let a_zz = sub(&zero, &zero, a);
    let a_zr = sub(&zero, &rest, a);
    let a_rz = sub(&rest, &zero, a);
    let a_rr = sub(&rest, &rest, a);
    let cond_a = crate::linalg::condition_number(&a_zz);
    if !cond_a.is_finite() || cond_a > SINGULAR_CONDITION {
        return Err(Error::UnsupportedViscosity(format!(
            "algebraic constraint block of A is singular (condition {cond_a:.3e})"
        )));
    }
    let a_zz_inv = a_zz.try_inverse().expect("checked condition");
    // rows in Z:   0 = A_zz D_z + A_zr D_r  =>  D_z = -A_zz⁻¹ A_zr D_r
    let elimination = -(&a_zz_inv * &a_zr);
    let schur = a_rr + a_rz * &elimination;
    let reduced = b_rr.try_inverse().expect("checked condition") * schur;

    Ok(stable_subspace(&reduced)?
        .into_iter()
        .map(|w| {
            let dz = &elimination * &w;
            let mut full = DVector::zeros(n);
            for (i, &idx) in zero.iter().enumerate() {
                full[idx] = dz[i];
            }
            for (i, &idx) in rest.iter().enumerate() {
                full[idx] = w[i];
            }
            full
        })
        .collect())
}

/// Solves `U_l + Σ_{i≤k} αᵢ R̃ᵢ + Σ_{i>k} αᵢ Rᵢ = U_0` and builds the
/// outgoing fan from `x_boundary`.
pub fn solve_boundary_riemann<const M: usize>(
    sys: &LinearSystem<M>,
    u_l: &State<M>,
    u_0: &State<M>,
    x_boundary: f64,
) -> Result<SimilaritySolution<M>> {
    let basis = boundary_layer_basis(sys)?;
    let k = basis.k;
    let mut columns: Vec<State<M>> = basis.vectors.clone();
    columns.extend((k..M).map(|i| sys.eigen.right_vectors.column(i).into_owned()));
    let mat = DMatrix::from_fn(M, M, |r, c| columns[c][r]);
    let alphas = solve_checked(&mat, &dvec(&(u_0 - u_l)), "boundary basis").map_err(|e| match e {
        Error::Singular { condition, .. } => Error::Singular {
            context: "combined boundary-layer/outgoing basis (model error)".into(),
            condition,
        },
        other => other,
    })?;

    let mut trace = *u_l;
    for i in 0..k {
        trace += columns[i] * alphas[i];
    }
    let mut states = vec![trace];
    let mut current = trace;
    for i in k..M {
        current += columns[i] * alphas[i];
        states.push(current);
    }
    *states.last_mut().expect("non-empty") = *u_0;

    Ok(SimilaritySolution {
        origin_x: x_boundary,
        states,
        speeds: sys.eigen.lambdas.iter().skip(k).cloned().collect(),
        alphas: alphas.iter().cloned().collect(),
        trace,
    })
}

/// Boundary Riemann fan at `x_boundary` composed with an interior Riemann
/// fan at `x_jump`, valid until the two fans meet.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryAndInteriorFans<const M: usize> {
    pub boundary: SimilaritySolution<M>,
    pub interior: SimilaritySolution<M>,
    pub interaction_time: f64,
}

impl<const M: usize> BoundaryAndInteriorFans<M> {
    /// Dirichlet datum `u_l` at `x_boundary`; Cauchy data `u_minus` /
    /// `u_plus` on either side of `x_jump`.
    pub fn new(
        sys: &LinearSystem<M>,
        u_l: &State<M>,
        x_boundary: f64,
        u_minus: &State<M>,
        u_plus: &State<M>,
        x_jump: f64,
    ) -> Result<Self> {
        if x_jump <= x_boundary {
            return Err(Error::InvalidArgument(
                "interior jump must lie inside the domain".into(),
            ));
        }
        let boundary = solve_boundary_riemann(sys, u_l, u_minus, x_boundary)?;
        let interior = solve_linear_riemann(sys, u_minus, u_plus)?.with_origin(x_jump);
        let fastest_boundary = boundary.speeds.last().copied().unwrap_or(f64::NEG_INFINITY);
        let slowest_interior = interior.speeds[0];
        let interaction_time = if fastest_boundary > slowest_interior {
            (x_jump - x_boundary) / (fastest_boundary - slowest_interior)
        } else {
            f64::INFINITY
        };
        Ok(Self {
            boundary,
            interior,
            interaction_time,
        })
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<State<M>> {
        if t < 0.0 {
            return Err(Error::InvalidArgument(format!("negative time {t}")));
        }
        if x < self.boundary.origin_x {
            return Err(Error::InvalidArgument(format!("x = {x} lies outside the domain")));
        }
        if t >= self.interaction_time {
            return Err(Error::BeyondValidity {
                t,
                limit: self.interaction_time,
            });
        }
        let split = self.interior.origin_x + self.interior.speeds[0] * t;
        if x < split {
            Ok(self.boundary.eval(x, t))
        } else {
            Ok(self.interior.eval(x, t))
        }
    }
}

/// Vanishing-viscosity limit for the linearized shallow water system with
/// `h̃ = 2, ũ = 1, g = 1`, Cauchy data `(3,1) | (1,1)` at `x = 0` and
/// Dirichlet datum `(2,1)` at `x = −1`.
pub fn exact_sw_solution(viscosity: SwViscosity, x: f64, t: f64) -> Result<(f64, f64)> {
    let fans = reference_sw_fans(viscosity)?;
    let u = fans.eval(x, t)?;
    Ok((u[0], u[1]))
}

/// The fan pair behind [`exact_sw_solution`].
pub fn reference_sw_fans(viscosity: SwViscosity) -> Result<BoundaryAndInteriorFans<2>> {
    let params = SwLinParams::reference();
    let sys = LinearSystem::new(crate::swlin::sw_matrix(&params), crate::swlin::sw_viscosity(viscosity))?;
    BoundaryAndInteriorFans::new(
        &sys,
        &State::<2>::new(2.0, 1.0),
        -1.0,
        &State::<2>::new(3.0, 1.0),
        &State::<2>::new(1.0, 1.0),
        0.0,
    )
}
