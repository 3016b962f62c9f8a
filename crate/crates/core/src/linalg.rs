//! Small dense linear-algebra helpers built on nalgebra: real spectra of
//! strictly hyperbolic matrices, stable invariant subspaces and
//! condition-checked solves.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{Eigensystem, Matrix, State};

/// Real part threshold below which an eigenvalue counts as stable.
pub const STABLE_REAL_PART_TOL: f64 = -1e-10;

/// Condition numbers above this are treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

pub fn to_dmatrix<const M: usize>(a: &Matrix<M>) -> DMatrix<f64> {
    DMatrix::from_fn(M, M, |r, c| a[(r, c)])
}

/// Ratio of extreme singular values.
pub fn condition_number(a: &DMatrix<f64>) -> f64 {
    let sv = a.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves `a x = b`, reporting near-singular systems with a condition
/// estimate.
pub fn solve_checked(a: &DMatrix<f64>, b: &DVector<f64>, context: &str) -> Result<DVector<f64>> {
    let condition = condition_number(a);
    if !condition.is_finite() || condition > SINGULAR_CONDITION {
        return Err(Error::Singular {
            context: context.to_string(),
            condition,
        });
    }
    a.clone().lu().solve(b).ok_or_else(|| Error::Singular {
        context: context.to_string(),
        condition,
    })
}

/// Scales `v` so that its first significant entry is 1, or to unit length
/// when the first entry vanishes.
pub fn canonical_direction(v: &DVector<f64>) -> DVector<f64> {
    let norm = v.norm();
    if v[0].abs() > 1e-8 * norm {
        v / v[0]
    } else {
        let pivot = v.iter().find(|x| x.abs() > 1e-8 * norm).copied().unwrap_or(1.0);
        v / (norm * pivot.signum())
    }
}

/// Unit vector spanning the (numerical) null space of a rank-deficient
/// matrix.
fn null_vector(a: &DMatrix<f64>) -> DVector<f64> {
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (idx, _) =
        svd.singular_values.iter().enumerate().fold(
            (0, f64::INFINITY),
            |best, (i, &s)| if s < best.1 { (i, s) } else { best },
        );
    v_t.row(idx).transpose()
}

/// Eigenvalues (ascending) and right eigenvectors of a matrix with a real,
/// simple spectrum.
pub fn real_spectrum(a: &DMatrix<f64>) -> Result<(Vec<f64>, Vec<DVector<f64>>)> {
    let n = a.nrows();
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let eigs = a.clone().complex_eigenvalues();
    let mut lambdas = Vec::with_capacity(n);
    for z in eigs.iter() {
        if z.im.abs() > 1e-10 * scale {
            return Err(Error::NotHyperbolic(format!("complex eigenvalue {} + {}i", z.re, z.im)));
        }
        lambdas.push(z.re);
    }
    lambdas.sort_by(f64::total_cmp);
    for w in lambdas.windows(2) {
        if w[1] - w[0] <= 1e-12 * scale {
            return Err(Error::NotHyperbolic(format!("repeated eigenvalue {}", w[0])));
        }
    }
    let vectors = lambdas
        .iter()
        .map(|&l| {
            let shifted = a - DMatrix::identity(n, n) * l;
            canonical_direction(&null_vector(&shifted))
        })
        .collect();
    Ok((lambdas, vectors))
}

/// Eigensystem of a constant matrix.
pub fn matrix_eigensystem<const M: usize>(a: &Matrix<M>) -> Result<Eigensystem<M>> {
    let (lambdas, vectors) = real_spectrum(&to_dmatrix(a))?;
    let lam = State::<M>::from_fn(|i, _| lambdas[i]);
    let r = Matrix::<M>::from_fn(|row, col| vectors[col][row]);
    Eigensystem::new(lam, r)
}

/// Basis of the invariant subspace of `m` belonging to eigenvalues with
/// real part below [`STABLE_REAL_PART_TOL`] (generalized eigenvectors
/// included).
///
/// Computed as the range of `p_u(m)`, where `p_u` is the factor of the
/// characteristic polynomial carrying the remaining eigenvalues.
pub fn stable_subspace(m: &DMatrix<f64>) -> Result<Vec<DVector<f64>>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let eigs = m.clone().complex_eigenvalues();
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let stable = eigs.iter().filter(|z| z.re < STABLE_REAL_PART_TOL).count();
    if stable == 0 {
        return Ok(Vec::new());
    }
    if stable == n {
        return Ok((0..n)
            .map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect());
    }

    let id = DMatrix::<f64>::identity(n, n);
    let mut projector = id.clone();
    for z in eigs.iter().filter(|z| z.re >= STABLE_REAL_PART_TOL) {
        let factor = if z.im.abs() <= 1e-12 * scale {
            m - &id * z.re
        } else if z.im > 0.0 {
            m * m - m * (2.0 * z.re) + &id * z.norm_sqr()
        } else {
            continue;
        };
        projector *= factor;
        let norm = projector.norm();
        if norm == 0.0 {
            return Err(Error::Singular {
                context: "stable-space projector".into(),
                condition: f64::INFINITY,
            });
        }
        projector /= norm;
    }

    let svd = projector.svd(true, false);
    let u = svd.u.expect("requested U");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma_max = svd.singular_values[order[0]];
    if stable < n && svd.singular_values[order[stable]] > 1e-8 * sigma_max {
        return Err(Error::Singular {
            context: "stable-space rank mismatch".into(),
            condition: sigma_max / svd.singular_values[order[stable - 1]],
        });
    }
    Ok(order[..stable].iter().map(|&i| u.column(i).into_owned()).collect())
}

/// Rewrites a basis so that its leading `k x k` block is the identity when
/// that block is well conditioned; otherwise normalizes each vector.
pub fn canonical_basis(vectors: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let k = vectors.len();
    if k == 0 {
        return Vec::new();
    }
    if k == 1 {
        return vec![canonical_direction(&vectors[0])];
    }
    let n = vectors[0].len();
    let q = DMatrix::from_fn(n, k, |r, c| vectors[c][r]);
    let top = q.rows(0, k).into_owned();
    if condition_number(&top) < 1e8 {
        if let Some(inv) = top.try_inverse() {
            let b = q * inv;
            return (0..k).map(|c| b.column(c).into_owned()).collect();
        }
    }
    vectors.iter().map(canonical_direction).collect()
}
