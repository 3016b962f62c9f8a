//! Compressible Euler equations for an ideal gas, with the thermodynamic
//! entropy pair, the Ismail-Roe entropy-conservative flux and the
//! Navier-Stokes shaped interface diffusion.

use crate::error::{Error, Result};
use crate::model::{Eigensystem, HyperbolicModel, Matrix, State};

/// Ratio of specific heats used when none is configured.
pub const DEFAULT_GAMMA: f64 = 1.4;

/// Relative gap below which [`log_mean`] switches to its series expansion.
const LOG_MEAN_SERIES_SWITCH: f64 = 1e-4;

/// `(ρ, u, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl Primitive {
    pub fn new(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, p }
    }
}

/// `(√(ρ/p), √(ρ/p) u, √(ρp))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamVector {
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
}

impl ParamVector {
    pub fn from_primitive(w: &Primitive) -> Self {
        let z1 = (w.rho / w.p).sqrt();
        Self {
            z1,
            z2: z1 * w.u,
            z3: (w.rho * w.p).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerModel {
    pub gamma: f64,
}

impl Default for EulerModel {
    fn default() -> Self {
        Self { gamma: DEFAULT_GAMMA }
    }
}

fn check_primitive(w: &Primitive) -> Result<()> {
    if !(w.rho.is_finite() && w.u.is_finite() && w.p.is_finite()) {
        return Err(Error::Inadmissible(format!("non-finite state {w:?}")));
    }
    if w.rho <= 0.0 {
        return Err(Error::Inadmissible(format!("density {} is not positive", w.rho)));
    }
    if w.p <= 0.0 {
        return Err(Error::Inadmissible(format!("pressure {} is not positive", w.p)));
    }
    Ok(())
}

impl EulerModel {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Self { gamma })
    }

    /// `(ρ, ρu, E)` with `E = p/(γ−1) + ½ρu²`.
    pub fn to_conserved(&self, w: &Primitive) -> Result<State<3>> {
        check_primitive(w)?;
        Ok(self.conserved_unchecked(w))
    }

    fn conserved_unchecked(&self, w: &Primitive) -> State<3> {
        State::<3>::new(w.rho, w.rho * w.u, w.p / (self.gamma - 1.0) + 0.5 * w.rho * w.u * w.u)
    }

    pub fn to_primitive(&self, u: &State<3>) -> Result<Primitive> {
        let w = self.primitive_unchecked(u);
        check_primitive(&w)?;
        Ok(w)
    }

    fn primitive_unchecked(&self, u: &State<3>) -> Primitive {
        let rho = u[0];
        let vel = u[1] / rho;
        let p = (self.gamma - 1.0) * (u[2] - 0.5 * rho * vel * vel);
        Primitive { rho, u: vel, p }
    }

    pub fn sound_speed(&self, w: &Primitive) -> f64 {
        (self.gamma * w.p / w.rho).sqrt()
    }

    /// `θ = p / ((γ−1) ρ)`.
    pub fn temperature(&self, w: &Primitive) -> f64 {
        w.p / ((self.gamma - 1.0) * w.rho)
    }

    /// Thermodynamic entropy `s = log p − γ log ρ`.
    pub fn specific_entropy(&self, w: &Primitive) -> f64 {
        w.p.ln() - self.gamma * w.rho.ln()
    }

    pub fn flux_checked(&self, u: &State<3>) -> Result<State<3>> {
        self.check_state(u)?;
        Ok(self.flux(u))
    }

    pub fn eigen_checked(&self, u: &State<3>) -> Result<Eigensystem<3>> {
        self.check_state(u)?;
        self.eigen(u)
    }
}

impl HyperbolicModel<3> for EulerModel {
    fn check_state(&self, u: &State<3>) -> Result<()> {
        check_primitive(&self.primitive_unchecked(u))
    }

    fn flux(&self, u: &State<3>) -> State<3> {
        let w = self.primitive_unchecked(u);
        State::<3>::new(u[1], u[1] * w.u + w.p, (u[2] + w.p) * w.u)
    }

    fn eigen(&self, u: &State<3>) -> Result<Eigensystem<3>> {
        let w = self.to_primitive(u)?;
        let c = self.sound_speed(&w);
        let h = (u[2] + w.p) / w.rho;
        let v = w.u;
        let lambdas = State::<3>::new(v - c, v, v + c);
        #[rustfmt::skip]
        let r = Matrix::<3>::new(
            1.0,         1.0,           1.0,
            v - c,       v,             v + c,
            h - v * c,   0.5 * v * v,   h + v * c,
        );
        Eigensystem::new(lambdas, r)
    }

    fn max_abs_eigenvalue(&self, u: &State<3>) -> Result<f64> {
        let w = self.to_primitive(u)?;
        Ok(w.u.abs() + self.sound_speed(&w))
    }

    /// `S = −ρ s / (γ−1)`.
    fn entropy(&self, u: &State<3>) -> f64 {
        let w = self.primitive_unchecked(u);
        -w.rho * self.specific_entropy(&w) / (self.gamma - 1.0)
    }

    fn entropy_flux(&self, u: &State<3>) -> f64 {
        let w = self.primitive_unchecked(u);
        w.u * self.entropy(u)
    }

    fn entropy_vars(&self, u: &State<3>) -> State<3> {
        let w = self.primitive_unchecked(u);
        let g = self.gamma;
        let s = self.specific_entropy(&w);
        let beta = w.rho / w.p;
        State::<3>::new((g - s) / (g - 1.0) - 0.5 * beta * w.u * w.u, beta * w.u, -beta)
    }

    /// Reduces to `ρu`.
    fn entropy_potential(&self, u: &State<3>) -> f64 {
        u[1]
    }

    /// Navier-Stokes viscosity with unit coefficients:
    /// `(0, u_x, (u²/2)_x + θ_x) = B(U) U_x`.
    fn viscosity_matrix(&self, u: &State<3>) -> Matrix<3> {
        let w = self.primitive_unchecked(u);
        let (rho, v) = (w.rho, w.u);
        #[rustfmt::skip]
        let b = Matrix::<3>::new(
            0.0,                 0.0,        0.0,
            -v / rho,            1.0 / rho,  0.0,
            -u[2] / (rho * rho), 0.0,        1.0 / rho,
        );
        b
    }

    fn ec_flux(&self, left: &State<3>, right: &State<3>) -> State<3> {
        let zl = ParamVector::from_primitive(&self.primitive_unchecked(left));
        let zr = ParamVector::from_primitive(&self.primitive_unchecked(right));
        ismail_roe_flux(&zl, &zr, self.gamma)
    }

    fn interface_diffusion(&self, left: &State<3>, right: &State<3>, c_max: f64) -> State<3> {
        let wl = self.primitive_unchecked(left);
        let wr = self.primitive_unchecked(right);
        euler_ns_interface_diffusion((wl.u, self.temperature(&wl)), (wr.u, self.temperature(&wr)), c_max)
    }

    fn velocity_temperature(&self, u: &State<3>) -> Option<(f64, f64)> {
        let w = self.primitive_unchecked(u);
        Some((w.u, self.temperature(&w)))
    }
}

/// `(b − a) / (log b − log a)`, with a series branch near `a = b`.
pub fn log_mean(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "log_mean needs positive inputs, got ({a}, {b})"
        )));
    }
    Ok(log_mean_unchecked(a, b))
}

fn log_mean_unchecked(a: f64, b: f64) -> f64 {
    let f = (b - a) / (a + b);
    if f.abs() < LOG_MEAN_SERIES_SWITCH {
        // log(b/a) = 2f (1 + f²/3 + f⁴/5 + f⁶/7 + …)
        let u = f * f;
        let series = 1.0 + u / 3.0 + u * u / 5.0 + u * u * u / 7.0;
        0.5 * (a + b) / series
    } else {
        (b - a) / (b.ln() - a.ln())
    }
}

fn ismail_roe_flux(zl: &ParamVector, zr: &ParamVector, gamma: f64) -> State<3> {
    let z1_avg = 0.5 * (zl.z1 + zr.z1);
    let z2_avg = 0.5 * (zl.z2 + zr.z2);
    let z3_avg = 0.5 * (zl.z3 + zr.z3);
    let z1_log = log_mean_unchecked(zl.z1, zr.z1);
    let z3_log = log_mean_unchecked(zl.z3, zr.z3);

    let velocity = z2_avg / z1_avg;
    let f1 = z2_avg * z3_log;
    let f2 = z3_avg / z1_avg + velocity * f1;
    let f3 = 0.5 * velocity * ((gamma + 1.0) / (gamma - 1.0) * z3_log / z1_log + f2);
    State::<3>::new(f1, f2, f3)
}

/// `c_max (0, Δu, ½Δ(u²) + Δθ)` from left/right `(u, θ)` pairs.
pub fn euler_ns_interface_diffusion(left: (f64, f64), right: (f64, f64), c_max: f64) -> State<3> {
    let (ul, tl) = left;
    let (ur, tr) = right;
    State::<3>::new(0.0, c_max * (ur - ul), c_max * (0.5 * (ur * ur - ul * ul) + (tr - tl)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> EulerModel {
        EulerModel::default()
    }

    fn cons(rho: f64, u: f64, p: f64) -> State<3> {
        gas().to_conserved(&Primitive::new(rho, u, p)).unwrap()
    }

    #[test]
    fn primitive_conversion_examples() {
        assert!((cons(3.0, 1.0, 3.0) - State::<3>::new(3.0, 3.0, 9.0)).amax() < 1e-14);
        assert!((cons(1.0, 1.0, 1.0) - State::<3>::new(1.0, 1.0, 3.0)).amax() < 1e-14);
        assert!((cons(1.0, 0.0, 1.0) - State::<3>::new(1.0, 0.0, 2.5)).amax() < 1e-14);
    }

    #[test]
    fn inadmissible_states() {
        let g = gas();
        assert!(g.to_conserved(&Primitive::new(0.0, 1.0, 1.0)).is_err());
        assert!(g.to_conserved(&Primitive::new(1.0, 1.0, -1.0)).is_err());
        assert!(g.flux_checked(&State::<3>::new(1.0, 0.0, -1.0)).is_err());
        assert!(g.eigen_checked(&State::<3>::new(-1.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn flux_examples() {
        let g = gas();
        let f = g.flux_checked(&cons(1.0, 1.0, 1.0)).unwrap();
        assert!((f - State::<3>::new(1.0, 2.0, 4.0)).amax() < 1e-14);
        let f = g.flux_checked(&cons(2.0, 0.0, 0.7)).unwrap();
        assert!((f - State::<3>::new(0.0, 0.7, 0.0)).amax() < 1e-14);
        let f = g.flux_checked(&cons(3.0, 1.0, 3.0)).unwrap();
        assert!((f - State::<3>::new(3.0, 6.0, 12.0)).amax() < 1e-13);
    }

    #[test]
    fn eigenvalues() {
        let g = gas();
        let c = 1.4f64.sqrt();
        let eig = g.eigen_checked(&cons(1.0, 1.0, 1.0)).unwrap();
        assert!((eig.lambdas - State::<3>::new(1.0 - c, 1.0, 1.0 + c)).amax() < 1e-14);
        assert!((eig.lambdas[0] + 0.18322).abs() < 1e-5);

        let eig = g.eigen_checked(&cons(1.0, 0.0, 1.0)).unwrap();
        assert!((eig.lambdas[0] + eig.lambdas[2]).abs() < 1e-15 && eig.lambdas[1] == 0.0);

        let eig = g.eigen_checked(&cons(3.0, 1.0, 3.0)).unwrap();
        assert!((eig.lambdas - State::<3>::new(1.0 - c, 1.0, 1.0 + c)).amax() < 1e-14);
        assert!((g.max_abs_eigenvalue(&cons(1.0, 1.0, 1.0)).unwrap() - 2.183216).abs() < 1e-6);
    }

    #[test]
    fn eigenvectors_diagonalize_jacobian() {
        let g = gas();
        let u = cons(1.3, -0.4, 2.1);
        let eig = g.eigen(&u).unwrap();
        let h = 1e-7;
        let jac = Matrix::<3>::from_fn(|r, c| {
            let mut up = u;
            let mut um = u;
            up[c] += h;
            um[c] -= h;
            (g.flux(&up)[r] - g.flux(&um)[r]) / (2.0 * h)
        });
        for i in 0..3 {
            let r = eig.right_vectors.column(i);
            let res = jac * r - r * eig.lambdas[i];
            assert!(res.amax() < 1e-6, "eigenpair {i}: {res:?}");
        }
    }

    #[test]
    fn entropy_examples() {
        let g = gas();
        let u = cons(1.0, 0.3, 1.0);
        assert_eq!(g.entropy(&u), 0.0);
        let u = cons(2.0, -0.7, 0.5);
        assert!((g.entropy_flux(&u) - (-0.7) * g.entropy(&u)).abs() < 1e-14);
        let u = cons(1.0, 1.0, 1.0);
        let v = g.entropy_vars(&u);
        let generic = v.dot(&g.flux(&u)) - g.entropy_flux(&u);
        assert!((generic - 1.0).abs() < 1e-13);
        assert_eq!(g.entropy_potential(&u), 1.0);
    }

    #[test]
    fn log_mean_examples() {
        assert_eq!(log_mean(2.0, 2.0).unwrap(), 2.0);
        let e = std::f64::consts::E;
        assert!((log_mean(1.0, e).unwrap() - (e - 1.0)).abs() < 1e-15);
        let lm = log_mean(1.0, 1.0 + 1e-13).unwrap();
        assert!((lm - (1.0 + 5e-14)).abs() <= 1e-15);
        assert!(log_mean(0.0, 1.0).is_err());
        assert!(log_mean(1.0, -2.0).is_err());
    }

    #[test]
    fn log_mean_branches_agree_near_switch() {
        for &gap in &[0.9e-4, 1.1e-4] {
            let a: f64 = 1.7;
            let b = a * (1.0 + gap) / (1.0 - gap);
            let exact = (b - a) / (b / a).ln();
            assert!((log_mean(a, b).unwrap() - exact).abs() < 1e-12 * a);
        }
    }

    #[test]
    fn ec_flux_consistency() {
        let g = gas();
        for u in [cons(1.0, 1.0, 1.0), cons(3.0, -2.0, 0.1), cons(0.2, 0.0, 5.0)] {
            let f = g.ec_flux(&u, &u);
            assert!((f - g.flux(&u)).amax() < 1e-13 * g.flux(&u).amax().max(1.0));
        }
    }

    #[test]
    fn interface_diffusion_examples() {
        assert_eq!(
            euler_ns_interface_diffusion((1.0, 2.0), (1.0, 2.0), 3.0),
            State::<3>::zeros()
        );
        assert_eq!(
            euler_ns_interface_diffusion((1.0, 2.0), (1.0, 2.5), 2.0),
            State::<3>::new(0.0, 0.0, 1.0)
        );
        let d = euler_ns_interface_diffusion((1.0, 2.5), (1.2, 2.5), 1.0);
        assert!((d - State::<3>::new(0.0, 0.2, 0.22)).amax() < 1e-15);
    }

    #[test]
    fn viscosity_matrix_reproduces_ns_gradients() {
        let g = gas();
        let u = cons(1.4, 0.6, 2.2);
        let du = State::<3>::new(0.3, -0.1, 0.7);
        let h = 1e-6;
        let vt = |s: &State<3>| g.velocity_temperature(s).unwrap();
        let (vp, tp) = vt(&(u + du * h));
        let (vm, tm) = vt(&(u - du * h));
        let dv = (vp - vm) / (2.0 * h);
        let dt = (tp - tm) / (2.0 * h);
        let v = vt(&u).0;
        let expected = State::<3>::new(0.0, dv, v * dv + dt);
        assert!((g.viscosity_matrix(&u) * du - expected).amax() < 1e-8);
    }
}
