//! Seeded randomized checks of the flux identities.

use cnd_core::euler::{log_mean, EulerModel, Primitive};
use cnd_core::swlin::{sw_ec_flux, sw_entropy_pair, sw_matrix, SwLinParams, SwViscosity};
use cnd_core::{HyperbolicModel, State};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    pub pairs: usize,
    /// `max |[V]ᵀF* − [Ψ]|` for the shallow water flux.
    pub sw_ec_residual: f64,
    /// Same for the Euler flux, relative to `max(|[V]|ᵀ|F*|, |[Ψ]|, 1)`.
    pub euler_ec_residual: f64,
    /// Smallest `[V]ᵀ D` over all models and pairs.
    pub min_interface_production: f64,
    /// Largest relative deviation of the logarithmic mean from its closed form
    /// (pairs away from the series branch).
    pub log_mean_deviation: f64,
}

/// Euler pairs have density and pressure ratios within `[0.1, 10]`.
pub fn run_verification(seed: u64, pairs: usize) -> VerifyReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let params = SwLinParams::reference();
    let a = sw_matrix(&params);
    let sw_models = [
        params.model(SwViscosity::Laplacian).expect("reference parameters"),
        params.model(SwViscosity::Eddy).expect("reference parameters"),
    ];
    let gas = EulerModel::default();

    let mut report = VerifyReport {
        pairs,
        sw_ec_residual: 0.0,
        euler_ec_residual: 0.0,
        min_interface_production: f64::INFINITY,
        log_mean_deviation: 0.0,
    };
    for _ in 0..pairs {
        let l = State::<2>::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let r = State::<2>::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let (el, er) = (sw_entropy_pair(&params, &l), sw_entropy_pair(&params, &r));
        let res = ((er.v - el.v).dot(&sw_ec_flux(&a, &l, &r)) - (er.psi - el.psi)).abs();
        report.sw_ec_residual = report.sw_ec_residual.max(res);
        let c = rng.gen_range(0.0..5.0);
        for m in &sw_models {
            let p = (m.entropy_vars(&r) - m.entropy_vars(&l)).dot(&m.interface_diffusion(&l, &r, c));
            report.min_interface_production = report.min_interface_production.min(p);
        }

        let rho_l: f64 = rng.gen_range(0.1..10.0);
        let p_l: f64 = rng.gen_range(0.1..10.0);
        let rho_r = rho_l * 10f64.powf(rng.gen_range(-1.0..1.0));
        let p_r = p_l * 10f64.powf(rng.gen_range(-1.0..1.0));
        let ul = gas
            .to_conserved(&Primitive::new(rho_l, rng.gen_range(-3.0..3.0), p_l))
            .expect("positive density and pressure");
        let ur = gas
            .to_conserved(&Primitive::new(rho_r, rng.gen_range(-3.0..3.0), p_r))
            .expect("positive density and pressure");
        let dv = gas.entropy_vars(&ur) - gas.entropy_vars(&ul);
        let dpsi = gas.entropy_potential(&ur) - gas.entropy_potential(&ul);
        let f = gas.ec_flux(&ul, &ur);
        let scale = dv.abs().dot(&f.abs()).max(dpsi.abs()).max(1.0);
        report.euler_ec_residual = report.euler_ec_residual.max((dv.dot(&f) - dpsi).abs() / scale);
        let p = dv.dot(&gas.interface_diffusion(&ul, &ur, rng.gen_range(0.0..5.0)));
        report.min_interface_production = report.min_interface_production.min(p);

        let (x, y): (f64, f64) = (rng.gen_range(1e-3..1e3), rng.gen_range(1e-3..1e3));
        if (x - y).abs() > 1e-3 * (x + y) {
            let exact = (y - x) / (y.ln() - x.ln());
            let m = log_mean(x, y).expect("positive inputs");
            report.log_mean_deviation = report.log_mean_deviation.max((m - exact).abs() / exact);
        }
    }
    report
}
