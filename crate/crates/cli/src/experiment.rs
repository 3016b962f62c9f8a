//! Runs the schemes and viscous references of a config and collects the
//! results as a table sampled on the main grid.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use cnd_core::diagnostics::{conservation_defect, entropy_residual, scalar_error_norms, ErrorReport};
use cnd_core::euler::{EulerModel, Primitive};
use cnd_core::linear::LinearModel;
use cnd_core::linear_exact::{BoundaryAndInteriorFans, LinearSystem};
use cnd_core::schemes::{SchemeConfig, SchemeKind};
use cnd_core::swlin::{sw_matrix, sw_viscosity, SwLinParams, SwViscosity};
use cnd_core::timeint::{run_to_time, HyperbolicOperator, TimeLoopConfig};
use cnd_core::viscous::{run_viscous, DiffusionKind, ViscousSpec};
use cnd_core::{init_field, make_grid, BoundaryCondition, HyperbolicModel, State, StateField};

use crate::config::{
    scheme_label, BoundaryKind, DiffusionName, ExperimentConfig, InitialKind, ModelKind, SchemeName, SwViscosityName,
    ViscousRunConfig,
};
use crate::csv_io::CsvTable;
use crate::error::CliError;

pub const FULL_SCALE_EPSILON: f64 = 1e-5;
pub const FULL_SCALE_CELLS: i64 = 32_000;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub quiet: bool,
    /// Replace every viscous reference by `ε = 1e-5`, `N = 32000`.
    pub full_scale: bool,
    /// CSV whose columns are attached as `ref_*` columns.
    pub reference: Option<CsvTable>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub label: String,
    pub n_cells: usize,
    pub steps: usize,
    pub conservation_defect: f64,
    /// Largest positive entropy residual at the final time (CND-type and
    /// EC schemes only).
    pub max_entropy_residual: Option<f64>,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub columns: Vec<String>,
    /// One row per cell of the main grid.
    pub rows: Vec<Vec<f64>>,
    pub runs: Vec<RunSummary>,
    pub exact_note: String,
}

impl RunOutput {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.columns.iter().position(|n| n == name)?;
        Some(self.rows.iter().map(|r| r[c]).collect())
    }

    pub fn to_table(&self) -> CsvTable {
        let mut metadata: Vec<String> = self.config.echo().lines().map(|l| format!("config: {l}")).collect();
        for r in &self.runs {
            let entropy = r
                .max_entropy_residual
                .map_or_else(|| "n/a".to_string(), |v| format!("{v:.6e}"));
            metadata.push(format!(
                "run: label={} n_cells={} steps={} conservation_defect={:.6e} max_entropy_residual={}",
                r.label, r.n_cells, r.steps, r.conservation_defect, entropy
            ));
        }
        metadata.push(format!("exact: {}", self.exact_note));
        CsvTable {
            metadata,
            columns: self.columns.clone(),
            rows: self.rows.clone(),
        }
    }

    pub fn to_csv(&self) -> String {
        self.to_table().to_csv()
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        self.to_table().write(path)
    }
}

type Profile<const M: usize> = Arc<dyn Fn(f64) -> State<M> + Send + Sync>;
type Presenter<const M: usize> = Arc<dyn Fn(&State<M>) -> Vec<f64> + Send + Sync>;

/// A model with its data and how to present its states.
struct Case<const M: usize, Mdl> {
    model: Mdl,
    init: Profile<M>,
    left: BoundaryCondition<M>,
    right: BoundaryCondition<M>,
    exact: Option<Profile<M>>,
    exact_note: String,
    physical: DiffusionKind,
    names: &'static [&'static str],
    present: Presenter<M>,
}

fn state_from<const M: usize>(v: &[f64]) -> State<M> {
    State::<M>::from_row_slice(v)
}

fn sw_viscosity_of(cfg: &ExperimentConfig) -> SwViscosity {
    match cfg.model.viscosity.unwrap_or(SwViscosityName::Eddy) {
        SwViscosityName::Eddy => SwViscosity::Eddy,
        SwViscosityName::Laplacian => SwViscosity::Laplacian,
    }
}

fn sw_params(cfg: &ExperimentConfig) -> SwLinParams {
    let r = SwLinParams::reference();
    SwLinParams {
        h_tilde: cfg.model.h_tilde.unwrap_or(r.h_tilde),
        u_tilde: cfg.model.u_tilde.unwrap_or(r.u_tilde),
        g: cfg.model.g.unwrap_or(r.g),
    }
}

/// `sin⁴` bump of unit height on `[center − width/2, center + width/2]`.
pub fn pulse_shape(x: f64, center: f64, width: f64) -> f64 {
    let s = (x - center) / width + 0.5;
    if (0.0..=1.0).contains(&s) {
        (PI * s).sin().powi(4)
    } else {
        0.0
    }
}

fn pulse_geometry(cfg: &ExperimentConfig) -> (f64, f64) {
    let p = &cfg.problem;
    (
        p.center.unwrap_or(0.5 * (p.x_left + p.x_right)),
        p.width.unwrap_or(0.5 * (p.x_right - p.x_left)),
    )
}

fn riemann_states(cfg: &ExperimentConfig) -> (Vec<f64>, Vec<f64>, f64) {
    let p = &cfg.problem;
    let jump = p.jump.unwrap_or(0.0);
    match p.initial {
        InitialKind::Lswinit => (vec![3.0, 1.0], vec![1.0, 1.0], jump),
        InitialKind::Eulinit => (vec![3.0, 1.0, 3.0], vec![1.0, 1.0, 1.0], jump),
        _ => (
            p.left_state.clone().unwrap_or_default(),
            p.right_state.clone().unwrap_or_default(),
            jump,
        ),
    }
}

fn boundary_values(cfg: &ExperimentConfig) -> Option<Vec<f64>> {
    match cfg.problem.boundary {
        BoundaryKind::Ldir => Some(vec![2.0, 1.0]),
        BoundaryKind::Eulbd => Some(vec![2.0, 1.0, 2.0]),
        BoundaryKind::Dirichlet => cfg.problem.boundary_state.clone(),
        BoundaryKind::Open => None,
    }
}

/// Initial profile from raw (model-level) component vectors.
fn raw_profile(cfg: &ExperimentConfig) -> Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync> {
    match cfg.problem.initial {
        InitialKind::Pulse => {
            let bg = cfg.problem.background.clone().unwrap_or_default();
            let amp = cfg.problem.amplitude.clone().unwrap_or_default();
            let (c, w) = pulse_geometry(cfg);
            Arc::new(move |x| {
                let s = pulse_shape(x, c, w);
                bg.iter().zip(&amp).map(|(b, a)| b + a * s).collect()
            })
        }
        _ => {
            let (l, r, jump) = riemann_states(cfg);
            Arc::new(move |x| if x < jump { l.clone() } else { r.clone() })
        }
    }
}

fn sw_case(cfg: &ExperimentConfig) -> Result<Case<2, LinearModel<2>>, CliError> {
    let params = sw_params(cfg);
    let viscosity = sw_viscosity_of(cfg);
    let model = params
        .model(viscosity)
        .map_err(|e| CliError::Config(vec![format!("model: {e}")]))?;
    let raw = raw_profile(cfg);
    let init: Profile<2> = Arc::new(move |x| state_from(&raw(x)));
    let wall = boundary_values(cfg).map(|v| state_from::<2>(&v));
    let left = wall.map_or(BoundaryCondition::Open, BoundaryCondition::constant);
    let (exact, exact_note) = sw_exact(cfg, &params, viscosity, wall);
    Ok(Case {
        model,
        init,
        left,
        right: BoundaryCondition::Open,
        exact,
        exact_note,
        physical: DiffusionKind::MatrixB,
        names: &["h", "u"],
        present: Arc::new(|u| vec![u[0], u[1]]),
    })
}

fn sw_exact(
    cfg: &ExperimentConfig,
    params: &SwLinParams,
    viscosity: SwViscosity,
    wall: Option<State<2>>,
) -> (Option<Profile<2>>, String) {
    if !cfg.output.exact {
        return (None, "disabled".into());
    }
    let t = cfg.t_final();
    let p = &cfg.problem;
    let sys = match LinearSystem::new(sw_matrix(params), sw_viscosity(viscosity)) {
        Ok(s) => s,
        Err(e) => return (None, format!("unavailable ({e})")),
    };
    match p.initial {
        InitialKind::Pulse => {
            let eig = sys.eigensystem().clone();
            let (c, w) = pulse_geometry(cfg);
            let inside = eig
                .lambdas
                .iter()
                .all(|l| c - 0.5 * w + l * t >= p.x_left && c + 0.5 * w + l * t <= p.x_right);
            if !inside {
                return (None, "unavailable (pulse leaves the domain)".into());
            }
            let Ok(r_inv) = eig.inverse_vectors() else {
                return (None, "unavailable (singular eigenvectors)".into());
            };
            let bg = state_from::<2>(p.background.as_deref().unwrap_or(&[0.0, 0.0]));
            let amp = state_from::<2>(p.amplitude.as_deref().unwrap_or(&[0.0, 0.0]));
            let coeffs = r_inv * amp;
            let f: Profile<2> = Arc::new(move |x| {
                let mut u = bg;
                for k in 0..2 {
                    u += eig.right_vectors.column(k) * (coeffs[k] * pulse_shape(x - eig.lambdas[k] * t, c, w));
                }
                u
            });
            (Some(f), "characteristic translation of the pulse".into())
        }
        _ => {
            let Some(u_l) = wall else {
                return (None, "unavailable (no Dirichlet data)".into());
            };
            let (l, r, jump) = riemann_states(cfg);
            match BoundaryAndInteriorFans::new(&sys, &u_l, p.x_left, &state_from(&l), &state_from(&r), jump) {
                Ok(fans) if t < fans.interaction_time => {
                    let note = format!("vanishing-viscosity limit, valid for t < {:.6}", fans.interaction_time);
                    let f: Profile<2> = Arc::new(move |x| fans.eval(x, t).expect("inside validity window"));
                    (Some(f), note)
                }
                Ok(fans) => (
                    None,
                    format!("unavailable (t beyond fan interaction at {:.6})", fans.interaction_time),
                ),
                Err(e) => (None, format!("unavailable ({e})")),
            }
        }
    }
}

fn euler_case(cfg: &ExperimentConfig) -> Result<Case<3, EulerModel>, CliError> {
    let gas = EulerModel::new(cfg.model.gamma.unwrap_or(cnd_core::euler::DEFAULT_GAMMA))
        .map_err(|e| CliError::Config(vec![format!("model.gamma: {e}")]))?;
    let conserved = move |v: &[f64], what: &str| {
        gas.to_conserved(&Primitive::new(v[0], v[1], v[2]))
            .map_err(|e| CliError::Config(vec![format!("{what}: {e}")]))
    };
    let raw = raw_profile(cfg);
    let p = &cfg.problem;
    // admissibility of the configured data is checked up front
    match p.initial {
        InitialKind::Pulse => {
            let (c, _) = pulse_geometry(cfg);
            conserved(&raw(c), "problem.amplitude")?;
            conserved(&raw(p.x_left - 1.0), "problem.background")?;
        }
        _ => {
            let (l, r, _) = riemann_states(cfg);
            conserved(&l, "problem.left_state")?;
            conserved(&r, "problem.right_state")?;
        }
    }
    let init: Profile<3> = Arc::new(move |x| {
        let v = raw(x);
        gas.to_conserved(&Primitive::new(v[0], v[1], v[2]))
            .unwrap_or_else(|_| State::<3>::from_element(f64::NAN))
    });
    let left = match boundary_values(cfg) {
        Some(v) => BoundaryCondition::constant(conserved(&v, "problem.boundary_state")?),
        None => BoundaryCondition::Open,
    };
    let present = move |u: &State<3>| {
        let w = gas
            .to_primitive(u)
            .unwrap_or(Primitive::new(f64::NAN, f64::NAN, f64::NAN));
        vec![w.rho, w.u, w.p]
    };
    Ok(Case {
        model: gas,
        init,
        left,
        right: BoundaryCondition::Open,
        exact: None,
        exact_note: "unavailable (no closed form for this model)".into(),
        physical: DiffusionKind::NavierStokes {
            nu: cfg.model.nu.unwrap_or(1.0),
            kappa: cfg.model.kappa.unwrap_or(1.0),
        },
        names: &["rho", "u", "p"],
        present: Arc::new(present),
    })
}

fn scheme_kind(k: SchemeName) -> SchemeKind {
    match k {
        SchemeName::Roe => SchemeKind::Roe,
        SchemeName::Cnd => SchemeKind::Cnd,
        SchemeName::Cnd2 => SchemeKind::Cnd2,
        SchemeName::Ec => SchemeKind::EntropyConservative,
    }
}

struct Computed<const M: usize> {
    field: StateField<M>,
    summary: RunSummary,
}

fn initial_field<const M: usize, Mdl>(
    case: &Case<M, Mdl>,
    cfg: &ExperimentConfig,
    n: usize,
) -> Result<StateField<M>, CliError>
where
    Mdl: HyperbolicModel<M>,
{
    let grid =
        make_grid(cfg.problem.x_left, cfg.problem.x_right, n).map_err(|e| CliError::Config(vec![e.to_string()]))?;
    init_field(&case.model, &grid, |x| (case.init)(x)).map_err(|e| CliError::solver("initial data", e))
}

fn run_scheme<const M: usize, Mdl>(
    case: &Case<M, Mdl>,
    cfg: &ExperimentConfig,
    name: SchemeName,
    n: usize,
) -> Result<Computed<M>, CliError>
where
    Mdl: HyperbolicModel<M>,
{
    let label = scheme_label(name);
    let started = Instant::now();
    let scheme =
        SchemeConfig::new(scheme_kind(name), cfg.solver.cfl).map_err(|e| CliError::Config(vec![e.to_string()]))?;
    let init = initial_field(case, cfg, n)?;
    let op = HyperbolicOperator::new(&case.model, scheme, case.left.clone(), case.right.clone());
    let loop_cfg = TimeLoopConfig::new(cfg.t_final()).map_err(|e| CliError::Config(vec![e.to_string()]))?;
    let result = run_to_time(&op, &init, &loop_cfg).map_err(|e| CliError::solver(format!("scheme {label}"), e))?;
    let max_entropy_residual = match scheme.kind {
        SchemeKind::Roe => None,
        _ => Some(
            entropy_residual(
                &case.model,
                &scheme,
                &result.field,
                &case.left,
                &case.right,
                result.field.time,
            )
            .map_err(|e| CliError::solver(format!("entropy residual of {label}"), e))?
            .max_positive,
        ),
    };
    Ok(Computed {
        summary: RunSummary {
            label: label.to_string(),
            n_cells: n,
            steps: result.trace.steps,
            conservation_defect: conservation_defect(&result.trace),
            max_entropy_residual,
            wall_seconds: started.elapsed().as_secs_f64(),
        },
        field: result.field,
    })
}

fn run_reference<const M: usize, Mdl>(
    case: &Case<M, Mdl>,
    cfg: &ExperimentConfig,
    v: &ViscousRunConfig,
) -> Result<Computed<M>, CliError>
where
    Mdl: HyperbolicModel<M>,
{
    let started = Instant::now();
    let n = v.n_cells.unwrap_or(cfg.solver.n_cells).max(1) as usize;
    let kind = match v.diffusion {
        DiffusionName::Physical => case.physical,
        DiffusionName::Laplacian => DiffusionKind::IdentityLaplacian,
    };
    let spec = ViscousSpec::new(v.epsilon, kind)
        .and_then(|s| s.with_cfl(cfg.solver.cfl, v.cfl_diff))
        .map_err(|e| CliError::Config(vec![format!("solver.viscous '{}': {e}", v.label)]))?;
    let init = initial_field(case, cfg, n)?;
    let result = run_viscous(&case.model, &spec, &init, &case.left, &case.right, cfg.t_final())
        .map_err(|e| CliError::solver(format!("viscous reference {}", v.label), e))?;
    Ok(Computed {
        summary: RunSummary {
            label: v.label.clone(),
            n_cells: n,
            steps: result.trace.steps,
            conservation_defect: conservation_defect(&result.trace),
            max_entropy_residual: None,
            wall_seconds: started.elapsed().as_secs_f64(),
        },
        field: result.field,
    })
}

fn report(opts: &RunOptions, s: &RunSummary) {
    if !opts.quiet {
        eprintln!(
            "{}: {} cells, {} steps, {:.2} s",
            s.label, s.n_cells, s.steps, s.wall_seconds
        );
    }
}

fn execute<const M: usize, Mdl>(
    case: Case<M, Mdl>,
    cfg: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<RunOutput, CliError>
where
    Mdl: HyperbolicModel<M>,
{
    let n = cfg.n_cells();
    let schemes = &cfg.solver.schemes;
    let viscous = &cfg.solver.viscous;

    let (scheme_results, viscous_results) = std::thread::scope(|s| {
        let case = &case;
        let scheme_handles: Vec<_> = schemes
            .iter()
            .map(|&k| s.spawn(move || run_scheme(case, cfg, k, n)))
            .collect();
        let viscous_handles: Vec<_> = viscous
            .iter()
            .map(|v| s.spawn(move || run_reference(case, cfg, v)))
            .collect();
        let join = |h: std::thread::ScopedJoinHandle<'_, Result<Computed<M>, CliError>>| {
            h.join().expect("run thread panicked")
        };
        (
            scheme_handles.into_iter().map(join).collect::<Vec<_>>(),
            viscous_handles.into_iter().map(join).collect::<Vec<_>>(),
        )
    });

    let main_grid =
        make_grid(cfg.problem.x_left, cfg.problem.x_right, n).map_err(|e| CliError::Config(vec![e.to_string()]))?;
    let mut columns = vec!["x".to_string()];
    let mut data: Vec<Vec<f64>> = vec![main_grid.centers.clone()];
    let mut runs = Vec::new();
    for result in scheme_results.into_iter().chain(viscous_results) {
        let computed = result?;
        report(opts, &computed.summary);
        let field = &computed.field;
        let sampled: Vec<Vec<f64>> = main_grid
            .centers
            .iter()
            .map(|&x| (case.present)(&field.data[field.grid.nearest_cell(x)]))
            .collect();
        for (c, name) in case.names.iter().enumerate() {
            columns.push(format!("{}_{name}", computed.summary.label));
            data.push(sampled.iter().map(|v| v[c]).collect());
        }
        runs.push(computed.summary);
    }
    if let Some(exact) = &case.exact {
        let sampled: Vec<Vec<f64>> = main_grid.centers.iter().map(|&x| (case.present)(&exact(x))).collect();
        for (c, name) in case.names.iter().enumerate() {
            columns.push(format!("exact_{name}"));
            data.push(sampled.iter().map(|v| v[c]).collect());
        }
    }
    if let Some(reference) = &opts.reference {
        for (name, values) in reference.sample_onto(&main_grid.centers)? {
            columns.push(format!("ref_{name}"));
            data.push(values);
        }
    }

    let rows = (0..n).map(|j| data.iter().map(|col| col[j]).collect()).collect();
    Ok(RunOutput {
        config: cfg.clone(),
        columns,
        rows,
        runs,
        exact_note: case.exact_note.clone(),
    })
}

fn scaled_config(cfg: &ExperimentConfig, opts: &RunOptions) -> ExperimentConfig {
    let mut cfg = cfg.clone();
    if opts.full_scale {
        for v in &mut cfg.solver.viscous {
            v.epsilon = FULL_SCALE_EPSILON;
            v.n_cells = Some(FULL_SCALE_CELLS);
        }
    }
    cfg
}

/// Runs every scheme and viscous reference of `cfg`.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutput, CliError> {
    let cfg = scaled_config(cfg, opts);
    match cfg.model.kind {
        ModelKind::Swlin => execute(sw_case(&cfg)?, &cfg, opts),
        ModelKind::Euler => execute(euler_case(&cfg)?, &cfg, opts),
    }
}

/// L1 errors of one scheme on a sequence of meshes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub scheme: String,
    pub n_cells: usize,
    pub l1: f64,
    /// Observed order against the previous mesh; `None` on the first mesh
    /// and when an error vanishes.
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub component: String,
    pub reference: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn rates(&self, scheme: &str) -> Vec<Option<f64>> {
        self.rows
            .iter()
            .filter(|r| r.scheme == scheme)
            .skip(1)
            .map(|r| r.rate)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# component: {}", self.component);
        let _ = writeln!(out, "# reference: {}", self.reference);
        out.push_str("scheme,n_cells,l1,rate\n");
        for r in &self.rows {
            let rate = r.rate.map_or_else(|| "undefined".to_string(), |v| format!("{v:.6}"));
            let _ = writeln!(out, "{},{},{:.16e},{}", r.scheme, r.n_cells, r.l1, rate);
        }
        out
    }
}

/// `log(e_k / e_{k+1}) / log(N_{k+1} / N_k)`, undefined when either error
/// vanishes.
pub fn observed_rates(meshes: &[usize], errors: &[f64]) -> Vec<Option<f64>> {
    let mut rates = vec![None];
    for k in 1..errors.len() {
        let (e0, e1) = (errors[k - 1], errors[k]);
        rates.push(if e0 > 0.0 && e1 > 0.0 {
            Some((e0 / e1).ln() / (meshes[k] as f64 / meshes[k - 1] as f64).ln())
        } else {
            None
        });
    }
    rates
}

pub fn check_meshes(meshes: &[usize]) -> Result<(), CliError> {
    if meshes.len() < 3 {
        return Err(CliError::Data(format!("need at least 3 meshes, got {}", meshes.len())));
    }
    for w in meshes.windows(2) {
        if w[0] == 0 || w[1] <= w[0] || w[1] % w[0] != 0 {
            return Err(CliError::Data(format!(
                "meshes must be nested, {} does not divide {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

fn converge<const M: usize, Mdl>(
    case: Case<M, Mdl>,
    cfg: &ExperimentConfig,
    meshes: &[usize],
    component: usize,
    opts: &RunOptions,
) -> Result<ConvergenceTable, CliError>
where
    Mdl: HyperbolicModel<M>,
{
    let name = *case
        .names
        .get(component)
        .ok_or_else(|| CliError::Data(format!("component {component} out of range")))?;
    let (reference, note): (Box<dyn Fn(f64) -> f64 + Sync + '_>, String) =
        match (&case.exact, cfg.solver.viscous.first()) {
            (Some(exact), _) => {
                let (exact, present) = (exact.clone(), case.present.clone());
                (
                    Box::new(move |x| present(&exact(x))[component]),
                    format!("exact ({})", case.exact_note),
                )
            }
            (None, Some(v)) => {
                let computed = run_reference(&case, cfg, v)?;
                report(opts, &computed.summary);
                let field = computed.field;
                let present = case.present.clone();
                (
                    Box::new(move |x| present(&field.data[field.grid.nearest_cell(x)])[component]),
                    format!("viscous reference {}", v.label),
                )
            }
            (None, None) => {
                return Err(CliError::Data(
                    "no exact solution or viscous reference to compare with".into(),
                ))
            }
        };

    let mut rows = Vec::new();
    for &scheme in &cfg.solver.schemes {
        let results: Vec<Result<Computed<M>, CliError>> = std::thread::scope(|s| {
            let case = &case;
            let handles: Vec<_> = meshes
                .iter()
                .map(|&n| s.spawn(move || run_scheme(case, cfg, scheme, n)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("run thread panicked"))
                .collect()
        });
        let mut errors = Vec::new();
        for r in results {
            let computed = r?;
            report(opts, &computed.summary);
            let f = &computed.field;
            let values: Vec<f64> = f.data.iter().map(|u| (case.present)(u)[component]).collect();
            let exact: Vec<f64> = f.grid.centers.iter().map(|&x| reference(x)).collect();
            let e = scalar_error_norms(&f.grid.centers, &values, &exact, f.grid.dx, None)
                .map_err(|e| CliError::solver("error norms", e))?;
            errors.push(e.l1);
        }
        for ((&n, &l1), rate) in meshes.iter().zip(&errors).zip(observed_rates(meshes, &errors)) {
            rows.push(ConvergenceRow {
                scheme: scheme_label(scheme).to_string(),
                n_cells: n,
                l1,
                rate,
            });
        }
    }
    Ok(ConvergenceTable {
        component: name.to_string(),
        reference: note,
        rows,
    })
}

/// Runs each scheme of `cfg` on every mesh and measures L1 errors of
/// `component` against the exact solution, or the first viscous reference
/// when no exact solution exists.
pub fn convergence_study(
    cfg: &ExperimentConfig,
    meshes: &[usize],
    component: usize,
    opts: &RunOptions,
) -> Result<ConvergenceTable, CliError> {
    check_meshes(meshes)?;
    if cfg.solver.schemes.is_empty() {
        return Err(CliError::Data("convergence study needs at least one scheme".into()));
    }
    let cfg = scaled_config(cfg, opts);
    match cfg.model.kind {
        ModelKind::Swlin => converge(sw_case(&cfg)?, &cfg, meshes, component, opts),
        ModelKind::Euler => converge(euler_case(&cfg)?, &cfg, meshes, component, opts),
    }
}

/// Error norms between one column of two tables, sampling `reference` at
/// the nearest cell of its own grid.
pub fn compare_tables(
    computed: &CsvTable,
    reference: &CsvTable,
    column: &str,
    reference_column: Option<&str>,
    window: Option<(f64, f64)>,
) -> Result<ErrorReport, CliError> {
    let x = computed.column("x")?;
    let values = computed.column(column)?;
    let ref_name = reference_column.unwrap_or(column);
    let sampled = reference
        .sample_onto(&x)?
        .into_iter()
        .find(|(name, _)| name == ref_name)
        .map(|(_, v)| v)
        .ok_or_else(|| CliError::Data(format!("reference has no column '{ref_name}'")))?;
    let dx = computed.spacing()?;
    scalar_error_norms(&x, &values, &sampled, dx, window).map_err(|e| CliError::Data(e.to_string()))
}

/// The shallow water vanishing-viscosity solution sampled at cell centres.
pub fn exact_table(viscosity: SwViscosityName, t: f64, n: usize) -> Result<CsvTable, CliError> {
    let v = match viscosity {
        SwViscosityName::Eddy => SwViscosity::Eddy,
        SwViscosityName::Laplacian => SwViscosity::Laplacian,
    };
    let grid = make_grid(-1.0, 1.0, n).map_err(|e| CliError::Data(e.to_string()))?;
    let mut rows = Vec::with_capacity(n);
    for &x in &grid.centers {
        let (h, u) =
            cnd_core::linear_exact::exact_sw_solution(v, x, t).map_err(|e| CliError::solver("exact solution", e))?;
        rows.push(vec![x, h, u]);
    }
    Ok(CsvTable {
        metadata: vec![format!("exact: viscosity={viscosity:?} t={t}").to_lowercase()],
        columns: vec!["x".into(), "h".into(), "u".into()],
        rows,
    })
}
