//! Experiment configuration files.
//!
//! A config is a TOML document with four tables:
//!
//! ```toml
//! [model]
//! kind = "swlin"          # or "euler"
//! viscosity = "eddy"      # swlin only: "eddy" | "laplacian"
//!
//! [problem]
//! initial = "lswinit"     # "lswinit" | "eulinit" | "riemann" | "pulse"
//! boundary = "ldir"       # "ldir" | "eulbd" | "dirichlet" | "open"
//! t_final = 0.25
//!
//! [solver]
//! n_cells = 1000
//! schemes = ["roe", "cnd"]
//!
//! [[solver.viscous]]
//! label = "eddy"
//! epsilon = 1e-4
//! n_cells = 8000
//!
//! [output]
//! path = "out/fig2.csv"
//! ```
//!
//! Euler states are given in primitive variables `(ρ, u, p)`.

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SW_FINAL_TIME: f64 = 0.25;
pub const DEFAULT_EULER_FINAL_TIME: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub problem: ProblemConfig,
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Swlin,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SwViscosityName {
    Eddy,
    Laplacian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viscosity: Option<SwViscosityName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_tilde: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_tilde: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialKind {
    /// Shallow water jump `(3, 1) | (1, 1)` at `x = 0`.
    Lswinit,
    /// Euler jump `(3, 1, 3) | (1, 1, 1)` at `x = 0`.
    Eulinit,
    Riemann,
    /// `background + amplitude · sin⁴` bump on `[center − width/2, center + width/2]`.
    Pulse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    /// Shallow water wall data `(2, 1)`.
    Ldir,
    /// Euler wall data `(2, 1, 2)`.
    Eulbd,
    Dirichlet,
    Open,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub initial: InitialKind,
    pub boundary: BoundaryKind,
    #[serde(default = "default_x_left")]
    pub x_left: f64,
    #[serde(default = "default_x_right")]
    pub x_right: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_state: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_state: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_state: Option<Vec<f64>>,
}

fn default_x_left() -> f64 {
    -1.0
}

fn default_x_right() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Roe,
    Cnd,
    Cnd2,
    Ec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffusionName {
    /// The model's own viscosity (eddy/Laplacian for shallow water,
    /// Navier-Stokes for Euler).
    Physical,
    Laplacian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViscousRunConfig {
    pub label: String,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_cells: Option<i64>,
    #[serde(default = "default_diffusion")]
    pub diffusion: DiffusionName,
    #[serde(default = "default_cfl_diff")]
    pub cfl_diff: f64,
}

fn default_diffusion() -> DiffusionName {
    DiffusionName::Physical
}

fn default_cfl_diff() -> f64 {
    cnd_core::viscous::DEFAULT_CFL_DIFF
}

fn default_cfl() -> f64 {
    cnd_core::schemes::DEFAULT_CFL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub n_cells: i64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub schemes: Vec<SchemeName>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub viscous: Vec<ViscousRunConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// Attach exact-solution columns when one is available.
    #[serde(default = "default_true")]
    pub exact: bool,
}

fn default_true() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            path: None,
            exact: true,
        }
    }
}

impl ExperimentConfig {
    pub fn n_components(&self) -> usize {
        match self.model.kind {
            ModelKind::Swlin => 2,
            ModelKind::Euler => 3,
        }
    }

    pub fn t_final(&self) -> f64 {
        self.problem.t_final.unwrap_or(match self.model.kind {
            ModelKind::Swlin => DEFAULT_SW_FINAL_TIME,
            ModelKind::Euler => DEFAULT_EULER_FINAL_TIME,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.solver.n_cells.max(1) as usize
    }

    /// Fills every model-dependent default so the echo is self-contained.
    fn resolve_defaults(&mut self) {
        let m = &mut self.model;
        match m.kind {
            ModelKind::Swlin => {
                let reference = cnd_core::swlin::SwLinParams::reference();
                m.viscosity.get_or_insert(SwViscosityName::Eddy);
                m.h_tilde.get_or_insert(reference.h_tilde);
                m.u_tilde.get_or_insert(reference.u_tilde);
                m.g.get_or_insert(reference.g);
            }
            ModelKind::Euler => {
                m.gamma.get_or_insert(cnd_core::euler::DEFAULT_GAMMA);
                m.nu.get_or_insert(1.0);
                m.kappa.get_or_insert(1.0);
            }
        }
        let t = self.t_final();
        self.problem.t_final = Some(t);
        let n = self.solver.n_cells;
        for v in &mut self.solver.viscous {
            v.n_cells.get_or_insert(n);
        }
    }

    fn violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let m = &self.model;
        let ncomp = self.n_components();
        match m.kind {
            ModelKind::Swlin => {
                for (name, v) in [("gamma", m.gamma), ("nu", m.nu), ("kappa", m.kappa)] {
                    if v.is_some() {
                        errs.push(format!("model.{name} applies to euler models only"));
                    }
                }
                if !m.h_tilde.is_some_and(|h| h > 0.0) {
                    errs.push("model.h_tilde must be positive".into());
                }
                if !m.g.is_some_and(|g| g > 0.0) {
                    errs.push("model.g must be positive".into());
                }
                if !m.u_tilde.is_some_and(f64::is_finite) {
                    errs.push("model.u_tilde must be finite".into());
                }
            }
            ModelKind::Euler => {
                for (name, set) in [
                    ("viscosity", m.viscosity.is_some()),
                    ("h_tilde", m.h_tilde.is_some()),
                    ("u_tilde", m.u_tilde.is_some()),
                    ("g", m.g.is_some()),
                ] {
                    if set {
                        errs.push(format!("model.{name} applies to swlin models only"));
                    }
                }
                if !m.gamma.is_some_and(|g| g > 1.0) {
                    errs.push("model.gamma must exceed 1".into());
                }
                if !m.nu.is_some_and(|v| v >= 0.0) {
                    errs.push("model.nu must be nonnegative".into());
                }
                if !m.kappa.is_some_and(|v| v >= 0.0) {
                    errs.push("model.kappa must be nonnegative".into());
                }
            }
        }

        let p = &self.problem;
        if !(p.x_left.is_finite() && p.x_right.is_finite() && p.x_left < p.x_right) {
            errs.push("problem.x_left must be smaller than problem.x_right".into());
        }
        if !p.t_final.is_some_and(|t| t > 0.0 && t.is_finite()) {
            errs.push("problem.t_final must be positive".into());
        }
        let mut need = |key: &str, v: &Option<Vec<f64>>| check_state(&mut errs, key, v, ncomp);
        match p.initial {
            InitialKind::Riemann => {
                need("left_state", &p.left_state);
                need("right_state", &p.right_state);
            }
            InitialKind::Pulse => {
                need("background", &p.background);
                need("amplitude", &p.amplitude);
            }
            _ => {}
        }
        if p.boundary == BoundaryKind::Dirichlet {
            need("boundary_state", &p.boundary_state);
        }
        let id_mismatch = match (p.initial, m.kind) {
            (InitialKind::Lswinit, ModelKind::Euler) => Some("problem.initial 'lswinit' needs an swlin model"),
            (InitialKind::Eulinit, ModelKind::Swlin) => Some("problem.initial 'eulinit' needs an euler model"),
            _ => None,
        };
        errs.extend(id_mismatch.map(String::from));
        let id_mismatch = match (p.boundary, m.kind) {
            (BoundaryKind::Ldir, ModelKind::Euler) => Some("problem.boundary 'ldir' needs an swlin model"),
            (BoundaryKind::Eulbd, ModelKind::Swlin) => Some("problem.boundary 'eulbd' needs an euler model"),
            _ => None,
        };
        errs.extend(id_mismatch.map(String::from));
        if let Some(j) = p.jump {
            if !(j > p.x_left && j < p.x_right) {
                errs.push("problem.jump must lie inside the domain".into());
            }
        }
        if p.initial == InitialKind::Pulse {
            if p.width.is_some_and(|w| w <= 0.0) {
                errs.push("problem.width must be positive".into());
            }
            if p.center.is_some_and(|c| !(c > p.x_left && c < p.x_right)) {
                errs.push("problem.center must lie inside the domain".into());
            }
        }

        let s = &self.solver;
        if s.n_cells <= 0 {
            errs.push(format!("solver.n_cells must be positive, got {}", s.n_cells));
        }
        if !(s.cfl > 0.0 && s.cfl < 1.0) {
            errs.push(format!("solver.cfl must lie in (0, 1), got {}", s.cfl));
        }
        if s.schemes.is_empty() && s.viscous.is_empty() {
            errs.push("solver needs at least one entry in schemes or viscous".into());
        }
        let mut labels: Vec<String> = s.schemes.iter().map(|k| scheme_label(*k).to_string()).collect();
        for (i, v) in s.viscous.iter().enumerate() {
            let at = format!("solver.viscous[{i}]");
            if v.label.is_empty()
                || !v
                    .label
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                errs.push(format!(
                    "{at}.label must be a nonempty word of letters, digits, '_' or '-'"
                ));
            }
            if labels.contains(&v.label) || v.label == "exact" || v.label == "x" {
                errs.push(format!("{at}.label '{}' is already taken", v.label));
            }
            labels.push(v.label.clone());
            if !(v.epsilon > 0.0 && v.epsilon.is_finite()) {
                errs.push(format!("{at}.epsilon must be positive"));
            }
            if v.n_cells.is_some_and(|n| n <= 0) {
                errs.push(format!("{at}.n_cells must be positive"));
            }
            if !(v.cfl_diff > 0.0 && v.cfl_diff <= 0.5) {
                errs.push(format!("{at}.cfl_diff must lie in (0, 0.5]"));
            }
        }
        let mut seen = Vec::new();
        for k in &s.schemes {
            if seen.contains(k) {
                errs.push(format!("solver.schemes lists '{}' twice", scheme_label(*k)));
            }
            seen.push(*k);
        }
        errs
    }

    /// TOML text of the resolved config.
    pub fn echo(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

fn check_state(errs: &mut Vec<String>, key: &str, v: &Option<Vec<f64>>, ncomp: usize) {
    match v {
        None => errs.push(format!("problem.{key} is required for this problem")),
        Some(s) if s.len() != ncomp => errs.push(format!("problem.{key} needs {ncomp} components, got {}", s.len())),
        Some(s) if s.iter().any(|x| !x.is_finite()) => errs.push(format!("problem.{key} must be finite")),
        _ => {}
    }
}

pub fn scheme_label(k: SchemeName) -> &'static str {
    match k {
        SchemeName::Roe => "roe",
        SchemeName::Cnd => "cnd",
        SchemeName::Cnd2 => "cnd2",
        SchemeName::Ec => "ec",
    }
}

/// Parses and validates a config, reporting every violation at once.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let mut cfg: ExperimentConfig =
        toml::from_str(text).map_err(|e| CliError::Config(vec![e.message().to_string()]))?;
    cfg.resolve_defaults();
    let errs = cfg.violations();
    if errs.is_empty() {
        Ok(cfg)
    } else {
        Err(CliError::Config(errs))
    }
}
