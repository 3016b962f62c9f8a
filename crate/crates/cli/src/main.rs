use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use cnd_cli::config::SwViscosityName;
use cnd_cli::{
    compare_tables, convergence_study, exact_table, load_config, run_experiment, run_verification, CliError, CsvTable,
    RunOptions,
};

#[derive(Parser)]
#[command(name = "cnd")]
#[command(about = "Finite volume experiments for boundary limits of viscous conservation laws")]
#[command(version)]
struct Cli {
    /// Suppress progress output on stderr
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the schemes and references of a config and write a CSV table
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides output.path from the config
        #[arg(long)]
        output: Option<PathBuf>,
        /// CSV attached as ref_* columns
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Viscous references at epsilon = 1e-5 with 32000 cells
        #[arg(long)]
        full_scale: bool,
    },
    /// L1 errors and observed orders on a sequence of nested meshes
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "100,200,400,800")]
        meshes: Vec<usize>,
        /// Solution component index (0 = h or rho)
        #[arg(long, default_value_t = 0)]
        component: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Error norms between a column of one CSV and a column of another
    Compare {
        computed: PathBuf,
        reference: PathBuf,
        #[arg(long)]
        column: String,
        /// Defaults to --column
        #[arg(long)]
        reference_column: Option<String>,
        /// Restrict to cells with centres in [a, b]
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        window: Option<Vec<f64>>,
    },
    /// Dump the exact shallow water boundary Riemann solution
    Exact {
        #[arg(long, value_enum, default_value = "eddy")]
        viscosity: ViscosityArg,
        #[arg(long, default_value_t = 0.25)]
        t: f64,
        #[arg(long, default_value_t = 1000)]
        n_cells: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Randomized checks of the entropy flux identities
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
    },
    /// Run several configs concurrently, each to its own output path
    Batch {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ViscosityArg {
    Eddy,
    Laplacian,
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
            }
            std::fs::write(path, text).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_one(config: &Path, output: Option<PathBuf>, opts: &RunOptions, require_path: bool) -> Result<(), CliError> {
    let started = Instant::now();
    let cfg = load_config(config)?;
    let path = output.or_else(|| cfg.output.path.clone().map(PathBuf::from));
    if require_path && path.is_none() {
        return Err(CliError::Config(vec!["output.path is required in batch mode".into()]));
    }
    let out = run_experiment(&cfg, opts)?;
    emit(&out.to_csv(), path.as_deref())?;
    if !opts.quiet {
        for r in &out.runs {
            eprintln!("{}: conservation defect {:.3e}", r.label, r.conservation_defect);
        }
        eprintln!(
            "{}: wall time {:.2} s",
            config.display(),
            started.elapsed().as_secs_f64()
        );
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let quiet = cli.quiet;
    match cli.command {
        Command::Run {
            config,
            output,
            reference,
            full_scale,
        } => {
            let reference = reference.map(|p| CsvTable::read(&p)).transpose()?;
            run_one(
                &config,
                output,
                &RunOptions {
                    quiet,
                    full_scale,
                    reference,
                },
                false,
            )
        }
        Command::Converge {
            config,
            meshes,
            component,
            output,
        } => {
            let cfg = load_config(&config)?;
            let table = convergence_study(
                &cfg,
                &meshes,
                component,
                &RunOptions {
                    quiet,
                    ..Default::default()
                },
            )?;
            emit(&table.to_csv(), output.as_deref())
        }
        Command::Compare {
            computed,
            reference,
            column,
            reference_column,
            window,
        } => {
            let a = CsvTable::read(&computed)?;
            let b = CsvTable::read(&reference)?;
            let window = match window.as_deref() {
                None => None,
                Some(&[a, b]) => Some((a, b)),
                Some(w) => return Err(CliError::Data(format!("--window takes two values, got {}", w.len()))),
            };
            let r = compare_tables(&a, &b, &column, reference_column.as_deref(), window)?;
            println!("l1,l2,linf,cells");
            println!("{:.16e},{:.16e},{:.16e},{}", r.l1, r.l2, r.linf, r.cells);
            Ok(())
        }
        Command::Exact {
            viscosity,
            t,
            n_cells,
            output,
        } => {
            let v = match viscosity {
                ViscosityArg::Eddy => SwViscosityName::Eddy,
                ViscosityArg::Laplacian => SwViscosityName::Laplacian,
            };
            emit(&exact_table(v, t, n_cells)?.to_csv(), output.as_deref())
        }
        Command::Verify { seed, pairs } => {
            let r = run_verification(seed, pairs);
            println!("seed,pairs,sw_ec_residual,euler_ec_residual,min_interface_production,log_mean_deviation");
            println!(
                "{seed},{},{:.6e},{:.6e},{:.6e},{:.6e}",
                r.pairs, r.sw_ec_residual, r.euler_ec_residual, r.min_interface_production, r.log_mean_deviation
            );
            Ok(())
        }
        Command::Batch { configs } => {
            let opts = RunOptions {
                quiet,
                ..Default::default()
            };
            let results: Vec<Result<(), CliError>> = std::thread::scope(|s| {
                let handles: Vec<_> = configs
                    .iter()
                    .map(|c| s.spawn(|| run_one(c, None, &opts, true)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("batch thread panicked"))
                    .collect()
            });
            let mut first_error = None;
            for (c, r) in configs.iter().zip(results) {
                if let Err(e) = r {
                    eprintln!("error[{}]: {}: {e}", e.category(), c.display());
                    first_error.get_or_insert(e);
                }
            }
            first_error.map_or(Ok(()), Err)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
