mod analysis;
mod cli;
mod error;
mod plot;
mod render;
mod report;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use dea_core::{load_dataset, PriorityRanking, SolverConfig};

use crate::cli::{Cli, Command, Format, RunArgs, Sections};
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let body = rendered.split("\n\nUsage:").next().unwrap_or_default();
            let message = body.split_whitespace().collect::<Vec<_>>().join(" ");
            let err = CliError::Usage(message.trim_start_matches("error: ").to_string());
            eprintln!("{}", err.diagnostic());
            return err.exit_code();
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            e.exit_code()
        }
    }
}

fn config(args: &RunArgs) -> Result<SolverConfig, CliError> {
    let mut cfg = SolverConfig::default();
    if let Some(m) = args.big_m {
        cfg.big_m = m;
    }
    if let Some(t) = args.tol {
        cfg.zero_tol = t;
    }
    cfg.validate().map_err(CliError::Config)?;
    Ok(cfg)
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => CliError::Render(format!("{other:?}")),
    }
}

fn run(command: &Command) -> Result<(), CliError> {
    let started = Instant::now();
    let args = command.args();
    let file = File::open(&args.input).map_err(io_error(&args.input))?;
    let dataset = load_dataset(BufReader::new(file))?;
    let priority = PriorityRanking::parse(&args.priority, &dataset)?;
    let cfg = config(args)?;
    if args.plot_data.is_some() && (dataset.num_inputs() != 1 || dataset.num_outputs() != 1) {
        return Err(CliError::PlotDimension {
            inputs: dataset.num_inputs(),
            outputs: dataset.num_outputs(),
        });
    }

    let sections = command.sections();
    // Plot arrows need targets even when the report leaves them out.
    let needed = Sections {
        projection: sections.projection || args.plot_data.is_some(),
        ..sections
    };
    let analysis = analysis::run(&dataset, &priority, &cfg, needed)?;

    let ctx = report::Context {
        command: command.name(),
        file: args.input.display().to_string(),
        dataset: &dataset,
        priority: &priority,
        cfg: &cfg,
        sections,
    };
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    let report = report::build(&ctx, &analysis, elapsed_ms);

    let plot_file = match &args.plot_data {
        Some(path) => Some((path, File::create(path).map_err(io_error(path))?)),
        None => None,
    };

    let stdout = PathBuf::from("<stdout>");
    let mut out = BufWriter::new(io::stdout().lock());
    match args.format {
        Format::Json => report::write_json(&report, &mut out).map_err(io_error(&stdout))?,
        Format::Csv => report::write_csv(&report, sections, &mut out).map_err(|e| csv_error(&stdout, e))?,
    }
    out.flush().map_err(io_error(&stdout))?;

    if let Some((path, file)) = plot_file {
        plot::write(&dataset, &analysis, BufWriter::new(file)).map_err(|e| csv_error(path, e))?;
    }
    Ok(())
}
