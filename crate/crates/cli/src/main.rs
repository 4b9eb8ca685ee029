use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ridgeflow::period::estimate_period_in;
use ridgeflow::preprocess::preprocess;
use ridgeflow::refine::{estimate_with_length, refine};
use ridgeflow::synth::{angular_error, corrupt_region, render_ridges, synthetic_print};
use ridgeflow::{BinaryMask, PipelineParams};
use ridgeflow_cli::config::load_params;
use ridgeflow_cli::io::{ensure_dir, read_field, read_image, read_mask, write_field, write_image, write_mask};
use ridgeflow_cli::report::error_text;
use ridgeflow_cli::{run_pipeline, CliError, CliResult, RunOptions};

#[derive(Parser)]
#[command(name = "ridgeflow", version, about = "Fingerprint orientation field extraction and refinement")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Parameter file with one `key = value` per line.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Parameter override, applied after the config file. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Equalize, remove borders, segment and amplify an image.
    Preprocess {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Estimate the orientation field of an image.
    Extract {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Estimate the ridge period from an image and its orientation field.
    Period {
        image: PathBuf,
        field: PathBuf,
        #[arg(long)]
        mask: Option<PathBuf>,
    },
    /// Refine an orientation field.
    Refine {
        image: PathBuf,
        field: PathBuf,
        #[arg(long)]
        mask: PathBuf,
        #[arg(long)]
        period: f64,
        #[arg(short, long)]
        out: PathBuf,
        /// Directory for the intermediate fields and masks.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Full pipeline: every artifact plus a report.
    Run {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Ground-truth field; adds error lines to the report.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        stride: usize,
    },
    /// Generate a synthetic print with its field and footprint.
    Synth {
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value_t = 320)]
        width: usize,
        #[arg(long, default_value_t = 400)]
        height: usize,
        #[arg(long, default_value_t = 8.0)]
        period: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write a copy of the field with a randomized disk, as X,Y,R.
        #[arg(long, value_name = "X,Y,R")]
        corrupt: Option<String>,
    },
    /// Render a ridge pattern that follows a field.
    Render {
        field: PathBuf,
        #[arg(long, default_value_t = 8.0)]
        period: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        iterations: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Angular error between two fields.
    Eval {
        truth: PathBuf,
        candidate: PathBuf,
        #[arg(long)]
        mask: Option<PathBuf>,
    },
    /// Print the effective parameters.
    Config,
}

fn parse_disk(text: &str) -> CliResult<(f64, f64, f64)> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Argument(format!("--corrupt {text:?}: {e}")))?;
    match parts[..] {
        [x, y, r] if r > 0.0 => Ok((x, y, r)),
        _ => Err(CliError::Argument(format!("--corrupt expects X,Y,R with R > 0, got {text:?}"))),
    }
}

fn optional_mask(path: Option<&Path>) -> CliResult<Option<BinaryMask>> {
    path.map(read_mask).transpose()
}

fn execute(command: Command, params: &PipelineParams) -> CliResult<()> {
    match command {
        Command::Preprocess { input, out } => {
            let pre = preprocess(&read_image(&input)?, params)?;
            ensure_dir(&out)?;
            write_image(&out.join("equalized.pgm"), &pre.equalized.image)?;
            write_mask(&out.join("mask.pgm"), pre.mask())?;
            write_image(&out.join("amplified.pgm"), &pre.amplified)?;
        }
        Command::Extract { input, out } => {
            let field = estimate_with_length(&read_image(&input)?, params.r as f64, params)?;
            write_field(&out, &field)?;
        }
        Command::Period { image, field, mask } => {
            let image = read_image(&image)?;
            let field = read_field(&field)?;
            let mask = optional_mask(mask.as_deref())?;
            let estimate = estimate_period_in(&field, &image, mask.as_ref(), params)?;
            println!("period = {:.6}", estimate.period);
            println!("frequency = {:.6}", estimate.frequency);
            println!("reliable_segments = {}", estimate.reliable_count);
            println!("grid_points = {}", estimate.grid_points);
        }
        Command::Refine {
            image,
            field,
            mask,
            period,
            out,
            trace,
        } => {
            let image = read_image(&image)?;
            let field = read_field(&field)?;
            let mask = read_mask(&mask)?;
            let outcome = refine(&image, &field, &mask, period, params)?;
            write_field(&out, &outcome.field)?;
            if let Some(dir) = trace {
                ensure_dir(&dir)?;
                let m = &outcome.trace.masks;
                for (name, f) in [("o1", &m.o1), ("o2", &m.o2), ("o3", &m.o3)] {
                    write_field(&dir.join(format!("{name}.orf")), f)?;
                }
                for (name, mk) in [("m1", &m.m1), ("m2", &m.m2), ("m3", &m.m3), ("m4", &m.m4)] {
                    write_mask(&dir.join(format!("{name}.pgm")), mk)?;
                }
                write_image(&dir.join("s1.pgm"), &m.s1.map(|v| v * 255.0).to_gray())?;
            }
            println!("iterations = {}", outcome.trace.iterations);
            println!("converged = {}", outcome.trace.converged);
            if !outcome.trace.converged {
                return Err(ridgeflow::Error::IterationCapExceeded(outcome.trace.iterations).into());
            }
        }
        Command::Run {
            input,
            out,
            truth,
            stride,
        } => {
            let options = RunOptions {
                output: out,
                overlay_stride: stride,
                truth,
            };
            let report = run_pipeline(&input, params, &options)?;
            print!("{}", report.to_text());
            if !report.converged {
                return Err(ridgeflow::Error::IterationCapExceeded(report.iterations).into());
            }
        }
        Command::Synth {
            out,
            width,
            height,
            period,
            seed,
            corrupt,
        } => {
            let print = synthetic_print(width, height, period, seed)?;
            ensure_dir(&out)?;
            write_image(&out.join("print.pgm"), &print.image)?;
            write_field(&out.join("truth.orf"), &print.field)?;
            write_mask(&out.join("footprint.pgm"), &print.footprint)?;
            if let Some(text) = corrupt {
                let (x, y, r) = parse_disk(&text)?;
                write_field(&out.join("corrupted.orf"), &corrupt_region(&print.field, (x, y), r, seed))?;
                let disk = BinaryMask::from_fn(width, height, |px, py| (px as f64 - x).hypot(py as f64 - y) < r);
                write_mask(&out.join("disk.pgm"), &disk)?;
            }
        }
        Command::Render {
            field,
            period,
            seed,
            iterations,
            out,
        } => {
            let image = render_ridges(&read_field(&field)?, period, seed, iterations)?;
            write_image(&out, &image)?;
        }
        Command::Eval { truth, candidate, mask } => {
            let truth = read_field(&truth)?;
            let candidate = read_field(&candidate)?;
            let mask = match optional_mask(mask.as_deref())? {
                Some(m) => m,
                None => BinaryMask::filled(truth.width(), truth.height(), true),
            };
            print!("{}", error_text(&angular_error(&candidate, &truth, &mask)?));
        }
        Command::Config => print!("{}", params.to_config()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_params(cli.global.config.as_deref(), &cli.global.overrides)
        .and_then(|params| execute(cli.command, &params));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ridgeflow: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
