use clap::{Parser, Subcommand};
use std::path::PathBuf;
use ym4::cli::config::{resolve, GlueFlags, OutputFormat};
use ym4::cli::{glue_cmd, phi_cmd, verify, EXIT_CONFIG, EXIT_OK, EXIT_VERIFY_FAILED};

#[derive(Parser)]
#[command(
    name = "ym4",
    about = "SU(2) Yang-Mills instanton gluing on R^4: verification suites, \
             energy-gain experiments and the phi(tau) window"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite (lemma checks against closed forms).
    Verify {
        /// algebra | appendix | gauge | instanton | all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 6)]
        s3_level: usize,
        #[arg(long, default_value_t = 20260810)]
        seed: u64,
    },
    /// Sweep a gluing construction over a rho grid and report energy gains.
    Glue {
        /// zero | sd:LAMBDA | asd:LAMBDA | poly-bump:P
        #[arg(long)]
        connection: Option<String>,
        /// bc | taubes
        #[arg(long)]
        construction: Option<String>,
        /// Comma-separated list of gluing radii.
        #[arg(long)]
        rho: Option<String>,
        #[arg(long)]
        tau: Option<f64>,
        /// Positive number or "auto" (optimal value from the gain bracket).
        #[arg(long)]
        c0: Option<String>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        radial_n: Option<usize>,
        #[arg(long)]
        s3_level: Option<usize>,
        /// csv | json
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// smoothstep | affine | mollified:WIDTH
        #[arg(long)]
        profile: Option<String>,
        /// Also compute the boundary Chern-Simons jump per row.
        #[arg(long, default_value_t = false)]
        chern: bool,
        /// Flat key=value file; flags override its entries.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Tabulate phi(tau) and the optimal c0 on a tau grid.
    Phi {
        #[arg(long, default_value_t = 0.05)]
        tau_min: f64,
        #[arg(long, default_value_t = 0.95)]
        tau_max: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// csv | json
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_output(body: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Command::Verify { suite, s3_level, seed } => match verify::cmd_verify(&suite, s3_level, seed) {
            Ok(true) => EXIT_OK,
            Ok(false) => EXIT_VERIFY_FAILED,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_CONFIG
            }
        },
        Command::Glue {
            connection,
            construction,
            rho,
            tau,
            c0,
            a,
            b,
            radial_n,
            s3_level,
            format,
            out,
            seed,
            profile,
            chern,
            config,
        } => {
            let flags = GlueFlags {
                connection,
                construction,
                rho,
                tau,
                c0,
                a,
                b,
                radial_n,
                s3_level,
                format,
                out,
                seed,
                profile,
                chern,
            };
            match resolve(flags, config.as_deref()).and_then(|cfg| {
                let rendered = glue_cmd::cmd_glue(&cfg)?;
                Ok((cfg, rendered))
            }) {
                Ok((cfg, (body, summary))) => {
                    if write_output(&body, cfg.out.as_ref()).is_err() {
                        eprintln!("error: cannot write output file");
                        EXIT_CONFIG
                    } else {
                        print!("{summary}");
                        EXIT_OK
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_CONFIG
                }
            }
        }
        Command::Phi { tau_min, tau_max, step, format, out } => {
            let fmt = match format.as_str() {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                other => {
                    eprintln!("error: unknown format '{other}'");
                    std::process::exit(EXIT_CONFIG);
                }
            };
            match phi_cmd::phi_grid(tau_min, tau_max, step) {
                Ok(rows) => {
                    let body = phi_cmd::render(&rows, fmt);
                    if write_output(&body, out.as_ref()).is_err() {
                        eprintln!("error: cannot write output file");
                        EXIT_CONFIG
                    } else {
                        EXIT_OK
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_CONFIG
                }
            }
        }
    };
    std::process::exit(code);
}
