//! `metcat`: batch front end for the constructions and their audits.

mod ban_cmds;
mod met_cmds;
mod report;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use metcat_core::ban::Q;
use metcat_core::text::{parse, parse_q, Document, Limits};
use metcat_core::{Error, ExtDist};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "metcat", version, about = "Finite metric and polyhedral Banach constructions with certificates")]
struct Cli {
    /// Input document with named spaces, maps and chains.
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,
    /// Where to write the result document; stdout when absent.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    /// Recompute every certificate value with the independent oracles.
    #[arg(long, global = true)]
    audit: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Colimit of a chain of metric spaces.
    MetColimit {
        #[arg(long)]
        chain: String,
    },
    /// ε-pushout of a span `B1 <- A -> B2`.
    EpsPushout {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        #[arg(long, value_parser = parse_dist)]
        eps: ExtDist,
    },
    /// ε-coequalizer of a parallel pair.
    EpsCoequalizer {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long, value_parser = parse_dist)]
        eps: ExtDist,
    },
    /// Cotensor `[M, L]`, directly and from pullbacks.
    Cotensor {
        #[arg(long)]
        m: String,
        #[arg(long)]
        l: String,
    },
    /// (surjective, isometry) factorization of a map.
    Factorize {
        #[arg(long)]
        map: String,
    },
    /// Approximate injectivity of a space against a class of maps.
    InjectCheck {
        #[arg(long)]
        space: String,
        #[arg(long, value_delimiter = ',', required = true)]
        class: Vec<String>,
        #[arg(long, value_parser = parse_dist)]
        eps: ExtDist,
    },
    /// Weak reflection into approximately injective spaces.
    WeakReflect {
        #[arg(long)]
        space: String,
        #[arg(long, value_delimiter = ',', required = true)]
        class: Vec<String>,
        #[arg(long, default_value_t = 2)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        rounds: u32,
        /// Largest residual search run under `--audit`.
        #[arg(long, default_value_t = 100_000)]
        audit_cap: u64,
    },
    /// Pushout of two isometries in `Ban`.
    BanPushout {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
    },
    /// ε-pushout in `Ban`.
    BanEpsPushout {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        #[arg(long, value_parser = parse_rational)]
        eps: Q,
    },
    /// Factors a contraction into the top of a chain through an earlier stage.
    BanFactorStage {
        #[arg(long)]
        chain: String,
        #[arg(long)]
        map: String,
        #[arg(long, value_parser = parse_rational)]
        eps: Q,
        #[arg(long, default_value_t = 0)]
        min_stage: usize,
    },
    /// Approximate back-and-forth between two chains from the zero space.
    GurariiBnf {
        /// First chain; requires `--l`.
        #[arg(long, requires = "l", conflicts_with = "catalogue")]
        k: Option<String>,
        /// Second chain.
        #[arg(long, requires = "k")]
        l: Option<String>,
        /// Isometries out of the zero space; builds twin chains in opposite orders.
        #[arg(long, value_delimiter = ',')]
        catalogue: Vec<String>,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(long, default_value_t = 400)]
        search_budget: usize,
        #[arg(long, default_value_t = 8)]
        attach_budget: usize,
        /// Attachments per saturation round when building twin chains.
        #[arg(long, default_value_t = 4)]
        saturation_budget: usize,
    },
    /// Brute-force universality check of one construction.
    Verify {
        #[arg(long, value_enum)]
        kind: Kind,
        /// First map (`u` or `f1`).
        #[arg(long)]
        first: String,
        /// Second map (`v` or `f2`).
        #[arg(long)]
        second: String,
        #[arg(long)]
        eps: String,
        /// Competitor spaces have up to this many points.
        #[arg(long, default_value_t = 2)]
        competitors: usize,
        /// Samples for `ban-coequalizer`.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Pushout,
    Coequalizer,
    Equalizer,
    Pullback,
    BanCoequalizer,
}

fn parse_dist(s: &str) -> Result<ExtDist, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rational(s: &str) -> Result<Q, String> {
    let q = parse_q(s)?;
    if q < Q::from_integer(0.into()) {
        return Err(format!("{s} is negative"));
    }
    Ok(q)
}

/// Shared state of one invocation.
pub struct Ctx {
    pub doc: Document,
    pub audit: bool,
    pub seed: u64,
}

/// A result document and its certificate report.
pub struct Outcome {
    pub doc: String,
    pub report: Report,
}

enum Failure {
    Input(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Exhausted(_) | Error::Internal(_) => Failure::Run(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn load(path: &Option<PathBuf>) -> Result<Document, Failure> {
    let Some(path) = path else {
        return Err(Failure::Input("an input document is required (--input)".into()));
    };
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let limits = Limits::from_env()?;
    parse(&text, &limits).map_err(|e| match e {
        Error::Parse { line, column, message } => {
            Failure::Input(format!("{}:{line}:{column}: {message}", path.display()))
        }
        other => Failure::Input(format!("{}: {other}", path.display())),
    })
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let ctx = Ctx { doc: load(&cli.input)?, audit: cli.audit, seed: cli.seed };
    let out = match &cli.cmd {
        Cmd::MetColimit { chain } => met_cmds::met_colimit(&ctx, chain)?,
        Cmd::EpsPushout { f1, f2, eps } => met_cmds::eps_pushout(&ctx, f1, f2, *eps)?,
        Cmd::EpsCoequalizer { u, v, eps } => met_cmds::eps_coequalizer(&ctx, u, v, *eps)?,
        Cmd::Cotensor { m, l } => met_cmds::cotensor(&ctx, m, l)?,
        Cmd::Factorize { map } => met_cmds::factorize(&ctx, map)?,
        Cmd::InjectCheck { space, class, eps } => met_cmds::inject_check(&ctx, space, class, *eps)?,
        Cmd::WeakReflect { space, class, n_max, rounds, audit_cap } => {
            met_cmds::weak_reflect(&ctx, space, class, *n_max, *rounds, *audit_cap)?
        }
        Cmd::BanPushout { f1, f2 } => ban_cmds::ban_pushout(&ctx, f1, f2)?,
        Cmd::BanEpsPushout { f1, f2, eps } => ban_cmds::ban_eps_pushout(&ctx, f1, f2, eps)?,
        Cmd::BanFactorStage { chain, map, eps, min_stage } => {
            ban_cmds::ban_factor_stage(&ctx, chain, map, eps, *min_stage)?
        }
        Cmd::GurariiBnf { k, l, catalogue, steps, search_budget, attach_budget, saturation_budget } => {
            let chains = match (k, l) {
                (Some(k), Some(l)) => ban_cmds::Chains::Given(k.clone(), l.clone()),
                _ if !catalogue.is_empty() => ban_cmds::Chains::Twin(catalogue.clone(), *saturation_budget),
                _ => return Err(Failure::Input("gurarii-bnf needs --k and --l, or --catalogue".into())),
            };
            ban_cmds::gurarii_bnf(&ctx, chains, *steps, *search_budget, *attach_budget)?
        }
        Cmd::Verify { kind, first, second, eps, competitors, samples } => match kind {
            Kind::BanCoequalizer => {
                let eps = parse_rational(eps).map_err(|e| Failure::Input(format!("--eps: {e}")))?;
                ban_cmds::verify_ban_coequalizer(&ctx, first, second, &eps, *samples)?
            }
            _ => {
                let eps = parse_dist(eps).map_err(|e| Failure::Input(format!("--eps: {e}")))?;
                let kind = match kind {
                    Kind::Pushout => met_cmds::VerifyKind::Pushout,
                    Kind::Coequalizer => met_cmds::VerifyKind::Coequalizer,
                    Kind::Equalizer => met_cmds::VerifyKind::Equalizer,
                    _ => met_cmds::VerifyKind::Pullback,
                };
                met_cmds::verify(&ctx, kind, first, second, eps, *competitors)?
            }
        },
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(Outcome { doc, report }) => {
            let (text, ok) = report.finish();
            let mut stdout = std::io::stdout().lock();
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &doc) {
                        eprintln!("metcat: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => {
                    let _ = stdout.write_all(doc.as_bytes());
                }
            }
            let _ = stdout.write_all(text.as_bytes());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("metcat: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("metcat: {msg}");
            println!("FAIL");
            ExitCode::from(1)
        }
    }
}
