use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use num_rational::Ratio;
use serde::Serialize;

use pdfill_core::complex::{ChainComplex, ComplexError};
use pdfill_core::filling::{isoperimetric_sweep, FillingError, FillingOptions, SweepConfig, TransferPair};
use pdfill_core::folner::{folner_sweep, Family, FolnerError};
use pdfill_core::group_ring::{Character, GroupRingError};
use pdfill_core::groups::{make_group, Group, GroupError, GroupSpec};
use pdfill_core::hyperbolicity::{
    slimness_sweep, HyperbolicityError, SlimConstants, SlimnessConfig, TriangleSample, DEFAULT_TRIANGLE_LIMIT,
};
use pdfill_core::ring::RingDescriptor;
use pdfill_core::serde_ratio;

const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Parser)]
#[command(
    name = "pdfill",
    version,
    about = "Group-ring chain complexes, fillings and coarse-geometry probes"
)]
struct Cli {
    /// Worker threads for the sweep kernels.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Emit CSV instead of JSON (fill, folner, slim).
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Presentation complex and derived complexes.
    Complex {
        group: String,
        #[arg(default_value = "Z")]
        ring: String,
        #[arg(long)]
        dualize: bool,
        /// Character such as "a:-1,b:1"; applied after --dualize.
        #[arg(long)]
        twist: Option<String>,
        #[arg(long)]
        euler: bool,
        /// Field for homology with trivial coefficients.
        #[arg(long)]
        homology: Option<String>,
    },
    /// Isoperimetric sweep over null-homotopic words.
    Fill {
        group: String,
        #[arg(default_value = "Z")]
        ring: String,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long, default_value_t = 8)]
        max_word: usize,
        #[arg(long, default_value_t = 1)]
        coeff_bound: i64,
        #[arg(long, default_value_t = FillingOptions::default().face_budget)]
        face_budget: usize,
        #[arg(long, default_value_t = FillingOptions::default().node_limit)]
        node_limit: u64,
    },
    /// Følner ratios over a family of finite sets.
    Folner {
        group: String,
        /// balls:R, boxes:N or connected:K
        #[arg(long, default_value = "balls:6")]
        family: String,
        #[arg(long, default_value = "1/5")]
        threshold: String,
    },
    /// Slim-triangle estimate.
    Slim {
        group: String,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        /// Also maximize over every choice of geodesic sides.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = DEFAULT_TRIANGLE_LIMIT)]
        sample_limit: usize,
    },
    /// N, k = κN² + 1 and m = κN for a presentation.
    Constants {
        group: String,
        #[arg(long, default_value_t = 1)]
        kappa: i64,
    },
    /// Transferred filling bound on the permuted Z^2 resolution pair.
    Transfer {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Budget(String),
    Invariant(String),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Invariant(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Budget(m) => write!(f, "budget exceeded: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violated: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GroupRingError> for CliError {
    fn from(e: GroupRingError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::NotAComplex(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FillingError> for CliError {
    fn from(e: FillingError) -> Self {
        match e {
            FillingError::Group(g) => g.into(),
            FillingError::Invariant(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FolnerError> for CliError {
    fn from(e: FolnerError) -> Self {
        match e {
            FolnerError::Group(g) => g.into(),
            FolnerError::TooLarge(_) => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<HyperbolicityError> for CliError {
    fn from(e: HyperbolicityError) -> Self {
        match e {
            HyperbolicityError::Group(g) => g.into(),
            HyperbolicityError::TooManyGeodesics { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn budget() -> Result<usize, CliError> {
    match std::env::var("PDFILL_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("PDFILL_BUDGET must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn group(spec: &str) -> Result<Arc<Group>, CliError> {
    Ok(make_group(&spec.parse::<GroupSpec>()?)?)
}

fn ring(text: &str) -> Result<RingDescriptor, CliError> {
    text.parse().map_err(|e| CliError::Usage(format!("{e}")))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct DifferentialOut {
    degree: usize,
    rows: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct HomologyOut {
    field: String,
    dims: Vec<usize>,
}

#[derive(Serialize)]
struct ComplexOut {
    group: String,
    ring: String,
    dualized: bool,
    twist: Option<String>,
    ranks: Vec<usize>,
    differentials: Vec<DifferentialOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    euler: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    homology: Option<HomologyOut>,
}

#[derive(Serialize)]
struct TransferOut {
    chain_maps_verified: bool,
    #[serde(flatten)]
    check: pdfill_core::filling::TransferCheck,
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Complex {
            group: g,
            ring: r,
            dualize,
            twist,
            euler,
            homology,
        } => {
            let g = group(g)?;
            let r = ring(r)?;
            let mut c = ChainComplex::presentation_complex(&g, r)?;
            c.verify()?;
            if *dualize {
                c = c.dualize();
                c.verify()?;
            }
            if let Some(text) = twist {
                let rho = Character::parse(text, r, g.generator_count())?;
                c = c.twist(&rho)?;
                c.verify()?;
            }
            let homology = match homology {
                Some(field) => {
                    let field = ring(field)?;
                    Some(HomologyOut {
                        field: field.to_string(),
                        dims: c.homology_trivial_coeffs(field)?,
                    })
                }
                None => None,
            };
            let out = ComplexOut {
                group: g.to_string(),
                ring: r.to_string(),
                dualized: *dualize,
                twist: twist.clone(),
                ranks: c.ranks().to_vec(),
                differentials: c
                    .differentials()
                    .iter()
                    .enumerate()
                    .map(|(i, d)| DifferentialOut {
                        degree: i + 1,
                        rows: d.to_text_rows(),
                    })
                    .collect(),
                euler: euler.then(|| c.euler_characteristic()),
                homology,
            };
            Ok(json(&out))
        }
        Command::Fill {
            group: g,
            ring: r,
            radius,
            max_word,
            coeff_bound,
            face_budget,
            node_limit,
        } => {
            let g = group(g)?;
            let config = SweepConfig {
                radius: *radius,
                word_length_cap: *max_word,
                coeff_bound: *coeff_bound,
                ring: ring(r)?,
                max_elements: budget()?,
                filling: FillingOptions {
                    face_budget: *face_budget,
                    node_limit: *node_limit,
                },
            };
            let report = isoperimetric_sweep(&g, &config)?;
            if !cli.csv {
                return Ok(json(&report));
            }
            let mut s = String::from("word,cycle_norm,status,filler_norm,ratio,optimal\n");
            for c in &report.per_cycle {
                let status = serde_json::to_value(c.status).expect("status serializes");
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    c.word,
                    c.cycle_norm,
                    status.as_str().unwrap_or_default(),
                    c.filler_norm.map(|n| n.to_string()).unwrap_or_default(),
                    c.ratio.as_ref().map(serde_ratio::to_string).unwrap_or_default(),
                    c.optimal
                ));
            }
            Ok(s)
        }
        Command::Folner {
            group: g,
            family,
            threshold,
        } => {
            let g = group(g)?;
            let family: Family = family.parse()?;
            let threshold: Ratio<i64> = threshold
                .parse()
                .map_err(|_| CliError::Usage(format!("threshold must be a rational p/q, got {threshold:?}")))?;
            let report = folner_sweep(&g, family, threshold, budget()?)?;
            if !cli.csv {
                return Ok(json(&report));
            }
            let mut s = String::from("set_size,ratio\n");
            for p in &report.series {
                s.push_str(&format!("{},{}\n", p.set_size, serde_ratio::to_string(&p.ratio)));
            }
            Ok(s)
        }
        Command::Slim {
            group: g,
            radius,
            exhaustive,
            sample_limit,
        } => {
            let g = group(g)?;
            let max_elements = budget()?;
            let config = |radius| SlimnessConfig {
                radius,
                sample: TriangleSample::Auto {
                    limit: *sample_limit,
                    seed: cli.seed,
                },
                exhaustive: *exhaustive,
                max_elements,
            };
            if !cli.csv {
                let report = slimness_sweep(&g, &config(*radius))?;
                return Ok(json(&report));
            }
            let mut s = String::from("radius,delta_hat\n");
            for r in 1..=*radius {
                let report = slimness_sweep(&g, &config(r))?;
                s.push_str(&format!("{r},{}\n", report.delta_hat));
            }
            Ok(s)
        }
        Command::Constants { group: g, kappa } => {
            let g = group(g)?;
            Ok(json(&SlimConstants::for_presentation(g.presentation(), *kappa)?))
        }
        Command::Transfer { samples } => {
            let pair = TransferPair::z2_swap()?;
            let verified = pair.verify()?;
            if !verified {
                return Err(CliError::Invariant("transfer chain maps do not commute".into()));
            }
            let check = pair.check(*samples, cli.seed)?;
            if check.boundary_failures > 0 {
                return Err(CliError::Invariant(format!(
                    "{} transferred fillers have the wrong boundary",
                    check.boundary_failures
                )));
            }
            Ok(json(&TransferOut {
                chain_maps_verified: verified,
                check,
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    let result = pool.install(|| run(&cli)).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(CliError::Io),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(CliError::Io),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
