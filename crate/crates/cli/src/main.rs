use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use compser_core::decompose::Setting;
use compser_core::mu_star::{mu_star_over, MuStarExpansion};
use compser_core::oracle::run_battery;
use compser_core::report::{
    DecompositionReport, ExtensionDto, MuStarReport, SubrepsReport, TripleDto, ValidateReport,
    VerifyReport,
};
use compser_core::{
    decompose, decompose_from_langlands, enumerate_extensions, mu_star_induced, sp_upper_mu_star,
    Config, Error, FilterMode, Segment,
};

#[derive(Parser)]
#[command(
    name = "compser",
    version,
    about = "Composition series of induced representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Instance file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Also write the report as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Overrides `options.max_tuples`.
    #[arg(long)]
    max_tuples: Option<u64>,
    /// Overrides `options.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Print the constituents layer by layer.
    #[arg(long)]
    layers: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Family,
    Sp,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Raw,
    Positive,
}

#[derive(Subcommand)]
enum Command {
    /// Check the strongly positive triple and the family conditions.
    Validate(Common),
    /// Expand μ* of an induced representation.
    MuStar {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "family")]
        source: Source,
        #[arg(long, value_enum, default_value = "positive")]
        mode: Mode,
    },
    /// List the irreducible subrepresentations of ∏_S δ(Δ) ⋊ σ.
    Subreps(Common),
    /// Full composition series of ∏_S δ(Δ) ⋊ σ.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Family indices kept inside the Langlands quotient (S_2); the rest of S is induced.
        #[arg(long, value_delimiter = ',')]
        from_langlands: Option<Vec<usize>>,
    },
    /// Run the multiplicity oracle on the standard queries.
    Verify(Common),
}

enum Failure {
    Validation(anyhow::Error),
    Invariant(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) => Failure::Invariant(e.into()),
            other => Failure::Validation(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Validation(e)
    }
}

fn load(common: &Common) -> Result<Config, Failure> {
    let text = std::fs::read_to_string(&common.config)
        .with_context(|| format!("reading {}", common.config.display()))?;
    let mut config = Config::from_toml_str(&text)?;
    if let Some(n) = common.max_tuples {
        config.options.max_tuples = u128::from(n);
    }
    if let Some(s) = common.seed {
        config.options.seed = s;
    }
    Ok(config)
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    if let Some(path) = path {
        let mut text = serde_json::to_string_pretty(value).context("serializing report")?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn family_segments(config: &Config) -> Vec<Segment> {
    config.family.iter().map(|e| e.segment()).collect()
}

fn validate(common: &Common) -> Result<(), Failure> {
    let config = load(common)?;
    let sp = config.sp()?;
    let report = config.family_report()?;
    let out = ValidateReport::new(&sp, &config.family, report);
    print!("{}", out.to_text());
    write_json(common.json.as_deref(), &out)?;
    if out.family_report.is_valid() {
        config.setting()?;
        Ok(())
    } else {
        Err(Failure::Validation(anyhow::anyhow!(
            "family conditions fail"
        )))
    }
}

fn mu_star(common: &Common, source: Source, mode: Mode) -> Result<(), Failure> {
    let config = load(common)?;
    let mode = match mode {
        Mode::Raw => FilterMode::Raw,
        Mode::Positive => FilterMode::PositiveFiltered,
    };
    let expansion: MuStarExpansion = match source {
        Source::Family => mu_star_induced(&family_segments(&config), config.context.cusp().clone()),
        Source::Sp => sp_upper_mu_star(&config.sp()?, mode)?,
        Source::Full => mu_star_over(
            &family_segments(&config),
            sp_upper_mu_star(&config.sp()?, mode)?,
        ),
    };
    if !expansion.graded_consistent() {
        return Err(
            Error::InvariantViolation("expansion is not graded consistently".into()).into(),
        );
    }
    let out = MuStarReport::new(&expansion, mode);
    print!("{}", out.to_text());
    write_json(common.json.as_deref(), &out)
}

fn subreps(common: &Common) -> Result<(), Failure> {
    let config = load(common)?;
    let setting = config.setting()?;
    let sigma = config.sigma(&setting)?;
    let extensions = enumerate_extensions(&sigma, &setting.entries(setting.s()))?;
    let distinct: BTreeSet<_> = extensions.iter().map(|e| &e.triple).collect();
    if distinct.len() != extensions.len() {
        return Err(Error::InvariantViolation("repeated extension".into()).into());
    }
    let out = SubrepsReport {
        s: setting.s().to_vec(),
        sigma: TripleDto::from_triple(&sigma),
        extensions: extensions
            .iter()
            .map(ExtensionDto::from_extension)
            .collect(),
        expected: 1 << setting.l_prime(setting.s()),
    };
    print!("{}", out.to_text());
    write_json(common.json.as_deref(), &out)
}

fn run_decompose(common: &Common, from_langlands: Option<&[usize]>) -> Result<(), Failure> {
    let config = load(common)?;
    let setting = config.setting()?;
    let sigma = config.sigma(&setting)?;
    let result = match from_langlands {
        None => decompose(&setting, &sigma)?,
        Some(s2) => {
            let s1: Vec<usize> = setting
                .s()
                .iter()
                .copied()
                .filter(|i| !s2.contains(i))
                .collect();
            decompose_from_langlands(&setting, &s1, s2, &sigma)?
        }
    };
    let out = DecompositionReport::new(&setting, &sigma, &result);
    print!("{}", out.to_text(common.layers));
    write_json(common.json.as_deref(), &out)
}

fn permutation_check(
    setting: &Setting,
    sigma: &compser_core::AdmissibleTriple,
    seed: u64,
) -> Result<bool, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = setting.s().to_vec();
    s.shuffle(&mut rng);
    let shuffled = Setting::new(
        setting.sp().clone(),
        setting.family().to_vec(),
        s,
        setting.y().to_vec(),
    )?;
    let labels = |r: compser_core::DecompositionResult| -> BTreeSet<_> {
        r.constituents.into_iter().map(|c| c.label).collect()
    };
    Ok(labels(decompose(setting, sigma)?) == labels(decompose(&shuffled, sigma)?))
}

fn verify(common: &Common) -> Result<(), Failure> {
    let config = load(common)?;
    let setting = config.setting()?;
    let sigma = config.sigma(&setting)?;
    let outcomes = run_battery(&setting, config.options.max_tuples)?;
    let out = VerifyReport::new(&outcomes);
    print!("{}", out.to_text());
    let permuted = permutation_check(&setting, &sigma, config.options.seed)?;
    println!(
        "decomposition invariant under a permutation of S (seed {}): {}",
        config.options.seed,
        if permuted { "ok" } else { "MISMATCH" }
    );
    write_json(common.json.as_deref(), &out)?;
    if out.passed() && permuted {
        Ok(())
    } else {
        Err(Failure::Invariant(anyhow::anyhow!(
            "oracle disagrees with the predicted counts"
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate(c) => validate(c),
        Command::MuStar {
            common,
            source,
            mode,
        } => mu_star(common, *source, *mode),
        Command::Subreps(c) => subreps(c),
        Command::Decompose {
            common,
            from_langlands,
        } => run_decompose(common, from_langlands.as_deref()),
        Command::Verify(c) => verify(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Invariant(e)) => {
            eprintln!("invariant violation: {e:#}");
            ExitCode::from(2)
        }
    }
}
