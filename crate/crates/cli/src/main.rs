//! `drwitt`: exact `H^i(X, ℤ_p(r))` and `H^i(X, ℤ/p^m(r))` tables for the
//! catalog varieties, at finite Witt precision.
//!
//! Exit codes: 0 success, 2 invalid request, 3 internal invariant
//! violation (e.g. the enumeration oracle disagrees with the solver).

mod config;
mod output;

use clap::Parser;
use drwitt_core::cohomology::{run_table, TableRequest};
use drwitt_core::fq::FieldDesc;
use drwitt_core::variety::{model_rgamma, VarietyDesc};
use drwitt_core::Error;
use output::OutputFormat;

#[derive(Debug, Parser)]
#[command(
    name = "drwitt",
    about = "Exact p-adic cohomology tables over the truncated Raynaud ring",
    long_about = None
)]
struct Cli {
    /// Base prime p
    #[arg(long)]
    p: Option<u64>,
    /// Extension degree f (the base field is F_{p^f})
    #[arg(long)]
    f: Option<usize>,
    /// Witt precision n
    #[arg(long)]
    n: Option<usize>,
    /// Variety selector: point, p1, or `pN:<N>`
    #[arg(long)]
    variety: Option<String>,
    #[arg(long)]
    i_min: Option<i64>,
    #[arg(long)]
    i_max: Option<i64>,
    #[arg(long)]
    r_min: Option<i64>,
    #[arg(long)]
    r_max: Option<i64>,
    /// Compute H^i(X, Z/p^m(r)) via the derived reduction (needs m < n)
    #[arg(long)]
    mod_pm: Option<usize>,
    /// Output format: text | json | csv
    #[arg(long)]
    format: Option<String>,
    /// Re-derive each cell by exhaustive enumeration where size permits;
    /// any disagreement aborts with exit code 3
    #[arg(long)]
    oracle: Option<bool>,
    /// Plain-text key-value preset file; explicit flags override it
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    /// Embed the model bicomplex in the JSON output
    #[arg(long, default_value_t = false)]
    dump_model: bool,
}

fn main() {
    let code = match run() {
        Ok(()) => 0,
        Err(AppError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(AppError::Invariant(msg)) => {
            eprintln!("internal invariant violation: {msg}");
            3
        }
    };
    std::process::exit(code);
}

enum AppError {
    Invalid(String),
    Invariant(String),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidRequest(_)
            | Error::UnsupportedVariety(_)
            | Error::PrecisionLimit(_)
            | Error::Shape(_) => AppError::Invalid(e.to_string()),
            other => AppError::Invariant(other.to_string()),
        }
    }
}

fn run() -> Result<(), AppError> {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                AppError::Invalid(format!("cannot read config {}: {e}", path.display()))
            })?;
            config::parse_config(&text).map_err(AppError::Invalid)?
        }
        None => Default::default(),
    };
    let pick = |flag: Option<String>, key: &str| -> Result<Option<String>, AppError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => Ok(cfg.get(key).cloned()),
        }
    };
    macro_rules! pick_parsed {
        ($flag:expr, $key:literal, $t:ty) => {
            match $flag {
                Some(v) => Some(v),
                None => config::get_parsed::<$t>(&cfg, $key).map_err(AppError::Invalid)?,
            }
        };
    }

    let p = pick_parsed!(cli.p, "p", u64).unwrap_or(2);
    let f = pick_parsed!(cli.f, "f", usize).unwrap_or(1);
    let n = pick_parsed!(cli.n, "n", usize).unwrap_or(3);
    let variety = pick(cli.variety, "variety")?.unwrap_or_else(|| "p1".to_string());
    let mod_pm = pick_parsed!(cli.mod_pm, "mod-pm", usize);
    let oracle = pick_parsed!(cli.oracle, "oracle", bool).unwrap_or(false);
    let format: OutputFormat = pick(cli.format, "format")?
        .map(|s| s.parse().map_err(AppError::Invalid))
        .transpose()?
        .unwrap_or(OutputFormat::Text);

    // range defaults depend on the variety dimension
    let dim = {
        let field = FieldDesc::new(p, f).map_err(|e| AppError::Invalid(e.to_string()))?;
        VarietyDesc::parse(&variety, field)
            .map_err(|e| AppError::Invalid(e.to_string()))?
            .dimension() as i64
    };
    let i_min = pick_parsed!(cli.i_min, "i-min", i64).unwrap_or(0);
    let i_max = pick_parsed!(cli.i_max, "i-max", i64).unwrap_or(2 * dim + 1);
    let r_min = pick_parsed!(cli.r_min, "r-min", i64).unwrap_or(0);
    let r_max = pick_parsed!(cli.r_max, "r-max", i64).unwrap_or(dim);

    if cli.dump_model && format != OutputFormat::Json {
        return Err(AppError::Invalid(
            "--dump-model requires --format json".to_string(),
        ));
    }

    let req = TableRequest {
        variety,
        p,
        f,
        n,
        i_min,
        i_max,
        r_min,
        r_max,
        mod_pm,
        oracle,
    };
    let cells = run_table(&req)?;

    let rendered = match format {
        OutputFormat::Text => output::render_text(&req, &cells),
        OutputFormat::Csv => output::render_csv(&req, &cells),
        OutputFormat::Json => {
            let model = if cli.dump_model {
                let field = FieldDesc::new(req.p, req.f)
                    .map_err(|e| AppError::Invalid(e.to_string()))?;
                let v = VarietyDesc::parse(&req.variety, field)
                    .map_err(|e| AppError::Invalid(e.to_string()))?;
                let model = model_rgamma(&v, req.n).map_err(AppError::from)?;
                let complex = match req.mod_pm {
                    Some(m) => model.complex.cone_mult(m).map_err(AppError::from)?,
                    None => model.complex,
                };
                Some(complex)
            } else {
                None
            };
            output::render_json(&req, &cells, model.as_ref())
        }
    };
    print!("{rendered}");
    Ok(())
}
