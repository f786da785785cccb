//! `tdeform`: exact t-deformed convolution from the command line.
//!
//! Operands are file paths, `-` for stdin, or inline JSON. Results go to
//! stdout (or `--out`) as JSON or CSV. Exit codes: 0 success, 1 when the
//! computation rejects its input, 2 for malformed input or usage.

mod output;

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use tdeform_core::classical::{
    bdlp_cumulants, classical_conv, mixture_moments, moments_discrete, DiscreteLaw, MixtureSpec,
};
use tdeform_core::generators::{
    eta_closed_form, evolve, finite_free_generator_apply, forward_residual, generator_apply,
    EtaSeries, Family, LevyTriplet, SeriesSemigroup,
};
use tdeform_core::limits::{clt_table, lln_table};
use tdeform_core::special::{
    bessel_series, binomial_series, hermite_semigroup, hermite_series, hypergeometric_series,
    jacobi_series, laguerre_series, HypergeometricSpec,
};
use tdeform_core::tconv::norm_t_r;
use tdeform_core::{
    c_transform, classical_cumulants, e_transform, finite_free_conv, from_cumulants,
    parse_rational, phi_t, power_sums, tconv, CumulantVector, Exec, Poly, Rational, TParam,
    TruncatedSeries,
};

use output::{Format, Output};

#[derive(Parser, Debug)]
#[command(
    name = "tdeform",
    version,
    about = "Exact t-deformed convolution, cumulants and generators"
)]
struct Cli {
    /// Deformation parameter: a rational such as -1 or 7/3, or d:N for finite mode.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_t)]
    t: Option<TParam>,
    /// Truncation order for constructed series (default 8); truncates input series.
    #[arg(long, global = true, env = "TDEFORM_ORDER")]
    order: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// A ⊞^t B.
    Conv { a: String, b: String },
    /// A ⊞^d B on series in finite mode (uses --t d:N, or --d).
    Dconv {
        #[arg(long)]
        d: Option<u32>,
        a: String,
        b: String,
    },
    /// Cumulants κ_1..κ_N of a series.
    Cumulants { a: String },
    /// The series with the given cumulants (a CumulantVector, or a bare list with --t).
    FromCumulants { kappas: String },
    /// A named family or hypergeometric series.
    Series(SeriesArgs),
    /// Power sums p_1..p_N.
    Powersums { a: String },
    /// Law of large numbers table.
    Lln(TableArgs),
    /// Central limit theorem table; A needs κ_1 = 0 and κ_2 = 1.
    Clt(TableArgs),
    /// Moment series of X + Y from those of X and Y.
    ClassicalConv { mx: String, my: String },
    /// Moment series of a product of Beta and gamma factors.
    Mixture { spec: String },
    /// η of a closed-form family.
    Eta(GenArgs),
    /// The generator applied to A.
    ApplyGenerator {
        #[command(flatten)]
        gen: GenArgs,
        a: String,
    },
    /// A evolved for time s.
    Evolve {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, value_parser = parse_rat)]
        s: Rational,
        a: String,
    },
    /// Forward-equation residuals at time s.
    ForwardCheck {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, value_parser = parse_rat)]
        s: Rational,
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
        a: String,
    },
    /// Finite free convolution of two monic polynomials of equal degree.
    FinfreeConv { f: String, g: String },
    /// A finite-mode generator acting on a polynomial (degree sets d).
    FinfreeGenerator {
        #[arg(long, value_enum, default_value_t = FamilyName::Hermite)]
        family: FamilyName,
        #[arg(long, value_parser = parse_rat)]
        lambda: Option<Rational>,
        f: String,
    },
    /// Truncated (t, r) norm.
    Norm {
        #[arg(long, value_parser = parse_rat)]
        r: Rational,
        a: String,
    },
    /// Φ_t(A).
    Phi { a: String },
    /// E^t[A].
    ETransform { a: String },
    /// Coefficients of log Ψ_X for a moment series.
    ClassicalCumulants { m: String },
    /// Background driving process cumulants c_n ↦ s n c_n.
    Bdlp {
        #[arg(long, value_parser = parse_rat)]
        s: Rational,
        cumulants: String,
    },
    /// Moment series of a discrete law.
    Moments { law: String },
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long, value_enum)]
    family: SeriesFamily,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rat)]
    lambda: Option<Rational>,
    /// Hermite variance.
    #[arg(long, value_parser = parse_rat)]
    s: Option<Rational>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rat)]
    a: Option<Rational>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rat)]
    b: Option<Rational>,
    /// HypergeometricSpec JSON for --family hypergeometric.
    #[arg(long)]
    spec: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeriesFamily {
    Binomial,
    Hermite,
    Laguerre,
    Bessel,
    Jacobi,
    Hypergeometric,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Comma-separated list of m values.
    #[arg(long, value_delimiter = ',', required = true)]
    ms: Vec<u64>,
    /// Compute rows one at a time.
    #[arg(long)]
    sequential: bool,
    a: String,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyName>,
    /// Rate for the binomial family.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rat)]
    lambda: Option<Rational>,
    /// LevyTriplet JSON for --family levy.
    #[arg(long)]
    triplet: Option<String>,
    /// Use this η series instead of a family.
    #[arg(long)]
    eta: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyName {
    Hermite,
    Laguerre,
    Binomial,
    Levy,
}

#[derive(Serialize)]
struct Applied<'a> {
    eta: &'a EtaSeries,
    result: &'a TruncatedSeries,
}

/// Exit code plus a machine-readable error body.
#[derive(Debug)]
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl Failure {
    fn input(kind: &str, message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: kind.into(),
            message: message.into(),
        }
    }
}

impl From<tdeform_core::Error> for Failure {
    fn from(e: tdeform_core::Error) -> Self {
        let code = if matches!(e, tdeform_core::Error::Parse(_)) {
            2
        } else {
            1
        };
        Failure {
            code,
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

const DEFAULT_ORDER: usize = 8;

type CliResult<T> = Result<T, Failure>;

fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_t(s: &str) -> Result<TParam, String> {
    s.parse::<TParam>().map_err(|e| e.to_string())
}

/// Reads an operand: inline JSON, `-` for stdin, or a file path.
fn read_operand(src: &str) -> CliResult<String> {
    let trimmed = src.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(src.to_string());
    }
    if src == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::input("io", format!("stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read_to_string(src).map_err(|e| Failure::input("io", format!("{src}: {e}")))
}

fn load<T: DeserializeOwned>(src: &str) -> CliResult<T> {
    let text = read_operand(src)?;
    serde_json::from_str(&text).map_err(|e| Failure::input("parse", format!("{src}: {e}")))
}

/// Loads a series, truncating it to `order` when that is given.
fn load_series(src: &str, order: Option<usize>) -> CliResult<TruncatedSeries> {
    let a: TruncatedSeries = load(src)?;
    match order {
        Some(n) if n > a.order() => Err(Failure::input(
            "usage",
            format!("{src}: --order {n} exceeds the input order {}", a.order()),
        )),
        Some(n) => Ok(a.with_order(n)),
        None => Ok(a),
    }
}

fn need_t(t: &Option<TParam>) -> CliResult<TParam> {
    t.clone()
        .ok_or_else(|| Failure::input("usage", "this command needs --t"))
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> CliResult<T> {
    v.clone()
        .ok_or_else(|| Failure::input("usage", format!("missing {flag}")))
}

fn semigroup(gen: &GenArgs, t: &TParam) -> CliResult<SeriesSemigroup> {
    let family = match need(&gen.family, "--family")? {
        FamilyName::Hermite => Family::Hermite,
        FamilyName::Laguerre => Family::Laguerre,
        FamilyName::Binomial => Family::Binomial {
            lambda: need(&gen.lambda, "--lambda")?,
        },
        FamilyName::Levy => Family::Levy(load::<LevyTriplet>(&need(&gen.triplet, "--triplet")?)?),
    };
    Ok(SeriesSemigroup::closed(family, t.clone()))
}

fn eta_for(gen: &GenArgs, t: &TParam, order: usize) -> CliResult<EtaSeries> {
    if let Some(src) = &gen.eta {
        let eta: EtaSeries = load(src)?;
        if eta.order() != order {
            return Ok(EtaSeries::new(eta.series().with_order(order))?);
        }
        return Ok(eta);
    }
    Ok(eta_closed_form(&semigroup(gen, t)?, order)?)
}

fn load_cumulants(src: &str, t: &Option<TParam>) -> CliResult<CumulantVector> {
    let value: serde_json::Value = load(src)?;
    if value.is_array() {
        let kappas: Vec<String> = serde_json::from_value(value)
            .map_err(|e| Failure::input("parse", format!("{src}: {e}")))?;
        let kappas = kappas
            .iter()
            .map(|k| parse_rational(k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CumulantVector::new(need_t(t)?, kappas))
    } else {
        serde_json::from_value(value).map_err(|e| Failure::input("parse", format!("{src}: {e}")))
    }
}

fn series_cmd(args: &SeriesArgs, t: &TParam, order: usize) -> CliResult<TruncatedSeries> {
    Ok(match args.family {
        SeriesFamily::Binomial => binomial_series(&need(&args.lambda, "--lambda")?, t, order),
        SeriesFamily::Hermite => match &args.s {
            Some(s) => hermite_semigroup(s, t, order)?,
            None => hermite_series(t, order),
        },
        SeriesFamily::Laguerre => laguerre_series(&need(&args.lambda, "--lambda")?, t, order)?,
        SeriesFamily::Bessel => bessel_series(&need(&args.a, "--a")?, t, order)?,
        SeriesFamily::Jacobi => {
            jacobi_series(&need(&args.b, "--b")?, &need(&args.a, "--a")?, t, order)?
        }
        SeriesFamily::Hypergeometric => {
            let spec: HypergeometricSpec = load(&need(&args.spec, "--spec")?)?;
            hypergeometric_series(&spec, order)?
        }
    })
}

fn run(cli: &Cli) -> CliResult<Output> {
    let order = cli.order.unwrap_or(DEFAULT_ORDER);
    let exec = |seq: bool| {
        if seq {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    };
    Ok(match &cli.command {
        Command::Conv { a, b } => {
            let t = need_t(&cli.t)?;
            Output::Series(tconv(
                &load_series(a, cli.order)?,
                &load_series(b, cli.order)?,
                &t,
            )?)
        }
        Command::Dconv { d, a, b } => {
            let t = match (d, &cli.t) {
                (Some(d), _) => TParam::finite(*d)?,
                (None, Some(t @ TParam::Finite(_))) => t.clone(),
                _ => return Err(Failure::input("usage", "dconv needs --d N or --t d:N")),
            };
            Output::Series(tconv(
                &load_series(a, cli.order)?,
                &load_series(b, cli.order)?,
                &t,
            )?)
        }
        Command::Cumulants { a } => {
            let t = need_t(&cli.t)?;
            Output::Vector(c_transform(&load_series(a, cli.order)?, &t)?.kappas)
        }
        Command::FromCumulants { kappas } => {
            let kv = load_cumulants(kappas, &cli.t)?;
            let n = cli.order.unwrap_or(kv.order());
            Output::Series(from_cumulants(&kv, n)?)
        }
        Command::Series(args) => Output::Series(series_cmd(args, &need_t(&cli.t)?, order)?),
        Command::Powersums { a } => Output::Vector(power_sums(&load_series(a, cli.order)?)?),
        Command::Lln(args) => {
            let t = need_t(&cli.t)?;
            Output::Lln(lln_table(
                &load_series(&args.a, cli.order)?,
                &t,
                &args.ms,
                exec(args.sequential),
            )?)
        }
        Command::Clt(args) => {
            let t = need_t(&cli.t)?;
            Output::Clt(clt_table(
                &load_series(&args.a, cli.order)?,
                &t,
                &args.ms,
                exec(args.sequential),
            )?)
        }
        Command::ClassicalConv { mx, my } => Output::Series(classical_conv(
            &load_series(mx, cli.order)?,
            &load_series(my, cli.order)?,
        )?),
        Command::Mixture { spec } => {
            Output::Series(mixture_moments(&load::<MixtureSpec>(spec)?, order))
        }
        Command::Eta(gen) => {
            let t = need_t(&cli.t)?;
            Output::Series(eta_for(gen, &t, order)?.into())
        }
        Command::ApplyGenerator { gen, a } => {
            let t = need_t(&cli.t)?;
            let a = load_series(a, cli.order)?;
            let eta = eta_for(gen, &t, a.order())?;
            let result = generator_apply(&eta, &a, &t)?;
            Output::json(&Applied {
                eta: &eta,
                result: &result,
            })
        }
        Command::Evolve { gen, s, a } => {
            let t = need_t(&cli.t)?;
            let a = load_series(a, cli.order)?;
            let eta = eta_for(gen, &t, a.order())?;
            Output::Series(evolve(&a, &eta, s, &t)?)
        }
        Command::ForwardCheck { gen, s, h, a } => {
            let t = need_t(&cli.t)?;
            let a = load_series(a, cli.order)?;
            let eta = eta_for(gen, &t, a.order())?;
            Output::json(&forward_residual(&a, &eta, s, *h, &t)?)
        }
        Command::FinfreeConv { f, g } => Output::Poly(finite_free_conv(&load(f)?, &load(g)?)?),
        Command::FinfreeGenerator { family, lambda, f } => {
            let f: Poly = load(f)?;
            let t = TParam::finite(f.degree() as u32)?;
            let gen = GenArgs {
                family: Some(*family),
                lambda: lambda.clone(),
                triplet: None,
                eta: None,
            };
            Output::Poly(finite_free_generator_apply(&f, &semigroup(&gen, &t)?)?)
        }
        Command::Norm { r, a } => {
            let t = need_t(&cli.t)?;
            Output::json(&norm_t_r(&load_series(a, cli.order)?, r, &t)?)
        }
        Command::Phi { a } => Output::Series(phi_t(&load_series(a, cli.order)?, &need_t(&cli.t)?)?),
        Command::ETransform { a } => {
            Output::Series(e_transform(&load_series(a, cli.order)?, &need_t(&cli.t)?)?)
        }
        Command::ClassicalCumulants { m } => {
            Output::Vector(classical_cumulants(&load_series(m, cli.order)?)?)
        }
        Command::Bdlp { s, cumulants } => {
            let c: Vec<String> = load(cumulants)?;
            let c = c
                .iter()
                .map(|x| parse_rational(x))
                .collect::<Result<Vec<_>, _>>()?;
            Output::Vector(bdlp_cumulants(&c, s)?)
        }
        Command::Moments { law } => {
            Output::Series(moments_discrete(&load::<DiscreteLaw>(law)?, order))
        }
    })
}

fn emit(out: &Output, cli: &Cli) -> CliResult<()> {
    let text = out
        .render(cli.format)
        .ok_or_else(|| Failure::input("usage", "this result has no CSV form; use --format json"))?;
    match &cli.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::input("io", format!("{path}: {e}")))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli).and_then(|out| emit(&out, &cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind, "message": f.message }));
            ExitCode::from(f.code)
        }
    }
}
