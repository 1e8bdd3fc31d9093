use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;

use wmod::error::CliError;
use wmod::parse::parse_form;
use wmod::response::{factored_string, lambda_out, Response};
use wmod::store::{self, AddOutcome};
use wmod_core::invariants::system_for;
use wmod_core::laska::{laska_reduce, WeierstrassEquation};
use wmod_core::reduction::{
    is_minimal, minimal_model, minimal_twist, minimize_discriminant, ReductionReport,
    SuperellipticCurve,
};
use wmod_core::weighted::{WeightSystem, WeightedPoint};
use wmod_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "wmod",
    version,
    about = "Weighted moduli tools for superelliptic curves c z^m y^(d-m) = f(x, y)"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Curve store path (JSONL). Falls back to $WMOD_STORE.
    #[arg(long, global = true, env = "WMOD_STORE")]
    store: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CurveArgs {
    /// Exponent m of z (m >= 2).
    #[arg(long)]
    m: u32,
    /// The binary form, e.g. "x^6 + 3*x*y^5 - y^6". Univariate input is
    /// homogenized.
    #[arg(long, allow_hyphen_values = true)]
    form: String,
    /// Degree to homogenize univariate input to.
    #[arg(long)]
    degree: Option<usize>,
    /// Twist scalar c.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    twist: String,
}

#[derive(Args)]
struct PointInput {
    /// Exponent m of z; needed with --form.
    #[arg(long)]
    m: Option<u32>,
    /// Curve form; the command then works on its moduli point.
    #[arg(long, allow_hyphen_values = true)]
    form: Option<String>,
    /// Degree to homogenize univariate input to.
    #[arg(long)]
    degree: Option<usize>,
    /// Twist scalar c for --form.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    twist: String,
    /// Raw coordinates x_0,x_1,... (integers or fractions).
    #[arg(long, allow_hyphen_values = true)]
    coords: Option<String>,
    /// Weights q_0,q_1,... for --coords.
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariants, wgcd, normalized point and height of a curve.
    Invariants(CurveArgs),
    /// Reduce to a minimal model over the base field.
    Minimize {
        #[command(flatten)]
        curve: CurveArgs,
        /// Minimize the form discriminant by x -> x/u^m instead.
        #[arg(long)]
        discriminant: bool,
    },
    /// Reduce the moduli point by a twist; realized over the base field
    /// when possible.
    Twist {
        #[command(flatten)]
        curve: CurveArgs,
        /// Keep the twist exponents integral instead of using the full
        /// rational grid.
        #[arg(long)]
        integral: bool,
    },
    /// Weighted height of a point (raw coordinates or a curve's moduli).
    Height(PointInput),
    /// Weighted gcd of a point (raw coordinates or a curve's moduli).
    Wgcd {
        #[command(flatten)]
        input: PointInput,
        /// Rational-exponent weighted gcd instead of the integral one.
        #[arg(long)]
        absolute: bool,
    },
    /// Reduce an integral Weierstrass equation to a minimal one.
    Laska {
        /// Coefficients a1,a2,a3,a4,a6.
        #[arg(long, value_name = "A1,A2,A3,A4,A6", allow_hyphen_values = true)]
        a: String,
    },
    /// Curve database on an append-only JSONL store.
    Db {
        #[command(subcommand)]
        cmd: DbCmd,
    },
}

#[derive(Subcommand)]
enum DbCmd {
    /// Add a curve; duplicates (same canonical key) are reported, not stored.
    Add {
        #[command(flatten)]
        curve: CurveArgs,
        /// Free-form origin tag stored with the record.
        #[arg(long, default_value = "cli")]
        provenance: String,
    },
    /// Find a record by curve, by normalized point, or by id.
    Find(FindArgs),
    /// List every record.
    List,
}

#[derive(Args)]
struct FindArgs {
    /// Record id (hex).
    #[arg(long)]
    id: Option<String>,
    /// Exponent m; needed with --form or --coords.
    #[arg(long)]
    m: Option<u32>,
    /// Curve form; the query curve is reduced before lookup.
    #[arg(long, allow_hyphen_values = true)]
    form: Option<String>,
    /// Degree to homogenize univariate input to.
    #[arg(long)]
    degree: Option<usize>,
    /// Twist scalar c for --form.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    twist: String,
    /// Degree d; needed with --coords.
    #[arg(long)]
    d: Option<usize>,
    /// Moduli point coordinates to look up (normalized before hashing).
    #[arg(long, allow_hyphen_values = true)]
    coords: Option<String>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Invariants(args) => cmd_invariants(&args, cli.json),
        Cmd::Minimize {
            curve,
            discriminant,
        } => {
            if discriminant {
                cmd_minimize_discriminant(&curve, cli.json)
            } else {
                cmd_minimize(&curve, cli.json)
            }
        }
        Cmd::Twist { curve, integral } => cmd_twist(&curve, integral, cli.json),
        Cmd::Height(input) => cmd_height(&input, cli.json),
        Cmd::Wgcd { input, absolute } => cmd_wgcd(&input, absolute, cli.json),
        Cmd::Laska { a } => cmd_laska(&a, cli.json),
        Cmd::Db { cmd } => {
            let store = cli.store.ok_or_else(|| {
                CliError::Usage("no store path: pass --store or set WMOD_STORE".into())
            })?;
            match cmd {
                DbCmd::Add { curve, provenance } => {
                    cmd_db_add(&curve, &provenance, &store, cli.json)
                }
                DbCmd::Find(args) => cmd_db_find(&args, &store, cli.json),
                DbCmd::List => cmd_db_list(&store, cli.json),
            }
        }
    }
}

fn curve_from(args: &CurveArgs) -> Result<SuperellipticCurve, CliError> {
    let form = parse_form(&args.form, args.degree)?;
    let twist = parse_bigint(&args.twist, "--twist")?;
    Ok(SuperellipticCurve::new(args.m, form, twist)?)
}

fn parse_bigint(text: &str, what: &str) -> Result<BigInt, CliError> {
    BigInt::from_str(text.trim())
        .map_err(|_| CliError::Usage(format!("{what} must be an integer, got {text:?}")))
}

fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|part| {
            T::from_str(part.trim())
                .map_err(|_| CliError::Usage(format!("bad entry {part:?} in {what}")))
        })
        .collect()
}

/// Either a raw weighted point or a curve's moduli point.
fn point_from(input: &PointInput) -> Result<WeightedPoint, CliError> {
    match (&input.coords, &input.form) {
        (Some(coords), None) => {
            let weights = input.weights.as_deref().ok_or_else(|| {
                CliError::Usage("--coords needs --weights q_0,q_1,...".into())
            })?;
            let weights: Vec<u32> = parse_list(weights, "--weights")?;
            let coords: Vec<BigRational> = parse_list(coords, "--coords")?;
            Ok(WeightedPoint::new(
                coords,
                WeightSystem::new(weights, "custom")?,
            )?)
        }
        (None, Some(form)) => {
            let m = input
                .m
                .ok_or_else(|| CliError::Usage("--form needs --m".into()))?;
            let curve = curve_from(&CurveArgs {
                m,
                form: form.clone(),
                degree: input.degree,
                twist: input.twist.clone(),
            })?;
            Ok(curve.moduli_point()?)
        }
        _ => Err(CliError::Usage(
            "pass either --coords with --weights, or --form with --m".into(),
        )),
    }
}

fn emit(json: bool, response: &Response, text: &str) {
    if json {
        println!("{}", response.to_json());
    } else {
        println!("{text}");
    }
}

fn minimality(curve: &SuperellipticCurve) -> Result<Option<bool>, CliError> {
    match is_minimal(curve) {
        Ok(b) => Ok(Some(b)),
        Err(CoreError::NonIntegralModuliPoint) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn cmd_invariants(args: &CurveArgs, json: bool) -> Result<(), CliError> {
    let curve = curve_from(args)?;
    let system = curve.invariant_system()?;
    let form_point = curve.form_point()?;
    let moduli = curve.moduli_point()?;
    let minimal = minimality(&curve)?;

    let mut resp = Response::default()
        .with_curve(&curve)?
        .with_invariants(&form_point)
        .with_normalized(&moduli)?;
    resp.minimal = minimal;
    if moduli.is_integral() {
        resp.wgcd = Some(moduli.wgcd()?.to_string());
    }

    let mut text = format!(
        "curve: {curve}\nsystem: {} d = {}, weights ({})\n",
        system.weights().label(),
        system.degree(),
        system
            .weights()
            .weights()
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    for ((value, &weight), coord_text) in form_point
        .coords()
        .iter()
        .zip(system.weights().weights())
        .zip(resp.invariants.as_ref().unwrap().factored.iter())
    {
        text.push_str(&format!("I[{weight}] = {value} = {coord_text}\n"));
    }
    if let Some(wgcd) = &resp.wgcd {
        text.push_str(&format!("wgcd(moduli point) = {wgcd}\n"));
    }
    match minimal {
        Some(b) => text.push_str(&format!("minimal: {b}\n")),
        None => text.push_str("minimal: undefined (non-integral moduli point)\n"),
    }
    text.push_str(&format!(
        "normalized point: [{}]\nheight = {} (argmax index {})",
        resp.point_normalized.as_ref().unwrap().join(" : "),
        resp.height.as_ref().unwrap().decimal,
        resp.height.as_ref().unwrap().argmax_index
    ));
    emit(json, &resp, &text);
    Ok(())
}

fn report_text(report: &ReductionReport, resp: &Response) -> String {
    let mut text = format!("mode: {}\nlambda: {}", report.mode(), report.lambda());
    if report.is_trivial() {
        text.push_str(" (already reduced)");
    }
    text.push('\n');
    match report.realized_equation() {
        Some(eq) => text.push_str(&format!("realized: {eq}\n")),
        None => text.push_str("realized: none over the base field\n"),
    }
    if report.realization_mismatch() {
        text.push_str("realization mismatch: candidate equation dropped\n");
    }
    text.push_str(&format!(
        "output point: [{}]\ndefined over base: {}",
        resp.point_normalized.as_ref().unwrap().join(" : "),
        report.defined_over_base()
    ));
    if let Some(note) = report.extension_note() {
        text.push_str(&format!("\nextension: {note}"));
    }
    text
}

fn cmd_minimize(args: &CurveArgs, json: bool) -> Result<(), CliError> {
    let curve = curve_from(args)?;
    let report = minimal_model(&curve)?;
    let mut resp = Response::default()
        .with_curve(&curve)?
        .with_report(&report)?;
    if let Some(realized) = report.realized_equation() {
        resp.minimal = minimality(realized)?;
    }
    let text = report_text(&report, &resp);
    emit(json, &resp, &text);
    Ok(())
}

fn cmd_minimize_discriminant(args: &CurveArgs, json: bool) -> Result<(), CliError> {
    let curve = curve_from(args)?;
    let before = curve.form().discriminant()?;
    let (reduced, u) = minimize_discriminant(&curve)?;
    let after = reduced.form().discriminant()?;

    let mut resp = Response::default()
        .with_curve(&reduced)?
        .with_normalized(&reduced.moduli_point()?)?;
    resp.scaling = Some(u.to_string());
    resp.minimal = minimality(&reduced)?;

    let text = format!(
        "substitution: x -> x/u^m with u = {u}\nreduced: {reduced}\ndiscriminant: {} -> {}",
        factored_string(&before),
        factored_string(&after)
    );
    emit(json, &resp, &text);
    Ok(())
}

fn cmd_twist(args: &CurveArgs, integral: bool, json: bool) -> Result<(), CliError> {
    let curve = curve_from(args)?;
    let report = minimal_twist(&curve, integral)?;
    let mut resp = Response::default()
        .with_curve(&curve)?
        .with_report(&report)?;
    if let Some(realized) = report.realized_equation() {
        resp.minimal = minimality(realized)?;
    }
    let text = report_text(&report, &resp);
    emit(json, &resp, &text);
    Ok(())
}

fn cmd_height(input: &PointInput, json: bool) -> Result<(), CliError> {
    let point = point_from(input)?;
    let resp = Response::default().with_normalized(&point)?;
    let height = resp.height.as_ref().unwrap();
    let text = format!(
        "normalized point: [{}]\nheight = {} (argmax index {}, log = {})",
        resp.point_normalized.as_ref().unwrap().join(" : "),
        height.decimal,
        height.argmax_index,
        point.weighted_height()?.log_decimal(12)
    );
    emit(json, &resp, &text);
    Ok(())
}

fn cmd_wgcd(input: &PointInput, absolute: bool, json: bool) -> Result<(), CliError> {
    let point = point_from(input)?;
    let mut resp = Response::default();
    let text;
    if absolute {
        let map = point.abs_wgcd()?;
        resp.wgcd = Some(map.to_string());
        resp.lambda = Some(lambda_out(&map));
        text = format!("absolute wgcd = {map}");
    } else {
        let value = point.wgcd()?;
        resp.wgcd = Some(value.to_string());
        text = format!("wgcd = {value}");
    }
    emit(json, &resp, &text);
    Ok(())
}

fn cmd_laska(a: &str, json: bool) -> Result<(), CliError> {
    let coeffs: Vec<BigInt> = parse_list(a, "--a")?;
    let [a1, a2, a3, a4, a6]: [BigInt; 5] = coeffs
        .try_into()
        .map_err(|_| CliError::Usage("--a needs exactly five integers a1,a2,a3,a4,a6".into()))?;
    let equation = WeierstrassEquation::new(a1, a2, a3, a4, a6);
    let reduction = laska_reduce(&equation)?;
    let minimal = reduction.minimal();
    if json {
        let out = serde_json::json!({
            "minimal_equation": minimal
                .coefficients()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>(),
            "u": reduction.u().to_string(),
            "r": reduction.r().to_string(),
            "s": reduction.s().to_string(),
            "t": reduction.t().to_string(),
            "discriminant": minimal.discriminant().to_string(),
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    } else {
        println!(
            "minimal: {minimal}\nu = {}, r = {}, s = {}, t = {}\ndiscriminant = {}",
            reduction.u(),
            reduction.r(),
            reduction.s(),
            reduction.t(),
            factored_string(&BigRational::from(minimal.discriminant()))
        );
    }
    Ok(())
}

fn cmd_db_add(
    args: &CurveArgs,
    provenance: &str,
    store_path: &std::path::Path,
    json: bool,
) -> Result<(), CliError> {
    let curve = curve_from(args)?;
    let record = store::record_for_curve(&curve, provenance)?;
    let outcome = store::db_add(&record, store_path)?;
    if json {
        let (status, id) = match &outcome {
            AddOutcome::Added(id) => ("added", id),
            AddOutcome::Duplicate(id) => ("duplicate", id),
        };
        let out = serde_json::json!({
            "outcome": status,
            "id": id,
            "record": serde_json::to_value(&record).expect("record"),
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    } else {
        match outcome {
            AddOutcome::Added(id) => println!("added {id}"),
            AddOutcome::Duplicate(id) => println!("duplicate of {id}"),
        }
    }
    Ok(())
}

fn cmd_db_find(
    args: &FindArgs,
    store_path: &std::path::Path,
    json: bool,
) -> Result<(), CliError> {
    let id = match (&args.id, &args.form, &args.coords) {
        (Some(id), None, None) => id.clone(),
        (None, Some(form), None) => {
            let m = args
                .m
                .ok_or_else(|| CliError::Usage("--form needs --m".into()))?;
            let curve = curve_from(&CurveArgs {
                m,
                form: form.clone(),
                degree: args.degree,
                twist: args.twist.clone(),
            })?;
            let (key, _) = store::curve_key(&curve)?;
            store::record_id(&key)
        }
        (None, None, Some(coords)) => {
            let m = args
                .m
                .ok_or_else(|| CliError::Usage("--coords needs --m".into()))?;
            let d = args
                .d
                .ok_or_else(|| CliError::Usage("--coords needs --d".into()))?;
            let system = system_for(d)?;
            let coords: Vec<BigRational> = parse_list(coords, "--coords")?;
            let point = WeightedPoint::new(coords, system.weights().clone())?.normalize()?;
            store::record_id(&store::canonical_key(m, d, &point))
        }
        _ => {
            return Err(CliError::Usage(
                "pass exactly one of --id, --form (with --m) or --coords (with --m and --d)"
                    .into(),
            ))
        }
    };
    let found = store::db_find(&id, store_path)?;
    if json {
        let out = match &found {
            Some(record) => serde_json::json!({
                "found": true,
                "record": serde_json::to_value(record).expect("record"),
            }),
            None => serde_json::json!({ "found": false, "id": id }),
        };
        println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    } else {
        match found {
            Some(record) => println!(
                "{} m={} d={} form=[{}] height={} added {}",
                record.id,
                record.m,
                record.d,
                record.form_coeffs.join(", "),
                record.height.decimal,
                record.created_at
            ),
            None => println!("no match for {id}"),
        }
    }
    Ok(())
}

fn cmd_db_list(store_path: &std::path::Path, json: bool) -> Result<(), CliError> {
    let records = store::db_list(store_path)?;
    if json {
        let out = serde_json::to_value(&records).expect("records");
        println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    } else if records.is_empty() {
        println!("empty store");
    } else {
        for record in &records {
            println!(
                "{} m={} d={} height={} minimal={} {}",
                &record.id[..12.min(record.id.len())],
                record.m,
                record.d,
                record.height.decimal,
                record
                    .minimal
                    .map_or_else(|| "undefined".to_string(), |b| b.to_string()),
                record.created_at
            );
        }
    }
    Ok(())
}
