use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use newton_strata::census::{census, CensusCaps, CensusConfig, CensusMode, CensusOutput};
use newton_strata::cyclotomic::{l_function, newton_polygon_of_l};
use newton_strata::dwork::{
    congruence_branch_scan, random_polynomial, trace_congruence_check, CongruenceReport,
};
use newton_strata::field::{
    ExtensionField, FieldDescriptor, FieldElement, DEFAULT_ENUMERATION_CAP,
};
use newton_strata::fqpoly::FqPolynomial;
use newton_strata::hasse::{hasse_g, hasse_h, hasse_p_n, hasse_product};
use newton_strata::polygon::{generic_polygon, hodge_polygon, render_svg, NewtonPolygon};
use newton_strata::strata::StratumParams;
use newton_strata::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const CACHE_ENV: &str = "NEWTON_STRATA_CACHE";

#[derive(Parser)]
#[command(
    name = "newton-strata",
    version,
    about = "Generic Newton polygons and Hasse polynomials of exponential sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hodge polygon HP(d)
    Hodge {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        tsv: bool,
    },
    /// Generic Newton polygon GNP(d, p); requires p >= 3d
    Gnp {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        tsv: bool,
    },
    /// Hasse polynomial in canonical text form
    Hasse {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "h")]
        which: Which,
        /// Print the factor P_n instead of the product (only with --which p)
        #[arg(long)]
        n: Option<usize>,
    },
    /// L-function coefficients, their valuations and the Newton polygon
    Lfunction(PolyArgs),
    /// Newton polygon of the L-function only
    Np {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        tsv: bool,
    },
    /// Stratum census over normalized polynomials
    Census(CensusArgs),
    /// Trace congruence for S_1 over F_p
    Congruence(CongruenceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "P", alias = "p")]
    P,
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "H", alias = "h")]
    H,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Coefficients from the constant term up, comma separated; over F_{p^m}
    /// a coefficient is m colon-separated coordinates, e.g. `0,1:2,0,1`
    #[arg(long)]
    coeffs: String,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP as u64)]
    enumeration_cap: u64,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Number of draws in sample mode
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also run the trace congruence on every polynomial (m = 1 only)
    #[arg(long)]
    congruence: bool,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    tsv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// TOML file with `enumeration` and `exhaustive` caps
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    enumeration_cap: Option<u64>,
    #[arg(long)]
    exhaustive_cap: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Args)]
struct CongruenceArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    p: u64,
    /// Coefficients over F_p from the constant term up
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    coeffs: Option<String>,
    /// Check this many seeded random normalized polynomials
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Working precision N in powers of pi; defaults to 2p
    #[arg(long)]
    precision: Option<usize>,
    /// Report every branch of pi, not only the default one
    #[arg(long)]
    scan_branches: bool,
}

enum Failure {
    Usage(String),
    Violation(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPrime(_)
            | Error::BadDegree { .. }
            | Error::Tier { .. }
            | Error::OutOfRange { .. }
            | Error::NotMonic
            | Error::DegreeMismatch { .. }
            | Error::Precision { .. }
            | Error::Invalid(_) => Failure::Usage(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Other(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(EXIT_VIOLATION)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn print_polygon(poly: &NewtonPolygon, tsv: bool) {
    if tsv {
        print!("{}", poly.to_tsv());
    } else {
        println!("{poly}");
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Hodge { d, tsv } => print_polygon(&hodge_polygon(d)?, tsv),
        Command::Gnp { d, p, tsv } => {
            print_polygon(&generic_polygon(&StratumParams::new(d, p)?)?, tsv)
        }
        Command::Hasse { d, p, which, n } => {
            let params = StratumParams::new(d, p)?;
            let poly = match (which, n) {
                (Which::P, Some(n)) => hasse_p_n(&params, n)?,
                (_, Some(_)) => return Err(Failure::Usage("--n only applies to --which P".into())),
                (Which::P, None) => hasse_product(&params)?,
                (Which::G, None) => hasse_g(&params)?,
                (Which::H, None) => hasse_h(&params)?,
            };
            println!("{poly}");
        }
        Command::Lfunction(args) => {
            let f = parse_polynomial(&args)?;
            let l = l_function(&f, args.enumeration_cap as u128)?;
            let np = newton_polygon_of_l(&l)?;
            let valuations: Vec<Option<String>> = l
                .q_valuations()
                .iter()
                .map(|v| v.as_ref().map(ToString::to_string))
                .collect();
            let out = json!({
                "d": args.d,
                "p": args.p,
                "m": args.m,
                "field": f.field().descriptor(),
                "coefficients": l.coeffs().iter().map(|c| c.to_strings()).collect::<Vec<_>>(),
                "q_valuations": valuations,
                "np": np,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("json value")
            );
        }
        Command::Np { poly, tsv } => {
            let f = parse_polynomial(&poly)?;
            let l = l_function(&f, poly.enumeration_cap as u128)?;
            print_polygon(&newton_polygon_of_l(&l)?, tsv);
        }
        Command::Census(args) => run_census(args)?,
        Command::Congruence(args) => run_congruence(args)?,
    }
    Ok(())
}

fn parse_polynomial(args: &PolyArgs) -> Result<FqPolynomial, Failure> {
    let field = ExtensionField::prime(args.p)?.extend(args.m, 0)?;
    let coeffs = args
        .coeffs
        .split(',')
        .map(|c| parse_element(&field, c.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let f = FqPolynomial::new(&field, coeffs)?;
    if f.degree() != Some(args.d) {
        return Err(Failure::Usage(format!(
            "--coeffs has degree {:?}, expected {}",
            f.degree(),
            args.d
        )));
    }
    StratumParams::new(args.d, args.p)?;
    Ok(f)
}

fn parse_element(field: &ExtensionField, text: &str) -> Result<FieldElement, Failure> {
    let parts: Vec<i64> = text
        .split(':')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Failure::Usage(format!("bad coefficient `{text}`")))
        })
        .collect::<Result<_, _>>()?;
    let p = field.p() as i64;
    match parts.as_slice() {
        [c] => Ok(field.from_i64(*c)),
        _ if parts.len() == field.degree() => {
            Ok(field.element(parts.iter().map(|c| c.rem_euclid(p) as u64).collect())?)
        }
        _ => Err(Failure::Usage(format!(
            "coefficient `{text}` needs 1 or {} coordinates",
            field.degree()
        ))),
    }
}

fn load_caps(args: &CensusArgs) -> Result<CensusCaps, Failure> {
    let mut caps = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => CensusCaps::default(),
    };
    if let Some(c) = args.enumeration_cap {
        caps.enumeration = c;
    }
    if let Some(c) = args.exhaustive_cap {
        caps.exhaustive = c;
    }
    Ok(caps)
}

/// Stores the field moduli of a census under `$NEWTON_STRATA_CACHE`, or checks
/// them against a previously stored copy.
fn sync_moduli_cache(out: &CensusOutput) -> Result<(), Failure> {
    let Some(dir) = std::env::var_os(CACHE_ENV) else {
        return Ok(());
    };
    let dir = PathBuf::from(dir);
    let path = dir.join(format!("fields-p{}-m{}-d{}.json", out.p, out.m, out.d));
    if path.exists() {
        let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
        let cached: Vec<FieldDescriptor> = serde_json::from_str(&text)
            .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
        for desc in &cached {
            ExtensionField::from_descriptor(desc)?;
        }
        if cached != out.fields {
            eprintln!(
                "warning: moduli differ from the cached copy in {}",
                path.display()
            );
        }
        return Ok(());
    }
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let text = serde_json::to_string_pretty(&out.fields).expect("descriptors serialize");
    fs::write(&path, text).map_err(|e| io_err(&path, e))
}

fn run_census(args: CensusArgs) -> Result<(), Failure> {
    let caps = load_caps(&args)?;
    let config = CensusConfig {
        d: args.d,
        p: args.p,
        m: args.m,
        mode: match args.mode {
            ModeArg::Exhaustive => CensusMode::Exhaustive,
            ModeArg::Sample => CensusMode::Sample,
        },
        sample_size: args.samples,
        seed: args.seed,
        with_congruence: args.congruence,
        caps,
    };
    let out = census(&config)?;
    sync_moduli_cache(&out)?;
    if let Some(path) = &args.json {
        fs::write(path, out.to_json()).map_err(|e| io_err(path, e))?;
    }
    if let Some(path) = &args.tsv {
        fs::write(path, out.to_tsv()).map_err(|e| io_err(path, e))?;
    }
    if let Some(path) = &args.svg {
        let mut layers: Vec<(String, &NewtonPolygon)> =
            vec![("HP".into(), &out.hodge), ("GNP".into(), &out.gnp)];
        let mut seen: Vec<&NewtonPolygon> = vec![&out.gnp];
        for r in &out.records {
            if !seen.contains(&&r.np_vertices) {
                seen.push(&r.np_vertices);
                layers.push((format!("NP {}", r.np_vertices), &r.np_vertices));
            }
        }
        let refs: Vec<(&str, &NewtonPolygon)> =
            layers.iter().map(|(l, p)| (l.as_str(), *p)).collect();
        fs::write(path, render_svg(&refs)).map_err(|e| io_err(path, e))?;
    }
    let s = &out.summary;
    println!("d={} p={} m={} records={}", out.d, out.p, out.m, s.total);
    println!("GNP {}", out.gnp);
    println!("H {}", out.hasse_h);
    println!(
        "generic {} non-generic {} hasse-zero {}",
        s.generic, s.non_generic, s.hasse_zero
    );
    println!(
        "violations: theorem {} lies-above {} symmetry {}{}",
        s.theorem_violations,
        s.lies_above_violations,
        s.symmetry_violations,
        s.congruence_failures
            .map(|c| format!(" congruence {c}"))
            .unwrap_or_default()
    );
    if s.passed() {
        Ok(())
    } else {
        Err(Failure::Violation(format!("census summary {s:?}")))
    }
}

fn run_congruence(args: CongruenceArgs) -> Result<(), Failure> {
    let params = StratumParams::new(args.d, args.p)?;
    params.require_congruence_tier()?;
    let field = ExtensionField::prime(args.p)?;
    let polys: Vec<FqPolynomial> = match (&args.coeffs, args.random) {
        (Some(text), _) => {
            let pa = PolyArgs {
                d: args.d,
                p: args.p,
                m: 1,
                coeffs: text.clone(),
                enumeration_cap: DEFAULT_ENUMERATION_CAP as u64,
            };
            vec![parse_polynomial(&pa)?]
        }
        (None, Some(n)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            (0..n)
                .map(|_| random_polynomial(&field, args.d, &mut rng))
                .collect()
        }
        (None, None) => return Err(Failure::Usage("give --coeffs or --random".into())),
    };
    let precision = args.precision.unwrap_or(2 * args.p as usize);
    let mut failures = 0;
    for f in &polys {
        let coeffs: Vec<u64> = f
            .coeffs()
            .iter()
            .map(|c| c.as_prime().expect("prime field"))
            .collect();
        let reports: Vec<CongruenceReport> = if args.scan_branches {
            congruence_branch_scan(f, precision)?
        } else {
            vec![trace_congruence_check(f, precision)?]
        };
        if !reports[0].pass {
            failures += 1;
        }
        for r in reports {
            let line = json!({ "coefficients": coeffs, "report": r });
            println!("{line}");
        }
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "{failures} of {} polynomials fail the congruence",
            polys.len()
        )))
    }
}
