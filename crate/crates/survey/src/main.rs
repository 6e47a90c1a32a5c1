use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use euclid_core::euclidean::{similar_density, EIdeal, SearchBounds};
use euclid_core::quadratic_field::Signature;
use euclid_core::sieve::{large_sieve_panel, SievePanel};
use euclid_core::spec::{parse_element, IdealSpec};
use euclid_survey::scan::{rows, scan};
use euclid_survey::{b1_count, b2_lower_bound, certify_field, certify_fixtures, Survey, SurveyError, SurveyResult};
use serde_json::json;

#[derive(Parser)]
#[command(name = "euclid", version, about = "Euclidean ideals in quadratic fields: scans, certificates and sieve panels")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant, integral basis and units of Q(√d).
    FieldInfo {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Class number, generator, and the classes of small primes.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// List prime ideals up to this norm with their classes.
        #[arg(long, default_value_t = 30)]
        primes: u64,
    },
    /// Per-prime records (CSV) for every rational prime up to X.
    Scan {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        x: u64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Counts of B_1 primes on a grid.
    B1Count {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        out: Format,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Certified lower bounds for B_2 counts on a grid.
    B2Bound {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<u64>,
        #[arg(long, default_value_t = 20)]
        height: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        out: Format,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Motzkin search over E plus independent re-verification. Without
    /// --d, runs the seven imaginary fixture fields.
    Certify {
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
        #[arg(long, default_value = "gen")]
        ideal: String,
        #[arg(long, default_value_t = 30)]
        norm_bound: u64,
        #[arg(long, default_value_t = 20)]
        height: u64,
        #[arg(long, default_value_t = 6)]
        depth: u32,
        /// `json` prints the full certificate, `summary` the outcome only.
        #[arg(long, value_enum, default_value_t = CertFormat::Summary)]
        out: CertFormat,
    },
    /// Large-sieve quantities for the standard panel of (C, n, X, Q).
    SievePanel {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        out: Format,
    },
    /// Primes q = (x + y)·I^{-1}·C^{-1} reached from one coset.
    Density {
        #[command(flatten)]
        field: FieldArgs,
        /// I^{-1} as an ideal spec (default: I = R).
        #[arg(long, default_value = "unit")]
        inverse: String,
        /// Coset representative `a,b[/e]`, meaning (a + bω)/e.
        #[arg(long, allow_hyphen_values = true)]
        coset: String,
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 30)]
        height: u64,
    },
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    /// `unit`, `gen`, or an HNF triple `a,b,c`.
    #[arg(long, default_value = "gen")]
    ideal: String,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Cache file; defaults to `scan-d<D>.cache` under $EUCLID_CACHE_DIR.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, env = "EUCLID_CACHE_DIR", hide_env_values = true)]
    cache_dir: Option<PathBuf>,
}

impl RunArgs {
    fn cache_path(&self, d: i64) -> Option<PathBuf> {
        self.cache.clone().or_else(|| self.cache_dir.as_ref().map(|dir| dir.join(format!("scan-d{d}.cache"))))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertFormat {
    Json,
    Summary,
}

fn survey(f: &FieldArgs) -> SurveyResult<Survey> {
    let spec: IdealSpec = f.ideal.parse()?;
    Survey::new(f.d, &spec)
}

fn run(cli: Cli) -> SurveyResult<String> {
    match cli.cmd {
        Command::FieldInfo { d } => {
            let k = euclid_core::make_field(d)?;
            let signature = match k.signature() {
                Signature::Real => "real",
                Signature::Imaginary => "imaginary",
            };
            let v = json!({
                "d": d,
                "disc": k.disc(),
                "omega": k.omega_str(),
                "signature": signature,
                "torsion_order": k.units().torsion_order,
                "fundamental_unit": k.fundamental_unit().ok().map(|e| e.to_string()),
            });
            Ok(pretty(&v))
        }
        Command::Classgroup { d, primes } => {
            let k = euclid_core::make_field(d)?;
            let g = euclid_core::ClassGroup::compute(&k)?;
            let list: Vec<_> = k
                .primes_up_to(primes)
                .iter()
                .map(|p| json!({"ideal": p.ideal().to_string(), "norm": p.norm(), "split": p.split_type(), "class": g.ideal_class_integral(&k, p.ideal()).0}))
                .collect();
            Ok(pretty(&json!({"d": d, "h": g.order(), "generator": g.generator().ideal().to_string(), "primes": list})))
        }
        Command::Scan { field, x, run } => {
            let s = survey(&field)?;
            let recs = scan(&s, x, run.jobs, run.cache_path(s.d()).as_deref())?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows(&s, &recs) {
                w.serialize(r).expect("rows serialize");
            }
            Ok(String::from_utf8(w.into_inner().expect("in-memory")).expect("utf-8"))
        }
        Command::B1Count { field, grid, out, run } => {
            let s = survey(&field)?;
            let rep = b1_count(&s, &grid, run.jobs, run.cache_path(s.d()).as_deref())?;
            Ok(match out {
                Format::Csv => rep.to_csv(),
                Format::Json => rep.to_json(),
            })
        }
        Command::B2Bound { field, grid, height, out, run } => {
            let s = survey(&field)?;
            let rep = b2_lower_bound(&s, &grid, height, run.jobs, run.cache_path(s.d()).as_deref())?;
            Ok(match out {
                Format::Csv => rep.to_csv(),
                Format::Json => rep.to_json(),
            })
        }
        Command::Certify { d, ideal, norm_bound, height, depth, out } => {
            let bounds = SearchBounds { norm_bound, height, depth };
            match d {
                Some(d) => {
                    let s = Survey::new(d, &ideal.parse()?)?;
                    let o = certify_field(&s, bounds)?;
                    Ok(match out {
                        CertFormat::Json => o.assignment.to_json(),
                        CertFormat::Summary => pretty(&serde_json::to_value(&o).expect("outcome serializes")),
                    })
                }
                None => {
                    let all = certify_fixtures(bounds)?;
                    Ok(pretty(&serde_json::to_value(&all).expect("outcomes serialize")))
                }
            }
        }
        Command::SievePanel { field, n, x, q, out: _ } => {
            let s = survey(&field)?;
            let panel = SievePanel::standard(&s.k, &s.g, &s.c, n, x, q)?;
            let rep = large_sieve_panel(&s.k, &s.g, &panel)?;
            Ok(pretty(&serde_json::to_value(&rep).expect("report serializes")))
        }
        Command::Density { field, inverse, coset, x, height } => {
            let s = survey(&field)?;
            let inv: IdealSpec = inverse.parse()?;
            let i = EIdeal::from_inverse(inv.resolve(&s.k, &s.g)?);
            let xe = parse_element(&coset)?;
            let rep = similar_density(&s.k, &xe, &i, &s.c, x, height)?;
            let w: Vec<_> = rep
                .witnesses
                .iter()
                .map(|(y, q)| json!({"y": euclid_core::FieldElem::integral(y.clone()).to_spec(), "q": q.ideal().to_string(), "norm": q.norm()}))
                .collect();
            Ok(pretty(&json!({"count": rep.count, "witnesses": w})))
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("euclid: {e}");
            exit(&e)
        }
    }
}

fn exit(e: &SurveyError) -> ExitCode {
    ExitCode::from(e.exit_code() as u8)
}
