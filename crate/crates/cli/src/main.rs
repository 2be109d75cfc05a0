//! `lgp`: evaluate, tabulate and check Krawtchouk, Tratnik and λ-Griffiths
//! polynomials from the command line.
//!
//! Exit status: 0 on success, 1 when a check finds a nonzero residual or a
//! Gram matrix that is not diagonal, 2 for configuration errors.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use lambda_griffiths::exact::{format_rational, parse_rational};
use lambda_griffiths::griffiths::{
    g_biorth_gram, g_eval, g_gram_with_weight, g_tilde_eval, g_tilde_table, omega, EvalMethod,
    GriffithsTable, ParamSet,
};
use lambda_griffiths::krawtchouk::{k_eval, k_gram, KrawtchoukParams, KrawtchoukTable};
use lambda_griffiths::operators::{build_operator, FamilyParams, OperatorKind, StencilOperator};
use lambda_griffiths::oscillator::fit_and_verify;
use lambda_griffiths::suites::{run_suite, Suite, SuiteConfig};
use lambda_griffiths::tratnik::{
    solve_diagonalizing_weight, t_eval, t_gram_diagnostic, trinomial_weight, TratnikParams,
    TratnikTable,
};
use lambda_griffiths::{Error, Matrix, Rational, TriangleGrid};

#[derive(Parser, Debug)]
#[command(
    name = "lgp",
    version,
    about = "Exact Krawtchouk, Tratnik and lambda-Griffiths polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one polynomial value
    Eval(EvalArgs),
    /// Tabulate every value over both triangles
    Table(TableArgs),
    /// Gram matrix and diagonality verdict
    Gram(GramArgs),
    /// Run a seeded exact-residual suite
    Check(CheckArgs),
    /// Dump a stencil operator as JSON
    Operators(OperatorArgs),
    /// Fit the oscillator product against the polynomial model
    Oscillator(OscillatorArgs),
}

#[derive(Args, Debug, Clone)]
struct Params {
    /// Krawtchouk parameter
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    p: Option<Rational>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    p1: Option<Rational>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    p2: Option<Rational>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    p3: Option<Rational>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    lambda: Option<Rational>,
    #[arg(long = "N")]
    n: usize,
}

#[derive(Args, Debug, Clone)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this path instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Krawtchouk,
    Tratnik,
    Griffiths,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    TratnikXy,
    TratnikYx,
}

impl From<Method> for EvalMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Direct => EvalMethod::DirectSum,
            Method::TratnikXy => EvalMethod::ViaTratnikXY,
            Method::TratnikYx => EvalMethod::ViaTratnikYX,
        }
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 0)]
    i: usize,
    #[arg(long, default_value_t = 0)]
    j: usize,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    x: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    y: i64,
    /// Evaluation route for the griffiths family
    #[arg(long, value_enum, default_value_t = Method::Direct)]
    method: Method,
    /// Use the normalization in which the duality is a plain swap
    #[arg(long)]
    tilde: bool,
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    tilde: bool,
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    output: Output,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GramKind {
    Krawtchouk,
    Biorth,
    TratnikDiagnostic,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum WeightChoice {
    /// The weight that diagonalizes the pairing
    Default,
    /// biorth only: `Ω_{x,y}(p2, p3)` without the `(1-p3)^(-2y)` correction
    Omega,
    /// tratnik-diagnostic only: weight solved from the off-diagonal conditions
    Solved,
}

#[derive(Args, Debug)]
struct GramArgs {
    #[arg(long, value_enum)]
    kind: GramKind,
    #[arg(long, value_enum, default_value_t = WeightChoice::Default)]
    weight: WeightChoice,
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    /// Largest N checked
    #[arg(long = "N", default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random parameter sets per suite
    #[arg(long, default_value_t = 3)]
    samples: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct OperatorArgs {
    /// Emit the operator as JSON
    #[arg(long, required = true)]
    dump: bool,
    /// e.g. griffiths-rec-x, tratnik-diff-j, identity
    #[arg(long, value_parser = parse_kind)]
    kind: OperatorKind,
    #[command(flatten)]
    params: Params,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct OscillatorArgs {
    /// Fit, verify every entry, and print the report
    #[arg(long, required = true)]
    verify: bool,
    #[arg(long, default_value_t = 0.4, allow_hyphen_values = true)]
    phi: f64,
    #[arg(long, default_value_t = 0.9, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, default_value_t = 1.2, allow_hyphen_values = true)]
    psi: f64,
    /// Real part of the twist angle
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    varphi: f64,
    /// Imaginary part of the twist angle
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    varphi_im: f64,
    #[arg(long = "N", default_value_t = 3)]
    n: usize,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<OperatorKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Config(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn require(v: &Option<Rational>, flag: &str) -> Result<Rational, Failure> {
    v.clone()
        .ok_or_else(|| Failure::Config(format!("--{flag} is required here")))
}

impl Params {
    fn krawtchouk(&self) -> Result<KrawtchoukParams, Failure> {
        Ok(KrawtchoukParams::new(require(&self.p, "p")?, self.n)?)
    }

    fn tratnik(&self) -> Result<TratnikParams, Failure> {
        Ok(TratnikParams::new(
            require(&self.p1, "p1")?,
            require(&self.p2, "p2")?,
            self.n,
        )?)
    }

    fn griffiths(&self) -> Result<ParamSet, Failure> {
        Ok(ParamSet::new(
            require(&self.p1, "p1")?,
            require(&self.p2, "p2")?,
            require(&self.p3, "p3")?,
            require(&self.lambda, "lambda")?,
            self.n,
        )?)
    }
}

fn emit(text: &str, out: &Option<std::path::PathBuf>) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// One line; used for the larger dumps.
fn json_line(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn eval(a: &EvalArgs) -> Outcome {
    let value = match a.family {
        Family::Krawtchouk => k_eval(a.i, a.x, &a.params.krawtchouk()?)?,
        Family::Tratnik => t_eval(a.i, a.j, a.x, a.y, &a.params.tratnik()?)?,
        Family::Griffiths => {
            let ps = a.params.griffiths()?;
            if a.tilde {
                g_tilde_eval(a.i, a.j, a.x, a.y, &ps)?
            } else {
                g_eval(a.i, a.j, a.x, a.y, &ps, a.method.into())?
            }
        }
    };
    let text = match a.output.format {
        Format::Csv => format!("{}\n", format_rational(&value)),
        Format::Json => json_text(&json!({ "value": format_rational(&value) })),
    };
    emit(&text, &a.output.out)
}

/// Records `(index columns, value)` rendered as CSV or a JSON array.
fn records(header: &[&str], rows: Vec<(Vec<usize>, Rational)>, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = header.join(",");
            s.push_str(",value\n");
            for (idx, v) in rows {
                for k in idx {
                    let _ = write!(s, "{k},");
                }
                let _ = writeln!(s, "{}", format_rational(&v));
            }
            s
        }
        Format::Json => {
            let arr: Vec<Value> = rows
                .into_iter()
                .map(|(idx, v)| {
                    let mut obj = serde_json::Map::new();
                    for (h, k) in header.iter().zip(idx) {
                        obj.insert((*h).to_string(), json!(k));
                    }
                    obj.insert("value".into(), json!(format_rational(&v)));
                    Value::Object(obj)
                })
                .collect();
            json_line(&Value::Array(arr))
        }
    }
}

fn triangle_records(grid: &TriangleGrid, m: &Matrix) -> Vec<(Vec<usize>, Rational)> {
    let mut rows = Vec::with_capacity(grid.len() * grid.len());
    for (r, (i, j)) in grid.iter().enumerate() {
        for (c, (x, y)) in grid.iter().enumerate() {
            rows.push((vec![i, j, x, y], m[(r, c)].clone()));
        }
    }
    rows
}

fn table(a: &TableArgs) -> Outcome {
    let text = match a.family {
        Family::Krawtchouk => {
            let kp = a.params.krawtchouk()?;
            let t = KrawtchoukTable::new(&kp.p, kp.n);
            let rows = (0..=kp.n)
                .flat_map(|i| (0..=kp.n).map(move |x| (i, x)))
                .map(|(i, x)| (vec![i, x], t.get(i, x as i64)))
                .collect();
            records(&["i", "x"], rows, a.output.format)
        }
        Family::Tratnik => {
            let t = TratnikTable::new(&a.params.tratnik()?)?;
            records(
                &["i", "j", "x", "y"],
                triangle_records(t.grid(), t.values()),
                a.output.format,
            )
        }
        Family::Griffiths => {
            let ps = a.params.griffiths()?;
            let grid = TriangleGrid::new(ps.n);
            let m = if a.tilde {
                g_tilde_table(&ps)?
            } else {
                GriffithsTable::new(&ps)?.values().clone()
            };
            records(
                &["i", "j", "x", "y"],
                triangle_records(&grid, &m),
                a.output.format,
            )
        }
    };
    emit(&text, &a.output.out)
}

fn params_json(p: &Params) -> Value {
    let mut obj = serde_json::Map::new();
    for (k, v) in [
        ("p", &p.p),
        ("p1", &p.p1),
        ("p2", &p.p2),
        ("p3", &p.p3),
        ("lambda", &p.lambda),
    ] {
        if let Some(q) = v {
            obj.insert(k.into(), json!(format_rational(q)));
        }
    }
    Value::Object(obj)
}

fn gram(a: &GramArgs) -> Outcome {
    let bad_weight = |k: &str| Failure::Config(format!("--weight {k} does not apply to this kind"));
    let (m, labels): (Matrix, Vec<Vec<usize>>) = match a.kind {
        GramKind::Krawtchouk => {
            if a.weight != WeightChoice::Default {
                return Err(bad_weight("omega/solved"));
            }
            let kp = a.params.krawtchouk()?;
            (k_gram(&kp), (0..=kp.n).map(|i| vec![i]).collect())
        }
        GramKind::Biorth => {
            let ps = a.params.griffiths()?;
            let m = match a.weight {
                WeightChoice::Default => g_biorth_gram(&ps)?,
                WeightChoice::Omega => {
                    let partner = ps.partner()?.lambda;
                    let w = |x, y| omega(x, y, &ps.p2, &ps.p3, ps.n).expect("validated parameters");
                    g_gram_with_weight(w, &ps, &partner)?
                }
                WeightChoice::Solved => return Err(bad_weight("solved")),
            };
            (
                m,
                TriangleGrid::new(ps.n)
                    .iter()
                    .map(|(i, j)| vec![i, j])
                    .collect(),
            )
        }
        GramKind::TratnikDiagnostic => {
            let tp = a.params.tratnik()?;
            let grid = TriangleGrid::new(tp.n);
            let m = match a.weight {
                WeightChoice::Default => {
                    t_gram_diagnostic(|x, y| trinomial_weight(x, y, &tp), &tp)?
                }
                WeightChoice::Solved => {
                    let w = solve_diagonalizing_weight(&tp)?.ok_or_else(|| {
                        Failure::Check("no unique diagonalizing weight at these parameters".into())
                    })?;
                    let g = grid.clone();
                    t_gram_diagnostic(
                        move |x, y| w[g.index_of(x as i64, y as i64).unwrap()].clone(),
                        &tp,
                    )?
                }
                WeightChoice::Omega => return Err(bad_weight("omega")),
            };
            (m, grid.iter().map(|(i, j)| vec![i, j]).collect())
        }
    };
    let diagonal = m.is_diagonal();
    let kind = match a.kind {
        GramKind::Krawtchouk => "krawtchouk",
        GramKind::Biorth => "biorth",
        GramKind::TratnikDiagnostic => "tratnik-diagnostic",
    };
    let text = match a.output.format {
        Format::Json => {
            let rows: Vec<Value> = (0..m.rows())
                .map(|r| Value::Array(m.row(r).iter().map(|q| json!(format_rational(q))).collect()))
                .collect();
            json_text(&json!({
                "kind": kind,
                "N": a.params.n,
                "params": params_json(&a.params),
                "index": labels,
                "diagonal": diagonal,
                "matrix": rows,
            }))
        }
        Format::Csv => {
            let mut s = format!("# diagonal: {diagonal}\n");
            let cols = labels[0].len();
            let names: Vec<String> = ["row", "col"]
                .iter()
                .flat_map(|side| (0..cols).map(move |k| format!("{side}{k}")))
                .collect();
            let _ = writeln!(s, "{},value", names.join(","));
            for (r, a_) in labels.iter().enumerate() {
                for (c, b_) in labels.iter().enumerate() {
                    let idx: Vec<String> = a_.iter().chain(b_).map(|k| k.to_string()).collect();
                    let _ = writeln!(s, "{},{}", idx.join(","), format_rational(&m[(r, c)]));
                }
            }
            s
        }
    };
    emit(&text, &a.output.out)?;
    if diagonal {
        Ok(())
    } else {
        let (r, c, v) = m.first_off_diagonal().expect("not diagonal");
        Err(Failure::Check(format!(
            "{kind} Gram is not diagonal: entry {:?} x {:?} = {}",
            labels[r],
            labels[c],
            format_rational(v)
        )))
    }
}

fn check(a: &CheckArgs) -> Outcome {
    let config = SuiteConfig {
        seed: a.seed,
        max_n: a.n,
        samples: a.samples,
    };
    let out = run_suite(a.suite, &config)?;
    let text = match a.output.format {
        Format::Csv => match &out.counterexample {
            None => format!(
                "{} passed: {} residuals exactly zero\n",
                a.suite, out.checked
            ),
            Some(c) => format!(
                "{} FAILED: {}\n",
                a.suite,
                c.to_string().replace("reproduce: ", "reproduce: lgp ")
            ),
        },
        Format::Json => json_text(&json!({
            "suite": a.suite.name(),
            "N": a.n,
            "seed": a.seed,
            "samples": a.samples,
            "checked": out.checked,
            "passed": out.passed(),
            "counterexample": out.counterexample.as_ref().map(|c| json!({
                "check": c.check,
                "indices": c.indices,
                "params": c.params,
                "residual": format_rational(&c.residual),
                "reproducer": format!("lgp {}", c.reproducer),
            })),
        })),
    };
    emit(&text, &a.output.out)?;
    match out.counterexample {
        None => Ok(()),
        Some(c) => Err(Failure::Check(format!("{}: {}", a.suite, c.check))),
    }
}

fn operators(a: &OperatorArgs) -> Outcome {
    let v = match a.kind {
        OperatorKind::Identity => {
            StencilOperator::identity(TriangleGrid::new(a.params.n)).to_json(None)
        }
        OperatorKind::Tratnik(_) => {
            let fp = FamilyParams::Tratnik(a.params.tratnik()?);
            build_operator(a.kind, &fp)?.to_json(Some(&fp))
        }
        OperatorKind::Griffiths(_) => {
            let fp = FamilyParams::Griffiths(a.params.griffiths()?);
            build_operator(a.kind, &fp)?.to_json(Some(&fp))
        }
    };
    emit(&json_line(&v), &a.out)
}

fn oscillator(a: &OscillatorArgs) -> Outcome {
    let varphi = Complex64::new(a.varphi, a.varphi_im);
    let report = fit_and_verify(a.phi, a.theta, a.psi, varphi, a.n)?;
    let v = serde_json::to_value(&report).expect("report serializes");
    emit(&json_text(&v), &a.out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Table(a) => table(a),
        Command::Gram(a) => gram(a),
        Command::Check(a) => check(a),
        Command::Operators(a) => operators(a),
        Command::Oscillator(a) => oscillator(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("lgp: check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("lgp: {msg}");
            ExitCode::from(2)
        }
    }
}
