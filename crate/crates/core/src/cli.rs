//! The `ftsolve` command-line front end.
//!
//! Instance files are TOML, or JSON when the first non-blank character is
//! `{`:
//!
//! ```toml
//! mode = "symmetric-regular"   # optional when a, b1, b4 are given
//! a = 1.0
//! b1 = 2.5
//! b4 = 1.0
//! ```
//!
//! ```toml
//! mode = "general"
//! vertices = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
//! weights = [1, 2, 3, 4]
//! ```
//!
//! Output is `key=value` lines, a JSON object with `--json`, or CSV for
//! `sweep`. Every number carries nine significant digits. Exit status is 0
//! on success, 1 for usage, parse or schema errors and 2 when a solver
//! fails.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::analytic::{complementary_axial, ft_axial, quartic_coefficients, signed_axial, solve_symmetric, SignedKind};
use crate::angles::angles_at;
use crate::equilibrium::classify;
use crate::error::Error;
use crate::geom::{FtSolution, Point3, SymmetricInstance, WeightedTetrahedron};
use crate::numeric::{weiszfeld, SolverConfig};
use crate::plasticity::{verify_invariance, PlasticityInstance};
use crate::quartic::real_roots;

pub const SWEEP_HEADER: &str = "ratio,y,y_complementary,objective,alpha102,alpha304,alpha_cross";

pub const SIGNIFICANT_DIGITS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Solve,
    Classify,
    Angles,
    Complementary,
    Plasticity,
    Quartic,
    Sweep,
}

#[derive(Debug, Parser)]
#[command(name = "ftsolve", version, about = "Weighted Fermat-Torricelli points of tetrahedra")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Instance file (TOML or JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Emit a JSON object instead of key=value lines.
    #[arg(long)]
    pub json: bool,
    /// Stretch factors l1,l2,l3,l4 for `plasticity`.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    pub lambda: Option<Vec<f64>>,
    /// Smallest b1/b4 ratio for `sweep`
    #[arg(long)]
    pub ratio_min: Option<f64>,
    /// Largest b1/b4 ratio for `sweep`
    #[arg(long)]
    pub ratio_max: Option<f64>,
    /// Number of evenly spaced ratios for `sweep`
    #[arg(long)]
    pub steps: Option<usize>,
    /// Relative step tolerance for the iterative solver.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceFile {
    /// Weights may be negative here; only `complementary` accepts that.
    SymmetricRegular {
        a: f64,
        b1: f64,
        b4: f64,
    },
    General {
        vertices: [[f64; 3]; 4],
        weights: [f64; 4],
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    mode: Option<String>,
    a: Option<f64>,
    b1: Option<f64>,
    b4: Option<f64>,
    vertices: Option<Vec<Vec<f64>>>,
    weights: Option<Vec<f64>>,
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn solver(e: Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn schema(e: Error) -> Failure {
    Failure::usage(e.to_string())
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let raw: RawInstance = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?
        } else {
            toml::from_str(text).map_err(|e| format!("invalid TOML: {e}"))?
        };
        let mode = match raw.mode.as_deref() {
            Some(m) => m.to_owned(),
            None if raw.vertices.is_some() || raw.weights.is_some() => "general".into(),
            None => "symmetric-regular".into(),
        };
        match mode.as_str() {
            "symmetric-regular" => {
                if raw.vertices.is_some() || raw.weights.is_some() {
                    return Err("symmetric-regular instances take only a, b1, b4".into());
                }
                let get = |v: Option<f64>, name: &str| v.ok_or_else(|| format!("missing field `{name}`"));
                Ok(InstanceFile::SymmetricRegular {
                    a: get(raw.a, "a")?,
                    b1: get(raw.b1, "b1")?,
                    b4: get(raw.b4, "b4")?,
                })
            }
            "general" => {
                if raw.a.is_some() || raw.b1.is_some() || raw.b4.is_some() {
                    return Err("general instances take only vertices and weights".into());
                }
                let vs = raw.vertices.ok_or("missing field `vertices`")?;
                let ws = raw.weights.ok_or("missing field `weights`")?;
                if vs.len() != 4 || vs.iter().any(|v| v.len() != 3) {
                    return Err("`vertices` must be four coordinate triples".into());
                }
                let weights: [f64; 4] = ws.try_into().map_err(|_| "`weights` must have four entries")?;
                let vertices = std::array::from_fn(|i| [vs[i][0], vs[i][1], vs[i][2]]);
                Ok(InstanceFile::General { vertices, weights })
            }
            other => Err(format!("unknown mode `{other}`")),
        }
    }

    fn symmetric(&self) -> Result<SymmetricInstance, Failure> {
        match *self {
            InstanceFile::SymmetricRegular { a, b1, b4 } => SymmetricInstance::new(a, b1, b4).map_err(schema),
            InstanceFile::General { .. } => Err(Failure::usage("this command needs a symmetric-regular instance")),
        }
    }

    fn tetrahedron(&self) -> Result<WeightedTetrahedron, Failure> {
        match *self {
            InstanceFile::SymmetricRegular { .. } => Ok(self.symmetric()?.tetrahedron()),
            InstanceFile::General { vertices, weights } => {
                WeightedTetrahedron::new(vertices.map(Point3::from), weights).map_err(schema)
            }
        }
    }
}

/// `x` with nine significant digits: fixed notation for exponents in
/// `[-4, 9)`, scientific otherwise.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = SIGNIFICANT_DIGITS - 1;
    let sci = format!("{x:.digits$e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if x == 0.0 {
        format!("{:.digits$}", 0.0)
    } else if (-4..9).contains(&exp) {
        let decimals = (digits as i32 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

fn num(x: f64) -> Value {
    match fmt_sig(x).parse::<f64>() {
        Ok(v) if v.is_finite() => serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number),
        _ => Value::String(fmt_sig(x)),
    }
}

/// Ordered report fields, rendered as lines or as a JSON object.
#[derive(Default)]
struct Report {
    fields: Vec<(String, Field)>,
}

enum Field {
    Text(String),
    Number(f64),
    Numbers(Vec<f64>),
    Integers(Vec<usize>),
}

impl Report {
    fn text(&mut self, k: &str, v: impl Into<String>) -> &mut Self {
        self.fields.push((k.into(), Field::Text(v.into())));
        self
    }

    fn number(&mut self, k: &str, v: f64) -> &mut Self {
        self.fields.push((k.into(), Field::Number(v)));
        self
    }

    fn numbers(&mut self, k: &str, v: impl IntoIterator<Item = f64>) -> &mut Self {
        self.fields.push((k.into(), Field::Numbers(v.into_iter().collect())));
        self
    }

    fn point(&mut self, k: &str, p: Point3) -> &mut Self {
        self.numbers(k, p.to_array())
    }

    fn render(&self, json: bool) -> String {
        if json {
            let mut map = Map::new();
            for (k, f) in &self.fields {
                let v = match f {
                    Field::Text(s) => Value::String(s.clone()),
                    Field::Number(x) => num(*x),
                    Field::Numbers(xs) => Value::Array(xs.iter().map(|x| num(*x)).collect()),
                    Field::Integers(ns) => Value::Array(ns.iter().map(|n| Value::from(*n)).collect()),
                };
                map.insert(k.clone(), v);
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
            s.push('\n');
            s
        } else {
            let mut s = String::new();
            for (k, f) in &self.fields {
                let v = match f {
                    Field::Text(t) => t.clone(),
                    Field::Number(x) => fmt_sig(*x),
                    Field::Numbers(xs) => xs.iter().map(|x| fmt_sig(*x)).collect::<Vec<_>>().join(","),
                    Field::Integers(ns) => ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
                };
                let _ = writeln!(s, "{k}={v}");
            }
            s
        }
    }
}

fn solution_report(sol: &FtSolution) -> Report {
    let mut r = Report::default();
    r.text("case", sol.case.to_string());
    if let Some(y) = sol.y {
        r.number("y", y);
    }
    r.point("point", sol.point).number("objective", sol.objective).number("residual", sol.residual);
    r
}

fn solver_config(args: &Args) -> Result<SolverConfig, Failure> {
    let mut cfg = SolverConfig::default();
    if let Some(tol) = args.tol {
        cfg.tol = tol;
    }
    cfg.validate().map_err(schema)?;
    Ok(cfg)
}

fn solve(args: &Args, inst: &InstanceFile) -> Result<String, Failure> {
    let sol = match inst {
        InstanceFile::SymmetricRegular { .. } => solve_symmetric(&inst.symmetric()?).map_err(Failure::solver)?,
        InstanceFile::General { .. } => {
            let t = inst.tetrahedron()?;
            weiszfeld(&t, &solver_config(args)?).map_err(Failure::solver)?
        }
    };
    Ok(solution_report(&sol).render(args.json))
}

fn classify_cmd(args: &Args, inst: &InstanceFile) -> Result<String, Failure> {
    let label = classify(&inst.tetrahedron()?).map_err(Failure::solver)?;
    let mut r = Report::default();
    r.text("case", label.case.to_string()).numbers("margins", label.margins);
    Ok(r.render(args.json))
}

fn angles_cmd(args: &Args, inst: &InstanceFile) -> Result<String, Failure> {
    let s = inst.symmetric()?;
    let y = ft_axial(&s).map_err(Failure::solver)?;
    let set = angles_at(s.a, y);
    let mut r = Report::default();
    r.number("y", y);
    for (name, v) in [("alpha102", set.alpha_102), ("alpha304", set.alpha_304), ("alpha_cross", set.alpha_cross)] {
        r.number(&format!("{name}_rad"), v).number(&format!("{name}_deg"), v.to_degrees());
    }
    Ok(r.render(args.json))
}

fn complementary_cmd(args: &Args, inst: &InstanceFile) -> Result<String, Failure> {
    let InstanceFile::SymmetricRegular { a, b1, b4 } = *inst else {
        return Err(Failure::usage("complementary needs a symmetric-regular instance"));
    };
    if !(a.is_finite() && a > 0.0) {
        return Err(schema(Error::NonPositiveEdge(a)));
    }
    for w in [b1, b4] {
        if !(w.is_finite() && w != 0.0) {
            return Err(schema(Error::InvalidWeight(w)));
        }
    }
    // Two positive weights name the complementary problem: the A3A4 pair is
    // negated. Explicit signs are taken as given.
    let b4 = if b1 > 0.0 && b4 > 0.0 { -b4 } else { b4 };
    let sa = signed_axial(a, b1, b4).map_err(Failure::solver)?;
    let c = crate::geom::half_axis(a);
    let mut r = Report::default();
    r.text(
        "kind",
        match sa.kind {
            SignedKind::Coincident => "coincident",
            SignedKind::Exterior => "exterior",
        },
    )
    .number("y", sa.y)
    .number("half_axis", c)
    .text("outside", (sa.y.abs() > c).to_string())
    .number("stationarity_defect", sa.stationarity_defect);
    Ok(r.render(args.json))
}

fn plasticity_cmd(args: &Args, inst: &InstanceFile) -> Result<String, Failure> {
    let s = inst.symmetric()?;
    let lambdas: [f64; 4] = args
        .lambda
        .clone()
        .ok_or_else(|| Failure::usage("plasticity needs --lambda l1,l2,l3,l4"))?
        .try_into()
        .map_err(|_| Failure::usage("--lambda takes exactly four values"))?;
    let p = PlasticityInstance::from_symmetric(&s, lambdas).map_err(|e| match e {
        Error::InvalidInput(_) => schema(e),
        e => Failure::solver(e),
    })?;
    let report = verify_invariance(&p, &solver_config(args)?).map_err(Failure::solver)?;
    let mut r = Report::default();
    r.numbers("lambda", lambdas).point("a0", p.a0);
    for (i, v) in report.stretched.vertices().iter().enumerate() {
        r.point(&format!("vertex{}", i + 1), *v);
    }
    r.point("a0_stretched", report.solution.point)
        .number("predicted_a04p", report.predicted_a04p)
        .number("measured_a04p", report.measured_a04p)
        .number("displacement", report.displacement);
    Ok(r.render(args.json))
}

fn quartic_cmd(args: &Args, inst: &InstanceFile) -> Result<String, Failure> {
    let q = quartic_coefficients(&inst.symmetric()?);
    let roots = real_roots(&q).map_err(Failure::solver)?;
    let mut r = Report::default();
    r.numbers("coefficients", q.to_array()).numbers("roots", roots.values());
    r.fields.push(("multiplicities".into(), Field::Integers(roots.roots.iter().map(|x| x.multiplicity).collect())));
    Ok(r.render(args.json))
}

/// One row of the sweep table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub ratio: f64,
    pub y: f64,
    /// Infinite at ratio 1, where the exterior critical point escapes.
    pub y_complementary: f64,
    pub objective: f64,
    pub alpha_102: f64,
    pub alpha_304: f64,
    pub alpha_cross: f64,
}

pub fn sweep_rows(a: f64, b4: f64, ratios: &[f64]) -> Result<Vec<SweepRow>, Error> {
    ratios
        .par_iter()
        .map(|&ratio| {
            let inst = SymmetricInstance::new(a, ratio * b4, b4)?;
            let sol = solve_symmetric(&inst)?;
            let y = sol.y.expect("symmetric solutions carry y");
            let y_complementary = match complementary_axial(&inst) {
                Ok(v) => v,
                Err(Error::EqualWeights) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            let set = angles_at(a, y);
            Ok(SweepRow {
                ratio,
                y,
                y_complementary,
                objective: sol.objective,
                alpha_102: set.alpha_102,
                alpha_304: set.alpha_304,
                alpha_cross: set.alpha_cross,
            })
        })
        .collect()
}

fn sweep_cmd(args: &Args, inst: &InstanceFile) -> Result<String, Failure> {
    let s = inst.symmetric()?;
    let (lo, hi) = match (args.ratio_min, args.ratio_max) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(Failure::usage("sweep needs --ratio-min and --ratio-max")),
    };
    let steps = args.steps.unwrap_or(1);
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) || steps == 0 {
        return Err(Failure::usage("sweep needs 0 < ratio-min <= ratio-max and steps >= 1"));
    }
    let ratios: Vec<f64> = if steps == 1 {
        vec![lo]
    } else {
        (0..steps).map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64).collect()
    };
    let rows = sweep_rows(s.a, s.b4, &ratios).map_err(Failure::solver)?;
    let cols = |r: &SweepRow| [r.ratio, r.y, r.y_complementary, r.objective, r.alpha_102, r.alpha_304, r.alpha_cross];
    if args.json {
        let names: Vec<&str> = SWEEP_HEADER.split(',').collect();
        let arr: Vec<Value> = rows
            .iter()
            .map(|r| Value::Object(names.iter().zip(cols(r)).map(|(k, v)| (k.to_string(), num(v))).collect()))
            .collect();
        let mut s = serde_json::to_string_pretty(&arr).expect("serializable");
        s.push('\n');
        return Ok(s);
    }
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in &rows {
        out.push_str(&cols(r).map(fmt_sig).join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn execute(args: &Args) -> Result<String, Failure> {
    solver_config(args)?;
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", args.input.display())))?;
    let inst = InstanceFile::parse(&text).map_err(Failure::usage)?;
    // Signed weights are only meaningful for the complementary problem.
    if let (InstanceFile::SymmetricRegular { .. }, false) = (&inst, args.command == Command::Complementary) {
        inst.symmetric()?;
    }
    match args.command {
        Command::Solve => solve(args, &inst),
        Command::Classify => classify_cmd(args, &inst),
        Command::Angles => angles_cmd(args, &inst),
        Command::Complementary => complementary_cmd(args, &inst),
        Command::Plasticity => plasticity_cmd(args, &inst),
        Command::Quartic => quartic_cmd(args, &inst),
        Command::Sweep => sweep_cmd(args, &inst),
    }
}

/// Parses `argv`, runs the command and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(&args) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(f) => {
            let _ = writeln!(err, "ftsolve: error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig(0.198357555), "0.198357555");
        assert_eq!(fmt_sig(109.47122063449069), "109.471221");
        assert_eq!(fmt_sig(4.107097027), "4.10709703");
        assert_eq!(fmt_sig(-0.5), "-0.500000000");
        assert_eq!(fmt_sig(0.0), "0.00000000");
        assert_eq!(fmt_sig(1.5e-7), "1.50000000e-7");
        assert_eq!(fmt_sig(123456789.0), "123456789");
        assert_eq!(fmt_sig(1.0e9), "1.00000000e9");
        assert_eq!(fmt_sig(0.000123), "0.000123000000");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
    }

    #[test]
    fn parses_both_syntaxes() {
        let toml = "a = 1.0\nb1 = 2.5\nb4 = 1\n";
        let json = r#"{"a": 1, "b1": 2.5, "b4": 1}"#;
        let want = InstanceFile::SymmetricRegular { a: 1.0, b1: 2.5, b4: 1.0 };
        assert_eq!(InstanceFile::parse(toml).unwrap(), want);
        assert_eq!(InstanceFile::parse(json).unwrap(), want);
        let general = r#"{"mode": "general", "vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]], "weights": [1,1,1,1]}"#;
        assert!(matches!(InstanceFile::parse(general).unwrap(), InstanceFile::General { .. }));
    }

    #[test]
    fn schema_violations() {
        assert!(InstanceFile::parse("a = 1\nb1 = 2\n").is_err());
        assert!(InstanceFile::parse("a = 1\nb1 = 2\nb4 = 1\nextra = 3\n").is_err());
        assert!(InstanceFile::parse("mode = \"other\"\n").is_err());
        assert!(InstanceFile::parse(r#"{"mode": "general", "vertices": [[0,0,0]], "weights": [1,1,1,1]}"#).is_err());
        assert!(InstanceFile::parse("a = 1\nb1 = 2\nb4 = 1\nweights = [1,1,1,1]\n").is_err());
    }
}
