//! The `realdescent` command line.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 symmetry validation
//! failure, 3 resource limit, 4 certificate failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::descent::{
    self, validate_symmetry, Branch, DescentError, DescentProblem, DescentReport, InvarianceMode, MapKind, WStatus,
};
use crate::ideal::{Budget, Ideal, IdealError};
use crate::parser::{parse_problem_file, ParseError};
use crate::poly::MonomialOrder;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_SYMMETRY: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;

pub const BUDGET_ENV: &str = "REALDESCENT_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "realdescent",
    version,
    about = "Descend a complex affine variety with an antiholomorphic involution to the real subfield"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Grevlex,
    Lex,
}

impl From<OrderArg> for MonomialOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Grevlex => MonomialOrder::GrevLex,
            OrderArg::Lex => MonomialOrder::Lex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct CommonArgs {
    /// Problem file
    pub file: PathBuf,
    /// Maximum number of S-pairs per Gröbner computation
    #[arg(long)]
    pub budget: Option<u64>,
    /// Decide invariance and membership up to radicals
    #[arg(long)]
    pub radical: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full descent and print the report
    Descend {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        order: Option<OrderArg>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Skip the verification certificates
        #[arg(long)]
        no_verify: bool,
        /// Include wall-clock timings (makes output nondeterministic)
        #[arg(long)]
        timings: bool,
    },
    /// Validate the symmetry only
    Check {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print the reduced Gröbner basis of the ideal section
    Gb {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        order: Option<OrderArg>,
    },
    /// Project the descended model onto a subset of its variables
    Project {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated variables to keep, e.g. t1,t2,t3
        #[arg(long, value_delimiter = ',')]
        keep: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(ParseError),
    Descent(DescentError),
    Io(std::io::Error),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Parse(_) | Failure::Io(_) => EXIT_PARSE,
            Failure::Descent(DescentError::InvalidSymmetry { .. }) => EXIT_SYMMETRY,
            Failure::Descent(DescentError::Ideal(IdealError::ResourceLimit { .. })) => EXIT_RESOURCE,
            Failure::Descent(DescentError::NotInvariant { .. }) => EXIT_CERTIFICATE,
            Failure::Descent(_) => EXIT_PARSE,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("usage error: {m}"),
            Failure::Parse(e) => format!("parse error at {e}"),
            Failure::Descent(e) => e.to_string(),
            Failure::Io(e) => format!("i/o error: {e}"),
        }
    }
}

impl From<DescentError> for Failure {
    fn from(e: DescentError) -> Self {
        Failure::Descent(e)
    }
}

impl From<IdealError> for Failure {
    fn from(e: IdealError) -> Self {
        Failure::Descent(e.into())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn budget_for(flag: Option<u64>) -> Result<Budget, Failure> {
    if let Some(b) = flag {
        return Ok(Budget::with_pairs(b));
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Budget::with_pairs)
            .map_err(|_| Failure::Usage(format!("{BUDGET_ENV} must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(Budget::default()),
    }
}

fn load(common: &CommonArgs) -> Result<crate::parser::ProblemFile, Failure> {
    let text = std::fs::read_to_string(&common.file)?;
    parse_problem_file(&text).map_err(Failure::Parse)
}

fn load_problem(common: &CommonArgs, order: Option<OrderArg>) -> Result<DescentProblem, Failure> {
    let mut problem = load(common)?.into_problem().map_err(Failure::Parse)?;
    problem.options.budget = budget_for(common.budget)?;
    if common.radical {
        problem.options.invariance = InvarianceMode::Radical;
    }
    if let Some(o) = order {
        problem.options.order = o.into();
    }
    Ok(problem)
}

/// JSON form of a [`DescentReport`].
#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub branch: String,
    pub field: String,
    pub real_field: String,
    pub invariance: String,
    pub map_kind: String,
    pub z_variables: Vec<String>,
    pub z_generators: Vec<String>,
    pub r_components: Vec<String>,
    pub w_status: WStatusJson,
    pub certificates: BTreeMap<String, CertificateJson>,
    pub timings: BTreeMap<String, u128>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum WStatusJson {
    Label(String),
    NonEmpty { nonempty: Vec<String> },
}

#[derive(Debug, Serialize)]
pub struct CertificateJson {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl ReportJson {
    pub fn from_report(report: &DescentReport, with_clock: bool) -> Self {
        let mut timings: BTreeMap<String, u128> =
            report.work.iter().map(|(k, v)| (format!("{k}_s_pairs"), *v as u128)).collect();
        if with_clock {
            timings.extend(report.timings.iter().map(|(k, v)| (format!("{k}_ms"), *v)));
        }
        ReportJson {
            branch: report.branch.name().into(),
            field: report.field.to_string(),
            real_field: "Q".into(),
            invariance: report.invariance.name().into(),
            map_kind: match report.map_kind {
                MapKind::Isomorphism => "isomorphism".into(),
                MapKind::Birational => "birational".into(),
            },
            z_variables: report.z_context.names().to_vec(),
            z_generators: report.z_generators.iter().map(|p| p.to_string()).collect(),
            r_components: match (&report.r, report.branch) {
                (Some(r), Branch::GenericDescent) => r.components().iter().map(|p| p.to_string()).collect(),
                _ => Vec::new(),
            },
            w_status: match &report.w_status {
                None => WStatusJson::Label("not_applicable".into()),
                Some(WStatus::Empty) => WStatusJson::Label("empty".into()),
                Some(WStatus::NonEmpty(w)) => {
                    WStatusJson::NonEmpty { nonempty: w.iter().map(|p| p.to_string()).collect() }
                }
            },
            certificates: report
                .certificates
                .iter()
                .map(|c| (c.name.clone(), CertificateJson { pass: c.pass, witness: c.witness.clone() }))
                .collect(),
            timings,
        }
    }
}

/// Human-readable report.
pub fn render_text(report: &DescentReport, with_clock: bool) -> String {
    let mut s = String::new();
    let json = ReportJson::from_report(report, with_clock);
    s.push_str(&format!("branch: {}\n", json.branch));
    s.push_str(&format!("field: {} (model over {})\n", json.field, json.real_field));
    s.push_str(&format!("invariance: {}\n", json.invariance));
    s.push_str("assumes: the symmetry generates a finite group of automorphisms of X\n");
    s.push_str(&format!("Z in ({}):\n", json.z_variables.join(", ")));
    for g in &json.z_generators {
        s.push_str(&format!("  {g}\n"));
    }
    if !json.r_components.is_empty() {
        s.push_str(&format!("R ({}):\n", json.map_kind));
        for (name, c) in json.z_variables.iter().zip(&json.r_components) {
            s.push_str(&format!("  {name} = {c}\n"));
        }
    }
    match &json.w_status {
        WStatusJson::Label(l) => s.push_str(&format!("W: {l}\n")),
        WStatusJson::NonEmpty { nonempty } => {
            s.push_str("W:\n");
            for g in nonempty {
                s.push_str(&format!("  {g}\n"));
            }
        }
    }
    s.push_str("certificates:\n");
    for c in &report.certificates {
        let mark = if c.pass { "pass" } else { "FAIL" };
        match &c.witness {
            Some(w) => s.push_str(&format!("  [{mark}] {}: {w}\n", c.name)),
            None => s.push_str(&format!("  [{mark}] {}\n", c.name)),
        }
    }
    if !json.timings.is_empty() {
        s.push_str("timings:\n");
        for (k, v) in &json.timings {
            s.push_str(&format!("  {k}: {v}\n"));
        }
    }
    s
}

fn run_command(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Descend { common, order, format, output, no_verify, timings } => {
            let mut problem = load_problem(&common, order)?;
            problem.options.verify = !no_verify;
            let report = descent::descend(&problem)?;
            let body = match format {
                Format::Text => render_text(&report, timings),
                Format::Json => {
                    let mut j = serde_json::to_string_pretty(&ReportJson::from_report(&report, timings))
                        .expect("report serializes");
                    j.push('\n');
                    j
                }
            };
            match output {
                Some(path) => std::fs::write(path, body)?,
                None => out.write_all(body.as_bytes())?,
            }
            Ok(if report.all_pass() { EXIT_OK } else { EXIT_CERTIFICATE })
        }
        Command::Check { common } => {
            let problem = load_problem(&common, None)?;
            for c in validate_symmetry(&problem)? {
                writeln!(out, "[pass] {}", c.name)?;
            }
            Ok(EXIT_OK)
        }
        Command::Gb { common, order } => {
            let file = load(&common)?;
            let order: MonomialOrder = order.map(Into::into).or(file.order).unwrap_or_default();
            let ideal = Ideal::new(&file.vars, file.field, file.ideal)?.with_budget(budget_for(common.budget)?);
            for g in ideal.groebner(&order)? {
                writeln!(out, "{g}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Project { common, keep, format } => {
            let keep: Vec<String> = keep.into_iter().map(|k| k.trim().to_string()).filter(|k| !k.is_empty()).collect();
            if keep.is_empty() {
                return Err(Failure::Usage("--keep needs at least one variable".into()));
            }
            let mut problem = load_problem(&common, None)?;
            problem.options.verify = false;
            let report = descent::descend(&problem)?;
            let z = report.z_ideal().with_budget(problem.options.budget);
            let y = descent::project_z(&z, &keep)?;
            let gens: Vec<String> = y.generators().iter().map(|g| g.to_string()).collect();
            match format {
                Format::Text => {
                    writeln!(
                        out,
                        "# projection onto ({}); birationality not certified",
                        y.context().names().join(", ")
                    )?;
                    for g in &gens {
                        writeln!(out, "{g}")?;
                    }
                }
                Format::Json => {
                    let j = serde_json::json!({
                        "variables": y.context().names(),
                        "generators": gens,
                        "birationality_certified": false,
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&j).expect("json"))?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARSE,
            };
            let rendered = e.render().to_string();
            let _ =
                if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match run_command(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(&args, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["realdescent"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["realdescent", "descend"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["realdescent", "--help"]).0, EXIT_OK);
        assert_eq!(run_args(&["realdescent", "check", "/nonexistent/file"]).0, EXIT_PARSE);
    }
}
