//! Command dispatch and report rendering for the `hfrank` binary.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use hfrank_core::cfk::{genus, hf_rank, hfk_ranks, hfk_total, load_model, CfkModel};
use hfrank_core::rational::{assemble_and_rank, four_maps, normalize_blocks, xz_ranks};
use hfrank_core::surgery::{
    build_truncated_cone, cone_rank_at_margin, hf_surgery_rank, hfk_surgery_ranks_two_term, hfk_surgery_ranks_with,
    ConeConvention, SurgerySpec, DEFAULT_MARGIN,
};
use hfrank_core::verify::{corpus_run_with, is_simple, verify_file, CorpusOptions, Verdict};
use hfrank_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Both,
    Cone21,
    Combinatorial23,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Quotient,
    Inclusion,
}

#[derive(Debug, Parser)]
#[command(name = "hfrank", version, about = "Heegaard Floer ranks of surgeries on knot complex models")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a model file.
    Validate { model: PathBuf },
    /// Genus, HF^ rank and HFK^ ranks of a model.
    Ranks { model: PathBuf },
    /// Rank of HF^ of p/q surgery.
    Surgery {
        model: PathBuf,
        #[arg(short)]
        p: u32,
        #[arg(short, default_value_t = 1)]
        q: u32,
        #[arg(long, value_enum, default_value_t = RouteArg::Both)]
        route: RouteArg,
        /// Truncation margin for the mapping cone; the default margin also re-checks one wider.
        #[arg(long)]
        margin: Option<u32>,
    },
    /// Per-grading ranks of HFK^ of the core of n surgery.
    KnotSurgery {
        model: PathBuf,
        #[arg(short)]
        n: u32,
        #[arg(long, value_enum, default_value_t = ConventionArg::Quotient)]
        convention: ConventionArg,
        /// Also report the experimental two-term cone.
        #[arg(long)]
        two_term: bool,
    },
    /// Normalized block forms and the x/z rank tables for p/q.
    Blocks {
        model: PathBuf,
        #[arg(short)]
        p: u32,
        #[arg(short, default_value_t = 1)]
        q: u32,
    },
    /// Run every check on model files or directories of them.
    Verify {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, default_value_t = 4)]
        pmax: u32,
        #[arg(long, default_value_t = 4)]
        qmax: u32,
        #[arg(long, default_value_t = 6)]
        nmax: u32,
    },
}

/// A model path as given, or with `.json` appended when only that exists.
pub fn resolve_model_path(path: &Path) -> PathBuf {
    if path.exists() {
        return path.to_path_buf();
    }
    let mut with_ext = path.as_os_str().to_owned();
    with_ext.push(".json");
    let with_ext = PathBuf::from(with_ext);
    if with_ext.exists() {
        with_ext
    } else {
        path.to_path_buf()
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvariantViolation { .. }
        | Error::InvalidSurgery(_)
        | Error::Io(_)
        | Error::DimensionMismatch(_)
        | Error::EmptyComplex(_) => EXIT_INPUT,
        _ => EXIT_CHECK_FAILED,
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code_for(&e), message: format!("{}: {e}", e.kind()) }
    }
}

/// Ordered key/value report for the single-model verbs.
struct Record {
    fields: Vec<(String, Value)>,
    ok: bool,
}

impl Record {
    fn new() -> Self {
        Self { fields: Vec::new(), ok: true }
    }

    fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }
}

fn load(path: &Path) -> Result<CfkModel, Failure> {
    Ok(load_model(&resolve_model_path(path))?)
}

fn spec(p: u32, q: u32) -> Result<SurgerySpec, Failure> {
    Ok(SurgerySpec::new(p, q)?)
}

/// Graded ranks as an object, highest grading first.
fn graded(m: &BTreeMap<i64, usize>) -> Value {
    let mut out = Map::new();
    for (s, v) in m.iter().rev() {
        out.insert(s.to_string(), json!(v));
    }
    Value::Object(out)
}

fn matrix_rows(m: &hfrank_core::f2linalg::BitMatrix) -> Value {
    Value::Array(m.to_string().lines().map(|l| Value::String(l.to_string())).collect())
}

fn cmd_validate(path: &Path) -> Result<Record, Failure> {
    let c = load(path)?;
    let mut r = Record::new();
    r.put("model", c.name()).put("valid", true).put("generators", c.len()).put("arrows", c.arrows().len());
    Ok(r)
}

fn cmd_ranks(path: &Path) -> Result<Record, Failure> {
    let c = load(path)?;
    let mut r = Record::new();
    r.put("model", c.name())
        .put("genus", genus(&c)?)
        .put("HF^", hf_rank(&c))
        .put("HFK^", graded(&hfk_ranks(&c)))
        .put("HFK^ total", hfk_total(&c))
        .put("simple", is_simple(&c)?);
    Ok(r)
}

fn cmd_surgery(path: &Path, p: u32, q: u32, route: RouteArg, margin: Option<u32>) -> Result<Record, Failure> {
    let c = load(path)?;
    let s = spec(p, q)?;
    let mut r = Record::new();
    r.put("model", c.name()).put("p", p).put("q", q);
    let cone = || -> Result<usize, Error> {
        match margin {
            Some(m) => cone_rank_at_margin(&c, s, m),
            None => hf_surgery_rank(&c, s),
        }
    };
    let window = build_truncated_cone(&c, s, margin.unwrap_or(DEFAULT_MARGIN))?.window;
    let mut values = Vec::new();
    if matches!(route, RouteArg::Both | RouteArg::Cone21) {
        let v = cone()?;
        r.put("cone21", v);
        values.push(v);
    }
    if matches!(route, RouteArg::Both | RouteArg::Combinatorial23) {
        match assemble_and_rank(&c, s) {
            Ok(v) => {
                r.put("combinatorial23", v);
                values.push(v);
            }
            Err(e) => {
                r.put("combinatorial23", format!("{}: {e}", e.kind()));
                r.ok = false;
            }
        }
    }
    if route == RouteArg::Both {
        let agree = r.ok && values.windows(2).all(|w| w[0] == w[1]);
        r.put("agree", agree);
        r.ok &= agree;
    }
    r.put(
        "window",
        format!("A [{}, {}], B [{}, {}], margin {}", window.a_lo, window.a_hi, window.b_lo, window.b_hi, window.margin),
    );
    Ok(r)
}

fn cmd_knot_surgery(path: &Path, n: u32, convention: ConventionArg, two_term: bool) -> Result<Record, Failure> {
    let c = load(path)?;
    if n == 0 {
        return Err(Error::InvalidSurgery("n must be positive".into()).into());
    }
    let conv = match convention {
        ConventionArg::Quotient => ConeConvention::Quotient,
        ConventionArg::Inclusion => ConeConvention::Inclusion,
    };
    let ranks = hfk_surgery_ranks_with(&c, n, conv)?;
    let total: usize = ranks.values().sum();
    let mut r = Record::new();
    r.put("model", c.name())
        .put("n", n)
        .put("convention", format!("{convention:?}").to_lowercase())
        .put("per_s", graded(&ranks))
        .put("total", total);
    let hf = hf_surgery_rank(&c, SurgerySpec::integer(n)?)?;
    r.put("surgery", hf);
    if is_simple(&c)? {
        let equal = total == hf;
        r.put("simple", true).put("total = surgery", equal);
        r.ok &= equal;
    } else {
        let ge = total >= hf;
        r.put("simple", false).put("total ≥ surgery", ge);
        r.ok &= ge;
    }
    if two_term {
        r.put("two_term_experimental", graded(&hfk_surgery_ranks_two_term(&c, n)?));
    }
    Ok(r)
}

fn cmd_blocks(path: &Path, p: u32, q: u32) -> Result<Record, Failure> {
    let c = load(path)?;
    let s = spec(p, q)?;
    let maps = four_maps(&c)?;
    let b = normalize_blocks(&maps)?;
    let mut r = Record::new();
    r.put("model", c.name())
        .put("p", p)
        .put("q", q)
        .put("h_inf", b.h_inf)
        .put("h_one", b.h_one)
        .put("h_zero", b.h_zero)
        .put("rank_phi", b.r_phi)
        .put("rank_psibar", b.r_psibar);
    for (name, m) in
        [("a", &b.a), ("b", &b.b), ("c", &b.c), ("d", &b.d), ("m", &b.m), ("n", &b.n), ("l", &b.l), ("k", &b.k)]
    {
        r.put(name, matrix_rows(m));
    }
    let rep = xz_ranks(&b, s)?;
    r.put("x_table", json!(rep.x_table))
        .put("z_table", json!(rep.z_table))
        .put("x_pq", rep.x_pq)
        .put("z_pq", rep.z_pq)
        .put("rank_Phi", rep.rank_phi_pq)
        .put("rank_Psi", rep.rank_psi_pq)
        .put("y", rep.y_value);
    let cone = hf_surgery_rank(&c, s)?;
    r.put("cone21", cone).put("agree", cone == rep.y_value);
    r.ok &= cone == rep.y_value;
    Ok(r)
}

fn cmd_verify(paths: &[PathBuf], opts: CorpusOptions) -> Result<Vec<Verdict>, Failure> {
    let mut out = Vec::new();
    for path in paths {
        let resolved = resolve_model_path(path);
        if resolved.is_dir() {
            out.extend(corpus_run_with(&resolved, opts)?);
        } else if resolved.is_file() {
            out.push(verify_file(&resolved, opts));
        } else {
            return Err(Error::Io(format!("{}: no such file or directory", path.display())).into());
        }
    }
    Ok(out)
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(text_value).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => {
            format!("{{{}}}", m.iter().map(|(k, v)| format!("{k}:{}", text_value(v))).collect::<Vec<_>>().join(", "))
        }
        other => other.to_string(),
    }
}

fn render_record(r: &Record, format: Format) -> String {
    match format {
        Format::Json => {
            let obj: Map<String, Value> = r.fields.iter().cloned().collect();
            serde_json::to_string_pretty(&Value::Object(obj)).expect("json") + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["key", "value"]).expect("csv");
            for (k, v) in &r.fields {
                w.write_record([k.as_str(), text_value(v).as_str()]).expect("csv");
            }
            String::from_utf8(w.into_inner().expect("csv")).expect("utf8")
        }
        Format::Text => {
            let width = r.fields.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
            r.fields.iter().map(|(k, v)| format!("{k:<width$}  {}\n", text_value(v))).collect()
        }
    }
}

/// Serializes verdicts; identical input gives byte-identical output.
pub fn emit_report(verdicts: &[Verdict], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(verdicts).expect("json") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["model", "check", "pass", "lhs", "rhs", "context"]).expect("csv");
            for v in verdicts {
                for c in &v.checks {
                    w.write_record([&v.model, &c.id, &c.pass.to_string(), &c.lhs, &c.rhs, &c.context]).expect("csv");
                }
            }
            String::from_utf8(w.into_inner().expect("csv")).expect("utf8")
        }
        Format::Text => {
            let mut out = String::new();
            for v in verdicts {
                let passed = v.checks.iter().filter(|c| c.pass).count();
                out += &format!(
                    "{} {}  ({passed}/{} checks)\n",
                    if v.overall { "PASS" } else { "FAIL" },
                    v.model,
                    v.checks.len()
                );
                for c in &v.checks {
                    let mark = if c.pass { "ok  " } else { "FAIL" };
                    out += &format!("  {mark} {:<40} {} | {}", c.id, c.lhs, c.rhs);
                    if !c.context.is_empty() {
                        out += &format!("  ({})", c.context);
                    }
                    out.push('\n');
                }
            }
            out
        }
    }
}

/// Runs one invocation; returns the exit code.
pub fn execute<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let format = cli.format;
    let result: Result<(String, bool), Failure> = match cli.command {
        Command::Validate { model } => cmd_validate(&model).map(|r| (render_record(&r, format), r.ok)),
        Command::Ranks { model } => cmd_ranks(&model).map(|r| (render_record(&r, format), r.ok)),
        Command::Surgery { model, p, q, route, margin } => {
            cmd_surgery(&model, p, q, route, margin).map(|r| (render_record(&r, format), r.ok))
        }
        Command::KnotSurgery { model, n, convention, two_term } => {
            cmd_knot_surgery(&model, n, convention, two_term).map(|r| (render_record(&r, format), r.ok))
        }
        Command::Blocks { model, p, q } => cmd_blocks(&model, p, q).map(|r| (render_record(&r, format), r.ok)),
        Command::Verify { paths, pmax, qmax, nmax } => cmd_verify(&paths, CorpusOptions { pmax, qmax, nmax })
            .map(|v| (emit_report(&v, format), v.iter().all(|x| x.overall))),
    };
    match result {
        Ok((text, ok)) => {
            let _ = stdout.write_all(text.as_bytes());
            if ok {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_csv_is_header_only() {
        assert_eq!(emit_report(&[], Format::Csv), "model,check,pass,lhs,rhs,context\n");
    }

    #[test]
    fn single_passing_verdict_json() {
        let v = Verdict::new("m", vec![hfrank_core::verify::Check::compare("x", 1, 1, "")]);
        let out: Value = serde_json::from_str(&emit_report(&[v], Format::Json)).unwrap();
        assert_eq!(out[0]["overall"], Value::Bool(true));
    }

    #[test]
    fn graded_is_descending() {
        let m = BTreeMap::from([(-1, 1), (0, 1), (1, 1)]);
        assert_eq!(text_value(&graded(&m)), "{1:1, 0:1, -1:1}");
    }
}
