//! The `mw-slice` command line.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on parse or
//! domain errors. With `--json` the output is one object
//! `{command, input, result, certificate?}` with sorted keys.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{check_all, Faults, Profile};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldFamily, Unit};
use crate::forms::{
    gw_of_form, in_fundamental_power, witt_ambient, witt_class, witt_fundamental_power, GwClass,
    QuadraticForm,
};
use crate::mw::{check_derivation, derive_extended_steinberg, normalize, Derivation, MwExpression, RuleSet};
use crate::slice::{
    convergence_check, graded_piece, moore_filtration, tate_filtration, ConvergenceCertificate,
    FiltrationQuery,
};
use crate::transfer::{filtration_preservation_check, projection_formula_check, FiniteExtension};

#[derive(Debug, Parser)]
#[command(name = "mw-slice", version, about = "Exact Grothendieck–Witt, Witt and Milnor–Witt computations")]
pub struct Cli {
    /// Emit a single JSON object instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Also write the JSON object to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, hide = true, value_enum)]
    pub fault: Option<Fault>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Use `[a][1+a] = 0` in place of the Steinberg relation.
    Steinberg,
}

#[derive(Debug, Args)]
pub struct FieldArg {
    /// `Fq(7)`, `Fq(9;poly=x^2+1)`, `R` or `C`.
    #[arg(long, value_parser = parse_field)]
    pub field: FieldDescriptor,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct QueryArgs {
    #[command(flatten)]
    pub field: FieldArg,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub p: i64,
    #[arg(long)]
    pub q: i64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of diagonal forms in GW(F); with two forms, also their
    /// sum and product.
    Gw {
        #[command(flatten)]
        field: FieldArg,
        /// Forms such as `<1,-1,2>`.
        #[arg(required = true, num_args = 1..=2, allow_hyphen_values = true)]
        forms: Vec<String>,
    },
    /// Class of a diagonal form in W(F).
    Witt {
        #[command(flatten)]
        field: FieldArg,
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Normal form of a Milnor–Witt expression.
    MwNormalize {
        #[command(flatten)]
        field: FieldArg,
        /// For example `[3]*[5] + eta*[2]*[3]*[4]`.
        #[arg(allow_hyphen_values = true)]
        expression: String,
    },
    /// Certified derivation of `[u_1]...[u_n] = 0` for units summing to 1.
    MwDerive {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        units: Vec<String>,
    },
    /// Replays a derivation (JSON file, or `-` for stdin).
    MwVerify {
        #[arg(default_value = "-")]
        path: PathBuf,
    },
    /// The filtration subgroup `F^n π_{p,p} Σ^q S(F)`.
    Filtration(QueryArgs),
    /// The graded piece `F^n / F^{n+1}`.
    Graded(QueryArgs),
    /// Separation of the filtration with a structural certificate.
    Convergence {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, default_value_t = 12)]
        cutoff: u32,
    },
    /// Image of `I^n` in `GW(F)/ℓ`.
    Moore {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        ell: i64,
        #[arg(long)]
        n: u32,
    },
    /// Trace transfer along a finite extension such as `Fq(9)/Fq(3)`.
    Transfer {
        #[arg(long = "ext")]
        extension: String,
        /// A diagonal form over the top field.
        #[arg(long, allow_hyphen_values = true)]
        form: Option<String>,
        /// Also run the projection formula and filtration checks.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 3)]
        rank_bound: usize,
    },
    /// Runs the acceptance suite.
    CheckAll {
        #[arg(long, env = "MW_SLICE_PROFILE", default_value = "quick", value_parser = parse_profile)]
        profile: Profile,
    },
}

fn parse_field(s: &str) -> std::result::Result<FieldDescriptor, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_profile(s: &str) -> std::result::Result<Profile, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a command produced.
struct Outcome {
    input: Value,
    result: Value,
    certificate: Option<Value>,
    rows: Vec<(String, String)>,
    /// `Some(reason)` when a verification failed.
    failure: Option<String>,
}

impl Outcome {
    fn new(input: Value, result: impl Serialize) -> Self {
        Outcome {
            input,
            result: to_value(result),
            certificate: None,
            rows: Vec::new(),
            failure: None,
        }
    }

    fn row(mut self, label: impl Into<String>, value: impl ToString) -> Self {
        self.rows.push((label.into(), value.to_string()));
        self
    }
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("serializable")
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gw { .. } => "gw",
            Command::Witt { .. } => "witt",
            Command::MwNormalize { .. } => "mw-normalize",
            Command::MwDerive { .. } => "mw-derive",
            Command::MwVerify { .. } => "mw-verify",
            Command::Filtration(_) => "filtration",
            Command::Graded(_) => "graded",
            Command::Convergence { .. } => "convergence",
            Command::Moore { .. } => "moore",
            Command::Transfer { .. } => "transfer",
            Command::CheckAll { .. } => "check-all",
        }
    }
}

/// Largest `n <= 12` with `x ∈ I^n`, or `None` for every `n` (only 0).
fn fundamental_level(x: &GwClass) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    Some((0..=12).take_while(|&n| in_fundamental_power(x, n)).last().unwrap_or(0))
}

fn level_text(level: Option<u32>) -> String {
    match level {
        None => "in every I^n".into(),
        Some(12) => "in I^12".into(),
        Some(n) => format!("in I^{n}, not in I^{}", n + 1),
    }
}

fn gw_summary(x: &GwClass) -> Value {
    json!({
        "class": x,
        "fundamental_level": fundamental_level(x),
        "witt": witt_class(x),
    })
}

fn run_gw(field: &FieldDescriptor, forms: &[String]) -> Result<Outcome> {
    let parsed: Vec<QuadraticForm> = forms
        .iter()
        .map(|s| QuadraticForm::parse(field, s))
        .collect::<Result<_>>()?;
    let classes: Vec<GwClass> = parsed.iter().map(gw_of_form).collect();
    let mut result = serde_json::Map::new();
    result.insert(
        "forms".into(),
        Value::Array(classes.iter().map(gw_summary).collect()),
    );
    let mut out_rows = Vec::new();
    for (f, c) in parsed.iter().zip(&classes) {
        out_rows.push((f.to_string(), format!("{c}, {}", level_text(fundamental_level(c)))));
    }
    if let [a, b] = &classes[..] {
        let sum = a.add(b)?;
        let product = a.mul(b)?;
        out_rows.push(("sum".into(), sum.to_string()));
        out_rows.push(("product".into(), product.to_string()));
        result.insert("sum".into(), gw_summary(&sum));
        result.insert("product".into(), gw_summary(&product));
    }
    let mut out = Outcome::new(json!({"field": field, "forms": forms}), Value::Object(result));
    out.rows = out_rows;
    Ok(out)
}

fn run_witt(field: &FieldDescriptor, form: &str) -> Result<Outcome> {
    let f = QuadraticForm::parse(field, form)?;
    let w = witt_class(&gw_of_form(&f));
    let group = witt_ambient(field).structure();
    let level = (0..=12u32)
        .take_while(|&n| {
            witt_fundamental_power(field, n)
                .map(|s| s.contains(w.coords()))
                .unwrap_or(false)
        })
        .last();
    let out = Outcome::new(
        json!({"field": field, "form": form}),
        json!({"class": w, "group": group.to_string(), "fundamental_level": if w.is_zero() { None } else { level }}),
    )
    .row("form", &f)
    .row("W(F)", group)
    .row("class", &w)
    .row(
        "level",
        if w.is_zero() {
            "in every I^n".to_string()
        } else {
            level_text(level)
        },
    );
    Ok(out)
}

fn run_normalize(field: &FieldDescriptor, text: &str) -> Result<Outcome> {
    let e = MwExpression::parse(field, text)?;
    let nf = normalize(&e)?;
    Ok(Outcome::new(json!({"expression": text, "field": field}), &nf)
        .row("expression", &e)
        .row("group", nf.group_label())
        .row("normal form", &nf))
}

fn run_derive(field: &FieldDescriptor, units: &[String], rules: &RuleSet) -> Result<Outcome> {
    let parsed: Vec<Unit> = units
        .iter()
        .map(|s| field.parse_unit(s))
        .collect::<Result<_>>()?;
    let d = derive_extended_steinberg(&parsed)?;
    let tuple = parsed.iter().map(|u| u.literal()).collect::<Vec<_>>().join(",");
    let mut out = Outcome::new(json!({"field": field, "units": units}), &d)
        .row("start", &d.start)
        .row("end", &d.end);
    for (i, s) in d.steps.iter().enumerate() {
        let b: Vec<String> = s
            .bindings
            .iter()
            .map(|(k, v)| format!("{k}={}", v.literal()))
            .collect();
        out = out.row(
            format!("step {i}"),
            format!("{} at term {} offset {} [{}]", s.rule, s.position.term, s.position.offset, b.join(", ")),
        );
    }
    match check_derivation(&d, rules) {
        Ok(()) => {
            out.certificate = Some(json!({"replayed": true, "steps": d.steps.len()}));
            out = out.row("verified", "yes");
        }
        Err(e) => {
            out.failure = Some(format!("tuple [{tuple}]: {e}"));
            out.certificate = Some(json!({"replayed": false, "failure": e}));
        }
    }
    Ok(out)
}

fn run_verify(path: &PathBuf, rules: &RuleSet) -> Result<Outcome> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?;
    }
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
    // accept either a bare derivation or the output of `mw-derive --json`
    let body = match value.get("result") {
        Some(r) if value.get("command").is_some() => r,
        _ => &value,
    };
    let d = Derivation::from_json_value(body)?;
    let mut out = Outcome::new(json!({"path": path.display().to_string()}), &d)
        .row("start", &d.start)
        .row("end", &d.end)
        .row("steps", d.steps.len());
    match check_derivation(&d, rules) {
        Ok(()) => {
            out.certificate = Some(json!({"replayed": true, "steps": d.steps.len()}));
            out = out.row("verified", "yes");
        }
        Err(e) => {
            out.failure = Some(e.to_string());
            out.certificate = Some(json!({"replayed": false, "failure": e}));
        }
    }
    Ok(out)
}

fn query_of(args: &QueryArgs) -> FiltrationQuery {
    FiltrationQuery::new(&args.field.field, args.n, args.p, args.q)
}

fn query_input(args: &QueryArgs) -> Value {
    json!({"field": args.field.field, "n": args.n, "p": args.p, "q": args.q})
}

fn run_filtration(args: &QueryArgs) -> Result<Outcome> {
    let query = query_of(args);
    let sub = tate_filtration(&query)?;
    let shift = query.shift();
    let m = query.degree();
    let identity = if query.n <= query.p {
        "n ≤ p: the whole group".to_string()
    } else {
        format!("K^MW_{m} · I^{shift}")
    };
    Ok(Outcome::new(
        query_input(args),
        json!({"N": shift, "degree": m, "subgroup": sub}),
    )
    .row("group", sub.ambient().label())
    .row("N(n-p, n-q)", shift)
    .row("identity", identity)
    .row("F^n", sub.description())
    .row("extent", sub.extent()))
}

fn run_graded(args: &QueryArgs) -> Result<Outcome> {
    let query = query_of(args);
    let gr = graded_piece(&query)?;
    let order = gr.order();
    Ok(Outcome::new(
        query_input(args),
        json!({"N": query.shift(), "graded": gr.structure.to_string(), "order": order}),
    )
    .row("group", &gr.ambient)
    .row("F^n / F^{n+1}", &gr.structure)
    .row(
        "order",
        order.map_or_else(|| "infinite".to_string(), |o| o.to_string()),
    ))
}

fn run_convergence(field: &FieldDescriptor, cutoff: u32) -> Result<Outcome> {
    let rep = convergence_check(field, cutoff)?;
    let mut out = Outcome::new(json!({"cutoff": cutoff, "field": field}), &rep);
    out.certificate = Some(to_value(&rep.certificate));
    let statement = match &rep.certificate {
        ConvergenceCertificate::FiniteLength { statement, .. }
        | ConvergenceCertificate::TwoAdicValuation { statement } => statement.clone(),
    };
    if field.family() == FieldFamily::RealClosed {
        for n in 0..=cutoff.min(12) {
            let d = crate::forms::fundamental_power_description(field, n)?;
            out = out.row(format!("I(R)^{n}"), d.description());
        }
    }
    out = out
        .row("certificate", statement)
        .row("nonzero elements checked", rep.elements_checked)
        .row("separated", if rep.separated { "yes" } else { "no" });
    if !rep.separated {
        out.failure = Some(format!("nonzero element in every F^n: {:?}", rep.counterexample));
    }
    Ok(out)
}

fn run_moore(field: &FieldDescriptor, ell: i64, n: u32) -> Result<Outcome> {
    let s = moore_filtration(ell, field, n)?;
    Ok(Outcome::new(json!({"ell": ell, "field": field, "n": n}), &s)
        .row("group", s.ambient().label())
        .row(format!("image of I^{n}"), s.description()))
}

fn run_transfer(text: &str, form: Option<&str>, check: bool, rank_bound: usize) -> Result<Outcome> {
    let ext: FiniteExtension = text.parse()?;
    let mut result = serde_json::Map::new();
    result.insert("degree".into(), json!(ext.degree()));
    let mut rows = vec![
        ("extension".to_string(), ext.to_string()),
        ("degree".to_string(), ext.degree().to_string()),
    ];
    let form_text = form.unwrap_or("<1>");
    let f = QuadraticForm::parse(ext.top(), form_text)?;
    let image = ext.transfer_gw(&gw_of_form(&f))?;
    rows.push((format!("Tr {f}"), image.to_string()));
    result.insert("transfer".into(), to_value(&image));
    let mut failure = None;
    let mut certificate = None;
    if check {
        let proj = projection_formula_check(&ext, rank_bound)?;
        rows.push((
            "projection formula".into(),
            format!("{} ({} cases)", if proj.passed { "holds" } else { "FAILS" }, proj.cases_checked),
        ));
        if let Some(c) = &proj.counterexample {
            failure.get_or_insert_with(|| format!("projection formula: {c}"));
        }
        let mut preservation = Vec::new();
        for m in -3..=3 {
            for n in 0..=3 {
                let rep = filtration_preservation_check(&ext, m, n)?;
                if let Some(c) = &rep.counterexample {
                    failure.get_or_insert_with(|| format!("preservation at q-p = {m}, N = {n}: {c:?}"));
                }
                preservation.push(rep);
            }
        }
        let ok = preservation.iter().all(|r| r.passed);
        rows.push((
            "filtration preserved".into(),
            format!("{} (|q-p| ≤ 3, N ≤ 3)", if ok { "yes" } else { "NO" }),
        ));
        certificate = Some(json!({"preservation": preservation, "projection_formula": proj}));
    }
    Ok(Outcome {
        input: json!({"check": check, "extension": text, "form": form_text}),
        result: Value::Object(result),
        certificate,
        rows,
        failure,
    })
}

fn run_check_all(profile: Profile, faults: Faults) -> Outcome {
    let report = check_all(profile, faults);
    let mut out = Outcome::new(json!({"faults": faults, "profile": profile}), &report);
    for c in &report.criteria {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let mut text = format!("{status} {} ({} cases", c.name, c.cases);
        if let Some(ms) = c.elapsed_ms {
            text.push_str(&format!(", {ms} ms"));
        }
        text.push(')');
        if let Some(why) = &c.first_failure {
            text.push_str(&format!(": {why}"));
        }
        out = out.row(format!("criterion {}", c.id), text);
    }
    if let Some(c) = report.criteria.iter().find(|c| !c.passed) {
        out.failure = Some(format!(
            "criterion {} failed: {}",
            c.id,
            c.first_failure.as_deref().unwrap_or("no cases")
        ));
    }
    out
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let faults = Faults {
        corrupt_steinberg: cli.fault == Some(Fault::Steinberg),
    };
    let rules = RuleSet {
        corrupt_steinberg: faults.corrupt_steinberg,
    };
    match &cli.command {
        Command::Gw { field, forms } => run_gw(&field.field, forms),
        Command::Witt { field, form } => run_witt(&field.field, form),
        Command::MwNormalize { field, expression } => run_normalize(&field.field, expression),
        Command::MwDerive { field, units } => run_derive(&field.field, units, &rules),
        Command::MwVerify { path } => run_verify(path, &rules),
        Command::Filtration(args) => run_filtration(args),
        Command::Graded(args) => run_graded(args),
        Command::Convergence { field, cutoff } => run_convergence(&field.field, *cutoff),
        Command::Moore { field, ell, n } => run_moore(&field.field, *ell, *n),
        Command::Transfer {
            extension,
            form,
            check,
            rank_bound,
        } => run_transfer(extension, form.as_deref(), *check, *rank_bound),
        Command::CheckAll { profile } => Ok(run_check_all(*profile, faults)),
    }
}

/// The JSON document for an outcome.
fn document(command: &str, out: &Outcome) -> Value {
    let mut doc = serde_json::Map::new();
    doc.insert("command".into(), json!(command));
    doc.insert("input".into(), out.input.clone());
    doc.insert("result".into(), out.result.clone());
    if let Some(c) = &out.certificate {
        doc.insert("certificate".into(), c.clone());
    }
    Value::Object(doc)
}

/// Canonical rendering: sorted keys, two-space indentation.
pub fn render_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn render_table(out: &Outcome) -> String {
    let width = out.rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (label, value) in &out.rows {
        let pad = width - label.chars().count();
        s.push_str(&format!("{label}{}  {value}\n", " ".repeat(pad)));
    }
    s
}

/// Runs the CLI with the given arguments, writing to `stdout`/`stderr`, and
/// returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let command = cli.command.name();
    let out = match execute(&cli) {
        Ok(out) => out,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return match e {
                Error::SearchExhausted(_) => 1,
                _ => 2,
            };
        }
    };
    let doc = document(command, &out);
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, render_json(&doc) + "\n") {
            let _ = writeln!(stderr, "error: writing {}: {e}", path.display());
            return 2;
        }
    }
    if cli.json {
        let _ = writeln!(stdout, "{}", render_json(&doc));
    } else {
        let _ = write!(stdout, "{}", render_table(&out));
    }
    match &out.failure {
        Some(why) => {
            let _ = writeln!(stderr, "verification failed: {why}");
            1
        }
        None => 0,
    }
}
