//! Command implementations behind the `hpt` binary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use hpt_core::ainfty::{massey_triple, AInfinityStructure};
use hpt_core::factory::{cochain_dga, gaussian_contraction, massey_instance, random_suite, SimplicialComplexDescription};
use hpt_core::interchange::{parse_field, transfer_document, Document, Reader};
use hpt_core::perturbation::{check_sdr, repair_to_contraction, transfer, verify_transfer, Contraction, VerifyOptions};
use hpt_core::{map_differential, Field, GradedMap};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hpt", about = "Exact homotopy transfer of A∞-structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Complex,
    Dga,
    Ainfty,
    Sdr,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the objects of one kind in an interchange file.
    Verify {
        path: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        max_arity: Option<usize>,
        #[arg(long)]
        field: Option<String>,
    },
    /// Transfer a structure along a contraction.
    Transfer {
        path: PathBuf,
        #[arg(long)]
        contraction: Option<String>,
        #[arg(long)]
        structure: Option<String>,
        #[arg(long)]
        max_arity: Option<usize>,
        #[arg(long)]
        repair: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        field: Option<String>,
    },
    /// Transfer and verify a seeded random suite.
    Suite {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 6)]
        max_dim: usize,
    },
    /// Write one of the bundled example documents.
    Fixture {
        #[arg(value_enum)]
        name: FixtureName,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FixtureName {
    Interval,
    Circle,
    Torus,
    Massey,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub defect: usize,
}

impl Check {
    pub fn new(name: impl Into<String>, defect: usize) -> Check {
        Check {
            name: name.into(),
            pass: defect == 0,
            defect,
        }
    }
}

/// Everything but `elapsed_ms` is a function of the inputs, seed and arity.
#[derive(Clone, Debug, Serialize)]
pub struct CommandReport {
    pub command: Value,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    pub elapsed_ms: u128,
}

impl CommandReport {
    fn new(command: Value, checks: Vec<Check>, details: Value, started: Instant) -> CommandReport {
        CommandReport {
            command,
            passed: checks.iter().all(|c| c.pass),
            checks,
            details,
            elapsed_ms: started.elapsed().as_millis(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    /// The report without the timing field.
    pub fn verdicts(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v.as_object_mut().unwrap().remove("elapsed_ms");
        serde_json::to_string(&v).unwrap()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).unwrap(),
            Format::Text => {
                let mut s = String::new();
                for c in &self.checks {
                    let tag = if c.pass { "PASS" } else { "FAIL" };
                    let _ = writeln!(s, "{tag} {} (defect {})", c.name, c.defect);
                }
                if !self.details.is_null() {
                    let _ = writeln!(s, "{}", serde_json::to_string(&self.details).unwrap());
                }
                let _ = write!(s, "{} in {} ms", if self.passed { "passed" } else { "failed" }, self.elapsed_ms);
                s
            }
        }
    }
}

/// Input problems: unreadable or malformed files, unknown labels, bad arguments.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<hpt_core::Error> for InputError {
    fn from(e: hpt_core::Error) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = std::result::Result<CommandReport, InputError>;

fn load(path: &Path, field: Option<&str>) -> std::result::Result<Document, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let doc = Document::from_json(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let declared = doc.field()?;
    if let Some(f) = field {
        let wanted = parse_field(f)?;
        if wanted != declared {
            return Err(InputError(format!("file is over {declared}, not {wanted}")));
        }
    }
    Ok(doc)
}

fn labels<'a, T>(section: &'a std::collections::BTreeMap<String, T>, only: Option<&String>, what: &str) -> std::result::Result<Vec<&'a String>, InputError> {
    match only {
        Some(l) if section.contains_key(l) => Ok(vec![section.get_key_value(l).unwrap().0]),
        Some(l) => Err(InputError(format!("no {what} `{l}`"))),
        None if section.is_empty() => Err(InputError(format!("file has no {what}"))),
        None => Ok(section.keys().collect()),
    }
}

fn square_defect(r: &mut Reader<'_>, complex: &str) -> std::result::Result<usize, InputError> {
    let d = r.raw_differential(complex)?;
    Ok(d.compose(&d)?.nnz())
}

fn associativity_defect(a: &AInfinityStructure) -> usize {
    // with m3 = 0 the arity-3 identity is the associator up to sign
    a.stasheff_defect(3).nnz()
}

pub fn cmd_verify(path: &Path, kind: Kind, label: Option<&String>, max_arity: Option<usize>, field: Option<&str>) -> CmdResult {
    let started = Instant::now();
    let doc = load(path, field)?;
    let mut r = doc.reader()?;
    let mut checks = Vec::new();
    let mut details = Value::Null;
    let suffix = |name: &str, l: &str| format!("{name} [{l}]");
    match kind {
        Kind::Complex => {
            for l in labels(&doc.complexes, label, "complex")? {
                checks.push(Check::new(suffix("d∘d=0", l), square_defect(&mut r, l)?));
            }
        }
        Kind::Dga => {
            for l in labels(&doc.structures, label, "structure")? {
                let spec = r.structure_spec(l)?.clone();
                let dd = square_defect(&mut r, &spec.complex)?;
                checks.push(Check::new(suffix("d∘d=0", l), dd));
                if dd != 0 {
                    continue;
                }
                let (complex, ops) = r.operations(l)?;
                let higher: usize = ops.iter().skip(2).map(GradedMap::nnz).sum();
                checks.push(Check::new(suffix("higher operations vanish", l), higher));
                let mu = ops.get(1).cloned().ok_or_else(|| InputError(format!("structure `{l}` has no product")))?;
                let a = AInfinityStructure::new(&complex, 3, &[complex.d().clone(), mu.clone()])?;
                let sq = hpt_core::tensor_complex(&complex, &complex)?;
                let mu_sq = mu.rebase(sq.space(), complex.space())?;
                checks.push(Check::new(suffix("μ closed", l), map_differential(&mu_sq, &sq, &complex)?.nnz()));
                checks.push(Check::new(suffix("μ associative", l), associativity_defect(&a)));
            }
        }
        Kind::Ainfty => {
            for l in labels(&doc.structures, label, "structure")? {
                let spec = r.structure_spec(l)?.clone();
                let n = max_arity.unwrap_or(spec.arity);
                if n > spec.arity {
                    return Err(InputError(format!("structure `{l}` is stored through arity {}, not {n}", spec.arity)));
                }
                let dd = square_defect(&mut r, &spec.complex)?;
                checks.push(Check::new(suffix("d∘d=0", l), dd));
                if dd != 0 {
                    continue;
                }
                let a = r.structure(l, Some(n))?;
                for k in 1..=n {
                    checks.push(Check::new(suffix(&format!("stasheff identity {k}"), l), a.stasheff_defect(k).nnz()));
                }
                let b = a.bar_differential();
                checks.push(Check::new(suffix("b∘b=0", l), b.compose(&b)?.nnz()));
            }
        }
        Kind::Sdr => {
            let mut side = serde_json::Map::new();
            for l in labels(&doc.contractions, label, "contraction")? {
                let datum = r.sdr(l)?;
                let report = check_sdr(&datum);
                for (name, defect) in report.checks().into_iter().take(4) {
                    checks.push(Check::new(suffix(name, l), defect));
                }
                side.insert(l.clone(), json!(report.is_contraction()));
            }
            details = json!({ "side_conditions_hold": side });
        }
    }
    let command = json!({
        "name": "verify",
        "path": path.display().to_string(),
        "kind": kind,
        "label": label,
        "max_arity": max_arity,
    });
    Ok(CommandReport::new(command, checks, details, started))
}

fn pick<'a, T>(section: &'a std::collections::BTreeMap<String, T>, only: Option<&String>, what: &str, ok: impl Fn(&T) -> bool) -> std::result::Result<String, InputError> {
    match only {
        Some(l) if section.contains_key(l) => Ok(l.clone()),
        Some(l) => Err(InputError(format!("no {what} `{l}`"))),
        None => section
            .iter()
            .find(|(_, v)| ok(v))
            .map(|(k, _)| k.clone())
            .ok_or_else(|| InputError(format!("file has no suitable {what}"))),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_transfer(
    path: &Path,
    contraction: Option<&String>,
    structure: Option<&String>,
    max_arity: Option<usize>,
    repair: bool,
    out: Option<&Path>,
    field: Option<&str>,
) -> CmdResult {
    let started = Instant::now();
    let doc = load(path, field)?;
    let mut r = doc.reader()?;
    let c_label = pick(&doc.contractions, contraction, "contraction", |_| true)?;
    let big = doc.contractions[&c_label].big.clone();
    let s_label = pick(&doc.structures, structure, "structure", |s| s.complex == big)?;
    let stored = r.structure_spec(&s_label)?.arity;
    let n = max_arity.unwrap_or(stored);
    if n == 0 || n > stored {
        return Err(InputError(format!("structure `{s_label}` is stored through arity {stored}, not {n}")));
    }
    let a = r.structure(&s_label, Some(n))?;
    let datum = r.sdr(&c_label)?;
    let command = json!({
        "name": "transfer",
        "path": path.display().to_string(),
        "contraction": c_label,
        "structure": s_label,
        "max_arity": n,
        "repair": repair,
    });
    let sdr = check_sdr(&datum);
    let c: Contraction = if sdr.is_contraction() && !repair {
        Contraction::new(datum)?
    } else if repair {
        match repair_to_contraction(&datum) {
            Ok(c) => c,
            Err(e) => {
                let checks = sdr.checks().into_iter().take(4).map(|(k, d)| Check::new(k, d)).collect();
                return Ok(CommandReport::new(command, checks, json!({ "error": e.to_string() }), started));
            }
        }
    } else {
        let checks = sdr.checks().into_iter().map(|(k, d)| Check::new(k, d)).collect();
        let hint = "the SDR datum is not a contraction; rerun with --repair to apply the side-condition repair";
        return Ok(CommandReport::new(command, checks, json!({ "error": hint }), started));
    };
    if !AInfinityStructure::is_valid(&a) {
        let checks = (1..=n).map(|k| Check::new(format!("input stasheff identity {k}"), a.stasheff_defect(k).nnz())).collect();
        return Ok(CommandReport::new(command, checks, json!({ "error": "input structure is not A∞" }), started));
    }
    let res = transfer(&c, &a, n)?;
    let report = verify_transfer(&res, VerifyOptions::default())?;
    let checks = report.checks.iter().map(|(k, d)| Check::new(k.as_str(), *d)).collect();
    let nonzero: Vec<usize> = (2..=n).filter(|&k| !res.structure.m(k).is_zero()).collect();
    let mut details = json!({
        "depth": report.depth,
        "small_dimension": c.small().dim(),
        "nonzero_operations": nonzero,
    });
    if let (Some(x), Some(y), Some(z)) = (doc.distinguished.get("x"), doc.distinguished.get("y"), doc.distinguished.get("z")) {
        if n >= 3 && [x, y, z].iter().all(|v| v.space == doc.complexes[&big].space) {
            let vs: Vec<_> = ["x", "y", "z"].iter().map(|l| r.vector(l).map(|(_, v)| c.r().apply(&v))).collect::<Result<_, _>>()?;
            details["massey"] = match massey_triple(&res.structure, &vs[0], &vs[1], &vs[2]) {
                Ok(m) => json!({
                    "bidegree": [m.bidegree.0, m.bidegree.1],
                    "nonzero": m.nonzero,
                    "class": m.class.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "indeterminacy_rank": m.indeterminacy_rank,
                }),
                Err(e) => json!({ "error": e.to_string() }),
            };
        }
    }
    if let Some(out) = out {
        let text = transfer_document(&res, &c).to_json();
        std::fs::write(out, text).map_err(|e| InputError(format!("{}: {e}", out.display())))?;
    }
    Ok(CommandReport::new(command, checks, details, started))
}

pub fn cmd_suite(seed: u64, count: usize, max_arity: usize, field: &str, max_dim: usize) -> CmdResult {
    let started = Instant::now();
    if max_arity == 0 {
        return Err(InputError("max arity must be at least 1".into()));
    }
    let field = parse_field(field)?;
    let suite = random_suite(seed, count, max_dim, -2..=2, field)?;
    let mut checks = Vec::new();
    let mut instances = Vec::new();
    for (i, inst) in suite.iter().enumerate() {
        let a = match &inst.product {
            Some(mu) => AInfinityStructure::from_dga(&inst.complex, mu, max_arity)?.truncate(max_arity)?,
            None => AInfinityStructure::new(&inst.complex, max_arity, &[])?,
        };
        let res = transfer(&inst.contraction, &a, max_arity)?;
        let report = verify_transfer(&res, VerifyOptions::default())?;
        let defect: usize = report.checks.iter().map(|(_, d)| d).sum();
        checks.push(Check::new(format!("instance {i}"), defect));
        instances.push(json!({
            "index": i,
            "dimension": inst.complex.dim(),
            "small_dimension": inst.contraction.small().dim(),
            "product": inst.product.is_some(),
            "depth": report.depth,
            "nonzero_operations": (2..=max_arity).filter(|&k| !res.structure.m(k).is_zero()).collect::<Vec<_>>(),
            "first_failure": report.first_failure(),
        }));
    }
    let command = json!({
        "name": "suite",
        "seed": seed,
        "count": count,
        "max_arity": max_arity,
        "field": field.to_string(),
        "max_dim": max_dim,
    });
    Ok(CommandReport::new(command, checks, json!({ "instances": instances }), started))
}

/// Builds a bundled example: the algebra with its contraction onto cohomology.
pub fn fixture(name: FixtureName, field: Field) -> hpt_core::Result<Document> {
    let (d, mu, arity, cycles) = match name {
        FixtureName::Interval => {
            let (d, mu) = cochain_dga(&SimplicialComplexDescription::interval(), field)?;
            (d, mu, 5, None)
        }
        FixtureName::Circle => {
            let (d, mu) = cochain_dga(&SimplicialComplexDescription::circle(), field)?;
            (d, mu, 5, None)
        }
        FixtureName::Torus => {
            let (d, mu) = cochain_dga(&SimplicialComplexDescription::torus(), field)?;
            (d, mu, 3, None)
        }
        FixtureName::Massey => {
            let (d, mu, x, y, z) = massey_instance(field)?;
            (d, mu, 5, Some([x, y, z]))
        }
    };
    let a = AInfinityStructure::from_dga(&d, &mu, arity)?;
    let c = gaussian_contraction(&d)?;
    let mut doc = Document::new(field);
    doc.add_structure("A", "D", &a);
    doc.add_contraction("contraction", "C", "D", c.datum());
    if let Some(v) = cycles {
        for (label, v) in ["x", "y", "z"].iter().zip(&v) {
            doc.add_vector(label, "D", v);
        }
    }
    Ok(doc)
}

/// Runs a parsed command line; returns the text to print and the exit code.
pub fn run(cli: Cli) -> (String, i32) {
    let result = match &cli.command {
        Command::Verify {
            path,
            kind,
            label,
            max_arity,
            field,
        } => cmd_verify(path, *kind, label.as_ref(), *max_arity, field.as_deref()),
        Command::Transfer {
            path,
            contraction,
            structure,
            max_arity,
            repair,
            out,
            field,
        } => cmd_transfer(path, contraction.as_ref(), structure.as_ref(), *max_arity, *repair, out.as_deref(), field.as_deref()),
        Command::Suite {
            seed,
            count,
            max_arity,
            field,
            max_dim,
        } => cmd_suite(*seed, *count, *max_arity, field, *max_dim),
        Command::Fixture { name, field, out } => {
            let made = parse_field(field).and_then(|f| fixture(*name, f));
            return match made {
                Ok(doc) => match out {
                    Some(p) => match std::fs::write(p, doc.to_json() + "\n") {
                        Ok(()) => (String::new(), EXIT_PASS),
                        Err(e) => (format!("{}: {e}", p.display()), EXIT_INPUT),
                    },
                    None => (doc.to_json(), EXIT_PASS),
                },
                Err(e) => (e.to_string(), EXIT_INPUT),
            };
        }
    };
    match result {
        Ok(report) => (report.render(cli.format), report.exit_code()),
        Err(e) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&json!({ "error": e.0 })).unwrap(),
                Format::Text => format!("error: {e}"),
            };
            (text, EXIT_INPUT)
        }
    }
}
