//! The `gcfg` command line. Each command returns an exit code and a JSON
//! report; `main` only prints them.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::finstance::{AtomId, FunctionalInstance};
use crate::gpgen::{
    builtin_action, gen_abelian_extension, gen_configuration, gen_matroid_instance, ActionSpec,
    Designation, GenError, GroupSpec,
};
use crate::group::validate_table;
use crate::groupiso::{iso_check_data, IsoError};
use crate::io::{InstanceFile, SchemaError};
use crate::localglue::{select_inner, verify_embedding, verify_group, ExactRational, GlueError};
use crate::quadrangle::{config_to_quad, quad_to_config, validate_quadrangle};
use crate::reconstruct::{
    ab_claim, build_group, check_transitivity, closure_check, emit_g_configuration,
    faithfulness_report, presentation_property,
};
use crate::role::Role;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gcfg",
    version,
    about = "Finite group configurations: validate, reconstruct, generate, convert"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a file of any type.
    Validate { file: PathBuf },
    /// Rebuild the group of a functional instance.
    Reconstruct(ReconstructArgs),
    /// Emit an instance from a builtin group action or a matroid family.
    Generate(GenerateArgs),
    /// Convert between functional instances and quadrangles.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sweep the wrap-around group on a rational grid.
    Glue(GlueArgs),
    /// Test two group tables for isomorphism.
    Iso { first: PathBuf, second: PathBuf },
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    pub file: PathBuf,
    /// Anchor `a` in sort a1 (default: least element).
    #[arg(long)]
    pub anchor_a: Option<AtomId>,
    /// Anchor `b` in sort a3 (default: least element).
    #[arg(long)]
    pub anchor_b: Option<AtomId>,
    /// Also sweep the commutation identity of the H family.
    #[arg(long)]
    pub abelian_check: bool,
    #[arg(long, value_name = "PATH")]
    pub emit_group: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub emit_config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// e.g. `cyclic:5`, `symmetric:3`, `cyclic:2*cyclic:4`.
    #[arg(long, required_unless_present = "matroid", conflicts_with = "matroid")]
    pub group: Option<String>,
    /// `regular`, `natural`, `quotient:<labels>` or `cosets:<labels>`.
    #[arg(long, default_value = "regular")]
    pub action: String,
    /// Add the R, S tables and sort x4.
    #[arg(long)]
    pub abelian: bool,
    /// Translation instance over F_p^{3m}.
    #[arg(long, num_args = 2, value_names = ["P", "M"])]
    pub matroid: Option<Vec<u64>>,
    /// Designated a1 (group element label).
    #[arg(long)]
    pub a1: Option<String>,
    /// Designated a2 (group element label).
    #[arg(long)]
    pub a2: Option<String>,
    /// Designated x2 (point index).
    #[arg(long)]
    pub x2: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GlueArgs {
    /// Half-width `a` of the glued interval, as `n` or `n/d`.
    #[arg(long, required_unless_present = "outer", conflicts_with = "outer")]
    pub a: Option<String>,
    /// Half-width of an outer chunk; the glued interval is half of it.
    #[arg(long)]
    pub outer: Option<String>,
    #[arg(long)]
    pub grid: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Quadrangle,
    Configuration,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error(transparent)]
    Glue(#[from] GlueError),
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error("{0}")]
    Usage(String),
}

/// What a command produced: the exit code and report, plus an instance
/// document when no output path was given.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub document: Option<String>,
}

impl Outcome {
    fn report(passed: bool, report: Value) -> Self {
        Self {
            code: if passed { EXIT_PASS } else { EXIT_FAIL },
            report,
            document: None,
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Reconstruct(args) => cmd_reconstruct(&args),
        Command::Generate(args) => cmd_generate(&args),
        Command::Convert { file, to, output } => cmd_convert(&file, to, output.as_deref()),
        Command::Glue(args) => cmd_glue(&args),
        Command::Iso { first, second } => cmd_iso(&first, &second),
    }
}

fn read(path: &Path) -> Result<InstanceFile, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(InstanceFile::parse(&text)?)
}

fn write(path: &Path, file: &InstanceFile) -> Result<(), CliError> {
    fs::write(path, file.to_json()).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Writes to `output` and reports the path, or hands the document back.
fn deliver(
    file: InstanceFile,
    output: Option<&Path>,
    mut report: Value,
) -> Result<Outcome, CliError> {
    report["type"] = json!(file.kind());
    match output {
        Some(path) => {
            write(path, &file)?;
            report["output"] = json!(path.display().to_string());
            Ok(Outcome::report(true, report))
        }
        None => Ok(Outcome {
            code: EXIT_PASS,
            report,
            document: Some(file.to_json()),
        }),
    }
}

/// Table validity, then the master equation and, with `R, S`, the abelian
/// equation.
fn instance_checks(inst: &FunctionalInstance) -> Result<(bool, Value), CliError> {
    let validity = inst.validate_tables();
    let mut report = json!({ "tables": to_value(&validity) });
    if !validity.passed {
        return Ok((false, report));
    }
    let master = inst.check_master_equation().map_err(SchemaError::from)?;
    report["master_equation"] = to_value(&master);
    let mut passed = master.holds;
    if inst.has_abelian_tables() {
        let abelian = inst.check_abelian_equation().map_err(SchemaError::from)?;
        passed &= abelian.holds;
        report["abelian_equation"] = to_value(&abelian);
    }
    Ok((passed, report))
}

pub fn cmd_validate(path: &Path) -> Result<Outcome, CliError> {
    let file = read(path)?;
    let kind = file.kind();
    let (passed, mut report) = match file {
        InstanceFile::MatroidConfig(f) => {
            let cfg = f.load()?;
            match cfg.validate_mk() {
                Err(e) => (false, json!({ "error": e.to_string() })),
                Ok(mk) => {
                    let mut passed = mk.passed;
                    let mut report = json!({ "clauses": to_value(&mk) });
                    if cfg.roles.contains_key(&Role::X4) {
                        let node = cfg.validate_abelian_node().map_err(SchemaError::from)?;
                        passed &= node.passed;
                        report["abelian_node"] = to_value(&node);
                    }
                    (passed, report)
                }
            }
        }
        InstanceFile::FunctionalInstance(f) => instance_checks(&f.load()?)?,
        InstanceFile::Quadrangle(f) => {
            let report = validate_quadrangle(&f.load()?);
            (report.passed, to_value(&report))
        }
        InstanceFile::Group(data) => match validate_table(&data) {
            Ok(()) => (true, json!({ "order": data.elements.len() })),
            Err(defect) => (false, json!({ "defect": to_value(&defect) })),
        },
    };
    report["type"] = json!(kind);
    report["passed"] = json!(passed);
    Ok(Outcome::report(passed, report))
}

pub fn cmd_reconstruct(args: &ReconstructArgs) -> Result<Outcome, CliError> {
    let InstanceFile::FunctionalInstance(f) = read(&args.file)? else {
        return Err(CliError::Usage(
            "reconstruct expects a functional_instance file".into(),
        ));
    };
    let inst = f.load()?;
    let (mut passed, mut report) = instance_checks(&inst)?;
    if !passed {
        report["passed"] = json!(false);
        return Ok(Outcome::report(false, report));
    }
    let families = inst.extract_families().map_err(SchemaError::from)?;
    let closure = closure_check(&families).map_err(|e| CliError::Usage(e.to_string()))?;
    let presentation = presentation_property(&families);
    passed &= closure.passed && presentation.holds;
    report["closure"] = to_value(&closure);
    report["presentation"] = to_value(&presentation);

    let a = args.anchor_a.unwrap_or_else(|| inst.sort(Role::A1).id(0));
    let b = args.anchor_b.unwrap_or_else(|| inst.sort(Role::A3).id(0));
    match build_group(&inst, a) {
        Err(e) => {
            passed = false;
            report["group"] = json!({ "error": e.to_string() });
        }
        Ok(rc) => {
            let transitive = check_transitivity(&rc.action);
            passed &= transitive;
            report["group"] = json!({
                "anchor": a,
                "order": rc.group.order(),
                "abelian": rc.group.is_abelian(),
                "elements": rc.group.labels(),
            });
            report["action"] = json!({
                "points": rc.action.set.len(),
                "transitive": transitive,
                "axiom_checks": rc.action.axiom_checks(),
            });
            if let Some(path) = &args.emit_group {
                write(path, &InstanceFile::Group(rc.group.to_data()))?;
            }
            if args.abelian_check {
                let claim = ab_claim(&families.h);
                passed &= claim.holds;
                report["abelian_check"] = json!({
                    "ab_claim": to_value(&claim),
                    "group_abelian": rc.group.is_abelian(),
                });
            }
        }
    }
    report["faithfulness"] = to_value(&faithfulness_report(&inst).map_err(SchemaError::from)?);
    if let Some(path) = &args.emit_config {
        match emit_g_configuration(&inst, a, b) {
            Ok(em) => {
                write(
                    path,
                    &InstanceFile::FunctionalInstance((&em.instance).into()),
                )?;
                report["emitted"] = json!({ "anchor_b": b, "g": em.g, "y": em.y });
            }
            Err(e) => {
                passed = false;
                report["emitted"] = json!({ "error": e.to_string() });
            }
        }
    }
    report["passed"] = json!(passed);
    Ok(Outcome::report(passed, report))
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<Outcome, CliError> {
    if let Some(pm) = &args.matroid {
        let cfg = gen_matroid_instance(pm[0], pm[1] as usize)?;
        let report = json!({ "p": pm[0], "m": pm[1] });
        return deliver(
            InstanceFile::MatroidConfig((&cfg).into()),
            args.output.as_deref(),
            report,
        );
    }
    let spec: GroupSpec = args.group.as_deref().unwrap_or_default().parse()?;
    let action = builtin_action(&spec, &args.action.parse::<ActionSpec>()?)?;
    let g = &action.group;
    let element = |label: &Option<String>| -> Result<Option<usize>, CliError> {
        label
            .as_ref()
            .map(|l| {
                g.index_of(l)
                    .ok_or_else(|| CliError::Usage(format!("unknown element `{l}`")))
            })
            .transpose()
    };
    let designation = match (element(&args.a1)?, element(&args.a2)?, args.x2) {
        (None, None, None) => None,
        (a1, a2, x2) => {
            let d = Designation::default_for(&action);
            Some(Designation {
                a1: a1.unwrap_or(d.a1),
                a2: a2.unwrap_or(d.a2),
                x2: x2.unwrap_or(d.x2),
            })
        }
    };
    let inst = if args.abelian {
        gen_abelian_extension(&action, designation)?
    } else {
        gen_configuration(&action, designation)?
    };
    let report = json!({
        "group": spec.to_string(),
        "action": args.action,
        "order": g.order(),
        "points": action.set.len(),
    });
    deliver(
        InstanceFile::FunctionalInstance((&inst).into()),
        args.output.as_deref(),
        report,
    )
}

pub fn cmd_convert(path: &Path, to: Target, output: Option<&Path>) -> Result<Outcome, CliError> {
    let file = read(path)?;
    let converted = match (file, to) {
        (InstanceFile::FunctionalInstance(f), Target::Quadrangle) => {
            config_to_quad(&f.load()?).map(|q| InstanceFile::Quadrangle((&q).into()))
        }
        (InstanceFile::Quadrangle(f), Target::Configuration) => {
            quad_to_config(&f.load()?).map(|i| InstanceFile::FunctionalInstance((&i).into()))
        }
        (other, _) => {
            return Err(CliError::Usage(format!(
                "cannot convert {} to {to:?}",
                other.kind()
            )));
        }
    };
    match converted {
        Ok(file) => deliver(file, output, json!({ "passed": true })),
        Err(e) => Ok(Outcome::report(
            false,
            json!({ "passed": false, "error": e.to_string() }),
        )),
    }
}

pub fn cmd_glue(args: &GlueArgs) -> Result<Outcome, CliError> {
    let parse = |s: &str| s.parse::<ExactRational>();
    let (a, outer) = match (&args.a, &args.outer) {
        (Some(a), None) => (parse(a)?, None),
        (None, Some(o)) => {
            let o = parse(o)?;
            (select_inner(&o)?, Some(o))
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --a and --outer".into(),
            ))
        }
    };
    let group = verify_group(&a, args.grid)?;
    let embedding = verify_embedding(&a, args.grid)?;
    let passed = group.passed() && embedding.holds;
    let mut report = json!({
        "a": a.to_string(),
        "group": to_value(&group),
        "embedding": to_value(&embedding),
        "passed": passed,
    });
    if let Some(o) = outer {
        report["outer"] = json!(o.to_string());
    }
    Ok(Outcome::report(passed, report))
}

pub fn cmd_iso(first: &Path, second: &Path) -> Result<Outcome, CliError> {
    let (InstanceFile::Group(g1), InstanceFile::Group(g2)) = (read(first)?, read(second)?) else {
        return Err(CliError::Usage("iso expects two group files".into()));
    };
    let witness = iso_check_data(&g1, &g2)?;
    let report = json!({
        "isomorphic": witness.is_some(),
        "witness": witness.map(|w| {
            w.map
                .iter()
                .enumerate()
                .map(|(a, &b)| (g1.elements[a].clone(), json!(g2.elements[b])))
                .collect::<serde_json::Map<_, _>>()
        }),
    });
    Ok(Outcome::report(report["isomorphic"] == json!(true), report))
}
