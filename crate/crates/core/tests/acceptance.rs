//! End-to-end acceptance criteria. Runs without the test harness so each
//! criterion's PASS/FAIL line is always printed; exits 1 if any fails.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use common::{regular, span_rank, spec, CORPUS, NON_ABELIAN};
use gcfg::cli::{cmd_generate, cmd_glue, cmd_reconstruct, GenerateArgs, GlueArgs, ReconstructArgs};
use gcfg::configuration::ClauseReport;
use gcfg::gpgen::{
    builtin_action, builtin_group, gen_configuration, gen_matroid_instance, ActionSpec,
};
use gcfg::groupiso::{is_isomorphic, iso_check};
use gcfg::io::InstanceFile;
use gcfg::localglue::{verify_group, ExactRational};
use gcfg::quadrangle::{config_to_quad, quad_to_config, validate_quadrangle};
use gcfg::reconstruct::{
    ab_claim, build_group, check_transitivity, closure_check, emit_g_configuration,
    faithfulness_report, presentation_property,
};
use gcfg::{AtomId, ConfigPoints, FiniteGroupTable, Role};
use tempfile::TempDir;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load_group(path: &Path) -> FiniteGroupTable {
    let text = std::fs::read_to_string(path).unwrap();
    let InstanceFile::Group(data) = InstanceFile::parse(&text).unwrap() else {
        panic!("{} is not a group file", path.display());
    };
    FiniteGroupTable::new(data).unwrap()
}

fn generate_args(group: &str, output: &Path) -> GenerateArgs {
    GenerateArgs {
        group: Some(group.into()),
        action: "regular".into(),
        abelian: false,
        matroid: None,
        a1: None,
        a2: None,
        x2: None,
        output: Some(output.into()),
    }
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let dir = TempDir::new().unwrap();
    for s in CORPUS {
        let inst = dir.path().join(format!("{s}.json"));
        let group = dir.path().join(format!("{s}.group.json"));
        let gen = cmd_generate(&generate_args(s, &inst)).map_err(|e| format!("{s}: {e}"))?;
        ensure(gen.code == 0, || format!("{s}: generate exit {}", gen.code))?;
        let out = cmd_reconstruct(&ReconstructArgs {
            file: inst,
            anchor_a: None,
            anchor_b: None,
            abelian_check: false,
            emit_group: Some(group.clone()),
            emit_config: None,
        })
        .map_err(|e| format!("{s}: {e}"))?;
        ensure(out.code == 0, || {
            format!("{s}: reconstruct exit {}", out.code)
        })?;
        ensure(out.report["action"]["transitive"] == true, || {
            format!("{s}: not transitive")
        })?;
        ensure(out.report["faithfulness"]["faithful"] == true, || {
            format!("{s}: not faithful")
        })?;
        let expected = builtin_group(&spec(s)).unwrap();
        let witness = iso_check(&load_group(&group), &expected).unwrap();
        ensure(witness.is_some(), || {
            format!("{s}: reconstructed group not isomorphic")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{} groups in {elapsed:.2?}", CORPUS.len()))
}

fn kernel_quotient() -> Outcome {
    let mut log = Vec::new();
    for (g, a, order, kernel) in [
        ("cyclic:4", "quotient:2", 2, 2),
        ("cyclic:6", "quotient:3", 3, 2),
    ] {
        let action = builtin_action(&spec(g), &a.parse::<ActionSpec>().unwrap()).unwrap();
        let inst = gen_configuration(&action, None).unwrap();
        let rc = build_group(&inst, inst.sort(Role::A1).id(0)).map_err(|e| e.to_string())?;
        let f = faithfulness_report(&inst).map_err(|e| e.to_string())?;
        ensure(rc.group.order() == order, || {
            format!("{g} {a}: order {}", rc.group.order())
        })?;
        ensure(!f.faithful && f.kernel_size == Some(kernel), || {
            format!("{g} {a}: {f:?}")
        })?;
        let quotient = builtin_group(&spec(&format!("cyclic:{order}"))).unwrap();
        ensure(is_isomorphic(&rc.group, &quotient), || {
            format!("{g} {a}: not cyclic")
        })?;
        log.push(format!("{g}/{a} -> order {order}, kernel {kernel}"));
    }
    Ok(log.join("; "))
}

fn claim_sweep() -> Outcome {
    let mut total = 0u64;
    let mut s3 = 0;
    for s in CORPUS {
        let inst = regular(s);
        let families = inst.extract_families().map_err(|e| e.to_string())?;
        let closure = closure_check(&families).map_err(|e| e.to_string())?;
        ensure(closure.passed, || format!("{s}: closure {closure:?}"))?;
        let pres = presentation_property(&families);
        ensure(pres.holds, || {
            format!("{s}: presentation witness {:?}", pres.witness)
        })?;
        let n = families.l.len() as u64;
        ensure(pres.checked == n * n * n, || {
            format!("{s}: presentation checked {}", pres.checked)
        })?;
        let rc = build_group(&inst, inst.sort(Role::A1).id(0)).map_err(|e| e.to_string())?;
        rc.action.check_axioms().map_err(|e| format!("{s}: {e}"))?;
        let counts: Vec<u64> = closure.clauses.iter().map(|c| c.report.checked).collect();
        let axioms = rc.action.axiom_checks();
        println!(
            "    {s}: closure {counts:?}, presentation {}, action axioms {axioms}",
            pres.checked
        );
        total += counts.iter().sum::<u64>() + pres.checked + axioms;
        if s == "symmetric:3" {
            s3 = pres.checked;
        }
    }
    ensure(s3 == 216, || format!("S3 presentation checked {s3}"))?;
    Ok(format!(
        "{total} checks over {} instances (S3 presentation: {s3})",
        CORPUS.len()
    ))
}

fn abelian_equivalence() -> Outcome {
    let mut witnesses = 0;
    for s in CORPUS {
        let abelian = builtin_group(&spec(s)).unwrap().is_abelian();
        ensure(abelian != NON_ABELIAN.contains(&s), || {
            format!("{s}: corpus label")
        })?;
        let inst = regular(s);
        let claim = ab_claim(&inst.extract_families().map_err(|e| e.to_string())?.h);
        let quad = validate_quadrangle(&config_to_quad(&inst).map_err(|e| e.to_string())?);
        let iii = quad.axiom("iii");
        ensure(claim.holds == abelian, || {
            format!("{s}: ab_claim {}", claim.holds)
        })?;
        ensure(iii.holds == abelian, || {
            format!("{s}: axiom iii {}", iii.holds)
        })?;
        if !abelian {
            ensure(claim.witness.is_some() && iii.witness.is_some(), || {
                format!("{s}: missing witness")
            })?;
            witnesses += 1;
        }
    }
    Ok(format!("{witnesses} non-abelian groups with witnesses"))
}

fn quad_round_trip() -> Outcome {
    for s in CORPUS {
        let inst = regular(s);
        let original = build_group(&inst, inst.sort(Role::A1).id(0)).map_err(|e| e.to_string())?;
        let q = config_to_quad(&inst).map_err(|e| format!("{s}: {e}"))?;
        let back = quad_to_config(&q).map_err(|e| format!("{s}: {e}"))?;
        ensure(
            back.check_master_equation()
                .map_err(|e| e.to_string())?
                .holds,
            || format!("{s}: master equation"),
        )?;
        let rc = build_group(&back, back.sort(Role::A1).id(0)).map_err(|e| format!("{s}: {e}"))?;
        ensure(is_isomorphic(&rc.group, &original.group), || {
            format!("{s}: group changed")
        })?;
    }
    Ok(format!("{} instances", CORPUS.len()))
}

const MATROIDS: [(u64, usize); 5] = [(2, 1), (3, 1), (3, 2), (5, 1), (5, 2)];

/// Recomputes one `dim(t1,t2/o1o2A)` check by span counting.
fn oracle_dim(cfg: &ConfigPoints, expr: &str) -> usize {
    let body = expr
        .strip_prefix("dim(")
        .and_then(|e| e.strip_suffix("A)"))
        .unwrap();
    let (tuple, over) = body.split_once('/').unwrap();
    let points = cfg.matroid.points();
    let vectors = |names: Vec<&str>| -> Vec<Vec<u64>> {
        let mut vs: Vec<Vec<u64>> = cfg.base.iter().flat_map(|b| points[b].clone()).collect();
        for n in names {
            vs.extend(points[&cfg.roles[&n.parse::<Role>().unwrap()]].clone());
        }
        vs
    };
    let over_names: Vec<&str> = (0..over.len())
        .step_by(2)
        .map(|i| &over[i..i + 2])
        .collect();
    let mut all = over_names.clone();
    all.extend(tuple.split(','));
    let (p, n) = (cfg.matroid.p(), cfg.matroid.ambient());
    span_rank(p, n, &vectors(all)) - span_rank(p, n, &vectors(over_names))
}

fn oracle_agrees(cfg: &ConfigPoints, report: &ClauseReport) -> Result<usize, String> {
    let mut n = 0;
    for c in &report.clauses {
        for check in &c.checks {
            let expected = oracle_dim(cfg, &check.expr);
            ensure(expected == check.measured, || {
                format!(
                    "{}: oracle {expected}, measured {}",
                    check.expr, check.measured
                )
            })?;
            n += 1;
        }
    }
    if let Some(inner) = &report.inner {
        n += oracle_agrees(cfg, inner)?;
    }
    Ok(n)
}

fn matroid_clauses() -> Outcome {
    let mut checks = 0;
    for (p, m) in MATROIDS {
        let cfg = gen_matroid_instance(p, m).map_err(|e| e.to_string())?;
        ensure(cfg.m == m && cfg.k == m, || format!("({p},{m}): m != k"))?;
        let mk = cfg.validate_mk().map_err(|e| e.to_string())?;
        let node = cfg.validate_abelian_node().map_err(|e| e.to_string())?;
        ensure(mk.passed, || format!("({p},{m}): {:?}", mk.first_failure))?;
        ensure(node.passed, || {
            format!("({p},{m}): {:?}", node.first_failure)
        })?;
        for id in ["i", "ii", "iii", "iv"] {
            ensure(mk.clause(id).is_some_and(|c| c.passed), || {
                format!("({p},{m}): clause {id}")
            })?;
        }
        checks += oracle_agrees(&cfg, &mk).map_err(|e| format!("({p},{m}) {e}"))?;
        checks += oracle_agrees(&cfg, &node).map_err(|e| format!("({p},{m}) {e}"))?;
    }
    Ok(format!(
        "{} instances, {checks} rank checks match the span oracle",
        MATROIDS.len()
    ))
}

fn dimension_formula() -> Outcome {
    let mut checked = 0u64;
    for (p, m) in MATROIDS {
        let cfg = gen_matroid_instance(p, m).map_err(|e| e.to_string())?;
        let labels: Vec<&str> = cfg.matroid.points().keys().map(String::as_str).collect();
        for mask in 0u32..(1 << labels.len()) {
            let base: Vec<&str> = (0..labels.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| labels[i])
                .collect();
            for &a in &labels {
                for &b in &labels {
                    let dim = |t: &[&str], extra: &[&str]| {
                        let mut over = base.clone();
                        over.extend_from_slice(extra);
                        cfg.matroid.dim(t, &over).unwrap()
                    };
                    let lhs = dim(&[a, b], &[]);
                    let rhs = dim(&[a], &[b]) + dim(&[b], &[]);
                    ensure(lhs == rhs, || {
                        format!("({p},{m}) a={a} b={b} A={base:?}: {lhs} != {rhs}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (pair, base) combinations"))
}

fn gluing() -> Outcome {
    let start = Instant::now();
    let glue = |a: &str, grid: u64| {
        cmd_glue(&GlueArgs {
            a: Some(a.into()),
            outer: None,
            grid,
        })
        .map_err(|e| e.to_string())
    };
    let quarter = glue("1/4", 64)?;
    ensure(quarter.code == 0, || {
        format!("1/4 grid 64: {}", quarter.report)
    })?;
    for sweep in ["identity", "inverse", "associativity"] {
        ensure(quarter.report["group"][sweep]["holds"] == true, || {
            format!("1/4: {sweep}")
        })?;
    }
    ensure(quarter.report["embedding"]["holds"] == true, || {
        "1/4: embedding".into()
    })?;
    let one = glue("1", 2)?;
    ensure(
        one.code == 0 && one.report["group"]["cyclic"] == true,
        || format!("1 grid 2: {}", one.report),
    )?;
    let table = verify_group(&ExactRational::integer(1), 2)
        .map_err(|e| e.to_string())?
        .table
        .ok_or("no table for a closed grid")?;
    let z4 = builtin_group(&spec("cyclic:4")).unwrap();
    ensure(is_isomorphic(&table, &z4), || {
        "grid 2 table is not Z/4".into()
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    let assoc = &quarter.report["group"]["associativity"]["checked"];
    Ok(format!(
        "{assoc} associativity triples, Z/4 table, {elapsed:.2?}"
    ))
}

fn emitted_configurations() -> Outcome {
    let mut emissions = 0;
    for s in CORPUS {
        let inst = regular(s);
        let a1 = inst.sort(Role::A1).elements().to_vec();
        let a3 = inst.sort(Role::A3).elements().to_vec();
        let original = build_group(&inst, a1[0]).map_err(|e| e.to_string())?;
        let anchors: Vec<(AtomId, AtomId)> = if original.group.order() <= 8 {
            a1.iter()
                .flat_map(|&a| a3.iter().map(move |&b| (a, b)))
                .collect()
        } else {
            vec![(a1[0], a3[0])]
        };
        for (a, b) in anchors {
            let em =
                emit_g_configuration(&inst, a, b).map_err(|e| format!("{s} ({a},{b}): {e}"))?;
            let out = &em.instance;
            ensure(out.validate_tables().passed, || {
                format!("{s} ({a},{b}): tables")
            })?;
            ensure(
                out.check_master_equation()
                    .map_err(|e| e.to_string())?
                    .holds,
                || format!("{s} ({a},{b}): master equation"),
            )?;
            let rc = build_group(out, out.sort(Role::A1).id(0)).map_err(|e| e.to_string())?;
            ensure(check_transitivity(&rc.action), || {
                format!("{s} ({a},{b}): not transitive")
            })?;
            ensure(is_isomorphic(&rc.group, &original.group), || {
                format!("{s} ({a},{b}): group changed")
            })?;
            ensure(
                is_isomorphic(&em.reconstruction.group, &original.group),
                || format!("{s} ({a},{b}): anchor-dependent group"),
            )?;
            emissions += 1;
        }
    }
    Ok(format!("{emissions} emissions"))
}

fn main() {
    let criteria: [Check; 9] = [
        ("round-trip reconstruction", round_trip),
        ("kernel quotient", kernel_quotient),
        ("claim sweep", claim_sweep),
        ("abelian equivalence", abelian_equivalence),
        ("quadrangle round trip", quad_round_trip),
        ("matroid clauses", matroid_clauses),
        ("dimension formula", dimension_formula),
        ("gluing", gluing),
        ("emitted configurations", emitted_configurations),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL criterion {}: {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", criteria.len());
    } else {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
