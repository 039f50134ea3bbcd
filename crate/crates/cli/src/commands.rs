use std::path::Path;
use std::time::Duration;

use serde_json::{json, Value};
use upb_core::bes;
use upb_core::catalog::{self, UpbDocument};
use upb_core::combinators::DerivationNode;
use upb_core::par::Execution;
use upb_core::planner::{self, format_values, Closure, MissingFact, Realization};
use upb_core::recipe::{build, LeafTable, Recipe};
use upb_core::states::{SystemDims, UpbCandidate};
use upb_core::verifier::{self, ExactOptions, SeesawOptions, Verdict, VerificationCertificate};

use super::{with_schema, BesArgs, Failure, Method, Output, PlanArgs, GridArgs, VerifyArgs};

/// Runs `f` on a pool of `threads` workers; one thread means sequential execution.
fn with_threads<T: Send>(
    threads: usize,
    f: impl FnOnce(Execution) -> T + Send,
) -> Result<T, Failure> {
    if threads == 0 {
        return Err(Failure::usage("usage", "--threads must be at least 1"));
    }
    if threads == 1 {
        return Ok(f(Execution::Sequential));
    }
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Failure::usage("thread_pool", e.to_string()))?;
        Ok(pool.install(|| f(Execution::Parallel)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(f(Execution::Sequential))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))
}

fn load_upb(path: &Path) -> Result<UpbCandidate, Failure> {
    Ok(catalog::import_upb(&read(path)?)?)
}

fn document_json(doc: &UpbDocument) -> Value {
    with_schema(serde_json::to_value(doc).expect("document serializes"))
}

fn summary(u: &UpbCandidate) -> Value {
    json!({
        "label": u.label,
        "dims": u.dims().as_slice(),
        "k": u.len(),
        "missing": u.missing_number(),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut base, extra) {
        a.extend(b);
    }
    base
}

pub fn catalog_list() -> Result<Output, Failure> {
    let leaves: Vec<Value> = catalog::leaf_names()
        .iter()
        .map(|name| {
            let u = catalog::leaf(name).expect("registered leaf");
            merge(json!({ "name": name }), summary(&u))
        })
        .collect();
    let facts = catalog::existence_facts(planner::GRID_MAX, planner::GRID_MAX);
    Ok(Output::json(0, json!({ "leaves": leaves, "facts": facts })))
}

fn parse_import(arg: &str) -> Result<(Option<String>, &Path), Failure> {
    match arg.split_once('=') {
        Some((name, path)) if !name.is_empty() => Ok((Some(name.to_string()), Path::new(path))),
        Some(_) => Err(Failure::usage(
            "usage",
            format!("bad import {arg:?}, expected NAME=PATH"),
        )),
        None => Ok((None, Path::new(arg))),
    }
}

fn recipe_from_file(text: &str) -> Result<Recipe, Failure> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Failure::usage("malformed_document", e.to_string()))?;
    let node = value.get("derivation").cloned().unwrap_or(value);
    let node: DerivationNode = serde_json::from_value(node)
        .map_err(|e| Failure::usage("malformed_document", e.to_string()))?;
    Ok(Recipe::from_derivation(&node)?)
}

pub fn construct(recipe: &str, out: Option<&Path>, imports: &[String]) -> Result<Output, Failure> {
    let mut leaves = LeafTable::new();
    for arg in imports {
        let (name, path) = parse_import(arg)?;
        let name = name.ok_or_else(|| {
            Failure::usage("usage", format!("bad import {arg:?}, expected NAME=PATH"))
        })?;
        leaves.insert(name, load_upb(path)?);
    }
    let path = Path::new(recipe);
    let parsed = if path.is_file() {
        recipe_from_file(&read(path)?)?
    } else {
        Recipe::parse(recipe)?
    };
    let c = build(&parsed, &leaves)?;
    let mut doc = UpbDocument::from_candidate(&c.upb);
    doc.derivation = Some(c.derivation.clone());
    doc.source = Some(parsed.to_string());
    let payload = match out {
        Some(p) => {
            let text = serde_json::to_string_pretty(&document_json(&doc)).expect("serializes");
            std::fs::write(p, text + "\n")
                .map_err(|e| Failure::usage("io", format!("{}: {e}", p.display())))?;
            merge(
                summary(&c.upb),
                json!({ "recipe": parsed.to_string(), "out": p.display().to_string() }),
            )
        }
        None => document_json(&doc),
    };
    Ok(Output::json(0, payload))
}

fn default_seed() -> Result<u64, Failure> {
    match std::env::var("UPB_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| {
            Failure::usage(
                "usage",
                format!("UPB_SEED must be an unsigned integer, got {s:?}"),
            )
        }),
        Err(_) => Ok(1),
    }
}

fn exit_for(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Upb => 0,
        Verdict::Extendible => 1,
        Verdict::Inconclusive => 3,
    }
}

pub fn verify(a: &VerifyArgs) -> Result<Output, Failure> {
    let u = load_upb(&a.file)?;
    let seed = match a.seed {
        Some(s) => s,
        None => default_seed()?,
    };
    let cert = with_threads(a.threads, |exec| {
        let exact = || {
            verifier::verify_exact_with(
                &u,
                &ExactOptions {
                    prune: !a.no_prune,
                    timeout: a.timeout_ms.map(Duration::from_millis),
                    execution: exec,
                },
            )
        };
        let numeric = || {
            verifier::verify_seesaw(
                &u,
                &SeesawOptions {
                    seed,
                    restarts: a.restarts,
                    execution: exec,
                    ..Default::default()
                },
            )
        };
        match a.method {
            Method::Exact => exact(),
            Method::Seesaw => numeric(),
            Method::Both => combine(exact(), numeric()),
        }
    })?;
    let payload = merge(
        merge(
            summary(&u),
            json!({ "orthogonal": verifier::check_orthonormality(&u) }),
        ),
        serde_json::to_value(&cert).expect("certificate serializes"),
    );
    Ok(Output::json(exit_for(cert.verdict), payload))
}

/// The exact verdict wins; a rounded seesaw witness settles an inconclusive search.
fn combine(
    exact: VerificationCertificate,
    numeric: VerificationCertificate,
) -> VerificationCertificate {
    let mut out =
        if exact.verdict == Verdict::Inconclusive && numeric.verdict == Verdict::Extendible {
            VerificationCertificate {
                mode: format!("{}+seesaw", exact.mode),
                nodes: exact.nodes,
                millis: exact.millis + numeric.millis,
                ..numeric.clone()
            }
        } else {
            exact
        };
    out.seesaw = numeric.seesaw;
    out
}

fn load_fact(arg: &str) -> Result<MissingFact, Failure> {
    let (name, path) = parse_import(arg)?;
    let u = load_upb(path)?;
    let name = name.unwrap_or_else(|| u.label.clone());
    Ok(MissingFact::imported(
        &name,
        u.dims().as_slice().to_vec(),
        u.missing_number(),
    ))
}

fn realization_json(k: usize, r: Realization) -> Value {
    match r {
        Realization::Buildable(d) => json!({
            "k": k,
            "kind": "Buildable",
            "recipe": Recipe::from_derivation(&d).map(|r| r.to_string()).ok(),
            "derivation": d,
        }),
        Realization::ExistenceOnly(d) => {
            json!({ "k": k, "kind": "ExistenceOnly", "derivation": d })
        }
        Realization::Unknown => json!({ "k": k, "kind": "Unknown" }),
    }
}

pub fn plan(a: &PlanArgs) -> Result<Output, Failure> {
    let dims = SystemDims::new(a.dims.clone())?;
    let d = dims.as_slice();
    if d[0] > a.max || d[1] > a.max {
        return Err(Failure::usage(
            "invalid_dims",
            format!("bipartite dims {}x{} exceed --max {}", d[0], d[1], a.max),
        ));
    }
    let extra = a
        .imports
        .iter()
        .map(|s| load_fact(s))
        .collect::<Result<Vec<_>, _>>()?;
    let (fact, realization) = with_threads(a.threads, |exec| -> Result<_, Failure> {
        if d.len() == 2 {
            let c = Closure::compute(d[0], d[1], &extra, exec);
            Ok((
                c.fact(d[0], d[1]),
                a.realize.map(|k| c.realize(d[0], d[1], k)),
            ))
        } else {
            let p = planner::multipartite_plan(d, &extra, exec)?;
            Ok((p.fact(), a.realize.map(|k| p.realize(k))))
        }
    })??;
    let guaranteed: Vec<Value> = planner::guaranteed_ranges(d)
        .into_iter()
        .map(|g| {
            json!({
                "name": g.name,
                "values": format_values(&g.values),
                "contained": g.values.is_subset(&fact.values),
            })
        })
        .collect();
    let mut payload = merge(
        serde_json::to_value(&fact).expect("fact serializes"),
        json!({ "valuesText": format_values(&fact.values), "guaranteed": guaranteed }),
    );
    let mut exit = 0;
    if let (Some(k), Some(r)) = (a.realize, realization) {
        if r == Realization::Unknown {
            exit = 1;
        }
        payload = merge(payload, json!({ "realize": realization_json(k, r) }));
    }
    Ok(Output::json(exit, payload))
}

pub fn grid(a: &GridArgs) -> Result<Output, Failure> {
    let report = with_threads(a.threads, planner::reproduce_reference_grid)?;
    let exit = if report.is_reproduced() { 0 } else { 1 };
    let grid = report.grid();
    if a.format == super::Format::Text {
        let text = format!(
            "{grid}missed values: {}\nextra values: {}\n",
            report.missed_total, report.extra_total
        );
        return Ok(Output {
            exit,
            payload: Value::Null,
            text: Some(text),
        });
    }
    let cells: Vec<Value> = report
        .cells
        .iter()
        .map(|c| {
            json!({
                "row": c.row,
                "col": c.col,
                "table": format_values(&c.table),
                "closure": format_values(&c.closure),
                "missed": c.missed,
                "extra": c.extra,
            })
        })
        .collect();
    Ok(Output::json(
        exit,
        json!({
            "reproduced": report.is_reproduced(),
            "missedTotal": report.missed_total,
            "extraTotal": report.extra_total,
            "cells": cells,
            "grid": grid.lines().collect::<Vec<_>>(),
        }),
    ))
}

pub fn bes(a: &BesArgs) -> Result<Output, Failure> {
    let u = load_upb(&a.file)?;
    let timeout = a.timeout_ms.map(Duration::from_millis);
    let (rho, report, verdict) = with_threads(a.threads, |exec| -> Result<_, Failure> {
        let cert = if a.skip_verify {
            None
        } else {
            let c = verifier::verify_exact_with(
                &u,
                &ExactOptions {
                    timeout,
                    execution: exec,
                    ..Default::default()
                },
            );
            match c.verdict {
                Verdict::Upb => Some(c),
                Verdict::Extendible => {
                    return Err(Failure {
                        exit: 1,
                        code: "not_certified".into(),
                        message: "the set is extendible, so its complement holds a product state".into(),
                    })
                }
                Verdict::Inconclusive => {
                    return Err(Failure {
                        exit: 3,
                        code: "inconclusive".into(),
                        message: "unextendibility check hit the time limit; rerun with --skip-verify to waive".into(),
                    })
                }
            }
        };
        let rho = bes::upb_state(&u, cert.as_ref())?;
        let report = bes::report(&u, &rho, exec);
        Ok((rho, report, cert.map(|c| c.verdict)))
    })??;
    let exit = if report.passes() { 0 } else { 1 };
    let payload = merge(
        json!({ "label": rho.label, "verdict": verdict }),
        serde_json::to_value(&report).expect("report serializes"),
    );
    Ok(Output::json(exit, payload))
}
