//! Report documents. Every report carries `schema_version`; keys are sorted,
//! so identical inputs give byte-identical output.

use pvtopo::{
    build_ql, deadlocks, default_window, equivalent_programs, flip_oracle, h0_rank, homology,
    homology_of_model, model, reduce, state_space, validate, EuclideanComplex, HomologyProfile,
    IntBox, PVProgram, PathSpaceModel, SimplicialComplex,
};
use serde_json::{json, Value};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

fn program_stats(p: &PVProgram) -> Value {
    let capacities: Vec<Value> = p
        .resources()
        .iter()
        .map(|(_, name, cap)| json!({"name": name, "capacity": cap}))
        .collect();
    let profile = pvtopo::capacity_profile(p);
    json!({
        "processes": p.dim(),
        "resources": p.resources().len(),
        "capacities": capacities,
        "max_capacity": profile.max,
    })
}

fn validity(p: &PVProgram) -> Value {
    let per_process: Vec<Value> = p
        .processes()
        .iter()
        .map(|q| {
            let r = validate(q);
            let violations: Vec<Value> = r
                .violations
                .iter()
                .map(|v| {
                    json!({
                        "resource": p.resources().name(v.resource),
                        "at": v.at.to_string(),
                        "value": v.value,
                        "kind": v.kind,
                    })
                })
                .collect();
            json!({
                "valid": r.valid,
                "elementary": r.elementary,
                "elementary_valid": r.elementary_valid,
                "violations": violations,
            })
        })
        .collect();
    json!(per_process)
}

fn all_valid(validity: &Value) -> bool {
    validity
        .as_array()
        .is_some_and(|v| v.iter().all(|p| p["valid"] == json!(true)))
}

fn model_json(m: &PathSpaceModel) -> Value {
    json!({
        "tree": m,
        "description": m.describe(),
        "components": h0_rank(m),
    })
}

fn homology_json(h: &Option<HomologyProfile>) -> Value {
    match h {
        Some(h) => json!({
            "betti": h.betti,
            "torsion": json!(h)["torsion"],
            "euler_characteristic": h.euler_characteristic(),
            "table": homology_line(h),
        }),
        None => Value::Null,
    }
}

/// `H0 = Z^2, H1 = Z/2`, listing nonzero groups only.
pub fn homology_line(h: &HomologyProfile) -> String {
    let mut parts = Vec::new();
    for d in 0..h.betti.len().max(h.torsion.len()) {
        let mut summands = Vec::new();
        match h.betti(d) {
            0 => {}
            1 => summands.push("Z".to_string()),
            b => summands.push(format!("Z^{b}")),
        }
        summands.extend(h.torsion(d).iter().map(|t| format!("Z/{t}")));
        if !summands.is_empty() {
            parts.push(format!("H{d} = {}", summands.join(" + ")));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(", ")
    }
}

/// The program `Q(L)` and the predicted type of its execution space,
/// `|L| ⊔ S^{n−2}`.
pub fn realize(l: &SimplicialComplex) -> Result<(Value, Value), CliError> {
    let n = l.n();
    let program = build_ql(l)?;
    let sphere = SimplicialComplex::boundary_simplex(n)?;
    let predicted = PathSpaceModel::disjoint_union([
        PathSpaceModel::complex(l.clone()),
        PathSpaceModel::Complex(sphere.clone()),
    ]);
    let nonfaces: Vec<Vec<usize>> = l
        .minimal_nonfaces()
        .into_iter()
        .map(pvtopo::simplicial::vertices_of)
        .collect();
    let validity = validity(&program);
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "realize",
        "complex": {
            "n": n,
            "f_vector": l.f_vector(),
            "minimal_nonfaces": nonfaces,
        },
        "program": program_stats(&program),
        "program_file": pvtopo::io::program_to_json(&program),
        "valid": all_valid(&validity),
        "endpoints": {"from": vec![0; n], "to": vec![2; n]},
        "predicted": {
            "model": model_json(&predicted),
            "components": [
                {"space": "|L|", "homology": homology_json(&Some(homology(l, false)))},
                {"space": format!("S^{}", n - 2), "homology": homology_json(&Some(homology(&sphere, false)))},
            ],
            "homology": homology_json(&homology_of_model(&predicted)),
        },
    });
    Ok((report, pvtopo::io::program_to_json(&program)))
}

pub fn realize_text(r: &Value) -> String {
    let p = &r["program"];
    let mut out = format!(
        "program: {} processes, {} resources, max capacity {}\n",
        p["processes"], p["resources"], p["max_capacity"]
    );
    out += &format!("valid: {}\n", r["valid"]);
    out += &format!(
        "predicted: {}\n",
        r["predicted"]["model"]["description"]
            .as_str()
            .unwrap_or("")
    );
    for c in r["predicted"]["components"]
        .as_array()
        .into_iter()
        .flatten()
    {
        out += &format!(
            "  {}: {}\n",
            c["space"].as_str().unwrap_or(""),
            c["homology"]["table"].as_str().unwrap_or("")
        );
    }
    out
}

/// Full analysis of `program` between its corners. The flag is false when
/// the model has an `Unknown` part.
pub fn analyze(
    program: &PVProgram,
    window: Option<IntBox>,
    cap: Option<u64>,
) -> Result<(Value, bool), CliError> {
    let mut warnings: Vec<String> = Vec::new();
    let (lo, hi) = program.corners()?;
    let window = match window {
        Some(w) => w,
        None => default_window(program)?,
    };
    if window.dim() != program.dim() || !window.contains_point(&lo) || !window.contains_point(&hi) {
        return Err(CliError::Input(format!(
            "window {window} does not contain the corners {lo:?} and {hi:?}"
        )));
    }
    for (j, p) in program.processes().iter().enumerate() {
        if p.progression().is_none() {
            warnings.push(format!(
                "process {} has no progression; using 0, 1, 2, ...",
                j + 1
            ));
        }
    }
    let validity = validity(program);
    if !all_valid(&validity) {
        warnings.push("program is not valid; the state space need not model its executions".into());
    }
    let k = state_space(program, &window)?;
    let dead = deadlocks(&k, &lo, &hi)?;
    let m = model(&k, &lo, &hi)?;
    let h = homology_of_model(&m);
    if let Some(PathSpaceModel::Unknown { reason, vertex }) = m.first_unknown() {
        warnings.push(format!("model unknown at {vertex:?}: {reason}"));
    } else if h.is_none() {
        warnings.push(
            "homology of a product with several non-contractible factors is not computed".into(),
        );
    }
    let components = h0_rank(&m);
    let oracle = match cap {
        None => Value::Null,
        Some(cap) => match flip_oracle(&k, &lo, &hi, cap) {
            Ok(o) => {
                let agrees = components.map(|c| c == o.classes);
                if agrees == Some(false) {
                    warnings.push(format!(
                        "model has {} components but the oracle finds {} path classes",
                        components.unwrap_or(0),
                        o.classes
                    ));
                }
                json!({"paths": o.paths, "classes": o.classes, "agrees": agrees})
            }
            Err(pvtopo::Error::CapExceeded(_)) => {
                warnings.push(format!("oracle skipped: more than {cap} paths"));
                json!({"paths": null, "classes": null, "agrees": null, "cap": cap})
            }
            Err(e) => return Err(e.into()),
        },
    };
    let complete = !m.is_unknown();
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "program": program_stats(program),
        "validity": validity,
        "window": {"lo": window.lo, "hi": window.hi},
        "endpoints": {"from": lo, "to": hi},
        "state_space": {"cubes_by_dimension": k.counts_by_dim(), "cubes": k.len()},
        "deadlocks": dead,
        "model": model_json(&m),
        "homology": homology_json(&h),
        "oracle": oracle,
        "complete": complete,
        "warnings": warnings,
    });
    Ok((report, complete))
}

pub fn analyze_text(r: &Value) -> String {
    let p = &r["program"];
    let mut out = format!(
        "program: {} processes, {} resources, max capacity {}\n",
        p["processes"], p["resources"], p["max_capacity"]
    );
    let valid = r["validity"].as_array().map_or(0, |v| {
        v.iter().filter(|q| q["valid"] == json!(true)).count()
    });
    out += &format!("valid processes: {valid} of {}\n", p["processes"]);
    out += &format!(
        "state space: {} cubes, by dimension {}\n",
        r["state_space"]["cubes"], r["state_space"]["cubes_by_dimension"]
    );
    out += &format!("deadlocks: {}\n", r["deadlocks"]);
    out += &format!(
        "model: {}\n",
        r["model"]["description"].as_str().unwrap_or("")
    );
    out += &format!(
        "homology: {}\n",
        r["homology"]["table"].as_str().unwrap_or("not computed")
    );
    if !r["oracle"].is_null() {
        out += &format!("oracle classes: {}\n", r["oracle"]["classes"]);
    }
    for w in r["warnings"].as_array().into_iter().flatten() {
        out += &format!("warning: {}\n", w.as_str().unwrap_or(""));
    }
    out
}

pub fn equiv(p: &PVProgram, q: &PVProgram) -> Result<Value, CliError> {
    let equivalent = equivalent_programs(p, q)?;
    let normal = |x: &PVProgram| -> Vec<Vec<String>> {
        x.processes()
            .iter()
            .map(|proc_| {
                reduce(proc_)
                    .ops()
                    .iter()
                    .map(|op| op.display(x.resources()).to_string())
                    .collect()
            })
            .collect()
    };
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "equiv",
        "equivalent": equivalent,
        "reduced": {"first": normal(p), "second": normal(q)},
    }))
}

/// Flip classes from the lower to the upper corner of `k`'s window.
pub fn oracle(k: &EuclideanComplex, cap: u64) -> Result<(Value, bool), CliError> {
    let w = k.window();
    let (paths, classes, reps, complete) = match flip_oracle(k, &w.lo, &w.hi, cap) {
        Ok(o) => (
            json!(o.paths),
            json!(o.classes),
            json!(o.representatives),
            true,
        ),
        Err(pvtopo::Error::CapExceeded(_)) => (Value::Null, Value::Null, Value::Null, false),
        Err(e) => return Err(e.into()),
    };
    let warnings: Vec<String> = if complete {
        Vec::new()
    } else {
        vec![format!("more than {cap} paths")]
    };
    Ok((
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": "oracle",
            "endpoints": {"from": w.lo, "to": w.hi},
            "cap": cap,
            "paths": paths,
            "classes": classes,
            "representatives": reps,
            "warnings": warnings,
        }),
        complete,
    ))
}

pub fn oracle_text(r: &Value) -> String {
    let mut out = format!("paths: {}\nclasses: {}\n", r["paths"], r["classes"]);
    for rep in r["representatives"].as_array().into_iter().flatten() {
        let axes: Vec<String> = rep
            .as_array()
            .into_iter()
            .flatten()
            .map(|a| (a.as_u64().unwrap_or(0) + 1).to_string())
            .collect();
        out += &format!("  {}\n", axes.join(" "));
    }
    for w in r["warnings"].as_array().into_iter().flatten() {
        out += &format!("warning: {}\n", w.as_str().unwrap_or(""));
    }
    out
}

pub fn complex_text(k: &EuclideanComplex) -> String {
    let counts: Vec<String> = k.counts_by_dim().iter().map(usize::to_string).collect();
    format!(
        "n = {}, window {}\ncubes by dimension: {}\n",
        k.n(),
        k.window(),
        counts.join(" ")
    )
}

pub fn program_text(p: &PVProgram) -> String {
    let mut out = String::new();
    for (j, q) in p.processes().iter().enumerate() {
        let ops: Vec<String> = q
            .ops()
            .iter()
            .map(|op| op.display(p.resources()).to_string())
            .collect();
        out += &format!("Q{}: {}\n", j + 1, ops.join(" "));
    }
    out
}
