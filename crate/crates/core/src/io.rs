//! JSON formats for programs, complexes and simplicial complexes.
//!
//! Program:
//! `{"resources": [{"name": "a", "capacity": 1}], "processes": [[{"P": ["a"]}, {"V": ["a"]}]],
//!   "progressions": [[0, 1]]}`.
//! An operation lists released (`V`) and acquired (`P`) resources; a name
//! may repeat, or the list may be replaced by a `{name: count}` map.
//! `progressions` is optional, as is each entry (`null`).
//!
//! Complex: `{"n": 2, "box": [[0,0],[3,3]], "holes": [[[1,1],[2,2]]]}` or
//! `{"n": 2, "box": …, "cubes": [[[0,0],[1,0]], …]}` (closed under faces on
//! reading).
//!
//! Simplicial complex: `{"n": 4, "nonfaces": [[1,2]]}` or
//! `{"n": 4, "facets": [[1,3],[2,3,4]]}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::{
    holes_of, CubeMembership, ElementaryCube, EuclideanComplex, HoleSet, IntBox, OpenBox,
};
use crate::error::{Error, Result};
use crate::model::{PVOperation, PVProcess, PVProgram, ResourceId, ResourceSet};
use crate::simplicial::SimplicialComplex;

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("{what}: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProgramFile {
    resources: Vec<ResourceEntry>,
    processes: Vec<Vec<OpEntry>>,
    #[serde(default)]
    progressions: Option<Vec<Option<Vec<i64>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResourceEntry {
    name: String,
    capacity: u32,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct OpEntry {
    #[serde(default, rename = "V")]
    release: Counts,
    #[serde(default, rename = "P")]
    acquire: Counts,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Counts {
    List(Vec<String>),
    Map(BTreeMap<String, u32>),
}

impl Default for Counts {
    fn default() -> Self {
        Counts::List(Vec::new())
    }
}

impl Counts {
    fn resolve(&self, resources: &ResourceSet) -> Result<Vec<(ResourceId, u32)>> {
        let lookup = |name: &str| {
            resources
                .id(name)
                .ok_or_else(|| Error::UnknownResource(name.to_string()))
        };
        match self {
            Counts::List(names) => names.iter().map(|n| Ok((lookup(n)?, 1))).collect(),
            Counts::Map(map) => map.iter().map(|(n, &k)| Ok((lookup(n)?, k))).collect(),
        }
    }
}

pub fn parse_program(text: &str) -> Result<PVProgram> {
    let file: ProgramFile = parse(text, "program")?;
    let resources = ResourceSet::new(file.resources.into_iter().map(|r| (r.name, r.capacity)))?;
    if let Some(p) = &file.progressions {
        if p.len() != file.processes.len() {
            return Err(Error::Format(format!(
                "program: {} progressions for {} processes",
                p.len(),
                file.processes.len()
            )));
        }
    }
    let mut processes = Vec::with_capacity(file.processes.len());
    for (j, entries) in file.processes.iter().enumerate() {
        let mut ops = Vec::with_capacity(entries.len());
        for e in entries {
            let mut op = PVOperation::empty();
            for (r, k) in e.release.resolve(&resources)? {
                op = op.with_release(r, k);
            }
            for (r, k) in e.acquire.resolve(&resources)? {
                op = op.with_acquire(r, k);
            }
            ops.push(op);
        }
        let progression = file.progressions.as_ref().and_then(|p| p[j].clone());
        processes.push(match progression {
            Some(t) => PVProcess::with_progression(ops, t)?,
            None => PVProcess::new(ops),
        });
    }
    PVProgram::new(resources, processes)
}

fn names(map: &BTreeMap<ResourceId, u32>, resources: &ResourceSet) -> Vec<String> {
    map.iter()
        .flat_map(|(&r, &k)| std::iter::repeat_n(resources.name(r).to_string(), k as usize))
        .collect()
}

pub fn program_to_json(program: &PVProgram) -> Value {
    let res = program.resources();
    let resources: Vec<Value> = res
        .iter()
        .map(|(_, name, cap)| json!({"name": name, "capacity": cap}))
        .collect();
    let processes: Vec<Vec<Value>> = program
        .processes()
        .iter()
        .map(|p| {
            p.ops()
                .iter()
                .map(|op| {
                    let mut m = serde_json::Map::new();
                    if op.has_release() {
                        m.insert("V".into(), json!(names(op.release_map(), res)));
                    }
                    if op.has_acquire() {
                        m.insert("P".into(), json!(names(op.acquire_map(), res)));
                    }
                    Value::Object(m)
                })
                .collect()
        })
        .collect();
    let mut out = json!({"resources": resources, "processes": processes});
    if program
        .processes()
        .iter()
        .any(|p| p.progression().is_some())
    {
        let progressions: Vec<Value> = program
            .processes()
            .iter()
            .map(|p| json!(p.progression()))
            .collect();
        out["progressions"] = json!(progressions);
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexFile {
    #[serde(default)]
    n: Option<usize>,
    #[serde(default, rename = "box")]
    window: Option<(Vec<i64>, Vec<i64>)>,
    #[serde(default)]
    holes: Option<Vec<(Vec<i64>, Vec<i64>)>>,
    #[serde(default)]
    cubes: Option<Vec<(Vec<i64>, Vec<i64>)>>,
}

/// A parsed complex file: the complex and, for the hole form, its holes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexInput {
    pub complex: EuclideanComplex,
    pub holes: Option<HoleSet>,
}

pub fn parse_complex(text: &str) -> Result<ComplexInput> {
    let file: ComplexFile = parse(text, "complex")?;
    let window = file
        .window
        .map(|(lo, hi)| IntBox::new(lo, hi))
        .transpose()?;
    match (file.holes, file.cubes) {
        (Some(holes), None) => {
            let boxes = holes
                .into_iter()
                .map(|(k, l)| OpenBox::new(k, l))
                .collect::<Result<Vec<_>>>()?;
            let n = file
                .n
                .or_else(|| window.as_ref().map(IntBox::dim))
                .or_else(|| boxes.first().map(|b| b.lo.len()))
                .ok_or_else(|| Error::Format("complex: cannot infer n".into()))?;
            let h = HoleSet::new(n, boxes)?;
            let window = match window {
                Some(w) => w,
                None => match h.bounding_box() {
                    Some(b) => IntBox::new(
                        b.lo.iter().map(|x| x - 1).collect(),
                        b.hi.iter().map(|x| x + 1).collect(),
                    )?,
                    None => return Err(Error::Format("complex: no holes and no box".into())),
                },
            };
            let complex = crate::complex::from_holes(&h, &window)?;
            Ok(ComplexInput {
                complex,
                holes: Some(h),
            })
        }
        (None, Some(cubes)) => {
            let cubes = cubes
                .into_iter()
                .map(|(lo, hi)| ElementaryCube::new(lo, hi))
                .collect::<Result<Vec<_>>>()?;
            let n = file
                .n
                .or_else(|| window.as_ref().map(IntBox::dim))
                .or_else(|| cubes.first().map(ElementaryCube::n))
                .ok_or_else(|| Error::Format("complex: cannot infer n".into()))?;
            if let Some(c) = cubes.iter().find(|c| c.n() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.n(),
                });
            }
            let window = match window {
                Some(w) => w,
                None => {
                    let first = cubes
                        .first()
                        .ok_or_else(|| Error::Format("complex: no cubes and no box".into()))?;
                    let mut lo = first.lo.clone();
                    let mut hi = first.hi.clone();
                    for c in &cubes {
                        for i in 0..n {
                            lo[i] = lo[i].min(c.lo[i]);
                            hi[i] = hi[i].max(c.hi[i]);
                        }
                    }
                    IntBox::new(lo, hi)?
                }
            };
            if window.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: window.dim(),
                });
            }
            Ok(ComplexInput {
                complex: EuclideanComplex::from_cubes(window, &cubes)?,
                holes: None,
            })
        }
        _ => Err(Error::Format(
            "complex: exactly one of \"holes\" and \"cubes\" is required".into(),
        )),
    }
}

/// Cubes of `k` that are not faces of other members.
pub fn maximal_cubes(k: &EuclideanComplex) -> Vec<ElementaryCube> {
    k.cubes()
        .filter(|c| {
            let half: Vec<i64> = c.lo.iter().zip(&c.hi).map(|(a, b)| a + b).collect();
            (0..c.n()).filter(|&i| c.lo[i] == c.hi[i]).all(|i| {
                let mut h = half.clone();
                h[i] -= 1;
                let below = k.contains_half(&h);
                h[i] += 2;
                !below && !k.contains_half(&h)
            })
        })
        .collect()
}

fn pair(lo: &[i64], hi: &[i64]) -> Value {
    json!([lo, hi])
}

/// Hole form when the window shell is complete, maximal cubes otherwise.
pub fn complex_to_json(k: &EuclideanComplex) -> Value {
    let w = k.window();
    if let Ok(h) = holes_of(k) {
        debug_assert!(k.cubes().all(|c| h.contains_cube(&c)));
        let holes: Vec<Value> = h.holes().iter().map(|b| pair(&b.lo, &b.hi)).collect();
        json!({"n": k.n(), "box": pair(&w.lo, &w.hi), "holes": holes})
    } else {
        let cubes: Vec<Value> = maximal_cubes(k)
            .iter()
            .map(|c| pair(&c.lo, &c.hi))
            .collect();
        json!({"n": k.n(), "box": pair(&w.lo, &w.hi), "cubes": cubes})
    }
}

pub fn hole_set_to_json(h: &HoleSet, window: &IntBox) -> Value {
    let holes: Vec<Value> = h.holes().iter().map(|b| pair(&b.lo, &b.hi)).collect();
    json!({"n": h.n(), "box": pair(&window.lo, &window.hi), "holes": holes})
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SimplicialFile {
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    nonfaces: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    facets: Option<Vec<Vec<usize>>>,
}

pub fn parse_simplicial(text: &str) -> Result<SimplicialComplex> {
    let file: SimplicialFile = parse(text, "simplicial complex")?;
    match (file.nonfaces, file.facets) {
        (Some(nonfaces), None) => {
            let n = file.n.ok_or_else(|| {
                Error::Format("simplicial complex: \"n\" is required with \"nonfaces\"".into())
            })?;
            SimplicialComplex::from_minimal_nonfaces(n, &nonfaces)
        }
        (None, Some(facets)) => {
            let inferred = facets.iter().flatten().copied().max().unwrap_or(0);
            SimplicialComplex::from_facets(file.n.unwrap_or(inferred), &facets)
        }
        _ => Err(Error::Format(
            "simplicial complex: exactly one of \"nonfaces\" and \"facets\" is required".into(),
        )),
    }
}

pub fn simplicial_to_json(l: &SimplicialComplex) -> Value {
    json!({"n": l.n(), "facets": l.facet_lists()})
}
