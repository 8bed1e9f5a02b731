//! Execution equivalence of processes: the rewriting rules
//!
//! * `E`: `(…, ∅, …) ~ (…, …)`
//! * `V`: `(…, Vr, q, …) ~ (…, Vr + q, …)`
//! * `P`: `(…, q, Pr, …) ~ (…, q + Pr, …)`
//!
//! together with elementarization and the reduced normal form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{OpKind, PVOperation, PVProcess, PVProgram, ResourceId, ResourceSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    E,
    V,
    P,
}

/// `Merge` rewrites left-to-right as the rules are written (removing `∅`,
/// absorbing an elementary operation into its neighbour); `Split` is the
/// inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Merge,
    Split,
}

/// One rewrite at `position`.
///
/// * `E/Merge`: remove the empty operation at `position`.
/// * `E/Split`: insert an empty operation at `position`.
/// * `V/Merge`: the operation at `position` is `Vr`; add it to `position + 1`.
/// * `V/Split`: split `Vr` off the front of the operation at `position`.
/// * `P/Merge`: the operation at `position + 1` is `Pr`; add it to `position`.
/// * `P/Split`: split `Pr` off the back of the operation at `position`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RewriteStep {
    pub rule: Rule,
    pub direction: Direction,
    pub position: usize,
    pub resource: Option<ResourceId>,
}

/// Replayable sequence of rewrite steps.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    pub fn replay(&self, p: &PVProcess) -> Option<PVProcess> {
        let mut ops = p.ops().to_vec();
        for step in &self.steps {
            apply_step(&mut ops, step)?;
        }
        Some(PVProcess::new(ops))
    }
}

/// Applies one rewrite in place. Returns `None` (leaving `ops` untouched)
/// when the rule does not match.
pub fn apply_step(ops: &mut Vec<PVOperation>, step: &RewriteStep) -> Option<()> {
    let k = step.position;
    match (step.rule, step.direction) {
        (Rule::E, Direction::Merge) => {
            if !ops.get(k)?.is_empty() {
                return None;
            }
            ops.remove(k);
        }
        (Rule::E, Direction::Split) => {
            if k > ops.len() {
                return None;
            }
            ops.insert(k, PVOperation::empty());
        }
        (Rule::V, Direction::Merge) => {
            let (kind, r) = ops.get(k)?.as_elementary()?;
            if kind != OpKind::V || k + 1 >= ops.len() || step.resource.is_some_and(|s| s != r) {
                return None;
            }
            let merged = &ops[k] + &ops[k + 1];
            ops[k + 1] = merged;
            ops.remove(k);
        }
        (Rule::V, Direction::Split) => {
            let r = step.resource?;
            let rest = ops.get(k)?.without_release(r)?;
            ops[k] = rest;
            ops.insert(k, PVOperation::v(r));
        }
        (Rule::P, Direction::Merge) => {
            let (kind, r) = ops.get(k + 1)?.as_elementary()?;
            if kind != OpKind::P || step.resource.is_some_and(|s| s != r) {
                return None;
            }
            let merged = &ops[k] + &ops[k + 1];
            ops[k] = merged;
            ops.remove(k + 1);
        }
        (Rule::P, Direction::Split) => {
            let r = step.resource?;
            let rest = ops.get(k)?.without_acquire(r)?;
            ops[k] = rest;
            ops.insert(k + 1, PVOperation::p(r));
        }
    }
    Some(())
}

/// Equivalent elementary process: empty operations dropped, every operation
/// expanded into its releases (resource order, with multiplicity) followed by
/// its acquisitions. The trace rewrites `p` into the result.
pub fn elementarize(p: &PVProcess) -> (PVProcess, RewriteTrace) {
    let mut ops = p.ops().to_vec();
    let mut trace = RewriteTrace::default();
    let mut push = |ops: &mut Vec<PVOperation>, step: RewriteStep| {
        apply_step(ops, &step).expect("elementarization step must apply");
        trace.steps.push(step);
    };

    let mut k = 0;
    while k < ops.len() {
        if ops[k].is_empty() {
            push(
                &mut ops,
                RewriteStep {
                    rule: Rule::E,
                    direction: Direction::Merge,
                    position: k,
                    resource: None,
                },
            );
            continue;
        }
        // Peel releases off the front, smallest resource first.
        while !ops[k].is_elementary() && ops[k].has_release() {
            let r = *ops[k].release_map().keys().next().unwrap();
            push(
                &mut ops,
                RewriteStep {
                    rule: Rule::V,
                    direction: Direction::Split,
                    position: k,
                    resource: Some(r),
                },
            );
            k += 1;
        }
        // Then acquisitions off the back, largest resource first, so they end
        // up in increasing order.
        let mut tail = 0;
        while !ops[k].is_elementary() {
            let r = *ops[k].acquire_map().keys().next_back().unwrap();
            push(
                &mut ops,
                RewriteStep {
                    rule: Rule::P,
                    direction: Direction::Split,
                    position: k,
                    resource: Some(r),
                },
            );
            tail += 1;
        }
        k += 1 + tail;
    }
    (PVProcess::new(ops), trace)
}

/// Unique reduced process equivalent to `p`.
///
/// The elementary form splits into maximal blocks (releases, acquisitions);
/// each block is summed into one operation. In the result every operation
/// except the last acquires something and every operation except the first
/// releases something.
pub fn reduce(p: &PVProcess) -> PVProcess {
    let (elementary, _) = elementarize(p);
    let mut out: Vec<PVOperation> = Vec::new();
    let mut current = PVOperation::empty();
    for op in elementary.ops() {
        let (kind, _) = op.as_elementary().expect("elementary");
        if kind == OpKind::V && current.has_acquire() {
            out.push(std::mem::take(&mut current));
        }
        current = &current + op;
    }
    if !current.is_empty() {
        out.push(current);
    }
    PVProcess::new(out)
}

/// True when `p` is already in reduced form.
pub fn is_reduced(p: &PVProcess) -> bool {
    let ops = p.ops();
    let l = ops.len();
    ops.iter().enumerate().all(|(i, op)| {
        !op.is_empty() && (i + 1 == l || op.has_acquire()) && (i == 0 || op.has_release())
    })
}

pub fn equivalent_processes(p: &PVProcess, q: &PVProcess) -> bool {
    reduce(p).ops() == reduce(q).ops()
}

/// Re-expresses `p`'s operations over `to`'s resource ids (matched by name).
fn remap(p: &PVProcess, from: &ResourceSet, to: &ResourceSet) -> Result<PVProcess> {
    let map = |r: ResourceId| {
        to.id(from.name(r))
            .ok_or_else(|| Error::UnknownResource(from.name(r).to_string()))
    };
    let mut ops = Vec::with_capacity(p.len());
    for op in p.ops() {
        let mut out = PVOperation::empty();
        for (&r, &k) in op.release_map() {
            out = out.with_release(map(r)?, k);
        }
        for (&r, &k) in op.acquire_map() {
            out = out.with_acquire(map(r)?, k);
        }
        ops.push(out);
    }
    Ok(PVProcess::new(ops))
}

/// Programs are equivalent when their reduced processes agree as multisets.
pub fn equivalent_programs(p: &PVProgram, q: &PVProgram) -> Result<bool> {
    if !p.resources().same_resources(q.resources()) {
        return Err(Error::ResourceSetMismatch);
    }
    if p.dim() != q.dim() {
        return Ok(false);
    }
    let mut left: Vec<Vec<PVOperation>> =
        p.processes().iter().map(|x| reduce(x).into_ops()).collect();
    let mut right = Vec::with_capacity(q.dim());
    for x in q.processes() {
        right.push(reduce(&remap(x, q.resources(), p.resources())?).into_ops());
    }
    left.sort();
    right.sort();
    Ok(left == right)
}
