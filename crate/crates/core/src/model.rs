//! PV-programs: resources with capacities, acquire/release operations,
//! processes with progressions, and their potential functions.
//!
//! Potentials are step functions of a process's advancement `t`. A resource
//! acquired by the operation at `t^i` counts for `t > t^i`; a release at `t^i`
//! counts for `t >= t^i`. All evaluation is exact: evaluation points are
//! rationals and progressions are integers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact evaluation point for potential functions.
pub type Rational = Ratio<i64>;

/// Index of a resource inside its [`ResourceSet`]. The order of ids is the
/// order of the resource set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ResourceId(pub u32);

impl ResourceId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Named resources with positive capacities, in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceSet {
    names: Vec<String>,
    capacities: Vec<u32>,
    lookup: BTreeMap<String, ResourceId>,
}

impl ResourceSet {
    /// Builds a resource set keeping the given order.
    pub fn new<S: Into<String>>(entries: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let mut set = ResourceSet {
            names: Vec::new(),
            capacities: Vec::new(),
            lookup: BTreeMap::new(),
        };
        for (name, capacity) in entries {
            let name = name.into();
            if capacity == 0 {
                return Err(Error::ZeroCapacity(name));
            }
            if set.lookup.contains_key(&name) {
                return Err(Error::DuplicateResource(name));
            }
            set.lookup
                .insert(name.clone(), ResourceId(set.names.len() as u32));
            set.names.push(name);
            set.capacities.push(capacity);
        }
        Ok(set)
    }

    /// Builds a resource set ordered lexicographically by name.
    pub fn sorted<S: Into<String>>(entries: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let mut entries: Vec<(String, u32)> =
            entries.into_iter().map(|(n, c)| (n.into(), c)).collect();
        entries.sort();
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<ResourceId> {
        self.lookup.get(name).copied()
    }

    pub fn name(&self, id: ResourceId) -> &str {
        &self.names[id.index()]
    }

    pub fn capacity(&self, id: ResourceId) -> u32 {
        self.capacities[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = ResourceId> {
        (0..self.names.len() as u32).map(ResourceId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ResourceId, &str, u32)> + '_ {
        self.ids().map(move |id| {
            (
                id,
                self.names[id.index()].as_str(),
                self.capacities[id.index()],
            )
        })
    }

    /// True when both sets hold the same names with the same capacities,
    /// regardless of order.
    pub fn same_resources(&self, other: &ResourceSet) -> bool {
        self.len() == other.len()
            && self
                .iter()
                .all(|(_, name, cap)| other.id(name).map(|o| other.capacity(o)) == Some(cap))
    }
}

/// A PV-operation: first release `release(r)` units of each resource, then
/// acquire `acquire(r)` units. Zero multiplicities are never stored, so
/// structural equality is equality of the underlying functions.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PVOperation {
    release: BTreeMap<ResourceId, u32>,
    acquire: BTreeMap<ResourceId, u32>,
}

/// Which half of an elementary operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OpKind {
    P,
    V,
}

impl PVOperation {
    /// The empty operation.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Elementary acquisition `Pr`.
    pub fn p(r: ResourceId) -> Self {
        Self::empty().with_acquire(r, 1)
    }

    /// Elementary release `Vr`.
    pub fn v(r: ResourceId) -> Self {
        Self::empty().with_release(r, 1)
    }

    /// `V X P Y`.
    pub fn vp(release: &[ResourceId], acquire: &[ResourceId]) -> Self {
        let mut op = Self::empty();
        for &r in release {
            op = op.with_release(r, 1);
        }
        for &r in acquire {
            op = op.with_acquire(r, 1);
        }
        op
    }

    /// Adds `k` to the acquisition count of `r`.
    pub fn with_acquire(mut self, r: ResourceId, k: u32) -> Self {
        if k > 0 {
            *self.acquire.entry(r).or_insert(0) += k;
        }
        self
    }

    /// Adds `k` to the release count of `r`.
    pub fn with_release(mut self, r: ResourceId, k: u32) -> Self {
        if k > 0 {
            *self.release.entry(r).or_insert(0) += k;
        }
        self
    }

    pub fn acquires(&self, r: ResourceId) -> u32 {
        self.acquire.get(&r).copied().unwrap_or(0)
    }

    pub fn releases(&self, r: ResourceId) -> u32 {
        self.release.get(&r).copied().unwrap_or(0)
    }

    pub fn acquire_map(&self) -> &BTreeMap<ResourceId, u32> {
        &self.acquire
    }

    pub fn release_map(&self) -> &BTreeMap<ResourceId, u32> {
        &self.release
    }

    pub fn is_empty(&self) -> bool {
        self.acquire.is_empty() && self.release.is_empty()
    }

    pub fn has_acquire(&self) -> bool {
        !self.acquire.is_empty()
    }

    pub fn has_release(&self) -> bool {
        !self.release.is_empty()
    }

    /// `Some((kind, r))` when the operation is exactly `Pr` or `Vr`.
    pub fn as_elementary(&self) -> Option<(OpKind, ResourceId)> {
        let single = |m: &BTreeMap<ResourceId, u32>| match m.iter().next() {
            Some((&r, &1)) if m.len() == 1 => Some(r),
            _ => None,
        };
        match (self.release.is_empty(), self.acquire.is_empty()) {
            (true, false) => single(&self.acquire).map(|r| (OpKind::P, r)),
            (false, true) => single(&self.release).map(|r| (OpKind::V, r)),
            _ => None,
        }
    }

    pub fn is_elementary(&self) -> bool {
        self.as_elementary().is_some()
    }

    /// Removes one unit of acquisition of `r`, if present.
    pub fn without_acquire(&self, r: ResourceId) -> Option<Self> {
        let mut op = self.clone();
        decrement(&mut op.acquire, r).then_some(op)
    }

    /// Removes one unit of release of `r`, if present.
    pub fn without_release(&self, r: ResourceId) -> Option<Self> {
        let mut op = self.clone();
        decrement(&mut op.release, r).then_some(op)
    }

    /// All resources the operation touches.
    pub fn resources(&self) -> impl Iterator<Item = ResourceId> + '_ {
        self.release.keys().chain(self.acquire.keys()).copied()
    }

    /// Renders the operation with resource names, e.g. `V{a}P{b,c}`.
    pub fn display<'a>(&'a self, resources: &'a ResourceSet) -> impl fmt::Display + 'a {
        OpDisplay {
            op: self,
            resources,
        }
    }
}

fn decrement(map: &mut BTreeMap<ResourceId, u32>, r: ResourceId) -> bool {
    match map.get_mut(&r) {
        Some(k) if *k > 1 => {
            *k -= 1;
            true
        }
        Some(_) => {
            map.remove(&r);
            true
        }
        None => false,
    }
}

impl Add for &PVOperation {
    type Output = PVOperation;

    fn add(self, rhs: &PVOperation) -> PVOperation {
        let mut out = self.clone();
        for (&r, &k) in &rhs.acquire {
            out = out.with_acquire(r, k);
        }
        for (&r, &k) in &rhs.release {
            out = out.with_release(r, k);
        }
        out
    }
}

struct OpDisplay<'a> {
    op: &'a PVOperation,
    resources: &'a ResourceSet,
}

impl fmt::Display for OpDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.op.is_empty() {
            return f.write_str("∅");
        }
        if let Some((kind, r)) = self.op.as_elementary() {
            return write!(f, "{:?}{}", kind, self.resources.name(r));
        }
        let list = |m: &BTreeMap<ResourceId, u32>| {
            m.iter()
                .map(|(&r, &k)| {
                    if k == 1 {
                        self.resources.name(r).to_string()
                    } else {
                        format!("{}^{}", self.resources.name(r), k)
                    }
                })
                .collect::<Vec<_>>()
                .join(",")
        };
        if self.op.has_release() {
            write!(f, "V{{{}}}", list(&self.op.release))?;
        }
        if self.op.has_acquire() {
            write!(f, "P{{{}}}", list(&self.op.acquire))?;
        }
        Ok(())
    }
}

/// A sequence of operations, optionally carrying an integral progression.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PVProcess {
    ops: Vec<PVOperation>,
    progression: Option<Vec<i64>>,
}

impl PVProcess {
    pub fn new(ops: Vec<PVOperation>) -> Self {
        PVProcess {
            ops,
            progression: None,
        }
    }

    pub fn with_progression(ops: Vec<PVOperation>, progression: Vec<i64>) -> Result<Self> {
        if progression.len() != ops.len() {
            return Err(Error::ProgressionLength {
                ops: ops.len(),
                progression: progression.len(),
            });
        }
        if let Some(i) = progression.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::ProgressionNotIncreasing(i + 1));
        }
        Ok(PVProcess {
            ops,
            progression: Some(progression),
        })
    }

    pub fn ops(&self) -> &[PVOperation] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<PVOperation> {
        self.ops
    }

    pub fn progression(&self) -> Option<&[i64]> {
        self.progression.as_deref()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn is_elementary(&self) -> bool {
        self.ops.iter().all(PVOperation::is_elementary)
    }

    /// The progression if present, otherwise the canonical one.
    pub fn effective_progression(&self) -> Vec<i64> {
        match &self.progression {
            Some(p) => p.clone(),
            None => (0..self.ops.len() as i64).collect(),
        }
    }

    /// Resources referenced by any operation, in resource order.
    pub fn resources(&self) -> BTreeSet<ResourceId> {
        self.ops.iter().flat_map(|op| op.resources()).collect()
    }

    /// Value of the potential function of `r` at `t`.
    pub fn potential(&self, r: ResourceId, t: Rational) -> Result<i64> {
        let progression = self
            .progression
            .as_ref()
            .ok_or(Error::MissingProgression { process: 0 })?;
        Ok(potential_with(&self.ops, progression, r, |ti| {
            Rational::from_integer(ti).cmp(&t)
        }))
    }

    /// Potential at `t = half / 2`; `half` is twice the evaluation point.
    /// Uses the effective progression.
    pub(crate) fn potential_half(&self, progression: &[i64], r: ResourceId, half: i64) -> i64 {
        potential_with(&self.ops, progression, r, |ti| (2 * ti).cmp(&half))
    }
}

fn potential_with(
    ops: &[PVOperation],
    progression: &[i64],
    r: ResourceId,
    cmp_to_t: impl Fn(i64) -> std::cmp::Ordering,
) -> i64 {
    use std::cmp::Ordering::*;
    let mut value = 0i64;
    for (op, &ti) in ops.iter().zip(progression) {
        match cmp_to_t(ti) {
            Less => value += op.acquires(r) as i64 - op.releases(r) as i64,
            Equal => value -= op.releases(r) as i64,
            Greater => break,
        }
    }
    value
}

/// Returns `p` with the canonical progression `0, 1, …, l-1`.
pub fn canonical_progression(p: &PVProcess) -> PVProcess {
    PVProcess {
        ops: p.ops.clone(),
        progression: Some((0..p.ops.len() as i64).collect()),
    }
}

/// Processes `Q_1..Q_n` sharing one resource set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PVProgram {
    resources: ResourceSet,
    processes: Vec<PVProcess>,
}

impl PVProgram {
    pub fn new(resources: ResourceSet, processes: Vec<PVProcess>) -> Result<Self> {
        if processes.is_empty() {
            return Err(Error::NoProcesses);
        }
        let bound = resources.len() as u32;
        for p in &processes {
            if let Some(r) = p.resources().into_iter().find(|r| r.0 >= bound) {
                return Err(Error::ResourceOutOfRange(r.0));
            }
        }
        Ok(PVProgram {
            resources,
            processes,
        })
    }

    pub fn resources(&self) -> &ResourceSet {
        &self.resources
    }

    pub fn processes(&self) -> &[PVProcess] {
        &self.processes
    }

    pub fn dim(&self) -> usize {
        self.processes.len()
    }

    /// Every process given its canonical progression.
    pub fn with_canonical_progressions(&self) -> PVProgram {
        PVProgram {
            resources: self.resources.clone(),
            processes: self.processes.iter().map(canonical_progression).collect(),
        }
    }

    /// Replaces the process list, keeping the resources.
    pub fn with_processes(&self, processes: Vec<PVProcess>) -> Result<PVProgram> {
        PVProgram::new(self.resources.clone(), processes)
    }

    /// Effective progressions, failing on empty processes.
    pub(crate) fn progressions(&self) -> Result<Vec<Vec<i64>>> {
        self.processes
            .iter()
            .enumerate()
            .map(|(j, p)| {
                if p.is_empty() {
                    Err(Error::EmptyProcess(j))
                } else {
                    Ok(p.effective_progression())
                }
            })
            .collect()
    }

    /// `(t^⊥, t^⊤)`: first and last progression values of every process.
    pub fn corners(&self) -> Result<(Vec<i64>, Vec<i64>)> {
        let progressions = self.progressions()?;
        Ok((
            progressions.iter().map(|p| p[0]).collect(),
            progressions.iter().map(|p| p[p.len() - 1]).collect(),
        ))
    }

    /// Program potential of every resource at `x`, indexed by resource id.
    pub fn potential(&self, x: &[Rational]) -> Result<Vec<i64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut out = vec![0; self.resources.len()];
        for (j, (p, &t)) in self.processes.iter().zip(x).enumerate() {
            for r in self.resources.ids() {
                out[r.index()] += p
                    .potential(r, t)
                    .map_err(|_| Error::MissingProgression { process: j })?;
            }
        }
        Ok(out)
    }
}

/// Which validity condition a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `a_r(t) < 0`: released before acquired.
    Negative,
    /// `a_r(t) != 0` after the last operation.
    NotReleased,
    /// `a_r(t) > 1` in a process that should be elementary valid.
    Reacquired,
}

/// A point where the potential of `resource` violates `kind`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub resource: ResourceId,
    pub at: Rational,
    pub value: i64,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub valid: bool,
    pub elementary: bool,
    pub elementary_valid: bool,
    pub violations: Vec<Violation>,
}

/// Checks validity and elementary validity. Potentials are step functions,
/// so it is enough to look at every breakpoint, just after it, and past the
/// last operation. Processes without a progression use the canonical one.
pub fn validate(p: &PVProcess) -> ValidityReport {
    let progression = p.effective_progression();
    let mut violations = Vec::new();
    let mut negative = false;
    let mut unreleased = false;
    let mut reacquired = false;
    for r in p.resources() {
        for &ti in &progression {
            for half in [2 * ti, 2 * ti + 1] {
                let value = p.potential_half(&progression, r, half);
                let at = Rational::new(half, 2);
                if value < 0 {
                    negative = true;
                    violations.push(Violation {
                        resource: r,
                        at,
                        value,
                        kind: ViolationKind::Negative,
                    });
                } else if value > 1 {
                    reacquired = true;
                    violations.push(Violation {
                        resource: r,
                        at,
                        value,
                        kind: ViolationKind::Reacquired,
                    });
                }
            }
        }
        if let Some(&last) = progression.last() {
            let value = p.potential_half(&progression, r, 2 * last + 2);
            if value != 0 {
                unreleased = true;
                violations.push(Violation {
                    resource: r,
                    at: Rational::from_integer(last + 1),
                    value,
                    kind: ViolationKind::NotReleased,
                });
            }
        }
    }
    let valid = !negative && !unreleased;
    let elementary = p.is_elementary();
    ValidityReport {
        valid,
        elementary,
        elementary_valid: valid && elementary && !reacquired,
        violations,
    }
}

/// Largest capacity over the program's resources, and each capacity by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapacityProfile {
    pub max: u32,
    pub per_resource: Vec<(String, u32)>,
}

pub fn capacity_profile(program: &PVProgram) -> CapacityProfile {
    let per_resource: Vec<(String, u32)> = program
        .resources
        .iter()
        .map(|(_, name, cap)| (name.to_string(), cap))
        .collect();
    CapacityProfile {
        max: per_resource.iter().map(|(_, c)| *c).max().unwrap_or(0),
        per_resource,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(i: u32) -> ResourceId {
        ResourceId(i)
    }

    fn lock_unlock() -> PVProcess {
        PVProcess::with_progression(vec![PVOperation::p(r(0)), PVOperation::v(r(0))], vec![0, 1])
            .unwrap()
    }

    fn half(n: i64) -> Rational {
        Rational::new(n, 2)
    }

    #[test]
    fn canonical_progression_cases() {
        let p = PVProcess::new(vec![PVOperation::p(r(0)), PVOperation::v(r(0))]);
        assert_eq!(canonical_progression(&p).progression(), Some(&[0, 1][..]));
        assert_eq!(
            canonical_progression(&PVProcess::default()).progression(),
            Some(&[][..])
        );
        let q = PVProcess::with_progression(
            vec![
                PVOperation::p(r(0)),
                PVOperation::p(r(1)),
                PVOperation::v(r(1)),
                PVOperation::v(r(0)),
            ],
            vec![2, 5, 7, 9],
        )
        .unwrap();
        let c = canonical_progression(&q);
        assert_eq!(c.progression(), Some(&[0, 1, 2, 3][..]));
        assert_eq!(canonical_progression(&c), c);
    }

    #[test]
    fn progression_must_increase() {
        let ops = vec![PVOperation::p(r(0)), PVOperation::v(r(0))];
        assert_eq!(
            PVProcess::with_progression(ops.clone(), vec![1, 1]),
            Err(Error::ProgressionNotIncreasing(1))
        );
        assert!(PVProcess::with_progression(ops, vec![0]).is_err());
    }

    #[test]
    fn potential_thresholds() {
        let p = lock_unlock();
        assert_eq!(p.potential(r(0), half(1)).unwrap(), 1);
        assert_eq!(p.potential(r(0), half(0)).unwrap(), 0);
        assert_eq!(p.potential(r(0), half(2)).unwrap(), 0);
        assert!(PVProcess::new(vec![PVOperation::p(r(0))])
            .potential(r(0), half(1))
            .is_err());
    }

    #[test]
    fn program_potential() {
        let res = ResourceSet::new([("a", 2)]).unwrap();
        let prog = PVProgram::new(res, vec![lock_unlock(), lock_unlock()]).unwrap();
        assert_eq!(prog.potential(&[half(1), half(1)]).unwrap(), vec![2]);
        assert_eq!(prog.potential(&[half(0), half(0)]).unwrap(), vec![0]);
        assert!(matches!(
            prog.potential(&[half(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn swiss_flag_potential() {
        let res = ResourceSet::new([("a", 1), ("b", 1)]).unwrap();
        let (a, b) = (r(0), r(1));
        let q1 = PVProcess::new(vec![
            PVOperation::p(a),
            PVOperation::p(b),
            PVOperation::v(b),
            PVOperation::v(a),
        ]);
        let q2 = PVProcess::new(vec![
            PVOperation::p(b),
            PVOperation::p(a),
            PVOperation::v(a),
            PVOperation::v(b),
        ]);
        let prog = PVProgram::new(res, vec![q1, q2])
            .unwrap()
            .with_canonical_progressions();
        assert_eq!(prog.potential(&[half(3), half(3)]).unwrap(), vec![2, 2]);
    }

    #[test]
    fn validity_cases() {
        let ok = validate(&lock_unlock());
        assert!(ok.valid && ok.elementary_valid && ok.violations.is_empty());

        let backwards = PVProcess::new(vec![PVOperation::v(r(0)), PVOperation::p(r(0))]);
        let rep = validate(&backwards);
        assert!(!rep.valid);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::Negative
                && v.at == Rational::from_integer(0)
                && v.value == -1));

        let twice = PVProcess::new(vec![
            PVOperation::p(r(0)),
            PVOperation::p(r(0)),
            PVOperation::v(r(0)),
            PVOperation::v(r(0)),
        ]);
        let rep = validate(&twice);
        assert!(rep.valid && rep.elementary && !rep.elementary_valid);
        assert!(rep
            .violations
            .iter()
            .all(|v| v.kind == ViolationKind::Reacquired));

        let leak = PVProcess::new(vec![PVOperation::p(r(0))]);
        let rep = validate(&leak);
        assert!(!rep.valid);
        assert_eq!(rep.violations[0].kind, ViolationKind::NotReleased);
    }

    #[test]
    fn witnesses_reevaluate() {
        let p = PVProcess::new(vec![
            PVOperation::v(r(1)),
            PVOperation::p(r(0)),
            PVOperation::p(r(0)),
            PVOperation::vp(&[r(0)], &[r(1)]),
        ]);
        let c = canonical_progression(&p);
        for w in validate(&p).violations {
            let value = c.potential(w.resource, w.at).unwrap();
            assert_eq!(value, w.value);
            match w.kind {
                ViolationKind::Negative => assert!(value < 0),
                ViolationKind::Reacquired => assert!(value > 1),
                ViolationKind::NotReleased => assert_ne!(value, 0),
            }
        }
    }

    #[test]
    fn capacity_profiles() {
        let res = ResourceSet::new([("m", 1)]).unwrap();
        let prog = PVProgram::new(res, vec![lock_unlock()]).unwrap();
        assert_eq!(capacity_profile(&prog).max, 1);
    }

    #[test]
    fn resource_set_rules() {
        assert!(ResourceSet::new([("a", 0)]).is_err());
        assert!(ResourceSet::new([("a", 1), ("a", 2)]).is_err());
        let s = ResourceSet::sorted([("b", 1), ("a", 2)]).unwrap();
        assert_eq!(s.name(ResourceId(0)), "a");
        let t = ResourceSet::new([("a", 2), ("b", 1)]).unwrap();
        assert!(s.same_resources(&t));
    }

    #[test]
    fn operation_display() {
        let res = ResourceSet::new([("a", 1), ("b", 1)]).unwrap();
        let op = PVOperation::vp(&[r(0)], &[r(1)]).with_acquire(r(0), 2);
        assert_eq!(op.display(&res).to_string(), "V{a}P{a^2,b}");
        assert_eq!(PVOperation::p(r(1)).display(&res).to_string(), "Pb");
        assert_eq!(PVOperation::empty().display(&res).to_string(), "∅");
    }
}
