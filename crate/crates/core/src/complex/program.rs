//! State spaces of programs and the hole-to-program compiler.

use super::{EuclideanComplex, HoleSet, IntBox};
use crate::error::{Error, Result};
use crate::model::{PVOperation, PVProcess, PVProgram, ResourceId, ResourceSet};

/// `[t^⊥ − 1, t^⊤ + 1]`: one step of slack around every operation.
pub fn default_window(program: &PVProgram) -> Result<IntBox> {
    let (bottom, top) = program.corners()?;
    IntBox::new(
        bottom.iter().map(|t| t - 1).collect(),
        top.iter().map(|t| t + 1).collect(),
    )
}

/// The state space restricted to `window`: a cube belongs to it when, for
/// every resource, the sum over processes of the potential's maximum on the
/// cube's coordinate interval stays within capacity. Potentials are
/// separable, so that sum is the maximum of the program potential on the
/// cube. Processes without a progression use the canonical one.
pub fn state_space(program: &PVProgram, window: &IntBox) -> Result<EuclideanComplex> {
    let n = program.dim();
    if window.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: window.dim(),
        });
    }
    let progressions = program.progressions()?;
    let used: Vec<ResourceId> = program
        .resources()
        .ids()
        .filter(|&r| {
            program
                .processes()
                .iter()
                .any(|p| p.resources().contains(&r))
        })
        .collect();

    // table[r][j][h]: max of process j's potential of r on the cell whose
    // doubled midpoint is 2·lo_j + h.
    let table: Vec<Vec<Vec<i64>>> = used
        .iter()
        .map(|&r| {
            program
                .processes()
                .iter()
                .zip(&progressions)
                .enumerate()
                .map(|(j, (p, prog))| {
                    let lo2 = 2 * window.lo[j];
                    (0..=2 * (window.hi[j] - window.lo[j]))
                        .map(|h| {
                            let half = lo2 + h;
                            if half % 2 == 0 {
                                p.potential_half(prog, r, half)
                            } else {
                                (half - 1..=half + 1)
                                    .map(|x| p.potential_half(prog, r, x))
                                    .max()
                                    .unwrap()
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let capacities: Vec<i64> = used
        .iter()
        .map(|&r| program.resources().capacity(r) as i64)
        .collect();
    let lo2: Vec<i64> = window.lo.iter().map(|x| 2 * x).collect();

    Ok(EuclideanComplex::from_predicate(window.clone(), |half| {
        table.iter().zip(&capacities).all(|(per_process, &cap)| {
            per_process
                .iter()
                .enumerate()
                .map(|(j, column)| column[(half[j] - lo2[j]) as usize])
                .sum::<i64>()
                <= cap
        })
    }))
}

/// Program whose state space is `ℝ^n ∖ ⋃ holes`, with resources named
/// `h1, h2, …` in hole order.
pub fn compile_program(h: &HoleSet) -> Result<PVProgram> {
    let names: Vec<String> = (1..=h.len()).map(|i| format!("h{i}")).collect();
    compile_program_named(h, &names)
}

/// One resource of capacity `n − 1` per hole `(k, l)`. Process `j` runs over
/// times `a_j..=b_j` (`a = min k`, `b = max l`); its operation at time `i`
/// releases every resource with `l_j = i` and acquires every resource with
/// `k_j = i`. The program potential of a resource reaches `n` exactly on its
/// hole. Without holes every process is a single empty operation.
pub fn compile_program_named(h: &HoleSet, names: &[String]) -> Result<PVProgram> {
    let n = h.n();
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    if names.len() != h.len() {
        return Err(Error::DimensionMismatch {
            expected: h.len(),
            got: names.len(),
        });
    }
    let capacity = (n - 1) as u32;
    let resources = ResourceSet::new(names.iter().map(|s| (s.clone(), capacity)))?;
    let Some(bounds) = h.bounding_box() else {
        let processes = (0..n)
            .map(|_| PVProcess::with_progression(vec![PVOperation::empty()], vec![0]))
            .collect::<Result<Vec<_>>>()?;
        return PVProgram::new(resources, processes);
    };
    let mut processes = Vec::with_capacity(n);
    for j in 0..n {
        let times: Vec<i64> = (bounds.lo[j]..=bounds.hi[j]).collect();
        let ops = times
            .iter()
            .map(|&t| {
                let mut op = PVOperation::empty();
                for (r, hole) in h.holes().iter().enumerate() {
                    let id = ResourceId(r as u32);
                    if hole.hi[j] == t {
                        op = op.with_release(id, 1);
                    }
                    if hole.lo[j] == t {
                        op = op.with_acquire(id, 1);
                    }
                }
                op
            })
            .collect();
        processes.push(PVProcess::with_progression(ops, times)?);
    }
    PVProgram::new(resources, processes)
}
