//! Semaphore (PV) programs and the topology of their execution spaces.
//!
//! * [`model`]: resources, operations, processes, programs, potentials and
//!   validity.
//! * [`equivalence`]: the rewriting rules and normal forms of processes.
//! * [`complex`]: Euclidean cubical complexes, state spaces, hole sets and the
//!   complex-to-program compiler.
//! * [`simplicial`]: simplicial complexes and integer homology.
//! * [`pathspace`]: models of directed path spaces, deadlocks and a
//!   brute-force path-class oracle.
//! * [`io`]: JSON formats.

pub mod complex;
pub mod equivalence;
pub mod error;
pub mod io;
pub mod model;
pub mod pathspace;
pub mod simplicial;

pub use complex::{
    boundary_box, build_cl, build_kl, build_ql, compile_program, cone, default_window, from_holes,
    holes_of, state_space, u_l_holes, ConeDirection, CubeMembership, ElementaryCube,
    EuclideanComplex, HoleSet, IntBox, KlConstruction, OpenBox,
};
pub use equivalence::{
    elementarize, equivalent_processes, equivalent_programs, is_reduced, reduce, RewriteStep,
    RewriteTrace, Rule,
};
pub use error::{Error, Result};
pub use model::{
    capacity_profile, validate, CapacityProfile, OpKind, PVOperation, PVProcess, PVProgram,
    Rational, ResourceId, ResourceSet, ValidityReport, Violation, ViolationKind,
};
pub use pathspace::{
    deadlocks, flip_oracle, h0_rank, homology_of_model, level_split, model, nerve_model, past_link,
    LevelSection, OracleResult, PathSpaceModel,
};
pub use simplicial::{homology, HomologyProfile, Simplex, SimplicialComplex};
