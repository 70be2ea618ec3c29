//! Deterministic engine for priority constructions.
//!
//! Requirements are games between a constructor and requirement strategies
//! over a *framework* of items and requests. The scheduler combines finitely
//! many strategies into one computable valid item sequence by nesting their
//! requests and restarting lower-priority strategies whenever a
//! higher-priority request changes (finite injury). Every run can be
//! re-audited from scratch by [`scheduler::verify_run`].

pub mod encoding;
pub mod error;
pub mod framework;
pub mod frameworks;
pub mod universe;
pub mod game;
pub mod scheduler;

pub use encoding::{BitString, NatSet};
pub use error::{DecodeError, FormatError, FrameworkError, UniverseError};
pub use universe::OpponentUniverse;
pub use framework::{
    brute_force_dominates, conjoin, diagonal_witness, dominates, is_valid_sequence, lift_left, lift_right, weaken,
    BruteForceOracle, Certificate, ClassTag, DFramework, Framework, Guard, Monitor, OracleOutcome, Requirement,
    SearchEnd, Successors, Verdict, WeakenAudit,
};
