//! Exact-arithmetic norms and seminorms on finitely supported rational
//! sequences, with an exact simplex solver for quotient seminorms and
//! checkers for continuity, equivalence and Cauchy witnesses.

pub mod axioms;
pub mod demo;
pub mod grammar;
pub mod linalg;
pub mod lp;
pub mod maps;
pub mod norms;
pub mod quotient;
pub mod rational;
pub mod report;
pub mod rule;
pub mod seq;
pub mod witnesses;

pub use axioms::{AxiomReport, MajorizationReport, Sampler};
pub use demo::DemoId;
pub use grammar::ParseError;
pub use lp::{LpOutcome, LpProblem, RowKind, VarBound};
pub use maps::LinearMapSpec;
pub use norms::{FunctionalSpec, PolyhedralNorm, SpecError};
pub use quotient::{DistanceResult, QuotientError, Subspace};
pub use rational::Rational;
pub use report::{CertificateReport, Format, ReportBundle};
pub use rule::{PositiveRule, Rule};
pub use seq::SparseSeq;
pub use witnesses::{DiscontinuityClaim, EquivalenceClaim, WitnessSpec};
