//! Workbench for finite unit-distance witness configurations.
//!
//! The library builds, combines, and verifies finite point sets on which
//! every unit-distance-preserving map is forced to preserve a designated
//! distance, a segment congruence, or an epsilon-approximation of one.
//! Everything rests on certified arithmetic: exact quadratic-tower normal
//! forms where possible, refinable rational intervals otherwise, and
//! three-valued answers where neither decides.

pub mod rat;
pub mod radical;
pub mod expr;
pub mod creal;
pub mod config;
pub mod frame;
pub mod order;
pub mod enumerate;
pub mod refute;
pub mod claims;
pub mod gadgets;
pub mod combine;
pub mod congruence;
pub mod report;

pub use config::{Configuration, GeometryError, PairClass, Point, ValidationReport};
pub use enumerate::{enumerate, enumerate_config, spectrum, BranchStats, EnumError, Enumeration, Spectrum};
pub use order::{find_order, OrderError, TrilaterationOrder};
pub use claims::{refute, verify, Claim, Mode, Outcome, Verdict};
pub use refute::{linkage_bound, search_deviation, NumericWitness, RefuterParams};
pub use creal::{CReal, Cmp, DEFAULT_PRECISION};
pub use expr::Expr;
pub use frame::{canonical_frame, PlacementSolution, Provenance};
pub use radical::Radical;
pub use rat::Rat;
pub use gadgets::{
    attach_rhombus, attach_triangle, build_chain, build_epsilon_witness, build_spindle,
    constructible_closure, search_witness, GadgetError, Side, SearchBudget, SearchOutcome,
};
pub use combine::{strengthen_diamond, strengthen_star, CombineError, EpsilonBuilder, KitRecord, Strengthened, TBuilder};
pub use congruence::{truncated_equiv_closed_form, truncated_equiv_search, TruncationQuery, Verdict3};
pub use report::{Report, RunManifest, ValueOut};
