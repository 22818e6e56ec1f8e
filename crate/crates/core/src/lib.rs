//! Choice by rejection: a two-stage model of choice in which the worst
//! alternatives of a menu are discarded by one rationale and the survivors are
//! ranked by another.
//!
//! Modules build bottom-up: [`relations`] and [`choice`] hold the data model,
//! [`reversals`] and [`axioms`] analyse choice data, [`representation`] and
//! [`identification`] construct and bound rationale pairs, and [`oracle`]
//! provides brute-force ground truth at small sizes.

pub mod axioms;
pub mod choice;
pub mod fixtures;
pub mod identification;
pub mod oracle;
pub mod relations;
pub mod representation;
pub mod reversals;

pub use axioms::{AnalysisReport, AxiomId, AxiomVerdict, Witness};
pub use choice::{ChoiceError, ChoiceFunction};
pub use relations::{BinaryRelation, Menu, Universe};
pub use representation::{Flavor, RepresentationPair};
pub use reversals::{Reversal, ReversalKind};
