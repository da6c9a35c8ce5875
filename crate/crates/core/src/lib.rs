//! Structured isometries on lane-indexed Hilbert spaces: Wold decomposition,
//! wandering vectors, commuting pairs and spectral multiplicity.

pub mod catalog;
pub mod certificate;
pub mod commutation;
pub mod drift;
pub mod error;
pub mod format;
pub mod isometry;
pub mod pairs;
pub mod report;
pub mod spectral;
pub mod subspace;
pub mod tolerance;
pub mod vector;
pub mod window;
pub mod wold;

pub use catalog::{CatalogEntry, Fixture};
pub use certificate::{Certificate, Verdict, Witness};
pub use commutation::{commutes, doubly_commutes};
pub use error::{Error, Result};
pub use isometry::{Phase, StructuredIsometry, TailRule};
pub use pairs::{
    exhaust_h0, h0_plus, is_completely_non_doubly_commuting, pair_decompose, weak_bishift_classify, PairReport,
};
pub use spectral::{Arc, MultiplicityProfile, SpectralUnitary};
pub use subspace::{Closure, Subspace};
pub use vector::{BasisIndex, HVector, LaneDomain, LaneId, LaneSpec};
pub use wold::{
    bilateral_orbit, is_strongly_wandering, is_wandering, kernel_of_adjoint, minimal_unitary_extension,
    wandering_span_decompose, wold_decompose, WoldResult, DEFAULT_DEPTH,
};
