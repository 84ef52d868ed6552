//! Group cohomology with trivial coefficients, abelian 3-cocycles and the
//! ambient groups of orthogonal-action obstructions.

pub mod abelian;
pub mod cochain;
pub mod compute;
pub mod group;
pub mod torsor;

pub use abelian::{
    check_abelian_3cocycle, em_correspondence, is_abelian_3cocycle, quadratic_form_of, AbelianCohomology,
    AbelianThreeCocycle, EmReport,
};
pub use cochain::{differential_matrix, Cochain, CochainFile};
pub use compute::{cohomology, is_coboundary, Check, Coefficients, CohomologyGroup};
pub use group::FiniteGroup;
pub use torsor::{
    orthogonal_subgroup, torsor_and_coefficient_report, CohomologySummary, OrthogonalSubgroup, SubgroupSpec,
    TorsorReport,
};
