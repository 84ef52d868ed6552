//! Clifford algebras over `F_p` (`p` odd), the Lipschitz group, spinor norm,
//! `Pin`, `Spin` and the exterior-algebra spinor module.
//!
//! Conventions: `v² = q(v)` in `Cl(V, q)`, so `uv + vu = b(u, v)` with
//! `b(u, v) = q(u+v) − q(u) − q(v)`. `Γ` acts on `V` by
//! `v ↦ (−1)^{p(g)} g v g⁻¹` and `N(g) = g gᵀ`.

pub mod algebra;
pub mod field;
pub mod lipschitz;
pub mod space;
pub mod spinor;

pub use algebra::{CliffordAlgebra, CliffordElement};
pub use lipschitz::{
    lipschitz_group, orthogonal_matrices, pin_spin_report, reflection_matrix, spinor_norm, twisted_action,
    LipschitzElement, LipschitzGroup, PinReport,
};
pub use space::{QuadraticSpace, SpaceSpec};
pub use spinor::{spinor_module, SpinorReport};
