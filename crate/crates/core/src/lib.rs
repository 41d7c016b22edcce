//! Exact-arithmetic laboratory for sum-product growth in non-archimedean
//! fields.
//!
//! The library works in two ambient valued fields: finitely supported Laurent
//! elements of `F_q((1/t))` (the subring `F_q[t, 1/t]`) and exact `Z[1/p]`
//! representatives of `Q_p`. On top of the shared norm interface it builds
//! the ultrametric ball machinery (critical balls, laminar containment
//! forests, chains, separable sets) and the additive-combinatorial statistics
//! (sumsets, product sets, k-fold additive energy) needed to certify growth
//! bounds for concrete finite sets.
//!
//! All arithmetic is exact: norms are handled purely as integer exponents,
//! energies as arbitrary-precision integers, and bound values as exact
//! rationals. No floating point enters any comparison.

pub mod field;
pub mod geometry;
pub mod notation;
pub mod oracle;
pub mod report;
pub mod sumset;
pub mod valued;

pub use field::{FieldElement, FieldSpec};
pub use geometry::{
    build_forest, chain_bound, critical_balls, extract_separable, is_separable, longest_chain,
    Ball, BallKey, BallRelation, ChainCertificate, LaminarForest, SeparableCertificate,
};
pub use notation::{Ambient, AnySet};
pub use report::{growth_report, Budgets, GrowthReport, ReportRow};
pub use sumset::{energy, k_fold_sum, productset, sumset, trivial_count, EnergyValue, FiniteSet};
pub use valued::{Laurent, NormExponent, Padic, ValuedElement};
