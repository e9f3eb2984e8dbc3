//! Verification suites: norms, decay fits, functional-inequality audits,
//! closed-form checks and the weak-form residual.

pub mod decay;
pub mod fit;
pub mod inequalities;
pub mod norms;
pub mod report;
pub mod verify;
pub mod weak;

pub use decay::{decay_constant, fit_decay, fit_decay_with_constant, DecayConstant, DecayReport};
pub use inequalities::{
    audit_all, check_gn, check_nash, check_stroock_varopoulos, InequalityKind, InequalityReport,
};
pub use norms::{
    collapse_error, lp_norm, relative_l1_error, sample_selfsim, support_radius, NormIndex,
    SUPPORT_THRESHOLD,
};
pub use report::Report;
pub use verify::{holder_fit, verify_getoor, verify_lemma, verify_ops, PointReport};
pub use weak::{weak_residual, SpatialBump, TestFunction, TimeCutoff};
