//! Milnor–Witt K-theory: formal expressions, normal forms, and certified
//! rewriting.

pub mod expr;
pub mod normal;
pub mod rewrite;

pub use expr::{mw_product, Letter, Monomial, MwExpression, Word};
pub use normal::{
    cartesian_check, eta_power_image, kmw_ambient, kmw_generators, normalize, normalize_at, theta0,
    to_witt, CartesianReport, MwNormalForm,
};
pub use rewrite::{
    apply_step, check_derivation, derive_extended_steinberg, instantiate, search_to_zero,
    verify_derivation, Bindings, Derivation, Direction, Instance, Position, Rule, RuleSet, Step,
    StepFailure,
};
