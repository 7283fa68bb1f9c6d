//! Bidirectional type checker and judgmental equality.
//!
//! The checker implements the extension-type rules (formation,
//! introduction, elimination, computation, beta, eta) over a small base
//! language with dependent Pi/Sigma, opaque base types, and reflected
//! shapes. Equality is decided by weak-head normalization with beta and the
//! computation rule as reductions, and eta as a type-directed comparison
//! step. When both the computation rule and beta fire on the same redex,
//! the computation rule wins; the introduction premise `b == a` on the
//! lower shape makes the two answers judgmentally equal, so the order only
//! pins down a normal form.

mod check;
mod equal;

pub use check::{check_decl, check_decls, check_source, Checker, DeclReport};
pub use equal::head_step;

use crate::tope::Point;

/// Rule names as they appear in traces.
pub mod rules {
    pub const EXT_FORM: &str = "Ext-Form";
    pub const EXT_INTRO: &str = "Ext-Intro";
    pub const EXT_ELIM: &str = "Ext-Elim";
    pub const EXT_COMP: &str = "Ext-Comp";
    pub const EXT_BETA: &str = "Ext-Beta";
    pub const EXT_ETA: &str = "Ext-Eta";
    pub const PI_FORM: &str = "Pi-Form";
    pub const PI_INTRO: &str = "Pi-Intro";
    pub const PI_ELIM: &str = "Pi-Elim";
    pub const PI_BETA: &str = "Pi-Beta";
    pub const PI_ETA: &str = "Pi-Eta";
    pub const SIGMA_FORM: &str = "Sigma-Form";
    pub const SIGMA_INTRO: &str = "Sigma-Intro";
    pub const SIGMA_ELIM: &str = "Sigma-Elim";
    pub const SIGMA_BETA: &str = "Sigma-Beta";
    pub const SHAPE_FORM: &str = "Shape-Form";
    pub const SHAPE_INTRO: &str = "Shape-Intro";
    pub const BASE_FORM: &str = "Base-Form";
    pub const VAR: &str = "Var";
    pub const CONST: &str = "Const";
    pub const CONV: &str = "Conv";
    pub const ASCRIBE: &str = "Ascribe";
    pub const EMPTY_SECTION: &str = "Empty-Section";
    pub const TOPE_EQ: &str = "Tope-Eq";

    /// The six extension-type rules.
    pub const EXTENSION_RULES: [&str; 6] =
        [EXT_FORM, EXT_INTRO, EXT_ELIM, EXT_COMP, EXT_BETA, EXT_ETA];
}

/// Why a judgment was rejected; the first failed premise, named.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Reason {
    #[error("NotAnInclusion: lower tope does not entail upper tope; counterexample point {witness:?}")]
    NotAnInclusion { witness: Point },
    #[error("BoundaryMismatch: {0}")]
    BoundaryMismatch(String),
    #[error("ShapeMiss: {0}")]
    ShapeMiss(String),
    #[error("Unbound: variable `{0}` is not in scope")]
    Unbound(String),
    #[error("TypeMismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("NotAFunction: cannot apply a term of type {0}")]
    NotAFunction(String),
    #[error("NotAPair: cannot project from a term of type {0}")]
    NotAPair(String),
    #[error("EmptySection: only allowed under an unsatisfiable tope context")]
    EmptySectionOutsideBot,
    #[error("CannotInfer: {0}")]
    CannotInfer(String),
    #[error("ScopeError: {0}")]
    ScopeError(String),
    #[error("ContextError: {0}")]
    ContextError(String),
    #[error("EqMismatch: the two sides are not judgmentally equal at {0}")]
    EqMismatch(String),
}

impl Reason {
    /// Stable short name used by the corpus expectations.
    pub fn code(&self) -> &'static str {
        match self {
            Reason::NotAnInclusion { .. } => "NotAnInclusion",
            Reason::BoundaryMismatch(_) => "BoundaryMismatch",
            Reason::ShapeMiss(_) => "ShapeMiss",
            Reason::Unbound(_) => "Unbound",
            Reason::TypeMismatch { .. } => "TypeMismatch",
            Reason::NotAFunction(_) => "NotAFunction",
            Reason::NotAPair(_) => "NotAPair",
            Reason::EmptySectionOutsideBot => "EmptySection",
            Reason::CannotInfer(_) => "CannotInfer",
            Reason::ScopeError(_) => "ScopeError",
            Reason::ContextError(_) => "ContextError",
            Reason::EqMismatch(_) => "EqMismatch",
        }
    }
}

/// Outcome of checking one judgment: verdict, the rules applied, and the
/// failure reason when rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub accepted: bool,
    pub trace: Vec<&'static str>,
    pub failure: Option<Reason>,
}

#[cfg(test)]
mod tests;
