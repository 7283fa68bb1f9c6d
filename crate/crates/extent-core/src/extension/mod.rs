//! Semantics of extension types over the finite presheaf bases: semantic
//! shapes, the split former, its generic contexts, application, and the
//! independent comparison construction.

mod context;
mod former;
mod interpret;
mod leibniz;
mod shape;

pub use context::{generic_ext_context, GenericExtCtx};
pub use former::{ext_former, ExtFormer, ExtInput, StageCtx};
#[cfg(feature = "fault-injection")]
pub use former::ext_former_perturbed;
pub use interpret::{interpret_decls, stage_card, InterpretOutcome};
pub use leibniz::{leibniz_ext_object, LeibnizExt};
pub use shape::{interpret_shape, interval_for, satisfies_at, Interval, SemShape, ShapeKind};

use crate::presheaf::PshError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtError {
    #[error("unsupported base category (no designated interval)")]
    UnsupportedBase,
    #[error("lower shape is not contained in the upper shape at stage {stage}: {lower} vs {upper}")]
    NotASubshape {
        stage: String,
        lower: String,
        upper: String,
    },
    #[error("boundary data is not a section over the lower shape")]
    BadBoundary,
    #[error("pullback law violated: {0}")]
    PullbackLaw(String),
    #[error("comparison construction disagrees: {0}")]
    CrossCheck(String),
    #[error("interpretation does not support this program: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Psh(#[from] PshError),
}

#[cfg(test)]
mod tests;
