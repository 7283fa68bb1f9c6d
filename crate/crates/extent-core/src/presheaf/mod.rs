//! Computational finite presheaf toposes: base categories, presheaves and
//! natural transformations as tables, limits, exponentials, pushforward.
//!
//! Every constructor re-verifies the laws it depends on (associativity,
//! functoriality, naturality); a violation is an immediate error, never a
//! latent one. Every constructed carrier is canonically named: elements are
//! renamed to an initial segment of the naturals via a fixed deterministic
//! ordering of their concrete description. Canonical naming is what makes
//! the strictness checks downstream meaningful as table equalities.

mod cat;
mod ops;
mod psh;
mod text;

pub use cat::{arrow_cat, delta_cat, terminal_cat, CatBuilder, FinCat, Mor, MorId, ObjId};
pub(crate) use cat::delta_mor_values;
pub use ops::{
    exponential, nat_tables, nat_transformations, pushforward, ExpStage, Exponential, NatTable,
    Pushforward,
};
pub use psh::{
    empty_psh, product, pullback, subpresheaf, terminal_psh, yoneda, FinPresheaf, PresheafMap,
    Product, Pullback, SubPresheaf, Yoneda,
};
pub use text::{cat_from_table_text, cat_to_table_text};

use std::sync::Arc;

/// Default bound on constructed carriers per object. Enumerative
/// constructions fail loudly with [`PshError::SizeLimit`] instead of
/// truncating.
pub const DEFAULT_CARRIER_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PshError {
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error("objects live over different base categories")]
    BaseMismatch,
    #[error("cone does not factor through the pullback")]
    NotInPullback,
    #[error("element selection not closed under restriction along {mor} at element {elem}")]
    NotClosed { mor: String, elem: usize },
    #[error("size limit exceeded for {what}: {size} > cap {cap}")]
    SizeLimit {
        what: String,
        size: usize,
        cap: usize,
    },
    #[error("parse error in category table at line {line}: {msg}")]
    TableParse { line: usize, msg: String },
}

/// The base categories shipped with the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseId {
    Terminal,
    Arrow,
    Delta1,
    Delta2,
}

impl BaseId {
    pub const ALL: [BaseId; 4] = [BaseId::Terminal, BaseId::Arrow, BaseId::Delta1, BaseId::Delta2];

    pub fn cat(self) -> Arc<FinCat> {
        match self {
            BaseId::Terminal => terminal_cat(),
            BaseId::Arrow => arrow_cat(),
            BaseId::Delta1 => delta_cat(1),
            BaseId::Delta2 => delta_cat(2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BaseId::Terminal => "terminal",
            BaseId::Arrow => "arrow",
            BaseId::Delta1 => "delta1",
            BaseId::Delta2 => "delta2",
        }
    }

    /// Accepts the ascii names and the delta aliases `δ1`/`δ2`.
    pub fn parse(s: &str) -> Option<BaseId> {
        match s {
            "terminal" | "pt" | "1" => Some(BaseId::Terminal),
            "arrow" | "2" => Some(BaseId::Arrow),
            "delta1" | "δ1" | "d1" => Some(BaseId::Delta1),
            "delta2" | "δ2" | "d2" => Some(BaseId::Delta2),
            _ => None,
        }
    }
}

impl std::fmt::Display for BaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
