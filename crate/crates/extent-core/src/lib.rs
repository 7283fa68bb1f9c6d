//! Core library for `extent`: a small kernel for simplicial type theory with
//! extension types, together with a finite-set-valued presheaf model in which
//! the extension type former is split, i.e. commutes with substitution as
//! literal equality of tables.
//!
//! Layout follows the three layers of the theory plus the model:
//!
//! * [`tope`]: cubes, tope formulas, shape inclusions, and the semantic
//!   entailment decision procedure.
//! * [`syntax`]: AST, parser and printer for the `.stt` surface language,
//!   and capture-avoiding substitution.
//! * [`kernel`]: bidirectional type checker and judgmental equality for the
//!   extension-type rules plus basic Pi/Sigma and shape reflection.
//! * [`presheaf`]: finite categories, finite presheaves, natural
//!   transformations, limits, exponentials, pushforward.
//! * [`universe`]: the canonically split universe of bounded codes,
//!   comprehension, reindexing, and the Pi former on codes.
//! * [`extension`]: semantic shapes, the generic contexts for extension
//!   types, the Ext/Lambda formers, application, and the independent
//!   Leibniz-cotensor construction used as a cross-check.

pub mod extension;
pub mod kernel;
pub mod presheaf;
pub mod syntax;
pub mod tope;
pub mod universe;
