//! Interpretation of checked surface syntax into the model, for the
//! `interpret` subcommand: closed extension types over base-type fibers
//! with constant boundaries, taken over the terminal context.

use std::sync::Arc;

use crate::presheaf::{terminal_psh, BaseId};
use crate::syntax::{Decl, DeclBody, TermExpr, TypeExpr};
use crate::tope::{mk_shape_inclusion, Cube};
use crate::universe::{FamilyData, Section};

use super::former::{ext_former, ExtInput};
use super::shape::interpret_shape;
use super::ExtError;

pub struct InterpretOutcome {
    pub name: String,
    /// per stage: object name and the cardinality of the extension object
    pub cards: Vec<(String, usize)>,
}

/// Interprets every extension-type declaration of a checked file over a
/// base. Declarations that are not closed extension types over a base-type
/// fiber are skipped.
pub fn interpret_decls(
    decls: &[Decl],
    base: BaseId,
    bound: usize,
    cap: usize,
) -> Result<Vec<InterpretOutcome>, ExtError> {
    let mut out = Vec::new();
    for d in decls {
        let ty = match &d.body {
            DeclBody::Type(t) => t,
            DeclBody::Term { ty, .. } => ty,
            DeclBody::Eq { ty, .. } => ty,
        };
        if let TypeExpr::Ext { .. } = ty {
            if !d.ctx.vars.is_empty() || !d.ctx.cube.is_empty() {
                return Err(ExtError::Unsupported(format!(
                    "`{}`: interpretation needs an empty context",
                    d.name
                )));
            }
            out.push(InterpretOutcome {
                name: d.name.clone(),
                cards: interpret_ext(ty, base, bound, cap)?,
            });
        }
    }
    Ok(out)
}

fn interpret_ext(
    ty: &TypeExpr,
    base: BaseId,
    bound: usize,
    cap: usize,
) -> Result<Vec<(String, usize)>, ExtError> {
    let TypeExpr::Ext {
        var,
        upper,
        lower,
        ty: fiber,
        boundary,
    } = ty
    else {
        unreachable!("caller matched on Ext");
    };
    let fiber_size = match fiber.as_ref() {
        TypeExpr::Base(b) => b.size(),
        other => {
            return Err(ExtError::Unsupported(format!(
                "fiber {} is not an opaque base type",
                crate::syntax::print_type(other)
            )))
        }
    };
    if fiber_size > bound {
        return Err(ExtError::Unsupported(format!(
            "fiber size {fiber_size} exceeds the universe bound {bound}"
        )));
    }
    let cube = Cube::new([var.as_str()]).map_err(|_| ExtError::UnsupportedBase)?;
    let incl = mk_shape_inclusion(&cube, lower.clone(), upper.clone())
        .map_err(|e| ExtError::Unsupported(e.to_string()))?;
    let shape = Arc::new(interpret_shape(base, &incl)?);

    let cat = shape.cube_psh.cat().clone();
    let gamma = terminal_psh(&cat);
    // a constant family over Gamma x psi
    let prod = crate::presheaf::product(&gamma, &shape.psi.psh).map_err(ExtError::Psh)?;
    let family = FamilyData::constant(&prod.psh, fiber_size);

    // boundary: a constant value, or the empty section over an empty shape
    let boundary_section: Section = match boundary.as_ref() {
        TermExpr::Const(c) => {
            if TypeExpr::Base(c.base_ty()) != *fiber.as_ref() {
                return Err(ExtError::Unsupported(format!(
                    "boundary constant {} does not inhabit the fiber",
                    c.name()
                )));
            }
            let v = c.index() as u16;
            cat.objects()
                .map(|c2| vec![v; shape.phi.psh.card(c2)])
                .collect()
        }
        TermExpr::EmptySection => {
            if cat.objects().any(|c2| shape.phi.psh.card(c2) > 0) {
                return Err(ExtError::Unsupported(
                    "the empty section needs an empty lower shape".into(),
                ));
            }
            cat.objects().map(|_| Vec::new()).collect()
        }
        other => {
            return Err(ExtError::Unsupported(format!(
                "boundary {} is not a constant",
                crate::syntax::print_term(other)
            )))
        }
    };

    let input = ExtInput::new(shape, gamma.clone(), family, boundary_section)?;
    let former = ext_former(input, cap)?;
    Ok(cat
        .objects()
        .map(|c| {
            (
                cat.object_name(c).to_string(),
                former.family.data.carrier(c, 0).len(),
            )
        })
        .collect())
}

/// Cardinality of the extension object at one stage (used by tests).
pub fn stage_card(outcome: &InterpretOutcome, stage: &str) -> Option<usize> {
    outcome
        .cards
        .iter()
        .find(|(n, _)| n == stage)
        .map(|&(_, c)| c)
}
