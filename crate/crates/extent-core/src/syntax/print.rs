//! Printer for the `.stt` language. `parse(print(d)) == d` structurally.

use crate::tope::Tope;

use super::ast::*;

pub fn print_decls(decls: &[Decl]) -> String {
    let mut out = String::new();
    for d in decls {
        out.push_str(&print_decl(d));
        out.push('\n');
    }
    out
}

pub fn print_decl(d: &Decl) -> String {
    let ctx = if d.ctx == TriContext::empty() {
        String::new()
    } else {
        format!(" {}", print_ctx(&d.ctx))
    };
    match &d.body {
        DeclBody::Type(t) => format!("type {}{} := {}", d.name, ctx, print_type(t)),
        DeclBody::Term { ty, term } => format!(
            "term {}{} : {} := {}",
            d.name,
            ctx,
            print_type(ty),
            print_term(term)
        ),
        DeclBody::Eq { ty, lhs, rhs } => format!(
            "eq {}{} : {} := {} == {}",
            d.name,
            ctx,
            print_type(ty),
            print_term(lhs),
            print_term(rhs)
        ),
    }
}

pub fn print_ctx(ctx: &TriContext) -> String {
    let vars = ctx
        .vars
        .iter()
        .map(|(x, t)| format!("{x} : {}", print_type(t)))
        .collect::<Vec<_>>()
        .join(", ");
    format!("[{{{}}} | {} | {}]", ctx.cube.dims().join(" "), ctx.tope, vars)
}

/// Precedence: 0 arrows and binder forms, 1 products, 2 atoms.
fn ty_prec(t: &TypeExpr) -> u8 {
    match t {
        TypeExpr::Pi { .. } => 0,
        TypeExpr::Sigma { var, .. } => {
            if var == "_" {
                1
            } else {
                0
            }
        }
        TypeExpr::Base(_) | TypeExpr::Shape { .. } | TypeExpr::Ext { .. } => 2,
    }
}

pub fn print_type(t: &TypeExpr) -> String {
    ty_at(t, 0)
}

fn ty_at(t: &TypeExpr, min: u8) -> String {
    let s = match t {
        TypeExpr::Base(b) => b.name().to_string(),
        TypeExpr::Pi { var, dom, cod } if var == "_" => {
            // a reflected shape ending the domain would grab the arrow and
            // reparse as the shape-product sugar, so force parentheses
            let dom_s = if ends_in_bare_shape(dom) {
                format!("({})", ty_at(dom, 0))
            } else {
                ty_at(dom, 1)
            };
            format!("{dom_s} -> {}", ty_at(cod, 0))
        }
        TypeExpr::Pi { var, dom, cod } => {
            format!("({var} : {}) -> {}", ty_at(dom, 0), ty_at(cod, 0))
        }
        TypeExpr::Sigma { var, fst, snd } if var == "_" => {
            format!("{} * {}", ty_at(fst, 2), ty_at(snd, 1))
        }
        TypeExpr::Sigma { var, fst, snd } => {
            format!("({var} : {}) * {}", ty_at(fst, 0), ty_at(snd, 0))
        }
        TypeExpr::Shape { var, tope } => format!("{{{var} : I | {tope}}}"),
        TypeExpr::Ext {
            var,
            upper,
            lower,
            ty,
            boundary,
        } => format!(
            "<Pi_{{{var} : I | {upper}}} {} |^ {} {}>",
            ty_at(ty, 2),
            tope_atom(lower),
            term_at(boundary, 2)
        ),
    };
    if ty_prec(t) < min {
        format!("({s})")
    } else {
        s
    }
}

/// True when the printed form of `t` at product precedence ends with an
/// unparenthesized reflected shape.
fn ends_in_bare_shape(t: &TypeExpr) -> bool {
    match t {
        TypeExpr::Shape { .. } => true,
        TypeExpr::Sigma { var, snd, .. } if var == "_" => ends_in_bare_shape(snd),
        _ => false,
    }
}

fn tope_atom(t: &Tope) -> String {
    match t {
        Tope::And(..) | Tope::Or(..) => format!("({t})"),
        _ => t.to_string(),
    }
}

fn term_prec(t: &TermExpr) -> u8 {
    match t {
        TermExpr::ExtLam { .. } | TermExpr::Lam { .. } => 0,
        TermExpr::App { .. } | TermExpr::Fst(_) | TermExpr::Snd(_) => 1,
        _ => 2,
    }
}

pub fn print_term(t: &TermExpr) -> String {
    term_at(t, 0)
}

fn term_at(t: &TermExpr, min: u8) -> String {
    let s = match t {
        TermExpr::Var(x) => x.clone(),
        TermExpr::Const(c) => c.name().to_string(),
        TermExpr::Endpoint(false) => "0".into(),
        TermExpr::Endpoint(true) => "1".into(),
        TermExpr::EmptySection => "empty".into(),
        TermExpr::ExtLam { var, shape, body } => {
            format!("\\{var}^{{I | {shape}}}. {}", term_at(body, 0))
        }
        TermExpr::Lam { var, body } => format!("fn {var}. {}", term_at(body, 0)),
        TermExpr::App { fun, arg } => {
            format!("{} {}", term_at(fun, 1), term_at(arg, 2))
        }
        TermExpr::Fst(e) => format!("fst {}", term_at(e, 2)),
        TermExpr::Snd(e) => format!("snd {}", term_at(e, 2)),
        TermExpr::Pair { fst, snd } => {
            format!("({}, {})", term_at(fst, 0), term_at(snd, 0))
        }
        TermExpr::Ascribe { term, ty } => {
            format!("({} : {})", term_at(term, 0), ty_at(ty, 0))
        }
    };
    if term_prec(t) < min {
        format!("({s})")
    } else {
        s
    }
}
