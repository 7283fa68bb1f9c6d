//! Capture-avoiding substitution and alpha-equality.
//!
//! Term variables and cube variables share one name space at the syntax
//! level (an application argument `t` may be either); substitution treats
//! every binder uniformly and freshens on capture, appending primes.

use std::collections::{BTreeMap, BTreeSet};

use crate::tope::{CubeTerm, Tope};

use super::ast::{TermExpr, TypeExpr};

pub type Subst = BTreeMap<String, TermExpr>;

pub fn fresh(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

pub fn free_vars_term(t: &TermExpr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fv_term(t, &mut out);
    out
}

pub fn free_vars_type(t: &TypeExpr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fv_type(t, &mut out);
    out
}

fn fv_term(t: &TermExpr, out: &mut BTreeSet<String>) {
    match t {
        TermExpr::Var(x) => {
            out.insert(x.clone());
        }
        TermExpr::Const(_) | TermExpr::Endpoint(_) | TermExpr::EmptySection => {}
        TermExpr::ExtLam { var, shape, body } => {
            let mut inner = BTreeSet::new();
            fv_term(body, &mut inner);
            inner.extend(shape.free_vars());
            inner.remove(var);
            out.extend(inner);
        }
        TermExpr::Lam { var, body } => {
            let mut inner = BTreeSet::new();
            fv_term(body, &mut inner);
            inner.remove(var);
            out.extend(inner);
        }
        TermExpr::App { fun, arg } => {
            fv_term(fun, out);
            fv_term(arg, out);
        }
        TermExpr::Pair { fst, snd } => {
            fv_term(fst, out);
            fv_term(snd, out);
        }
        TermExpr::Fst(e) | TermExpr::Snd(e) => fv_term(e, out),
        TermExpr::Ascribe { term, ty } => {
            fv_term(term, out);
            fv_type(ty, out);
        }
    }
}

fn fv_type(t: &TypeExpr, out: &mut BTreeSet<String>) {
    match t {
        TypeExpr::Base(_) => {}
        TypeExpr::Pi { var, dom, cod } | TypeExpr::Sigma { var, fst: dom, snd: cod } => {
            fv_type(dom, out);
            let mut inner = BTreeSet::new();
            fv_type(cod, &mut inner);
            inner.remove(var);
            out.extend(inner);
        }
        TypeExpr::Shape { var, tope } => {
            let mut inner: BTreeSet<String> = tope.free_vars().into_iter().collect();
            inner.remove(var);
            out.extend(inner);
        }
        TypeExpr::Ext {
            var,
            upper,
            lower,
            ty,
            boundary,
        } => {
            let mut inner = BTreeSet::new();
            inner.extend(upper.free_vars());
            inner.extend(lower.free_vars());
            fv_type(ty, &mut inner);
            fv_term(boundary, &mut inner);
            inner.remove(var);
            out.extend(inner);
        }
    }
}

fn range_fvs(map: &Subst) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for v in map.values() {
        fv_term(v, &mut out);
    }
    out
}

/// Picks a replacement binder name when the old one would capture, and the
/// substitution to apply under the binder.
fn under_binder(var: &str, map: &Subst, body_fvs: &BTreeSet<String>) -> (String, Subst) {
    let mut inner: Subst = map.clone();
    inner.remove(var);
    // drop entries that cannot fire
    inner.retain(|k, _| body_fvs.contains(k));
    if inner.is_empty() {
        return (var.to_string(), inner);
    }
    let danger = range_fvs(&inner);
    if danger.contains(var) {
        let mut avoid = danger;
        avoid.extend(body_fvs.iter().cloned());
        avoid.extend(inner.keys().cloned());
        let nv = fresh(var, &avoid);
        inner.insert(var.to_string(), TermExpr::Var(nv.clone()));
        (nv, inner)
    } else {
        (var.to_string(), inner)
    }
}

pub fn subst_term(t: &TermExpr, map: &Subst) -> TermExpr {
    if map.is_empty() {
        return t.clone();
    }
    match t {
        TermExpr::Var(x) => map.get(x).cloned().unwrap_or_else(|| t.clone()),
        TermExpr::Const(_) | TermExpr::Endpoint(_) | TermExpr::EmptySection => t.clone(),
        TermExpr::ExtLam { var, shape, body } => {
            let mut fvs = free_vars_term(body);
            fvs.extend(shape.free_vars());
            let (nv, inner) = under_binder(var, map, &fvs);
            let shape = rename_in_tope_via(shape, &inner);
            TermExpr::ExtLam {
                var: nv,
                shape,
                body: Box::new(subst_term(body, &inner)),
            }
        }
        TermExpr::Lam { var, body } => {
            let fvs = free_vars_term(body);
            let (nv, inner) = under_binder(var, map, &fvs);
            TermExpr::Lam {
                var: nv,
                body: Box::new(subst_term(body, &inner)),
            }
        }
        TermExpr::App { fun, arg } => TermExpr::App {
            fun: Box::new(subst_term(fun, map)),
            arg: Box::new(subst_term(arg, map)),
        },
        TermExpr::Pair { fst, snd } => TermExpr::Pair {
            fst: Box::new(subst_term(fst, map)),
            snd: Box::new(subst_term(snd, map)),
        },
        TermExpr::Fst(e) => TermExpr::Fst(Box::new(subst_term(e, map))),
        TermExpr::Snd(e) => TermExpr::Snd(Box::new(subst_term(e, map))),
        TermExpr::Ascribe { term, ty } => TermExpr::Ascribe {
            term: Box::new(subst_term(term, map)),
            ty: Box::new(subst_type(ty, map)),
        },
    }
}

/// Applies the variable renamings of a substitution inside a tope. Only
/// variable-for-variable and endpoint images are meaningful there; other
/// images cannot occur in well-formed input because tope variables are cube
/// variables.
fn rename_in_tope_via(tope: &Tope, map: &Subst) -> Tope {
    let mut out = tope.clone();
    for (k, v) in map {
        let ct = match v {
            TermExpr::Var(y) => CubeTerm::Var(y.clone()),
            TermExpr::Endpoint(false) => CubeTerm::Zero,
            TermExpr::Endpoint(true) => CubeTerm::One,
            _ => continue,
        };
        out = out.subst(k, &ct);
    }
    out
}

pub fn subst_type(t: &TypeExpr, map: &Subst) -> TypeExpr {
    if map.is_empty() {
        return t.clone();
    }
    match t {
        TypeExpr::Base(_) => t.clone(),
        TypeExpr::Pi { var, dom, cod } => {
            let fvs = free_vars_type(cod);
            let (nv, inner) = under_binder(var, map, &fvs);
            TypeExpr::Pi {
                var: nv,
                dom: Box::new(subst_type(dom, map)),
                cod: Box::new(subst_type(cod, &inner)),
            }
        }
        TypeExpr::Sigma { var, fst, snd } => {
            let fvs = free_vars_type(snd);
            let (nv, inner) = under_binder(var, map, &fvs);
            TypeExpr::Sigma {
                var: nv,
                fst: Box::new(subst_type(fst, map)),
                snd: Box::new(subst_type(snd, &inner)),
            }
        }
        TypeExpr::Shape { var, tope } => {
            let fvs: BTreeSet<String> = tope.free_vars().into_iter().collect();
            let (nv, inner) = under_binder(var, map, &fvs);
            TypeExpr::Shape {
                var: nv,
                tope: rename_in_tope_via(tope, &inner),
            }
        }
        TypeExpr::Ext {
            var,
            upper,
            lower,
            ty,
            boundary,
        } => {
            let mut fvs = free_vars_type(ty);
            fv_term(boundary, &mut fvs);
            fvs.extend(upper.free_vars());
            fvs.extend(lower.free_vars());
            let (nv, inner) = under_binder(var, map, &fvs);
            TypeExpr::Ext {
                var: nv,
                upper: rename_in_tope_via(upper, &inner),
                lower: rename_in_tope_via(lower, &inner),
                ty: Box::new(subst_type(ty, &inner)),
                boundary: Box::new(subst_term(boundary, &inner)),
            }
        }
    }
}

fn cube_term_as_term(ct: &CubeTerm) -> TermExpr {
    match ct {
        CubeTerm::Var(x) => TermExpr::Var(x.clone()),
        CubeTerm::Zero => TermExpr::Endpoint(false),
        CubeTerm::One => TermExpr::Endpoint(true),
    }
}

/// Substitutes a cube term for a cube variable in a term (`b[s/t]`).
pub fn subst_cube_in_term(t: &TermExpr, var: &str, s: &CubeTerm) -> TermExpr {
    let mut map = Subst::new();
    map.insert(var.to_string(), cube_term_as_term(s));
    subst_term(t, &map)
}

/// Substitutes a cube term for a cube variable in a type (`A[s/t]`).
pub fn subst_cube_in_type(t: &TypeExpr, var: &str, s: &CubeTerm) -> TypeExpr {
    let mut map = Subst::new();
    map.insert(var.to_string(), cube_term_as_term(s));
    subst_type(t, &map)
}

// ---- alpha equality ----

type Env<'a> = Vec<(&'a str, &'a str)>;

fn var_eq(env: &Env, a: &str, b: &str) -> bool {
    for (x, y) in env.iter().rev() {
        if *x == a || *y == b {
            return *x == a && *y == b;
        }
    }
    a == b
}

fn tope_alpha(env: &Env, a: &Tope, b: &Tope) -> bool {
    let ct = |env: &Env, x: &CubeTerm, y: &CubeTerm| match (x, y) {
        (CubeTerm::Var(p), CubeTerm::Var(q)) => var_eq(env, p, q),
        _ => x == y,
    };
    match (a, b) {
        (Tope::Top, Tope::Top) | (Tope::Bot, Tope::Bot) => true,
        (Tope::Le(x1, y1), Tope::Le(x2, y2)) | (Tope::Eq(x1, y1), Tope::Eq(x2, y2)) => {
            ct(env, x1, x2) && ct(env, y1, y2)
        }
        (Tope::And(x1, y1), Tope::And(x2, y2)) | (Tope::Or(x1, y1), Tope::Or(x2, y2)) => {
            tope_alpha(env, x1, x2) && tope_alpha(env, y1, y2)
        }
        _ => false,
    }
}

fn term_alpha<'a>(env: &mut Env<'a>, a: &'a TermExpr, b: &'a TermExpr) -> bool {
    match (a, b) {
        (TermExpr::Var(x), TermExpr::Var(y)) => var_eq(env, x, y),
        (TermExpr::Const(x), TermExpr::Const(y)) => x == y,
        (TermExpr::Endpoint(x), TermExpr::Endpoint(y)) => x == y,
        (TermExpr::EmptySection, TermExpr::EmptySection) => true,
        (
            TermExpr::ExtLam {
                var: v1,
                shape: s1,
                body: b1,
            },
            TermExpr::ExtLam {
                var: v2,
                shape: s2,
                body: b2,
            },
        ) => {
            env.push((v1, v2));
            let ok = tope_alpha(env, s1, s2) && term_alpha(env, b1, b2);
            env.pop();
            ok
        }
        (TermExpr::Lam { var: v1, body: b1 }, TermExpr::Lam { var: v2, body: b2 }) => {
            env.push((v1, v2));
            let ok = term_alpha(env, b1, b2);
            env.pop();
            ok
        }
        (TermExpr::App { fun: f1, arg: a1 }, TermExpr::App { fun: f2, arg: a2 }) => {
            term_alpha(env, f1, f2) && term_alpha(env, a1, a2)
        }
        (TermExpr::Pair { fst: f1, snd: s1 }, TermExpr::Pair { fst: f2, snd: s2 }) => {
            term_alpha(env, f1, f2) && term_alpha(env, s1, s2)
        }
        (TermExpr::Fst(x), TermExpr::Fst(y)) | (TermExpr::Snd(x), TermExpr::Snd(y)) => {
            term_alpha(env, x, y)
        }
        (
            TermExpr::Ascribe { term: t1, ty: y1 },
            TermExpr::Ascribe { term: t2, ty: y2 },
        ) => term_alpha(env, t1, t2) && type_alpha(env, y1, y2),
        _ => false,
    }
}

fn type_alpha<'a>(env: &mut Env<'a>, a: &'a TypeExpr, b: &'a TypeExpr) -> bool {
    match (a, b) {
        (TypeExpr::Base(x), TypeExpr::Base(y)) => x == y,
        (
            TypeExpr::Pi {
                var: v1,
                dom: d1,
                cod: c1,
            },
            TypeExpr::Pi {
                var: v2,
                dom: d2,
                cod: c2,
            },
        ) => {
            if !type_alpha(env, d1, d2) {
                return false;
            }
            env.push((v1, v2));
            let ok = type_alpha(env, c1, c2);
            env.pop();
            ok
        }
        (
            TypeExpr::Sigma {
                var: v1,
                fst: d1,
                snd: c1,
            },
            TypeExpr::Sigma {
                var: v2,
                fst: d2,
                snd: c2,
            },
        ) => {
            if !type_alpha(env, d1, d2) {
                return false;
            }
            env.push((v1, v2));
            let ok = type_alpha(env, c1, c2);
            env.pop();
            ok
        }
        (TypeExpr::Shape { var: v1, tope: t1 }, TypeExpr::Shape { var: v2, tope: t2 }) => {
            env.push((v1, v2));
            let ok = tope_alpha(env, t1, t2);
            env.pop();
            ok
        }
        (
            TypeExpr::Ext {
                var: v1,
                upper: u1,
                lower: l1,
                ty: t1,
                boundary: b1,
            },
            TypeExpr::Ext {
                var: v2,
                upper: u2,
                lower: l2,
                ty: t2,
                boundary: b2,
            },
        ) => {
            env.push((v1, v2));
            let ok = tope_alpha(env, u1, u2)
                && tope_alpha(env, l1, l2)
                && type_alpha(env, t1, t2)
                && term_alpha(env, b1, b2);
            env.pop();
            ok
        }
        _ => false,
    }
}

pub fn alpha_eq_term(a: &TermExpr, b: &TermExpr) -> bool {
    term_alpha(&mut Vec::new(), a, b)
}

pub fn alpha_eq_type(a: &TypeExpr, b: &TypeExpr) -> bool {
    type_alpha(&mut Vec::new(), a, b)
}
