//! Judgmental equality: weak-head normalization plus type-directed
//! comparison.

use crate::syntax::{subst_term, subst_type, Subst, TermExpr, TriContext, TypeExpr};
use crate::tope::{tope_entails, tope_equiv, Cube, Tope};

use super::check::Checker;
use super::rules;
use super::Reason;

type Res<T> = Result<T, Reason>;

/// The extension data a redex head exposes: binder, upper/lower topes, the
/// fiber type and the boundary section.
struct ExtData {
    var: String,
    lower: Tope,
    boundary: TermExpr,
}

fn ext_data(ty: &TypeExpr) -> Option<ExtData> {
    match ty {
        TypeExpr::Ext {
            var,
            lower,
            boundary,
            ..
        } => Some(ExtData {
            var: var.clone(),
            lower: lower.clone(),
            boundary: boundary.as_ref().clone(),
        }),
        _ => None,
    }
}

impl Checker {
    /// Decides `e1 == e2 : ty`. Both sides are assumed to check against
    /// `ty`; the relation is the congruence closure of beta, the
    /// computation rule, and eta, decided by normalize-and-compare.
    pub fn judg_equal(
        &mut self,
        ctx: &TriContext,
        e1: &TermExpr,
        e2: &TermExpr,
        ty: &TypeExpr,
    ) -> Res<bool> {
        // under an unsatisfiable tope context every equation holds
        if tope_entails(&ctx.cube, &ctx.tope, &Tope::Bot)
            .map_err(|e| Reason::ScopeError(e.to_string()))?
        {
            return Ok(true);
        }
        match ty {
            TypeExpr::Ext {
                var,
                upper,
                ty: inner,
                ..
            } => {
                // eta: compare the bodies under the binder; the computation
                // rule then glues the boundary region
                let w1 = self.whnf(ctx, e1)?;
                let w2 = self.whnf(ctx, e2)?;
                if !(matches!(strip(&w1), TermExpr::ExtLam { .. })
                    && matches!(strip(&w2), TermExpr::ExtLam { .. }))
                {
                    self.trace.push(rules::EXT_ETA);
                }
                let (ctx2, name) = self.extend_cube(ctx, var, upper);
                let inner2 = self.rename_type(inner, var, &name);
                let a1 = TermExpr::app(w1, TermExpr::Var(name.clone()));
                let a2 = TermExpr::app(w2, TermExpr::Var(name.clone()));
                self.judg_equal(&ctx2, &a1, &a2, &inner2)
            }
            TypeExpr::Pi { var, dom, cod } => {
                let w1 = self.whnf(ctx, e1)?;
                let w2 = self.whnf(ctx, e2)?;
                if !(matches!(strip(&w1), TermExpr::Lam { .. })
                    && matches!(strip(&w2), TermExpr::Lam { .. }))
                {
                    self.trace.push(rules::PI_ETA);
                }
                let (ctx2, name) = self.extend_var(ctx, var, dom);
                let cod2 = self.rename_type(cod, var, &name);
                let a1 = TermExpr::app(w1, TermExpr::Var(name.clone()));
                let a2 = TermExpr::app(w2, TermExpr::Var(name.clone()));
                self.judg_equal(&ctx2, &a1, &a2, &cod2)
            }
            TypeExpr::Sigma { var, fst, snd } => {
                let f1 = TermExpr::Fst(Box::new(e1.clone()));
                let f2 = TermExpr::Fst(Box::new(e2.clone()));
                if !self.judg_equal(ctx, &f1, &f2, fst)? {
                    return Ok(false);
                }
                let mut map = Subst::new();
                map.insert(var.clone(), f1);
                let snd2 = subst_type(snd, &map);
                self.judg_equal(
                    ctx,
                    &TermExpr::Snd(Box::new(e1.clone())),
                    &TermExpr::Snd(Box::new(e2.clone())),
                    &snd2,
                )
            }
            TypeExpr::Shape { .. } => {
                // terms of a reflected shape are cube terms; equality is
                // tope-level equality under the current tope context
                let w1 = self.whnf(ctx, e1)?;
                let w2 = self.whnf(ctx, e2)?;
                match (self.as_cube_term(ctx, &w1), self.as_cube_term(ctx, &w2)) {
                    (Some(s1), Some(s2)) => {
                        self.trace.push(rules::TOPE_EQ);
                        tope_entails(&ctx.cube, &ctx.tope, &Tope::Eq(s1, s2))
                            .map_err(|e| Reason::ScopeError(e.to_string()))
                    }
                    _ => Ok(false),
                }
            }
            TypeExpr::Base(_) => {
                let w1 = self.whnf(ctx, e1)?;
                let w2 = self.whnf(ctx, e2)?;
                match (&w1, &w2) {
                    (TermExpr::Const(a), TermExpr::Const(b)) => Ok(a == b),
                    _ => Ok(self.neutral_equal(ctx, &w1, &w2)?.is_some()),
                }
            }
        }
    }

    /// Compares two weak-head-normal neutrals; on success returns their
    /// common type.
    fn neutral_equal(
        &mut self,
        ctx: &TriContext,
        n1: &TermExpr,
        n2: &TermExpr,
    ) -> Res<Option<TypeExpr>> {
        match (n1, n2) {
            (TermExpr::Var(x), TermExpr::Var(y)) => {
                if x != y {
                    return Ok(None);
                }
                match ctx.lookup(x) {
                    Some(t) => Ok(Some(t.clone())),
                    None => Ok(None),
                }
            }
            (TermExpr::App { fun: f1, arg: a1 }, TermExpr::App { fun: f2, arg: a2 }) => {
                let Some(fty) = self.neutral_equal(ctx, f1, f2)? else {
                    return Ok(None);
                };
                match fty {
                    TypeExpr::Pi { var, dom, cod } => {
                        if !self.judg_equal(ctx, a1, a2, &dom)? {
                            return Ok(None);
                        }
                        let mut map = Subst::new();
                        map.insert(var, a1.as_ref().clone());
                        Ok(Some(subst_type(&cod, &map)))
                    }
                    TypeExpr::Ext { var, ty, .. } => {
                        let (Some(s1), Some(s2)) =
                            (self.as_cube_term(ctx, a1), self.as_cube_term(ctx, a2))
                        else {
                            return Ok(None);
                        };
                        let eq = tope_entails(&ctx.cube, &ctx.tope, &Tope::Eq(s1.clone(), s2))
                            .map_err(|e| Reason::ScopeError(e.to_string()))?;
                        if !eq {
                            return Ok(None);
                        }
                        Ok(Some(crate::syntax::subst_cube_in_type(&ty, &var, &s1)))
                    }
                    _ => Ok(None),
                }
            }
            (TermExpr::Fst(e1), TermExpr::Fst(e2)) => {
                match self.neutral_equal(ctx, e1, e2)? {
                    Some(TypeExpr::Sigma { fst, .. }) => Ok(Some(*fst)),
                    _ => Ok(None),
                }
            }
            (TermExpr::Snd(e1), TermExpr::Snd(e2)) => {
                match self.neutral_equal(ctx, e1, e2)? {
                    Some(TypeExpr::Sigma { var, snd, .. }) => {
                        let mut map = Subst::new();
                        map.insert(var, TermExpr::Fst(e1.clone()));
                        Ok(Some(subst_type(&snd, &map)))
                    }
                    _ => Ok(None),
                }
            }
            _ => Ok(None),
        }
    }

    /// The type of a weak-head-normal neutral, with no trace side effects.
    fn type_of_neutral(&self, ctx: &TriContext, e: &TermExpr) -> Option<TypeExpr> {
        match e {
            TermExpr::Var(x) => ctx.lookup(x).cloned(),
            TermExpr::App { fun, arg } => match self.type_of_neutral(ctx, fun)? {
                TypeExpr::Pi { var, cod, .. } => {
                    let mut map = Subst::new();
                    map.insert(var, arg.as_ref().clone());
                    Some(subst_type(&cod, &map))
                }
                TypeExpr::Ext { var, ty, .. } => {
                    let s = self.as_cube_term(ctx, arg)?;
                    Some(crate::syntax::subst_cube_in_type(&ty, &var, &s))
                }
                _ => None,
            },
            TermExpr::Fst(inner) => match self.type_of_neutral(ctx, inner)? {
                TypeExpr::Sigma { fst, .. } => Some(*fst),
                _ => None,
            },
            TermExpr::Snd(inner) => match self.type_of_neutral(ctx, inner)? {
                TypeExpr::Sigma { var, snd, .. } => {
                    let mut map = Subst::new();
                    map.insert(var, TermExpr::Fst(inner.clone()));
                    Some(subst_type(&snd, &map))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// Weak-head normalization. Reductions: the computation rule (applied
    /// before beta when both fire), extension beta, Pi beta, and the pair
    /// projections. Ascriptions survive only on lambda/pair values, where
    /// they carry the extension data a later redex may need.
    pub fn whnf(&mut self, ctx: &TriContext, e: &TermExpr) -> Res<TermExpr> {
        match e {
            TermExpr::App { fun, arg } => {
                let fw = self.whnf(ctx, fun)?;
                // the computation rule needs the extension type of the head
                let head_ext: Option<ExtData> = match &fw {
                    TermExpr::Ascribe { ty, .. } => ext_data(ty),
                    other => self
                        .type_of_neutral(ctx, other)
                        .as_ref()
                        .and_then(ext_data),
                };
                if let (Some(ext), Some(s)) = (head_ext, self.as_cube_term(ctx, arg)) {
                    let inst = ext.lower.subst(&ext.var, &s);
                    let fires = tope_entails(&ctx.cube, &ctx.tope, &inst)
                        .map_err(|e| Reason::ScopeError(e.to_string()))?;
                    if fires {
                        self.trace.push(rules::EXT_COMP);
                        let reduced =
                            crate::syntax::subst_cube_in_term(&ext.boundary, &ext.var, &s);
                        return self.whnf(ctx, &reduced);
                    }
                }
                match strip(&fw).clone() {
                    TermExpr::ExtLam { var, body, .. } => {
                        self.trace.push(rules::EXT_BETA);
                        let mut map = Subst::new();
                        map.insert(var, arg.as_ref().clone());
                        let reduced = subst_term(&body, &map);
                        self.whnf(ctx, &reduced)
                    }
                    TermExpr::Lam { var, body } => {
                        self.trace.push(rules::PI_BETA);
                        let mut map = Subst::new();
                        map.insert(var, arg.as_ref().clone());
                        let reduced = subst_term(&body, &map);
                        self.whnf(ctx, &reduced)
                    }
                    _ => Ok(TermExpr::App {
                        fun: Box::new(fw),
                        arg: arg.clone(),
                    }),
                }
            }
            TermExpr::Fst(inner) => {
                let w = self.whnf(ctx, inner)?;
                match strip(&w) {
                    TermExpr::Pair { fst, .. } => {
                        self.trace.push(rules::SIGMA_BETA);
                        self.whnf(ctx, fst)
                    }
                    _ => Ok(TermExpr::Fst(Box::new(w))),
                }
            }
            TermExpr::Snd(inner) => {
                let w = self.whnf(ctx, inner)?;
                match strip(&w) {
                    TermExpr::Pair { snd, .. } => {
                        self.trace.push(rules::SIGMA_BETA);
                        self.whnf(ctx, snd)
                    }
                    _ => Ok(TermExpr::Snd(Box::new(w))),
                }
            }
            TermExpr::Ascribe { term, ty } => {
                let w = self.whnf(ctx, term)?;
                match &w {
                    // keep the annotation on values: it may carry extension
                    // data for a computation-rule redex
                    TermExpr::ExtLam { .. } | TermExpr::Lam { .. } | TermExpr::Pair { .. } => {
                        Ok(TermExpr::Ascribe {
                            term: Box::new(w),
                            ty: ty.clone(),
                        })
                    }
                    _ => Ok(w),
                }
            }
            _ => Ok(e.clone()),
        }
    }

}

/// Looks through a value ascription.
fn strip(e: &TermExpr) -> &TermExpr {
    match e {
        TermExpr::Ascribe { term, .. } => term,
        other => other,
    }
}

/// One beta/computation step at the head, if any; used by the subject
/// reduction tests.
pub fn head_step(ctx: &TriContext, e: &TermExpr) -> Option<(TermExpr, &'static str)> {
    let c = Checker::new();
    match e {
        TermExpr::App { fun, arg } => {
            let head_ext: Option<ExtData> = match fun.as_ref() {
                TermExpr::Ascribe { ty, .. } => ext_data(ty),
                other => c.type_of_neutral(ctx, other).as_ref().and_then(ext_data),
            };
            if let (Some(ext), Some(s)) = (head_ext, c.as_cube_term(ctx, arg)) {
                let inst = ext.lower.subst(&ext.var, &s);
                if tope_entails(&ctx.cube, &ctx.tope, &inst).ok()? {
                    return Some((
                        crate::syntax::subst_cube_in_term(&ext.boundary, &ext.var, &s),
                        rules::EXT_COMP,
                    ));
                }
            }
            match strip(fun) {
                TermExpr::ExtLam { var, body, .. } => {
                    let mut map = Subst::new();
                    map.insert(var.clone(), arg.as_ref().clone());
                    Some((subst_term(body, &map), rules::EXT_BETA))
                }
                TermExpr::Lam { var, body } => {
                    let mut map = Subst::new();
                    map.insert(var.clone(), arg.as_ref().clone());
                    Some((subst_term(body, &map), rules::PI_BETA))
                }
                _ => None,
            }
        }
        _ => None,
    }
}

// re-exported for the checker (shape annotation comparisons)
pub(super) fn topes_equiv_over(var: &str, a: &Tope, b: &Tope) -> Res<bool> {
    let cube = Cube::new([var]).map_err(|e| Reason::ScopeError(e.to_string()))?;
    tope_equiv(&cube, a, b).map_err(|e| Reason::ScopeError(e.to_string()))
}

impl Checker {
    /// Structural type equality up to alpha, extensional tope equality, and
    /// judgmental equality of embedded boundary terms.
    pub fn type_equal(&mut self, ctx: &TriContext, a: &TypeExpr, b: &TypeExpr) -> Res<bool> {
        match (a, b) {
            (TypeExpr::Base(x), TypeExpr::Base(y)) => Ok(x == y),
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
                if !self.type_equal(ctx, d1, d2)? {
                    return Ok(false);
                }
                let (ctx2, name) = self.extend_var(ctx, v1, d1);
                let c1r = self.rename_type(c1, v1, &name);
                let c2r = self.rename_type(c2, v2, &name);
                self.type_equal(&ctx2, &c1r, &c2r)
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
                if !self.type_equal(ctx, d1, d2)? {
                    return Ok(false);
                }
                let (ctx2, name) = self.extend_var(ctx, v1, d1);
                let c1r = self.rename_type(c1, v1, &name);
                let c2r = self.rename_type(c2, v2, &name);
                self.type_equal(&ctx2, &c1r, &c2r)
            }
            (TypeExpr::Shape { var: v1, tope: t1 }, TypeExpr::Shape { var: v2, tope: t2 }) => {
                topes_equiv_over(v1, t1, &t2.rename(v2, v1))
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
                let u2r = u2.rename(v2, v1);
                let l2r = l2.rename(v2, v1);
                if !topes_equiv_over(v1, u1, &u2r)? || !topes_equiv_over(v1, l1, &l2r)? {
                    return Ok(false);
                }
                let (ctx_psi, name) = self.extend_cube(ctx, v1, u1);
                let t1r = self.rename_type(t1, v1, &name);
                let t2r = self.rename_type(&self.rename_type(t2, v2, v1), v1, &name);
                if !self.type_equal(&ctx_psi, &t1r, &t2r)? {
                    return Ok(false);
                }
                let (ctx_phi, name2) = self.extend_cube(ctx, v1, l1);
                let t1p = self.rename_type(t1, v1, &name2);
                let b1r = self.rename_term(b1, v1, &name2);
                let b2r = self.rename_term(&self.rename_term(b2, v2, v1), v1, &name2);
                self.judg_equal(&ctx_phi, &b1r, &b2r, &t1p)
            }
            _ => Ok(false),
        }
    }
}
