//! The bidirectional checker.

use std::collections::BTreeSet;

use crate::syntax::{
    fresh, parse, print_type, subst_cube_in_type, subst_term, subst_type, Decl, DeclBody, Subst,
    SyntaxError, TermExpr, TriContext, TypeExpr,
};
use crate::tope::{entailment_counterexample, tope_entails, Cube, CubeTerm, Tope};

use super::rules;
use super::{CheckReport, Reason};

type Res<T> = Result<T, Reason>;

#[derive(Default)]
pub struct Checker {
    pub trace: Vec<&'static str>,
}

/// Names already used by a context, for freshening binders.
fn ctx_names(ctx: &TriContext) -> BTreeSet<String> {
    let mut s: BTreeSet<String> = ctx.cube.dims().iter().cloned().collect();
    s.extend(ctx.vars.iter().map(|(n, _)| n.clone()));
    s
}

impl Checker {
    pub fn new() -> Self {
        Checker::default()
    }

    fn rule(&mut self, r: &'static str) {
        self.trace.push(r);
    }

    /// Extends the cube context by a binder, freshening against everything
    /// in scope. Returns the new context piece and the chosen name.
    pub(super) fn extend_cube(&self, ctx: &TriContext, var: &str, extra_tope: &Tope) -> (TriContext, String) {
        // the binder's own occurrences in its tope are bound, not clashes
        let mut avoid = ctx_names(ctx);
        avoid.extend(extra_tope.free_vars().into_iter().filter(|v| v != var));
        let name = fresh(var, &avoid);
        let (cube, name) = {
            let (c, n) = ctx.cube.extend(&name);
            (c, n)
        };
        let tope = ctx.tope.clone().and(extra_tope.rename(var, &name));
        (
            TriContext {
                cube,
                tope,
                vars: ctx.vars.clone(),
            },
            name,
        )
    }

    pub(super) fn extend_var(&self, ctx: &TriContext, var: &str, ty: &TypeExpr) -> (TriContext, String) {
        let avoid = ctx_names(ctx);
        let name = fresh(var, &avoid);
        let mut vars = ctx.vars.clone();
        vars.push((name.clone(), ty.clone()));
        (
            TriContext {
                cube: ctx.cube.clone(),
                tope: ctx.tope.clone(),
                vars,
            },
            name,
        )
    }

    /// Renames the bound variable of a binder body when the context forced
    /// a fresh name.
    pub(super) fn rename_term(&self, body: &TermExpr, from: &str, to: &str) -> TermExpr {
        if from == to {
            return body.clone();
        }
        let mut map = Subst::new();
        map.insert(from.to_string(), TermExpr::Var(to.to_string()));
        subst_term(body, &map)
    }

    pub(super) fn rename_type(&self, body: &TypeExpr, from: &str, to: &str) -> TypeExpr {
        if from == to {
            return body.clone();
        }
        let mut map = Subst::new();
        map.insert(from.to_string(), TermExpr::Var(to.to_string()));
        subst_type(body, &map)
    }

    // ---- context well-formedness ----

    pub fn check_ctx(&mut self, ctx: &TriContext) -> Res<()> {
        ctx.tope
            .check_scope(&ctx.cube)
            .map_err(|e| Reason::ScopeError(e.to_string()))?;
        let mut prefix = TriContext {
            cube: ctx.cube.clone(),
            tope: ctx.tope.clone(),
            vars: Vec::new(),
        };
        for (name, ty) in &ctx.vars {
            if ctx.cube.contains(name) {
                return Err(Reason::ContextError(format!(
                    "variable `{name}` clashes with a cube dimension"
                )));
            }
            if prefix.vars.iter().any(|(n, _)| n == name) {
                return Err(Reason::ContextError(format!(
                    "duplicate context variable `{name}`"
                )));
            }
            self.check_type(&prefix, ty)?;
            prefix.vars.push((name.clone(), ty.clone()));
        }
        Ok(())
    }

    // ---- types ----

    pub fn check_type(&mut self, ctx: &TriContext, ty: &TypeExpr) -> Res<()> {
        match ty {
            TypeExpr::Base(_) => {
                self.rule(rules::BASE_FORM);
                Ok(())
            }
            TypeExpr::Pi { var, dom, cod } => {
                self.check_type(ctx, dom)?;
                let (ctx2, name) = self.extend_var(ctx, var, dom);
                let cod2 = self.rename_type(cod, var, &name);
                self.check_type(&ctx2, &cod2)?;
                self.rule(rules::PI_FORM);
                Ok(())
            }
            TypeExpr::Sigma { var, fst, snd } => {
                self.check_type(ctx, fst)?;
                let (ctx2, name) = self.extend_var(ctx, var, fst);
                let snd2 = self.rename_type(snd, var, &name);
                self.check_type(&ctx2, &snd2)?;
                self.rule(rules::SIGMA_FORM);
                Ok(())
            }
            TypeExpr::Shape { var, tope } => {
                let one = Cube::new([var.as_str()])
                    .map_err(|e| Reason::ScopeError(e.to_string()))?;
                tope.check_scope(&one)
                    .map_err(|e| Reason::ScopeError(e.to_string()))?;
                self.rule(rules::SHAPE_FORM);
                Ok(())
            }
            TypeExpr::Ext {
                var,
                upper,
                lower,
                ty,
                boundary,
            } => {
                let one =
                    Cube::new([var.as_str()]).map_err(|e| Reason::ScopeError(e.to_string()))?;
                upper
                    .check_scope(&one)
                    .map_err(|e| Reason::ScopeError(e.to_string()))?;
                lower
                    .check_scope(&one)
                    .map_err(|e| Reason::ScopeError(e.to_string()))?;
                if let Some(witness) = entailment_counterexample(&one, lower, upper)
                    .map_err(|e| Reason::ScopeError(e.to_string()))?
                {
                    return Err(Reason::NotAnInclusion { witness });
                }
                // A is a type over the upper shape
                let (ctx_psi, name) = self.extend_cube(ctx, var, upper);
                let ty2 = self.rename_type(ty, var, &name);
                self.check_type(&ctx_psi, &ty2)?;
                // a checks against A over the lower shape
                let (ctx_phi, name2) = self.extend_cube(ctx, var, lower);
                let ty3 = self.rename_type(ty, var, &name2);
                let boundary2 = self.rename_term(boundary, var, &name2);
                self.check_term(&ctx_phi, &boundary2, &ty3)?;
                self.rule(rules::EXT_FORM);
                Ok(())
            }
        }
    }

    // ---- terms ----

    pub fn check_term(&mut self, ctx: &TriContext, term: &TermExpr, ty: &TypeExpr) -> Res<()> {
        match (term, ty) {
            (
                TermExpr::ExtLam { var, shape, body },
                TypeExpr::Ext {
                    var: tvar,
                    upper,
                    lower,
                    ty: inner,
                    boundary,
                },
            ) => {
                // shape annotation must agree (extensionally) with the upper
                // tope of the extension type
                let one =
                    Cube::new([var.as_str()]).map_err(|e| Reason::ScopeError(e.to_string()))?;
                shape
                    .check_scope(&one)
                    .map_err(|e| Reason::ScopeError(e.to_string()))?;
                let upper_aligned = upper.rename(tvar, var);
                let equiv = crate::tope::tope_equiv(&one, shape, &upper_aligned)
                    .map_err(|e| Reason::ScopeError(e.to_string()))?;
                if !equiv {
                    return Err(Reason::TypeMismatch {
                        expected: format!("a section over {upper_aligned}"),
                        found: format!("a lambda with shape {shape}"),
                    });
                }
                // body checks over the upper shape
                let (ctx_psi, name) = self.extend_cube(ctx, var, shape);
                let body_psi = self.rename_term(body, var, &name);
                let inner_psi = self.rename_type(&self.rename_type(inner, tvar, var), var, &name);
                self.check_term(&ctx_psi, &body_psi, &inner_psi)?;
                // body agrees with the boundary over the lower shape
                let lower_var = lower.rename(tvar, var);
                let (ctx_phi, name2) = self.extend_cube(ctx, var, &lower_var);
                let body_phi = self.rename_term(body, var, &name2);
                let inner_phi = self.rename_type(&self.rename_type(inner, tvar, var), var, &name2);
                let bound_phi =
                    self.rename_term(&self.rename_term(boundary, tvar, var), var, &name2);
                if !self.judg_equal(&ctx_phi, &body_phi, &bound_phi, &inner_phi)? {
                    return Err(Reason::BoundaryMismatch(format!(
                        "the body does not agree with the boundary section on {lower_var}"
                    )));
                }
                self.rule(rules::EXT_INTRO);
                Ok(())
            }
            (TermExpr::ExtLam { .. }, _) => Err(Reason::TypeMismatch {
                expected: print_type(ty),
                found: "an extension lambda".into(),
            }),
            (TermExpr::Lam { var, body }, TypeExpr::Pi { var: pvar, dom, cod }) => {
                let (ctx2, name) = self.extend_var(ctx, var, dom);
                let body2 = self.rename_term(body, var, &name);
                let cod2 = self.rename_type(cod, pvar, &name);
                self.check_term(&ctx2, &body2, &cod2)?;
                self.rule(rules::PI_INTRO);
                Ok(())
            }
            (TermExpr::Lam { .. }, _) => Err(Reason::TypeMismatch {
                expected: print_type(ty),
                found: "a lambda".into(),
            }),
            (TermExpr::Pair { fst, snd }, TypeExpr::Sigma { var, fst: fty, snd: sty }) => {
                self.check_term(ctx, fst, fty)?;
                let mut map = Subst::new();
                map.insert(var.clone(), fst.as_ref().clone());
                let sty2 = subst_type(sty, &map);
                self.check_term(ctx, snd, &sty2)?;
                self.rule(rules::SIGMA_INTRO);
                Ok(())
            }
            (TermExpr::Pair { .. }, _) => Err(Reason::TypeMismatch {
                expected: print_type(ty),
                found: "a pair".into(),
            }),
            (TermExpr::EmptySection, _) => {
                let inconsistent = tope_entails(&ctx.cube, &ctx.tope, &Tope::Bot)
                    .map_err(|e| Reason::ScopeError(e.to_string()))?;
                if inconsistent {
                    self.rule(rules::EMPTY_SECTION);
                    Ok(())
                } else {
                    Err(Reason::EmptySectionOutsideBot)
                }
            }
            _ => {
                // endpoints and cube variables check against reflected shapes
                if let Some(s) = self.as_cube_term(ctx, term) {
                    return match ty {
                        TypeExpr::Shape { var, tope } => {
                            let inst = tope.subst(var, &s);
                            let ok = tope_entails(&ctx.cube, &ctx.tope, &inst)
                                .map_err(|e| Reason::ScopeError(e.to_string()))?;
                            if ok {
                                self.rule(rules::SHAPE_INTRO);
                                Ok(())
                            } else {
                                Err(Reason::ShapeMiss(format!(
                                    "tope context does not entail {inst}"
                                )))
                            }
                        }
                        _ => Err(Reason::TypeMismatch {
                            expected: print_type(ty),
                            found: format!("the interval term {s}"),
                        }),
                    };
                }
                let inferred = self.infer_term(ctx, term)?;
                if self.type_equal(ctx, &inferred, ty)? {
                    self.rule(rules::CONV);
                    Ok(())
                } else {
                    Err(Reason::TypeMismatch {
                        expected: print_type(ty),
                        found: print_type(&inferred),
                    })
                }
            }
        }
    }

    /// Interprets a term as a cube term when it is one in the current
    /// context (an endpoint, or a variable bound by the cube).
    pub(super) fn as_cube_term(&self, ctx: &TriContext, term: &TermExpr) -> Option<CubeTerm> {
        match term {
            TermExpr::Endpoint(false) => Some(CubeTerm::Zero),
            TermExpr::Endpoint(true) => Some(CubeTerm::One),
            TermExpr::Var(x) if ctx.lookup(x).is_none() && ctx.cube.contains(x) => {
                Some(CubeTerm::Var(x.clone()))
            }
            _ => None,
        }
    }

    pub fn infer_term(&mut self, ctx: &TriContext, term: &TermExpr) -> Res<TypeExpr> {
        match term {
            TermExpr::Var(x) => match ctx.lookup(x) {
                Some(t) => {
                    self.rule(rules::VAR);
                    Ok(t.clone())
                }
                None if ctx.cube.contains(x) => Err(Reason::CannotInfer(format!(
                    "cube variable `{x}` needs a shape annotation"
                ))),
                None => Err(Reason::Unbound(x.clone())),
            },
            TermExpr::Const(c) => {
                self.rule(rules::CONST);
                Ok(TypeExpr::Base(c.base_ty()))
            }
            TermExpr::Ascribe { term, ty } => {
                self.check_type(ctx, ty)?;
                self.check_term(ctx, term, ty)?;
                self.rule(rules::ASCRIBE);
                Ok(ty.as_ref().clone())
            }
            TermExpr::App { fun, arg } => {
                let fty = self.infer_term(ctx, fun)?;
                match fty {
                    TypeExpr::Pi { var, dom, cod } => {
                        self.check_term(ctx, arg, &dom)?;
                        let mut map = Subst::new();
                        map.insert(var, arg.as_ref().clone());
                        self.rule(rules::PI_ELIM);
                        Ok(subst_type(&cod, &map))
                    }
                    TypeExpr::Ext {
                        var,
                        upper,
                        ty: inner,
                        ..
                    } => {
                        let s = self.as_cube_term(ctx, arg).ok_or_else(|| {
                            Reason::TypeMismatch {
                                expected: "an interval term".into(),
                                found: crate::syntax::print_term(arg),
                            }
                        })?;
                        let inst = upper.subst(&var, &s);
                        let ok = tope_entails(&ctx.cube, &ctx.tope, &inst)
                            .map_err(|e| Reason::ScopeError(e.to_string()))?;
                        if !ok {
                            return Err(Reason::ShapeMiss(format!(
                                "tope context does not entail {inst}"
                            )));
                        }
                        self.rule(rules::EXT_ELIM);
                        Ok(subst_cube_in_type(&inner, &var, &s))
                    }
                    other => Err(Reason::NotAFunction(print_type(&other))),
                }
            }
            TermExpr::Fst(e) => match self.infer_term(ctx, e)? {
                TypeExpr::Sigma { fst, .. } => {
                    self.rule(rules::SIGMA_ELIM);
                    Ok(*fst)
                }
                other => Err(Reason::NotAPair(print_type(&other))),
            },
            TermExpr::Snd(e) => match self.infer_term(ctx, e)? {
                TypeExpr::Sigma { var, snd, .. } => {
                    let mut map = Subst::new();
                    map.insert(var, TermExpr::Fst(e.clone()));
                    self.rule(rules::SIGMA_ELIM);
                    Ok(subst_type(&snd, &map))
                }
                other => Err(Reason::NotAPair(print_type(&other))),
            },
            TermExpr::Endpoint(_) => Err(Reason::CannotInfer(
                "an endpoint needs a shape annotation".into(),
            )),
            TermExpr::EmptySection => Err(Reason::CannotInfer(
                "the empty section needs an expected type".into(),
            )),
            TermExpr::Lam { .. } | TermExpr::ExtLam { .. } => Err(Reason::CannotInfer(
                "a lambda needs an expected type".into(),
            )),
            TermExpr::Pair { .. } => {
                Err(Reason::CannotInfer("a pair needs an expected type".into()))
            }
        }
    }

    // ---- substitution stability (syntactic) ----

    /// Re-checks a judgment under a context morphism given by a term
    /// substitution, and verifies that substitution distributes over the
    /// type-former nodes. Returns true when the verdicts agree and the
    /// skeleton is preserved.
    pub fn check_subst_stability(
        &mut self,
        ctx: &TriContext,
        term: &TermExpr,
        ty: &TypeExpr,
        target: &TriContext,
        map: &Subst,
    ) -> Res<bool> {
        // the morphism must be well-typed: each image checks against the
        // substituted declared type
        for (name, declared) in &ctx.vars {
            let image = map
                .get(name)
                .cloned()
                .unwrap_or_else(|| TermExpr::Var(name.clone()));
            let declared_sub = subst_type(declared, map);
            self.check_term(target, &image, &declared_sub)?;
        }
        let before = {
            let mut c = Checker::new();
            c.check_term(ctx, term, ty).is_ok()
        };
        let term_s = subst_term(term, map);
        let ty_s = subst_type(ty, map);
        let after = {
            let mut c = Checker::new();
            c.check_term(target, &term_s, &ty_s).is_ok()
        };
        Ok(before == after && same_skeleton(ty, &ty_s))
    }
}

/// Substitution commutes with the type formers node by node: the tree of
/// constructors is unchanged.
fn same_skeleton(a: &TypeExpr, b: &TypeExpr) -> bool {
    match (a, b) {
        (TypeExpr::Base(x), TypeExpr::Base(y)) => x == y,
        (TypeExpr::Pi { dom: d1, cod: c1, .. }, TypeExpr::Pi { dom: d2, cod: c2, .. }) => {
            same_skeleton(d1, d2) && same_skeleton(c1, c2)
        }
        (TypeExpr::Sigma { fst: f1, snd: s1, .. }, TypeExpr::Sigma { fst: f2, snd: s2, .. }) => {
            same_skeleton(f1, f2) && same_skeleton(s1, s2)
        }
        (TypeExpr::Shape { .. }, TypeExpr::Shape { .. }) => true,
        (TypeExpr::Ext { ty: t1, .. }, TypeExpr::Ext { ty: t2, .. }) => same_skeleton(t1, t2),
        _ => false,
    }
}

/// Report on one declaration of a file.
#[derive(Debug, Clone)]
pub struct DeclReport {
    pub name: String,
    pub report: CheckReport,
}

pub fn check_decl(decl: &Decl) -> CheckReport {
    let mut c = Checker::new();
    let outcome = check_decl_inner(&mut c, decl);
    CheckReport {
        accepted: outcome.is_ok(),
        trace: c.trace,
        failure: outcome.err(),
    }
}

fn check_decl_inner(c: &mut Checker, decl: &Decl) -> Result<(), Reason> {
    c.check_ctx(&decl.ctx)?;
    match &decl.body {
        DeclBody::Type(ty) => c.check_type(&decl.ctx, ty),
        DeclBody::Term { ty, term } => {
            c.check_type(&decl.ctx, ty)?;
            c.check_term(&decl.ctx, term, ty)
        }
        DeclBody::Eq { ty, lhs, rhs } => {
            c.check_type(&decl.ctx, ty)?;
            c.check_term(&decl.ctx, lhs, ty)?;
            c.check_term(&decl.ctx, rhs, ty)?;
            if c.judg_equal(&decl.ctx, lhs, rhs, ty)? {
                Ok(())
            } else {
                Err(Reason::EqMismatch(print_type(ty)))
            }
        }
    }
}

pub fn check_decls(decls: &[Decl]) -> Vec<DeclReport> {
    decls
        .iter()
        .map(|d| DeclReport {
            name: d.name.clone(),
            report: check_decl(d),
        })
        .collect()
}

/// Parses and checks a whole `.stt` source.
pub fn check_source(src: &str) -> Result<Vec<DeclReport>, SyntaxError> {
    Ok(check_decls(&parse(src)?))
}
