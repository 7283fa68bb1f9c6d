//! Property tests: printer/parser round-trip on generated ASTs, and
//! compositionality of substitution.

use proptest::prelude::*;

use extent_core::syntax::{
    alpha_eq_term, parse, print_decls, subst_term, BaseTy, Constant, Decl, DeclBody, Subst,
    TermExpr, TriContext, TypeExpr,
};
use extent_core::tope::{Cube, CubeTerm, Tope};

fn name() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("a".to_string()),
        Just("b".to_string()),
        Just("x1".to_string()),
        Just("y'".to_string()),
        Just("t".to_string()),
        Just("u".to_string()),
        Just("s".to_string()),
    ]
}

fn cube_term() -> impl Strategy<Value = CubeTerm> {
    prop_oneof![
        name().prop_map(CubeTerm::Var),
        Just(CubeTerm::Zero),
        Just(CubeTerm::One),
    ]
}

fn tope() -> impl Strategy<Value = Tope> {
    let leaf = prop_oneof![
        Just(Tope::Top),
        Just(Tope::Bot),
        (cube_term(), cube_term()).prop_map(|(a, b)| Tope::Le(a, b)),
        (cube_term(), cube_term()).prop_map(|(a, b)| Tope::Eq(a, b)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.or(b)),
        ]
    })
}

fn base() -> impl Strategy<Value = BaseTy> {
    prop_oneof![Just(BaseTy::Unit), Just(BaseTy::Bool), Just(BaseTy::Three)]
}

fn constant() -> impl Strategy<Value = Constant> {
    prop_oneof![
        Just(Constant::Star),
        Just(Constant::Tt),
        Just(Constant::Ff),
        Just(Constant::C0),
        Just(Constant::C1),
        Just(Constant::C2),
    ]
}

fn binder() -> impl Strategy<Value = String> {
    prop_oneof![name(), Just("_".to_string())]
}

fn ty_and_term() -> (
    impl Strategy<Value = TypeExpr> + Clone,
    impl Strategy<Value = TermExpr> + Clone,
) {
    let term_leaf = prop_oneof![
        name().prop_map(TermExpr::Var),
        constant().prop_map(TermExpr::Const),
        any::<bool>().prop_map(TermExpr::Endpoint),
        Just(TermExpr::EmptySection),
    ];
    let term = term_leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (name(), tope(), inner.clone()).prop_map(|(var, shape, body)| TermExpr::ExtLam {
                var,
                shape,
                body: Box::new(body)
            }),
            (name(), inner.clone()).prop_map(|(var, body)| TermExpr::Lam {
                var,
                body: Box::new(body)
            }),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| TermExpr::app(f, a)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TermExpr::Pair {
                fst: Box::new(a),
                snd: Box::new(b)
            }),
            inner.clone().prop_map(|e| TermExpr::Fst(Box::new(e))),
            inner.clone().prop_map(|e| TermExpr::Snd(Box::new(e))),
        ]
    });
    let term_for_ty = term.clone();
    let ty_leaf = prop_oneof![
        base().prop_map(TypeExpr::Base),
        (name(), tope()).prop_map(|(var, tope)| TypeExpr::Shape { var, tope }),
    ];
    let ty = ty_leaf.prop_recursive(4, 16, 2, move |inner| {
        let term_for_ty = term_for_ty.clone();
        prop_oneof![
            (binder(), inner.clone(), inner.clone()).prop_map(|(var, dom, cod)| TypeExpr::Pi {
                var,
                dom: Box::new(dom),
                cod: Box::new(cod)
            }),
            (binder(), inner.clone(), inner.clone()).prop_map(|(var, fst, snd)| {
                TypeExpr::Sigma {
                    var,
                    fst: Box::new(fst),
                    snd: Box::new(snd),
                }
            }),
            (name(), tope(), tope(), inner.clone(), term_for_ty).prop_map(
                |(var, upper, lower, ty, boundary)| TypeExpr::Ext {
                    var,
                    upper,
                    lower,
                    ty: Box::new(ty),
                    boundary: Box::new(boundary),
                }
            ),
        ]
    });
    (ty, term)
}

fn decl() -> impl Strategy<Value = Decl> {
    let (ty, term) = ty_and_term();
    let ctx = prop_oneof![
        Just(TriContext::empty()),
        (tope(), proptest::collection::vec((name(), ty.clone()), 0..3)).prop_map(|(tope, vars)| {
            // cube {s u}; dedup context names
            let mut seen = std::collections::BTreeSet::new();
            let vars = vars
                .into_iter()
                .filter(|(n, _)| seen.insert(format!("{n}v")))
                .map(|(n, t)| (format!("{n}v"), t))
                .collect();
            TriContext {
                cube: Cube::new(["s", "u"]).unwrap(),
                tope,
                vars,
            }
        }),
    ];
    let body = prop_oneof![
        ty.clone().prop_map(DeclBody::Type),
        (ty.clone(), term.clone()).prop_map(|(ty, term)| DeclBody::Term { ty, term }),
        (ty, term.clone(), term).prop_map(|(ty, lhs, rhs)| DeclBody::Eq { ty, lhs, rhs }),
    ];
    (ctx, body).prop_map(|(ctx, body)| Decl {
        name: "d".into(),
        ctx,
        body,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_parse_roundtrip(d in decl()) {
        let printed = print_decls(std::slice::from_ref(&d));
        let reparsed = parse(&printed)
            .unwrap_or_else(|e| panic!("failed to reparse `{printed}`: {e}"));
        prop_assert_eq!(vec![d], reparsed, "printed form: {}", printed);
    }

    #[test]
    fn substitution_is_compositional(body in ty_and_term().1, x in name(), y in name()) {
        // disjoint binder pools keep the comparison literal; fall back to
        // alpha equivalence when freshening kicked in
        let mut sigma = Subst::new();
        sigma.insert(x.clone(), TermExpr::app(TermExpr::var("k9"), TermExpr::var("k8")));
        let mut tau = Subst::new();
        tau.insert(y.clone(), TermExpr::Const(Constant::Tt));
        tau.insert("k9".to_string(), TermExpr::var("k7"));

        let lhs = subst_term(&subst_term(&body, &sigma), &tau);
        // tau after sigma: apply tau to every image of sigma, then add
        // tau's own bindings for variables sigma does not touch
        let mut composed = Subst::new();
        for (k, v) in &sigma {
            composed.insert(k.clone(), subst_term(v, &tau));
        }
        for (k, v) in &tau {
            if !sigma.contains_key(k) {
                composed.insert(k.clone(), v.clone());
            }
        }
        let rhs = subst_term(&body, &composed);
        prop_assert!(alpha_eq_term(&lhs, &rhs),
            "lhs and rhs differ:\n  {:?}\n  {:?}", lhs, rhs);
    }

    #[test]
    fn substitution_of_fresh_variable_is_identity(body in ty_and_term().1) {
        let mut map = Subst::new();
        map.insert("zz_unused".to_string(), TermExpr::Const(Constant::Ff));
        prop_assert_eq!(subst_term(&body, &map), body);
    }
}
