use super::check::{check_source, Checker};
use super::rules;
use crate::syntax::{parse, parse_term, parse_type, Subst, TriContext};

fn accepts(src: &str) -> Vec<&'static str> {
    let reports = check_source(src).expect("parses");
    for r in &reports {
        assert!(
            r.report.accepted,
            "expected accept for `{}`, got {:?}",
            r.name, r.report.failure
        );
        assert!(!r.report.trace.is_empty(), "trace empty on accept");
    }
    reports
        .into_iter()
        .flat_map(|r| r.report.trace)
        .collect()
}

fn rejects(src: &str) -> super::Reason {
    let reports = check_source(src).expect("parses");
    let bad = reports
        .into_iter()
        .find(|r| !r.report.accepted)
        .expect("expected a rejection");
    bad.report.failure.expect("failure reason present")
}

#[test]
fn ext_formation_with_empty_side_condition() {
    let t = accepts("type A := <Pi_{t : I | TOP} Bool |^ BOT empty>");
    assert!(t.contains(&rules::EXT_FORM));
}

#[test]
fn ext_formation_with_total_side_condition() {
    accepts("type A := <Pi_{t : I | TOP} Bool |^ TOP tt>");
}

#[test]
fn ext_formation_rejects_non_inclusion() {
    let r = rejects("type A := <Pi_{t : I | t == 0} Bool |^ TOP tt>");
    match r {
        super::Reason::NotAnInclusion { witness } => assert_eq!(witness, vec![true]),
        other => panic!("expected NotAnInclusion, got {other:?}"),
    }
}

#[test]
fn ext_intro_accepts_literal_boundary_agreement() {
    let t = accepts(
        "term f : <Pi_{t : I | TOP} Bool |^ (t == 0) tt> := \\t^{I | TOP}. tt",
    );
    assert!(t.contains(&rules::EXT_INTRO));
}

#[test]
fn ext_intro_rejects_boundary_mismatch() {
    let r = rejects("term f : <Pi_{t : I | TOP} Bool |^ (t == 0) tt> := \\t^{I | TOP}. ff");
    assert_eq!(r.code(), "BoundaryMismatch");
}

#[test]
fn ext_elim_at_a_legal_point() {
    let t = accepts(
        "term x [{} | TOP | f : <Pi_{t : I | TOP} Bool |^ (t == 0) tt>] : Bool := f 1",
    );
    assert!(t.contains(&rules::EXT_ELIM));
}

#[test]
fn ext_elim_rejects_point_outside_shape() {
    let r = rejects(
        "term x [{} | TOP | f : <Pi_{t : I | t == 0} Bool |^ BOT empty>] : Bool := f 1",
    );
    assert_eq!(r.code(), "ShapeMiss");
}

#[test]
fn computation_rule_fires_inside_the_lower_shape() {
    let t = accepts(
        "eq c [{} | TOP | f : <Pi_{t : I | TOP} Bool |^ (t == 0) tt>] : Bool := f 0 == tt",
    );
    assert!(t.contains(&rules::EXT_COMP));
}

#[test]
fn beta_rule_fires_outside_the_lower_shape() {
    let t = accepts(
        "eq b [{} | TOP | x : Bool] : Bool := \
         (\\t^{I | TOP}. x : <Pi_{t : I | TOP} Bool |^ (t == 0) x>) 1 == x",
    );
    assert!(t.contains(&rules::EXT_BETA));
}

#[test]
fn computation_wins_over_beta_when_both_fire() {
    let t = accepts(
        "eq cb : Bool := (\\t^{I | TOP}. tt : <Pi_{t : I | TOP} Bool |^ TOP tt>) 1 == tt",
    );
    assert!(t.contains(&rules::EXT_COMP));
    assert!(!t.contains(&rules::EXT_BETA));
}

#[test]
fn eta_rule_holds() {
    let t = accepts(
        "eq e [{} | TOP | f : <Pi_{t : I | TOP} Bool |^ (t == 0) tt>] \
         : <Pi_{t : I | TOP} Bool |^ (t == 0) tt> := f == \\u^{I | TOP}. f u",
    );
    assert!(t.contains(&rules::EXT_ETA));
}

#[test]
fn all_six_rules_appear_in_traces() {
    let trace = accepts(
        "term f : <Pi_{t : I | TOP} Bool |^ (t == 0) tt> := \\t^{I | TOP}. tt\n\
         eq c [{} | TOP | g : <Pi_{t : I | TOP} Bool |^ (t == 0) tt>] : Bool := g 0 == tt\n\
         eq b [{} | TOP | x : Bool] : Bool := \
         (\\t^{I | TOP}. x : <Pi_{t : I | TOP} Bool |^ (t == 0) x>) 1 == x\n\
         eq e [{} | TOP | g : <Pi_{t : I | TOP} Bool |^ (t == 0) tt>] \
         : <Pi_{t : I | TOP} Bool |^ (t == 0) tt> := g == \\u^{I | TOP}. g u\n\
         term a [{} | TOP | g : <Pi_{t : I | TOP} Bool |^ (t == 0) tt>] : Bool := g 1",
    );
    for r in rules::EXTENSION_RULES {
        assert!(trace.contains(&r), "missing rule {r}");
    }
}

#[test]
fn shape_reflection_and_tope_equality() {
    accepts("term p : {t : I | t == 0} := 0");
    let t = accepts("eq q [{s} | s == 0 | ] : {t : I | TOP} := s == 0");
    assert!(t.contains(&rules::TOPE_EQ));
    let r = rejects("term p : {t : I | t == 0} := 1");
    assert_eq!(r.code(), "ShapeMiss");
}

#[test]
fn everything_is_equal_under_an_unsatisfiable_tope() {
    accepts("eq z [{} | BOT | x : Bool, y : Bool] : Bool := x == y");
    accepts("eq w [{s} | s == 0 /\\ s == 1 | x : Bool, y : Bool] : Bool := x == y");
}

#[test]
fn pi_and_sigma_basics() {
    accepts("term id : (x : Bool) -> Bool := fn x. x");
    accepts("eq beta : Bool := (fn x. x : Bool -> Bool) tt == tt");
    accepts("term pr : Bool * Unit -> Bool := fn p. fst p");
    accepts("eq proj : Bool := fst ((tt, star) : Bool * Unit) == tt");
    let r = rejects("term bad : Bool := (fn x. x : Bool -> Bool)");
    assert_eq!(r.code(), "TypeMismatch");
}

#[test]
fn dependent_codomain_substitutes_the_argument() {
    // applying a function whose codomain mentions the argument computes the
    // boundary of the resulting extension type
    accepts(
        "term use [{} | TOP | h : (x : Bool) -> <Pi_{t : I | TOP} Bool |^ (t == 0) x>] \
         : <Pi_{t : I | TOP} Bool |^ (t == 0) ff> := h ff",
    );
}

#[test]
fn checker_verdicts_are_alpha_invariant() {
    let a = "term f : <Pi_{t : I | TOP} Bool |^ (t == 0) tt> := \\t^{I | TOP}. tt";
    let b = "term f : <Pi_{u : I | TOP} Bool |^ (u == 0) tt> := \\v^{I | TOP}. tt";
    assert!(check_source(a).unwrap()[0].report.accepted);
    assert!(check_source(b).unwrap()[0].report.accepted);
    let c = "eq e [{} | TOP | g : <Pi_{t : I | TOP} Bool |^ (t == 0) tt>] : Bool := g 0 == tt";
    let d = "eq e [{} | TOP | g : <Pi_{w : I | TOP} Bool |^ (w == 0) tt>] : Bool := g 0 == tt";
    assert!(check_source(c).unwrap()[0].report.accepted);
    assert!(check_source(d).unwrap()[0].report.accepted);
}

#[test]
fn subject_reduction_at_desk_scale() {
    use super::equal::head_step;
    // a redex, its type, and the context
    let src = "term x [{} | TOP | y : Bool] : Bool := (fn z. z : Bool -> Bool) y";
    let decls = parse(src).unwrap();
    let (ctx, ty, term) = match &decls[0].body {
        crate::syntax::DeclBody::Term { ty, term } => (&decls[0].ctx, ty, term),
        _ => unreachable!(),
    };
    let mut c = Checker::new();
    assert!(c.check_term(ctx, term, ty).is_ok());
    let (stepped, rule) = head_step(ctx, term).expect("one step");
    assert_eq!(rule, rules::PI_BETA);
    let mut c2 = Checker::new();
    assert!(c2.check_term(ctx, &stepped, ty).is_ok());

    // same for a computation-rule step
    let src2 = "term x [{} | TOP | f : <Pi_{t : I | TOP} Bool |^ (t == 0) tt>] : Bool := f 0";
    let decls2 = parse(src2).unwrap();
    let (ctx2, ty2, term2) = match &decls2[0].body {
        crate::syntax::DeclBody::Term { ty, term } => (&decls2[0].ctx, ty, term),
        _ => unreachable!(),
    };
    let (stepped2, rule2) = head_step(ctx2, term2).expect("one step");
    assert_eq!(rule2, rules::EXT_COMP);
    let mut c3 = Checker::new();
    assert!(c3.check_term(ctx2, &stepped2, ty2).is_ok());
}

#[test]
fn substitution_stability_of_verdicts() {
    let mut c = Checker::new();
    // Gamma = x : Bool; term mentions x inside an extension boundary
    let src = "term d [{} | TOP | x : Bool] : <Pi_{t : I | TOP} Bool |^ (t == 0) x> := \\t^{I | TOP}. x";
    let decls = parse(src).unwrap();
    let (ctx, ty, term) = match &decls[0].body {
        crate::syntax::DeclBody::Term { ty, term } => (&decls[0].ctx, ty, term),
        _ => unreachable!(),
    };
    // identity morphism
    assert!(c
        .check_subst_stability(ctx, term, ty, ctx, &Subst::new())
        .unwrap());
    // substitute a closed term for x, landing in the empty context
    let mut map = Subst::new();
    map.insert("x".into(), parse_term("ff").unwrap());
    let empty = TriContext::empty();
    assert!(c
        .check_subst_stability(ctx, term, ty, &empty, &map)
        .unwrap());
    // weakening: same substitution into a larger context
    let mut bigger = TriContext::empty();
    bigger
        .vars
        .push(("y".into(), parse_type("Unit").unwrap()));
    assert!(c
        .check_subst_stability(ctx, term, ty, &bigger, &map)
        .unwrap());
}

#[test]
fn substitution_reaches_ext_components() {
    // sigma applied to the type produces the substituted Ext node
    let ty = parse_type("<Pi_{t : I | TOP} Bool |^ (t == 0) x>").unwrap();
    let mut map = Subst::new();
    map.insert("x".into(), parse_term("tt").unwrap());
    let expected = parse_type("<Pi_{t : I | TOP} Bool |^ (t == 0) tt>").unwrap();
    assert_eq!(crate::syntax::subst_type(&ty, &map), expected);
}

#[test]
fn empty_section_is_rejected_under_a_satisfiable_tope() {
    let r = rejects("term x : Bool := empty");
    assert_eq!(r.code(), "EmptySection");
}

#[test]
fn unbound_variables_are_reported() {
    let r = rejects("term x : Bool := zz");
    assert_eq!(r.code(), "Unbound");
}

#[test]
fn eta_for_pi_types() {
    let t = accepts("eq e [{} | TOP | f : Bool -> Bool] : Bool -> Bool := f == fn x. f x");
    assert!(t.contains(&rules::PI_ETA));
}

#[test]
fn nested_extension_types_check() {
    accepts(
        "type N := <Pi_{t : I | TOP} <Pi_{u : I | TOP} Bool |^ BOT empty> |^ BOT empty>",
    );
}

#[test]
fn intro_with_extensionally_equal_shape_annotation() {
    // TOP /\ TOP is extensionally TOP
    accepts(
        "term f : <Pi_{t : I | TOP} Bool |^ BOT empty> := \\t^{I | TOP /\\ TOP}. tt",
    );
    let t = rejects("term f : <Pi_{t : I | TOP} Bool |^ BOT empty> := \\t^{I | t == 0}. tt");
    assert_eq!(t.code(), "TypeMismatch");
}

#[test]
fn eq_decl_failure_reason() {
    let r = rejects("eq bad : Bool := tt == ff");
    assert_eq!(r.code(), "EqMismatch");
}

#[test]
fn appearance_of_ext_comp_in_eta_comparison_on_restricted_region() {
    // psi == phi: every application of f computes to the boundary
    let t = accepts(
        "eq r [{} | TOP | f : <Pi_{t : I | t == 0} Bool |^ (t == 0) tt>] \
         : <Pi_{t : I | t == 0} Bool |^ (t == 0) tt> := f == \\u^{I | u == 0}. tt",
    );
    assert!(t.contains(&rules::EXT_COMP));
}
