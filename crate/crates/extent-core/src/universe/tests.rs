use super::*;
use crate::presheaf::{
    arrow_cat, product, pullback, terminal_cat, terminal_psh, FinPresheaf, PresheafMap,
};

const CAP: usize = 4096;

fn set(cat: &Arc<FinCat>, n: usize) -> Arc<FinPresheaf> {
    FinPresheaf::new(cat.clone(), vec![n], vec![(0..n).collect()]).unwrap()
}

#[test]
fn universe_sizes_over_the_point() {
    let cat = terminal_cat();
    let t1 = build_universe(&cat, 1, CAP).unwrap();
    assert_eq!(t1.u.cards(), &[2], "codes at bound 1: empty and singleton");
    assert_eq!(t1.u_tilde.cards(), &[1], "only the singleton code has a point");
    let t2 = build_universe(&cat, 2, CAP).unwrap();
    assert_eq!(t2.u.cards(), &[4]);
    assert_eq!(t2.u_tilde.cards(), &[4]);
}

#[test]
fn universe_sizes_over_the_arrow() {
    let cat = arrow_cat();
    let t = build_universe(&cat, 2, CAP).unwrap();
    // codes over the source object: subsets of {0,1}
    assert_eq!(t.u.card(ObjId(0)), 4);
    // codes over the target object: carrier pair (S1, S0) with a function
    // S1 -> S0; sum over subsets: 4 + 2*4 + 6 = 18
    assert_eq!(t.u.card(ObjId(1)), 18);
}

#[test]
fn universe_is_deterministic() {
    let cat = arrow_cat();
    let a = build_universe(&cat, 2, CAP).unwrap();
    let b = build_universe(&cat, 2, CAP).unwrap();
    assert_eq!(a.u, b.u);
    assert_eq!(a.u_tilde, b.u_tilde);
    assert_eq!(a.pi, b.pi);
    assert_eq!(a.codes, b.codes);
}

#[test]
fn pi_composed_with_sections_of_pi_is_projection() {
    let cat = terminal_cat();
    let t = build_universe(&cat, 2, CAP).unwrap();
    // every point of pi lies over its code
    for (i, &(code, _)) in t.points[0].iter().enumerate() {
        assert_eq!(t.pi.apply(ObjId(0), i), code);
    }
}

#[test]
fn comprehension_of_constant_singleton_is_isomorphic_projection() {
    let cat = arrow_cat();
    let gamma = FinPresheaf::new(cat.clone(), vec![2, 1], vec![vec![0, 1], vec![0], vec![1]]).unwrap();
    let fam = Family::constant(&gamma, 1);
    let comp = comprehension(&fam).unwrap();
    assert_eq!(comp.total.cards(), gamma.cards());
    // the projection is the identity table after canonical naming
    assert_eq!(comp.proj, PresheafMap::identity(&gamma));
}

#[test]
fn comprehension_counts_fibers() {
    let cat = terminal_cat();
    let one = terminal_psh(&cat);
    let fam3 = Family::constant(&one, 3);
    assert_eq!(comprehension(&fam3).unwrap().total.cards(), &[3]);

    // a two-element context with fibers of sizes 1 and 2
    let gamma = set(&cat, 2);
    let data = FamilyData::new(
        &gamma,
        vec![vec![vec![0], vec![0, 1]]],
        vec![vec![vec![vec![0]], vec![vec![0, 1]]]],
    )
    .unwrap();
    let fam = Family::new(gamma, data).unwrap();
    assert_eq!(comprehension(&fam).unwrap().total.cards(), &[3]);
}

#[test]
fn reindexing_along_identity_is_bit_identical() {
    let cat = arrow_cat();
    let gamma = FinPresheaf::new(cat.clone(), vec![2, 2], vec![vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap();
    let t = build_universe(&cat, 1, CAP).unwrap();
    let _ = &t;
    let fam = Family::constant(&gamma, 1);
    let id = PresheafMap::identity(&gamma);
    assert_eq!(fam.reindex(&id), fam);
}

/// The splitting law: comprehension of a reindexed family is literally the
/// canonical pullback of the comprehension, and the second projections
/// compose on the nose.
#[test]
fn splitting_law_tables() {
    let cat = arrow_cat();
    let tables = build_universe(&cat, 2, CAP).unwrap();
    // Gamma with a nonconstant family: build from a code over y(1)
    let gamma = tables.yons[1].psh.clone();
    for code in tables.codes[1].iter().step_by(5) {
        let fam = Family::new(gamma.clone(), code.clone()).unwrap();
        let comp = comprehension(&fam).unwrap();
        // a morphism Delta -> Gamma: classify an element of Gamma(0)
        if gamma.card(ObjId(0)) == 0 {
            continue;
        }
        let sigma = tables.yons[0].classify(0, &gamma);
        let re = fam.reindex(&sigma);
        let comp_re = comprehension(&re).unwrap();

        // table equality with the canonical pullback of (proj, sigma)
        let pb = pullback(&sigma, &comp.proj).unwrap();
        assert_eq!(comp_re.total.cards(), pb.psh.cards());
        assert_eq!(comp_re.total.as_ref(), pb.psh.as_ref());

        // q composes on the nose
        let q_orig = q_map(&fam, &comp, &tables).unwrap();
        let q_re = q_map(&re, &comp_re, &tables).unwrap();
        let lift = comprehension_lift(&sigma, &comp_re, &comp).unwrap();
        assert_eq!(q_re, q_orig.compose(&lift).unwrap());

        // and the lift over sigma commutes with the projections
        assert_eq!(
            sigma.compose(&comp_re.proj).unwrap(),
            comp.proj.compose(&lift).unwrap()
        );
    }
}

#[test]
fn distinguished_square_is_a_pullback() {
    let cat = arrow_cat();
    let tables = build_universe(&cat, 2, CAP).unwrap();
    let gamma = tables.yons[1].psh.clone();
    for code in tables.codes[1].iter().step_by(7) {
        let fam = Family::new(gamma.clone(), code.clone()).unwrap();
        let comp = comprehension(&fam).unwrap();
        let a_map = family_to_map(&fam, &tables).unwrap();
        let q = q_map(&fam, &comp, &tables).unwrap();
        // square commutes
        assert_eq!(
            tables.pi.compose(&q).unwrap(),
            a_map.compose(&comp.proj).unwrap()
        );
        // and is a pullback: the gap map into the canonical pullback is a
        // stagewise bijection
        let pb = pullback(&a_map, &tables.pi).unwrap();
        let gap = pb.gap(&comp.proj, &q).unwrap();
        assert_eq!(comp.total.cards(), pb.psh.cards());
        for c in cat.objects() {
            let mut seen: Vec<usize> = (0..comp.total.card(c)).map(|i| gap.apply(c, i)).collect();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), comp.total.card(c));
        }
    }
}

/// Every map with small fibers between presheaves arises, up to canonical
/// isomorphism over the base, as the comprehension of a family.
#[test]
fn universe_classifies_small_maps() {
    let cat = arrow_cat();
    let gamma = FinPresheaf::new(cat.clone(), vec![2, 2], vec![vec![0, 1], vec![0, 1], vec![0, 1]]).unwrap();
    let e = FinPresheaf::new(
        cat.clone(),
        vec![3, 2],
        vec![vec![0, 1, 2], vec![0, 1], vec![0, 2]],
    )
    .unwrap();
    let p = PresheafMap::new(e.clone(), gamma.clone(), vec![vec![0, 0, 1], vec![0, 1]]).unwrap();

    // fiber family: carrier at (c, w) is the fiber of p over w, positions
    // as canonical names
    let fibers: Vec<Vec<Vec<usize>>> = cat
        .objects()
        .map(|c| {
            (0..gamma.card(c))
                .map(|w| (0..e.card(c)).filter(|&x| p.apply(c, x) == w).collect())
                .collect()
        })
        .collect();
    let bound = fibers
        .iter()
        .flat_map(|r| r.iter().map(|f| f.len()))
        .max()
        .unwrap();
    assert!(bound <= 2);
    let carriers: Vec<Vec<Vec<Value>>> = fibers
        .iter()
        .map(|r| r.iter().map(|f| (0..f.len() as u16).collect()).collect())
        .collect();
    let maps: Vec<Vec<Vec<Vec<Value>>>> = cat
        .objects()
        .map(|c| {
            (0..gamma.card(c))
                .map(|w| {
                    cat.into_obj(c)
                        .iter()
                        .map(|&f| {
                            fibers[c.0][w]
                                .iter()
                                .map(|&x| {
                                    let xf = e.restrict(f, x);
                                    let wf = gamma.restrict(f, w);
                                    fibers[cat.src(f).0][wf]
                                        .iter()
                                        .position(|&y| y == xf)
                                        .unwrap() as Value
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let fam = Family::new(gamma.clone(), FamilyData::new(&gamma, carriers, maps).unwrap()).unwrap();
    let comp = comprehension(&fam).unwrap();
    // decode gives a natural isomorphism over Gamma
    let iso = PresheafMap::new(
        comp.total.clone(),
        e.clone(),
        cat.objects()
            .map(|c| {
                comp.pairs[c.0]
                    .iter()
                    .map(|&(w, x)| fibers[c.0][w][x as usize])
                    .collect()
            })
            .collect(),
    )
    .unwrap();
    assert_eq!(comp.total.cards(), e.cards());
    for c in cat.objects() {
        let mut img: Vec<usize> = (0..comp.total.card(c)).map(|i| iso.apply(c, i)).collect();
        img.sort_unstable();
        img.dedup();
        assert_eq!(img.len(), e.card(c), "iso is a stagewise bijection");
    }
    assert_eq!(p.compose(&iso).unwrap(), comp.proj);
    // and the family is indeed valued in the bound-2 universe
    let tables = build_universe(&cat, 2, CAP).unwrap();
    assert!(family_to_map(&fam, &tables).is_ok());
}

#[test]
fn pi_family_counts_dependent_functions() {
    let cat = terminal_cat();
    let one = terminal_psh(&cat);
    // A with two elements
    let a = Family::constant(&one, 2);
    let comp_a = comprehension(&a).unwrap();
    // B with fibers (2, 1) over Gamma.A
    let b_data = FamilyData::new(
        &comp_a.total,
        vec![vec![vec![0, 1], vec![0]]],
        vec![vec![vec![vec![0, 1]], vec![vec![0]]]],
    )
    .unwrap();
    let b = Family::new(comp_a.total.clone(), b_data).unwrap();
    let pf = pi_family(&a, &comp_a, &b, CAP).unwrap();
    assert_eq!(pf.family.data.carrier(ObjId(0), 0).len(), 2, "2 * 1 = 2");

    // constant singleton B gives the singleton code
    let b1 = Family::constant(&comp_a.total, 1);
    let pf1 = pi_family(&a, &comp_a, &b1, CAP).unwrap();
    assert_eq!(pf1.family.data.carrier(ObjId(0), 0).len(), 1);
}

#[test]
fn pi_former_is_strictly_stable() {
    // Pi(A,B) reindexed equals Pi of the reindexed inputs, as tables
    let cat = arrow_cat();
    let tables = build_universe(&cat, 2, CAP).unwrap();
    let gamma = tables.yons[1].psh.clone();
    let sigma = tables.yons[0].classify(0, &gamma);
    for code in tables.codes[1].iter().step_by(6) {
        let a = Family::new(gamma.clone(), code.clone()).unwrap();
        let comp_a = comprehension(&a).unwrap();
        for b_data in enumerate_families(&comp_a.total, 2, CAP).unwrap().into_iter().step_by(9) {
            let b = Family::new(comp_a.total.clone(), b_data).unwrap();
            let pi = pi_family(&a, &comp_a, &b, CAP).unwrap();
            let lhs = pi.family.reindex(&sigma);

            let a_re = a.reindex(&sigma);
            let comp_re = comprehension(&a_re).unwrap();
            let lift = comprehension_lift(&sigma, &comp_re, &comp_a).unwrap();
            let b_re = Family::new(comp_re.total.clone(), b.data.reindex(&lift)).unwrap();
            let rhs = pi_family(&a_re, &comp_re, &b_re, CAP).unwrap();
            assert_eq!(lhs.data, rhs.family.data, "pi commutes with reindexing on the nose");
        }
    }
}

#[test]
fn pi_structure_square_is_a_pullback() {
    let cat = arrow_cat();
    let small = build_universe(&cat, 1, CAP).unwrap();
    // bound 1 is closed under pi, so the same universe receives the former
    let st = pi_structure(&small, &small, CAP).unwrap();
    assert_eq!(
        small.pi.compose(&st.lam_map).unwrap(),
        st.pi_map.compose(&st.proj).unwrap(),
        "the square commutes"
    );
    let pb = pullback(&st.pi_map, &small.pi).unwrap();
    let gap = pb.gap(&st.proj, &st.lam_map).unwrap();
    assert_eq!(st.u_lam.cards(), pb.psh.cards());
    for c in cat.objects() {
        let mut img: Vec<usize> = (0..st.u_lam.card(c)).map(|i| gap.apply(c, i)).collect();
        img.sort_unstable();
        img.dedup();
        assert_eq!(img.len(), st.u_lam.card(c));
    }
}

#[test]
fn pi_structure_over_the_point_with_a_larger_target() {
    let cat = terminal_cat();
    let small = build_universe(&cat, 2, CAP).unwrap();
    let large = build_universe(&cat, 4, 65536).unwrap();
    let st = pi_structure(&small, &large, 65536).unwrap();
    // |UPi(*)| = sum over codes A of the number of bound-2 families over
    // the fiber of A: sizes 0..2 give 1 + 4 + 16 per carrier layout
    let expected: usize = small.codes[0]
        .iter()
        .map(|code| 4usize.pow(code.carrier(ObjId(0), 0).len() as u32))
        .sum();
    assert_eq!(st.u_pi.card(ObjId(0)), expected);
    assert_eq!(
        large.pi.compose(&st.lam_map).unwrap(),
        st.pi_map.compose(&st.proj).unwrap()
    );
}

#[test]
fn sections_enumerate_with_boundary_pins() {
    let cat = arrow_cat();
    let gamma = FinPresheaf::new(cat.clone(), vec![1, 1], vec![vec![0], vec![0], vec![0]]).unwrap();
    let fam = FamilyData::constant(&gamma, 3);
    let all = enumerate_sections(&gamma, &fam, None, CAP).unwrap();
    // a section picks one value at stage 1; the stage-0 value is forced
    assert_eq!(all.len(), 3);
    // pin the stage-0 cell to 1: still 1 possibility at stage 1 (the same
    // value, by naturality along the arrow)
    let pinned = vec![vec![Some(1)], vec![None]];
    let some = enumerate_sections(&gamma, &fam, Some(&pinned), CAP).unwrap();
    assert_eq!(some.len(), 1);
    assert!(some.iter().all(|s| is_section(&gamma, &fam, s)));
}

#[test]
fn product_and_exponential_cross_check_for_sections() {
    // |sections of constant family| over a product equals the cardinality
    // of natural maps into the constant presheaf
    let cat = arrow_cat();
    let x = FinPresheaf::new(cat.clone(), vec![2, 1], vec![vec![0, 1], vec![0], vec![0]]).unwrap();
    let y = FinPresheaf::new(cat.clone(), vec![1, 2], vec![vec![0], vec![0, 1], vec![0, 0]]).unwrap();
    let p = product(&x, &y).unwrap();
    let fam = FamilyData::constant(&p.psh, 2);
    let secs = enumerate_sections(&p.psh, &fam, None, CAP).unwrap();
    let two = set_over(&cat, 2);
    let nats = crate::presheaf::nat_transformations(&p.psh, &two, CAP).unwrap();
    assert_eq!(secs.len(), nats.len());
}

fn set_over(cat: &Arc<FinCat>, n: usize) -> Arc<FinPresheaf> {
    // the constant presheaf with n elements
    FinPresheaf::new(
        cat.clone(),
        vec![n; cat.n_objects()],
        cat.mors().map(|_| (0..n).collect()).collect(),
    )
    .unwrap()
}

#[test]
fn universe_build_respects_the_cap() {
    let cat = arrow_cat();
    assert!(matches!(
        build_universe(&cat, 2, 6),
        Err(crate::presheaf::PshError::SizeLimit { .. })
    ));
}

#[test]
fn brute_force_code_search_classifies_small_maps() {
    // search the enumerated families for one whose comprehension is
    // isomorphic over the base to a given small-fiber map
    let cat = arrow_cat();
    let gamma = FinPresheaf::new(cat.clone(), vec![2, 1], vec![vec![0, 1], vec![0], vec![0]]).unwrap();
    let e = FinPresheaf::new(cat.clone(), vec![3, 2], vec![vec![0, 1, 2], vec![0, 1], vec![0, 1]]).unwrap();
    let p = PresheafMap::new(e.clone(), gamma.clone(), vec![vec![0, 0, 1], vec![0, 0]]).unwrap();

    let mut found = 0usize;
    for data in enumerate_families(&gamma, 2, 65536).unwrap() {
        let fam = Family::new(gamma.clone(), data).unwrap();
        let comp = comprehension(&fam).unwrap();
        if comp.total.cards() != e.cards() {
            continue;
        }
        // look for a natural stagewise bijection commuting with the
        // projections
        let candidates =
            crate::presheaf::nat_transformations(&comp.total, &e, 65536).unwrap();
        let witness = candidates.into_iter().any(|iso| {
            let bijective = cat.objects().all(|c| {
                let mut img: Vec<usize> =
                    (0..comp.total.card(c)).map(|i| iso.apply(c, i)).collect();
                img.sort_unstable();
                img.dedup();
                img.len() == e.card(c)
            });
            bijective && p.compose(&iso).unwrap() == comp.proj
        });
        if witness {
            found += 1;
        }
    }
    assert!(found > 0, "some bounded code family classifies the map");
}
