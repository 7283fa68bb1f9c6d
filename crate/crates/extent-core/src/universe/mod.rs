//! The canonically split universe.
//!
//! A universe element over a stage `c` is a bounded family of codes on the
//! representable at `c`; the universe presheaf acts by precomposition, so
//! its functor laws are literal table equalities. Comprehension computes
//! the distinguished square of a family as a function of its code tables,
//! a computable chooser standing in for the global choice of pullbacks,
//! and reindexing composes tables on the nose. That is the whole splitting:
//! nothing here is chosen per instance, so nothing needs to be coherent.

mod enumerate;
mod family;

pub use enumerate::enumerate_families;
pub use family::{
    enumerate_sections, is_section, section_reindex, FamilyData, Section, Value,
};

use std::collections::HashMap;
use std::sync::Arc;

use crate::presheaf::{yoneda, FinCat, FinPresheaf, ObjId, PresheafMap, PshError, Yoneda};

/// A family over a context presheaf: the data of a map `Gamma -> U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub total: Arc<FinPresheaf>,
    pub data: FamilyData,
}

impl Family {
    pub fn new(total: Arc<FinPresheaf>, data: FamilyData) -> Result<Self, PshError> {
        data.validate(&total)?;
        Ok(Family { total, data })
    }

    pub fn constant(total: &Arc<FinPresheaf>, size: usize) -> Family {
        Family {
            total: total.clone(),
            data: FamilyData::constant(total, size),
        }
    }

    /// Reindexing along `sigma : Delta -> Gamma` is composition of tables.
    pub fn reindex(&self, sigma: &PresheafMap) -> Family {
        Family {
            total: sigma.dom().clone(),
            data: self.data.reindex(sigma),
        }
    }

    /// The code of the element `w` of `Gamma(c)`, as a family over `y(c)`.
    pub fn code_at(&self, yon: &Yoneda, w: usize) -> FamilyData {
        self.data.code_at(&self.total, yon, w)
    }
}

/// The comprehension of a family: carrier at `c` is the canonical pair set
/// `{(w, x) | w in Gamma(c), x in carrier(c, w)}` in lexicographic order.
pub struct Comprehension {
    pub total: Arc<FinPresheaf>,
    pub proj: PresheafMap,
    /// per object: the pairs, in order
    pub pairs: Vec<Vec<(usize, Value)>>,
}

impl Comprehension {
    pub fn pair_index(&self, o: ObjId, w: usize, x: Value) -> Option<usize> {
        self.pairs[o.0].binary_search(&(w, x)).ok()
    }
}

pub fn comprehension(family: &Family) -> Result<Comprehension, PshError> {
    let gamma = &family.total;
    let cat = gamma.cat().clone();
    let pairs: Vec<Vec<(usize, Value)>> = cat
        .objects()
        .map(|c| {
            let mut v = Vec::new();
            for w in 0..gamma.card(c) {
                for &x in family.data.carrier(c, w) {
                    v.push((w, x));
                }
            }
            v
        })
        .collect();
    let card: Vec<usize> = pairs.iter().map(|p| p.len()).collect();
    let restrict = cat
        .mors()
        .map(|f| {
            let (a, b) = (cat.src(f), cat.dst(f));
            pairs[b.0]
                .iter()
                .map(|&(w, x)| {
                    let wf = gamma.restrict(f, w);
                    let xf = family.data.transport(gamma, f, b, w, x);
                    pairs[a.0]
                        .binary_search(&(wf, xf))
                        .expect("comprehension closed under restriction")
                })
                .collect()
        })
        .collect();
    let total = FinPresheaf::new(cat.clone(), card, restrict)?;
    let proj = PresheafMap::new(
        total.clone(),
        gamma.clone(),
        cat.objects()
            .map(|c| pairs[c.0].iter().map(|&(w, _)| w).collect())
            .collect(),
    )?;
    Ok(Comprehension {
        total,
        proj,
        pairs,
    })
}

/// The cartesian lift of `sigma` through two comprehensions: the map
/// `Delta.(A after sigma) -> Gamma.A`, `(d, x) |-> (sigma d, x)`.
pub fn comprehension_lift(
    sigma: &PresheafMap,
    reindexed: &Comprehension,
    original: &Comprehension,
) -> Result<PresheafMap, PshError> {
    let cat = sigma.dom().cat().clone();
    let comp = cat
        .objects()
        .map(|c| {
            reindexed.pairs[c.0]
                .iter()
                .map(|&(d, x)| {
                    original
                        .pair_index(c, sigma.apply(c, d), x)
                        .ok_or(PshError::NotInPullback)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    PresheafMap::new(reindexed.total.clone(), original.total.clone(), comp)
}

/// The materialized universe at one bound: all codes per stage, the total
/// presheaf of pointed codes, and the projection between them.
pub struct UniverseTables {
    pub bound: usize,
    pub yons: Vec<Yoneda>,
    /// per object: every bounded code, canonically sorted
    pub codes: Vec<Vec<FamilyData>>,
    pub u: Arc<FinPresheaf>,
    /// per object: the (code index, point) pairs in order
    pub points: Vec<Vec<(usize, Value)>>,
    pub u_tilde: Arc<FinPresheaf>,
    pub pi: PresheafMap,
}

impl UniverseTables {
    pub fn code_index(&self, o: ObjId, code: &FamilyData) -> Option<usize> {
        self.codes[o.0].binary_search(code).ok()
    }

    pub fn point_index(&self, o: ObjId, code_idx: usize, x: Value) -> Option<usize> {
        self.points[o.0].binary_search(&(code_idx, x)).ok()
    }
}

/// Builds the universe tables over a base category. The carrier at `c`
/// enumerates every family of codes on `y(c)` with carriers inside
/// `{0..bound-1}`; restriction is reindexing along the Yoneda action.
pub fn build_universe(
    cat: &Arc<FinCat>,
    bound: usize,
    cap: usize,
) -> Result<UniverseTables, PshError> {
    let yons: Vec<Yoneda> = cat.objects().map(|c| yoneda(cat, c)).collect();
    let mut codes: Vec<Vec<FamilyData>> = Vec::new();
    for c in cat.objects() {
        let list = enumerate_families(&yons[c.0].psh, bound, cap)?;
        if list.len() > cap {
            return Err(PshError::SizeLimit {
                what: format!("universe carrier at {}", cat.object_name(c)),
                size: list.len(),
                cap,
            });
        }
        codes.push(list);
    }
    let card: Vec<usize> = codes.iter().map(|v| v.len()).collect();
    // restriction along g : c' -> c is precomposition with the Yoneda action
    let action = |g: crate::presheaf::MorId| -> PresheafMap {
        let c = cat.dst(g);
        let cp = cat.src(g);
        let idx = yons[c.0].index_of(cp, g);
        yons[cp.0].classify(idx, &yons[c.0].psh)
    };
    let restrict: Vec<Vec<usize>> = cat
        .mors()
        .map(|g| {
            let cp = cat.src(g);
            let c = cat.dst(g);
            let act = action(g);
            codes[c.0]
                .iter()
                .map(|code| {
                    let moved = code.reindex(&act);
                    codes[cp.0]
                        .binary_search(&moved)
                        .expect("universe closed under restriction")
                })
                .collect()
        })
        .collect();
    let u = FinPresheaf::new(cat.clone(), card, restrict)?;

    let points: Vec<Vec<(usize, Value)>> = cat
        .objects()
        .map(|c| {
            let id_idx = yons[c.0].index_of(c, cat.identity(c));
            let mut v = Vec::new();
            for (i, code) in codes[c.0].iter().enumerate() {
                for &x in code.carrier(c, id_idx) {
                    v.push((i, x));
                }
            }
            v
        })
        .collect();
    let tcard: Vec<usize> = points.iter().map(|v| v.len()).collect();
    let trestrict: Vec<Vec<usize>> = cat
        .mors()
        .map(|g| {
            let cp = cat.src(g);
            let c = cat.dst(g);
            let id_idx = yons[c.0].index_of(c, cat.identity(c));
            points[c.0]
                .iter()
                .map(|&(i, x)| {
                    let code = &codes[c.0][i];
                    let moved_idx = u.restrict(g, i);
                    let xv = code.transport(&yons[c.0].psh, g, c, id_idx, x);
                    points[cp.0]
                        .binary_search(&(moved_idx, xv))
                        .expect("pointed universe closed under restriction")
                })
                .collect()
        })
        .collect();
    let u_tilde = FinPresheaf::new(cat.clone(), tcard, trestrict)?;
    let pi = PresheafMap::new(
        u_tilde.clone(),
        u.clone(),
        cat.objects()
            .map(|c| points[c.0].iter().map(|&(i, _)| i).collect())
            .collect(),
    )?;
    Ok(UniverseTables {
        bound,
        yons,
        codes,
        u,
        points,
        u_tilde,
        pi,
    })
}

/// The classifying map `Gamma -> U` of a family, in universe tables.
pub fn family_to_map(
    family: &Family,
    tables: &UniverseTables,
) -> Result<PresheafMap, PshError> {
    let gamma = &family.total;
    let cat = gamma.cat().clone();
    let comp = cat
        .objects()
        .map(|c| {
            (0..gamma.card(c))
                .map(|w| {
                    let code = family.code_at(&tables.yons[c.0], w);
                    tables.code_index(c, &code).ok_or_else(|| {
                        PshError::SizeLimit {
                            what: "code exceeds the universe bound".into(),
                            size: code.max_fiber(),
                            cap: tables.bound,
                        }
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    PresheafMap::new(gamma.clone(), tables.u.clone(), comp)
}

/// The second projection of a distinguished square, `q_A : Gamma.A -> U~`,
/// in universe tables. Splitting means `q` composes on the nose with the
/// cartesian lifts.
pub fn q_map(
    family: &Family,
    compr: &Comprehension,
    tables: &UniverseTables,
) -> Result<PresheafMap, PshError> {
    let cat = family.total.cat().clone();
    let comp = cat
        .objects()
        .map(|c| {
            compr.pairs[c.0]
                .iter()
                .map(|&(w, x)| {
                    let code = family.code_at(&tables.yons[c.0], w);
                    let ci = tables
                        .code_index(c, &code)
                        .ok_or(PshError::NotInPullback)?;
                    tables.point_index(c, ci, x).ok_or(PshError::NotInPullback)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    PresheafMap::new(compr.total.clone(), tables.u_tilde.clone(), comp)
}

/// The dependent-product former on families: given `A : Gamma -> U` and
/// `B : Gamma.A -> U`, the family `Pi(A,B) : Gamma -> U` whose fiber at an
/// element is the canonically numbered set of dependent sections.
pub struct PiFamily {
    pub family: Family,
    /// per (object, element of Gamma): the dependent sections, in order
    pub sections: Vec<Vec<Vec<Section>>>,
}

pub fn pi_family(
    a: &Family,
    comp_a: &Comprehension,
    b: &Family,
    cap: usize,
) -> Result<PiFamily, PshError> {
    if b.total != comp_a.total {
        return Err(PshError::BaseMismatch);
    }
    let gamma = &a.total;
    let cat = gamma.cat().clone();
    let yons: Vec<Yoneda> = cat.objects().map(|c| yoneda(&cat, c)).collect();

    // per stage element: the base of dependent sections and its B-family
    let mut stage_secs: Vec<Vec<Vec<Section>>> = Vec::new();
    let mut stage_bases: Vec<Vec<Comprehension>> = Vec::new();
    for c in cat.objects() {
        let mut secs_row = Vec::new();
        let mut base_row = Vec::new();
        for w in 0..gamma.card(c) {
            let code = a.code_at(&yons[c.0], w);
            let fam_c = Family::new(yons[c.0].psh.clone(), code)?;
            let comp_c = comprehension(&fam_c)?;
            // map comp_c -> Gamma.A over the classifying map of w
            let to_global = {
                let comp_tables = cat
                    .objects()
                    .map(|d| {
                        comp_c.pairs[d.0]
                            .iter()
                            .map(|&(h_idx, x)| {
                                let h = yons[c.0].homs[d.0][h_idx];
                                let wh = gamma.restrict(h, w);
                                comp_a
                                    .pair_index(d, wh, x)
                                    .ok_or(PshError::NotInPullback)
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                PresheafMap::new(comp_c.total.clone(), comp_a.total.clone(), comp_tables)?
            };
            let b_local = b.data.reindex(&to_global);
            let secs = enumerate_sections(&comp_c.total, &b_local, None, cap)?;
            secs_row.push(secs);
            base_row.push(comp_c);
        }
        stage_secs.push(secs_row);
        stage_bases.push(base_row);
    }

    // index maps for restriction lookup
    let index: Vec<Vec<HashMap<&Section, usize>>> = stage_secs
        .iter()
        .map(|row| {
            row.iter()
                .map(|secs| secs.iter().enumerate().map(|(i, s)| (s, i)).collect())
                .collect()
        })
        .collect();

    let carriers: Vec<Vec<Vec<Value>>> = cat
        .objects()
        .map(|c| {
            (0..gamma.card(c))
                .map(|w| (0..stage_secs[c.0][w].len() as u16).collect())
                .collect()
        })
        .collect();
    let maps: Vec<Vec<Vec<Vec<Value>>>> = cat
        .objects()
        .map(|c| {
            (0..gamma.card(c))
                .map(|w| {
                    cat.into_obj(c)
                        .iter()
                        .map(|&u| {
                            let d = cat.src(u);
                            let wu = gamma.restrict(u, w);
                            stage_secs[c.0][w]
                                .iter()
                                .map(|s| {
                                    // restrict the section: value at
                                    // (e, (h', x)) is s at (e, (u.h', x))
                                    let restricted: Section = cat
                                        .objects()
                                        .map(|e| {
                                            stage_bases[d.0][wu].pairs[e.0]
                                                .iter()
                                                .map(|&(hp_idx, x)| {
                                                    let hp = yons[d.0].homs[e.0][hp_idx];
                                                    let uh = cat.comp(u, hp);
                                                    let uh_idx = yons[c.0].index_of(e, uh);
                                                    let p = stage_bases[c.0][w]
                                                        .pair_index(e, uh_idx, x)
                                                        .expect("restricted pair");
                                                    s[e.0][p]
                                                })
                                                .collect()
                                        })
                                        .collect();
                                    index[d.0][wu][&restricted] as Value
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let data = FamilyData::new(gamma, carriers, maps)?;
    Ok(PiFamily {
        family: Family {
            total: gamma.clone(),
            data,
        },
        sections: stage_secs,
    })
}

/// The materialized generic contexts for the dependent-product former: the
/// stage `c` of `u_pi` holds the pairs (code, dependent code), the stage of
/// `u_lam` additionally a dependent section, and the former/lambda maps land
/// in a universe `large` big enough to hold the section counts. The square
/// (lam, pi_map) over (proj, large.pi) is a pullback.
pub struct PiStructure {
    pub u_pi: Arc<FinPresheaf>,
    pub u_lam: Arc<FinPresheaf>,
    pub proj: PresheafMap,
    pub pi_map: PresheafMap,
    pub lam_map: PresheafMap,
}

pub fn pi_structure(
    small: &UniverseTables,
    large: &UniverseTables,
    cap: usize,
) -> Result<PiStructure, PshError> {
    let cat = small.u.cat().clone();
    // stage data: (code index, dependent family), then with a section index
    let mut pi_elems: Vec<Vec<(usize, FamilyData)>> = Vec::new();
    let mut pi_codes: Vec<Vec<FamilyData>> = Vec::new();
    let mut pi_secs: Vec<Vec<Vec<Section>>> = Vec::new();
    for c in cat.objects() {
        let mut row = Vec::new();
        for (ai, a_code) in small.codes[c.0].iter().enumerate() {
            let fam_a = Family::new(small.yons[c.0].psh.clone(), a_code.clone())?;
            let comp_a = comprehension(&fam_a)?;
            for b in enumerate_families(&comp_a.total, small.bound, cap)? {
                row.push((ai, b));
            }
        }
        row.sort();
        if row.len() > cap {
            return Err(PshError::SizeLimit {
                what: format!("pi generic context at {}", cat.object_name(c)),
                size: row.len(),
                cap,
            });
        }
        // the pi code and its section decode, per element
        let mut codes_row = Vec::new();
        let mut secs_row = Vec::new();
        for (ai, b) in &row {
            let fam_a = Family::new(small.yons[c.0].psh.clone(), small.codes[c.0][*ai].clone())?;
            let comp_a = comprehension(&fam_a)?;
            let fam_b = Family::new(comp_a.total.clone(), b.clone())?;
            let pf = pi_family(&fam_a, &comp_a, &fam_b, cap)?;
            let id_idx = small.yons[c.0].index_of(c, cat.identity(c));
            secs_row.push(pf.sections[c.0][id_idx].clone());
            codes_row.push(pf.family.code_at(&small.yons[c.0], id_idx));
        }
        pi_codes.push(codes_row);
        pi_secs.push(secs_row);
        pi_elems.push(row);
    }

    let card: Vec<usize> = pi_elems.iter().map(|v| v.len()).collect();
    let restrict: Vec<Vec<usize>> = cat
        .mors()
        .map(|g| {
            let (cp, c) = (cat.src(g), cat.dst(g));
            pi_elems[c.0]
                .iter()
                .map(|(ai, b)| {
                    let aip = small.u.restrict(g, *ai);
                    // move the dependent family along the lift of the
                    // Yoneda action through the comprehensions
                    let fam_a =
                        Family::new(small.yons[c.0].psh.clone(), small.codes[c.0][*ai].clone())
                            .expect("code family");
                    let comp_a = comprehension(&fam_a).expect("comprehension");
                    let fam_ap =
                        Family::new(small.yons[cp.0].psh.clone(), small.codes[cp.0][aip].clone())
                            .expect("code family");
                    let comp_ap = comprehension(&fam_ap).expect("comprehension");
                    let idx = small.yons[c.0].index_of(cp, g);
                    let act = small.yons[cp.0].classify(idx, &small.yons[c.0].psh);
                    let lift = comprehension_lift(&act, &comp_ap, &comp_a).expect("lift");
                    let bp = b.reindex(&lift);
                    pi_elems[cp.0]
                        .binary_search_by(|probe| probe.cmp(&(aip, bp.clone())))
                        .expect("pi context closed under restriction")
                })
                .collect()
        })
        .collect();
    let u_pi = FinPresheaf::new(cat.clone(), card, restrict)?;
    let pi_map = PresheafMap::new(
        u_pi.clone(),
        large.u.clone(),
        cat.objects()
            .map(|c| {
                pi_codes[c.0]
                    .iter()
                    .map(|code| {
                        large
                            .code_index(c, code)
                            .ok_or(PshError::NotInPullback)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?,
    )?;

    // the lambda context: a pi element together with a dependent section
    let lam_elems: Vec<Vec<(usize, usize)>> = cat
        .objects()
        .map(|c| {
            let mut v = Vec::new();
            for (i, secs) in pi_secs[c.0].iter().enumerate() {
                for s in 0..secs.len() {
                    v.push((i, s));
                }
            }
            v
        })
        .collect();
    let lcard: Vec<usize> = lam_elems.iter().map(|v| v.len()).collect();
    let lrestrict: Vec<Vec<usize>> = cat
        .mors()
        .map(|g| {
            let (cp, c) = (cat.src(g), cat.dst(g));
            lam_elems[c.0]
                .iter()
                .map(|&(i, s)| {
                    let ip = u_pi.restrict(g, i);
                    // transport the section: the pi code transports points
                    let id_idx = small.yons[c.0].index_of(c, cat.identity(c));
                    let sv = pi_codes[c.0][i].transport(
                        &small.yons[c.0].psh,
                        g,
                        c,
                        id_idx,
                        s as Value,
                    );
                    lam_elems[cp.0]
                        .binary_search(&(ip, sv as usize))
                        .expect("lambda context closed under restriction")
                })
                .collect()
        })
        .collect();
    let u_lam = FinPresheaf::new(cat.clone(), lcard, lrestrict)?;
    let proj = PresheafMap::new(
        u_lam.clone(),
        u_pi.clone(),
        cat.objects()
            .map(|c| lam_elems[c.0].iter().map(|&(i, _)| i).collect())
            .collect(),
    )?;
    let lam_map = PresheafMap::new(
        u_lam.clone(),
        large.u_tilde.clone(),
        cat.objects()
            .map(|c| {
                lam_elems[c.0]
                    .iter()
                    .map(|&(i, s)| {
                        let ci = pi_map.apply(c, i);
                        large
                            .point_index(c, ci, s as Value)
                            .ok_or(PshError::NotInPullback)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?,
    )?;
    Ok(PiStructure {
        u_pi,
        u_lam,
        proj,
        pi_map,
        lam_map,
    })
}

#[cfg(test)]
mod tests;
