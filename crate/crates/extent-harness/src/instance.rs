//! Randomized instance generation: contexts, substitutions, families,
//! boundary sections and the optional total-section data.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use extent_core::extension::{interpret_shape, ExtInput, SemShape};
use extent_core::presheaf::{
    nat_tables, product, yoneda, FinCat, FinPresheaf, ObjId, PresheafMap, PshError,
};
use extent_core::universe::{
    enumerate_sections, is_section, FamilyData, Section, Value,
};

use crate::config::InstanceSpec;
use crate::HarnessError;

/// One test case for the stability suite.
pub struct SplitInstance {
    pub seed: u64,
    pub spec: InstanceSpec,
    pub shape: Arc<SemShape>,
    pub gamma: Arc<FinPresheaf>,
    pub delta: Arc<FinPresheaf>,
    pub sigma: PresheafMap,
    pub input: ExtInput,
    /// a total section agreeing with the boundary, when one exists
    pub total_section: Option<Section>,
    /// a point of the upper shape over the context, when one exists
    pub point_psi: Option<PresheafMap>,
    /// a point of the lower shape (as a point of the upper), when one exists
    pub point_phi: Option<PresheafMap>,
}

const RESAMPLE_LIMIT: usize = 1000;

/// A presheaf presented as a sum of representables (plus optionally the
/// terminal), small enough for the suite.
pub(crate) fn random_context(
    cat: &Arc<FinCat>,
    rng: &mut ChaCha8Rng,
    max_per_stage: usize,
) -> (Arc<FinPresheaf>, Vec<Option<ObjId>>) {
    // summands: None = terminal, Some(c) = representable at c
    let choices: Vec<Option<ObjId>> = {
        let mut v = vec![None];
        for c in cat.objects() {
            v.push(Some(c));
        }
        v
    };
    loop {
        let n = rng.random_range(1..=2usize);
        let summands: Vec<Option<ObjId>> = (0..n)
            .map(|_| choices[rng.random_range(0..choices.len())])
            .collect();
        let yons: Vec<_> = cat.objects().map(|c| yoneda(cat, c)).collect();
        let card_of = |s: &Option<ObjId>, d: ObjId| -> usize {
            match s {
                None => 1,
                Some(c) => yons[c.0].psh.card(d),
            }
        };
        let card: Vec<usize> = cat
            .objects()
            .map(|d| summands.iter().map(|s| card_of(s, d)).sum())
            .collect();
        if card.iter().any(|&c| c > max_per_stage) || card.iter().all(|&c| c == 0) {
            continue;
        }
        let restrict: Vec<Vec<usize>> = cat
            .mors()
            .map(|f| {
                let (a, b) = (cat.src(f), cat.dst(f));
                let mut tab = Vec::new();
                for (i, s) in summands.iter().enumerate() {
                    let off_a: usize = summands[..i].iter().map(|t| card_of(t, a)).sum();
                    for x in 0..card_of(s, b) {
                        let moved = match s {
                            None => 0,
                            Some(_) => {
                                let y = &yons[s.unwrap().0];
                                let m = y.homs[b.0][x];
                                let mf = cat.comp(m, f);
                                y.homs[a.0].iter().position(|&h| h == mf).unwrap()
                            }
                        };
                        tab.push(off_a + moved);
                    }
                }
                tab
            })
            .collect();
        let psh = FinPresheaf::new(cat.clone(), card, restrict).expect("sum of representables");
        return (psh, summands);
    }
}

/// A natural map out of a sum of representables: the image of each
/// representable summand is an element of the target (Yoneda), that of a
/// terminal summand a global section, all chosen at random.
pub(crate) fn random_map_from_sum(
    cat: &Arc<FinCat>,
    dom: &Arc<FinPresheaf>,
    summands: &[Option<ObjId>],
    target: &Arc<FinPresheaf>,
    rng: &mut ChaCha8Rng,
) -> Option<PresheafMap> {
    enum Pick {
        Repr(ObjId, usize),
        Global(Vec<usize>),
    }
    let yons: Vec<_> = cat.objects().map(|c| yoneda(cat, c)).collect();
    let one = extent_core::presheaf::terminal_psh(cat);
    let mut picks = Vec::new();
    for s in summands {
        match s {
            Some(c) => {
                if target.card(*c) == 0 {
                    return None;
                }
                picks.push(Pick::Repr(*c, rng.random_range(0..target.card(*c))));
            }
            None => {
                let secs = nat_tables(&one, target, 4096).ok()?;
                if secs.is_empty() {
                    return None;
                }
                let pick = rng.random_range(0..secs.len());
                picks.push(Pick::Global(secs[pick].iter().map(|row| row[0]).collect()));
            }
        }
    }
    let comp: Vec<Vec<usize>> = cat
        .objects()
        .map(|d| {
            let mut row = Vec::new();
            for pick in &picks {
                match pick {
                    Pick::Repr(c, x) => {
                        for &h in &yons[c.0].homs[d.0] {
                            row.push(target.restrict(h, *x));
                        }
                    }
                    Pick::Global(tab) => row.push(tab[d.0]),
                }
            }
            row
        })
        .collect();
    PresheafMap::new(dom.clone(), target.clone(), comp).ok()
}

/// A random bounded family over a presheaf, by rejection sampling.
pub(crate) fn random_family(
    base: &Arc<FinPresheaf>,
    bound: usize,
    rng: &mut ChaCha8Rng,
) -> Result<FamilyData, HarnessError> {
    let cat = base.cat().clone();
    let gens: Vec<_> = cat.generators();
    for _ in 0..RESAMPLE_LIMIT {
        // carriers: biased toward nonempty
        let carriers: Vec<Vec<Vec<Value>>> = cat
            .objects()
            .map(|c| {
                (0..base.card(c))
                    .map(|_| {
                        let mut s: Vec<Value> = (0..bound as u16)
                            .filter(|_| rng.random_range(0..10) < 7)
                            .collect();
                        if s.is_empty() && rng.random_range(0..10) < 8 {
                            s.push(rng.random_range(0..bound as u16));
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        // generator transports at random; everything else by factorization
        let words = {
            // reuse the enumeration order: transport along a word of
            // generators
            let mut words = std::collections::HashMap::new();
            for o in cat.objects() {
                words.insert(cat.identity(o), Vec::new());
            }
            loop {
                let mut grew = false;
                let known: Vec<(extent_core::presheaf::MorId, Vec<extent_core::presheaf::MorId>)> =
                    words.iter().map(|(m, w)| (*m, w.clone())).collect();
                for (m, w) in known {
                    for &g in &gens {
                        if cat.dst(g) == cat.src(m) {
                            let mg = cat.comp(m, g);
                            words.entry(mg).or_insert_with(|| {
                                grew = true;
                                let mut w2 = w.clone();
                                w2.push(g);
                                w2
                            });
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            words
        };
        let mut gen_maps: std::collections::HashMap<(usize, usize, usize), Vec<Value>> =
            std::collections::HashMap::new();
        let mut ok = true;
        'outer: for c in cat.objects() {
            for w in 0..base.card(c) {
                for &g in &gens {
                    if cat.dst(g) != c {
                        continue;
                    }
                    let src = &carriers[c.0][w];
                    let dst = &carriers[cat.src(g).0][base.restrict(g, w)];
                    if !src.is_empty() && dst.is_empty() {
                        ok = false;
                        break 'outer;
                    }
                    let tab: Vec<Value> = src
                        .iter()
                        .map(|_| dst[rng.random_range(0..dst.len().max(1))])
                        .collect();
                    gen_maps.insert((c.0, w, g.0), tab);
                }
            }
        }
        if !ok {
            continue;
        }
        // complete along factorizations
        let transport = |mut c: ObjId, mut w: usize, mut v: Value, word: &[extent_core::presheaf::MorId]| -> Option<Value> {
            for &g in word {
                let tab = gen_maps.get(&(c.0, w, g.0))?;
                let p = carriers[c.0][w].binary_search(&v).ok()?;
                v = tab[p];
                w = base.restrict(g, w);
                c = cat.src(g);
            }
            Some(v)
        };
        let maps: Option<Vec<Vec<Vec<Vec<Value>>>>> = cat
            .objects()
            .map(|c| {
                (0..base.card(c))
                    .map(|w| {
                        cat.into_obj(c)
                            .iter()
                            .map(|&f| {
                                carriers[c.0][w]
                                    .iter()
                                    .map(|&v| transport(c, w, v, &words[&f]))
                                    .collect::<Option<Vec<_>>>()
                            })
                            .collect::<Option<Vec<_>>>()
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>();
        let Some(maps) = maps else { continue };
        if let Ok(fam) = FamilyData::new(base, carriers, maps) {
            return Ok(fam);
        }
    }
    Err(HarnessError::Resample("bounded family".into()))
}

pub fn gen_instance(seed: u64, spec: InstanceSpec, cap: usize) -> Result<SplitInstance, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = Arc::new(
        interpret_shape(spec.base, &spec.shape.inclusion()).map_err(HarnessError::Ext)?,
    );
    let cat = shape.cube_psh.cat().clone();

    for _attempt in 0..RESAMPLE_LIMIT {
        let (gamma, _) = random_context(&cat, &mut rng, spec.gamma_max);
        let (delta, d_summands) = random_context(&cat, &mut rng, spec.gamma_max);
        let Some(sigma) = random_map_from_sum(&cat, &delta, &d_summands, &gamma, &mut rng) else {
            continue;
        };
        let gxpsi = product(&gamma, &shape.psi.psh).map_err(HarnessError::Psh)?;
        let family = random_family(&gxpsi.psh, spec.bound, &mut rng)?;
        // boundary: a random section over the lower part
        let gxphi = product(&gamma, &shape.phi.psh).map_err(HarnessError::Psh)?;
        let incl = gxphi
            .map_into(&gxpsi, &PresheafMap::identity(&gamma), &shape.incl)
            .map_err(HarnessError::Psh)?;
        let on_phi = family.reindex(&incl);
        let bsections =
            enumerate_sections(&gxphi.psh, &on_phi, None, cap).map_err(HarnessError::Psh)?;
        if bsections.is_empty() {
            continue;
        }
        let boundary = bsections[rng.random_range(0..bsections.len())].clone();
        let input = ExtInput::new(shape.clone(), gamma.clone(), family.clone(), boundary.clone())
            .map_err(HarnessError::Ext)?;

        // optional total section
        let pinned: Vec<Vec<Option<Value>>> = pins(&shape, &gxpsi, &gxphi, &boundary);
        let totals = enumerate_sections(&gxpsi.psh, &family, Some(&pinned), cap)
            .map_err(HarnessError::Psh)?;
        let total_section = if totals.is_empty() {
            None
        } else {
            Some(totals[rng.random_range(0..totals.len())].clone())
        };

        // optional shape points over the context
        let psi_points = nat_tables(&gamma, &shape.psi.psh, cap).map_err(HarnessError::Psh)?;
        let point_psi = if psi_points.is_empty() {
            None
        } else {
            let t = &psi_points[rng.random_range(0..psi_points.len())];
            Some(
                PresheafMap::new(gamma.clone(), shape.psi.psh.clone(), t.clone())
                    .map_err(HarnessError::Psh)?,
            )
        };
        let phi_points = nat_tables(&gamma, &shape.phi.psh, cap).map_err(HarnessError::Psh)?;
        let point_phi = if phi_points.is_empty() {
            None
        } else {
            let t = &phi_points[rng.random_range(0..phi_points.len())];
            let as_phi = PresheafMap::new(gamma.clone(), shape.phi.psh.clone(), t.clone())
                .map_err(HarnessError::Psh)?;
            Some(shape.incl.compose(&as_phi).map_err(HarnessError::Psh)?)
        };

        let inst = SplitInstance {
            seed,
            spec,
            shape,
            gamma,
            delta,
            sigma,
            input,
            total_section,
            point_psi,
            point_phi,
        };
        inst.validate().map_err(HarnessError::Psh)?;
        return Ok(inst);
    }
    Err(HarnessError::Resample(format!(
        "no valid instance after {RESAMPLE_LIMIT} attempts (seed {seed})"
    )))
}

/// Boundary pins for total-section enumeration over the whole context.
fn pins(
    shape: &SemShape,
    gxpsi: &extent_core::presheaf::Product,
    gxphi: &extent_core::presheaf::Product,
    boundary: &Section,
) -> Vec<Vec<Option<Value>>> {
    let cat = gxpsi.psh.cat().clone();
    cat.objects()
        .map(|c| {
            (0..gxpsi.psh.card(c))
                .map(|p| {
                    let (g, spsi) = gxpsi.split(c, p);
                    let ambient = shape.psi.elems[c.0][spsi];
                    let local = shape.phi.index_of(c, ambient)?;
                    Some(boundary[c.0][gxphi.pair_index(c, g, local)])
                })
                .collect()
        })
        .collect()
}

impl SplitInstance {
    /// Re-validates every component (the constructors have already done
    /// this once; the suite asserts it independently).
    pub fn validate(&self) -> Result<(), PshError> {
        self.input.family.data.validate(&self.input.gxpsi.psh)?;
        let on_phi = self.input.family.data.reindex(&self.input.incl);
        if !is_section(&self.input.gxphi.psh, &on_phi, &self.input.boundary) {
            return Err(PshError::Malformed("boundary is not a section".into()));
        }
        if let Some(b) = &self.total_section {
            if !is_section(&self.input.gxpsi.psh, &self.input.family.data, b) {
                return Err(PshError::Malformed("total section invalid".into()));
            }
            let restricted = extent_core::universe::section_reindex(b, &self.input.incl);
            if restricted != self.input.boundary {
                return Err(PshError::Malformed("total section has wrong boundary".into()));
            }
        }
        Ok(())
    }
}
