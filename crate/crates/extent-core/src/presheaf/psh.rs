//! Finite presheaves and natural transformations, as tables.

use std::sync::Arc;

use super::cat::{FinCat, MorId, ObjId};
use super::PshError;

/// A finite-set-valued presheaf over a finite category. Carriers are the
/// initial segments `0..card[c]`; restriction along `f : a -> b` is a table
/// `X(b) -> X(a)`. Functoriality is verified at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPresheaf {
    cat: Arc<FinCat>,
    card: Vec<usize>,
    restrict: Vec<Vec<usize>>,
}

impl FinPresheaf {
    pub fn new(
        cat: Arc<FinCat>,
        card: Vec<usize>,
        restrict: Vec<Vec<usize>>,
    ) -> Result<Arc<Self>, PshError> {
        let psh = FinPresheaf { cat, card, restrict };
        psh.validate()?;
        Ok(Arc::new(psh))
    }

    fn validate(&self) -> Result<(), PshError> {
        let cat = &self.cat;
        if self.card.len() != cat.n_objects() || self.restrict.len() != cat.n_mors() {
            return Err(PshError::Malformed("presheaf table sizes".into()));
        }
        for m in cat.mors() {
            let tab = &self.restrict[m.0];
            if tab.len() != self.card[cat.dst(m).0] {
                return Err(PshError::Malformed(format!(
                    "restriction table along {} has wrong length",
                    cat.mor(m).name
                )));
            }
            if tab.iter().any(|&v| v >= self.card[cat.src(m).0]) {
                return Err(PshError::Malformed(format!(
                    "restriction along {} out of range",
                    cat.mor(m).name
                )));
            }
        }
        for o in cat.objects() {
            let id = cat.identity(o);
            if !self.restrict[id.0].iter().enumerate().all(|(i, &v)| i == v) {
                return Err(PshError::Malformed(format!(
                    "restriction along identity of {} is not the identity",
                    cat.object_name(o)
                )));
            }
        }
        // X(g.f) = X(f) . X(g)
        for g in cat.mors() {
            for f in cat.mors() {
                if cat.dst(f) != cat.src(g) {
                    continue;
                }
                let gf = cat.comp(g, f);
                for x in 0..self.card[cat.dst(g).0] {
                    if self.restrict[gf.0][x] != self.restrict[f.0][self.restrict[g.0][x]] {
                        return Err(PshError::Malformed(format!(
                            "functoriality fails along {}.{}",
                            cat.mor(g).name,
                            cat.mor(f).name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn card(&self, o: ObjId) -> usize {
        self.card[o.0]
    }

    pub fn cards(&self) -> &[usize] {
        &self.card
    }

    pub fn total_card(&self) -> usize {
        self.card.iter().sum()
    }

    /// `x . f` for `x` in `X(dst f)`.
    pub fn restrict(&self, f: MorId, x: usize) -> usize {
        self.restrict[f.0][x]
    }

    pub fn elements(&self) -> impl Iterator<Item = (ObjId, usize)> + '_ {
        self.cat
            .objects()
            .flat_map(move |o| (0..self.card[o.0]).map(move |x| (o, x)))
    }
}

/// The terminal presheaf (all carriers singletons).
pub fn terminal_psh(cat: &Arc<FinCat>) -> Arc<FinPresheaf> {
    FinPresheaf::new(
        cat.clone(),
        vec![1; cat.n_objects()],
        cat.mors().map(|_| vec![0]).collect(),
    )
    .expect("terminal presheaf")
}

/// The empty presheaf.
pub fn empty_psh(cat: &Arc<FinCat>) -> Arc<FinPresheaf> {
    FinPresheaf::new(
        cat.clone(),
        vec![0; cat.n_objects()],
        cat.mors().map(|_| vec![]).collect(),
    )
    .expect("empty presheaf")
}

/// A natural transformation between presheaves over the same base, as
/// per-object tables. Naturality is verified at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafMap {
    dom: Arc<FinPresheaf>,
    cod: Arc<FinPresheaf>,
    comp: Vec<Vec<usize>>,
}

impl PresheafMap {
    pub fn new(
        dom: Arc<FinPresheaf>,
        cod: Arc<FinPresheaf>,
        comp: Vec<Vec<usize>>,
    ) -> Result<Self, PshError> {
        let map = PresheafMap { dom, cod, comp };
        map.validate()?;
        Ok(map)
    }

    fn validate(&self) -> Result<(), PshError> {
        if self.dom.cat() != self.cod.cat() {
            return Err(PshError::BaseMismatch);
        }
        let cat = self.dom.cat();
        if self.comp.len() != cat.n_objects() {
            return Err(PshError::Malformed("map component count".into()));
        }
        for o in cat.objects() {
            if self.comp[o.0].len() != self.dom.card(o) {
                return Err(PshError::Malformed(format!(
                    "component at {} has wrong length",
                    cat.object_name(o)
                )));
            }
            if self.comp[o.0].iter().any(|&v| v >= self.cod.card(o)) {
                return Err(PshError::Malformed(format!(
                    "component at {} out of range",
                    cat.object_name(o)
                )));
            }
        }
        for f in cat.mors() {
            let (a, b) = (cat.src(f), cat.dst(f));
            for x in 0..self.dom.card(b) {
                let lhs = self.cod.restrict(f, self.comp[b.0][x]);
                let rhs = self.comp[a.0][self.dom.restrict(f, x)];
                if lhs != rhs {
                    return Err(PshError::Malformed(format!(
                        "naturality fails along {} at element {x}",
                        cat.mor(f).name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dom(&self) -> &Arc<FinPresheaf> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinPresheaf> {
        &self.cod
    }

    pub fn apply(&self, o: ObjId, x: usize) -> usize {
        self.comp[o.0][x]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.comp
    }

    pub fn identity(psh: &Arc<FinPresheaf>) -> Self {
        PresheafMap {
            dom: psh.clone(),
            cod: psh.clone(),
            comp: psh.cards().iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &PresheafMap) -> Result<PresheafMap, PshError> {
        if other.cod != self.dom {
            return Err(PshError::BaseMismatch);
        }
        let comp = other
            .comp
            .iter()
            .enumerate()
            .map(|(o, tab)| tab.iter().map(|&x| self.comp[o][x]).collect())
            .collect();
        PresheafMap::new(other.dom.clone(), self.cod.clone(), comp)
    }

    /// The unique map to the terminal presheaf.
    pub fn to_terminal(psh: &Arc<FinPresheaf>, one: &Arc<FinPresheaf>) -> Self {
        PresheafMap {
            dom: psh.clone(),
            cod: one.clone(),
            comp: psh.cards().iter().map(|&n| vec![0; n]).collect(),
        }
    }
}

/// A representable presheaf, with its element decoding.
pub struct Yoneda {
    pub at: ObjId,
    pub psh: Arc<FinPresheaf>,
    /// per object `d`: the morphisms `d -> at`, in id order
    pub homs: Vec<Vec<MorId>>,
}

/// The representable presheaf `y(c)`: carrier at `d` is `hom(d, c)`.
pub fn yoneda(cat: &Arc<FinCat>, c: ObjId) -> Yoneda {
    let homs: Vec<Vec<MorId>> = cat.objects().map(|d| cat.hom(d, c)).collect();
    let card: Vec<usize> = homs.iter().map(|h| h.len()).collect();
    let restrict = cat
        .mors()
        .map(|f| {
            let (a, b) = (cat.src(f), cat.dst(f));
            homs[b.0]
                .iter()
                .map(|&g| {
                    let gf = cat.comp(g, f);
                    homs[a.0].iter().position(|&h| h == gf).expect("hom closed")
                })
                .collect()
        })
        .collect();
    Yoneda {
        at: c,
        psh: FinPresheaf::new(cat.clone(), card, restrict).expect("representable presheaf"),
        homs,
    }
}

impl Yoneda {
    pub fn index_of(&self, d: ObjId, m: MorId) -> usize {
        self.homs[d.0].iter().position(|&h| h == m).expect("hom element")
    }

    /// The map `y(c) -> X` classifying `x` in `X(c)` (Yoneda): `g |-> x.g`.
    pub fn classify(&self, x: usize, target: &Arc<FinPresheaf>) -> PresheafMap {
        let comp = target
            .cat()
            .objects()
            .map(|d| {
                self.homs[d.0]
                    .iter()
                    .map(|&g| target.restrict(g, x))
                    .collect()
            })
            .collect();
        PresheafMap::new(self.psh.clone(), target.clone(), comp).expect("yoneda map is natural")
    }
}

/// A binary product with projections and pair decoding.
pub struct Product {
    pub psh: Arc<FinPresheaf>,
    pub left: Arc<FinPresheaf>,
    pub right: Arc<FinPresheaf>,
    pub proj1: PresheafMap,
    pub proj2: PresheafMap,
}

impl Product {
    pub fn pair_index(&self, o: ObjId, x: usize, y: usize) -> usize {
        x * self.right.card(o) + y
    }

    pub fn split(&self, o: ObjId, p: usize) -> (usize, usize) {
        let ry = self.right.card(o);
        (p / ry, p % ry)
    }

    /// Pairing of two maps into the factors.
    pub fn pair(&self, f: &PresheafMap, g: &PresheafMap) -> Result<PresheafMap, PshError> {
        if f.dom() != g.dom() || f.cod() != &self.left || g.cod() != &self.right {
            return Err(PshError::BaseMismatch);
        }
        let comp = f
            .dom()
            .cat()
            .objects()
            .map(|o| {
                (0..f.dom().card(o))
                    .map(|x| self.pair_index(o, f.apply(o, x), g.apply(o, x)))
                    .collect()
            })
            .collect();
        PresheafMap::new(f.dom().clone(), self.psh.clone(), comp)
    }

    /// The product map `f x g : A x B -> C x D` for `self = A x B` into
    /// `target = C x D`.
    pub fn map_into(
        &self,
        target: &Product,
        f: &PresheafMap,
        g: &PresheafMap,
    ) -> Result<PresheafMap, PshError> {
        let comp = self
            .psh
            .cat()
            .objects()
            .map(|o| {
                (0..self.psh.card(o))
                    .map(|p| {
                        let (x, y) = self.split(o, p);
                        target.pair_index(o, f.apply(o, x), g.apply(o, y))
                    })
                    .collect()
            })
            .collect();
        PresheafMap::new(self.psh.clone(), target.psh.clone(), comp)
    }
}

/// Cartesian product of presheaves; carrier at `c` is the lexicographically
/// ordered pair set, renamed to an initial segment.
pub fn product(x: &Arc<FinPresheaf>, y: &Arc<FinPresheaf>) -> Result<Product, PshError> {
    if x.cat() != y.cat() {
        return Err(PshError::BaseMismatch);
    }
    let cat = x.cat().clone();
    let card: Vec<usize> = cat.objects().map(|o| x.card(o) * y.card(o)).collect();
    let restrict = cat
        .mors()
        .map(|f| {
            let (_, b) = (cat.src(f), cat.dst(f));
            let mut tab = Vec::with_capacity(card[b.0]);
            for xv in 0..x.card(b) {
                for yv in 0..y.card(b) {
                    tab.push(x.restrict(f, xv) * y.card(cat.src(f)) + y.restrict(f, yv));
                }
            }
            tab
        })
        .collect();
    let psh = FinPresheaf::new(cat.clone(), card, restrict)?;
    let proj1 = PresheafMap::new(
        psh.clone(),
        x.clone(),
        cat.objects()
            .map(|o| (0..psh.card(o)).map(|p| p / y.card(o)).collect())
            .collect(),
    )?;
    let proj2 = PresheafMap::new(
        psh.clone(),
        y.clone(),
        cat.objects()
            .map(|o| (0..psh.card(o)).map(|p| p % y.card(o)).collect())
            .collect(),
    )?;
    Ok(Product {
        psh,
        left: x.clone(),
        right: y.clone(),
        proj1,
        proj2,
    })
}

/// A pullback with projections and pair decoding.
pub struct Pullback {
    pub psh: Arc<FinPresheaf>,
    pub proj1: PresheafMap,
    pub proj2: PresheafMap,
    /// per object: the matched pairs, in lexicographic order
    pub pairs: Vec<Vec<(usize, usize)>>,
}

impl Pullback {
    pub fn pair_index(&self, o: ObjId, x: usize, y: usize) -> Option<usize> {
        self.pairs[o.0].binary_search(&(x, y)).ok()
    }

    /// The gap map into the pullback induced by a commuting cone.
    pub fn gap(&self, f: &PresheafMap, g: &PresheafMap) -> Result<PresheafMap, PshError> {
        if f.dom() != g.dom() {
            return Err(PshError::BaseMismatch);
        }
        let comp = f
            .dom()
            .cat()
            .objects()
            .map(|o| {
                (0..f.dom().card(o))
                    .map(|z| {
                        self.pair_index(o, f.apply(o, z), g.apply(o, z))
                            .ok_or(PshError::NotInPullback)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        PresheafMap::new(f.dom().clone(), self.psh.clone(), comp)
    }
}

/// Pullback of `f : X -> Z` against `g : Y -> Z`: canonical pair carriers
/// `{(x, y) | f(x) = g(y)}` in lexicographic order.
pub fn pullback(f: &PresheafMap, g: &PresheafMap) -> Result<Pullback, PshError> {
    if f.cod() != g.cod() {
        return Err(PshError::BaseMismatch);
    }
    let x = f.dom().clone();
    let y = g.dom().clone();
    let cat = x.cat().clone();
    let pairs: Vec<Vec<(usize, usize)>> = cat
        .objects()
        .map(|o| {
            let mut v = Vec::new();
            for xv in 0..x.card(o) {
                for yv in 0..y.card(o) {
                    if f.apply(o, xv) == g.apply(o, yv) {
                        v.push((xv, yv));
                    }
                }
            }
            v
        })
        .collect();
    let card: Vec<usize> = pairs.iter().map(|p| p.len()).collect();
    let restrict = cat
        .mors()
        .map(|m| {
            let (a, b) = (cat.src(m), cat.dst(m));
            pairs[b.0]
                .iter()
                .map(|&(xv, yv)| {
                    let t = (x.restrict(m, xv), y.restrict(m, yv));
                    pairs[a.0].binary_search(&t).expect("pullback closed under restriction")
                })
                .collect()
        })
        .collect();
    let psh = FinPresheaf::new(cat.clone(), card, restrict)?;
    let proj1 = PresheafMap::new(
        psh.clone(),
        x,
        cat.objects()
            .map(|o| pairs[o.0].iter().map(|&(xv, _)| xv).collect())
            .collect(),
    )?;
    let proj2 = PresheafMap::new(
        psh.clone(),
        y,
        cat.objects()
            .map(|o| pairs[o.0].iter().map(|&(_, yv)| yv).collect())
            .collect(),
    )?;
    Ok(Pullback {
        psh,
        proj1,
        proj2,
        pairs,
    })
}

/// A subpresheaf presented by per-object sorted element lists of the
/// ambient presheaf, together with the inclusion map.
pub struct SubPresheaf {
    pub psh: Arc<FinPresheaf>,
    pub ambient: Arc<FinPresheaf>,
    pub include: PresheafMap,
    /// per object: ambient indices of the selected elements, sorted
    pub elems: Vec<Vec<usize>>,
}

impl SubPresheaf {
    pub fn contains(&self, o: ObjId, ambient_elem: usize) -> bool {
        self.elems[o.0].binary_search(&ambient_elem).is_ok()
    }

    pub fn index_of(&self, o: ObjId, ambient_elem: usize) -> Option<usize> {
        self.elems[o.0].binary_search(&ambient_elem).ok()
    }
}

/// Carves a subpresheaf out of `ambient`; fails if the element selection is
/// not closed under restriction.
pub fn subpresheaf(
    ambient: &Arc<FinPresheaf>,
    mut elems: Vec<Vec<usize>>,
) -> Result<SubPresheaf, PshError> {
    let cat = ambient.cat().clone();
    for v in &mut elems {
        v.sort_unstable();
        v.dedup();
    }
    for m in cat.mors() {
        let (a, b) = (cat.src(m), cat.dst(m));
        for &x in &elems[b.0] {
            let xa = ambient.restrict(m, x);
            if elems[a.0].binary_search(&xa).is_err() {
                return Err(PshError::NotClosed {
                    mor: cat.mor(m).name.clone(),
                    elem: x,
                });
            }
        }
    }
    let card: Vec<usize> = elems.iter().map(|v| v.len()).collect();
    let restrict = cat
        .mors()
        .map(|m| {
            let (a, b) = (cat.src(m), cat.dst(m));
            elems[b.0]
                .iter()
                .map(|&x| elems[a.0].binary_search(&ambient.restrict(m, x)).unwrap())
                .collect()
        })
        .collect();
    let psh = FinPresheaf::new(cat.clone(), card, restrict)?;
    let include = PresheafMap::new(
        psh.clone(),
        ambient.clone(),
        elems.clone(),
    )?;
    Ok(SubPresheaf {
        psh,
        ambient: ambient.clone(),
        include,
        elems,
    })
}
