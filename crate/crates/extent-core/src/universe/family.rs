//! Families of bounded codes, as presheaves on a category of elements.
//!
//! A map `A : W -> U` into the universe of bounded codes is stored as its
//! unstraightening: one carrier per element of `W`, and one transport table
//! per (element, morphism into its stage). Reindexing along any map
//! `V -> W` is then literal table lookup, which is what makes every
//! universe-level construction strictly stable: substitution never
//! rebuilds anything, it reads the same tables through composed keys.

use std::sync::Arc;

use crate::presheaf::{FinPresheaf, MorId, ObjId, PresheafMap, PshError, Yoneda};

/// Values inhabiting code carriers.
pub type Value = u16;

/// A family of bounded codes over `base`: for each element `w` of
/// `base(c)` a finite carrier (a sorted list of values), and for each
/// morphism `f : d -> c` a transport function into the carrier of `w.f`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FamilyData {
    carriers: Vec<Vec<Vec<Value>>>,
    /// `maps[c][w][i][p]`: transport of the `p`-th carrier value of `(c, w)`
    /// along the `i`-th morphism into `c` (in id order).
    maps: Vec<Vec<Vec<Vec<Value>>>>,
}

impl FamilyData {
    pub fn new(
        base: &FinPresheaf,
        carriers: Vec<Vec<Vec<Value>>>,
        maps: Vec<Vec<Vec<Vec<Value>>>>,
    ) -> Result<Self, PshError> {
        let fam = FamilyData { carriers, maps };
        fam.validate(base)?;
        Ok(fam)
    }

    /// Functor laws over the category of elements of `base`.
    pub fn validate(&self, base: &FinPresheaf) -> Result<(), PshError> {
        let cat = base.cat();
        if self.carriers.len() != cat.n_objects() || self.maps.len() != cat.n_objects() {
            return Err(PshError::Malformed("family table sizes".into()));
        }
        for c in cat.objects() {
            if self.carriers[c.0].len() != base.card(c) || self.maps[c.0].len() != base.card(c) {
                return Err(PshError::Malformed(format!(
                    "family carrier count at {}",
                    cat.object_name(c)
                )));
            }
            let into = cat.into_obj(c);
            for w in 0..base.card(c) {
                let car = &self.carriers[c.0][w];
                if !car.windows(2).all(|p| p[0] < p[1]) {
                    return Err(PshError::Malformed("carrier not sorted".into()));
                }
                if self.maps[c.0][w].len() != into.len() {
                    return Err(PshError::Malformed("family map count".into()));
                }
                for (i, &f) in into.iter().enumerate() {
                    let tab = &self.maps[c.0][w][i];
                    if tab.len() != car.len() {
                        return Err(PshError::Malformed("family map length".into()));
                    }
                    let d = cat.src(f);
                    let wf = base.restrict(f, w);
                    let target = &self.carriers[d.0][wf];
                    if tab.iter().any(|v| target.binary_search(v).is_err()) {
                        return Err(PshError::Malformed("family map out of carrier".into()));
                    }
                    if cat.is_identity(f) && tab != car {
                        return Err(PshError::Malformed("identity transport not identity".into()));
                    }
                }
            }
        }
        // composition: transport along g.f equals transport along g then f
        for c in cat.objects() {
            for g in cat.mors() {
                if cat.dst(g) != c {
                    continue;
                }
                for f in cat.mors() {
                    if cat.dst(f) != cat.src(g) {
                        continue;
                    }
                    let gf = cat.comp(g, f);
                    for w in 0..base.card(c) {
                        let wg = base.restrict(g, w);
                        for &v in &self.carriers[c.0][w] {
                            let lhs = self.transport(base, gf, c, w, v);
                            let mid = self.transport(base, g, c, w, v);
                            let rhs = self.transport(base, f, cat.src(g), wg, mid);
                            if lhs != rhs {
                                return Err(PshError::Malformed(format!(
                                    "family transport not functorial along {}.{}",
                                    cat.mor(g).name,
                                    cat.mor(f).name
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn carrier(&self, c: ObjId, w: usize) -> &[Value] {
        &self.carriers[c.0][w]
    }

    pub fn carriers(&self) -> &Vec<Vec<Vec<Value>>> {
        &self.carriers
    }

    /// Transport of value `v` in the carrier of `(c, w)` along `f` into `c`.
    pub fn transport(&self, base: &FinPresheaf, f: MorId, c: ObjId, w: usize, v: Value) -> Value {
        let cat = base.cat();
        debug_assert_eq!(cat.dst(f), c);
        let into = cat.into_obj(c);
        let i = into.binary_search(&f).expect("morphism into stage");
        let p = self.carriers[c.0][w]
            .binary_search(&v)
            .expect("value in carrier");
        self.maps[c.0][w][i][p]
    }

    /// Largest carrier size.
    pub fn max_fiber(&self) -> usize {
        self.carriers
            .iter()
            .flat_map(|row| row.iter().map(|c| c.len()))
            .max()
            .unwrap_or(0)
    }

    /// All carrier values below `bound` (the universe membership predicate).
    pub fn is_bounded(&self, bound: usize) -> bool {
        self.carriers
            .iter()
            .flat_map(|row| row.iter())
            .flat_map(|c| c.iter())
            .all(|&v| (v as usize) < bound)
    }

    /// Pullback along `sigma : V -> W` (with `self` over `W`): literal
    /// copying of tables through `sigma`.
    pub fn reindex(&self, sigma: &PresheafMap) -> FamilyData {
        let v = sigma.dom();
        let cat = v.cat();
        let carriers = cat
            .objects()
            .map(|c| {
                (0..v.card(c))
                    .map(|w| self.carriers[c.0][sigma.apply(c, w)].clone())
                    .collect()
            })
            .collect();
        let maps = cat
            .objects()
            .map(|c| {
                (0..v.card(c))
                    .map(|w| self.maps[c.0][sigma.apply(c, w)].clone())
                    .collect()
            })
            .collect();
        FamilyData { carriers, maps }
    }

    /// The code of one element: the family restricted to the representable
    /// at `(c, w)`, i.e. reindexed along the classifying map.
    pub fn code_at(
        &self,
        total: &Arc<FinPresheaf>,
        yon: &Yoneda,
        w: usize,
    ) -> FamilyData {
        self.reindex(&yon.classify(w, total))
    }

    /// The constant family with carrier `0..size` everywhere.
    pub fn constant(base: &FinPresheaf, size: usize) -> FamilyData {
        let cat = base.cat();
        let car: Vec<Value> = (0..size as u16).collect();
        let carriers = cat
            .objects()
            .map(|c| vec![car.clone(); base.card(c)])
            .collect();
        let maps = cat
            .objects()
            .map(|c| {
                let into = cat.into_obj(c);
                vec![vec![car.clone(); into.len()]; base.card(c)]
            })
            .collect();
        FamilyData { carriers, maps }
    }
}

/// A choice of one carrier value per element of the base presheaf,
/// compatible with transport: `s[w.f] = transport(f)(s[w])`.
pub type Section = Vec<Vec<Value>>;

/// Enumerates the sections of a family, optionally with some cells pinned
/// (the boundary condition of extension types). Results are in
/// lexicographic order of the flattened value table.
pub fn enumerate_sections(
    base: &FinPresheaf,
    fam: &FamilyData,
    pinned: Option<&Vec<Vec<Option<Value>>>>,
    cap: usize,
) -> Result<Vec<Section>, PshError> {
    let order: Vec<(ObjId, usize)> = base.elements().collect();
    let pos: std::collections::HashMap<(usize, usize), usize> = order
        .iter()
        .enumerate()
        .map(|(i, &(o, w))| ((o.0, w), i))
        .collect();

    struct S<'a> {
        base: &'a FinPresheaf,
        fam: &'a FamilyData,
        order: &'a [(ObjId, usize)],
        pos: &'a std::collections::HashMap<(usize, usize), usize>,
        nodes: usize,
    }

    impl<'a> S<'a> {
        fn propagate(&self, assign: &mut [Option<Value>], start: usize) -> bool {
            let cat = self.base.cat();
            let mut queue = vec![start];
            while let Some(i) = queue.pop() {
                let (c, w) = self.order[i];
                let v = assign[i].expect("assigned");
                for f in cat.mors() {
                    if cat.dst(f) != c {
                        continue;
                    }
                    let tv = self.fam.transport(self.base, f, c, w, v);
                    let ti = self.pos[&(cat.src(f).0, self.base.restrict(f, w))];
                    match assign[ti] {
                        Some(old) if old != tv => return false,
                        Some(_) => {}
                        None => {
                            assign[ti] = Some(tv);
                            queue.push(ti);
                        }
                    }
                }
                for f in cat.mors() {
                    if cat.src(f) != c {
                        continue;
                    }
                    let b = cat.dst(f);
                    for y in 0..self.base.card(b) {
                        if self.base.restrict(f, y) != w {
                            continue;
                        }
                        if let Some(up) = assign[self.pos[&(b.0, y)]] {
                            if self.fam.transport(self.base, f, b, y, up) != v {
                                return false;
                            }
                        }
                    }
                }
            }
            true
        }

        fn search(
            &mut self,
            assign: &mut Vec<Option<Value>>,
            from: usize,
            cap: usize,
            out: &mut Vec<Section>,
        ) -> Result<(), PshError> {
            self.nodes += 1;
            if self.nodes > 50_000_000 {
                return Err(PshError::SizeLimit {
                    what: "section search budget".into(),
                    size: self.nodes,
                    cap: 50_000_000,
                });
            }
            let next = (from..self.order.len()).find(|&i| assign[i].is_none());
            let Some(i) = next else {
                if out.len() >= cap {
                    return Err(PshError::SizeLimit {
                        what: "section set".into(),
                        size: out.len() + 1,
                        cap,
                    });
                }
                let mut table: Section = self
                    .base
                    .cards()
                    .iter()
                    .map(|&n| Vec::with_capacity(n))
                    .collect();
                for (j, &(o, _)) in self.order.iter().enumerate() {
                    table[o.0].push(assign[j].expect("complete"));
                }
                out.push(table);
                return Ok(());
            };
            let (c, w) = self.order[i];
            for &v in self.fam.carrier(c, w) {
                let snapshot = assign.clone();
                assign[i] = Some(v);
                if self.propagate(assign, i) {
                    self.search(assign, i + 1, cap, out)?;
                }
                *assign = snapshot;
            }
            Ok(())
        }
    }

    let mut assign: Vec<Option<Value>> = vec![None; order.len()];
    if let Some(p) = pinned {
        for (i, &(o, w)) in order.iter().enumerate() {
            if let Some(v) = p[o.0][w] {
                if fam.carrier(o, w).binary_search(&v).is_err() {
                    return Ok(Vec::new());
                }
                assign[i] = Some(v);
            }
        }
        // check pinned cells are mutually consistent
        let s = S {
            base,
            fam,
            order: &order,
            pos: &pos,
            nodes: 0,
        };
        let mut probe = assign.clone();
        for i in 0..order.len() {
            if probe[i].is_some() && !s.propagate(&mut probe, i) {
                return Ok(Vec::new());
            }
        }
        assign = probe;
    }
    let mut s = S {
        base,
        fam,
        order: &order,
        pos: &pos,
        nodes: 0,
    };
    let mut out = Vec::new();
    s.search(&mut assign, 0, cap, &mut out)?;
    Ok(out)
}

/// Pullback of a section along `sigma : V -> W`.
pub fn section_reindex(section: &Section, sigma: &PresheafMap) -> Section {
    let v = sigma.dom();
    v.cat()
        .objects()
        .map(|c| {
            (0..v.card(c))
                .map(|w| section[c.0][sigma.apply(c, w)])
                .collect()
        })
        .collect()
}

/// Checks that a value table is a section of the family.
pub fn is_section(base: &FinPresheaf, fam: &FamilyData, s: &Section) -> bool {
    let cat = base.cat();
    for (c, w) in base.elements() {
        let v = s[c.0][w];
        if fam.carrier(c, w).binary_search(&v).is_err() {
            return false;
        }
        for f in cat.mors() {
            if cat.dst(f) != c {
                continue;
            }
            if fam.transport(base, f, c, w, v) != s[cat.src(f).0][base.restrict(f, w)] {
                return false;
            }
        }
    }
    true
}
