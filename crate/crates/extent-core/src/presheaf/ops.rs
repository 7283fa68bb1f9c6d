//! Enumeration-backed operations: natural transformation sets, exponentials
//! with their evaluation maps, and the pushforward (polynomial) construction.

use std::collections::HashMap;
use std::sync::Arc;

use super::cat::ObjId;
use super::psh::{product, pullback, yoneda, FinPresheaf, PresheafMap, Product, Yoneda};
use super::PshError;

/// Raw component tables of a candidate natural transformation.
pub type NatTable = Vec<Vec<usize>>;

struct NatSearch<'a> {
    dom: &'a FinPresheaf,
    cod: &'a FinPresheaf,
    order: Vec<(ObjId, usize)>,
    pos: HashMap<(usize, usize), usize>,
    nodes: usize,
}

const SEARCH_NODE_BUDGET: usize = 50_000_000;

impl<'a> NatSearch<'a> {
    fn new(dom: &'a FinPresheaf, cod: &'a FinPresheaf) -> Self {
        let order: Vec<(ObjId, usize)> = dom.elements().collect();
        let pos = order
            .iter()
            .enumerate()
            .map(|(i, &(o, x))| ((o.0, x), i))
            .collect();
        NatSearch {
            dom,
            cod,
            order,
            pos,
            nodes: 0,
        }
    }

    /// Forces all cells determined by the assignment at `start` and checks
    /// the constraints touching it; `false` means contradiction.
    fn propagate(&self, assign: &mut [Option<usize>], start: usize) -> bool {
        let cat = self.dom.cat();
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            let (o, x) = self.order[i];
            let v = assign[i].expect("queued cell is assigned");
            // downward: along every morphism into o the restricted cell is
            // determined by naturality
            for m in cat.mors() {
                if cat.dst(m) != o {
                    continue;
                }
                let tx = self.dom.restrict(m, x);
                let tv = self.cod.restrict(m, v);
                let ti = self.pos[&(cat.src(m).0, tx)];
                match assign[ti] {
                    Some(old) if old != tv => return false,
                    Some(_) => {}
                    None => {
                        assign[ti] = Some(tv);
                        queue.push(ti);
                    }
                }
            }
            // upward: assigned cells restricting onto this one must agree
            for m in cat.mors() {
                if cat.src(m) != o {
                    continue;
                }
                let b = cat.dst(m);
                for y in 0..self.dom.card(b) {
                    if self.dom.restrict(m, y) != x {
                        continue;
                    }
                    if let Some(w) = assign[self.pos[&(b.0, y)]] {
                        if self.cod.restrict(m, w) != v {
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
        assign: &mut Vec<Option<usize>>,
        from: usize,
        cap: usize,
        out: &mut Vec<NatTable>,
    ) -> Result<(), PshError> {
        self.nodes += 1;
        if self.nodes > SEARCH_NODE_BUDGET {
            return Err(PshError::SizeLimit {
                what: "natural transformation search budget".into(),
                size: self.nodes,
                cap: SEARCH_NODE_BUDGET,
            });
        }
        let next = (from..self.order.len()).find(|&i| assign[i].is_none());
        let Some(i) = next else {
            if out.len() >= cap {
                return Err(PshError::SizeLimit {
                    what: "natural transformation set".into(),
                    size: out.len() + 1,
                    cap,
                });
            }
            out.push(self.freeze(assign));
            return Ok(());
        };
        let (o, _) = self.order[i];
        for v in 0..self.cod.card(o) {
            let snapshot = assign.clone();
            assign[i] = Some(v);
            if self.propagate(assign, i) {
                self.search(assign, i + 1, cap, out)?;
            }
            *assign = snapshot;
        }
        Ok(())
    }

    fn freeze(&self, assign: &[Option<usize>]) -> NatTable {
        let mut table: NatTable = self
            .dom
            .cards()
            .iter()
            .map(|&n| Vec::with_capacity(n))
            .collect();
        for (i, &(o, _)) in self.order.iter().enumerate() {
            table[o.0].push(assign[i].expect("complete assignment"));
        }
        table
    }
}

/// Enumerates every natural transformation `dom -> cod`, as raw tables, in
/// lexicographic order of the flattened table.
pub fn nat_tables(
    dom: &FinPresheaf,
    cod: &FinPresheaf,
    cap: usize,
) -> Result<Vec<NatTable>, PshError> {
    let mut s = NatSearch::new(dom, cod);
    let mut assign = vec![None; s.order.len()];
    let mut out = Vec::new();
    s.search(&mut assign, 0, cap, &mut out)?;
    Ok(out)
}

/// Enumerates natural transformations as checked [`PresheafMap`]s.
pub fn nat_transformations(
    dom: &Arc<FinPresheaf>,
    cod: &Arc<FinPresheaf>,
    cap: usize,
) -> Result<Vec<PresheafMap>, PshError> {
    if dom.cat() != cod.cat() {
        return Err(PshError::BaseMismatch);
    }
    nat_tables(dom, cod, cap)?
        .into_iter()
        .map(|t| PresheafMap::new(dom.clone(), cod.clone(), t))
        .collect()
}

/// One stage of an exponential object: the representable at that stage, the
/// product with the exponent, and the enumerated transformation tables.
pub struct ExpStage {
    pub yon: Yoneda,
    pub prod: Product,
    /// element tables, in canonical order (identity component first, then
    /// full table, lexicographically)
    pub elems: Vec<NatTable>,
    index: HashMap<NatTable, usize>,
}

/// The exponential `X^Y` with its evaluation map `X^Y x Y -> X`.
pub struct Exponential {
    pub psh: Arc<FinPresheaf>,
    pub base_x: Arc<FinPresheaf>,
    pub base_y: Arc<FinPresheaf>,
    pub stages: Vec<ExpStage>,
    pub ev_prod: Product,
    pub ev: PresheafMap,
}

impl Exponential {
    pub fn stage(&self, o: ObjId) -> &ExpStage {
        &self.stages[o.0]
    }

    pub fn elem_index(&self, o: ObjId, table: &NatTable) -> Option<usize> {
        self.stages[o.0].index.get(table).copied()
    }

    /// The transpose of `f : Z x Y -> X` (with `zp` the product `Z x Y`):
    /// the map `Z -> X^Y`.
    pub fn transpose(&self, zp: &Product, f: &PresheafMap) -> Result<PresheafMap, PshError> {
        let z = &zp.left;
        let cat = z.cat().clone();
        let comp = cat
            .objects()
            .map(|c| {
                (0..z.card(c))
                    .map(|zv| {
                        let st = &self.stages[c.0];
                        // theta(h: d -> c, y) = f(z.h, y)
                        let table: NatTable = cat
                            .objects()
                            .map(|d| {
                                (0..st.prod.psh.card(d))
                                    .map(|p| {
                                        let (hi, yv) = st.prod.split(d, p);
                                        let h = st.yon.homs[d.0][hi];
                                        let zd = z.restrict(h, zv);
                                        f.apply(d, zp.pair_index(d, zd, yv))
                                    })
                                    .collect()
                            })
                            .collect();
                        st.index
                            .get(&table)
                            .copied()
                            .ok_or_else(|| PshError::Malformed("transpose target missing".into()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        PresheafMap::new(z.clone(), self.psh.clone(), comp)
    }
}

/// Builds `X^Y`: the carrier at `c` is the set of natural transformations
/// `y(c) x Y -> X`. Elements are ordered by their identity component first
/// so that `X^1` reproduces `X` with identical tables.
pub fn exponential(
    x: &Arc<FinPresheaf>,
    y: &Arc<FinPresheaf>,
    cap: usize,
) -> Result<Exponential, PshError> {
    if x.cat() != y.cat() {
        return Err(PshError::BaseMismatch);
    }
    let cat = x.cat().clone();
    let mut stages = Vec::new();
    for c in cat.objects() {
        let yon = yoneda(&cat, c);
        let prod = product(&yon.psh, y)?;
        let mut elems = nat_tables(&prod.psh, x, cap)?;
        if elems.len() > cap {
            return Err(PshError::SizeLimit {
                what: format!("exponential carrier at {}", cat.object_name(c)),
                size: elems.len(),
                cap,
            });
        }
        let id_pos = yon.index_of(c, cat.identity(c));
        let key = |t: &NatTable| -> (Vec<usize>, NatTable) {
            let idc: Vec<usize> = (0..y.card(c))
                .map(|yv| t[c.0][prod.pair_index(c, id_pos, yv)])
                .collect();
            (idc, t.clone())
        };
        elems.sort_by_key(&key);
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        stages.push(ExpStage {
            yon,
            prod,
            elems,
            index,
        });
    }
    let card: Vec<usize> = stages.iter().map(|s| s.elems.len()).collect();
    // restriction along u : c' -> c is precomposition with y(u) x Y
    let restrict = cat
        .mors()
        .map(|u| {
            let (cp, c) = (cat.src(u), cat.dst(u));
            (0..card[c.0])
                .map(|i| {
                    let theta = &stages[c.0].elems[i];
                    let table: NatTable = cat
                        .objects()
                        .map(|d| {
                            (0..stages[cp.0].prod.psh.card(d))
                                .map(|p| {
                                    let (hi, yv) = stages[cp.0].prod.split(d, p);
                                    let h = stages[cp.0].yon.homs[d.0][hi];
                                    let uh = cat.comp(u, h);
                                    let src_i = stages[c.0].yon.index_of(d, uh);
                                    theta[d.0][stages[c.0].prod.pair_index(d, src_i, yv)]
                                })
                                .collect()
                        })
                        .collect();
                    stages[cp.0].index[&table]
                })
                .collect()
        })
        .collect();
    let psh = FinPresheaf::new(cat.clone(), card, restrict)?;
    let ev_prod = product(&psh, y)?;
    let ev_comp = cat
        .objects()
        .map(|c| {
            let id_pos = stages[c.0].yon.index_of(c, cat.identity(c));
            (0..ev_prod.psh.card(c))
                .map(|p| {
                    let (ti, yv) = ev_prod.split(c, p);
                    stages[c.0].elems[ti][c.0][stages[c.0].prod.pair_index(c, id_pos, yv)]
                })
                .collect()
        })
        .collect();
    let ev = PresheafMap::new(ev_prod.psh.clone(), x.clone(), ev_comp)?;
    Ok(Exponential {
        psh,
        base_x: x.clone(),
        base_y: y.clone(),
        stages,
        ev_prod,
        ev,
    })
}

/// The pushforward of `x` along `f : B -> A`: at stage `c` the carrier is
/// the sum over `a` in `A(c)` of the natural maps from the fiber of `f`
/// over `a` (pulled back to `y(c)`) into `x`.
pub struct Pushforward {
    pub psh: Arc<FinPresheaf>,
    /// per stage: the (a, table) descriptions in canonical order
    pub elems: Vec<Vec<(usize, NatTable)>>,
}

pub fn pushforward(
    f: &PresheafMap,
    x: &Arc<FinPresheaf>,
    cap: usize,
) -> Result<Pushforward, PshError> {
    let a_psh = f.cod().clone();
    let cat = a_psh.cat().clone();
    if x.cat() != &cat {
        return Err(PshError::BaseMismatch);
    }
    // per stage c and a in A(c): the fiber pullback and its elements
    let mut stage_elems: Vec<Vec<(usize, NatTable)>> = Vec::new();
    let mut fibers = Vec::new();
    for c in cat.objects() {
        let yon = yoneda(&cat, c);
        let mut elems = Vec::new();
        let mut fib_row = Vec::new();
        for a in 0..a_psh.card(c) {
            let abar = yon.classify(a, &a_psh);
            let fib = pullback(&abar, f)?;
            for t in nat_tables(&fib.psh, x, cap)? {
                elems.push((a, t));
            }
            fib_row.push(fib);
        }
        if elems.len() > cap {
            return Err(PshError::SizeLimit {
                what: format!("pushforward carrier at {}", cat.object_name(c)),
                size: elems.len(),
                cap,
            });
        }
        stage_elems.push(elems);
        fibers.push((yon, fib_row));
    }
    let index: Vec<HashMap<&(usize, NatTable), usize>> = stage_elems
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, e)| (e, i)).collect())
        .collect();
    let card: Vec<usize> = stage_elems.iter().map(|v| v.len()).collect();
    let restrict = cat
        .mors()
        .map(|u| {
            let (cp, c) = (cat.src(u), cat.dst(u));
            stage_elems[c.0]
                .iter()
                .map(|(a, theta)| {
                    let au = a_psh.restrict(u, *a);
                    let (yon_c, fib_c) = &fibers[c.0];
                    let (yon_cp, fib_cp) = &fibers[cp.0];
                    let fib_from = &fib_c[*a];
                    let fib_to = &fib_cp[au];
                    // theta'(d, (h': d -> c', b)) = theta(d, (u.h', b))
                    let table: NatTable = cat
                        .objects()
                        .map(|d| {
                            fib_to.pairs[d.0]
                                .iter()
                                .map(|&(hi, b)| {
                                    let h = yon_cp.homs[d.0][hi];
                                    let uh = cat.comp(u, h);
                                    let uh_i = yon_c.index_of(d, uh);
                                    let q = fib_from
                                        .pair_index(d, uh_i, b)
                                        .expect("restricted fiber element");
                                    theta[d.0][q]
                                })
                                .collect()
                        })
                        .collect();
                    index[cp.0][&(au, table)]
                })
                .collect()
        })
        .collect();
    let psh = FinPresheaf::new(cat, card, restrict)?;
    Ok(Pushforward {
        psh,
        elems: stage_elems,
    })
}

#[cfg(test)]
mod tests {
    use super::super::cat::{arrow_cat, terminal_cat, ObjId};
    use super::super::psh::{terminal_psh, yoneda, FinPresheaf, PresheafMap};
    use super::*;

    fn set(cat: &Arc<super::super::cat::FinCat>, n: usize) -> Arc<FinPresheaf> {
        FinPresheaf::new(cat.clone(), vec![n], vec![(0..n).collect()]).unwrap()
    }

    #[test]
    fn nat_into_terminal_is_unique() {
        let cat = arrow_cat();
        let x = FinPresheaf::new(
            cat.clone(),
            vec![2, 3],
            vec![vec![0, 1], vec![0, 1, 2], vec![0, 0, 1]],
        )
        .unwrap();
        let one = terminal_psh(&cat);
        assert_eq!(nat_transformations(&x, &one, 64).unwrap().len(), 1);
    }

    #[test]
    fn nat_from_terminal_counts_elements() {
        let cat = terminal_cat();
        let x = set(&cat, 3);
        let one = terminal_psh(&cat);
        assert_eq!(nat_transformations(&one, &x, 64).unwrap().len(), 3);
    }

    #[test]
    fn nat_from_representable_is_yoneda() {
        let cat = arrow_cat();
        let y1 = yoneda(&cat, ObjId(1));
        let x = FinPresheaf::new(
            cat.clone(),
            vec![2, 3],
            vec![vec![0, 1], vec![0, 1, 2], vec![0, 0, 1]],
        )
        .unwrap();
        assert_eq!(
            nat_transformations(&y1.psh, &x, 64).unwrap().len(),
            x.card(ObjId(1))
        );
    }

    #[test]
    fn exponential_over_point_counts_functions() {
        let cat = terminal_cat();
        let x = set(&cat, 3);
        let y = set(&cat, 2);
        let e = exponential(&x, &y, 64).unwrap();
        assert_eq!(e.psh.cards(), &[9]);
    }

    #[test]
    fn unit_exponent_reproduces_the_base_tables() {
        let cat = arrow_cat();
        let x = FinPresheaf::new(
            cat.clone(),
            vec![3, 2],
            vec![vec![0, 1, 2], vec![0, 1], vec![2, 0]],
        )
        .unwrap();
        let one = terminal_psh(&cat);
        let e = exponential(&x, &one, 64).unwrap();
        assert_eq!(e.psh.as_ref(), x.as_ref());
    }

    #[test]
    fn exponential_over_arrow_base_matches_bruteforce_count() {
        let cat = arrow_cat();
        let x = FinPresheaf::new(cat.clone(), vec![2, 2], vec![vec![0, 1], vec![0, 1], vec![0, 1]]).unwrap();
        let y = FinPresheaf::new(cat.clone(), vec![1, 2], vec![vec![0], vec![0, 1], vec![0, 0]]).unwrap();
        let e = exponential(&x, &y, 1024).unwrap();
        // brute force: stage 1 carriers are natural families over y(1) x Y
        let y1 = yoneda(&cat, ObjId(1));
        let p = product(&y1.psh, &y).unwrap();
        let brute = nat_tables(&p.psh, &x, 4096).unwrap();
        assert_eq!(e.psh.card(ObjId(1)), brute.len());
    }

    #[test]
    fn adjunction_counts_match() {
        // |Nat(Z x Y, X)| = |Nat(Z, X^Y)| over the arrow base
        let cat = arrow_cat();
        let mk = |c0: usize, c1: usize, tab: Vec<usize>| {
            FinPresheaf::new(cat.clone(), vec![c0, c1], vec![(0..c0).collect(), (0..c1).collect(), tab]).unwrap()
        };
        let x = mk(2, 2, vec![0, 1]);
        let y = mk(1, 2, vec![0, 0]);
        let z = mk(2, 1, vec![1]);
        let e = exponential(&x, &y, 4096).unwrap();
        let zy = product(&z, &y).unwrap();
        let lhs = nat_tables(&zy.psh, &x, 4096).unwrap().len();
        let rhs = nat_tables(&z, &e.psh, 4096).unwrap().len();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ev_transpose_roundtrip() {
        let cat = arrow_cat();
        let x = FinPresheaf::new(cat.clone(), vec![2, 2], vec![vec![0, 1], vec![0, 1], vec![0, 1]]).unwrap();
        let y = FinPresheaf::new(cat.clone(), vec![1, 1], vec![vec![0], vec![0], vec![0]]).unwrap();
        let e = exponential(&x, &y, 256).unwrap();
        // transpose of ev is the identity on X^Y
        let t = e.transpose(&e.ev_prod, &e.ev).unwrap();
        assert_eq!(t, PresheafMap::identity(&e.psh));
    }

    #[test]
    fn pushforward_along_identity_is_a_times_x() {
        let cat = terminal_cat();
        let a = set(&cat, 2);
        let x = set(&cat, 3);
        let f = PresheafMap::identity(&a);
        let p = pushforward(&f, &x, 64).unwrap();
        assert_eq!(p.psh.cards(), &[6]);
    }

    #[test]
    fn pushforward_counts_fiberwise_functions() {
        // |A|=2 with fibers of sizes 2 and 1, |X|=2: 2^2 + 2^1 = 6
        let cat = terminal_cat();
        let a = set(&cat, 2);
        let b = set(&cat, 3);
        let x = set(&cat, 2);
        let f = PresheafMap::new(b.clone(), a.clone(), vec![vec![0, 0, 1]]).unwrap();
        let p = pushforward(&f, &x, 64).unwrap();
        assert_eq!(p.psh.cards(), &[6]);
    }

    #[test]
    fn pushforward_into_terminal_recovers_the_base() {
        let cat = terminal_cat();
        let a = set(&cat, 3);
        let b = set(&cat, 2);
        let x = terminal_psh(&cat);
        let f = PresheafMap::new(b.clone(), a.clone(), vec![vec![0, 2]]).unwrap();
        let p = pushforward(&f, &x, 64).unwrap();
        assert_eq!(p.psh.cards(), a.cards());
    }
}

#[cfg(test)]
mod cap_tests {
    use super::super::cat::terminal_cat;
    use super::super::psh::{terminal_psh, FinPresheaf};
    use super::super::PshError;
    use super::*;

    #[test]
    fn enumeration_fails_loudly_at_the_cap() {
        let cat = terminal_cat();
        let x = FinPresheaf::new(cat.clone(), vec![3], vec![(0..3).collect()]).unwrap();
        let one = terminal_psh(&cat);
        match nat_transformations(&one, &x, 2) {
            Err(PshError::SizeLimit { size, cap, .. }) => {
                assert_eq!(cap, 2);
                assert!(size > 2);
            }
            other => panic!("expected SizeLimit, got {:?}", other.map(|v| v.len())),
        }
        assert!(matches!(
            exponential(&x, &x, 8),
            Err(PshError::SizeLimit { .. })
        ));
        let f = crate::presheaf::PresheafMap::identity(&x);
        assert!(matches!(
            pushforward(&f, &x, 4),
            Err(PshError::SizeLimit { .. })
        ));
    }
}

#[cfg(test)]
mod fleet_tests {
    use super::super::cat::{arrow_cat, delta_cat, terminal_cat, FinCat};
    use super::super::psh::{product, terminal_psh, yoneda, FinPresheaf};
    use super::*;
    use std::sync::Arc;

    /// A small deterministic fleet of presheaves over a base: the terminal,
    /// every representable, a constant two-element presheaf, and pairwise
    /// products of the first few.
    fn fleet(cat: &Arc<FinCat>) -> Vec<Arc<FinPresheaf>> {
        let mut out = vec![terminal_psh(cat)];
        for c in cat.objects() {
            out.push(yoneda(cat, c).psh);
        }
        out.push(
            FinPresheaf::new(
                cat.clone(),
                vec![2; cat.n_objects()],
                cat.mors().map(|_| vec![0, 1]).collect(),
            )
            .unwrap(),
        );
        let firsts = out.clone();
        for (i, x) in firsts.iter().enumerate() {
            for y in &firsts[i..] {
                out.push(product(x, y).unwrap().psh);
            }
        }
        out
    }

    #[test]
    fn yoneda_count_holds_across_the_fleet() {
        for cat in [terminal_cat(), arrow_cat(), delta_cat(1)] {
            for x in fleet(&cat) {
                for c in cat.objects() {
                    let y = yoneda(&cat, c);
                    assert_eq!(
                        nat_tables(&y.psh, &x, 65536).unwrap().len(),
                        x.card(c),
                        "Yoneda count at {} over {}",
                        cat.object_name(c),
                        cat.name()
                    );
                }
            }
        }
    }

    #[test]
    fn exponential_adjunction_holds_across_the_fleet() {
        for cat in [terminal_cat(), arrow_cat(), delta_cat(1)] {
            let psh = fleet(&cat);
            // keep the loop tractable: base objects only, paired in a cycle
            for (i, x) in psh.iter().take(4).enumerate() {
                let y = &psh[(i + 1) % 4];
                let z = &psh[(i + 2) % 4];
                let e = match exponential(x, y, 65536) {
                    Ok(e) => e,
                    Err(PshError::SizeLimit { .. }) => continue,
                    Err(e) => panic!("{e}"),
                };
                let zy = product(z, y).unwrap();
                let lhs = nat_tables(&zy.psh, x, 65536).unwrap().len();
                let rhs = nat_tables(z, &e.psh, 65536).unwrap().len();
                assert_eq!(lhs, rhs, "adjunction over {}", cat.name());
            }
        }
    }
}
