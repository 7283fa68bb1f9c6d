//! Brute-force oracles, independent of the code-pointwise former.
//!
//! The extension oracle reads the extension type as its sigma-type
//! description: it enumerates every natural transformation from the local
//! shape into the total space of the family and keeps the ones that are
//! sections over the relevant context element with the prescribed
//! boundary. The result is compared fiber by fiber, in order, against the
//! former's canonical decode.

use extent_core::extension::ExtFormer;
use extent_core::presheaf::{nat_tables, NatTable, ObjId, PshError};
use extent_core::universe::{comprehension, Comprehension};

use crate::HarnessError;

/// The oracle fibers of one instance: per stage and context element, the
/// section set encoded as transformations into the total space.
pub struct OracleFibers {
    pub total: Comprehension,
    /// per (object, context element): the accepted tables, in the
    /// enumeration order of [`nat_tables`]
    pub fibers: Vec<Vec<Vec<NatTable>>>,
}

/// Exhaustively enumerates the extension fibers of an instance.
///
/// `with_boundary = false` drops the boundary filter, giving the full
/// section object (used for the empty-lower-shape degenerate law).
pub fn ext_oracle(former: &ExtFormer, cap: usize, with_boundary: bool) -> Result<OracleFibers, HarnessError> {
    let input = &former.input;
    let gamma = &input.gamma;
    let cat = gamma.cat().clone();
    let total = comprehension(&input.family).map_err(HarnessError::Psh)?;

    let mut fibers = Vec::new();
    for c in cat.objects() {
        let st = &former.stages[c.0];
        // all natural maps y(c) x psi -> E
        let candidates = nat_tables(&st.local.psh, &total.total, cap).map_err(HarnessError::Psh)?;
        let mut per_elem = Vec::new();
        for g in 0..gamma.card(c) {
            let mut keep = Vec::new();
            'cand: for t in &candidates {
                // (i) a section over the context element: the projection of
                // the value at (h, s) must be the pair (gamma.h, s)
                for d in cat.objects() {
                    for p in 0..st.local.psh.card(d) {
                        let (hi, s) = st.local.split(d, p);
                        let h = st.yon.homs[d.0][hi];
                        let expect = input.gxpsi.pair_index(d, gamma.restrict(h, g), s);
                        if total.proj.apply(d, t[d.0][p]) != expect {
                            continue 'cand;
                        }
                    }
                }
                // (ii) the boundary condition on the lower shape
                if with_boundary {
                    for d in cat.objects() {
                        for p in 0..st.local.psh.card(d) {
                            let (hi, s) = st.local.split(d, p);
                            let ambient = input.shape.psi.elems[d.0][s];
                            let Some(local_phi) = input.shape.phi.index_of(d, ambient) else {
                                continue;
                            };
                            let h = st.yon.homs[d.0][hi];
                            let q = input
                                .gxphi
                                .pair_index(d, gamma.restrict(h, g), local_phi);
                            let w = input.gxpsi.pair_index(d, gamma.restrict(h, g), s);
                            let expect = total
                                .pair_index(d, w, input.boundary[d.0][q])
                                .ok_or_else(|| {
                                    HarnessError::Psh(PshError::Malformed(
                                        "boundary outside the total space".into(),
                                    ))
                                })?;
                            if t[d.0][p] != expect {
                                continue 'cand;
                            }
                        }
                    }
                }
                keep.push(t.clone());
            }
            per_elem.push(keep);
        }
        fibers.push(per_elem);
    }
    Ok(OracleFibers { total, fibers })
}

impl OracleFibers {
    /// Element-level agreement with a former: equal cardinalities at every
    /// fiber, and the canonical decode matches the oracle order under the
    /// recorded bijection (position i maps to position i).
    pub fn agrees_with(&self, former: &ExtFormer) -> Result<(), String> {
        let gamma = &former.input.gamma;
        let cat = gamma.cat().clone();
        for c in cat.objects() {
            for g in 0..gamma.card(c) {
                let oracle = &self.fibers[c.0][g];
                let fiber = &former.sections[c.0][g];
                if oracle.len() != fiber.len() {
                    return Err(format!(
                        "fiber cardinality mismatch at stage {} element {}: former {}, oracle {}",
                        cat.object_name(c),
                        g,
                        fiber.len(),
                        oracle.len()
                    ));
                }
                for (i, t) in oracle.iter().enumerate() {
                    // decode the former's section into total-space indices
                    let section = &fiber[i];
                    for d in cat.objects() {
                        for p in 0..former.stages[c.0].local.psh.card(d) {
                            let w = former.to_global[c.0][g].apply(d, p);
                            let expect = self
                                .total
                                .pair_index(d, w, section[d.0][p])
                                .expect("decoded value in total space");
                            if t[d.0][p] != expect {
                                return Err(format!(
                                    "element mismatch at stage {} element {} fiber {}",
                                    cat.object_name(c),
                                    g,
                                    i
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Direct (filterless) brute-force count of natural maps from a fiber
/// presheaf into a target: every value tuple, checked against naturality by
/// plain iteration. Used as the independent side of the pushforward check.
pub fn count_all_nat_maps(
    dom: &extent_core::presheaf::FinPresheaf,
    cod: &extent_core::presheaf::FinPresheaf,
) -> usize {
    let cat = dom.cat().clone();
    let elems: Vec<(ObjId, usize)> = dom.elements().collect();
    let mut count = 0usize;
    let mut assign: Vec<usize> = vec![0; elems.len()];
    'next: loop {
        // naturality filter
        let value = |o: ObjId, x: usize| -> usize {
            let idx = elems.iter().position(|&(c, w)| c == o && w == x).unwrap();
            assign[idx]
        };
        let natural = cat.mors().all(|f| {
            let (a, b) = (cat.src(f), cat.dst(f));
            (0..dom.card(b)).all(|x| {
                let lhs = cod.restrict(f, value(b, x));
                let rhs = value(a, dom.restrict(f, x));
                lhs == rhs
            })
        });
        if natural {
            count += 1;
        }
        // odometer
        for i in 0..elems.len() {
            let (o, _) = elems[i];
            assign[i] += 1;
            if assign[i] < cod.card(o) {
                continue 'next;
            }
            assign[i] = 0;
        }
        break;
    }
    if elems.is_empty() {
        1
    } else {
        count
    }
}

/// The direct evaluation of the pushforward formula: at each stage, the sum
/// over elements of the base of the brute-force count of maps from the
/// fiber into the argument.
pub fn pushforward_oracle(
    f: &extent_core::presheaf::PresheafMap,
    x: &std::sync::Arc<extent_core::presheaf::FinPresheaf>,
) -> Result<Vec<usize>, HarnessError> {
    use extent_core::presheaf::{pullback, yoneda};
    let a = f.cod().clone();
    let cat = a.cat().clone();
    let mut out = Vec::new();
    for c in cat.objects() {
        let yon = yoneda(&cat, c);
        let mut sum = 0usize;
        for elem in 0..a.card(c) {
            let classify = yon.classify(elem, &a);
            let fiber = pullback(&classify, f).map_err(HarnessError::Psh)?;
            sum += count_all_nat_maps(&fiber.psh, x);
        }
        out.push(sum);
    }
    Ok(out)
}

/// Degenerate-law comparison: the value `former fiber` must have the same
/// cardinality as the unconstrained oracle fiber.
pub fn full_section_counts(former: &ExtFormer, cap: usize) -> Result<Vec<Vec<usize>>, HarnessError> {
    let fibers = ext_oracle(former, cap, false)?;
    Ok(fibers
        .fibers
        .iter()
        .map(|row| row.iter().map(|f| f.len()).collect())
        .collect())
}
