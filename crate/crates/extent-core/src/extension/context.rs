//! The enumerated generic contexts for the extension former: the stage `c`
//! of the first holds every pair (family over `y(c) x psi`, boundary
//! section over the lower part); the second additionally a total section
//! agreeing with the boundary. The projection between them has the
//! extension codes as fibers; verifying that the lambda square is a
//! pullback is an exhaustive per-stage bijection check.

use std::sync::Arc;

use crate::presheaf::{product, yoneda, FinPresheaf, ObjId, PresheafMap, PshError};
use crate::universe::{
    enumerate_families, enumerate_sections, section_reindex, FamilyData, Section, Value,
};

use super::former::{ext_former, ExtFormer, ExtInput};
use super::shape::SemShape;
use super::ExtError;

pub struct GenericExtCtx {
    pub shape: Arc<SemShape>,
    pub bound: usize,
    /// per stage: the (family, boundary) pairs in canonical order
    pub ext_elems: Vec<Vec<(FamilyData, Section)>>,
    /// per stage: (index into `ext_elems`, total section) in canonical order
    pub lam_elems: Vec<Vec<(usize, Section)>>,
    /// per stage and ext element: the former built over `y(c)`, whose
    /// family is the extension code
    pub formers: Vec<Vec<ExtFormer>>,
    pub u_ext: Arc<FinPresheaf>,
    pub u_lam: Arc<FinPresheaf>,
    pub proj: PresheafMap,
}

/// Enumerates the generic contexts of the former over one base and bound.
pub fn generic_ext_context(
    shape: &Arc<SemShape>,
    bound: usize,
    cap: usize,
) -> Result<GenericExtCtx, ExtError> {
    let cat = shape.cube_psh.cat().clone();

    let mut ext_elems: Vec<Vec<(FamilyData, Section)>> = Vec::new();
    let mut lam_elems: Vec<Vec<(usize, Section)>> = Vec::new();
    let mut formers: Vec<Vec<ExtFormer>> = Vec::new();
    for c in cat.objects() {
        let yon = yoneda(&cat, c);
        let local = product(&yon.psh, &shape.psi.psh).map_err(ExtError::Psh)?;
        let local_phi = product(&yon.psh, &shape.phi.psh).map_err(ExtError::Psh)?;
        let incl = local_phi
            .map_into(&local, &PresheafMap::identity(&yon.psh), &shape.incl)
            .map_err(ExtError::Psh)?;
        let mut row: Vec<(FamilyData, Section)> = Vec::new();
        for fam in enumerate_families(&local.psh, bound, cap).map_err(ExtError::Psh)? {
            let on_phi = fam.reindex(&incl);
            for a in
                enumerate_sections(&local_phi.psh, &on_phi, None, cap).map_err(ExtError::Psh)?
            {
                row.push((fam.clone(), a));
            }
        }
        row.sort();
        if row.len() > cap {
            return Err(ExtError::Psh(PshError::SizeLimit {
                what: format!("extension generic context at {}", cat.object_name(c)),
                size: row.len(),
                cap,
            }));
        }
        // total sections per pair, and the extension code via the former
        // over the representable
        let mut lam_row: Vec<(usize, Section)> = Vec::new();
        let mut former_row: Vec<ExtFormer> = Vec::new();
        for (i, (fam, a)) in row.iter().enumerate() {
            let input = ExtInput::new(shape.clone(), yon.psh.clone(), fam.clone(), a.clone())?;
            let former = ext_former(input, cap)?;
            let id_idx = former.stages[c.0].yon.index_of(c, cat.identity(c));
            for b_local in &former.sections[c.0][id_idx] {
                // the section over y(c) x psi at the identity is the total
                // section itself (the classifying map there is the identity)
                lam_row.push((i, b_local.clone()));
            }
            former_row.push(former);
        }
        lam_row.sort();
        ext_elems.push(row);
        lam_elems.push(lam_row);
        formers.push(former_row);
    }

    // presheaf structure: restriction by reindexing the data
    let yons: Vec<_> = cat.objects().map(|c| yoneda(&cat, c)).collect();
    let prods: Vec<_> = cat
        .objects()
        .map(|c| product(&yons[c.0].psh, &shape.psi.psh).map_err(ExtError::Psh))
        .collect::<Result<Vec<_>, _>>()?;
    let phi_prods: Vec<_> = cat
        .objects()
        .map(|c| product(&yons[c.0].psh, &shape.phi.psh).map_err(ExtError::Psh))
        .collect::<Result<Vec<_>, _>>()?;

    let action = |g: crate::presheaf::MorId, with_phi: bool| -> Result<PresheafMap, PshError> {
        let (cp, c) = (cat.src(g), cat.dst(g));
        let idx = yons[c.0].index_of(cp, g);
        let y_act = yons[cp.0].classify(idx, &yons[c.0].psh);
        if with_phi {
            phi_prods[cp.0].map_into(&phi_prods[c.0], &y_act, &PresheafMap::identity(&shape.phi.psh))
        } else {
            prods[cp.0].map_into(&prods[c.0], &y_act, &PresheafMap::identity(&shape.psi.psh))
        }
    };

    let card: Vec<usize> = ext_elems.iter().map(|v| v.len()).collect();
    let restrict: Vec<Vec<usize>> = cat
        .mors()
        .map(|g| {
            let cp = cat.src(g);
            let act = action(g, false).map_err(ExtError::Psh)?;
            let act_phi = action(g, true).map_err(ExtError::Psh)?;
            ext_elems[cat.dst(g).0]
                .iter()
                .map(|(fam, a)| {
                    let moved = (fam.reindex(&act), section_reindex(a, &act_phi));
                    ext_elems[cp.0]
                        .binary_search(&moved)
                        .map_err(|_| PshError::NotInPullback)
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(ExtError::Psh)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let u_ext = FinPresheaf::new(cat.clone(), card, restrict).map_err(ExtError::Psh)?;

    let lcard: Vec<usize> = lam_elems.iter().map(|v| v.len()).collect();
    let lrestrict: Vec<Vec<usize>> = cat
        .mors()
        .map(|g| {
            let cp = cat.src(g);
            let act = action(g, false).map_err(ExtError::Psh)?;
            lam_elems[cat.dst(g).0]
                .iter()
                .map(|(i, b)| {
                    let ip = u_ext.restrict(g, *i);
                    let moved = (ip, section_reindex(b, &act));
                    lam_elems[cp.0]
                        .binary_search(&moved)
                        .map_err(|_| PshError::NotInPullback)
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(ExtError::Psh)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let u_lam = FinPresheaf::new(cat.clone(), lcard, lrestrict).map_err(ExtError::Psh)?;
    let proj = PresheafMap::new(
        u_lam.clone(),
        u_ext.clone(),
        cat.objects()
            .map(|c| lam_elems[c.0].iter().map(|&(i, _)| i).collect())
            .collect(),
    )
    .map_err(ExtError::Psh)?;

    Ok(GenericExtCtx {
        shape: shape.clone(),
        bound,
        ext_elems,
        lam_elems,
        formers,
        u_ext,
        u_lam,
        proj,
    })
}

impl GenericExtCtx {
    /// The extension code of a stage element, as a family over the
    /// representable.
    pub fn ext_code(&self, c: ObjId, i: usize) -> &FamilyData {
        &self.formers[c.0][i].family.data
    }

    /// The lambda value of a stage element: the canonical index of its
    /// section in the fiber of its extension code.
    pub fn lambda_index(&self, c: ObjId, lam_elem: usize) -> Result<(usize, Value), ExtError> {
        let (i, b) = &self.lam_elems[c.0][lam_elem];
        let cat = self.u_ext.cat();
        let former = &self.formers[c.0][*i];
        let id_idx = former.stages[c.0].yon.index_of(c, cat.identity(c));
        let pos = former.sections[c.0][id_idx]
            .iter()
            .position(|s| s == b)
            .ok_or(ExtError::BadBoundary)?;
        Ok((*i, pos as Value))
    }

    /// Checks that the lambda square is a pullback: per stage, the pairs
    /// `(proj, lambda)` enumerate exactly the pairs of an extension element
    /// with a point of its code.
    pub fn verify_pullback_law(&self) -> Result<(), ExtError> {
        let cat = self.u_ext.cat().clone();
        for c in cat.objects() {
            let mut seen: Vec<(usize, Value)> = Vec::new();
            for l in 0..self.u_lam.card(c) {
                seen.push(self.lambda_index(c, l)?);
            }
            seen.sort_unstable();
            let before = seen.len();
            seen.dedup();
            if seen.len() != before {
                return Err(ExtError::PullbackLaw(format!(
                    "lambda not injective at {}",
                    cat.object_name(c)
                )));
            }
            let mut expected: Vec<(usize, Value)> = Vec::new();
            let id_idx = |i: usize| {
                self.formers[c.0][i].stages[c.0]
                    .yon
                    .index_of(c, cat.identity(c))
            };
            for i in 0..self.u_ext.card(c) {
                let code = self.ext_code(c, i);
                for &x in code.carrier(c, id_idx(i)) {
                    expected.push((i, x));
                }
            }
            expected.sort_unstable();
            if seen != expected {
                return Err(ExtError::PullbackLaw(format!(
                    "fibers do not match at {}",
                    cat.object_name(c)
                )));
            }
        }
        Ok(())
    }

    /// Re-asserts, on every enumerated element, that the code assignment is
    /// natural on the nose: restricting the element and forming the code
    /// equals forming the code and reindexing it.
    pub fn verify_strict_naturality(&self) -> Result<(), ExtError> {
        let cat = self.u_ext.cat().clone();
        let yons: Vec<_> = cat.objects().map(|c| yoneda(&cat, c)).collect();
        for g in cat.mors() {
            if cat.is_identity(g) {
                continue;
            }
            let (cp, c) = (cat.src(g), cat.dst(g));
            let idx = yons[c.0].index_of(cp, g);
            let y_act = yons[cp.0].classify(idx, &yons[c.0].psh);
            for i in 0..self.u_ext.card(c) {
                let ip = self.u_ext.restrict(g, i);
                let lhs = self.ext_code(c, i).reindex(&y_act);
                let rhs = self.ext_code(cp, ip);
                if &lhs != rhs {
                    return Err(ExtError::PullbackLaw(format!(
                        "code assignment not natural along {}",
                        cat.mor(g).name
                    )));
                }
            }
        }
        Ok(())
    }
}
