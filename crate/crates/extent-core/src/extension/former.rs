//! The extension-type former on families, built so that substitution is
//! precomposition of tables.
//!
//! The code assigned to a stage element depends only on the reindexed input
//! data, and sections are numbered by sorting their value tables, so the
//! former commutes with reindexing as literal table equality. The suite
//! re-asserts those equalities to guard against drift in the canonical
//! numbering.

use std::collections::HashMap;
use std::sync::Arc;

use crate::presheaf::{
    product, yoneda, FinPresheaf, ObjId, PresheafMap, Product, PshError, Yoneda,
};
use crate::universe::{
    enumerate_sections, is_section, section_reindex, Family, FamilyData, Section, Value,
};

use super::shape::SemShape;
use super::ExtError;

/// The input data of the former over a context: a family on the product of
/// the context with the upper shape, and a boundary section over the lower
/// shape part.
pub struct ExtInput {
    pub shape: Arc<SemShape>,
    pub gamma: Arc<FinPresheaf>,
    /// the product `Gamma x psi`
    pub gxpsi: Product,
    /// the product `Gamma x phi`
    pub gxphi: Product,
    /// `Gamma x phi -> Gamma x psi` (identity times the mono)
    pub incl: PresheafMap,
    /// `A : Gamma x psi -> U`
    pub family: Family,
    /// `a`: a section of `A` restricted along the inclusion
    pub boundary: Section,
}

impl ExtInput {
    pub fn new(
        shape: Arc<SemShape>,
        gamma: Arc<FinPresheaf>,
        family_data: FamilyData,
        boundary: Section,
    ) -> Result<ExtInput, ExtError> {
        let gxpsi = product(&gamma, &shape.psi.psh).map_err(ExtError::Psh)?;
        let gxphi = product(&gamma, &shape.phi.psh).map_err(ExtError::Psh)?;
        let incl = gxphi
            .map_into(&gxpsi, &PresheafMap::identity(&gamma), &shape.incl)
            .map_err(ExtError::Psh)?;
        let family = Family::new(gxpsi.psh.clone(), family_data).map_err(ExtError::Psh)?;
        let restricted = family.data.reindex(&incl);
        if !is_section(&gxphi.psh, &restricted, &boundary) {
            return Err(ExtError::BadBoundary);
        }
        Ok(ExtInput {
            shape,
            gamma,
            gxpsi,
            gxphi,
            incl,
            family,
            boundary,
        })
    }

    /// Reindexing the whole input along `sigma : Delta -> Gamma`.
    pub fn reindex(&self, sigma: &PresheafMap) -> Result<ExtInput, ExtError> {
        let delta = sigma.dom().clone();
        let dxpsi = product(&delta, &self.shape.psi.psh).map_err(ExtError::Psh)?;
        let dxphi = product(&delta, &self.shape.phi.psh).map_err(ExtError::Psh)?;
        let sxpsi = dxpsi
            .map_into(&self.gxpsi, sigma, &PresheafMap::identity(&self.shape.psi.psh))
            .map_err(ExtError::Psh)?;
        let sxphi = dxphi
            .map_into(&self.gxphi, sigma, &PresheafMap::identity(&self.shape.phi.psh))
            .map_err(ExtError::Psh)?;
        ExtInput::new(
            self.shape.clone(),
            delta,
            self.family.data.reindex(&sxpsi),
            section_reindex(&self.boundary, &sxphi),
        )
    }

    /// The boundary value pinned at an element of `Gamma x psi`, when that
    /// element lies in the lower shape.
    fn pin_at(&self, o: ObjId, gamma_elem: usize, psi_elem: usize) -> Option<Value> {
        let phi_elem = self.shape.psi.elems[o.0][psi_elem];
        let local = self.shape.phi.index_of(o, phi_elem)?;
        let p = self.gxphi.pair_index(o, gamma_elem, local);
        Some(self.boundary[o.0][p])
    }
}

/// Per-stage working data: the representable, the local base
/// `y(c) x psi`, and the classifying maps into the global product.
pub struct StageCtx {
    pub yon: Yoneda,
    pub local: Product,
}

/// The split former: the output family over the context, together with the
/// canonical section decode that names its fibers.
pub struct ExtFormer {
    pub input: ExtInput,
    pub family: Family,
    pub stages: Vec<StageCtx>,
    /// per (object, context element): the sections, in canonical order
    pub sections: Vec<Vec<Vec<Section>>>,
    /// per (object, context element): the map `y(c) x psi -> Gamma x psi`
    pub to_global: Vec<Vec<PresheafMap>>,
}

/// Canonical numbering: sections sorted by their flattened tables. The
/// fault-injection hook reverses the order to prove the suite notices.
fn order_sections(mut secs: Vec<Section>, perturb: bool) -> Vec<Section> {
    secs.sort();
    if perturb {
        secs.reverse();
    }
    secs
}

pub fn ext_former(input: ExtInput, cap: usize) -> Result<ExtFormer, ExtError> {
    ext_former_inner(input, cap, false)
}

/// A deliberately wrong former whose canonical section order is reversed;
/// only for the mutation-sensitivity meta-test.
#[cfg(feature = "fault-injection")]
pub fn ext_former_perturbed(input: ExtInput, cap: usize) -> Result<ExtFormer, ExtError> {
    ext_former_inner(input, cap, true)
}

fn ext_former_inner(input: ExtInput, cap: usize, perturb: bool) -> Result<ExtFormer, ExtError> {
    let gamma = input.gamma.clone();
    let cat = gamma.cat().clone();
    let psi = &input.shape.psi.psh;

    let stages: Vec<StageCtx> = cat
        .objects()
        .map(|c| {
            let yon = yoneda(&cat, c);
            let local = product(&yon.psh, psi)?;
            Ok(StageCtx { yon, local })
        })
        .collect::<Result<Vec<_>, PshError>>()
        .map_err(ExtError::Psh)?;

    // section sets per context element
    let mut sections: Vec<Vec<Vec<Section>>> = Vec::new();
    let mut to_global: Vec<Vec<PresheafMap>> = Vec::new();
    for c in cat.objects() {
        let st = &stages[c.0];
        let mut row_secs = Vec::new();
        let mut row_maps = Vec::new();
        for g in 0..gamma.card(c) {
            // (h : d -> c, s) |-> (gamma.h, s)
            let tables = cat
                .objects()
                .map(|d| {
                    (0..st.local.psh.card(d))
                        .map(|p| {
                            let (hi, s) = st.local.split(d, p);
                            let h = st.yon.homs[d.0][hi];
                            input.gxpsi.pair_index(d, gamma.restrict(h, g), s)
                        })
                        .collect()
                })
                .collect();
            let m = PresheafMap::new(st.local.psh.clone(), input.gxpsi.psh.clone(), tables)
                .map_err(ExtError::Psh)?;
            let local_family = input.family.data.reindex(&m);
            // pins from the boundary on the lower-shape part
            let pinned: Vec<Vec<Option<Value>>> = cat
                .objects()
                .map(|d| {
                    (0..st.local.psh.card(d))
                        .map(|p| {
                            let (hi, s) = st.local.split(d, p);
                            let h = st.yon.homs[d.0][hi];
                            input.pin_at(d, gamma.restrict(h, g), s)
                        })
                        .collect()
                })
                .collect();
            let secs = enumerate_sections(&st.local.psh, &local_family, Some(&pinned), cap)
                .map_err(ExtError::Psh)?;
            row_secs.push(order_sections(secs, perturb));
            row_maps.push(m);
        }
        sections.push(row_secs);
        to_global.push(row_maps);
    }

    // index for restriction lookups
    let index: Vec<Vec<HashMap<&Section, usize>>> = sections
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
                .map(|g| (0..sections[c.0][g].len() as u16).collect())
                .collect()
        })
        .collect();
    let maps: Vec<Vec<Vec<Vec<Value>>>> = cat
        .objects()
        .map(|c| {
            (0..gamma.card(c))
                .map(|g| {
                    cat.into_obj(c)
                        .iter()
                        .map(|&u| {
                            let d = cat.src(u);
                            let gu = gamma.restrict(u, g);
                            sections[c.0][g]
                                .iter()
                                .map(|s| {
                                    let restricted =
                                        restrict_section(&stages, &cat, s, u, c, d);
                                    index[d.0][gu][&restricted] as Value
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let data = FamilyData::new(&gamma, carriers, maps).map_err(ExtError::Psh)?;
    Ok(ExtFormer {
        family: Family {
            total: gamma,
            data,
        },
        input,
        stages,
        sections,
        to_global,
    })
}

/// Precomposition of a stage-`c` section with `y(u) x psi` for `u: d -> c`.
fn restrict_section(
    stages: &[StageCtx],
    cat: &crate::presheaf::FinCat,
    s: &Section,
    u: crate::presheaf::MorId,
    c: ObjId,
    d: ObjId,
) -> Section {
    cat.objects()
        .map(|e| {
            (0..stages[d.0].local.psh.card(e))
                .map(|p| {
                    let (hp, sv) = stages[d.0].local.split(e, p);
                    let h = stages[d.0].yon.homs[e.0][hp];
                    let uh = cat.comp(u, h);
                    let uh_idx = stages[c.0].yon.index_of(e, uh);
                    s[e.0][stages[c.0].local.pair_index(e, uh_idx, sv)]
                })
                .collect()
        })
        .collect()
}

impl ExtFormer {
    /// Decodes the section named by a fiber value.
    pub fn decode(&self, c: ObjId, gamma_elem: usize, v: Value) -> &Section {
        &self.sections[c.0][gamma_elem][v as usize]
    }

    /// The generic lambda: the section of the former family induced by a
    /// total section `b` of the input family with the right boundary.
    pub fn lambda(&self, b: &Section) -> Result<Section, ExtError> {
        let gamma = &self.input.gamma;
        let cat = gamma.cat().clone();
        // b restricted along the inclusion must be the boundary
        let on_phi = section_reindex(b, &self.input.incl);
        if on_phi != self.input.boundary {
            return Err(ExtError::BadBoundary);
        }
        let mut out: Section = gamma.cards().iter().map(|&n| Vec::with_capacity(n)).collect();
        for c in cat.objects() {
            for g in 0..gamma.card(c) {
                let local = section_reindex(b, &self.to_global[c.0][g]);
                let idx = self.sections[c.0][g]
                    .iter()
                    .position(|s| *s == local)
                    .ok_or(ExtError::BadBoundary)?;
                out[c.0].push(idx as Value);
            }
        }
        debug_assert!(is_section(gamma, &self.family.data, &out));
        Ok(out)
    }

    /// Application of a section of the former family to a point of the
    /// upper shape over the context: evaluation of the decoded section at
    /// the identity component.
    pub fn app(&self, f: &Section, s: &PresheafMap) -> Result<Section, ExtError> {
        let gamma = &self.input.gamma;
        let cat = gamma.cat().clone();
        if s.dom() != gamma || s.cod() != &self.input.shape.psi.psh {
            return Err(ExtError::Psh(PshError::BaseMismatch));
        }
        if !is_section(gamma, &self.family.data, f) {
            return Err(ExtError::BadBoundary);
        }
        let mut out: Section = gamma.cards().iter().map(|&n| Vec::with_capacity(n)).collect();
        for c in cat.objects() {
            let id_idx = self.stages[c.0].yon.index_of(c, cat.identity(c));
            for g in 0..gamma.card(c) {
                let sec = self.decode(c, g, f[c.0][g]);
                let p = self.stages[c.0].local.pair_index(c, id_idx, s.apply(c, g));
                out[c.0].push(sec[c.0][p]);
            }
        }
        Ok(out)
    }

    /// The family the results of [`ExtFormer::app`] are sections of:
    /// `A` reindexed along `(id, s)`.
    pub fn app_target(&self, s: &PresheafMap) -> Result<FamilyData, ExtError> {
        let gamma = &self.input.gamma;
        let graph = self
            .input
            .gxpsi
            .pair(&PresheafMap::identity(gamma), s)
            .map_err(ExtError::Psh)?;
        Ok(self.input.family.data.reindex(&graph))
    }
}
