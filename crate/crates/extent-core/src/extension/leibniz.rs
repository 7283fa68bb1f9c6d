//! An independent second construction of the extension object, through
//! exponentials: the pullback of the comparison map
//! `E^psi -> E^phi x_{(Gamma x psi)^phi} (Gamma x psi)^psi`
//! along the pairing of the boundary transpose with the transpose of the
//! identity. The suite cross-checks it elementwise against the
//! code-pointwise former; two derivations of the same object keep the test
//! suite honest about canonical naming.

use crate::presheaf::{
    exponential, pullback, Exponential, NatTable, ObjId, PresheafMap, Pullback, PshError,
};
use crate::universe::{comprehension, Comprehension, Section, Value};

use super::former::ExtFormer;
use super::ExtError;

pub struct LeibnizExt {
    /// the total space of the family, `E = (Gamma x psi).A`
    pub total: Comprehension,
    pub e_psi: Exponential,
    /// the extension object and its projection to the context
    pub object: Pullback,
}

/// Builds the comparison pullback for the input of a former.
pub fn leibniz_ext_object(former: &ExtFormer, cap: usize) -> Result<LeibnizExt, ExtError> {
    let input = &former.input;
    let gamma = &input.gamma;
    let psi = &input.shape.psi.psh;
    let phi = &input.shape.phi.psh;

    // total space of the family over Gamma x psi
    let total = comprehension(&input.family).map_err(ExtError::Psh)?;
    let e = &total.total;

    let e_psi = exponential(e, psi, cap).map_err(ExtError::Psh)?;
    let e_phi = exponential(e, phi, cap).map_err(ExtError::Psh)?;
    let g_psi = exponential(&input.gxpsi.psh, psi, cap).map_err(ExtError::Psh)?;
    let g_phi = exponential(&input.gxpsi.psh, phi, cap).map_err(ExtError::Psh)?;

    // restriction along the mono, on exponentials: theta |-> theta . (y x j)
    let restrict_exp = |from: &Exponential, to: &Exponential| -> Result<PresheafMap, PshError> {
        let cat = gamma.cat().clone();
        let comp = cat
            .objects()
            .map(|c| {
                (0..from.psh.card(c))
                    .map(|i| {
                        let theta = &from.stages[c.0].elems[i];
                        let table: NatTable = cat
                            .objects()
                            .map(|d| {
                                (0..to.stages[c.0].prod.psh.card(d))
                                    .map(|p| {
                                        let (hi, sphi) = to.stages[c.0].prod.split(d, p);
                                        let spsi = input.shape.incl.apply(d, sphi);
                                        theta[d.0][from.stages[c.0].prod.pair_index(d, hi, spsi)]
                                    })
                                    .collect()
                            })
                            .collect();
                        to.elem_index(c, &table).ok_or(PshError::NotInPullback)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        PresheafMap::new(from.psh.clone(), to.psh.clone(), comp)
    };

    // postcomposition with the projection, on exponentials
    let post_proj = |from: &Exponential, to: &Exponential| -> Result<PresheafMap, PshError> {
        let cat = gamma.cat().clone();
        let comp = cat
            .objects()
            .map(|c| {
                (0..from.psh.card(c))
                    .map(|i| {
                        let theta = &from.stages[c.0].elems[i];
                        let table: NatTable = cat
                            .objects()
                            .map(|d| {
                                theta[d.0]
                                    .iter()
                                    .map(|&x| total.proj.apply(d, x))
                                    .collect()
                            })
                            .collect();
                        to.elem_index(c, &table).ok_or(PshError::NotInPullback)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        PresheafMap::new(from.psh.clone(), to.psh.clone(), comp)
    };

    let r_e: PresheafMap = restrict_exp(&e_psi, &e_phi).map_err(ExtError::Psh)?;
    let p_phi: PresheafMap = post_proj(&e_phi, &g_phi).map_err(ExtError::Psh)?;
    let r_g: PresheafMap = restrict_exp(&g_psi, &g_phi).map_err(ExtError::Psh)?;
    let p_psi: PresheafMap = post_proj(&e_psi, &g_psi).map_err(ExtError::Psh)?;

    // the comparison target and the gap map into it
    let corner = pullback(&p_phi, &r_g).map_err(ExtError::Psh)?;
    let gap = corner.gap(&r_e, &p_psi).map_err(ExtError::Psh)?;

    // the cone at the context: the transpose of the boundary section and
    // the transpose of the identity
    let a_map = {
        // Gamma x phi -> E, (g, s) |-> ((g, s), a(g, s))
        let cat = gamma.cat().clone();
        let comp = cat
            .objects()
            .map(|c| {
                (0..input.gxphi.psh.card(c))
                    .map(|p| {
                        let (g, sphi) = input.gxphi.split(c, p);
                        let spsi = input.shape.incl.apply(c, sphi);
                        let w = input.gxpsi.pair_index(c, g, spsi);
                        total
                            .pair_index(c, w, input.boundary[c.0][p])
                            .ok_or(PshError::NotInPullback)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(ExtError::Psh)?;
        PresheafMap::new(input.gxphi.psh.clone(), e.clone(), comp).map_err(ExtError::Psh)?
    };
    let a_transpose = e_phi
        .transpose(&input.gxphi, &a_map)
        .map_err(ExtError::Psh)?;
    let eta = g_psi
        .transpose(&input.gxpsi, &PresheafMap::identity(&input.gxpsi.psh))
        .map_err(ExtError::Psh)?;
    let cone = corner.gap(&a_transpose, &eta).map_err(ExtError::Psh)?;

    let object = pullback(&gap, &cone).map_err(ExtError::Psh)?;
    Ok(LeibnizExt {
        total,
        e_psi,
        object,
    })
}

impl LeibnizExt {
    /// The transformation `y(c) x psi -> E` a fiber element of the former
    /// corresponds to, as an exponential carrier index.
    pub fn encode_section(
        &self,
        former: &ExtFormer,
        c: ObjId,
        gamma_elem: usize,
        section: &Section,
    ) -> Option<usize> {
        let cat = former.input.gamma.cat().clone();
        let st = &former.stages[c.0];
        let table: NatTable = cat
            .objects()
            .map(|d| {
                (0..st.local.psh.card(d))
                    .map(|p| {
                        let w = former.to_global[c.0][gamma_elem].apply(d, p);
                        self.total
                            .pair_index(d, w, section[d.0][p])
                            .expect("section lands in the total space")
                    })
                    .collect()
            })
            .collect();
        // align the exponent decomposition: the Leibniz exponential indexes
        // by its own y(c) x psi product, which has the same pair layout
        self.e_psi.elem_index(c, &table)
    }

    /// Cross-check against a former: stagewise cardinalities agree and the
    /// canonical decoding is a bijection matching the projections.
    pub fn cross_check(&self, former: &ExtFormer) -> Result<(), ExtError> {
        let gamma = &former.input.gamma;
        let cat = gamma.cat().clone();
        let comp = comprehension(&former.family).map_err(ExtError::Psh)?;
        for c in cat.objects() {
            if comp.total.card(c) != self.object.psh.card(c) {
                return Err(ExtError::CrossCheck(format!(
                    "cardinality mismatch at {}: former {}, comparison {}",
                    cat.object_name(c),
                    comp.total.card(c),
                    self.object.psh.card(c)
                )));
            }
            let mut seen = vec![false; self.object.psh.card(c)];
            for (g, x) in comp.pairs[c.0].iter() {
                let section = former.decode(c, *g, *x as Value);
                let theta = self.encode_section(former, c, *g, section).ok_or_else(|| {
                    ExtError::CrossCheck(format!(
                        "decoded section not in the exponential at {}",
                        cat.object_name(c)
                    ))
                })?;
                let pair = self
                    .object
                    .pair_index(c, theta, *g)
                    .ok_or_else(|| {
                        ExtError::CrossCheck(format!(
                            "decoded section not in the comparison pullback at {}",
                            cat.object_name(c)
                        ))
                    })?;
                if seen[pair] {
                    return Err(ExtError::CrossCheck(format!(
                        "decoding not injective at {}",
                        cat.object_name(c)
                    )));
                }
                seen[pair] = true;
            }
        }
        Ok(())
    }
}
