//! The per-instance verdicts: the three stability equations, oracle
//! agreement, the pullback law, the degenerate laws, and the comparison
//! construction, each asserted as bit-equality of tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use extent_core::extension::{ext_former, ExtFormer, GenericExtCtx};
use extent_core::presheaf::PresheafMap;
use extent_core::universe::{is_section, section_reindex, Section};

use crate::instance::SplitInstance;
use crate::oracle::{ext_oracle, full_section_counts};
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceReport {
    pub seed: u64,
    pub base: String,
    pub bound: usize,
    pub shape: String,
    pub verdicts: BTreeMap<String, Verdict>,
    /// the first named violation, with a reproducer hint
    pub violation: Option<String>,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// How the former is built; the perturbed variant exists to prove the suite
/// notices canonical-naming drift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormerMode {
    Canonical,
    PerturbedOrder,
}

fn build_former(
    input: extent_core::extension::ExtInput,
    cap: usize,
    mode: FormerMode,
) -> Result<ExtFormer, HarnessError> {
    match mode {
        FormerMode::Canonical => ext_former(input, cap).map_err(HarnessError::Ext),
        FormerMode::PerturbedOrder => {
            extent_core::extension::ext_former_perturbed(input, cap).map_err(HarnessError::Ext)
        }
    }
}

pub fn check_stability(
    inst: &SplitInstance,
    ctx: &GenericExtCtx,
    cap: usize,
) -> Result<InstanceReport, HarnessError> {
    check_stability_with(inst, ctx, cap, FormerMode::Canonical)
}

pub fn check_stability_with(
    inst: &SplitInstance,
    ctx: &GenericExtCtx,
    cap: usize,
    mode: FormerMode,
) -> Result<InstanceReport, HarnessError> {
    let mut verdicts: BTreeMap<String, Verdict> = BTreeMap::new();
    let mut violation: Option<String> = None;
    fn record(
        verdicts: &mut BTreeMap<String, Verdict>,
        violation: &mut Option<String>,
        name: &str,
        v: Verdict,
        seed: u64,
    ) {
        if v == Verdict::Fail && violation.is_none() {
            *violation = Some(format!("{name} violated (reproduce with seed {seed})"));
        }
        verdicts.insert(name.to_string(), v);
    }

    inst.validate().map_err(HarnessError::Psh)?;

    let former = build_former(
        extent_core::extension::ExtInput::new(
            inst.input.shape.clone(),
            inst.input.gamma.clone(),
            inst.input.family.data.clone(),
            inst.input.boundary.clone(),
        )
        .map_err(HarnessError::Ext)?,
        cap,
        mode,
    )?;

    // --- equation 1: the type former commutes with substitution ---
    let re_input = inst.input.reindex(&inst.sigma).map_err(HarnessError::Ext)?;
    let re_former = build_former(
        extent_core::extension::ExtInput::new(
            re_input.shape.clone(),
            re_input.gamma.clone(),
            re_input.family.data.clone(),
            re_input.boundary.clone(),
        )
        .map_err(HarnessError::Ext)?,
        cap,
        mode,
    )?;
    let lhs = former.family.data.reindex(&inst.sigma);
    let eq1 = lhs == re_former.family.data;
    record(&mut verdicts, &mut violation, "stability_type", if eq1 { Verdict::Pass } else { Verdict::Fail }, inst.seed);

    // the substitution action on sections of the family over Gamma x psi
    let sigma_on_psi = {
        let dxpsi = &re_former.input.gxpsi;
        dxpsi
            .map_into(
                &former.input.gxpsi,
                &inst.sigma,
                &PresheafMap::identity(&inst.shape.psi.psh),
            )
            .map_err(HarnessError::Psh)?
    };

    // --- equation 2: the lambda former commutes with substitution ---
    match &inst.total_section {
        Some(b) => {
            let lam = former.lambda(b).map_err(HarnessError::Ext)?;
            let lam_lhs = section_reindex(&lam, &inst.sigma);
            let b_re = section_reindex(b, &sigma_on_psi);
            let lam_rhs = re_former.lambda(&b_re).map_err(HarnessError::Ext)?;
            let eq2 = eq1 && lam_lhs == lam_rhs;
            record(&mut verdicts, &mut violation, "stability_lambda", if eq2 { Verdict::Pass } else { Verdict::Fail }, inst.seed);
        }
        None => record(&mut verdicts, &mut violation, "stability_lambda", Verdict::Skip, inst.seed),
    }

    // --- equation 3: application commutes with substitution ---
    let f_section: Option<Section> = inst
        .total_section
        .as_ref()
        .map(|b| former.lambda(b))
        .transpose()
        .map_err(HarnessError::Ext)?;
    match (&f_section, &inst.point_psi) {
        (Some(f), Some(s)) => {
            let applied = former.app(f, s).map_err(HarnessError::Ext)?;
            let lhs = section_reindex(&applied, &inst.sigma);
            let f_re = section_reindex(f, &inst.sigma);
            let s_re = s.compose(&inst.sigma).map_err(HarnessError::Psh)?;
            let rhs = re_former.app(&f_re, &s_re).map_err(HarnessError::Ext)?;
            record(&mut verdicts, &mut violation, "stability_app", if lhs == rhs { Verdict::Pass } else { Verdict::Fail }, inst.seed);
        }
        _ => record(&mut verdicts, &mut violation, "stability_app", Verdict::Skip, inst.seed),
    }

    // --- oracle agreement ---
    let oracle = ext_oracle(&former, cap, true)?;
    match oracle.agrees_with(&former) {
        Ok(()) => record(&mut verdicts, &mut violation, "oracle", Verdict::Pass, inst.seed),
        Err(e) => {
            if violation.is_none() {
                violation = Some(format!("oracle: {e} (seed {})", inst.seed));
            }
            verdicts.insert("oracle".into(), Verdict::Fail);
        }
    }

    // --- pullback law and strict naturality on the generic contexts ---
    let pb = ctx.verify_pullback_law().is_ok();
    record(&mut verdicts, &mut violation, "pullback_law", if pb { Verdict::Pass } else { Verdict::Fail }, inst.seed);
    let nat = ctx.verify_strict_naturality().is_ok();
    record(&mut verdicts, &mut violation, "generic_naturality", if nat { Verdict::Pass } else { Verdict::Fail }, inst.seed);

    // --- comparison construction ---
    match extent_core::extension::leibniz_ext_object(&former, cap) {
        Ok(leib) => {
            let v = match leib.cross_check(&former) {
                Ok(()) => Verdict::Pass,
                Err(e) => {
                    if violation.is_none() {
                        violation = Some(format!("comparison: {e} (seed {})", inst.seed));
                    }
                    Verdict::Fail
                }
            };
            verdicts.insert("comparison_construction".into(), v);
        }
        Err(e) => {
            if violation.is_none() {
                violation = Some(format!("comparison build: {e} (seed {})", inst.seed));
            }
            verdicts.insert("comparison_construction".into(), Verdict::Fail);
        }
    }

    // --- degenerate laws ---
    if inst.spec.shape.is_identity() {
        let all_singleton = inst
            .gamma
            .elements()
            .all(|(c, g)| former.family.data.carrier(c, g).len() == 1);
        record(&mut verdicts, &mut violation, "degenerate_identity", if all_singleton { Verdict::Pass } else { Verdict::Fail }, inst.seed);
    } else {
        record(&mut verdicts, &mut violation, "degenerate_identity", Verdict::Skip, inst.seed);
    }
    if inst.spec.shape.has_empty_lower() {
        let full = full_section_counts(&former, cap)?;
        let matches = inst
            .gamma
            .elements()
            .all(|(c, g)| former.family.data.carrier(c, g).len() == full[c.0][g]);
        record(&mut verdicts, &mut violation, "degenerate_empty", if matches { Verdict::Pass } else { Verdict::Fail }, inst.seed);
    } else {
        record(&mut verdicts, &mut violation, "degenerate_empty", Verdict::Skip, inst.seed);
    }

    // --- semantic beta / computation / eta ---
    let mut bce = Verdict::Skip;
    if let (Some(b), Some(f)) = (&inst.total_section, &f_section) {
        let mut ok = true;
        if let Some(s) = &inst.point_psi {
            // beta: applying the lambda evaluates the section
            let applied = former.app(f, s).map_err(HarnessError::Ext)?;
            for (c, g) in inst.gamma.elements() {
                let w = inst.input.gxpsi.pair_index(c, g, s.apply(c, g));
                ok &= applied[c.0][g] == b[c.0][w];
            }
        }
        if let Some(sp) = &inst.point_phi {
            // computation: inside the lower shape the value is the boundary
            let applied = former.app(f, sp).map_err(HarnessError::Ext)?;
            for (c, g) in inst.gamma.elements() {
                let ambient = inst.shape.psi.elems[c.0][sp.apply(c, g)];
                let local = inst
                    .shape
                    .phi
                    .index_of(c, ambient)
                    .expect("phi point lands in the lower shape");
                let q = inst.input.gxphi.pair_index(c, g, local);
                ok &= applied[c.0][g] == inst.input.boundary[c.0][q];
            }
        }
        // eta: the glued family of decoded values is a section recovering f
        let glued: Section = inst
            .gamma
            .cat()
            .objects()
            .map(|c| {
                (0..inst.input.gxpsi.psh.card(c))
                    .map(|p| {
                        let (g, s) = inst.input.gxpsi.split(c, p);
                        let sec = former.decode(c, g, f[c.0][g]);
                        let id_idx = former.stages[c.0]
                            .yon
                            .index_of(c, inst.gamma.cat().identity(c));
                        sec[c.0][former.stages[c.0].local.pair_index(c, id_idx, s)]
                    })
                    .collect()
            })
            .collect();
        ok &= is_section(&inst.input.gxpsi.psh, &inst.input.family.data, &glued);
        ok &= &glued == b || former.lambda(&glued).map_err(HarnessError::Ext)? == *f;
        bce = if ok { Verdict::Pass } else { Verdict::Fail };
    }
    record(&mut verdicts, &mut violation, "beta_comp_eta", bce, inst.seed);

    Ok(InstanceReport {
        seed: inst.seed,
        base: inst.spec.base.name().to_string(),
        bound: inst.spec.bound,
        shape: inst.spec.shape.name().to_string(),
        verdicts,
        violation,
    })
}
