//! The suite runner: builds the fleet, caches the generic contexts per
//! configuration point, fans instances out across workers, and aggregates
//! a deterministic report.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use extent_core::extension::{generic_ext_context, interpret_shape, GenericExtCtx};

use crate::checks::{check_stability_with, FormerMode, InstanceReport, Verdict};
use crate::config::{InstanceSpec, SuiteConfig};
use crate::instance::gen_instance;
use crate::report::{SuiteReport, Summary};
use crate::HarnessError;

type CtxKey = (String, usize, String);

fn ctx_key(spec: &InstanceSpec) -> CtxKey {
    (
        spec.base.name().to_string(),
        spec.bound,
        spec.shape.name().to_string(),
    )
}

/// Builds every generic context the fleet needs, sequentially (they are
/// shared read-only by the workers).
fn build_contexts(
    fleet: &[InstanceSpec],
    cap: usize,
) -> Result<BTreeMap<CtxKey, Arc<GenericExtCtx>>, HarnessError> {
    let mut out = BTreeMap::new();
    for spec in fleet {
        let key = ctx_key(spec);
        if out.contains_key(&key) {
            continue;
        }
        let shape = Arc::new(
            interpret_shape(spec.base, &spec.shape.inclusion()).map_err(HarnessError::Ext)?,
        );
        let ctx = generic_ext_context(&shape, spec.bound, cap).map_err(HarnessError::Ext)?;
        out.insert(key, Arc::new(ctx));
    }
    Ok(out)
}

pub fn run_suite(config: &SuiteConfig) -> Result<(SuiteReport, std::time::Duration), HarnessError> {
    run_suite_with(config, FormerMode::Canonical)
}

/// The perturbed mode exists for the mutation-sensitivity test.
pub fn run_suite_with(
    config: &SuiteConfig,
    mode: FormerMode,
) -> Result<(SuiteReport, std::time::Duration), HarnessError> {
    let start = Instant::now();
    let fleet = config.fleet();
    if fleet.is_empty() {
        return Err(HarnessError::Config("empty fleet".into()));
    }
    let contexts = build_contexts(&fleet, config.cap)?;

    let jobs: Vec<(u64, InstanceSpec)> = (0..config.n)
        .map(|i| (config.seed + i as u64, fleet[i % fleet.len()]))
        .collect();

    let eval = |&(seed, spec): &(u64, InstanceSpec)| -> Result<InstanceReport, HarnessError> {
        let ctx = contexts[&ctx_key(&spec)].clone();
        let inst = gen_instance(seed, spec, config.cap)?;
        check_stability_with(&inst, &ctx, config.cap, mode)
    };

    #[cfg(feature = "parallel")]
    let results: Vec<Result<InstanceReport, HarnessError>> = if config.parallel {
        use rayon::prelude::*;
        jobs.par_iter().map(eval).collect()
    } else {
        jobs.iter().map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<InstanceReport, HarnessError>> = jobs.iter().map(eval).collect();

    let mut instances = Vec::with_capacity(results.len());
    let mut size_skips = 0usize;
    for r in results {
        match r {
            Ok(rep) => instances.push(rep),
            Err(HarnessError::Psh(extent_core::presheaf::PshError::SizeLimit {
                what,
                size,
                cap,
            })) => {
                size_skips += 1;
                instances.push(InstanceReport {
                    seed: 0,
                    base: String::new(),
                    bound: 0,
                    shape: String::new(),
                    verdicts: BTreeMap::new(),
                    violation: Some(format!("size limit: {what} ({size} > {cap})")),
                });
            }
            Err(e) => return Err(e),
        }
    }
    instances.sort_by_key(|r| r.seed);

    let mut checked: BTreeMap<String, usize> = BTreeMap::new();
    let mut skipped: BTreeMap<String, usize> = BTreeMap::new();
    let mut violations = 0usize;
    for inst in &instances {
        if !inst.passed() {
            violations += 1;
        }
        for (k, v) in &inst.verdicts {
            match v {
                Verdict::Skip => *skipped.entry(k.clone()).or_default() += 1,
                _ => *checked.entry(k.clone()).or_default() += 1,
            }
        }
    }
    let report = SuiteReport {
        config: config.clone(),
        summary: Summary {
            instances: instances.len(),
            violations,
            size_skips,
            checked,
            skipped,
        },
        instances,
    };
    let elapsed = start.elapsed();
    Ok((report, elapsed))
}
