//! The dependent-product warm-up and the pushforward formula check: the
//! same splitting recipe on simpler formers, verified on random instances.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use extent_core::presheaf::{pushforward, BaseId};
use extent_core::universe::{comprehension, comprehension_lift, pi_family, Family};

use crate::instance::{random_context, random_family, random_map_from_sum};
use crate::oracle::pushforward_oracle;
use crate::HarnessError;

/// One dependent-product stability instance: random context, family,
/// dependent family and substitution; the former must commute with the
/// substitution as table equality.
pub fn check_pi_stability(seed: u64, base: BaseId, bound: usize, cap: usize) -> Result<bool, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cat = base.cat();
    let (a, comp_a, b, sigma) = loop {
        let (gamma, _) = random_context(&cat, &mut rng, 3);
        let a_data = random_family(&gamma, bound, &mut rng)?;
        let a = Family::new(gamma.clone(), a_data).map_err(HarnessError::Psh)?;
        let comp_a = comprehension(&a).map_err(HarnessError::Psh)?;
        let b_data = random_family(&comp_a.total, bound, &mut rng)?;
        let b = Family::new(comp_a.total.clone(), b_data).map_err(HarnessError::Psh)?;
        let (delta, summands) = random_context(&cat, &mut rng, 3);
        if let Some(sigma) = random_map_from_sum(&cat, &delta, &summands, &gamma, &mut rng) {
            break (a, comp_a, b, sigma);
        }
    };

    let pi = pi_family(&a, &comp_a, &b, cap).map_err(HarnessError::Psh)?;
    let lhs = pi.family.reindex(&sigma);

    let a_re = a.reindex(&sigma);
    let comp_re = comprehension(&a_re).map_err(HarnessError::Psh)?;
    let lift = comprehension_lift(&sigma, &comp_re, &comp_a).map_err(HarnessError::Psh)?;
    let b_re = Family::new(comp_re.total.clone(), b.data.reindex(&lift)).map_err(HarnessError::Psh)?;
    let rhs = pi_family(&a_re, &comp_re, &b_re, cap).map_err(HarnessError::Psh)?;
    Ok(lhs.data == rhs.family.data)
}

/// One pushforward instance: the construction's stagewise cardinalities
/// must match the direct evaluation of the fiberwise formula.
///
/// The direct side enumerates plain value tuples, so instances whose fiber
/// tuple space would be large are resampled; the bound keeps the oracle a
/// bare odometer rather than a clever search.
pub fn check_pushforward(seed: u64, base: BaseId, cap: usize) -> Result<bool, HarnessError> {
    const ORACLE_WORK_LIMIT: f64 = 2e6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cat = base.cat();
    let (f, x) = loop {
        let (a, _) = random_context(&cat, &mut rng, 3);
        let (b, b_summands) = random_context(&cat, &mut rng, 3);
        let Some(f) = random_map_from_sum(&cat, &b, &b_summands, &a, &mut rng) else {
            continue;
        };
        let x_size = rng.random_range(1..=3usize);
        let x = constant_psh(&cat, x_size);
        if pushforward_oracle_work(&f, &x)? <= ORACLE_WORK_LIMIT {
            break (f, x);
        }
    };
    let push = pushforward(&f, &x, cap).map_err(HarnessError::Psh)?;
    let direct = pushforward_oracle(&f, &x)?;
    Ok(push.psh.cards() == direct.as_slice())
}

/// Size of the tuple space the direct enumeration would walk.
fn pushforward_oracle_work(
    f: &extent_core::presheaf::PresheafMap,
    x: &std::sync::Arc<extent_core::presheaf::FinPresheaf>,
) -> Result<f64, HarnessError> {
    use extent_core::presheaf::{pullback, yoneda};
    let a = f.cod().clone();
    let cat = a.cat().clone();
    let mut work = 0f64;
    for c in cat.objects() {
        let yon = yoneda(&cat, c);
        for elem in 0..a.card(c) {
            let classify = yon.classify(elem, &a);
            let fiber = pullback(&classify, f).map_err(HarnessError::Psh)?;
            let cells: usize = fiber.psh.total_card();
            let values: usize = x.total_card() / cat.n_objects().max(1);
            work += (values.max(1) as f64).powi(cells as i32);
        }
    }
    Ok(work)
}

fn constant_psh(
    cat: &std::sync::Arc<extent_core::presheaf::FinCat>,
    n: usize,
) -> std::sync::Arc<extent_core::presheaf::FinPresheaf> {
    extent_core::presheaf::FinPresheaf::new(
        cat.clone(),
        vec![n; cat.n_objects()],
        cat.mors().map(|_| (0..n).collect()).collect(),
    )
    .expect("constant presheaf")
}
