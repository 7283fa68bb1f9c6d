//! Suite configuration and the instance fleet.

use serde::{Deserialize, Serialize};

use extent_core::extension::ShapeKind;
use extent_core::presheaf::BaseId;

/// One point of the fleet: a base, a universe bound, a catalogue shape, and
/// a cap on context carrier sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceSpec {
    pub base: BaseId,
    pub bound: usize,
    pub shape: ShapeKind,
    pub gamma_max: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SuiteConfig {
    /// number of seeded instances
    pub n: usize,
    /// base seed; instance `i` uses `seed + i`
    pub seed: u64,
    /// enumeration cap (overridable via `EXTENT_CARRIER_CAP`)
    pub cap: usize,
    /// restrict the fleet to one base, when set
    pub base: Option<String>,
    /// restrict the fleet to one bound, when set
    pub bound: Option<usize>,
    /// restrict the fleet to one catalogue shape, when set
    pub shape: Option<String>,
    /// evaluate instances in parallel (requires the `parallel` feature)
    pub parallel: bool,
    /// tolerated size-limit skips before the suite fails
    pub max_size_skips: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: 500,
            seed: 42,
            cap: 16384,
            base: None,
            bound: None,
            shape: None,
            parallel: true,
            max_size_skips: 0,
        }
    }
}

impl SuiteConfig {
    pub fn smoke() -> Self {
        SuiteConfig {
            n: 10,
            ..SuiteConfig::default()
        }
    }

    /// Applies the `EXTENT_CARRIER_CAP` override.
    pub fn with_env_cap(mut self) -> Self {
        if let Ok(v) = std::env::var("EXTENT_CARRIER_CAP") {
            if let Ok(cap) = v.parse::<usize>() {
                self.cap = cap;
            }
        }
        self
    }

    /// The fleet this configuration cycles through. Two-dimensional shapes
    /// and the simplicial base get smaller bounds and contexts to keep
    /// enumeration exhaustive rather than sampled.
    pub fn fleet(&self) -> Vec<InstanceSpec> {
        let one_dim = [
            ShapeKind::IdentityTop,
            ShapeKind::IdentityPoint,
            ShapeKind::BotTop,
            ShapeKind::BotPoint,
            ShapeKind::Endpoint,
            ShapeKind::Boundary,
        ];
        let mut fleet = Vec::new();
        for bound in 1..=3 {
            for shape in ShapeKind::ALL {
                if shape == ShapeKind::CornerInTriangle && bound > 2 {
                    continue;
                }
                let gamma_max = if shape == ShapeKind::CornerInTriangle { 2 } else { 3 };
                fleet.push(InstanceSpec {
                    base: BaseId::Terminal,
                    bound,
                    shape,
                    gamma_max,
                });
            }
        }
        for shape in ShapeKind::ALL {
            fleet.push(InstanceSpec {
                base: BaseId::Arrow,
                bound: 1,
                shape,
                gamma_max: if shape == ShapeKind::CornerInTriangle { 2 } else { 3 },
            });
        }
        for shape in one_dim {
            fleet.push(InstanceSpec {
                base: BaseId::Arrow,
                bound: 2,
                shape,
                gamma_max: 2,
            });
        }
        for shape in one_dim {
            fleet.push(InstanceSpec {
                base: BaseId::Delta1,
                bound: 1,
                shape,
                gamma_max: 2,
            });
        }
        fleet
            .into_iter()
            .filter(|s| {
                self.base
                    .as_deref()
                    .map(|b| BaseId::parse(b) == Some(s.base))
                    .unwrap_or(true)
                    && self.bound.map(|k| k == s.bound).unwrap_or(true)
                    && self
                        .shape
                        .as_deref()
                        .map(|k| ShapeKind::parse(k) == Some(s.shape))
                        .unwrap_or(true)
            })
            .collect()
    }
}
