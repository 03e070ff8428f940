//! Quantization parameters: arbitrary maps tau : G -> G used to place
//! the operator-ordering reference point. No structure is assumed
//! beyond being a function on elements.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::FiniteGroup;
use crate::error::CoreError;

/// A map tau : G -> G stored by value table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauMap {
    values: Vec<usize>,
}

impl TauMap {
    /// Builds from an explicit value table.
    pub fn from_values(group: &FiniteGroup, values: Vec<usize>) -> Result<Self, CoreError> {
        if values.len() != group.order() {
            return Err(CoreError::BadInput(format!(
                "tau table has {} entries for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= group.order()) {
            return Err(CoreError::BadInput(format!(
                "tau value {bad} out of range for order {}",
                group.order()
            )));
        }
        Ok(Self { values })
    }

    /// tau(x) = e for all x.
    pub fn constant_e(group: &FiniteGroup) -> Self {
        Self {
            values: vec![group.identity(); group.order()],
        }
    }

    /// tau(x) = x.
    pub fn identity(group: &FiniteGroup) -> Self {
        Self {
            values: group.elements().collect(),
        }
    }

    /// tau(x) = x^{-1}.
    pub fn inverse(group: &FiniteGroup) -> Self {
        Self {
            values: group.elements().map(|x| group.inv(x)).collect(),
        }
    }

    /// A seeded uniformly random map (not required to fix the identity).
    pub fn random(group: &FiniteGroup, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            values: (0..group.order())
                .map(|_| rng.gen_range(0..group.order()))
                .collect(),
        }
    }

    /// The standard five-parameter sample used across the test suite:
    /// constant-e, identity, inverse, and two seeded random maps.
    pub fn sample_set(group: &FiniteGroup, seed: u64) -> Vec<(String, Self)> {
        vec![
            ("e".into(), Self::constant_e(group)),
            ("id".into(), Self::identity(group)),
            ("inv".into(), Self::inverse(group)),
            ("rnd1".into(), Self::random(group, seed)),
            ("rnd2".into(), Self::random(group, seed.wrapping_add(1))),
        ]
    }

    /// Evaluates tau(x).
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// The underlying value table.
    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// The companion parameter tau~(x) = tau(x^{-1}) x, which exchanges an
/// operator with its adjoint at the symbol level. Applying it twice
/// returns the original map, tau(x) = e maps to the identity map, and
/// tau(x) = x maps to the constant-e map.
pub fn tau_tilde(group: &FiniteGroup, tau: &TauMap) -> TauMap {
    TauMap {
        values: group
            .elements()
            .map(|x| group.mul(tau.apply(group.inv(x)), x))
            .collect(),
    }
}
