//! Randomized check that every table row meets the necessary condition.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::descriptor::VariantDescriptor;
use super::instantiate::instantiate_geometry;
use super::table::catalog;
use crate::checklist::check_case_conditions;
use crate::constraint::{analyze_limb, classify_limb};
use crate::sample::{derive_seed, Sampler, GENERATOR};
use crate::screw::klein;

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub id: String,
    pub trials: usize,
    pub passes: usize,
    /// Largest constraint-wrench moment about the rotation center.
    pub max_moment_residual: f64,
    /// Largest pairing between a joint twist and a constraint wrench, i.e.
    /// how fast the center may move along a constrained force direction.
    pub max_center_velocity: f64,
    pub redundant: bool,
    pub checklist_failures: usize,
    pub generator: &'static str,
    pub seed: u64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Non-redundant rows must pass every trial; redundant rows only report.
    pub fn ok(&self) -> bool {
        self.redundant || self.passes == self.trials
    }
}

/// Runs `trials` independently seeded realizations of `descriptor`.
///
/// A trial passes when the constraint wrenches are pure forces through the
/// center, the row's condition list holds and the limb classifies back to
/// the row's family and case.
pub fn verify_variant(
    descriptor: &VariantDescriptor,
    trials: usize,
    seed: u64,
) -> VerificationReport {
    let mut report = VerificationReport {
        id: descriptor.id.clone(),
        trials,
        passes: 0,
        max_moment_residual: 0.0,
        max_center_velocity: 0.0,
        redundant: descriptor.redundant,
        checklist_failures: 0,
        generator: GENERATOR,
        seed,
        notes: Vec::new(),
    };
    let mut rank_deficient = 0;
    for trial in 0..trials {
        let trial_seed = derive_seed(seed, trial as u64);
        let center = Sampler::new(trial_seed).point();
        let limb = match instantiate_geometry(descriptor, derive_seed(trial_seed, 1), center) {
            Ok(l) => l,
            Err(e) => {
                report.notes.push(format!("trial {trial}: {e}"));
                continue;
            }
        };
        let analysis = analyze_limb(&limb);
        report.max_moment_residual = report.max_moment_residual.max(analysis.max_moment);
        for t in limb.twists() {
            for w in &analysis.constraint_wrenches {
                let v = libm::fabs(klein(&t.to_vector(), &w.to_vector()));
                report.max_center_velocity = report.max_center_velocity.max(v);
            }
        }
        if analysis.rank < limb.len() {
            rank_deficient += 1;
        }
        let checklist_ok = match check_case_conditions(&limb, descriptor) {
            Ok(c) => c.overall,
            Err(e) => {
                report.notes.push(format!("trial {trial}: {e}"));
                false
            }
        };
        if !checklist_ok {
            report.checklist_failures += 1;
        }
        let class_ok = classify_limb(&limb) == descriptor.class;
        if !class_ok {
            report.notes.push(format!(
                "trial {trial}: classified as {}",
                classify_limb(&limb)
            ));
        }
        if analysis.so3_necessary && checklist_ok && class_ok {
            report.passes += 1;
        }
    }
    if descriptor.redundant {
        report.notes.push(format!(
            "redundant: twist rank below joint count in {rank_deficient} of {trials} trials"
        ));
    }
    report
}

/// Every table row in table order. Each row uses `seed` directly, so a single
/// row can be rerun on its own with the same result.
pub fn verify_all(trials: usize, seed: u64) -> Vec<VerificationReport> {
    catalog()
        .iter()
        .map(|d| verify_variant(d, trials, seed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typical_case_passes() {
        let d: VariantDescriptor = "R^i R^i R^i".parse().unwrap();
        let r = verify_variant(&d, 10, 0);
        assert_eq!(r.passes, 10);
        assert!(r.max_moment_residual <= 1e-8);
        assert!(r.ok());
    }

    #[test]
    fn redundant_row_is_flagged() {
        let d: VariantDescriptor = "R^i R^i R^i R".parse().unwrap();
        let r = verify_variant(&d, 3, 0);
        assert!(r.redundant);
        assert!(
            r.notes.iter().any(|n| n.contains("redundant")),
            "{:?}",
            r.notes
        );
    }
}
