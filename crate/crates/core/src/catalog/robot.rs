//! Three-limb robots assembled from table rows.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::descriptor::VariantDescriptor;
use super::instantiate::{instantiate_geometry, MAX_ATTEMPTS};
use crate::constraint::{actuation_analysis, constraint_wrench_space};
use crate::error::{Error, Result};
use crate::limb::LimbModel;
use crate::linalg::{relative_sigma_min, SortedSvd};
use crate::rate::{JacobianBlocks, RobotModel};
use crate::sample::{derive_seed, Sampler};
use crate::screw::Screw;

/// Smallest accepted third singular value of the stacked constraint forces,
/// relative to the largest.
const FORCE_SEPARATION: f64 = 1e-3;

fn forces_independent(limbs: &[LimbModel]) -> bool {
    let ws: Vec<Screw> = limbs.iter().flat_map(constraint_wrench_space).collect();
    if ws.len() < 3 {
        return false;
    }
    let g_cv = DMatrix::from_fn(3, ws.len(), |r, c| ws[c].a()[r]);
    let svd = SortedSvd::new(&g_cv);
    svd.sigma(2) >= FORCE_SEPARATION * svd.sigma_max()
}

/// Actuated joint per limb that best conditions `[G_a G_c]`.
///
/// All combinations are scored; ties keep the lexicographically first.
fn choose_actuators(limbs: &[LimbModel]) -> Option<Vec<usize>> {
    let options: Vec<Vec<(usize, Screw)>> = limbs
        .iter()
        .map(|l| {
            (0..l.len())
                .filter_map(|i| actuation_analysis(l, i).ok().map(|r| (i, r.wrench)))
                .collect()
        })
        .collect();
    if options.iter().any(Vec::is_empty) {
        return None;
    }
    let constraint: Vec<Screw> = limbs.iter().flat_map(constraint_wrench_space).collect();
    let mut pick = alloc::vec![0usize; limbs.len()];
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let actuation: Vec<Screw> = pick.iter().zip(&options).map(|(&k, o)| o[k].1).collect();
        let g = JacobianBlocks::from_wrenches(&actuation, &constraint).g_transpose();
        let score = relative_sigma_min(&g.transpose());
        if best.as_ref().is_none_or(|(b, _)| score > *b) {
            let idx = pick.iter().zip(&options).map(|(&k, o)| o[k].0).collect();
            best = Some((score, idx));
        }
        // odometer over the option lists, last limb fastest
        let mut i = pick.len();
        loop {
            if i == 0 {
                return best.map(|(_, idx)| idx);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < options[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// Builds a robot whose three limbs realize `descriptors` around one
/// sampled center, with independent constraint forces.
pub fn build_robot(descriptors: [&VariantDescriptor; 3], seed: u64) -> Result<RobotModel> {
    if let Some(d) = descriptors.iter().find(|d| d.redundant) {
        return Err(Error::RedundantDescriptor { id: d.id.clone() });
    }
    for attempt in 0..MAX_ATTEMPTS {
        let s = derive_seed(seed, attempt as u64);
        let center = Sampler::new(s).point();
        let limbs = descriptors
            .iter()
            .enumerate()
            .map(|(i, d)| instantiate_geometry(d, derive_seed(s, i as u64 + 1), center))
            .collect::<Result<Vec<_>>>()?;
        if !forces_independent(&limbs) {
            continue;
        }
        if let Some(actuated) = choose_actuators(&limbs) {
            return RobotModel::new(limbs, center, actuated);
        }
    }
    Err(Error::ExhaustedResampling {
        attempts: MAX_ATTEMPTS,
    })
}
