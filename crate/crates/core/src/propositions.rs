//! Numerical checks of the finite-motion properties that the limb rules rely on.
//!
//! Each trial draws random axes and angles and measures how far the claimed
//! invariant is from holding exactly.

use crate::limb::line_point_distance;
use crate::sample::{derive_seed, Sampler};
use crate::screw::{RigidTransform, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proposition {
    /// Rotations about axes through a point leave that point fixed.
    IntersectionInvariance,
    /// Rotating about one of two parallel axes keeps them parallel.
    ParallelConsistency,
    /// Rotating about one member of a concurrent pencil keeps the pencil concurrent.
    ConcurrencePreservation,
    /// A translation inserted among parallel revolutes does not tilt them.
    PrismaticEffect,
}

impl Proposition {
    pub const ALL: [Proposition; 4] = [
        Proposition::IntersectionInvariance,
        Proposition::ParallelConsistency,
        Proposition::ConcurrencePreservation,
        Proposition::PrismaticEffect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Proposition::IntersectionInvariance => "intersection point invariance",
            Proposition::ParallelConsistency => "parallel axes orientation consistency",
            Proposition::ConcurrencePreservation => "concurrence preservation",
            Proposition::PrismaticEffect => "prismatic joint effect",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropositionReport {
    pub seed: u64,
    pub trials: usize,
    /// Worst residual per proposition, in `Proposition::ALL` order.
    pub max_residual: [f64; 4],
}

impl PropositionReport {
    pub fn all_within(&self, bound: f64) -> bool {
        self.max_residual.iter().all(|&r| r <= bound)
    }
}

fn angle(s: &mut Sampler) -> f64 {
    s.uniform(-core::f64::consts::PI, core::f64::consts::PI)
}

fn intersection_invariance(s: &mut Sampler) -> f64 {
    let p = s.point();
    let r1 = s.unit_vector();
    let r2 = s.unit_vector();
    let x1 = RigidTransform::rotation_about_line(r1, p, angle(s)).expect("unit axis");
    let x2 = RigidTransform::rotation_about_line(r2, p, angle(s)).expect("unit axis");
    let a = (x1.apply_point(&p) - p).norm();
    let b = (x2.apply_point(&p) - p).norm();
    let c = (x1.compose(&x2).apply_point(&p) - p).norm();
    a.max(b).max(c)
}

fn parallel_consistency(s: &mut Sampler) -> f64 {
    let d = s.unit_vector();
    let p1 = s.point();
    let p2 = p1 + s.offset_from(&d, 0.1, 1.0);
    let x1 = RigidTransform::rotation_about_line(d, p1, angle(s)).expect("unit axis");
    let x2 = RigidTransform::rotation_about_line(d, p2, angle(s)).expect("unit axis");
    // the link carrying axis 2 turns about axis 1, and vice versa
    let d2 = x1.apply_direction(&d);
    let d1 = x2.apply_direction(&d);
    d2.cross(&d).norm().max(d1.cross(&d2).norm())
}

fn concurrence_preservation(s: &mut Sampler) -> f64 {
    let pc = s.point();
    let k = 2 + s.index(3);
    let mut axes = [(Vec3::zeros(), Vec3::zeros()); 4];
    for axis in axes.iter_mut().take(k) {
        let d = s.unit_vector();
        *axis = (d, pc + d * s.uniform(-1.0, 1.0));
    }
    let pivot = s.index(k);
    let x = RigidTransform::rotation_about_line(axes[pivot].0, axes[pivot].1, angle(s))
        .expect("unit axis");
    axes.iter()
        .take(k)
        .map(|(d, p)| line_point_distance(&x.apply_direction(d), &x.apply_point(p), &pc))
        .fold(0.0, f64::max)
}

fn prismatic_effect(s: &mut Sampler) -> f64 {
    let d = s.unit_vector();
    let p1 = s.point();
    let p2 = p1 + s.offset_from(&d, 0.1, 1.0);
    let theta = angle(s);
    let t = RigidTransform::translation_along(s.unit_vector(), s.uniform(-10.0, 10.0))
        .expect("unit direction");
    let x1 = RigidTransform::rotation_about_line(d, p1, theta).expect("unit axis");
    let x2 = RigidTransform::rotation_about_line(d, p2, theta).expect("unit axis");
    let a = t.compose(&x1).apply_direction(&d);
    let b = x2.apply_direction(&d);
    a.cross(&b).norm()
}

pub fn check_geometric_propositions(seed: u64, trials: usize) -> PropositionReport {
    let mut max_residual = [0.0f64; 4];
    let checks: [fn(&mut Sampler) -> f64; 4] = [
        intersection_invariance,
        parallel_consistency,
        concurrence_preservation,
        prismatic_effect,
    ];
    for (k, check) in checks.iter().enumerate() {
        let mut s = Sampler::new(derive_seed(seed, k as u64));
        for _ in 0..trials {
            max_residual[k] = max_residual[k].max(check(&mut s));
        }
    }
    PropositionReport {
        seed,
        trials,
        max_residual,
    }
}
