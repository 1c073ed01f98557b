//! Per-family geometric condition lists.
//!
//! Each family has a small expression tree of zero tests (`|a x b| = 0`,
//! `a . b = 0`) combined with "and"/"or", plus a few structural leaves that
//! require something to be clearly nonzero. Joints are referred to by role
//! number (see [`VariantDescriptor::roles`]), and `l_ij = l_j - l_i`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;

use crate::catalog::VariantDescriptor;
use crate::constraint::{CaseTag, SystemFamily};
use crate::error::{Error, Result};
use crate::limb::LimbModel;
use crate::screw::Vec3;
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    S(usize),
    L(usize),
    /// `l_j - l_i`
    D(usize, usize),
    X(Box<Term>, Box<Term>),
}

impl Term {
    fn eval(&self, s: &[Vec3], l: &[Vec3]) -> Vec3 {
        match self {
            Term::S(i) => s[*i],
            Term::L(i) => l[*i],
            Term::D(i, j) => l[*j] - l[*i],
            Term::X(a, b) => a.eval(s, l).cross(&b.eval(s, l)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::S(i) => write!(f, "s{}", i + 1),
            Term::L(i) => write!(f, "l{}", i + 1),
            Term::D(i, j) => write!(f, "l{}{}", i + 1, j + 1),
            Term::X(a, b) => write!(f, "({a}×{b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Leaf {
    CrossZero(Term, Term),
    DotZero(Term, Term),
    NonParallel(Term, Term),
    TripleNonzero(Term, Term, Term),
    /// The listed directions span three dimensions.
    SpanRank3(Vec<Term>),
}

impl Leaf {
    /// Measured value and whether the leaf holds.
    fn eval(&self, s: &[Vec3], l: &[Vec3]) -> (f64, bool) {
        match self {
            Leaf::CrossZero(a, b) => {
                let v = a.eval(s, l).cross(&b.eval(s, l)).norm();
                (v, v <= tol::PREDICATE)
            }
            Leaf::DotZero(a, b) => {
                let v = libm::fabs(a.eval(s, l).dot(&b.eval(s, l)));
                (v, v <= tol::PREDICATE)
            }
            Leaf::NonParallel(a, b) => {
                let v = a.eval(s, l).cross(&b.eval(s, l)).norm();
                (v, v > tol::NON_DEGENERATE)
            }
            Leaf::TripleNonzero(a, b, c) => {
                let v = libm::fabs(a.eval(s, l).dot(&b.eval(s, l).cross(&c.eval(s, l))));
                (v, v > tol::NON_DEGENERATE)
            }
            Leaf::SpanRank3(ts) => {
                let cols: Vec<Vec3> = ts.iter().map(|t| t.eval(s, l)).collect();
                let m = DMatrix::from_fn(3, cols.len(), |r, c| cols[c][r]);
                let v = crate::linalg::SortedSvd::new(&m).sigma(2);
                (v, v > tol::NON_DEGENERATE)
            }
        }
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::CrossZero(a, b) => write!(f, "{a}×{b} = 0"),
            Leaf::DotZero(a, b) => write!(f, "{a}·{b} = 0"),
            Leaf::NonParallel(a, b) => write!(f, "{a}×{b} ≠ 0"),
            Leaf::TripleNonzero(a, b, c) => write!(f, "{a}·({b}×{c}) ≠ 0"),
            Leaf::SpanRank3(ts) => {
                let names: Vec<String> = ts.iter().map(|t| format!("{t}")).collect();
                write!(f, "span{{{}}} = 3", names.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cond {
    Leaf(Leaf),
    All(Vec<Cond>),
    Any(Vec<Cond>),
}

impl Cond {
    fn eval(&self, s: &[Vec3], l: &[Vec3], leaves: &mut Vec<LeafResult>) -> bool {
        match self {
            Cond::Leaf(leaf) => {
                let (value, pass) = leaf.eval(s, l);
                leaves.push(LeafResult {
                    text: format!("{leaf}"),
                    value,
                    pass,
                });
                pass
            }
            // every leaf is evaluated so the report is complete
            Cond::All(cs) => cs.iter().fold(true, |acc, c| c.eval(s, l, leaves) & acc),
            Cond::Any(cs) => cs.iter().fold(false, |acc, c| c.eval(s, l, leaves) | acc),
        }
    }

    fn render(&self, f: &mut String, top: bool) {
        match self {
            Cond::Leaf(leaf) => f.push_str(&format!("{leaf}")),
            Cond::All(cs) | Cond::Any(cs) => {
                let op = if matches!(self, Cond::All(_)) {
                    " ∧ "
                } else {
                    " ∨ "
                };
                if !top {
                    f.push('(');
                }
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.push_str(op);
                    }
                    c.render(f, false);
                }
                if !top {
                    f.push(')');
                }
            }
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(&mut s, true);
        f.write_str(&s)
    }
}

/// How the named items combine into the overall verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Item(usize),
    All(Vec<Verdict>),
    Any(Vec<Verdict>),
}

impl Verdict {
    fn eval(&self, items: &[bool]) -> bool {
        match self {
            Verdict::Item(i) => items[*i],
            Verdict::All(vs) => vs.iter().all(|v| v.eval(items)),
            Verdict::Any(vs) => vs.iter().any(|v| v.eval(items)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checklist {
    pub items: Vec<(&'static str, Cond)>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeafResult {
    pub text: String,
    pub value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItemResult {
    pub name: &'static str,
    pub text: String,
    pub pass: bool,
    pub leaves: Vec<LeafResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionChecklist {
    pub descriptor: String,
    pub items: Vec<ItemResult>,
    pub overall: bool,
}

fn s(i: usize) -> Term {
    Term::S(i - 1)
}
fn l(i: usize) -> Term {
    Term::L(i - 1)
}
fn d(i: usize, j: usize) -> Term {
    Term::D(i - 1, j - 1)
}
fn x(a: Term, b: Term) -> Term {
    Term::X(Box::new(a), Box::new(b))
}
fn cross0(a: Term, b: Term) -> Cond {
    Cond::Leaf(Leaf::CrossZero(a, b))
}
fn dot0(a: Term, b: Term) -> Cond {
    Cond::Leaf(Leaf::DotZero(a, b))
}
fn nonpar(a: Term, b: Term) -> Cond {
    Cond::Leaf(Leaf::NonParallel(a, b))
}
fn triple(a: Term, b: Term, c: Term) -> Cond {
    Cond::Leaf(Leaf::TripleNonzero(a, b, c))
}
fn all(cs: Vec<Cond>) -> Cond {
    Cond::All(cs)
}
fn any(cs: Vec<Cond>) -> Cond {
    Cond::Any(cs)
}
/// Axis `i` passes through the center.
fn centered(i: usize) -> Cond {
    cross0(s(i), l(i))
}
fn items(n: usize) -> Vec<Verdict> {
    (0..n).map(Verdict::Item).collect()
}

fn five_revolute_case_i() -> Checklist {
    use alloc::vec;
    let list = vec![
        (
            "structure",
            all(vec![
                cross0(s(1), s(2)),
                cross0(s(5), x(s(1), s(3))),
                nonpar(s(1), s(3)),
                nonpar(s(1), d(1, 2)),
            ]),
        ),
        (
            "direction along s1",
            all(vec![
                any(vec![cross0(s(1), l(3)), cross0(s(3), l(3))]),
                any(vec![cross0(s(3), l(4)), cross0(s(1), l(4))]),
                all(vec![
                    dot0(s(3), l(5)),
                    any(vec![dot0(s(1), l(5)), dot0(s(3), s(1))]),
                ]),
            ]),
        ),
        (
            "direction along l12",
            any(vec![
                cross0(s(3), d(1, 2)),
                cross0(s(3), d(3, 4)),
                cross0(d(1, 2), d(3, 4)),
            ]),
        ),
        (
            "moment 1",
            any(vec![cross0(l(1), s(1)), cross0(l(1), l(2))]),
        ),
        (
            "moment 2",
            any(vec![
                cross0(s(3), l(3)),
                cross0(s(3), d(1, 2)),
                cross0(l(3), d(1, 2)),
            ]),
        ),
        (
            "moment 3",
            any(vec![
                cross0(s(3), l(4)),
                cross0(s(3), d(1, 2)),
                cross0(l(4), d(1, 2)),
            ]),
        ),
        (
            "moment 4",
            all(vec![
                dot0(l(5), s(3)),
                any(vec![dot0(d(1, 2), s(3)), dot0(l(5), s(1))]),
            ]),
        ),
    ];
    Checklist {
        items: list,
        verdict: Verdict::All(vec![
            Verdict::Item(0),
            Verdict::Any(vec![Verdict::Item(1), Verdict::Item(2)]),
            Verdict::Item(3),
            Verdict::Item(4),
            Verdict::Item(5),
            Verdict::Item(6),
        ]),
    }
}

fn five_revolute_case_ii() -> Checklist {
    use alloc::vec;
    Checklist {
        items: vec![
            (
                "structure",
                all(vec![
                    cross0(s(1), s(2)),
                    cross0(s(1), s(3)),
                    cross0(s(5), x(s(1), s(4))),
                    nonpar(s(1), s(4)),
                    triple(d(1, 2), d(1, 3), s(1)),
                ]),
            ),
            ("joint 4", any(vec![cross0(s(4), l(4)), cross0(s(1), l(4))])),
            (
                "joint 5",
                all(vec![
                    dot0(s(4), l(5)),
                    any(vec![dot0(s(1), l(5)), dot0(s(4), s(1))]),
                ]),
            ),
        ],
        verdict: Verdict::All(items(3)),
    }
}

fn four_revolute_one_prismatic() -> Checklist {
    use alloc::vec;
    Checklist {
        items: vec![
            (
                "structure",
                all(vec![
                    cross0(s(1), s(2)),
                    cross0(s(4), x(s(1), s(3))),
                    nonpar(s(1), s(3)),
                    nonpar(s(1), d(1, 2)),
                    nonpar(x(s(1), d(1, 2)), s(5)),
                ]),
            ),
            (
                "sub-case I",
                all(vec![
                    dot0(s(1), s(5)),
                    any(vec![cross0(s(3), l(3)), cross0(s(1), l(3))]),
                    all(vec![
                        dot0(l(4), s(3)),
                        any(vec![dot0(s(1), l(4)), dot0(s(3), s(1))]),
                    ]),
                ]),
            ),
            (
                "sub-case II",
                all(vec![
                    dot0(d(1, 2), s(5)),
                    any(vec![
                        cross0(l(1), s(1)),
                        cross0(s(1), l(2)),
                        cross0(l(1), l(2)),
                    ]),
                    all(vec![
                        dot0(s(3), l(4)),
                        any(vec![dot0(s(1), l(4)), dot0(l(3), d(1, 2))]),
                    ]),
                    any(vec![
                        cross0(l(3), s(3)),
                        cross0(d(1, 2), s(3)),
                        cross0(d(1, 2), l(3)),
                    ]),
                ]),
            ),
        ],
        verdict: Verdict::All(vec![
            Verdict::Item(0),
            Verdict::Any(vec![Verdict::Item(1), Verdict::Item(2)]),
        ]),
    }
}

fn three_revolute_two_prismatic_case_i() -> Checklist {
    use alloc::vec;
    Checklist {
        items: vec![
            ("prismatic directions independent", nonpar(s(4), s(5))),
            ("revolute directions independent", triple(s(1), s(2), s(3))),
            (
                "revolutes through center",
                all(vec![centered(1), centered(2), centered(3)]),
            ),
        ],
        verdict: Verdict::All(items(3)),
    }
}

fn three_revolute_two_prismatic_case_ii() -> Checklist {
    use alloc::vec;
    Checklist {
        items: vec![
            ("prismatic directions independent", nonpar(s(4), s(5))),
            ("revolute directions independent", triple(s(1), s(2), s(3))),
            (
                "prismatics orthogonal to s3",
                all(vec![dot0(s(3), s(4)), dot0(s(3), s(5))]),
            ),
            (
                "revolutes 1, 2 through center",
                all(vec![centered(1), centered(2)]),
            ),
        ],
        verdict: Verdict::All(items(4)),
    }
}

fn four_revolute() -> Checklist {
    use alloc::vec;
    Checklist {
        items: vec![
            (
                "revolutes through center",
                all(vec![centered(1), centered(2), centered(3), centered(4)]),
            ),
            (
                "directions span space",
                Cond::Leaf(Leaf::SpanRank3(vec![s(1), s(2), s(3), s(4)])),
            ),
        ],
        verdict: Verdict::All(items(2)),
    }
}

fn three_revolute() -> Checklist {
    use alloc::vec;
    Checklist {
        items: vec![
            (
                "revolutes through center",
                all(vec![centered(1), centered(2), centered(3)]),
            ),
            ("revolute directions independent", triple(s(1), s(2), s(3))),
        ],
        verdict: Verdict::All(items(2)),
    }
}

/// Condition list for a table row, in role numbering.
pub fn checklist_for(descriptor: &VariantDescriptor) -> Checklist {
    match (descriptor.class.system, descriptor.class.case_tag) {
        (SystemFamily::S5_0, CaseTag::CaseI) => five_revolute_case_i(),
        (SystemFamily::S5_0, _) => five_revolute_case_ii(),
        (SystemFamily::S4_0_1inf, _) => four_revolute_one_prismatic(),
        (SystemFamily::S3_0_2inf, CaseTag::CaseI) => three_revolute_two_prismatic_case_i(),
        (SystemFamily::S3_0_2inf, _) => three_revolute_two_prismatic_case_ii(),
        (SystemFamily::S4_0, _) => four_revolute(),
        // the prismatic joint does not enter the conditions
        (SystemFamily::S3_0_1inf, _) | (SystemFamily::S3_0, _) => three_revolute(),
        (SystemFamily::Other, _) => Checklist {
            items: Vec::new(),
            verdict: Verdict::All(Vec::new()),
        },
    }
}

/// Evaluates the descriptor's condition list on a limb whose joints follow
/// the descriptor's pattern.
pub fn check_case_conditions(
    limb: &LimbModel,
    descriptor: &VariantDescriptor,
) -> Result<ConditionChecklist> {
    let types: Vec<_> = limb.joints().iter().map(|j| j.joint_type).collect();
    let expected: Vec<_> = descriptor.pattern.iter().map(|p| p.joint_type).collect();
    if types != expected {
        return Err(Error::SystemMismatch {
            reason: format!(
                "limb joints {} do not follow descriptor {}",
                limb.pattern(),
                descriptor.id
            ),
        });
    }
    let roles = descriptor.roles();
    let s: Vec<Vec3> = roles.iter().map(|&p| limb.s(p)).collect();
    let l: Vec<Vec3> = roles.iter().map(|&p| limb.l(p)).collect();
    let list = checklist_for(descriptor);
    let mut results = Vec::with_capacity(list.items.len());
    for (name, cond) in &list.items {
        let mut leaves = Vec::new();
        let pass = cond.eval(&s, &l, &mut leaves);
        results.push(ItemResult {
            name,
            text: format!("{cond}"),
            pass,
            leaves,
        });
    }
    let flags: Vec<bool> = results.iter().map(|r| r.pass).collect();
    Ok(ConditionChecklist {
        descriptor: descriptor.id.clone(),
        overall: list.verdict.eval(&flags),
        items: results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limb::{build_limb, JointSpec, LimbSpec};

    fn rrrpp(l1: Vec3) -> LimbModel {
        build_limb(LimbSpec {
            joints: alloc::vec![
                JointSpec::revolute(Vec3::z(), l1),
                JointSpec::revolute(Vec3::y(), Vec3::zeros()),
                JointSpec::revolute(Vec3::x(), Vec3::zeros()),
                JointSpec::prismatic(Vec3::new(1.0, 1.0, 0.0)),
                JointSpec::prismatic(Vec3::new(0.0, 1.0, 1.0)),
            ],
            center: Vec3::zeros(),
        })
        .unwrap()
    }

    #[test]
    fn three_revolute_two_prismatic_through_center() {
        let d: VariantDescriptor = "R^i R^i R^i P P".parse().unwrap();
        let r = check_case_conditions(&rrrpp(Vec3::zeros()), &d).unwrap();
        assert!(r.overall);
        let r = check_case_conditions(&rrrpp(Vec3::new(0.3, 0.0, 0.0)), &d).unwrap();
        assert!(!r.overall);
    }

    #[test]
    fn offset_along_the_axis_still_passes_through_center() {
        let d: VariantDescriptor = "R^i R^i R^i P P".parse().unwrap();
        let r = check_case_conditions(&rrrpp(Vec3::new(0.0, 0.0, 0.3)), &d).unwrap();
        assert!(r.overall);
    }

    #[test]
    fn mismatched_pattern_is_rejected() {
        let d: VariantDescriptor = "R^i R^i R^i".parse().unwrap();
        assert!(matches!(
            check_case_conditions(&rrrpp(Vec3::zeros()), &d),
            Err(Error::SystemMismatch { .. })
        ));
    }

    #[test]
    fn rendering() {
        let c = any(alloc::vec![
            cross0(s(1), l(3)),
            dot0(d(1, 2), x(s(1), s(3)))
        ]);
        assert_eq!(alloc::format!("{c}"), "s1×l3 = 0 ∨ l12·(s1×s3) = 0");
    }
}
