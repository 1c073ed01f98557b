//! Symbolic limb descriptors such as `R^i R^i R^p R^p P^p`.
//!
//! ```text
//! descriptor := token (ws* token)* ws* ("@off")?
//! token      := ("R" | "P") ("^" ("i" | "p") digit*)?
//! ```
//!
//! `^i` marks joints whose axes meet at the common point, `^p` marks members
//! of the parallel group, and an optional group number (default 1) is
//! accepted for future multi-group rows. `@off` places the common point away
//! from the platform center.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::constraint::{CaseTag, SystemFamily, VariantClass};
use crate::error::{Error, Result};
use crate::limb::{JointType, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Marker {
    /// Axis through the common intersection point.
    I,
    /// Member of the parallel group.
    P,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointSymbol {
    pub joint_type: JointType,
    pub marker: Marker,
    pub group: u8,
}

impl JointSymbol {
    pub const fn new(joint_type: JointType, marker: Marker) -> Self {
        Self {
            joint_type,
            marker,
            group: 1,
        }
    }

    pub const RI: JointSymbol = JointSymbol::new(JointType::Revolute, Marker::I);
    pub const RP: JointSymbol = JointSymbol::new(JointType::Revolute, Marker::P);
    pub const R: JointSymbol = JointSymbol::new(JointType::Revolute, Marker::None);
    pub const PP: JointSymbol = JointSymbol::new(JointType::Prismatic, Marker::P);
    pub const P: JointSymbol = JointSymbol::new(JointType::Prismatic, Marker::None);
}

impl fmt::Display for JointSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.joint_type.symbol())?;
        match self.marker {
            Marker::I => f.write_str("^i")?,
            Marker::P => f.write_str("^p")?,
            Marker::None => return Ok(()),
        }
        if self.group != 1 {
            write!(f, "{}", self.group)?;
        }
        Ok(())
    }
}

/// Parses the joint tokens and the `@off` flag without consulting the table.
pub fn parse_pattern(input: &str) -> Result<(Vec<JointSymbol>, bool)> {
    let bad = |reason: &str| Error::InvalidDescriptor {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let mut text = input.trim();
    let mut off = false;
    if let Some(head) = text.strip_suffix("@off") {
        off = true;
        text = head.trim_end();
    }
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let joint_type = match c {
            'R' => JointType::Revolute,
            'P' => JointType::Prismatic,
            _ => return Err(bad(&alloc::format!("unexpected character '{c}'"))),
        };
        i += 1;
        let mut sym = JointSymbol::new(joint_type, Marker::None);
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            sym.marker = match chars.get(i) {
                Some('i') => Marker::I,
                Some('p') => Marker::P,
                _ => return Err(bad("expected 'i' or 'p' after '^'")),
            };
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i > start {
                let digits: String = chars[start..i].iter().collect();
                sym.group = digits
                    .parse::<u8>()
                    .ok()
                    .filter(|g| *g >= 1)
                    .ok_or_else(|| bad("group number must be between 1 and 255"))?;
            }
        }
        out.push(sym);
    }
    if out.is_empty() {
        return Err(bad("no joints"));
    }
    Ok((out, off))
}

pub fn pattern_signature(pattern: &[JointSymbol]) -> Signature {
    let n_zero = pattern
        .iter()
        .filter(|s| s.joint_type == JointType::Revolute)
        .count();
    Signature {
        n_zero,
        n_inf: pattern.len() - n_zero,
    }
}

/// Family and case implied by a pattern alone.
pub fn pattern_class(pattern: &[JointSymbol]) -> VariantClass {
    let system = SystemFamily::from_signature(pattern_signature(pattern));
    let has_p = pattern.iter().any(|s| s.marker == Marker::P);
    let case_tag = match system {
        SystemFamily::S5_0 | SystemFamily::S4_0_1inf | SystemFamily::S3_0_2inf => {
            if has_p {
                CaseTag::CaseII
            } else {
                CaseTag::CaseI
            }
        }
        SystemFamily::S4_0 | SystemFamily::S3_0 => CaseTag::CaseI,
        SystemFamily::S3_0_1inf => CaseTag::CaseII,
        SystemFamily::Other => CaseTag::NotApplicable,
    };
    VariantClass { system, case_tag }
}

pub fn canonical_id(pattern: &[JointSymbol], intersection_at_center: bool) -> String {
    let mut s = pattern
        .iter()
        .map(|j| j.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    if !intersection_at_center {
        s.push_str(" @off");
    }
    s
}

/// One row of the limb-variant table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariantDescriptor {
    pub class: VariantClass,
    pub pattern: Vec<JointSymbol>,
    pub intersection_at_center: bool,
    pub redundant: bool,
    pub note: &'static str,
    pub id: String,
}

impl VariantDescriptor {
    pub(crate) fn new(
        pattern: Vec<JointSymbol>,
        intersection_at_center: bool,
        note: &'static str,
    ) -> Self {
        let class = pattern_class(&pattern);
        Self {
            id: canonical_id(&pattern, intersection_at_center),
            redundant: class.system == SystemFamily::S4_0,
            class,
            pattern,
            intersection_at_center,
            note,
        }
    }

    pub fn system(&self) -> SystemFamily {
        self.class.system
    }

    pub fn len(&self) -> usize {
        self.pattern.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pattern.is_empty()
    }

    fn positions(&self, pred: impl Fn(&JointSymbol) -> bool) -> Vec<usize> {
        (0..self.pattern.len())
            .filter(|&i| pred(&self.pattern[i]))
            .collect()
    }

    /// Pattern position playing each checklist role, in role order.
    ///
    /// Roles are the joint numbers used by the family's condition list, so
    /// e.g. role 1 and role 2 of a five-revolute case I limb are the parallel
    /// pair.
    pub fn roles(&self) -> Vec<usize> {
        let is =
            |t: JointType, m: Marker| move |s: &JointSymbol| s.joint_type == t && s.marker == m;
        let ri = self.positions(is(JointType::Revolute, Marker::I));
        let rp = self.positions(is(JointType::Revolute, Marker::P));
        let ru = self.positions(is(JointType::Revolute, Marker::None));
        let prismatic = self.positions(|s| s.joint_type == JointType::Prismatic);
        let revolute = self.positions(|s| s.joint_type == JointType::Revolute);
        match (self.class.system, self.class.case_tag) {
            (SystemFamily::S5_0, CaseTag::CaseI) if ri.len() == 3 => {
                alloc::vec![ri[0], ru[0], ri[1], ru[1], ri[2]]
            }
            (SystemFamily::S5_0, CaseTag::CaseI) => alloc::vec![ri[0], ru[0], ri[1], ru[1], ru[2]],
            (SystemFamily::S5_0, CaseTag::CaseII) => alloc::vec![rp[0], rp[1], rp[2], ri[0], ri[1]],
            (SystemFamily::S4_0_1inf, CaseTag::CaseI) => {
                alloc::vec![ri[0], ru[0], ri[1], ri[2], prismatic[0]]
            }
            (SystemFamily::S4_0_1inf, CaseTag::CaseII) => {
                alloc::vec![rp[0], rp[1], ri[0], ri[1], prismatic[0]]
            }
            (SystemFamily::S3_0_2inf, CaseTag::CaseII) => {
                alloc::vec![ri[0], ri[1], rp[0], prismatic[0], prismatic[1]]
            }
            _ => revolute.into_iter().chain(prismatic).collect(),
        }
    }
}

impl fmt::Display for VariantDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

impl FromStr for VariantDescriptor {
    type Err = Error;

    /// Parses an id and resolves it against the table.
    fn from_str(s: &str) -> Result<Self> {
        let (pattern, off) = parse_pattern(s)?;
        let id = canonical_id(&pattern, !off);
        super::table::catalog()
            .into_iter()
            .find(|d| d.id == id)
            .ok_or(Error::InvalidDescriptor {
                input: s.to_string(),
                reason: String::from("not a row of the limb-variant table"),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_and_without_spaces() {
        let (a, off) = parse_pattern("R^i R^i R^p R^p P^p").unwrap();
        let (b, _) = parse_pattern("R^iR^iR^pR^pP^p").unwrap();
        assert_eq!(a, b);
        assert!(!off);
        assert_eq!(a[4], JointSymbol::PP);
        let (c, off) = parse_pattern("R^p R^p R^p R^i R^i @off").unwrap();
        assert!(off);
        assert_eq!(c.len(), 5);
    }

    #[test]
    fn group_one_is_the_default() {
        let (a, _) = parse_pattern("R^i1 R^i R").unwrap();
        assert_eq!(canonical_id(&a, true), "R^i R^i R");
        let (b, _) = parse_pattern("R^p2 R^p2 P").unwrap();
        assert_eq!(canonical_id(&b, true), "R^p2 R^p2 P");
    }

    #[test]
    fn rejects_bad_tokens() {
        assert!(parse_pattern("R^x").is_err());
        assert!(parse_pattern("Q R R").is_err());
        assert!(parse_pattern("").is_err());
        assert!(parse_pattern("R^i0").is_err());
    }

    #[test]
    fn class_from_pattern() {
        let (p, _) = parse_pattern("R R R P P").unwrap();
        assert_eq!(pattern_class(&p).system, SystemFamily::S3_0_2inf);
        let (p, _) = parse_pattern("R^i R^i R^p P^p P^p").unwrap();
        assert_eq!(pattern_class(&p).case_tag, CaseTag::CaseII);
        let (p, _) = parse_pattern("R^i R^i R^i P").unwrap();
        assert_eq!(pattern_class(&p).case_tag, CaseTag::CaseII);
    }

    #[test]
    fn resolves_table_rows_only() {
        let d: VariantDescriptor = "R^iR^iR^i".parse().unwrap();
        assert_eq!(d.id, "R^i R^i R^i");
        assert!("R R R".parse::<VariantDescriptor>().is_err());
    }
}
