//! Limb-spec files (TOML).
//!
//! ```toml
//! center = [0.0, 0.0, 0.0]
//! descriptor = "R^i R^i R^i"   # optional, selects the condition list
//!
//! [[joints]]
//! type = "R"
//! direction = [1.0, 0.0, 0.0]
//! point = [0.0, 0.0, 0.0]
//!
//! [[joints]]
//! type = "P"
//! direction = [0.0, 1.0, 0.0]
//! ```
//!
//! The full grammar is in `docs/limb-spec.md`.

use std::fmt;
use std::ops::Range;

use serde::Deserialize;
use spherolimb_core::{build_limb, JointSpec, LimbSpec, Vec3};
use toml::Spanned;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecError {
    Parse(ParseError),
    /// The file is well formed but does not describe a valid limb.
    Validation(spherolimb_core::Error),
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Parse(e) => write!(f, "parse error at {e}"),
            SpecError::Validation(e) => write!(f, "invalid limb: {e}"),
        }
    }
}

impl std::error::Error for SpecError {}

#[derive(Debug, Clone, PartialEq)]
pub struct LimbSpecFile {
    pub spec: LimbSpec,
    pub descriptor: Option<String>,
    pub warnings: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    center: [f64; 3],
    descriptor: Option<String>,
    joints: Vec<RawJoint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJoint {
    #[serde(rename = "type")]
    kind: Spanned<String>,
    direction: [f64; 3],
    point: Option<Spanned<[f64; 3]>>,
}

/// 1-based line and column of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn error_at(text: &str, span: Option<Range<usize>>, message: String) -> SpecError {
    let (line, column) = span.map_or((1, 1), |s| position(text, s.start));
    SpecError::Parse(ParseError {
        line,
        column,
        message,
    })
}

pub fn parse_limb_spec(text: &str) -> Result<LimbSpecFile, SpecError> {
    let raw: RawFile = toml::from_str(text)
        .map_err(|e| error_at(text, e.span(), e.message().trim().to_string()))?;
    let mut warnings = Vec::new();
    let mut joints = Vec::with_capacity(raw.joints.len());
    for (i, j) in raw.joints.iter().enumerate() {
        let direction = Vec3::from(j.direction);
        match j.kind.get_ref().as_str() {
            "R" => {
                let Some(point) = &j.point else {
                    return Err(error_at(
                        text,
                        Some(j.kind.span()),
                        format!("joints[{i}]: revolute joint needs a `point`"),
                    ));
                };
                joints.push(JointSpec::revolute(direction, Vec3::from(*point.get_ref())));
            }
            "P" => {
                if let Some(point) = &j.point {
                    let (line, _) = position(text, point.span().start);
                    warnings.push(format!(
                        "line {line}: joints[{i}].point is ignored for a prismatic joint"
                    ));
                }
                joints.push(JointSpec::prismatic(direction));
            }
            other => {
                return Err(error_at(
                    text,
                    Some(j.kind.span()),
                    format!(
                        "joints[{i}].type: unknown joint type {other:?}, expected \"R\" or \"P\""
                    ),
                ))
            }
        }
    }
    let spec = LimbSpec {
        joints,
        center: Vec3::from(raw.center),
    };
    build_limb(spec.clone()).map_err(SpecError::Validation)?;
    Ok(LimbSpecFile {
        spec,
        descriptor: raw.descriptor,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE_R: &str = r#"
center = [0.0, 0.0, 0.0]

[[joints]]
type = "R"
direction = [1.0, 0.0, 0.0]
point = [0.0, 0.0, 0.0]

[[joints]]
type = "R"
direction = [0.0, 1.0, 0.0]
point = [0.0, 0.5, 0.0]

[[joints]]
type = "R"
direction = [0.0, 0.0, 1.0]
point = [0.0, 0.0, -1.0]
"#;

    #[test]
    fn three_revolutes() {
        let f = parse_limb_spec(THREE_R).unwrap();
        assert_eq!(f.spec.joints.len(), 3);
        assert!(f.warnings.is_empty());
        assert_eq!(f.descriptor, None);
    }

    #[test]
    fn unknown_joint_type_names_the_field() {
        let text = THREE_R.replacen("type = \"R\"", "type = \"Q\"", 1);
        let SpecError::Parse(e) = parse_limb_spec(&text).unwrap_err() else {
            panic!("expected a parse error");
        };
        assert!(e.message.contains("joints[0].type"), "{e}");
        assert_eq!(e.line, 5);
        assert_eq!(e.column, 8);
    }

    #[test]
    fn prismatic_point_is_ignored_with_a_warning() {
        let text = THREE_R.replacen("type = \"R\"", "type = \"P\"", 1);
        let f = parse_limb_spec(&text).unwrap();
        assert_eq!(f.warnings.len(), 1);
        assert!(f.warnings[0].contains("joints[0].point"));
        assert_eq!(f.spec.joints[0].point, Vec3::zeros());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = THREE_R.replacen("center", "centre", 1);
        let SpecError::Parse(e) = parse_limb_spec(&text).unwrap_err() else {
            panic!("expected a parse error");
        };
        assert_eq!(e.line, 2);
        assert!(e.message.contains("centre"), "{e}");
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let SpecError::Parse(e) = parse_limb_spec("center = [0, 0,\n").unwrap_err() else {
            panic!("expected a parse error");
        };
        assert!(e.line >= 1);
    }

    #[test]
    fn validation_mirrors_the_core() {
        let text = THREE_R.replacen("[1.0, 0.0, 0.0]", "[0.0, 0.0, 0.0]", 1);
        assert_eq!(
            parse_limb_spec(&text),
            Err(SpecError::Validation(spherolimb_core::Error::ZeroDirection))
        );
    }
}
