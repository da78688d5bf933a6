//! Versioned JSON files and the exit-code taxonomy.

use std::fmt;
use std::path::{Path, PathBuf};

use cubicpoles::config::{Instance, PointSet};
use cubicpoles::{rational, Error, ProjPoint};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;
pub const EXIT_PARSE: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(EXIT_PARSE, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Verification(_) => EXIT_VERIFICATION,
            Error::Unsupported(_) => EXIT_UNSUPPORTED,
            Error::Parse(_) => EXIT_PARSE,
            _ => EXIT_PRECONDITION,
        };
        CliError::new(code, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Any file body with its `schema_version`.
#[derive(Serialize, Deserialize)]
pub struct Versioned<T> {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Versioned<T> {
    pub fn new(body: T) -> Self {
        Versioned { schema_version: SCHEMA_VERSION, body }
    }
}

fn describe(path: &Path, e: &serde_json::Error) -> CliError {
    CliError::parse(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()))
}

fn read_text(path: &Path) -> CliResult<(String, serde_json::Value)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| describe(path, &e))?;
    match value.get("schema_version").and_then(|v| v.as_u64()) {
        Some(v) if v == SCHEMA_VERSION as u64 => Ok((text, value)),
        Some(v) => Err(CliError::parse(format!("{}: field schema_version: unsupported version {v}", path.display()))),
        None => Err(CliError::parse(format!("{}: field schema_version: missing", path.display()))),
    }
}

/// Reads a versioned file whose body is `T`. Errors name the line, column and field path.
pub fn read<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let (text, _) = read_text(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        CliError::parse(format!(
            "{}: line {} column {}: field {}: {inner}",
            path.display(),
            inner.line(),
            inner.column(),
            e.path()
        ))
    })
}

pub fn has_field(path: &Path, field: &str) -> CliResult<bool> {
    Ok(read_text(path)?.1.get(field).is_some())
}

/// A bare point file: labeled points and an optional extra point.
#[derive(Serialize, Deserialize)]
pub struct PointsFile {
    pub points: PointSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_point: Option<ProjPoint>,
}

pub enum PointsInput {
    Instance(Instance),
    Points(PointsFile),
}

impl PointsInput {
    pub fn read(path: &Path) -> CliResult<Self> {
        if has_field(path, "kind")? {
            let inst: Versioned<Instance> = read(path)?;
            Ok(PointsInput::Instance(inst.body))
        } else {
            let pts: Versioned<PointsFile> = read(path)?;
            Ok(PointsInput::Points(pts.body))
        }
    }

    pub fn points(&self) -> &PointSet {
        match self {
            PointsInput::Instance(i) => &i.points,
            PointsInput::Points(p) => &p.points,
        }
    }

    pub fn extra_point(&self) -> Option<&ProjPoint> {
        match self {
            PointsInput::Instance(i) => i.extra_point.as_ref(),
            PointsInput::Points(p) => p.extra_point.as_ref(),
        }
    }
}

/// `x,y,z` with rational entries such as `1/2`.
pub fn parse_point(s: &str) -> CliResult<ProjPoint> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y, z] = parts.as_slice() else {
        return Err(CliError::parse(format!("point `{s}`: expected three comma-separated coordinates")));
    };
    let q = |t: &str| rational::parse(t).map_err(|e| CliError::parse(format!("point `{s}`: {e}")));
    Ok(ProjPoint::new(q(x)?, q(y)?, q(z)?)?)
}

/// Writes `body` with a schema version to `out`, or to stdout when `out` is `None`.
pub fn emit<T: Serialize>(out: Option<&PathBuf>, body: T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(&Versioned::new(body)).expect("reports serialize") + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::new(EXIT_PRECONDITION, format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kinds() {
        assert_eq!(CliError::from(Error::Precondition("x".into())).code, EXIT_PRECONDITION);
        assert_eq!(CliError::from(Error::Verification("x".into())).code, EXIT_VERIFICATION);
        assert_eq!(CliError::from(Error::Unsupported("x".into())).code, EXIT_UNSUPPORTED);
        assert_eq!(CliError::from(Error::Parse("x".into())).code, EXIT_PARSE);
    }

    #[test]
    fn points_parse_from_text() {
        assert_eq!(parse_point("1/2, 3, 1").unwrap(), ProjPoint::affine(rational::rat(1, 2), rational::int(3)));
        assert_eq!(parse_point("1,2").unwrap_err().code, EXIT_PARSE);
        assert_eq!(parse_point("0,0,0").unwrap_err().code, EXIT_PRECONDITION);
    }
}
