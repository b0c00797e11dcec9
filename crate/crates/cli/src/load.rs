//! Resolving `builtin:NAME` references and JSON object files.

use std::fs;

use qk_core::algebras::{AlgebraSpec, CommRingPres, CommRingSpec, FinDimAlgebra};
use qk_core::builtins::{builtin_algebra, builtin_group_spec, builtin_presentation};
use qk_core::groups::{make_group, FinGroup, GroupSpec};
use qk_core::{QkError, Result};
use serde::de::DeserializeOwned;
use serde_json::Value;

const BUILTIN: &str = "builtin:";

fn read_json<T: DeserializeOwned>(kind: &str, path: &str) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| QkError::Parse(format!("{kind} file `{path}`: {e}")))?;
    serde_json::from_str(&text).map_err(|e| QkError::Parse(format!("{kind} file `{path}`: {e}")))
}

pub fn group_spec(reference: &str) -> Result<GroupSpec> {
    match reference.strip_prefix(BUILTIN) {
        Some(name) => builtin_group_spec(name),
        None => read_json("group", reference),
    }
}

pub fn group(reference: &str) -> Result<FinGroup> {
    make_group(&group_spec(reference)?)
        .map_err(|e| QkError::GroupAxiom(format!("group `{reference}`: {}", strip_kind(&e))))
}

fn strip_kind(e: &QkError) -> String {
    match e {
        QkError::GroupAxiom(m) => m.clone(),
        other => other.to_string(),
    }
}

/// An algebra given by structure constants or by a presentation.
pub enum LoadedAlgebra {
    Constants(FinDimAlgebra),
    Presented(CommRingPres),
}

impl LoadedAlgebra {
    pub fn algebra(&self) -> Result<FinDimAlgebra> {
        match self {
            LoadedAlgebra::Constants(a) => Ok(a.clone()),
            LoadedAlgebra::Presented(r) => r.to_algebra(),
        }
    }

    pub fn presentation(&self) -> Option<&CommRingPres> {
        match self {
            LoadedAlgebra::Presented(r) => Some(r),
            LoadedAlgebra::Constants(_) => None,
        }
    }
}

/// Files with a `vars` key are commutative-ring presentations; anything
/// else is read as structure constants.
pub fn algebra(reference: &str) -> Result<LoadedAlgebra> {
    if let Some(name) = reference.strip_prefix(BUILTIN) {
        return Ok(match builtin_presentation(name)? {
            Some(r) => LoadedAlgebra::Presented(r),
            None => LoadedAlgebra::Constants(builtin_algebra(name)?),
        });
    }
    let value: Value = read_json("algebra", reference)?;
    let wrap = |e: serde_json::Error| QkError::Parse(format!("algebra file `{reference}`: {e}"));
    if value.get("vars").is_some() {
        let spec: CommRingSpec = serde_json::from_value(value).map_err(wrap)?;
        Ok(LoadedAlgebra::Presented(spec.build()?))
    } else {
        let spec: AlgebraSpec = serde_json::from_value(value).map_err(wrap)?;
        Ok(LoadedAlgebra::Constants(spec.build()?))
    }
}
