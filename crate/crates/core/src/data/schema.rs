use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariableKind {
    Categorical,
    Numeric,
}

/// One column declaration.
///
/// Categorical variables carry an ordered dictionary of labels; a cell stores
/// the index into that dictionary. Raw strings listed in `missing_codes` (and
/// the empty string) load as Missing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    pub kind: VariableKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub missing_codes: Vec<String>,
}

impl VariableSpec {
    pub fn categorical<S: Into<String>>(name: impl Into<String>, categories: impl IntoIterator<Item = S>) -> Self {
        VariableSpec {
            name: name.into(),
            kind: VariableKind::Categorical,
            categories: categories.into_iter().map(Into::into).collect(),
            missing_codes: Vec::new(),
        }
    }

    pub fn numeric(name: impl Into<String>) -> Self {
        VariableSpec {
            name: name.into(),
            kind: VariableKind::Numeric,
            categories: Vec::new(),
            missing_codes: Vec::new(),
        }
    }

    pub fn with_missing_codes<S: Into<String>>(mut self, codes: impl IntoIterator<Item = S>) -> Self {
        self.missing_codes = codes.into_iter().map(Into::into).collect();
        self
    }

    pub fn is_categorical(&self) -> bool {
        self.kind == VariableKind::Categorical
    }

    pub fn is_missing_code(&self, raw: &str) -> bool {
        raw.is_empty() || self.missing_codes.iter().any(|c| c == raw)
    }

    pub fn category_index(&self, label: &str) -> Option<u32> {
        self.categories.iter().position(|c| c == label).map(|i| i as u32)
    }

    /// Label written for Missing cells.
    pub fn missing_label(&self) -> &str {
        self.missing_codes.first().map(String::as_str).unwrap_or("")
    }
}

/// Ordered set of variable declarations.
///
/// Serialized as TOML:
///
/// ```toml
/// infer_categories = false
///
/// [[variables]]
/// name = "AGE"
/// kind = "numeric"
/// missing_codes = ["NA"]
///
/// [[variables]]
/// name = "SEX"
/// kind = "categorical"
/// categories = ["1", "2"]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    /// When set, categorical values absent from `categories` are appended in
    /// first-seen order instead of being rejected.
    #[serde(default)]
    pub infer_categories: bool,
    pub variables: Vec<VariableSpec>,
}

impl Schema {
    pub fn new(variables: Vec<VariableSpec>) -> Result<Self> {
        let schema = Schema {
            infer_categories: false,
            variables,
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn inferring(mut self, on: bool) -> Self {
        self.infer_categories = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.variables.len() < 2 {
            return Err(Error::InvalidSchema(format!(
                "need at least 2 variables, found {}",
                self.variables.len()
            )));
        }
        let mut names = HashSet::new();
        for v in &self.variables {
            if !names.insert(v.name.as_str()) {
                return Err(Error::InvalidSchema(format!("duplicate variable `{}`", v.name)));
            }
            match v.kind {
                VariableKind::Categorical => {
                    if v.categories.is_empty() && !self.infer_categories {
                        return Err(Error::InvalidSchema(format!(
                            "categorical variable `{}` has no categories",
                            v.name
                        )));
                    }
                    let mut seen = HashSet::new();
                    for c in &v.categories {
                        if !seen.insert(c.as_str()) {
                            return Err(Error::InvalidSchema(format!(
                                "duplicate category `{c}` in `{}`",
                                v.name
                            )));
                        }
                    }
                }
                VariableKind::Numeric => {
                    if !v.categories.is_empty() {
                        return Err(Error::InvalidSchema(format!(
                            "numeric variable `{}` declares categories",
                            v.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn variable(&self, name: &str) -> Result<&VariableSpec> {
        self.index_of(name).map(|i| &self.variables[i])
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.variables.iter().map(|v| v.name.as_str())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let schema: Schema =
            toml::from_str(text).map_err(|e| Error::Config(format!("schema: {e}")))?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("schema serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| e.context(path.display().to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_toml_string()).map_err(|e| Error::io(path, e))
    }
}
