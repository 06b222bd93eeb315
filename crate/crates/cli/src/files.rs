//! On-disk formats: category files and twin-pair files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use cotorsion_core::repcore::QuiverPresentation;
use cotorsion_core::serialcat::CategoryCtx;
use cotorsion_core::subcat::Subcategory;
use cotorsion_core::FiniteField;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::expr::{self, Expr};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

/// A linear Nakayama algebra over a prime field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub kind: CategoryKind,
    pub n: usize,
    /// Zero relations `[a, b]`: the path from `b` down to `a` vanishes.
    #[serde(default)]
    pub relations: Vec<[usize; 2]>,
    pub field_char: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CategoryKind {
    NakayamaLinear,
}

impl CategoryFile {
    /// Builds a file from a presentation, keeping its normalized relations.
    pub fn new(pres: &QuiverPresentation, field_char: u32) -> Self {
        CategoryFile {
            schema_version: SCHEMA_VERSION,
            kind: CategoryKind::NakayamaLinear,
            n: pres.n(),
            relations: pres.relations().iter().map(|&(a, b)| [a, b]).collect(),
            field_char,
        }
    }

    pub fn presentation(&self) -> CliResult<QuiverPresentation> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "category file has schema version {}, expected {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        Ok(QuiverPresentation::new(
            self.n,
            self.relations.iter().map(|r| (r[0], r[1])),
        )?)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        read_json(path)
    }
}

/// How a class is given: a list of indecomposables or an expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassDef {
    List(Vec<String>),
    Expr(String),
}

/// The four classes of a twin pair `((S, T), (U, V))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairsFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(rename = "S")]
    pub s: ClassDef,
    #[serde(rename = "T")]
    pub t: ClassDef,
    #[serde(rename = "U")]
    pub u: ClassDef,
    #[serde(rename = "V")]
    pub v: ClassDef,
}

/// The resolved classes of a pairs file.
#[derive(Clone, Debug)]
pub struct Classes {
    pub s: Subcategory,
    pub t: Subcategory,
    pub u: Subcategory,
    pub v: Subcategory,
}

impl PairsFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        read_json(path)
    }

    /// An environment in which the four classes, and expressions over them, resolve.
    pub fn env<'a, F: FiniteField>(
        &'a self,
        ctx: &'a CategoryCtx<F>,
    ) -> CliResult<expr::Env<'a, F>> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "pairs file has schema version {}, expected {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        let mut defs: BTreeMap<&str, Expr> = BTreeMap::new();
        for (name, def) in [
            ("S", &self.s),
            ("T", &self.t),
            ("U", &self.u),
            ("V", &self.v),
        ] {
            let e = match def {
                ClassDef::List(items) => Expr::Add(
                    items
                        .iter()
                        .map(|s| expr::parse_interval(s).map(Expr::Literal))
                        .collect::<CliResult<_>>()?,
                ),
                ClassDef::Expr(s) => expr::parse(s)?,
            };
            defs.insert(name, e);
        }
        Ok(expr::Env::new(ctx, defs))
    }

    /// Resolves every definition; expressions may refer to the other classes by name.
    pub fn resolve<F: FiniteField>(&self, ctx: &CategoryCtx<F>) -> CliResult<Classes> {
        let mut env = self.env(ctx)?;
        Ok(Classes {
            s: env.resolve("S")?,
            t: env.resolve("T")?,
            u: env.resolve("U")?,
            v: env.resolve("V")?,
        })
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Writes pretty JSON through a temporary file and a rename.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(|e| CliError::Io(tmp.display().to_string(), e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::Io(path.display().to_string(), e))
}
