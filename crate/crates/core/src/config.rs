//! TOML job configuration.
//!
//! ```toml
//! output = "json"          # or "text"
//! check_level = "fast"     # or "full"
//! epsilon = 2
//!
//! [surface]
//! n = 1
//! A = ["0", "1"]           # coefficients, lowest degree first
//! B = [0, 1]
//!
//! [cover]
//! type = "abstract"        # or "superelliptic" with m and f
//! genus = 0
//! group = { kind = "cyclic", m = 2 }
//! branch = [{ point = "1", inertia = 1 }, { point = "2", inertia = 1 }]
//! ```

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::covers::{BranchPoint, Cover};
use crate::engine::BundleSpec;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::repring::{CharacterTable, FiniteGroup, TableHint};
use crate::weierstrass::WeierstrassSurface;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckLevel {
    #[default]
    Fast,
    Full,
}

/// A rational coefficient written as an integer or a `"num/den"` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Str(String),
}

impl Coefficient {
    fn as_string(&self) -> String {
        match self {
            Coefficient::Int(i) => i.to_string(),
            Coefficient::Str(s) => s.clone(),
        }
    }
}

pub fn parse_poly(coeffs: &[Coefficient]) -> Result<Poly> {
    let strs: Vec<String> = coeffs.iter().map(Coefficient::as_string).collect();
    Poly::from_strs(&strs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub n: u32,
    #[serde(rename = "A")]
    pub a: Vec<Coefficient>,
    #[serde(rename = "B")]
    pub b: Vec<Coefficient>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupConfig {
    Cyclic {
        m: usize,
    },
    Dihedral {
        m: usize,
    },
    /// Cayley table (row-major) and characters as `[re, im]` pairs, one row
    /// per irreducible character and one column per group element; row 0 is
    /// the trivial character.
    Table {
        cayley: Vec<Vec<usize>>,
        characters: Vec<Vec<[f64; 2]>>,
    },
}

impl GroupConfig {
    pub fn build(&self) -> Result<CharacterTable> {
        match self {
            GroupConfig::Cyclic { m } => CharacterTable::cyclic(*m),
            GroupConfig::Dihedral { m } => CharacterTable::dihedral(*m),
            GroupConfig::Table { cayley, characters } => {
                let group = FiniteGroup::from_cayley(cayley)?;
                let rows = characters
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|[re, im]| Complex64::new(*re, *im))
                            .collect()
                    })
                    .collect();
                CharacterTable::new(group, TableHint::User(rows))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchConfig {
    /// A rational number, `"inf"`, or an opaque label.
    pub point: String,
    /// Index of the inertia generator in the group's element numbering.
    pub inertia: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CoverConfig {
    Superelliptic {
        m: u32,
        f: Vec<Coefficient>,
    },
    Abstract {
        #[serde(default)]
        genus: u32,
        group: GroupConfig,
        #[serde(default)]
        branch: Vec<BranchConfig>,
    },
}

impl CoverConfig {
    pub fn build(&self) -> Result<Cover> {
        match self {
            CoverConfig::Superelliptic { m, f } => Cover::superelliptic(*m, parse_poly(f)?),
            CoverConfig::Abstract {
                genus,
                group,
                branch,
            } => {
                let table = Arc::new(group.build()?);
                let branch = branch
                    .iter()
                    .map(|b| (BranchPoint::parse(&b.point), b.inertia))
                    .collect();
                Cover::abstract_cover(table, *genus, branch)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleConfig {
    /// Summand degrees; omitted means the Weierstrass bundle of `[surface]`.
    pub degrees: Option<Vec<i64>>,
    pub ell: Option<i64>,
    pub d: Option<i64>,
    pub lefschetz: Option<bool>,
    #[serde(default)]
    pub singular: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    pub p: Option<usize>,
    pub q: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default)]
    pub output: OutputFormat,
    #[serde(default)]
    pub check_level: CheckLevel,
    pub epsilon: Option<u32>,
    pub surface: Option<SurfaceConfig>,
    pub cover: Option<CoverConfig>,
    pub bundle: Option<BundleConfig>,
    pub engine: Option<EngineConfig>,
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn surface(&self) -> Result<WeierstrassSurface> {
        let s = self
            .surface
            .as_ref()
            .ok_or_else(|| Error::Config("missing [surface] section".into()))?;
        WeierstrassSurface::new(s.n, parse_poly(&s.a)?, parse_poly(&s.b)?)
    }

    pub fn cover(&self) -> Result<Cover> {
        self.cover
            .as_ref()
            .ok_or_else(|| Error::Config("missing [cover] section".into()))?
            .build()
    }

    /// The configured cover, or the identity cover of `P^1`.
    pub fn cover_or_trivial(&self) -> Result<Cover> {
        match &self.cover {
            Some(c) => c.build(),
            None => Ok(Cover::trivial()),
        }
    }

    pub fn singular(&self) -> bool {
        self.bundle.as_ref().is_some_and(|b| b.singular)
    }

    /// Explicit `[bundle]` data, or the Weierstrass bundle of `[surface]`.
    pub fn bundle(&self) -> Result<BundleSpec> {
        let b = self.bundle.clone().unwrap_or_default();
        match b.degrees {
            Some(degrees) => {
                let ell = b
                    .ell
                    .ok_or_else(|| Error::Config("[bundle] needs ell".into()))?;
                let d =
                    b.d.ok_or_else(|| Error::Config("[bundle] needs d".into()))?;
                BundleSpec::new(degrees, ell, d, b.lefschetz.unwrap_or(false))
            }
            None => {
                let n = self
                    .surface
                    .as_ref()
                    .ok_or_else(|| {
                        Error::Config("need [bundle] degrees or a [surface] section".into())
                    })?
                    .n;
                if n == 0 {
                    return Err(Error::InvalidSurface("n = deg L must be positive".into()));
                }
                if b.ell.is_some() || b.d.is_some() {
                    return Err(Error::Config(
                        "[bundle] ell and d require explicit degrees".into(),
                    ));
                }
                let mut spec = BundleSpec::weierstrass(n);
                if let Some(l) = b.lefschetz {
                    spec.lefschetz = l;
                }
                Ok(spec)
            }
        }
    }
}
