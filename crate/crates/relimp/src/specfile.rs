//! Declarative system-spec files.
//!
//! A spec is a TOML document naming the components (1-based ids with their
//! lifetime distributions), the copula and the minimal path sets:
//!
//! ```toml
//! name = "ship-control"
//!
//! [[components]]
//! id = 1
//! dist = { family = "exponential", rate = 0.0166667 }
//!
//! # ... one block per component ...
//!
//! [copula]
//! family = "fgm"        # product | fgm | clayton
//! theta = 1.0           # fgm only; clayton uses `alpha`
//! dimension = 4         # optional, defaults to the component count
//!
//! [structure]
//! minimal_path_sets = [[1], [2, 3], [2, 4]]
//! ```
//!
//! Parsing returns a fully validated [`SystemModel`] or a list of
//! diagnostics; syntax errors carry the TOML position, semantic errors the
//! line of the offending value where available plus a field path.

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Spanned;

use crate::conditional::SystemModel;
use crate::copulas::Copula;
use crate::marginals::Marginal;
use crate::structure::{SystemStructure, Violation};

/// One validation finding, pointing into the spec text where possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {}: {}: {}", line, self.path, self.message),
            None => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    /// Syntax error; the message embeds the TOML position report.
    #[error("spec parse error: {0}")]
    Parse(String),
    #[error("invalid system spec:\n{}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
}

fn format_diagnostics(ds: &[Diagnostic]) -> String {
    ds.iter().map(|d| format!("  - {d}")).collect::<Vec<_>>().join("\n")
}

/// A parsed and validated spec.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSystem {
    pub name: String,
    pub model: SystemModel,
}

#[derive(Debug, Deserialize)]
struct RawSpec {
    name: Option<String>,
    #[serde(default)]
    components: Vec<RawComponent>,
    copula: Spanned<RawCopula>,
    structure: RawStructure,
}

#[derive(Debug, Deserialize)]
struct RawComponent {
    id: Spanned<u64>,
    dist: Spanned<RawDist>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
enum RawDist {
    Exponential { rate: f64 },
    Weibull { scale: f64, shape: f64 },
    Uniform { lower: f64, upper: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
enum RawCopula {
    Product { dimension: Option<usize> },
    Fgm { theta: f64, dimension: Option<usize> },
    Clayton { alpha: f64, dimension: Option<usize> },
}

#[derive(Debug, Deserialize)]
struct RawStructure {
    minimal_path_sets: Spanned<Vec<Vec<u64>>>,
}

fn line_of(text: &str, byte: usize) -> usize {
    text[..byte.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Parse and validate a spec document into a [`SystemModel`].
pub fn parse_spec(text: &str) -> Result<ParsedSystem, SpecError> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
    let mut diags: Vec<Diagnostic> = Vec::new();
    let at = |byte: usize| Some(line_of(text, byte));

    let n = raw.components.len();
    if n == 0 {
        diags.push(Diagnostic {
            line: None,
            path: "components".into(),
            message: "at least one component is required".into(),
        });
        return Err(SpecError::Invalid(diags));
    }

    // ids must be exactly 1..n; marginals are placed by id
    let mut marginals: Vec<Option<Marginal>> = vec![None; n];
    for (idx, comp) in raw.components.iter().enumerate() {
        let id = *comp.id.get_ref();
        let id_line = at(comp.id.span().start);
        if id < 1 || id > n as u64 {
            diags.push(Diagnostic {
                line: id_line,
                path: format!("components[{idx}].id"),
                message: format!("id {id} outside 1..={n}"),
            });
            continue;
        }
        let slot = (id - 1) as usize;
        if marginals[slot].is_some() {
            diags.push(Diagnostic {
                line: id_line,
                path: format!("components[{idx}].id"),
                message: format!("duplicate id {id}"),
            });
            continue;
        }
        let dist_line = at(comp.dist.span().start);
        let built = match *comp.dist.get_ref() {
            RawDist::Exponential { rate } => Marginal::exponential(rate),
            RawDist::Weibull { scale, shape } => Marginal::weibull(scale, shape),
            RawDist::Uniform { lower, upper } => Marginal::uniform(lower, upper),
        };
        match built {
            Ok(m) => marginals[slot] = Some(m),
            Err(e) => diags.push(Diagnostic {
                line: dist_line,
                path: format!("components[{idx}].dist"),
                message: e.to_string(),
            }),
        }
    }
    for (slot, m) in marginals.iter().enumerate() {
        if m.is_none() && !diags.iter().any(|d| d.path.ends_with(".id")) {
            diags.push(Diagnostic {
                line: None,
                path: "components".into(),
                message: format!("component id {} is missing", slot + 1),
            });
        }
    }

    let copula_line = at(raw.copula.span().start);
    let copula = {
        let (family, built) = match *raw.copula.get_ref() {
            RawCopula::Product { dimension } => {
                ("product", Copula::product(dimension.unwrap_or(n)))
            }
            RawCopula::Fgm { theta, dimension } => {
                ("fgm", Copula::fgm(theta, dimension.unwrap_or(n)))
            }
            RawCopula::Clayton { alpha, dimension } => {
                ("clayton", Copula::clayton(alpha, dimension.unwrap_or(n)))
            }
        };
        match built {
            Ok(c) if c.dim() != n => {
                diags.push(Diagnostic {
                    line: copula_line,
                    path: "copula.dimension".into(),
                    message: format!("dimension {} does not match {n} components", c.dim()),
                });
                None
            }
            Ok(c) => Some(c),
            Err(e) => {
                diags.push(Diagnostic {
                    line: copula_line,
                    path: format!("copula ({family})"),
                    message: e.to_string(),
                });
                None
            }
        }
    };

    let sets_line = at(raw.structure.minimal_path_sets.span().start);
    let raw_sets = raw.structure.minimal_path_sets.get_ref();
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(raw_sets.len());
    let mut sets_ok = true;
    for (si, set) in raw_sets.iter().enumerate() {
        let mut converted = Vec::with_capacity(set.len());
        for &id in set {
            if id < 1 || id > n as u64 {
                diags.push(Diagnostic {
                    line: sets_line,
                    path: format!("structure.minimal_path_sets[{si}]"),
                    message: format!("component id {id} outside 1..={n}"),
                });
                sets_ok = false;
            } else {
                converted.push((id - 1) as usize);
            }
        }
        sets.push(converted);
    }

    let structure = if sets_ok {
        match SystemStructure::new(n, sets) {
            Ok(s) => Some(s),
            Err(crate::structure::StructureError::Invalid(violations)) => {
                for v in violations {
                    diags.push(Diagnostic {
                        line: sets_line,
                        path: "structure.minimal_path_sets".into(),
                        message: violation_message(&v),
                    });
                }
                None
            }
            Err(other) => {
                diags.push(Diagnostic {
                    line: sets_line,
                    path: "structure.minimal_path_sets".into(),
                    message: other.to_string(),
                });
                None
            }
        }
    } else {
        None
    };

    if !diags.is_empty() {
        return Err(SpecError::Invalid(diags));
    }
    let marginals: Vec<Marginal> = marginals.into_iter().map(|m| m.expect("validated")).collect();
    let model = SystemModel::new(structure.expect("validated"), marginals, copula.expect("validated"))
        .map_err(|e| {
            SpecError::Invalid(vec![Diagnostic {
                line: None,
                path: "spec".into(),
                message: e.to_string(),
            }])
        })?;
    Ok(ParsedSystem {
        name: raw.name.unwrap_or_else(|| "unnamed-system".into()),
        model,
    })
}

/// Render a structure violation with the file format's 1-based ids.
fn violation_message(v: &Violation) -> String {
    match *v {
        Violation::NoComponents => "component count must be at least 1".into(),
        Violation::NoPathSets => "at least one path set is required".into(),
        Violation::EmptyPathSet { set } => format!("path set {} is empty", set + 1),
        Violation::IndexOutOfRange { set, component } => {
            format!("path set {} references component {} out of range", set + 1, component + 1)
        }
        Violation::DuplicateComponent { set, component } => {
            format!("path set {} lists component {} twice", set + 1, component + 1)
        }
        Violation::DuplicatePathSet { first, second } => {
            format!("path sets {} and {} are identical", first + 1, second + 1)
        }
        Violation::ContainedPathSet { inner, outer } => format!(
            "path set {} is contained in path set {}; sets must be minimal",
            inner + 1,
            outer + 1
        ),
        Violation::IrrelevantComponent { component } => {
            format!("component {} appears in no path set", component + 1)
        }
    }
}

#[derive(Serialize)]
struct SpecDoc {
    name: String,
    components: Vec<ComponentDoc>,
    copula: CopulaDoc,
    structure: StructureDoc,
}

#[derive(Serialize)]
struct ComponentDoc {
    id: u64,
    dist: DistDoc,
}

#[derive(Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
enum DistDoc {
    Exponential { rate: f64 },
    Weibull { scale: f64, shape: f64 },
    Uniform { lower: f64, upper: f64 },
}

#[derive(Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
enum CopulaDoc {
    Product { dimension: usize },
    Fgm { theta: f64, dimension: usize },
    Clayton { alpha: f64, dimension: usize },
}

#[derive(Serialize)]
struct StructureDoc {
    minimal_path_sets: Vec<Vec<u64>>,
}

/// Serialize a model back into the spec format. `parse_spec(emit(..))`
/// reproduces an equivalent model.
pub fn emit(name: &str, model: &SystemModel) -> String {
    let components = model
        .marginals()
        .iter()
        .enumerate()
        .map(|(i, m)| ComponentDoc {
            id: (i + 1) as u64,
            dist: match *m {
                Marginal::Exponential { rate } => DistDoc::Exponential { rate },
                Marginal::Weibull { scale, shape } => DistDoc::Weibull { scale, shape },
                Marginal::Uniform { lower, upper } => DistDoc::Uniform { lower, upper },
            },
        })
        .collect();
    let copula = match *model.copula() {
        Copula::Product { dim } => CopulaDoc::Product { dimension: dim },
        Copula::Fgm { theta, dim } => CopulaDoc::Fgm { theta, dimension: dim },
        Copula::Clayton { alpha, dim } => CopulaDoc::Clayton { alpha, dimension: dim },
    };
    let structure = StructureDoc {
        minimal_path_sets: model
            .structure()
            .path_sets()
            .iter()
            .map(|s| s.iter().map(|&j| (j + 1) as u64).collect())
            .collect(),
    };
    let doc = SpecDoc {
        name: name.to_string(),
        components,
        copula,
        structure,
    };
    toml::to_string_pretty(&doc).expect("spec document serializes")
}

/// The catalogued example systems, shipped as spec files.
pub mod bundled {
    /// Two-component series system, independent exponentials.
    pub const TWO_COMPONENT_SERIES: &str = include_str!("../specs/two_component_series.toml");
    /// Four-component series system, independent heterogeneous exponentials.
    pub const FOUR_COMPONENT_SERIES: &str = include_str!("../specs/four_component_series.toml");
    /// Component in parallel with a two-component series pair, independent
    /// unit exponentials.
    pub const PARALLEL_SERIES: &str = include_str!("../specs/parallel_series.toml");
    /// Two-component series with negative FGM dependence; its first
    /// regression curve is not monotone.
    pub const FGM_NEGATIVE_SERIES: &str = include_str!("../specs/fgm_negative_series.toml");
    /// Ship control system, exponential lifetimes, FGM dependence.
    pub const SHIP_EXPONENTIAL: &str = include_str!("../specs/ship_exponential.toml");
    /// Ship control system, Weibull lifetimes, FGM dependence.
    pub const SHIP_WEIBULL: &str = include_str!("../specs/ship_weibull.toml");

    /// All bundled specs as `(file stem, contents)` pairs.
    pub fn all() -> [(&'static str, &'static str); 6] {
        [
            ("two_component_series", TWO_COMPONENT_SERIES),
            ("four_component_series", FOUR_COMPONENT_SERIES),
            ("parallel_series", PARALLEL_SERIES),
            ("fgm_negative_series", FGM_NEGATIVE_SERIES),
            ("ship_exponential", SHIP_EXPONENTIAL),
            ("ship_weibull", SHIP_WEIBULL),
        ]
    }
}
