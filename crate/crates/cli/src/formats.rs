//! On-disk formats: posets, maps, operation systems and ensembles are JSON
//! objects; nested posets may be inline or a path to another file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use approxforms::{EnsembleCharacteristic, FinitePoset, OperationSystem, Polarity, PosetMap};

use crate::CliError;

/// `{"elements": [...], "le": [[a, b], ...]}` — `le` is any generating set.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetFile {
    pub elements: Vec<String>,
    #[serde(default)]
    pub le: Vec<(String, String)>,
}

/// A nested poset: inline object or path relative to the referencing file.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PosetRef {
    Path(String),
    Inline(PosetFile),
}

/// `{"domain": ..., "codomain": ..., "map": {"a": "1", ...}}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub domain: PosetRef,
    pub codomain: PosetRef,
    pub map: BTreeMap<String, String>,
}

/// Operation tables in row-major order over the canonical enumeration,
/// entries named by codomain elements.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub codomain: PosetRef,
    pub polarity: String,
    pub dissociate: Vec<String>,
    #[serde(default)]
    pub combine_binary: Option<Vec<String>>,
    #[serde(default)]
    pub combine_join: bool,
    pub null_op: Vec<String>,
}

/// `{"p": [eight probabilities]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub p: Vec<f64>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn load_poset_file(path: &Path) -> Result<Arc<FinitePoset>, CliError> {
    let file: PosetFile = read_json(path)?;
    build_poset(file, path)
}

fn build_poset(file: PosetFile, at: &Path) -> Result<Arc<FinitePoset>, CliError> {
    FinitePoset::from_named_pairs(&file.elements, &file.le)
        .map(Arc::new)
        .map_err(|e| CliError::input(format!("{}: {e}", at.display())))
}

fn resolve_poset(r: PosetRef, base: &Path) -> Result<Arc<FinitePoset>, CliError> {
    match r {
        PosetRef::Path(p) => {
            let dir = base.parent().unwrap_or_else(|| Path::new("."));
            load_poset_file(&dir.join(PathBuf::from(p)))
        }
        PosetRef::Inline(file) => build_poset(file, base),
    }
}

/// Loads a map file and checks it against the posets the caller already
/// resolved; the file's own domain and codomain must match them.
pub fn load_map_file(
    path: &Path,
    domain: &Arc<FinitePoset>,
    codomain: &Arc<FinitePoset>,
) -> Result<PosetMap, CliError> {
    let file: MapFile = read_json(path)?;
    let own_domain = resolve_poset(file.domain, path)?;
    let own_codomain = resolve_poset(file.codomain, path)?;
    if own_domain != *domain {
        return Err(CliError::input(format!(
            "{}: map domain differs from the supplied poset",
            path.display()
        )));
    }
    if own_codomain != *codomain {
        return Err(CliError::input(format!(
            "{}: map codomain differs from the supplied codomain",
            path.display()
        )));
    }
    let assoc: Vec<(String, String)> = file.map.into_iter().collect();
    PosetMap::from_named(domain.clone(), codomain.clone(), &assoc)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn load_algebra_file(path: &Path) -> Result<Arc<OperationSystem>, CliError> {
    let file: AlgebraFile = read_json(path)?;
    let codomain = resolve_poset(file.codomain, path)?;
    let polarity = match file.polarity.as_str() {
        "primal" => Polarity::Primal,
        "dual" => Polarity::Dual,
        other => {
            return Err(CliError::input(format!(
                "{}: polarity must be `primal` or `dual`, got `{other}`",
                path.display()
            )))
        }
    };
    let to_indices = |names: &[String], what: &str| -> Result<Vec<usize>, CliError> {
        names
            .iter()
            .map(|n| {
                codomain
                    .index_of(n)
                    .map_err(|e| CliError::input(format!("{}: {what}: {e}", path.display())))
            })
            .collect()
    };
    let dissociate = to_indices(&file.dissociate, "dissociate")?;
    let combine = file
        .combine_binary
        .as_deref()
        .map(|t| to_indices(t, "combine_binary"))
        .transpose()?;
    let null_op = to_indices(&file.null_op, "null_op")?;
    OperationSystem::new(
        codomain,
        polarity,
        dissociate,
        combine,
        file.combine_join,
        null_op,
    )
    .map(Arc::new)
    .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn load_ensemble_file(path: &Path) -> Result<EnsembleCharacteristic, CliError> {
    let file: EnsembleFile = read_json(path)?;
    let p: [f64; 8] = file.p.try_into().map_err(|v: Vec<f64>| {
        CliError::input(format!(
            "{}: need exactly 8 probabilities, got {}",
            path.display(),
            v.len()
        ))
    })?;
    EnsembleCharacteristic::new(p).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}
