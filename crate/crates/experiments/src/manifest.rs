//! Where the LIBSVM files live and what they should contain.
//!
//! A manifest is a TOML file with one table per dataset:
//!
//! ```toml
//! [a9a]
//! path = "a9a"
//! examples = 32561
//! features = 123
//! ```
//!
//! Relative paths resolve against the manifest's directory (or the data
//! directory for the built-in defaults). `examples` and `features` are
//! optional and checked when present.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use async_oco::data::{parse_libsvm, LibsvmData};
use serde::Deserialize;

use crate::error::{ExperimentError, Result};

/// The four binary classification sets used by the presets, with their
/// published sizes.
pub const STANDARD_DATASETS: [(&str, usize, usize); 4] =
    [("ijcnn1", 49_990, 22), ("w8a", 49_749, 300), ("phishing", 11_055, 68), ("a9a", 32_561, 123)];

const SOURCE_HINT: &str = "download the file from the LIBSVM binary classification collection \
     (https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary.html) and place it there, \
     or point --data-dir / --manifest at an existing copy";

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct DatasetEntry {
    pub path: PathBuf,
    pub examples: Option<usize>,
    pub features: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    root: PathBuf,
    entries: BTreeMap<String, DatasetEntry>,
}

impl Manifest {
    /// Built-in entries for the four datasets, expected at `<dir>/<name>`.
    pub fn defaults(dir: impl Into<PathBuf>) -> Self {
        let entries = STANDARD_DATASETS
            .iter()
            .map(|&(name, n, f)| {
                (name.to_string(), DatasetEntry { path: PathBuf::from(name), examples: Some(n), features: Some(f) })
            })
            .collect();
        Manifest { root: dir.into(), entries }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(ExperimentError::io(path))?;
        let entries: BTreeMap<String, DatasetEntry> = toml::from_str(&text)
            .map_err(|e| ExperimentError::Manifest { path: path.to_path_buf(), message: e.to_string() })?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Manifest { root, entries })
    }

    /// Entries of `other` replace same-named entries here.
    pub fn merge(mut self, other: Manifest) -> Self {
        for (name, mut entry) in other.entries {
            if entry.path.is_relative() {
                entry.path = other.root.join(&entry.path);
            }
            self.entries.insert(name, entry);
        }
        self
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn entry(&self, name: &str) -> Option<&DatasetEntry> {
        self.entries.get(name)
    }

    pub fn resolve(&self, name: &str) -> Result<PathBuf> {
        let entry = self.entry(name).ok_or_else(|| ExperimentError::UnknownDataset(name.to_string()))?;
        Ok(if entry.path.is_absolute() { entry.path.clone() } else { self.root.join(&entry.path) })
    }

    pub fn is_available(&self, name: &str) -> bool {
        self.resolve(name).map(|p| p.is_file()).unwrap_or(false)
    }

    /// Parses the dataset and checks it against the recorded sizes.
    pub fn load_dataset(&self, name: &str) -> Result<LibsvmData> {
        let path = self.resolve(name)?;
        if !path.is_file() {
            return Err(ExperimentError::MissingDataset {
                name: name.to_string(),
                path,
                hint: SOURCE_HINT.to_string(),
            });
        }
        let file = File::open(&path).map_err(ExperimentError::io(&path))?;
        let data = parse_libsvm(BufReader::new(file))?;
        let entry = &self.entries[name];
        if let Some(expected) = entry.examples {
            if data.examples.len() != expected {
                return Err(ExperimentError::UnexpectedSize {
                    name: name.to_string(),
                    expected,
                    found: data.examples.len(),
                });
            }
        }
        if let Some(f) = entry.features {
            // a sample file may not touch the last feature; never more than f
            if data.dim > f {
                return Err(ExperimentError::Manifest {
                    path,
                    message: format!("{name}: feature index {} exceeds {f}", data.dim),
                });
            }
        }
        Ok(LibsvmData { dim: entry.features.unwrap_or(data.dim), ..data })
    }
}
