//! Group description files and selectors for `Q` and `ω`.
//!
//! A file is either `{"mult": [[...]], "labels": [...]}` or
//! `{"degree": d, "permutation_generators": [[...]]}`. Both forms accept
//! optional `"subsets"` (name to list of labels) and `"elements"` (name to
//! label) maps used by the selectors.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, InvariantSubset, DEFAULT_MAX_ORDER};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Table {
        mult: Vec<Vec<usize>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    Permutations {
        degree: usize,
        permutation_generators: Vec<Vec<usize>>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(flatten)]
    pub spec: GroupSpec,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub subsets: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub elements: BTreeMap<String, String>,
}

const BUNDLED: &[(&str, &str)] = &[
    ("z2", include_str!("../../../../groups/z2.json")),
    ("s3", include_str!("../../../../groups/s3.json")),
    ("s4", include_str!("../../../../groups/s4.json")),
    ("s5", include_str!("../../../../groups/s5.json")),
    ("d3", include_str!("../../../../groups/d3.json")),
    ("d5", include_str!("../../../../groups/d5.json")),
];

/// Names of the built-in group files.
pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

impl GroupFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Loads a built-in group by name (`s3`, `d5`, ...).
    pub fn bundled(name: &str) -> Result<Self> {
        let key = name.trim().to_ascii_lowercase();
        let (_, text) = BUNDLED
            .iter()
            .find(|(n, _)| *n == key)
            .ok_or_else(|| Error::InvalidInput(format!("no bundled group named {name:?}")))?;
        Self::from_json(text)
    }

    /// Reads a file path, falling back to the bundled groups when the path
    /// does not exist and its stem names one (`examples/s3.json` -> `s3`).
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if path.exists() {
            return Self::from_json(&std::fs::read_to_string(path)?);
        }
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        Self::bundled(stem).map_err(|_| Error::InvalidInput(format!("cannot read group file {}", path.display())))
    }

    pub fn build(&self, max_order: usize) -> Result<FiniteGroup> {
        match &self.spec {
            GroupSpec::Table { mult, labels } => FiniteGroup::from_table(mult, labels.clone(), max_order),
            GroupSpec::Permutations { degree, permutation_generators } => {
                FiniteGroup::from_permutations(*degree, permutation_generators, max_order)
            }
        }
    }

    pub fn load(&self) -> Result<Arc<FiniteGroup>> {
        self.build(DEFAULT_MAX_ORDER).map(Arc::new)
    }

    /// Resolves a `Q` selector: a named subset, `class:<element>`, or a
    /// comma/semicolon separated list of labels or indices.
    pub fn select_q(&self, group: &Arc<FiniteGroup>, selector: &str) -> Result<InvariantSubset> {
        let members = self.select_members(group, selector)?;
        InvariantSubset::new(group.clone(), &members)
    }

    pub fn select_members(&self, group: &FiniteGroup, selector: &str) -> Result<Vec<usize>> {
        let s = selector.trim();
        if let Some(names) = self.subsets.get(s) {
            return names.iter().map(|l| group.element(l)).collect();
        }
        if let Some(rest) = s.strip_prefix("class:") {
            let a = self.select_element(group, rest)?;
            let mut class: Vec<usize> = (0..group.order()).map(|g| group.conj(a, g)).collect();
            class.sort_unstable();
            class.dedup();
            return Ok(class);
        }
        let items = split_top_level(s);
        if items.is_empty() {
            return Err(Error::InvalidInput("empty Q selector".into()));
        }
        items.iter().map(|t| self.select_element(group, t)).collect()
    }

    /// Resolves an element selector: a named element, a label, cycle
    /// notation, or an index.
    pub fn select_element(&self, group: &FiniteGroup, selector: &str) -> Result<usize> {
        let s = selector.trim();
        match self.elements.get(s) {
            Some(label) => group.element(label),
            None => group.element(s),
        }
    }
}

/// Splits on commas and semicolons that are not inside parentheses.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if (c == ',' || c == ';') && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out.into_iter().map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}
