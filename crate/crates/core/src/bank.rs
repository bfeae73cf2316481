//! Exercise bank: exercises, the eight-label submission frame, and
//! static-based filtering of ingested submissions.
//!
//! A bank file is a UTF-8 JSON document:
//!
//! ```json
//! {
//!   "exercises": [ { "id": "...", "title": "...", "description": "...",
//!                    "input_examples": ["..."], "output_examples": ["..."],
//!                    "solution": "...", "category_path": ["basics"] } ],
//!   "records":   [ { "ex_id": "...", "title": "...", "desc": "...",
//!                    "solution": "...", "sub_code": "...", "solved_subs": 3,
//!                    "total_subs": 4, "accuracy": 0.75,
//!                    "error_type": "HardCoding" } ]
//! }
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::judge::ErrorType;
use crate::validate::{normalize_for_dedup, strip_comments};

const ACCURACY_TOLERANCE: f64 = 1e-9;

fn default_category() -> Vec<String> {
    vec!["uncategorized".to_string()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exercise {
    pub id: String,
    pub title: String,
    pub description: String,
    pub input_examples: Vec<String>,
    pub output_examples: Vec<String>,
    pub solution: String,
    #[serde(default = "default_category")]
    pub category_path: Vec<String>,
}

impl Exercise {
    pub fn io_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.input_examples
            .iter()
            .map(String::as_str)
            .zip(self.output_examples.iter().map(String::as_str))
    }

    fn check(&self) -> Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("exercise id is empty".into());
        }
        if self.input_examples.is_empty() {
            return Err("at least one input/output example is required".into());
        }
        if self.input_examples.len() != self.output_examples.len() {
            return Err(format!(
                "{} input examples but {} output examples",
                self.input_examples.len(),
                self.output_examples.len()
            ));
        }
        if self.solution.trim().is_empty() {
            return Err("solution is empty".into());
        }
        if self.category_path.is_empty() {
            return Err("category_path is empty".into());
        }
        Ok(())
    }
}

/// One row of the eight-label frame, plus an optional error-type label used
/// by the evaluation harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub ex_id: String,
    pub title: String,
    pub desc: String,
    pub solution: String,
    pub sub_code: String,
    pub solved_subs: u64,
    pub total_subs: u64,
    pub accuracy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_type: Option<ErrorType>,
}

impl DatasetRecord {
    pub fn expected_accuracy(solved: u64, total: u64) -> f64 {
        if total == 0 {
            0.0
        } else {
            solved as f64 / total as f64
        }
    }

    fn check(&self) -> Result<(), String> {
        if self.solved_subs > self.total_subs {
            return Err(format!(
                "solved_subs {} exceeds total_subs {}",
                self.solved_subs, self.total_subs
            ));
        }
        let expected = Self::expected_accuracy(self.solved_subs, self.total_subs);
        if !(self.accuracy - expected).abs().le(&ACCURACY_TOLERANCE) {
            return Err(format!(
                "accuracy {} does not equal solved/total = {}",
                self.accuracy, expected
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entry {
    Document,
    Exercise(usize),
    Record(usize),
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Document => f.write_str("document"),
            Entry::Exercise(i) => write!(f, "exercises[{i}]"),
            Entry::Record(i) => write!(f, "records[{i}]"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BankError {
    #[error("cannot read bank file {path}: {source}")]
    FileUnreadable { path: PathBuf, source: std::io::Error },
    #[error("cannot write bank file {path}: {source}")]
    FileUnwritable { path: PathBuf, source: std::io::Error },
    #[error("schema violation at {entry}: {reason}")]
    SchemaViolation { entry: Entry, reason: String },
    #[error("record refers to unknown exercise `{0}`")]
    DanglingExerciseRef(String),
}

#[derive(Serialize, Deserialize)]
struct BankFile {
    exercises: Vec<Exercise>,
    #[serde(default)]
    records: Vec<DatasetRecord>,
}

/// Immutable after construction; share it behind an `Arc`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Bank {
    exercises: BTreeMap<String, Exercise>,
    records: Vec<DatasetRecord>,
}

impl Bank {
    pub fn new(exercises: Vec<Exercise>, records: Vec<DatasetRecord>) -> Result<Self, BankError> {
        let mut map = BTreeMap::new();
        for (i, ex) in exercises.into_iter().enumerate() {
            ex.check().map_err(|reason| BankError::SchemaViolation {
                entry: Entry::Exercise(i),
                reason,
            })?;
            if map.contains_key(&ex.id) {
                return Err(BankError::SchemaViolation {
                    entry: Entry::Exercise(i),
                    reason: format!("duplicate exercise id `{}`", ex.id),
                });
            }
            map.insert(ex.id.clone(), ex);
        }
        for (i, rec) in records.iter().enumerate() {
            rec.check().map_err(|reason| BankError::SchemaViolation {
                entry: Entry::Record(i),
                reason,
            })?;
            if !map.contains_key(&rec.ex_id) {
                return Err(BankError::DanglingExerciseRef(rec.ex_id.clone()));
            }
        }
        Ok(Self {
            exercises: map,
            records,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, BankError> {
        let file: BankFile = serde_json::from_str(text).map_err(|e| BankError::SchemaViolation {
            entry: Entry::Document,
            reason: e.to_string(),
        })?;
        Self::new(file.exercises, file.records)
    }

    pub fn to_json(&self) -> String {
        let file = BankFile {
            exercises: self.exercises.values().cloned().collect(),
            records: self.records.clone(),
        };
        let mut text = serde_json::to_string_pretty(&file).expect("bank is always serializable");
        text.push('\n');
        text
    }

    pub fn exercises(&self) -> impl Iterator<Item = &Exercise> {
        self.exercises.values()
    }

    pub fn exercise(&self, id: &str) -> Option<&Exercise> {
        self.exercises.get(id)
    }

    pub fn records(&self) -> &[DatasetRecord] {
        &self.records
    }

    pub fn exercise_count(&self) -> usize {
        self.exercises.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exercises.is_empty()
    }

    /// Returns a bank whose records went through [`static_filter`].
    pub fn filtered(&self) -> Self {
        Self {
            exercises: self.exercises.clone(),
            records: static_filter(&self.records),
        }
    }
}

pub fn load_bank(path: impl AsRef<Path>) -> Result<Bank, BankError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| BankError::FileUnreadable {
        path: path.to_path_buf(),
        source,
    })?;
    Bank::from_json(&text)
}

pub fn save_bank(bank: &Bank, path: impl AsRef<Path>) -> Result<(), BankError> {
    let path = path.as_ref();
    std::fs::write(path, bank.to_json()).map_err(|source| BankError::FileUnwritable {
        path: path.to_path_buf(),
        source,
    })
}

/// Static-based filtering: strips comments from every submission and drops
/// repeated submissions of the same exercise. Two submissions are repeats
/// when they are equal after comment stripping, trailing-whitespace trimming
/// and blank-line collapsing. The first occurrence wins and order is kept.
pub fn static_filter(records: &[DatasetRecord]) -> Vec<DatasetRecord> {
    let mut seen = HashSet::new();
    records
        .iter()
        .filter(|r| seen.insert((r.ex_id.clone(), normalize_for_dedup(&r.sub_code))))
        .map(|r| DatasetRecord {
            sub_code: strip_comments(&r.sub_code),
            ..r.clone()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExerciseSummary {
    pub id: String,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CategoryNode {
    pub name: String,
    pub children: Vec<CategoryNode>,
    pub exercises: Vec<ExerciseSummary>,
}

impl CategoryNode {
    pub fn leaf_count(&self) -> usize {
        self.exercises.len() + self.children.iter().map(Self::leaf_count).sum::<usize>()
    }
}

/// Groups exercises by `category_path`. Categories are sorted by name and
/// exercises by id, so the tree is deterministic.
pub fn list_tree(bank: &Bank) -> Vec<CategoryNode> {
    #[derive(Default)]
    struct Builder {
        children: BTreeMap<String, Builder>,
        exercises: Vec<ExerciseSummary>,
    }

    impl Builder {
        fn build(self, name: String) -> CategoryNode {
            CategoryNode {
                name,
                children: self.children.into_iter().map(|(n, b)| b.build(n)).collect(),
                exercises: self.exercises,
            }
        }
    }

    let mut root = Builder::default();
    for ex in bank.exercises() {
        let mut node = &mut root;
        for part in &ex.category_path {
            node = node.children.entry(part.clone()).or_default();
        }
        node.exercises.push(ExerciseSummary {
            id: ex.id.clone(),
            title: ex.title.clone(),
        });
    }
    root.children.into_iter().map(|(name, b)| b.build(name)).collect()
}
