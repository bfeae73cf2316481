use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

const INITIAL_TOML: &str = include_str!("../../profiles/initial.toml");
const IMPROVED_TOML: &str = include_str!("../../profiles/improved.toml");

fn default_rnp_tokens() -> u32 {
    16
}

fn default_leak_threshold() -> f64 {
    0.6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locale {
    #[default]
    En,
    Ko,
}

/// The seven parts of the review-comment prompt, in their required order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SectionName {
    StyleTone,
    Instruction,
    Restriction,
    Exercise,
    SubmittedCode,
    Solution,
    Example,
}

impl SectionName {
    pub const ORDER: [SectionName; 7] = [
        SectionName::StyleTone,
        SectionName::Instruction,
        SectionName::Restriction,
        SectionName::Exercise,
        SectionName::SubmittedCode,
        SectionName::Solution,
        SectionName::Example,
    ];

    /// Header text used when rendering the section.
    pub fn label(self) -> &'static str {
        match self {
            SectionName::StyleTone => "Style & Tone",
            SectionName::Instruction => "Instruction",
            SectionName::Restriction => "Restriction",
            SectionName::Exercise => "Exercise",
            SectionName::SubmittedCode => "Submitted Code",
            SectionName::Solution => "Solution",
            SectionName::Example => "Example",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RcgSection {
    pub name: SectionName,
    pub text: String,
}

/// Template texts plus sampling parameters for one pipeline variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PromptProfile {
    pub name: String,
    #[serde(default)]
    pub locale: Locale,
    pub role_text: String,
    pub rnp_template: String,
    pub rcg_sections: Vec<RcgSection>,
    pub max_output_tokens: u32,
    #[serde(default = "default_rnp_tokens")]
    pub rnp_max_output_tokens: u32,
    pub temperature: f64,
    pub top_p: f64,
    #[serde(default)]
    pub max_sentences: Option<u32>,
    /// Run the empty check and the local validator before any LLM call.
    #[serde(default)]
    pub gate_submissions: bool,
    #[serde(default = "default_leak_threshold")]
    pub leak_threshold: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum ProfileError {
    #[error("cannot read profile {path}: {source}")]
    Unreadable { path: String, source: std::io::Error },
    #[error("malformed profile: {0}")]
    Malformed(String),
    #[error("invalid profile `{name}`: {reason}")]
    Invalid { name: String, reason: String },
    #[error("no built-in `{0}` profile for locale {1:?}")]
    NoBuiltin(String, Locale),
}

impl PromptProfile {
    pub fn from_toml(text: &str) -> Result<Self, ProfileError> {
        let profile: PromptProfile = toml::from_str(text).map_err(|e| ProfileError::Malformed(e.to_string()))?;
        profile.check()?;
        Ok(profile)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ProfileError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ProfileError::Unreadable {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn initial() -> Self {
        Self::from_toml(INITIAL_TOML).expect("built-in initial profile is valid")
    }

    pub fn improved() -> Self {
        Self::from_toml(IMPROVED_TOML).expect("built-in improved profile is valid")
    }

    pub fn builtin(name: &str, locale: Locale) -> Result<Self, ProfileError> {
        match (name, locale) {
            ("initial", Locale::En) => Ok(Self::initial()),
            ("improved", Locale::En) => Ok(Self::improved()),
            _ => Err(ProfileError::NoBuiltin(name.to_string(), locale)),
        }
    }

    /// `initial`, `improved`, or a path to a profile file.
    pub fn resolve(name_or_path: &str) -> Result<Self, ProfileError> {
        match name_or_path {
            "initial" | "improved" => Self::builtin(name_or_path, Locale::En),
            path => Self::load(path),
        }
    }

    pub fn section(&self, name: SectionName) -> Option<&RcgSection> {
        self.rcg_sections.iter().find(|s| s.name == name)
    }

    pub fn check(&self) -> Result<(), ProfileError> {
        let invalid = |reason: String| ProfileError::Invalid {
            name: self.name.clone(),
            reason,
        };
        let names: Vec<SectionName> = self.rcg_sections.iter().map(|s| s.name).collect();
        if names != SectionName::ORDER {
            return Err(invalid(format!(
                "rcg_sections must be exactly {:?}, got {:?}",
                SectionName::ORDER,
                names
            )));
        }
        if self.max_output_tokens == 0 || self.rnp_max_output_tokens == 0 {
            return Err(invalid("token limits must be positive".into()));
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(invalid(format!("temperature {} outside [0, 2]", self.temperature)));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(invalid(format!("top_p {} outside (0, 1]", self.top_p)));
        }
        if self.max_sentences == Some(0) {
            return Err(invalid("max_sentences must be positive".into()));
        }
        if !(self.leak_threshold > 0.0 && self.leak_threshold <= 1.0) {
            return Err(invalid(format!(
                "leak_threshold {} outside (0, 1]",
                self.leak_threshold
            )));
        }
        Ok(())
    }
}

/// An improved profile must not raise the output budget and must cap
/// sentences.
pub fn check_improvement(initial: &PromptProfile, improved: &PromptProfile) -> Result<(), String> {
    if improved.max_output_tokens > initial.max_output_tokens {
        return Err(format!(
            "improved max_output_tokens {} exceeds initial {}",
            improved.max_output_tokens, initial.max_output_tokens
        ));
    }
    if improved.max_sentences.is_none() {
        return Err("improved profile must set max_sentences".into());
    }
    Ok(())
}

impl fmt::Display for PromptProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
