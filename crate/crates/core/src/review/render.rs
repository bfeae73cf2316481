use crate::bank::Exercise;
use crate::template::{fence, render, TemplateError};

use super::profile::PromptProfile;

/// Submission plus the context needed to review it. `submitted_code` is
/// expected to be comment-stripped (and validated under gated profiles).
#[derive(Debug, Clone, Copy)]
pub struct ReviewRequest<'a> {
    pub exercise: &'a Exercise,
    pub submitted_code: &'a str,
    pub profile: &'a PromptProfile,
}

/// The role text travels as the system message; everything else is the
/// user message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedPrompt {
    pub system: String,
    pub user: String,
}

impl RenderedPrompt {
    pub fn char_count(&self) -> usize {
        self.system.chars().count() + self.user.chars().count()
    }
}

/// Renders input/output example pairs as numbered fenced blocks.
pub fn render_io_examples(exercise: &Exercise) -> String {
    exercise
        .io_pairs()
        .enumerate()
        .map(|(i, (input, output))| {
            format!(
                "Input {n}:\n{}\nOutput {n}:\n{}",
                fence(input, ""),
                fence(output, ""),
                n = i + 1
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

struct Values {
    exercise_description: String,
    submitted_code: String,
    solution: Option<String>,
    io_examples: String,
    max_sentences: Option<String>,
}

impl Values {
    fn new(req: &ReviewRequest<'_>, with_solution: bool) -> Self {
        Self {
            exercise_description: req.exercise.description.trim().to_string(),
            submitted_code: fence(req.submitted_code, "python"),
            solution: with_solution.then(|| fence(&req.exercise.solution, "python")),
            io_examples: render_io_examples(req.exercise),
            max_sentences: req.profile.max_sentences.map(|n| n.to_string()),
        }
    }

    fn get(&self, name: &str) -> Option<&str> {
        match name {
            "exercise_description" => Some(&self.exercise_description),
            "submitted_code" => Some(&self.submitted_code),
            "solution" => self.solution.as_deref(),
            "io_examples" => Some(&self.io_examples),
            "max_sentences" => self.max_sentences.as_deref(),
            _ => None,
        }
    }
}

/// Review-necessity prompt. It sees the exercise and the submission but not
/// the instructor solution.
pub fn render_rnp_prompt(req: &ReviewRequest<'_>) -> Result<RenderedPrompt, TemplateError> {
    let values = Values::new(req, false);
    Ok(RenderedPrompt {
        system: req.profile.role_text.clone(),
        user: render(&req.profile.rnp_template, |n| values.get(n))?,
    })
}

/// Review-comment prompt: the seven sections in profile order, each under a
/// `## <label>` header.
pub fn render_rcg_prompt(req: &ReviewRequest<'_>) -> Result<RenderedPrompt, TemplateError> {
    let values = Values::new(req, true);
    let mut parts = Vec::with_capacity(req.profile.rcg_sections.len());
    for section in &req.profile.rcg_sections {
        let body = render(&section.text, |n| values.get(n))?;
        parts.push(format!("## {}\n{}", section.name.label(), body.trim()));
    }
    Ok(RenderedPrompt {
        system: req.profile.role_text.clone(),
        user: parts.join("\n\n"),
    })
}
