//! Input loading and output writing. Inputs must be valid UTF-8.

use std::fs;
use std::path::{Path, PathBuf};

use gec_xform_core::corpus::{parse_m2, parse_tsv};
use gec_xform_core::{SentencePair, TransformationDictionary};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// An input file's text and digest.
#[derive(Clone, Debug)]
pub struct Input {
    pub path: PathBuf,
    pub text: String,
    pub sha256: String,
}

pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn read_input(path: &Path) -> Result<Input> {
    let bytes = fs::read(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let sha256 = hex_digest(&bytes);
    let text = String::from_utf8(bytes).map_err(|e| {
        CliError::format(path, format!("invalid UTF-8 at byte {}", e.utf8_error().valid_up_to()))
    })?;
    Ok(Input {
        path: path.to_path_buf(),
        text,
        sha256,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    /// `.m2` files are M², anything else is TSV.
    Auto,
    Tsv,
    M2,
}

impl CorpusFormat {
    fn resolve(self, path: &Path) -> CorpusFormat {
        match self {
            CorpusFormat::Auto if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("m2")) => {
                CorpusFormat::M2
            }
            CorpusFormat::Auto => CorpusFormat::Tsv,
            other => other,
        }
    }
}

pub fn parse_corpus(input: &Input, format: CorpusFormat, annotator: usize) -> Result<Vec<SentencePair>> {
    let parsed = match format.resolve(&input.path) {
        CorpusFormat::M2 => parse_m2(&input.text, annotator),
        _ => parse_tsv(&input.text),
    };
    parsed.map_err(|e| CliError::format(&input.path, e))
}

/// One sentence per line; a final newline does not start another sentence.
pub fn lines(text: &str) -> Vec<&str> {
    text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l)).collect()
}

pub fn read_dictionary(path: &Path) -> Result<(Input, TransformationDictionary)> {
    let input = read_input(path)?;
    let dict = TransformationDictionary::from_text(&input.text).map_err(|e| CliError::format(path, e))?;
    Ok((input, dict))
}

/// Labels file: one line of space-separated ids per sentence.
pub fn parse_labels(input: &Input) -> Result<Vec<Vec<usize>>> {
    lines(&input.text)
        .into_iter()
        .enumerate()
        .map(|(n, line)| {
            line.split_whitespace()
                .map(|id| {
                    id.parse()
                        .map_err(|_| CliError::format(&input.path, format!("line {}: bad label `{id}`", n + 1)))
                })
                .collect()
        })
        .collect()
}

pub fn format_labels(labels: &[usize]) -> String {
    labels.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_output(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::write(path, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::write(path, e))
}

/// Joins lines with a trailing newline.
pub fn join_lines<S: AsRef<str>>(lines: &[S]) -> String {
    let mut out = String::new();
    for line in lines {
        out.push_str(line.as_ref());
        out.push('\n');
    }
    out
}
