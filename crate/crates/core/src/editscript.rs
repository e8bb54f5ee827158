//! Character and string transformations of a single unit (subword or word).
//!
//! A character transformation is built in three steps:
//!
//! 1. a minimal insert/replace/delete script between the lowercased (and,
//!    for uncased input, undiacritized) unit and correction; every edit is
//!    indexed from the start of the unit when it touches the first half and
//!    from its end otherwise,
//! 2. uppercase edits for characters the script leaves lowercase, indexed
//!    the same way over the correction,
//! 3. for uncased input, edits restoring diacritical marks.
//!
//! Keeping casing and diacritics out of the script makes rules general:
//! `go -> Going` and `walk -> Walking` share one transformation.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write as _};
use core::str::FromStr;

use crate::textnorm::{fold_char, strip_char, upper_char, CasingMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EditKind {
    Insert,
    Replace,
    Delete,
    Uppercase,
    SetDiacritic,
}

impl EditKind {
    fn code(self) -> &'static str {
        match self {
            EditKind::Insert => "ins",
            EditKind::Replace => "rep",
            EditKind::Delete => "del",
            EditKind::Uppercase => "upc",
            EditKind::SetDiacritic => "dia",
        }
    }

    fn has_payload(self) -> bool {
        matches!(self, EditKind::Insert | EditKind::Replace | EditKind::SetDiacritic)
    }

    fn is_base(self) -> bool {
        matches!(self, EditKind::Insert | EditKind::Replace | EditKind::Delete)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Anchor {
    FromStart,
    FromEnd,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharEdit {
    pub kind: EditKind,
    pub anchor: Anchor,
    /// 1-based. For inserts it names a gap: gap `i` is right before
    /// character `i`; counted from the end, gap 1 is the end of the unit.
    pub index: usize,
    /// Inserted or replacing text, or the composed character for
    /// [`EditKind::SetDiacritic`]; empty otherwise.
    pub payload: String,
}

impl CharEdit {
    pub fn new(kind: EditKind, anchor: Anchor, index: usize, payload: impl Into<String>) -> Self {
        CharEdit {
            kind,
            anchor,
            index,
            payload: payload.into(),
        }
    }

    /// Absolute 1-based position in a unit of `len` characters, if in range.
    fn resolve(&self, len: usize) -> Option<usize> {
        let slots = if self.kind == EditKind::Insert { len + 1 } else { len };
        if self.index == 0 || self.index > slots {
            return None;
        }
        Some(match self.anchor {
            Anchor::FromStart => self.index,
            Anchor::FromEnd => slots + 1 - self.index,
        })
    }
}

/// Anchors a 1-based position among `slots` positions.
fn anchored(position: usize, slots: usize, half_of: usize) -> (Anchor, usize) {
    if position <= half_of.div_ceil(2) {
        (Anchor::FromStart, position)
    } else {
        (Anchor::FromEnd, slots + 1 - position)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharTransformation {
    /// Inserts, replaces and deletes addressed in the input unit.
    pub base_edits: Vec<CharEdit>,
    /// Uppercase edits addressed in the result of the base edits.
    pub case_edits: Vec<CharEdit>,
    /// Diacritics edits addressed in the result of the base edits.
    pub diacritic_edits: Vec<CharEdit>,
}

impl CharTransformation {
    pub fn is_identity(&self) -> bool {
        self.base_edits.is_empty() && self.case_edits.is_empty() && self.diacritic_edits.is_empty()
    }

    pub fn edits(&self) -> impl Iterator<Item = &CharEdit> {
        self.base_edits
            .iter()
            .chain(&self.case_edits)
            .chain(&self.diacritic_edits)
    }

    /// Applies the transformation, or returns `None` when an edit does not
    /// fit the unit.
    pub fn apply(&self, unit: &str) -> Option<String> {
        let chars: Vec<char> = unit.chars().collect();
        let n = chars.len();
        let mut inserts: Vec<Vec<&str>> = alloc::vec![Vec::new(); n + 2];
        let mut changed: Vec<Option<&str>> = alloc::vec![None; n + 1];
        let mut touched = alloc::vec![false; n + 1];
        for edit in &self.base_edits {
            let pos = edit.resolve(n)?;
            match edit.kind {
                EditKind::Insert => inserts[pos].push(&edit.payload),
                EditKind::Replace | EditKind::Delete => {
                    if core::mem::replace(&mut touched[pos], true) {
                        return None;
                    }
                    changed[pos] = (edit.kind == EditKind::Replace).then_some(edit.payload.as_str());
                }
                _ => return None,
            }
        }
        let mut out: Vec<char> = Vec::with_capacity(n + 4);
        for pos in 1..=n + 1 {
            for ins in &inserts[pos] {
                out.extend(ins.chars());
            }
            if pos <= n {
                match (touched[pos], changed[pos]) {
                    (false, _) => out.push(chars[pos - 1]),
                    (true, Some(rep)) => out.extend(rep.chars()),
                    (true, None) => {}
                }
            }
        }
        let m = out.len();
        for edit in &self.case_edits {
            let pos = edit.resolve(m)?;
            let c = &mut out[pos - 1];
            *c = upper_char(*c).unwrap_or(*c);
        }
        for edit in &self.diacritic_edits {
            let pos = edit.resolve(m)?;
            let mut payload = edit.payload.chars();
            let (Some(target), None) = (payload.next(), payload.next()) else {
                return None;
            };
            if strip_char(target) != Some(out[pos - 1]) {
                return None;
            }
            out[pos - 1] = target;
        }
        Some(out.into_iter().collect())
    }
}

/// One operation of a minimal edit script, positions 1-based in the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptOp {
    /// Character position for replace/delete, gap before that position for
    /// insert (`len + 1` appends).
    pub position: usize,
    pub kind: EditKind,
    pub payload: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Match(usize, usize),
    Replace(usize, usize),
    Delete(usize),
    /// Insert `dst[j]` into gap `g` (1-based) of the source.
    Insert(usize, usize),
}

/// Unit-cost Levenshtein table and backtrace from the end, preferring
/// match, then replace, delete and insert.
fn edit_steps(src: &[char], dst: &[char]) -> Vec<Step> {
    let w = dst.len() + 1;
    let mut d = alloc::vec![0usize; (src.len() + 1) * w];
    for (j, cell) in d.iter_mut().take(w).enumerate() {
        *cell = j;
    }
    for i in 1..=src.len() {
        d[i * w] = i;
        for j in 1..=dst.len() {
            let sub = d[(i - 1) * w + j - 1] + usize::from(src[i - 1] != dst[j - 1]);
            d[i * w + j] = sub.min(d[(i - 1) * w + j] + 1).min(d[i * w + j - 1] + 1);
        }
    }
    let (mut i, mut j) = (src.len(), dst.len());
    let mut steps = Vec::with_capacity(i.max(j));
    while i > 0 || j > 0 {
        let here = d[i * w + j];
        if i > 0 && j > 0 && src[i - 1] == dst[j - 1] && d[(i - 1) * w + j - 1] == here {
            steps.push(Step::Match(i - 1, j - 1));
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && d[(i - 1) * w + j - 1] + 1 == here {
            steps.push(Step::Replace(i - 1, j - 1));
            i -= 1;
            j -= 1;
        } else if i > 0 && d[(i - 1) * w + j] + 1 == here {
            steps.push(Step::Delete(i - 1));
            i -= 1;
        } else {
            steps.push(Step::Insert(i + 1, j - 1));
            j -= 1;
        }
    }
    steps.reverse();
    steps
}

/// Smallest insert/replace/delete script turning `src` into `dst`.
pub fn minimal_edit_script(src: &str, dst: &str) -> Vec<ScriptOp> {
    let s: Vec<char> = src.chars().collect();
    let t: Vec<char> = dst.chars().collect();
    edit_steps(&s, &t)
        .into_iter()
        .filter_map(|step| match step {
            Step::Match(..) => None,
            Step::Replace(i, j) => Some(ScriptOp {
                position: i + 1,
                kind: EditKind::Replace,
                payload: t[j].to_string(),
            }),
            Step::Delete(i) => Some(ScriptOp {
                position: i + 1,
                kind: EditKind::Delete,
                payload: String::new(),
            }),
            Step::Insert(g, j) => Some(ScriptOp {
                position: g,
                kind: EditKind::Insert,
                payload: t[j].to_string(),
            }),
        })
        .collect()
}

/// What steps 2 and 3 do to `current` to reach `target`: whether it gets
/// uppercased, which composed character replaces it, and whether the result
/// equals `target`.
fn settle(current: char, target: char, casing: CasingMode) -> (bool, bool, Option<char>) {
    let mut x = current;
    let mut uppercase = false;
    if x != target && target.is_uppercase() && !x.is_uppercase() {
        if let Some(u) = upper_char(x).filter(|&u| u != x) {
            x = u;
            uppercase = true;
        }
    }
    let mut diacritic = None;
    if casing == CasingMode::Uncased && x != target && strip_char(target) == Some(x) {
        diacritic = Some(target);
        x = target;
    }
    (x == target, uppercase, diacritic)
}

/// Builds the character transformation rewriting `unit` into `target`.
///
/// Inserted and replacing characters are emitted in folded form so that
/// casing and diacritics are restored by the later steps. Where the folded
/// form cannot be settled into the target character (for example a cased
/// unit that needs lowercasing), the script falls back to a replace with
/// the literal character, so applying the result always yields `target`.
pub fn build_char_transformation(unit: &str, target: &str, casing: CasingMode) -> CharTransformation {
    let src: Vec<char> = unit.chars().collect();
    let dst: Vec<char> = target.chars().collect();
    let src_folded: Vec<char> = src.iter().map(|&c| fold_char(c, casing)).collect();
    let dst_folded: Vec<char> = dst.iter().map(|&c| fold_char(c, casing)).collect();
    let n = src.len();
    let payload_for = |j: usize| {
        if settle(dst_folded[j], dst[j], casing).0 {
            dst_folded[j]
        } else {
            dst[j]
        }
    };

    let mut t = CharTransformation::default();
    let mut result: Vec<char> = Vec::with_capacity(dst.len());
    let mut base = |kind: EditKind, position: usize, payload: Option<char>| {
        let slots = if kind == EditKind::Insert { n + 1 } else { n };
        let (anchor, index) = anchored(position, slots, n);
        let payload = payload.map(String::from).unwrap_or_default();
        t.base_edits.push(CharEdit::new(kind, anchor, index, payload));
    };
    for step in edit_steps(&src_folded, &dst_folded) {
        match step {
            Step::Match(i, j) if settle(src[i], dst[j], casing).0 => result.push(src[i]),
            Step::Match(i, j) | Step::Replace(i, j) => {
                let p = payload_for(j);
                base(EditKind::Replace, i + 1, Some(p));
                result.push(p);
            }
            Step::Delete(i) => base(EditKind::Delete, i + 1, None),
            Step::Insert(gap, j) => {
                let p = payload_for(j);
                base(EditKind::Insert, gap, Some(p));
                result.push(p);
            }
        }
    }

    let m = dst.len();
    for (k, (&current, &wanted)) in result.iter().zip(&dst).enumerate() {
        let (_, uppercase, diacritic) = settle(current, wanted, casing);
        let (anchor, index) = anchored(k + 1, m, m);
        if uppercase {
            t.case_edits.push(CharEdit::new(EditKind::Uppercase, anchor, index, ""));
        }
        if let Some(c) = diacritic {
            t.diacritic_edits.push(CharEdit::new(EditKind::SetDiacritic, anchor, index, c));
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StringTransformation {
    Keep,
    Replace(String),
    Prepend(String),
    Append(String),
}

impl StringTransformation {
    pub fn apply(&self, unit: &str) -> String {
        match self {
            StringTransformation::Keep => unit.into(),
            StringTransformation::Replace(s) => s.clone(),
            StringTransformation::Prepend(s) => [s.as_str(), unit].concat(),
            StringTransformation::Append(s) => [unit, s.as_str()].concat(),
        }
    }
}

pub fn build_string_transformation(unit: &str, target: &str) -> StringTransformation {
    if unit == target {
        StringTransformation::Keep
    } else if let Some(suffix) = target.strip_prefix(unit) {
        StringTransformation::Append(suffix.into())
    } else if let Some(prefix) = target.strip_suffix(unit) {
        StringTransformation::Prepend(prefix.into())
    } else {
        StringTransformation::Replace(target.into())
    }
}

/// A dictionary label: the uncorrectable marker, a string rule or a
/// non-empty character program. Identity is always [`Transformation::Keep`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Transformation {
    Uncorrectable,
    Keep,
    Replace(String),
    Prepend(String),
    Append(String),
    Char(CharTransformation),
}

impl From<StringTransformation> for Transformation {
    fn from(t: StringTransformation) -> Self {
        match t {
            StringTransformation::Keep => Transformation::Keep,
            StringTransformation::Replace(s) => Transformation::Replace(s),
            StringTransformation::Prepend(s) => Transformation::Prepend(s),
            StringTransformation::Append(s) => Transformation::Append(s),
        }
    }
}

impl From<CharTransformation> for Transformation {
    fn from(t: CharTransformation) -> Self {
        if t.is_identity() {
            Transformation::Keep
        } else {
            Transformation::Char(t)
        }
    }
}

impl Transformation {
    /// Result of applying the label to `unit`; `None` for the uncorrectable
    /// marker and for character programs that do not fit the unit.
    pub fn apply(&self, unit: &str) -> Option<String> {
        match self {
            Transformation::Uncorrectable => None,
            Transformation::Keep => Some(unit.into()),
            Transformation::Replace(s) => Some(s.clone()),
            Transformation::Prepend(s) => Some([s.as_str(), unit].concat()),
            Transformation::Append(s) => Some([unit, s.as_str()].concat()),
            Transformation::Char(t) => t.apply(unit),
        }
    }
}

const ESCAPED: [(char, &str); 6] = [
    ('%', "%25"),
    (' ', "%20"),
    (';', "%3B"),
    ('\n', "%0A"),
    ('\r', "%0D"),
    ('\t', "%09"),
];

fn encode_into(s: &str, f: &mut impl fmt::Write) -> fmt::Result {
    for c in s.chars() {
        match ESCAPED.iter().find(|(e, _)| *e == c) {
            Some((_, code)) => f.write_str(code)?,
            None => f.write_char(c)?,
        }
    }
    Ok(())
}

pub fn percent_encode(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let _ = encode_into(s, &mut out);
    out
}

pub fn percent_decode(s: &str) -> Result<String, ParseTransformationError> {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(c) = rest.chars().next() {
        if c == '%' {
            let code = rest.get(..3).unwrap_or(rest);
            let (raw, _) = ESCAPED
                .iter()
                .find(|(_, e)| *e == code)
                .ok_or_else(|| ParseTransformationError::BadEscape(code.into()))?;
            out.push(*raw);
            rest = &rest[3..];
        } else {
            if ESCAPED.iter().any(|(e, _)| *e == c) {
                return Err(ParseTransformationError::UnescapedChar(c));
            }
            out.push(c);
            rest = &rest[c.len_utf8()..];
        }
    }
    Ok(out)
}

impl fmt::Display for CharEdit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.anchor {
            Anchor::FromStart => 's',
            Anchor::FromEnd => 'e',
        };
        write!(f, "{}@{}{}", self.kind.code(), side, self.index)?;
        if self.kind.has_payload() {
            f.write_char('=')?;
            encode_into(&self.payload, f)?;
        }
        Ok(())
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (head, payload) = match self {
            Transformation::Uncorrectable => return f.write_str("UNCORRECTABLE"),
            Transformation::Keep => return f.write_str("KEEP"),
            Transformation::Replace(s) => ("REPLACE ", s),
            Transformation::Prepend(s) => ("PREPEND ", s),
            Transformation::Append(s) => ("APPEND ", s),
            Transformation::Char(t) => {
                f.write_str("CHAR ")?;
                for (i, edit) in t.edits().enumerate() {
                    if i > 0 {
                        f.write_char(';')?;
                    }
                    write!(f, "{edit}")?;
                }
                return Ok(());
            }
        };
        f.write_str(head)?;
        encode_into(payload, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseTransformationError {
    #[error("unknown transformation `{0}`")]
    UnknownHead(String),
    #[error("malformed character edit `{0}`")]
    BadEdit(String),
    #[error("character edits out of canonical order")]
    EditOrder,
    #[error("invalid escape `{0}`")]
    BadEscape(String),
    #[error("character {0:?} must be percent-encoded")]
    UnescapedChar(char),
    #[error("{0} needs a non-empty payload")]
    EmptyPayload(&'static str),
}

impl FromStr for CharEdit {
    type Err = ParseTransformationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseTransformationError::BadEdit(s.into());
        let (code, rest) = s.split_once('@').ok_or_else(bad)?;
        let kind = [
            EditKind::Insert,
            EditKind::Replace,
            EditKind::Delete,
            EditKind::Uppercase,
            EditKind::SetDiacritic,
        ]
        .into_iter()
        .find(|k| k.code() == code)
        .ok_or_else(bad)?;
        let (position, payload) = match rest.split_once('=') {
            Some((p, v)) if kind.has_payload() => (p, percent_decode(v)?),
            None if !kind.has_payload() => (rest, String::new()),
            _ => return Err(bad()),
        };
        let anchor = match position.as_bytes().first() {
            Some(b's') => Anchor::FromStart,
            Some(b'e') => Anchor::FromEnd,
            _ => return Err(bad()),
        };
        let digits = &position[1..];
        if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index = digits.parse().map_err(|_| bad())?;
        let single = payload.chars().count() == 1;
        if (kind.has_payload() && payload.is_empty()) || (kind == EditKind::SetDiacritic && !single) {
            return Err(bad());
        }
        Ok(CharEdit {
            kind,
            anchor,
            index,
            payload,
        })
    }
}

impl FromStr for Transformation {
    type Err = ParseTransformationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "UNCORRECTABLE" => return Ok(Transformation::Uncorrectable),
            "KEEP" => return Ok(Transformation::Keep),
            _ => {}
        }
        let (head, body) = s
            .split_once(' ')
            .ok_or_else(|| ParseTransformationError::UnknownHead(s.into()))?;
        let nonempty = |name: &'static str| {
            let v = percent_decode(body)?;
            if v.is_empty() {
                Err(ParseTransformationError::EmptyPayload(name))
            } else {
                Ok(v)
            }
        };
        match head {
            "REPLACE" => Ok(Transformation::Replace(percent_decode(body)?)),
            "PREPEND" => Ok(Transformation::Prepend(nonempty("PREPEND")?)),
            "APPEND" => Ok(Transformation::Append(nonempty("APPEND")?)),
            "CHAR" => {
                let mut t = CharTransformation::default();
                let mut stage = 0;
                for part in body.split(';') {
                    let edit: CharEdit = part.parse()?;
                    let edit_stage = match edit.kind {
                        k if k.is_base() => 0,
                        EditKind::Uppercase => 1,
                        _ => 2,
                    };
                    if edit_stage < stage {
                        return Err(ParseTransformationError::EditOrder);
                    }
                    stage = edit_stage;
                    match edit_stage {
                        0 => t.base_edits.push(edit),
                        1 => t.case_edits.push(edit),
                        _ => t.diacritic_edits.push(edit),
                    }
                }
                Ok(Transformation::Char(t))
            }
            other => Err(ParseTransformationError::UnknownHead(other.into())),
        }
    }
}
