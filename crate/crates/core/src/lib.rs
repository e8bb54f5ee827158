//! Automatically induced correction transformations for grammatical error
//! correction tagging.
//!
//! A parallel corpus of erroneous and corrected sentences is turned into a
//! dictionary of per-unit transformations: either character edit programs
//! (inserts, replaces, deletes, uppercasing and diacritics restoration,
//! each indexed from the start or the end of the unit) or plain string rules
//! (keep, replace, prepend, append). Units are subwords or whole words, which
//! gives four granularities. Sentences can then be encoded as one label per
//! unit and decoded back, and the oracle upper bound of a dictionary can be
//! measured with an edit-level F0.5 scorer.
//!
//! The crate is `no_std` with `alloc`; file IO and the command line live in
//! the `gec-xform` companion crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod align;
pub mod corpus;
pub mod editscript;
pub mod evaluate;
pub mod textnorm;
pub mod tokenizer;
pub mod transform;

pub use align::{align, Alignment, AlignError, AlignedSpan};
pub use corpus::{CorruptionConfig, GoldEdit, SentencePair};
pub use editscript::{
    Anchor, CharEdit, CharTransformation, EditKind, StringTransformation, Transformation,
};
pub use evaluate::{Classifier, EvalCounts, OracleAnalysisRow};
pub use textnorm::CasingMode;
pub use tokenizer::{Subword, SubwordSequence, Tokenizer, TokenizerMode};
pub use transform::{
    Grain, GranularityMode, LabeledSentence, TransformationDictionary, UnitKind,
};
