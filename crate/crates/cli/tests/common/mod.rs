//! Synthetic inflected-language corpus for integration tests.
#![allow(dead_code)]

use gec_xform_core::textnorm::normalize_for_casing;
use gec_xform_core::CasingMode;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const PARADIGMS: &[(&[&str], &[&str])] = &[
    (
        &["žen", "kočk", "škol", "řek", "ulic", "knih", "písničk", "cest"],
        &["a", "y", "e", "u", "ou", "ám", "ách", "ami"],
    ),
    (
        &["hrad", "strom", "les", "obchod", "dub", "most", "vlak"],
        &["", "u", "em", "ech", "y", "ů", "ům"],
    ),
    (
        &["měst", "okn", "jablk", "kol", "slov", "míst"],
        &["o", "a", "u", "em", "ech", "ům"],
    ),
    (&["mluv", "vař", "uč", "nos", "prosí"], &["ím", "íš", "í", "íme", "íte", "ejí"]),
    (&["nes", "ved", "pas", "kvet"], &["u", "eš", "e", "eme", "ete", "ou"]),
];

pub const FUNCTION_WORDS: &[&str] = &["a", "v", "na", "se", "je", "ale", "že", "když", "pod", "před", "už"];

#[derive(Clone, Debug)]
pub struct Word {
    /// Paradigm and stem index, `None` for function words.
    pub inflected: Option<(usize, usize)>,
    pub suffix: usize,
    pub text: String,
}

fn inflect(paradigm: usize, stem: usize, suffix: usize) -> String {
    let (stems, suffixes) = PARADIGMS[paradigm];
    format!("{}{}", stems[stem], suffixes[suffix])
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// A sentence of 4 to 10 words: capitalized, full stop attached to the last
/// word, an occasional comma.
pub fn sentence(rng: &mut ChaCha8Rng) -> Vec<Word> {
    let len = rng.random_range(4..=10);
    let mut words: Vec<Word> = (0..len)
        .map(|_| {
            if rng.random_bool(0.3) {
                Word {
                    inflected: None,
                    suffix: 0,
                    text: FUNCTION_WORDS.choose(rng).unwrap().to_string(),
                }
            } else {
                let p = rng.random_range(0..PARADIGMS.len());
                let s = rng.random_range(0..PARADIGMS[p].0.len());
                let k = rng.random_range(0..PARADIGMS[p].1.len());
                Word {
                    inflected: Some((p, s)),
                    suffix: k,
                    text: inflect(p, s, k),
                }
            }
        })
        .collect();
    words[0].text = capitalize(&words[0].text);
    if len > 5 && rng.random_bool(0.3) {
        words[2].text.push(',');
    }
    words[len - 1].text.push('.');
    words
}

pub fn text(words: &[Word]) -> String {
    words.iter().map(|w| w.text.as_str()).collect::<Vec<_>>().join(" ")
}

fn trailing_punct(word: &str) -> (&str, &str) {
    let cut = word.trim_end_matches(['.', ',']).len();
    word.split_at(cut)
}

/// Erroneous version of a sentence: wrong inflection suffixes, missing
/// diacritics, flipped first-letter casing and the odd typo.
pub fn corrupt(words: &[Word], rng: &mut ChaCha8Rng) -> String {
    let out: Vec<String> = words
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let (_, punct) = trailing_punct(&w.text);
            let mut body = trailing_punct(&w.text).0.to_string();
            if let Some((p, s)) = w.inflected {
                if rng.random_bool(0.2) {
                    let n = PARADIGMS[p].1.len();
                    let k = (w.suffix + rng.random_range(1..n)) % n;
                    body = inflect(p, s, k);
                    if i == 0 {
                        body = capitalize(&body);
                    }
                }
            }
            if rng.random_bool(0.12) {
                body = gec_xform_core::textnorm::strip_diacritics(&body);
            }
            if rng.random_bool(0.05) {
                let mut chars = body.chars();
                let first = chars.next().unwrap();
                body = if first.is_uppercase() {
                    first.to_lowercase().chain(chars).collect()
                } else {
                    first.to_uppercase().chain(chars).collect()
                };
            }
            if rng.random_bool(0.03) && body.chars().count() > 1 {
                let mut chars: Vec<char> = body.chars().collect();
                let at = rng.random_range(0..chars.len());
                chars[at] = *['q', 'x', 'w'].choose(rng).unwrap();
                body = chars.into_iter().collect();
            }
            format!("{body}{punct}")
        })
        .collect();
    out.join(" ")
}

/// Subword vocabulary: word-initial stems and function words, suffixes and
/// punctuation as continuations. Uncased vocabularies are normalized.
pub fn vocabulary(casing: CasingMode) -> String {
    let mut pieces = std::collections::BTreeSet::new();
    let mut add_initial = |w: &str| {
        pieces.insert(format!(" {}", normalize_for_casing(w, casing)));
        pieces.insert(format!(" {}", normalize_for_casing(&capitalize(w), casing)));
    };
    for (stems, _) in PARADIGMS {
        stems.iter().for_each(|s| add_initial(s));
    }
    FUNCTION_WORDS.iter().for_each(|w| add_initial(w));
    for (_, suffixes) in PARADIGMS {
        for s in suffixes.iter().filter(|s| !s.is_empty()) {
            pieces.insert(normalize_for_casing(s, casing));
        }
    }
    pieces.insert(".".into());
    pieces.insert(",".into());
    pieces.into_iter().map(|p| p + "\n").collect()
}

/// `n` gold sentences.
pub fn golds(n: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    (0..n).map(|_| text(&sentence(rng))).collect()
}

/// `n` (erroneous source, gold) pairs with inflection errors.
pub fn inflection_pairs(n: usize, rng: &mut ChaCha8Rng) -> Vec<(String, String)> {
    (0..n)
        .map(|_| {
            let words = sentence(rng);
            (corrupt(&words, rng), text(&words))
        })
        .collect()
}
