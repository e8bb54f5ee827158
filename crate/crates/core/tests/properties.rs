use gec_xform_core::align::{align, align_bruteforce, max_span_len};
use gec_xform_core::corpus::{corrupt_indexed, parse_m2, serialize_m2, GoldEdit};
use gec_xform_core::evaluate::score;
use gec_xform_core::transform::{apply_labels, encode, induce};
use gec_xform_core::{
    CasingMode, CorruptionConfig, GranularityMode, SentencePair, Tokenizer, TokenizerMode, TransformationDictionary,
};
use proptest::prelude::*;

fn casing() -> impl Strategy<Value = CasingMode> {
    prop_oneof![Just(CasingMode::Cased), Just(CasingMode::Uncased)]
}

fn subwords() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(("[ab.]{1,3}", any::<bool>()), 1..=4).prop_map(|pieces| {
        pieces
            .into_iter()
            .enumerate()
            .map(|(i, (p, initial))| if i == 0 || initial { format!(" {p}") } else { p })
            .collect()
    })
}

proptest! {
    #[test]
    fn dp_matches_exhaustive_search(subwords in subwords(), gold in "[abAá, ]{1,12}") {
        prop_assume!(!gold.trim().is_empty());
        match (align(&subwords, &gold), align_bruteforce(&subwords, &gold)) {
            (Ok(a), Ok(b)) => prop_assert!((a.total_weight - b.total_weight).abs() <= 1e-9),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn alignments_partition_the_gold(subwords in subwords(), gold in "[abAá, ]{1,30}") {
        prop_assume!(!gold.trim().is_empty());
        if let Ok(a) = align(&subwords, &gold) {
            prop_assert!(a.total_weight <= subwords.len() as f64 + 1e-9);
            let joined: String = a.span_texts().concat();
            prop_assert!(gold.starts_with(&joined));
            prop_assert!(gold[joined.len()..].trim().is_empty());
            let mut pos = 0;
            for (span, s) in a.spans.iter().zip(&subwords) {
                prop_assert_eq!(span.start, pos);
                let len = span.text.chars().count();
                prop_assert!(len <= max_span_len(s.chars().count()));
                pos += len;
            }
        }
    }

    #[test]
    fn casing_and_diacritics_in_gold_leave_the_weight_alone(
        subwords in subwords(),
        gold in "[abc ]{1,14}",
        upper in prop::collection::vec(any::<bool>(), 14),
    ) {
        prop_assume!(!gold.trim().is_empty());
        let noisy: String = gold
            .chars()
            .zip(&upper)
            .map(|(c, &u)| match (c, u) {
                ('a', true) => 'Á',
                ('c', true) => 'č',
                (c, true) => c.to_ascii_uppercase(),
                (c, false) => c,
            })
            .collect();
        let plain = align(&subwords, &gold).map(|a| a.total_weight);
        let marked = align(&subwords, &noisy).map(|a| a.total_weight);
        prop_assert_eq!(plain, marked);
    }

    #[test]
    fn encode_then_apply_recovers_gold(
        gold in "[A-Za-zčšžáéíů]{1,7}( [a-zčšžáéíů]{1,7}){0,5}",
        seed in any::<u64>(),
        casing in casing(),
        chunk in 1usize..4,
    ) {
        let config = CorruptionConfig {
            substitute_char: 0.1,
            delete_char: 0.05,
            insert_char: 0.05,
            strip_word_diacritics: 0.3,
            toggle_word_casing: 0.2,
            seed,
            ..CorruptionConfig::default()
        };
        let pair = corrupt_indexed(&gold, &config, 0);
        let tokenizers = [
            Tokenizer::word(casing),
            Tokenizer::new(TokenizerMode::CharChunks(chunk), casing).unwrap(),
        ];
        for tokenizer in &tokenizers {
            for mode in GranularityMode::ALL {
                let (dict, skipped) = induce(&[(pair.source.as_str(), pair.gold.as_str())], &[], 0, tokenizer, mode, 1);
                prop_assert!(skipped.is_empty());
                let labeled = encode(&pair.source, &pair.gold, &dict, tokenizer, seed).unwrap();
                prop_assert_eq!(labeled.uncorrectable_count(), 0);
                let out = apply_labels(&pair.source, &labeled.labels, &dict, tokenizer).unwrap();
                prop_assert_eq!(&out, &pair.gold, "{} {:?}", mode, pair);
                let reread = TransformationDictionary::from_text(&dict.to_text()).unwrap();
                prop_assert_eq!(&reread, &dict);
            }
        }
    }

    #[test]
    fn stricter_thresholds_keep_subsets(
        golds in prop::collection::vec("[a-zěščř]{1,6}( [a-zěščř]{1,6}){0,4}", 1..12),
        seed in any::<u64>(),
    ) {
        let config = CorruptionConfig { seed, strip_word_diacritics: 0.4, ..CorruptionConfig::default() };
        let pairs: Vec<SentencePair> = golds.iter().enumerate().map(|(i, g)| corrupt_indexed(g, &config, i as u64)).collect();
        let tuples: Vec<(&str, &str)> = pairs.iter().map(|p| (p.source.as_str(), p.gold.as_str())).collect();
        let tokenizer = Tokenizer::word(CasingMode::Uncased);
        for mode in GranularityMode::ALL {
            let loose = induce(&tuples, &[], 0, &tokenizer, mode, 1).0;
            let strict = induce(&tuples, &[], 0, &tokenizer, mode, 2).0;
            prop_assert!(strict.len() <= loose.len());
            for (t, _) in strict.entries() {
                prop_assert!(loose.id_of(t).is_some());
            }
        }
    }

    #[test]
    fn m2_serialization_round_trips(
        blocks in prop::collection::vec(
            (
                prop::collection::vec("[a-zá.,]{1,5}", 1..6),
                prop::collection::vec((0usize..6, 0usize..3, "[a-z]{0,4}", 0usize..2), 0..4),
            ),
            1..6,
        )
    ) {
        let pairs: Vec<SentencePair> = blocks
            .into_iter()
            .map(|(tokens, raw)| {
                let n = tokens.len();
                let mut edits: Vec<GoldEdit> = Vec::new();
                for (start, len, correction, annotator) in raw {
                    let start = start.min(n);
                    let end = (start + len).min(n);
                    let clash = edits.iter().any(|e| {
                        e.annotator == annotator
                            && ((start < e.end_token && e.start_token < end) || (start == e.start_token && (start == end || e.start_token == e.end_token)))
                    });
                    if !clash {
                        edits.push(GoldEdit::new(start, end, correction, annotator));
                    }
                }
                SentencePair { source: tokens.join(" "), gold: String::new(), gold_edits: edits }
            })
            .collect();
        let text = serialize_m2(&pairs);
        let parsed = parse_m2(&text, 0).unwrap();
        prop_assert_eq!(serialize_m2(&parsed), text);
        for (a, b) in parsed.iter().zip(&pairs) {
            prop_assert_eq!(&a.gold_edits, &b.gold_edits);
            prop_assert!(!a.gold.contains("  ") && a.gold.trim() == a.gold);
        }
    }

    #[test]
    fn score_is_order_independent(
        items in prop::collection::vec(("[ab]{1,3}( [ab]{1,3}){0,3}", "[ab]{1,3}( [ab]{1,3}){0,3}", "[ab]{1,3}( [ab]{1,3}){0,3}"), 1..8),
        rotate in 0usize..8,
    ) {
        let pairs: Vec<SentencePair> = items.iter().map(|(s, g, _)| SentencePair::new(s.clone(), g.clone())).collect();
        let hyps: Vec<&str> = items.iter().map(|(_, _, h)| h.as_str()).collect();
        let k = rotate % pairs.len();
        let mut p2 = pairs.clone();
        let mut h2 = hyps.clone();
        p2.rotate_left(k);
        h2.rotate_left(k);
        prop_assert_eq!(score(&pairs, &hyps), score(&p2, &h2));
        let perfect: Vec<&str> = items.iter().map(|(_, g, _)| g.as_str()).collect();
        prop_assert_eq!(score(&pairs, &perfect).f_half, 1.0);
    }
}

#[test]
fn generality_of_character_rules() {
    let pairs = [("go", "Going"), ("walk", "Walking")];
    let tokenizer = Tokenizer::word(CasingMode::Cased);
    let (chars, _) = induce(&pairs, &[], 0, &tokenizer, GranularityMode::CHAR_AT_WORD, 1);
    assert_eq!(chars.len(), 3);
    assert_eq!(chars.get(2).unwrap().to_string(), "CHAR ins@e1=i;ins@e1=n;ins@e1=g;upc@s2");
    assert_eq!(chars.count(2), Some(2));
    let (strings, _) = induce(&pairs, &[], 0, &tokenizer, GranularityMode::STRING_AT_WORD, 1);
    let rules: Vec<String> = strings.entries()[2..].iter().map(|(t, _)| t.to_string()).collect();
    assert_eq!(rules, ["REPLACE %20Going", "REPLACE %20Walking"]);
}

#[test]
fn synthetic_pairs_are_capped_and_pooled() {
    let tokenizer = Tokenizer::word(CasingMode::Cased);
    let authentic = [("teh", "the")];
    let synthetic = [("teh", "the"), ("adn", "and"), ("adn", "and")];
    let (dict, _) = induce(&authentic, &synthetic, 1, &tokenizer, GranularityMode::STRING_AT_WORD, 2);
    let rules: Vec<String> = dict.entries()[2..].iter().map(|(t, _)| t.to_string()).collect();
    assert_eq!(rules, ["REPLACE %20the"]);
    let (dict, _) = induce(&authentic, &synthetic, 3, &tokenizer, GranularityMode::STRING_AT_WORD, 2);
    assert_eq!(dict.len(), 4);
}
