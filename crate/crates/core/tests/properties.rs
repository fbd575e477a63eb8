mod common;

use myanmar_translit::engine::{analyze, transliterate};
use myanmar_translit::latin::ChunkFlag;
use myanmar_translit::pinyin::{parse_pinyin_with, pinyin_to_burmese, PinyinMode, PinyinSyllable};
use myanmar_translit::rules::RuleSet;
use myanmar_translit::script::{Ending, Nucleus, ScriptModel, Tone};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NASAL_NUCLEI: [Nucleus; 7] =
    [Nucleus::A, Nucleus::I, Nucleus::U, Nucleus::Ai, Nucleus::Au, Nucleus::Ei, Nucleus::Ou];
const GLOTTAL_NUCLEI: [Nucleus; 8] =
    [Nucleus::A, Nucleus::Eh, Nucleus::I, Nucleus::O, Nucleus::Ai, Nucleus::Au, Nucleus::Ei, Nucleus::Ou];

fn latin_word() -> impl Strategy<Value = String> {
    "[A-Z]{1,10}"
}

fn table_syllable() -> impl Strategy<Value = String> {
    let table = RuleSet::standard().pinyin_syllables.clone();
    proptest::sample::select(table)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn compose_decompose_round_trip(seed in any::<u64>(), n in 1usize..5) {
        let script = ScriptModel::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let syllables: Vec<_> = (0..n).map(|_| common::random_syllable(&mut rng)).collect();
        let text = script.compose(&syllables).unwrap();
        prop_assert_eq!(script.decompose(&text).unwrap(), syllables.clone());
        prop_assert_eq!(script.compose(&syllables).unwrap(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn chunking_is_lossless(word in latin_word()) {
        let rules = RuleSet::standard();
        let a = analyze(&word, rules).unwrap();
        let joined: String = a.chunks.iter().map(|c| c.text()).collect();
        prop_assert_eq!(&joined, &a.word);
        prop_assert_eq!(a, analyze(&word, rules).unwrap());
    }

    #[test]
    fn empty_onsets_are_flagged(word in latin_word()) {
        let a = analyze(&word, RuleSet::standard()).unwrap();
        for c in a.chunks.iter().filter(|c| c.onset.is_empty()) {
            prop_assert!(c.flags.has(ChunkFlag::WordInitial) || c.flags.has(ChunkFlag::HiatusStart), "{}", c);
        }
    }

    #[test]
    fn top_k_is_a_prefix(word in latin_word(), k in 1usize..6) {
        let rules = RuleSet::standard();
        if let (Ok(small), Ok(big)) = (transliterate(&word, rules, k), transliterate(&word, rules, k + 1)) {
            prop_assert!(big.len() >= small.len());
            prop_assert_eq!(&big[..small.len()], &small[..]);
        }
    }

    #[test]
    fn candidates_are_well_formed(word in latin_word()) {
        let script = ScriptModel::standard();
        let Ok(cands) = transliterate(&word, RuleSet::standard(), 5) else { return Ok(()) };
        for c in cands {
            let back = script.decompose(&c.target);
            prop_assert!(back.is_ok(), "{} {}", word, c.target);
            prop_assert_eq!(script.compose(&c.syllables).unwrap(), c.target.clone());
            for s in c.syllables.iter().filter(|s| s.literal_override.is_none()) {
                match s.rhyme.ending {
                    Ending::Nasal => prop_assert!(NASAL_NUCLEI.contains(&s.rhyme.nucleus), "{} {}", word, c.target),
                    Ending::Glottal => prop_assert!(GLOTTAL_NUCLEI.contains(&s.rhyme.nucleus), "{} {}", word, c.target),
                    Ending::Open => {}
                }
            }
        }
    }

    #[test]
    fn same_output_on_any_thread_count(word in latin_word()) {
        let rules = RuleSet::standard();
        let here = transliterate(&word, rules, 4);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let there = pool.install(|| transliterate(&word, rules, 4));
        prop_assert_eq!(here, there);
    }

    #[test]
    fn pinyin_aspiration_survives(syl in table_syllable(), tone in 1u8..5) {
        let rules = RuleSet::standard();
        let parsed = parse_pinyin_with(&format!("{syl}{tone}"), rules).unwrap();
        prop_assert_eq!(parsed.len(), 1);
        let initial = parsed[0].initial.clone();
        let cands = pinyin_to_burmese(&parsed, PinyinMode::PerSyllable, rules, 8).unwrap();
        for c in cands {
            let base = c.syllables[0].onset.base;
            match initial.as_str() {
                "t" => prop_assert_eq!(base, 'ထ'),
                "k" => prop_assert_eq!(base, 'ခ'),
                "d" | "g" => prop_assert!(base != 'ထ' && base != 'ခ'),
                _ => {}
            }
        }
    }

    #[test]
    fn pinyin_tones_are_fixed(syl in table_syllable(), tone in prop_oneof![Just(1u8), Just(3), Just(4)]) {
        let rules = RuleSet::standard();
        let parsed = vec![PinyinSyllable::from_spelling(&syl, tone).unwrap()];
        let want = match tone { 1 => Tone::High, 3 => Tone::Low, _ => Tone::Creaky };
        let a = pinyin_to_burmese(&parsed, PinyinMode::PerSyllable, rules, 16).unwrap();
        prop_assert_eq!(&a, &pinyin_to_burmese(&parsed, PinyinMode::PerSyllable, rules, 16).unwrap());
        for c in a {
            let r = c.syllables[0].rhyme;
            if r.ending != Ending::Glottal && r.nucleus != Nucleus::Schwa && c.syllables[0].killer_coda.is_empty() {
                prop_assert_eq!(r.tone, want, "{} {}", syl, c.target);
            }
        }
    }
}
