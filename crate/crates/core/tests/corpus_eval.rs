use myanmar_translit::corpus::{evaluate, evaluate_parallel, parse_corpus, STANDARD_CORPUS};
use myanmar_translit::engine::transliterate;
use myanmar_translit::rules::RuleSet;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DOUBLED_OPEN: &str = "default:A@nucleus:!_[K] doubled";
const DOUBLED_CHECKED: &str = "default:A@nucleus:_[K&OBS] doubled";

fn pair() -> Vec<myanmar_translit::corpus::CorpusEntry> {
    parse_corpus("BATTERY\tဘက်ထရီ\tM\ten\t-\nRACKET\tရက်ကက်\tM\ten\t-\n").unwrap()
}

#[test]
fn doubled_letter_rules_carry_battery_and_racket() {
    let rules = RuleSet::standard();
    assert!(rules.rule(DOUBLED_OPEN).is_some() && rules.rule(DOUBLED_CHECKED).is_some());
    assert_eq!(evaluate(&pair(), rules, 3).top1(), Some(1.0));

    let ablated = rules.without_rules(&[DOUBLED_OPEN, DOUBLED_CHECKED]);
    // independent check: the ablated engine never reaches the gold forms first
    for e in pair() {
        let best = transliterate(&e.source, &ablated, 1).map(|c| c[0].target.clone()).ok();
        assert_ne!(best.as_deref(), Some(e.target.as_str()));
    }
    let r = evaluate(&pair(), &ablated, 3);
    assert_eq!(r.top1(), Some(0.0));
    assert_eq!(r.failures.len(), 2);
    for f in &r.failures {
        assert!(
            f.divergent_rules.iter().any(|id| id.contains("@nucleus")),
            "{}: {:?}",
            f.source,
            f.divergent_rules
        );
    }
}

#[test]
fn parallel_matches_sequential() {
    let corpus = parse_corpus(STANDARD_CORPUS).unwrap();
    let rules = RuleSet::standard();
    let a = evaluate(&corpus, rules, 3);
    let b = evaluate_parallel(&corpus, rules, 3);
    assert_eq!(a.to_tsv(), b.to_tsv());
    assert_eq!(a.to_string(), b.to_string());
}

#[test]
fn ablation_never_helps_cited_entries() {
    let corpus = parse_corpus(STANDARD_CORPUS).unwrap();
    let rules = RuleSet::standard();
    let base = evaluate(&corpus, rules, 3);
    let mut cited: Vec<&str> = base
        .failures
        .iter()
        .flat_map(|f| f.divergent_rules.iter().map(String::as_str))
        .collect();
    cited.sort_unstable();
    cited.dedup();
    for id in cited {
        let subset: Vec<_> = corpus
            .iter()
            .filter(|e| base.failures.iter().any(|f| f.source == e.source && f.divergent_rules.iter().any(|r| r == id)))
            .cloned()
            .collect();
        let before = evaluate(&subset, rules, 3).top1().unwrap();
        let after = evaluate(&subset, &rules.without_rules(&[id]), 3).top1().unwrap();
        assert!(after <= before, "{id}: {before} -> {after}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]
    #[test]
    fn metrics_ignore_corpus_order(seed in any::<u64>()) {
        let corpus = parse_corpus(STANDARD_CORPUS).unwrap();
        let mut shuffled = corpus.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let rules = RuleSet::standard();
        let a = evaluate(&corpus, rules, 3);
        let b = evaluate_parallel(&shuffled, rules, 3);
        prop_assert_eq!(a, b);
    }
}
