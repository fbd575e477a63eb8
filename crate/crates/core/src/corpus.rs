//! Gold corpus loading and evaluation.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::engine::{self, Candidate};
use crate::pinyin::{self, PinyinMode};
use crate::rules::RuleSet;
use crate::script::{BurmeseSyllable, ScriptModel};

/// The shipped gold corpus.
pub const STANDARD_CORPUS: &str = include_str!("../data/corpus.tsv");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("corpus line {line}: target {target} is not well-formed Burmese")]
    InvalidTarget { line: usize, target: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    /// conventional spelling
    M,
    /// newer spelling seen on the web
    W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lang {
    En,
    Zh,
}

impl Lang {
    pub fn key(self) -> &'static str {
        match self {
            Lang::En => "en",
            Lang::Zh => "zh",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntryFlag {
    /// target looks corrupted in the source text; excluded from metrics
    Verify,
    /// served by a lexicon entry
    Lexicon,
    /// keeps asat-marked letters for dropped consonants
    ModernKillerStyle,
}

impl EntryFlag {
    fn from_key(key: &str) -> Option<Self> {
        match key {
            "verify" => Some(EntryFlag::Verify),
            "lexicon" => Some(EntryFlag::Lexicon),
            "modern_killer_style" => Some(EntryFlag::ModernKillerStyle),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub source: String,
    pub target: String,
    pub origin: Origin,
    pub lang: Lang,
    pub flags: BTreeSet<EntryFlag>,
    pub line: usize,
}

impl CorpusEntry {
    pub fn excluded(&self) -> bool {
        self.flags.contains(&EntryFlag::Verify)
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let script = ScriptModel::standard();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let err = |message: String| CorpusError::Parse { line, message };
        let cols: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        if !(4..=5).contains(&cols.len()) {
            return Err(err(format!("expected 4 or 5 columns, found {}", cols.len())));
        }
        if cols[0].is_empty() || cols[1].is_empty() {
            return Err(err("empty source or target".into()));
        }
        let origin = match cols[2] {
            "M" => Origin::M,
            "W" => Origin::W,
            o => return Err(err(format!("origin must be M or W, not `{o}`"))),
        };
        let lang = match cols[3] {
            "en" => Lang::En,
            "zh" => Lang::Zh,
            l => return Err(err(format!("lang must be en or zh, not `{l}`"))),
        };
        let mut flags = BTreeSet::new();
        if let Some(f) = cols.get(4).filter(|f| **f != "-" && !f.is_empty()) {
            for key in f.split(',') {
                let flag = EntryFlag::from_key(key.trim()).ok_or_else(|| err(format!("unknown flag `{key}`")))?;
                flags.insert(flag);
            }
        }
        let entry = CorpusEntry {
            source: cols[0].to_string(),
            target: cols[1].to_string(),
            origin,
            lang,
            flags,
            line,
        };
        if !entry.excluded() && script.decompose(&entry.target).is_err() {
            return Err(CorpusError::InvalidTarget {
                line,
                target: entry.target,
            });
        }
        out.push(entry);
    }
    Ok(out)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_corpus(&text)
}

/// Hit counts over a set of entries.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Metrics {
    pub entries: usize,
    pub top1_hits: usize,
    pub topk_hits: usize,
    /// sum of per-entry syllable match fractions
    pub syllable_sum: f64,
}

impl Metrics {
    fn ratio(&self, x: f64) -> Option<f64> {
        (self.entries > 0).then(|| x / self.entries as f64)
    }

    pub fn top1(&self) -> Option<f64> {
        self.ratio(self.top1_hits as f64)
    }

    pub fn topk(&self) -> Option<f64> {
        self.ratio(self.topk_hits as f64)
    }

    pub fn syllable_accuracy(&self) -> Option<f64> {
        self.ratio(self.syllable_sum)
    }

    fn add(&mut self, o: &Outcome) {
        self.entries += 1;
        self.top1_hits += usize::from(o.rank == Some(0));
        self.topk_hits += usize::from(o.rank.is_some());
        self.syllable_sum += o.syllables;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub source: String,
    pub target: String,
    pub lang: Lang,
    /// best-first candidate targets
    pub candidates: Vec<String>,
    /// rules of the best candidate that produced syllables absent from the target
    pub divergent_rules: Vec<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub k: usize,
    pub overall: Metrics,
    pub english: Metrics,
    pub pinyin: Metrics,
    /// verify-flagged entries skipped
    pub excluded: usize,
    /// entries whose best candidate is not the target, ordered by language and source
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn top1(&self) -> Option<f64> {
        self.overall.top1()
    }

    pub fn topk(&self) -> Option<f64> {
        self.overall.topk()
    }

    pub fn syllable_accuracy(&self) -> Option<f64> {
        self.overall.syllable_accuracy()
    }

    /// Tab-separated rows: metrics first, then one row per failure.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("scope\tentries\ttop1\ttopk\tsyllable_accuracy\n");
        for (name, m) in self.scopes() {
            out.push_str(&format!(
                "{name}\t{}\t{}\t{}\t{}\n",
                m.entries,
                fmt_ratio(m.top1()),
                fmt_ratio(m.topk()),
                fmt_ratio(m.syllable_accuracy())
            ));
        }
        for f in &self.failures {
            out.push_str(&format!(
                "failure\t{}\t{}\t{}\t{}\n",
                f.source,
                f.target,
                f.candidates.join(","),
                f.error.clone().unwrap_or_else(|| f.divergent_rules.join(","))
            ));
        }
        out
    }

    fn scopes(&self) -> [(&'static str, &Metrics); 3] {
        [("all", &self.overall), ("en", &self.english), ("zh", &self.pinyin)]
    }
}

fn fmt_ratio(r: Option<f64>) -> String {
    r.map_or_else(|| "N/A".to_string(), |r| format!("{r:.3}"))
}

fn fmt_share(hits: usize, m: &Metrics, r: Option<f64>) -> String {
    match r {
        Some(r) => format!("{hits}/{} ({:.1}%)", m.entries, r * 100.0),
        None => "N/A".to_string(),
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, m) in self.scopes() {
            writeln!(
                f,
                "{name:<4} entries {:>3}  top1 {}  top{} {}  syllables {}",
                m.entries,
                fmt_share(m.top1_hits, m, m.top1()),
                self.k,
                fmt_share(m.topk_hits, m, m.topk()),
                m.syllable_accuracy().map_or("N/A".into(), |r| format!("{:.1}%", r * 100.0)),
            )?;
        }
        writeln!(f, "excluded (verify): {}", self.excluded)?;
        if !self.failures.is_empty() {
            writeln!(f, "failures:")?;
        }
        for x in &self.failures {
            write!(f, "  {} {} got {}", x.source, x.target, x.candidates.join(" "))?;
            match &x.error {
                Some(e) => writeln!(f, "  error: {e}")?,
                None => writeln!(f, "  rules: {}", x.divergent_rules.join(" "))?,
            }
        }
        Ok(())
    }
}

struct Outcome {
    rank: Option<usize>,
    syllables: f64,
    failure: Option<Failure>,
}

fn candidates_for(entry: &CorpusEntry, rules: &RuleSet, k: usize) -> Result<Vec<Candidate>, String> {
    match entry.lang {
        Lang::En => engine::transliterate(&entry.source, rules, k).map_err(|e| e.to_string()),
        Lang::Zh => pinyin::parse_pinyin_with(&entry.source, rules)
            .and_then(|s| pinyin::pinyin_to_burmese(&s, PinyinMode::Word, rules, k))
            .map_err(|e| e.to_string()),
    }
}

/// Per-syllable texts of a decomposed word.
fn syllable_texts(script: &ScriptModel, syllables: &[BurmeseSyllable]) -> Option<(Vec<String>, Vec<std::ops::Range<usize>>)> {
    let (text, spans) = script.compose_spans(syllables).ok()?;
    let ranges: Vec<_> = spans
        .iter()
        .map(|s| s.onset.start..s.killers.last().map_or(s.rhyme.end, |k| k.end))
        .collect();
    Some((ranges.iter().map(|r| text[r.clone()].to_string()).collect(), ranges))
}

/// Longest common subsequence; returns which items of `b` are matched.
fn lcs_matches(a: &[String], b: &[String]) -> Vec<bool> {
    let (n, m) = (a.len(), b.len());
    let mut dp = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            dp[i][j] = if a[i] == b[j] {
                dp[i + 1][j + 1] + 1
            } else {
                dp[i + 1][j].max(dp[i][j + 1])
            };
        }
    }
    let mut matched = vec![false; m];
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        if a[i] == b[j] {
            matched[j] = true;
            i += 1;
            j += 1;
        } else if dp[i + 1][j] >= dp[i][j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    matched
}

/// Matched share of syllables and the rules behind unmatched candidate syllables.
fn compare(script: &ScriptModel, target: &str, best: &Candidate) -> (f64, Vec<String>) {
    let Ok(gold) = script.decompose(target) else {
        return (0.0, Vec::new());
    };
    let Some((gold_texts, _)) = syllable_texts(script, &gold) else {
        return (0.0, Vec::new());
    };
    let Some((got_texts, got_ranges)) = syllable_texts(script, &best.syllables) else {
        return (0.0, Vec::new());
    };
    let matched = lcs_matches(&gold_texts, &got_texts);
    let hits = matched.iter().filter(|m| **m).count();
    let share = hits as f64 / gold_texts.len().max(got_texts.len()).max(1) as f64;

    let bad: Vec<&std::ops::Range<usize>> =
        got_ranges.iter().zip(&matched).filter(|(_, m)| !**m).map(|(r, _)| r).collect();
    let overlaps = |a: &std::ops::Range<usize>, b: &std::ops::Range<usize>| {
        if a.is_empty() {
            b.start <= a.start && a.start <= b.end
        } else {
            a.start < b.end && b.start < a.end
        }
    };
    let mut rules = Vec::new();
    for step in &best.rule_trace {
        let hit = best.alignment.spans.iter().any(|span| {
            overlaps(&step.source, &span.source) && bad.iter().any(|r| overlaps(&span.target, r))
        });
        if hit && !rules.contains(&step.rule_id) {
            rules.push(step.rule_id.clone());
        }
    }
    (share, rules)
}

fn evaluate_entry(entry: &CorpusEntry, rules: &RuleSet, k: usize) -> Outcome {
    let script = ScriptModel::standard();
    let failure = |candidates: Vec<String>, divergent_rules, error| Failure {
        source: entry.source.clone(),
        target: entry.target.clone(),
        lang: entry.lang,
        candidates,
        divergent_rules,
        error,
    };
    match candidates_for(entry, rules, k) {
        Err(e) => Outcome {
            rank: None,
            syllables: 0.0,
            failure: Some(failure(Vec::new(), Vec::new(), Some(e))),
        },
        Ok(cands) => {
            let rank = cands.iter().position(|c| c.target == entry.target);
            let (syllables, divergent) = match cands.first() {
                Some(_) if rank == Some(0) => (1.0, Vec::new()),
                Some(best) => compare(script, &entry.target, best),
                None => (0.0, Vec::new()),
            };
            let failure = (rank != Some(0))
                .then(|| failure(cands.iter().map(|c| c.target.clone()).collect(), divergent, None));
            Outcome {
                rank,
                syllables,
                failure,
            }
        }
    }
}

fn assemble(k: usize, corpus: &[CorpusEntry], outcomes: Vec<Outcome>) -> Report {
    let mut report = Report {
        k,
        overall: Metrics::default(),
        english: Metrics::default(),
        pinyin: Metrics::default(),
        excluded: corpus.iter().filter(|e| e.excluded()).count(),
        failures: Vec::new(),
    };
    let mut rows: Vec<(&CorpusEntry, Outcome)> = corpus.iter().filter(|e| !e.excluded()).zip(outcomes).collect();
    rows.sort_by(|(a, _), (b, _)| (a.lang, &a.source, &a.target, a.line).cmp(&(b.lang, &b.source, &b.target, b.line)));
    for (entry, o) in rows {
        report.overall.add(&o);
        match entry.lang {
            Lang::En => report.english.add(&o),
            Lang::Zh => report.pinyin.add(&o),
        }
        report.failures.extend(o.failure);
    }
    report
}

/// Scores every non-excluded entry with the top `k` candidates.
pub fn evaluate(corpus: &[CorpusEntry], rules: &RuleSet, k: usize) -> Report {
    let outcomes = corpus
        .iter()
        .filter(|e| !e.excluded())
        .map(|e| evaluate_entry(e, rules, k))
        .collect();
    assemble(k, corpus, outcomes)
}

/// Same as [`evaluate`], spreading entries over the rayon pool.
pub fn evaluate_parallel(corpus: &[CorpusEntry], rules: &RuleSet, k: usize) -> Report {
    let active: Vec<&CorpusEntry> = corpus.iter().filter(|e| !e.excluded()).collect();
    let outcomes = active.par_iter().map(|e| evaluate_entry(e, rules, k)).collect();
    assemble(k, corpus, outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus_is_not_applicable() {
        let corpus = parse_corpus("").unwrap();
        assert!(corpus.is_empty());
        let r = evaluate(&corpus, RuleSet::standard(), 3);
        assert_eq!((r.top1(), r.topk(), r.syllable_accuracy()), (None, None, None));
        assert!(r.to_string().contains("N/A"));
        assert!(r.to_tsv().lines().nth(1).unwrap().ends_with("N/A\tN/A\tN/A"));
    }

    #[test]
    fn parses_lines() {
        let c = parse_corpus("# comment\nHOTEL\tဟိုတယ်\tM\ten\t-\n").unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].source.as_str(), c[0].origin, c[0].lang, c[0].line), ("HOTEL", Origin::M, Lang::En, 2));
        let c = parse_corpus("X\tဟိုတယ်\tW\tzh\tverify,lexicon").unwrap();
        assert!(c[0].excluded() && c[0].flags.contains(&EntryFlag::Lexicon));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(parse_corpus("HOTEL\tဟိုတယ်\tM"), Err(CorpusError::Parse { line: 1, .. })));
        assert!(matches!(parse_corpus("HOTEL\tဟိုတယ်\tQ\ten"), Err(CorpusError::Parse { .. })));
        assert!(matches!(parse_corpus("HOTEL\tဟိုတယ်\tM\tfr"), Err(CorpusError::Parse { .. })));
        assert!(matches!(parse_corpus("HOTEL\tဟိုတယ်\tM\ten\tmaybe"), Err(CorpusError::Parse { .. })));
        assert!(matches!(
            parse_corpus("\nHOTEL\t\u{103A}ဟ\tM\ten\t-"),
            Err(CorpusError::InvalidTarget { line: 2, .. })
        ));
        assert!(parse_corpus("HOTEL\t\u{103A}ဟ\tM\ten\tverify").is_ok());
    }

    #[test]
    fn lexicon_word_is_top1() {
        let c = parse_corpus("JANUARY\tဇန်နဝါရီ\tM\ten\tlexicon").unwrap();
        let r = evaluate(&c, RuleSet::standard(), 3);
        assert_eq!(r.top1(), Some(1.0));
        assert!(r.failures.is_empty());
    }

    #[test]
    fn lcs() {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(lcs_matches(&s(&["a", "b", "c"]), &s(&["a", "x", "c"])), [true, false, true]);
        assert_eq!(lcs_matches(&s(&["a"]), &s(&[])), Vec::<bool>::new());
    }

    #[test]
    fn shipped_corpus_loads() {
        let c = parse_corpus(STANDARD_CORPUS).unwrap();
        assert!(c.len() > 60);
        assert!(c.iter().any(|e| e.lang == Lang::Zh));
    }
}
