//! Pinyin syllable parsing and table-driven mapping to Burmese.
//!
//! The valid-syllable table and the initial, final and tone tables live in the rule
//! pack (`@syllables` lines and the `@initial`, `@final`, `@tone` positions).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::engine::{rank_order, Candidate, TraceStep};
use crate::rules::{Predicate, RewriteRule, RuleSet};
use crate::script::{
    AlignedSpan, Alignment, BurmeseSyllable, Ending, Letter, Medials, Nucleus, Piece, PieceText, Rhyme, ScriptModel,
    Tone,
};

/// Rule id recorded for the word-mode nasal drop.
pub const NASAL_DROP_STEP: &str = "pinyin:nasal-drop";

const INITIALS: [&str; 21] = [
    "zh", "ch", "sh", "b", "p", "m", "f", "d", "t", "n", "l", "g", "k", "h", "j", "q", "x", "r", "z", "c", "s",
];
const MAX_SYLLABLE: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PinyinError {
    #[error("invalid Pinyin at byte {0}")]
    InvalidPinyin(usize),
    #[error("no {position} rule for `{key}`")]
    NoMapping { position: &'static str, key: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Medial {
    None,
    /// i-
    J,
    /// u-
    W,
    /// ü-
    Yu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Nasal {
    None,
    N,
    Ng,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PinyinMode {
    PerSyllable,
    Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PinyinSyllable {
    /// lowercase letters as written, tone marks removed
    pub spelling: String,
    /// one of the 21 initials, or empty
    pub initial: String,
    /// `y` or `w` written in place of the empty initial
    pub glide: Option<char>,
    pub medial: Medial,
    /// vowel core, `ü` written out
    pub rime: String,
    pub nasal: Nasal,
    /// 0 when unmarked
    pub tone: u8,
    /// standard final with `v` for ü (`iang`, `un`, `van`)
    pub final_key: String,
}

impl PinyinSyllable {
    /// Builds a syllable from a table spelling (`v` or `ü` for ü).
    pub fn from_spelling(spelling: &str, tone: u8) -> Option<PinyinSyllable> {
        if tone > 4 || spelling.is_empty() {
            return None;
        }
        let lower = spelling.to_lowercase();
        let key: String = lower.chars().map(|c| if c == 'ü' { 'v' } else { c }).collect();
        let (initial, glide, rest) = split_initial(&key);
        let final_key = canonical_final(initial, glide, rest)?;
        let (medial, rime, nasal) = decompose_final(&final_key)?;
        Some(PinyinSyllable {
            spelling: lower,
            initial: initial.to_string(),
            glide,
            medial,
            rime,
            nasal,
            tone,
            final_key,
        })
    }

    /// Key of the initial rule: the initial, the glide letter, or `0`.
    pub fn initial_key(&self) -> String {
        match (self.initial.as_str(), self.glide) {
            ("", Some(g)) => g.to_string(),
            ("", None) => "0".to_string(),
            (i, _) => i.to_string(),
        }
    }

    fn initial_len(&self) -> usize {
        if self.glide.is_some() {
            1
        } else {
            self.initial.len()
        }
    }
}

impl fmt::Display for PinyinSyllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spelling)?;
        if self.tone > 0 {
            write!(f, "{}", self.tone)?;
        }
        Ok(())
    }
}

fn split_initial(key: &str) -> (&str, Option<char>, &str) {
    if let Some(i) = INITIALS.iter().find(|i| key.starts_with(**i)) {
        return (i, None, &key[i.len()..]);
    }
    match key.chars().next() {
        Some(g @ ('y' | 'w')) => ("", Some(g), &key[1..]),
        _ => ("", None, key),
    }
}

fn canonical_final(initial: &str, glide: Option<char>, rest: &str) -> Option<String> {
    let f = match glide {
        Some('y') => match rest {
            "i" | "in" | "ing" => rest.to_string(),
            "u" | "ue" | "uan" | "un" => format!("v{}", &rest[1..]),
            "ong" => "iong".to_string(),
            "ou" => "iu".to_string(),
            "" => return None,
            _ => format!("i{rest}"),
        },
        Some(_) => match rest {
            "u" => "u".to_string(),
            "ei" => "ui".to_string(),
            "en" => "un".to_string(),
            "eng" => "ueng".to_string(),
            "" => return None,
            _ => format!("u{rest}"),
        },
        None if matches!(initial, "j" | "q" | "x") && rest.starts_with('u') => format!("v{}", &rest[1..]),
        None => rest.to_string(),
    };
    (!f.is_empty()).then_some(f)
}

fn decompose_final(f: &str) -> Option<(Medial, String, Nasal)> {
    let special = match f {
        "iu" => Some((Medial::J, "ou", Nasal::None)),
        "ui" => Some((Medial::W, "ei", Nasal::None)),
        "un" => Some((Medial::W, "e", Nasal::N)),
        "vn" => Some((Medial::Yu, "e", Nasal::N)),
        "ueng" => Some((Medial::W, "e", Nasal::Ng)),
        "in" => Some((Medial::None, "i", Nasal::N)),
        "ing" => Some((Medial::None, "i", Nasal::Ng)),
        _ => None,
    };
    if let Some((m, r, n)) = special {
        return Some((m, r.to_string(), n));
    }
    let (body, nasal) = if let Some(b) = f.strip_suffix("ng") {
        (b, Nasal::Ng)
    } else if let Some(b) = f.strip_suffix('n') {
        (b, Nasal::N)
    } else {
        (f, Nasal::None)
    };
    let (medial, rime) = match body.split_at(1) {
        ("i", r) if !r.is_empty() => (Medial::J, r),
        ("u", r) if !r.is_empty() => (Medial::W, r),
        ("v", r) if !r.is_empty() => (Medial::Yu, r),
        _ => (Medial::None, body),
    };
    if rime.is_empty() {
        return None;
    }
    Some((medial, rime.replace('v', "ü"), nasal))
}

/// One letter of the input after tone marks are lifted off.
struct Letter_ {
    c: char,
    tone: Option<u8>,
    offset: usize,
}

fn tone_mark(c: char) -> Option<(char, u8)> {
    const MARKED: [(&str, char); 5] = [
        ("āáǎà", 'a'),
        ("ēéěè", 'e'),
        ("īíǐì", 'i'),
        ("ōóǒò", 'o'),
        ("ūúǔù", 'u'),
    ];
    for (set, base) in MARKED {
        if let Some(i) = set.chars().position(|m| m == c) {
            return Some((base, i as u8 + 1));
        }
    }
    "ǖǘǚǜ".chars().position(|m| m == c).map(|i| ('ü', i as u8 + 1))
}

fn combining_tone(c: char) -> Option<u8> {
    match c {
        '\u{0304}' => Some(1),
        '\u{0301}' => Some(2),
        '\u{030C}' => Some(3),
        '\u{0300}' => Some(4),
        _ => None,
    }
}

/// Parses Pinyin with the standard syllable table.
pub fn parse_pinyin(text: &str) -> Result<Vec<PinyinSyllable>, PinyinError> {
    parse_pinyin_with(text, RuleSet::standard())
}

/// Splits `text` into syllables of the pack's table, longest match first.
///
/// Apostrophes, whitespace and tone digits end a syllable; tone digits and tone
/// diacritics are both accepted, `v` stands for `ü`.
pub fn parse_pinyin_with(text: &str, rules: &RuleSet) -> Result<Vec<PinyinSyllable>, PinyinError> {
    let table: HashSet<&str> = rules.pinyin_syllables.iter().map(String::as_str).collect();
    let mut out = Vec::new();
    let mut segment: Vec<Letter_> = Vec::new();
    for (offset, c) in text.char_indices() {
        let lower: char = c.to_lowercase().next().unwrap_or(c);
        if c == '\'' || c == '’' || c.is_whitespace() {
            parse_segment(&segment, &table, &mut out)?;
            segment.clear();
        } else if let Some(d) = c.to_digit(10) {
            if d > 4 || segment.is_empty() {
                return Err(PinyinError::InvalidPinyin(offset));
            }
            let start = out.len();
            parse_segment(&segment, &table, &mut out)?;
            segment.clear();
            let last = out.len() - 1;
            if last < start || (out[last].tone != 0 && out[last].tone != d as u8) {
                return Err(PinyinError::InvalidPinyin(offset));
            }
            out[last].tone = d as u8;
        } else if let Some(t) = combining_tone(c) {
            match segment.last_mut() {
                Some(l) if l.tone.is_none() => l.tone = Some(t),
                _ => return Err(PinyinError::InvalidPinyin(offset)),
            }
        } else if c == '\u{0308}' {
            match segment.last_mut() {
                Some(l) if l.c == 'u' => l.c = 'ü',
                _ => return Err(PinyinError::InvalidPinyin(offset)),
            }
        } else if let Some((base, t)) = tone_mark(lower) {
            segment.push(Letter_ { c: base, tone: Some(t), offset });
        } else if lower.is_ascii_lowercase() || lower == 'ü' {
            segment.push(Letter_ { c: lower, tone: None, offset });
        } else {
            return Err(PinyinError::InvalidPinyin(offset));
        }
    }
    parse_segment(&segment, &table, &mut out)?;
    if out.is_empty() {
        return Err(PinyinError::InvalidPinyin(0));
    }
    Ok(out)
}

fn parse_segment(
    segment: &[Letter_],
    table: &HashSet<&str>,
    out: &mut Vec<PinyinSyllable>,
) -> Result<(), PinyinError> {
    if segment.is_empty() {
        return Ok(());
    }
    let keys: Vec<char> = segment.iter().map(|l| if l.c == 'ü' { 'v' } else { l.c }).collect();
    let mut memo = HashMap::new();
    let cuts = split(&keys, 0, table, &mut memo).ok_or_else(|| {
        let reached = furthest(&keys, table);
        PinyinError::InvalidPinyin(segment[reached.min(segment.len() - 1)].offset)
    })?;
    let mut start = 0;
    for end in cuts {
        let letters = &segment[start..end];
        let spelling: String = letters.iter().map(|l| l.c).collect();
        let marks: Vec<&Letter_> = letters.iter().filter(|l| l.tone.is_some()).collect();
        if marks.len() > 1 {
            return Err(PinyinError::InvalidPinyin(marks[1].offset));
        }
        let tone = marks.first().and_then(|l| l.tone).unwrap_or(0);
        let syl = PinyinSyllable::from_spelling(&spelling, tone)
            .ok_or(PinyinError::InvalidPinyin(letters[0].offset))?;
        out.push(syl);
        start = end;
    }
    Ok(())
}

/// Syllable end positions covering `keys[from..]`, longest syllable first.
fn split(
    keys: &[char],
    from: usize,
    table: &HashSet<&str>,
    memo: &mut HashMap<usize, Option<Vec<usize>>>,
) -> Option<Vec<usize>> {
    if from == keys.len() {
        return Some(Vec::new());
    }
    if let Some(done) = memo.get(&from) {
        return done.clone();
    }
    let mut found = None;
    for len in (1..=MAX_SYLLABLE.min(keys.len() - from)).rev() {
        let s: String = keys[from..from + len].iter().collect();
        if table.contains(s.as_str()) {
            if let Some(mut rest) = split(keys, from + len, table, memo) {
                rest.insert(0, from + len);
                found = Some(rest);
                break;
            }
        }
    }
    memo.insert(from, found.clone());
    found
}

/// Index of the first letter greedy matching cannot consume.
fn furthest(keys: &[char], table: &HashSet<&str>) -> usize {
    let mut at = 0;
    'outer: while at < keys.len() {
        for len in (1..=MAX_SYLLABLE.min(keys.len() - at)).rev() {
            let s: String = keys[at..at + len].iter().collect();
            if table.contains(s.as_str()) {
                at += len;
                continue 'outer;
            }
        }
        break;
    }
    at
}

/// One mapping of one syllable.
#[derive(Debug, Clone)]
struct Option_ {
    onset: Letter,
    rhyme: Rhyme,
    weight: f64,
    steps: Vec<TraceStep>,
}

fn matching_rules<'a>(
    rules: &'a RuleSet,
    position: crate::rules::Position,
    key: &str,
    syl: &PinyinSyllable,
) -> Vec<&'a RewriteRule> {
    let found: Vec<&RewriteRule> = rules
        .rules
        .iter()
        .filter(|r| r.position == position)
        .filter(|r| r.pattern_text == key || (key.is_empty() && r.pattern_text == "0"))
        .filter(|r| {
            r.context.iter().all(|p| match p {
                Predicate::Initial(list) => list.iter().any(|i| *i == syl.initial_key()),
                _ => false,
            })
        })
        .collect();
    let Some(best) = found.iter().map(|r| r.tier).min() else {
        return found;
    };
    found.into_iter().filter(|r| r.tier == best).collect()
}

fn step(rule: &RewriteRule, output: usize, source: Range<usize>) -> TraceStep {
    TraceStep {
        rule_id: rule.id.clone(),
        output,
        tone_variant: false,
        weight: rule.outputs[output].weight,
        source,
        fragment: rule.outputs[output].text.clone(),
    }
}

fn apply_tone(script: &ScriptModel, rhyme: Rhyme, tone: Tone) -> Rhyme {
    if rhyme.nucleus == Nucleus::A && rhyme.ending == Ending::Open && tone == Tone::Creaky {
        return Rhyme::schwa();
    }
    let toned = rhyme.with_tone(tone);
    if script.has_rhyme(&toned) {
        toned
    } else {
        rhyme
    }
}

/// The rhyme left when the written nasal ending is removed (ယုန် → ယု).
pub fn drop_nasal(script: &ScriptModel, onset: &Letter, rhyme: &Rhyme) -> Option<Rhyme> {
    if rhyme.ending != Ending::Nasal {
        return None;
    }
    let PieceText::Rhyme(text) = script.piece_text(&Piece::Rhyme(*rhyme), Some(onset)) else {
        return None;
    };
    let mut chars: Vec<char> = text.chars().collect();
    while matches!(chars.last(), Some('\u{1037}' | '\u{1038}')) {
        chars.pop();
    }
    if chars.last() == Some(&'\u{1036}') {
        chars.pop();
    } else if chars.len() >= 2
        && chars[chars.len() - 1] == '\u{103A}'
        && matches!(chars[chars.len() - 2], 'န' | 'မ' | 'င' | 'ဉ')
    {
        chars.truncate(chars.len() - 2);
    } else {
        return None;
    }
    let (r, used) = script.match_rhyme(&chars);
    (used == chars.len()).then_some(r)
}

fn syllable_options(
    rules: &RuleSet,
    script: &ScriptModel,
    syl: &PinyinSyllable,
    at: usize,
) -> Result<Vec<Option_>, PinyinError> {
    use crate::rules::Position;
    let init_src = at..at + syl.initial_len();
    let fin_src = init_src.end..at + syl.spelling.len();
    let ikey = syl.initial_key();
    let initials = matching_rules(rules, Position::Initial, if ikey == "0" { "" } else { &ikey }, syl);
    let finals = matching_rules(rules, Position::Final, &syl.final_key, syl);
    let tone_key = syl.tone.to_string();
    let tones = matching_rules(rules, Position::Tone, if syl.tone == 0 { "" } else { &tone_key }, syl);
    let missing = |position, key: &str| PinyinError::NoMapping {
        position,
        key: key.to_string(),
    };
    if initials.is_empty() {
        return Err(missing("initial", &ikey));
    }
    if finals.is_empty() {
        return Err(missing("final", &syl.final_key));
    }
    if tones.is_empty() {
        return Err(missing("tone", &tone_key));
    }
    let mut out = Vec::new();
    for ir in &initials {
        for (io, iout) in ir.outputs.iter().enumerate() {
            let Some(Piece::Onset(letters)) = iout.pieces.first() else { continue };
            let Some(&base) = letters.last() else { continue };
            for fr in &finals {
                for (fo, fout) in fr.outputs.iter().enumerate() {
                    let Some(Piece::Rhyme(rhyme)) = fout.pieces.first() else { continue };
                    let mut medials = base.medials.union(fout.medials);
                    if base.base == 'ယ' || (base.base == 'ရ' && base.medials.contains(Medials::HA)) {
                        medials = medials.without(Medials::YA);
                    }
                    if base.base == 'ဝ' {
                        medials = medials.without(Medials::WA);
                    }
                    let onset = Letter::with_medials(base.base, medials);
                    for tr in &tones {
                        for (to, tout) in tr.outputs.iter().enumerate() {
                            let Some(tone) = tout.tone else { continue };
                            out.push(Option_ {
                                onset,
                                rhyme: apply_tone(script, *rhyme, tone),
                                weight: iout.weight + fout.weight + tout.weight,
                                steps: vec![
                                    step(ir, io, init_src.clone()),
                                    step(fr, fo, fin_src.clone()),
                                    step(tr, to, fin_src.end..fin_src.end),
                                ],
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Maps parsed syllables to ranked Burmese candidates (at most `k`).
///
/// Word mode consults the lexicon first and also offers, for words of two or more
/// syllables, the first syllable with its nasal ending dropped.
pub fn pinyin_to_burmese(
    syllables: &[PinyinSyllable],
    mode: PinyinMode,
    rules: &RuleSet,
    k: usize,
) -> Result<Vec<Candidate>, PinyinError> {
    if syllables.is_empty() || k == 0 {
        return Ok(Vec::new());
    }
    let script = ScriptModel::standard();
    let source: String = syllables.iter().map(|s| s.spelling.as_str()).collect();
    let drop_weight = rules.param("pinyin_nasal_drop_weight", 0.0);
    let mut per_syllable = Vec::with_capacity(syllables.len());
    let mut at = 0;
    for (i, syl) in syllables.iter().enumerate() {
        let mut options = syllable_options(rules, script, syl, at)?;
        if i == 0 && mode == PinyinMode::Word && syllables.len() >= 2 {
            let dropped: Vec<Option_> = options
                .iter()
                .filter_map(|o| {
                    let rhyme = drop_nasal(script, &o.onset, &o.rhyme)?;
                    let mut steps = o.steps.clone();
                    steps.push(TraceStep {
                        rule_id: NASAL_DROP_STEP.to_string(),
                        output: 0,
                        tone_variant: false,
                        weight: drop_weight,
                        source: at + syl.spelling.len()..at + syl.spelling.len(),
                        fragment: String::new(),
                    });
                    Some(Option_ {
                        rhyme,
                        weight: o.weight + drop_weight,
                        steps,
                        ..o.clone()
                    })
                })
                .collect();
            options.extend(dropped);
        }
        options.sort_by(|a, b| a.weight.total_cmp(&b.weight));
        per_syllable.push(options);
        at += syl.spelling.len();
    }

    // k-best over the product; ties at the cut are kept so target order stays exact
    let keep = k.saturating_mul(8).max(16);
    let mut partial: Vec<(f64, Vec<usize>)> = vec![(0.0, Vec::new())];
    for options in &per_syllable {
        let mut next = Vec::with_capacity(partial.len() * options.len());
        for (w, picks) in &partial {
            for (j, o) in options.iter().enumerate() {
                let mut p = picks.clone();
                p.push(j);
                next.push((w + o.weight, p));
            }
        }
        next.sort_by(|a, b| a.0.total_cmp(&b.0));
        if next.len() > keep {
            let cut = next[keep - 1].0;
            next.retain(|(w, _)| *w <= cut);
        }
        partial = next;
    }

    let mut best: HashMap<String, Candidate> = HashMap::new();
    for (score, picks) in partial {
        let chosen: Vec<&Option_> = picks.iter().enumerate().map(|(i, &j)| &per_syllable[i][j]).collect();
        let burmese: Vec<BurmeseSyllable> =
            chosen.iter().map(|o| BurmeseSyllable::new(o.onset, o.rhyme)).collect();
        let Ok((target, spans)) = script.compose_spans(&burmese) else { continue };
        if best.get(&target).is_some_and(|c| c.score <= score) {
            continue;
        }
        let mut aligned = Vec::new();
        let mut src = 0;
        for ((syl, o), sp) in syllables.iter().zip(&chosen).zip(&spans) {
            let split = src + syl.initial_len();
            let end = src + syl.spelling.len();
            aligned.push(AlignedSpan {
                source: src..split,
                target: sp.onset.clone(),
                pieces: vec![script.piece_text(&Piece::Onset(vec![o.onset]), None)],
            });
            aligned.push(AlignedSpan {
                source: split..end,
                target: sp.rhyme.clone(),
                pieces: vec![script.piece_text(&Piece::Rhyme(o.rhyme), Some(&o.onset))],
            });
            src = end;
        }
        let candidate = Candidate {
            target: target.clone(),
            syllables: burmese,
            score,
            alignment: Alignment {
                source: source.clone(),
                target: target.clone(),
                spans: aligned,
            },
            rule_trace: chosen.iter().flat_map(|o| o.steps.iter().cloned()).collect(),
            from_lexicon: false,
        };
        best.insert(target, candidate);
    }
    let mut ranked: Vec<Candidate> = best.into_values().collect();
    ranked.sort_by(rank_order);
    let mut out = Vec::with_capacity(k);
    if mode == PinyinMode::Word {
        if let Some(entry) = rules.lexicon.get(&source.to_uppercase()) {
            out.push(Candidate::lexicon(&source, &entry.target));
        }
    }
    for c in ranked {
        if out.len() >= k {
            break;
        }
        if !out.iter().any(|o| o.target == c.target) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Parses and maps in one call with the standard pack, word mode.
pub fn transliterate_pinyin(text: &str, k: usize) -> Result<Vec<Candidate>, PinyinError> {
    let rules = RuleSet::standard();
    let syllables = parse_pinyin_with(text, rules)?;
    pinyin_to_burmese(&syllables, PinyinMode::Word, rules, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spellings(text: &str) -> Vec<String> {
        parse_pinyin(text).unwrap().iter().map(|s| s.spelling.clone()).collect()
    }

    fn targets(text: &str, mode: PinyinMode, k: usize) -> Vec<String> {
        let rules = RuleSet::standard();
        let syl = parse_pinyin_with(text, rules).unwrap();
        pinyin_to_burmese(&syl, mode, rules, k).unwrap().into_iter().map(|c| c.target).collect()
    }

    #[test]
    fn splits() {
        assert_eq!(spellings("kunming"), ["kun", "ming"]);
        assert_eq!(spellings("yunnan"), ["yun", "nan"]);
        assert_eq!(spellings("xi'an"), ["xi", "an"]);
        assert_eq!(spellings("xian"), ["xian"]);
        assert_eq!(spellings("Beijing"), ["bei", "jing"]);
        assert_eq!(spellings("jinan"), ["jin", "an"]);
    }

    #[test]
    fn tones_from_digits_and_marks() {
        let s = parse_pinyin("Kūnmíng").unwrap();
        assert_eq!((s[0].tone, s[1].tone), (1, 2));
        let s = parse_pinyin("kun1ming2").unwrap();
        assert_eq!((s[0].tone, s[1].tone), (1, 2));
        let s = parse_pinyin("lu\u{0308}4").unwrap();
        assert_eq!((s[0].final_key.as_str(), s[0].tone), ("v", 4));
        assert_eq!(parse_pinyin("lv3").unwrap()[0].rime, "ü");
    }

    #[test]
    fn bad_input() {
        assert_eq!(parse_pinyin("kunmingq"), Err(PinyinError::InvalidPinyin(7)));
        assert_eq!(parse_pinyin("5"), Err(PinyinError::InvalidPinyin(0)));
        assert_eq!(parse_pinyin("ma5"), Err(PinyinError::InvalidPinyin(2)));
        assert_eq!(parse_pinyin("mǎá").unwrap().len(), 2);
        assert!(parse_pinyin("").is_err());
        assert!(parse_pinyin("ma-ma").is_err());
    }

    #[test]
    fn syllable_structure() {
        let s = PinyinSyllable::from_spelling("yun", 0).unwrap();
        assert_eq!((s.medial, s.rime.as_str(), s.nasal, s.final_key.as_str()), (Medial::Yu, "e", Nasal::N, "vn"));
        let s = PinyinSyllable::from_spelling("zhuang", 0).unwrap();
        assert_eq!((s.initial.as_str(), s.medial, s.rime.as_str(), s.nasal), ("zh", Medial::W, "a", Nasal::Ng));
        let s = PinyinSyllable::from_spelling("xiu", 0).unwrap();
        assert_eq!((s.medial, s.rime.as_str()), (Medial::J, "ou"));
        let s = PinyinSyllable::from_spelling("wu", 0).unwrap();
        assert_eq!((s.initial.as_str(), s.glide, s.final_key.as_str()), ("", Some('w'), "u"));
    }

    #[test]
    fn attested_words() {
        assert!(targets("yunnan", PinyinMode::Word, 3).contains(&"ယုနန်".to_string()));
        assert!(targets("kunming", PinyinMode::Word, 3).contains(&"ကုမင်း".to_string()));
        assert_eq!(targets("wu", PinyinMode::Word, 1), ["ဝူ"]);
    }

    #[test]
    fn nasal_drop_only_in_word_mode() {
        let per = targets("yunnan", PinyinMode::PerSyllable, 10);
        assert!(!per.contains(&"ယုနန်".to_string()));
        assert!(per.contains(&"ယုန်နန်".to_string()));
        assert!(!targets("yun", PinyinMode::Word, 10).contains(&"ယု".to_string()));
    }

    #[test]
    fn tone_table() {
        assert_eq!(targets("ma1", PinyinMode::Word, 5), ["မား"]);
        assert_eq!(targets("ma2", PinyinMode::Word, 5), ["မာ", "မား"]);
        assert_eq!(targets("ma3", PinyinMode::Word, 5), ["မာ"]);
        assert_eq!(targets("ma4", PinyinMode::Word, 5), ["မ"]);
        assert_eq!(targets("li4", PinyinMode::Word, 5), ["လိ"]);
    }

    #[test]
    fn medial_contraction() {
        assert_eq!(targets("jia3", PinyinMode::Word, 1), ["ကျာ"]);
        assert_eq!(targets("xia3", PinyinMode::Word, 1), ["ရှာ"]);
        assert_eq!(targets("ya3", PinyinMode::Word, 1), ["ယာ"]);
        assert_eq!(targets("wa3", PinyinMode::Word, 1), ["ဝါ"]);
        assert_eq!(targets("hua3", PinyinMode::Word, 1), ["ဟွာ"]);
    }

    #[test]
    fn every_table_syllable_maps() {
        let rules = RuleSet::standard();
        assert!(rules.pinyin_syllables.len() >= 400);
        for s in &rules.pinyin_syllables {
            for tone in 0..=4 {
                let syl = PinyinSyllable::from_spelling(s, tone).unwrap_or_else(|| panic!("{s}"));
                let c = pinyin_to_burmese(&[syl], PinyinMode::Word, rules, 4).unwrap();
                assert!(!c.is_empty(), "{s}{tone}");
            }
        }
    }
}
