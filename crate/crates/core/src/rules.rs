//! Rule packs: tiered contextual rewrite rules, lexicon entries and analyzer tables.
//!
//! A pack is UTF-8 text, one record per line, fields separated by TAB:
//!
//! ```text
//! tier <TAB> pattern@position <TAB> context <TAB> outputs <TAB> weights
//! ```
//!
//! Lines starting with `@` configure the analyzer (`@graphemes`, `@onsets`, `@class`,
//! `@param`, `@syllables`); `#` starts a comment. The file format is documented in
//! `data/README.md`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::latin::{ChunkFlag, Inventory};
use crate::script::{Medials, Piece, ScriptError, ScriptModel, Tone};

/// The shipped rule pack (English and Pinyin tables).
pub const STANDARD_PACK: &str = include_str!("../data/standard.pack");
/// The shipped lexicon of fixed spellings.
pub const STANDARD_LEXICON: &str = include_str!("../data/lexicon.tsv");

#[derive(Debug, Error)]
pub enum PackError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate rule {id}")]
    DuplicateRule { line: usize, id: String },
    #[error("line {line}: {source}")]
    InvalidFragment { line: usize, source: ScriptError },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tier {
    Lexicon,
    GraphemeOverride,
    Cluster,
    Default,
}

impl Tier {
    pub const ALL: [Tier; 4] = [Tier::Lexicon, Tier::GraphemeOverride, Tier::Cluster, Tier::Default];

    pub fn name(self) -> &'static str {
        match self {
            Tier::Lexicon => "lexicon",
            Tier::GraphemeOverride => "grapheme_override",
            Tier::Cluster => "cluster",
            Tier::Default => "default",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Position {
    /// whole source word (lexicon)
    Word,
    Onset,
    /// starts at a chunk's nucleus and may run into its coda
    Nucleus,
    Coda,
    /// anywhere, across chunk boundaries
    Any,
    /// Pinyin initial
    Initial,
    /// Pinyin final (medial + rime + nasal)
    Final,
    /// Pinyin tone number
    Tone,
}

impl Position {
    pub fn name(self) -> &'static str {
        match self {
            Position::Word => "word",
            Position::Onset => "onset",
            Position::Nucleus => "nucleus",
            Position::Coda => "coda",
            Position::Any => "any",
            Position::Initial => "initial",
            Position::Final => "final",
            Position::Tone => "tone",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        [
            Position::Word,
            Position::Onset,
            Position::Nucleus,
            Position::Coda,
            Position::Any,
            Position::Initial,
            Position::Final,
            Position::Tone,
        ]
        .into_iter()
        .find(|p| p.name() == s)
    }

    pub fn is_pinyin(self) -> bool {
        matches!(self, Position::Initial | Position::Final | Position::Tone)
    }
}

/// One element of a pattern or context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Grapheme(String),
    /// `[NAME]`: built-in `V` (nucleus), `C` (consonant), `K` (coda consonant),
    /// `E0` (silent final E), or a pack class; `[A&B]` matches both
    Class(String),
    /// `#`: word edge
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    Flag { flag: ChunkFlag, negated: bool },
    /// `_X Y`: items that must follow the match
    Right(Vec<Item>),
    /// `X Y_`: items that must precede the match
    Left(Vec<Item>),
    /// `!_X`: the items must not follow
    NotRight(Vec<Item>),
    /// `!X_`: the items must not precede
    NotLeft(Vec<Item>),
    /// `initial=z,c,s` (Pinyin only)
    Initial(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleOutput {
    pub text: String,
    pub weight: f64,
    pub pieces: Vec<Piece>,
    /// medial signs a Pinyin final adds to its onset
    pub medials: Medials,
    /// tone selected by a Pinyin tone rule
    pub tone: Option<Tone>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewriteRule {
    /// `tier:pattern:context`
    pub id: String,
    pub tier: Tier,
    pub pattern_text: String,
    pub pattern: Vec<Item>,
    pub position: Position,
    pub context_text: String,
    pub context: Vec<Predicate>,
    pub outputs: Vec<RuleOutput>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub source: String,
    pub target: String,
    pub note: String,
}

#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    pub rules: Vec<RewriteRule>,
    /// keyed by uppercased source
    pub lexicon: BTreeMap<String, LexiconEntry>,
    pub inventory: Inventory,
    pub classes: HashMap<String, HashSet<String>>,
    pub params: BTreeMap<String, f64>,
    pub pinyin_syllables: Vec<String>,
}

fn parse_err(line: usize, message: impl Into<String>) -> PackError {
    PackError::Parse {
        line,
        message: message.into(),
    }
}

impl RuleSet {
    /// Rules plus lexicon, both from the shipped data files.
    pub fn standard() -> &'static RuleSet {
        static SET: std::sync::OnceLock<RuleSet> = std::sync::OnceLock::new();
        SET.get_or_init(|| {
            let mut set = RuleSet::parse(STANDARD_PACK).expect("shipped rule pack");
            set.add_lexicon_tsv(STANDARD_LEXICON).expect("shipped lexicon");
            set
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PackError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| PackError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn param(&self, name: &str, default: f64) -> f64 {
        self.params.get(name).copied().unwrap_or(default)
    }

    pub fn rule(&self, id: &str) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| r.id == id)
    }

    /// A copy with the named rules removed.
    pub fn without_rules(&self, ids: &[&str]) -> RuleSet {
        let mut copy = self.clone();
        copy.rules.retain(|r| !ids.contains(&r.id.as_str()));
        copy
    }

    pub fn without_lexicon(&self) -> RuleSet {
        let mut copy = self.clone();
        copy.lexicon.clear();
        copy
    }

    pub fn in_class(&self, class: &str, grapheme: &str) -> bool {
        self.classes.get(class).is_some_and(|set| set.contains(grapheme))
    }

    pub fn parse(text: &str) -> Result<Self, PackError> {
        Self::parse_with(text, ScriptModel::standard())
    }

    pub fn parse_with(text: &str, script: &ScriptModel) -> Result<Self, PackError> {
        let mut set = RuleSet::default();
        let mut multigraphs = Vec::new();
        let mut onsets = Vec::new();
        let lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(n, l)| (n + 1, l.split('\t').collect()))
            .collect();

        // analyzer tables first; rule patterns are tokenized with the inventory
        for (line, fields) in &lines {
            let line = *line;
            let Some(directive) = fields[0].strip_prefix('@') else {
                continue;
            };
            let arg = |i: usize| {
                fields
                    .get(i)
                    .copied()
                    .ok_or_else(|| parse_err(line, format!("@{directive} needs field {}", i + 1)))
            };
            let words = |s: &str| s.split_whitespace().map(str::to_string).collect::<Vec<_>>();
            match directive {
                "graphemes" => multigraphs.extend(words(arg(1)?)),
                "onsets" => onsets.extend(words(arg(1)?)),
                "class" => {
                    set.classes
                        .entry(arg(1)?.to_string())
                        .or_default()
                        .extend(words(arg(2)?));
                }
                "param" => {
                    let value = arg(2)?
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| parse_err(line, "parameter value must be a number"))?;
                    set.params.insert(arg(1)?.to_string(), value);
                }
                "syllables" => set.pinyin_syllables.extend(words(arg(1)?)),
                other => return Err(parse_err(line, format!("unknown directive @{other}"))),
            }
        }
        set.inventory = Inventory::new(multigraphs, onsets);

        let mut seen = HashSet::new();
        for (line, fields) in &lines {
            let line = *line;
            if fields[0].starts_with('@') {
                continue;
            }
            if fields.len() != 5 {
                return Err(parse_err(line, format!("expected 5 tab-separated fields, got {}", fields.len())));
            }
            let tier = Tier::from_name(fields[0].trim())
                .ok_or_else(|| parse_err(line, format!("unknown tier `{}`", fields[0])))?;
            let rule = set.parse_rule(line, tier, fields, script)?;
            if tier == Tier::Lexicon {
                let target = rule.outputs[0].text.clone();
                let source = rule.pattern_text.clone();
                set.lexicon.insert(
                    source.to_uppercase(),
                    LexiconEntry {
                        source,
                        target,
                        note: String::new(),
                    },
                );
                continue;
            }
            if !seen.insert(rule.id.clone()) {
                return Err(PackError::DuplicateRule { line, id: rule.id });
            }
            set.rules.push(rule);
        }
        Ok(set)
    }

    /// Adds `source TAB target [TAB note]` lines to the lexicon.
    pub fn add_lexicon_tsv(&mut self, text: &str) -> Result<(), PackError> {
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            if fields.len() < 2 || fields[0].trim().is_empty() || fields[1].trim().is_empty() {
                return Err(parse_err(line, "lexicon line needs source and target"));
            }
            let entry = LexiconEntry {
                source: fields[0].trim().to_string(),
                target: fields[1].trim().to_string(),
                note: fields.get(2).map(|s| s.trim().to_string()).unwrap_or_default(),
            };
            let key = entry.source.to_uppercase();
            if self.lexicon.insert(key, entry).is_some() {
                return Err(PackError::DuplicateRule {
                    line,
                    id: format!("lexicon:{}@word:*", fields[0].trim()),
                });
            }
        }
        Ok(())
    }

    pub fn load_lexicon(&mut self, path: impl AsRef<Path>) -> Result<(), PackError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| PackError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.add_lexicon_tsv(&text)
    }

    fn parse_items(&self, line: usize, text: &str, literal: bool) -> Result<Vec<Item>, PackError> {
        let mut items = Vec::new();
        let mut run = String::new();
        let flush = |run: &mut String, items: &mut Vec<Item>| -> Result<(), PackError> {
            if run.is_empty() {
                return Ok(());
            }
            if literal {
                items.push(Item::Grapheme(run.clone()));
            } else {
                let gs = self
                    .inventory
                    .tokenize(run)
                    .map_err(|e| parse_err(line, format!("pattern `{run}`: {e}")))?;
                items.extend(gs.into_iter().map(|g| Item::Grapheme(g.text)));
            }
            run.clear();
            Ok(())
        };
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '[' => {
                    flush(&mut run, &mut items)?;
                    let name: String = chars.by_ref().take_while(|&c| c != ']').collect();
                    for part in name.split('&') {
                        let builtin = matches!(part, "V" | "C" | "K" | "E0");
                        if !builtin && !self.classes.contains_key(part) {
                            return Err(parse_err(line, format!("unknown class [{part}]")));
                        }
                    }
                    items.push(Item::Class(name));
                }
                '#' => {
                    flush(&mut run, &mut items)?;
                    items.push(Item::Boundary);
                }
                '.' | ' ' => flush(&mut run, &mut items)?,
                c if c.is_ascii_alphanumeric() || c == '\'' => run.push(c),
                other => return Err(parse_err(line, format!("unexpected {other:?} in pattern"))),
            }
        }
        flush(&mut run, &mut items)?;
        Ok(items)
    }

    fn parse_rule(
        &self,
        line: usize,
        tier: Tier,
        fields: &[&str],
        script: &ScriptModel,
    ) -> Result<RewriteRule, PackError> {
        let pattern_field = fields[1].trim();
        let (pattern_text, position) = pattern_field
            .rsplit_once('@')
            .ok_or_else(|| parse_err(line, "pattern needs `@position`"))?;
        let position = Position::from_name(position)
            .ok_or_else(|| parse_err(line, format!("unknown position `{position}`")))?;
        if (tier == Tier::Lexicon) != (position == Position::Word) {
            return Err(parse_err(line, "lexicon rules use @word and only they may"));
        }
        let literal = matches!(position, Position::Word) || position.is_pinyin();
        let pattern = if pattern_text == "0" {
            Vec::new()
        } else {
            self.parse_items(line, pattern_text, literal)?
        };
        if pattern.iter().any(|i| matches!(i, Item::Boundary)) {
            return Err(parse_err(line, "`#` is only allowed in contexts"));
        }

        let context_text = fields[2].trim().to_string();
        let mut context = Vec::new();
        if context_text != "*" {
            for token in context_text.split_whitespace() {
                let pred = if let Some(rest) = token.strip_prefix("!_") {
                    Predicate::NotRight(self.parse_items(line, rest, false)?)
                } else if let Some(rest) = token.strip_prefix('!').and_then(|t| t.strip_suffix('_')) {
                    Predicate::NotLeft(self.parse_items(line, rest, false)?)
                } else if let Some(rest) = token.strip_prefix('_') {
                    Predicate::Right(self.parse_items(line, rest, false)?)
                } else if let Some(rest) = token.strip_suffix('_') {
                    Predicate::Left(self.parse_items(line, rest, false)?)
                } else if let Some(list) = token.strip_prefix("initial=") {
                    Predicate::Initial(list.split(',').map(str::to_string).collect())
                } else {
                    let (negated, name) = match token.strip_prefix('!') {
                        Some(n) => (true, n),
                        None => (false, token),
                    };
                    let flag = ChunkFlag::from_name(name)
                        .ok_or_else(|| parse_err(line, format!("unknown context `{token}`")))?;
                    Predicate::Flag { flag, negated }
                };
                context.push(pred);
            }
        }

        let texts: Vec<&str> = fields[3].split('|').map(str::trim).collect();
        let weights: Vec<f64> = fields[4]
            .split('|')
            .map(|w| w.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| parse_err(line, "weights must be numbers"))?;
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(parse_err(line, "weights must be non-negative"));
        }
        if weights.len() != 1 && weights.len() != texts.len() {
            return Err(parse_err(line, "give one weight or one per output"));
        }
        if texts.iter().any(|t| t.is_empty()) {
            return Err(parse_err(line, "empty output (use ∅ for deletion)"));
        }
        let mut outputs = Vec::with_capacity(texts.len());
        for (i, text) in texts.iter().enumerate() {
            let weight = if weights.len() == 1 { weights[0] } else { weights[i] };
            let mut out = RuleOutput {
                text: text.to_string(),
                weight,
                pieces: Vec::new(),
                medials: Medials::empty(),
                tone: None,
            };
            match position {
                Position::Word => {}
                Position::Tone => {
                    out.tone = Some(
                        Tone::from_key(text)
                            .ok_or_else(|| parse_err(line, format!("unknown tone `{text}`")))?,
                    );
                }
                Position::Final | Position::Nucleus | Position::Any => {
                    let (medials, rest) = script.split_medials(text);
                    out.medials = medials;
                    out.pieces = script
                        .parse_fragment(rest)
                        .map_err(|source| PackError::InvalidFragment { line, source })?;
                }
                _ => {
                    out.pieces = script
                        .parse_fragment(text)
                        .map_err(|source| PackError::InvalidFragment { line, source })?;
                }
            }
            outputs.push(out);
        }

        let id = format!("{}:{}:{}", tier.name(), pattern_field, context_text);
        Ok(RewriteRule {
            id,
            tier,
            pattern_text: pattern_text.to_string(),
            pattern,
            position,
            context_text,
            context,
            outputs,
            line,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::Letter;

    #[test]
    fn empty_pack() {
        let set = RuleSet::parse("").unwrap();
        assert!(set.rules.is_empty());
        assert!(set.lexicon.is_empty());
    }

    #[test]
    fn th_override() {
        let set = RuleSet::parse("grapheme_override\tTH@onset\t*\tသ-\t0\n@graphemes\tTH\n").unwrap();
        let r = &set.rules[0];
        assert_eq!(r.id, "grapheme_override:TH@onset:*");
        assert_eq!(r.pattern, vec![Item::Grapheme("TH".into())]);
        assert_eq!(r.outputs[0].pieces, vec![Piece::Onset(vec![Letter::new('သ')])]);
        assert_eq!(r.outputs[0].weight, 0.0);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            RuleSet::parse("default\tA@nucleus\t*\t+ေန်\t0"),
            Err(PackError::InvalidFragment { line: 1, .. })
        ));
        assert!(matches!(
            RuleSet::parse("default\tA@nucleus\t*\t+ာ\t0\ndefault\tA@nucleus\t*\t+ား\t1"),
            Err(PackError::DuplicateRule { line: 2, .. })
        ));
        assert!(matches!(RuleSet::parse("default\tA@nucleus\t*"), Err(PackError::Parse { line: 1, .. })));
        assert!(matches!(RuleSet::parse("sometimes\tA@nucleus\t*\t+ာ\t0"), Err(PackError::Parse { .. })));
        assert!(matches!(RuleSet::parse("default\tA@nucleus\tloud\t+ာ\t0"), Err(PackError::Parse { .. })));
        assert!(matches!(RuleSet::parse("default\tA@nucleus\t*\t+ာ|+ား\t0|1|2"), Err(PackError::Parse { .. })));
    }

    #[test]
    fn contexts_and_classes() {
        let pack = "@class\tN\tM N NG\n@graphemes\tNG\ndefault\tA@nucleus\t_[N] !doubled\t+န်\t0\n";
        let set = RuleSet::parse(pack).unwrap();
        assert_eq!(
            set.rules[0].context,
            vec![
                Predicate::Right(vec![Item::Class("N".into())]),
                Predicate::Flag {
                    flag: ChunkFlag::DoubledConsonantFollows,
                    negated: true
                }
            ]
        );
        assert!(set.in_class("N", "NG"));
        assert!(RuleSet::parse("default\tA@nucleus\t_[Q]\t+ာ\t0").is_err());
    }

    #[test]
    fn lexicon_lines() {
        let mut set = RuleSet::parse("lexicon\tJANUARY@word\t*\tဇန်နဝါရီ\t0").unwrap();
        assert_eq!(set.lexicon["JANUARY"].target, "ဇန်နဝါရီ");
        set.add_lexicon_tsv("April\tဧပြီ\tindependent vowel letter\n").unwrap();
        assert_eq!(set.lexicon["APRIL"].note, "independent vowel letter");
        assert!(set.add_lexicon_tsv("APRIL\tဧပြီ\n").is_err());
    }

    #[test]
    fn standard_pack_loads() {
        let set = RuleSet::standard();
        assert!(!set.rules.is_empty());
        assert!(set.lexicon.contains_key("JANUARY"));
    }
}
