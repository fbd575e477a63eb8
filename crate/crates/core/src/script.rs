//! Burmese syllable model.
//!
//! Syllables are stored as structure (letter identifiers and rhyme features), never as
//! glyph sequences. All Unicode knowledge lives in one table file (`data/script.tsv`),
//! so canonical sign order is decided in exactly one place: [`ScriptModel::compose`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Range;
use std::sync::OnceLock;

use thiserror::Error;

/// The shipped letter and rhyme tables.
pub const STANDARD_TABLES: &str = include_str!("../data/script.tsv");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScriptError {
    #[error("invalid syllable #{index}: {reason}")]
    InvalidSyllable { index: usize, reason: String },
    #[error("unparseable Burmese text at byte offset {offset}")]
    UnparseableText { offset: usize },
    #[error("alignment gap: {0}")]
    GapInAlignment(String),
    #[error("script table line {line}: {message}")]
    Table { line: usize, message: String },
    #[error("invalid fragment `{fragment}`: {reason}")]
    InvalidFragment { fragment: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nucleus {
    A,
    I,
    U,
    E,
    /// open-mid front vowel (ɛ)
    Eh,
    O,
    /// open-mid back vowel (ɔ)
    Aw,
    /// the inherent vowel of a bare letter
    Schwa,
    Ai,
    Au,
    Ei,
    Ou,
}

impl Nucleus {
    pub const ALL: [Nucleus; 12] = [
        Nucleus::A,
        Nucleus::I,
        Nucleus::U,
        Nucleus::E,
        Nucleus::Eh,
        Nucleus::O,
        Nucleus::Aw,
        Nucleus::Schwa,
        Nucleus::Ai,
        Nucleus::Au,
        Nucleus::Ei,
        Nucleus::Ou,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Nucleus::A => "a",
            Nucleus::I => "i",
            Nucleus::U => "u",
            Nucleus::E => "e",
            Nucleus::Eh => "eh",
            Nucleus::O => "o",
            Nucleus::Aw => "aw",
            Nucleus::Schwa => "schwa",
            Nucleus::Ai => "ai",
            Nucleus::Au => "au",
            Nucleus::Ei => "ei",
            Nucleus::Ou => "ou",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|n| n.key() == key)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ending {
    Open,
    /// nasalized rhyme (N)
    Nasal,
    /// glottal stop ending (ʔ)
    Glottal,
}

impl Ending {
    pub const ALL: [Ending; 3] = [Ending::Open, Ending::Nasal, Ending::Glottal];

    pub fn key(self) -> &'static str {
        match self {
            Ending::Open => "open",
            Ending::Nasal => "nasal",
            Ending::Glottal => "glottal",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.key() == key)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tone {
    Low,
    High,
    Creaky,
}

impl Tone {
    pub const ALL: [Tone; 3] = [Tone::Low, Tone::High, Tone::Creaky];

    pub fn key(self) -> &'static str {
        match self {
            Tone::Low => "low",
            Tone::High => "high",
            Tone::Creaky => "creaky",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.key() == key)
    }
}

/// Nucleus, ending and tone of a syllable.
///
/// `spelling` selects an orthographic variant of the same rhyme (for example the
/// nasal /aN/ written with န် or မ်); 0 is the canonical spelling. The tone of a
/// glottal or inherent-vowel rhyme is not written, so equality ignores it there.
#[derive(Debug, Clone, Copy, Eq)]
pub struct Rhyme {
    pub nucleus: Nucleus,
    pub ending: Ending,
    pub tone: Tone,
    pub spelling: u8,
}

impl Rhyme {
    pub fn new(nucleus: Nucleus, ending: Ending, tone: Tone) -> Self {
        Rhyme {
            nucleus,
            ending,
            tone,
            spelling: 0,
        }
    }

    pub fn schwa() -> Self {
        Rhyme::new(Nucleus::Schwa, Ending::Open, Tone::Low)
    }

    pub fn with_spelling(mut self, spelling: u8) -> Self {
        self.spelling = spelling;
        self
    }

    pub fn with_tone(mut self, tone: Tone) -> Self {
        self.tone = tone;
        self
    }

    pub fn effective_tone(&self) -> Tone {
        if self.ending == Ending::Glottal || self.nucleus == Nucleus::Schwa {
            Tone::Low
        } else {
            self.tone
        }
    }

    fn key(&self) -> RhymeKey {
        (self.nucleus, self.ending, self.effective_tone(), self.spelling)
    }
}

impl PartialEq for Rhyme {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl std::hash::Hash for Rhyme {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl fmt::Display for Rhyme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}.{}.{}",
            self.nucleus.key(),
            self.ending.key(),
            self.effective_tone().key()
        )?;
        if self.spelling != 0 {
            write!(f, ".{}", self.spelling)?;
        }
        Ok(())
    }
}

type RhymeKey = (Nucleus, Ending, Tone, u8);

/// Dependent consonant signs, kept as a set and always rendered ya < ra < wa < ha.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Medials(u8);

impl Medials {
    pub const YA: Medials = Medials(1);
    pub const RA: Medials = Medials(2);
    pub const WA: Medials = Medials(4);
    pub const HA: Medials = Medials(8);
    const ORDER: [Medials; 4] = [Medials::YA, Medials::RA, Medials::WA, Medials::HA];

    pub fn empty() -> Self {
        Medials(0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, other: Medials) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn union(self, other: Medials) -> Medials {
        Medials(self.0 | other.0)
    }

    pub fn without(self, other: Medials) -> Medials {
        Medials(self.0 & !other.0)
    }

    pub fn from_bits(bits: u8) -> Medials {
        Medials(bits & 0x0f)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    fn index(self) -> usize {
        Self::ORDER.iter().position(|m| *m == self).unwrap_or(0)
    }

    pub fn iter(self) -> impl Iterator<Item = Medials> {
        Self::ORDER.into_iter().filter(move |m| self.contains(*m))
    }
}

/// A consonant letter with its medial signs. Used both for onsets and killer codas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub base: char,
    pub medials: Medials,
}

impl Letter {
    pub fn new(base: char) -> Self {
        Letter {
            base,
            medials: Medials::empty(),
        }
    }

    pub fn with_medials(base: char, medials: Medials) -> Self {
        Letter { base, medials }
    }
}

pub type OnsetUnit = Letter;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BurmeseSyllable {
    pub onset: OnsetUnit,
    pub rhyme: Rhyme,
    /// asat-marked letters written after the rhyme, in surface order
    pub killer_coda: Vec<Letter>,
    /// irregular spelling rendered verbatim; other fields are ignored when set
    pub literal_override: Option<String>,
}

impl BurmeseSyllable {
    pub fn new(onset: Letter, rhyme: Rhyme) -> Self {
        BurmeseSyllable {
            onset,
            rhyme,
            killer_coda: Vec::new(),
            literal_override: None,
        }
    }

    pub fn with_killers(mut self, killers: Vec<Letter>) -> Self {
        self.killer_coda = killers;
        self
    }

    pub fn literal(text: impl Into<String>) -> Self {
        BurmeseSyllable {
            onset: Letter::new(NULL_ONSET),
            rhyme: Rhyme::schwa(),
            killer_coda: Vec::new(),
            literal_override: Some(text.into()),
        }
    }
}

/// The null-onset placeholder letter အ.
pub const NULL_ONSET: char = '\u{1021}';

/// One parsed piece of a rule-pack fragment such as `ခရ-`, `+ီ` or `ဘ်`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Piece {
    /// one or more onset letters; all but the last keep the inherent vowel
    Onset(Vec<Letter>),
    Rhyme(Rhyme),
    Killer(Letter),
}

/// Byte ranges of the parts of one composed syllable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyllableSpans {
    pub onset: Range<usize>,
    pub rhyme: Range<usize>,
    pub killers: Vec<Range<usize>>,
}

#[derive(Debug, Clone)]
pub struct ScriptModel {
    version: String,
    consonants: HashMap<char, String>,
    medial_chars: [char; 4],
    asat: char,
    virama: char,
    aa: char,
    tall_aa: char,
    tall: HashSet<char>,
    independent: HashSet<char>,
    killers: Vec<Letter>,
    rhymes: HashMap<RhymeKey, String>,
    /// (spelling, key), longest spelling first
    spellings: Vec<(Vec<char>, RhymeKey)>,
}

fn parse_codepoints(field: &str) -> Result<Vec<char>, String> {
    field
        .split_whitespace()
        .map(|hex| {
            u32::from_str_radix(hex, 16)
                .ok()
                .and_then(char::from_u32)
                .ok_or_else(|| format!("bad codepoint `{hex}`"))
        })
        .collect()
}

fn parse_rhyme_key(key: &str) -> Option<RhymeKey> {
    let mut parts = key.split('.');
    let nucleus = Nucleus::from_key(parts.next()?)?;
    let ending = Ending::from_key(parts.next()?)?;
    let tone = Tone::from_key(parts.next()?)?;
    let spelling = match parts.next() {
        Some(v) => v.parse().ok()?,
        None => 0,
    };
    if parts.next().is_some() {
        return None;
    }
    Some((nucleus, ending, tone, spelling))
}

impl ScriptModel {
    /// The model built from the shipped tables.
    pub fn standard() -> &'static ScriptModel {
        static MODEL: OnceLock<ScriptModel> = OnceLock::new();
        MODEL.get_or_init(|| ScriptModel::parse(STANDARD_TABLES).expect("shipped script tables"))
    }

    pub fn parse(text: &str) -> Result<Self, ScriptError> {
        let mut version = None;
        let mut consonants = HashMap::new();
        let mut medials: HashMap<String, char> = HashMap::new();
        let mut signs: HashMap<String, char> = HashMap::new();
        let mut tall = HashSet::new();
        let mut independent = HashSet::new();
        let mut killer_cps = Vec::new();
        let mut rhymes = HashMap::new();

        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let err = |message: String| ScriptError::Table { line, message };
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            if fields.len() != 3 {
                return Err(err(format!("expected 3 tab-separated fields, got {}", fields.len())));
            }
            let (kind, key) = (fields[0], fields[1]);
            let cps = parse_codepoints(fields[2]).map_err(err)?;
            let single = || -> Result<char, ScriptError> {
                match cps.as_slice() {
                    [c] => Ok(*c),
                    _ => Err(ScriptError::Table {
                        line,
                        message: format!("`{key}` needs exactly one codepoint"),
                    }),
                }
            };
            match kind {
                "version" => version = Some(key.to_string()),
                "consonant" => {
                    consonants.insert(single()?, key.to_string());
                }
                "medial" => {
                    medials.insert(key.to_string(), single()?);
                }
                "sign" => {
                    signs.insert(key.to_string(), single()?);
                }
                "tall" => {
                    tall.insert(single()?);
                }
                "independent" => {
                    independent.insert(single()?);
                }
                "killer" => killer_cps.push((line, cps)),
                "rhyme" => {
                    let rk = parse_rhyme_key(key).ok_or_else(|| err(format!("bad rhyme key `{key}`")))?;
                    if rhymes.insert(rk, cps.into_iter().collect::<String>()).is_some() {
                        return Err(err(format!("duplicate rhyme `{key}`")));
                    }
                }
                other => return Err(err(format!("unknown kind `{other}`"))),
            }
        }

        let need = |map: &HashMap<String, char>, k: &str| {
            map.get(k).copied().ok_or_else(|| ScriptError::Table {
                line: 0,
                message: format!("missing entry `{k}`"),
            })
        };
        let medial_chars = [
            need(&medials, "ya")?,
            need(&medials, "ra")?,
            need(&medials, "wa")?,
            need(&medials, "ha")?,
        ];
        let mut model = ScriptModel {
            version: version.unwrap_or_default(),
            consonants,
            medial_chars,
            asat: need(&signs, "asat")?,
            virama: need(&signs, "virama")?,
            aa: need(&signs, "aa")?,
            tall_aa: need(&signs, "tall_aa")?,
            tall,
            independent,
            killers: Vec::new(),
            rhymes,
            spellings: Vec::new(),
        };
        for (line, cps) in killer_cps {
            let (letter, used) = model
                .read_letter(&cps)
                .ok_or_else(|| ScriptError::Table {
                    line,
                    message: "killer must be a consonant with optional medials".into(),
                })?;
            if used != cps.len() {
                return Err(ScriptError::Table {
                    line,
                    message: "trailing codepoints in killer".into(),
                });
            }
            model.killers.push(letter);
        }
        let mut spellings: Vec<(Vec<char>, RhymeKey)> = model
            .rhymes
            .iter()
            .map(|(k, s)| (s.chars().collect(), *k))
            .collect();
        spellings.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.1.cmp(&b.1)));
        model.spellings = spellings;
        Ok(model)
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn is_consonant(&self, c: char) -> bool {
        self.consonants.contains_key(&c)
    }

    pub fn consonant_name(&self, c: char) -> Option<&str> {
        self.consonants.get(&c).map(String::as_str)
    }

    pub fn killer_inventory(&self) -> &[Letter] {
        &self.killers
    }

    /// All rhymes present in the table.
    pub fn rhymes(&self) -> impl Iterator<Item = Rhyme> + '_ {
        self.rhymes.keys().map(|&(n, e, t, s)| Rhyme {
            nucleus: n,
            ending: e,
            tone: t,
            spelling: s,
        })
    }

    pub fn has_rhyme(&self, rhyme: &Rhyme) -> bool {
        self.rhymes.contains_key(&rhyme.key())
    }

    fn medial_char(&self, m: Medials) -> char {
        self.medial_chars[m.index()]
    }

    fn medial_of(&self, c: char) -> Option<Medials> {
        self.medial_chars
            .iter()
            .position(|&mc| mc == c)
            .map(|i| Medials::ORDER[i])
    }

    fn is_sign(&self, c: char) -> bool {
        ('\u{102B}'..='\u{103E}').contains(&c) || ('\u{1056}'..='\u{1059}').contains(&c)
    }

    /// Medial signs in canonical order.
    pub fn medial_text(&self, medials: Medials) -> String {
        medials.iter().map(|m| self.medial_char(m)).collect()
    }

    pub fn letter_text(&self, letter: &Letter) -> String {
        let mut s = String::new();
        s.push(letter.base);
        for m in letter.medials.iter() {
            s.push(self.medial_char(m));
        }
        s
    }

    fn killer_text(&self, letter: &Letter) -> String {
        let mut s = self.letter_text(letter);
        s.push(self.asat);
        s
    }

    /// Reads a consonant plus medials in canonical order.
    fn read_letter(&self, chars: &[char]) -> Option<(Letter, usize)> {
        let base = *chars.first()?;
        if !self.is_consonant(base) {
            return None;
        }
        let mut medials = Medials::empty();
        let mut last = None;
        let mut i = 1;
        while let Some(m) = chars.get(i).and_then(|&c| self.medial_of(c)) {
            if last.is_some_and(|l: Medials| l.index() >= m.index()) {
                return None;
            }
            medials = medials.union(m);
            last = Some(m);
            i += 1;
        }
        Some((Letter::with_medials(base, medials), i))
    }

    fn rhyme_text(&self, rhyme: &Rhyme, onset: &Letter) -> Option<String> {
        let spelled = self.rhymes.get(&rhyme.key())?;
        if onset.medials.is_empty() && self.tall.contains(&onset.base) {
            Some(
                spelled
                    .chars()
                    .map(|c| if c == self.aa { self.tall_aa } else { c })
                    .collect(),
            )
        } else {
            Some(spelled.clone())
        }
    }

    /// Longest rhyme spelling at the start of `chars`; the two aa shapes are
    /// treated as one sign. The inherent vowel (empty spelling) always matches.
    pub fn match_rhyme(&self, chars: &[char]) -> (Rhyme, usize) {
        let norm = |c: char| if c == self.tall_aa { self.aa } else { c };
        for (sp, key) in &self.spellings {
            if sp.len() <= chars.len() && sp.iter().zip(chars).all(|(a, b)| *a == norm(*b)) {
                let (n, e, t, s) = *key;
                return (
                    Rhyme {
                        nucleus: n,
                        ending: e,
                        tone: t,
                        spelling: s,
                    },
                    sp.len(),
                );
            }
        }
        (Rhyme::schwa(), 0)
    }

    /// Composes one syllable into its onset, rhyme and killer strings.
    fn compose_parts(
        &self,
        syllable: &BurmeseSyllable,
        index: usize,
    ) -> Result<(String, String, Vec<String>), ScriptError> {
        let invalid = |reason: String| ScriptError::InvalidSyllable { index, reason };
        if let Some(lit) = &syllable.literal_override {
            return Ok((lit.clone(), String::new(), Vec::new()));
        }
        if !self.is_consonant(syllable.onset.base) {
            return Err(invalid(format!("onset {:?} is not a consonant letter", syllable.onset.base)));
        }
        let rhyme = self.rhyme_text(&syllable.rhyme, &syllable.onset).ok_or_else(|| {
            invalid(format!("rhyme {} is not in the rhyme inventory", syllable.rhyme))
        })?;
        let mut killers = Vec::with_capacity(syllable.killer_coda.len());
        for k in &syllable.killer_coda {
            if !self.killers.contains(k) {
                return Err(invalid(format!(
                    "killer {} is not in the killer inventory",
                    self.letter_text(k)
                )));
            }
            killers.push(self.killer_text(k));
        }
        if !killers.is_empty() {
            // the first killer must not be readable as part of a longer rhyme
            let tail: Vec<char> = rhyme.chars().chain(killers.concat().chars()).collect();
            let (_, len) = self.match_rhyme(&tail);
            if len != rhyme.chars().count() {
                return Err(invalid(format!(
                    "rhyme {} followed by killer {} reads as a different rhyme",
                    syllable.rhyme, killers[0]
                )));
            }
        }
        Ok((self.letter_text(&syllable.onset), rhyme, killers))
    }

    pub fn validate(&self, syllable: &BurmeseSyllable) -> Result<(), ScriptError> {
        self.compose_parts(syllable, 0).map(|_| ())
    }

    pub fn compose(&self, syllables: &[BurmeseSyllable]) -> Result<String, ScriptError> {
        self.compose_spans(syllables).map(|(text, _)| text)
    }

    /// Composes and reports where each syllable part landed in the output.
    pub fn compose_spans(
        &self,
        syllables: &[BurmeseSyllable],
    ) -> Result<(String, Vec<SyllableSpans>), ScriptError> {
        let mut out = String::new();
        let mut spans = Vec::with_capacity(syllables.len());
        for (index, syl) in syllables.iter().enumerate() {
            let (onset, rhyme, killers) = self.compose_parts(syl, index)?;
            let o0 = out.len();
            out.push_str(&onset);
            let r0 = out.len();
            out.push_str(&rhyme);
            let r1 = out.len();
            let mut ks = Vec::with_capacity(killers.len());
            for k in killers {
                let k0 = out.len();
                out.push_str(&k);
                ks.push(k0..out.len());
            }
            spans.push(SyllableSpans {
                onset: o0..r0,
                rhyme: r0..r1,
                killers: ks,
            });
        }
        Ok((out, spans))
    }

    pub fn decompose(&self, text: &str) -> Result<Vec<BurmeseSyllable>, ScriptError> {
        let chars: Vec<char> = text.chars().collect();
        let mut offsets = Vec::with_capacity(chars.len() + 1);
        let mut acc = 0;
        for c in &chars {
            offsets.push(acc);
            acc += c.len_utf8();
        }
        offsets.push(acc);
        let fail = |i: usize| ScriptError::UnparseableText { offset: offsets[i] };

        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if self.independent.contains(&c) {
                let start = i;
                i += 1;
                loop {
                    match chars.get(i) {
                        Some(&s) if self.is_sign(s) => i += 1,
                        Some(_) => match self.read_letter(&chars[i..]) {
                            Some((_, used))
                                if chars
                                    .get(i + used)
                                    .is_some_and(|&n| n == self.asat || n == self.virama) =>
                            {
                                i += used + 1
                            }
                            _ => break,
                        },
                        None => break,
                    }
                }
                out.push(BurmeseSyllable::literal(chars[start..i].iter().collect::<String>()));
                continue;
            }
            let Some((onset, used)) = self.read_letter(&chars[i..]) else {
                return Err(fail(i));
            };
            let start = i;
            i += used;
            let mut stacked = false;
            if chars.get(i) == Some(&self.virama) {
                // stacked consonants are irregular spellings and come back as literals
                let Some((_, used)) = self.read_letter(&chars[i + 1..]) else {
                    return Err(fail(i));
                };
                i += 1 + used;
                stacked = true;
            }
            let (rhyme, len) = self.match_rhyme(&chars[i..]);
            i += len;
            let mut killers = Vec::new();
            while let Some((k, used)) = self.read_letter(&chars[i..]) {
                if chars.get(i + used) != Some(&self.asat) {
                    break;
                }
                if !self.killers.contains(&k) {
                    return Err(fail(i));
                }
                killers.push(k);
                i += used + 1;
            }
            if chars.get(i).is_some_and(|&s| self.is_sign(s)) {
                return Err(fail(i));
            }
            if stacked {
                out.push(BurmeseSyllable::literal(chars[start..i].iter().collect::<String>()));
            } else {
                out.push(BurmeseSyllable::new(onset, rhyme).with_killers(killers));
            }
        }
        Ok(out)
    }

    /// Parses a rule-pack fragment: `ခရ-` (onset letters), `+ီ` (rhyme signs, bare `+`
    /// for the inherent vowel), `ဘ်` (killer letter), or `∅` for nothing.
    pub fn parse_fragment(&self, fragment: &str) -> Result<Vec<Piece>, ScriptError> {
        let invalid = |reason: &str| ScriptError::InvalidFragment {
            fragment: fragment.to_string(),
            reason: reason.to_string(),
        };
        let chars: Vec<char> = fragment.chars().collect();
        if chars.is_empty() || fragment == "∅" {
            return Ok(Vec::new());
        }
        let mut pieces = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            if chars[i] == '+' {
                i += 1;
                let (rhyme, len) = self.match_rhyme(&chars[i..]);
                pieces.push(Piece::Rhyme(rhyme));
                i += len;
                continue;
            }
            let Some((letter, used)) = self.read_letter(&chars[i..]) else {
                return Err(invalid("expected a consonant, `+` or `∅`"));
            };
            if chars.get(i + used) == Some(&self.asat) {
                if !self.killers.contains(&letter) {
                    return Err(invalid("killer letter outside the killer inventory"));
                }
                pieces.push(Piece::Killer(letter));
                i += used + 1;
                continue;
            }
            let mut cluster = vec![letter];
            i += used;
            loop {
                match chars.get(i) {
                    Some('-') => {
                        i += 1;
                        break;
                    }
                    Some(_) => {
                        let Some((next, used)) = self.read_letter(&chars[i..]) else {
                            return Err(invalid("onset letters must end with `-`"));
                        };
                        cluster.push(next);
                        i += used;
                    }
                    None => return Err(invalid("onset letters must end with `-`")),
                }
            }
            pieces.push(Piece::Onset(cluster));
        }
        Ok(pieces)
    }

    /// Splits leading medial signs off a fragment (`ွ+ာ` → wa, `+ာ`).
    pub fn split_medials<'a>(&self, text: &'a str) -> (Medials, &'a str) {
        let mut medials = Medials::empty();
        let mut rest = text;
        while let Some(c) = rest.chars().next() {
            match self.medial_of(c) {
                Some(m) => {
                    medials = medials.union(m);
                    rest = &rest[c.len_utf8()..];
                }
                None => break,
            }
        }
        (medials, rest)
    }

    /// Text of a piece in the two-column notation, given the onset it attaches to.
    pub fn piece_text(&self, piece: &Piece, onset: Option<&Letter>) -> PieceText {
        match piece {
            Piece::Onset(letters) => {
                PieceText::Onset(letters.iter().map(|l| self.letter_text(l)).collect())
            }
            Piece::Rhyme(r) => {
                let host = onset.copied().unwrap_or(Letter::new(NULL_ONSET));
                PieceText::Rhyme(self.rhyme_text(r, &host).unwrap_or_default())
            }
            Piece::Killer(k) => PieceText::Killer(self.killer_text(k)),
        }
    }
}

/// Rendered text of one aligned target piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PieceText {
    Onset(String),
    /// vowel/tone/ending signs; empty for the bare inherent vowel
    Rhyme(String),
    Killer(String),
    /// verbatim lexicon spelling
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedSpan {
    /// byte range in the source word
    pub source: Range<usize>,
    /// byte range in the composed target
    pub target: Range<usize>,
    pub pieces: Vec<PieceText>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alignment {
    pub source: String,
    pub target: String,
    pub spans: Vec<AlignedSpan>,
}

/// Renders an alignment one span per line: `M→မ-`, `E→+ီ`, `<>→အ-`.
pub fn render_alignment_notation(alignment: &Alignment) -> Result<String, ScriptError> {
    let (mut s, mut t) = (0, 0);
    for (i, span) in alignment.spans.iter().enumerate() {
        if span.source.start != s || span.target.start != t {
            return Err(ScriptError::GapInAlignment(format!(
                "span {i} starts at source {} / target {}, expected {s} / {t}",
                span.source.start, span.target.start
            )));
        }
        s = span.source.end;
        t = span.target.end;
    }
    if s != alignment.source.len() || t != alignment.target.len() {
        return Err(ScriptError::GapInAlignment(format!(
            "spans end at source {s} / target {t}, strings are {} / {} bytes",
            alignment.source.len(),
            alignment.target.len()
        )));
    }
    let mut out = String::new();
    for span in &alignment.spans {
        let src = &alignment.source[span.source.clone()];
        out.push_str(if src.is_empty() { "<>" } else { src });
        out.push('→');
        for p in &span.pieces {
            match p {
                PieceText::Onset(t) => {
                    out.push_str(t);
                    out.push('-');
                }
                PieceText::Rhyme(t) => {
                    out.push('+');
                    out.push_str(t);
                }
                PieceText::Killer(t) | PieceText::Literal(t) => out.push_str(t),
            }
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> &'static ScriptModel {
        ScriptModel::standard()
    }

    fn syl(base: char, rhyme: Rhyme) -> BurmeseSyllable {
        BurmeseSyllable::new(Letter::new(base), rhyme)
    }

    #[test]
    fn empty_input() {
        assert_eq!(model().compose(&[]).unwrap(), "");
        assert!(model().decompose("").unwrap().is_empty());
    }

    #[test]
    fn meter() {
        let s = [
            syl('မ', Rhyme::new(Nucleus::I, Ending::Open, Tone::Low)),
            syl('တ', Rhyme::new(Nucleus::A, Ending::Open, Tone::Low)),
        ];
        assert_eq!(model().compose(&s).unwrap(), "မီတာ");
    }

    #[test]
    fn web_with_killer() {
        let s = [syl('ဝ', Rhyme::new(Nucleus::Eh, Ending::Glottal, Tone::Low))
            .with_killers(vec![Letter::new('ဘ')])];
        assert_eq!(model().compose(&s).unwrap(), "ဝက်ဘ်");
    }

    #[test]
    fn june_has_wa_medial() {
        let got = model().decompose("ဇွန်").unwrap();
        assert_eq!(
            got,
            vec![BurmeseSyllable::new(
                Letter::with_medials('ဇ', Medials::WA),
                Rhyme::new(Nucleus::A, Ending::Nasal, Tone::Low)
            )]
        );
    }

    #[test]
    fn tall_aa_after_round_letters() {
        let s = [
            syl('ဒ', Rhyme::new(Nucleus::Aw, Ending::Open, Tone::Low)),
            syl('လ', Rhyme::new(Nucleus::A, Ending::Open, Tone::Low)),
        ];
        assert_eq!(model().compose(&s).unwrap(), "ဒေါ်လာ");
        let ga = BurmeseSyllable::new(
            Letter::with_medials('ဂ', Medials::YA),
            Rhyme::new(Nucleus::A, Ending::Open, Tone::Low),
        );
        assert_eq!(model().compose(&[ga]).unwrap(), "ဂျာ");
    }

    #[test]
    fn rejects_restricted_rhymes() {
        for (n, e) in [(Nucleus::E, Ending::Nasal), (Nucleus::Aw, Ending::Nasal), (Nucleus::U, Ending::Glottal)] {
            let err = model()
                .compose(&[syl('က', Rhyme::new(n, e, Tone::Low))])
                .unwrap_err();
            assert!(matches!(err, ScriptError::InvalidSyllable { index: 0, .. }), "{n:?} {e:?}");
        }
    }

    #[test]
    fn killer_absorbed_by_rhyme_is_invalid() {
        let s = syl('က', Rhyme::new(Nucleus::O, Ending::Open, Tone::Low)).with_killers(vec![Letter::new('က')]);
        assert!(model().validate(&s).is_err());
    }

    #[test]
    fn glottal_tone_is_ignored() {
        let a = Rhyme::new(Nucleus::A, Ending::Glottal, Tone::High);
        let b = Rhyme::new(Nucleus::A, Ending::Glottal, Tone::Low);
        assert_eq!(a, b);
        assert_eq!(
            model().compose(&[syl('က', a)]).unwrap(),
            model().compose(&[syl('က', b)]).unwrap()
        );
    }

    #[test]
    fn stacked_and_independent_are_literals() {
        let got = model().decompose("စက္ကန့်").unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!(got[1].literal_override.as_deref(), Some("က္ကန့်"));
        let got = model().decompose("ဧပြီ").unwrap();
        assert_eq!(got[0].literal_override.as_deref(), Some("ဧ"));
        assert_eq!(model().compose(&got).unwrap(), "ဧပြီ");
    }

    #[test]
    fn unparseable_reports_offset() {
        // dangling dot below at the start
        assert_eq!(
            model().decompose("\u{1037}က").unwrap_err(),
            ScriptError::UnparseableText { offset: 0 }
        );
        assert_eq!(
            model().decompose("ကx").unwrap_err(),
            ScriptError::UnparseableText { offset: 3 }
        );
    }

    #[test]
    fn fragments() {
        let m = model();
        assert_eq!(
            m.parse_fragment("ခရ-").unwrap(),
            vec![Piece::Onset(vec![Letter::new('ခ'), Letter::new('ရ')])]
        );
        assert_eq!(m.parse_fragment("+").unwrap(), vec![Piece::Rhyme(Rhyme::schwa())]);
        assert_eq!(m.parse_fragment("∅").unwrap(), vec![]);
        assert_eq!(
            m.parse_fragment("+တ်စ်").unwrap(),
            vec![
                Piece::Rhyme(Rhyme::new(Nucleus::A, Ending::Glottal, Tone::Low)),
                Piece::Killer(Letter::new('စ'))
            ]
        );
        assert!(m.parse_fragment("+ေန်").is_err());
        assert!(m.parse_fragment("သ").is_err());
    }

    #[test]
    fn notation() {
        let a = Alignment {
            source: String::new(),
            target: "အ".into(),
            spans: vec![AlignedSpan {
                source: 0..0,
                target: 0..3,
                pieces: vec![PieceText::Onset("အ".into())],
            }],
        };
        assert_eq!(render_alignment_notation(&a).unwrap(), "<>→အ-\n");
        let gap = Alignment {
            source: "AB".into(),
            target: "အ".into(),
            spans: vec![AlignedSpan {
                source: 1..2,
                target: 0..3,
                pieces: vec![],
            }],
        };
        assert!(matches!(
            render_alignment_notation(&gap),
            Err(ScriptError::GapInAlignment(_))
        ));
    }
}
