//! Latin spelling analysis: multigraph tokenization and syllable-like chunking.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatinError {
    #[error("non-Latin character {0:?} in input")]
    NonLatinInput(char),
    #[error("empty word")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphemeClass {
    Consonantal,
    Vocalic,
    SilentFinalE,
    AmbiguousY,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grapheme {
    /// uppercased letters
    pub text: String,
    pub klass: GraphemeClass,
}

impl fmt::Display for Grapheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Multigraphs and legal onset clusters used by the analyzer.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Inventory {
    /// multi-letter graphemes, matched longest first
    pub multigraphs: Vec<String>,
    /// onset clusters (as concatenated grapheme text) allowed word-internally
    pub onsets: Vec<String>,
}

const VOWEL_LETTERS: &str = "AEIOU";

impl Inventory {
    pub fn new(multigraphs: Vec<String>, onsets: Vec<String>) -> Self {
        let mut multigraphs = multigraphs;
        multigraphs.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        multigraphs.dedup();
        Inventory { multigraphs, onsets }
    }

    fn is_vowel_text(text: &str) -> bool {
        text.chars().all(|c| VOWEL_LETTERS.contains(c) || c == 'Y' || c == 'W')
            && text.chars().next().is_some_and(|c| VOWEL_LETTERS.contains(c))
    }

    /// Longest-match segmentation. Apostrophes and hyphens are dropped.
    pub fn tokenize(&self, word: &str) -> Result<Vec<Grapheme>, LatinError> {
        let mut letters = Vec::new();
        for c in word.trim().chars() {
            match c {
                'a'..='z' | 'A'..='Z' => letters.push(c.to_ascii_uppercase()),
                '\'' | '-' => {}
                other => return Err(LatinError::NonLatinInput(other)),
            }
        }
        if letters.is_empty() {
            return Err(LatinError::Empty);
        }
        let upper: String = letters.iter().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < upper.len() {
            let rest = &upper[i..];
            let text = self
                .multigraphs
                .iter()
                .find(|m| rest.starts_with(m.as_str()))
                .map(String::as_str)
                .unwrap_or(&rest[..1]);
            let klass = if text == "Y" {
                GraphemeClass::AmbiguousY
            } else if Self::is_vowel_text(text) {
                GraphemeClass::Vocalic
            } else {
                GraphemeClass::Consonantal
            };
            out.push(Grapheme {
                text: text.to_string(),
                klass,
            });
            i += text.len();
        }
        // a final E after a consonant is silent when another vowel precedes it
        let n = out.len();
        if n >= 3
            && out[n - 1].text == "E"
            && out[n - 2].klass == GraphemeClass::Consonantal
            && out[..n - 2]
                .iter()
                .any(|g| matches!(g.klass, GraphemeClass::Vocalic | GraphemeClass::AmbiguousY))
        {
            out[n - 1].klass = GraphemeClass::SilentFinalE;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChunkFlag {
    WordInitial,
    WordFinal,
    DoubledConsonantFollows,
    BeforeR,
    BeforeL,
    SilentEFinal,
    SyllabicR,
    SyllabicL,
    HiatusStart,
}

impl ChunkFlag {
    pub const ALL: [ChunkFlag; 9] = [
        ChunkFlag::WordInitial,
        ChunkFlag::WordFinal,
        ChunkFlag::DoubledConsonantFollows,
        ChunkFlag::BeforeR,
        ChunkFlag::BeforeL,
        ChunkFlag::SilentEFinal,
        ChunkFlag::SyllabicR,
        ChunkFlag::SyllabicL,
        ChunkFlag::HiatusStart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChunkFlag::WordInitial => "word_initial",
            ChunkFlag::WordFinal => "word_final",
            ChunkFlag::DoubledConsonantFollows => "doubled",
            ChunkFlag::BeforeR => "before_r",
            ChunkFlag::BeforeL => "before_l",
            ChunkFlag::SilentEFinal => "silent_e",
            ChunkFlag::SyllabicR => "syllabic_r",
            ChunkFlag::SyllabicL => "syllabic_l",
            ChunkFlag::HiatusStart => "hiatus",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ChunkFlags(u16);

impl ChunkFlags {
    pub fn set(&mut self, flag: ChunkFlag) {
        self.0 |= 1 << flag as u16;
    }

    pub fn has(self, flag: ChunkFlag) -> bool {
        self.0 & (1 << flag as u16) != 0
    }

    pub fn iter(self) -> impl Iterator<Item = ChunkFlag> {
        ChunkFlag::ALL.into_iter().filter(move |f| self.has(*f))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinChunk {
    pub onset: Vec<Grapheme>,
    pub nucleus: Vec<Grapheme>,
    pub coda: Vec<Grapheme>,
    pub flags: ChunkFlags,
}

impl LatinChunk {
    fn empty() -> Self {
        LatinChunk {
            onset: Vec::new(),
            nucleus: Vec::new(),
            coda: Vec::new(),
            flags: ChunkFlags::default(),
        }
    }

    pub fn text(&self) -> String {
        self.onset
            .iter()
            .chain(&self.nucleus)
            .chain(&self.coda)
            .map(|g| g.text.as_str())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.onset.len() + self.nucleus.len() + self.coda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for LatinChunk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |gs: &[Grapheme]| gs.iter().map(|g| g.text.as_str()).collect::<Vec<_>>().join(".");
        write!(f, "[{}|{}|{}]", join(&self.onset), join(&self.nucleus), join(&self.coda))?;
        for flag in self.flags.iter() {
            write!(f, " {}", flag.name())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Vowel,
    Consonant,
    Silent,
}

fn roles(graphemes: &[Grapheme]) -> Vec<Role> {
    let base: Vec<bool> = graphemes
        .iter()
        .map(|g| g.klass == GraphemeClass::Vocalic)
        .collect();
    graphemes
        .iter()
        .enumerate()
        .map(|(i, g)| match g.klass {
            GraphemeClass::Vocalic => Role::Vowel,
            GraphemeClass::Consonantal => Role::Consonant,
            GraphemeClass::SilentFinalE => Role::Silent,
            GraphemeClass::AmbiguousY => {
                let intervocalic = i > 0 && base[i - 1] && base.get(i + 1).copied().unwrap_or(false);
                if i == 0 || intervocalic {
                    Role::Consonant
                } else {
                    Role::Vowel
                }
            }
        })
        .collect()
}

/// A pseudo-nucleus: a real vowel, or the start of a syllabic R/L chunk.
#[derive(Debug, Clone, Copy)]
struct Peak {
    /// first grapheme of the nucleus (or of the syllabic coda)
    at: usize,
    /// number of nucleus graphemes (0 for syllabic peaks)
    len: usize,
    syllabic: Option<ChunkFlag>,
    /// for syllabic peaks: graphemes before `at` that must open this chunk
    forced_onset: usize,
}

/// Groups graphemes into chunks. Total over any tokenizer output.
pub fn chunk(graphemes: &[Grapheme], inventory: &Inventory) -> Vec<LatinChunk> {
    let n = graphemes.len();
    if n == 0 {
        return Vec::new();
    }
    let roles = roles(graphemes);
    let text = |i: usize| graphemes[i].text.as_str();
    let is_cons = |i: usize| roles[i] == Role::Consonant;

    let mut peaks: Vec<Peak> = (0..n)
        .filter(|&i| roles[i] == Role::Vowel)
        .map(|i| Peak {
            at: i,
            len: 1,
            syllabic: None,
            forced_onset: 0,
        })
        .collect();

    if let Some(last) = peaks.last().copied() {
        let tail: Vec<usize> = (last.at + 1..n).collect();
        let tail_text: Vec<&str> = tail.iter().map(|&i| text(i)).collect();
        match tail_text.as_slice() {
            // consonant + LE / RE at word end: syllabic liquid (BICYCLE, METRE)
            [.., c, l, "E"]
                if (*l == "L" || *l == "R")
                    && roles[n - 1] == Role::Silent
                    && tail.len() >= 3
                    && is_cons(tail[tail.len() - 3])
                    && !c.is_empty() =>
            {
                let at = n - 2;
                peaks.push(Peak {
                    at,
                    len: 0,
                    syllabic: Some(if *l == "L" { ChunkFlag::SyllabicL } else { ChunkFlag::SyllabicR }),
                    forced_onset: 1,
                });
            }
            // I + RE: the liquid forms its own syllable (WIRE)
            ["R", "E"] if roles[n - 1] == Role::Silent && (text(last.at) == "I" || text(last.at) == "Y") => {
                peaks.push(Peak {
                    at: n - 2,
                    len: 0,
                    syllabic: Some(ChunkFlag::SyllabicR),
                    forced_onset: 0,
                });
            }
            // L + nasal at word end splits off (FILM)
            ["L", m] if matches!(*m, "M" | "N") => {
                peaks.push(Peak {
                    at: n - 1,
                    len: 0,
                    syllabic: Some(ChunkFlag::SyllabicL),
                    forced_onset: 1,
                });
            }
            _ => {}
        }
    }

    if peaks.is_empty() {
        // no vowel at all: one chunk holding everything as onset
        let mut c = LatinChunk::empty();
        c.onset = graphemes.to_vec();
        c.flags.set(ChunkFlag::WordInitial);
        c.flags.set(ChunkFlag::WordFinal);
        return vec![c];
    }

    // boundaries: index where each chunk starts
    let mut starts = vec![0usize];
    let mut doubled = vec![false; peaks.len()];
    for p in 1..peaks.len() {
        let prev_end = peaks[p - 1].at + peaks[p - 1].len;
        let peak = peaks[p];
        let onset_end = peak.at;
        let start = if peak.syllabic.is_some() {
            onset_end - peak.forced_onset
        } else {
            let cons: Vec<usize> = (prev_end..onset_end).collect();
            match cons.len() {
                0 => onset_end,
                1 => cons[0],
                _ => {
                    let (a, b) = (cons[0], cons[1]);
                    if text(a) == text(b) {
                        doubled[p - 1] = true;
                        b
                    } else {
                        // longest legal onset suffix
                        let mut best = onset_end - 1;
                        for s in (prev_end..onset_end - 1).rev() {
                            let cluster: String = (s..onset_end).map(text).collect();
                            if inventory.onsets.contains(&cluster) {
                                best = s;
                            }
                        }
                        best
                    }
                }
            }
        };
        if text(start) == "CK" || (start > 0 && text(start - 1) == text(start) && is_cons(start - 1)) {
            doubled[p - 1] = true;
        }
        starts.push(start);
    }

    let mut chunks = Vec::with_capacity(peaks.len());
    for (p, peak) in peaks.iter().enumerate() {
        let start = starts[p];
        let end = starts.get(p + 1).copied().unwrap_or(n);
        let mut c = LatinChunk::empty();
        c.onset = graphemes[start..peak.at].to_vec();
        c.nucleus = graphemes[peak.at..peak.at + peak.len].to_vec();
        c.coda = graphemes[peak.at + peak.len..end].to_vec();
        if p == 0 {
            c.flags.set(ChunkFlag::WordInitial);
        } else if c.onset.is_empty() {
            c.flags.set(ChunkFlag::HiatusStart);
        }
        if p + 1 == peaks.len() {
            c.flags.set(ChunkFlag::WordFinal);
        }
        if doubled[p] {
            c.flags.set(ChunkFlag::DoubledConsonantFollows);
        }
        if let Some(flag) = peak.syllabic {
            c.flags.set(flag);
        }
        match c.coda.first().map(|g| g.text.as_str()) {
            Some("R") => c.flags.set(ChunkFlag::BeforeR),
            Some("L") => c.flags.set(ChunkFlag::BeforeL),
            _ => {}
        }
        if c.coda.last().is_some_and(|g| g.klass == GraphemeClass::SilentFinalE) {
            c.flags.set(ChunkFlag::SilentEFinal);
        }
        chunks.push(c);
    }
    chunks
}

/// Position of a grapheme inside its chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Onset,
    Nucleus,
    Coda,
}

/// Flat view of a chunked word: per-grapheme chunk index and slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub graphemes: Vec<Grapheme>,
    pub chunks: Vec<LatinChunk>,
    pub chunk_of: Vec<usize>,
    pub slot_of: Vec<Slot>,
    /// grapheme index where each chunk's nucleus (or syllabic coda) starts
    pub nucleus_start: Vec<usize>,
    /// grapheme index where each chunk starts
    pub chunk_start: Vec<usize>,
    /// byte offset of each grapheme in the normalized word, plus the total length
    pub offsets: Vec<usize>,
    pub word: String,
}

impl Analysis {
    pub fn new(graphemes: Vec<Grapheme>, chunks: Vec<LatinChunk>) -> Self {
        let mut chunk_of = Vec::new();
        let mut slot_of = Vec::new();
        let mut nucleus_start = Vec::new();
        let mut chunk_start = Vec::new();
        let mut pos = 0;
        for (ci, c) in chunks.iter().enumerate() {
            chunk_start.push(pos);
            nucleus_start.push(pos + c.onset.len());
            for (slot, len) in [(Slot::Onset, c.onset.len()), (Slot::Nucleus, c.nucleus.len()), (Slot::Coda, c.coda.len())] {
                for _ in 0..len {
                    chunk_of.push(ci);
                    slot_of.push(slot);
                }
            }
            pos += c.len();
        }
        let mut offsets = Vec::with_capacity(graphemes.len() + 1);
        let mut acc = 0;
        for g in &graphemes {
            offsets.push(acc);
            acc += g.text.len();
        }
        offsets.push(acc);
        let word = graphemes.iter().map(|g| g.text.as_str()).collect();
        Analysis {
            graphemes,
            chunks,
            chunk_of,
            slot_of,
            nucleus_start,
            chunk_start,
            offsets,
            word,
        }
    }

    pub fn len(&self) -> usize {
        self.graphemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphemes.is_empty()
    }

    pub fn is_vowel(&self, i: usize) -> bool {
        self.slot_of[i] == Slot::Nucleus
    }
}

/// Tokenizes and chunks in one step.
pub fn analyze(word: &str, inventory: &Inventory) -> Result<Analysis, LatinError> {
    let graphemes = inventory.tokenize(word)?;
    let chunks = chunk(&graphemes, inventory);
    Ok(Analysis::new(graphemes, chunks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv() -> Inventory {
        Inventory::new(
            ["TH", "CH", "SH", "PH", "CK", "NG", "EE", "OO", "AY", "AW", "AU", "OU", "OI", "OY", "QU"]
                .map(String::from)
                .to_vec(),
            ["BR", "TR", "CHR", "ST", "STR", "PR", "FL"].map(String::from).to_vec(),
        )
    }

    fn texts(gs: &[Grapheme]) -> Vec<&str> {
        gs.iter().map(|g| g.text.as_str()).collect()
    }

    #[test]
    fn tokenize_examples() {
        let i = inv();
        assert_eq!(texts(&i.tokenize("THEORY").unwrap()), ["TH", "E", "O", "R", "Y"]);
        assert_eq!(texts(&i.tokenize("a").unwrap()), ["A"]);
        assert_eq!(texts(&i.tokenize("Racket").unwrap()), ["R", "A", "CK", "E", "T"]);
        assert_eq!(i.tokenize("AB1"), Err(LatinError::NonLatinInput('1')));
        assert_eq!(i.tokenize("  "), Err(LatinError::Empty));
    }

    #[test]
    fn june_is_one_chunk() {
        let i = inv();
        let cs = chunk(&i.tokenize("JUNE").unwrap(), &i);
        assert_eq!(cs.len(), 1);
        assert_eq!(texts(&cs[0].onset), ["J"]);
        assert_eq!(texts(&cs[0].nucleus), ["U"]);
        assert_eq!(cs[0].coda[0].text, "N");
        assert_eq!(cs[0].coda[1].klass, GraphemeClass::SilentFinalE);
        assert!(cs[0].flags.has(ChunkFlag::SilentEFinal));
    }

    #[test]
    fn film_splits_sonorant_coda() {
        let i = inv();
        let cs = chunk(&i.tokenize("FILM").unwrap(), &i);
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].text(), "FI");
        assert_eq!(texts(&cs[1].onset), ["L"]);
        assert!(cs[1].nucleus.is_empty());
        assert_eq!(texts(&cs[1].coda), ["M"]);
        assert!(cs[1].flags.has(ChunkFlag::SyllabicL));
    }

    #[test]
    fn single_vowel() {
        let i = inv();
        let cs = chunk(&i.tokenize("A").unwrap(), &i);
        assert_eq!(cs.len(), 1);
        assert!(cs[0].onset.is_empty());
        assert!(cs[0].flags.has(ChunkFlag::WordInitial));
    }

    #[test]
    fn doubled_letters_flag_previous_chunk() {
        let i = inv();
        let cs = chunk(&i.tokenize("BATTERY").unwrap(), &i);
        assert_eq!(cs[0].text(), "BAT");
        assert!(cs[0].flags.has(ChunkFlag::DoubledConsonantFollows));
        let cs = chunk(&i.tokenize("RACKET").unwrap(), &i);
        assert_eq!(cs[0].text(), "RA");
        assert!(cs[0].flags.has(ChunkFlag::DoubledConsonantFollows));
    }

    #[test]
    fn hiatus_and_syllabic_liquids() {
        let i = inv();
        let cs = chunk(&i.tokenize("THEORY").unwrap(), &i);
        assert_eq!(cs.iter().map(|c| c.text()).collect::<Vec<_>>(), ["THE", "O", "RY"]);
        assert!(cs[1].flags.has(ChunkFlag::HiatusStart));
        let cs = chunk(&i.tokenize("METRE").unwrap(), &i);
        assert_eq!(cs.iter().map(|c| c.text()).collect::<Vec<_>>(), ["ME", "TRE"]);
        assert!(cs[1].flags.has(ChunkFlag::SyllabicR));
        let cs = chunk(&i.tokenize("WIRE").unwrap(), &i);
        assert_eq!(cs.iter().map(|c| c.text()).collect::<Vec<_>>(), ["WI", "RE"]);
        assert!(cs[1].flags.has(ChunkFlag::HiatusStart));
    }

    #[test]
    fn maximal_onset_uses_whitelist() {
        let i = inv();
        let cs = chunk(&i.tokenize("DISTRICT").unwrap(), &i);
        assert_eq!(cs.iter().map(|c| c.text()).collect::<Vec<_>>(), ["DI", "STRICT"]);
        let cs = chunk(&i.tokenize("HARMONICA").unwrap(), &i);
        assert_eq!(cs[0].text(), "HAR");
        assert!(cs[0].flags.has(ChunkFlag::BeforeR));
    }
}
