//! Transliteration of Latin-spelled words: rule matching over the analyzed word,
//! exact best-first search over the resulting lattice, candidate assembly.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::latin::{self, Analysis, LatinError, Slot};
use crate::rules::{Item, Position, Predicate, RuleSet, Tier};
use crate::script::{
    render_alignment_notation, AlignedSpan, Alignment, BurmeseSyllable, Ending, Letter, Medials, Nucleus, Piece,
    PieceText, ScriptModel, Tone,
};

/// Upper bound on search expansions per word.
const MAX_EXPANSIONS: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Latin(#[from] LatinError),
    #[error("no rule applicable to chunk {chunk} of {word}")]
    NoRuleApplicable { word: String, chunk: String },
}

/// One applied rule output.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub rule_id: String,
    pub output: usize,
    /// low/high tone exchanged on the rule's rhyme
    pub tone_variant: bool,
    pub weight: f64,
    /// byte range in the normalized source word
    pub source: Range<usize>,
    pub fragment: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub target: String,
    pub syllables: Vec<BurmeseSyllable>,
    /// sum of applied weights, lower is better
    pub score: f64,
    pub alignment: Alignment,
    pub rule_trace: Vec<TraceStep>,
    pub from_lexicon: bool,
}

impl Candidate {
    pub fn rule_ids(&self) -> Vec<&str> {
        self.rule_trace.iter().map(|s| s.rule_id.as_str()).collect()
    }

    pub(crate) fn lexicon(source: &str, target: &str) -> Candidate {
        let script = ScriptModel::standard();
        let syllables = script
            .decompose(target)
            .unwrap_or_else(|_| vec![BurmeseSyllable::literal(target)]);
        Candidate {
            target: target.to_string(),
            syllables,
            score: 0.0,
            alignment: Alignment {
                source: source.to_string(),
                target: target.to_string(),
                spans: vec![AlignedSpan {
                    source: 0..source.len(),
                    target: 0..target.len(),
                    pieces: vec![PieceText::Literal(target.to_string())],
                }],
            },
            rule_trace: vec![TraceStep {
                rule_id: format!("lexicon:{source}@word:*"),
                output: 0,
                tone_variant: false,
                weight: 0.0,
                source: 0..source.len(),
                fragment: target.to_string(),
            }],
            from_lexicon: true,
        }
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.target, format_score(self.score))
    }
}

/// Scores print as integers when they are whole.
pub fn format_score(score: f64) -> String {
    if score.fract() == 0.0 {
        format!("{}", score as i64)
    } else {
        format!("{score}")
    }
}

/// Orders candidates by score, then by target text.
pub fn rank_order(a: &Candidate, b: &Candidate) -> Ordering {
    a.score.total_cmp(&b.score).then_with(|| a.target.cmp(&b.target))
}

/// Recomputes a candidate's score from its trace.
pub fn score_from_trace(rules: &RuleSet, trace: &[TraceStep]) -> Option<f64> {
    let tone = rules.param("tone_variant_weight", 1.0);
    let mut total = 0.0;
    for step in trace {
        if step.rule_id.starts_with("lexicon:") {
            continue;
        }
        if let Some(rule) = rules.rule(&step.rule_id) {
            total += rule.outputs.get(step.output)?.weight;
            if step.tone_variant {
                total += tone;
            }
        } else {
            // engine-level steps (Pinyin word-mode adjustments) carry their own weight
            total += step.weight;
        }
    }
    Some(total)
}

/// Renders the rule trace and the alignment of a candidate.
pub fn explain(candidate: &Candidate) -> String {
    if candidate.from_lexicon {
        return format!("lexicon: {}\n", candidate.alignment.source);
    }
    let mut out = render_alignment_notation(&candidate.alignment).unwrap_or_default();
    out.push_str("-- rules\n");
    for step in &candidate.rule_trace {
        let src = &candidate.alignment.source[step.source.clone()];
        out.push_str(&format!(
            "{}→{}\t{}{}\t{}\n",
            if src.is_empty() { "<>" } else { src },
            step.fragment,
            step.rule_id,
            if step.tone_variant { " (tone variant)" } else { "" },
            format_score(step.weight)
        ));
    }
    out
}

/// A lattice edge: one rule output covering graphemes `from..to`.
#[derive(Debug, Clone)]
pub(crate) struct Edge {
    pub from: usize,
    pub to: usize,
    /// medial signs added to the pending onset
    pub medials: Medials,
    pub pieces: Vec<Piece>,
    pub weight: f64,
    pub step: TraceStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Phase {
    Start,
    /// an onset is waiting for its rhyme
    Pending,
    Closed,
}

fn advance(mut phase: Phase, medials: Medials, pieces: &[Piece]) -> Option<Phase> {
    if !medials.is_empty() && (phase != Phase::Pending || !matches!(pieces.first(), Some(Piece::Rhyme(_)))) {
        return None;
    }
    for p in pieces {
        phase = match (p, phase) {
            (Piece::Onset(_), _) => Phase::Pending,
            (Piece::Rhyme(_), Phase::Pending) => Phase::Closed,
            (Piece::Killer(_), Phase::Closed) => Phase::Closed,
            _ => return None,
        };
    }
    Some(phase)
}

/// State of a lattice walk: grapheme position, syllable phase, and whether the
/// last edge was zero-width (at most one zero-width edge per position).
type State = (usize, Phase, bool);

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cost(f64);

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Lattice over positions `0..=len` plus k-best search.
pub(crate) struct Lattice {
    pub len: usize,
    pub edges: Vec<Edge>,
    /// outgoing edge indices per position
    out: Vec<Vec<usize>>,
}

/// A completed path through the lattice.
pub(crate) struct Path {
    pub edges: Vec<usize>,
    pub score: f64,
}

impl Lattice {
    pub fn new(len: usize, edges: Vec<Edge>) -> Self {
        let mut out = vec![Vec::new(); len + 1];
        for (i, e) in edges.iter().enumerate() {
            out[e.from].push(i);
        }
        Lattice { len, edges, out }
    }

    fn step(&self, state: State, edge: &Edge) -> Option<State> {
        let (pos, phase, eps) = state;
        debug_assert_eq!(pos, edge.from);
        let zero = edge.to == edge.from;
        if zero && eps {
            return None;
        }
        let phase = advance(phase, edge.medials, &edge.pieces)?;
        Some((edge.to, phase, zero))
    }

    fn is_final(&self, state: State) -> bool {
        state.0 == self.len && (state.1 != Phase::Start || self.len == 0)
    }

    /// Cheapest completion cost from every state.
    fn heuristic(&self) -> HashMap<State, f64> {
        let mut h: HashMap<State, f64> = HashMap::new();
        let phases = [Phase::Start, Phase::Pending, Phase::Closed];
        for pos in (0..=self.len).rev() {
            for eps in [true, false] {
                for phase in phases {
                    let state = (pos, phase, eps);
                    let mut best = if self.is_final(state) { 0.0 } else { f64::INFINITY };
                    for &ei in &self.out[pos] {
                        let edge = &self.edges[ei];
                        if let Some(next) = self.step(state, edge) {
                            if let Some(rest) = h.get(&next) {
                                best = best.min(edge.weight + rest);
                            }
                        }
                    }
                    if best.is_finite() {
                        h.insert(state, best);
                    }
                }
            }
        }
        h
    }

    /// Furthest position reachable from the start.
    pub fn reach(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![(0usize, Phase::Start, false)];
        let mut far = 0;
        while let Some(s) = stack.pop() {
            if !seen.insert(s) {
                continue;
            }
            far = far.max(s.0);
            for &ei in &self.out[s.0] {
                if let Some(n) = self.step(s, &self.edges[ei]) {
                    stack.push(n);
                }
            }
        }
        far
    }

    /// Enumerates complete paths in nondecreasing score. `accept` sees each path and
    /// returns its distinct key (None = reject); the search stops once `k` distinct
    /// keys are held and the next path costs more than the k-th best.
    pub fn k_best<K: Ord + Clone>(
        &self,
        k: usize,
        mut accept: impl FnMut(&Path) -> Option<K>,
    ) -> Vec<(K, Path)> {
        let h = self.heuristic();
        let start = (0, Phase::Start, false);
        let Some(&h0) = h.get(&start) else {
            return Vec::new();
        };
        // arena of partial paths: (parent, edge, state, cost so far)
        let mut arena: Vec<(Option<usize>, usize, State, f64)> = Vec::new();
        let mut heap = BinaryHeap::new();
        let mut seq = 0usize;
        heap.push(std::cmp::Reverse((Cost(h0), seq, None::<usize>)));
        let mut found: BTreeMap<K, Path> = BTreeMap::new();
        let mut scores: Vec<f64> = Vec::new();
        let mut expansions = 0;
        while let Some(std::cmp::Reverse((Cost(f), _, node))) = heap.pop() {
            if scores.len() >= k && f > scores[k - 1] {
                break;
            }
            expansions += 1;
            if expansions > MAX_EXPANSIONS {
                break;
            }
            let (state, g) = match node {
                None => (start, 0.0),
                Some(i) => (arena[i].2, arena[i].3),
            };
            if self.is_final(state) {
                let mut edges = Vec::new();
                let mut cur = node;
                while let Some(i) = cur {
                    edges.push(arena[i].1);
                    cur = arena[i].0;
                }
                edges.reverse();
                let path = Path { edges, score: g };
                if let Some(key) = accept(&path) {
                    found.entry(key).or_insert_with(|| {
                        let pos = scores.partition_point(|s| *s <= g);
                        scores.insert(pos, g);
                        path
                    });
                }
            }
            for &ei in &self.out[state.0] {
                let edge = &self.edges[ei];
                let Some(next) = self.step(state, edge) else {
                    continue;
                };
                let Some(rest) = h.get(&next) else {
                    continue;
                };
                let g2 = g + edge.weight;
                arena.push((node, ei, next, g2));
                seq += 1;
                heap.push(std::cmp::Reverse((Cost(g2 + rest), seq, Some(arena.len() - 1))));
            }
        }
        found.into_iter().collect()
    }

    /// Builds syllables, target text and alignment for a path.
    pub fn assemble(&self, path: &Path, source: &str, offsets: &[usize]) -> Option<Candidate> {
        let script = ScriptModel::standard();
        enum Owner {
            Onset { first: usize, count: usize },
            Rhyme(usize),
            Killer(usize, usize),
        }
        let mut syllables: Vec<BurmeseSyllable> = Vec::new();
        let mut pending: Option<Letter> = None;
        let mut owners: Vec<Vec<Owner>> = Vec::with_capacity(path.edges.len());
        for &ei in &path.edges {
            let mut mine = Vec::new();
            let edge = &self.edges[ei];
            if let Some(p) = pending.as_mut() {
                p.medials = p.medials.union(edge.medials);
            }
            for piece in &edge.pieces {
                match piece {
                    Piece::Onset(letters) => {
                        if let Some(p) = pending.take() {
                            syllables.push(BurmeseSyllable::new(p, crate::script::Rhyme::schwa()));
                        }
                        let first = syllables.len();
                        for l in &letters[..letters.len() - 1] {
                            syllables.push(BurmeseSyllable::new(*l, crate::script::Rhyme::schwa()));
                        }
                        pending = letters.last().copied();
                        mine.push(Owner::Onset {
                            first,
                            count: letters.len(),
                        });
                    }
                    Piece::Rhyme(r) => {
                        syllables.push(BurmeseSyllable::new(pending.take()?, *r));
                        mine.push(Owner::Rhyme(syllables.len() - 1));
                    }
                    Piece::Killer(l) => {
                        let idx = syllables.len().checked_sub(1)?;
                        syllables[idx].killer_coda.push(*l);
                        mine.push(Owner::Killer(idx, syllables[idx].killer_coda.len() - 1));
                    }
                }
            }
            owners.push(mine);
        }
        if let Some(p) = pending.take() {
            syllables.push(BurmeseSyllable::new(p, crate::script::Rhyme::schwa()));
        }
        let (target, spans) = script.compose_spans(&syllables).ok()?;

        let mut aligned: Vec<AlignedSpan> = Vec::new();
        let mut carry: Option<usize> = None;
        let mut trace = Vec::with_capacity(path.edges.len());
        for (&ei, mine) in path.edges.iter().zip(&owners) {
            let edge = &self.edges[ei];
            let src = offsets[edge.from]..offsets[edge.to];
            trace.push(TraceStep {
                source: src.clone(),
                ..edge.step.clone()
            });
            let mut pieces = Vec::new();
            let mut range: Option<Range<usize>> = None;
            for o in mine {
                let (r, piece) = match *o {
                    Owner::Onset { first, count } => {
                        let r = spans[first].onset.start..spans[first + count - 1].onset.end;
                        (r.clone(), PieceText::Onset(target[r].to_string()))
                    }
                    Owner::Rhyme(s) => {
                        let r = spans[s].rhyme.clone();
                        (r.clone(), PieceText::Rhyme(target[r].to_string()))
                    }
                    Owner::Killer(s, k) => {
                        let r = spans[s].killers[k].clone();
                        (r.clone(), PieceText::Killer(target[r].to_string()))
                    }
                };
                range = Some(match range {
                    None => r,
                    Some(prev) => prev.start.min(r.start)..prev.end.max(r.end),
                });
                pieces.push(piece);
            }
            match range {
                Some(r) => {
                    let start = carry.take().unwrap_or(src.start);
                    // an onset closed as a bare syllable leaves no text between spans
                    let r = match aligned.last() {
                        Some(prev) if prev.target.end < r.start => prev.target.end..r.end,
                        _ => r,
                    };
                    aligned.push(AlignedSpan {
                        source: start..src.end,
                        target: r,
                        pieces,
                    });
                }
                None if src.is_empty() => {}
                None => match aligned.last_mut() {
                    Some(prev) => prev.source.end = src.end,
                    None => carry = Some(carry.unwrap_or(src.start)),
                },
            }
        }
        if let Some(start) = carry {
            // nothing produced output at all
            aligned.push(AlignedSpan {
                source: start..source.len(),
                target: 0..target.len(),
                pieces: Vec::new(),
            });
        }
        Some(Candidate {
            target: target.clone(),
            syllables,
            score: path.score,
            alignment: Alignment {
                source: source.to_string(),
                target,
                spans: aligned,
            },
            rule_trace: trace,
            from_lexicon: false,
        })
    }
}

fn class_match(rules: &RuleSet, analysis: &Analysis, class: &str, i: usize) -> bool {
    if class.contains('&') {
        return class.split('&').all(|part| class_match(rules, analysis, part, i));
    }
    let g = &analysis.graphemes[i];
    match class {
        "V" => analysis.slot_of[i] == Slot::Nucleus,
        "C" => analysis.slot_of[i] != Slot::Nucleus && g.klass != latin::GraphemeClass::SilentFinalE,
        "K" => analysis.slot_of[i] == Slot::Coda && g.klass != latin::GraphemeClass::SilentFinalE,
        "E0" => g.klass == latin::GraphemeClass::SilentFinalE,
        other => rules.in_class(other, &g.text),
    }
}

fn item_match(rules: &RuleSet, analysis: &Analysis, item: &Item, i: usize) -> bool {
    match item {
        Item::Grapheme(t) => analysis.graphemes[i].text == *t,
        Item::Class(c) => class_match(rules, analysis, c, i),
        Item::Boundary => false,
    }
}

/// Matches context items forward from `pos` (right context).
fn match_right(rules: &RuleSet, a: &Analysis, items: &[Item], mut pos: usize) -> bool {
    for item in items {
        if matches!(item, Item::Boundary) {
            if pos != a.len() {
                return false;
            }
            continue;
        }
        if pos >= a.len() || !item_match(rules, a, item, pos) {
            return false;
        }
        pos += 1;
    }
    true
}

/// Matches context items backward ending at `pos` (left context).
fn match_left(rules: &RuleSet, a: &Analysis, items: &[Item], mut pos: usize) -> bool {
    for item in items.iter().rev() {
        if matches!(item, Item::Boundary) {
            if pos != 0 {
                return false;
            }
            continue;
        }
        if pos == 0 || !item_match(rules, a, item, pos - 1) {
            return false;
        }
        pos -= 1;
    }
    true
}

/// End position if `rule` applies at `s`.
fn match_rule(rules: &RuleSet, a: &Analysis, rule_idx: usize, s: usize) -> Option<usize> {
    let rule = &rules.rules[rule_idx];
    let n = a.len();
    let e = s + rule.pattern.len();
    if e > n {
        return None;
    }
    if !(s..e).zip(&rule.pattern).all(|(i, item)| item_match(rules, a, item, i)) {
        return None;
    }
    let chunk = match rule.position {
        Position::Onset => {
            if s == e {
                
                (0..a.chunks.len()).find(|&c| a.chunk_start[c] == s && a.chunks[c].onset.is_empty())?
            } else {
                let c = a.chunk_of[s];
                if !(s..e).all(|i| a.slot_of[i] == Slot::Onset && a.chunk_of[i] == c) {
                    return None;
                }
                c
            }
        }
        Position::Nucleus => {
            let c = (0..a.chunks.len()).find(|&c| a.nucleus_start[c] == s)?;
            let nucleus_end = s + a.chunks[c].nucleus.len();
            let chunk_end = a.chunk_start[c] + a.chunks[c].len();
            if e < nucleus_end || e > chunk_end {
                return None;
            }
            if s == e && !a.chunks[c].nucleus.is_empty() {
                return None;
            }
            c
        }
        Position::Coda => {
            if s == e {
                return None;
            }
            let c = a.chunk_of[s];
            if !(s..e).all(|i| a.slot_of[i] == Slot::Coda && a.chunk_of[i] == c) {
                return None;
            }
            c
        }
        Position::Any => {
            if s == e {
                return None;
            }
            a.chunk_of[s]
        }
        _ => return None,
    };
    let flags = a.chunks[chunk].flags;
    for pred in &rule.context {
        let ok = match pred {
            Predicate::Flag { flag, negated } => flags.has(*flag) != *negated,
            Predicate::Right(items) => match_right(rules, a, items, e),
            Predicate::Left(items) => match_left(rules, a, items, s),
            Predicate::NotRight(items) => !match_right(rules, a, items, e),
            Predicate::NotLeft(items) => !match_left(rules, a, items, s),
            Predicate::Initial(_) => false,
        };
        if !ok {
            return None;
        }
    }
    Some(e)
}

/// Low/high counterpart of every tone-bearing rhyme in `pieces`.
fn tone_variant(pieces: &[Piece]) -> Option<Vec<Piece>> {
    let script = ScriptModel::standard();
    let mut changed = false;
    let out: Vec<Piece> = pieces
        .iter()
        .map(|p| match p {
            Piece::Rhyme(r) if r.ending != Ending::Glottal && r.nucleus != Nucleus::Schwa => {
                let flipped = match r.tone {
                    Tone::Low => r.with_tone(Tone::High),
                    Tone::High => r.with_tone(Tone::Low),
                    Tone::Creaky => *r,
                };
                if flipped != *r && script.has_rhyme(&flipped) {
                    changed = true;
                    Piece::Rhyme(flipped)
                } else {
                    p.clone()
                }
            }
            _ => p.clone(),
        })
        .collect();
    changed.then_some(out)
}

fn fragment_text(medials: Medials, pieces: &[Piece]) -> String {
    let script = ScriptModel::standard();
    let mut host: Option<Letter> = None;
    if pieces.is_empty() {
        return "∅".into();
    }
    let mut s = script.medial_text(medials);
    for p in pieces {
        match script.piece_text(p, host.as_ref()) {
            PieceText::Onset(t) => {
                s.push_str(&t);
                s.push('-');
            }
            PieceText::Rhyme(t) => {
                s.push('+');
                s.push_str(&t);
            }
            PieceText::Killer(t) | PieceText::Literal(t) => s.push_str(&t),
        }
        if let Piece::Onset(ls) = p {
            host = ls.last().copied();
        }
    }
    s
}

/// Rule applications over an analyzed word after tier dominance.
pub(crate) fn build_lattice(rules: &RuleSet, a: &Analysis) -> Lattice {
    let n = a.len();
    let mut apps: Vec<(usize, usize, usize)> = Vec::new();
    for s in 0..=n {
        for (ri, rule) in rules.rules.iter().enumerate() {
            if rule.tier == Tier::Lexicon || rule.position.is_pinyin() {
                continue;
            }
            if let Some(e) = match_rule(rules, a, ri, s) {
                apps.push((s, e, ri));
            }
        }
    }
    // a higher tier match suppresses lower tier matches inside its span
    let tier = |ri: usize| rules.rules[ri].tier;
    let kept: Vec<(usize, usize, usize)> = apps
        .iter()
        .copied()
        .filter(|&(s, e, ri)| {
            !apps.iter().any(|&(s2, e2, r2)| {
                tier(r2) < tier(ri)
                    && if s == e {
                        s2 == s && e2 == s
                    } else {
                        s2 < e2 && s2 <= s && e <= e2
                    }
            })
        })
        .collect();

    let tone_weight = rules.param("tone_variant_weight", 1.0);
    let mut edges = Vec::new();
    for (s, e, ri) in kept {
        let rule = &rules.rules[ri];
        for (oi, out) in rule.outputs.iter().enumerate() {
            let step = TraceStep {
                rule_id: rule.id.clone(),
                output: oi,
                tone_variant: false,
                weight: out.weight,
                source: s..e,
                fragment: out.text.clone(),
            };
            if let Some(var) = tone_variant(&out.pieces) {
                edges.push(Edge {
                    from: s,
                    to: e,
                    medials: out.medials,
                    weight: out.weight + tone_weight,
                    step: TraceStep {
                        tone_variant: true,
                        weight: out.weight + tone_weight,
                        fragment: fragment_text(out.medials, &var),
                        ..step.clone()
                    },
                    pieces: var,
                });
            }
            edges.push(Edge {
                from: s,
                to: e,
                medials: out.medials,
                pieces: out.pieces.clone(),
                weight: out.weight,
                step,
            });
        }
    }
    Lattice::new(n, edges)
}

/// Analyzes `word` with the pack's inventory.
pub fn analyze(word: &str, rules: &RuleSet) -> Result<Analysis, EngineError> {
    Ok(latin::analyze(word, &rules.inventory)?)
}

/// Top-k Burmese spellings for a Latin-spelled word.
pub fn transliterate(word: &str, rules: &RuleSet, k: usize) -> Result<Vec<Candidate>, EngineError> {
    let analysis = analyze(word, rules)?;
    let mut result = Vec::new();
    if k == 0 {
        return Ok(result);
    }
    if let Some(entry) = rules.lexicon.get(&analysis.word) {
        result.push(Candidate::lexicon(&analysis.word, &entry.target));
    }
    let lattice = build_lattice(rules, &analysis);
    let found = lattice.k_best(k, |path| {
        lattice
            .assemble(path, &analysis.word, &analysis.offsets)
            .map(|c| c.target)
    });
    let mut ranked: Vec<Candidate> = found
        .into_iter()
        .filter_map(|(_, path)| lattice.assemble(&path, &analysis.word, &analysis.offsets))
        .collect();
    ranked.sort_by(rank_order);
    if ranked.is_empty() && result.is_empty() {
        let far = lattice.reach().min(analysis.len().saturating_sub(1));
        let chunk = analysis.chunks[analysis.chunk_of[far]].to_string();
        return Err(EngineError::NoRuleApplicable {
            word: analysis.word.clone(),
            chunk,
        });
    }
    for c in ranked {
        if result.len() >= k {
            break;
        }
        if !result.iter().any(|r: &Candidate| r.target == c.target) {
            result.push(c);
        }
    }
    result.truncate(k);
    Ok(result)
}
