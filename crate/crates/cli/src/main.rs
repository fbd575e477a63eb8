use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use myanmar_translit::corpus::{self, CorpusEntry};
use myanmar_translit::engine::{self, format_score, Candidate, EngineError};
use myanmar_translit::pinyin::{self, PinyinError, PinyinMode};
use myanmar_translit::rules::RuleSet;

const USAGE: u8 = 1;
const DATA: u8 = 2;
const NO_RULE: u8 = 3;

/// Latin and Pinyin to Burmese transliteration.
#[derive(Parser)]
#[command(name = "mytranslit", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    mode: Mode,
}

#[derive(Args)]
struct Common {
    /// Number of candidates per word
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    /// Rule pack file (the built-in pack when absent)
    #[arg(long, global = true, env = "MYTRANSLIT_PACK")]
    pack: Option<PathBuf>,
    /// Lexicon TSV (the built-in lexicon when absent)
    #[arg(long, global = true, env = "MYTRANSLIT_LEXICON")]
    lexicon: Option<PathBuf>,
    /// Disable lexicon lookup
    #[arg(long, global = true)]
    no_lexicon: bool,
    /// Tab-separated output without headers
    #[arg(long, global = true)]
    tsv: bool,
}

#[derive(Subcommand)]
enum Mode {
    /// Transliterate English words; `-` reads one word per line from stdin
    En2my {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Transliterate Pinyin; `-` reads one item per line from stdin
    Py2my {
        #[arg(required = true)]
        text: Vec<String>,
        /// Map each syllable independently instead of as one word
        #[arg(long)]
        per_syllable: bool,
    },
    /// Score the rules against a gold corpus
    Eval {
        /// Corpus TSV (the built-in corpus when absent)
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Show the alignment and rule trace of each candidate
    Explain {
        word: String,
        /// Read the word as Pinyin
        #[arg(long)]
        pinyin: bool,
    },
}

enum Failure {
    NoRule(String),
    BadInput(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let rules = match load_rules(&cli.common) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("mytranslit: {msg}");
            return ExitCode::from(DATA);
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = run(&cli, &rules, &mut out);
    if out.flush().is_err() {
        return ExitCode::from(DATA);
    }
    code
}

fn load_rules(c: &Common) -> Result<RuleSet, String> {
    let mut rules = match &c.pack {
        Some(p) => RuleSet::load(p).map_err(|e| e.to_string())?,
        None => RuleSet::standard().without_lexicon(),
    };
    if !c.no_lexicon {
        match &c.lexicon {
            Some(p) => rules.load_lexicon(p).map_err(|e| e.to_string())?,
            None => rules.add_lexicon_tsv(myanmar_translit::rules::STANDARD_LEXICON).map_err(|e| e.to_string())?,
        }
    }
    Ok(rules)
}

fn run(cli: &Cli, rules: &RuleSet, out: &mut impl Write) -> ExitCode {
    let k = cli.common.k as usize;
    let tsv = cli.common.tsv;
    match &cli.mode {
        Mode::En2my { words } => batch(words, tsv, out, |w| {
            engine::transliterate(w, rules, k).map_err(|e| match e {
                EngineError::NoRuleApplicable { .. } => Failure::NoRule(e.to_string()),
                EngineError::Latin(e) => Failure::BadInput(e.to_string()),
            })
        }),
        Mode::Py2my { text, per_syllable } => {
            let mode = if *per_syllable { PinyinMode::PerSyllable } else { PinyinMode::Word };
            batch(text, tsv, out, |t| py(t, mode, rules, k))
        }
        Mode::Eval { corpus } => {
            let entries: Result<Vec<CorpusEntry>, _> = match corpus {
                Some(p) => corpus::load_corpus(p),
                None => corpus::parse_corpus(corpus::STANDARD_CORPUS),
            };
            let entries = match entries {
                Ok(e) => e,
                Err(e) => {
                    eprintln!("mytranslit: {e}");
                    return ExitCode::from(DATA);
                }
            };
            let report = corpus::evaluate_parallel(&entries, rules, k);
            let text = if tsv { report.to_tsv() } else { report.to_string() };
            let _ = out.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Mode::Explain { word, pinyin } => {
            let result = if *pinyin {
                py(word, PinyinMode::Word, rules, k)
            } else {
                engine::transliterate(word, rules, k).map_err(|e| match e {
                    EngineError::NoRuleApplicable { .. } => Failure::NoRule(e.to_string()),
                    EngineError::Latin(e) => Failure::BadInput(e.to_string()),
                })
            };
            match result {
                Ok(cands) => {
                    for (i, c) in cands.iter().enumerate() {
                        let _ = writeln!(out, "{}\t{}\t{}", i + 1, c.target, format_score(c.score));
                        let _ = out.write_all(engine::explain(c).as_bytes());
                        if i + 1 < cands.len() {
                            let _ = writeln!(out);
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(f) => report_failure(word, &f),
            }
        }
    }
}

fn py(text: &str, mode: PinyinMode, rules: &RuleSet, k: usize) -> Result<Vec<Candidate>, Failure> {
    let syllables = pinyin::parse_pinyin_with(text, rules).map_err(|e| Failure::BadInput(e.to_string()))?;
    pinyin::pinyin_to_burmese(&syllables, mode, rules, k).map_err(|e| match e {
        PinyinError::NoMapping { .. } => Failure::NoRule(e.to_string()),
        PinyinError::InvalidPinyin(_) => Failure::BadInput(e.to_string()),
    })
}

fn report_failure(word: &str, f: &Failure) -> ExitCode {
    match f {
        Failure::NoRule(msg) => {
            eprintln!("{word}\t{msg}");
            ExitCode::from(NO_RULE)
        }
        Failure::BadInput(msg) => {
            eprintln!("{word}\t{msg}");
            ExitCode::from(USAGE)
        }
    }
}

/// Expands `-` into stdin lines.
fn inputs(args: &[String]) -> Vec<String> {
    let mut items = Vec::new();
    for a in args {
        if a == "-" {
            items.extend(io::stdin().lock().lines().map_while(Result::ok).map(|l| l.trim().to_string()).filter(|l| !l.is_empty()));
        } else {
            items.push(a.clone());
        }
    }
    items
}

fn batch(
    args: &[String],
    tsv: bool,
    out: &mut impl Write,
    mut convert: impl FnMut(&str) -> Result<Vec<Candidate>, Failure>,
) -> ExitCode {
    let items = inputs(args);
    let mut code = ExitCode::SUCCESS;
    for item in &items {
        match convert(item) {
            Ok(cands) => {
                if items.len() > 1 && !tsv {
                    let _ = writeln!(out, "{item}");
                }
                for (i, c) in cands.iter().enumerate() {
                    let score = format_score(c.score);
                    let _ = if items.len() > 1 && tsv {
                        writeln!(out, "{item}\t{}\t{}\t{score}", i + 1, c.target)
                    } else {
                        writeln!(out, "{}\t{}\t{score}", i + 1, c.target)
                    };
                }
            }
            Err(f) => {
                let failed = report_failure(item, &f);
                if code == ExitCode::SUCCESS {
                    code = failed;
                }
            }
        }
    }
    code
}
