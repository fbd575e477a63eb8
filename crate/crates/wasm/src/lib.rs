//! Browser bindings. Each export returns JSON or plain text; errors surface as thrown strings.

use myanmar_translit::engine::{self, Candidate};
use myanmar_translit::pinyin::{self, PinyinMode};
use myanmar_translit::rules::RuleSet;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn to_json(cands: &[Candidate]) -> String {
    let rows: Vec<_> = cands
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json!({
                "rank": i + 1,
                "target": c.target,
                "score": c.score,
                "lexicon": c.from_lexicon,
                "rules": c.rule_ids(),
            })
        })
        .collect();
    serde_json::Value::Array(rows).to_string()
}

pub fn transliterate_json(word: &str, k: usize) -> Result<String, String> {
    engine::transliterate(word, RuleSet::standard(), k.max(1))
        .map(|c| to_json(&c))
        .map_err(|e| e.to_string())
}

pub fn pinyin_json(text: &str, k: usize) -> Result<String, String> {
    let rules = RuleSet::standard();
    pinyin::parse_pinyin_with(text, rules)
        .and_then(|s| pinyin::pinyin_to_burmese(&s, PinyinMode::Word, rules, k.max(1)))
        .map(|c| to_json(&c))
        .map_err(|e| e.to_string())
}

pub fn explain_text(word: &str, k: usize) -> Result<String, String> {
    let cands = engine::transliterate(word, RuleSet::standard(), k.max(1)).map_err(|e| e.to_string())?;
    Ok(cands
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{}\t{}\t{}\n{}", i + 1, c.target, engine::format_score(c.score), engine::explain(c)))
        .collect::<Vec<_>>()
        .join("\n"))
}

/// JSON array of `{rank, target, score, lexicon, rules}` for an English word.
#[wasm_bindgen]
pub fn transliterate(word: &str, k: usize) -> Result<String, JsValue> {
    transliterate_json(word, k).map_err(|e| JsValue::from_str(&e))
}

/// Alignment and rule trace for each candidate.
#[wasm_bindgen]
pub fn explain(word: &str, k: usize) -> Result<String, JsValue> {
    explain_text(word, k).map_err(|e| JsValue::from_str(&e))
}

/// Same shape as `transliterate`, for Pinyin input.
#[wasm_bindgen]
pub fn pinyin(text: &str, k: usize) -> Result<String, JsValue> {
    pinyin_json(text, k).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let v: serde_json::Value = serde_json::from_str(&transliterate_json("HOTEL", 3).unwrap()).unwrap();
        assert_eq!(v[0]["target"], "ဟိုတယ်");
        assert_eq!(v[0]["rank"], 1);
        assert_eq!(v.as_array().unwrap().len(), 3);
    }

    #[test]
    fn pinyin_and_explain() {
        assert!(pinyin_json("yunnan", 3).unwrap().contains("ယုနန်"));
        assert!(explain_text("WEB", 2).unwrap().contains("-- rules"));
        assert!(transliterate_json("W3B", 1).is_err());
        assert!(pinyin_json("xq", 1).is_err());
    }
}
