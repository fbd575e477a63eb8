//! Rule-driven transliteration of Latin spellings and Pinyin into Burmese.

pub mod corpus;
pub mod engine;
pub mod latin;
pub mod pinyin;
pub mod rules;
pub mod script;
