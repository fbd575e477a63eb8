#![allow(dead_code)]

use myanmar_translit::script::{BurmeseSyllable, Letter, Medials, ScriptModel};
use rand::seq::SliceRandom;
use rand::Rng;

/// A random syllable that passes validation, built from the table's own inventory.
pub fn random_syllable(rng: &mut impl Rng) -> BurmeseSyllable {
    let script = ScriptModel::standard();
    let consonants: Vec<char> = ('\u{1000}'..='\u{1021}').filter(|c| script.is_consonant(*c)).collect();
    let rhymes: Vec<_> = script.rhymes().collect();
    let killers = script.killer_inventory();
    loop {
        let base = *consonants.choose(rng).unwrap();
        let medials = if rng.gen_bool(0.3) { Medials::from_bits(rng.gen_range(1..16)) } else { Medials::empty() };
        let rhyme = *rhymes.choose(rng).unwrap();
        let n_killers = [0, 0, 0, 1, 2][rng.gen_range(0..5)];
        let tail: Vec<Letter> = (0..n_killers).map(|_| *killers.choose(rng).unwrap()).collect();
        let syl = BurmeseSyllable::new(Letter::with_medials(base, medials), rhyme).with_killers(tail);
        if script.validate(&syl).is_ok() {
            return syl;
        }
    }
}

pub fn random_word(rng: &mut impl Rng, max_len: usize) -> String {
    let n = rng.gen_range(1..=max_len);
    (0..n).map(|_| rng.gen_range(b'A'..=b'Z') as char).collect()
}
