//! Words in the Coxeter generators and reduced-word machinery.
//!
//! A [`Word`] is a sequence of generator letters of a fixed group `S_n` of
//! some kind, evaluated left to right: the word `s_{i_1} s_{i_2} .. s_{i_k}`
//! denotes the product in that order, so evaluation starts at the identity
//! and multiplies each letter on the right. A word is *reduced* when its
//! length equals the Coxeter length of the element it evaluates to.
//!
//! Text form: letters are concatenated directly when every letter is a
//! single digit (`"2132"`, `"010"`), and dot-separated when any letter is
//! `>= 10` or the type D letter `1'` appears (`"3.4.3.1'"`). `0` and `1'`
//! are literal tokens.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::element::{
    generators, inversion_count, left_action, length_table, right_action, GroupElement, Kind,
    Letter, LengthTable,
};

/// Errors raised by word construction and reduced-word enumeration.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    /// A letter that is not a generator of the stated group.
    #[error("letter {letter} is out of range for S_{n} of kind {kind}")]
    LetterOutOfRange { kind: Kind, n: u8, letter: Letter },
    /// The element's length exceeds the enumeration cap.
    #[error("element of length {length} is past the word enumeration cap {cap}")]
    TooLong { length: u32, cap: u32 },
    /// The operation only applies to type A words.
    #[error("operation requires a type A word, got kind {0}")]
    WrongKind(Kind),
    /// Malformed textual input.
    #[error("cannot parse word text: {0}")]
    Parse(String),
}

/// Default cap on the length of elements whose full reduced-word set is
/// enumerated; `|R(w)|` grows roughly factorially with the length.
pub const DEFAULT_WORD_CAP: u32 = 12;

/// A word in the generators of a fixed group.
///
/// The derived order compares `(kind, n, letters)` lexicographically with the
/// letter order `0 < 1' < 1 < 2 < ..`, which is the order behind
/// "lexicographically least reduced word".
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    kind: Kind,
    n: u8,
    letters: Vec<Letter>,
}

impl Word {
    /// Builds a word over `S_n` of the given kind, validating every letter.
    pub fn new(kind: Kind, n: u8, letters: Vec<Letter>) -> Result<Self, WordError> {
        for &letter in &letters {
            if !letter.is_legal(kind, n) {
                return Err(WordError::LetterOutOfRange { kind, n, letter });
            }
        }
        Ok(Word { kind, n, letters })
    }

    /// The word's kind.
    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// The window size of the ambient group.
    pub fn n(&self) -> u8 {
        self.n
    }

    /// The letter sequence.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Whether the word is empty.
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Multiplies the letters left to right, starting from the identity.
    pub fn evaluate(&self) -> GroupElement {
        let mut window: Vec<i8> = (1..=self.n as i8).collect();
        for &g in &self.letters {
            window = right_action(&window, g);
        }
        GroupElement::from_window_unchecked(self.kind, window)
    }

    /// Whether the word is reduced: its length equals the length of its
    /// evaluation.
    pub fn is_reduced(&self) -> bool {
        self.evaluate().length() as usize == self.letters.len()
    }

    /// Whether no letter repeats.
    pub fn has_distinct_letters(&self) -> bool {
        let mut seen = HashSet::new();
        self.letters.iter().all(|&g| seen.insert(g))
    }

    /// The shifted word `W^(M)`: every letter `i` becomes `i + m`. Only
    /// defined for type A words; the ambient `n` grows as needed.
    pub fn shift(&self, m: u8) -> Result<Word, WordError> {
        if self.kind != Kind::A {
            return Err(WordError::WrongKind(self.kind));
        }
        let mut letters = Vec::with_capacity(self.letters.len());
        let mut n = self.n;
        for &g in &self.letters {
            let Letter::Adjacent(i) = g else {
                return Err(WordError::LetterOutOfRange { kind: self.kind, n: self.n, letter: g });
            };
            let shifted = i + m;
            letters.push(Letter::Adjacent(shifted));
            n = n.max(shifted + 1);
        }
        Word::new(Kind::A, n, letters)
    }

    /// Whether some consecutive factor of this word equals a shift `P^(M)`
    /// (`M >= 0`) of one of the given pattern words. Letters `0` and `1'`
    /// only match themselves (shift zero).
    pub fn contains_shifted_factor(&self, patterns: &[Word]) -> bool {
        patterns.iter().any(|p| self.contains_shift_of(p))
    }

    fn contains_shift_of(&self, pattern: &Word) -> bool {
        let p = &pattern.letters;
        if p.is_empty() {
            return true;
        }
        if p.len() > self.letters.len() {
            return false;
        }
        'starts: for start in 0..=self.letters.len() - p.len() {
            let fac = &self.letters[start..start + p.len()];
            // The shift M is pinned by the first adjacent-letter position.
            let mut m: Option<u8> = None;
            for (f, q) in fac.iter().zip(p) {
                match (f, q) {
                    (Letter::Adjacent(fi), Letter::Adjacent(qi)) => {
                        if fi < qi {
                            continue 'starts;
                        }
                        let offset = fi - qi;
                        match m {
                            None => m = Some(offset),
                            Some(m) if m == offset => {}
                            Some(_) => continue 'starts,
                        }
                    }
                    _ => {
                        if f != q {
                            continue 'starts;
                        }
                    }
                }
            }
            return true;
        }
        false
    }

    /// Parses word text. With `n = None` the smallest group containing the
    /// letters is used.
    pub fn parse(kind: Kind, n: Option<u8>, text: &str) -> Result<Word, WordError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(WordError::Parse("empty word text".into()));
        }
        let mut letters = Vec::new();
        if text.contains('.') {
            for tok in text.split('.') {
                letters.push(parse_letter_token(tok)?);
            }
        } else {
            let mut chars = text.chars().peekable();
            while let Some(c) = chars.next() {
                let d = c
                    .to_digit(10)
                    .ok_or_else(|| WordError::Parse(format!("unexpected {c:?} in {text:?}")))?;
                if matches!(chars.peek(), Some('\'') | Some('\u{2032}')) {
                    chars.next();
                    if d != 1 {
                        return Err(WordError::Parse(format!("letter {d}' in {text:?}")));
                    }
                    letters.push(Letter::OnePrime);
                } else if d == 0 {
                    letters.push(Letter::Zero);
                } else {
                    letters.push(Letter::Adjacent(d as u8));
                }
            }
        }
        let min_n = letters
            .iter()
            .map(|g| match g {
                Letter::Zero => 1,
                Letter::OnePrime => 2,
                Letter::Adjacent(i) => i + 1,
            })
            .max()
            .unwrap_or(1);
        let n = n.unwrap_or(min_n);
        Word::new(kind, n, letters)
    }
}

fn parse_letter_token(tok: &str) -> Result<Letter, WordError> {
    let tok = tok.trim();
    match tok {
        "0" => Ok(Letter::Zero),
        "1'" | "1\u{2032}" => Ok(Letter::OnePrime),
        _ => {
            let i: u8 = tok
                .parse()
                .map_err(|_| WordError::Parse(format!("letter token {tok:?}")))?;
            if i == 0 {
                Ok(Letter::Zero)
            } else {
                Ok(Letter::Adjacent(i))
            }
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dotted = self.letters.iter().any(|g| match g {
            Letter::OnePrime => true,
            Letter::Adjacent(i) => *i >= 10,
            Letter::Zero => false,
        });
        for (i, g) in self.letters.iter().enumerate() {
            if dotted && i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Length of a window, using the shared type B/D table when needed.
fn window_length(table: &Option<Arc<LengthTable>>, window: &[i8]) -> u32 {
    match table {
        None => inversion_count(window),
        Some(t) => t.lengths[window],
    }
}

fn table_for(kind: Kind, n: u8) -> Option<Arc<LengthTable>> {
    match kind {
        Kind::A => None,
        Kind::B | Kind::D => {
            Some(length_table(kind, n).expect("group too large for reduced-word machinery"))
        }
    }
}

/// The lexicographically least reduced word of `w`, built by repeatedly
/// taking the smallest left descent.
pub fn first_reduced_word(w: &GroupElement) -> Word {
    let (kind, n) = (w.kind(), w.n());
    let table = table_for(kind, n);
    let gens = generators(kind, n);
    let mut cur = w.window().to_vec();
    let mut cur_len = window_length(&table, &cur);
    let mut letters = Vec::with_capacity(cur_len as usize);
    while cur_len > 0 {
        let (g, next) = gens
            .iter()
            .find_map(|&g| {
                let cand = left_action(&cur, g);
                (window_length(&table, &cand) < cur_len).then_some((g, cand))
            })
            .expect("a non-identity element always has a left descent");
        letters.push(g);
        cur = next;
        cur_len -= 1;
    }
    Word { kind, n, letters }
}

/// Every reduced word of `w`, sorted lexicographically.
///
/// The default cap on `w`'s length is [`DEFAULT_WORD_CAP`]; pass `Some(cap)`
/// to override it.
pub fn all_reduced_words(w: &GroupElement, cap: Option<u32>) -> Result<Vec<Word>, WordError> {
    let cap = cap.unwrap_or(DEFAULT_WORD_CAP);
    let (kind, n) = (w.kind(), w.n());
    let table = table_for(kind, n);
    let length = window_length(&table, w.window());
    if length > cap {
        return Err(WordError::TooLong { length, cap });
    }
    let gens = generators(kind, n);
    let mut words = Vec::new();
    // Peel right descents: a word ends in g exactly when g descends w.
    struct Walk<'a> {
        kind: Kind,
        n: u8,
        table: &'a Option<Arc<LengthTable>>,
        gens: &'a [Letter],
    }
    impl Walk<'_> {
        fn rec(&self, cur: &[i8], cur_len: u32, tail_rev: &mut Vec<Letter>, words: &mut Vec<Word>) {
            if cur_len == 0 {
                let letters: Vec<Letter> = tail_rev.iter().rev().copied().collect();
                words.push(Word { kind: self.kind, n: self.n, letters });
                return;
            }
            for &g in self.gens {
                let cand = right_action(cur, g);
                if window_length(self.table, &cand) < cur_len {
                    tail_rev.push(g);
                    self.rec(&cand, cur_len - 1, tail_rev, words);
                    tail_rev.pop();
                }
            }
        }
    }
    let mut tail_rev: Vec<Letter> = Vec::with_capacity(length as usize);
    Walk { kind, n, table: &table, gens: &gens }.rec(w.window(), length, &mut tail_rev, &mut words);
    words.sort();
    Ok(words)
}

/// Splits a type A element into blocks over disjoint letter ranges.
///
/// Looks for `m` with `w = g * h` or `w = h * g` where `g` only uses letters
/// `1..=m` and `h` only letters `m+1..=n-1`. On success returns `(m, u, v)`
/// with `u` in `S_{m+1}` the low block and `v` in `S_{n-m}` the high block
/// shifted down. Candidates are tried with `m` descending, the `g * h` order
/// first, and the first hit wins.
pub fn decompose(w: &GroupElement) -> Option<(u8, GroupElement, GroupElement)> {
    assert_eq!(w.kind(), Kind::A, "decompose applies to type A elements");
    let n = w.n();
    if n < 3 {
        return None;
    }
    for m in (1..=n - 2).rev() {
        for low_first in [true, false] {
            if let Some(pair) = try_split(w, m, low_first) {
                return Some((m, pair.0, pair.1));
            }
        }
    }
    None
}

/// Tries the split at `m`; `low_first` picks the order `w = g * h` (low
/// letters in the left factor) over `w = h * g`.
fn try_split(w: &GroupElement, m: u8, low_first: bool) -> Option<(GroupElement, GroupElement)> {
    let n = w.n() as usize;
    let m = m as usize;
    // Letters of the right factor, as 1-based adjacent indices.
    let right_letters = if low_first { m + 1..n } else { 1..m + 1 };
    // Peel right descents over the right factor's letters; what remains is
    // the minimal coset representative.
    let mut rep = w.window().to_vec();
    loop {
        let descent = right_letters.clone().find(|&i| rep[i - 1] > rep[i]);
        match descent {
            Some(i) => rep.swap(i - 1, i),
            None => break,
        }
    }
    // The representative must itself be supported on the left factor's
    // letters, i.e. fix every position the other block owns.
    let fixed = if low_first { m + 1..n } else { 0..m };
    if !fixed.clone().all(|j| rep[j] == j as i8 + 1) {
        return None;
    }
    let rep = GroupElement::from_window_unchecked(Kind::A, rep);
    // w = rep * peeled, so the peeled factor is rep^{-1} * w.
    let peeled = rep.inverse().compose(w);
    let (low, high) = if low_first { (&rep, &peeled) } else { (&peeled, &rep) };
    let u = GroupElement::from_window_unchecked(Kind::A, low.window()[..=m].to_vec());
    let v_window: Vec<i8> = high.window()[m..].iter().map(|&e| e - m as i8).collect();
    let v = GroupElement::from_window_unchecked(Kind::A, v_window);
    Some((u, v))
}
