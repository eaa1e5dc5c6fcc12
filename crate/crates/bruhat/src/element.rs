//! One-line group elements of the finite Coxeter groups of types A, B and D.
//!
//! `S_n` (type A) is the symmetric group on `[n] = {1, .., n}`. `S_n^B` (type
//! B) is the hyperoctahedral group of signed permutations: bijections `w` of
//! `{-n, .., -1, 1, .., n}` satisfying `w(-i) = -w(i)`. `S_n^D` (type D) is
//! the subgroup of `S_n^B` whose elements have an even number of negative
//! window entries. The window `(w(1), .., w(n))` determines the whole map via
//! the sign rule, so an element is stored as its window.
//!
//! Composition is right-to-left: `(uv)(x) = u(v(x))`. Consequently a
//! generator acts on *values* when multiplied on the left and on *positions*
//! when multiplied on the right.
//!
//! Lengths in types B and D are looked up in a per-group table built once by
//! breadth-first generation from the identity; type A lengths are inversion
//! counts. Groups past [`MAX_ENUMERATED_GROUP`] elements are out of scope for
//! the table and its dependents.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Which of the three families an element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// Symmetric group `S_n`.
    A,
    /// Hyperoctahedral group `S_n^B` of signed permutations.
    B,
    /// Even-signed subgroup `S_n^D`.
    D,
}

impl Kind {
    /// All three kinds, in the conventional order.
    pub const ALL: [Kind; 3] = [Kind::A, Kind::B, Kind::D];
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::A => "A",
            Kind::B => "B",
            Kind::D => "D",
        })
    }
}

impl FromStr for Kind {
    type Err = ElementError;

    fn from_str(s: &str) -> Result<Self, ElementError> {
        match s {
            "A" | "a" => Ok(Kind::A),
            "B" | "b" => Ok(Kind::B),
            "D" | "d" => Ok(Kind::D),
            other => Err(ElementError::Parse(format!("unknown kind {other:?}"))),
        }
    }
}

/// A Coxeter generator named in one-line conventions.
///
/// `Adjacent(i)` is `s_i` for `1 <= i <= n-1`, the transposition of the
/// values `i` and `i+1` (all kinds). `Zero` is `s_0`, the sign change of the
/// value `1` (type B only). `OnePrime` is `s_1' = s_0 s_1 s_0`, sending the
/// values `1 -> -2` and `2 -> -1` (type D only).
///
/// The derived order `Zero < OnePrime < Adjacent(1) < Adjacent(2) < ..` is
/// the letter order used for lexicographic comparisons of words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `s_0`, type B.
    Zero,
    /// `s_1'`, type D.
    OnePrime,
    /// `s_i`, any kind.
    Adjacent(u8),
}

impl Letter {
    /// Whether this letter names a generator of `S_n` of the given kind.
    pub fn is_legal(self, kind: Kind, n: u8) -> bool {
        match self {
            Letter::Zero => kind == Kind::B && n >= 1,
            Letter::OnePrime => kind == Kind::D && n >= 2,
            Letter::Adjacent(i) => i >= 1 && i < n,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Zero => f.write_str("0"),
            Letter::OnePrime => f.write_str("1'"),
            Letter::Adjacent(i) => write!(f, "{i}"),
        }
    }
}

/// The generating set of `S_n` of the given kind, in letter order.
pub fn generators(kind: Kind, n: u8) -> Vec<Letter> {
    let mut gens = Vec::new();
    if Letter::Zero.is_legal(kind, n) {
        gens.push(Letter::Zero);
    }
    if Letter::OnePrime.is_legal(kind, n) {
        gens.push(Letter::OnePrime);
    }
    gens.extend((1..n).map(Letter::Adjacent));
    gens
}

/// Which side a generator is multiplied on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `s * w`: acts on values.
    Left,
    /// `w * s`: acts on positions.
    Right,
}

/// Errors raised by element construction and element-level queries.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElementError {
    /// The window magnitudes are not a permutation of `1..=n`.
    #[error("window is not a signed bijection: {0}")]
    NotABijection(String),
    /// A negative entry appeared in a type A window.
    #[error("negative entries are not allowed in type A windows")]
    SignNotAllowed,
    /// A type D window with an odd number of negative entries.
    #[error("type D windows need an even number of negative entries")]
    OddNegatives,
    /// The letter does not name a generator of this group.
    #[error("letter {letter} is not a generator of S_{n} of kind {kind}")]
    IllegalLetter { kind: Kind, n: u8, letter: Letter },
    /// The operation is only defined for another kind.
    #[error("operation requires kind {expected}, element has kind {got}")]
    WrongKind { expected: Kind, got: Kind },
    /// The group is too large to enumerate.
    #[error("group of kind {kind} with n = {n} has {order} elements, past the enumeration bound {bound}")]
    GroupTooLarge { kind: Kind, n: u8, order: u64, bound: u64 },
    /// Malformed textual input.
    #[error("cannot parse {0}")]
    Parse(String),
}

/// Largest group (element count) that the length table and the exhaustive
/// enumeration helpers are willing to generate.
pub const MAX_ENUMERATED_GROUP: u64 = 2_000_000;

/// `|S_n|` of the given kind, saturating at `u64::MAX`.
pub fn group_order(kind: Kind, n: u8) -> u64 {
    let mut order: u64 = 1;
    for i in 1..=n as u64 {
        order = order.saturating_mul(i);
    }
    match kind {
        Kind::A => order,
        Kind::B => (0..n).fold(order, |o, _| o.saturating_mul(2)),
        Kind::D => (1..n).fold(order, |o, _| o.saturating_mul(2)),
    }
}

/// A group element in one-line (window) notation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    kind: Kind,
    window: Vec<i8>,
}

impl GroupElement {
    /// Builds an element from its window, validating the kind's sign rules.
    pub fn from_one_line(kind: Kind, window: &[i8]) -> Result<Self, ElementError> {
        let n = window.len();
        if n == 0 || n > 127 {
            return Err(ElementError::NotABijection(format!(
                "window length {n} out of range 1..=127"
            )));
        }
        let mut seen = vec![false; n];
        for &e in window {
            let a = e.unsigned_abs() as usize;
            if a == 0 || a > n || seen[a - 1] {
                return Err(ElementError::NotABijection(format!(
                    "magnitudes of {window:?} are not a permutation of 1..={n}"
                )));
            }
            seen[a - 1] = true;
        }
        match kind {
            Kind::A => {
                if window.iter().any(|&e| e < 0) {
                    return Err(ElementError::SignNotAllowed);
                }
            }
            Kind::B => {}
            Kind::D => {
                if window.iter().filter(|&&e| e < 0).count() % 2 == 1 {
                    return Err(ElementError::OddNegatives);
                }
            }
        }
        Ok(GroupElement { kind, window: window.to_vec() })
    }

    /// The identity of `S_n` of the given kind.
    pub fn identity(kind: Kind, n: u8) -> Self {
        GroupElement { kind, window: (1..=n as i8).collect() }
    }

    /// The longest element: `n .. 2 1` (A), `-1 -2 .. -n` (B), and in type D
    /// `-1 -2 .. -n` for even `n` but `1 -2 .. -n` for odd `n`.
    pub fn longest_element(kind: Kind, n: u8) -> Self {
        let window: Vec<i8> = match kind {
            Kind::A => (1..=n as i8).rev().collect(),
            Kind::B => (1..=n as i8).map(|i| -i).collect(),
            Kind::D => (1..=n as i8)
                .map(|i| if n % 2 == 1 && i == 1 { 1 } else { -i })
                .collect(),
        };
        GroupElement { kind, window }
    }

    /// The element's kind.
    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// The window size `n`.
    pub fn n(&self) -> u8 {
        self.window.len() as u8
    }

    /// The window `(w(1), .., w(n))`.
    pub fn window(&self) -> &[i8] {
        &self.window
    }

    /// The image `w(point)` for `point` in `{-n, .., -1, 1, .., n}`.
    pub fn image(&self, point: i8) -> i8 {
        let a = point.unsigned_abs() as usize;
        debug_assert!(a >= 1 && a <= self.window.len());
        let v = self.window[a - 1];
        if point < 0 {
            -v
        } else {
            v
        }
    }

    /// Whether this is the identity.
    pub fn is_identity(&self) -> bool {
        self.window.iter().enumerate().all(|(i, &e)| e == i as i8 + 1)
    }

    /// The product `self * other`, composing as maps: `(uv)(x) = u(v(x))`.
    ///
    /// Panics if the two elements live in different groups.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.kind, other.kind, "compose: mixed kinds");
        assert_eq!(self.window.len(), other.window.len(), "compose: mixed n");
        let window = other.window.iter().map(|&v| self.image(v)).collect();
        GroupElement { kind: self.kind, window }
    }

    /// The group inverse.
    pub fn inverse(&self) -> GroupElement {
        let n = self.window.len();
        let mut window = vec![0i8; n];
        for (i, &v) in self.window.iter().enumerate() {
            let a = v.unsigned_abs() as usize;
            window[a - 1] = if v < 0 { -(i as i8 + 1) } else { i as i8 + 1 };
        }
        GroupElement { kind: self.kind, window }
    }

    /// Multiplies a generator on the chosen side.
    pub fn apply_generator(&self, letter: Letter, side: Side) -> Result<GroupElement, ElementError> {
        if !letter.is_legal(self.kind, self.n()) {
            return Err(ElementError::IllegalLetter { kind: self.kind, n: self.n(), letter });
        }
        let window = match side {
            Side::Left => left_action(&self.window, letter),
            Side::Right => right_action(&self.window, letter),
        };
        Ok(GroupElement { kind: self.kind, window })
    }

    /// The inversion set of a type A element: position pairs `(i, j)` with
    /// `i < j` and `w(i) > w(j)`, 1-based, in lexicographic order.
    pub fn inversions(&self) -> Result<Vec<(u8, u8)>, ElementError> {
        if self.kind != Kind::A {
            return Err(ElementError::WrongKind { expected: Kind::A, got: self.kind });
        }
        let n = self.window.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.window[i] > self.window[j] {
                    pairs.push((i as u8 + 1, j as u8 + 1));
                }
            }
        }
        Ok(pairs)
    }

    /// The Coxeter length: least number of generators multiplying to `self`.
    ///
    /// Type A counts inversions directly. Types B and D consult the cached
    /// breadth-first table for the whole group; such calls panic if the group
    /// is past [`MAX_ENUMERATED_GROUP`] elements.
    pub fn length(&self) -> u32 {
        match self.kind {
            Kind::A => {
                let n = self.window.len();
                let mut count = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if self.window[i] > self.window[j] {
                            count += 1;
                        }
                    }
                }
                count
            }
            Kind::B | Kind::D => {
                let table = length_table(self.kind, self.n())
                    .expect("group too large for the breadth-first length table");
                table.lengths[&self.window]
            }
        }
    }

    /// Parses a window from whitespace- or comma-separated signed integers,
    /// e.g. `"4 2 1 3"` or `"-4,2,1,-3"`.
    pub fn parse(kind: Kind, text: &str) -> Result<Self, ElementError> {
        let mut window = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let e: i8 = tok
                .parse()
                .map_err(|_| ElementError::Parse(format!("window entry {tok:?}")))?;
            window.push(e);
        }
        if window.is_empty() {
            return Err(ElementError::Parse(format!("empty window text {text:?}")));
        }
        GroupElement::from_one_line(kind, &window)
    }
}

impl fmt::Display for GroupElement {
    /// Space-separated window entries; `parse` round-trips this exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.window.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl GroupElement {
    /// Crate-internal constructor for windows already known to be valid.
    pub(crate) fn from_window_unchecked(kind: Kind, window: Vec<i8>) -> GroupElement {
        debug_assert!(GroupElement::from_one_line(kind, &window).is_ok());
        GroupElement { kind, window }
    }
}

/// Inversion count of a type A window.
pub(crate) fn inversion_count(window: &[i8]) -> u32 {
    let mut count = 0;
    for i in 0..window.len() {
        for j in i + 1..window.len() {
            if window[i] > window[j] {
                count += 1;
            }
        }
    }
    count
}

/// Window of `w * s`, the generator acting on positions.
pub(crate) fn right_action(window: &[i8], letter: Letter) -> Vec<i8> {
    let mut w = window.to_vec();
    match letter {
        Letter::Adjacent(i) => w.swap(i as usize - 1, i as usize),
        Letter::Zero => w[0] = -w[0],
        Letter::OnePrime => {
            w.swap(0, 1);
            w[0] = -w[0];
            w[1] = -w[1];
        }
    }
    w
}

/// Window of `s * w`, the generator acting on values.
pub(crate) fn left_action(window: &[i8], letter: Letter) -> Vec<i8> {
    let mut w = window.to_vec();
    match letter {
        Letter::Adjacent(i) => {
            let i = i as i8;
            for e in &mut w {
                let a = e.abs();
                if a == i {
                    *e += e.signum();
                } else if a == i + 1 {
                    *e -= e.signum();
                }
            }
        }
        Letter::Zero => {
            for e in &mut w {
                if e.abs() == 1 {
                    *e = -*e;
                }
            }
        }
        Letter::OnePrime => {
            for e in &mut w {
                let a = e.abs();
                if a == 1 || a == 2 {
                    *e = -e.signum() * (3 - a);
                }
            }
        }
    }
    w
}

/// Per-group length data built by breadth-first generation from the identity.
pub(crate) struct LengthTable {
    pub(crate) lengths: HashMap<Vec<i8>, u32>,
    /// Windows grouped by length, each group sorted lexicographically.
    pub(crate) by_length: Vec<Vec<Vec<i8>>>,
}

type TableRegistry = Mutex<HashMap<(Kind, u8), Arc<LengthTable>>>;

static LENGTH_TABLES: OnceLock<TableRegistry> = OnceLock::new();

/// The shared length table for `S_n` of the given kind, built on first use.
pub(crate) fn length_table(kind: Kind, n: u8) -> Result<Arc<LengthTable>, ElementError> {
    let order = group_order(kind, n);
    if order > MAX_ENUMERATED_GROUP {
        return Err(ElementError::GroupTooLarge { kind, n, order, bound: MAX_ENUMERATED_GROUP });
    }
    let registry = LENGTH_TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut registry = registry.lock().expect("length table registry poisoned");
    if let Some(table) = registry.get(&(kind, n)) {
        return Ok(Arc::clone(table));
    }
    let table = Arc::new(build_length_table(kind, n));
    registry.insert((kind, n), Arc::clone(&table));
    Ok(table)
}

fn build_length_table(kind: Kind, n: u8) -> LengthTable {
    let gens = generators(kind, n);
    let mut lengths = HashMap::new();
    let identity: Vec<i8> = (1..=n as i8).collect();
    lengths.insert(identity.clone(), 0u32);
    let mut by_length = vec![vec![identity]];
    loop {
        let frontier = by_length.last().unwrap();
        let depth = by_length.len() as u32;
        let mut next = Vec::new();
        for w in frontier {
            for &g in &gens {
                let v = right_action(w, g);
                if !lengths.contains_key(&v) {
                    lengths.insert(v.clone(), depth);
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        by_length.push(next);
    }
    LengthTable { lengths, by_length }
}

/// Every element of `S_n` of the given kind, ordered by length and then
/// lexicographically by window within each length.
pub fn group_elements(kind: Kind, n: u8) -> Result<Vec<GroupElement>, ElementError> {
    let table = length_table(kind, n)?;
    let mut out = Vec::with_capacity(group_order(kind, n) as usize);
    for level in &table.by_length {
        out.extend(level.iter().map(|w| GroupElement { kind, window: w.clone() }));
    }
    Ok(out)
}
