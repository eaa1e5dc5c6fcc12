//! Pattern containment for unsigned and signed patterns.
//!
//! A pattern is a window of distinct nonzero magnitudes `1..=k` with free
//! signs. An element `w` contains the pattern when some ascending choice of
//! `k` window positions matches it sign-for-sign with order-isomorphic
//! magnitudes. An unsigned (all-positive) pattern therefore asks for
//! positive, order-isomorphic entries when tested against a signed element.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::element::{group_elements, ElementError, GroupElement, Kind};
use crate::order::{BruhatContext, OrderError};
use crate::util::par_map;

/// Errors raised by pattern queries.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    /// Signed patterns cannot occur in type A elements.
    #[error("signed patterns do not apply to type A elements")]
    KindMismatch,
    /// The window is not a pattern: magnitudes must be `1..=k`, each once.
    #[error("not a pattern window: {0}")]
    NotAPattern(String),
    /// The text is not a pattern window.
    #[error("cannot parse pattern: {0}")]
    Parse(String),
    /// Group enumeration failed (size guard).
    #[error(transparent)]
    Element(#[from] ElementError),
}

/// A signed or unsigned pattern in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternSpec {
    window: Vec<i8>,
}

impl PatternSpec {
    /// Validates that the magnitudes form a permutation of `1..=k`.
    pub fn new(window: Vec<i8>) -> Result<PatternSpec, PatternError> {
        let k = window.len();
        if k == 0 || k > 127 {
            return Err(PatternError::NotAPattern(format!("window of length {k}")));
        }
        let mut seen = vec![false; k];
        for &v in &window {
            let m = v.unsigned_abs() as usize;
            if m == 0 || m > k || seen[m - 1] {
                return Err(PatternError::NotAPattern(format!(
                    "magnitudes must be 1..={k}, each exactly once"
                )));
            }
            seen[m - 1] = true;
        }
        Ok(PatternSpec { window })
    }

    /// Parses either compact digits (`3412`) or separated signed entries
    /// (`3 4 -1 2`).
    pub fn parse(text: &str) -> Result<PatternSpec, PatternError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(PatternError::Parse("empty pattern".into()));
        }
        let window = if text.chars().all(|c| c.is_ascii_digit()) {
            text.chars().map(|c| c.to_digit(10).unwrap() as i8).collect()
        } else {
            text.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<i8>().map_err(|_| PatternError::Parse(format!("bad entry {t}"))))
                .collect::<Result<Vec<i8>, PatternError>>()?
        };
        PatternSpec::new(window)
    }

    /// The pattern window.
    pub fn window(&self) -> &[i8] {
        &self.window
    }

    /// Number of entries.
    pub fn len(&self) -> u8 {
        self.window.len() as u8
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether any entry is negative.
    pub fn is_signed(&self) -> bool {
        self.window.iter().any(|&v| v < 0)
    }
}

impl std::fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.window.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// One occurrence of a pattern: ascending 1-based positions and the window
/// values found there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub positions: Vec<u8>,
    pub values: Vec<i8>,
}

/// All occurrences of `p` in `w`, ordered lexicographically by positions.
pub fn occurrences(w: &GroupElement, p: &PatternSpec) -> Result<Vec<Occurrence>, PatternError> {
    search(w, p, usize::MAX)
}

/// Whether `w` contains `p` (stops at the first occurrence).
pub fn contains(w: &GroupElement, p: &PatternSpec) -> Result<bool, PatternError> {
    Ok(!search(w, p, 1)?.is_empty())
}

/// The number of occurrences of `p` in `w`.
pub fn count_occurrences(w: &GroupElement, p: &PatternSpec) -> Result<u64, PatternError> {
    Ok(search(w, p, usize::MAX)?.len() as u64)
}

/// Occurrences of `p` in `w`, stopping once `limit` of them have been found.
pub(crate) fn occurrences_limited(
    w: &GroupElement,
    p: &PatternSpec,
    limit: usize,
) -> Result<Vec<Occurrence>, PatternError> {
    search(w, p, limit)
}

fn search(w: &GroupElement, p: &PatternSpec, limit: usize) -> Result<Vec<Occurrence>, PatternError> {
    if p.is_signed() && w.kind() == Kind::A {
        return Err(PatternError::KindMismatch);
    }
    let mut out = Vec::new();
    if p.len() > w.n() {
        return Ok(out);
    }
    let mut chosen = Vec::with_capacity(p.len() as usize);
    extend(w.window(), p.window(), 0, &mut chosen, &mut out, limit);
    Ok(out)
}

/// Depth-first search over ascending position choices; returns true when
/// the limit has been reached.
fn extend(
    window: &[i8],
    pat: &[i8],
    start: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Occurrence>,
    limit: usize,
) -> bool {
    let j = chosen.len();
    if j == pat.len() {
        out.push(Occurrence {
            positions: chosen.iter().map(|&i| (i + 1) as u8).collect(),
            values: chosen.iter().map(|&i| window[i]).collect(),
        });
        return out.len() >= limit;
    }
    let remaining = pat.len() - j;
    for i in start..=window.len() - remaining {
        if compatible(window, pat, chosen, i, j) {
            chosen.push(i);
            let done = extend(window, pat, i + 1, chosen, out, limit);
            chosen.pop();
            if done {
                return true;
            }
        }
    }
    false
}

/// Whether window position `i` can play pattern entry `j` given the
/// positions already chosen: the sign must match and the magnitude must sit
/// in the same relative order.
fn compatible(window: &[i8], pat: &[i8], chosen: &[usize], i: usize, j: usize) -> bool {
    let (v, q) = (window[i], pat[j]);
    if (v < 0) != (q < 0) {
        return false;
    }
    let (av, aq) = (v.abs(), q.abs());
    chosen.iter().enumerate().all(|(j2, &i2)| {
        (window[i2].abs() < av) == (pat[j2].abs() < aq)
    })
}

/// Every element of the group avoiding all of `patterns`, in the group
/// enumeration order (length, then window).
pub fn avoidance_class(
    kind: Kind,
    n: u8,
    patterns: &[PatternSpec],
) -> Result<Vec<GroupElement>, PatternError> {
    for p in patterns {
        if p.is_signed() && kind == Kind::A {
            return Err(PatternError::KindMismatch);
        }
    }
    let all = group_elements(kind, n)?;
    let keep = par_map(&all, |w| {
        patterns.iter().all(|p| !contains(w, p).expect("kinds were checked"))
    });
    Ok(all.into_iter().zip(keep).filter_map(|(w, k)| k.then_some(w)).collect())
}

/// Whether the set is downward closed in the Bruhat order: every lower
/// cover of every member is again a member.
pub fn is_order_ideal(
    elements: &[GroupElement],
    ctx: &BruhatContext,
) -> Result<bool, OrderError> {
    let members: HashSet<&[i8]> = elements.iter().map(|e| e.window()).collect();
    for w in elements {
        for u in ctx.lower_covers(w)? {
            if !members.contains(u.window()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
