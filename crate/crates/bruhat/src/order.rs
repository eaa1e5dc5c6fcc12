//! The Bruhat order: comparisons, covers, principal ideals, intervals, and
//! whole-group posets.
//!
//! A [`BruhatContext`] fixes the group (kind and rank) and caches what the
//! order computations need: the reflection set and, for the signed kinds,
//! the principal ideals already visited. Type A comparisons use the O(n^2)
//! rank-matrix dominance criterion; types B and D decide membership in the
//! memoized principal ideal instead. Both routes are cross-checked against
//! each other and against the subword property in the tests.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::element::{generators, group_elements, ElementError, GroupElement, Kind, Side};
use crate::poset::Poset;

/// Errors raised by order computations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    /// The element belongs to a different group than the context.
    #[error("expected an element of {expected} with n = {expected_n}, got {got} with n = {got_n}")]
    KindMismatch { expected: Kind, expected_n: u8, got: Kind, got_n: u8 },
    /// An ideal or poset grew past the configured size guard.
    #[error("ideal or poset with {size} elements is past the size guard {bound}")]
    TooLarge { size: u64, bound: u64 },
    /// Intervals need comparable endpoints.
    #[error("the elements are not comparable")]
    NotComparable,
}

/// Default cap on constructed ideals and posets, in elements.
pub const DEFAULT_MAX_POSET: usize = 2_000_000;

/// Memoized principal ideals, keyed by the window of the top element.
type IdealCache = Mutex<HashMap<Vec<i8>, Arc<HashSet<Vec<i8>>>>>;

/// A fixed group together with the cached data for its Bruhat order.
pub struct BruhatContext {
    kind: Kind,
    n: u8,
    reflections: Vec<GroupElement>,
    max_poset: usize,
    ideals: IdealCache,
}

impl BruhatContext {
    /// A context with the default size guard.
    pub fn new(kind: Kind, n: u8) -> BruhatContext {
        BruhatContext::with_max_poset_size(kind, n, DEFAULT_MAX_POSET)
    }

    /// A context whose constructed ideals and posets may hold at most
    /// `max_poset` elements.
    pub fn with_max_poset_size(kind: Kind, n: u8, max_poset: usize) -> BruhatContext {
        BruhatContext {
            kind,
            n,
            reflections: reflection_set(kind, n),
            max_poset,
            ideals: Mutex::new(HashMap::new()),
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn max_poset_size(&self) -> usize {
        self.max_poset
    }

    /// Every reflection of the group (the conjugates of the generators),
    /// sorted by window.
    pub fn reflections(&self) -> &[GroupElement] {
        &self.reflections
    }

    fn check(&self, w: &GroupElement) -> Result<(), OrderError> {
        if w.kind() != self.kind || w.n() != self.n {
            return Err(OrderError::KindMismatch {
                expected: self.kind,
                expected_n: self.n,
                got: w.kind(),
                got_n: w.n(),
            });
        }
        Ok(())
    }

    /// Whether `u <= w` in the Bruhat order.
    pub fn leq(&self, u: &GroupElement, w: &GroupElement) -> Result<bool, OrderError> {
        self.check(u)?;
        self.check(w)?;
        if u == w {
            return Ok(true);
        }
        if u.length() >= w.length() {
            return Ok(false);
        }
        match self.kind {
            Kind::A => Ok(dominates(u, w)),
            Kind::B | Kind::D => self.leq_via_ideal(u, w),
        }
    }

    /// Whether `u <= w`, decided by membership in the principal ideal of
    /// `w`. Works for every kind; type A callers normally take the faster
    /// dominance route through [`BruhatContext::leq`].
    pub fn leq_via_ideal(&self, u: &GroupElement, w: &GroupElement) -> Result<bool, OrderError> {
        self.check(u)?;
        self.check(w)?;
        Ok(self.ideal_set(w)?.contains(u.window()))
    }

    /// The windows of every element below `w`, inclusive, memoized per `w`.
    ///
    /// Walks down from `w` with every length-decreasing reflection step;
    /// the chain property of the order makes that closure exactly the
    /// principal ideal.
    fn ideal_set(&self, w: &GroupElement) -> Result<Arc<HashSet<Vec<i8>>>, OrderError> {
        if let Some(hit) = self.ideals.lock().unwrap().get(w.window()) {
            return Ok(Arc::clone(hit));
        }
        let mut seen: HashSet<Vec<i8>> = HashSet::new();
        seen.insert(w.window().to_vec());
        let mut queue = vec![w.clone()];
        while let Some(v) = queue.pop() {
            let lv = v.length();
            if lv == 0 {
                continue;
            }
            for t in &self.reflections {
                let u = v.compose(t);
                if u.length() < lv && seen.insert(u.window().to_vec()) {
                    if seen.len() > self.max_poset {
                        return Err(OrderError::TooLarge {
                            size: seen.len() as u64,
                            bound: self.max_poset as u64,
                        });
                    }
                    queue.push(u);
                }
            }
        }
        let arc = Arc::new(seen);
        self.ideals.lock().unwrap().insert(w.window().to_vec(), Arc::clone(&arc));
        Ok(arc)
    }

    /// The number of elements below `w`, inclusive.
    pub fn ideal_size(&self, w: &GroupElement) -> Result<u64, OrderError> {
        self.check(w)?;
        Ok(self.ideal_set(w)?.len() as u64)
    }

    /// The elements covered by `w`: every `w t` with `t` a reflection and
    /// length exactly one less, sorted by window.
    pub fn lower_covers(&self, w: &GroupElement) -> Result<Vec<GroupElement>, OrderError> {
        self.check(w)?;
        let lw = w.length();
        if lw == 0 {
            return Ok(Vec::new());
        }
        let mut covers: Vec<GroupElement> = self
            .reflections
            .iter()
            .map(|t| w.compose(t))
            .filter(|u| u.length() == lw - 1)
            .collect();
        covers.sort();
        Ok(covers)
    }

    /// The principal (lower) order ideal of `w` as a graded poset, ranked
    /// by length and labeled canonically.
    pub fn principal_ideal(&self, w: &GroupElement) -> Result<Poset, OrderError> {
        self.check(w)?;
        let mut index: HashMap<Vec<i8>, u32> = HashMap::new();
        let mut elements: Vec<(GroupElement, u32)> = Vec::new();
        index.insert(w.window().to_vec(), 0);
        elements.push((w.clone(), w.length()));
        let mut covers: Vec<(u32, u32)> = Vec::new();
        let mut head = 0;
        while head < elements.len() {
            let (v, lv) = {
                let e = &elements[head];
                (e.0.clone(), e.1)
            };
            let vi = head as u32;
            head += 1;
            if lv == 0 {
                continue;
            }
            for t in &self.reflections {
                let u = v.compose(t);
                let lu = u.length();
                if lu >= lv {
                    continue;
                }
                let ui = match index.get(u.window()) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= self.max_poset {
                            return Err(OrderError::TooLarge {
                                size: elements.len() as u64 + 1,
                                bound: self.max_poset as u64,
                            });
                        }
                        let i = elements.len() as u32;
                        index.insert(u.window().to_vec(), i);
                        elements.push((u, lu));
                        i
                    }
                };
                // A reflection step that drops length by exactly one is a
                // cover.
                if lu + 1 == lv {
                    covers.push((ui, vi));
                }
            }
        }
        Ok(Poset::from_elements(elements, covers))
    }

    /// The interval `[x, y]` as a graded poset, ranks rebased to zero.
    pub fn interval(&self, x: &GroupElement, y: &GroupElement) -> Result<Poset, OrderError> {
        self.check(x)?;
        self.check(y)?;
        if !self.leq(x, y)? {
            return Err(OrderError::NotComparable);
        }
        let ideal = self.principal_ideal(y)?;
        let start = ideal.index_of(x).expect("x lies in the ideal of y");
        // Everything reachable upward from x inside the ideal is exactly
        // the interval, and its covers are the ideal's covers restricted.
        let mut members = vec![false; ideal.len()];
        members[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &j in ideal.upper_cover_indices(i) {
                if !members[j as usize] {
                    members[j as usize] = true;
                    stack.push(j as usize);
                }
            }
        }
        let payload = ideal.payload().expect("ideals carry payloads");
        let mut new_index = vec![u32::MAX; ideal.len()];
        let mut elements: Vec<(GroupElement, u32)> = Vec::new();
        for i in 0..ideal.len() {
            if members[i] {
                new_index[i] = elements.len() as u32;
                elements.push((payload[i].clone(), ideal.rank(i)));
            }
        }
        let covers: Vec<(u32, u32)> = ideal
            .covers()
            .iter()
            .filter(|&&(a, b)| members[a as usize] && members[b as usize])
            .map(|&(a, b)| (new_index[a as usize], new_index[b as usize]))
            .collect();
        Ok(Poset::from_elements(elements, covers))
    }

    /// The Bruhat order on the whole group, or on the ideal of elements
    /// with length at most `max_length`.
    pub fn group_poset(&self, max_length: Option<u32>) -> Result<Poset, OrderError> {
        let all = group_elements(self.kind, self.n).map_err(|e| match e {
            ElementError::GroupTooLarge { order, bound, .. } =>
                OrderError::TooLarge { size: order, bound },
            other => unreachable!("enumeration only fails on size: {other}"),
        })?;
        let elements: Vec<(GroupElement, u32)> = all
            .into_iter()
            .map(|w| {
                let l = w.length();
                (w, l)
            })
            .filter(|e| max_length.is_none_or(|m| e.1 <= m))
            .collect();
        if elements.len() > self.max_poset {
            return Err(OrderError::TooLarge {
                size: elements.len() as u64,
                bound: self.max_poset as u64,
            });
        }
        let index: HashMap<Vec<i8>, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.0.window().to_vec(), i as u32))
            .collect();
        let mut covers = Vec::new();
        for (i, (w, lw)) in elements.iter().enumerate() {
            if *lw == 0 {
                continue;
            }
            for t in &self.reflections {
                let u = w.compose(t);
                if u.length() + 1 == *lw {
                    covers.push((index[u.window()], i as u32));
                }
            }
        }
        Ok(Poset::from_elements(elements, covers))
    }
}

/// The type A dominance criterion: `u <= w` iff every northwest rectangle
/// of the permutation matrix of `u` holds at least as many points as the
/// same rectangle of `w`.
fn dominates(u: &GroupElement, w: &GroupElement) -> bool {
    let n = u.n() as usize;
    // cu[j] counts a <= i with u(a) <= j + 1, updated row by row.
    let mut cu = vec![0u8; n];
    let mut cw = vec![0u8; n];
    for i in 0..n {
        let uv = u.window()[i] as usize;
        let wv = w.window()[i] as usize;
        for c in &mut cu[uv - 1..] {
            *c += 1;
        }
        for c in &mut cw[wv - 1..] {
            *c += 1;
        }
        for j in 0..n {
            if cu[j] < cw[j] {
                return false;
            }
        }
    }
    true
}

/// The reflections of the group: the closure of the generator set under
/// conjugation, sorted.
fn reflection_set(kind: Kind, n: u8) -> Vec<GroupElement> {
    let id = GroupElement::identity(kind, n);
    let gens: Vec<GroupElement> = generators(kind, n)
        .into_iter()
        .map(|g| id.apply_generator(g, Side::Right).expect("generators are legal"))
        .collect();
    let mut seen: BTreeSet<GroupElement> = gens.iter().cloned().collect();
    let mut queue: Vec<GroupElement> = gens.clone();
    while let Some(t) = queue.pop() {
        for s in &gens {
            let c = s.compose(&t).compose(s);
            if seen.insert(c.clone()) {
                queue.push(c);
            }
        }
    }
    seen.into_iter().collect()
}
