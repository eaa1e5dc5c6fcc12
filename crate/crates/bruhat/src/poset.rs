//! Finite graded posets presented by their cover relations.
//!
//! A [`Poset`] stores one rank per element and the list of cover pairs
//! `(lower, upper)`, each raising rank by exactly one; in a graded poset a
//! cover can never be transitively implied, so the stored digraph is a Hasse
//! diagram by construction. Posets built from group data carry their window
//! payloads and are canonically labeled in `(rank, window)` order, so equal
//! inputs always produce byte-identical exports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::bits::Bitset;
use crate::element::GroupElement;

/// Errors raised by poset construction and queries.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    /// Cover relations incompatible with the rank function.
    #[error("not a graded cover relation: {0}")]
    NotGraded(String),
    /// The requested poset or closure is past the size guard.
    #[error("poset with {size} elements is past the size guard {bound}")]
    TooLarge { size: u64, bound: u64 },
    /// Möbius values are only defined on comparable pairs.
    #[error("elements {x} and {y} are not comparable")]
    NotComparable { x: usize, y: usize },
    /// The structural predicates need a unique minimum.
    #[error("poset has no unique minimum")]
    NoMinimum,
}

/// Transitive closures keep one bitset row per element; past this many
/// elements the quadratic memory is not worth it.
const CLOSURE_BOUND: usize = 20_000;

/// Size guard for constructed posets (products, boolean lattices).
pub const MAX_POSET_SIZE: u64 = 2_000_000;

/// The five structural predicates computed by [`Poset::predicates`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Predicates {
    /// Every pair has a meet and a join.
    pub lattice: bool,
    /// Isomorphic to the boolean lattice on its top rank.
    pub boolean: bool,
    /// The rank generating function is palindromic.
    pub rank_symmetric: bool,
    /// Every principal downset is a boolean lattice.
    pub simplicial: bool,
    /// The Möbius function of every interval is `(-1)^(rank difference)`.
    pub eulerian: bool,
}

/// A finite graded poset.
#[derive(Clone, Debug)]
pub struct Poset {
    ranks: Vec<u32>,
    covers: Vec<(u32, u32)>,
    up: Vec<Vec<u32>>,
    down: Vec<Vec<u32>>,
    payload: Option<Vec<GroupElement>>,
}

impl Poset {
    /// Builds a poset from ranks and covers, validating that every cover
    /// raises rank by exactly one. Ranks are normalized to start at zero.
    pub fn new(mut ranks: Vec<u32>, mut covers: Vec<(u32, u32)>) -> Result<Poset, PosetError> {
        if ranks.is_empty() {
            return Err(PosetError::NotGraded("a poset needs at least one element".into()));
        }
        let min = *ranks.iter().min().unwrap();
        for r in &mut ranks {
            *r -= min;
        }
        let n = ranks.len();
        for &(a, b) in &covers {
            if a as usize >= n || b as usize >= n {
                return Err(PosetError::NotGraded(format!("cover ({a}, {b}) out of range")));
            }
            if ranks[b as usize] != ranks[a as usize] + 1 {
                return Err(PosetError::NotGraded(format!(
                    "cover ({a}, {b}) jumps from rank {} to rank {}",
                    ranks[a as usize], ranks[b as usize]
                )));
            }
        }
        covers.sort_unstable();
        covers.dedup();
        Ok(Poset::assemble(ranks, covers, None))
    }

    fn assemble(ranks: Vec<u32>, covers: Vec<(u32, u32)>, payload: Option<Vec<GroupElement>>) -> Poset {
        let n = ranks.len();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in &covers {
            up[a as usize].push(b);
            down[b as usize].push(a);
        }
        Poset { ranks, covers, up, down, payload }
    }

    /// Builds a poset over group elements with given ranks and index covers,
    /// relabeling canonically by `(rank, window)`.
    pub(crate) fn from_elements(
        elements: Vec<(GroupElement, u32)>,
        covers: Vec<(u32, u32)>,
    ) -> Poset {
        let min = elements.iter().map(|e| e.1).min().unwrap_or(0);
        let mut order: Vec<u32> = (0..elements.len() as u32).collect();
        order.sort_by(|&a, &b| {
            let (ea, ra) = &elements[a as usize];
            let (eb, rb) = &elements[b as usize];
            (ra, ea.window()).cmp(&(rb, eb.window()))
        });
        let mut position = vec![0u32; elements.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old as usize] = new as u32;
        }
        let mut covers: Vec<(u32, u32)> = covers
            .into_iter()
            .map(|(a, b)| (position[a as usize], position[b as usize]))
            .collect();
        covers.sort_unstable();
        covers.dedup();
        let mut tagged: Vec<(u32, GroupElement, u32)> = elements
            .into_iter()
            .zip(position)
            .map(|((e, r), p)| (p, e, r))
            .collect();
        tagged.sort_by_key(|t| t.0);
        let mut ranks = Vec::with_capacity(tagged.len());
        let mut payload = Vec::with_capacity(tagged.len());
        for (_, e, r) in tagged {
            ranks.push(r - min);
            payload.push(e);
        }
        debug_assert!(covers.iter().all(|&(a, b)| ranks[b as usize] == ranks[a as usize] + 1));
        Poset::assemble(ranks, covers, Some(payload))
    }

    /// The boolean lattice of all subsets of an `r`-set, ordered by
    /// inclusion.
    pub fn boolean(r: u32) -> Result<Poset, PosetError> {
        if r >= 21 {
            return Err(PosetError::TooLarge { size: 1u64 << r, bound: MAX_POSET_SIZE });
        }
        let size = 1usize << r;
        let mut masks: Vec<u32> = (0..size as u32).collect();
        masks.sort_by_key(|&m| (m.count_ones(), m));
        let mut index = vec![0u32; size];
        for (i, &m) in masks.iter().enumerate() {
            index[m as usize] = i as u32;
        }
        let ranks: Vec<u32> = masks.iter().map(|m| m.count_ones()).collect();
        let mut covers = Vec::new();
        for (i, &m) in masks.iter().enumerate() {
            for bit in 0..r {
                if m >> bit & 1 == 0 {
                    covers.push((i as u32, index[(m | 1 << bit) as usize]));
                }
            }
        }
        covers.sort_unstable();
        Ok(Poset::assemble(ranks, covers, None))
    }

    /// The direct product, ordered componentwise. A product cover changes
    /// exactly one coordinate by a cover.
    pub fn product(&self, other: &Poset) -> Result<Poset, PosetError> {
        let size = self.len() as u64 * other.len() as u64;
        if size > MAX_POSET_SIZE {
            return Err(PosetError::TooLarge { size, bound: MAX_POSET_SIZE });
        }
        let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(size as usize);
        for i in 0..self.len() as u32 {
            for j in 0..other.len() as u32 {
                pairs.push((i, j));
            }
        }
        pairs.sort_by_key(|&(i, j)| (self.ranks[i as usize] + other.ranks[j as usize], i, j));
        let mut index = vec![0u32; size as usize];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            index[i as usize * other.len() + j as usize] = p as u32;
        }
        let ranks: Vec<u32> = pairs
            .iter()
            .map(|&(i, j)| self.ranks[i as usize] + other.ranks[j as usize])
            .collect();
        let mut covers = Vec::new();
        for (p, &(i, j)) in pairs.iter().enumerate() {
            for &i2 in &self.up[i as usize] {
                covers.push((p as u32, index[i2 as usize * other.len() + j as usize]));
            }
            for &j2 in &other.up[j as usize] {
                covers.push((p as u32, index[i as usize * other.len() + j2 as usize]));
            }
        }
        covers.sort_unstable();
        Ok(Poset::assemble(ranks, covers, None))
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    /// Whether the poset is empty (never true for constructed posets).
    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// The rank of one element.
    pub fn rank(&self, i: usize) -> u32 {
        self.ranks[i]
    }

    /// The largest rank.
    pub fn max_rank(&self) -> u32 {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// The sorted cover pairs `(lower, upper)`.
    pub fn covers(&self) -> &[(u32, u32)] {
        &self.covers
    }

    /// Indices of the elements covering `i`.
    pub fn upper_cover_indices(&self, i: usize) -> &[u32] {
        &self.up[i]
    }

    /// Indices of the elements covered by `i`.
    pub fn lower_cover_indices(&self, i: usize) -> &[u32] {
        &self.down[i]
    }

    /// The group elements behind the labels, when the poset carries them.
    pub fn payload(&self) -> Option<&[GroupElement]> {
        self.payload.as_deref()
    }

    /// The canonical index of a payload element, if present.
    pub fn index_of(&self, w: &GroupElement) -> Option<usize> {
        self.payload.as_ref()?.iter().position(|e| e == w)
    }

    /// The label of one element: its window text, or its index when the
    /// poset carries no payload.
    pub fn label(&self, i: usize) -> String {
        match &self.payload {
            Some(p) => p[i].to_string(),
            None => i.to_string(),
        }
    }

    /// Element counts by rank, for ranks `0 ..= max_rank`.
    pub fn rank_gf(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.max_rank() as usize + 1];
        for &r in &self.ranks {
            counts[r as usize] += 1;
        }
        counts
    }

    /// Indices ordered by ascending rank.
    fn rank_order(&self) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.len() as u32).collect();
        order.sort_by_key(|&i| self.ranks[i as usize]);
        order
    }

    pub(crate) fn closure_down(&self) -> Result<Vec<Bitset>, PosetError> {
        if self.len() > CLOSURE_BOUND {
            return Err(PosetError::TooLarge {
                size: self.len() as u64,
                bound: CLOSURE_BOUND as u64,
            });
        }
        let mut down = vec![Bitset::new(self.len()); self.len()];
        for &i in &self.rank_order() {
            let i = i as usize;
            let mut row = Bitset::new(self.len());
            for &c in &self.down[i] {
                row.or_assign(&down[c as usize]);
            }
            row.set(i);
            down[i] = row;
        }
        Ok(down)
    }

    pub(crate) fn closure_up(&self) -> Result<Vec<Bitset>, PosetError> {
        if self.len() > CLOSURE_BOUND {
            return Err(PosetError::TooLarge {
                size: self.len() as u64,
                bound: CLOSURE_BOUND as u64,
            });
        }
        let mut up = vec![Bitset::new(self.len()); self.len()];
        for &i in self.rank_order().iter().rev() {
            let i = i as usize;
            let mut row = Bitset::new(self.len());
            for &c in &self.up[i] {
                row.or_assign(&up[c as usize]);
            }
            row.set(i);
            up[i] = row;
        }
        Ok(up)
    }

    /// `|{y : y <= x}|` for every element, via the transitive closure.
    pub fn downset_sizes(&self) -> Result<Vec<u64>, PosetError> {
        Ok(self.closure_down()?.iter().map(|b| b.count() as u64).collect())
    }

    /// The Möbius value of the pair `x <= y`.
    pub fn mobius(&self, x: usize, y: usize) -> Result<i64, PosetError> {
        let up = self.reachable(x, &self.up);
        if !up.get(y) {
            return Err(PosetError::NotComparable { x, y });
        }
        let down = self.reachable(y, &self.down);
        let mut interval: Vec<usize> = up.and(&down).ones().collect();
        interval.sort_by_key(|&i| (self.ranks[i], i));
        debug_assert_eq!(interval.first(), Some(&x));
        // The defining recursion, bottom-up over the interval.
        let mut mu = vec![0i64; interval.len()];
        mu[0] = 1;
        for p in 1..interval.len() {
            let below = self.reachable(interval[p], &self.down);
            let mut sum = 0i64;
            for q in 0..p {
                if below.get(interval[q]) {
                    sum += mu[q];
                }
            }
            mu[p] = -sum;
        }
        Ok(mu[interval.len() - 1])
    }

    fn reachable(&self, from: usize, adj: &[Vec<u32>]) -> Bitset {
        let mut seen = Bitset::new(self.len());
        seen.set(from);
        let mut stack = vec![from];
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen.get(j as usize) {
                    seen.set(j as usize);
                    stack.push(j as usize);
                }
            }
        }
        seen
    }

    /// Computes the five structural predicates.
    ///
    /// Errors with [`PosetError::NoMinimum`] when the poset lacks a unique
    /// minimum and with [`PosetError::TooLarge`] past the closure guard.
    pub fn predicates(&self) -> Result<Predicates, PosetError> {
        let down = self.closure_down()?;
        let up = self.closure_up()?;
        let gf = self.rank_gf();
        let rank_symmetric = gf.iter().eq(gf.iter().rev());
        let minima: Vec<usize> = (0..self.len()).filter(|&i| self.down[i].is_empty()).collect();
        if minima.len() != 1 {
            return Err(PosetError::NoMinimum);
        }
        let bottom = minima[0];
        let mut everything = Bitset::new(self.len());
        for i in 0..self.len() {
            everything.set(i);
        }
        let boolean = self.boolean_within(&everything, bottom, &down);
        let simplicial = (0..self.len()).all(|e| self.boolean_within(&down[e], bottom, &down));
        let lattice = self.is_lattice(&down, &up);
        let eulerian = self.is_eulerian(&down, &up);
        Ok(Predicates { lattice, boolean, rank_symmetric, simplicial, eulerian })
    }

    /// Whether the induced subposet on `members` (a downward closed set
    /// containing `bottom`) is a boolean lattice.
    ///
    /// Uses the atom fingerprint: map each member to the set of atoms below
    /// it. The subposet is boolean exactly when the member count is `2^r`
    /// for `r` its top rank, it has `r` atoms, the fingerprints are distinct
    /// with popcount equal to rank, and every one of its `r * 2^(r-1)`
    /// covers adds a single atom.
    fn boolean_within(&self, members: &Bitset, bottom: usize, down: &[Bitset]) -> bool {
        let count = members.count();
        let Some(top_rank) = members.ones().map(|i| self.ranks[i]).max() else {
            return false;
        };
        let r = top_rank as usize;
        if r >= 60 || count != 1usize << r {
            return false;
        }
        let atoms: Vec<usize> = self.up[bottom]
            .iter()
            .map(|&a| a as usize)
            .filter(|&a| members.get(a))
            .collect();
        if atoms.len() != r {
            return false;
        }
        let mut seen = vec![false; 1 << r];
        let mut fingerprint = vec![0u64; self.len()];
        for e in members.ones() {
            let mut mask = 0u64;
            for (bit, &a) in atoms.iter().enumerate() {
                if down[e].get(a) {
                    mask |= 1 << bit;
                }
            }
            if mask.count_ones() != self.ranks[e] || seen[mask as usize] {
                return false;
            }
            seen[mask as usize] = true;
            fingerprint[e] = mask;
        }
        let mut cover_count = 0u64;
        for e in members.ones() {
            for &f in &self.up[e] {
                if members.get(f as usize) {
                    cover_count += 1;
                    let (a, b) = (fingerprint[e], fingerprint[f as usize]);
                    if a & !b != 0 || (b & !a).count_ones() != 1 {
                        return false;
                    }
                }
            }
        }
        cover_count == (r as u64) * (1u64 << r.max(1)) / 2
    }

    fn is_lattice(&self, down: &[Bitset], up: &[Bitset]) -> bool {
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                if !self.has_bound(a, b, up, false) || !self.has_bound(a, b, down, true) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether `a` and `b` have a join (`want_max = false`, with
    /// up-closures) or a meet (`want_max = true`, with down-closures).
    fn has_bound(&self, a: usize, b: usize, closure: &[Bitset], want_max: bool) -> bool {
        let common = closure[a].and(&closure[b]);
        let candidate = if want_max {
            common.ones().max_by_key(|&i| self.ranks[i])
        } else {
            common.ones().min_by_key(|&i| self.ranks[i])
        };
        // The bound exists iff the extreme-rank common element is comparable
        // to every other common element; two elements sharing the extreme
        // rank make the candidate fail the subset test, as they should.
        match candidate {
            Some(c) => common.is_subset(&closure[c]),
            None => false,
        }
    }

    fn is_eulerian(&self, down: &[Bitset], up: &[Bitset]) -> bool {
        for (x, above) in up.iter().enumerate() {
            let mut interval: Vec<usize> = above.ones().collect();
            interval.sort_by_key(|&i| (self.ranks[i], i));
            debug_assert_eq!(interval.first(), Some(&x));
            let mut mu = vec![0i64; interval.len()];
            mu[0] = 1;
            for p in 1..interval.len() {
                let y = interval[p];
                let mut sum = 0i64;
                for (q, &t) in interval.iter().enumerate().take(p) {
                    if down[y].get(t) {
                        sum += mu[q];
                    }
                }
                mu[p] = -sum;
                let expected = if (self.ranks[y] - self.ranks[x]).is_multiple_of(2) { 1 } else { -1 };
                if mu[p] != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Searches for an isomorphism; returns the image of each index on
    /// success.
    pub fn is_isomorphic(&self, other: &Poset) -> Option<Vec<u32>> {
        if self.len() != other.len()
            || self.covers.len() != other.covers.len()
            || self.rank_gf() != other.rank_gf()
        {
            return None;
        }
        let n = self.len();
        // Color refinement over the disjoint union of the two diagrams:
        // start from (rank, down-degree, up-degree) and refine by sorted
        // neighbor color lists until the partition stabilizes.
        let mut colors: Vec<u32> = {
            let mut keys: Vec<(u32, usize, usize)> = Vec::with_capacity(2 * n);
            for p in [self, other] {
                for i in 0..n {
                    keys.push((p.ranks[i], p.down[i].len(), p.up[i].len()));
                }
            }
            canonical_ids(&keys)
        };
        loop {
            let mut keys: Vec<(u32, Vec<u32>, Vec<u32>)> = Vec::with_capacity(2 * n);
            for (side, p) in [self, other].into_iter().enumerate() {
                let offset = side * n;
                for i in 0..n {
                    let mut d: Vec<u32> =
                        p.down[i].iter().map(|&j| colors[offset + j as usize]).collect();
                    let mut u: Vec<u32> =
                        p.up[i].iter().map(|&j| colors[offset + j as usize]).collect();
                    d.sort_unstable();
                    u.sort_unstable();
                    keys.push((colors[offset + i], d, u));
                }
            }
            let next = canonical_ids(&keys);
            let stable = count_distinct(&next) == count_distinct(&colors);
            colors = next;
            if stable {
                break;
            }
        }
        // Each color class must hold equally many vertices on both sides.
        let mut class_size: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        for i in 0..n {
            class_size.entry(colors[i]).or_default().0 += 1;
            class_size.entry(colors[n + i]).or_default().1 += 1;
        }
        if class_size.values().any(|&(mine, theirs)| mine != theirs) {
            return None;
        }
        // Backtracking over vertices, most constrained color classes first.
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by_key(|&i| (class_size[&colors[i as usize]].0, colors[i as usize], i));
        let mut mapping = vec![u32::MAX; n];
        let mut used = vec![false; n];
        if self.extend_mapping(other, &colors, &order, 0, &mut mapping, &mut used) {
            Some(mapping)
        } else {
            None
        }
    }

    fn extend_mapping(
        &self,
        other: &Poset,
        colors: &[u32],
        order: &[u32],
        depth: usize,
        mapping: &mut Vec<u32>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = self.len();
        if depth == n {
            // Covers inject into covers and the counts agree, so the cover
            // sets correspond exactly; in a graded poset that is enough for
            // an isomorphism.
            return self.verify_mapping(other, mapping);
        }
        let v = order[depth] as usize;
        for w in 0..n {
            if used[w] || colors[v] != colors[n + w] {
                continue;
            }
            let consistent = self.down[v].iter().all(|&u| {
                mapping[u as usize] == u32::MAX || other.down[w].contains(&mapping[u as usize])
            }) && self.up[v].iter().all(|&u| {
                mapping[u as usize] == u32::MAX || other.up[w].contains(&mapping[u as usize])
            });
            if !consistent {
                continue;
            }
            mapping[v] = w as u32;
            used[w] = true;
            if self.extend_mapping(other, colors, order, depth + 1, mapping, used) {
                return true;
            }
            mapping[v] = u32::MAX;
            used[w] = false;
        }
        false
    }

    fn verify_mapping(&self, other: &Poset, mapping: &[u32]) -> bool {
        self.covers.iter().all(|&(a, b)| {
            let (ma, mb) = (mapping[a as usize], mapping[b as usize]);
            other.up[ma as usize].contains(&mb)
        })
    }

    /// Graphviz text: one node per element labeled by its window (or index),
    /// one edge per cover, elements of equal rank grouped on one level.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=box];\n");
        for i in 0..self.len() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", self.label(i));
        }
        for rank in 0..=self.max_rank() {
            let members: Vec<String> = (0..self.len())
                .filter(|&i| self.ranks[i] == rank)
                .map(|i| format!("n{i};"))
                .collect();
            let _ = writeln!(out, "  {{ rank=same; {} }}", members.join(" "));
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }

    /// Compact JSON with deterministic field order: element labels, ranks,
    /// and cover pairs.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Json<'a> {
            elements: Vec<String>,
            ranks: &'a [u32],
            covers: &'a [(u32, u32)],
        }
        let doc = Json {
            elements: (0..self.len()).map(|i| self.label(i)).collect(),
            ranks: &self.ranks,
            covers: &self.covers,
        };
        serde_json::to_string(&doc).expect("poset serialization cannot fail")
    }
}

/// Assigns dense ids to keys: equal keys get equal ids, first occurrence
/// order.
fn canonical_ids<K: Ord>(keys: &[K]) -> Vec<u32> {
    let mut ids: BTreeMap<&K, u32> = BTreeMap::new();
    for k in keys {
        let next = ids.len() as u32;
        ids.entry(k).or_insert(next);
    }
    keys.iter().map(|k| ids[k]).collect()
}

fn count_distinct(colors: &[u32]) -> usize {
    let mut sorted = colors.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len()
}
