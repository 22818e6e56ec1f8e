//! Finite binary relations, menus and labeled universes.
//!
//! Everything here is bitmask-backed: a [`Menu`] is a 16-bit subset mask and a
//! [`BinaryRelation`] stores one successor mask per alternative. All values are
//! `Copy` (except [`Universe`], which is a cheap `Arc` clone) and every
//! operation is pure.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest universe the analysis routines accept.
pub const MAX_ALTERNATIVES: usize = 16;

const DEFAULT_LABELS: [&str; 5] = ["x", "y", "z", "w", "v"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("a universe needs at least one alternative")]
    Empty,
    #[error("{0} alternatives exceeds the supported maximum of {MAX_ALTERNATIVES}")]
    TooLarge(usize),
    #[error("alternative label {0:?} appears more than once")]
    DuplicateLabel(String),
    #[error("alternative labels must be non-empty")]
    BlankLabel,
}

/// An ordered list of distinct alternative labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    labels: Arc<[String]>,
}

impl Universe {
    pub fn new<I, S>(labels: I) -> Result<Self, UniverseError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(UniverseError::Empty);
        }
        if labels.len() > MAX_ALTERNATIVES {
            return Err(UniverseError::TooLarge(labels.len()));
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(UniverseError::BlankLabel);
            }
            if labels[..i].contains(label) {
                return Err(UniverseError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Universe {
            labels: labels.into(),
        })
    }

    /// `x, y, z, w, v` for the first five alternatives, `a5, a6, ...` after that.
    pub fn with_size(n: usize) -> Self {
        assert!(
            (1..=MAX_ALTERNATIVES).contains(&n),
            "universe size {n} out of range"
        );
        let labels = (0..n).map(|i| match DEFAULT_LABELS.get(i) {
            Some(l) => l.to_string(),
            None => format!("a{i}"),
        });
        Universe::new(labels).expect("default labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, alternative: usize) -> &str {
        &self.labels[alternative]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full_menu(&self) -> Menu {
        Menu::full(self.len())
    }

    /// Labels of a menu's members, in universe order.
    pub fn menu_labels(&self, menu: Menu) -> Vec<String> {
        menu.iter().map(|a| self.labels[a].clone()).collect()
    }

    /// `{x,y,z}`-style rendering.
    pub fn format_menu(&self, menu: Menu) -> String {
        let inner: Vec<&str> = menu.iter().map(|a| self.label(a)).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// `{(x,y), (z,w)}`-style rendering.
    pub fn format_relation(&self, rel: &BinaryRelation) -> String {
        let inner: Vec<String> = rel
            .pairs()
            .map(|(a, b)| format!("({},{})", self.label(a), self.label(b)))
            .collect();
        format!("{{{}}}", inner.join(", "))
    }

    pub fn labeled_pairs(&self, rel: &BinaryRelation) -> Vec<[String; 2]> {
        rel.pairs()
            .map(|(a, b)| [self.labels[a].clone(), self.labels[b].clone()])
            .collect()
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

/// A subset of the universe, stored as a bitmask over alternative indices.
///
/// Menus proper are nonempty; the empty mask is representable so that set
/// algebra stays closed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Menu(u16);

impl Menu {
    pub const EMPTY: Menu = Menu(0);

    pub const fn from_bits(bits: u16) -> Self {
        Menu(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ALTERNATIVES);
        if n == MAX_ALTERNATIVES {
            Menu(u16::MAX)
        } else {
            Menu((1u16 << n) - 1)
        }
    }

    pub fn singleton(a: usize) -> Self {
        Menu(1 << a)
    }

    pub fn pair(a: usize, b: usize) -> Self {
        Menu((1 << a) | (1 << b))
    }

    pub fn contains(self, a: usize) -> bool {
        a < MAX_ALTERNATIVES && self.0 & (1 << a) != 0
    }

    pub fn with(self, a: usize) -> Self {
        Menu(self.0 | (1 << a))
    }

    pub fn without(self, a: usize) -> Self {
        Menu(self.0 & !(1 << a))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Menu) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Menu) -> Menu {
        Menu(self.0 | other.0)
    }

    pub fn intersection(self, other: Menu) -> Menu {
        Menu(self.0 & other.0)
    }

    pub fn difference(self, other: Menu) -> Menu {
        Menu(self.0 & !other.0)
    }

    /// Lowest-index member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// The member of a singleton menu.
    pub fn sole(self) -> Option<usize> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> MenuIter {
        MenuIter(self.0)
    }

    /// Every nonempty menu over `n` alternatives, ordered by size and then by mask.
    pub fn all_by_size(n: usize) -> Vec<Menu> {
        let mut menus: Vec<Menu> = (1..=Menu::full(n).0 as u32)
            .map(|b| Menu(b as u16))
            .collect();
        menus.sort_by_key(|m| (m.len(), m.0));
        menus
    }

    /// Every menu over `n` alternatives with at least two members, in mask order.
    pub fn nontrivial(n: usize) -> impl Iterator<Item = Menu> {
        (1..=Menu::full(n).0 as u32)
            .map(|b| Menu(b as u16))
            .filter(|m| m.len() >= 2)
    }
}

impl FromIterator<usize> for Menu {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        iter.into_iter().fold(Menu::EMPTY, Menu::with)
    }
}

impl fmt::Debug for Menu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for Menu {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Menu {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(deserializer)?;
        if let Some(bad) = members.iter().find(|&&a| a >= MAX_ALTERNATIVES) {
            return Err(serde::de::Error::custom(format!(
                "alternative index {bad} out of range"
            )));
        }
        Ok(members.into_iter().collect())
    }
}

pub struct MenuIter(u16);

impl Iterator for MenuIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let a = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(a)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for MenuIter {}

/// A set of ordered pairs over `0..size`, stored as successor masks.
///
/// Asymmetry is not enforced: transitive closures and revealed relations of
/// malformed data may be cyclic and still need to be represented. Closures of
/// cyclic relations contain loops `(a, a)`; every other constructor keeps the
/// relation irreflexive.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryRelation {
    size: u8,
    rows: [u16; MAX_ALTERNATIVES],
}

impl BinaryRelation {
    pub fn empty(size: usize) -> Self {
        assert!(
            size <= MAX_ALTERNATIVES,
            "universe size {size} out of range"
        );
        BinaryRelation {
            size: size as u8,
            rows: [0; MAX_ALTERNATIVES],
        }
    }

    /// Builds a relation from pairs; panics on out-of-range or reflexive pairs.
    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(size: usize, pairs: I) -> Self {
        let mut rel = BinaryRelation::empty(size);
        for (a, b) in pairs {
            assert!(a < size && b < size, "pair ({a},{b}) out of range");
            assert_ne!(a, b, "reflexive pair ({a},{a})");
            rel.insert(a, b);
        }
        rel
    }

    /// The strict linear order that ranks alternatives as listed (best first).
    pub fn linear_order(size: usize, ranking: &[usize]) -> Self {
        assert_eq!(ranking.len(), size, "ranking must list every alternative");
        let mut rel = BinaryRelation::empty(size);
        for (i, &a) in ranking.iter().enumerate() {
            for &b in &ranking[i + 1..] {
                rel.insert(a, b);
            }
        }
        rel
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        a < self.size() && self.rows[a] & (1 << b) != 0
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.rows[a] |= 1 << b;
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        self.rows[a] &= !(1 << b);
    }

    pub fn with(mut self, a: usize, b: usize) -> Self {
        self.insert(a, b);
        self
    }

    /// `{ b : (a, b) ∈ self }`
    pub fn successors(&self, a: usize) -> Menu {
        Menu(self.rows[a])
    }

    /// `{ b : (b, a) ∈ self }`
    pub fn predecessors(&self, a: usize) -> Menu {
        (0..self.size()).filter(|&b| self.contains(b, a)).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size()).flat_map(move |a| self.successors(a).iter().map(move |b| (a, b)))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = BinaryRelation::empty(self.size());
        for (a, b) in self.pairs() {
            inv.insert(b, a);
        }
        inv
    }

    fn zip(&self, other: &Self, f: impl Fn(u16, u16) -> u16) -> Self {
        assert_eq!(self.size, other.size, "relations over different universes");
        let mut out = *self;
        for (row, &o) in out.rows.iter_mut().zip(other.rows.iter()) {
            *row = f(*row, o);
        }
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.size == other.size
            && self
                .rows
                .iter()
                .zip(other.rows.iter())
                .all(|(&a, &b)| a & !b == 0)
    }

    /// Pairs with both endpoints in `menu`.
    pub fn restrict(&self, menu: Menu) -> Self {
        let mut out = BinaryRelation::empty(self.size());
        for a in menu.iter().filter(|&a| a < self.size()) {
            out.rows[a] = self.rows[a] & menu.0;
        }
        out
    }

    /// Smallest transitive superset (Warshall over bit rows).
    pub fn transitive_closure(&self) -> Self {
        let mut out = *self;
        let n = self.size();
        for k in 0..n {
            let row_k = out.rows[k];
            for i in 0..n {
                if out.rows[i] & (1 << k) != 0 {
                    out.rows[i] |= row_k;
                }
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.size()).all(|a| {
            self.successors(a)
                .iter()
                .all(|b| self.successors(b).is_subset_of(self.successors(a)))
        })
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.size()).all(|a| !self.contains(a, a))
    }

    pub fn is_asymmetric(&self) -> bool {
        self.pairs().all(|(a, b)| !self.contains(b, a))
    }

    /// Every unordered pair of distinct alternatives is related one way or the other.
    pub fn is_complete(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (a + 1..n).all(|b| self.contains(a, b) || self.contains(b, a)))
    }

    pub fn is_acyclic(&self) -> bool {
        self.transitive_closure().is_irreflexive()
    }

    /// Transitive and asymmetric.
    pub fn is_strict_partial_order(&self) -> bool {
        self.is_asymmetric() && self.is_transitive()
    }

    /// Complete and asymmetric.
    pub fn is_tournament(&self) -> bool {
        self.is_asymmetric() && self.is_complete()
    }

    pub fn is_linear_order(&self) -> bool {
        self.is_tournament() && self.is_transitive()
    }

    /// Shortest cycle `[a0, a1, ..., ak]` with `(ai, ai+1)` and `(ak, a0)` in the
    /// relation; ties broken by the smallest starting alternative.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for start in 0..self.size() {
            if let Some(path) = self.shortest_path(start, start) {
                if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                    best = Some(path);
                }
            }
        }
        best.map(|mut p| {
            p.pop();
            p
        })
    }

    /// Shortest path `from = p0, p1, ..., pk = to` with at least one edge.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let n = self.size();
        let mut parent = [usize::MAX; MAX_ALTERNATIVES];
        let mut seen = Menu::singleton(from);
        let mut queue = VecDeque::new();
        for b in self.successors(from).iter() {
            if b == to {
                return Some(vec![from, to]);
            }
            if !seen.contains(b) {
                seen = seen.with(b);
                parent[b] = from;
                queue.push_back(b);
            }
        }
        while let Some(a) = queue.pop_front() {
            for b in self.successors(a).iter().filter(|&b| b < n) {
                if b == to {
                    let mut path = vec![to, a];
                    let mut cur = a;
                    while cur != from {
                        cur = parent[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                if !seen.contains(b) {
                    seen = seen.with(b);
                    parent[b] = a;
                    queue.push_back(b);
                }
            }
        }
        None
    }

    /// `{ x ∈ menu : ∃ z ∈ menu, z R x  and  ∄ z' ∈ menu, x R z' }`.
    ///
    /// Alternatives unrelated to the rest of the menu are never minimal, and an
    /// alternative that is dominated but dominates something in the menu is not
    /// minimal either.
    pub fn minimal_set(&self, menu: Menu) -> Menu {
        menu.iter()
            .filter(|&x| {
                let dominated = (0..self.size()).any(|z| menu.contains(z) && self.contains(z, x));
                let dominates = !self.successors(x).intersection(menu).is_empty();
                dominated && !dominates
            })
            .collect()
    }

    /// `{ y ∈ menu : ∄ x ∈ menu, x R y }`.
    pub fn maximal_set(&self, menu: Menu) -> Menu {
        menu.iter()
            .filter(|&y| !(0..self.size()).any(|x| menu.contains(x) && self.contains(x, y)))
            .collect()
    }
}

impl fmt::Debug for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct RelationRepr {
    size: usize,
    pairs: Vec<(usize, usize)>,
}

impl Serialize for BinaryRelation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RelationRepr {
            size: self.size(),
            pairs: self.pairs().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BinaryRelation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = RelationRepr::deserialize(deserializer)?;
        if repr.size > MAX_ALTERNATIVES {
            return Err(serde::de::Error::custom("relation size out of range"));
        }
        let mut rel = BinaryRelation::empty(repr.size);
        for (a, b) in repr.pairs {
            if a >= repr.size || b >= repr.size {
                return Err(serde::de::Error::custom(format!(
                    "pair ({a},{b}) out of range"
                )));
            }
            rel.insert(a, b);
        }
        Ok(rel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // x=0, y=1, z=2, w=3
    const X: usize = 0;
    const Y: usize = 1;
    const Z: usize = 2;
    const W: usize = 3;

    fn rel(pairs: &[(usize, usize)]) -> BinaryRelation {
        BinaryRelation::from_pairs(4, pairs.iter().copied())
    }

    /// Reachability by explicit path enumeration, independent of Warshall.
    fn reachable_by_paths(r: &BinaryRelation) -> BinaryRelation {
        fn walk(r: &BinaryRelation, from: usize, cur: usize, seen: Menu, out: &mut BinaryRelation) {
            for b in r.successors(cur).iter() {
                out.insert(from, b);
                if !seen.contains(b) {
                    walk(r, from, b, seen.with(b), out);
                }
            }
        }
        let mut out = BinaryRelation::empty(r.size());
        for a in 0..r.size() {
            walk(r, a, a, Menu::singleton(a), &mut out);
        }
        out
    }

    #[test]
    fn closure_examples() {
        let r = rel(&[(Z, X), (X, W)]);
        let expected = reachable_by_paths(&r);
        assert_eq!(expected, rel(&[(Z, X), (X, W), (Z, W)]));
        assert_eq!(r.transitive_closure(), expected);

        assert!(BinaryRelation::empty(4).transitive_closure().is_empty());

        let chain = rel(&[(X, Y), (Y, Z), (Z, W)]);
        let tc = chain.transitive_closure();
        assert_eq!(tc, reachable_by_paths(&chain));
        assert_eq!(tc.len(), 6);
        assert_eq!(tc, BinaryRelation::linear_order(4, &[X, Y, Z, W]));
    }

    #[test]
    fn order_predicates() {
        let two_cycle = rel(&[(X, Y), (Y, X)]);
        assert!(!two_cycle.is_asymmetric());

        let path = rel(&[(X, Y), (Y, Z)]);
        assert!(!path.is_transitive());
        assert!(path.is_acyclic());

        let tournament = BinaryRelation::from_pairs(3, [(X, Y), (Y, Z), (Z, X)]);
        assert!(tournament.is_complete());
        assert!(!tournament.is_acyclic());
        assert_eq!(tournament.find_cycle(), Some(vec![X, Y, Z]));
        assert!(two_cycle.transitive_closure().contains(X, X));
    }

    #[test]
    fn minimal_set_examples() {
        let all = Menu::full(4);
        let r = rel(&[(Z, X), (Z, W), (X, W)]);
        assert_eq!(r.minimal_set(all), Menu::singleton(W));
        assert_eq!(BinaryRelation::empty(4).minimal_set(all), Menu::EMPTY);
        let xyz: Menu = [X, Y, Z].into_iter().collect();
        assert_eq!(rel(&[(Z, X), (X, W)]).minimal_set(xyz), Menu::singleton(X));
    }

    #[test]
    fn maximal_set_examples() {
        let xyz: Menu = [X, Y, Z].into_iter().collect();
        assert_eq!(
            rel(&[(X, Y), (Y, Z), (X, Z)]).maximal_set(xyz),
            Menu::singleton(X)
        );
        assert_eq!(rel(&[(X, Y), (Y, Z), (Z, X)]).maximal_set(xyz), Menu::EMPTY);
        let r = rel(&[(Z, X), (Z, W), (X, W)]);
        assert_eq!(r.maximal_set(Menu::full(4)), Menu::pair(Y, Z));
    }

    #[test]
    fn restrict_examples() {
        let r = rel(&[(Z, X), (X, W)]);
        assert_eq!(r.restrict(Menu::pair(X, Z)), rel(&[(Z, X)]));
        assert!(r.restrict(Menu::singleton(X)).is_empty());
        let full = BinaryRelation::linear_order(4, &[X, Y, Z, W]);
        assert_eq!(full.restrict([X, Z, W].into_iter().collect()).len(), 3);
    }

    #[test]
    fn menu_set_algebra() {
        let m: Menu = [0, 2, 5].into_iter().collect();
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert_eq!(m.len(), 3);
        assert!(Menu::pair(0, 5).is_subset_of(m));
        assert_eq!(m.without(2), Menu::pair(0, 5));
        assert_eq!(Menu::full(16).len(), 16);
        let ordered = Menu::all_by_size(3);
        assert_eq!(ordered.len(), 7);
        assert!(ordered.windows(2).all(|w| w[0].len() <= w[1].len()));
    }

    #[test]
    fn universe_rejects_duplicates() {
        assert_eq!(
            Universe::new(["a", "b", "a"]),
            Err(UniverseError::DuplicateLabel("a".into()))
        );
        assert_eq!(
            Universe::new(Vec::<String>::new()),
            Err(UniverseError::Empty)
        );
        let u = Universe::with_size(4);
        assert_eq!(u.labels(), &["x", "y", "z", "w"]);
        assert_eq!(u.format_menu(Menu::pair(0, 3)), "{x,w}");
    }

    #[test]
    fn shortest_path_reconstructs_full_route() {
        let r = rel(&[(X, Y), (Y, Z), (Z, W)]);
        assert_eq!(r.shortest_path(X, W), Some(vec![X, Y, Z, W]));
        assert_eq!(r.shortest_path(W, X), None);
        let cyc = rel(&[(X, Y), (Y, Z), (Z, X)]);
        assert_eq!(cyc.shortest_path(X, X), Some(vec![X, Y, Z, X]));
    }
}
