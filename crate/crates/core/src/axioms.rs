//! Axiom checkers. Each check returns a verdict carrying a concrete witness on
//! failure, and every witness can be replayed against the choice function with
//! [`Witness::refutes`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::choice::ChoiceFunction;
use crate::relations::{BinaryRelation, Menu, MAX_ALTERNATIVES};
use crate::reversals::{
    self, check_exclusivity_with, double_reversal, find_reversals, revealed_from_reversals,
    Reversal, ReversalKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AxiomId {
    /// Never chosen: an alternative that loses every pairwise contest in a menu
    /// is not chosen from it.
    Nc,
    /// Weak contraction consistency (starred).
    WccStar,
    /// No binary cycles along revealed pairs.
    NbcStar,
    /// Reject-WARP.
    RWarp,
    /// Reject-SARP: the chain generalization of reject-WARP.
    RSarp,
    /// At most two flips per pair along nested menus.
    RWarpStar,
    /// Weak WARP: at most one flip.
    Wwarp,
    Warp,
    Expansion,
    NegativeExpansion,
    AlwaysChosen,
    /// The pairwise relation is acyclic.
    Nbc,
    /// No pair shows both a weak and a strong reversal.
    Exclusivity,
}

impl AxiomId {
    pub const ALL: [AxiomId; 13] = [
        AxiomId::Nc,
        AxiomId::WccStar,
        AxiomId::NbcStar,
        AxiomId::RWarp,
        AxiomId::RSarp,
        AxiomId::RWarpStar,
        AxiomId::Wwarp,
        AxiomId::Warp,
        AxiomId::Expansion,
        AxiomId::NegativeExpansion,
        AxiomId::AlwaysChosen,
        AxiomId::Nbc,
        AxiomId::Exclusivity,
    ];

    /// The four conditions that characterize choice by rejection.
    pub const CBR: [AxiomId; 4] = [
        AxiomId::Nc,
        AxiomId::WccStar,
        AxiomId::NbcStar,
        AxiomId::RWarp,
    ];

    /// The characterization when the second rationale is a linear order.
    pub const TCBR: [AxiomId; 4] = [
        AxiomId::Nc,
        AxiomId::WccStar,
        AxiomId::NbcStar,
        AxiomId::RSarp,
    ];

    pub fn id(self) -> &'static str {
        match self {
            AxiomId::Nc => "NC",
            AxiomId::WccStar => "WCC_STAR",
            AxiomId::NbcStar => "NBC_STAR",
            AxiomId::RWarp => "R_WARP",
            AxiomId::RSarp => "R_SARP",
            AxiomId::RWarpStar => "R_WARP_STAR",
            AxiomId::Wwarp => "WWARP",
            AxiomId::Warp => "WARP",
            AxiomId::Expansion => "EXPANSION",
            AxiomId::NegativeExpansion => "NEGATIVE_EXPANSION",
            AxiomId::AlwaysChosen => "ALWAYS_CHOSEN",
            AxiomId::Nbc => "NBC",
            AxiomId::Exclusivity => "EXCLUSIVITY",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            AxiomId::Nc => "NC",
            AxiomId::WccStar => "WCC*",
            AxiomId::NbcStar => "NBC*",
            AxiomId::RWarp => "R-WARP",
            AxiomId::RSarp => "R-SARP",
            AxiomId::RWarpStar => "R-WARP*",
            AxiomId::Wwarp => "WWARP",
            AxiomId::Warp => "WARP",
            AxiomId::Expansion => "Expansion",
            AxiomId::NegativeExpansion => "Negative expansion",
            AxiomId::AlwaysChosen => "Always chosen",
            AxiomId::Nbc => "NBC",
            AxiomId::Exclusivity => "Exclusivity",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for AxiomId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace(['-', ' '], "_");
        let norm = norm.replace('*', "_STAR");
        AxiomId::ALL
            .into_iter()
            .find(|a| a.id() == norm)
            .ok_or_else(|| format!("unknown axiom {s:?}"))
    }
}

/// `chosen` is picked from `menu` while `over` stays in its shortlist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceStep {
    pub chosen: usize,
    pub menu: Menu,
    pub over: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `chosen` wins `menu` while losing every pair inside it.
    NeverChosen {
        menu: Menu,
        chosen: usize,
    },
    /// `C(menu) ∈ pair` but no single removal outside the pair keeps the choice in the pair.
    Contraction {
        menu: Menu,
        pair: (usize, usize),
    },
    /// A path in the revealed relation whose endpoints are not ordered the same
    /// way pairwise (or that returns to its start).
    RevealedChain {
        chain: Vec<usize>,
    },
    /// A cycle of "chosen over a non-rejected alternative" steps.
    DominanceCycle {
        steps: Vec<DominanceStep>,
    },
    /// Nested menus exhibiting forbidden flips on `pair`; see each axiom for the layout.
    Chain {
        pair: (usize, usize),
        menus: Vec<Menu>,
    },
    /// `C(first) = C(second) = chosen` but `C(first ∪ second) ≠ chosen`.
    Expansion {
        first: Menu,
        second: Menu,
        chosen: usize,
    },
    /// `C(first) = C(second) = x`, `y` in both, and `C(first ∪ second) = y`.
    NegativeExpansion {
        first: Menu,
        second: Menu,
        pair: (usize, usize),
    },
    /// `winner` beats everyone in `menu` pairwise but is not chosen.
    AlwaysChosen {
        menu: Menu,
        winner: usize,
    },
    /// A cycle in the pairwise relation.
    BinaryCycle {
        cycle: Vec<usize>,
    },
    Exclusivity {
        weak: Reversal,
        strong: Reversal,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub axiom: AxiomId,
    pub pass: bool,
    pub witness: Option<Witness>,
}

/// The relation of "chosen over a non-rejected alternative": `(x, y)` iff some
/// menu has `C(S) = x`, `y ∈ S ∖ {x}` and `y` outside `min(S, first)`.
#[derive(Debug, Clone)]
pub struct Dominance {
    pub relation: BinaryRelation,
    witness: Vec<Option<Menu>>,
}

impl Dominance {
    pub fn new(c: &ChoiceFunction, first: &BinaryRelation) -> Self {
        let n = c.size();
        let mut relation = BinaryRelation::empty(n);
        let mut witness = vec![None; n * n];
        for menu in Menu::all_by_size(n).into_iter().filter(|m| m.len() >= 2) {
            let x = c.choice(menu);
            let shortlist = menu.difference(first.minimal_set(menu));
            for y in shortlist.without(x).iter() {
                if !relation.contains(x, y) {
                    relation.insert(x, y);
                    witness[x * n + y] = Some(menu);
                }
            }
        }
        Dominance { relation, witness }
    }

    /// First menu, by size then mask, witnessing `(x, y)`.
    pub fn menu(&self, x: usize, y: usize) -> Option<Menu> {
        self.witness[x * self.relation.size() + y]
    }

    fn step(&self, x: usize, y: usize) -> DominanceStep {
        DominanceStep {
            chosen: x,
            menu: self.menu(x, y).expect("pair is in the dominance relation"),
            over: y,
        }
    }
}

/// Derived data shared by the checkers.
pub struct Context<'a> {
    pub choice: &'a ChoiceFunction,
    /// `(a, b)` iff `C({a,b}) = a`.
    pub pairwise: BinaryRelation,
    pub reversals: Vec<Reversal>,
    /// Revealed relation read off every menu.
    pub revealed: BinaryRelation,
    /// Transitive closure of `revealed`.
    pub revealed_closure: BinaryRelation,
}

impl<'a> Context<'a> {
    pub fn new(choice: &'a ChoiceFunction) -> Self {
        let reversals = find_reversals(choice);
        let revealed = revealed_from_reversals(choice.size(), &reversals);
        Context {
            choice,
            pairwise: choice.pairwise(),
            revealed_closure: revealed.transitive_closure(),
            revealed,
            reversals,
        }
    }

    pub fn check(&self, axiom: AxiomId) -> AxiomVerdict {
        let mut sink = Sink::first();
        let _ = self.run(axiom, &mut sink);
        let witness = sink.found.into_iter().next();
        AxiomVerdict {
            axiom,
            pass: witness.is_none(),
            witness,
        }
    }

    /// Every witness the checker can find (one per offending menu, pair or
    /// cycle, depending on the axiom).
    pub fn witnesses(&self, axiom: AxiomId) -> Vec<Witness> {
        let mut sink = Sink::all();
        let _ = self.run(axiom, &mut sink);
        sink.found
    }

    pub fn passes(&self, axiom: AxiomId) -> bool {
        self.check(axiom).pass
    }

    pub fn satisfies_all(&self, axioms: &[AxiomId]) -> bool {
        axioms.iter().all(|&a| self.passes(a))
    }

    /// Dominance relation with respect to the closed revealed relation.
    pub fn dominance(&self) -> Dominance {
        Dominance::new(self.choice, &self.revealed_closure)
    }

    fn run(&self, axiom: AxiomId, sink: &mut Sink) -> ControlFlow<()> {
        match axiom {
            AxiomId::Nc => self.never_chosen(sink),
            AxiomId::WccStar => self.contraction(sink),
            AxiomId::NbcStar => self.revealed_cycles(sink),
            AxiomId::RWarp => self.reject_warp(sink),
            AxiomId::RSarp => self.reject_sarp(sink),
            AxiomId::RWarpStar => self.flip_chains(sink, FlipAxiom::RWarpStar),
            AxiomId::Wwarp => self.flip_chains(sink, FlipAxiom::Wwarp),
            AxiomId::Warp => self.warp(sink),
            AxiomId::Expansion => self.expansion(sink, false),
            AxiomId::NegativeExpansion => self.expansion(sink, true),
            AxiomId::AlwaysChosen => self.always_chosen(sink),
            AxiomId::Nbc => match self.pairwise.find_cycle() {
                Some(cycle) => sink.push(Witness::BinaryCycle { cycle }),
                None => ControlFlow::Continue(()),
            },
            AxiomId::Exclusivity => self.exclusivity(sink),
        }
    }

    fn menus(&self) -> impl Iterator<Item = Menu> {
        Menu::all_by_size(self.choice.size())
            .into_iter()
            .filter(|m| m.len() >= 2)
    }

    fn never_chosen(&self, sink: &mut Sink) -> ControlFlow<()> {
        for menu in self.menus() {
            let x = self.choice.choice(menu);
            if self.pairwise.successors(x).intersection(menu).is_empty() {
                sink.push(Witness::NeverChosen { menu, chosen: x })?;
            }
        }
        ControlFlow::Continue(())
    }

    fn contraction(&self, sink: &mut Sink) -> ControlFlow<()> {
        let c = self.choice;
        for menu in self.menus().filter(|m| m.len() >= 3) {
            let x = c.choice(menu);
            for y in menu.without(x).iter() {
                let keeps = menu
                    .without(x)
                    .without(y)
                    .iter()
                    .any(|z| matches!(c.choice(menu.without(z)), v if v == x || v == y));
                if !keeps {
                    sink.push(Witness::Contraction { menu, pair: (x, y) })?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn revealed_cycles(&self, sink: &mut Sink) -> ControlFlow<()> {
        for (a, b) in self.revealed_closure.pairs() {
            if !self.pairwise.contains(a, b) {
                let chain = self
                    .revealed
                    .shortest_path(a, b)
                    .expect("closure pair has a path");
                sink.push(Witness::RevealedChain { chain })?;
            }
        }
        ControlFlow::Continue(())
    }

    fn reject_warp(&self, sink: &mut Sink) -> ControlFlow<()> {
        let d = self.dominance();
        for (x, y) in d.relation.pairs() {
            if x < y && d.relation.contains(y, x) {
                sink.push(Witness::DominanceCycle {
                    steps: vec![d.step(x, y), d.step(y, x)],
                })?;
            }
        }
        ControlFlow::Continue(())
    }

    fn reject_sarp(&self, sink: &mut Sink) -> ControlFlow<()> {
        let d = self.dominance();
        match d.relation.find_cycle() {
            Some(cycle) => {
                let steps = (0..cycle.len())
                    .map(|i| d.step(cycle[i], cycle[(i + 1) % cycle.len()]))
                    .collect();
                sink.push(Witness::DominanceCycle { steps })
            }
            None => ControlFlow::Continue(()),
        }
    }

    fn flip_chains(&self, sink: &mut Sink, axiom: FlipAxiom) -> ControlFlow<()> {
        let c = self.choice;
        let n = c.size();
        let size = 1usize << n;
        let mut below = vec![false; size];
        let mut above = vec![false; size];
        for (x, y) in self.pairwise.pairs() {
            let pair = Menu::pair(x, y);
            let contains_pair = |m: usize| m as u16 & pair.bits() == pair.bits();
            // below[S]: some {x,y} ⊆ S' ⊆ S has C(S') = y
            for m in 1..size {
                below[m] = contains_pair(m)
                    && (c.choice(Menu::from_bits(m as u16)) == y
                        || Menu::from_bits(m as u16)
                            .difference(pair)
                            .iter()
                            .any(|i| below[m & !(1 << i)]));
            }
            if axiom == FlipAxiom::RWarpStar {
                // above[S]: some S'' ⊇ S has C(S'') = y
                for m in (1..size).rev() {
                    above[m] = contains_pair(m)
                        && (c.choice(Menu::from_bits(m as u16)) == y
                            || (0..n)
                                .filter(|&i| m & (1 << i) == 0)
                                .any(|i| above[m | (1 << i)]));
                }
            }
            let candidates = Menu::all_by_size(n)
                .into_iter()
                .filter(|s| c.choice(*s) == x && below[s.bits() as usize]);
            for s in candidates {
                let inner = first_menu(n, |m| {
                    pair.is_subset_of(m) && m.is_subset_of(s) && c.choice(m) == y
                })
                .expect("below[] guarantees an inner menu");
                match axiom {
                    FlipAxiom::Wwarp => sink.push(Witness::Chain {
                        pair: (x, y),
                        menus: vec![pair, inner, s],
                    })?,
                    FlipAxiom::RWarpStar if above[s.bits() as usize] => {
                        let outer = first_menu(n, |m| s.is_subset_of(m) && c.choice(m) == y)
                            .expect("above[] guarantees an outer menu");
                        sink.push(Witness::Chain {
                            pair: (x, y),
                            menus: vec![pair, inner, s, outer],
                        })?
                    }
                    FlipAxiom::RWarpStar => {}
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn warp(&self, sink: &mut Sink) -> ControlFlow<()> {
        let c = self.choice;
        let n = c.size();
        let mut chosen_over = [Menu::EMPTY; MAX_ALTERNATIVES];
        for menu in self.menus() {
            let x = c.choice(menu);
            chosen_over[x] = chosen_over[x].union(menu.without(x));
        }
        for x in 0..n {
            for y in (x + 1..n).filter(|&y| chosen_over[x].contains(y)) {
                if chosen_over[y].contains(x) {
                    let pair = Menu::pair(x, y);
                    let find = |who| {
                        first_menu(n, |m| pair.is_subset_of(m) && c.choice(m) == who)
                            .expect("chosen_over records a menu")
                    };
                    sink.push(Witness::Chain {
                        pair: (x, y),
                        menus: vec![find(x), find(y)],
                    })?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn expansion(&self, sink: &mut Sink, negative: bool) -> ControlFlow<()> {
        let c = self.choice;
        let n = c.size();
        let mut by_choice: Vec<Vec<Menu>> = vec![Vec::new(); n];
        for menu in self.menus() {
            by_choice[c.choice(menu)].push(menu);
        }
        for (x, menus) in by_choice.iter().enumerate() {
            for (i, &first) in menus.iter().enumerate() {
                for &second in &menus[i + 1..] {
                    let winner = c.choice(first.union(second));
                    if winner == x {
                        continue;
                    }
                    if !negative {
                        sink.push(Witness::Expansion {
                            first,
                            second,
                            chosen: x,
                        })?;
                    } else if first.intersection(second).contains(winner) {
                        sink.push(Witness::NegativeExpansion {
                            first,
                            second,
                            pair: (x, winner),
                        })?;
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn always_chosen(&self, sink: &mut Sink) -> ControlFlow<()> {
        for menu in self.menus() {
            let winner = menu
                .iter()
                .find(|&x| menu.without(x).is_subset_of(self.pairwise.successors(x)));
            if let Some(winner) = winner {
                if self.choice.choice(menu) != winner {
                    sink.push(Witness::AlwaysChosen { menu, winner })?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn exclusivity(&self, sink: &mut Sink) -> ControlFlow<()> {
        if !sink.all {
            if let Some((weak, strong)) = check_exclusivity_with(&self.reversals).witness {
                sink.push(Witness::Exclusivity { weak, strong })?;
            }
            return ControlFlow::Continue(());
        }
        for weak in self
            .reversals
            .iter()
            .filter(|r| r.kind == ReversalKind::Weak)
        {
            for strong in self
                .reversals
                .iter()
                .filter(|r| r.kind == ReversalKind::Strong && r.pair == weak.pair)
            {
                sink.push(Witness::Exclusivity {
                    weak: *weak,
                    strong: *strong,
                })?;
            }
        }
        ControlFlow::Continue(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FlipAxiom {
    Wwarp,
    RWarpStar,
}

fn first_menu(n: usize, pred: impl Fn(Menu) -> bool) -> Option<Menu> {
    Menu::all_by_size(n).into_iter().find(|&m| pred(m))
}

struct Sink {
    all: bool,
    found: Vec<Witness>,
}

impl Sink {
    fn first() -> Self {
        Sink {
            all: false,
            found: Vec::new(),
        }
    }

    fn all() -> Self {
        Sink {
            all: true,
            found: Vec::new(),
        }
    }

    fn push(&mut self, w: Witness) -> ControlFlow<()> {
        self.found.push(w);
        if self.all {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    }
}

/// Single-axiom convenience wrapper around [`Context::check`].
pub fn check(c: &ChoiceFunction, axiom: AxiomId) -> AxiomVerdict {
    Context::new(c).check(axiom)
}

impl Witness {
    /// Re-derives the violation from `c` alone: true iff this witness really
    /// falsifies `axiom`.
    pub fn refutes(&self, c: &ChoiceFunction, axiom: AxiomId) -> bool {
        let n = c.size();
        let in_range = |m: &Menu| !m.is_empty() && m.is_subset_of(Menu::full(n));
        let beats = |a: usize, b: usize| a != b && c.pair_choice(a, b) == a;
        match (axiom, self) {
            (AxiomId::Nc, Witness::NeverChosen { menu, chosen }) => {
                in_range(menu)
                    && menu.len() >= 2
                    && c.choice(*menu) == *chosen
                    && menu.without(*chosen).iter().all(|y| !beats(*chosen, y))
            }
            (AxiomId::WccStar, Witness::Contraction { menu, pair: (x, y) }) => {
                let in_pair = |v: usize| v == *x || v == *y;
                in_range(menu)
                    && x != y
                    && Menu::pair(*x, *y).is_subset_of(*menu)
                    && menu.len() >= 3
                    && in_pair(c.choice(*menu))
                    && menu
                        .without(*x)
                        .without(*y)
                        .iter()
                        .all(|z| !in_pair(c.choice(menu.without(z))))
            }
            (AxiomId::NbcStar, Witness::RevealedChain { chain }) => {
                let revealed = revealed_from_reversals(n, &find_reversals(c));
                chain.len() >= 2
                    && chain.iter().all(|&a| a < n)
                    && chain.windows(2).all(|w| revealed.contains(w[0], w[1]))
                    && !beats(chain[0], *chain.last().unwrap())
            }
            (AxiomId::RWarp | AxiomId::RSarp, Witness::DominanceCycle { steps }) => {
                let closure = revealed_from_reversals(n, &find_reversals(c)).transitive_closure();
                let distinct = {
                    let set: Menu = steps.iter().map(|s| s.chosen).collect();
                    set.len() == steps.len()
                };
                let len_ok = match axiom {
                    AxiomId::RWarp => steps.len() == 2,
                    _ => steps.len() >= 2,
                };
                len_ok
                    && distinct
                    && steps.iter().enumerate().all(|(i, s)| {
                        let next = &steps[(i + 1) % steps.len()];
                        in_range(&s.menu)
                            && s.over == next.chosen
                            && s.over != s.chosen
                            && s.menu.contains(s.over)
                            && c.choice(s.menu) == s.chosen
                            && !closure.minimal_set(s.menu).contains(s.over)
                    })
            }
            (
                AxiomId::Warp,
                Witness::Chain {
                    pair: (x, y),
                    menus,
                },
            ) => {
                let pair = Menu::pair(*x, *y);
                x != y
                    && menus.len() == 2
                    && menus.iter().all(|m| in_range(m) && pair.is_subset_of(*m))
                    && c.choice(menus[0]) == *x
                    && c.choice(menus[1]) == *y
            }
            (
                AxiomId::Wwarp,
                Witness::Chain {
                    pair: (x, y),
                    menus,
                },
            ) => {
                let pair = Menu::pair(*x, *y);
                x != y
                    && menus.len() == 3
                    && menus.iter().all(in_range)
                    && menus[0] == pair
                    && pair.is_subset_of(menus[1])
                    && menus[1].is_subset_of(menus[2])
                    && c.choice(pair) == *x
                    && c.choice(menus[1]) == *y
                    && c.choice(menus[2]) == *x
            }
            (
                AxiomId::RWarpStar,
                Witness::Chain {
                    pair: (x, y),
                    menus,
                },
            ) => {
                let pair = Menu::pair(*x, *y);
                x != y
                    && menus.len() == 4
                    && menus.iter().all(in_range)
                    && menus[0] == pair
                    && menus.windows(2).all(|w| w[0].is_subset_of(w[1]))
                    && c.choice(pair) == *x
                    && c.choice(menus[1]) == *y
                    && c.choice(menus[2]) == *x
                    && c.choice(menus[3]) == *y
            }
            (
                AxiomId::Expansion,
                Witness::Expansion {
                    first,
                    second,
                    chosen,
                },
            ) => {
                in_range(first)
                    && in_range(second)
                    && c.choice(*first) == *chosen
                    && c.choice(*second) == *chosen
                    && c.choice(first.union(*second)) != *chosen
            }
            (
                AxiomId::NegativeExpansion,
                Witness::NegativeExpansion {
                    first,
                    second,
                    pair: (x, y),
                },
            ) => {
                let pair = Menu::pair(*x, *y);
                x != y
                    && in_range(first)
                    && in_range(second)
                    && pair.is_subset_of(first.intersection(*second))
                    && c.choice(*first) == *x
                    && c.choice(*second) == *x
                    && c.choice(first.union(*second)) == *y
            }
            (AxiomId::AlwaysChosen, Witness::AlwaysChosen { menu, winner }) => {
                in_range(menu)
                    && menu.contains(*winner)
                    && menu.without(*winner).iter().all(|y| beats(*winner, y))
                    && c.choice(*menu) != *winner
            }
            (AxiomId::Nbc, Witness::BinaryCycle { cycle }) => {
                cycle.len() >= 3
                    && cycle.iter().all(|&a| a < n)
                    && (0..cycle.len()).all(|i| beats(cycle[i], cycle[(i + 1) % cycle.len()]))
            }
            (AxiomId::Exclusivity, Witness::Exclusivity { weak, strong }) => {
                weak.kind == ReversalKind::Weak
                    && strong.kind == ReversalKind::Strong
                    && weak.pair == strong.pair
                    && weak.holds_in(c)
                    && strong.holds_in(c)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReversalSummary {
    pub weak: usize,
    pub strong: usize,
    /// Pairs `(x, y)` with an `x, y, x` flip sequence along nested menus.
    pub double_reversal_pairs: Vec<(usize, usize)>,
}

impl ReversalSummary {
    pub fn new(c: &ChoiceFunction, reversals: &[Reversal]) -> Self {
        let n = c.size();
        let count = |k| reversals.iter().filter(|r| r.kind == k).count();
        ReversalSummary {
            weak: count(ReversalKind::Weak),
            strong: count(ReversalKind::Strong),
            double_reversal_pairs: (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .filter(|&(x, y)| double_reversal(c, x, y).is_some())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub alternatives: Vec<String>,
    pub axioms: BTreeMap<AxiomId, AxiomVerdict>,
    pub reversals: ReversalSummary,
    /// NC, WCC*, NBC* and R-WARP all pass.
    pub cbr_representable: bool,
    /// NC, WCC*, NBC* and R-SARP all pass.
    pub tcbr_representable: bool,
}

/// All thirteen verdicts plus reversal counts and representability flags.
pub fn report(c: &ChoiceFunction) -> AnalysisReport {
    let ctx = Context::new(c);
    let axioms: BTreeMap<AxiomId, AxiomVerdict> =
        AxiomId::ALL.iter().map(|&a| (a, ctx.check(a))).collect();
    let all_pass = |ids: &[AxiomId]| ids.iter().all(|a| axioms[a].pass);
    AnalysisReport {
        alternatives: c.universe().labels().to_vec(),
        cbr_representable: all_pass(&AxiomId::CBR),
        tcbr_representable: all_pass(&AxiomId::TCBR),
        reversals: ReversalSummary::new(c, &ctx.reversals),
        axioms,
    }
}

/// Exclusivity verdict straight from the reversal scan.
pub fn exclusivity(c: &ChoiceFunction) -> AxiomVerdict {
    let v = reversals::check_exclusivity(c);
    AxiomVerdict {
        axiom: AxiomId::Exclusivity,
        pass: v.pass,
        witness: v
            .witness
            .map(|(weak, strong)| Witness::Exclusivity { weak, strong }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::relations::Universe;

    fn failing(c: &ChoiceFunction) -> Vec<AxiomId> {
        let ctx = Context::new(c);
        AxiomId::CBR
            .into_iter()
            .filter(|&a| !ctx.passes(a))
            .collect()
    }

    #[test]
    fn independence_tables_under_literal_definitions() {
        // The three-element table also reveals x over z while z beats x pairwise,
        // and the cyclic table's revealed closure is cyclic, which breaks R-WARP too.
        assert_eq!(
            failing(&fixtures::violates_never_chosen()),
            vec![AxiomId::Nc, AxiomId::NbcStar]
        );
        assert_eq!(
            failing(&fixtures::violates_contraction()),
            vec![AxiomId::WccStar]
        );
        assert_eq!(
            failing(&fixtures::violates_no_binary_cycles()),
            vec![AxiomId::NbcStar, AxiomId::RWarp]
        );
        assert_eq!(
            failing(&fixtures::violates_reject_warp()),
            vec![AxiomId::RWarp]
        );
        assert!(failing(&fixtures::two_reversal_table()).is_empty());
    }

    #[test]
    fn revealed_chain_witness_replays() {
        let c = fixtures::violates_never_chosen();
        let w = check(&c, AxiomId::NbcStar).witness.unwrap();
        assert_eq!(w, Witness::RevealedChain { chain: vec![0, 2] });
        assert!(w.refutes(&c, AxiomId::NbcStar));
    }

    #[test]
    fn never_chosen_witness_names_the_triple() {
        let c = fixtures::violates_never_chosen();
        let v = check(&c, AxiomId::Nc);
        assert_eq!(
            v.witness,
            Some(Witness::NeverChosen {
                menu: Menu::full(3),
                chosen: 0
            })
        );
        assert!(v.witness.unwrap().refutes(&c, AxiomId::Nc));
    }

    #[test]
    fn rational_choice_passes_everything() {
        let c = fixtures::rational(Universe::with_size(4), &[1, 3, 0, 2]);
        let r = report(&c);
        assert!(r.axioms.values().all(|v| v.pass));
        assert!(r.cbr_representable && r.tcbr_representable);
        assert_eq!(r.reversals.weak + r.reversals.strong, 0);
    }

    #[test]
    fn two_reversal_table_report() {
        let r = report(&fixtures::two_reversal_table());
        assert!(r.cbr_representable);
        assert!(!r.axioms[&AxiomId::Wwarp].pass);
        assert!(!r.axioms[&AxiomId::Warp].pass);
        assert!(!r.axioms[&AxiomId::Nbc].pass);
        assert!(r.axioms[&AxiomId::RWarpStar].pass);
        assert_eq!(r.reversals.weak, 1);
        assert_eq!(r.reversals.strong, 1);
        assert_eq!(r.reversals.double_reversal_pairs, vec![(0, 1)]);
        let json = serde_json::to_string(&r).unwrap();
        let back: AnalysisReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn reject_warp_failure_is_a_dominance_two_cycle() {
        let c = fixtures::violates_reject_warp();
        let v = check(&c, AxiomId::RWarp);
        match &v.witness {
            Some(Witness::DominanceCycle { steps }) => assert_eq!(steps.len(), 2),
            other => panic!("unexpected witness {other:?}"),
        }
        assert!(v.witness.unwrap().refutes(&c, AxiomId::RWarp));
        assert!(!check(&c, AxiomId::RSarp).pass);
    }

    #[test]
    fn witnesses_do_not_replay_against_other_axioms() {
        let c = fixtures::violates_never_chosen();
        let w = check(&c, AxiomId::Nc).witness.unwrap();
        assert!(!w.refutes(&c, AxiomId::WccStar));
    }

    #[test]
    fn axiom_ids_parse_loosely() {
        assert_eq!("wcc*".parse::<AxiomId>(), Ok(AxiomId::WccStar));
        assert_eq!("R-WARP".parse::<AxiomId>(), Ok(AxiomId::RWarp));
        assert_eq!(
            "negative_expansion".parse::<AxiomId>(),
            Ok(AxiomId::NegativeExpansion)
        );
        assert!("bogus".parse::<AxiomId>().is_err());
        for a in AxiomId::ALL {
            let json = serde_json::to_string(&a).unwrap();
            assert_eq!(json, format!("\"{}\"", a.id()));
        }
    }

    #[test]
    fn exhaustive_mode_finds_every_never_chosen_menu() {
        let c = fixtures::violates_never_chosen();
        let ctx = Context::new(&c);
        let all = ctx.witnesses(AxiomId::Nc);
        assert_eq!(all.len(), 1);
        assert!(!ctx.witnesses(AxiomId::Warp).is_empty());
    }
}
