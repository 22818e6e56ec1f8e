//! Human-readable rendering of reports, labeled by the universe of the input.

use cbr_core::axioms::Witness;
use cbr_core::reversals::ReversalChain;
use cbr_core::{BinaryRelation, ChoiceFunction, Menu, Reversal, ReversalKind};

pub struct Labels<'a> {
    c: &'a ChoiceFunction,
}

impl<'a> Labels<'a> {
    pub fn new(c: &'a ChoiceFunction) -> Self {
        Labels { c }
    }

    pub fn alt(&self, a: usize) -> &str {
        self.c.universe().label(a)
    }

    pub fn menu(&self, m: Menu) -> String {
        self.c.universe().format_menu(m)
    }

    pub fn relation(&self, r: &BinaryRelation) -> String {
        self.c.universe().format_relation(r)
    }

    pub fn pair(&self, (a, b): (usize, usize)) -> String {
        format!("({},{})", self.alt(a), self.alt(b))
    }

    fn choice(&self, m: Menu) -> String {
        format!("C({}) = {}", self.menu(m), self.alt(self.c.choice(m)))
    }

    fn path(&self, items: &[usize]) -> String {
        items
            .iter()
            .map(|&a| self.alt(a))
            .collect::<Vec<_>>()
            .join(" > ")
    }

    pub fn reversal(&self, r: &Reversal) -> String {
        let kind = match r.kind {
            ReversalKind::Weak => "weak",
            ReversalKind::Strong => "strong",
        };
        format!(
            "{kind} {} reversal due to {} on {}",
            self.pair(r.pair),
            self.alt(r.trigger),
            self.menu(r.base)
        )
    }

    pub fn chain(&self, chain: &ReversalChain) -> String {
        chain
            .menus
            .iter()
            .map(|&m| self.choice(m))
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn witness(&self, w: &Witness) -> String {
        match w {
            Witness::NeverChosen { menu, chosen } => format!(
                "{} although {} loses every pair in the menu",
                self.choice(*menu),
                self.alt(*chosen)
            ),
            Witness::Contraction { menu, pair } => format!(
                "{} lies in {} but no single removal outside the pair keeps the choice in it",
                self.choice(*menu),
                self.pair(*pair)
            ),
            Witness::RevealedChain { chain } => format!(
                "revealed chain {} contradicts pairwise choice",
                self.path(chain)
            ),
            Witness::DominanceCycle { steps } => {
                let parts: Vec<String> = steps
                    .iter()
                    .map(|s| {
                        format!(
                            "{} over {} in {}",
                            self.alt(s.chosen),
                            self.alt(s.over),
                            self.menu(s.menu)
                        )
                    })
                    .collect();
                format!("dominance cycle: {}", parts.join("; "))
            }
            Witness::Chain { pair, menus } => {
                let parts: Vec<String> = menus.iter().map(|&m| self.choice(m)).collect();
                format!("flips on {}: {}", self.pair(*pair), parts.join(", "))
            }
            Witness::Expansion { first, second, .. } => format!(
                "{} and {} but {}",
                self.choice(*first),
                self.choice(*second),
                self.choice(first.union(*second))
            ),
            Witness::NegativeExpansion {
                first,
                second,
                pair,
            } => format!(
                "{} and {} with {} in both, yet {}",
                self.choice(*first),
                self.choice(*second),
                self.alt(pair.1),
                self.choice(first.union(*second))
            ),
            Witness::AlwaysChosen { menu, winner } => format!(
                "{} beats every member of {} pairwise but {}",
                self.alt(*winner),
                self.menu(*menu),
                self.choice(*menu)
            ),
            Witness::BinaryCycle { cycle } => {
                let mut closed = cycle.clone();
                closed.extend(cycle.first());
                format!("pairwise cycle {}", self.path(&closed))
            }
            Witness::Exclusivity { weak, strong } => {
                format!("{} and {}", self.reversal(weak), self.reversal(strong))
            }
        }
    }
}
