//! Choice functions over a finite universe and their JSON document format.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::relations::{BinaryRelation, Menu, Universe, UniverseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChoiceError {
    #[error("menu {menu} has no recorded choice")]
    MissingMenu { menu: String },
    #[error("menu {menu} is listed more than once")]
    DuplicateMenu { menu: String },
    #[error("menu {menu}: choice {choice:?} is not a member of the menu")]
    ChoiceNotInMenu { menu: String, choice: String },
    #[error("menu {menu}: unknown alternative {label:?}")]
    UnknownAlternative { menu: String, label: String },
    #[error("malformed choice document: {0}")]
    MalformedDocument(String),
}

impl From<UniverseError> for ChoiceError {
    fn from(e: UniverseError) -> Self {
        ChoiceError::MalformedDocument(e.to_string())
    }
}

/// Total single-valued choice: every nonempty menu maps to one of its members.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChoiceFunction {
    universe: Universe,
    /// Indexed by menu mask; entry 0 is unused.
    choices: Vec<u8>,
}

impl ChoiceFunction {
    /// Builds `C` by evaluating `f` on every menu with at least two members.
    /// Singletons are forced to their sole member.
    pub fn from_fn(
        universe: Universe,
        mut f: impl FnMut(Menu) -> usize,
    ) -> Result<Self, ChoiceError> {
        let n = universe.len();
        let mut choices = vec![u8::MAX; 1 << n];
        for bits in 1..(1u32 << n) {
            let menu = Menu::from_bits(bits as u16);
            let pick = match menu.sole() {
                Some(a) => a,
                None => f(menu),
            };
            if !menu.contains(pick) {
                return Err(ChoiceError::ChoiceNotInMenu {
                    menu: universe.format_menu(menu),
                    choice: universe
                        .labels()
                        .get(pick)
                        .cloned()
                        .unwrap_or_else(|| format!("#{pick}")),
                });
            }
            choices[bits as usize] = pick as u8;
        }
        Ok(ChoiceFunction { universe, choices })
    }

    /// Builds `C` from a raw table indexed by menu mask (singleton entries are ignored).
    pub fn from_table(universe: Universe, table: &[u8]) -> Result<Self, ChoiceError> {
        if table.len() != 1 << universe.len() {
            return Err(ChoiceError::MalformedDocument(format!(
                "table has {} entries, expected {}",
                table.len(),
                1usize << universe.len()
            )));
        }
        ChoiceFunction::from_fn(universe, |m| table[m.bits() as usize] as usize)
    }

    /// Builds `C` from `(menu labels, choice label)` rows; a convenience for
    /// small hand-written tables.
    pub fn from_rows<'a, I>(universe: Universe, rows: I) -> Result<Self, ChoiceError>
    where
        I: IntoIterator<Item = (&'a [&'a str], &'a str)>,
    {
        let doc = ChoiceDocument {
            alternatives: universe.labels().to_vec(),
            choices: rows
                .into_iter()
                .map(|(menu, choice)| ChoiceEntry {
                    menu: menu.iter().map(|s| s.to_string()).collect(),
                    choice: choice.to_string(),
                })
                .collect(),
        };
        ChoiceFunction::from_document(doc)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    /// `C(menu)`; `menu` must be a nonempty menu over this universe.
    pub fn choice(&self, menu: Menu) -> usize {
        debug_assert!(!menu.is_empty() && menu.is_subset_of(self.universe.full_menu()));
        self.choices[menu.bits() as usize] as usize
    }

    /// `C({a, b})`.
    pub fn pair_choice(&self, a: usize, b: usize) -> usize {
        self.choice(Menu::pair(a, b))
    }

    /// Raw table indexed by menu mask.
    pub fn table(&self) -> &[u8] {
        &self.choices
    }

    /// The base relation: `(a, b)` iff `C({a, b}) = a`.
    pub fn pairwise(&self) -> BinaryRelation {
        let n = self.size();
        let mut rel = BinaryRelation::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                let w = self.pair_choice(a, b);
                let l = if w == a { b } else { a };
                rel.insert(w, l);
            }
        }
        rel
    }

    /// Menus with at least two members, by size then by member indices.
    pub fn nontrivial_menus(&self) -> Vec<Menu> {
        let mut menus: Vec<Menu> = Menu::nontrivial(self.size()).collect();
        menus.sort_by_key(|m| (m.len(), m.iter().collect::<Vec<_>>()));
        menus
    }

    pub fn parse(text: &str) -> Result<Self, ChoiceError> {
        let doc: ChoiceDocument = serde_json::from_str(text)
            .map_err(|e| ChoiceError::MalformedDocument(e.to_string()))?;
        ChoiceFunction::from_document(doc)
    }

    pub fn from_document(doc: ChoiceDocument) -> Result<Self, ChoiceError> {
        let universe = Universe::new(doc.alternatives)?;
        let n = universe.len();
        let mut choices = vec![u8::MAX; 1 << n];
        for entry in &doc.choices {
            let shown = format!("[{}]", entry.menu.join(","));
            let mut menu = Menu::EMPTY;
            for label in &entry.menu {
                let a =
                    universe
                        .index_of(label)
                        .ok_or_else(|| ChoiceError::UnknownAlternative {
                            menu: shown.clone(),
                            label: label.clone(),
                        })?;
                if menu.contains(a) {
                    return Err(ChoiceError::MalformedDocument(format!(
                        "menu {shown} lists {label:?} twice"
                    )));
                }
                menu = menu.with(a);
            }
            if menu.is_empty() {
                return Err(ChoiceError::MalformedDocument("empty menu".into()));
            }
            let shown = universe.format_menu(menu);
            let pick = universe.index_of(&entry.choice).ok_or_else(|| {
                ChoiceError::UnknownAlternative {
                    menu: shown.clone(),
                    label: entry.choice.clone(),
                }
            })?;
            if !menu.contains(pick) {
                return Err(ChoiceError::ChoiceNotInMenu {
                    menu: shown,
                    choice: entry.choice.clone(),
                });
            }
            let slot = &mut choices[menu.bits() as usize];
            if *slot != u8::MAX {
                return Err(ChoiceError::DuplicateMenu { menu: shown });
            }
            *slot = pick as u8;
        }
        for menu in Menu::all_by_size(n) {
            let slot = &mut choices[menu.bits() as usize];
            match menu.sole() {
                Some(a) => *slot = a as u8,
                None if *slot == u8::MAX => {
                    return Err(ChoiceError::MissingMenu {
                        menu: universe.format_menu(menu),
                    })
                }
                None => {}
            }
        }
        Ok(ChoiceFunction { universe, choices })
    }

    /// Canonical document: singletons omitted, menus by size then member order.
    pub fn to_document(&self) -> ChoiceDocument {
        ChoiceDocument {
            alternatives: self.universe.labels().to_vec(),
            choices: self
                .nontrivial_menus()
                .into_iter()
                .map(|m| ChoiceEntry {
                    menu: self.universe.menu_labels(m),
                    choice: self.universe.label(self.choice(m)).to_string(),
                })
                .collect(),
        }
    }

    pub fn serialize(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    /// One-line `{x,y}:x {x,z}:z ...` rendering of the non-singleton menus.
    pub fn compact(&self) -> String {
        self.nontrivial_menus()
            .into_iter()
            .map(|m| {
                format!(
                    "{}:{}",
                    self.universe.format_menu(m),
                    self.universe.label(self.choice(m))
                )
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for ChoiceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChoiceFunction({})", self.compact())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceDocument {
    pub alternatives: Vec<String>,
    pub choices: Vec<ChoiceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceEntry {
    pub menu: Vec<String>,
    pub choice: String,
}
