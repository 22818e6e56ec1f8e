//! Two-stage representations: evaluation of a rationale pair on menus,
//! synthesis of the canonical pair from choice data, and verification.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{AxiomId, AxiomVerdict, Context, Dominance};
use crate::choice::ChoiceFunction;
use crate::relations::{BinaryRelation, Menu, Universe, UniverseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Flavor {
    /// Reject the minimal set of `R`, then maximize a tournament `P`.
    Cbr,
    /// As `Cbr` with `P` a linear order.
    Tcbr,
    /// Maximize by `P1`, then by `P2`; both merely asymmetric.
    Rsm,
    /// As `Rsm` with both rationales transitive.
    Tsm,
    /// Drop the unique worst element by one linear order, maximize another.
    Eph,
}

impl Flavor {
    pub const ALL: [Flavor; 5] = [
        Flavor::Cbr,
        Flavor::Tcbr,
        Flavor::Rsm,
        Flavor::Tsm,
        Flavor::Eph,
    ];

    /// Returns the violated requirement, if any.
    fn check(self, first: &BinaryRelation, second: &BinaryRelation) -> Result<(), &'static str> {
        let require = |ok: bool, msg| if ok { Ok(()) } else { Err(msg) };
        match self {
            Flavor::Cbr | Flavor::Tcbr => {
                require(
                    first.is_strict_partial_order(),
                    "R must be transitive and asymmetric",
                )?;
                if self == Flavor::Tcbr {
                    require(second.is_linear_order(), "P must be a linear order")
                } else {
                    require(second.is_tournament(), "P must be complete and asymmetric")
                }
            }
            Flavor::Rsm => require(
                first.is_asymmetric() && second.is_asymmetric(),
                "both rationales must be asymmetric",
            ),
            Flavor::Tsm => require(
                first.is_strict_partial_order() && second.is_strict_partial_order(),
                "both rationales must be transitive and asymmetric",
            ),
            Flavor::Eph => require(
                first.is_linear_order() && second.is_linear_order(),
                "both rationales must be linear orders",
            ),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Cbr => "CBR",
            Flavor::Tcbr => "TCBR",
            Flavor::Rsm => "RSM",
            Flavor::Tsm => "TSM",
            Flavor::Eph => "EPH",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentationError {
    #[error("rationales have sizes {first} and {second}")]
    SizeMismatch { first: usize, second: usize },
    #[error("{flavor} pair rejected: {reason}")]
    FlavorInvariant { flavor: Flavor, reason: String },
    #[error("no unique choice on menus {}", menus.join(", "))]
    InvalidRepresentation { menus: Vec<String> },
    #[error("unknown alternative {0:?}")]
    UnknownAlternative(String),
    #[error("malformed representation: {0}")]
    Malformed(String),
}

impl From<UniverseError> for RepresentationError {
    fn from(e: UniverseError) -> Self {
        RepresentationError::Malformed(e.to_string())
    }
}

/// Outcome of evaluating a pair on one menu.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluation {
    Chosen(usize),
    /// The last maximal set is empty or has several members.
    NoUniqueChoice,
}

impl Evaluation {
    pub fn chosen(self) -> Option<usize> {
        match self {
            Evaluation::Chosen(a) => Some(a),
            Evaluation::NoUniqueChoice => None,
        }
    }
}

/// A first rationale `R` and a second rationale `P` interpreted under `flavor`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepresentationPair {
    pub flavor: Flavor,
    pub first: BinaryRelation,
    pub second: BinaryRelation,
}

impl RepresentationPair {
    pub fn new(
        flavor: Flavor,
        first: BinaryRelation,
        second: BinaryRelation,
    ) -> Result<Self, RepresentationError> {
        if first.size() != second.size() {
            return Err(RepresentationError::SizeMismatch {
                first: first.size(),
                second: second.size(),
            });
        }
        flavor
            .check(&first, &second)
            .map_err(|reason| RepresentationError::FlavorInvariant {
                flavor,
                reason: reason.to_string(),
            })?;
        Ok(RepresentationPair::new_unchecked(flavor, first, second))
    }

    /// Skips the flavor checks; callers guarantee them.
    pub fn new_unchecked(flavor: Flavor, first: BinaryRelation, second: BinaryRelation) -> Self {
        RepresentationPair {
            flavor,
            first,
            second,
        }
    }

    pub fn size(&self) -> usize {
        self.first.size()
    }

    pub fn eval(&self, menu: Menu) -> Evaluation {
        match evaluate(self.flavor, &self.first, &self.second, menu) {
            Some(a) => Evaluation::Chosen(a),
            None => Evaluation::NoUniqueChoice,
        }
    }

    /// The raw choice table indexed by menu mask, or `None` as soon as some
    /// menu has no unique choice.
    pub fn induced_table(&self) -> Option<Vec<u8>> {
        induced_table(self.flavor, &self.first, &self.second)
    }

    pub fn induced_choice(
        &self,
        universe: &Universe,
    ) -> Result<ChoiceFunction, RepresentationError> {
        if universe.len() != self.size() {
            return Err(RepresentationError::SizeMismatch {
                first: universe.len(),
                second: self.size(),
            });
        }
        let failing: Vec<String> = Menu::all_by_size(self.size())
            .into_iter()
            .filter(|&m| self.eval(m) == Evaluation::NoUniqueChoice)
            .map(|m| universe.format_menu(m))
            .collect();
        if !failing.is_empty() {
            return Err(RepresentationError::InvalidRepresentation { menus: failing });
        }
        Ok(ChoiceFunction::from_fn(universe.clone(), |m| {
            self.eval(m).chosen().expect("checked above")
        })
        .expect("evaluation stays inside the menu"))
    }

    pub fn to_document(&self, universe: &Universe) -> RepresentationDocument {
        RepresentationDocument {
            alternatives: universe.labels().to_vec(),
            flavor: self.flavor,
            first: universe.labeled_pairs(&self.first),
            second: universe.labeled_pairs(&self.second),
        }
    }

    pub fn from_document(
        doc: &RepresentationDocument,
    ) -> Result<(Universe, RepresentationPair), RepresentationError> {
        let universe = Universe::new(doc.alternatives.iter().cloned())?;
        let relation = |pairs: &[[String; 2]]| {
            let mut rel = BinaryRelation::empty(universe.len());
            for [a, b] in pairs {
                let idx = |l: &String| {
                    universe
                        .index_of(l)
                        .ok_or_else(|| RepresentationError::UnknownAlternative(l.clone()))
                };
                let (a, b) = (idx(a)?, idx(b)?);
                if a == b {
                    return Err(RepresentationError::Malformed(format!(
                        "reflexive pair on {:?}",
                        universe.label(a)
                    )));
                }
                rel.insert(a, b);
            }
            Ok(rel)
        };
        let pair =
            RepresentationPair::new(doc.flavor, relation(&doc.first)?, relation(&doc.second)?)?;
        Ok((universe, pair))
    }
}

/// Labeled JSON form of a [`RepresentationPair`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationDocument {
    pub alternatives: Vec<String>,
    pub flavor: Flavor,
    #[serde(rename = "R")]
    pub first: Vec<[String; 2]>,
    #[serde(rename = "P")]
    pub second: Vec<[String; 2]>,
}

/// Evaluation without constructing a pair.
pub fn evaluate(
    flavor: Flavor,
    first: &BinaryRelation,
    second: &BinaryRelation,
    menu: Menu,
) -> Option<usize> {
    match flavor {
        Flavor::Cbr | Flavor::Tcbr => {
            let shortlist = menu.difference(first.minimal_set(menu));
            second.maximal_set(shortlist).sole()
        }
        Flavor::Rsm | Flavor::Tsm => second.maximal_set(first.maximal_set(menu)).sole(),
        Flavor::Eph => {
            if let Some(a) = menu.sole() {
                return Some(a);
            }
            let worst = menu
                .iter()
                .filter(|&a| menu.without(a).is_subset_of(first.predecessors(a)))
                .collect::<Menu>()
                .sole()?;
            second.maximal_set(menu.without(worst)).sole()
        }
    }
}

/// Choice table indexed by menu mask, or `None` on the first menu without a
/// unique choice.
pub fn induced_table(
    flavor: Flavor,
    first: &BinaryRelation,
    second: &BinaryRelation,
) -> Option<Vec<u8>> {
    let n = first.size();
    let mut table = vec![u8::MAX; 1 << n];
    for bits in 1..(1u32 << n) {
        let menu = Menu::from_bits(bits as u16);
        table[bits as usize] = evaluate(flavor, first, second, menu)? as u8;
    }
    Some(table)
}

#[derive(Debug, Clone, Error)]
pub enum SynthesisError {
    #[error("axiom {} fails", .0.axiom)]
    AxiomFailure(Box<AxiomVerdict>),
    /// The construction produced a pair that breaks its own order guarantees.
    #[error("constructed pair breaks an order invariant: {reason}")]
    InternalInvariantBreach {
        reason: String,
        candidate: Box<RepresentationPair>,
    },
}

fn require_axioms(ctx: &Context<'_>, axioms: &[AxiomId]) -> Result<(), SynthesisError> {
    for &a in axioms {
        let verdict = ctx.check(a);
        if !verdict.pass {
            return Err(SynthesisError::AxiomFailure(Box::new(verdict)));
        }
    }
    Ok(())
}

fn breach(reason: &str, flavor: Flavor, r: BinaryRelation, p: BinaryRelation) -> SynthesisError {
    SynthesisError::InternalInvariantBreach {
        reason: reason.to_string(),
        candidate: Box::new(RepresentationPair::new_unchecked(flavor, r, p)),
    }
}

/// The canonical pair `(R^c, P1 ∪ P2)`: `R^c` closes the revealed relation,
/// `P1` records "chosen over a non-rejected alternative" and `P2` orders the
/// remaining pairs along `R^c`.
pub fn synthesize_cbr(c: &ChoiceFunction) -> Result<RepresentationPair, SynthesisError> {
    let ctx = Context::new(c);
    require_axioms(&ctx, &AxiomId::CBR)?;
    let r = ctx.revealed_closure;
    let p1 = Dominance::new(c, &r).relation;
    let p2 = r.difference(&p1.union(&p1.inverse()));
    let p = p1.union(&p2);
    if !r.is_strict_partial_order() {
        return Err(breach("R is not a strict partial order", Flavor::Cbr, r, p));
    }
    if !p.is_tournament() {
        return Err(breach("P is not a tournament", Flavor::Cbr, r, p));
    }
    Ok(RepresentationPair::new_unchecked(Flavor::Cbr, r, p))
}

/// As [`synthesize_cbr`] with `P = tc(P1) ∪ (R^c ∖ (tc(P1) ∪ tc(P1)⁻¹))`,
/// which must be a linear order.
pub fn synthesize_tcbr(c: &ChoiceFunction) -> Result<RepresentationPair, SynthesisError> {
    let ctx = Context::new(c);
    require_axioms(&ctx, &AxiomId::TCBR)?;
    let r = ctx.revealed_closure;
    let closed = Dominance::new(c, &r).relation.transitive_closure();
    let p = closed.union(&r.difference(&closed.union(&closed.inverse())));
    if !r.is_strict_partial_order() {
        return Err(breach(
            "R is not a strict partial order",
            Flavor::Tcbr,
            r,
            p,
        ));
    }
    if !p.is_linear_order() {
        return Err(breach("P is not a linear order", Flavor::Tcbr, r, p));
    }
    Ok(RepresentationPair::new_unchecked(Flavor::Tcbr, r, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub menu: Menu,
    pub expected: usize,
    pub got: Evaluation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub pass: bool,
    /// Menus in size-then-mask order where the pair disagrees with the data.
    pub mismatches: Vec<Mismatch>,
}

pub fn verify(c: &ChoiceFunction, rep: &RepresentationPair) -> Verification {
    let mismatches: Vec<Mismatch> = if c.size() != rep.size() {
        Vec::new()
    } else {
        Menu::all_by_size(c.size())
            .into_iter()
            .filter_map(|menu| {
                let expected = c.choice(menu);
                let got = rep.eval(menu);
                (got != Evaluation::Chosen(expected)).then_some(Mismatch {
                    menu,
                    expected,
                    got,
                })
            })
            .collect()
    };
    Verification {
        pass: c.size() == rep.size() && mismatches.is_empty(),
        mismatches,
    }
}
