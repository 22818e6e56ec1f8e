//! Bounds on the rationales of any representation: the minimal first rationale,
//! the lower bound on the second, the pairs no first rationale may contain, and
//! the maximal admissible first rationales.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{AxiomId, AxiomVerdict, Context, Dominance};
use crate::choice::ChoiceFunction;
use crate::relations::{BinaryRelation, Menu};
use crate::reversals::{find_reversals, revealed_relation, RevealedMode, ReversalKind};

pub const DEFAULT_RMAX_CAP: usize = 256;

#[derive(Debug, Clone, Error)]
pub enum IdentificationError {
    #[error("choice data is not representable: {} fails", .0.axiom)]
    NotRepresentable(Box<AxiomVerdict>),
    #[error("small-menu and full-menu revealed relations disagree")]
    RevealedModeMismatch,
}

/// `(x, y)` iff some menu has `C(S) = x`, `y ∈ S ∖ {x}` and `y ∉ min(S, R)`.
pub fn p_hat(c: &ChoiceFunction, r: &BinaryRelation) -> BinaryRelation {
    Dominance::new(c, r).relation
}

/// Pairs that no first rationale of any representation can contain.
pub fn q_hat(c: &ChoiceFunction) -> BinaryRelation {
    let n = c.size();
    let mut q = BinaryRelation::empty(n);
    let reversals = find_reversals(c);
    let mut add = |a: usize, b: usize| {
        if a != b {
            q.insert(a, b);
        }
    };
    for r in &reversals {
        match r.kind {
            ReversalKind::Strong => {
                let (a, w) = r.pair;
                for other in r.base.without(a).iter() {
                    add(a, other);
                    if other != w {
                        add(other, a);
                    }
                }
            }
            ReversalKind::Weak => {
                // weak (w, x): x is barred above every y that sits with x in a menu won by w
                let (w, x) = r.pair;
                for menu in Menu::nontrivial(n) {
                    if menu.contains(x) && menu.contains(w) && c.choice(menu) == w {
                        for y in menu.without(x).iter() {
                            add(x, y);
                        }
                    }
                }
            }
        }
    }
    q
}

fn require_representable(ctx: &Context<'_>) -> Result<(), IdentificationError> {
    for a in AxiomId::CBR {
        let v = ctx.check(a);
        if !v.pass {
            return Err(IdentificationError::NotRepresentable(Box::new(v)));
        }
    }
    Ok(())
}

/// `(R^c, P^c)`: the closed small-menu revealed relation and the
/// "chosen over a non-rejected alternative" relation it induces.
pub fn minimal_representation(
    c: &ChoiceFunction,
) -> Result<(BinaryRelation, BinaryRelation), IdentificationError> {
    require_representable(&Context::new(c))?;
    let r = revealed_relation(c, RevealedMode::SmallMenu).transitive_closure();
    Ok((r, p_hat(c, &r)))
}

/// As [`minimal_representation`], also recomputing `R^c` from every menu and
/// failing if the two disagree.
pub fn minimal_representation_checked(
    c: &ChoiceFunction,
) -> Result<(BinaryRelation, BinaryRelation), IdentificationError> {
    let (r, p) = minimal_representation(c)?;
    let full = revealed_relation(c, RevealedMode::FullMenu).transitive_closure();
    if full != r {
        return Err(IdentificationError::RevealedModeMismatch);
    }
    Ok((r, p))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalRelations {
    /// In depth-first order, pairs included before excluded.
    pub relations: Vec<BinaryRelation>,
    /// The search stopped at the cap.
    pub truncated: bool,
}

/// All inclusion-maximal transitive relations `T` with `lower ⊆ T ⊆ allowed`,
/// up to `cap` of them. `lower` must be transitive.
pub fn maximal_transitive(
    lower: &BinaryRelation,
    allowed: &BinaryRelation,
    cap: usize,
) -> MaximalRelations {
    let mut search = MaxSearch {
        allowed: *allowed,
        candidates: allowed.difference(lower).pairs().collect(),
        cap,
        found: Vec::new(),
        truncated: false,
    };
    if lower.is_subset_of(allowed) {
        search.dfs(0, *lower, BinaryRelation::empty(allowed.size()));
    }
    MaximalRelations {
        relations: search.found,
        truncated: search.truncated,
    }
}

struct MaxSearch {
    allowed: BinaryRelation,
    candidates: Vec<(usize, usize)>,
    cap: usize,
    found: Vec<BinaryRelation>,
    truncated: bool,
}

impl MaxSearch {
    fn extendable(&self, rel: &BinaryRelation, a: usize, b: usize) -> bool {
        rel.with(a, b)
            .transitive_closure()
            .is_subset_of(&self.allowed)
    }

    /// `current` is transitive and inside `allowed`; `excluded` pairs never join it.
    fn dfs(&mut self, i: usize, current: BinaryRelation, excluded: BinaryRelation) {
        if self.truncated {
            return;
        }
        let Some(&(a, b)) = self.candidates.get(i) else {
            let maximal = self
                .allowed
                .difference(&current)
                .pairs()
                .all(|(p, q)| !self.extendable(&current, p, q));
            if maximal {
                if self.found.len() == self.cap {
                    self.truncated = true;
                } else {
                    self.found.push(current);
                }
            }
            return;
        };
        if current.contains(a, b) {
            return self.dfs(i + 1, current, excluded);
        }
        let grown = current.with(a, b).transitive_closure();
        if grown.is_subset_of(&self.allowed) && grown.intersection(&excluded).is_empty() {
            self.dfs(i + 1, grown, excluded);
        }
        // an excluded pair must end up blocked; if even the largest reachable
        // relation cannot block it, this branch holds no maximal leaf
        let excluded = excluded.with(a, b);
        let mut reachable = current;
        for &(p, q) in &self.candidates[i + 1..] {
            if !excluded.contains(p, q) {
                reachable.insert(p, q);
            }
        }
        if !self.extendable(&reachable, a, b) {
            self.dfs(i + 1, current, excluded);
        }
    }
}

/// Maximal admissible first rationales: maximal transitive relations between
/// `R^c` and `≻_c ∖ Q̂`.
pub fn r_max(c: &ChoiceFunction, cap: usize) -> Result<MaximalRelations, IdentificationError> {
    let (r_min, _) = minimal_representation(c)?;
    let allowed = c.pairwise().difference(&q_hat(c));
    Ok(maximal_transitive(&r_min, &allowed, cap))
}

/// Whether `(R, P)` lies in the class of representations bounded by the
/// identified relations.
pub fn in_class(
    c: &ChoiceFunction,
    r: &BinaryRelation,
    p: &BinaryRelation,
) -> Result<bool, IdentificationError> {
    let (r_min, _) = minimal_representation(c)?;
    Ok(in_class_with(c, &r_min, &q_hat(c), r, p))
}

/// [`in_class`] with precomputed `R^c` and `Q̂`.
pub fn in_class_with(
    c: &ChoiceFunction,
    r_min: &BinaryRelation,
    q: &BinaryRelation,
    r: &BinaryRelation,
    p: &BinaryRelation,
) -> bool {
    let pairwise = c.pairwise();
    r.is_strict_partial_order()
        && r_min.is_subset_of(r)
        && r.is_subset_of(&pairwise.difference(q))
        && p.is_tournament()
        && p_hat(c, r).union(&pairwise.difference(r)).is_subset_of(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentificationReport {
    pub alternatives: Vec<String>,
    pub r_min: BinaryRelation,
    pub p_min: BinaryRelation,
    pub q_hat: BinaryRelation,
    pub r_max: Vec<BinaryRelation>,
    pub truncated: bool,
}

pub fn identify(
    c: &ChoiceFunction,
    cap: usize,
) -> Result<IdentificationReport, IdentificationError> {
    let (r_min, p_min) = minimal_representation(c)?;
    let q = q_hat(c);
    let maximal = maximal_transitive(&r_min, &c.pairwise().difference(&q), cap);
    Ok(IdentificationReport {
        alternatives: c.universe().labels().to_vec(),
        r_min,
        p_min,
        q_hat: q,
        r_max: maximal.relations,
        truncated: maximal.truncated,
    })
}
