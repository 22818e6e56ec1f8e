//! Brute-force ground truth at small sizes: exhaustive enumeration of
//! rationales and choice functions, representability by exhaustion, and
//! population-level sweeps.

mod sweep;

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{AxiomId, Context, ReversalSummary};
use crate::choice::ChoiceFunction;
use crate::relations::{BinaryRelation, Menu, Universe};
use crate::representation::{evaluate, Flavor, RepresentationPair};

pub use sweep::{sweep, Counterexample, SweepId, SweepOptions, SweepReport};

/// Largest universe for rationale enumeration and representation search.
pub const ORACLE_MAX: usize = 5;
/// Largest universe for choice-function enumeration.
pub const CHOICE_SPACE_MAX: usize = 4;
/// Largest universe at which the unrestricted sequential-maximization space is searched.
pub const RSM_EXHAUSTION_MAX: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("size {n} outside the supported range {min}..={max}")]
    SizeCapExceeded { n: usize, min: usize, max: usize },
}

fn require_size(n: usize, min: usize, max: usize) -> Result<(), OracleError> {
    if (min..=max).contains(&n) {
        Ok(())
    } else {
        Err(OracleError::SizeCapExceeded { n, min, max })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RationaleKind {
    /// Transitive and asymmetric.
    PartialOrder,
    /// Complete and asymmetric.
    Tournament,
    LinearOrder,
    /// Any asymmetric relation.
    Asymmetric,
}

/// Every relation of `kind` on `n` alternatives, in the order of a base-3
/// counter over the unordered pairs (absent, forward, backward).
pub fn enumerate_rationales(
    n: usize,
    kind: RationaleKind,
) -> Result<Vec<BinaryRelation>, OracleError> {
    require_size(n, 1, ORACLE_MAX)?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut rel = BinaryRelation::empty(n);
        let mut complete = true;
        for &(a, b) in &pairs {
            match code % 3 {
                0 => complete = false,
                1 => rel.insert(a, b),
                _ => rel.insert(b, a),
            }
            code /= 3;
        }
        let keep = match kind {
            RationaleKind::Asymmetric => true,
            RationaleKind::Tournament => complete,
            RationaleKind::PartialOrder => rel.is_transitive(),
            RationaleKind::LinearOrder => complete && rel.is_transitive(),
        };
        if keep {
            out.push(rel);
        }
    }
    Ok(out)
}

/// All choice functions on `n` alternatives, indexable in mixed radix over the
/// non-singleton menus (lowest mask varies fastest).
#[derive(Debug, Clone)]
pub struct ChoiceSpace {
    universe: Universe,
    menus: Vec<Menu>,
    len: usize,
}

impl ChoiceSpace {
    pub fn new(n: usize) -> Result<Self, OracleError> {
        require_size(n, 1, CHOICE_SPACE_MAX)?;
        let menus: Vec<Menu> = Menu::nontrivial(n).collect();
        let len = menus.iter().map(|m| m.len()).product();
        Ok(ChoiceSpace {
            universe: Universe::with_size(n),
            menus,
            len,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn get(&self, mut index: usize) -> ChoiceFunction {
        assert!(index < self.len, "index {index} out of range");
        let mut table = vec![u8::MAX; 1 << self.universe.len()];
        for a in 0..self.universe.len() {
            table[1 << a] = a as u8;
        }
        for &menu in &self.menus {
            let k = menu.len();
            table[menu.bits() as usize] = menu.iter().nth(index % k).expect("digit < len") as u8;
            index /= k;
        }
        ChoiceFunction::from_table(self.universe.clone(), &table).expect("digits pick members")
    }

    pub fn iter(&self) -> impl Iterator<Item = ChoiceFunction> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

pub fn enumerate_choice_functions(n: usize) -> Result<Vec<ChoiceFunction>, OracleError> {
    Ok(ChoiceSpace::new(n)?.iter().collect())
}

/// Packs a mask-indexed choice table (three bits per menu) into a map key.
pub fn table_key(table: &[u8]) -> u128 {
    table
        .iter()
        .enumerate()
        .skip(1)
        .fold(0u128, |key, (m, &a)| key | (a as u128) << (3 * m))
}

fn search_space(
    n: usize,
    flavor: Flavor,
) -> Result<(Vec<BinaryRelation>, Vec<BinaryRelation>), OracleError> {
    use RationaleKind::*;
    let (first, second) = match flavor {
        Flavor::Cbr => (PartialOrder, Tournament),
        Flavor::Tcbr => (PartialOrder, LinearOrder),
        Flavor::Rsm => {
            require_size(n, 1, RSM_EXHAUSTION_MAX)?;
            (Asymmetric, Asymmetric)
        }
        Flavor::Tsm => (PartialOrder, PartialOrder),
        Flavor::Eph => (LinearOrder, LinearOrder),
    };
    Ok((
        enumerate_rationales(n, first)?,
        enumerate_rationales(n, second)?,
    ))
}

/// Every valid pair of a flavor at size `n`, grouped by the choice function it
/// induces.
#[derive(Debug)]
pub struct RepresentationIndex {
    n: usize,
    flavor: Flavor,
    firsts: Vec<BinaryRelation>,
    seconds: Vec<BinaryRelation>,
    by_table: HashMap<u128, Vec<(u32, u32)>>,
    /// Pairs evaluated.
    pub searched: usize,
}

impl RepresentationIndex {
    pub fn build(n: usize, flavor: Flavor) -> Result<Self, OracleError> {
        let (firsts, seconds) = search_space(n, flavor)?;
        let hits: Vec<Vec<(u128, u32, u32)>> = firsts
            .par_iter()
            .enumerate()
            .map(|(i, r)| {
                let mut local = Vec::new();
                let mut table = vec![u8::MAX; 1 << n];
                'pairs: for (j, p) in seconds.iter().enumerate() {
                    for bits in 1..(1u32 << n) {
                        match evaluate(flavor, r, p, Menu::from_bits(bits as u16)) {
                            Some(a) => table[bits as usize] = a as u8,
                            None => continue 'pairs,
                        }
                    }
                    local.push((table_key(&table), i as u32, j as u32));
                }
                local
            })
            .collect();
        let mut by_table: HashMap<u128, Vec<(u32, u32)>> = HashMap::new();
        for (key, i, j) in hits.into_iter().flatten() {
            by_table.entry(key).or_default().push((i, j));
        }
        Ok(RepresentationIndex {
            n,
            flavor,
            searched: firsts.len() * seconds.len(),
            firsts,
            seconds,
            by_table,
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn pairs_of(&self, c: &ChoiceFunction) -> &[(u32, u32)] {
        if c.size() != self.n {
            return &[];
        }
        self.by_table
            .get(&table_key(c.table()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn count(&self, c: &ChoiceFunction) -> usize {
        self.pairs_of(c).len()
    }

    pub fn represents(&self, c: &ChoiceFunction) -> bool {
        self.count(c) > 0
    }

    /// Representations of `c` in search order.
    pub fn representations(
        &self,
        c: &ChoiceFunction,
    ) -> impl Iterator<Item = RepresentationPair> + '_ {
        self.pairs_of(c).iter().map(|&(i, j)| {
            RepresentationPair::new_unchecked(
                self.flavor,
                self.firsts[i as usize],
                self.seconds[j as usize],
            )
        })
    }

    /// Number of distinct choice functions with at least one representation.
    pub fn representable_count(&self) -> usize {
        self.by_table.len()
    }

    /// Representable tables as sorted keys.
    pub fn representable_keys(&self) -> Vec<u128> {
        let mut keys: Vec<u128> = self.by_table.keys().copied().collect();
        keys.sort_unstable();
        keys
    }

    pub fn first_rationales(&self) -> &[BinaryRelation] {
        &self.firsts
    }

    pub fn second_rationales(&self) -> &[BinaryRelation] {
        &self.seconds
    }
}

/// Lazily built indexes, shared across queries.
#[derive(Default)]
pub struct Oracle {
    indexes: [[OnceLock<Result<RepresentationIndex, OracleError>>; 5]; ORACLE_MAX + 1],
}

impl Oracle {
    pub fn new() -> Self {
        Oracle::default()
    }

    pub fn index(&self, n: usize, flavor: Flavor) -> Result<&RepresentationIndex, OracleError> {
        require_size(n, 1, ORACLE_MAX)?;
        let slot = Flavor::ALL
            .iter()
            .position(|&f| f == flavor)
            .expect("known flavor");
        self.indexes[n][slot]
            .get_or_init(|| RepresentationIndex::build(n, flavor))
            .as_ref()
            .map_err(Clone::clone)
    }
}

/// A capped list of representations with the exact total.
#[derive(Debug, Clone)]
pub struct Representations {
    pub pairs: Vec<RepresentationPair>,
    pub total: usize,
}

pub fn representations(
    c: &ChoiceFunction,
    flavor: Flavor,
    cap: usize,
) -> Result<Representations, OracleError> {
    let index = RepresentationIndex::build(c.size(), flavor)?;
    Ok(Representations {
        pairs: index.representations(c).take(cap).collect(),
        total: index.count(c),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ModelFlavor {
    WarpRational,
    Cbr,
    Tcbr,
    Rsm,
    Tsm,
    Eph,
}

impl From<Flavor> for ModelFlavor {
    fn from(f: Flavor) -> Self {
        match f {
            Flavor::Cbr => ModelFlavor::Cbr,
            Flavor::Tcbr => ModelFlavor::Tcbr,
            Flavor::Rsm => ModelFlavor::Rsm,
            Flavor::Tsm => ModelFlavor::Tsm,
            Flavor::Eph => ModelFlavor::Eph,
        }
    }
}

/// Maximization of some linear order.
pub fn is_warp_rational(c: &ChoiceFunction) -> bool {
    let pairwise = c.pairwise();
    pairwise.is_linear_order()
        && Menu::nontrivial(c.size()).all(|m| pairwise.maximal_set(m).sole() == Some(c.choice(m)))
}

/// Sequential maximization by the Expansion and weak-WARP characterization.
pub fn rsm_by_characterization(c: &ChoiceFunction) -> bool {
    let ctx = Context::new(c);
    ctx.passes(AxiomId::Expansion) && ctx.passes(AxiomId::Wwarp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Exhaustion,
    Characterization,
    Axioms,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationProfile {
    pub alternatives: Vec<String>,
    pub representable: BTreeMap<ModelFlavor, bool>,
    pub decided_by: BTreeMap<ModelFlavor, Decision>,
    /// Flavors where the axiomatic decision and exhaustion disagree.
    pub disagreements: Vec<ModelFlavor>,
    pub reversals: ReversalSummary,
}

pub fn classify(c: &ChoiceFunction, oracle: &Oracle) -> Result<ClassificationProfile, OracleError> {
    let n = c.size();
    require_size(n, 1, CHOICE_SPACE_MAX)?;
    let ctx = Context::new(c);
    let mut representable = BTreeMap::new();
    let mut decided_by = BTreeMap::new();
    let mut disagreements = Vec::new();
    representable.insert(ModelFlavor::WarpRational, is_warp_rational(c));
    decided_by.insert(ModelFlavor::WarpRational, Decision::Exhaustion);
    for (flavor, axioms) in [(Flavor::Cbr, &AxiomId::CBR), (Flavor::Tcbr, &AxiomId::TCBR)] {
        let by_axioms = ctx.satisfies_all(axioms);
        if oracle.index(n, flavor)?.represents(c) != by_axioms {
            disagreements.push(flavor.into());
        }
        representable.insert(flavor.into(), by_axioms);
        decided_by.insert(flavor.into(), Decision::Axioms);
    }
    let rsm = if n <= RSM_EXHAUSTION_MAX {
        decided_by.insert(ModelFlavor::Rsm, Decision::Exhaustion);
        oracle.index(n, Flavor::Rsm)?.represents(c)
    } else {
        decided_by.insert(ModelFlavor::Rsm, Decision::Characterization);
        rsm_by_characterization(c)
    };
    representable.insert(ModelFlavor::Rsm, rsm);
    for flavor in [Flavor::Tsm, Flavor::Eph] {
        representable.insert(flavor.into(), oracle.index(n, flavor)?.represents(c));
        decided_by.insert(flavor.into(), Decision::Exhaustion);
    }
    Ok(ClassificationProfile {
        alternatives: c.universe().labels().to_vec(),
        representable,
        decided_by,
        disagreements,
        reversals: ReversalSummary::new(c, &ctx.reversals),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::collections::BTreeSet;

    /// Relations of `kind` by filtering every subset of the off-diagonal pairs.
    fn brute_force(n: usize, kind: RationaleKind) -> BTreeSet<BinaryRelation> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        (0u64..1 << pairs.len())
            .map(|mask| {
                BinaryRelation::from_pairs(
                    n,
                    pairs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, p)| *p),
                )
            })
            .filter(|r| {
                r.is_asymmetric()
                    && match kind {
                        RationaleKind::Asymmetric => true,
                        RationaleKind::Tournament => r.is_complete(),
                        RationaleKind::PartialOrder => r.is_transitive(),
                        RationaleKind::LinearOrder => r.is_complete() && r.is_transitive(),
                    }
            })
            .collect()
    }

    #[test]
    fn enumeration_matches_subset_filtering() {
        for n in 1..=4 {
            for kind in [
                RationaleKind::PartialOrder,
                RationaleKind::Tournament,
                RationaleKind::LinearOrder,
                RationaleKind::Asymmetric,
            ] {
                let listed = enumerate_rationales(n, kind).unwrap();
                let set: BTreeSet<_> = listed.iter().copied().collect();
                assert_eq!(set.len(), listed.len(), "duplicates at n={n} {kind:?}");
                assert_eq!(set, brute_force(n, kind), "n={n} {kind:?}");
            }
        }
    }

    #[test]
    fn enumeration_rejects_large_sizes() {
        assert!(enumerate_rationales(6, RationaleKind::Tournament).is_err());
        assert!(ChoiceSpace::new(5).is_err());
    }

    #[test]
    fn choice_space_is_exhaustive_and_distinct() {
        for (n, expected) in [(1, 1), (2, 2), (3, 24)] {
            let all = enumerate_choice_functions(n).unwrap();
            assert_eq!(all.len(), expected);
            let keys: BTreeSet<u128> = all.iter().map(|c| table_key(c.table())).collect();
            assert_eq!(keys.len(), expected);
        }
        assert_eq!(ChoiceSpace::new(4).unwrap().len(), 20736);
    }

    #[test]
    fn index_agrees_with_direct_evaluation() {
        let index = RepresentationIndex::build(3, Flavor::Cbr).unwrap();
        for c in enumerate_choice_functions(3).unwrap() {
            let mut direct = 0;
            for r in index.first_rationales() {
                for p in index.second_rationales() {
                    let pair = RepresentationPair::new(Flavor::Cbr, *r, *p).unwrap();
                    if crate::representation::verify(&c, &pair).pass {
                        direct += 1;
                    }
                }
            }
            assert_eq!(index.count(&c), direct);
        }
    }

    #[test]
    fn two_reversal_table_representations_contain_the_minimal_rationale() {
        let c = fixtures::two_reversal_table();
        let reps = representations(&c, Flavor::Cbr, 1000).unwrap();
        assert!(reps.total > 0);
        let r_min = BinaryRelation::from_pairs(4, [(2, 0), (0, 3), (2, 3)]);
        assert!(reps.pairs.iter().all(|p| r_min.is_subset_of(&p.first)));
        assert!(
            representations(&fixtures::violates_reject_warp(), Flavor::Cbr, 10)
                .unwrap()
                .pairs
                .is_empty()
        );
    }

    #[test]
    fn classification_examples() {
        let oracle = Oracle::new();
        let profile = classify(&fixtures::two_reversal_table(), &oracle).unwrap();
        assert!(profile.representable[&ModelFlavor::Cbr]);
        assert!(!profile.representable[&ModelFlavor::Rsm]);
        assert!(profile.disagreements.is_empty());

        let rational = fixtures::rational(Universe::with_size(4), &[2, 0, 3, 1]);
        let profile = classify(&rational, &oracle).unwrap();
        assert!(profile.representable.values().all(|&v| v));

        let profile = classify(&fixtures::violates_never_chosen(), &oracle).unwrap();
        assert!(!profile.representable[&ModelFlavor::Cbr]);
        let json = serde_json::to_string(&profile).unwrap();
        assert_eq!(
            serde_json::from_str::<ClassificationProfile>(&json).unwrap(),
            profile
        );
    }

    #[test]
    fn rsm_rational_choice_is_representable_with_any_rationale_order() {
        let rational = fixtures::rational(Universe::with_size(3), &[1, 2, 0]);
        let reps = representations(&rational, Flavor::Rsm, 5).unwrap();
        assert!(reps.total >= 1);
        assert!(rsm_by_characterization(&rational));
    }
}
