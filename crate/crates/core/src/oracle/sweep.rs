//! Exhaustive checks of the structural results over every choice function of a
//! given size.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    is_warp_rational, require_size, rsm_by_characterization, table_key, ChoiceSpace, Oracle,
    OracleError, RSM_EXHAUSTION_MAX,
};
use crate::axioms::{AxiomId, Context};
use crate::choice::ChoiceFunction;
use crate::identification::{
    in_class_with, maximal_transitive, minimal_representation_checked, q_hat, DEFAULT_RMAX_CAP,
};
use crate::relations::BinaryRelation;
use crate::representation::{
    induced_table, synthesize_cbr, synthesize_tcbr, verify, Flavor, RepresentationPair,
    SynthesisError,
};
use crate::reversals::{
    check_smp_with, decompose_double, double_reversals, revealed_relation, RevealedMode,
    ReversalKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SweepId {
    /// The four axioms hold iff an exhaustive search finds a representation.
    Theorem1,
    /// The transitive variant, with a linear second rationale.
    Theorem2,
    /// Small-menu property on representable data.
    Smp,
    /// Representable functions agreeing on menus of size at most three coincide.
    Idencor,
    /// The minimal rationales against the intersection of all representations.
    Iden1,
    /// Class membership against verification, plus the maximal rationales.
    Iden2,
    /// Among representable data, sequential maximization iff no weak reversal.
    PropRsm,
    /// The transitive analogue of `PropRsm`.
    PropTsm,
    /// Reject-WARP and WCC* imply R-WARP*.
    Rwarpstar,
    Exclusivity,
    /// Negative expansion on representable data.
    Ne,
    /// Every double reversal splits into a strong and a weak reversal.
    Dbl,
    /// Rationale constraints implied by each reversal, in every representation.
    LemmaRev,
    /// WARP holds iff the data maximize a linear order.
    WarpCount,
    /// The two revealed-relation definitions agree on representable data.
    RevealedModes,
    /// Implications among the weakenings of WARP.
    Implications,
    /// Every failing verdict's witness re-falsifies its axiom.
    Witnesses,
    /// Containments between model flavors; elimination counts are recorded only.
    Lattice,
}

impl SweepId {
    pub const ALL: [SweepId; 18] = [
        SweepId::Theorem1,
        SweepId::Theorem2,
        SweepId::Smp,
        SweepId::Idencor,
        SweepId::Iden1,
        SweepId::Iden2,
        SweepId::PropRsm,
        SweepId::PropTsm,
        SweepId::Rwarpstar,
        SweepId::Exclusivity,
        SweepId::Ne,
        SweepId::Dbl,
        SweepId::LemmaRev,
        SweepId::WarpCount,
        SweepId::RevealedModes,
        SweepId::Implications,
        SweepId::Witnesses,
        SweepId::Lattice,
    ];

    pub fn id(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .expect("unit variant serializes to a string")
    }
}

impl fmt::Display for SweepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for SweepId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        let compact = |t: &str| t.replace('_', "");
        SweepId::ALL
            .into_iter()
            .find(|id| id.id() == norm || compact(&id.id()) == compact(&norm))
            .ok_or_else(|| format!("unknown sweep {s:?}"))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepOptions {
    /// Seeds the sampled part of `Iden2`.
    pub seed: u64,
    /// Sampled candidate pairs for `Iden2` above size three.
    pub samples: usize,
    /// Counterexamples kept in the report; the total is always counted.
    pub max_counterexamples: usize,
    pub rmax_cap: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            seed: 0,
            samples: 10_000,
            max_counterexamples: 50,
            rmax_cap: DEFAULT_RMAX_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Compact `{menu}:choice` listing of the offending function.
    pub function: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub sweep: SweepId,
    pub n: usize,
    /// Choice functions of size `n`.
    pub population: usize,
    pub counterexamples: Vec<Counterexample>,
    pub counts: BTreeMap<String, u64>,
    /// Wall time; the only field that varies between identical runs.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<u64>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.counterexample_total() == 0
    }

    pub fn counterexample_total(&self) -> u64 {
        self.counts.get("counterexamples").copied().unwrap_or(0)
    }

    pub fn count(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    /// The report with the timing removed, for reproducibility comparisons.
    pub fn without_runtime(mut self) -> Self {
        self.runtime_ms = None;
        self
    }
}

#[derive(Default)]
struct Tally {
    counts: BTreeMap<&'static str, u64>,
    failures: Vec<Counterexample>,
}

impl Tally {
    fn count(&mut self, key: &'static str) {
        *self.counts.entry(key).or_default() += 1;
    }

    fn check(&mut self, ok: bool, c: &ChoiceFunction, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(Counterexample {
                function: c.compact(),
                detail: detail(),
            });
        }
    }

    fn merge(&mut self, other: Tally) {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        self.failures.extend(other.failures);
    }
}

struct Population {
    n: usize,
    space: ChoiceSpace,
    oracle: Oracle,
}

impl Population {
    /// Runs `f` on every function (in parallel) and merges in index order.
    fn each<F>(&self, f: F) -> Result<Tally, OracleError>
    where
        F: Fn(&ChoiceFunction, &mut Tally) -> Result<(), OracleError> + Sync,
    {
        let tallies: Vec<Result<Tally, OracleError>> = (0..self.space.len())
            .into_par_iter()
            .map(|i| {
                let c = self.space.get(i);
                let mut t = Tally::default();
                f(&c, &mut t)?;
                Ok(t)
            })
            .collect();
        let mut total = Tally::default();
        for t in tallies {
            total.merge(t?);
        }
        Ok(total)
    }

    /// As [`Population::each`], restricted to functions with a representation
    /// of `flavor` found by exhaustion.
    fn each_representable<F>(&self, flavor: Flavor, f: F) -> Result<Tally, OracleError>
    where
        F: Fn(&ChoiceFunction, &mut Tally) -> Result<(), OracleError> + Sync,
    {
        let index = self.oracle.index(self.n, flavor)?;
        self.each(|c, t| {
            if index.represents(c) {
                t.count("representable");
                f(c, t)?;
            }
            Ok(())
        })
    }
}

pub fn sweep(n: usize, id: SweepId, opts: &SweepOptions) -> Result<SweepReport, OracleError> {
    require_size(n, 2, super::CHOICE_SPACE_MAX)?;
    let start = Instant::now();
    let pop = Population {
        n,
        space: ChoiceSpace::new(n)?,
        oracle: Oracle::new(),
    };
    let tally = match id {
        SweepId::Theorem1 => characterization(&pop, Flavor::Cbr)?,
        SweepId::Theorem2 => characterization(&pop, Flavor::Tcbr)?,
        SweepId::Smp => pop.each_representable(Flavor::Cbr, |c, t| {
            let v = check_smp_with(c, &Context::new(c).reversals);
            t.check(v.pass, c, || {
                format!("reversal {:?} has no small-menu pattern", v.witness)
            });
            Ok(())
        })?,
        SweepId::Idencor => idencor(&pop)?,
        SweepId::Iden1 => iden1(&pop)?,
        SweepId::Iden2 => iden2(&pop, opts)?,
        SweepId::PropRsm => prop_rsm(&pop)?,
        SweepId::PropTsm => {
            let tsm = pop.oracle.index(n, Flavor::Tsm)?;
            pop.each_representable(Flavor::Tcbr, |c, t| {
                let weak = weak_reversals(c);
                let rep = tsm.represents(c);
                if rep {
                    t.count("tsm_representable");
                }
                t.check(rep == (weak == 0), c, || {
                    format!("TSM representable = {rep}, weak reversals = {weak}")
                });
                Ok(())
            })?
        }
        SweepId::Rwarpstar => pop.each(|c, t| {
            let ctx = Context::new(c);
            if ctx.passes(AxiomId::RWarp) && ctx.passes(AxiomId::WccStar) {
                t.count("premise_holds");
                let v = ctx.check(AxiomId::RWarpStar);
                t.check(v.pass, c, || format!("R-WARP* fails: {:?}", v.witness));
            }
            Ok(())
        })?,
        SweepId::Exclusivity => axiom_on_representable(&pop, AxiomId::Exclusivity)?,
        SweepId::Ne => axiom_on_representable(&pop, AxiomId::NegativeExpansion)?,
        SweepId::Dbl => pop.each_representable(Flavor::Cbr, |c, t| {
            for chain in double_reversals(c) {
                t.count("double_reversals");
                let split = decompose_double(c, &chain);
                t.check(split.is_ok(), c, || format!("chain {chain:?}: {split:?}"));
            }
            Ok(())
        })?,
        SweepId::LemmaRev => reversal_constraints(&pop)?,
        SweepId::WarpCount => pop.each(|c, t| {
            let warp = Context::new(c).passes(AxiomId::Warp);
            let rational = is_warp_rational(c);
            if warp {
                t.count("warp");
            }
            if rational {
                t.count("warp_rational");
            }
            t.check(warp == rational, c, || {
                format!("WARP = {warp}, rational = {rational}")
            });
            Ok(())
        })?,
        SweepId::RevealedModes => pop.each(|c, t| {
            let full = revealed_relation(c, RevealedMode::FullMenu);
            let small = revealed_relation(c, RevealedMode::SmallMenu);
            if !full.is_subset_of(&c.pairwise()) {
                t.count("revealed_outside_pairwise");
            }
            if pop.oracle.index(pop.n, Flavor::Cbr)?.represents(c) {
                t.count("representable");
                t.check(full == small, c, || {
                    format!("full {full:?} small {small:?}")
                });
            } else if full != small {
                t.count("differ_outside_class");
            }
            Ok(())
        })?,
        SweepId::Implications => pop.each(|c, t| {
            let ctx = Context::new(c);
            let pass = |a| ctx.passes(a);
            let mut implies = |name: &'static str, p: bool, q: bool| {
                if p {
                    t.count(name);
                }
                t.check(!p || q, c, || format!("{name} fails"));
            };
            implies(
                "r_sarp_implies_r_warp",
                pass(AxiomId::RSarp),
                pass(AxiomId::RWarp),
            );
            implies(
                "warp_implies_wwarp",
                pass(AxiomId::Warp),
                pass(AxiomId::Wwarp),
            );
            implies(
                "wwarp_implies_r_warp_star",
                pass(AxiomId::Wwarp),
                pass(AxiomId::RWarpStar),
            );
            let all = AxiomId::ALL.iter().all(|&a| pass(a));
            implies("warp_implies_all", pass(AxiomId::Warp), all);
            Ok(())
        })?,
        SweepId::Witnesses => pop.each(|c, t| {
            let ctx = Context::new(c);
            for a in AxiomId::ALL {
                let v = ctx.check(a);
                t.check(v.pass == v.witness.is_none(), c, || {
                    format!("{a}: pass flag and witness disagree")
                });
                if let Some(w) = &v.witness {
                    t.count("failing_verdicts");
                    t.check(w.refutes(c, a), c, || {
                        format!("{a}: witness {w:?} does not replay")
                    });
                    for w in ctx.witnesses(a) {
                        t.count("enumerated_witnesses");
                        t.check(w.refutes(c, a), c, || {
                            format!("{a}: witness {w:?} does not replay")
                        });
                    }
                }
            }
            Ok(())
        })?,
        SweepId::Lattice => lattice(&pop)?,
    };
    let total = tally.failures.len() as u64;
    let mut counts: BTreeMap<String, u64> = tally
        .counts
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    counts.insert("counterexamples".into(), total);
    let mut counterexamples = tally.failures;
    counterexamples.truncate(opts.max_counterexamples);
    Ok(SweepReport {
        sweep: id,
        n,
        population: pop.space.len(),
        counterexamples,
        counts,
        runtime_ms: Some(start.elapsed().as_millis() as u64),
    })
}

fn weak_reversals(c: &ChoiceFunction) -> usize {
    Context::new(c)
        .reversals
        .iter()
        .filter(|r| r.kind == ReversalKind::Weak)
        .count()
}

type Synthesizer = fn(&ChoiceFunction) -> Result<RepresentationPair, SynthesisError>;

fn characterization(pop: &Population, flavor: Flavor) -> Result<Tally, OracleError> {
    let (axioms, synthesize): (&[AxiomId], Synthesizer) = match flavor {
        Flavor::Tcbr => (&AxiomId::TCBR, synthesize_tcbr),
        _ => (&AxiomId::CBR, synthesize_cbr),
    };
    let index = pop.oracle.index(pop.n, flavor)?;
    pop.each(|c, t| {
        let by_axioms = Context::new(c).satisfies_all(axioms);
        let by_oracle = index.represents(c);
        if by_axioms {
            t.count("axioms_pass");
        }
        if by_oracle {
            t.count("representable");
        }
        t.check(by_axioms == by_oracle, c, || {
            format!("axioms pass = {by_axioms}, exhaustive search = {by_oracle}")
        });
        match synthesize(c) {
            Ok(rep) => {
                t.count("synthesized");
                let v = verify(c, &rep);
                t.check(v.pass, c, || {
                    format!("synthesized pair mismatches on {:?}", v.mismatches)
                });
            }
            Err(SynthesisError::InternalInvariantBreach { reason, .. }) => {
                t.check(false, c, || format!("synthesis breach: {reason}"))
            }
            Err(SynthesisError::AxiomFailure(_)) => {}
        }
        Ok(())
    })
}

fn axiom_on_representable(pop: &Population, axiom: AxiomId) -> Result<Tally, OracleError> {
    pop.each_representable(Flavor::Cbr, |c, t| {
        let v = Context::new(c).check(axiom);
        t.check(v.pass, c, || format!("{axiom} fails: {:?}", v.witness));
        Ok(())
    })
}

fn idencor(pop: &Population) -> Result<Tally, OracleError> {
    let index = pop.oracle.index(pop.n, Flavor::Cbr)?;
    let mut groups: HashMap<u128, Vec<ChoiceFunction>> = HashMap::new();
    let small_mask = |key: u128| {
        (1..1usize << pop.n)
            .filter(|&m| (m as u16).count_ones() <= 3)
            .fold(0u128, |acc, m| acc | key & (0b111u128 << (3 * m)))
    };
    let mut t = Tally::default();
    for c in pop.space.iter().filter(|c| index.represents(c)) {
        t.count("representable");
        groups
            .entry(small_mask(table_key(c.table())))
            .or_default()
            .push(c);
    }
    let mut keys: Vec<_> = groups.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        let group = &groups[&k];
        t.count("small_menu_classes");
        t.check(group.len() == 1, &group[0], || {
            format!(
                "{} representable functions share all small menus",
                group.len()
            )
        });
    }
    Ok(t)
}

fn iden1(pop: &Population) -> Result<Tally, OracleError> {
    let index = pop.oracle.index(pop.n, Flavor::Cbr)?;
    pop.each_representable(Flavor::Cbr, |c, t| {
        let (r_min, p_min) = match minimal_representation_checked(c) {
            Ok(pair) => pair,
            Err(e) => {
                t.check(false, c, || format!("minimal representation: {e}"));
                return Ok(());
            }
        };
        let mut meet: Option<BinaryRelation> = None;
        for rep in index.representations(c) {
            meet = Some(match meet {
                Some(m) => m.intersection(&rep.first),
                None => rep.first,
            });
            if rep.first == r_min {
                t.count("pairs_with_minimal_first");
                t.check(p_min.is_subset_of(&rep.second), c, || {
                    format!("P^c {p_min:?} not inside {:?}", rep.second)
                });
            }
        }
        t.check(meet == Some(r_min), c, || {
            format!("R^c {r_min:?} but intersection {meet:?}")
        });
        Ok(())
    })
}

fn iden2(pop: &Population, opts: &SweepOptions) -> Result<Tally, OracleError> {
    let n = pop.n;
    let index = pop.oracle.index(n, Flavor::Cbr)?;
    let firsts = index.first_rationales();
    let seconds = index.second_rationales();
    let agree = |c: &ChoiceFunction,
                 r_min: &BinaryRelation,
                 q: &BinaryRelation,
                 r: &BinaryRelation,
                 p: &BinaryRelation| {
        let member = in_class_with(c, r_min, q, r, p);
        let represents =
            induced_table(Flavor::Cbr, r, p).is_some_and(|tab| tab[1..] == c.table()[1..]);
        (member, represents)
    };
    // upper bounds through the maximal rationales, for every representable function
    let mut t = pop.each_representable(Flavor::Cbr, |c, t| {
        let Ok((r_min, _)) = minimal_representation_checked(c) else {
            t.check(false, c, || "minimal representation unavailable".into());
            return Ok(());
        };
        let allowed = c.pairwise().difference(&q_hat(c));
        let maximal = maximal_transitive(&r_min, &allowed, opts.rmax_cap);
        t.check(!maximal.truncated, c, || {
            "maximal rationale search truncated".into()
        });
        let oracle_firsts: Vec<BinaryRelation> =
            index.representations(c).map(|r| r.first).collect();
        for m in &maximal.relations {
            t.count("maximal_rationales");
            t.check(oracle_firsts.contains(m), c, || {
                format!("maximal {m:?} is in no representation")
            });
        }
        for r in &oracle_firsts {
            t.check(r.is_subset_of(&allowed), c, || {
                format!("oracle rationale {r:?} meets the excluded pairs")
            });
            t.check(
                maximal.relations.iter().any(|m| r.is_subset_of(m)),
                c,
                || format!("oracle rationale {r:?} below no maximal rationale"),
            );
        }
        if n <= 3 {
            let q = q_hat(c);
            for r in firsts {
                for p in seconds {
                    t.count("candidates");
                    let (member, represents) = agree(c, &r_min, &q, r, p);
                    t.check(member == represents, c, || {
                        format!("R {r:?} P {p:?}: in class = {member}, verified = {represents}")
                    });
                }
            }
        }
        Ok(())
    })?;
    if n > 3 {
        let keys = index.representable_keys();
        let functions: Vec<ChoiceFunction> = pop
            .space
            .iter()
            .filter(|c| keys.binary_search(&table_key(c.table())).is_ok())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut cache: HashMap<usize, (BinaryRelation, BinaryRelation)> = HashMap::new();
        for s in 0..opts.samples {
            let k = rng.gen_range(0..functions.len());
            let c = &functions[k];
            let (r, p) = if s % 2 == 0 {
                let reps: Vec<_> = index.representations(c).collect();
                let rep = reps.choose(&mut rng).expect("representable");
                (rep.first, rep.second)
            } else {
                (
                    *firsts.choose(&mut rng).unwrap(),
                    *seconds.choose(&mut rng).unwrap(),
                )
            };
            let (r_min, q) = *cache.entry(k).or_insert_with(|| {
                let (r_min, _) = minimal_representation_checked(c).expect("representable");
                (r_min, q_hat(c))
            });
            t.count("candidates");
            let (member, represents) = agree(c, &r_min, &q, &r, &p);
            if represents {
                t.count("verified_candidates");
            }
            t.check(member == represents, c, || {
                format!("R {r:?} P {p:?}: in class = {member}, verified = {represents}")
            });
        }
    }
    Ok(t)
}

fn prop_rsm(pop: &Population) -> Result<Tally, OracleError> {
    let n = pop.n;
    let cbr = pop.oracle.index(n, Flavor::Cbr)?;
    let rsm = if n <= RSM_EXHAUSTION_MAX {
        Some(pop.oracle.index(n, Flavor::Rsm)?)
    } else {
        None
    };
    pop.each(|c, t| {
        let characterized = rsm_by_characterization(c);
        let decided = match rsm {
            Some(index) => {
                let exhaustive = index.represents(c);
                t.check(exhaustive == characterized, c, || {
                    format!("exhaustion = {exhaustive}, Expansion and WWARP = {characterized}")
                });
                exhaustive
            }
            None => characterized,
        };
        if cbr.represents(c) {
            t.count("representable");
            let weak = weak_reversals(c);
            if decided {
                t.count("rsm_representable");
            }
            t.check(decided == (weak == 0), c, || {
                format!("RSM representable = {decided}, weak reversals = {weak}")
            });
        }
        Ok(())
    })
}

fn reversal_constraints(pop: &Population) -> Result<Tally, OracleError> {
    let index = pop.oracle.index(pop.n, Flavor::Cbr)?;
    pop.each_representable(Flavor::Cbr, |c, t| {
        let reversals = Context::new(c).reversals;
        for rep in index.representations(c) {
            t.count("representations");
            let (r, p) = (&rep.first, &rep.second);
            for rev in &reversals {
                let (x, y) = rev.pair;
                let z = rev.trigger;
                let ok = match rev.kind {
                    ReversalKind::Weak => r.contains(x, y) && r.contains(y, z) && p.contains(y, x),
                    ReversalKind::Strong => {
                        r.contains(z, x)
                            && p.contains(x, y)
                            && p.contains(y, z)
                            && !r.contains(x, y)
                    }
                };
                t.check(ok, c, || format!("{rev:?} against R {r:?} P {p:?}"));
            }
        }
        Ok(())
    })
}

fn lattice(pop: &Population) -> Result<Tally, OracleError> {
    let n = pop.n;
    let o = &pop.oracle;
    let (cbr, tcbr, tsm, eph) = (
        o.index(n, Flavor::Cbr)?,
        o.index(n, Flavor::Tcbr)?,
        o.index(n, Flavor::Tsm)?,
        o.index(n, Flavor::Eph)?,
    );
    let rsm = if n <= RSM_EXHAUSTION_MAX {
        Some(o.index(n, Flavor::Rsm)?)
    } else {
        None
    };
    pop.each(|c, t| {
        let is_rsm = rsm.map_or_else(|| rsm_by_characterization(c), |i| i.represents(c));
        let flags = [
            ("cbr", cbr.represents(c)),
            ("tcbr", tcbr.represents(c)),
            ("rsm", is_rsm),
            ("tsm", tsm.represents(c)),
            ("eph", eph.represents(c)),
        ];
        for (name, on) in flags {
            if on {
                t.count(name);
            }
        }
        let [(_, is_cbr), (_, is_tcbr), _, (_, is_tsm), (_, is_eph)] = flags;
        t.check(!is_tcbr || is_cbr, c, || "TCBR without CBR".into());
        t.check(!is_tsm || is_rsm, c, || "TSM without RSM".into());
        if is_warp_rational(c) {
            t.count("warp_rational");
            t.check(flags.iter().all(|f| f.1), c, || {
                format!("rational but {flags:?}")
            });
        }
        if is_eph {
            let ctx = Context::new(c);
            if ctx.reversals.iter().any(|r| r.kind == ReversalKind::Weak) {
                t.count("eph_with_weak_reversal");
            }
            if !ctx.passes(AxiomId::Nbc) {
                t.count("eph_with_binary_cycle");
            }
            if !is_cbr {
                t.count("eph_not_cbr");
            }
        }
        Ok(())
    })
}
