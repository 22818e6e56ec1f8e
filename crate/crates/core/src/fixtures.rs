//! Small worked choice functions used throughout the tests, the CLI samples and
//! the documentation. Alternatives are labeled `x, y, z, w` (indices 0..4).

use crate::choice::ChoiceFunction;
use crate::relations::{BinaryRelation, Universe};
use crate::representation::{Flavor, RepresentationPair};

fn table(labels: &[&str], rows: &[(&str, &str)]) -> ChoiceFunction {
    let universe = Universe::new(labels.iter().copied()).expect("fixture labels");
    let split: Vec<(Vec<&str>, &str)> = rows
        .iter()
        .map(|(menu, pick)| {
            let members = menu
                .char_indices()
                .map(|(i, _)| &menu[i..i + 1])
                .collect::<Vec<_>>();
            (members, *pick)
        })
        .collect();
    ChoiceFunction::from_rows(universe, split.iter().map(|(m, p)| (m.as_slice(), *p)))
        .expect("fixture table is total")
}

const XYZW: [&str; 4] = ["x", "y", "z", "w"];

/// Four alternatives with a strong `(x,y)` reversal due to `z` and a weak
/// `(z,x)` reversal due to `w`; `x, y, x` along `{x,y} ⊂ {x,y,z} ⊂ {x,y,z,w}`.
pub fn two_reversal_table() -> ChoiceFunction {
    table(
        &XYZW,
        &[
            ("xy", "x"),
            ("xz", "z"),
            ("xw", "x"),
            ("yz", "y"),
            ("yw", "y"),
            ("zw", "z"),
            ("xyz", "y"),
            ("xyw", "x"),
            ("xzw", "x"),
            ("yzw", "y"),
            ("xyzw", "x"),
        ],
    )
}

/// The shortlisting pair behind [`hiring_committee`]: reject by
/// `z > x > w` (with `y` incomparable), then pick by `x > y > z > w`.
pub fn hiring_committee_pair() -> RepresentationPair {
    let (x, y, z, w) = (0, 1, 2, 3);
    RepresentationPair::new(
        Flavor::Tcbr,
        BinaryRelation::from_pairs(4, [(z, x), (z, w), (x, w)]),
        BinaryRelation::linear_order(4, &[x, y, z, w]),
    )
    .expect("valid pair")
}

/// Choices induced by [`hiring_committee_pair`]: `C(xy)=x`, `C(xyz)=y`,
/// `C(xyzw)=x`.
pub fn hiring_committee() -> ChoiceFunction {
    hiring_committee_pair()
        .induced_choice(&Universe::new(XYZW).expect("labels"))
        .expect("pair evaluates on every menu")
}

/// Satisfies every axiom except never-chosen: `x` loses both pairs yet wins `{x,y,z}`.
pub fn violates_never_chosen() -> ChoiceFunction {
    table(
        &XYZW[..3],
        &[("xy", "y"), ("xz", "z"), ("yz", "y"), ("xyz", "x")],
    )
}

/// Satisfies every axiom except weak contraction consistency.
pub fn violates_contraction() -> ChoiceFunction {
    table(
        &XYZW,
        &[
            ("xy", "x"),
            ("xz", "z"),
            ("xw", "w"),
            ("yz", "z"),
            ("yw", "y"),
            ("zw", "w"),
            ("xyz", "z"),
            ("xyw", "w"),
            ("xzw", "w"),
            ("yzw", "y"),
            ("xyzw", "y"),
        ],
    )
}

/// Satisfies every axiom except the no-binary-cycles condition on revealed pairs.
pub fn violates_no_binary_cycles() -> ChoiceFunction {
    table(
        &XYZW,
        &[
            ("xy", "x"),
            ("xz", "z"),
            ("xw", "x"),
            ("yz", "y"),
            ("yw", "y"),
            ("zw", "z"),
            ("xyz", "y"),
            ("xyw", "y"),
            ("xzw", "x"),
            ("yzw", "z"),
            ("xyzw", "y"),
        ],
    )
}

/// Satisfies every axiom except reject-WARP.
pub fn violates_reject_warp() -> ChoiceFunction {
    table(
        &XYZW,
        &[
            ("xy", "x"),
            ("xz", "x"),
            ("xw", "x"),
            ("yz", "y"),
            ("yw", "y"),
            ("zw", "z"),
            ("xyz", "y"),
            ("xyw", "x"),
            ("xzw", "x"),
            ("yzw", "y"),
            ("xyzw", "x"),
        ],
    )
}

/// Maximization of a strict linear order given best-first.
pub fn rational(universe: Universe, ranking: &[usize]) -> ChoiceFunction {
    let order = BinaryRelation::linear_order(universe.len(), ranking);
    ChoiceFunction::from_fn(universe, |menu| {
        order
            .maximal_set(menu)
            .sole()
            .expect("linear order has a maximum")
    })
    .expect("maximum lies in the menu")
}
