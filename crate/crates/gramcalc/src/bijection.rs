//! Grammar-assisted bijections between permutations of `[n]` and
//! increasing trees on `{0..n}`.
//!
//! The forward map is built incrementally: insert `i+1` into the prefix
//! `sigma^(i)`, read the label at the insertion position, and attach the
//! new vertex according to the reflection principle (an `x` position
//! attaches at its dual position, a `y` position at itself). The side
//! conditions used by the construction — dual positions carry `x`, the
//! prefix labeling stays coherent with the tree labeling, weights agree at
//! every step — are asserted at runtime, so a violation aborts with a
//! diagnostic instead of silently producing a wrong tree.
//!
//! The inverse runs the forward step as an oracle: for each vertex it
//! probes every insertion position and keeps the unique one that attaches
//! where the target tree does. Uniqueness is asserted, which is itself a
//! bijectivity check.

use std::fmt;
use std::str::FromStr;

use crate::labeling::{
    a_labeling_seq, insert_at, l_labeling_seq, render_labeled, rule_string, Label, LabelSeq,
};
use crate::permstat::Permutation;
use crate::poly::LaurentPoly;
use crate::trees::{tree_labels, tree_weight, IncreasingTree, TreeScheme};
use crate::{Error, Result};

/// Which statistic the bijection transports.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MapKind {
    /// Up-down runs to even-degree nonroot vertices.
    UpDown,
    /// Left peaks `m` to `2m+1` even-degree vertices (root included).
    LeftPeak,
    /// Exterior peaks `k` to `2k` vertices labeled `x` in the W-scheme.
    Exterior,
    /// The reflection-principle form with positions indexed `0..n`
    /// (position 0 is the last slot); tree-level it agrees with the others.
    Unified,
}

impl MapKind {
    pub const ALL: [MapKind; 4] = [
        MapKind::UpDown,
        MapKind::LeftPeak,
        MapKind::Exterior,
        MapKind::Unified,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MapKind::UpDown => "updown",
            MapKind::LeftPeak => "leftpeak",
            MapKind::Exterior => "exterior",
            MapKind::Unified => "unified",
        }
    }

    /// The tree labeling scheme whose weight the map preserves.
    pub fn tree_scheme(self) -> TreeScheme {
        match self {
            MapKind::UpDown => TreeScheme::Parity,
            MapKind::LeftPeak => TreeScheme::L,
            MapKind::Exterior | MapKind::Unified => TreeScheme::W,
        }
    }
}

impl FromStr for MapKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<MapKind> {
        match s {
            "updown" | "updownrun" => Ok(MapKind::UpDown),
            "leftpeak" => Ok(MapKind::LeftPeak),
            "exterior" | "exteriorpeak" => Ok(MapKind::Exterior),
            "unified" => Ok(MapKind::Unified),
            _ => Err(Error::Parse(format!("unknown bijection {s:?}"))),
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

fn rise_at(pi: &[u32], k: usize) -> bool {
    let prev = if k == 1 { 0 } else { pi[k - 2] };
    prev < pi[k - 1]
}

/// Slot labels for the unified form: slots `1..=i` sit before each element
/// and slot 0 is the final slot. Each exterior peak `p` labels the pair
/// `(p, p+1 mod)` with `x`; `partner` records the pairing.
fn w_labeling_slots(pi: &[u32]) -> (Vec<Label>, Vec<Option<usize>>) {
    let i = pi.len();
    let mut labels = vec![Label::Y; i + 1];
    let mut partner = vec![None; i + 1];
    for p in 1..=i {
        let prev = if p == 1 { 0 } else { pi[p - 2] };
        let next = if p == i { 0 } else { pi[p] };
        if prev < pi[p - 1] && pi[p - 1] > next {
            let q = if p == i { 0 } else { p + 1 };
            labels[p] = Label::X;
            labels[q] = Label::X;
            partner[p] = Some(q);
            partner[q] = Some(p);
        }
    }
    (labels, partner)
}

/// Attachment vertex when a position labeled `x` or `y` is consumed in the
/// interior of the permutation (shared by the up-down and left-peak maps).
fn reflect_interior(pi: &[u32], labels: &LabelSeq, k: usize) -> u32 {
    let i = pi.len();
    match labels.at(k) {
        Label::X => {
            if rise_at(pi, k) {
                // the rising half of a peak pair: its dual is the next
                // position, which must be a falling x
                assert!(
                    k + 1 <= i && labels.at(k + 1) == Label::X && !rise_at(pi, k + 1),
                    "dual position of a rising x must be a falling x (pi={pi:?}, k={k})"
                );
                pi[k]
            } else {
                assert!(
                    k >= 2 && labels.at(k - 1) == Label::X && rise_at(pi, k - 1),
                    "dual position of a falling x must be a rising x (pi={pi:?}, k={k})"
                );
                pi[k - 2]
            }
        }
        Label::Y => pi[k - 1],
        Label::A => unreachable!("'a' positions belong to the endgame cases"),
    }
}

fn step_updown(pi: &[u32], k: usize) -> u32 {
    let i = pi.len();
    let labels = a_labeling_seq(pi);
    if rise_at(pi, i) {
        // odd number of runs: the labeling ends "a x"
        assert_eq!(labels.at(i), Label::A);
        assert_eq!(labels.at(i + 1), Label::X);
        if k == i {
            0
        } else if k == i + 1 {
            pi[i - 1]
        } else {
            // x labels before position k still appear in pairs here,
            // so the interior rules apply unchanged
            reflect_interior(pi, &labels, k)
        }
    } else {
        assert_eq!(labels.at(i + 1), Label::A);
        if k == i + 1 {
            0
        } else {
            reflect_interior(pi, &labels, k)
        }
    }
}

fn step_leftpeak(pi: &[u32], k: usize) -> u32 {
    let i = pi.len();
    let labels = l_labeling_seq(pi);
    assert_eq!(labels.at(i + 1), Label::X, "last position is always x");
    if k < i {
        reflect_interior(pi, &labels, k)
    } else if k == i {
        if labels.at(i) == Label::X {
            // i-1 is a left peak, so position i is the falling half of its
            // pair and reflects to i-1
            assert!(!rise_at(pi, i) && i >= 2 && labels.at(i - 1) == Label::X);
            pi[i - 2]
        } else if rise_at(pi, i) {
            0
        } else {
            pi[i - 1]
        }
    } else if rise_at(pi, i) {
        pi[i - 1]
    } else {
        0
    }
}

fn step_unified(pi: &[u32], k: usize) -> u32 {
    let i = pi.len();
    let (labels, partner) = w_labeling_slots(pi);
    let slot = if k == i + 1 { 0 } else { k };
    let vertex_at = |s: usize| -> u32 {
        if s == 0 {
            0
        } else {
            pi[s - 1]
        }
    };
    match labels[slot] {
        Label::X => vertex_at(partner[slot].expect("x slots pair up")),
        Label::Y => vertex_at(slot),
        Label::A => unreachable!(),
    }
}

/// One forward step: where does inserting the next value at position `k`
/// (1-based; `k = len+1` appends) attach the new vertex?
fn step(kind: MapKind, pi: &[u32], k: usize) -> u32 {
    match kind {
        MapKind::UpDown => step_updown(pi, k),
        MapKind::LeftPeak => step_leftpeak(pi, k),
        MapKind::Exterior | MapKind::Unified => step_unified(pi, k),
    }
}

/// Position label consumed by the insertion, for tracing.
fn consumed_label(kind: MapKind, pi: &[u32], k: usize) -> Label {
    let i = pi.len();
    match kind {
        MapKind::UpDown => a_labeling_seq(pi).at(k),
        MapKind::LeftPeak => l_labeling_seq(pi).at(k),
        MapKind::Exterior | MapKind::Unified => {
            let (labels, _) = w_labeling_slots(pi);
            labels[if k == i + 1 { 0 } else { k }]
        }
    }
}

/// Position labels in display order `1..=i+1`, for tracing.
fn display_labels(kind: MapKind, pi: &[u32]) -> LabelSeq {
    match kind {
        MapKind::UpDown => a_labeling_seq(pi),
        MapKind::LeftPeak => l_labeling_seq(pi),
        MapKind::Exterior | MapKind::Unified => {
            let (labels, _) = w_labeling_slots(pi);
            let i = pi.len();
            let mut out: Vec<Label> = labels[1..=i].to_vec();
            out.push(labels[0]);
            LabelSeq::new(out)
        }
    }
}

fn weight_of(kind: MapKind, pi: &[u32]) -> LaurentPoly {
    display_labels(kind, pi).weight()
}

fn assert_coherent(kind: MapKind, pi: &[u32], parent: &[u32]) {
    let tree = IncreasingTree::new(parent.to_vec()).expect("construction keeps parents small");
    let i = pi.len();
    let tl = tree_labels(&tree, kind.tree_scheme());
    let vertex_label = |k: usize| tl[pi[k - 1] as usize];
    match kind {
        MapKind::UpDown | MapKind::LeftPeak => {
            let labels = display_labels(kind, pi);
            if rise_at(pi, i) {
                for k in 1..i {
                    assert_eq!(labels.at(k), vertex_label(k), "pi={pi:?} position {k}");
                }
                assert_eq!(labels.at(i), tl[0], "pi={pi:?} root pairing");
                assert_eq!(labels.at(i + 1), vertex_label(i), "pi={pi:?} tail pairing");
            } else {
                for k in 1..=i {
                    assert_eq!(labels.at(k), vertex_label(k), "pi={pi:?} position {k}");
                }
                assert_eq!(labels.at(i + 1), tl[0], "pi={pi:?} root pairing");
            }
        }
        MapKind::Exterior | MapKind::Unified => {
            let (labels, _) = w_labeling_slots(pi);
            for s in 1..=i {
                assert_eq!(labels[s], tl[pi[s - 1] as usize], "pi={pi:?} slot {s}");
            }
            assert_eq!(labels[0], tl[0], "pi={pi:?} root slot");
        }
    }
    assert_eq!(
        weight_of(kind, pi),
        tree_weight(&tree, kind.tree_scheme()),
        "weight coherence broken at pi={pi:?}"
    );
}

/// One row of the insertion table behind a bijection run.
#[derive(Clone, Debug)]
pub struct TraceStep {
    /// The value inserted at this step.
    pub value: u32,
    /// 1-based insertion position into the previous prefix.
    pub position: usize,
    /// Label consumed at that position.
    pub label: Label,
    /// Substitution rule applied to the label.
    pub rule: String,
    /// The prefix before insertion.
    pub pi_before: Vec<u32>,
    /// Its position labels (display order).
    pub labels_before: LabelSeq,
    /// Its weight.
    pub weight_before: LaurentPoly,
    /// Vertex the new element was attached to.
    pub attached_to: u32,
}

/// The full insertion table of one bijection run.
#[derive(Clone, Debug)]
pub struct InsertionTrace {
    pub kind: MapKind,
    pub sigma: Permutation,
    pub steps: Vec<TraceStep>,
}

impl fmt::Display for InsertionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            let pi = Permutation::new(s.pi_before.clone()).expect("prefixes are permutations");
            let mut line = render_labeled(&pi, &s.labels_before);
            // bracket the consumed label: it is token 2*position - 1
            let mut tokens: Vec<String> = line.split(' ').map(str::to_string).collect();
            let idx = 2 * s.position - 1;
            tokens[idx] = format!("[{}]", tokens[idx]);
            line = tokens.join(" ");
            writeln!(
                f,
                "i={:<2} {}  | weight {}  | {}",
                s.pi_before.len(),
                line,
                s.weight_before,
                s.rule
            )?;
        }
        Ok(())
    }
}

fn phi_impl(kind: MapKind, sigma: &Permutation, trace: bool) -> (IncreasingTree, Vec<TraceStep>) {
    let n = sigma.n();
    assert!(n >= 1, "the bijections need n >= 1");
    let mut index_of = vec![0usize; n + 1];
    for (idx, &v) in sigma.values().iter().enumerate() {
        index_of[v as usize] = idx;
    }
    let mut pi: Vec<u32> = vec![1];
    let mut parent: Vec<u32> = vec![0];
    assert_coherent(kind, &pi, &parent);
    let mut steps = Vec::new();
    for m in 2..=n as u32 {
        let idx = index_of[m as usize];
        let k = 1 + sigma.values()[..idx]
            .iter()
            .filter(|&&v| v < m)
            .count();
        let attach = step(kind, &pi, k);
        if trace {
            let label = consumed_label(kind, &pi, k);
            steps.push(TraceStep {
                value: m,
                position: k,
                label,
                rule: rule_string(label),
                pi_before: pi.clone(),
                labels_before: display_labels(kind, &pi),
                weight_before: weight_of(kind, &pi),
                attached_to: attach,
            });
        }
        pi = insert_at(&pi, k, m);
        parent.push(attach);
        assert_coherent(kind, &pi, &parent);
    }
    let tree = IncreasingTree::new(parent).expect("parents are increasing by construction");
    (tree, steps)
}

/// The grammar-assisted bijection of the chosen kind.
pub fn phi(kind: MapKind, sigma: &Permutation) -> IncreasingTree {
    phi_impl(kind, sigma, false).0
}

/// Like [`phi`] but also returns the insertion table.
pub fn phi_traced(kind: MapKind, sigma: &Permutation) -> (IncreasingTree, InsertionTrace) {
    let (tree, steps) = phi_impl(kind, sigma, true);
    (
        tree,
        InsertionTrace {
            kind,
            sigma: sigma.clone(),
            steps,
        },
    )
}

/// The unified reflection-principle form of the bijection.
pub fn unified_reflection(sigma: &Permutation) -> IncreasingTree {
    phi(MapKind::Unified, sigma)
}

/// Invert the bijection by probing forward steps; the matching insertion
/// position is asserted to be unique.
pub fn phi_inverse(kind: MapKind, tree: &IncreasingTree) -> Permutation {
    let n = tree.n();
    assert!(n >= 1, "the bijections need n >= 1");
    let mut pi: Vec<u32> = vec![1];
    for m in 2..=n {
        let target = tree.parents()[m - 1];
        let mut found: Option<usize> = None;
        for k in 1..=m {
            if step(kind, &pi, k) == target {
                assert!(
                    found.is_none(),
                    "inversion ambiguity: positions {} and {k} both attach {m} to {target}",
                    found.unwrap()
                );
                found = Some(k);
            }
        }
        let k = found
            .unwrap_or_else(|| panic!("no insertion position attaches {m} to {target} in {pi:?}"));
        pi = insert_at(&pi, k, m as u32);
    }
    Permutation::new(pi).expect("reconstruction yields a permutation")
}

/// The tree-side statistic transported by each map: even-degree nonroot
/// vertices (up-down), even-degree vertices including the root (left
/// peaks), or W-scheme `x` labels (exterior peaks).
pub fn transported_statistic(kind: MapKind, tree: &IncreasingTree) -> usize {
    let counts = tree.child_counts();
    match kind {
        MapKind::UpDown => counts.iter().skip(1).filter(|c| *c % 2 == 0).count(),
        MapKind::LeftPeak => counts.iter().filter(|c| *c % 2 == 0).count(),
        MapKind::Exterior | MapKind::Unified => {
            crate::trees::x_label_count(tree, TreeScheme::W)
        }
    }
}

/// Name of the tree-side statistic, for reports.
pub fn transported_statistic_name(kind: MapKind) -> &'static str {
    match kind {
        MapKind::UpDown => "even_degree_nonroot_vertices",
        MapKind::LeftPeak => "even_degree_vertices",
        MapKind::Exterior | MapKind::Unified => "w_x_labels",
    }
}

/// Expected tree-side value given the permutation-side statistic.
pub fn expected_transport(kind: MapKind, sigma: &Permutation) -> usize {
    use crate::permstat::{stat, StatKind};
    match kind {
        MapKind::UpDown => stat(StatKind::UpDownRun, sigma.values()),
        MapKind::LeftPeak => 2 * stat(StatKind::LeftPeak, sigma.values()) + 1,
        MapKind::Exterior | MapKind::Unified => 2 * stat(StatKind::ExteriorPeak, sigma.values()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permstat::{for_each_permutation, stat, StatKind};
    use crate::trees::{enumerate_trees, is_even_tree};
    use std::collections::HashSet;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    fn tree(parents: &[u32]) -> IncreasingTree {
        IncreasingTree::new(parents.to_vec()).unwrap()
    }

    #[test]
    fn base_cases_for_n_two() {
        for kind in MapKind::ALL {
            assert_eq!(phi(kind, &perm("1,2")), tree(&[0, 1]), "{kind}");
            assert_eq!(phi(kind, &perm("2,1")), tree(&[0, 0]), "{kind}");
        }
    }

    #[test]
    fn worked_table_example() {
        let sigma = perm("1,5,4,6,7,3,9,8,2");
        let expected = tree(&[0, 1, 0, 2, 3, 3, 6, 2, 2]);
        assert_eq!(phi(MapKind::UpDown, &sigma), expected);
        // the left-peak variant reaches the same tree
        assert_eq!(phi(MapKind::LeftPeak, &sigma), expected);
        assert_eq!(unified_reflection(&sigma), expected);
        // six up-down runs, six even-degree nonroot vertices
        assert_eq!(transported_statistic(MapKind::UpDown, &expected), 6);
        assert_eq!(stat(StatKind::UpDownRun, sigma.values()), 6);
    }

    #[test]
    fn worked_table_trace() {
        use crate::grammar::poly;
        let sigma = perm("1,5,4,6,7,3,9,8,2");
        let (_, trace) = phi_traced(MapKind::UpDown, &sigma);
        let weights: Vec<String> = trace
            .steps
            .iter()
            .map(|s| s.weight_before.to_string())
            .collect();
        // the displayed table starts at the prefix 1 2; the step from the
        // one-element prefix precedes it
        assert_eq!(
            weights,
            [
                "a*x",
                "a*x*y",
                "a*x^2*y",
                "a*x^2*y^2",
                "a*x^2*y^3",
                "a*x^4*y^2",
                "a*x^4*y^3",
                "a*x^6*y^2"
            ]
        );
        let rules: Vec<&str> = trace.steps.iter().map(|s| s.rule.as_str()).collect();
        assert_eq!(
            rules,
            [
                "x -> x*y",
                "a -> a*x",
                "x -> x*y",
                "x -> x*y",
                "y -> x^2",
                "x -> x*y",
                "y -> x^2",
                "x -> x*y"
            ]
        );
        // final weight of sigma itself
        assert_eq!(
            crate::labeling::a_labeling(&sigma).weight(),
            poly("a*x^6*y^3")
        );
        let rendered = trace.to_string();
        assert!(rendered.contains("0 y 1 [a] 2 x"), "got:\n{rendered}");
    }

    #[test]
    fn down_up_example_gives_even_tree() {
        let sigma = perm("3,2,9,6,7,1,8,4,5");
        let t = phi(MapKind::UpDown, &sigma);
        assert_eq!(t, tree(&[0, 0, 1, 0, 4, 1, 6, 4, 6]));
        assert!(is_even_tree(&t));
    }

    #[test]
    fn unified_example() {
        let sigma = perm("6,2,4,3,1,5");
        let expected = tree(&[0, 0, 2, 1, 0, 2]);
        assert_eq!(unified_reflection(&sigma), expected);
        assert_eq!(phi(MapKind::UpDown, &sigma), expected);
        assert_eq!(phi(MapKind::LeftPeak, &sigma), expected);
        assert_eq!(phi(MapKind::Exterior, &sigma), expected);
    }

    #[test]
    fn single_element() {
        for kind in MapKind::ALL {
            assert_eq!(phi(kind, &perm("1")), tree(&[0]));
            assert_eq!(phi_inverse(kind, &tree(&[0])), perm("1"));
        }
    }

    #[test]
    fn inverse_of_worked_examples() {
        let fit = tree(&[0, 1, 0, 2, 3, 3, 6, 2, 2]);
        assert_eq!(phi_inverse(MapKind::UpDown, &fit), perm("1,5,4,6,7,3,9,8,2"));
        assert_eq!(phi_inverse(MapKind::UpDown, &tree(&[0, 0])), perm("2,1"));
        assert_eq!(
            phi_inverse(MapKind::LeftPeak, &fit),
            perm("1,5,4,6,7,3,9,8,2")
        );
    }

    #[test]
    fn bijectivity_and_transport_small() {
        for kind in MapKind::ALL {
            for n in 1..=5usize {
                let mut images = HashSet::new();
                let mut total = 0usize;
                for_each_permutation(n, |s| {
                    let sigma = Permutation::new(s.to_vec()).unwrap();
                    let t = phi(kind, &sigma);
                    assert_eq!(
                        transported_statistic(kind, &t),
                        expected_transport(kind, &sigma),
                        "{kind} sigma={sigma}"
                    );
                    assert_eq!(phi_inverse(kind, &t), sigma, "{kind} round trip");
                    images.insert(t.parents().to_vec());
                    total += 1;
                });
                assert_eq!(images.len(), total, "{kind} injective on S_{n}");
            }
        }
    }

    #[test]
    fn inverse_sweeps_all_trees_small() {
        for kind in [MapKind::UpDown, MapKind::LeftPeak, MapKind::Unified] {
            for n in 1..=5usize {
                for t in enumerate_trees(n).unwrap() {
                    let sigma = phi_inverse(kind, &t);
                    assert_eq!(phi(kind, &sigma), t, "{kind}");
                }
            }
        }
    }

    #[test]
    fn three_maps_agree_small() {
        for n in 1..=5usize {
            for_each_permutation(n, |s| {
                let sigma = Permutation::new(s.to_vec()).unwrap();
                let a = phi(MapKind::UpDown, &sigma);
                let b = phi(MapKind::LeftPeak, &sigma);
                let c = unified_reflection(&sigma);
                assert_eq!(a, b, "sigma={sigma}");
                assert_eq!(a, c, "sigma={sigma}");
            });
        }
    }

    #[test]
    fn down_up_restriction_small() {
        use crate::permstat::{is_down_up, lambda_triangle};
        use num::BigUint;
        for n in 1..=6usize {
            let mut even_count = 0u64;
            for_each_permutation(n, |s| {
                let sigma = Permutation::new(s.to_vec()).unwrap();
                let t = phi(MapKind::UpDown, &sigma);
                assert_eq!(is_down_up(s), is_even_tree(&t), "sigma={sigma}");
                if is_even_tree(&t) {
                    even_count += 1;
                }
            });
            assert_eq!(BigUint::from(even_count), lambda_triangle(n).count(n));
        }
    }
}
