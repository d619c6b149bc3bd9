//! Increasing trees on `{0..n}` and their parity-based labelings.
//!
//! A tree is stored as a parent array: entry `v-1` holds the parent of
//! vertex `v`, and `parent(v) < v`, so every prefix of the array is itself
//! an increasing tree. Children are unordered; there are exactly `n!` trees.

use num::One;
use serde::{Deserialize, Serialize};

use crate::labeling::Label;
use crate::poly::{LaurentPoly, Monomial, Rational};
use crate::{Error, Result};

/// Rooted unordered tree on `{0..n}` with labels increasing away from
/// the root `0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IncreasingTree {
    parent: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    n: usize,
    parent: Vec<u32>,
}

impl IncreasingTree {
    /// Validate `parent(v) < v` for all `v`.
    pub fn new(parent: Vec<u32>) -> Result<IncreasingTree> {
        for (i, &p) in parent.iter().enumerate() {
            let v = i + 1;
            if p as usize >= v {
                return Err(Error::InvalidTree(format!(
                    "parent({v}) = {p} is not smaller than {v}"
                )));
            }
        }
        Ok(IncreasingTree { parent })
    }

    /// Number of nonroot vertices.
    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parents(&self) -> &[u32] {
        &self.parent
    }

    /// Parent of vertex `v` (1-based nonroot vertex).
    pub fn parent_of(&self, v: usize) -> u32 {
        self.parent[v - 1]
    }

    /// Number of children of each vertex, indexed `0..=n`.
    pub fn child_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n() + 1];
        for &p in &self.parent {
            counts[p as usize] += 1;
        }
        counts
    }

    /// Child count of a single vertex.
    pub fn degree(&self, v: usize) -> usize {
        self.parent.iter().filter(|&&p| p as usize == v).count()
    }

    /// The subtree induced by `{0..m}` (a prefix of the parent array).
    pub fn restrict(&self, m: usize) -> IncreasingTree {
        IncreasingTree {
            parent: self.parent[..m].to_vec(),
        }
    }

    /// Parse `{"n": 9, "parent": [0,1,0,2,3,3,6,2,2]}`.
    pub fn from_json(s: &str) -> Result<IncreasingTree> {
        let raw: TreeJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidTree(e.to_string()))?;
        if raw.parent.len() != raw.n {
            return Err(Error::InvalidTree(format!(
                "n = {} but parent array has length {}",
                raw.n,
                raw.parent.len()
            )));
        }
        IncreasingTree::new(raw.parent)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TreeJson {
            n: self.n(),
            parent: self.parent.clone(),
        })
        .expect("tree serialization cannot fail")
    }
}

/// Enumeration bound for trees; override with `GRAMCALC_TREE_MAX`.
pub fn tree_bound() -> usize {
    std::env::var("GRAMCALC_TREE_MAX")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(8)
}

/// Iterator over all `n!` increasing trees on `{0..n}`: vertex `v` attaches
/// to any of `0..v-1`.
pub struct TreeEnum {
    parent: Vec<u32>,
    done: bool,
}

impl Iterator for TreeEnum {
    type Item = IncreasingTree;

    fn next(&mut self) -> Option<IncreasingTree> {
        if self.done {
            return None;
        }
        let item = IncreasingTree {
            parent: self.parent.clone(),
        };
        // mixed-radix increment: digit v-1 runs over 0..v
        self.done = true;
        for v in (1..=self.parent.len()).rev() {
            if (self.parent[v - 1] as usize) + 1 < v {
                self.parent[v - 1] += 1;
                for w in v + 1..=self.parent.len() {
                    self.parent[w - 1] = 0;
                }
                self.done = false;
                break;
            }
        }
        Some(item)
    }
}

/// Stream all increasing trees on `{0..n}` (bound-checked).
pub fn enumerate_trees(n: usize) -> Result<TreeEnum> {
    let bound = tree_bound();
    if n > bound {
        return Err(Error::BruteForceBound(format!(
            "n={n} exceeds the tree enumeration bound {bound} (raise GRAMCALC_TREE_MAX to override)"
        )));
    }
    Ok(TreeEnum {
        parent: vec![0; n],
        done: false,
    })
}

/// The three vertex-labeling schemes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TreeScheme {
    /// Root `a`; nonroot vertices `x` when of even degree, else `y`.
    Parity,
    /// Every vertex (root included) `x` when of even degree, else `y`.
    L,
    /// Nonroot vertices by parity; the root starts from seed `y`, so its
    /// label is `x` exactly when its degree is odd.
    W,
}

impl std::str::FromStr for TreeScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<TreeScheme> {
        match s {
            "parity" | "a" => Ok(TreeScheme::Parity),
            "l" | "L" => Ok(TreeScheme::L),
            "w" | "W" => Ok(TreeScheme::W),
            _ => Err(Error::Parse(format!("unknown tree scheme {s:?}"))),
        }
    }
}

/// Per-vertex labels under a scheme, indexed by vertex `0..=n`.
pub fn tree_labels(tree: &IncreasingTree, scheme: TreeScheme) -> Vec<Label> {
    let counts = tree.child_counts();
    counts
        .iter()
        .enumerate()
        .map(|(v, &c)| {
            let even = c % 2 == 0;
            if v == 0 {
                match scheme {
                    TreeScheme::Parity => Label::A,
                    TreeScheme::L => {
                        if even {
                            Label::X
                        } else {
                            Label::Y
                        }
                    }
                    TreeScheme::W => {
                        if even {
                            Label::Y
                        } else {
                            Label::X
                        }
                    }
                }
            } else if even {
                Label::X
            } else {
                Label::Y
            }
        })
        .collect()
}

/// Product of the vertex labels as a monomial.
pub fn tree_weight(tree: &IncreasingTree, scheme: TreeScheme) -> LaurentPoly {
    let mut m = Monomial::one();
    for l in tree_labels(tree, scheme) {
        let v = l.variable();
        m = m.with_exp(v, m.exp(v) + 1);
    }
    LaurentPoly::monomial(m, Rational::one())
}

/// Number of vertices labeled `x` under a scheme.
pub fn x_label_count(tree: &IncreasingTree, scheme: TreeScheme) -> usize {
    tree_labels(tree, scheme)
        .iter()
        .filter(|&&l| l == Label::X)
        .count()
}

/// Whether every nonroot vertex has an even number of children.
pub fn is_even_tree(tree: &IncreasingTree) -> bool {
    let counts = tree.child_counts();
    counts.iter().skip(1).all(|c| c % 2 == 0)
}
