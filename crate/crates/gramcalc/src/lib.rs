//! Exact symbolic calculus for peak and run statistics of permutations.
//!
//! The crate implements a small computer-algebra core (sparse Laurent
//! polynomials over the rationals, a quadratic extension by `rho` with
//! `rho^2 = y^2 - x^2`, and truncated power series), formal derivatives
//! with respect to substitution grammars, brute-force permutation
//! statistics, grammatical labelings, bijections onto increasing trees,
//! and a registry of machine-checkable identities tying all of it
//! together. Everything is exact: no floating point anywhere.

pub mod bijection;
pub mod grammar;
pub mod identities;
pub mod labeling;
pub mod permstat;
pub mod poly;
pub mod series;
pub mod trees;

pub use bijection::{phi, phi_inverse, phi_traced, unified_reflection, InsertionTrace, MapKind};
pub use grammar::Grammar;
pub use identities::{verify, verify_all, verify_suite, CheckParams, IdentityCheck};
pub use labeling::{
    a_labeling, decompose, insert_consistency, l_labeling, label_weight, DecompKind,
    Decomposition, InsertReport, Label, LabelSeq,
};
pub use permstat::{
    bivariate, lambda_bivariate, lambda_recurrence_row, lambda_univariate, stat, triangle,
    Permutation, StatKind, StatTriangle,
};
pub use poly::{rho_modulus, rho_mul, LaurentPoly, Monomial, Rational, RhoElement, Variable};
pub use series::{closed_form, FormulaId, Series};
pub use trees::{enumerate_trees, is_even_tree, tree_weight, IncreasingTree, TreeScheme};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown variable: {0}")]
    UnknownVariable(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("constant term not a unit")]
    NonUnitConstantTerm,
    #[error("series order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series rho-modulus mismatch")]
    ModulusMismatch,
    #[error("exp requires zero constant term")]
    ExpConstantTerm,
    #[error("unknown formula: {0}")]
    UnknownFormula(String),
    #[error("unknown grammar: {0}")]
    UnknownGrammar(String),
    #[error("unknown identity: {0}")]
    UnknownIdentity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    BruteForceBound(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
