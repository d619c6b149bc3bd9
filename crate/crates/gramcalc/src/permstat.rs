//! Permutation statistics, exhaustive triangle enumeration, the up-down-run
//! recurrence, and the bivariate polynomial encodings.
//!
//! All statistics work on any sequence of distinct positive values (only the
//! relative order matters), which lets the labeling module evaluate them on
//! decomposition blocks. Boundary conventions (`sigma_0 = 0`,
//! `sigma_{n+1} = 0`) are applied inside the statistics, never stored.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigUint, One, Zero};
use rayon::prelude::*;

use crate::poly::{LaurentPoly, Monomial, Rational, Variable};
use crate::{Error, Result};

/// A permutation of `{1..n}` (possibly empty).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Validate that `values` is a rearrangement of `1..=n`.
    pub fn new(values: Vec<u32>) -> Result<Permutation> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v as usize > n || seen[v as usize - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{values:?} is not a permutation of 1..={n}"
                )));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation { values })
    }

    /// The identity permutation of `[n]`.
    pub fn identity(n: usize) -> Permutation {
        Permutation {
            values: (1..=n as u32).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Parse the comma-separated literal, e.g. `"3,7,5,8,6,1,4,9,2"`.
    pub fn parse(s: &str) -> Result<Permutation> {
        let values = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::InvalidPermutation(format!("{part:?}: {e}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Permutation::new(values)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// The five statistics of the calculus.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StatKind {
    LeftPeak,
    InteriorPeak,
    ExteriorPeak,
    UpDownRun,
    AltRun,
}

impl StatKind {
    pub const ALL: [StatKind; 5] = [
        StatKind::LeftPeak,
        StatKind::InteriorPeak,
        StatKind::ExteriorPeak,
        StatKind::UpDownRun,
        StatKind::AltRun,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatKind::LeftPeak => "leftpeak",
            StatKind::InteriorPeak => "interiorpeak",
            StatKind::ExteriorPeak => "exteriorpeak",
            StatKind::UpDownRun => "updownrun",
            StatKind::AltRun => "altrun",
        }
    }
}

impl FromStr for StatKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<StatKind> {
        match s {
            "leftpeak" => Ok(StatKind::LeftPeak),
            "interiorpeak" | "interior" => Ok(StatKind::InteriorPeak),
            "exteriorpeak" | "exterior" => Ok(StatKind::ExteriorPeak),
            "updownrun" | "updown" => Ok(StatKind::UpDownRun),
            "altrun" | "alternating" => Ok(StatKind::AltRun),
            _ => Err(Error::Parse(format!("unknown statistic {s:?}"))),
        }
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Evaluate a statistic on a sequence of distinct positive values.
pub fn stat(kind: StatKind, seq: &[u32]) -> usize {
    let n = seq.len();
    match kind {
        StatKind::LeftPeak => (1..n)
            .filter(|&i| {
                let prev = if i == 1 { 0 } else { seq[i - 2] };
                prev < seq[i - 1] && seq[i - 1] > seq[i]
            })
            .count(),
        StatKind::InteriorPeak => (2..n)
            .filter(|&i| seq[i - 2] < seq[i - 1] && seq[i - 1] > seq[i])
            .count(),
        StatKind::ExteriorPeak => (1..=n)
            .filter(|&i| {
                let prev = if i == 1 { 0 } else { seq[i - 2] };
                let next = if i == n { 0 } else { seq[i] };
                prev < seq[i - 1] && seq[i - 1] > next
            })
            .count(),
        StatKind::UpDownRun => {
            if n == 0 {
                return 0;
            }
            // maximal monotone segments of 0, s_1, .., s_n
            let mut runs = 1;
            let mut rising = true; // step 0 -> s_1 always ascends
            for i in 1..n {
                let up = seq[i] > seq[i - 1];
                if up != rising {
                    runs += 1;
                    rising = up;
                }
            }
            runs
        }
        StatKind::AltRun => {
            if n <= 1 {
                return 0;
            }
            let mut runs = 1;
            let mut rising = seq[1] > seq[0];
            for i in 2..n {
                let up = seq[i] > seq[i - 1];
                if up != rising {
                    runs += 1;
                    rising = up;
                }
            }
            runs
        }
    }
}

/// Whether the sequence is down-up alternating: `s_1 > s_2 < s_3 > ...`.
pub fn is_down_up(seq: &[u32]) -> bool {
    seq.iter()
        .zip(seq.iter().skip(1))
        .enumerate()
        .all(|(i, (a, b))| if i % 2 == 0 { a > b } else { a < b })
}

/// Brute-force enumeration bound; override with `GRAMCALC_BRUTE_MAX`.
pub fn brute_force_bound() -> usize {
    std::env::var("GRAMCALC_BRUTE_MAX")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(10)
}

/// Advance `buf` to its lexicographic successor; false once exhausted.
pub fn next_permutation(buf: &mut [u32]) -> bool {
    let n = buf.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && buf[i - 1] >= buf[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while buf[j] <= buf[i - 1] {
        j -= 1;
    }
    buf.swap(i - 1, j);
    buf[i..].reverse();
    true
}

/// Visit every permutation of `[n]` in lexicographic order.
pub fn for_each_permutation<F: FnMut(&[u32])>(n: usize, mut f: F) {
    let mut buf: Vec<u32> = (1..=n as u32).collect();
    loop {
        f(&buf);
        if !next_permutation(&mut buf) {
            return;
        }
    }
}

/// One row of a statistic triangle. `counts[k]` is stored for every
/// `k = 0..=n`; entries outside the statistic's valid range are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StatTriangle {
    pub kind: StatKind,
    pub n: usize,
    counts: Vec<BigUint>,
}

impl StatTriangle {
    pub fn from_counts(kind: StatKind, n: usize, counts: Vec<BigUint>) -> StatTriangle {
        assert_eq!(counts.len(), n + 1);
        StatTriangle { kind, n, counts }
    }

    pub fn count(&self, k: usize) -> BigUint {
        self.counts.get(k).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn counts_full(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn row_sum(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// The k-range the paper tabulates for this statistic.
    pub fn valid_range(&self) -> std::ops::RangeInclusive<usize> {
        let n = self.n;
        match self.kind {
            _ if n == 0 => 0..=0,
            StatKind::LeftPeak => 0..=n / 2,
            StatKind::InteriorPeak => 0..=n.saturating_sub(1) / 2,
            StatKind::ExteriorPeak => 1..=(n + 1) / 2,
            StatKind::UpDownRun => 1..=n,
            StatKind::AltRun => {
                if n == 1 {
                    0..=0
                } else {
                    1..=n - 1
                }
            }
        }
    }

    /// `(k, count)` pairs over the valid range.
    pub fn rows(&self) -> Vec<(usize, BigUint)> {
        self.valid_range().map(|k| (k, self.count(k))).collect()
    }
}

fn bound_error(kind: StatKind, n: usize, bound: usize) -> Error {
    let mut msg = format!(
        "n={n} exceeds the brute-force bound {bound} (raise GRAMCALC_BRUTE_MAX to override)"
    );
    if kind == StatKind::UpDownRun {
        msg.push_str("; the recurrence method covers up-down runs at any n");
    }
    Error::BruteForceBound(msg)
}

/// Exhaustive triangle row: count `stat(kind, sigma)` over all of `S_n`.
///
/// The sum over `S_n` is partitioned by first element and counted in
/// parallel; merging is integer addition.
pub fn triangle(kind: StatKind, n: usize) -> Result<StatTriangle> {
    let bound = brute_force_bound();
    if n > bound {
        return Err(bound_error(kind, n, bound));
    }
    if n == 0 {
        return Ok(StatTriangle::from_counts(kind, 0, vec![BigUint::one()]));
    }
    let hist = (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut counts = vec![0u64; n + 1];
            let mut buf = Vec::with_capacity(n);
            buf.push(first);
            buf.extend((1..=n as u32).filter(|&v| v != first));
            loop {
                counts[stat(kind, &buf)] += 1;
                if !next_permutation(&mut buf[1..]) {
                    break;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut acc, part| {
                for (a, p) in acc.iter_mut().zip(part) {
                    *a += p;
                }
                acc
            },
        );
    let counts = hist.into_iter().map(BigUint::from).collect();
    Ok(StatTriangle::from_counts(kind, n, counts))
}

fn lambda_rows_through(n: usize) -> Vec<Vec<BigUint>> {
    // Lambda(0,0) = 1; Lambda(n,k) = k L(n-1,k) + L(n-1,k-1) + (n-k+1) L(n-1,k-2)
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for m in 1..=n {
        let prev = &rows[m - 1];
        let at = |j: isize| -> BigUint {
            if j < 0 || j as usize >= prev.len() {
                BigUint::zero()
            } else {
                prev[j as usize].clone()
            }
        };
        let mut row = vec![BigUint::zero(); m + 1];
        for (k, slot) in row.iter_mut().enumerate().skip(1) {
            let k_i = k as isize;
            *slot = at(k_i) * BigUint::from(k)
                + at(k_i - 1)
                + at(k_i - 2) * BigUint::from(m - k + 1);
        }
        rows.push(row);
    }
    rows
}

/// Row `Lambda(n, k)` over the tabulated range (`k = 1..=n` for `n >= 1`),
/// computed by the recurrence alone.
pub fn lambda_recurrence_row(n: usize) -> Vec<BigUint> {
    let rows = lambda_rows_through(n);
    let full = &rows[n];
    if n == 0 {
        vec![full[0].clone()]
    } else {
        full[1..].to_vec()
    }
}

/// Recurrence-computed triangle row as a [`StatTriangle`].
pub fn lambda_triangle(n: usize) -> StatTriangle {
    let rows = lambda_rows_through(n);
    StatTriangle::from_counts(StatKind::UpDownRun, n, rows[n].clone())
}

fn biguint_coeff(c: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(c.clone()))
}

/// The paper's bivariate encoding of a triangle row.
pub fn bivariate_from_triangle(t: &StatTriangle) -> LaurentPoly {
    let n = t.n as i32;
    let mono = |xe: i32, ye: i32| {
        Monomial::one()
            .with_exp(Variable::X, xe)
            .with_exp(Variable::Y, ye)
    };
    match t.kind {
        StatKind::LeftPeak => LaurentPoly::from_terms(
            t.counts
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (mono(2 * k as i32 + 1, n - 2 * k as i32), biguint_coeff(c))),
        ),
        StatKind::InteriorPeak => {
            if t.n == 0 {
                return LaurentPoly::one();
            }
            LaurentPoly::from_terms(
                t.counts
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| {
                        (
                            mono(2 * k as i32 + 2, n - 2 * k as i32 - 1),
                            biguint_coeff(c),
                        )
                    }),
            )
        }
        StatKind::ExteriorPeak => LaurentPoly::from_terms(
            t.counts
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (mono(2 * k as i32, n - 2 * k as i32 + 1), biguint_coeff(c))),
        ),
        StatKind::UpDownRun => LaurentPoly::from_terms(
            t.counts
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (mono(k as i32, n - k as i32), biguint_coeff(c))),
        ),
        // R_n(x,y) encodes row n+1 of the alternating-run triangle with
        // monomials x^k y^(n-k), so the caller hands us row n+1 here.
        StatKind::AltRun => LaurentPoly::from_terms(
            t.counts
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (mono(k as i32, n - 1 - k as i32), biguint_coeff(c))),
        ),
    }
}

/// Bivariate polynomial for statistic `kind` at size `n`, from brute force.
///
/// For `altrun` this is `R_n(x,y)`, built from the row at `n+1`.
pub fn bivariate(kind: StatKind, n: usize) -> Result<LaurentPoly> {
    let t = match kind {
        StatKind::AltRun => triangle(kind, n + 1)?,
        _ => triangle(kind, n)?,
    };
    Ok(bivariate_from_triangle(&t))
}

/// `Lambda_n(x, y)` from the recurrence.
pub fn lambda_bivariate(n: usize) -> LaurentPoly {
    bivariate_from_triangle(&lambda_triangle(n))
}

/// `Lambda_n(x)` (univariate) from the recurrence.
pub fn lambda_univariate(n: usize) -> LaurentPoly {
    let t = lambda_triangle(n);
    LaurentPoly::from_terms(t.counts_full().iter().enumerate().map(|(k, c)| {
        (
            Monomial::one().with_exp(Variable::X, k as i32),
            biguint_coeff(c),
        )
    }))
}

/// Exact factorial.
pub fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}

/// Exact binomial coefficient.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::poly;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    fn counts(t: &StatTriangle) -> Vec<u64> {
        t.rows()
            .iter()
            .map(|(_, c)| u64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn updown_run_examples() {
        assert_eq!(stat(StatKind::UpDownRun, perm("3,7,5,8,6,1,4,9,2").values()), 6);
        assert_eq!(stat(StatKind::AltRun, perm("3,7,5,8,6,1,4,9,2").values()), 6);
        assert_eq!(stat(StatKind::UpDownRun, &[2, 1]), 2);
        assert_eq!(stat(StatKind::AltRun, &[2, 1]), 1);
        assert_eq!(stat(StatKind::UpDownRun, &[1]), 1);
        assert_eq!(stat(StatKind::AltRun, &[1]), 0);
    }

    #[test]
    fn peak_examples() {
        let s = perm("1,9,8,3,6,5,4,2,7");
        assert_eq!(stat(StatKind::LeftPeak, s.values()), 2);
        let t = perm("1,5,4,6,7,3,9,8,2");
        assert_eq!(stat(StatKind::LeftPeak, t.values()), 3);
        assert_eq!(stat(StatKind::InteriorPeak, &[1, 3, 2]), 1);
        assert_eq!(stat(StatKind::ExteriorPeak, &[1, 2]), 1);
        assert_eq!(stat(StatKind::ExteriorPeak, &[2, 1]), 1);
    }

    #[test]
    fn empty_permutation_has_zero_statistics() {
        for kind in StatKind::ALL {
            assert_eq!(stat(kind, &[]), 0);
        }
    }

    #[test]
    fn triangle_updown_rows() {
        assert_eq!(counts(&triangle(StatKind::UpDownRun, 4).unwrap()), [1, 7, 11, 5]);
        assert_eq!(
            counts(&triangle(StatKind::UpDownRun, 6).unwrap()),
            [1, 31, 148, 268, 211, 61]
        );
    }

    #[test]
    fn triangle_interior_peak_small() {
        assert_eq!(counts(&triangle(StatKind::InteriorPeak, 3).unwrap()), [4, 2]);
    }

    #[test]
    fn triangle_row_sums_are_factorials() {
        for kind in StatKind::ALL {
            for n in 0..=6 {
                let t = triangle(kind, n).unwrap();
                assert_eq!(t.row_sum(), factorial(n), "{kind} n={n}");
            }
        }
    }

    #[test]
    fn triangle_bound_error_mentions_recurrence_for_updown_only() {
        std::env::remove_var("GRAMCALC_BRUTE_MAX");
        let e = triangle(StatKind::UpDownRun, 40).unwrap_err();
        assert!(e.to_string().contains("recurrence"));
        let e = triangle(StatKind::LeftPeak, 40).unwrap_err();
        assert!(!e.to_string().contains("recurrence"));
    }

    #[test]
    fn lambda_recurrence_matches_brute_force() {
        for n in 0..=7 {
            assert_eq!(
                lambda_triangle(n).counts_full(),
                triangle(StatKind::UpDownRun, n).unwrap().counts_full(),
                "n={n}"
            );
        }
    }

    #[test]
    fn lambda_recurrence_row_presentation() {
        assert_eq!(lambda_recurrence_row(0), vec![BigUint::one()]);
        assert_eq!(lambda_recurrence_row(1), vec![BigUint::one()]);
        let row3: Vec<u64> = lambda_recurrence_row(3)
            .iter()
            .map(|c| u64::try_from(c).unwrap())
            .collect();
        assert_eq!(row3, [1, 3, 2]);
    }

    #[test]
    fn euler_number_column() {
        // Lambda(7,7) = 272 equals the number of down-up permutations of [7]
        let row7 = lambda_recurrence_row(7);
        assert_eq!(row7[6], BigUint::from(272u32));
        let mut count = 0u32;
        for_each_permutation(7, |s| {
            if is_down_up(s) {
                count += 1;
            }
        });
        assert_eq!(count, 272);
    }

    #[test]
    fn bivariate_encodings() {
        assert_eq!(bivariate(StatKind::LeftPeak, 2).unwrap(), poly("x*y^2 + x^3"));
        assert_eq!(bivariate(StatKind::ExteriorPeak, 0).unwrap(), poly("y"));
        assert_eq!(bivariate(StatKind::LeftPeak, 0).unwrap(), poly("x"));
        assert_eq!(bivariate(StatKind::InteriorPeak, 0).unwrap(), poly("1"));
        assert_eq!(bivariate(StatKind::UpDownRun, 0).unwrap(), poly("1"));
        assert_eq!(bivariate(StatKind::AltRun, 0).unwrap(), poly("1"));
        // R_4(x,y) encodes the alternating-run row of S_5
        let t5 = triangle(StatKind::AltRun, 5).unwrap();
        assert_eq!(
            bivariate(StatKind::AltRun, 4).unwrap(),
            bivariate_from_triangle(&t5)
        );
    }

    #[test]
    fn grammar_agreement_small() {
        use crate::grammar::Grammar;
        let peak = Grammar::peak();
        let run = Grammar::run();
        for n in 0..=6usize {
            assert_eq!(
                peak.derive_n(&poly("x"), n),
                bivariate(StatKind::LeftPeak, n).unwrap(),
                "leftpeak n={n}"
            );
            assert_eq!(
                peak.derive_n(&poly("y"), n),
                bivariate(StatKind::ExteriorPeak, n).unwrap(),
                "exteriorpeak n={n}"
            );
            if n >= 1 {
                assert_eq!(
                    peak.derive_n(&poly("y"), n),
                    bivariate(StatKind::InteriorPeak, n).unwrap(),
                    "interiorpeak n={n}"
                );
            }
            assert_eq!(
                run.derive_n(&poly("a"), n),
                poly("a") * bivariate(StatKind::UpDownRun, n).unwrap(),
                "updownrun n={n}"
            );
            assert_eq!(
                run.derive_n(&poly("a^2"), n),
                poly("a^2") * bivariate(StatKind::AltRun, n).unwrap(),
                "altrun n={n}"
            );
        }
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![2, 1, 3]).is_ok());
        assert!(Permutation::new(vec![]).is_ok());
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![2, 4, 1]).is_err());
        assert!(Permutation::parse("3,1,2").is_ok());
        assert!(Permutation::parse("3,x").is_err());
        assert_eq!(perm("3,1,2").to_string(), "3,1,2");
    }

    #[test]
    fn binomial_and_factorial() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(6), BigUint::from(720u32));
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
    }
}
