//! Exact sparse Laurent polynomials in the `2n` commuting variables
//! `x_1..x_n, y_1..y_n` over the integers.
//!
//! Coefficients are arbitrary-precision integers and never overflow.
//! Internally a polynomial is a map from exponent vectors to coefficients;
//! the map order is the canonical term order (lexicographic on the
//! concatenation of x- and y-exponents), which makes serialized output
//! bit-exact across runs. Zero is the empty term map. The ambient rank `n`
//! is fixed per polynomial and mixed-rank arithmetic is an error.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Exponents of one monomial: `n` integers for the x part and `n` for the
/// y part, each possibly negative. The derived `Ord` is the canonical term
/// order (x part first, then y part, both lexicographic).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector {
    x: Vec<i32>,
    y: Vec<i32>,
}

impl ExponentVector {
    pub fn new(x: Vec<i32>, y: Vec<i32>) -> Self {
        Self { x, y }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            x: vec![0; n],
            y: vec![0; n],
        }
    }

    pub fn x_exps(&self) -> &[i32] {
        &self.x
    }

    pub fn y_exps(&self) -> &[i32] {
        &self.y
    }

    fn plus(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            y: self.y.iter().zip(&other.y).map(|(a, b)| a + b).collect(),
        }
    }

    /// Sum of absolute exponents; only used to pick a readable display order.
    fn l1_norm(&self) -> i64 {
        self.x
            .iter()
            .chain(&self.y)
            .map(|&e| (e as i64).abs())
            .sum()
    }

    fn is_constant(&self) -> bool {
        self.x.iter().chain(&self.y).all(|&e| e == 0)
    }
}

/// One monomial with its (nonzero) coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigInt,
    pub exps: ExponentVector,
}

/// A sparse Laurent polynomial in `x_1..x_n, y_1..y_n` with exact integer
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    n: usize,
    terms: BTreeMap<ExponentVector, BigInt>,
}

fn merge_term(map: &mut BTreeMap<ExponentVector, BigInt>, exps: ExponentVector, coeff: BigInt) {
    if coeff.is_zero() {
        return;
    }
    match map.entry(exps) {
        Entry::Vacant(slot) => {
            slot.insert(coeff);
        }
        Entry::Occupied(mut slot) => {
            *slot.get_mut() += coeff;
            if slot.get().is_zero() {
                slot.remove();
            }
        }
    }
}

impl LaurentPoly {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "rank must be positive");
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, 1)
    }

    pub fn constant(n: usize, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        merge_term(&mut terms, ExponentVector::zeros(n), BigInt::from(c));
        assert!(n >= 1, "rank must be positive");
        Self { n, terms }
    }

    /// The variable `x_i` (1-indexed, `1 <= i <= n`).
    pub fn var_x(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "x index out of range");
        let mut exps = ExponentVector::zeros(n);
        exps.x[i - 1] = 1;
        Self::monomial(n, 1, exps)
    }

    /// The variable `y_j` (1-indexed, `1 <= j <= n`).
    pub fn var_y(n: usize, j: usize) -> Self {
        assert!((1..=n).contains(&j), "y index out of range");
        let mut exps = ExponentVector::zeros(n);
        exps.y[j - 1] = 1;
        Self::monomial(n, 1, exps)
    }

    pub fn monomial(n: usize, coeff: i64, exps: ExponentVector) -> Self {
        assert_eq!(exps.x.len(), n);
        assert_eq!(exps.y.len(), n);
        let mut terms = BTreeMap::new();
        merge_term(&mut terms, exps, BigInt::from(coeff));
        Self { n, terms }
    }

    /// The binomial `1 - y_a / y_b`, the shape every box weight and
    /// fixed-point factor takes. Requires `a != b`.
    pub fn one_minus_y_ratio(n: usize, a: usize, b: usize) -> Self {
        assert!((1..=n).contains(&a) && (1..=n).contains(&b) && a != b);
        let mut exps = ExponentVector::zeros(n);
        exps.y[a - 1] = 1;
        exps.y[b - 1] = -1;
        let mut terms = BTreeMap::new();
        merge_term(&mut terms, ExponentVector::zeros(n), BigInt::one());
        merge_term(&mut terms, exps, -BigInt::one());
        Self { n, terms }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// stripping zero coefficients.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        assert!(n >= 1, "rank must be positive");
        let mut map = BTreeMap::new();
        for term in terms {
            if term.exps.x.len() != n || term.exps.y.len() != n {
                return Err(Error::RankMismatch {
                    left: n,
                    right: term.exps.x.len().max(term.exps.y.len()),
                });
            }
            merge_term(&mut map, term.exps, term.coeff);
        }
        Ok(Self { n, terms: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| e.is_constant() && c.is_one())
                .unwrap_or(false)
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn to_terms(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|(e, c)| Term {
                coeff: c.clone(),
                exps: e.clone(),
            })
            .collect()
    }

    fn check_rank(&self, other: &LaurentPoly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RankMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    fn check_x_index(&self, i: usize) -> Result<()> {
        if i < 1 || i >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "x variable pair index",
                got: i,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            merge_term(&mut terms, e.clone(), c.clone());
        }
        Ok(LaurentPoly { n: self.n, terms })
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> LaurentPoly {
        LaurentPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                merge_term(&mut terms, e1.plus(e2), c1 * c2);
            }
        }
        Ok(LaurentPoly { n: self.n, terms })
    }

    /// Term-by-term equality of canonical forms.
    pub fn equals(&self, other: &LaurentPoly) -> Result<bool> {
        self.check_rank(other)?;
        Ok(self.terms == other.terms)
    }

    /// The action of `s_i` on the x variables: exchanges `x_i` and `x_{i+1}`
    /// in every term.
    pub fn swap_x(&self, i: usize) -> Result<LaurentPoly> {
        self.check_x_index(i)?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.x.swap(i - 1, i);
            merge_term(&mut terms, e2, c.clone());
        }
        Ok(LaurentPoly { n: self.n, terms })
    }

    /// The divided difference `(f - s_i f) / (x_i - x_{i+1})`, computed by the
    /// per-monomial closed form (exact for negative exponents as well):
    /// a term with `x_i^a x_{i+1}^b` contributes nothing when `a = b`,
    /// `sum_{k=b}^{a-1} x_i^k x_{i+1}^{a+b-1-k}` when `a > b`, and the
    /// negated mirror sum when `a < b`.
    pub fn divided_difference(&self, i: usize) -> Result<LaurentPoly> {
        self.check_x_index(i)?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let a = e.x[i - 1];
            let b = e.x[i];
            if a == b {
                continue;
            }
            let (lo, hi) = (a.min(b), a.max(b));
            let negate = a < b;
            for k in lo..hi {
                let mut e2 = e.clone();
                e2.x[i - 1] = k;
                e2.x[i] = hi + lo - 1 - k;
                let coeff = if negate { -c } else { c.clone() };
                merge_term(&mut terms, e2, coeff);
            }
        }
        let quotient = LaurentPoly { n: self.n, terms };
        #[cfg(debug_assertions)]
        {
            // Division must be exact: re-multiplying by (x_i - x_{i+1}) has to
            // reproduce f - s_i f. A failure here is an internal error, never
            // a user-facing case.
            let divisor = Self::var_x(self.n, i)
                .sub(&Self::var_x(self.n, i + 1))
                .unwrap();
            let back = divisor.mul(&quotient).unwrap();
            let numerator = self.sub(&self.swap_x(i).unwrap()).unwrap();
            debug_assert!(back == numerator, "divided difference left a remainder");
        }
        Ok(quotient)
    }

    /// The isobaric operator `pi_i f = divided_difference(x_i * f, i)`.
    pub fn isobaric_pi(&self, i: usize) -> Result<LaurentPoly> {
        self.check_x_index(i)?;
        LaurentPoly::var_x(self.n, i)
            .mul(self)?
            .divided_difference(i)
    }

    /// Replaces every `x_i` by `y_{v(i)}`; the result involves only the y
    /// variables.
    pub fn substitute_x_by_y_perm(&self, v: &Permutation) -> Result<LaurentPoly> {
        if v.n() != self.n {
            return Err(Error::RankMismatch {
                left: self.n,
                right: v.n(),
            });
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut y = e.y.clone();
            for pos in 1..=self.n {
                y[v.value(pos) - 1] += e.x[pos - 1];
            }
            merge_term(
                &mut terms,
                ExponentVector {
                    x: vec![0; self.n],
                    y,
                },
                c.clone(),
            );
        }
        Ok(LaurentPoly { n: self.n, terms })
    }

    fn display_terms(&self) -> Vec<(&ExponentVector, &BigInt)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        // Constants and low-degree monomials first, then heavier ones; ties
        // broken by descending canonical order so pure-x terms precede pure-y.
        terms.sort_by(|(ea, _), (eb, _)| {
            ea.l1_norm()
                .cmp(&eb.l1_norm())
                .then_with(|| eb.cmp(ea))
        });
        terms
    }

    /// LaTeX rendering, e.g. `1-\frac{y_1}{x_1}`. Display-only; the stable
    /// machine format is the JSON serialization.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (exps, coeff)) in self.display_terms().into_iter().enumerate() {
            let negative = coeff.is_negative();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push(if negative { '-' } else { '+' });
            }
            out.push_str(&latex_term(coeff.magnitude().to_string(), exps));
        }
        out
    }

    /// Plain-text rendering, e.g. `1 - x1^-1*y1`. Display-only.
    pub fn to_plain(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (exps, coeff)) in self.display_terms().into_iter().enumerate() {
            let negative = coeff.is_negative();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&plain_term(coeff.magnitude().to_string(), exps));
        }
        out
    }
}

fn latex_var(base: char, index: usize, exp: i32) -> String {
    let sub = if index <= 9 {
        format!("_{index}")
    } else {
        format!("_{{{index}}}")
    };
    let mag = exp.unsigned_abs();
    if mag == 1 {
        format!("{base}{sub}")
    } else if mag <= 9 {
        format!("{base}{sub}^{mag}")
    } else {
        format!("{base}{sub}^{{{mag}}}")
    }
}

fn latex_term(coeff_mag: String, exps: &ExponentVector) -> String {
    let mut numerator = String::new();
    let mut denominator = String::new();
    for (idx, &e) in exps.x.iter().enumerate() {
        match e.cmp(&0) {
            std::cmp::Ordering::Greater => numerator.push_str(&latex_var('x', idx + 1, e)),
            std::cmp::Ordering::Less => denominator.push_str(&latex_var('x', idx + 1, e)),
            std::cmp::Ordering::Equal => {}
        }
    }
    for (idx, &e) in exps.y.iter().enumerate() {
        match e.cmp(&0) {
            std::cmp::Ordering::Greater => numerator.push_str(&latex_var('y', idx + 1, e)),
            std::cmp::Ordering::Less => denominator.push_str(&latex_var('y', idx + 1, e)),
            std::cmp::Ordering::Equal => {}
        }
    }
    let coeff_part = if coeff_mag == "1" && !(numerator.is_empty() && denominator.is_empty()) {
        String::new()
    } else {
        coeff_mag
    };
    if denominator.is_empty() {
        format!("{coeff_part}{numerator}")
    } else {
        let top = if numerator.is_empty() && coeff_part.is_empty() {
            "1".to_string()
        } else {
            format!("{coeff_part}{numerator}")
        };
        format!("\\frac{{{top}}}{{{denominator}}}")
    }
}

fn plain_term(coeff_mag: String, exps: &ExponentVector) -> String {
    let mut factors = Vec::new();
    for (idx, &e) in exps.x.iter().enumerate() {
        if e == 1 {
            factors.push(format!("x{}", idx + 1));
        } else if e != 0 {
            factors.push(format!("x{}^{}", idx + 1, e));
        }
    }
    for (idx, &e) in exps.y.iter().enumerate() {
        if e == 1 {
            factors.push(format!("y{}", idx + 1));
        } else if e != 0 {
            factors.push(format!("y{}^{}", idx + 1, e));
        }
    }
    if factors.is_empty() {
        coeff_mag
    } else if coeff_mag == "1" {
        factors.join("*")
    } else {
        format!("{}*{}", coeff_mag, factors.join("*"))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_plain())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    c: String,
    x: Vec<i32>,
    y: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = PolyRepr {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr {
                    c: c.to_string(),
                    x: e.x.clone(),
                    y: e.y.clone(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        let terms = repr
            .terms
            .into_iter()
            .map(|t| {
                let coeff = BigInt::from_str(&t.c)
                    .map_err(|_| D::Error::custom(format!("bad coefficient {:?}", t.c)))?;
                Ok(Term {
                    coeff,
                    exps: ExponentVector::new(t.x, t.y),
                })
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        LaurentPoly::from_terms(repr.n, terms).map_err(D::Error::custom)
    }
}
