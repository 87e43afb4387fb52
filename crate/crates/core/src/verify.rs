//! Exhaustive verification sweeps at small rank: the main equality between
//! the divided-difference specialization and the signed subset sum over all
//! pairs, plus the five specialization identities it rests on.
//!
//! Reports are fully deterministic: rows are sorted by (check, u, v, i)
//! before emission, so the worker count never changes the output. Wall-clock
//! timings are kept out of the serialized report for the same reason.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grothendieck::{fixed_point_product, GrothCache};
use crate::laurent::{ExponentVector, LaurentPoly};
use crate::perm::Permutation;
use crate::pipedream::hecke_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Theorem,
    Lemmas,
    All,
}

impl VerifyMode {
    fn as_str(self) -> &'static str {
        match self {
            VerifyMode::Theorem => "theorem",
            VerifyMode::Lemmas => "lemmas",
            VerifyMode::All => "all",
        }
    }

    fn wants_theorem(self) -> bool {
        matches!(self, VerifyMode::Theorem | VerifyMode::All)
    }

    fn wants_lemmas(self) -> bool {
        matches!(self, VerifyMode::Lemmas | VerifyMode::All)
    }
}

/// One checked identity instance.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyRow {
    pub check: &'static str,
    pub u: String,
    pub v: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hecke_count: Option<usize>,
    pub equal: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub mode: &'static str,
    pub rows: Vec<VerifyRow>,
    /// Phase timings; excluded from serialization so output stays
    /// byte-identical across runs and worker counts.
    #[serde(skip)]
    pub elapsed: Vec<(&'static str, Duration)>,
}

impl VerifyReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &VerifyRow> {
        self.rows.iter().filter(|r| !r.equal)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// The monomial `y_a / y_b`.
fn y_ratio(n: usize, a: usize, b: usize) -> LaurentPoly {
    let mut y = vec![0i32; n];
    y[a - 1] += 1;
    y[b - 1] -= 1;
    LaurentPoly::monomial(n, 1, ExponentVector::new(vec![0; n], y))
}

fn row(
    check: &'static str,
    u: &Permutation,
    v: &Permutation,
    i: Option<usize>,
    lhs: &LaurentPoly,
    rhs: &LaurentPoly,
    hecke_count: Option<usize>,
) -> VerifyRow {
    VerifyRow {
        check,
        u: u.to_string(),
        v: v.to_string(),
        i,
        lhs_terms: lhs.num_terms(),
        rhs_terms: rhs.num_terms(),
        hecke_count,
        equal: lhs == rhs,
    }
}

/// Main equality at one pair: specialization versus signed subset sum.
fn theorem_row(cache: &GrothCache, u: &Permutation, v: &Permutation, prune: bool) -> Result<VerifyRow> {
    let lhs = cache.specialize_cached(u, v)?;
    let rhs = hecke_sum(u, v, prune)?;
    Ok(row(
        "theorem",
        u,
        v,
        None,
        &lhs,
        &rhs.poly,
        Some(rhs.subsets),
    ))
}

/// Descent-side recurrence: for `v = v' s_i` longer than `v'` and `i` a
/// descent of `u`,
/// `G_u(y_v) = (y_{v'(i)}/y_{v'(i+1)}) G_u(y_{v'}) + (1 - y_{v'(i)}/y_{v'(i+1)}) G_{u s_i}(y_{v'})`.
fn recurrence_descent_row(
    cache: &GrothCache,
    u: &Permutation,
    v_short: &Permutation,
    i: usize,
) -> Result<VerifyRow> {
    let n = cache.n();
    let v = v_short.mult_right_s(i)?;
    let us = u.mult_right_s(i)?;
    let lhs = cache.specialize_cached(u, &v)?;
    let ratio = y_ratio(n, v_short.value(i), v_short.value(i + 1));
    let rhs = ratio
        .mul(&cache.specialize_cached(u, v_short)?)?
        .add(
            &LaurentPoly::one(n)
                .sub(&ratio)?
                .mul(&cache.specialize_cached(&us, v_short)?)?,
        )?;
    Ok(row("recurrence_descent", u, &v, Some(i), &lhs, &rhs, None))
}

/// Ascent-side invariance: when `i` is an ascent of `u`, the specialization
/// does not distinguish `v` from `v s_i`.
fn recurrence_ascent_row(
    cache: &GrothCache,
    u: &Permutation,
    v: &Permutation,
    i: usize,
) -> Result<VerifyRow> {
    let v_other = v.mult_right_s(i)?;
    let lhs = cache.specialize_cached(u, v)?;
    let rhs = cache.specialize_cached(u, &v_other)?;
    Ok(row("recurrence_ascent", u, v, Some(i), &lhs, &rhs, None))
}

/// Vanishing below: `u` not below `v` in Bruhat order forces zero.
fn vanishing_row(cache: &GrothCache, u: &Permutation, v: &Permutation) -> Result<VerifyRow> {
    let lhs = cache.specialize_cached(u, v)?;
    let rhs = LaurentPoly::zero(cache.n());
    Ok(row("vanishing", u, v, None, &lhs, &rhs, None))
}

/// Diagonal step-down: for a descent `i` of `u` and `u' = u s_i`,
/// `G_u(y_u) = (1 - y_{u(i+1)}/y_{u(i)}) G_{u'}(y_{u'})`.
fn diagonal_step_row(cache: &GrothCache, u: &Permutation, i: usize) -> Result<VerifyRow> {
    let n = cache.n();
    let u_short = u.mult_right_s(i)?;
    let lhs = cache.specialize_cached(u, u)?;
    let rhs = LaurentPoly::one_minus_y_ratio(n, u.value(i + 1), u.value(i))
        .mul(&cache.specialize_cached(&u_short, &u_short)?)?;
    Ok(row("diagonal_step", u, u, Some(i), &lhs, &rhs, None))
}

/// Diagonal closed form: `G_u(y_u)` is the product over inversions.
fn diagonal_product_row(cache: &GrothCache, u: &Permutation) -> Result<VerifyRow> {
    let lhs = cache.specialize_cached(u, u)?;
    let rhs = fixed_point_product(u);
    Ok(row("diagonal_product", u, u, None, &lhs, &rhs, None))
}

/// Runs the requested sweeps over all of `S_n`. `jobs` is the worker count
/// (0 picks the available parallelism); output is identical for every value.
pub fn run(n: usize, mode: VerifyMode, jobs: usize, prune: bool) -> Result<VerifyReport> {
    if !(1..=6).contains(&n) {
        return Err(Error::PreconditionViolated(format!(
            "verification rank must be between 1 and 6, got {n}"
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::PreconditionViolated(format!("worker pool: {e}")))?;

    let mut elapsed = Vec::new();
    let start = Instant::now();
    let mut cache = GrothCache::new(n);
    cache.warm_all()?;
    let cache = &cache;
    elapsed.push(("warm", start.elapsed()));

    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let mut rows: Vec<VerifyRow> = Vec::new();

    if mode.wants_theorem() {
        let start = Instant::now();
        let pairs: Vec<(&Permutation, &Permutation)> = perms
            .iter()
            .flat_map(|u| perms.iter().map(move |v| (u, v)))
            .collect();
        let theorem_rows: Result<Vec<VerifyRow>> = pool.install(|| {
            pairs
                .par_iter()
                .map(|(u, v)| theorem_row(cache, u, v, prune))
                .collect()
        });
        rows.extend(theorem_rows?);
        elapsed.push(("theorem", start.elapsed()));
    }

    if mode.wants_lemmas() {
        let start = Instant::now();

        let mut descent_triples = Vec::new();
        let mut ascent_triples = Vec::new();
        for i in 1..n {
            for u in &perms {
                if u.is_descent(i) {
                    for v_short in perms.iter().filter(|p| !p.is_descent(i)) {
                        descent_triples.push((u, v_short, i));
                    }
                } else {
                    for v in &perms {
                        ascent_triples.push((u, v, i));
                    }
                }
            }
        }
        let mut noncomparable = Vec::new();
        for u in &perms {
            for v in &perms {
                if !u.bruhat_leq(v)? {
                    noncomparable.push((u, v));
                }
            }
        }
        let mut descent_pairs = Vec::new();
        for u in &perms {
            for i in u.descent_positions() {
                descent_pairs.push((u, i));
            }
        }

        let lemma_rows: Result<Vec<VerifyRow>> = pool.install(|| {
            let descent = descent_triples
                .par_iter()
                .map(|&(u, v_short, i)| recurrence_descent_row(cache, u, v_short, i));
            let ascent = ascent_triples
                .par_iter()
                .map(|&(u, v, i)| recurrence_ascent_row(cache, u, v, i));
            let vanish = noncomparable
                .par_iter()
                .map(|&(u, v)| vanishing_row(cache, u, v));
            let step = descent_pairs
                .par_iter()
                .map(|&(u, i)| diagonal_step_row(cache, u, i));
            let diag = perms.par_iter().map(|u| diagonal_product_row(cache, u));
            descent
                .chain(ascent)
                .chain(vanish)
                .chain(step)
                .chain(diag)
                .collect()
        });
        rows.extend(lemma_rows?);
        elapsed.push(("lemmas", start.elapsed()));
    }

    rows.sort_by(|a, b| {
        (a.check, &a.u, &a.v, a.i).cmp(&(b.check, &b.u, &b.v, b.i))
    });

    Ok(VerifyReport {
        n,
        mode: mode.as_str(),
        rows,
        elapsed,
    })
}
