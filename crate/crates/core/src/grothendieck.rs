//! Double Grothendieck polynomials, computed by the divided-difference
//! recursion from the closed product at the longest permutation.
//!
//! For the longest element the polynomial is the product of `1 - y_j / x_i`
//! over all cells with `i + j <= n`. Every other `G_w` is obtained by
//! applying the isobaric operator `pi_i` to `G_{w s_i}` for an ascent `i`
//! of `w`; the result is independent of which ascent is chosen, so a cache
//! keyed by the permutation is sound.

use std::collections::BTreeMap;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::perm::Permutation;

/// Which ascent the recursion descends through. The computed polynomial is
/// policy-independent; having both choices available makes that an easily
/// testable fact rather than an assumption.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AscentPolicy {
    SmallestAscent,
    LargestAscent,
}

/// The polynomial at the longest permutation of `S_n`:
/// the product of `1 - y_j x_i^{-1}` over `i + j <= n`.
pub fn groth_top(n: usize) -> LaurentPoly {
    assert!(n >= 1, "rank must be positive");
    let mut product = LaurentPoly::one(n);
    for i in 1..n {
        for j in 1..=(n - i) {
            let factor = LaurentPoly::one(n)
                .sub(
                    &LaurentPoly::var_y(n, j)
                        .mul(&inverse_x(n, i))
                        .expect("same rank"),
                )
                .expect("same rank");
            product = product.mul(&factor).expect("same rank");
        }
    }
    product
}

fn inverse_x(n: usize, i: usize) -> LaurentPoly {
    let mut exps = vec![0i32; n];
    exps[i - 1] = -1;
    LaurentPoly::monomial(
        n,
        1,
        crate::laurent::ExponentVector::new(exps, vec![0; n]),
    )
}

/// The closed product for a specialization at the permutation itself:
/// over all pairs `i < j` with `u(i) > u(j)`, the factor `1 - y_{u(j)} / y_{u(i)}`.
pub fn fixed_point_product(u: &Permutation) -> LaurentPoly {
    let n = u.n();
    let mut product = LaurentPoly::one(n);
    for i in 1..=n {
        for j in (i + 1)..=n {
            if u.value(i) > u.value(j) {
                let factor = LaurentPoly::one_minus_y_ratio(n, u.value(j), u.value(i));
                product = product.mul(&factor).expect("same rank");
            }
        }
    }
    product
}

/// Memoizing computer for the full family `{G_w : w in S_n}`.
///
/// `groth` fills the cache lazily along one recursion path; `warm_all`
/// fills it for the whole group, after which `cached` gives shared
/// read-only access (e.g. from worker threads).
pub struct GrothCache {
    n: usize,
    policy: AscentPolicy,
    map: HashMap<Permutation, LaurentPoly>,
}

impl GrothCache {
    pub fn new(n: usize) -> Self {
        Self::with_policy(n, AscentPolicy::SmallestAscent)
    }

    pub fn with_policy(n: usize, policy: AscentPolicy) -> Self {
        assert!(n >= 1, "rank must be positive");
        Self {
            n,
            policy,
            map: HashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn check_member(&self, w: &Permutation) -> Result<()> {
        if w.n() != self.n {
            return Err(Error::RankMismatch {
                left: self.n,
                right: w.n(),
            });
        }
        Ok(())
    }

    fn pick_ascent(&self, w: &Permutation) -> usize {
        let ascents = (1..self.n).filter(|&i| !w.is_descent(i));
        match self.policy {
            AscentPolicy::SmallestAscent => ascents.min(),
            AscentPolicy::LargestAscent => ascents.max(),
        }
        .expect("every non-longest permutation has an ascent")
    }

    fn ensure(&mut self, w: &Permutation) -> Result<()> {
        if self.map.contains_key(w) {
            return Ok(());
        }
        let poly = if w.is_longest() {
            groth_top(self.n)
        } else {
            let i = self.pick_ascent(w);
            let ws = w.mult_right_s(i)?;
            self.ensure(&ws)?;
            self.map[&ws].isobaric_pi(i)?
        };
        self.map.insert(w.clone(), poly);
        Ok(())
    }

    /// The double Grothendieck polynomial of `w`, computing and caching any
    /// missing ancestors along the way.
    pub fn groth(&mut self, w: &Permutation) -> Result<&LaurentPoly> {
        self.check_member(w)?;
        self.ensure(w)?;
        Ok(&self.map[w])
    }

    /// Cache lookup without computation.
    pub fn cached(&self, w: &Permutation) -> Option<&LaurentPoly> {
        self.map.get(w)
    }

    /// Computes the polynomial of every element of `S_n`.
    pub fn warm_all(&mut self) -> Result<()> {
        for w in Permutation::all(self.n) {
            self.ensure(&w)?;
        }
        Ok(())
    }

    /// `G_u` with every `x_i` replaced by `y_{v(i)}`.
    pub fn specialize(&mut self, u: &Permutation, v: &Permutation) -> Result<LaurentPoly> {
        self.check_member(u)?;
        self.check_member(v)?;
        let poly = self.groth(u)?.clone();
        poly.substitute_x_by_y_perm(v)
    }

    /// Like [`specialize`](Self::specialize) but never computes: requires a
    /// prior `warm_all` (or `groth(u)`), so it can run on shared references
    /// from parallel workers.
    pub fn specialize_cached(&self, u: &Permutation, v: &Permutation) -> Result<LaurentPoly> {
        self.check_member(u)?;
        self.check_member(v)?;
        let poly = self.cached(u).ok_or_else(|| {
            Error::PreconditionViolated(format!("polynomial of {u} is not cached yet"))
        })?;
        poly.substitute_x_by_y_perm(v)
    }

    /// The cache as a JSON object `{"entries": {one-line: poly, ...}, "n": n}`
    /// with entries sorted by key; deterministic for a given cache content.
    pub fn dump_json(&self) -> String {
        let entries: BTreeMap<String, &LaurentPoly> =
            self.map.iter().map(|(w, p)| (w.to_string(), p)).collect();
        serde_json::json!({ "n": self.n, "entries": entries }).to_string()
    }
}
