//! Permutations of `S_n` in one-line notation, together with the length,
//! descent, transposition, Bruhat-order, and 0-Hecke operations the rest of
//! the crate is built on.
//!
//! Positions and values are 1-indexed everywhere in the public interface.
//! All values are immutable; operations return new permutations.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};

/// A permutation of `{1..n}` in one-line notation.
///
/// ```
/// use grothkit_core::Permutation;
///
/// let w: Permutation = "2143".parse().unwrap();
/// assert_eq!(w.length(), 2);
/// assert_eq!(w.value(1), 2);
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from its one-line notation.
    pub fn from_one_line(values: &[usize]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NotAPermutation("empty word".into()));
        }
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in values {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::NotAPermutation(format!(
                    "{values:?} is not a bijection of 1..={n}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Self {
            word: values.iter().map(|&v| v as u32).collect(),
        })
    }

    /// The identity permutation of `S_n`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "rank must be positive");
        Self {
            word: (1..=n as u32).collect(),
        }
    }

    /// The longest permutation `n n-1 ... 1` of `S_n`.
    pub fn longest(n: usize) -> Self {
        assert!(n >= 1, "rank must be positive");
        Self {
            word: (1..=n as u32).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    /// The value `w(i)` at a 1-indexed position.
    pub fn value(&self, i: usize) -> usize {
        self.word[i - 1] as usize
    }

    pub fn one_line(&self) -> &[u32] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(k, &v)| v == k as u32 + 1)
    }

    pub fn is_longest(&self) -> bool {
        let n = self.n() as u32;
        self.word.iter().enumerate().all(|(k, &v)| v == n - k as u32)
    }

    /// The number of inversions, i.e. pairs `i < j` with `w(i) > w(j)`.
    pub fn length(&self) -> usize {
        let mut count = 0;
        for i in 0..self.word.len() {
            for j in i + 1..self.word.len() {
                if self.word[i] > self.word[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// All indices `i` with `w(i) > w(i+1)`, in increasing order.
    pub fn descent_positions(&self) -> Vec<usize> {
        (1..self.n())
            .filter(|&i| self.word[i - 1] > self.word[i])
            .collect()
    }

    /// True iff `w(i) > w(i+1)`, equivalently `length(w s_i) < length(w)`.
    pub fn is_descent(&self, i: usize) -> bool {
        i >= 1 && i < self.n() && self.word[i - 1] > self.word[i]
    }

    /// Right multiplication by the transposition `t_{ij}`: swaps the entries
    /// at positions `i` and `j`.
    pub fn mult_right_t(&self, i: usize, j: usize) -> Result<Self> {
        self.check_position_pair(i, j)?;
        let mut word = self.word.clone();
        word.swap(i - 1, j - 1);
        Ok(Self { word })
    }

    /// Left multiplication by `t_{ij}`: swaps the values `i` and `j` wherever
    /// they occur.
    pub fn mult_left_t(&self, i: usize, j: usize) -> Result<Self> {
        self.check_position_pair(i, j)?;
        let word = self
            .word
            .iter()
            .map(|&v| {
                if v as usize == i {
                    j as u32
                } else if v as usize == j {
                    i as u32
                } else {
                    v
                }
            })
            .collect();
        Ok(Self { word })
    }

    /// Right multiplication by the adjacent transposition `s_i`.
    pub fn mult_right_s(&self, i: usize) -> Result<Self> {
        self.check_adjacent_index(i)?;
        self.mult_right_t(i, i + 1)
    }

    /// The Demazure (0-Hecke) product `w * s_i`: returns `w` unchanged when
    /// `s_i` is a descent of `w`, and `w s_i` otherwise. The length never
    /// decreases.
    pub fn demazure_star(&self, i: usize) -> Result<Self> {
        self.check_adjacent_index(i)?;
        if self.word[i - 1] > self.word[i] {
            Ok(self.clone())
        } else {
            let mut word = self.word.clone();
            word.swap(i - 1, i);
            Ok(Self { word })
        }
    }

    /// Strong Bruhat order, decided by the dot criterion:
    /// `u <= v` iff for all `p, q`: `#{k <= p : u(k) >= q} <= #{k <= p : v(k) >= q}`.
    pub fn bruhat_leq(&self, other: &Permutation) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::RankMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(bruhat_leq_unchecked(&self.word, &other.word))
    }

    /// All permutations of `S_n` in lexicographic one-line order. This is the
    /// iteration order used by every exhaustive sweep and report.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        assert!(n >= 1, "rank must be positive");
        (1..=n as u32)
            .permutations(n)
            .map(|word| Permutation { word })
    }

    fn check_position_pair(&self, i: usize, j: usize) -> Result<()> {
        let n = self.n();
        if i < 1 || i >= j || j > n {
            return Err(Error::IndexOutOfRange {
                what: "transposition (i,j)",
                got: j.max(i),
                n,
            });
        }
        Ok(())
    }

    fn check_adjacent_index(&self, i: usize) -> Result<()> {
        if i < 1 || i >= self.n() {
            return Err(Error::IndexOutOfRange {
                what: "adjacent transposition index",
                got: i,
                n: self.n(),
            });
        }
        Ok(())
    }
}

/// Allocation-free dot-criterion comparison on raw one-line words of equal
/// length. Also used by the pruned subset enumeration, which calls it in a
/// tight loop.
pub(crate) fn bruhat_leq_unchecked(u: &[u32], v: &[u32]) -> bool {
    let n = u.len();
    // p = n and q = 1 always give equal counts.
    for p in 1..n {
        for q in 2..=n as u32 {
            let cu = u[..p].iter().filter(|&&x| x >= q).count();
            let cv = v[..p].iter().filter(|&&x| x >= q).count();
            if cu > cv {
                return false;
            }
        }
    }
    true
}

/// One-line notation: digits for `n <= 9` ("2157634"), comma-separated
/// otherwise ("2,1,5,7,6,3,4").
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for v in &self.word {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.word.iter().join(","))
        }
    }
}

/// Accepts both the digit form ("2143", n <= 9) and the comma form
/// ("2,1,4,3", any n).
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|part| {
                    part.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad entry {part:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad character {c:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::from_one_line(&values)
    }
}

/// An ordered sequence of adjacent-transposition indices, evaluated in the
/// 0-Hecke monoid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HeckeWord {
    letters: Vec<usize>,
}

impl HeckeWord {
    pub fn new(letters: Vec<usize>) -> Self {
        Self { letters }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Left-fold of the Demazure product starting from the identity:
    /// `(((s_{i_1} * s_{i_2}) * s_{i_3}) * ...) * s_{i_m}`.
    pub fn evaluate(&self, n: usize) -> Result<Permutation> {
        let mut w = Permutation::identity(n);
        for &i in &self.letters {
            w = w.demazure_star(i)?;
        }
        Ok(w)
    }
}

impl From<Vec<usize>> for HeckeWord {
    fn from(letters: Vec<usize>) -> Self {
        Self::new(letters)
    }
}

/// Evaluates a word in the 0-Hecke monoid of `S_n`. Every word evaluates to
/// exactly one permutation under the left-fold definition.
pub fn hecke_eval(word: &HeckeWord, n: usize) -> Result<Permutation> {
    word.evaluate(n)
}
