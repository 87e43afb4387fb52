//! Bottom pipe-dream diagrams, box weights and labels, diagram words, and
//! the signed weighted sum over Hecke subsets.
//!
//! For a permutation `w`, row `i` of the bottom diagram holds one box per
//! value that is smaller than `w(i)` and appears to its right, left-justified
//! inside the staircase (row `i` has at most `n - i` cells). The box in row
//! `i`, column `k` carries the weight `1 - y_{a_k} / y_{w(i)}` where `a_k` is
//! the k-th smallest such value, and the label `s_{i+k-1}`. Reading labels
//! row by row, right to left, turns any subset of boxes into a word over the
//! 0-Hecke monoid.

use std::collections::BTreeSet;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::perm::{bruhat_leq_unchecked, HeckeWord, Permutation};

/// A cell of the staircase, 1-indexed; `row + col <= n` always holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoxRef {
    pub row: usize,
    pub col: usize,
}

impl BoxRef {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// The label `s_{i+k-1}` of the staircase cell in row `i`, column `k`.
pub fn box_label(b: BoxRef) -> usize {
    b.row + b.col - 1
}

/// An arbitrary set of staircase cells at a fixed rank. Weights are not
/// stored here; they come from the ambient permutation via [`WeightTable`],
/// so the same diagram can be read inside any bottom diagram containing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    n: usize,
    boxes: BTreeSet<BoxRef>,
}

impl Diagram {
    pub fn empty(n: usize) -> Self {
        assert!(n >= 1, "rank must be positive");
        Self {
            n,
            boxes: BTreeSet::new(),
        }
    }

    pub fn new(n: usize, boxes: impl IntoIterator<Item = BoxRef>) -> Result<Self> {
        assert!(n >= 1, "rank must be positive");
        let mut set = BTreeSet::new();
        for b in boxes {
            if b.row < 1 || b.col < 1 || b.row + b.col > n {
                return Err(Error::BoxNotInDiagram {
                    row: b.row,
                    col: b.col,
                });
            }
            set.insert(b);
        }
        Ok(Self { n, boxes: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn contains(&self, b: BoxRef) -> bool {
        self.boxes.contains(&b)
    }

    /// Boxes in (row, col) order.
    pub fn boxes(&self) -> impl Iterator<Item = BoxRef> + '_ {
        self.boxes.iter().copied()
    }

    pub fn is_subset_of(&self, other: &Diagram) -> bool {
        self.n == other.n && self.boxes.is_subset(&other.boxes)
    }

    /// The same diagram with one more box.
    pub fn with_box(&self, b: BoxRef) -> Result<Diagram> {
        let mut boxes = self.boxes.clone();
        boxes.insert(b);
        Diagram::new(self.n, boxes)
    }

    /// Boxes in word-reading order: rows top to bottom, right to left
    /// within a row.
    pub fn reading_order(&self) -> Vec<BoxRef> {
        let mut out: Vec<BoxRef> = self.boxes.iter().copied().collect();
        out.sort_by(|a, b| a.row.cmp(&b.row).then(b.col.cmp(&a.col)));
        out
    }
}

impl Serialize for Diagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            boxes: Vec<[usize; 2]>,
        }
        Repr {
            n: self.n,
            boxes: self.boxes.iter().map(|b| [b.row, b.col]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            boxes: Vec<[usize; 2]>,
        }
        let repr = Repr::deserialize(deserializer)?;
        Diagram::new(repr.n, repr.boxes.into_iter().map(|[r, c]| BoxRef::new(r, c)))
            .map_err(D::Error::custom)
    }
}

/// Per-permutation weight data: for each row `i`, the values right of
/// position `i` that are smaller than `w(i)`, sorted ascending. Built once
/// and then read-only, so it can be shared across workers.
#[derive(Debug, Clone)]
pub struct WeightTable {
    n: usize,
    row_value: Vec<usize>,
    smaller_right: Vec<Vec<usize>>,
}

impl WeightTable {
    pub fn new(w: &Permutation) -> Self {
        let n = w.n();
        let row_value: Vec<usize> = (1..=n).map(|i| w.value(i)).collect();
        let smaller_right = (1..=n)
            .map(|i| {
                let mut vals: Vec<usize> = ((i + 1)..=n)
                    .map(|j| w.value(j))
                    .filter(|&vj| vj < w.value(i))
                    .collect();
                vals.sort_unstable();
                vals
            })
            .collect();
        Self {
            n,
            row_value,
            smaller_right,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of boxes in row `i` of the bottom diagram.
    pub fn row_len(&self, i: usize) -> usize {
        self.smaller_right[i - 1].len()
    }

    /// The y indices (numerator, denominator) of the weight of box `b`.
    pub fn weight_pair(&self, b: BoxRef) -> Result<(usize, usize)> {
        if b.row < 1 || b.row > self.n || b.col < 1 || b.col > self.row_len(b.row) {
            return Err(Error::BoxNotInDiagram {
                row: b.row,
                col: b.col,
            });
        }
        Ok((
            self.smaller_right[b.row - 1][b.col - 1],
            self.row_value[b.row - 1],
        ))
    }

    /// The weight `1 - y_a / y_b` of box `b` as a polynomial.
    pub fn box_weight(&self, b: BoxRef) -> Result<LaurentPoly> {
        let (a, wi) = self.weight_pair(b)?;
        Ok(LaurentPoly::one_minus_y_ratio(self.n, a, wi))
    }
}

/// The bottom diagram of `w`: row `i` holds its inversion count many
/// left-justified boxes, so the total box count is the length of `w`.
pub fn bottom_diagram(w: &Permutation) -> Diagram {
    let table = WeightTable::new(w);
    let boxes = (1..=w.n())
        .flat_map(|i| (1..=table.row_len(i)).map(move |k| BoxRef::new(i, k)));
    Diagram::new(w.n(), boxes).expect("bottom diagram fits the staircase")
}

/// The weight of box `b` inside the bottom diagram of `w`.
pub fn box_weight(w: &Permutation, b: BoxRef) -> Result<LaurentPoly> {
    WeightTable::new(w).box_weight(b)
}

/// The word of a diagram: labels in reading order.
pub fn diagram_word(d: &Diagram) -> HeckeWord {
    HeckeWord::new(d.reading_order().into_iter().map(box_label).collect())
}

/// Product of the box weights of `d`, read inside the bottom diagram of
/// `w_ambient`; the empty diagram has weight 1.
pub fn diagram_weight(w_ambient: &Permutation, d: &Diagram) -> Result<LaurentPoly> {
    if w_ambient.n() != d.n() {
        return Err(Error::RankMismatch {
            left: w_ambient.n(),
            right: d.n(),
        });
    }
    let table = WeightTable::new(w_ambient);
    let mut product = LaurentPoly::one(d.n());
    for b in d.boxes() {
        product = product.mul(&table.box_weight(b)?)?;
    }
    Ok(product)
}

/// Applies the 0-Hecke letter `l` in place: swap unless already a descent.
fn apply_letter(word: &mut [u32], l: usize) -> bool {
    if word[l - 1] < word[l] {
        word.swap(l - 1, l);
        true
    } else {
        false
    }
}

/// Enumerates the subset masks of `bottom_diagram(v)` whose words evaluate
/// to `u`, with bit `k` addressing the k-th box in reading order and masks
/// ascending. The pruned path cuts subtrees whose running product already
/// fails to sit below `u` in Bruhat order, then restores ascending order.
fn hecke_masks(u: &Permutation, v: &Permutation, prune: bool) -> Result<(Vec<BoxRef>, Vec<u64>)> {
    if u.n() != v.n() {
        return Err(Error::RankMismatch {
            left: u.n(),
            right: v.n(),
        });
    }
    let n = u.n();
    let boxes = bottom_diagram(v).reading_order();
    let letters: Vec<usize> = boxes.iter().map(|&b| box_label(b)).collect();
    let m = boxes.len();
    assert!(m < 64, "mask enumeration needs fewer than 64 boxes");
    let target = u.one_line();
    let target_len = u.length();
    let mut masks = Vec::new();

    if prune {
        let identity: Vec<u32> = (1..=n as u32).collect();
        let mut stack = vec![(0usize, 0u64, identity, 0usize)];
        while let Some((pos, mask, cur, cur_len)) = stack.pop() {
            if !bruhat_leq_unchecked(&cur, target) {
                continue;
            }
            if target_len - cur_len > m - pos {
                continue;
            }
            if pos == m {
                if cur == target {
                    debug_assert!(mask.count_ones() as usize >= target_len);
                    masks.push(mask);
                }
                continue;
            }
            let mut with = cur.clone();
            let grew = apply_letter(&mut with, letters[pos]);
            stack.push((pos + 1, mask | (1 << pos), with, cur_len + grew as usize));
            stack.push((pos + 1, mask, cur, cur_len));
        }
        masks.sort_unstable();
    } else {
        let mut cur = vec![0u32; n];
        for mask in 0u64..(1 << m) {
            for (slot, val) in cur.iter_mut().zip(1..=n as u32) {
                *slot = val;
            }
            for pos in 0..m {
                if mask & (1 << pos) != 0 {
                    apply_letter(&mut cur, letters[pos]);
                }
            }
            if cur == target {
                debug_assert!(mask.count_ones() as usize >= target_len);
                masks.push(mask);
            }
        }
    }
    Ok((boxes, masks))
}

/// All subsets of `bottom_diagram(v)` whose word evaluates to `u`, in
/// deterministic ascending-mask order.
pub fn hecke_subsets(u: &Permutation, v: &Permutation, prune: bool) -> Result<Vec<Diagram>> {
    let (boxes, masks) = hecke_masks(u, v, prune)?;
    Ok(masks
        .into_iter()
        .map(|mask| {
            let chosen = boxes
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &b)| b);
            Diagram::new(u.n(), chosen).expect("subset of a valid diagram")
        })
        .collect())
}

/// The signed weighted sum over the Hecke subsets, together with how many
/// subsets contributed.
pub struct HeckeSum {
    pub poly: LaurentPoly,
    pub subsets: usize,
}

/// Sum of `(-1)^{|D| - length(u)} * weight(D)` over all subsets `D` of
/// `bottom_diagram(v)` whose word evaluates to `u`; zero when there are none.
pub fn hecke_sum(u: &Permutation, v: &Permutation, prune: bool) -> Result<HeckeSum> {
    let n = u.n();
    let (boxes, masks) = hecke_masks(u, v, prune)?;
    let table = WeightTable::new(v);
    let weights: Vec<LaurentPoly> = boxes
        .iter()
        .map(|&b| table.box_weight(b).expect("box of the bottom diagram"))
        .collect();
    let target_len = u.length();
    let mut sum = LaurentPoly::zero(n);
    let subsets = masks.len();
    for mask in masks {
        let mut weight = LaurentPoly::one(n);
        for (k, w) in weights.iter().enumerate() {
            if mask & (1 << k) != 0 {
                weight = weight.mul(w)?;
            }
        }
        let excess = mask.count_ones() as usize - target_len;
        if excess % 2 == 1 {
            weight = weight.negate();
        }
        sum = sum.add(&weight)?;
    }
    Ok(HeckeSum { poly: sum, subsets })
}

/// The transfer map between bottom diagrams one descent apart.
///
/// Let `r` be the last descent of `v` and `v' = v s_r`. A subset of the
/// bottom diagram of `v'` maps to a subset of the bottom diagram of `v`
/// avoiding the row-`r` corner box `(r, 1)`: rows above `r` are fixed and a
/// box `(r+1, j)` moves to `(r, j+1)`. Box weights, labels, and therefore
/// the whole word are preserved.
pub fn transfer_diagram(d: &Diagram, v: &Permutation) -> Result<Diagram> {
    let r = *v
        .descent_positions()
        .last()
        .ok_or_else(|| Error::PreconditionViolated("identity has no last descent".into()))?;
    let v_prime = v.mult_right_s(r)?;
    if d.n() != v.n() || !d.is_subset_of(&bottom_diagram(&v_prime)) {
        return Err(Error::PreconditionViolated(
            "diagram is not inside the shortened bottom diagram".into(),
        ));
    }
    let mapped = d.boxes().map(|b| {
        if b.row < r {
            b
        } else if b.row == r + 1 {
            BoxRef::new(r, b.col + 1)
        } else {
            // rows r and > r+1 of the shortened bottom diagram are empty
            unreachable!("box {:?} cannot lie in the shortened bottom diagram", b)
        }
    });
    Diagram::new(v.n(), mapped)
}

fn render_grid(table: &WeightTable, cell: impl Fn(BoxRef) -> String) -> String {
    let n = table.n();
    let last_row = (1..=n).rev().find(|&i| table.row_len(i) > 0);
    let Some(last_row) = last_row else {
        return String::new();
    };
    let rows: Vec<Vec<String>> = (1..=last_row)
        .map(|i| (1..=table.row_len(i)).map(|k| cell(BoxRef::new(i, k))).collect())
        .collect();
    let width = rows
        .iter()
        .flatten()
        .map(|s| s.len())
        .max()
        .unwrap_or(0);
    rows.iter()
        .map(|cells| {
            cells
                .iter()
                .map(|s| format!("[{s:<width$}]"))
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// ASCII grid of the bottom diagram with one weight per box; empty rows
/// between occupied ones render as blank lines; identity renders empty.
pub fn render_weights(w: &Permutation) -> String {
    let table = WeightTable::new(w);
    render_grid(&table, |b| {
        let (a, wi) = table.weight_pair(b).expect("box of the bottom diagram");
        format!("1-y{a}/y{wi}")
    })
}

/// ASCII grid of the bottom diagram with one label per box.
pub fn render_labels(w: &Permutation) -> String {
    let table = WeightTable::new(w);
    render_grid(&table, |b| format!("s{}", box_label(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn figure_perm() -> Permutation {
        perm("2157634")
    }

    #[test]
    fn bottom_diagram_shapes() {
        let table = WeightTable::new(&figure_perm());
        let lens: Vec<usize> = (1..=7).map(|i| table.row_len(i)).collect();
        assert_eq!(lens, vec![1, 0, 2, 3, 2, 0, 0]);
        assert_eq!(bottom_diagram(&figure_perm()).len(), 8);

        assert!(bottom_diagram(&Permutation::identity(4)).is_empty());

        let staircase = bottom_diagram(&Permutation::longest(4));
        assert_eq!(staircase.len(), 6);
        for b in staircase.boxes() {
            assert!(b.row + b.col <= 4);
        }
        for w in Permutation::all(4) {
            assert_eq!(bottom_diagram(&w).len(), w.length());
        }
    }

    #[test]
    fn figure_weights() {
        let w = figure_perm();
        let expected = [
            ((1, 1), (1, 2)),
            ((3, 1), (3, 5)),
            ((3, 2), (4, 5)),
            ((4, 1), (3, 7)),
            ((4, 2), (4, 7)),
            ((4, 3), (6, 7)),
            ((5, 1), (3, 6)),
            ((5, 2), (4, 6)),
        ];
        let table = WeightTable::new(&w);
        for ((row, col), (a, b)) in expected {
            assert_eq!(table.weight_pair(BoxRef::new(row, col)).unwrap(), (a, b));
            assert_eq!(
                box_weight(&w, BoxRef::new(row, col)).unwrap(),
                LaurentPoly::one_minus_y_ratio(7, a, b)
            );
        }
        assert!(matches!(
            box_weight(&w, BoxRef::new(2, 1)),
            Err(Error::BoxNotInDiagram { row: 2, col: 1 })
        ));

        assert_eq!(
            box_weight(&perm("21"), BoxRef::new(1, 1)).unwrap(),
            LaurentPoly::one_minus_y_ratio(2, 1, 2)
        );
    }

    #[test]
    fn labels() {
        assert_eq!(box_label(BoxRef::new(1, 1)), 1);
        assert_eq!(box_label(BoxRef::new(3, 2)), 4);
        assert_eq!(box_label(BoxRef::new(4, 3)), 6);
        for i in 1..=5 {
            assert_eq!(box_label(BoxRef::new(i, 1)), i);
        }
    }

    #[test]
    fn figure_word_and_evaluation() {
        let w = figure_perm();
        let word = diagram_word(&bottom_diagram(&w));
        assert_eq!(word.letters(), &[1, 4, 3, 6, 5, 4, 6, 5]);
        assert_eq!(word.evaluate(7).unwrap(), w);
        assert_eq!(word.len(), w.length());

        assert!(diagram_word(&Diagram::empty(3)).is_empty());
        let single = Diagram::new(4, [BoxRef::new(2, 2)]).unwrap();
        assert_eq!(diagram_word(&single).letters(), &[3]);
    }

    #[test]
    fn weights_of_subsets() {
        assert!(diagram_weight(&perm("321"), &Diagram::empty(3))
            .unwrap()
            .is_one());

        let d = Diagram::new(2, [BoxRef::new(1, 1)]).unwrap();
        assert_eq!(
            diagram_weight(&perm("21"), &d).unwrap(),
            LaurentPoly::one_minus_y_ratio(2, 1, 2)
        );

        let w = figure_perm();
        let row3 = Diagram::new(7, [BoxRef::new(3, 1), BoxRef::new(3, 2)]).unwrap();
        let expected = LaurentPoly::one_minus_y_ratio(7, 3, 5)
            .mul(&LaurentPoly::one_minus_y_ratio(7, 4, 5))
            .unwrap();
        assert_eq!(diagram_weight(&w, &row3).unwrap(), expected);

        // (2,1) is not a box of this bottom diagram
        let bad = Diagram::new(7, [BoxRef::new(2, 1)]).unwrap();
        assert!(diagram_weight(&w, &bad).is_err());
    }

    #[test]
    fn subset_family_examples() {
        let family = hecke_subsets(&perm("21"), &perm("21"), false).unwrap();
        assert_eq!(family.len(), 1);
        assert_eq!(family[0], Diagram::new(2, [BoxRef::new(1, 1)]).unwrap());

        for v in Permutation::all(3) {
            let family = hecke_subsets(&Permutation::identity(3), &v, false).unwrap();
            assert_eq!(family.len(), 1);
            assert!(family[0].is_empty());
        }

        assert!(hecke_subsets(&perm("21"), &perm("12"), false)
            .unwrap()
            .is_empty());

        let full = hecke_subsets(&perm("321"), &perm("321"), false).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].len(), 3);
    }

    #[test]
    fn signed_sum_examples() {
        let sum = hecke_sum(&perm("21"), &perm("21"), false).unwrap();
        assert_eq!(sum.subsets, 1);
        assert_eq!(sum.poly, LaurentPoly::one_minus_y_ratio(2, 1, 2));

        for v in Permutation::all(3) {
            let sum = hecke_sum(&Permutation::identity(3), &v, false).unwrap();
            assert!(sum.poly.is_one());
        }

        let empty = hecke_sum(&perm("21"), &perm("12"), false).unwrap();
        assert_eq!(empty.subsets, 0);
        assert!(empty.poly.is_zero());

        assert!(hecke_sum(&perm("21"), &perm("123"), false).is_err());
    }

    #[test]
    fn pruning_agrees_at_rank_three() {
        for u in Permutation::all(3) {
            for v in Permutation::all(3) {
                let plain = hecke_subsets(&u, &v, false).unwrap();
                let pruned = hecke_subsets(&u, &v, true).unwrap();
                assert_eq!(plain, pruned, "pruning changed H({u},{v})");
            }
        }
    }

    #[test]
    fn transfer_examples() {
        // v = 4312 has last descent r = 2, so the source is D(4132).
        let v = perm("4312");
        let d = Diagram::new(4, [BoxRef::new(1, 2), BoxRef::new(3, 1)]).unwrap();
        let image = transfer_diagram(&d, &v).unwrap();
        assert_eq!(
            image,
            Diagram::new(4, [BoxRef::new(1, 2), BoxRef::new(2, 2)]).unwrap()
        );
        assert!(!image.contains(BoxRef::new(2, 1)));

        // weights and words survive the move
        let v_prime = perm("4132");
        assert_eq!(
            diagram_weight(&v_prime, &d).unwrap(),
            diagram_weight(&v, &image).unwrap()
        );
        assert_eq!(diagram_word(&d).letters(), diagram_word(&image).letters());

        assert!(transfer_diagram(&Diagram::empty(2), &perm("21"))
            .unwrap()
            .is_empty());
        assert!(transfer_diagram(&Diagram::empty(3), &Permutation::identity(3)).is_err());
        let too_big = bottom_diagram(&v);
        assert!(transfer_diagram(&too_big, &v).is_err());
    }

    #[test]
    fn json_shape() {
        let d = Diagram::new(7, [BoxRef::new(3, 1), BoxRef::new(1, 1), BoxRef::new(3, 2)]).unwrap();
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"n":7,"boxes":[[1,1],[3,1],[3,2]]}"#);
        let back: Diagram = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);

        let bad = r#"{"n":3,"boxes":[[3,1]]}"#;
        assert!(serde_json::from_str::<Diagram>(bad).is_err());
    }

    #[test]
    fn ascii_grids() {
        let w = figure_perm();
        let weights = "\
[1-y1/y2]

[1-y3/y5][1-y4/y5]
[1-y3/y7][1-y4/y7][1-y6/y7]
[1-y3/y6][1-y4/y6]";
        assert_eq!(render_weights(&w), weights);

        let labels = "\
[s1]

[s3][s4]
[s4][s5][s6]
[s5][s6]";
        assert_eq!(render_labels(&w), labels);

        assert_eq!(render_weights(&Permutation::identity(3)), "");
    }
}
