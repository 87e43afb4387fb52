//! Exact computation of double Grothendieck polynomials and their
//! specializations at permutation points.
//!
//! The crate provides three layers:
//!
//! * [`perm`] and [`laurent`]: permutations of `S_n` with Bruhat order and
//!   the 0-Hecke monoid, and exact sparse Laurent polynomials in
//!   `x_1..x_n, y_1..y_n` with the divided-difference and isobaric
//!   operators.
//! * [`grothendieck`] and [`pipedream`]: the polynomial family computed by
//!   the divided-difference recursion from the closed top product, and the
//!   independent signed sum over weighted subsets of bottom pipe-dream
//!   diagrams.
//! * [`verify`]: exhaustive sweeps at small rank checking that both roads
//!   agree, together with the recurrence, vanishing, and fixed-point
//!   identities of the specialization.
//!
//! All arithmetic is integer-exact; every publicly observable order
//! (term order, enumeration order, report order) is canonical so that
//! output is byte-stable across runs and thread counts.

pub mod error;
pub mod grothendieck;
pub mod laurent;
pub mod perm;
pub mod pipedream;
pub mod verify;

pub use error::{Error, Result};
pub use grothendieck::{fixed_point_product, groth_top, AscentPolicy, GrothCache};
pub use laurent::{ExponentVector, LaurentPoly, Term};
pub use perm::{hecke_eval, HeckeWord, Permutation};
pub use pipedream::{
    bottom_diagram, box_label, box_weight, diagram_weight, diagram_word, hecke_subsets, hecke_sum,
    render_labels, render_weights, transfer_diagram, BoxRef, Diagram, HeckeSum, WeightTable,
};
pub use verify::{VerifyMode, VerifyReport, VerifyRow};
