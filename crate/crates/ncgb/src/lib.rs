//! Exact rewriting engine for finitely presented graded associative algebras.
//!
//! The crate provides, over three exact coefficient domains (rationals, the
//! field extended by a primitive cube root of unity, and rational functions
//! in declared parameters):
//!
//! - words and polynomials in a free associative algebra on weighted
//!   variables, under weighted graded lexicographic order ([`freealg`]);
//! - reduction systems, ambiguity enumeration, diamond-condition checks and
//!   degree-bounded completion to a reduced Gröbner basis ([`rewrite`]);
//! - truncated power-series arithmetic, Hilbert series, irreducible-word
//!   counting and Hilbert-driven relation counting ([`hilbert`]);
//! - validation of graded iterated Ore-extension and enveloping-algebra
//!   presentations, injectivity certificates for the skew maps, and degree
//!   type enumeration ([`ore`]);
//! - rewriting a presentation onto its degree-one generators and computing
//!   the degrees of a minimal generating set of the defining ideal by exact
//!   linear algebra ([`minimal`]).
//!
//! The `ncgb` binary in this workspace exposes the same operations on a
//! line-oriented presentation file format; see [`presentation`].

pub mod coeff;
pub mod freealg;
pub mod hilbert;
pub mod linalg;
pub mod minimal;
pub mod ore;
pub mod presentation;
pub mod rewrite;

#[cfg(doctest)]
mod book {
    //! Keeps the guide's code snippets compiling and passing; each chapter
    //! of `book/src` is attached here so `cargo test --doc` runs them.
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }
    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(coefficients, "../../../book/src/coefficients.md");
    chapter!(words_and_orders, "../../../book/src/words-and-orders.md");
    chapter!(rewriting, "../../../book/src/rewriting.md");
    chapter!(completion, "../../../book/src/completion.md");
    chapter!(hilbert_series, "../../../book/src/hilbert-series.md");
    chapter!(ore_presentations, "../../../book/src/ore-presentations.md");
    chapter!(relation_types, "../../../book/src/relation-types.md");
    chapter!(file_format, "../../../book/src/file-format.md");
}
