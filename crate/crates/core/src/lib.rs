//! Conjugate pairs of finite categories and the Morita equivalence between
//! their diagram categories, checked with exact rational arithmetic.
//!
//! A [`conjugation::Factorization`] is a finite category `U` with two wide
//! subcategories `I` and `A`. When it is a conjugate pair,
//! [`conjugation::ConjugateCategory`] builds the category `B` of threefold
//! factorizations `img ∘ mid ∘ cok*`, and [`morita::Context`] computes the
//! functors `L` (from diagrams on `B` to diagrams on `A`) and `R` (back) with
//! their unit and counit.
//!
//! Diagrams are contravariant: `F(g ∘ f) = F(f)·F(g)`, and the matrix of
//! `f: a → b` has shape `dim a × dim b`.
//!
//! ```
//! use finmorita::conjugation::ConjugateCategory;
//! use finmorita::diagrams::random_diagram;
//! use finmorita::morita::Context;
//! use finmorita::pairs::gen_gamma;
//!
//! let ctx = Context::new(ConjugateCategory::build(&gen_gamma(2).unwrap()).unwrap());
//! let f = random_diagram(ctx.b(), 11, 2);
//! let back = ctx.apply_r(&ctx.apply_l(&f).unwrap()).unwrap();
//! assert_eq!(back.dims(), f.dims());
//! ```

pub mod cli;
pub mod conjugation;
pub mod diagrams;
pub mod fincat;
pub mod format;
pub mod morita;
pub mod qlinalg;
pub mod pairs;
