//! Factorizations `U = I ∘ A` admitting conjugation, the conjugate category
//! `B = I ∘ A ∘ I^op`, and the regular bimodule.

mod bimodule;
mod conjugate;
mod laws;

use std::collections::HashMap;
use std::fmt;

use crate::fincat::{is_indexing_category, FinCat, IndexingCategory, IndexingFailure, MorId, ObjId, Subcat, SubcatViolation, Violation};

pub use bimodule::{check_decompositions, DecompositionReport, RegularBimodule, WedgePoint};
pub use conjugate::{BMorphism, BuildError, ConjugateCategory, Embeddings};
pub use laws::{check_laws, LawFailure, LawReport};

/// A category `U` with two wide subcategories `I` and `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub u: FinCat,
    pub i: Subcat,
    pub a: Subcat,
}

/// A pullback square for the second axiom: `α ∘ i_leg = i ∘ a_leg`, where
/// `i_leg: apex → dom α` is in `I` and `a_leg: apex → dom i` is in `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Square {
    pub apex: ObjId,
    pub i_leg: MorId,
    pub a_leg: MorId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjugationFailure {
    Category(Violation),
    Subcategory { which: &'static str, violation: SubcatViolation },
    Indexing(IndexingFailure),
    /// `f` is not of the form `i ∘ α`.
    Uncovered { f: MorId },
    /// `f` is invertible in `I` but not in `A`.
    IsoNotInA { f: MorId },
    /// `i ∘ α = j ∘ β` has no lift `l ∈ I` with `l ∘ β = α`, `i ∘ l = j`.
    NoLift { alpha: MorId, i: MorId, beta: MorId, j: MorId },
    LiftNotIso { alpha: MorId, i: MorId, beta: MorId, j: MorId, lift: MorId },
    NoPullback { alpha: MorId, i: MorId },
    /// Two pullback squares of `(α, i)` are not related by an isomorphism in `I`.
    PullbacksNotRelated { alpha: MorId, i: MorId, first: Square, second: Square },
}

impl fmt::Display for ConjugationFailure {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ConjugationFailure::*;
        match self {
            Category(v) => write!(out, "U is not a category: {v}"),
            Subcategory { which, violation } => write!(out, "{which} is not a subcategory: {violation}"),
            Indexing(f) => write!(out, "I is not an indexing category: {f}"),
            Uncovered { f } => write!(out, "morphism {f} is not i∘α with i in I and α in A"),
            IsoNotInA { f } => write!(out, "morphism {f} is an isomorphism of I but not of A"),
            NoLift { alpha, i, beta, j } => {
                write!(out, "square {i}∘{alpha} = {j}∘{beta} has no lift in I")
            }
            LiftNotIso { alpha, i, beta, j, lift } => {
                write!(out, "square {i}∘{alpha} = {j}∘{beta} has lift {lift}, which is not an isomorphism of I")
            }
            NoPullback { alpha, i } => write!(out, "no pullback of α={alpha} along i={i} with legs in I and A"),
            PullbacksNotRelated { alpha, i, first, second } => write!(
                out,
                "pullbacks ({}, {}) and ({}, {}) of α={alpha} along i={i} differ by a map outside Iso(I)",
                first.i_leg, first.a_leg, second.i_leg, second.a_leg
            ),
        }
    }
}

/// One verdict of [`check_conjugation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub check: &'static str,
    /// Number of data examined, for the report.
    pub examined: usize,
    pub failure: Option<ConjugationFailure>,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(out, "PASS {} examined={}", self.check, self.examined),
            Some(f) => write!(out, "FAIL {} {f}", self.check),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConjugationReport {
    pub lines: Vec<CheckLine>,
    checked: Option<Checked>,
}

impl ConjugationReport {
    pub fn holds(&self) -> bool {
        self.checked.is_some()
    }

    pub fn first_failure(&self) -> Option<&ConjugationFailure> {
        self.lines.iter().find_map(|l| l.failure.as_ref())
    }
}

impl fmt::Display for ConjugationReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// Everything established while checking the axioms, reused to build `B`.
#[derive(Debug, Clone)]
pub(crate) struct Checked {
    pub indexing: IndexingCategory,
    /// For each `u`, every `(α, i)` with `i ∘ α = u`, ascending.
    pub factorizations: Vec<Vec<(MorId, MorId)>>,
    /// For each `u`, the factorization whose `I`-part is skeletal.
    pub canonical: Vec<(MorId, MorId)>,
    /// Every second-axiom pullback square of each cospan `(α, i)`.
    pub squares: HashMap<(MorId, MorId), Vec<Square>>,
}

impl Factorization {
    pub fn new(u: FinCat, i: Subcat, a: Subcat) -> Factorization {
        Factorization { u, i, a }
    }

    pub fn name(&self) -> &str {
        self.u.name()
    }
}

fn first_failure<T>(items: impl IntoIterator<Item = T>, f: impl FnMut(T) -> Option<ConjugationFailure>) -> Option<ConjugationFailure> {
    items.into_iter().find_map(f)
}

/// Exhaustively checks that `f` admits conjugation. Structural checks come
/// first; if any fails the axioms are not examined. Otherwise every axiom
/// is checked and reports its first failing datum in ascending id order.
pub fn check_conjugation(f: &Factorization) -> ConjugationReport {
    let u = &f.u;
    let mut lines = Vec::new();
    let mut structural = |check, examined, failure: Option<ConjugationFailure>| {
        let ok = failure.is_none();
        lines.push(CheckLine { check, examined, failure });
        ok
    };
    let ok = structural("category", u.morphism_count(), u.validate().into_iter().next().map(ConjugationFailure::Category))
        && structural(
            "subcategory-I",
            f.i.len(),
            f.i.validate(u).into_iter().next().map(|v| ConjugationFailure::Subcategory { which: "I", violation: v }),
        )
        && structural(
            "subcategory-A",
            f.a.len(),
            f.a.validate(u).into_iter().next().map(|v| ConjugationFailure::Subcategory { which: "A", violation: v }),
        )
        && structural("indexing", f.i.len(), is_indexing_category(u, &f.i).failure.map(ConjugationFailure::Indexing));
    if !ok {
        return ConjugationReport { lines, checked: None };
    }
    let indexing = IndexingCategory::new(u, &f.i).expect("checked above");

    let mut factorizations = vec![Vec::new(); u.morphism_count()];
    for alpha in f.a.iter() {
        for i in f.i.out_of(u, u.cod(alpha)) {
            factorizations[u.compose(i, alpha)].push((alpha, i));
        }
    }
    let coverage = first_failure(u.morphisms(), |m| {
        factorizations[m].is_empty().then_some(ConjugationFailure::Uncovered { f: m })
    });
    lines.push(CheckLine { check: "coverage", examined: u.morphism_count(), failure: coverage.clone() });

    let isos = first_failure(f.i.iter().filter(|&m| indexing.is_iso(m)), |m| {
        (!f.a.contains(m) || u.inverse_of(m, Some(&f.a)).is_none()).then_some(ConjugationFailure::IsoNotInA { f: m })
    });
    lines.push(CheckLine { check: "isomorphisms", examined: f.i.len(), failure: isos.clone() });

    let (examined, failure) = check_lifts(f, &indexing, &factorizations);
    lines.push(CheckLine { check: "axiom-1", examined, failure });

    let (examined, failure, squares) = check_pullbacks(f, &indexing);
    lines.push(CheckLine { check: "axiom-2", examined, failure });

    if lines.iter().any(|l| l.failure.is_some()) {
        return ConjugationReport { lines, checked: None };
    }
    let canonical = u
        .morphisms()
        .map(|m| {
            // Any factorization moves to the skeletal one by an isomorphism of I,
            // which lies in A, so the skeletal one is always present.
            *factorizations[m]
                .iter()
                .find(|&&(_, i)| indexing.representative(u, i) == i)
                .expect("skeletal factorization exists once the axioms hold")
        })
        .collect();
    ConjugationReport { lines, checked: Some(Checked { indexing, factorizations, canonical, squares }) }
}

impl ConjugationReport {
    pub(crate) fn into_checked(self) -> Option<Checked> {
        self.checked
    }
}

/// First axiom: every pair of factorizations of the same morphism is related
/// by a lift in `I`, and every such lift is invertible in `I`.
fn check_lifts(
    f: &Factorization,
    indexing: &IndexingCategory,
    factorizations: &[Vec<(MorId, MorId)>],
) -> (usize, Option<ConjugationFailure>) {
    let u = &f.u;
    let mut examined = 0;
    for facts in factorizations {
        for &(alpha, i) in facts {
            for &(beta, j) in facts {
                examined += 1;
                // The lift runs from the middle object of (β, j) to that of (α, i).
                let lifts: Vec<MorId> = f
                    .i
                    .hom(u, u.cod(beta), u.cod(alpha))
                    .filter(|&l| u.compose(l, beta) == alpha && u.compose(i, l) == j)
                    .collect();
                if lifts.is_empty() {
                    return (examined, Some(ConjugationFailure::NoLift { alpha, i, beta, j }));
                }
                if let Some(&lift) = lifts.iter().find(|&&l| !indexing.is_iso(l)) {
                    return (examined, Some(ConjugationFailure::LiftNotIso { alpha, i, beta, j, lift }));
                }
            }
        }
    }
    (examined, None)
}

type SquareTable = HashMap<(MorId, MorId), Vec<Square>>;

/// Second axiom: for each `α ∈ A`, `i ∈ I` with a common codomain, a pullback
/// in `U` whose legs parallel to `α` and `i` lie in `A` and `I`, any two of
/// them related by an isomorphism of `I`.
fn check_pullbacks(f: &Factorization, indexing: &IndexingCategory) -> (usize, Option<ConjugationFailure>, SquareTable) {
    let u = &f.u;
    let mut squares = HashMap::new();
    let mut examined = 0;
    for alpha in f.a.iter() {
        let (a, b) = (u.dom(alpha), u.cod(alpha));
        for i in f.i.into_object(u, b) {
            examined += 1;
            let c = u.dom(i);
            // All U-cones: (x, v: x → a, w: x → c) with α ∘ v = i ∘ w.
            let mut all = Vec::new();
            for x in u.objects() {
                for &v in u.hom(x, a) {
                    let t = u.compose(alpha, v);
                    for &w in u.hom(x, c) {
                        if u.compose(i, w) == t {
                            all.push((x, v, w));
                        }
                    }
                }
            }
            let mediator = |s: &Square, x: ObjId, v: MorId, w: MorId| -> Vec<MorId> {
                u.hom(x, s.apex)
                    .iter()
                    .copied()
                    .filter(|&m| u.compose(s.i_leg, m) == v && u.compose(s.a_leg, m) == w)
                    .collect()
            };
            let found: Vec<Square> = all
                .iter()
                .filter(|&&(_, v, w)| f.i.contains(v) && f.a.contains(w))
                .map(|&(apex, i_leg, a_leg)| Square { apex, i_leg, a_leg })
                .filter(|s| all.iter().all(|&(x, v, w)| mediator(s, x, v, w).len() == 1))
                .collect();
            let Some(&first) = found.first() else {
                return (examined, Some(ConjugationFailure::NoPullback { alpha, i }), squares);
            };
            for &second in &found[1..] {
                let m = mediator(&first, second.apex, second.i_leg, second.a_leg)[0];
                if !f.i.contains(m) || !indexing.is_iso(m) {
                    return (
                        examined,
                        Some(ConjugationFailure::PullbacksNotRelated { alpha, i, first, second }),
                        squares,
                    );
                }
            }
            squares.insert((alpha, i), found);
        }
    }
    (examined, None, squares)
}

#[cfg(test)]
mod tests;
