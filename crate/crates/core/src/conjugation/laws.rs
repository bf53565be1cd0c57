use std::fmt;

use super::ConjugateCategory;
use crate::fincat::MorId;

/// A counterexample to one of the structural laws of a conjugate pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawFailure {
    /// `(j ∘ i)* ≠ i* ∘ j*`.
    OpNotContravariant { i: MorId, j: MorId },
    /// `i* ∘ i ≠ 1`.
    OpNotRetraction { i: MorId },
    /// `α` and `i* ∘ α` both lie in `A` but `i` is not invertible.
    NonIsoCokernelOfA { i: MorId, alpha: MorId },
    /// `γ ∘ α` is regular for singular `γ` and `α ∈ A`.
    SingularTimesA { gamma: MorId, alpha: MorId },
    /// `β ∘ σ` is regular for singular `σ`.
    BTimesSingular { beta: MorId, sigma: MorId },
}

impl fmt::Display for LawFailure {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawFailure::OpNotContravariant { i, j } => write!(out, "({j}∘{i})* ≠ {i}*∘{j}*"),
            LawFailure::OpNotRetraction { i } => write!(out, "{i}*∘{i} ≠ 1"),
            LawFailure::NonIsoCokernelOfA { i, alpha } => {
                write!(out, "{alpha} and {i}*∘{alpha} lie in A but {i} is not an isomorphism")
            }
            LawFailure::SingularTimesA { gamma, alpha } => write!(out, "singular {gamma} after {alpha} is regular"),
            LawFailure::BTimesSingular { beta, sigma } => write!(out, "{beta} after singular {sigma} is regular"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    /// `(law, instances examined, first failure)`.
    pub lines: Vec<(&'static str, usize, Option<LawFailure>)>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.lines.iter().all(|l| l.2.is_none())
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (law, n, failure) in &self.lines {
            match failure {
                None => writeln!(out, "PASS {law} examined={n}")?,
                Some(f) => writeln!(out, "FAIL {law} {f}")?,
            }
        }
        Ok(())
    }
}

/// Exhaustively checks the composition relations of `I^op` inside `B` and
/// the ideal-like behaviour of singular maps.
pub fn check_laws(cc: &ConjugateCategory) -> LawReport {
    let u = cc.u();
    let b = cc.b();
    let i_sub = cc.i_sub();
    let a_sub = cc.a_sub();
    let mut lines = Vec::new();

    let mut n = 0;
    let mut fail = None;
    'a: for i in i_sub.iter() {
        for j in i_sub.out_of(u, u.cod(i)) {
            n += 1;
            let lhs = cc.embed_i_op(u.compose(j, i));
            let rhs = b.compose(cc.embed_i_op(i), cc.embed_i_op(j));
            if lhs != rhs {
                fail = Some(LawFailure::OpNotContravariant { i, j });
                break 'a;
            }
        }
    }
    lines.push(("op-contravariant", n, fail));

    let fail = i_sub.iter().find_map(|i| {
        let back = b.compose(cc.embed_i_op(i), cc.embed_u(i));
        (!b.is_identity(back)).then_some(LawFailure::OpNotRetraction { i })
    });
    lines.push(("op-retraction", i_sub.len(), fail));

    let a_images: Vec<Option<MorId>> = {
        let mut v = vec![None; b.morphism_count()];
        for alpha in a_sub.iter() {
            v[cc.embed_u(alpha)] = Some(alpha);
        }
        v
    };
    let mut n = 0;
    let mut fail = None;
    'c: for i in i_sub.iter() {
        for alpha in a_sub.into_object(u, u.cod(i)) {
            n += 1;
            let composite = b.compose(cc.embed_i_op(i), cc.embed_u(alpha));
            if a_images[composite].is_some() && !cc.indexing().is_iso(i) {
                fail = Some(LawFailure::NonIsoCokernelOfA { i, alpha });
                break 'c;
            }
        }
    }
    lines.push(("op-cokernel-in-A", n, fail));

    let singular: Vec<MorId> = b.morphisms().filter(|&m| !cc.is_regular(m)).collect();
    let mut n = 0;
    let mut fail = None;
    'ia: for &gamma in &singular {
        for alpha in a_sub.into_object(u, b.dom(gamma)) {
            n += 1;
            if cc.is_regular(b.compose(gamma, cc.embed_u(alpha))) {
                fail = Some(LawFailure::SingularTimesA { gamma, alpha });
                break 'ia;
            }
        }
    }
    lines.push(("singular-ideal-A", n, fail));

    let mut n = 0;
    let mut fail = None;
    'ib: for &sigma in &singular {
        for x in b.objects() {
            for &beta in b.hom(b.cod(sigma), x) {
                n += 1;
                if cc.is_regular(b.compose(beta, sigma)) {
                    fail = Some(LawFailure::BTimesSingular { beta, sigma });
                    break 'ib;
                }
            }
        }
    }
    lines.push(("singular-ideal-B", n, fail));

    LawReport { lines }
}
