use std::sync::Arc;

use super::{Diagram, NatTrans};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::qlinalg::{QMat, Rat};

/// Position of each morphism within its hom-set.
pub(super) fn hom_positions(c: &FinCat) -> Vec<usize> {
    let mut pos = vec![0; c.morphism_count()];
    for x in c.objects() {
        for y in c.objects() {
            for (p, &f) in c.hom(x, y).iter().enumerate() {
                pos[f] = p;
            }
        }
    }
    pos
}

/// `F_d(x) = Qⁿ ⊗ hom(x, d)₊`. The basis of `F_d(x)` is indexed by
/// `(h, k)` with `h: x → d` in ascending id order, at position `pos(h)·n + k`;
/// `F(f)` sends `(h, k)` to `(h ∘ f, k)`.
pub fn free_functor(base: &Arc<FinCat>, d: ObjId, n: usize) -> Diagram {
    FreeSum { terms: vec![(d, n)] }.diagram(base)
}

/// A direct sum of free functors `⊕ F_{d_s}` with multiplicities `n_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeSum {
    /// `(d_s, n_s)`.
    pub terms: Vec<(ObjId, usize)>,
}

impl FreeSum {
    /// Where each term's block starts in the basis of the sum at `x`.
    pub(super) fn offsets(&self, c: &FinCat, x: ObjId) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.terms.len());
        let mut at = 0;
        for &(d, n) in &self.terms {
            offsets.push(at);
            at += n * c.hom(x, d).len();
        }
        offsets
    }

    pub fn diagram(&self, base: &Arc<FinCat>) -> Diagram {
        let c = &**base;
        let pos = hom_positions(c);
        let parts: Vec<Diagram> = self
            .terms
            .iter()
            .map(|&(d, n)| {
                let dims: Vec<usize> = c.objects().map(|x| n * c.hom(x, d).len()).collect();
                let mats = c
                    .morphisms()
                    .map(|f| {
                        let (x, y) = (c.dom(f), c.cod(f));
                        let mut m = QMat::zeros(dims[x], dims[y]);
                        for &h in c.hom(y, d) {
                            let hf = c.compose(h, f);
                            for k in 0..n {
                                m.set(pos[hf] * n + k, pos[h] * n + k, Rat::one());
                            }
                        }
                        m
                    })
                    .collect();
                Diagram { base: base.clone(), dims, mats }
            })
            .collect();
        Diagram::direct_sum(base.clone(), &parts)
    }
}

/// The natural transformation out of a free sum determined by its values on
/// the generators: `elements[s]` has shape `dims_target(d_s) × n_s` and gives
/// the images of the `n_s` copies of `id_{d_s}`.
pub fn yoneda_map(base: &Arc<FinCat>, source: &FreeSum, target: Arc<Diagram>, elements: &[QMat]) -> NatTrans {
    assert_eq!(elements.len(), source.terms.len(), "one element per free term");
    let c = &**base;
    let pos = hom_positions(c);
    let src = Arc::new(source.diagram(base));
    let components = c
        .objects()
        .map(|x| {
            let mut m = QMat::zeros(target.dim(x), src.dim(x));
            let mut offset = 0;
            for (&(d, n), e) in source.terms.iter().zip(elements) {
                assert_eq!(e.shape(), (target.dim(d), n), "element shape");
                let homs: &[MorId] = c.hom(x, d);
                for &h in homs {
                    m.put(0, offset + pos[h] * n, &(target.map(h) * e));
                }
                offset += n * homs.len();
            }
            m
        })
        .collect();
    NatTrans::new(src, target, components).expect("shapes follow from the construction")
}
