//! Contravariant functors from a finite category into finite-dimensional
//! rational vector spaces.
//!
//! Orientation is fixed once: a morphism `f: a → b` acts by a matrix of
//! shape `dims(a) × dims(b)`, so that `F(g ∘ f) = F(f) · F(g)`.

mod free;
mod pointed;
mod random;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{FinCat, MorId, ObjId};
use crate::qlinalg::{cokernel, is_isomorphism, kernel_with_coordinates, QMat, SparseEchelon};

pub use free::{free_functor, yoneda_map, FreeSum};
pub use pointed::{PointedError, PointedFunctor, Variance};
pub use random::{random_diagram, random_endomorphism, random_nat_trans, random_presentation, Presentation, SplitMix64};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("expected {expected} dimensions, one per object, found {found}")]
    DimsLength { expected: usize, found: usize },
    #[error("expected {expected} matrices, one per morphism, found {found}")]
    MatsLength { expected: usize, found: usize },
    #[error("matrix of morphism {morphism} has shape {found:?}, expected {expected:?}")]
    Shape { morphism: MorId, expected: (usize, usize), found: (usize, usize) },
    #[error("diagrams live over different categories")]
    BaseMismatch,
    #[error("component at object {object} has shape {found:?}, expected {expected:?}")]
    ComponentShape { object: ObjId, expected: (usize, usize), found: (usize, usize) },
}

/// A failure of functoriality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctorViolation {
    /// `F(id)` is not the identity.
    Identity { object: ObjId },
    /// `F(g ∘ f) ≠ F(f) · F(g)`.
    Composition { f: MorId, g: MorId },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::Identity { object } => write!(out, "identity of object {object} acts non-trivially"),
            FunctorViolation::Composition { f, g } => write!(out, "composable pair ({f}, {g}) is not preserved"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    base: Arc<FinCat>,
    dims: Vec<usize>,
    mats: Vec<QMat>,
}

/// Whether two handles name the same category.
pub fn same_category(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Diagram {
    /// Checks shapes only; functoriality is reported by [`Diagram::validate`].
    pub fn new(base: Arc<FinCat>, dims: Vec<usize>, mats: Vec<QMat>) -> Result<Diagram, DiagramError> {
        if dims.len() != base.object_count() {
            return Err(DiagramError::DimsLength { expected: base.object_count(), found: dims.len() });
        }
        if mats.len() != base.morphism_count() {
            return Err(DiagramError::MatsLength { expected: base.morphism_count(), found: mats.len() });
        }
        for f in base.morphisms() {
            let expected = (dims[base.dom(f)], dims[base.cod(f)]);
            if mats[f].shape() != expected {
                return Err(DiagramError::Shape { morphism: f, expected, found: mats[f].shape() });
            }
        }
        Ok(Diagram { base, dims, mats })
    }

    pub fn zero(base: Arc<FinCat>) -> Diagram {
        let dims = vec![0; base.object_count()];
        let mats = vec![QMat::zeros(0, 0); base.morphism_count()];
        Diagram { base, dims, mats }
    }

    /// Block-diagonal sum. Panics if the bases differ.
    pub fn direct_sum(base: Arc<FinCat>, parts: &[Diagram]) -> Diagram {
        assert!(parts.iter().all(|p| same_category(&p.base, &base)), "direct sum over different bases");
        let dims = base.objects().map(|x| parts.iter().map(|p| p.dims[x]).sum()).collect();
        let mats = base
            .morphisms()
            .map(|f| QMat::direct_sum(&parts.iter().map(|p| p.mats[f].clone()).collect::<Vec<_>>()))
            .collect();
        Diagram { base, dims, mats }
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, x: ObjId) -> usize {
        self.dims[x]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `F(f): F(cod f) → F(dom f)`.
    pub fn map(&self, f: MorId) -> &QMat {
        &self.mats[f]
    }

    pub fn maps(&self) -> &[QMat] {
        &self.mats
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Every functoriality violation, identities first, then composable
    /// pairs in ascending order.
    pub fn validate(&self) -> Vec<FunctorViolation> {
        let c = &*self.base;
        let mut out = Vec::new();
        for x in c.objects() {
            if !self.mats[c.identity(x)].is_identity() {
                out.push(FunctorViolation::Identity { object: x });
            }
        }
        for f in c.morphisms() {
            for y in c.objects() {
                for &g in c.hom(c.cod(f), y) {
                    let h = c.compose(g, f);
                    if self.mats[h] != &self.mats[f] * &self.mats[g] {
                        out.push(FunctorViolation::Composition { f, g });
                    }
                }
            }
        }
        out
    }

    /// Same verdict as [`Diagram::validate`], checking only composites
    /// `h ∘ g` with `g` a generator: writing `k = k' ∘ g`, induction on the
    /// length of `k` gives `F(h ∘ k) = F(g) F(h ∘ k') = F(k) F(h)`.
    pub fn is_functor(&self) -> bool {
        let c = &*self.base;
        c.objects().all(|x| self.mats[c.identity(x)].is_identity())
            && c.generators().iter().all(|&g| {
                c.objects().all(|y| {
                    c.hom(c.cod(g), y).iter().all(|&h| self.mats[c.compose(h, g)] == &self.mats[g] * &self.mats[h])
                })
            })
    }

    /// Replaces one matrix, keeping shapes consistent.
    pub fn with_map(mut self, f: MorId, m: QMat) -> Result<Diagram, DiagramError> {
        let expected = self.mats[f].shape();
        if m.shape() != expected {
            return Err(DiagramError::Shape { morphism: f, expected, found: m.shape() });
        }
        self.mats[f] = m;
        Ok(self)
    }
}

/// A natural transformation `τ: src → dst` with `τ_a: src(a) → dst(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    src: Arc<Diagram>,
    dst: Arc<Diagram>,
    components: Vec<QMat>,
}

impl NatTrans {
    /// Checks shapes only; see [`NatTrans::naturality_violations`].
    pub fn new(src: Arc<Diagram>, dst: Arc<Diagram>, components: Vec<QMat>) -> Result<NatTrans, DiagramError> {
        if !same_category(&src.base, &dst.base) {
            return Err(DiagramError::BaseMismatch);
        }
        let n = src.base.object_count();
        if components.len() != n {
            return Err(DiagramError::DimsLength { expected: n, found: components.len() });
        }
        for (x, c) in components.iter().enumerate() {
            let expected = (dst.dims[x], src.dims[x]);
            if c.shape() != expected {
                return Err(DiagramError::ComponentShape { object: x, expected, found: c.shape() });
            }
        }
        Ok(NatTrans { src, dst, components })
    }

    pub fn identity(d: Arc<Diagram>) -> NatTrans {
        let components = d.dims.iter().map(|&n| QMat::identity(n)).collect();
        NatTrans { src: d.clone(), dst: d, components }
    }

    /// A basis of all natural transformations `src → dst`, found as the
    /// kernel of the naturality equations along generating morphisms.
    pub fn space(src: &Arc<Diagram>, dst: &Arc<Diagram>) -> Vec<NatTrans> {
        assert!(same_category(&src.base, &dst.base), "natural transformations between different bases");
        let c = &*src.base;
        let mut offsets = Vec::with_capacity(c.object_count() + 1);
        offsets.push(0);
        for x in c.objects() {
            offsets.push(offsets[x] + dst.dims[x] * src.dims[x]);
        }
        let unknowns = offsets[c.object_count()];
        // τ_x[r][k] is unknown number offsets[x] + r·src(x) + k.
        let var = |x: ObjId, r: usize, k: usize| offsets[x] + r * src.dims[x] + k;
        let mut equations = SparseEchelon::new(unknowns);
        for &f in c.generators() {
            let (a, b) = (c.dom(f), c.cod(f));
            let (sf, df) = (src.map(f), dst.map(f));
            for r in 0..dst.dims[a] {
                for col in 0..src.dims[b] {
                    let left = (0..src.dims[a]).map(|k| (var(a, r, k), sf.get(k, col)));
                    let right = (0..dst.dims[b]).map(|k| (var(b, k, col), -df.get(r, k)));
                    equations.push(left.filter(|e| !e.1.is_zero()).map(|(i, v)| (i, v.clone())).chain(right.filter(|e| !e.1.is_zero())));
                }
            }
        }
        let k = equations.kernel().basis;
        (0..k.cols())
            .map(|j| {
                let components = c
                    .objects()
                    .map(|x| {
                        let mut m = QMat::zeros(dst.dims[x], src.dims[x]);
                        for r in 0..dst.dims[x] {
                            for q in 0..src.dims[x] {
                                m.set(r, q, k.get(var(x, r, q), j).clone());
                            }
                        }
                        m
                    })
                    .collect();
                NatTrans { src: src.clone(), dst: dst.clone(), components }
            })
            .collect()
    }

    pub fn src(&self) -> &Arc<Diagram> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<Diagram> {
        &self.dst
    }

    pub fn component(&self, x: ObjId) -> &QMat {
        &self.components[x]
    }

    pub fn components(&self) -> &[QMat] {
        &self.components
    }

    /// Morphisms `f: a → b` whose square `τ_a · src(f) = dst(f) · τ_b` fails.
    pub fn naturality_violations(&self) -> Vec<MorId> {
        let c = &*self.src.base;
        c.morphisms()
            .filter(|&f| {
                let (a, b) = (c.dom(f), c.cod(f));
                &self.components[a] * self.src.map(f) != self.dst.map(f) * &self.components[b]
            })
            .collect()
    }

    pub fn is_natural(&self) -> bool {
        self.naturality_violations().is_empty()
    }

    /// `next ∘ self`. Panics unless `self.dst` is `next.src`.
    pub fn then(&self, next: &NatTrans) -> NatTrans {
        assert_eq!(self.dst.dims, next.src.dims, "natural transformations are not composable");
        let components = self.components.iter().zip(&next.components).map(|(s, n)| n * s).collect();
        NatTrans { src: self.src.clone(), dst: next.dst.clone(), components }
    }

    /// Objects where the component is not invertible.
    pub fn non_iso_objects(&self) -> Vec<ObjId> {
        (0..self.components.len()).filter(|&x| !is_isomorphism(&self.components[x])).collect()
    }

    pub fn is_componentwise_iso(&self) -> bool {
        self.non_iso_objects().is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(QMat::is_identity)
    }

    /// The objectwise kernel with its inclusion into `src`.
    pub fn kernel(&self) -> (Diagram, NatTrans) {
        let c = &*self.src.base;
        let kernels: Vec<_> = self.components.iter().map(kernel_with_coordinates).collect();
        let dims = kernels.iter().map(|k| k.dim()).collect();
        let mats = c
            .morphisms()
            .map(|f| {
                let (a, b) = (c.dom(f), c.cod(f));
                kernels[a].coordinates(&(self.src.map(f) * &kernels[b].basis))
            })
            .collect();
        let k = Arc::new(Diagram { base: self.src.base.clone(), dims, mats });
        let inclusion = kernels.into_iter().map(|k| k.basis).collect();
        ((*k).clone(), NatTrans { src: k, dst: self.src.clone(), components: inclusion })
    }

    /// The objectwise cokernel with the projection from `dst`.
    pub fn cokernel(&self) -> (Diagram, NatTrans) {
        let c = &*self.src.base;
        let quotients: Vec<_> = self.components.iter().map(cokernel).collect();
        let dims = quotients.iter().map(|q| q.dim()).collect();
        let mats = c
            .morphisms()
            .map(|f| {
                let (a, b) = (c.dom(f), c.cod(f));
                &(&quotients[a].proj * self.dst.map(f)) * &quotients[b].section
            })
            .collect();
        let q = Arc::new(Diagram { base: self.src.base.clone(), dims, mats });
        let projection = quotients.into_iter().map(|q| q.proj).collect();
        ((*q).clone(), NatTrans { src: self.dst.clone(), dst: q, components: projection })
    }
}

#[cfg(test)]
mod tests;
