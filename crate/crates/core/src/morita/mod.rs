//! The adjunction `(L, R)` induced by the regular bimodule `U₊`:
//! `L F(a) = F ⊗_B U(a, −)₊` and `R G(b) = Hom^A(U(−, b)₊, G)`.

mod calculus;
mod checks;

use std::sync::Arc;

use thiserror::Error;

use crate::conjugation::{ConjugateCategory, RegularBimodule};
use crate::diagrams::{same_category, Diagram, NatTrans, PointedFunctor, Variance};
use crate::fincat::{FinCat, MorId, ObjId};
use crate::qlinalg::{cokernel_of_rows, QMat, Quotient};

pub use calculus::{coend_tensor, end_hom, Block, CalculusError, CoendSpace, EndSpace, Layout};
pub use checks::{
    trial_seed, EquivalenceReport, RDecomposition, TrialOutcome, TriangleCheck, Triangularity,
    TriangularityBlock,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoritaError {
    #[error("diagram lives over {found}, expected {expected}")]
    WrongBase { expected: String, found: String },
}

/// A conjugate pair with its regular bimodule, viewed as a based-set functor
/// in each variable separately.
#[derive(Debug, Clone)]
pub struct Context {
    cc: Arc<ConjugateCategory>,
    bimodule: RegularBimodule,
    b: Arc<FinCat>,
    a: Arc<FinCat>,
    /// `U(−, b)₊` on `A^op`, per `b`.
    columns: Vec<PointedFunctor>,
    /// `U(a, −)₊` on `B`, per `a`.
    rows: Vec<PointedFunctor>,
    /// Singular morphisms out of each object through which no other one
    /// factors; the images of the rest are contained in theirs.
    singular_out: Vec<Vec<MorId>>,
}

/// `L F` with the quotient maps `F(a) → L F(a)`.
#[derive(Debug, Clone)]
pub struct LImage {
    pub diagram: Arc<Diagram>,
    pub quotients: Vec<Quotient>,
}

/// `R G` with its presentation as ends.
#[derive(Debug, Clone)]
pub struct RImage {
    pub diagram: Arc<Diagram>,
    pub spaces: Vec<EndSpace>,
}

/// The members of `maps` (all out of one object) that do not factor as
/// `τ ∘ σ'` through an earlier member `σ'`. Earlier means strictly below in
/// the factorization preorder, or equivalent with a smaller id, so every
/// dropped map factors through a kept one.
fn minimal_under_factorization(b: &FinCat, maps: &[MorId]) -> Vec<MorId> {
    let factors = |sigma: MorId, through: MorId| {
        b.hom(b.cod(through), b.cod(sigma)).iter().any(|&tau| b.compose(tau, through) == sigma)
    };
    maps.iter()
        .copied()
        .filter(|&sigma| {
            !maps.iter().any(|&other| {
                other != sigma && factors(sigma, other) && (other < sigma || !factors(other, sigma))
            })
        })
        .collect()
}

impl Context {
    pub fn new(cc: ConjugateCategory) -> Context {
        Context::from_shared(Arc::new(cc))
    }

    pub fn from_shared(cc: Arc<ConjugateCategory>) -> Context {
        let bimodule = RegularBimodule::new(&cc);
        let b = Arc::new(cc.b().clone());
        let a = Arc::new(cc.a_cat().clone());
        let n = b.object_count();
        let columns = (0..n)
            .map(|y| {
                let sizes = (0..n).map(|x| bimodule.cardinality(x, y)).collect();
                let action = a
                    .morphisms()
                    .map(|alpha| {
                        let u_alpha = cc.a_to_u()[alpha];
                        (0..=bimodule.cardinality(a.cod(alpha), y))
                            .map(|e| bimodule.right_action(&cc, u_alpha, y, e))
                            .collect()
                    })
                    .collect();
                PointedFunctor { variance: Variance::Contravariant, sizes, action }
            })
            .collect();
        let rows = (0..n)
            .map(|x| {
                let sizes = (0..n).map(|y| bimodule.cardinality(x, y)).collect();
                let action = b
                    .morphisms()
                    .map(|beta| {
                        (0..=bimodule.cardinality(x, b.dom(beta)))
                            .map(|e| bimodule.left_action(&cc, beta, x, e))
                            .collect()
                    })
                    .collect();
                PointedFunctor { variance: Variance::Covariant, sizes, action }
            })
            .collect();
        let singular_out = (0..n)
            .map(|x| {
                let all: Vec<MorId> =
                    b.objects().flat_map(|y| b.hom(x, y).iter().copied()).filter(|&s| !cc.is_regular(s)).collect();
                minimal_under_factorization(&b, &all)
            })
            .collect();
        Context { cc, bimodule, b, a, columns, rows, singular_out }
    }

    pub fn conjugate(&self) -> &ConjugateCategory {
        &self.cc
    }

    pub fn bimodule(&self) -> &RegularBimodule {
        &self.bimodule
    }

    /// `B`, the base of the diagrams `L` consumes.
    pub fn b(&self) -> &Arc<FinCat> {
        &self.b
    }

    /// `A`, the base of the diagrams `R` consumes.
    pub fn a(&self) -> &Arc<FinCat> {
        &self.a
    }

    /// `U(−, b)₊` as a contravariant functor on `A`.
    pub fn column(&self, b: ObjId) -> &PointedFunctor {
        &self.columns[b]
    }

    /// `U(a, −)₊` as a covariant functor on `B`.
    pub fn row(&self, a: ObjId) -> &PointedFunctor {
        &self.rows[a]
    }

    /// The `B`-morphism of an `A`-morphism.
    pub fn a_in_b(&self, alpha: MorId) -> MorId {
        self.cc.embed_u(self.cc.a_to_u()[alpha])
    }

    fn check_base(&self, d: &Diagram, expected: &Arc<FinCat>) -> Result<(), MoritaError> {
        if same_category(d.base(), expected) {
            Ok(())
        } else {
            Err(MoritaError::WrongBase { expected: expected.name().to_string(), found: d.base().name().to_string() })
        }
    }

    /// `L F(a)` is `F(a)` modulo the images of `F(σ)` for singular `σ` out
    /// of `a`: the bimodule is `B(a, −)₊` with the singular maps collapsed,
    /// and tensoring with a representable evaluates. Since
    /// `F(τ ∘ σ) = F(σ) F(τ)`, minimal `σ` suffice. The coend is computed
    /// directly by [`coend_tensor`] as a cross-check.
    pub fn l_image(&self, f: &Diagram) -> Result<LImage, MoritaError> {
        self.check_base(f, &self.b)?;
        let quotients: Vec<Quotient> = self
            .b
            .objects()
            .map(|x| {
                let parts: Vec<QMat> = self.singular_out[x].iter().map(|&s| f.map(s).transpose()).collect();
                cokernel_of_rows(&QMat::vstack(&parts, f.dim(x)).expect("columns agree"))
            })
            .collect();
        let dims = quotients.iter().map(Quotient::dim).collect();
        let mats = self
            .a
            .morphisms()
            .map(|alpha| {
                let (x, y) = (self.a.dom(alpha), self.a.cod(alpha));
                &(&quotients[x].proj * f.map(self.a_in_b(alpha))) * &quotients[y].section
            })
            .collect();
        let diagram = Diagram::new(self.a.clone(), dims, mats).expect("shapes follow from the construction");
        Ok(LImage { diagram: Arc::new(diagram), quotients })
    }

    pub fn r_image(&self, g: &Diagram) -> Result<RImage, MoritaError> {
        self.check_base(g, &self.a)?;
        let spaces: Vec<EndSpace> = self
            .b
            .objects()
            .map(|y| end_hom(&self.columns[y], g).expect("the bimodule is functorial"))
            .collect();
        let dims = spaces.iter().map(EndSpace::dim).collect();
        let mats = self
            .b
            .morphisms()
            .map(|beta| {
                let (x, y) = (self.b.dom(beta), self.b.cod(beta));
                self.pull_coordinates(beta, &spaces[x], &spaces[y], spaces[y].basis())
            })
            .collect();
        let diagram = Diagram::new(self.b.clone(), dims, mats).expect("shapes follow from the construction");
        Ok(RImage { diagram: Arc::new(diagram), spaces })
    }

    /// Reindexes ambient vectors of the end at `cod β` to the end at
    /// `dom β` and returns their coordinates there: the factor `(a, u)`
    /// receives the factor `(a, β ∘ u)`, or zero when `β ∘ u` is singular.
    /// Only the rows the coordinates read are assembled.
    fn pull_coordinates(&self, beta: MorId, at_dom: &EndSpace, at_cod: &EndSpace, v: &QMat) -> QMat {
        let blocks = &at_dom.layout.blocks;
        let mut out = QMat::zeros(at_dom.dim(), v.cols());
        for (n, &row) in at_dom.free_rows().iter().enumerate() {
            let block = &blocks[blocks.partition_point(|b| b.offset + b.dim <= row)];
            let image = self.rows[block.object].apply(beta, block.element);
            if image != 0 {
                let src = at_cod.layout.block(block.object, image).offset + row - block.offset;
                out.put(n, 0, &v.block(src..src + 1, 0..v.cols()));
            }
        }
        out
    }

    pub fn apply_l(&self, f: &Diagram) -> Result<Diagram, MoritaError> {
        Ok((*self.l_image(f)?.diagram).clone())
    }

    pub fn apply_r(&self, g: &Diagram) -> Result<Diagram, MoritaError> {
        Ok((*self.r_image(g)?.diagram).clone())
    }

    /// `L τ` between previously computed images of `τ.src` and `τ.dst`.
    pub fn l_map(&self, tau: &NatTrans, src: &LImage, dst: &LImage) -> NatTrans {
        let components = self
            .a
            .objects()
            .map(|x| &(&dst.quotients[x].proj * tau.component(x)) * &src.quotients[x].section)
            .collect();
        NatTrans::new(src.diagram.clone(), dst.diagram.clone(), components).expect("shapes")
    }

    /// `R τ` between previously computed images of `τ.src` and `τ.dst`.
    pub fn r_map(&self, tau: &NatTrans, src: &RImage, dst: &RImage) -> NatTrans {
        let components = self
            .b
            .objects()
            .map(|y| {
                let (s, d) = (&src.spaces[y], &dst.spaces[y]);
                let mut v = QMat::zeros(d.layout.ambient, s.dim());
                for (sb, db) in s.layout.blocks.iter().zip(&d.layout.blocks) {
                    v.put(db.offset, 0, &(tau.component(sb.object) * &s.projection(sb)));
                }
                d.coordinates(&v)
            })
            .collect();
        NatTrans::new(src.diagram.clone(), dst.diagram.clone(), components).expect("shapes")
    }

    /// `η_F: F → R L F`, sending `y ∈ F(b)` to the family `[F(u) y]` indexed
    /// by regular `u: a → b`.
    pub fn unit_with(&self, f: &Arc<Diagram>, lf: &LImage, rlf: &RImage) -> NatTrans {
        let components = self
            .b
            .objects()
            .map(|y| {
                let space = &rlf.spaces[y];
                let mut v = QMat::zeros(space.layout.ambient, f.dim(y));
                for block in &space.layout.blocks {
                    let u = self.bimodule.morphism(block.object, y, block.element).expect("non-basepoint");
                    v.put(block.offset, 0, &(&lf.quotients[block.object].proj * f.map(u)));
                }
                space.coordinates(&v)
            })
            .collect();
        NatTrans::new(f.clone(), rlf.diagram.clone(), components).expect("shapes")
    }

    /// `ε_G: L R G → G`, evaluating a family at the identity.
    pub fn counit_with(&self, g: &Arc<Diagram>, rg: &RImage, lrg: &LImage) -> NatTrans {
        let components = self
            .a
            .objects()
            .map(|x| {
                let space = &rg.spaces[x];
                let id = self.bimodule.element_of(self.b.identity(x));
                &space.projection(space.layout.block(x, id)) * &lrg.quotients[x].section
            })
            .collect();
        NatTrans::new(lrg.diagram.clone(), g.clone(), components).expect("shapes")
    }

    pub fn unit(&self, f: &Diagram) -> Result<NatTrans, MoritaError> {
        let f = Arc::new(f.clone());
        let lf = self.l_image(&f)?;
        let rlf = self.r_image(&lf.diagram)?;
        Ok(self.unit_with(&f, &lf, &rlf))
    }

    pub fn counit(&self, g: &Diagram) -> Result<NatTrans, MoritaError> {
        let g = Arc::new(g.clone());
        let rg = self.r_image(&g)?;
        let lrg = self.l_image(&rg.diagram)?;
        Ok(self.counit_with(&g, &rg, &lrg))
    }
}

#[cfg(test)]
mod tests;
