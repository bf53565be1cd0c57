//! Ends and coends against based-set-valued functors, as kernels and
//! cokernels of explicitly assembled constraint matrices.

use thiserror::Error;

use crate::diagrams::{Diagram, PointedError, PointedFunctor, Variance};
use crate::fincat::ObjId;
use crate::qlinalg::{Kernel, QMat, Quotient, Rat, SparseEchelon};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalculusError {
    #[error("based-set functor is not functorial: {0}")]
    NotFunctorial(#[from] PointedError),
}

/// One factor `V(x)` of a product or sum indexed by the non-basepoint
/// elements of a based-set functor. Factors are ordered by
/// `(object, element)` ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub object: ObjId,
    /// 1-based element of the based set at `object`.
    pub element: usize,
    pub offset: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub blocks: Vec<Block>,
    /// `start[x]` is the index of the first block at object `x`.
    start: Vec<usize>,
    pub ambient: usize,
}

impl Layout {
    pub fn new(sizes: &[usize], dims: &[usize]) -> Layout {
        let mut blocks = Vec::new();
        let mut start = Vec::with_capacity(sizes.len());
        let mut offset = 0;
        for (object, (&size, &dim)) in sizes.iter().zip(dims).enumerate() {
            start.push(blocks.len());
            for element in 1..=size {
                blocks.push(Block { object, element, offset, dim });
                offset += dim;
            }
        }
        Layout { blocks, start, ambient: offset }
    }

    /// The block of a non-basepoint element.
    pub fn block(&self, object: ObjId, element: usize) -> &Block {
        debug_assert!(element >= 1);
        &self.blocks[self.start[object] + element - 1]
    }
}

/// `Hom^A(P, G)` as a subspace of `∏_a ∏_{P(a)∖*} G(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndSpace {
    pub layout: Layout,
    kernel: Kernel,
}

impl EndSpace {
    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    /// Columns form a basis, in ambient coordinates.
    pub fn basis(&self) -> &QMat {
        &self.kernel.basis
    }

    /// The projection onto the factor of a block.
    pub fn projection(&self, block: &Block) -> QMat {
        self.kernel.basis.block(block.offset..block.offset + block.dim, 0..self.dim())
    }

    /// The ambient rows that coordinates are read from.
    pub fn free_rows(&self) -> &[usize] {
        &self.kernel.free
    }

    /// Coordinates of ambient vectors that satisfy the end's constraints.
    pub fn coordinates(&self, v: &QMat) -> QMat {
        self.kernel.coordinates(v)
    }
}

/// `F ⊗ Q` as a quotient of `⊕_b ⊕_{Q(b)∖*} F(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoendSpace {
    pub layout: Layout,
    pub quotient: Quotient,
}

impl CoendSpace {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// The injection of the summand of a block.
    pub fn injection(&self, block: &Block) -> QMat {
        self.quotient.proj.block(0..self.dim(), block.offset..block.offset + block.dim)
    }
}

/// The end of `Hom(P(a), G(a))` for contravariant `P`: families
/// `x_{a,u} ∈ G(a)` with `x_{a', P(α) u} = G(α) x_{a,u}` for `α: a' → a`,
/// where `x` at a basepoint is zero. Constraints are imposed along the
/// generating morphisms of the base, which implies them along all.
pub fn end_hom(p: &PointedFunctor, g: &Diagram) -> Result<EndSpace, CalculusError> {
    let c = &**g.base();
    if p.variance != Variance::Contravariant {
        return Err(PointedError::WrongVariance { expected: Variance::Contravariant }.into());
    }
    p.validate(c)?;
    let layout = Layout::new(&p.sizes, g.dims());
    let mut echelon = SparseEchelon::new(layout.ambient);
    for &alpha in c.generators() {
        let (a2, a) = (c.dom(alpha), c.cod(alpha));
        let ga = g.map(alpha);
        for u in 1..=p.sizes[a] {
            let src = layout.block(a, u).offset;
            let image = p.apply(alpha, u);
            for r in 0..g.dim(a2) {
                let mut row: Vec<(usize, Rat)> =
                    ga.row(r).iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (src + k, -v)).collect();
                if image != 0 {
                    row.push((layout.block(a2, image).offset + r, Rat::one()));
                }
                echelon.push(row);
            }
        }
    }
    Ok(EndSpace { layout, kernel: echelon.kernel() })
}

/// The coend of `F(b) ⊗ Q(b)` for covariant `Q`: the sum over elements,
/// modulo `y ⊗ Q(β) u ~ F(β) y ⊗ u` for `β: b → c`, `y ∈ F(c)`,
/// `u ∈ Q(b)`. Relations are imposed along generating morphisms.
pub fn coend_tensor(f: &Diagram, q: &PointedFunctor) -> Result<CoendSpace, CalculusError> {
    let c = &**f.base();
    if q.variance != Variance::Covariant {
        return Err(PointedError::WrongVariance { expected: Variance::Covariant }.into());
    }
    q.validate(c)?;
    let layout = Layout::new(&q.sizes, f.dims());
    let mut echelon = SparseEchelon::new(layout.ambient);
    for &beta in c.generators() {
        let (b, cc) = (c.dom(beta), c.cod(beta));
        let fb = f.map(beta);
        for u in 1..=q.sizes[b] {
            let image = q.apply(beta, u);
            let dst = layout.block(b, u).offset;
            for y in 0..f.dim(cc) {
                let mut row: Vec<(usize, Rat)> =
                    (0..f.dim(b)).filter(|&r| !fb.get(r, y).is_zero()).map(|r| (dst + r, -fb.get(r, y))).collect();
                if image != 0 {
                    row.push((layout.block(cc, image).offset + y, Rat::one()));
                }
                echelon.push(row);
            }
        }
    }
    Ok(CoendSpace { layout, quotient: echelon.quotient() })
}
