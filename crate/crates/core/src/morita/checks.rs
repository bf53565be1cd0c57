use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::{Context, MoritaError, RImage};
use crate::conjugation::WedgePoint;
use crate::diagrams::{free_functor, random_diagram, random_endomorphism, random_presentation, Diagram, NatTrans, SplitMix64};
use crate::fincat::{linear_extension, MorId, ObjId};
use crate::qlinalg::{is_isomorphism, QMat, Rat};

/// `R G(b) ≅ ∏_{i ∈ sk(I↓b)} G(dom i)`, in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RDecomposition {
    /// `(i, dom i)` in skeleton order.
    pub summands: Vec<(MorId, ObjId)>,
    pub to_product: QMat,
    pub from_product: QMat,
}

impl RDecomposition {
    pub fn is_isomorphism(&self) -> bool {
        let (n, m) = (self.to_product.rows(), self.from_product.rows());
        (&self.to_product * &self.from_product).is_identity()
            && (&self.from_product * &self.to_product).is_identity()
            && n == m
    }
}

/// The outcome of both triangle identities for one pair of diagrams.
#[derive(Debug, Clone)]
pub struct TriangleCheck {
    /// `η_F`.
    pub unit: NatTrans,
    /// `ε_G`.
    pub counit: NatTrans,
    /// `ε_{LF} ∘ L η_F = 1`.
    pub left: bool,
    /// `R ε_G ∘ η_{RG} = 1`.
    pub right: bool,
    rg: RImage,
}

impl TriangleCheck {
    pub fn holds(&self) -> bool {
        self.left && self.right
    }

    /// The image `R G` computed along the way.
    pub fn rg(&self) -> &RImage {
        &self.rg
    }
}

/// The unit of a free functor at one object, in the bases indexed by
/// `sk(I↓a)` on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularityBlock {
    pub object: ObjId,
    /// The skeleton `sk(I↓a)` as morphism ids, in skeleton order.
    pub skeleton: Vec<MorId>,
    /// Skeleton positions in linear-extension order.
    pub order: Vec<usize>,
    /// `blocks[i][j]` is `f_{ij}`, the part of the unit from the summand of
    /// `i` to the summand of `j`.
    pub blocks: Vec<Vec<QMat>>,
    /// Whether `j ≤ i` in `sk(I↓a)`.
    pub below: Vec<Vec<bool>>,
    /// The whole unit component in decomposed bases.
    pub matrix: QMat,
}

impl TriangularityBlock {
    pub fn diagonal_is_identity(&self) -> bool {
        (0..self.blocks.len()).all(|i| self.blocks[i][i].is_identity())
    }

    /// `f_{ij} = 0` unless `j ≤ i`: upward and incomparable pairs vanish.
    pub fn off_order_blocks_vanish(&self) -> bool {
        (0..self.blocks.len()).all(|i| (0..self.blocks.len()).all(|j| self.below[i][j] || self.blocks[i][j].is_zero()))
    }

    /// With rows and columns in linear-extension order, `f_{ij}` can only be
    /// nonzero when `i` comes no earlier than `j`.
    pub fn is_block_lower_triangular(&self) -> bool {
        let rank: Vec<usize> = {
            let mut r = vec![0; self.order.len()];
            for (k, &p) in self.order.iter().enumerate() {
                r[p] = k;
            }
            r
        };
        (0..self.blocks.len())
            .all(|i| (0..self.blocks.len()).all(|j| rank[i] >= rank[j] || self.blocks[i][j].is_zero()))
    }

    pub fn holds(&self) -> bool {
        self.diagonal_is_identity()
            && self.off_order_blocks_vanish()
            && self.is_block_lower_triangular()
            && is_isomorphism(&self.matrix)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangularity {
    pub b: ObjId,
    pub dim: usize,
    pub objects: Vec<TriangularityBlock>,
}

impl Triangularity {
    pub fn holds(&self) -> bool {
        self.objects.iter().all(TriangularityBlock::holds)
    }
}

/// The result of one equivalence trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub f_dims: Vec<usize>,
    pub g_dims: Vec<usize>,
    pub failures: Vec<String>,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn dims(d: &[usize]) -> String {
    let parts: Vec<String> = d.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

impl fmt::Display for TrialOutcome {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = format!("equivalence trial={} seed={}", self.trial, self.seed);
        if self.passed() {
            write!(
                out,
                "PASS {head} F={} G={} unit=iso counit=iso triangles=exact reflection=agrees",
                dims(&self.f_dims),
                dims(&self.g_dims)
            )
        } else {
            write!(out, "FAIL {head} {}", self.failures.join("; "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub outcomes: Vec<TrialOutcome>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.outcomes.iter().all(TrialOutcome::passed)
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(out, "{o}")?;
        }
        Ok(())
    }
}

/// The seed of trial `k`: the `k`-th output of splitmix64 started at `seed`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let start = seed.wrapping_add((trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    SplitMix64::new(start).next_u64()
}

impl Context {
    /// `R G(b) ≅ ∏_i G(dom i)`: project a family onto its values at the
    /// skeletal maps `i`, and rebuild it from those values through the free
    /// decomposition `u = i ∘ α ↦ G(α)`.
    pub fn r_decomposition(&self, g: &Diagram, rg: &RImage, y: ObjId) -> RDecomposition {
        let cc = self.conjugate();
        let u = cc.u();
        let space = &rg.spaces[y];
        let summands: Vec<(MorId, ObjId)> =
            cc.indexing().skeleton(y).maps().map(|i| (i, u.dom(i))).collect();
        let mut offsets = vec![0];
        for &(_, x) in &summands {
            offsets.push(offsets.last().unwrap() + g.dim(x));
        }
        let total = *offsets.last().unwrap();

        let parts: Vec<QMat> = summands
            .iter()
            .map(|&(i, x)| {
                let e = self.bimodule().element_of(cc.embed_u(i));
                space.projection(space.layout.block(x, e))
            })
            .collect();
        let to_product = QMat::vstack(&parts, space.dim()).expect("columns agree");

        let mut ambient = QMat::zeros(space.layout.ambient, total);
        for block in &space.layout.blocks {
            let m = self.bimodule().morphism(block.object, y, block.element).expect("non-basepoint");
            let p = cc.decompose_free(m).expect("regular");
            let alpha = cc.u_to_a(p.map).expect("A-part");
            ambient.put(block.offset, offsets[p.summand], g.map(alpha));
        }
        let from_product = space.coordinates(&ambient);
        RDecomposition { summands, to_product, from_product }
    }

    /// The matrix `∏_{j ∈ sk(I↓c)} G(dom j) → ∏_{i ∈ sk(I↓b)} G(dom i)`
    /// that `β: b → c` induces through `β_*`: the block `(i, j)` is `G(α)`
    /// when `β ∘ i = j ∘ α` is regular, and zero otherwise.
    pub fn decomposed_action(&self, g: &Diagram, beta: MorId) -> QMat {
        let cc = self.conjugate();
        let u = cc.u();
        let ix = cc.indexing();
        let (y, z) = (self.b().dom(beta), self.b().cod(beta));
        let offsets = |obj: ObjId| {
            let mut v = vec![0];
            for i in ix.skeleton(obj).maps() {
                v.push(v.last().unwrap() + g.dim(u.dom(i)));
            }
            v
        };
        let (rows, cols) = (offsets(y), offsets(z));
        let mut m = QMat::zeros(*rows.last().unwrap(), *cols.last().unwrap());
        for (s, i) in ix.skeleton(y).maps().enumerate() {
            let start = WedgePoint { summand: s, map: u.identity(u.dom(i)) };
            if let Some(p) = cc.lower_star(beta, Some(start)) {
                let alpha = cc.u_to_a(p.map).expect("A-part");
                m.put(rows[s], cols[p.summand], g.map(alpha));
            }
        }
        m
    }

    /// Morphisms `β` of `B` for which `R G(β)`, conjugated by the product
    /// decompositions, differs from [`Context::decomposed_action`].
    pub fn r_decomposition_defects(&self, g: &Diagram) -> Result<Vec<MorId>, MoritaError> {
        let rg = self.r_image(g)?;
        let decs: Vec<RDecomposition> = self.b().objects().map(|y| self.r_decomposition(g, &rg, y)).collect();
        Ok(self
            .b()
            .morphisms()
            .filter(|&beta| {
                let (y, z) = (self.b().dom(beta), self.b().cod(beta));
                let conj = &(&decs[y].to_product * rg.diagram.map(beta)) * &decs[z].from_product;
                conj != self.decomposed_action(g, beta)
            })
            .collect())
    }

    /// Both triangle identities, with the unit of `F` and the counit of `G`.
    pub fn triangle_identities(&self, f: &Diagram, g: &Diagram) -> Result<TriangleCheck, MoritaError> {
        let f = Arc::new(f.clone());
        let lf = self.l_image(&f)?;
        let rlf = self.r_image(&lf.diagram)?;
        let unit = self.unit_with(&f, &lf, &rlf);
        let lrlf = self.l_image(&rlf.diagram)?;
        let l_unit = self.l_map(&unit, &lf, &lrlf);
        let counit_lf = self.counit_with(&lf.diagram, &rlf, &lrlf);
        let left = l_unit.then(&counit_lf).is_identity();

        let g = Arc::new(g.clone());
        let rg = self.r_image(&g)?;
        let lrg = self.l_image(&rg.diagram)?;
        let counit = self.counit_with(&g, &rg, &lrg);
        let rlrg = self.r_image(&lrg.diagram)?;
        let unit_rg = self.unit_with(&rg.diagram, &lrg, &rlrg);
        let r_counit = self.r_map(&counit, &rlrg, &rg);
        let right = unit_rg.then(&r_counit).is_identity();

        Ok(TriangleCheck { unit, counit, left, right, rg })
    }

    /// The unit of the free functor `C ⊗ B(−, b)₊` with `dim C = dim`, at
    /// every object `a`, written in the bases `⊕_{i ∈ sk(I↓a)} C ⊗ U(dom i, b)₊`
    /// on both sides: the source through the generalized decomposition of
    /// `B(a, b)₊`, the target through [`Context::r_decomposition`] of `L F`.
    pub fn unit_triangularity(&self, b_obj: ObjId, dim: usize) -> Triangularity {
        let cc = self.conjugate();
        let u = cc.u();
        let bcat = self.b().clone();
        let f = Arc::new(free_functor(&bcat, b_obj, dim));
        let lf = self.l_image(&f).expect("free functor over B");
        let rlf = self.r_image(&lf.diagram).expect("L F over A");
        let unit = self.unit_with(&f, &lf, &rlf);

        let objects = bcat
            .objects()
            .map(|a| {
                let sk = cc.indexing().skeleton(a);
                let skeleton: Vec<MorId> = sk.maps().collect();
                let sizes: Vec<usize> =
                    skeleton.iter().map(|&i| dim * self.bimodule().cardinality(u.dom(i), b_obj)).collect();
                let mut offsets = vec![0];
                for s in &sizes {
                    offsets.push(offsets.last().unwrap() + s);
                }
                let total = *offsets.last().unwrap();
                assert_eq!(total, f.dim(a), "generalized decomposition is a bijection");

                let hom = bcat.hom(a, b_obj);
                let mut basis_change = QMat::zeros(f.dim(a), total);
                for (s, &i) in skeleton.iter().enumerate() {
                    for (n, &gamma) in self.bimodule().set(u.dom(i), b_obj).iter().enumerate() {
                        let p = WedgePoint { summand: s, map: cc.regular_to_u(gamma).expect("regular") };
                        let beta = cc.recompose_gen(a, p);
                        let pos = hom.iter().position(|&h| h == beta).expect("in the hom-set");
                        for k in 0..dim {
                            basis_change.set(pos * dim + k, offsets[s] + n * dim + k, Rat::one());
                        }
                    }
                }
                let dec = self.r_decomposition(&lf.diagram, &rlf, a);
                let matrix = &(&dec.to_product * unit.component(a)) * &basis_change;
                assert_eq!(matrix.rows(), total, "L F(dom j) = C ⊗ U(dom j, b)₊");

                let n = skeleton.len();
                let blocks = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| matrix.block(offsets[j]..offsets[j + 1], offsets[i]..offsets[i + 1]))
                            .collect()
                    })
                    .collect();
                let below = (0..n).map(|i| (0..n).map(|j| sk.leq(j, i)).collect()).collect();
                TriangularityBlock { object: a, skeleton, order: linear_extension(sk), blocks, below, matrix }
            })
            .collect();
        Triangularity { b: b_obj, dim, objects }
    }

    /// One trial: random `F` over `B` and `G` over `A` from the trial seed;
    /// unit and counit must be isomorphisms, both triangle identities must
    /// hold exactly, and a random endomorphism `τ` of `G` must be invertible
    /// exactly when `R τ` is.
    pub fn equivalence_trial(&self, trial: usize, seed: u64, max_dim: usize) -> TrialOutcome {
        let mut rng = SplitMix64::new(seed);
        let f = random_diagram(self.b(), rng.next_u64(), max_dim);
        let presentation = random_presentation(self.a(), rng.next_u64(), max_dim);
        let g = presentation.diagram.clone();
        let mut failures = Vec::new();
        for (name, d) in [("F", &f), (" G", &*g)] {
            if !d.is_functor() {
                let v = d.validate().into_iter().next().expect("some composite fails");
                failures.push(format!("{} not functorial: {v}", name.trim()));
            }
        }
        let t = self.triangle_identities(&f, &g).expect("bases match by construction");
        let bad = t.unit.non_iso_objects();
        if !bad.is_empty() {
            failures.push(format!("unit not iso at objects {bad:?}"));
        }
        let bad = t.counit.non_iso_objects();
        if !bad.is_empty() {
            failures.push(format!("counit not iso at objects {bad:?}"));
        }
        if !t.left {
            failures.push("triangle at L F fails".into());
        }
        if !t.right {
            failures.push("triangle at R G fails".into());
        }
        let tau = random_endomorphism(&mut rng, &presentation);
        let r_tau = self.r_map(&tau, t.rg(), t.rg());
        let (before, after) = (tau.is_componentwise_iso(), r_tau.is_componentwise_iso());
        if before != after {
            failures.push(format!("reflection: τ iso={before} but R τ iso={after}"));
        }
        TrialOutcome { trial, seed, f_dims: f.dims().to_vec(), g_dims: g.dims().to_vec(), failures }
    }

    /// Runs `trials` independent trials in parallel, trial `k` seeded by
    /// [`trial_seed`]`(seed, k)`. Outcomes are in trial order.
    pub fn check_equivalence(&self, trials: usize, seed: u64, max_dim: usize) -> EquivalenceReport {
        let outcomes =
            (0..trials).into_par_iter().map(|k| self.equivalence_trial(k, trial_seed(seed, k), max_dim)).collect();
        EquivalenceReport { outcomes }
    }
}
