use std::sync::Arc;

use super::free::{hom_positions, yoneda_map};
use super::{Diagram, FreeSum, NatTrans};
use crate::fincat::FinCat;
use crate::qlinalg::{solve, QMat, Rat, SparseEchelon};

/// The splitmix64 generator with its standard constants.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish in `0..n` by multiply-shift. `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// An integer entry in `−3..=3`.
    pub fn entry(&mut self) -> Rat {
        Rat::from_int(self.below(7) as i64 - 3)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> QMat {
        let mut m = QMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, self.entry());
            }
        }
        m
    }
}

/// A random diagram together with the map between free sums it came from.
#[derive(Debug, Clone)]
pub struct Presentation {
    /// A map between sums of free functors.
    pub map: NatTrans,
    /// The free sums `map` goes between.
    pub source: FreeSum,
    pub target: FreeSum,
    /// Whether `diagram` is the kernel (else the cokernel) of `map`.
    pub is_kernel: bool,
    pub diagram: Arc<Diagram>,
    /// The inclusion into `map.src()` or the projection from `map.dst()`.
    pub structure: NatTrans,
}

fn random_free_sum(rng: &mut SplitMix64, objects: usize, max_dim: usize) -> FreeSum {
    let count = 1 + rng.below(2);
    FreeSum { terms: (0..count).map(|_| (rng.below(objects), 1 + rng.below(max_dim))).collect() }
}

/// Samples two sums of one or two free functors with multiplicities in
/// `1..=max_dim`, a random map between them described by its values on
/// generators, and takes its kernel or cokernel.
pub fn random_presentation(base: &Arc<FinCat>, seed: u64, max_dim: usize) -> Presentation {
    let mut rng = SplitMix64::new(seed);
    if max_dim == 0 || base.object_count() == 0 {
        let empty = FreeSum { terms: vec![] };
        let zero = Arc::new(empty.diagram(base));
        let map = NatTrans::identity(zero.clone());
        let (source, target) = (empty.clone(), empty);
        return Presentation { map: map.clone(), source, target, is_kernel: false, diagram: zero, structure: map };
    }
    let n = base.object_count();
    let source = random_free_sum(&mut rng, n, max_dim);
    let target_terms = random_free_sum(&mut rng, n, max_dim).terms;
    let target = Arc::new(FreeSum { terms: target_terms.clone() }.diagram(base));
    let elements: Vec<QMat> = source.terms.iter().map(|&(d, m)| rng.matrix(target.dim(d), m)).collect();
    let map = yoneda_map(base, &source, target.clone(), &elements);
    let target = FreeSum { terms: target_terms };
    let is_kernel = rng.below(2) == 0;
    let (diagram, structure) = if is_kernel { map.kernel() } else { map.cokernel() };
    Presentation { map, source, target, is_kernel, diagram: Arc::new(diagram), structure }
}

/// Deterministic in `seed`; `max_dim = 0` gives the zero diagram.
pub fn random_diagram(base: &Arc<FinCat>, seed: u64, max_dim: usize) -> Diagram {
    (*random_presentation(base, seed, max_dim).diagram).clone()
}

/// A random natural transformation `src → dst`: either a random integer
/// combination of a basis of all natural transformations or a single basis
/// element, so that both invertible and non-invertible maps are common.
pub fn random_nat_trans(rng: &mut SplitMix64, src: &Arc<Diagram>, dst: &Arc<Diagram>) -> NatTrans {
    let basis = NatTrans::space(src, dst);
    let zero = || {
        let components = src.dims().iter().zip(dst.dims()).map(|(&s, &d)| QMat::zeros(d, s)).collect();
        NatTrans::new(src.clone(), dst.clone(), components).expect("zero map shapes")
    };
    if basis.is_empty() {
        return zero();
    }
    if rng.below(2) == 0 {
        return basis[rng.below(basis.len())].clone();
    }
    let mut components: Vec<QMat> = zero().components().to_vec();
    for t in &basis {
        let s = rng.entry();
        for (c, tc) in components.iter_mut().zip(t.components()) {
            *c = &*c + &tc.scale(&s);
        }
    }
    NatTrans::new(src.clone(), dst.clone(), components).expect("combination of natural maps")
}

/// A random natural endomorphism of `p.diagram`. With `φ: P → Q` the
/// presenting map, a pair of endomorphisms `ψ` of `Q` and `χ` of `P` with
/// `ψ ∘ φ = φ ∘ χ` preserves `ker φ` and `im φ`, so it induces one. The pair
/// is a single basis element of the space of such pairs or a random integer
/// combination of the basis. The pair `(id, id)` is in the space, so both
/// invertible and non-invertible maps are common.
///
/// Both endomorphisms are given by Yoneda elements, so the space is cut out
/// by small integer equations at the generators of `P`. Solving for all of
/// `Nat(G, G)` directly costs far more once `G` has large entries.
pub fn random_endomorphism(rng: &mut SplitMix64, p: &Presentation) -> NatTrans {
    let g = &p.diagram;
    if g.total_dim() == 0 {
        return NatTrans::identity(g.clone());
    }
    let c = &**g.base();
    let pos = hom_positions(c);
    let (pd, qd) = (p.map.src(), p.map.dst());
    // Unknowns: first the elements of ψ (column-major per term), then those of χ.
    let mut starts = Vec::new();
    let mut unknowns = 0;
    for (sum, d) in [(&p.target, qd), (&p.source, pd)] {
        for &(t, n) in &sum.terms {
            starts.push(unknowns);
            unknowns += d.dim(t) * n;
        }
    }
    let (psi_starts, chi_starts) = starts.split_at(p.target.terms.len());
    let mut equations = SparseEchelon::new(unknowns);
    for (i, &(d, n)) in p.source.terms.iter().enumerate() {
        // The element of φ for term i and the map ψ applied to it.
        let gen = p.source.offsets(c, d)[i] + pos[c.identity(d)] * n;
        let phi = p.map.component(d);
        let q_offsets = p.target.offsets(c, d);
        for col in 0..n {
            for r in 0..qd.dim(d) {
                let mut row: Vec<(usize, Rat)> = Vec::new();
                for (j, &(dj, mj)) in p.target.terms.iter().enumerate() {
                    for &h in c.hom(d, dj) {
                        let qh = qd.map(h);
                        for k in 0..mj {
                            let e = phi.get(q_offsets[j] + pos[h] * mj + k, gen + col);
                            if e.is_zero() {
                                continue;
                            }
                            for s in 0..qd.dim(dj) {
                                let v = qh.get(r, s);
                                if !v.is_zero() {
                                    row.push((psi_starts[j] + k * qd.dim(dj) + s, e * v));
                                }
                            }
                        }
                    }
                }
                for t in 0..pd.dim(d) {
                    let v = phi.get(r, t);
                    if !v.is_zero() {
                        row.push((chi_starts[i] + col * pd.dim(d) + t, -v));
                    }
                }
                equations.push(row);
            }
        }
    }
    let basis = equations.kernel().basis;
    let z: Vec<Rat> = if rng.below(2) == 0 {
        let pick = rng.below(basis.cols());
        (0..unknowns).map(|u| basis.get(u, pick).clone()).collect()
    } else {
        let coeffs: Vec<Rat> = (0..basis.cols()).map(|_| rng.entry()).collect();
        (0..unknowns)
            .map(|u| basis.row(u).iter().zip(&coeffs).fold(Rat::zero(), |acc, (b, k)| &acc + &(b * k)))
            .collect()
    };
    let elements = |sum: &FreeSum, d: &Diagram, starts: &[usize]| -> Vec<QMat> {
        sum.terms
            .iter()
            .zip(starts)
            .map(|(&(t, n), &at)| {
                let rows = d.dim(t);
                let mut m = QMat::zeros(rows, n);
                for k in 0..n {
                    for s in 0..rows {
                        m.set(s, k, z[at + k * rows + s].clone());
                    }
                }
                m
            })
            .collect()
    };
    let components: Vec<QMat> = if p.is_kernel {
        let chi = yoneda_map(g.base(), &p.source, pd.clone(), &elements(&p.source, pd, chi_starts));
        c.objects()
            .map(|x| {
                let incl = p.structure.component(x);
                solve(incl, &(chi.component(x) * incl)).expect("χ preserves the kernel")
            })
            .collect()
    } else {
        let psi = yoneda_map(g.base(), &p.target, qd.clone(), &elements(&p.target, qd, psi_starts));
        c.objects()
            .map(|x| {
                let proj = p.structure.component(x);
                let section = solve(proj, &QMat::identity(proj.rows())).expect("projections are onto");
                &(proj * psi.component(x)) * &section
            })
            .collect()
    };
    NatTrans::new(g.clone(), g.clone(), components).expect("endomorphism shapes")
}
