use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{check_conjugation, Checked, ConjugationFailure, Factorization, Square};
use crate::fincat::{pullback_cones, FinCat, IndexingCategory, MorId, ObjId, Subcat};

/// A morphism of `B` as a three-fold factorization `img ∘ mid ∘ cok*`:
/// `src ← dom(cok) → cod(mid) → dst`, with `cok` and `img` skeletal in `I`
/// and `mid` in `A`. All ids are morphisms of `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BMorphism {
    pub src: ObjId,
    pub dst: ObjId,
    pub cok: MorId,
    pub mid: MorId,
    pub img: MorId,
}

impl fmt::Display for BMorphism {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}∘{}∘{}*", self.img, self.mid, self.cok)
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("factorization does not admit conjugation: {0}")]
    Axioms(ConjugationFailure),
    #[error("composite of B-morphisms {f} and {g} did not canonicalize to a listed triple")]
    Canonicalization { f: MorId, g: MorId },
}

/// Where the pieces of the factorization land in `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embeddings {
    /// `U`-morphism id ↦ `B`-morphism id. Covers `I` and `A`.
    pub u_to_b: Vec<MorId>,
    /// `i ∈ I` ↦ the id of `i*`; `None` outside `I`.
    pub i_op_to_b: Vec<Option<MorId>>,
}

/// The conjugate category `B = I ∘ A ∘ I^op` of a factorization admitting
/// conjugation, with the provenance of each of its morphisms.
#[derive(Debug, Clone)]
pub struct ConjugateCategory {
    factorization: Factorization,
    checked: Checked,
    b: FinCat,
    provenance: Vec<BMorphism>,
    lookup: HashMap<(MorId, MorId, MorId), MorId>,
    embeddings: Embeddings,
    a_cat: FinCat,
    a_to_u: Vec<MorId>,
    u_to_a: Vec<Option<MorId>>,
}

/// One choice made while composing: how many options there were, returning
/// the one picked. Used to exercise non-canonical composition paths.
pub type Chooser<'a> = dyn FnMut(usize) -> usize + 'a;

impl ConjugateCategory {
    pub fn build(f: &Factorization) -> Result<ConjugateCategory, BuildError> {
        let report = check_conjugation(f);
        if let Some(failure) = report.first_failure() {
            return Err(BuildError::Axioms(failure.clone()));
        }
        let checked = report.into_checked().expect("no failures");
        let u = &f.u;
        let ix = &checked.indexing;

        let mut provenance = Vec::new();
        for src in u.objects() {
            for dst in u.objects() {
                for cok in ix.skeleton(src).maps() {
                    for img in ix.skeleton(dst).maps() {
                        for mid in f.a.hom(u, u.dom(cok), u.dom(img)) {
                            provenance.push(BMorphism { src, dst, cok, mid, img });
                        }
                    }
                }
            }
        }
        let lookup: HashMap<(MorId, MorId, MorId), MorId> =
            provenance.iter().enumerate().map(|(id, t)| ((t.cok, t.mid, t.img), id)).collect();
        let ends = provenance.iter().map(|t| (t.src, t.dst)).collect();
        let identities = u.objects().map(|a| lookup[&(u.identity(a), u.identity(a), u.identity(a))]).collect();

        let (a_cat, a_to_u) = u.restrict(&f.a, format!("{}.A", u.name()));
        let mut u_to_a = vec![None; u.morphism_count()];
        for (local, &m) in a_to_u.iter().enumerate() {
            u_to_a[m] = Some(local);
        }

        let mut cc = ConjugateCategory {
            factorization: f.clone(),
            checked,
            b: FinCat::from_rule(String::new(), 0, vec![], vec![], |_, _| None),
            provenance,
            lookup,
            embeddings: Embeddings { u_to_b: vec![], i_op_to_b: vec![] },
            a_cat,
            a_to_u,
            u_to_a,
        };
        let mut failure = None;
        let b = FinCat::from_rule(format!("{}.B", u.name()), u.object_count(), ends, identities, |x, y| {
            let r = cc.compose_triples(&cc.provenance[x], &cc.provenance[y]);
            if r.is_none() && failure.is_none() {
                failure = Some((x, y));
            }
            r
        });
        if let Some((f, g)) = failure {
            return Err(BuildError::Canonicalization { f, g });
        }
        cc.b = b;
        let u_to_b = u
            .morphisms()
            .map(|m| {
                let (alpha, img) = cc.checked.canonical[m];
                cc.lookup[&(u.identity(u.dom(m)), alpha, img)]
            })
            .collect();
        let i_op_to_b = u
            .morphisms()
            .map(|m| f.i.contains(m).then(|| cc.id_of(cc.canonicalize(m, u.identity(u.dom(m)), u.identity(u.dom(m))))))
            .map(|o| o.flatten())
            .collect();
        cc.embeddings = Embeddings { u_to_b, i_op_to_b };
        Ok(cc)
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn u(&self) -> &FinCat {
        &self.factorization.u
    }

    pub fn b(&self) -> &FinCat {
        &self.b
    }

    pub fn indexing(&self) -> &IndexingCategory {
        &self.checked.indexing
    }

    pub fn i_sub(&self) -> &Subcat {
        &self.factorization.i
    }

    pub fn a_sub(&self) -> &Subcat {
        &self.factorization.a
    }

    /// `A` as a category in its own right; its morphism `k` is `U`-morphism `a_to_u()[k]`.
    pub fn a_cat(&self) -> &FinCat {
        &self.a_cat
    }

    pub fn a_to_u(&self) -> &[MorId] {
        &self.a_to_u
    }

    pub fn u_to_a(&self, m: MorId) -> Option<MorId> {
        self.u_to_a[m]
    }

    pub fn embeddings(&self) -> &Embeddings {
        &self.embeddings
    }

    pub fn provenance(&self) -> &[BMorphism] {
        &self.provenance
    }

    /// The canonical three-fold factorization of `β`.
    pub fn threefold_factorize(&self, beta: MorId) -> BMorphism {
        self.provenance[beta]
    }

    pub fn id_of(&self, t: BMorphism) -> Option<MorId> {
        self.lookup.get(&(t.cok, t.mid, t.img)).copied()
    }

    /// Regular means the canonical cokernel is an identity.
    pub fn is_regular(&self, beta: MorId) -> bool {
        let t = &self.provenance[beta];
        self.u().is_identity(t.cok)
    }

    /// `U`-morphism `m` as a morphism of `B`.
    pub fn embed_u(&self, m: MorId) -> MorId {
        self.embeddings.u_to_b[m]
    }

    /// The formal opposite `i*` of `i ∈ I`.
    pub fn embed_i_op(&self, i: MorId) -> MorId {
        self.embeddings.i_op_to_b[i].expect("embed_i_op: not a morphism of I")
    }

    /// A regular `B`-morphism as the `U`-morphism it represents.
    pub fn regular_to_u(&self, beta: MorId) -> Option<MorId> {
        let t = &self.provenance[beta];
        self.u().is_identity(t.cok).then(|| self.u().compose(t.img, t.mid))
    }

    /// The skeletal factorization `(α, j)` of `u = j ∘ α`.
    pub fn factor_u(&self, m: MorId) -> (MorId, MorId) {
        self.checked.canonical[m]
    }

    /// Brings an arbitrary triple `img ∘ mid ∘ cok*` to canonical form.
    pub fn canonicalize(&self, cok: MorId, mid: MorId, img: MorId) -> BMorphism {
        let u = self.u();
        let ix = &self.checked.indexing;
        let (p, phi) = ix.classify(cok);
        let (q, psi) = ix.classify(img);
        let cok_rep = ix.skeleton(u.cod(cok)).elements[p].map;
        let img_rep = ix.skeleton(u.cod(img)).elements[q].map;
        let phi_inv = ix.inverse(phi).expect("classification returns isomorphisms");
        BMorphism { src: u.cod(cok), dst: u.cod(img), cok: cok_rep, mid: u.compose_path(&[phi_inv, mid, psi]), img: img_rep }
    }

    fn compose_triples(&self, first: &BMorphism, second: &BMorphism) -> Option<MorId> {
        let t = self.compose_raw((first.cok, first.mid, first.img), (second.cok, second.mid, second.img), None);
        self.id_of(t)
    }

    /// Composes `(i, α, j)` then `(k, γ, l)` for arbitrary, not necessarily
    /// skeletal, triples: pullback of `j` and `k` in `I`, second-axiom
    /// pullback of `α` along the leg over `j`, then a factorization of `γ`
    /// after the leg over `k`. With `choose` given, it picks among all valid
    /// options at each of the three steps (it is passed the number of options);
    /// otherwise the precomputed choices are used. The result is canonicalized.
    pub fn compose_raw(
        &self,
        first: (MorId, MorId, MorId),
        second: (MorId, MorId, MorId),
        mut choose: Option<&mut Chooser<'_>>,
    ) -> BMorphism {
        let u = self.u();
        let (i, alpha, j) = first;
        let (k, gamma, l) = second;
        assert_eq!(u.cod(j), u.cod(k), "compose_raw: triples are not composable");
        let ix = &self.checked.indexing;

        // Middle diamond: q with k': q → dom j and j': q → dom k.
        let middle = match choose.as_mut() {
            None => ix.pullback(j, k),
            Some(c) => {
                let all = pullback_cones(u, self.i_sub(), j, k).expect("j and k form a cospan in I");
                all[c(all.len())]
            }
        };
        let (k1, j1) = (middle.left, middle.right);
        // Upper left: k'': p → dom α in I and α': p → q in A.
        let squares = &self.checked.squares[&(alpha, k1)];
        let sq: Square = squares[choose.as_mut().map_or(0, |c| c(squares.len()))];
        // Upper right: γ ∘ j' = j'' ∘ γ'.
        let gj = u.compose(gamma, j1);
        let (gamma1, j2) = match choose.as_mut() {
            None => self.checked.canonical[gj],
            Some(c) => {
                let all = &self.checked.factorizations[gj];
                all[c(all.len())]
            }
        };
        self.canonicalize(u.compose(i, sq.i_leg), u.compose(gamma1, sq.a_leg), u.compose(l, j2))
    }

    /// The equivalence of representing diagrams: `(i, α, j) ~ (k, γ, l)` iff
    /// some isomorphisms `φ`, `ψ` of `I` satisfy `k∘φ = i`, `l∘ψ = j` and
    /// `ψ∘α = γ∘φ`.
    pub fn equivalent(&self, first: (MorId, MorId, MorId), second: (MorId, MorId, MorId)) -> bool {
        let u = self.u();
        let ix = &self.checked.indexing;
        let (i, alpha, j) = first;
        let (k, gamma, l) = second;
        if u.cod(i) != u.cod(k) || u.cod(j) != u.cod(l) {
            return false;
        }
        let isos = |x, y| self.i_sub().hom(u, x, y).filter(|&m| ix.is_iso(m)).collect::<Vec<_>>();
        isos(u.dom(i), u.dom(k)).into_iter().any(|phi| {
            u.compose(k, phi) == i
                && isos(u.dom(j), u.dom(l))
                    .into_iter()
                    .any(|psi| u.compose(l, psi) == j && u.compose(psi, alpha) == u.compose(gamma, phi))
        })
    }
}
