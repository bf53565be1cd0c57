use super::ConjugateCategory;
use crate::fincat::{MorId, ObjId};

/// A non-basepoint element of a wedge `∨_{i ∈ sk(I↓b)} S_i`: the summand is
/// a position in the skeleton, `map` a `U`-morphism id in that summand.
/// The basepoint is represented by `None` wherever wedges appear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WedgePoint {
    pub summand: usize,
    pub map: MorId,
}

/// The regular bimodule `U(a, b)₊`. Element `0` of each based set is the
/// basepoint; element `k ≥ 1` is the `k`-th regular `B`-morphism `a → b`
/// in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularBimodule {
    objects: usize,
    sets: Vec<Vec<MorId>>,
    element: Vec<usize>,
}

impl RegularBimodule {
    pub fn new(cc: &ConjugateCategory) -> RegularBimodule {
        let b = cc.b();
        let n = b.object_count();
        let mut sets = vec![Vec::new(); n * n];
        let mut element = vec![0; b.morphism_count()];
        for beta in b.morphisms() {
            if cc.is_regular(beta) {
                let set = &mut sets[b.dom(beta) * n + b.cod(beta)];
                set.push(beta);
                element[beta] = set.len();
            }
        }
        RegularBimodule { objects: n, sets, element }
    }

    /// The regular morphisms `a → b`; element `k` is `set(a, b)[k - 1]`.
    pub fn set(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.sets[a * self.objects + b]
    }

    /// Number of non-basepoint elements of `U(a, b)₊`.
    pub fn cardinality(&self, a: ObjId, b: ObjId) -> usize {
        self.set(a, b).len()
    }

    /// The element a `B`-morphism represents: `0` when singular.
    pub fn element_of(&self, beta: MorId) -> usize {
        self.element[beta]
    }

    pub fn morphism(&self, a: ObjId, b: ObjId, e: usize) -> Option<MorId> {
        e.checked_sub(1).map(|k| self.set(a, b)[k])
    }

    /// `β ∘ −` for `β: b → c` on `U(a, b)₊`.
    pub fn left_action(&self, cc: &ConjugateCategory, beta: MorId, a: ObjId, e: usize) -> usize {
        let b = cc.b();
        match self.morphism(a, b.dom(beta), e) {
            None => 0,
            Some(g) => self.element_of(b.compose(beta, g)),
        }
    }

    /// `− ∘ α` for `α: a' → a` in `A`, given as a `U`-morphism, on `U(a, b)₊`.
    pub fn right_action(&self, cc: &ConjugateCategory, alpha: MorId, b_obj: ObjId, e: usize) -> usize {
        debug_assert!(cc.a_sub().contains(alpha));
        let a = cc.u().cod(alpha);
        match self.morphism(a, b_obj, e) {
            None => 0,
            Some(g) => self.element_of(cc.b().compose(g, cc.embed_u(alpha))),
        }
    }
}

impl ConjugateCategory {
    /// `U(a,b)₊ ≅ ∨_{i ∈ sk(I↓b)} A(a, dom i)₊`: a regular map goes to its
    /// `A`-part in the summand of its image. `None` for singular input.
    pub fn decompose_free(&self, gamma: MorId) -> Option<WedgePoint> {
        let t = self.provenance()[gamma];
        if !self.u().is_identity(t.cok) {
            return None;
        }
        let summand = self.indexing().skeleton(t.dst).position(t.img).expect("canonical image is skeletal");
        Some(WedgePoint { summand, map: t.mid })
    }

    /// Inverse of [`ConjugateCategory::decompose_free`] into `U(a, b)₊`.
    pub fn recompose_free(&self, b_obj: ObjId, p: WedgePoint) -> MorId {
        let u = self.u();
        let i = self.indexing().skeleton(b_obj).elements[p.summand].map;
        self.embed_u(u.compose(i, p.map))
    }

    /// `β_*` for `β: b → c` on the wedge over `sk(I↓b)`: the composite
    /// `β ∘ i ∘ α` if regular, decomposed; the basepoint otherwise.
    pub fn lower_star(&self, beta: MorId, p: Option<WedgePoint>) -> Option<WedgePoint> {
        let p = p?;
        let g = self.recompose_free(self.b().dom(beta), p);
        self.decompose_free(self.b().compose(beta, g))
    }

    /// `B(b,c)₊ ≅ ∨_{i ∈ sk(I↓b)} U(dom i, c)₊`: a morphism goes to its
    /// regular part `img ∘ mid` in the summand of its cokernel.
    pub fn decompose_gen(&self, beta: MorId) -> WedgePoint {
        let t = self.provenance()[beta];
        let summand = self.indexing().skeleton(t.src).position(t.cok).expect("canonical cokernel is skeletal");
        WedgePoint { summand, map: self.u().compose(t.img, t.mid) }
    }

    /// Inverse of [`ConjugateCategory::decompose_gen`]: `γ ∘ i*`.
    pub fn recompose_gen(&self, b_obj: ObjId, p: WedgePoint) -> MorId {
        let i = self.indexing().skeleton(b_obj).elements[p.summand].map;
        self.b().compose(self.embed_u(p.map), self.embed_i_op(i))
    }

    /// `β^*` for `β: a → b` with canonical form `j₁ ∘ β₁ ∘ i₁*`, on the
    /// summand of `i ∈ sk(I↓b)`: factor `i* ∘ j₁ ∘ β₁` as a regular `β₂`
    /// after a cokernel `i₂*`, and send `γ` to `γ ∘ β₂` in the summand of
    /// `i₁ ∘ i₂`, adjusted by the isomorphism bringing `i₁ ∘ i₂` to its
    /// skeletal representative.
    pub fn upper_star(&self, beta: MorId, p: WedgePoint) -> WedgePoint {
        let u = self.u();
        let b = self.b();
        let ix = self.indexing();
        let t = self.provenance()[beta];
        let i = ix.skeleton(t.dst).elements[p.summand].map;
        let tail = b.compose(self.embed_i_op(i), self.embed_u(u.compose(t.img, t.mid)));
        let t2 = self.provenance()[tail];
        let beta2 = u.compose(t2.img, t2.mid);
        let (summand, phi) = ix.classify(u.compose(t.cok, t2.cok));
        let phi_inv = ix.inverse(phi).expect("classification returns isomorphisms");
        WedgePoint { summand, map: u.compose_path(&[phi_inv, beta2, p.map]) }
    }
}

/// Exhaustive checks of both decompositions of the regular bimodule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    /// `(check, instances examined, first failure)`.
    pub lines: Vec<(&'static str, usize, Option<String>)>,
}

impl DecompositionReport {
    pub fn holds(&self) -> bool {
        self.lines.iter().all(|l| l.2.is_none())
    }
}

impl std::fmt::Display for DecompositionReport {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (check, n, failure) in &self.lines {
            match failure {
                None => writeln!(out, "PASS {check} examined={n}")?,
                Some(f) => writeln!(out, "FAIL {check} {f}")?,
            }
        }
        Ok(())
    }
}

struct Tally {
    name: &'static str,
    examined: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally { name, examined: 0, failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.examined += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn line(self) -> (&'static str, usize, Option<String>) {
        (self.name, self.examined, self.failure)
    }
}

/// Cardinalities, bijectivity and naturality of
/// `U(a,b)₊ ≅ ∨_{i ∈ sk(I↓b)} A(a, dom i)₊` (both variables) and of
/// `B(b,c)₊ ≅ ∨_{i ∈ sk(I↓b)} U(dom i, c)₊` (first variable), with
/// functoriality of `β_*` and `β^*`.
pub fn check_decompositions(cc: &ConjugateCategory) -> DecompositionReport {
    let m = RegularBimodule::new(cc);
    let u = cc.u();
    let b = cc.b();
    let ix = cc.indexing();
    let a_sub = cc.a_sub();
    let wedge = |p: Option<WedgePoint>| p.map_or("*".to_string(), |p| format!("({}, {})", p.summand, p.map));

    let mut card = Tally::new("free-cardinality");
    let mut bij = Tally::new("free-bijection");
    let mut nat_a = Tally::new("free-natural-A");
    let mut nat_b = Tally::new("free-natural-B");
    let mut star = Tally::new("lower-star-functorial");
    for x in u.objects() {
        for y in u.objects() {
            let sk = ix.skeleton(y);
            let total: usize = sk.elements.iter().map(|e| a_sub.hom(u, x, e.dom).count()).sum();
            card.check(m.cardinality(x, y) == total, || {
                format!("|U({x},{y})| = {} but the summands have {total}", m.cardinality(x, y))
            });
            for &g in m.set(x, y) {
                let p = cc.decompose_free(g);
                bij.check(p.is_some_and(|p| cc.recompose_free(y, p) == g), || format!("regular {g} does not round-trip"));
                let Some(p) = p else { continue };
                for alpha in a_sub.into_object(u, x) {
                    let moved = cc.decompose_free(b.compose(g, cc.embed_u(alpha)));
                    let expected = WedgePoint { summand: p.summand, map: u.compose(p.map, alpha) };
                    nat_a.check(moved == Some(expected), || format!("{g} ∘ {alpha} decomposes to {}", wedge(moved)));
                }
                for z in b.objects() {
                    for &beta in b.hom(y, z) {
                        let moved = b.compose(beta, g);
                        let expected = if cc.is_regular(moved) { cc.decompose_free(moved) } else { None };
                        nat_b.check(cc.lower_star(beta, Some(p)) == expected, || format!("{beta} after {g}"));
                        for w in b.objects() {
                            for &gamma in b.hom(z, w) {
                                let two = cc.lower_star(gamma, cc.lower_star(beta, Some(p)));
                                let one = cc.lower_star(b.compose(gamma, beta), Some(p));
                                star.check(one == two, || format!("({gamma} ∘ {beta})_* ≠ {gamma}_* {beta}_*"));
                            }
                        }
                    }
                }
            }
            for (s, e) in sk.elements.iter().enumerate() {
                for alpha in a_sub.hom(u, x, e.dom) {
                    let p = WedgePoint { summand: s, map: alpha };
                    let back = cc.decompose_free(cc.recompose_free(y, p));
                    bij.check(back == Some(p), || format!("wedge point {} does not round-trip", wedge(Some(p))));
                }
            }
        }
    }

    let mut gcard = Tally::new("gen-cardinality");
    let mut gbij = Tally::new("gen-bijection");
    let mut gnat = Tally::new("gen-natural-first");
    let mut gstar = Tally::new("upper-star-functorial");
    for x in b.objects() {
        for y in b.objects() {
            let sk = ix.skeleton(x);
            let total: usize = sk.elements.iter().map(|e| m.cardinality(e.dom, y)).sum();
            gcard.check(b.hom(x, y).len() == total, || {
                format!("|B({x},{y})| = {} but the summands have {total}", b.hom(x, y).len())
            });
            for &g in b.hom(x, y) {
                let p = cc.decompose_gen(g);
                gbij.check(cc.recompose_gen(x, p) == g, || format!("{g} does not round-trip"));
                for w in b.objects() {
                    for &beta in b.hom(w, x) {
                        let moved = cc.upper_star(beta, p);
                        gnat.check(moved == cc.decompose_gen(b.compose(g, beta)), || format!("{g} ∘ {beta}"));
                        for v in b.objects() {
                            for &delta in b.hom(v, w) {
                                let two = cc.upper_star(delta, moved);
                                let one = cc.upper_star(b.compose(beta, delta), p);
                                gstar.check(one == two, || format!("({beta} ∘ {delta})^* ≠ {delta}^* {beta}^*"));
                            }
                        }
                    }
                }
            }
            for (s, e) in sk.elements.iter().enumerate() {
                for &r in m.set(e.dom, y) {
                    let p = WedgePoint { summand: s, map: cc.regular_to_u(r).expect("regular") };
                    gbij.check(cc.decompose_gen(cc.recompose_gen(x, p)) == p, || {
                        format!("wedge point {} does not round-trip", wedge(Some(p)))
                    });
                }
            }
        }
    }
    let lines = [card, bij, nat_a, nat_b, star, gcard, gbij, gnat, gstar].into_iter().map(Tally::line).collect();
    DecompositionReport { lines }
}
