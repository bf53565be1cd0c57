use std::collections::BTreeMap;
use std::fmt;

use super::{FinCat, MorId, ObjId, Subcat, SubcatViolation};

/// A commutative square over a cospan `f: x → a`, `g: y → a`:
/// `left: apex → x`, `right: apex → y` with `f ∘ left = g ∘ right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    pub apex: ObjId,
    pub left: MorId,
    pub right: MorId,
}

/// Why a subcategory fails to be an indexing category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexingFailure {
    NotSubcategory(SubcatViolation),
    /// A morphism of the cospan is not in the subcategory, or the codomains differ.
    NotCospan { f: MorId, g: MorId },
    EndoNotIso { f: MorId },
    NoPullback { f: MorId, g: MorId },
    NotMonic { g: MorId, f1: MorId, f2: MorId },
}

impl fmt::Display for IndexingFailure {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexingFailure::NotSubcategory(v) => write!(out, "not a subcategory: {v}"),
            IndexingFailure::NotCospan { f, g } => write!(out, "({f}, {g}) is not a cospan in the subcategory"),
            IndexingFailure::EndoNotIso { f } => write!(out, "endomorphism {f} is not an isomorphism"),
            IndexingFailure::NoPullback { f, g } => write!(out, "cospan ({f}, {g}) has no pullback"),
            IndexingFailure::NotMonic { g, f1, f2 } => write!(out, "{g} is not monic: {g} ∘ {f1} = {g} ∘ {f2}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexingReport {
    pub failure: Option<IndexingFailure>,
}

impl IndexingReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// An object of the comma category `I ↓ a`: the morphism `map: dom → a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CommaObject {
    pub map: MorId,
    pub dom: ObjId,
}

/// The skeleton of `I ↓ target` with its partial order. `witness[i][j]` is the
/// least `k` in `I` with `elements[j].map ∘ k = elements[i].map`, when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetOnSkeleton {
    pub target: ObjId,
    pub elements: Vec<CommaObject>,
    witness: Vec<Vec<Option<MorId>>>,
}

impl PosetOnSkeleton {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.witness[i][j].is_some()
    }

    pub fn witness(&self, i: usize, j: usize) -> Option<MorId> {
        self.witness[i][j]
    }

    /// Position of a representative, if `map` is one.
    pub fn position(&self, map: MorId) -> Option<usize> {
        self.elements.iter().position(|e| e.map == map)
    }

    pub fn maps(&self) -> impl Iterator<Item = MorId> + '_ {
        self.elements.iter().map(|e| e.map)
    }
}

fn check_cospan(cat: &FinCat, sub: &Subcat, f: MorId, g: MorId) -> Result<(), IndexingFailure> {
    if sub.contains(f) && sub.contains(g) && cat.cod(f) == cat.cod(g) {
        Ok(())
    } else {
        Err(IndexingFailure::NotCospan { f, g })
    }
}

/// All cones over the cospan `(f, g)` with legs in `sub`, ascending by `(left, right)`.
pub fn cones(cat: &FinCat, sub: &Subcat, f: MorId, g: MorId) -> Result<Vec<Cone>, IndexingFailure> {
    check_cospan(cat, sub, f, g)?;
    let (x, y) = (cat.dom(f), cat.dom(g));
    let mut out = Vec::new();
    for apex in cat.objects() {
        for left in sub.hom(cat, apex, x) {
            let target = cat.compose(f, left);
            for right in sub.hom(cat, apex, y) {
                if cat.compose(g, right) == target {
                    out.push(Cone { apex, left, right });
                }
            }
        }
    }
    out.sort_by_key(|c| (c.left, c.right));
    Ok(out)
}

fn is_universal(cat: &FinCat, sub: &Subcat, p: &Cone, all: &[Cone]) -> bool {
    all.iter().all(|c| {
        sub.hom(cat, c.apex, p.apex)
            .filter(|&u| cat.compose(p.left, u) == c.left && cat.compose(p.right, u) == c.right)
            .take(2)
            .count()
            == 1
    })
}

/// The pullback of `f` and `g` inside `sub`, checked against every cone.
/// Among valid pullbacks the one with least `(left, right)` is returned.
pub fn pullback(cat: &FinCat, sub: &Subcat, f: MorId, g: MorId) -> Result<Option<Cone>, IndexingFailure> {
    let all = cones(cat, sub, f, g)?;
    Ok(all.iter().find(|p| is_universal(cat, sub, p, &all)).copied())
}

/// Every pullback of `f` and `g` inside `sub`, ascending by `(left, right)`.
pub fn pullback_cones(cat: &FinCat, sub: &Subcat, f: MorId, g: MorId) -> Result<Vec<Cone>, IndexingFailure> {
    let all = cones(cat, sub, f, g)?;
    Ok(all.iter().filter(|p| is_universal(cat, sub, p, &all)).copied().collect())
}

/// Pullbacks of every cospan in `sub`, keyed by `(f, g)`.
pub fn all_pullbacks(cat: &FinCat, sub: &Subcat) -> Result<BTreeMap<(MorId, MorId), Cone>, IndexingFailure> {
    let mut out = BTreeMap::new();
    for f in sub.iter() {
        for g in sub.into_object(cat, cat.cod(f)) {
            if let Some(&Cone { apex, left, right }) = out.get(&(g, f)) {
                out.insert((f, g), Cone { apex, left: right, right: left });
                continue;
            }
            match pullback(cat, sub, f, g)? {
                Some(p) => {
                    out.insert((f, g), p);
                }
                None => return Err(IndexingFailure::NoPullback { f, g }),
            }
        }
    }
    Ok(out)
}

fn first_non_monic(cat: &FinCat, sub: &Subcat) -> Option<IndexingFailure> {
    for g in sub.iter() {
        for x in cat.objects() {
            let homs: Vec<MorId> = sub.hom(cat, x, cat.dom(g)).collect();
            let mut seen: BTreeMap<MorId, MorId> = BTreeMap::new();
            for f in homs {
                if let Some(&f1) = seen.get(&cat.compose(g, f)) {
                    return Some(IndexingFailure::NotMonic { g, f1, f2: f });
                }
                seen.insert(cat.compose(g, f), f);
            }
        }
    }
    None
}

/// Checks, in order: subcategory axioms, every endomorphism invertible,
/// every cospan has a pullback, every morphism monic. The report names the
/// first failure found in ascending id order.
pub fn is_indexing_category(cat: &FinCat, sub: &Subcat) -> IndexingReport {
    let failure = (|| {
        if let Some(v) = sub.validate(cat).into_iter().next() {
            return Some(IndexingFailure::NotSubcategory(v));
        }
        if let Some(f) = sub.iter().find(|&f| cat.dom(f) == cat.cod(f) && cat.inverse_of(f, Some(sub)).is_none()) {
            return Some(IndexingFailure::EndoNotIso { f });
        }
        if let Err(e) = all_pullbacks(cat, sub) {
            return Some(e);
        }
        first_non_monic(cat, sub)
    })();
    IndexingReport { failure }
}

/// `sk(sub ↓ a)`. Two maps into `a` are identified when they differ by an
/// isomorphism of `sub` over `a`. Each class is represented by the identity
/// of `a` if it contains it, and otherwise by its least id.
pub fn skeleton(cat: &FinCat, sub: &Subcat, a: ObjId) -> PosetOnSkeleton {
    let mut elements: Vec<CommaObject> = Vec::new();
    let into: Vec<MorId> = sub.into_object(cat, a).collect();
    let id_a = cat.identity(a);
    let order = std::iter::once(id_a).chain(into.iter().copied().filter(|&m| m != id_a));
    for m in order {
        let known = elements.iter().any(|e| {
            sub.hom(cat, cat.dom(m), e.dom)
                .any(|k| cat.compose(e.map, k) == m && cat.inverse_of(k, Some(sub)).is_some())
        });
        if !known {
            elements.push(CommaObject { map: m, dom: cat.dom(m) });
        }
    }
    // Keep the identity's class first in the search above but list by id.
    elements.sort_by_key(|e| e.map);
    let witness = elements
        .iter()
        .map(|ei| {
            elements
                .iter()
                .map(|ej| sub.hom(cat, ei.dom, ej.dom).find(|&k| cat.compose(ej.map, k) == ei.map))
                .collect()
        })
        .collect();
    PosetOnSkeleton { target: a, elements, witness }
}

/// A linear order refining the poset: repeatedly takes the minimal remaining
/// element with the least map id. Returns element positions.
pub fn linear_extension(p: &PosetOnSkeleton) -> Vec<usize> {
    let n = p.len();
    let mut taken = vec![false; n];
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let next = (0..n)
            .filter(|&i| !taken[i])
            .filter(|&i| (0..n).all(|j| j == i || taken[j] || !p.leq(j, i)))
            .min_by_key(|&i| p.elements[i].map)
            .expect("a finite poset has a minimal element");
        taken[next] = true;
        out.push(next);
    }
    out
}

/// An indexing category with its pullbacks, skeleta and the classification
/// of each of its morphisms against the skeleta, all precomputed.
#[derive(Debug, Clone)]
pub struct IndexingCategory {
    sub: Subcat,
    pullbacks: BTreeMap<(MorId, MorId), Cone>,
    skeleta: Vec<PosetOnSkeleton>,
    inverses: Vec<Option<MorId>>,
    classes: Vec<Option<(usize, MorId)>>,
}

impl IndexingCategory {
    pub fn new(cat: &FinCat, sub: &Subcat) -> Result<IndexingCategory, IndexingFailure> {
        if let Some(f) = is_indexing_category(cat, sub).failure {
            return Err(f);
        }
        let pullbacks = all_pullbacks(cat, sub)?;
        let skeleta: Vec<PosetOnSkeleton> = cat.objects().map(|a| skeleton(cat, sub, a)).collect();
        let inverses = cat.morphisms().map(|f| if sub.contains(f) { cat.inverse_of(f, Some(sub)) } else { None }).collect();
        let mut classes = vec![None; cat.morphism_count()];
        for m in sub.iter() {
            let sk = &skeleta[cat.cod(m)];
            classes[m] = sk.elements.iter().enumerate().find_map(|(pos, e)| {
                sub.hom(cat, cat.dom(m), e.dom)
                    .find(|&k| cat.compose(e.map, k) == m && cat.inverse_of(k, Some(sub)).is_some())
                    .map(|k| (pos, k))
            });
        }
        Ok(IndexingCategory { sub: sub.clone(), pullbacks, skeleta, inverses, classes })
    }

    pub fn subcat(&self) -> &Subcat {
        &self.sub
    }

    pub fn contains(&self, f: MorId) -> bool {
        self.sub.contains(f)
    }

    pub fn pullback(&self, f: MorId, g: MorId) -> Cone {
        self.pullbacks[&(f, g)]
    }

    pub fn skeleton(&self, a: ObjId) -> &PosetOnSkeleton {
        &self.skeleta[a]
    }

    pub fn skeleta(&self) -> &[PosetOnSkeleton] {
        &self.skeleta
    }

    /// The inverse of `f` inside the subcategory.
    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        self.inverses[f]
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverses[f].is_some()
    }

    /// For `m` in the subcategory, its skeleton position in `sk(↓ cod m)` and
    /// the isomorphism `φ` with `rep ∘ φ = m`.
    pub fn classify(&self, m: MorId) -> (usize, MorId) {
        self.classes[m].expect("classify: morphism outside the indexing subcategory")
    }

    /// The skeletal representative of `m`'s class.
    pub fn representative(&self, cat: &FinCat, m: MorId) -> MorId {
        self.skeleta[cat.cod(m)].elements[self.classify(m).0].map
    }
}
