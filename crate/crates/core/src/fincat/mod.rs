//! Finite categories given by full composition tables.
//!
//! Objects are `0..n`. Morphisms are dense ids `0..m`. The composition table
//! is stored in diagrammatic order: `then(f, g)` is `g ∘ f` and is defined
//! exactly when `cod(f) = dom(g)`.

mod indexing;
mod subcat;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

pub use indexing::{
    all_pullbacks, cones, is_indexing_category, linear_extension, pullback, pullback_cones, skeleton, CommaObject, Cone,
    IndexingCategory, IndexingFailure, IndexingReport, PosetOnSkeleton,
};
pub use subcat::{Subcat, SubcatViolation};

pub type ObjId = usize;
pub type MorId = usize;

/// Structural problems that prevent a table from being read as a category at all.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("morphism ids must be exactly 0..{count}; missing id {missing}")]
    NonDenseIds { count: usize, missing: MorId },
    #[error("morphism {0} declared twice")]
    DuplicateMorphism(MorId),
    #[error("morphism {mor} refers to object {obj}, but there are only {objects} objects")]
    DanglingObject { mor: MorId, obj: ObjId, objects: usize },
    #[error("reference to undeclared morphism {0}")]
    DanglingMorphism(MorId),
    #[error("object {0} has no identity declared")]
    MissingIdentity(ObjId),
    #[error("object {0} has more than one identity declared")]
    DuplicateIdentity(ObjId),
    #[error("identity declared for object {obj}, but there are only {objects} objects")]
    IdentityOutOfRange { obj: ObjId, objects: usize },
    #[error("composite of ({f}, {g}) given twice")]
    DuplicateComposite { f: MorId, g: MorId },
}

/// A violated category axiom, found by [`FinCat::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    /// The declared identity of `object` is not an endomorphism of it.
    IdentityNotEndo { object: ObjId, id: MorId },
    /// `f` then `g` is composable but has no entry.
    MissingComposite { f: MorId, g: MorId },
    /// An entry exists for a pair that is not composable.
    SpuriousComposite { f: MorId, g: MorId },
    /// `g ∘ f` was recorded as `h`, whose endpoints are wrong.
    WrongEndpoints { f: MorId, g: MorId, h: MorId },
    /// `id ∘ f ≠ f`.
    LeftIdentity { f: MorId },
    /// `f ∘ id ≠ f`.
    RightIdentity { f: MorId },
    /// `h ∘ (g ∘ f) ≠ (h ∘ g) ∘ f`.
    Associativity { f: MorId, g: MorId, h: MorId },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdentityNotEndo { object, id } => {
                write!(out, "identity: {id} declared for object {object} is not an endomorphism of it")
            }
            Violation::MissingComposite { f, g } => write!(out, "closure: composable pair ({f}, {g}) has no composite"),
            Violation::SpuriousComposite { f, g } => {
                write!(out, "closure: composite given for non-composable pair ({f}, {g})")
            }
            Violation::WrongEndpoints { f, g, h } => {
                write!(out, "closure: composite of ({f}, {g}) is {h} with the wrong endpoints")
            }
            Violation::LeftIdentity { f } => write!(out, "identity: id ∘ {f} ≠ {f}"),
            Violation::RightIdentity { f } => write!(out, "identity: {f} ∘ id ≠ {f}"),
            Violation::Associativity { f, g, h } => write!(out, "associativity: triple ({f}, {g}, {h})"),
        }
    }
}

/// A finite category.
#[derive(Debug)]
pub struct FinCat {
    name: String,
    objects: usize,
    ends: Vec<(ObjId, ObjId)>,
    identities: Vec<MorId>,
    comp: Vec<Option<MorId>>,
    hom: Vec<Vec<MorId>>,
    generators: OnceLock<Vec<MorId>>,
}

impl Clone for FinCat {
    fn clone(&self) -> FinCat {
        FinCat {
            name: self.name.clone(),
            objects: self.objects,
            ends: self.ends.clone(),
            identities: self.identities.clone(),
            comp: self.comp.clone(),
            hom: self.hom.clone(),
            generators: OnceLock::new(),
        }
    }
}

impl PartialEq for FinCat {
    fn eq(&self, other: &FinCat) -> bool {
        self.name == other.name
            && self.objects == other.objects
            && self.ends == other.ends
            && self.identities == other.identities
            && self.comp == other.comp
    }
}

impl Eq for FinCat {}

/// Unchecked input for [`FinCat::from_raw`], in the shape of the text format.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub name: String,
    pub objects: usize,
    /// `(id, dom, cod)`.
    pub morphisms: Vec<(MorId, ObjId, ObjId)>,
    /// `(object, id)`.
    pub identities: Vec<(ObjId, MorId)>,
    /// `(f, g, h)` meaning `h = g ∘ f`.
    pub compositions: Vec<(MorId, MorId, MorId)>,
}

impl FinCat {
    /// Reads a table without checking the category axioms. Only structural
    /// problems (dangling or duplicate ids) are errors; axiom failures are
    /// reported by [`FinCat::validate`].
    pub fn from_raw(raw: &RawCategory) -> Result<FinCat, CategoryError> {
        let m = raw.morphisms.len();
        let mut ends = vec![None; m];
        for &(id, dom, cod) in &raw.morphisms {
            if id >= m {
                let missing = (0..m).find(|k| ends[*k].is_none()).unwrap_or(m);
                return Err(CategoryError::NonDenseIds { count: m, missing });
            }
            if ends[id].is_some() {
                return Err(CategoryError::DuplicateMorphism(id));
            }
            for obj in [dom, cod] {
                if obj >= raw.objects {
                    return Err(CategoryError::DanglingObject { mor: id, obj, objects: raw.objects });
                }
            }
            ends[id] = Some((dom, cod));
        }
        let ends: Vec<(ObjId, ObjId)> = ends.into_iter().map(|e| e.expect("all ids seen")).collect();
        let mut identities = vec![None; raw.objects];
        for &(obj, id) in &raw.identities {
            if obj >= raw.objects {
                return Err(CategoryError::IdentityOutOfRange { obj, objects: raw.objects });
            }
            if id >= m {
                return Err(CategoryError::DanglingMorphism(id));
            }
            if identities[obj].is_some() {
                return Err(CategoryError::DuplicateIdentity(obj));
            }
            identities[obj] = Some(id);
        }
        let identities = identities
            .into_iter()
            .enumerate()
            .map(|(obj, id)| id.ok_or(CategoryError::MissingIdentity(obj)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut comp = vec![None; m * m];
        for &(f, g, h) in &raw.compositions {
            for id in [f, g, h] {
                if id >= m {
                    return Err(CategoryError::DanglingMorphism(id));
                }
            }
            if comp[f * m + g].is_some() {
                return Err(CategoryError::DuplicateComposite { f, g });
            }
            comp[f * m + g] = Some(h);
        }
        Ok(FinCat::assemble(raw.name.clone(), raw.objects, ends, identities, comp))
    }

    fn assemble(
        name: String,
        objects: usize,
        ends: Vec<(ObjId, ObjId)>,
        identities: Vec<MorId>,
        comp: Vec<Option<MorId>>,
    ) -> FinCat {
        let mut hom = vec![Vec::new(); objects * objects];
        for (id, &(d, c)) in ends.iter().enumerate() {
            hom[d * objects + c].push(id);
        }
        FinCat { name, objects, ends, identities, comp, hom, generators: OnceLock::new() }
    }

    /// Builds a category from a composition rule. `compose(f, g)` is asked for
    /// `g ∘ f` on every composable pair; it returning `None` is reported as a
    /// missing composite by [`FinCat::validate`].
    pub fn from_rule(
        name: impl Into<String>,
        objects: usize,
        ends: Vec<(ObjId, ObjId)>,
        identities: Vec<MorId>,
        mut compose: impl FnMut(MorId, MorId) -> Option<MorId>,
    ) -> FinCat {
        let m = ends.len();
        let mut comp = vec![None; m * m];
        for f in 0..m {
            for g in 0..m {
                if ends[f].1 == ends[g].0 {
                    comp[f * m + g] = compose(f, g);
                }
            }
        }
        FinCat::assemble(name.into(), objects, ends, identities, comp)
    }

    /// The same category with every table entry visible, for serialization.
    pub fn to_raw(&self) -> RawCategory {
        let m = self.morphism_count();
        RawCategory {
            name: self.name.clone(),
            objects: self.objects,
            morphisms: self.ends.iter().enumerate().map(|(id, &(d, c))| (id, d, c)).collect(),
            identities: self.identities.iter().copied().enumerate().collect(),
            compositions: (0..m * m).filter_map(|k| self.comp[k].map(|h| (k / m, k % m, h))).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> FinCat {
        self.name = name.into();
        self
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.objects
    }

    pub fn morphism_count(&self) -> usize {
        self.ends.len()
    }

    pub fn morphisms(&self) -> std::ops::Range<MorId> {
        0..self.ends.len()
    }

    pub fn dom(&self, f: MorId) -> ObjId {
        self.ends[f].0
    }

    pub fn cod(&self, f: MorId) -> ObjId {
        self.ends[f].1
    }

    pub fn identity(&self, obj: ObjId) -> MorId {
        self.identities[obj]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.dom(f)] == f
    }

    /// Morphisms `x → y`, ascending.
    pub fn hom(&self, x: ObjId, y: ObjId) -> &[MorId] {
        &self.hom[x * self.objects + y]
    }

    /// `g ∘ f` when `cod(f) = dom(g)`.
    pub fn then(&self, f: MorId, g: MorId) -> Option<MorId> {
        self.comp[f * self.ends.len() + g]
    }

    /// `g ∘ f`. Panics if the pair is not composable; meant for validated categories.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.then(f, g).unwrap_or_else(|| panic!("{}: {g} ∘ {f} is not defined", self.name))
    }

    /// Composes a path given in application order: `path[0]` first.
    pub fn compose_path(&self, path: &[MorId]) -> MorId {
        let (&first, rest) = path.split_first().expect("empty path");
        rest.iter().fold(first, |acc, &g| self.compose(g, acc))
    }

    /// Lists every violated axiom. Empty means this is a category.
    pub fn validate(&self) -> Vec<Violation> {
        let m = self.morphism_count();
        let mut out = Vec::new();
        for (object, &id) in self.identities.iter().enumerate() {
            if self.ends[id] != (object, object) {
                out.push(Violation::IdentityNotEndo { object, id });
            }
        }
        let mut closed = true;
        for f in 0..m {
            for g in 0..m {
                let composable = self.cod(f) == self.dom(g);
                match (composable, self.then(f, g)) {
                    (true, None) => {
                        closed = false;
                        out.push(Violation::MissingComposite { f, g });
                    }
                    (false, Some(_)) => {
                        closed = false;
                        out.push(Violation::SpuriousComposite { f, g });
                    }
                    (true, Some(h)) if self.ends[h] != (self.dom(f), self.cod(g)) => {
                        closed = false;
                        out.push(Violation::WrongEndpoints { f, g, h });
                    }
                    _ => {}
                }
            }
        }
        for f in 0..m {
            let (d, c) = self.ends[f];
            if self.then(f, self.identities[c]).is_some_and(|h| h != f) {
                out.push(Violation::LeftIdentity { f });
            }
            if self.then(self.identities[d], f).is_some_and(|h| h != f) {
                out.push(Violation::RightIdentity { f });
            }
        }
        if !closed {
            // Associativity is only meaningful on a closed table.
            return out;
        }
        for f in 0..m {
            for b in self.objects() {
                for &g in self.hom(self.cod(f), b) {
                    let gf = self.then(f, g).expect("closed");
                    for c in self.objects() {
                        for &h in self.hom(b, c) {
                            let left = self.then(gf, h);
                            let right = self.then(g, h).and_then(|hg| self.then(f, hg));
                            if left != right {
                                out.push(Violation::Associativity { f, g, h });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Whether `f` has a two-sided inverse, optionally within a subcategory.
    pub fn inverse_of(&self, f: MorId, within: Option<&Subcat>) -> Option<MorId> {
        let (d, c) = self.ends[f];
        self.hom(c, d).iter().copied().find(|&g| {
            within.is_none_or(|s| s.contains(g))
                && self.then(f, g) == Some(self.identities[d])
                && self.then(g, f) == Some(self.identities[c])
        })
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse_of(f, None).is_some()
    }

    /// A generating set for composition: every morphism is an identity or a
    /// composite of these. Chosen greedily, preferring morphisms that are not
    /// composites of two non-identities, then ascending id. Relations imposed
    /// along generators imply the relations along every morphism, which is
    /// what the (co)end computations rely on.
    pub fn generators(&self) -> &[MorId] {
        self.generators.get_or_init(|| self.compute_generators())
    }

    fn compute_generators(&self) -> Vec<MorId> {
        let m = self.morphism_count();
        let mut decomposable = vec![false; m];
        for f in 0..m {
            if self.is_identity(f) {
                continue;
            }
            for g in self.objects().flat_map(|o| self.hom(self.cod(f), o).iter().copied()) {
                if self.is_identity(g) {
                    continue;
                }
                if let Some(h) = self.then(f, g) {
                    decomposable[h] = true;
                }
            }
        }
        let mut order: Vec<MorId> = (0..m).filter(|&f| !self.is_identity(f)).collect();
        order.sort_by_key(|&f| (decomposable[f], f));

        let mut reached: HashSet<MorId> = self.identities.iter().copied().collect();
        let mut gens = Vec::new();
        for f in order {
            if reached.contains(&f) {
                continue;
            }
            gens.push(f);
            // Close `reached` under composition with the new generator set.
            let mut frontier = vec![f];
            reached.insert(f);
            while let Some(x) = frontier.pop() {
                let known: Vec<MorId> = reached.iter().copied().collect();
                for y in known {
                    for z in [self.then(x, y), self.then(y, x)].into_iter().flatten() {
                        if reached.insert(z) {
                            frontier.push(z);
                        }
                    }
                }
            }
        }
        gens
    }

    /// The wide subcategory on `sub` as a category in its own right, with the
    /// map from new ids to old ids. `sub` must be a valid subcategory.
    pub fn restrict(&self, sub: &Subcat, name: impl Into<String>) -> (FinCat, Vec<MorId>) {
        let old: Vec<MorId> = sub.iter().collect();
        let new_of: HashMap<MorId, MorId> = old.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let ends = old.iter().map(|&o| self.ends[o]).collect();
        let identities = self.identities.iter().map(|i| new_of[i]).collect();
        let cat = FinCat::from_rule(name, self.objects, ends, identities, |f, g| {
            self.then(old[f], old[g]).and_then(|h| new_of.get(&h).copied())
        });
        (cat, old)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Objects {0,1}; id0=0, id1=1, i=2: 0→1, i*=3: 1→0, e=4: 1→1.
    fn idempotent_b5() -> RawCategory {
        let mut raw = RawCategory {
            name: "B5".into(),
            objects: 2,
            morphisms: vec![(0, 0, 0), (1, 1, 1), (2, 0, 1), (3, 1, 0), (4, 1, 1)],
            identities: vec![(0, 0), (1, 1)],
            compositions: vec![],
        };
        let table = [
            // (f, g, g∘f)
            (2, 3, 0), // i* ∘ i = id0
            (3, 2, 4), // i ∘ i* = e
            (4, 4, 4), // e ∘ e = e
            (2, 4, 2), // e ∘ i = i
            (4, 3, 3), // i* ∘ e = i*
        ];
        raw.compositions.extend(table);
        for f in 0..5 {
            let (d, c) = (raw.morphisms[f].1, raw.morphisms[f].2);
            raw.compositions.push((d, f, f));
            raw.compositions.push((f, c, f));
        }
        raw.compositions.sort();
        raw.compositions.dedup();
        raw
    }

    #[test]
    fn b5_is_a_category() {
        let cat = FinCat::from_raw(&idempotent_b5()).unwrap();
        assert_eq!(cat.validate(), vec![]);
        assert_eq!(cat.compose(2, 3), 4);
    }

    #[test]
    fn terminal_category_is_valid() {
        let cat = FinCat::from_rule("1", 1, vec![(0, 0)], vec![0], |_, _| Some(0));
        assert!(cat.validate().is_empty());
    }

    #[test]
    fn rebinding_the_idempotent_breaks_associativity_only() {
        let mut raw = idempotent_b5();
        for entry in raw.compositions.iter_mut() {
            if (entry.0, entry.1) == (3, 2) {
                entry.2 = 1; // i ∘ i* := id1
            }
        }
        let cat = FinCat::from_raw(&raw).unwrap();
        let v = cat.validate();
        // e ∘ (i ∘ i*) = e but (e ∘ i) ∘ i* = id1, and i ∘ (i* ∘ e) = id1 but (i ∘ i*) ∘ e = e.
        assert_eq!(
            v,
            vec![Violation::Associativity { f: 3, g: 2, h: 4 }, Violation::Associativity { f: 4, g: 3, h: 2 }]
        );
    }

    #[test]
    fn wrong_endpoints_are_closure_failures() {
        let mut raw = idempotent_b5();
        for entry in raw.compositions.iter_mut() {
            if (entry.0, entry.1) == (2, 3) {
                entry.2 = 1; // i* ∘ i := id1, but i* ∘ i : 0 → 0
            }
        }
        let cat = FinCat::from_raw(&raw).unwrap();
        assert_eq!(cat.validate(), vec![Violation::WrongEndpoints { f: 2, g: 3, h: 1 }]);
    }

    #[test]
    fn structural_errors_are_distinct() {
        let mut raw = idempotent_b5();
        raw.compositions.push((2, 3, 9));
        assert_eq!(FinCat::from_raw(&raw), Err(CategoryError::DanglingMorphism(9)));
        let mut raw = idempotent_b5();
        raw.morphisms[4] = (7, 1, 1);
        assert!(matches!(FinCat::from_raw(&raw), Err(CategoryError::NonDenseIds { .. })));
        let mut raw = idempotent_b5();
        raw.identities.pop();
        assert_eq!(FinCat::from_raw(&raw), Err(CategoryError::MissingIdentity(1)));
    }

    #[test]
    fn missing_composite_is_reported() {
        let mut raw = idempotent_b5();
        raw.compositions.retain(|&(f, g, _)| (f, g) != (4, 4));
        let cat = FinCat::from_raw(&raw).unwrap();
        assert_eq!(cat.validate(), vec![Violation::MissingComposite { f: 4, g: 4 }]);
    }

    #[test]
    fn generators_generate() {
        let cat = FinCat::from_raw(&idempotent_b5()).unwrap();
        let gens = cat.generators();
        assert_eq!(gens, &[2, 3]);
    }

    #[test]
    fn raw_round_trip() {
        let cat = FinCat::from_raw(&idempotent_b5()).unwrap();
        assert_eq!(FinCat::from_raw(&cat.to_raw()).unwrap(), cat);
    }
}
