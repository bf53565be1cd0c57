use std::fmt;

use super::{FinCat, MorId, ObjId};

/// A wide subcategory, recorded as a membership mask over the parent's
/// morphism ids. The parent is passed explicitly wherever it is needed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subcat {
    members: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubcatViolation {
    WrongParentSize { expected: usize, found: usize },
    MissingIdentity { object: ObjId },
    NotClosed { f: MorId, g: MorId },
}

impl fmt::Display for SubcatViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubcatViolation::WrongParentSize { expected, found } => {
                write!(f, "mask covers {found} morphisms, parent has {expected}")
            }
            SubcatViolation::MissingIdentity { object } => write!(f, "identity of object {object} missing"),
            SubcatViolation::NotClosed { f: a, g } => write!(f, "composite of ({a}, {g}) escapes the subcategory"),
        }
    }
}

impl Subcat {
    pub fn from_ids(parent: &FinCat, ids: impl IntoIterator<Item = MorId>) -> Result<Subcat, MorId> {
        let mut members = vec![false; parent.morphism_count()];
        for id in ids {
            *members.get_mut(id).ok_or(id)? = true;
        }
        Ok(Subcat { members })
    }

    pub fn from_predicate(parent: &FinCat, mut keep: impl FnMut(MorId) -> bool) -> Subcat {
        Subcat { members: parent.morphisms().map(&mut keep).collect() }
    }

    pub fn full(parent: &FinCat) -> Subcat {
        Subcat { members: vec![true; parent.morphism_count()] }
    }

    /// The discrete subcategory: identities only.
    pub fn identities(parent: &FinCat) -> Subcat {
        Subcat::from_predicate(parent, |f| parent.is_identity(f))
    }

    /// Morphisms of `within` whose inverse also lies in `within`.
    pub fn isomorphisms(parent: &FinCat, within: &Subcat) -> Subcat {
        Subcat::from_predicate(parent, |f| within.contains(f) && parent.inverse_of(f, Some(within)).is_some())
    }

    pub fn contains(&self, f: MorId) -> bool {
        self.members.get(f).copied().unwrap_or(false)
    }

    pub fn iter(&self) -> impl Iterator<Item = MorId> + '_ {
        self.members.iter().enumerate().filter(|(_, &m)| m).map(|(f, _)| f)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Members `x → y`, ascending.
    pub fn hom<'a>(&'a self, parent: &'a FinCat, x: ObjId, y: ObjId) -> impl Iterator<Item = MorId> + 'a {
        parent.hom(x, y).iter().copied().filter(move |&f| self.contains(f))
    }

    /// Members with codomain `a`, ascending.
    pub fn into_object<'a>(&'a self, parent: &'a FinCat, a: ObjId) -> impl Iterator<Item = MorId> + 'a {
        self.iter().filter(move |&f| parent.cod(f) == a)
    }

    /// Members with domain `a`, ascending.
    pub fn out_of<'a>(&'a self, parent: &'a FinCat, a: ObjId) -> impl Iterator<Item = MorId> + 'a {
        self.iter().filter(move |&f| parent.dom(f) == a)
    }

    pub fn is_subset_of(&self, other: &Subcat) -> bool {
        self.iter().all(|f| other.contains(f))
    }

    /// Checks that identities are present and composition stays inside.
    pub fn validate(&self, parent: &FinCat) -> Vec<SubcatViolation> {
        if self.members.len() != parent.morphism_count() {
            return vec![SubcatViolation::WrongParentSize {
                expected: parent.morphism_count(),
                found: self.members.len(),
            }];
        }
        let mut out = Vec::new();
        for object in parent.objects() {
            if !self.contains(parent.identity(object)) {
                out.push(SubcatViolation::MissingIdentity { object });
            }
        }
        for f in self.iter() {
            for g in self.out_of(parent, parent.cod(f)) {
                if parent.then(f, g).is_some_and(|h| !self.contains(h)) {
                    out.push(SubcatViolation::NotClosed { f, g });
                }
            }
        }
        out
    }
}
