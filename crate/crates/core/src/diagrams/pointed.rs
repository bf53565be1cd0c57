use thiserror::Error;

use crate::fincat::{FinCat, MorId, ObjId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    Covariant,
    Contravariant,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PointedError {
    #[error("table has the wrong size for the category")]
    WrongSize,
    #[error("morphism {f} sends element {element} outside its target")]
    OutOfRange { f: MorId, element: usize },
    #[error("morphism {f} moves the basepoint")]
    MovesBasepoint { f: MorId },
    #[error("identity of object {object} acts non-trivially")]
    Identity { object: ObjId },
    #[error("composable pair ({f}, {g}) is not preserved")]
    Composition { f: MorId, g: MorId },
    #[error("expected a {expected:?} functor")]
    WrongVariance { expected: Variance },
}

/// A functor into based finite sets. Element `0` of every set is the
/// basepoint and `1..=size(x)` are the others. `action[f][e]` is the image
/// of `e` under `f`, read from `dom f` for covariant functors and from
/// `cod f` for contravariant ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedFunctor {
    pub variance: Variance,
    pub sizes: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

impl PointedFunctor {
    /// `hom(−, a)₊`, elements in ascending id order.
    pub fn representable(c: &FinCat, a: ObjId) -> PointedFunctor {
        let sizes = c.objects().map(|x| c.hom(x, a).len()).collect();
        let index = |m: MorId| 1 + c.hom(c.dom(m), c.cod(m)).iter().position(|&h| h == m).unwrap();
        let action = c
            .morphisms()
            .map(|f| {
                let mut v = vec![0];
                v.extend(c.hom(c.cod(f), a).iter().map(|&h| index(c.compose(h, f))));
                v
            })
            .collect();
        PointedFunctor { variance: Variance::Contravariant, sizes, action }
    }

    /// `hom(a, −)₊`, elements in ascending id order.
    pub fn corepresentable(c: &FinCat, a: ObjId) -> PointedFunctor {
        let sizes = c.objects().map(|x| c.hom(a, x).len()).collect();
        let index = |m: MorId| 1 + c.hom(c.dom(m), c.cod(m)).iter().position(|&h| h == m).unwrap();
        let action = c
            .morphisms()
            .map(|f| {
                let mut v = vec![0];
                v.extend(c.hom(a, c.dom(f)).iter().map(|&h| index(c.compose(f, h))));
                v
            })
            .collect();
        PointedFunctor { variance: Variance::Covariant, sizes, action }
    }

    /// The functor constant at the one-point based set.
    pub fn basepoint(c: &FinCat, variance: Variance) -> PointedFunctor {
        PointedFunctor { variance, sizes: vec![0; c.object_count()], action: vec![vec![0]; c.morphism_count()] }
    }

    fn ends(&self, c: &FinCat, f: MorId) -> (ObjId, ObjId) {
        match self.variance {
            Variance::Covariant => (c.dom(f), c.cod(f)),
            Variance::Contravariant => (c.cod(f), c.dom(f)),
        }
    }

    /// The image of `e` under `f`.
    pub fn apply(&self, f: MorId, e: usize) -> usize {
        self.action[f][e]
    }

    pub fn validate(&self, c: &FinCat) -> Result<(), PointedError> {
        if self.sizes.len() != c.object_count() || self.action.len() != c.morphism_count() {
            return Err(PointedError::WrongSize);
        }
        for f in c.morphisms() {
            let (from, to) = self.ends(c, f);
            let row = &self.action[f];
            if row.len() != self.sizes[from] + 1 {
                return Err(PointedError::WrongSize);
            }
            if let Some(element) = row.iter().position(|&t| t > self.sizes[to]) {
                return Err(PointedError::OutOfRange { f, element });
            }
            if row[0] != 0 {
                return Err(PointedError::MovesBasepoint { f });
            }
        }
        for x in c.objects() {
            let id = &self.action[c.identity(x)];
            if id.iter().enumerate().any(|(e, &t)| e != t) {
                return Err(PointedError::Identity { object: x });
            }
        }
        for f in c.morphisms() {
            for y in c.objects() {
                for &g in c.hom(c.cod(f), y) {
                    let h = c.compose(g, f);
                    let (first, second) = match self.variance {
                        Variance::Covariant => (f, g),
                        Variance::Contravariant => (g, f),
                    };
                    let ok = (0..self.action[first].len())
                        .all(|e| self.action[h][e] == self.action[second][self.action[first][e]]);
                    if !ok {
                        return Err(PointedError::Composition { f, g });
                    }
                }
            }
        }
        Ok(())
    }
}
