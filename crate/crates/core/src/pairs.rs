//! Ready-made factorizations: finite truncations of the standard conjugate pairs.

use std::collections::HashMap;

use thiserror::Error;

use crate::conjugation::Factorization;
use crate::fincat::{FinCat, MorId, ObjId, Subcat};

/// Largest truncation the generators accept.
pub const MAX_N: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("n = {0} is out of range (0..={MAX_N})")]
    OutOfRange(usize),
    #[error("poset relation {0:?} does not parse; expected items like `a<b` separated by commas")]
    BadRelation(String),
    #[error("poset relation has a cycle through {0}")]
    Cycle(String),
    #[error("{0} and {1} have a common upper bound but no greatest lower bound")]
    NoMeet(String, String),
}

/// Maps between the based sets `{0, 1..m}`, stored as the value list on
/// `1..m` with `0` the basepoint. Ids are ordered by domain, codomain, then
/// lexicographically by value list.
#[derive(Debug, Clone)]
pub struct FunctionCategory {
    pub cat: FinCat,
    pub values: Vec<Vec<usize>>,
}

impl FunctionCategory {
    /// All based maps among `{0..n}` accepted by `keep(values, cod)`, which
    /// must describe a subcategory.
    pub fn build(name: &str, n: usize, keep: impl Fn(&[usize], usize) -> bool) -> FunctionCategory {
        let mut ends = Vec::new();
        let mut values = Vec::new();
        for m in 0..=n {
            for k in 0..=n {
                let mut v = vec![0; m];
                loop {
                    if keep(&v, k) {
                        ends.push((m, k));
                        values.push(v.clone());
                    }
                    // Next value list in lexicographic order over 0..=k.
                    let Some(pos) = (0..m).rev().find(|&p| v[p] < k) else { break };
                    v[pos] += 1;
                    v[pos + 1..].iter_mut().for_each(|x| *x = 0);
                }
            }
        }
        let index: HashMap<(usize, usize, Vec<usize>), MorId> =
            values.iter().enumerate().map(|(id, v)| ((ends[id].0, ends[id].1, v.clone()), id)).collect();
        let identities = (0..=n).map(|m| index[&(m, m, (1..=m).collect())]).collect();
        let cat = FinCat::from_rule(name, n + 1, ends.clone(), identities, |f, g| {
            let composite: Vec<usize> = values[f].iter().map(|&x| if x == 0 { 0 } else { values[g][x - 1] }).collect();
            index.get(&(ends[f].0, ends[g].1, composite)).copied()
        });
        FunctionCategory { cat, values }
    }

    pub fn find(&self, dom: ObjId, cod: ObjId, values: &[usize]) -> Option<MorId> {
        self.cat.hom(dom, cod).iter().copied().find(|&m| self.values[m] == values)
    }

    pub fn is_regular(&self, m: MorId) -> bool {
        self.values[m].iter().all(|&x| x != 0)
    }

    pub fn is_increasing(&self, m: MorId) -> bool {
        self.is_regular(m) && self.values[m].windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self, m: MorId) -> bool {
        let k = self.cat.cod(m);
        self.is_regular(m) && (1..=k).all(|y| self.values[m].contains(&y))
    }

    pub fn is_bijective(&self, m: MorId) -> bool {
        self.is_surjective(m) && self.cat.dom(m) == self.cat.cod(m)
    }
}

fn regular(v: &[usize], _: usize) -> bool {
    v.iter().all(|&x| x != 0)
}

fn injective(v: &[usize], k: usize) -> bool {
    regular(v, k) && (0..v.len()).all(|p| !v[p + 1..].contains(&v[p]))
}

fn check_n(n: usize) -> Result<(), GenError> {
    if n > MAX_N {
        Err(GenError::OutOfRange(n))
    } else {
        Ok(())
    }
}

/// All based maps among `{0..n}`: the truncated Γ.
pub fn based_maps(n: usize) -> Result<FunctionCategory, GenError> {
    check_n(n)?;
    Ok(FunctionCategory::build(&format!("Gamma{n}"), n, |_, _| true))
}

/// Regular maps among `{0..n}` factored as ordered injections after surjections.
pub fn gen_gamma(n: usize) -> Result<Factorization, GenError> {
    check_n(n)?;
    let fc = FunctionCategory::build(&format!("gamma{n}"), n, regular);
    let i = Subcat::from_predicate(&fc.cat, |m| fc.is_increasing(m));
    let a = Subcat::from_predicate(&fc.cat, |m| fc.is_surjective(m));
    Ok(Factorization::new(fc.cat, i, a))
}

/// Injections among `{0..n}` factored as ordered injections after permutations.
pub fn gen_sigma(n: usize) -> Result<Factorization, GenError> {
    check_n(n)?;
    let fc = FunctionCategory::build(&format!("sigma{n}"), n, injective);
    let i = Subcat::from_predicate(&fc.cat, |m| fc.is_increasing(m));
    let a = Subcat::from_predicate(&fc.cat, |m| fc.is_bijective(m));
    Ok(Factorization::new(fc.cat, i, a))
}

/// `U = I` with `A = Iso(I)`, for an indexing category `I`.
pub fn gen_induction(indexing: FinCat) -> Factorization {
    let full = Subcat::full(&indexing);
    let a = Subcat::isomorphisms(&indexing, &full);
    let name = format!("induction-{}", indexing.name());
    Factorization::new(indexing.with_name(name), full, a)
}

/// The arrow category `0 → 1`: `id₀ = 0`, `id₁ = 1`, `i = 2`.
pub fn arrow() -> FinCat {
    let ends = vec![(0, 0), (1, 1), (0, 1)];
    FinCat::from_rule("arrow", 2, ends, vec![0, 1], |f, g| match (f, g) {
        (0, x) | (x, 1) => Some(x),
        _ => None,
    })
}

/// The arrow with `A` discrete; its conjugate category splits an idempotent.
pub fn gen_idem() -> Factorization {
    gen_induction(arrow()).with_name("idem")
}

impl Factorization {
    pub fn with_name(self, name: impl Into<String>) -> Factorization {
        Factorization { u: self.u.with_name(name), ..self }
    }
}

/// The category of a finite partial order given by its `≤` matrix. Morphisms
/// are the pairs `x ≤ y`, ordered by `(x, y)`.
pub fn poset_category(name: &str, leq: &[Vec<bool>]) -> FinCat {
    let n = leq.len();
    let ends: Vec<(ObjId, ObjId)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| leq[x][y]).collect();
    let index: HashMap<(ObjId, ObjId), MorId> = ends.iter().enumerate().map(|(id, &e)| (e, id)).collect();
    let identities = (0..n).map(|x| index[&(x, x)]).collect();
    FinCat::from_rule(name, n, ends.clone(), identities, |f, g| index.get(&(ends[f].0, ends[g].1)).copied())
}

/// The subsets of `{1..k}` under inclusion; object `s` is the bitmask `s`.
pub fn subset_lattice(k: usize) -> FinCat {
    let n = 1 << k;
    let leq: Vec<Vec<bool>> = (0..n).map(|x| (0..n).map(|y| x & !y == 0).collect()).collect();
    poset_category(&format!("subsets{k}"), &leq)
}

/// A poset from a relation like `a<b,a<c`, objects numbered by first
/// appearance. Rejects cycles and pairs with a common upper bound but no meet.
pub fn parse_poset(relations: &str) -> Result<(Vec<String>, Vec<Vec<bool>>), GenError> {
    let mut names: Vec<String> = Vec::new();
    let mut pairs = Vec::new();
    let intern = |s: &str, names: &mut Vec<String>| -> Result<usize, GenError> {
        let s = s.trim();
        if s.is_empty() || !s.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(GenError::BadRelation(relations.to_string()));
        }
        Ok(names.iter().position(|n| n == s).unwrap_or_else(|| {
            names.push(s.to_string());
            names.len() - 1
        }))
    };
    for item in relations.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let chain: Vec<&str> = item.split('<').collect();
        if chain.len() < 2 {
            // A lone name declares an element.
            intern(item, &mut names)?;
            continue;
        }
        let ids = chain.iter().map(|s| intern(s, &mut names)).collect::<Result<Vec<_>, _>>()?;
        pairs.extend(ids.windows(2).map(|w| (w[0], w[1])));
    }
    let n = names.len();
    let mut leq = vec![vec![false; n]; n];
    for (x, row) in leq.iter_mut().enumerate() {
        row[x] = true;
    }
    for (x, y) in pairs {
        leq[x][y] = true;
    }
    for k in 0..n {
        for x in 0..n {
            for y in 0..n {
                if leq[x][k] && leq[k][y] {
                    leq[x][y] = true;
                }
            }
        }
    }
    if let Some(x) = (0..n).find(|&x| (0..n).any(|y| y != x && leq[x][y] && leq[y][x])) {
        return Err(GenError::Cycle(names[x].clone()));
    }
    for x in 0..n {
        for y in x + 1..n {
            if !(0..n).any(|z| leq[x][z] && leq[y][z]) {
                continue;
            }
            let lower: Vec<usize> = (0..n).filter(|&z| leq[z][x] && leq[z][y]).collect();
            if !lower.iter().any(|&m| lower.iter().all(|&z| leq[z][m])) {
                return Err(GenError::NoMeet(names[x].clone(), names[y].clone()));
            }
        }
    }
    Ok((names, leq))
}

/// A poset with `A` the identities, which are all of its isomorphisms.
pub fn gen_poset(relations: &str) -> Result<Factorization, GenError> {
    let (_, leq) = parse_poset(relations)?;
    Ok(gen_induction(poset_category("poset", &leq)).with_name("poset"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugation::check_conjugation;

    #[test]
    fn gamma_hom_counts() {
        let f = gen_gamma(2).unwrap();
        assert!(f.u.validate().is_empty());
        assert_eq!(f.u.hom(2, 2).len(), 4);
        let f0 = gen_gamma(0).unwrap();
        assert_eq!(f0.u.morphism_count(), 1);
        assert!(matches!(gen_gamma(5), Err(GenError::OutOfRange(5))));
    }

    #[test]
    fn based_maps_count() {
        let g = based_maps(3).unwrap();
        assert!(g.cat.validate().is_empty());
        for m in 0..=3usize {
            for k in 0..=3usize {
                assert_eq!(g.cat.hom(m, k).len(), (k + 1).pow(m as u32));
            }
        }
    }

    #[test]
    fn generators_are_categories_and_conjugate() {
        let all = [
            gen_gamma(2).unwrap(),
            gen_idem(),
            gen_poset("a<b,a<c").unwrap(),
            gen_sigma(2).unwrap(),
            gen_induction(subset_lattice(2)),
        ];
        for f in &all {
            assert!(f.u.validate().is_empty(), "{}", f.name());
            let r = check_conjugation(f);
            assert!(r.holds(), "{}:\n{r}", f.name());
        }
    }

    #[test]
    fn poset_without_meet_is_rejected() {
        // a1 and a2 lie below b but have no common lower bound.
        let e = parse_poset("a1<b,a2<b,a1<c,a2<c,b<d,c<d").unwrap_err();
        assert_eq!(e, GenError::NoMeet("a1".into(), "a2".into()));
        // b and c have lower bounds x, y and w < x, y but no greatest one.
        let e = parse_poset("x<b,y<b,x<c,y<c,b<d,c<d,w<x,w<y").unwrap_err();
        assert_eq!(e, GenError::NoMeet("b".into(), "c".into()));
        assert!(matches!(parse_poset("a<b,b<a"), Err(GenError::Cycle(_))));
    }

    #[test]
    fn idem_is_induction_of_arrow() {
        let f = gen_idem();
        let g = gen_induction(arrow());
        assert_eq!(f.u.to_raw().morphisms, g.u.to_raw().morphisms);
        assert_eq!(f.i, g.i);
        assert_eq!(f.a, g.a);
        assert_eq!(f.a, Subcat::identities(&f.u));
    }
}
