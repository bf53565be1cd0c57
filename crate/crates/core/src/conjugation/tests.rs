use super::*;
use crate::pairs::{self, FunctionCategory};

fn arrow_plus_return() -> Factorization {
    // id0=0, id1=1, i=2: 0→1, r=3: 1→0 inverse to i.
    let ends = vec![(0, 0), (1, 1), (0, 1), (1, 0)];
    let u = FinCat::from_rule("broken", 2, ends.clone(), vec![0, 1], |f, g| {
        Some(match (ends[f].0, ends[g].1) {
            (0, 0) => 0,
            (1, 1) => 1,
            (0, 1) => 2,
            _ => 3,
        })
    });
    let i = Subcat::from_ids(&u, [0, 1, 2]).unwrap();
    let a = Subcat::identities(&u);
    Factorization::new(u, i, a)
}

/// Regular maps with all injections as `I`: the same pair as gamma but with
/// non-identity isomorphisms in `I`, so canonical forms need adjusting.
fn gamma_unordered(n: usize) -> Factorization {
    let fc = FunctionCategory::build("gamma-unordered", n, |v, _| v.iter().all(|&x| x != 0));
    let i = Subcat::from_predicate(&fc.cat, |m| {
        let v = &fc.values[m];
        (0..v.len()).all(|p| !v[p + 1..].contains(&v[p]))
    });
    let a = Subcat::from_predicate(&fc.cat, |m| fc.is_surjective(m));
    Factorization::new(fc.cat, i, a)
}

/// All finite injections as an indexing category, with `A` its isomorphisms.
fn injections_induction(n: usize) -> Factorization {
    let fc = FunctionCategory::build("inj", n, |v, _| v.iter().all(|&x| x != 0) && (0..v.len()).all(|p| !v[p + 1..].contains(&v[p])));
    pairs::gen_induction(fc.cat)
}

fn examples() -> Vec<Factorization> {
    vec![
        pairs::gen_idem(),
        pairs::gen_gamma(2).unwrap(),
        pairs::gen_poset("a<b,a<c").unwrap(),
        pairs::gen_sigma(2).unwrap(),
        pairs::gen_induction(pairs::subset_lattice(2)),
        gamma_unordered(2),
        injections_induction(2),
    ]
}

/// Small deterministic stream for choosing among options in tests.
fn stream(seed: u64) -> impl FnMut(usize) -> usize {
    let mut s = seed;
    move |n| {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s % n as u64) as usize
    }
}

#[test]
fn coverage_failure_names_the_extra_map() {
    let f = arrow_plus_return();
    assert!(f.u.validate().is_empty());
    let report = check_conjugation(&f);
    assert!(!report.holds());
    assert_eq!(report.first_failure(), Some(&ConjugationFailure::Uncovered { f: 3 }));
    assert!(matches!(ConjugateCategory::build(&f), Err(BuildError::Axioms(_))));
}

#[test]
fn all_examples_admit_conjugation() {
    for f in examples() {
        let r = check_conjugation(&f);
        assert!(r.holds(), "{}\n{r}", f.name());
    }
}

#[test]
fn idempotent_conjugate() {
    let cc = ConjugateCategory::build(&pairs::gen_idem()).unwrap();
    let b = cc.b();
    assert_eq!(b.morphism_count(), 5);
    assert!(b.validate().is_empty());
    let i = cc.embed_u(2);
    let i_star = cc.embed_i_op(2);
    assert_eq!(b.compose(i_star, i), b.identity(0));
    let e = b.compose(i, i_star);
    assert_eq!(b.compose(e, e), e);
    assert!(!b.is_identity(e));
    assert!(!cc.is_regular(i_star));
    assert!(cc.is_regular(b.identity(0)) && cc.is_regular(b.identity(1)));
    assert_eq!(cc.threefold_factorize(i_star), BMorphism { src: 1, dst: 0, cok: 2, mid: 0, img: 0 });
}

/// The based map a gamma triple represents: `x = cok(y) ↦ img(mid(y))`, else `0`.
fn as_based_map(fc: &FunctionCategory, t: &BMorphism) -> Vec<usize> {
    let cok = &fc.values[t.cok];
    (1..=t.src)
        .map(|x| match cok.iter().position(|&c| c == x) {
            Some(y) => fc.values[t.img][fc.values[t.mid][y] - 1],
            None => 0,
        })
        .collect()
}

#[test]
fn gamma_conjugate_is_based_maps() {
    for n in 0..=2 {
        let f = pairs::gen_gamma(n).unwrap();
        let fc = FunctionCategory::build("gamma", n, |v, _| v.iter().all(|&x| x != 0));
        assert_eq!(fc.cat, f.u.clone().with_name("gamma"));
        let cc = ConjugateCategory::build(&f).unwrap();
        let gamma = pairs::based_maps(n).unwrap();
        let b = cc.b();
        // The explicit functor to based maps is bijective on every hom-set and functorial.
        let image: Vec<MorId> = b
            .morphisms()
            .map(|m| {
                let t = cc.threefold_factorize(m);
                gamma.find(t.src, t.dst, &as_based_map(&fc, &t)).unwrap()
            })
            .collect();
        let mut sorted = image.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), b.morphism_count());
        assert_eq!(b.morphism_count(), gamma.cat.morphism_count());
        for x in b.morphisms() {
            for y in b.objects().flat_map(|o| b.hom(b.cod(x), o).to_vec()) {
                assert_eq!(image[b.compose(y, x)], gamma.cat.compose(image[y], image[x]));
            }
        }
    }
}

#[test]
fn gamma_hom_counts_and_threefold() {
    let f = pairs::gen_gamma(3).unwrap();
    let cc = ConjugateCategory::build(&f).unwrap();
    for m in 0..=3usize {
        for n in 0..=3usize {
            assert_eq!(cc.b().hom(m, n).len(), (n + 1).pow(m as u32), "{m} {n}");
        }
    }
    assert_eq!(cc.b().hom(3, 3).len(), 64);

    let fc = FunctionCategory::build("gamma", 3, |v, _| v.iter().all(|&x| x != 0));
    let gamma = cc.b().hom(2, 2).iter().copied().find(|&m| as_based_map(&fc, &cc.threefold_factorize(m)) == [0, 1]).unwrap();
    let t = cc.threefold_factorize(gamma);
    assert_eq!(fc.values[t.cok], [2]);
    assert_eq!((f.u.dom(t.mid), f.u.cod(t.mid)), (1, 1));
    assert_eq!(fc.values[t.img], [1]);

    let hom22 = cc.b().hom(2, 2);
    assert_eq!(hom22.iter().filter(|&&m| cc.is_regular(m)).count(), 4);
    assert_eq!(hom22.iter().filter(|&&m| !cc.is_regular(m)).count(), 5);
}

#[test]
fn every_b_is_a_category() {
    for f in examples() {
        let cc = ConjugateCategory::build(&f).unwrap();
        assert!(cc.b().validate().is_empty(), "{}", f.name());
        // Embeddings are functorial.
        let u = cc.u();
        for x in u.morphisms() {
            for y in u.objects().flat_map(|o| u.hom(u.cod(x), o).to_vec()) {
                assert_eq!(cc.embed_u(u.compose(y, x)), cc.b().compose(cc.embed_u(y), cc.embed_u(x)));
            }
        }
    }
}

#[test]
fn unordered_injections_give_the_same_hom_counts() {
    let cc = ConjugateCategory::build(&gamma_unordered(2)).unwrap();
    for m in 0..=2usize {
        for n in 0..=2usize {
            assert_eq!(cc.b().hom(m, n).len(), (n + 1).pow(m as u32));
        }
    }
}

#[test]
fn poset_composition_is_meet() {
    let cc = ConjugateCategory::build(&pairs::gen_poset("a<b,a<c").unwrap()).unwrap();
    let b = cc.b();
    // a=0, b=1, c=2.
    let bc = b.hom(1, 2);
    assert_eq!(bc.len(), 1);
    let t = cc.threefold_factorize(bc[0]);
    assert_eq!(cc.u().dom(t.cok), 0);
    let cb = b.hom(2, 1)[0];
    // b → c → b passes through a: the composite is a ≤ b read as b ← a → b.
    let loop_b = b.compose(cb, bc[0]);
    assert_eq!(cc.u().dom(cc.threefold_factorize(loop_b).cok), 0);
}

fn perturbed(cc: &ConjugateCategory, t: &BMorphism, pick: &mut impl FnMut(usize) -> usize) -> (MorId, MorId, MorId) {
    let u = cc.u();
    let ix = cc.indexing();
    let isos_into = |x: ObjId| -> Vec<MorId> {
        u.objects().flat_map(|y| cc.i_sub().hom(u, y, x).filter(|&m| ix.is_iso(m)).collect::<Vec<_>>()).collect()
    };
    let a1 = isos_into(u.dom(t.cok));
    let theta = a1[pick(a1.len())];
    let b1 = isos_into(u.dom(t.img));
    let chi_inv = b1[pick(b1.len())];
    let chi = ix.inverse(chi_inv).unwrap();
    (u.compose(t.cok, theta), u.compose_path(&[theta, t.mid, chi]), u.compose(t.img, chi_inv))
}

#[test]
fn composition_is_independent_of_choices() {
    for f in examples() {
        let cc = ConjugateCategory::build(&f).unwrap();
        let b = cc.b();
        let mut pick = stream(0x9e3779b97f4a7c15);
        for x in b.morphisms() {
            for &y in b.objects().flat_map(|o| b.hom(b.cod(x), o)).collect::<Vec<_>>() {
                let expected = cc.threefold_factorize(b.compose(y, x));
                for _ in 0..3 {
                    let px = perturbed(&cc, &cc.threefold_factorize(x), &mut pick);
                    let py = perturbed(&cc, &cc.threefold_factorize(y), &mut pick);
                    assert!(cc.equivalent(px, { let t = cc.threefold_factorize(x); (t.cok, t.mid, t.img) }));
                    let got = cc.compose_raw(px, py, Some(&mut pick));
                    assert_eq!(got, expected, "{}: {x} then {y}", f.name());
                }
            }
        }
    }
}

#[test]
fn distinct_canonical_triples_are_inequivalent() {
    let cc = ConjugateCategory::build(&injections_induction(2)).unwrap();
    let b = cc.b();
    for x in b.morphisms() {
        for &y in b.hom(b.dom(x), b.cod(x)) {
            let (s, t) = (cc.threefold_factorize(x), cc.threefold_factorize(y));
            assert_eq!(cc.equivalent((s.cok, s.mid, s.img), (t.cok, t.mid, t.img)), x == y);
        }
    }
}

#[test]
fn structural_laws_hold() {
    for f in examples() {
        let cc = ConjugateCategory::build(&f).unwrap();
        let r = check_laws(&cc);
        assert!(r.holds(), "{}\n{r}", f.name());
    }
}

#[test]
fn regular_bimodule_counts_and_actions() {
    let cc = ConjugateCategory::build(&pairs::gen_gamma(2).unwrap()).unwrap();
    let m = RegularBimodule::new(&cc);
    assert_eq!(m.cardinality(2, 2), 4);
    let b = cc.b();
    // Singular maps absorb whatever is composed after them, so the action
    // is well defined on the quotient by singular maps.
    for sigma in b.morphisms().filter(|&x| !cc.is_regular(x)) {
        for &beta in b.objects().flat_map(|o| b.hom(b.cod(sigma), o)) {
            assert!(!cc.is_regular(b.compose(beta, sigma)));
        }
    }
    // A singular map acting from the left need not give the basepoint:
    // the collapse {1,2} → {2} is singular, yet it undoes the inclusion of {2}.
    let fc = FunctionCategory::build("gamma", 2, |v, _| v.iter().all(|&x| x != 0));
    let incl = cc.embed_u(fc.find(1, 2, &[2]).unwrap());
    let collapse = cc.embed_i_op(fc.find(1, 2, &[2]).unwrap());
    assert!(!cc.is_regular(collapse));
    assert_eq!(m.left_action(&cc, collapse, 1, m.element_of(incl)), m.element_of(b.identity(1)));
    // Functoriality of both actions.
    for a in b.objects() {
        for x in b.objects() {
            for e in 0..=m.cardinality(a, x) {
                for &beta in b.objects().flat_map(|o| b.hom(x, o)) {
                    for &delta in b.objects().flat_map(|o| b.hom(b.cod(beta), o)) {
                        let twice = m.left_action(&cc, delta, a, m.left_action(&cc, beta, a, e));
                        assert_eq!(twice, m.left_action(&cc, b.compose(delta, beta), a, e));
                    }
                }
                for alpha in cc.a_sub().into_object(cc.u(), a) {
                    let r = m.right_action(&cc, alpha, x, e);
                    for &beta in b.objects().flat_map(|o| b.hom(x, o)) {
                        let left_then_right = m.right_action(&cc, alpha, b.cod(beta), m.left_action(&cc, beta, a, e));
                        assert_eq!(left_then_right, m.left_action(&cc, beta, cc.u().dom(alpha), r));
                    }
                }
            }
        }
    }
    for a in cc.u().objects() {
        for x in b.objects() {
            for e in 0..=m.cardinality(a, x) {
                assert_eq!(m.right_action(&cc, cc.u().identity(a), x, e), e);
            }
        }
    }
}

#[test]
fn free_decomposition_summand_sizes() {
    let cc = ConjugateCategory::build(&pairs::gen_gamma(2).unwrap()).unwrap();
    let m = RegularBimodule::new(&cc);
    let mut sizes = vec![0; cc.indexing().skeleton(2).len()];
    for &g in m.set(2, 2) {
        sizes[cc.decompose_free(g).unwrap().summand] += 1;
    }
    // Summands over the subsets ∅, {1}, {2}, {1,2} in skeleton order.
    assert_eq!(sizes, vec![0, 1, 1, 2]);
}

#[test]
fn free_decomposition_is_natural() {
    for f in examples() {
        let cc = ConjugateCategory::build(&f).unwrap();
        let m = RegularBimodule::new(&cc);
        let b = cc.b();
        let u = cc.u();
        for a in u.objects() {
            for x in b.objects() {
                for &g in m.set(a, x) {
                    let p = cc.decompose_free(g).unwrap();
                    assert_eq!(cc.recompose_free(x, p), g);
                    // Left action by every β out of x.
                    for y in b.objects() {
                        for &beta in b.hom(x, y) {
                            let moved = b.compose(beta, g);
                            let expected = cc.is_regular(moved).then(|| cc.decompose_free(moved).unwrap());
                            assert_eq!(cc.lower_star(beta, Some(p)), expected, "{}", f.name());
                        }
                    }
                    // Right action by every α into a: precompose the A-part.
                    for alpha in cc.a_sub().into_object(u, a) {
                        let moved = cc.decompose_free(b.compose(g, cc.embed_u(alpha))).unwrap();
                        assert_eq!(moved, WedgePoint { summand: p.summand, map: u.compose(p.map, alpha) });
                    }
                }
            }
        }
    }
}

#[test]
fn generator_decomposition_is_natural_in_the_first_variable() {
    for f in examples() {
        let cc = ConjugateCategory::build(&f).unwrap();
        let m = RegularBimodule::new(&cc);
        let b = cc.b();
        let ix = cc.indexing();
        for x in b.objects() {
            for c in b.objects() {
                let total: usize = ix.skeleton(x).elements.iter().map(|e| m.cardinality(e.dom, c)).sum();
                assert_eq!(b.hom(x, c).len(), total, "{}", f.name());
                for &g in b.hom(x, c) {
                    let p = cc.decompose_gen(g);
                    assert_eq!(cc.recompose_gen(x, p), g);
                    for w in b.objects() {
                        for &beta in b.hom(w, x) {
                            assert_eq!(cc.upper_star(beta, p), cc.decompose_gen(b.compose(g, beta)), "{}", f.name());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn generator_decomposition_of_gamma_two() {
    let cc = ConjugateCategory::build(&pairs::gen_gamma(2).unwrap()).unwrap();
    let m = RegularBimodule::new(&cc);
    let sizes: Vec<usize> = cc.indexing().skeleton(2).elements.iter().map(|e| m.cardinality(e.dom, 2)).collect();
    assert_eq!(sizes, vec![1, 2, 2, 4]);
    assert_eq!(sizes.iter().sum::<usize>(), 9);
}

#[test]
fn decomposition_report_passes_on_every_example() {
    for f in examples() {
        let cc = ConjugateCategory::build(&f).unwrap();
        let report = check_decompositions(&cc);
        assert!(report.holds(), "{}\n{report}", f.name());
        assert!(report.lines.iter().all(|l| l.1 > 0), "{}\n{report}", f.name());
    }
}
