use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::conjugation::ConjugateCategory;
use crate::pairs::{arrow, gen_gamma, gen_idem, gen_poset};
use crate::qlinalg::{BasedSet, Rat};

fn idem_b() -> (ConjugateCategory, Arc<FinCat>) {
    let cc = ConjugateCategory::build(&gen_idem()).unwrap();
    let b = Arc::new(cc.b().clone());
    (cc, b)
}

fn bases() -> Vec<Arc<FinCat>> {
    let mut out = vec![Arc::new(arrow())];
    for f in [gen_idem(), gen_poset("a<b, a<c").unwrap(), gen_gamma(2).unwrap()] {
        let cc = ConjugateCategory::build(&f).unwrap();
        out.push(Arc::new(cc.b().clone()));
        out.push(Arc::new(cc.a_cat().clone()));
    }
    out
}

#[test]
fn zero_diagram_is_valid() {
    for base in bases() {
        let z = Diagram::zero(base);
        assert!(z.is_zero());
        assert!(z.is_functor());
    }
}

#[test]
fn free_functor_on_the_idempotent_category() {
    let (_, b) = idem_b();
    let f = free_functor(&b, 1, 1);
    assert_eq!(f.dims(), &[1, 2]);
    assert!(f.is_functor());
    for m in f.maps() {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c);
                assert!(v.is_zero() || v.is_one());
            }
        }
        // Block permutation: one entry per column.
        for c in 0..m.cols() {
            assert_eq!((0..m.rows()).filter(|&r| m.get(r, c).is_one()).count(), 1);
        }
    }
}

#[test]
fn free_functor_vanishes_off_the_hom_set() {
    let base = Arc::new(arrow());
    let f = free_functor(&base, 0, 3);
    assert_eq!(f.dims(), &[3, 0]);
    assert!(f.is_functor());
}

#[test]
fn free_functor_matches_tensor_with_hom_sets() {
    for base in bases() {
        for d in base.objects() {
            let f = free_functor(&base, d, 2);
            for x in base.objects() {
                let expected = QMat::identity(2).tensor_with_based_set(BasedSet::with_points(base.hom(x, d).len()));
                assert_eq!(f.dim(x), expected.rows());
            }
        }
    }
}

#[test]
fn perturbed_matrix_names_the_composable_pair() {
    let (cc, b) = idem_b();
    let i = cc.embed_u(2);
    let i_star = cc.embed_i_op(2);
    let e = b.compose(i, i_star);
    let f = free_functor(&b, 1, 1);
    let mut m = f.map(e).clone();
    m.set(0, 0, Rat::from_int(5));
    let broken = f.with_map(e, m).unwrap();
    let violations = broken.validate();
    assert!(!violations.is_empty());
    // Every reported pair really involves e, as a factor or a composite.
    for v in &violations {
        match *v {
            FunctorViolation::Composition { f, g } => assert!(f == e || g == e || b.compose(g, f) == e),
            FunctorViolation::Identity { .. } => panic!("identities were untouched"),
        }
    }
    assert!(violations.contains(&FunctorViolation::Composition { f: i_star, g: i }));
    assert!(!broken.is_functor());
}

#[test]
fn wrong_shape_is_a_distinct_error() {
    let (_, b) = idem_b();
    let f = free_functor(&b, 1, 1);
    let err = f.with_map(4, QMat::zeros(3, 3)).unwrap_err();
    assert!(matches!(err, DiagramError::Shape { morphism: 4, .. }));
    let err = Diagram::new(b.clone(), vec![1], vec![]).unwrap_err();
    assert_eq!(err, DiagramError::DimsLength { expected: 2, found: 1 });
}

#[test]
fn yoneda_maps_out_of_frees_are_natural() {
    for base in bases() {
        let mut rng = SplitMix64::new(11);
        let target = Arc::new(FreeSum { terms: vec![(0, 1), (base.object_count() - 1, 2)] }.diagram(&base));
        let source = FreeSum { terms: (0..base.object_count()).map(|d| (d, 1)).collect() };
        let elements: Vec<QMat> = source.terms.iter().map(|&(d, n)| rng.matrix(target.dim(d), n)).collect();
        let t = yoneda_map(&base, &source, target, &elements);
        assert!(t.is_natural());
        let (k, inc) = t.kernel();
        assert!(k.is_functor());
        assert!(inc.is_natural());
        assert!(inc.then(&t).components().iter().all(QMat::is_zero));
        let (q, proj) = t.cokernel();
        assert!(q.is_functor());
        assert!(proj.is_natural());
        assert!(t.then(&proj).components().iter().all(QMat::is_zero));
    }
}

#[test]
fn natural_maps_out_of_a_free_functor_are_its_yoneda_elements() {
    for base in bases() {
        let g = Arc::new(random_diagram(&base, 5, 2));
        for d in base.objects() {
            let f = Arc::new(free_functor(&base, d, 1));
            let space = NatTrans::space(&f, &g);
            assert_eq!(space.len(), g.dim(d));
            assert!(space.iter().all(NatTrans::is_natural));
        }
    }
}

#[test]
fn splitmix_reference_stream() {
    // Reference values from an independent implementation of the generator.
    let mut rng = SplitMix64::new(1234567);
    let got: Vec<u64> = (0..5).map(|_| rng.next_u64()).collect();
    assert_eq!(
        got,
        [6457827717110365317, 3203168211198807973, 9817491932198370423, 4593380528125082431, 16408922859458223821]
    );
}

#[test]
fn random_diagram_is_deterministic_and_zero_at_max_dim_zero() {
    for base in bases() {
        assert_eq!(random_diagram(&base, 42, 3), random_diagram(&base, 42, 3));
        assert!(random_diagram(&base, 42, 0).is_zero());
    }
}

#[test]
fn random_transformations_are_natural() {
    let base = bases()[3].clone();
    let mut rng = SplitMix64::new(3);
    for seed in 0..6 {
        let g = Arc::new(random_diagram(&base, seed, 2));
        let h = Arc::new(random_diagram(&base, seed + 100, 2));
        assert!(random_nat_trans(&mut rng, &g, &h).is_natural());
        assert!(random_nat_trans(&mut rng, &g, &g).is_natural());
    }
}

#[test]
fn sampled_endomorphisms_are_both_invertible_and_not() {
    let base = bases()[3].clone();
    let mut rng = SplitMix64::new(5);
    let (mut iso, mut not_iso) = (0, 0);
    for seed in 0..40 {
        let p = random_presentation(&base, seed, 3);
        if p.diagram.total_dim() == 0 {
            continue;
        }
        let tau = random_endomorphism(&mut rng, &p);
        assert!(tau.is_natural());
        if tau.is_componentwise_iso() {
            iso += 1;
        } else {
            not_iso += 1;
        }
    }
    assert!(iso >= 5 && not_iso >= 5, "iso={iso} not_iso={not_iso}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn sampled_endomorphisms_are_natural(seed in any::<u64>(), which in 0usize..7, max_dim in 0usize..4, pick in any::<u64>()) {
        let base = bases()[which].clone();
        let p = random_presentation(&base, seed, max_dim);
        let tau = random_endomorphism(&mut SplitMix64::new(pick), &p);
        prop_assert!(tau.is_natural());
        prop_assert!(std::ptr::eq(&**tau.src(), &*p.diagram) && std::ptr::eq(&**tau.dst(), &*p.diagram));
    }

    #[test]
    fn random_diagrams_are_functors(seed in any::<u64>(), which in 0usize..7, max_dim in 0usize..4) {
        let base = bases()[which].clone();
        let p = random_presentation(&base, seed, max_dim);
        prop_assert!(p.diagram.is_functor());
        prop_assert!(p.map.is_natural());
        prop_assert!(p.structure.is_natural());
    }

    #[test]
    fn generator_check_agrees_with_exhaustive(seed in any::<u64>(), which in 0usize..7, pick in any::<usize>(), delta in 1i64..3) {
        let base = bases()[which].clone();
        let d = random_diagram(&base, seed, 3);
        let candidates: Vec<_> =
            base.morphisms().filter(|&f| !base.is_identity(f) && d.map(f).rows() * d.map(f).cols() > 0).collect();
        prop_assume!(!candidates.is_empty());
        let f = candidates[pick % candidates.len()];
        let mut m = d.map(f).clone();
        let (r, c) = (pick % m.rows(), (pick / 7) % m.cols());
        m.set(r, c, m.get(r, c) + &Rat::from_int(delta));
        let perturbed = d.with_map(f, m).unwrap();
        prop_assert_eq!(perturbed.is_functor(), perturbed.validate().is_empty());
    }
}
