//! Invariants under random inputs.

use num_rational::Rational64;
use num_traits::Zero;
use proptest::prelude::*;
use simhyp::actions::ActionSpace;
use simhyp::construct::power_up;
use simhyp::group::{GroupElement, GroupSpec, Letter};
use simhyp::qm::QmEvaluator;

fn f2() -> GroupSpec {
    GroupSpec::free(2).unwrap()
}

fn word(max: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec((0u32..2, any::<bool>()), 0..max)
        .prop_map(|ls| f2().from_letters(ls.into_iter().map(|(g, i)| Letter::new(g, i))).unwrap())
}

fn product_element(max: usize) -> impl Strategy<Value = GroupElement> {
    let g = GroupSpec::parse("product(free(2),free(3))").unwrap();
    (
        prop::collection::vec((0u32..2, any::<bool>()), 0..max),
        prop::collection::vec((2u32..5, any::<bool>()), 0..max),
    )
        .prop_map(move |(a, b)| {
            let ls = a.into_iter().chain(b).map(|(x, i)| Letter::new(x, i));
            g.from_letters(ls).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_axioms(x in word(12), y in word(12), z in word(12)) {
        let g = f2();
        let xy_z = g.multiply(&g.multiply(&x, &y).unwrap(), &z).unwrap();
        let x_yz = g.multiply(&x, &g.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        prop_assert!(g.is_identity(&g.multiply(&x, &g.inverse(&x)).unwrap()));
        prop_assert_eq!(g.multiply(&g.identity(), &x).unwrap(), x);
    }

    #[test]
    fn power_length(x in word(12), n in 1i64..20) {
        let g = f2();
        let cf = g.cyclic_reduce(&x).unwrap();
        let c = g.word_length(&cf.core) as i64;
        prop_assume!(c > 0);
        let expected = n * c + (g.word_length(&x) as i64 - c);
        prop_assert_eq!(g.word_length(&g.pow(&x, n).unwrap()) as i64, expected);
    }

    #[test]
    fn commuting_elements_share_a_root(x in word(6), y in word(6)) {
        let g = f2();
        prop_assume!(!g.is_identity(&x) && !g.is_identity(&y));
        if g.commutes(&x, &y).unwrap() {
            let root = |e: &GroupElement| match g.cyclic_reduce(e).unwrap().core {
                GroupElement::Free(w) => w.primitive_root().0,
                _ => unreachable!(),
            };
            let (rx, ry) = (root(&x), root(&y));
            prop_assert!(rx == ry || rx == ry.inverse());
        }
    }

    #[test]
    fn orbit_growth_is_affine(x in product_element(8), n in 1i64..12) {
        let g = GroupSpec::parse("product(free(2),free(3))").unwrap();
        for k in 0..2 {
            let s = ActionSpace::cayley(g.clone(), Some(k)).unwrap();
            let tau = s.translation_length(&x).unwrap();
            let d1 = s.orbit_distance(&x).unwrap();
            let dn = s.orbit_distance(&g.pow(&x, n).unwrap()).unwrap();
            prop_assert_eq!(dn, tau * n + (d1 - tau));
        }
    }

    #[test]
    fn quasimorphism_symmetries(x in word(10), c in word(6), pattern in word(3), n in 1i64..6) {
        let g = f2();
        prop_assume!(!g.is_identity(&pattern));
        let q = QmEvaluator::counting(g.clone(), &pattern).unwrap();
        let b = q.evaluate(&x).unwrap();
        prop_assert_eq!(q.evaluate(&g.inverse(&x)).unwrap(), -b);
        let conj = g.product_of([&c, &x, &g.inverse(&c)]).unwrap();
        prop_assert_eq!(q.evaluate(&conj).unwrap(), b);
        prop_assert_eq!(q.evaluate(&g.pow(&x, n).unwrap()).unwrap(), b * n);
    }

    #[test]
    fn busemann_detects_hyperbolic(x in word(10), wa in -3i64..4, wb in -3i64..4) {
        prop_assume!(wa != 0 || wb != 0);
        let g = f2();
        let line = ActionSpace::line(g.clone(), vec![wa.into(), wb.into()]).unwrap();
        let q = QmEvaluator::busemann(&line).unwrap();
        prop_assert_eq!(!q.evaluate(&x).unwrap().is_zero(), line.is_hyperbolic(&x).unwrap());
    }

    #[test]
    fn power_chains_hold(d in 1i64..4, picks in prop::sample::subsequence(vec!["a", "b", "ab", "aB", "abb", "aab"], 2..6)) {
        let g = f2();
        let tree = ActionSpace::cayley(g.clone(), None).unwrap();
        let base: Vec<_> = picks.iter().map(|w| g.parse_element(w).unwrap()).collect();
        let fam = power_up(std::slice::from_ref(&tree), &base, Rational64::from_integer(d)).unwrap();
        prop_assert!(fam.chain_holds());
        let keep: Vec<usize> = (0..base.len()).step_by(2).collect();
        prop_assert!(fam.select(&keep).chain_holds());
    }
}
