use proptest::prelude::*;
use psdual_core::module::is_isomorphic;
use psdual_core::spaces::{corpus, load_str, save_module, save_ring, Loaded};
use psdual_core::steenrod::{adem_reduce, antipode, is_admissible, word_degree};
use psdual_core::{AlgebraElement, Letter, Prime, SubalgebraSpec};

fn prime() -> impl Strategy<Value = Prime> {
    prop_oneof![Just(Prime::TWO), Just(Prime::THREE), Just(Prime::FIVE)]
}

fn letter(p: Prime) -> BoxedStrategy<Letter> {
    if p.is_two() {
        (1u32..=9).prop_map(Letter::Sq).boxed()
    } else {
        prop_oneof![Just(Letter::Beta), (1u32..=3).prop_map(Letter::P)].boxed()
    }
}

fn word(p: Prime, max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(p), 0..=max)
}

fn elements() -> impl Strategy<Value = (Prime, Vec<Letter>, Vec<Letter>, Vec<Letter>)> {
    prime().prop_flat_map(|p| (Just(p), word(p, 3), word(p, 3), word(p, 3)))
}

fn el(p: Prime, w: &[Letter]) -> AlgebraElement {
    adem_reduce(p, w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_admissible((p, a, _, _) in elements()) {
        for (m, c) in adem_reduce(p, &a).terms() {
            prop_assert!(c != 0 && c < p.value());
            prop_assert!(is_admissible(p, m.letters()));
        }
    }

    #[test]
    fn antipode_is_an_involution((p, a, _, _) in elements()) {
        let x = el(p, &a);
        prop_assert_eq!(antipode(&antipode(&x)), x);
    }

    #[test]
    fn antipode_reverses_products((p, a, b, _) in elements()) {
        let ab = el(p, &a).multiply(&el(p, &b)).unwrap();
        let ba = antipode(&el(p, &b)).multiply(&antipode(&el(p, &a))).unwrap();
        // graded anti-commutativity sign at odd primes
        let da = word_degree(p, &a) as i64;
        let db = word_degree(p, &b) as i64;
        let sign = if p.is_two() || (da * db) % 2 == 0 { 1 } else { p.value() - 1 };
        prop_assert_eq!(antipode(&ab), ba.scale(sign));
    }

    #[test]
    fn products_associate((p, a, b, c) in elements()) {
        let (x, y, z) = (el(p, &a), el(p, &b), el(p, &c));
        let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let mut whole = a.clone();
        whole.extend(&b);
        whole.extend(&c);
        prop_assert_eq!(left, adem_reduce(p, &whole));
    }

    #[test]
    fn dual_is_an_involution(i in 0usize..81, k in 0u32..=2) {
        let rings = corpus().unwrap();
        let r = &rings[i % rings.len()];
        let k = if r.prime().is_two() { k } else { k.min(1) };
        let spec = SubalgebraSpec::new(r.prime(), k);
        let m = r.module(spec).unwrap();
        let dd = m.dualize().unwrap().dualize().unwrap();
        prop_assert_eq!(dd.space().total_dim(), m.space().total_dim());
        prop_assert!(is_isomorphic(&dd, &m, &spec).unwrap().is_isomorphic());
    }

    #[test]
    fn files_round_trip(i in 0usize..81, k in 0u32..=2) {
        let rings = corpus().unwrap();
        let r = &rings[i % rings.len()];
        let back = load_str(&save_ring(r)).unwrap();
        prop_assert!(matches!(back, Loaded::Ring(ref b) if b == r));
        let k = if r.prime().is_two() { k } else { k.min(1) };
        let m = r.module(SubalgebraSpec::new(r.prime(), k)).unwrap();
        let back = load_str(&save_module(&m)).unwrap();
        prop_assert!(matches!(back, Loaded::Module(ref b) if b == &m));
    }

    #[test]
    fn poincare_pairing_is_perfect(i in 0usize..81) {
        let rings = corpus().unwrap();
        let r = &rings[i % rings.len()];
        for d in 0..=r.dimension() {
            let m = r.pairing_matrix(d);
            prop_assert_eq!(m.rank(r.prime()), r.space().dim(d));
        }
    }
}
