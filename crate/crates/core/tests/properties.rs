use jconf::brackets::BracketKind;
use jconf::{FieldElem, Rat, SPoly, Signature};
use num_bigint::BigInt;
use proptest::prelude::*;

fn field() -> impl Strategy<Value = FieldElem> {
    (-20i64..20, 1i64..6, -20i64..20, 1i64..6).prop_map(|(a, b, c, d)| {
        FieldElem::new(
            Rat::new(BigInt::from(a), BigInt::from(b)),
            Rat::new(BigInt::from(c), BigInt::from(d)),
        )
    })
}

fn poly(sig: Signature) -> impl Strategy<Value = SPoly> {
    let odd = 1u32 << sig.n();
    prop::collection::vec((-2i32..=2, 0..odd, -4i64..=4), 0..4).prop_map(move |ts| {
        ts.into_iter().fold(SPoly::zero(sig), |acc, (k, mask, c)| {
            &acc + &SPoly::t_pow(sig, k, mask).scale(&FieldElem::int(c))
        })
    })
}

proptest! {
    #[test]
    fn field_ring_axioms(a in field(), b in field(), c in field()) {
        prop_assert_eq!((a.clone() + b.clone()) * c.clone(), a.clone() * c.clone() + b.clone() * c.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        if let Some(inv) = a.inv() {
            prop_assert!((a.clone() * inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn squares_have_roots(a in field()) {
        let sq = a.clone() * a.clone();
        let r = sq.sqrt().expect("a square");
        prop_assert_eq!(r.clone() * r, sq);
    }

    #[test]
    fn display_round_trips(a in field()) {
        let back: FieldElem = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn grassmann_product_is_associative(f in poly(Signature::laurent(3)), g in poly(Signature::laurent(3)), h in poly(Signature::laurent(3))) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
    }

    #[test]
    fn contact_bracket_is_bilinear(f in poly(Signature::laurent(2)), g in poly(Signature::laurent(2)), h in poly(Signature::laurent(2)), c in field()) {
        let k = BracketKind::for_signature(Signature::laurent(2));
        let lhs = k.bracket(&(&f + &g.scale(&c)), &h).unwrap();
        let rhs = &k.bracket(&f, &h).unwrap() + &k.bracket(&g, &h).unwrap().scale(&c);
        prop_assert_eq!(lhs, rhs);
    }
}
