use jconf::annihilation::*;
use jconf::conformal::{FormalPoly, Variety};
use jconf::constructions::jn_index;
use jconf::jordan::{kkm_monomials, KKMElem, Superalgebra};
use jconf::superpoly::{SPoly, Signature, Var};
use jconf::FieldElem;

#[test]
fn coefficient_examples() {
    let j1 = jn_realization(1).unwrap();
    let xi1_minus = FormalPoly::basis(jn_index(1, 1, true));
    let s = Signature::laurent(1);
    assert_eq!(
        j1.coef(&xi1_minus, 2).unwrap(),
        KKMElem::theta_part(SPoly::t_pow(s, 2, 1))
    );
    let one_plus = FormalPoly::basis(jn_index(1, 0, false));
    assert!(j1.coef(&one_plus.d(), 0).unwrap().is_zero());
    assert_eq!(
        j1.coef(&one_plus.d(), 2).unwrap(),
        KKMElem::even_part(SPoly::t_pow(s, 1, 0).scale(&FieldElem::int(-2)))
    );
}

#[test]
fn lambda_dependent_elements_have_no_coefficients() {
    let j0 = jn_realization(0).unwrap();
    let x = FormalPoly::basis(0).times_var(jconf::conformal::FVar::LAMBDA, 1);
    assert!(j0.coef(&x, 0).is_err());
}

#[test]
fn bridge_examples_on_j0() {
    let j0 = jn_realization(0).unwrap();
    let m = FormalPoly::basis(jn_index(0, 0, true));
    assert!(j0.bridge_residual(&m, &m, 0, 0).unwrap().is_zero());
    assert!(j0.bridge_residual(&m, &m, 1, 0).unwrap().is_zero());
    let theta = j0
        .target
        .mul(&j0.coef(&m, 0).unwrap(), &j0.coef(&m, 0).unwrap());
    assert!(theta.is_zero());
}

#[test]
fn current_bridge_on_wider_window() {
    let c = current_realization(kaplansky_k3(), Variety::Jordan).unwrap();
    for m in -5..=5 {
        for k in -5..=5 {
            for i in 0..3 {
                for j in 0..3 {
                    let r = c
                        .bridge_residual(&FormalPoly::basis(i), &FormalPoly::basis(j).d(), m, k)
                        .unwrap();
                    assert!(r.is_zero(), "{i} {j} {m} {k}: {r}");
                }
            }
        }
    }
}

#[test]
fn sl2_triples_up_to_three() {
    for n in 0..=3 {
        let tr = sl2_assign(n).unwrap();
        assert!(
            sl2_residuals(&tr).unwrap().iter().all(SPoly::is_zero),
            "n={n}"
        );
        assert!(
            tr.f.terms().count() == 1 && tr.h.terms().count() == 1 && tr.e.terms().count() == 1
        );
    }
}

#[test]
fn embedding_examples_and_linearity() {
    let n = 1;
    let small = small_signature(n);
    let big = Signature::laurent(n + 3);
    let xi = |i| SPoly::var(big, Var::Xi(i)).unwrap();
    let t = SPoly::var(big, Var::T).unwrap();
    let x = KKMElem::new(
        SPoly::t_pow(small, 1, 0),
        SPoly::var(small, Var::Xi(1)).unwrap(),
    );
    let want = &(&(&t * &xi(2)) + &xi(1)) * &xi(4);
    assert_eq!(tkk_embed(&x, n).unwrap(), want);
}

#[test]
fn tkk_product_holds_and_mutation_breaks_it() {
    let tr = sl2_assign(1).unwrap();
    let mons = kkm_monomials(small_signature(1), -1..=1);
    let mut broken = 0;
    for x in &mons {
        for y in &mons {
            assert!(
                tkk_product_residual(x, y, &tr).unwrap().is_zero(),
                "({x}, {y})"
            );
            if !tkk_product_residual_with(x, y, &tr, &TkkEmbedding::mutated(1))
                .unwrap()
                .is_zero()
            {
                broken += 1;
            }
        }
    }
    assert!(broken > 0);
}
