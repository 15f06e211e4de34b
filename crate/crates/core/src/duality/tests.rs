use super::*;
use crate::lamination::peripheral_word;
use proptest::prelude::*;

fn pt() -> Duality {
    Duality::new(IdealTriangulation::punctured_torus())
}

fn s4() -> Duality {
    Duality::new(IdealTriangulation::sphere_4())
}

fn lam(d: &Duality, a: &[i64]) -> IntegralLamination {
    let mu: Vec<i64> = a.iter().map(|x| 2 * x).collect();
    from_coords(d.triangulation(), &mu).unwrap()
}

fn three_term(d: &Duality) -> QLaurent {
    let eps = d.triangulation().epsilon();
    [[0, 1, 1], [0, 1, -1], [0, -1, -1]].iter().fold(QLaurent::zero(eps.clone()), |acc, p| &acc + &QLaurent::weyl(eps.clone(), p))
}

#[test]
fn i_omega_examples() {
    let d = pt();
    let eps = d.triangulation().epsilon();
    assert_eq!(d.i_omega(&IntegralLamination::empty(3)).unwrap(), QLaurent::one(eps.clone()));
    assert_eq!(d.i_omega(&lam(&d, &[1, 1, 1])).unwrap(), QLaurent::weyl(eps.clone(), &[2, 2, 2]));
    let t = three_term(&d);
    let two = QLaurent::one(eps.clone()).scale(&OmegaScalar::monomial(2, 0));
    assert_eq!(d.i_omega(&lam(&d, &[0, 1, 1])).unwrap(), &(&t * &t) - &two);
}

#[test]
fn i_hat_q_examples() {
    let d = pt();
    let q = d.i_hat_q(&lam(&d, &[0, 1, 1])).unwrap();
    let h = q.highest_term().unwrap();
    assert_eq!(h.exponents, vec![0, 1, 1]);
    assert_eq!(h.coeff, OmegaScalar::monomial(1, -2));
    assert!(q.to_text().starts_with("q^-2 * X2*X3"), "{q}");
    let p = d.i_hat_q(&lam(&d, &[1, 1, 1])).unwrap();
    assert_eq!(p.to_text(), "q^-2 * X1*X2*X3");
    let half = from_coords(d.triangulation(), &[0, 1, 1]).unwrap();
    assert!(matches!(d.i_hat_q(&half), Err(Error::NotInALattice { .. })));
}

#[test]
fn product_examples() {
    let d = pt();
    let l = lam(&d, &[0, 1, 1]);
    let per = lam(&d, &[1, 1, 1]);
    let t = d.product_expand(&l, &per).unwrap();
    assert_eq!(t.rows, vec![(lam(&d, &[1, 2, 2]), OmegaScalar::one())]);
    let t = d.product_expand(&l, &IntegralLamination::empty(3)).unwrap();
    assert_eq!(t.rows, vec![(l.clone(), OmegaScalar::one())]);
    let t = d.product_expand(&l, &l).unwrap();
    assert_eq!(t.rows[0], (lam(&d, &[0, 2, 2]), OmegaScalar::one()));
    let prod = &d.i_hat_q(&l).unwrap() * &d.i_hat_q(&l).unwrap();
    assert_eq!(d.reconstruct(&t).unwrap(), prod);
}

#[test]
fn frobenius_examples() {
    let d = pt();
    for a in [[0, 1, 1], [1, 1, 1], [1, 2, 2]] {
        for n in [1, 3, 5] {
            assert!(d.frobenius_check(&lam(&d, &a), n).unwrap(), "{a:?} N={n}");
        }
    }
    assert_eq!(d.frobenius_check(&lam(&d, &[0, 1, 1]), 4), Err(Error::InvalidRootOrder(4)));
}

#[test]
fn frobenius_is_not_vacuous() {
    // The identity is not vacuous: the unscaled image differs modulo Φ_3.
    let d = pt();
    let l = lam(&d, &[0, 1, 1]);
    let (lhs, rhs) = d.frobenius_sides(&l, 3).unwrap();
    assert_eq!(lhs, rhs);
    assert_ne!(lhs, reduce_mod_cyclotomic(&d.i_hat_q(&l).unwrap(), 3).unwrap());
}

#[test]
fn shift_examples() {
    let d = pt();
    let l = lam(&d, &[0, 1, 1]);
    assert!(d.peripheral_shift_check(&l, &[0, 0, 0]).unwrap());
    assert!(d.peripheral_shift_check(&l, &[1, 1, 1]).unwrap());
    assert!(d.peripheral_shift_check(&l, &[-2, -2, -2]).unwrap());
    assert_eq!(d.peripheral_shift_check(&l, &[1, 0, 0]), Err(Error::KernelViolation(vec![0, -2, 2])));
    let lhs = d.i_hat_q(&lam(&d, &[1, 2, 2])).unwrap();
    let x = QLaurent::from_scalar_term(d.triangulation().epsilon(), vec![1, 1, 1], OmegaScalar::monomial(1, -2))
        .with_generators(Generators::X);
    assert_eq!(lhs, &x * &d.i_hat_q(&l).unwrap());
}

#[test]
fn verify_examples() {
    let d = pt();
    for a in [[0, 1, 1], [-2, -2, -2]] {
        let r = d.verify_bundle(&lam(&d, &a));
        assert!(r.all_passed(), "{}", r.to_text(false));
        assert_eq!(r.checks.len(), 4);
    }
    let s = s4();
    let tri = s.triangulation();
    let curve = (0..3i64.pow(6))
        .map(|code| (0..6).map(|i| 2 * ((code / 3i64.pow(i)) % 3)).collect::<Vec<_>>())
        .filter_map(|mu| from_coords(tri, &mu).ok())
        .find(|l| matches!(l.components(), [c] if c.peripheral.is_none() && c.weight == 2))
        .unwrap();
    let r = s.verify_bundle(&curve);
    assert!(r.all_passed(), "{}", r.to_text(false));
}

#[test]
fn peripheral_images_central() {
    for d in [pt(), s4()] {
        let tri = d.triangulation();
        for p in 0..tri.num_punctures() {
            let mu = tri.peripheral_vector(p).unwrap();
            let l = from_coords(tri, &mu).unwrap();
            assert_eq!(l.components()[0].word, peripheral_word(tri, p).unwrap());
            let q = d.i_omega(&l).unwrap();
            for i in 0..tri.num_edges() {
                assert!(q.commutator(&QLaurent::generator(tri.epsilon(), i)).is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplicative_over_components(a in proptest::collection::vec(0i64..=2, 6)) {
        let d = s4();
        let l = lam(&d, &a);
        let eps = d.triangulation().epsilon();
        let parts: Vec<QLaurent> = l
            .components()
            .iter()
            .map(|c| {
                let mu: Vec<i64> = c.mu.iter().map(|m| m * c.weight).collect();
                d.i_omega(&from_coords(d.triangulation(), &mu).unwrap()).unwrap()
            })
            .collect();
        let whole = d.i_omega(&l).unwrap();
        let fwd = parts.iter().fold(QLaurent::one(eps.clone()), |acc, f| &acc * f);
        let rev = parts.iter().rev().fold(QLaurent::one(eps.clone()), |acc, f| &acc * f);
        prop_assert_eq!(&whole, &fwd);
        prop_assert_eq!(&whole, &rev);
    }

    #[test]
    fn products_reconstruct(a in proptest::collection::vec(0i64..=1, 3), b in proptest::collection::vec(0i64..=1, 3)) {
        let d = pt();
        let (l1, l2) = (lam(&d, &a), lam(&d, &b));
        let t = d.product_expand(&l1, &l2).unwrap();
        let prod = &d.i_hat_q(&l1).unwrap() * &d.i_hat_q(&l2).unwrap();
        prop_assert_eq!(d.reconstruct(&t).unwrap(), prod);
        for (_, c) in &t.rows {
            prop_assert!(c.classical() >= 0);
        }
    }
}
