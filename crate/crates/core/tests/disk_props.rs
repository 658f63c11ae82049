use ainv_core::disk::*;
use ainv_core::net::{InverseNet, Schedule};
use ainv_core::verify::{check_approx_invertible, Verdict};
use ainv_core::{AlgebraModel, SeedStream};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sampling() -> CircleSampling {
    CircleSampling::new(1024).unwrap()
}

/// Evaluates `sum_k c_k z^k` with explicit powers, independent of Horner.
fn eval_powers(p: &PolyA0, z: Complex64) -> Complex64 {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(i, &ck)| ck * z.powu(i as u32 + 1))
        .sum()
}

#[test]
fn sup_norm_examples() {
    let s = sampling();
    assert!((sup_norm_disk(&PolyA0::chi1(), &s) - 1.0).abs() < 1e-15);
    let p = PolyA0::new(vec![c(2.0), c(0.0)]);
    assert!((sup_norm_disk(&p, &s) - 2.0).abs() < 1e-15);
    let q = PolyA0::new(vec![c(1.0), c(1.0)]);
    assert!((sup_norm_disk(&q, &s) - 2.0).abs() < 1e-15);
}

#[test]
fn sampled_sup_is_monotone_under_refinement() {
    let coarse = CircleSampling::new(1024).unwrap();
    let fine = CircleSampling::new(4096).unwrap();
    for (i, z) in coarse.circle().iter().enumerate() {
        assert_eq!(*z, fine.circle()[4 * i]);
    }
    let mut r = SeedStream::new(3).rng(0);
    for _ in 0..100 {
        let p = random_poly(1 + r.random_range(0..16), 1.5, &mut r);
        assert!(sup_norm_disk(&p, &fine) >= sup_norm_disk(&p, &coarse));
        assert!(annulus_deviation(&p, &fine) >= annulus_deviation(&p, &coarse));
    }
}

#[test]
fn schwarz_examples_and_seeded_pairs() {
    let s = sampling();
    let mut r = SeedStream::new(4).rng(0);
    let p = random_poly(5, 1.0, &mut r);
    assert!(schwarz_check(&p, c(0.0), &s).unwrap());
    assert!(schwarz_check(&p, c(1.0001), &s).is_err());
    for _ in 0..500 {
        let p = random_poly(1 + r.random_range(0..16), 1.0 + 2.0 * r.random::<f64>(), &mut r);
        let z = Complex64::from_polar(r.random::<f64>().sqrt(), 6.3 * r.random::<f64>());
        assert!(schwarz_check(&p, z, &s).unwrap());
    }
    // Equality for chi_1.
    let z = Complex64::new(0.3, -0.4);
    assert!((PolyA0::chi1().eval(z).norm() - z.norm() * sup_norm_disk(&PolyA0::chi1(), &s)).abs() < 1e-15);
}

#[test]
fn annulus_and_product_examples() {
    let s = sampling();
    assert!((annulus_deviation(&PolyA0::zero(), &s) - 1.0).abs() < 1e-15);
    assert!((annulus_deviation(&PolyA0::chi1(), &s) - 2.0).abs() < 1e-15);
    let chi = PolyA0::chi1();
    assert!((product_deviation(&chi, &chi, &s) - 2.0).abs() < 1e-12);
    assert!((product_deviation(&chi, &PolyA0::zero(), &s) - 1.0).abs() < 1e-15);
}

#[test]
fn isometry_of_multiplication_by_z() {
    let s = sampling();
    let (a, b) = chi1_isometry_check(&PolyA0::chi1(), &s);
    assert!((a - 1.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
    let f = PolyA0::monomial(2, c(3.0)).unwrap();
    let (a, b) = chi1_isometry_check(&f, &s);
    assert!((a - 3.0).abs() < 1e-14 && (b - 3.0).abs() < 1e-14);
    let mut r = SeedStream::new(5).rng(0);
    for _ in 0..200 {
        let p = random_poly(1 + r.random_range(0..16), 1.0, &mut r);
        let (a, b) = chi1_isometry_check(&p, &s);
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn products_are_exact_on_samples() {
    let s = sampling();
    let mut r = SeedStream::new(6).rng(0);
    for _ in 0..50 {
        let p = random_poly(1 + r.random_range(0..8), 1.0, &mut r);
        let q = random_poly(1 + r.random_range(0..8), 1.0, &mut r);
        let pq = p.mul(&q);
        assert_eq!(pq.degree(), p.degree() + q.degree());
        for &z in s.circle().iter().step_by(7) {
            assert!((pq.eval(z) - eval_powers(&p, z) * eval_powers(&q, z)).norm() <= 1e-10);
        }
    }
}

#[test]
fn searches_stay_a_third_away() {
    let s = sampling();
    let config = SearchConfig {
        starts: 2000,
        ..SearchConfig::default()
    };
    let bound = 1.0 / 3.0 - 1e-2;
    let a = search_annulus_deviation(8, &s, config, SeedStream::new(1)).unwrap();
    assert!(a.value >= bound, "annulus {}", a.value);
    let p = search_product_deviation(4, &s, config, SeedStream::new(2)).unwrap();
    assert!(p.value >= bound, "product {}", p.value);
    let d = search_identity_defect(8, &s, config, SeedStream::new(3)).unwrap();
    assert!(d.value >= bound, "identity {}", d.value);
    // The reported point reproduces the reported value.
    let again = annulus_deviation(&PolyA0::new(a.point.clone()), &s);
    assert!((again - a.value).abs() < 1e-15);
}

/// `p - 1` averages to `-1` over any sampled circle when the degree is below
/// the number of angles, so no sampled deviation is below 1, and `p = 0`
/// reaches it.
#[test]
fn searches_find_the_mean_value_floor() {
    let s = sampling();
    let config = SearchConfig {
        starts: 2000,
        ..SearchConfig::default()
    };
    for found in [
        search_annulus_deviation(6, &s, config, SeedStream::new(11)).unwrap(),
        search_product_deviation(3, &s, config, SeedStream::new(12)).unwrap(),
        search_identity_defect(6, &s, config, SeedStream::new(13)).unwrap(),
    ] {
        assert!(found.value >= 1.0 - 1e-12, "{}", found.value);
        assert!(found.value <= 1.0 + 1e-2, "{}", found.value);
    }
    assert_eq!(annulus_deviation(&PolyA0::zero(), &s), 1.0);
}

#[test]
fn refinement_never_makes_the_minimum_worse() {
    let s = sampling();
    let objective = |x: &[Complex64]| annulus_deviation(&PolyA0::new(x.to_vec()), &s);
    let raw = minimize(
        3,
        SearchConfig {
            starts: 300,
            passes: 0,
            ..SearchConfig::default()
        },
        SeedStream::new(9),
        objective,
    )
    .unwrap();
    let refined = minimize(
        3,
        SearchConfig {
            starts: 300,
            ..SearchConfig::default()
        },
        SeedStream::new(9),
        objective,
    )
    .unwrap();
    assert!(refined.value <= raw.value);
    assert!(refined.evaluations > raw.evaluations);
}

#[test]
fn model_refuses_every_element() {
    let model = DiskAlgebra::new(sampling());
    let mut r = SeedStream::new(7).rng(0);
    let x = model.random_element(&mut r);
    let net = InverseNet::right(|_| PolyA0::chi1());
    let cert = check_approx_invertible(&model, x, net, &[PolyA0::chi1()], 1e-2, &Schedule::up_to(2).unwrap()).unwrap();
    assert_eq!(cert.verdict, Verdict::Refuted);
    assert!(model.unit().is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sup_norm_is_submultiplicative(seed in any::<u64>()) {
        let s = sampling();
        let model = DiskAlgebra::new(s);
        let mut r = SeedStream::new(seed).rng(0);
        let a = model.random_element(&mut r);
        let b = model.random_element(&mut r);
        prop_assert!(model.norm(&model.mul(&a, &b)) <= model.norm(&a) * model.norm(&b) * (1.0 + 1e-9));
    }

    #[test]
    fn horner_matches_powers(seed in any::<u64>(), re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let mut r = SeedStream::new(seed).rng(1);
        let p = random_poly(12, 2.0, &mut r);
        let z = Complex64::new(re, im);
        prop_assert!((p.eval(z) - eval_powers(&p, z)).norm() <= 1e-12);
    }
}
