use mckay::czindex::{constant_orbit_bound, cz_morse_bott, w_function};
use mckay::floer::{e1_plain, gysin_solve, orbit_catalog, stack_f_summands, FloerError};
use mckay::groups::{close, DEFAULT_CAP};
use mckay::io::{builtin, GroupSpec};
use mckay::mckay::prepare;
use mckay::spectrum::SpectralGroup;
use num_rational::Rational64;
use proptest::prelude::*;

fn sg(spec: &GroupSpec) -> SpectralGroup {
    prepare(close(&spec.generators().unwrap(), DEFAULT_CAP).unwrap()).unwrap().0
}

#[test]
fn cotangent_bundle_of_sphere_gradings() {
    let g = sg(&builtin("cyclic_A1").unwrap());
    let cat = orbit_catalog(&g, Rational64::from_integer(2)).unwrap();
    let mu: Vec<i64> = cat.orbits.iter().map(|o| o.mu).collect();
    assert_eq!(mu, vec![-2, -4, -6, -8]);
    let periods: Vec<Rational64> = cat.orbits.iter().map(|o| o.period).collect();
    assert_eq!(
        periods,
        [(1, 2), (1, 1), (3, 2), (2, 1)].map(|(a, b)| Rational64::new(a, b)).to_vec()
    );
    assert!(cat.orbits.iter().all(|o| o.dim_b == 3));
}

#[test]
fn z3_summand_tops() {
    let g = sg(&builtin("c3z3").unwrap());
    let cat = orbit_catalog(&g, Rational64::from_integer(3)).unwrap();
    let f = stack_f_summands(&g, &cat).unwrap();
    let tops: Vec<i64> = f.iter().map(|s| s.mu_g).collect();
    assert_eq!(tops, vec![-1, 3, 1]);
    let sh = gysin_solve(&f);
    assert_eq!(sh.support(), vec![-1, 1, 3]);
}

#[test]
fn index_formula_samples() {
    // n = 2, age 1, minimal eigenvalue, d = 2: the T*S^2 bottom orbit.
    let r = cz_morse_bott(2, 1, 0, 3, 0).unwrap();
    assert_eq!((r.cz, r.mu), (2, -2));
    assert_eq!(w_function(Rational64::new(1, 2)), 1);
    assert_eq!(w_function(Rational64::from_integer(-1)), -2);
    let b = constant_orbit_bound(&[-1, -1, -1], Rational64::from_integer(1)).unwrap();
    assert!(b.holds);
}

#[test]
fn slope_below_one_turn_is_refused_for_summands() {
    let g = sg(&builtin("cyclic_A2").unwrap());
    let cat = orbit_catalog(&g, Rational64::new(1, 2)).unwrap();
    assert!(matches!(stack_f_summands(&g, &cat), Err(FloerError::SlopeTooSmall(_))));
    assert_eq!(
        orbit_catalog(&g, Rational64::from_integer(0)).unwrap_err(),
        FloerError::NonPositiveSlope
    );
}

#[test]
fn non_isolated_catalog_is_refused() {
    let spec = GroupSpec::Lens { m: 3, weights: vec![1, 2, 0] };
    let g = sg(&spec);
    assert!(matches!(
        orbit_catalog(&g, Rational64::from_integer(2)),
        Err(FloerError::NotIsolated { .. })
    ));
}

fn isolated_lens() -> impl Strategy<Value = (u64, Vec<i64>)> {
    (2i64..=30, prop::collection::vec(1i64..30, 1..3)).prop_filter_map("coprime SL weights", |(m, w)| {
        let mut w: Vec<i64> = w.into_iter().map(|x| x.rem_euclid(m)).collect();
        w.push((-w.iter().sum::<i64>()).rem_euclid(m));
        w.iter()
            .all(|&x| num_integer::gcd(x, m) == 1)
            .then_some((m as u64, w))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lens_pipeline_invariants((m, weights) in isolated_lens(), slope in 1i64..=3) {
        let g = sg(&GroupSpec::Lens { m, weights });
        let cat = orbit_catalog(&g, Rational64::from_integer(slope)).unwrap();
        let plain = e1_plain(&cat);
        prop_assert_eq!(plain.total_rank(), 2 * cat.orbits.len());
        for o in &cat.orbits {
            prop_assert_eq!(o.mu % 2, 0);
            prop_assert_eq!(o.mu_max.rem_euclid(2), 1);
        }
        let f = stack_f_summands(&g, &cat).unwrap();
        prop_assert_eq!(f.len(), g.class_count());
        let sh = gysin_solve(&f);
        prop_assert_eq!(sh.total_rank(), g.class_count());
    }
}
