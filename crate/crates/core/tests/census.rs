use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use newton_strata::census::{census, normalize, CensusConfig};
use newton_strata::cyclotomic::{l_function, newton_polygon_of_l};
use newton_strata::field::{build_field, ExtensionField, DEFAULT_ENUMERATION_CAP};
use newton_strata::fqpoly::FqPolynomial;
use newton_strata::polygon::{hodge_polygon, NewtonPolygon};

fn np(f: &FqPolynomial) -> NewtonPolygon {
    newton_polygon_of_l(&l_function(f, DEFAULT_ENUMERATION_CAP).unwrap()).unwrap()
}

fn random_monic(field: &ExtensionField, d: usize, rng: &mut ChaCha8Rng) -> FqPolynomial {
    let mut coeffs: Vec<_> = (0..d).map(|_| field.random(rng)).collect();
    coeffs.push(field.one());
    FqPolynomial::new(field, coeffs).unwrap()
}

#[test]
fn normalization_preserves_the_polygon() {
    let f11 = build_field(11, 1, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let f = random_monic(&f11, 3, &mut rng);
        let (g, t) = normalize(&f).unwrap();
        let g = g.to_polynomial();
        assert_eq!(g.coeff(2), f11.zero());
        assert_eq!(g.coeff(0), f11.zero());
        // g(x) = f(x + t) - f(t)
        let x = f11.from_u64(7);
        assert_eq!(
            g.eval(&x).unwrap(),
            &f.eval(&(&x + &t)).unwrap() - &f.eval(&t).unwrap()
        );
        assert_eq!(np(&f), np(&g));
    }
}

#[test]
fn normalization_over_an_extension() {
    let f = build_field(13, 2, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..3 {
        let poly = random_monic(&f, 3, &mut rng);
        let (g, _) = normalize(&poly).unwrap();
        assert_eq!(np(&poly), np(&g.to_polynomial()));
    }
}

#[test]
fn polygon_does_not_depend_on_the_character() {
    // x -> zeta^{c Tr(x)} is the character of c f
    let f13 = build_field(13, 1, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..4 {
        let f = random_monic(&f13, 4, &mut rng);
        let base = np(&f);
        for c in 2..13 {
            assert_eq!(np(&f.scale(&f13.from_u64(c))), base, "c = {c}");
        }
    }
}

#[test]
fn census_json_is_deterministic() {
    let config = CensusConfig::sample(3, 11, 2, 40, 99);
    let a = census(&config).unwrap().to_json();
    let b = census(&config).unwrap().to_json();
    assert_eq!(a, b);
    let other = census(&CensusConfig::sample(3, 11, 2, 40, 100))
        .unwrap()
        .to_json();
    assert_ne!(a, other);
    let json: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["records"].as_array().unwrap().len(), 40);
    assert_eq!(json["fields"].as_array().unwrap().len(), 2);
}

#[test]
fn generic_polygon_is_independent_of_m() {
    let one = census(&CensusConfig::exhaustive(3, 11, 1)).unwrap();
    let two = census(&CensusConfig::sample(3, 11, 2, 30, 5)).unwrap();
    assert_eq!(one.gnp, two.gnp);
    assert!(two.records.iter().all(|r| r.gnp_vertices == one.gnp));
    assert!(two.summary.passed());
}

#[test]
fn split_prime_census_is_hodge() {
    let out = census(&CensusConfig::exhaustive(3, 13, 1)).unwrap();
    let hp = hodge_polygon(3).unwrap();
    assert_eq!(out.records.len(), 13);
    assert!(out
        .records
        .iter()
        .all(|r| r.is_generic && r.np_vertices == hp));
}

#[test]
fn quadratic_census() {
    let out = census(&CensusConfig::exhaustive(2, 7, 1)).unwrap();
    assert_eq!(out.records.len(), 1);
    assert_eq!(out.records[0].np_vertices.to_string(), "(0,0),(1,1/2)");
    assert!(out.summary.passed());
}

#[test]
fn census_records_carry_congruence_reports() {
    let mut config = CensusConfig::exhaustive(3, 11, 1);
    config.with_congruence = true;
    let out = census(&config).unwrap();
    assert_eq!(out.summary.congruence_failures, Some(0));
    assert!(out
        .records
        .iter()
        .all(|r| r.congruence.as_ref().is_some_and(|c| c.pass)));
    config.m = 2;
    assert!(census(&config).is_err());
}
