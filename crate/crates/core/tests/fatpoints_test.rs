//! Fat-point ideal cross-checks over Q: the initial-degree formula and
//! containment law for the three coordinate points, degree-ratio bounds
//! against the asymptotic invariant, and sub-multiplicativity of initial
//! degrees.

use blowup::fatpoints::field::RationalField;
use blowup::fatpoints::{FatPointScheme, ContainmentRule};
use blowup::rat::{parse_rat, rat};
use blowup::seshadri::{gamma_exact, PointConfiguration};

fn pt(a: &str, b: &str, c: &str) -> Vec<blowup::rat::Rat> {
    [a, b, c]
        .iter()
        .map(|s| parse_rat(s).unwrap())
        .collect()
}

/// The three coordinate points of the plane.
fn coordinate_triangle(mults: Vec<u32>) -> FatPointScheme<RationalField> {
    FatPointScheme::new(
        RationalField,
        2,
        vec![pt("1", "0", "0"), pt("0", "1", "0"), pt("0", "0", "1")],
        mults,
    )
    .unwrap()
}

/// Three collinear points plus one off the line.
fn three_collinear_plus_one(mults: Vec<u32>) -> FatPointScheme<RationalField> {
    FatPointScheme::new(
        RationalField,
        2,
        vec![
            pt("1", "0", "0"),
            pt("0", "1", "0"),
            pt("1", "1", "0"),
            pt("0", "0", "1"),
        ],
        mults,
    )
    .unwrap()
}

#[test]
fn alpha_formula_for_the_coordinate_triangle() {
    // alpha(I^(m)) = 3s + 2i for m = 2s + i, i in {0, 1}.
    let z = coordinate_triangle(vec![1, 1, 1]);
    for m in 1..=9u32 {
        let s = m / 2;
        let i = m % 2;
        assert_eq!(z.alpha_symbolic(m).unwrap(), 3 * s + 2 * i, "m = {m}");
    }
    assert_eq!(z.regularity(), 2);
    assert_eq!(z.alpha().unwrap(), 2);
}

#[test]
fn containment_law_for_the_coordinate_triangle() {
    // I^(m) in I^r exactly when 3m >= 4r - 1, for r <= m (and the degree
    // criteria never disagree with the sweep).
    let z = coordinate_triangle(vec![1, 1, 1]);
    for r in 1..=5u32 {
        for m in r..=8u32 {
            let (direct, _bh) = z.containment_with_consistency(m, r).unwrap();
            let law = 3 * m >= 4 * r - 1;
            assert_eq!(
                direct.contained, law,
                "m = {m}, r = {r}: sweep disagrees with the law"
            );
            assert_eq!(direct.rule, ContainmentRule::Direct);
        }
    }
}

#[test]
fn small_power_rule_fires_below_r() {
    let z = coordinate_triangle(vec![1, 1, 1]);
    let c = z.contains_symbolic_in_power(1, 2).unwrap();
    assert!(!c.contained);
    assert_eq!(c.rule, ContainmentRule::SmallPower);
}

#[test]
fn ordinary_powers_start_at_twice_r() {
    // I is generated in degree 2, so alpha(I^r) = 2r; checked against the
    // computed power components.
    let z = coordinate_triangle(vec![1, 1, 1]);
    for r in 1..=3u32 {
        assert_eq!(z.power_component(r, 2 * r - 1).unwrap().dim(), 0);
        assert!(z.power_component(r, 2 * r).unwrap().dim() > 0);
    }
}

#[test]
fn resurgence_collapses_for_the_coordinate_triangle() {
    // Samples reach the Waldschmidt constant 3/2 at m = 2; the per-point
    // bound 1/2 (three general-enough points) matches it from below, and
    // the resurgence interval collapses onto 4/3.
    let z = coordinate_triangle(vec![1, 1, 1]);
    let est = z.waldschmidt_estimate(4, Some(&rat(1, 2))).unwrap();
    assert_eq!(est.lower, rat(3, 2));
    assert_eq!(est.upper, rat(3, 2));
    let (lo, hi) = z.resurgence_bounds(&est.lower, &est.upper).unwrap();
    assert_eq!(lo, rat(4, 3));
    assert_eq!(hi, rat(4, 3));
}

#[test]
fn hilbert_function_stabilizes_at_the_scheme_degree() {
    let cases = [
        coordinate_triangle(vec![1, 1, 1]),
        coordinate_triangle(vec![2, 1, 1]),
        three_collinear_plus_one(vec![1, 1, 1, 1]),
        three_collinear_plus_one(vec![2, 2, 2, 2]),
    ];
    for z in &cases {
        let reg = z.regularity();
        for t in reg..=(reg + 3) {
            assert_eq!(z.hilbert_function(t), z.degree());
        }
        if reg > 0 {
            assert!(z.hilbert_function(reg - 1) <= z.degree());
        }
    }
}

#[test]
fn uniform_degrees_dominate_gamma_lower_bound() {
    // d_m / m >= gamma for the three-collinear-plus-one configuration
    // (gamma = 5/3), with the known degree sequence 2, 4, 5, 7, 9, 10.
    let gamma = gamma_exact(&PointConfiguration::ThreeCollinearPlusOne)
        .unwrap()
        .value;
    assert_eq!(gamma, rat(5, 3));
    let expected = [2u32, 4, 5, 7, 9, 10];
    let z = three_collinear_plus_one(vec![1, 1, 1, 1]);
    for (i, want) in expected.iter().enumerate() {
        let m = (i + 1) as u32;
        let d_m = z.alpha_symbolic(m).unwrap();
        assert_eq!(d_m, *want, "d_{m}");
        assert!(rat(d_m as i64, m as i64) >= gamma, "d_{m}/{m} below gamma");
    }
}

#[test]
fn initial_degrees_are_submultiplicative() {
    // d_(ab) <= a * d_b for a, b <= 3, on two configurations.
    let schemes: [fn(Vec<u32>) -> FatPointScheme<RationalField>; 2] = [
        |m| coordinate_triangle(m),
        |m| three_collinear_plus_one(m),
    ];
    for (idx, make) in schemes.iter().enumerate() {
        let npts = if idx == 0 { 3 } else { 4 };
        let z = make(vec![1; npts]);
        for a in 1..=3u32 {
            for b in 1..=3u32 {
                let d_ab = z.alpha_symbolic(a * b).unwrap();
                let d_b = z.alpha_symbolic(b).unwrap();
                assert!(
                    d_ab <= a * d_b,
                    "config {idx}: d_({a}*{b}) = {d_ab} > {a} * d_{b} = {}",
                    a * d_b
                );
            }
        }
    }
}

#[test]
fn symbolic_alpha_matches_fat_point_alpha() {
    // alpha(I(Z)^(m)) for reduced Z equals alpha of the fattened scheme mZ.
    let z = three_collinear_plus_one(vec![1, 1, 1, 1]);
    for m in 1..=4u32 {
        let fat = three_collinear_plus_one(vec![m; 4]);
        assert_eq!(z.alpha_symbolic(m).unwrap(), fat.alpha().unwrap());
    }
}
