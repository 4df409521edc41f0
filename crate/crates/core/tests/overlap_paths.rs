use spdc_oam::overlap::{closed_form_coefficient, coefficient, coefficient_with_method, Method};
use spdc_oam::spectrum::PovGeometry;
use spdc_oam::{ModeSpec, QuadratureConfig};

#[test]
fn full_2d_matches_radial_reduction() {
    let q = QuadratureConfig::default();
    let g = PovGeometry::default();
    let lg = |l| ModeSpec::lg(l, 0);
    let pov = |l| ModeSpec::pov(l, g.r0, g.w0);
    let triples = [
        (lg(0), lg(0), lg(0)),
        (lg(1), lg(1), lg(0)),
        (lg(2), lg(-1), lg(3)),
        (lg(-3), lg(-1), lg(-2)),
        (ModeSpec::lg(1, 1), lg(0), lg(1)),
        (pov(0), lg(1), lg(-1)),
        (pov(2), lg(2), lg(0)),
        (pov(1), pov(0), pov(1)),
        (pov(3), pov(1), pov(2)),
        (pov(-2), pov(-4), pov(2)),
    ];
    for (p, s, i) in triples {
        let radial = coefficient(&p, &s, &i, &q).unwrap().value;
        let full = coefficient_with_method(&p, &s, &i, &q, Method::Full2D)
            .unwrap()
            .value;
        assert!(
            (radial - full).norm() <= 1e-10 * radial.norm(),
            "{p:?} {s:?} {i:?}: {radial} vs {full}"
        );
    }
}

#[test]
fn full_2d_vanishes_off_conservation() {
    let q = QuadratureConfig::default();
    let c = coefficient_with_method(
        &ModeSpec::lg(2, 0),
        &ModeSpec::lg(1, 0),
        &ModeSpec::lg(0, 0),
        &q,
        Method::Full2D,
    )
    .unwrap();
    assert!(c.value.norm() < 1e-14);
    let closed = closed_form_coefficient(2, 1, 0);
    assert_eq!(closed, 0.0);
}
