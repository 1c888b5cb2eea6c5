use mckay::filtration::{FiltrationError, HamiltonianProfile, Piece, ProfileSpec};
use mckay::groups::DEFAULT_CAP;
use mckay::io::builtin::sample_builtin_names;
use mckay::io::render::{svg_position, SVG_COLUMN_WIDTH, SVG_ROW_HEIGHT};
use mckay::io::{
    builtin, emit_report, parse_report, parse_spec, render_ascii, render_svg, Diagram, Format,
    GroupSpec, PageKind, ReportError,
};
use num_rational::Rational64;

fn three() -> Rational64 {
    Rational64::from_integer(3)
}

#[test]
fn json_round_trip_and_determinism() {
    for name in sample_builtin_names() {
        let spec = builtin(&name).unwrap();
        let r = mckay::analyze(&spec, three(), DEFAULT_CAP).unwrap();
        let bytes = emit_report(&r, Format::Json).unwrap();
        assert_eq!(parse_report(&bytes).unwrap(), r, "{name}");
        let again = mckay::analyze(&spec, three(), DEFAULT_CAP).unwrap();
        assert_eq!(emit_report(&again, Format::Json).unwrap(), bytes, "{name}");
    }
}

#[test]
fn report_keys() {
    let r = mckay::analyze(&builtin("cyclic_A2").unwrap(), three(), DEFAULT_CAP).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&emit_report(&r, Format::Json).unwrap()).unwrap();
    for key in ["version", "group", "classes", "age_census", "orbits", "pages", "betti", "checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["slope"], "3/1");
    assert_eq!(v["betti"], serde_json::json!([1, 2]));
}

#[test]
fn unknown_keys_are_rejected() {
    let r = mckay::analyze(&builtin("cyclic_A1").unwrap(), three(), DEFAULT_CAP).unwrap();
    let mut v: serde_json::Value = serde_json::from_slice(&emit_report(&r, Format::Json).unwrap()).unwrap();
    v["surprise"] = serde_json::json!(1);
    assert!(matches!(
        parse_report(v.to_string().as_bytes()),
        Err(ReportError::Schema(_))
    ));
}

#[test]
fn svg_is_not_a_report_format() {
    let r = mckay::analyze(&builtin("cyclic_A1").unwrap(), three(), DEFAULT_CAP).unwrap();
    assert!(matches!(emit_report(&r, Format::Svg), Err(ReportError::UnsupportedFormat(_))));
    let text = String::from_utf8(emit_report(&r, Format::Text).unwrap()).unwrap();
    assert!(text.contains("betti"));
}

#[test]
fn spec_round_trip() {
    let specs = [
        GroupSpec::Lens { m: 5, weights: vec![1, 4] },
        GroupSpec::Builtin { name: "binary_tetrahedral".into() },
        GroupSpec::Explicit {
            n: 2,
            cyclotomic_order: 4,
            generators: vec![vec![
                vec!["z".into(), "0".into()],
                vec!["0".into(), "-z".into()],
            ]],
        },
    ];
    for spec in specs {
        let text = serde_json::to_string(&spec).unwrap();
        let file = parse_spec(&text).unwrap();
        assert_eq!(file.spec, spec);
        assert!(file.profile.is_none());
    }
}

#[test]
fn diagrams_match_page_tables() {
    let r = mckay::analyze(&builtin("binary_dihedral_D4").unwrap(), three(), DEFAULT_CAP).unwrap();
    for (page, table) in [
        (PageKind::Sc, &r.pages.sc),
        (PageKind::ScPlus, &r.pages.sc_plus),
        (PageKind::EscPlus, &r.pages.esc_plus),
    ] {
        let d = Diagram::from_report(&r, page);
        assert_eq!(&d.rank_table(), table, "{page:?}");
        let ascii = render_ascii(&d);
        assert!(!ascii.is_empty());
    }
}

#[test]
fn svg_coordinates() {
    let r = mckay::analyze(&builtin("cyclic_A1").unwrap(), Rational64::new(5, 2), DEFAULT_CAP).unwrap();
    let d = Diagram::from_report(&r, PageKind::ScPlus);
    let svg = render_svg(&d);
    assert!(svg.starts_with("<svg"));
    let top = *d.columns.iter().flat_map(|c| &c.degrees).max().unwrap();
    let (x0, y0) = svg_position(0, top, top);
    let (x1, y1) = svg_position(1, top - 1, top);
    assert_eq!((x1 - x0, y1 - y0), (SVG_COLUMN_WIDTH, SVG_ROW_HEIGHT));
    for c in &d.columns {
        for deg in &c.degrees {
            assert!(svg.contains(&format!("data-degree=\"{deg}\"")));
        }
    }
}

#[test]
fn input_file_with_profile() {
    let file = parse_spec(r#"{"type": "builtin", "name": "cyclic_A1", "profile": {"final_slope": "13/4"}}"#).unwrap();
    assert_eq!(file.profile.unwrap().final_slope.as_deref(), Some("13/4"));
    assert!(parse_spec(r#"{"type": "lens", "m": 3}"#).is_err());
    assert!(parse_spec(r#"{"type": "lens", "m": 3, "weights": [1, 2], "extra": 0}"#).is_err());
}

#[test]
fn profile_from_explicit_pieces() {
    let periods = [Rational64::new(1, 2), Rational64::from_integer(1)];
    let spec = ProfileSpec {
        r0: Some(1.0),
        r1: Some(4.0),
        r_flat: Some(4.0),
        h_prime: Some(vec![Piece { start: 0.0, coeffs: vec![0.0, 0.5] }]),
        phi: Some(vec![
            Piece { start: 0.0, coeffs: vec![0.0] },
            Piece { start: 1.0, coeffs: vec![0.0, 1.0 / 3.0] },
            Piece { start: 4.0, coeffs: vec![1.0] },
        ]),
        ..Default::default()
    };
    let p = HamiltonianProfile::from_spec(&spec, &periods, three(), 2).unwrap();
    assert_eq!((p.r0, p.r1, p.r_flat), (1.0, 4.0, 4.0));
    // ∫_1^4 (1/3)(R/2) dR = 15/12.
    assert!((p.integrate(1.0, 4.0).unwrap() - 1.25).abs() < 1e-9);

    let partial = ProfileSpec { r0: Some(1.0), ..Default::default() };
    assert!(matches!(
        HamiltonianProfile::from_spec(&partial, &periods, three(), 2),
        Err(FiltrationError::Invalid(_))
    ));
    let resonant = ProfileSpec { final_slope: Some("5/2".into()), ..Default::default() };
    assert!(matches!(
        HamiltonianProfile::from_spec(&resonant, &periods, three(), 2),
        Err(FiltrationError::NonGenericSlope(_))
    ));
}
