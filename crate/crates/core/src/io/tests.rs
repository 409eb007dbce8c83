use super::*;
use crate::polyalg::rat;

fn brunovsky_doc() -> SystemDocument {
    example_document("brunovsky").unwrap()
}

fn error_location(text: &str) -> String {
    match parse_system(text).unwrap_err() {
        Error::Input { location, .. } => location,
        e => panic!("unexpected error {e:?}"),
    }
}

const VALID: &str = r#"{"kind":"control","n":2,"m":1,"A":[["0","1"],["0","0"]],"B":[["0"],["1"]],
  "terms":[{"degree":2,"component":1,"exponents":[0,2,0],"coeff":"1"}]}"#;

#[test]
fn parses_the_basic_control_document() {
    assert_eq!(parse_system(VALID).unwrap(), brunovsky_doc());
}

#[test]
fn diagnostics_name_the_field() {
    assert_eq!(error_location(&VALID.replace(r#""coeff":"1""#, r#""coeff":"1/0""#)), "terms[0].coeff");
    assert_eq!(error_location(&VALID.replace("[0,2,0]", "[1,2,0]")), "terms[0].exponents");
    assert_eq!(error_location(&VALID.replace(r#""component":1"#, r#""component":3"#)), "terms[0].component");
    assert_eq!(error_location(&VALID.replace(r#"["0","0"]]"#, r#"["0"]]"#)), "A");
    assert_eq!(error_location(&VALID.replace(r#""coeff":"1""#, r#""coeff":"0.5""#)), "terms[0].coeff");
    assert!(error_location("{").starts_with("line"));
    let msg = parse_system(&VALID.replace(r#""coeff":"1""#, r#""coeff":"1/0""#)).unwrap_err().to_string();
    assert!(msg.contains("malformed rational"));
}

#[test]
fn canonical_round_trip() {
    for name in EXAMPLE_NAMES {
        let doc = example_document(name).unwrap();
        let text = to_canonical_json(&doc);
        let back = parse_system(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(to_canonical_json(&back), text);
    }
}

#[test]
fn kernel_dimensions() {
    let k = run_kernel(&brunovsky_doc(), 2).unwrap();
    assert_eq!(k.basis.len(), 3);
    assert_eq!(k.range_complement.as_ref().map(Vec::len), Some(1));

    let ode = |a: &str| {
        parse_system(&format!(r#"{{"kind":"ode","n":2,"A":{a},"terms":[]}}"#)).unwrap()
    };
    assert_eq!(run_kernel(&ode(r#"[["1","0"],["0","2"]]"#), 2).unwrap().basis.len(), 1);
    assert_eq!(run_kernel(&ode(r#"[["0","0"],["0","0"]]"#), 2).unwrap().basis.len(), 6);
}

#[test]
fn normalize_and_verify() {
    let doc = brunovsky_doc();
    let report = run_normalize(&doc, 3).unwrap();
    assert!(report.certificates.all_pass());
    assert_eq!(report.certificates.equivariance_zero, None);
    let v = verify_report(&doc, &report).unwrap();
    assert!(v.ok(), "{v:?}");

    let text = to_canonical_json(&report);
    let back: ReportDocument = parse_json(&text).unwrap();
    assert_eq!(back, report);
    assert_eq!(to_canonical_json(&run_normalize(&doc, 3).unwrap()), text);

    let mut bad = report.clone();
    bad.generators.get_mut(&2).unwrap().p_x.as_mut().unwrap()[0].coeff = "5".into();
    assert!(!verify_report(&doc, &bad).unwrap().ok());
}

#[test]
fn ode_split_populates_equivariance() {
    let doc = parse_system(
        r#"{"kind":"ode","n":2,"A":[["1","0"],["0","2"]],
            "terms":[{"degree":2,"component":2,"exponents":[2,0],"coeff":"3"},
                     {"degree":2,"component":1,"exponents":[1,1],"coeff":"-1/2"}],
            "semisimple_part":[["1","0"],["0","2"]],"nilpotent_part":[["0","0"],["0","0"]]}"#,
    )
    .unwrap();
    let report = run_normalize(&doc, 3).unwrap();
    assert_eq!(report.certificates.equivariance_zero, Some(true));
    assert!(report.generators.contains_key(&2));
    assert!(verify_report(&doc, &report).unwrap().ok());
}

#[test]
fn linear_only_report() {
    let mut doc = brunovsky_doc();
    doc.terms.clear();
    let report = run_normalize(&doc, 2).unwrap();
    assert!(report.normal_form.is_empty() && report.generators.is_empty());
    assert!(render_report(&report).contains("dx_i/dt = (linear) for all i"));
}

#[test]
fn pretty_polynomials() {
    let names = variable_names(2, 1);
    let e1 = [1, 0, 1];
    let e2 = [0, 2, 0];
    assert_eq!(
        format_poly([(&e1[..], rat(2, 1)), (&e2[..], rat(-1, 1))], &names),
        "2·x1·u - x2^2"
    );
    assert_eq!(format_poly([(&e2[..], rat(1, 2))], &names), "1/2·x2^2");
    assert_eq!(format_poly([(&e2[..], rat(-1, 1))], &names), "-x2^2");
}

#[test]
fn integrals_document() {
    let d = first_integrals_document(IntegralsSource::Uncontrollable).unwrap();
    assert!(d.integrals.iter().all(|l| l.certified));
    assert!(render_integrals(&d).contains("l3 = -2·z·u + x2^2"));
}
