use num_bigint::BigInt;
use pycoxcat::*;
use pyo3::prelude::*;

fn fixture(name: &str) -> String {
    let path = format!("{}/../core/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn path(name: &str) -> String {
    format!("{}/../core/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn theta_classes_and_fraction_witnesses() {
    Python::initialize();
    Python::attach(|py| {
        let th = theta(py, &fixture("h3")).unwrap();
        assert_eq!(th.len(), 6);
        assert!(th.iter().any(|(c, _)| *c == vec![BigInt::from(-1), BigInt::from(-1)]));
        for (_, w) in &th {
            assert_eq!(w.len(), 2);
            assert_eq!(w[0].get_type().name().unwrap().to_string(), "Fraction");
        }
    });
}

#[test]
fn chamber_counts_and_cohomology() {
    assert_eq!(chambers(&fixture("bl2p3")).unwrap(), 5);
    assert_eq!(chambers(&fixture("h3")).unwrap(), 2);
    // O(-2) on P1
    let d = vec![BigInt::from(-2), BigInt::from(0)];
    assert_eq!(cohomology(&fixture("p1"), d, 0).unwrap(), vec![Some(0), Some(1)]);
}

#[test]
fn run_matches_cli() {
    let (code, summary, doc) = run(vec!["theta".into(), "--input".into(), path("p3")]).unwrap();
    assert_eq!(code, 0);
    assert_eq!(summary[0], "theta: 4 elements");
    assert!(doc.contains("\"command\""));
}

#[test]
fn errors_map_to_exception_classes() {
    Python::initialize();
    Python::attach(|py| {
        let e = run(vec!["plot".into(), "secondary-fan".into(), "--input".into(), path("bl2p3")]).unwrap_err();
        assert!(e.is_instance_of::<PreconditionError>(py));
        assert!(e.is_instance_of::<CoxcatError>(py));
        let e = run(vec!["nonsense".into()]).unwrap_err();
        assert!(e.is_instance_of::<SchemaError>(py));
        assert!(chambers("{").unwrap_err().is_instance_of::<SchemaError>(py));
    });
    assert!(!version().is_empty());
}
