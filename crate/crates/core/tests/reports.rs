use oddsbox_core::theorems::{run_suite, verify_bridge, verify_inverse_cdu_all};
use oddsbox_core::{materialize, Field, FnSpec, TheoremId, VerifyOptions};

#[test]
fn report_json_shape() {
    let f = Field::new(5, 2, None).unwrap();
    let t = materialize(&f, &FnSpec::power(3)).unwrap();
    let v = verify_bridge(&t, &VerifyOptions::default()).to_json();
    for key in [
        "theorem",
        "field",
        "params",
        "case",
        "predicted",
        "observed",
        "status",
        "counterexamples",
    ] {
        assert!(v.get(key).is_some(), "missing {key} in {v}");
    }
    assert_eq!(v["theorem"], "BRIDGE");
    assert_eq!(v["status"], "PASS");
    assert_eq!(v["field"]["p"], 5);
    assert_eq!(v["field"]["modulus"], serde_json::json!([2, 0, 1]));
    assert_eq!(v["predicted"], serde_json::json!({ "exact": 3 }));
}

#[test]
fn counterexamples_are_capped() {
    // a zero cap keeps no counterexamples
    let f = Field::new(7, 1, None).unwrap();
    let opts = VerifyOptions {
        counterexample_cap: 0,
        ..VerifyOptions::default()
    };
    let r = verify_inverse_cdu_all(&f, &opts);
    assert!(r.passed());
    assert!(r.counterexamples.is_empty());
}

#[test]
fn suite_is_deterministic() {
    let fields: Vec<Field> = [(7, 1), (3, 2), (5, 1)]
        .into_iter()
        .map(|(p, n)| Field::new(p, n, None).unwrap())
        .collect();
    let ids = [
        TheoremId::SwitchBound,
        TheoremId::InvBoomSpectrum,
        TheoremId::IdentI1,
    ];
    let opts = VerifyOptions::default();
    let a: Vec<_> = run_suite(&ids, &fields, &opts)
        .unwrap()
        .iter()
        .map(|r| r.to_json())
        .collect();
    let b: Vec<_> = run_suite(&ids, &fields, &opts)
        .unwrap()
        .iter()
        .map(|r| r.to_json())
        .collect();
    assert_eq!(a, b);
    let order: Vec<String> = a
        .iter()
        .map(|v| v["theorem"].as_str().unwrap().to_string())
        .collect();
    let mut sorted = order.clone();
    sorted.sort_by_key(|s| s.parse::<TheoremId>().unwrap());
    assert_eq!(order, sorted);
}
