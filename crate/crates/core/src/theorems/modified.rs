//! Differential uniformity of the inverse map composed with the 3-cycle
//! `(0 1 -1)`, and of the binomial `X^{q-2} + u X^2`.

use rayon::prelude::*;
use serde_json::json;

use super::{
    Claim, Counterexample, Mismatches, Prediction, TheoremId, VerificationReport, VerifyOptions,
};
use crate::error::Result;
use crate::field::{Field, Fx};
use crate::funcrep::{catalog, materialize, Family};
use crate::tables::{cddt_entry, differential_uniformity};

/// Checks the differential uniformity of `X^{q-2} o (0 1 -1)`: 3 or 4 for
/// `p = 3` by the parity of `n`, 5 for `p = 13` with `n` even (attained at
/// `(4, 9)` and `(9, 4)`, which are 3 for `n` odd), and 4 otherwise.
pub fn verify_modified_inverse(field: &Field, opts: &VerifyOptions) -> VerificationReport {
    let (p, n) = (field.p(), field.n());
    let spec = catalog(field, Family::ModifiedInverse).expect("always defined");
    let t = materialize(field, &spec).expect("materializes");
    let id = if p == 3 {
        TheoremId::ModInvDuP3
    } else {
        TheoremId::ModInvDuPgt3
    };
    let (case, du_want, entry_want) = match (p, n % 2) {
        (3, 1) => ("p = 3, n odd", 3, None),
        (3, _) => ("p = 3, n even", 4, None),
        (13, 0) => ("p = 13, n even", 5, Some(5)),
        (13, _) => ("p = 13, n odd", 4, Some(3)),
        _ => ("p > 3, p != 13", 4, None),
    };
    let prediction =
        Prediction::new(id, field, case, Claim::Exact(du_want)).param("cycle", [0, 1, -1]);

    let du = differential_uniformity(&t) as u64;
    let mut mismatches = Mismatches::new(opts.counterexample_cap);
    if du != du_want {
        mismatches.push(Counterexample::new(&[("check", json!("du"))], du_want, du));
    }
    let mut report_entries = Vec::new();
    if let Some(want) = entry_want {
        let (four, nine) = (field.from_int(4), field.from_int(9));
        for (a, b) in [(four, nine), (nine, four)] {
            let got = cddt_entry(&t, Fx::ONE, a, b);
            report_entries.push(format!("DDT({a}, {b}) = {got}"));
            if got != want {
                mismatches.push(Counterexample::new(
                    &[("a", json!(a)), ("b", json!(b))],
                    want,
                    got,
                ));
            }
        }
    }
    let observed = Claim::Exact(du);
    let agrees = prediction.predicted.accepts(&observed);
    let mut report = VerificationReport::decided(prediction, observed, agrees, mismatches);
    if !report_entries.is_empty() {
        report = report.note(report_entries.join(", "));
    }
    report
}

/// `X^{q-2} + u X^2` has differential uniformity at most 4.
pub fn verify_binomial(field: &Field, u: Fx, opts: &VerifyOptions) -> Result<VerificationReport> {
    let spec = catalog(field, Family::Binomial { u })?;
    let t = materialize(field, &spec)?;
    let du = differential_uniformity(&t) as u64;
    let perm = t.is_permutation();
    let prediction =
        Prediction::new(TheoremId::BinomialDu, field, "DU ≤ 4", Claim::AtMost(4)).param("u", u);
    let mut mismatches = Mismatches::new(opts.counterexample_cap);
    if du > 4 {
        mismatches.push(Counterexample::new(&[("u", json!(u))], 4, du));
    }
    let agrees = du <= 4;
    Ok(
        VerificationReport::decided(prediction, Claim::Exact(du), agrees, mismatches)
            .note(format!("DU = {du}, permutation = {perm}")),
    )
}

/// The binomial bound for every `u != 0`; observed is the largest DU seen.
pub fn verify_binomial_all(field: &Field, opts: &VerifyOptions) -> VerificationReport {
    let results: Vec<(Fx, u64, bool)> = field
        .nonzero()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|u| {
            let spec = catalog(field, Family::Binomial { u }).expect("u is nonzero");
            let t = materialize(field, &spec).expect("materializes");
            (u, differential_uniformity(&t) as u64, t.is_permutation())
        })
        .collect();
    let mut mismatches = Mismatches::new(opts.counterexample_cap);
    let mut worst = 0;
    let mut histogram = std::collections::BTreeMap::<u64, u64>::new();
    let mut perms = Vec::new();
    for &(u, du, perm) in &results {
        worst = worst.max(du);
        *histogram.entry(du).or_default() += 1;
        if perm {
            perms.push(u);
        }
        if du > 4 {
            mismatches.push(Counterexample::new(&[("u", json!(u))], 4, du));
        }
    }
    let prediction = Prediction::new(TheoremId::BinomialDu, field, "DU ≤ 4", Claim::AtMost(4))
        .param("u", "all nonzero");
    let agrees = worst <= 4;
    VerificationReport::decided(prediction, Claim::Exact(worst), agrees, mismatches)
        .note(format!("DU histogram over u: {histogram:?}"))
        .note(format!("permutations at u = {perms:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn field(p: u64, n: u32) -> Field {
        Field::new(p, n, None).unwrap()
    }

    #[test]
    fn modified_inverse_small_fields() {
        let opts = VerifyOptions::default();
        let r27 = verify_modified_inverse(&field(3, 3), &opts);
        assert_eq!(r27.theorem(), TheoremId::ModInvDuP3);
        assert!(r27.passed(), "{r27:?}");
        let r7 = verify_modified_inverse(&field(7, 1), &opts);
        assert_eq!(r7.theorem(), TheoremId::ModInvDuPgt3);
        assert!(r7.passed(), "{r7:?}");
        assert!(verify_modified_inverse(&field(13, 1), &opts).passed());
    }

    #[test]
    fn binomial() {
        let opts = VerifyOptions::default();
        let r = verify_binomial(&field(7, 1), Fx::ONE, &opts).unwrap();
        assert!(r.passed());
        assert_eq!(
            verify_binomial(&field(7, 1), Fx::ZERO, &opts).unwrap_err(),
            Error::ZeroU
        );
        assert!(verify_binomial_all(&field(5, 1), &opts).passed());
    }
}
