//! The BCT / (-1)-DDT bridge for odd APN maps, the spectrum identities and
//! the catalog of odd APN power maps.

use rayon::prelude::*;
use serde_json::json;

use super::{
    inverse::predict_inverse_m1_spectrum, Claim, Counterexample, Mismatches, Prediction, TheoremId,
    VerificationReport, VerifyOptions,
};
use crate::error::{Error, Result};
use crate::field::{Field, Fx};
use crate::funcrep::{catalog, materialize, Family, FnTable};
use crate::tables::{
    bct_row, boomerang_spectrum_power, boomerang_uniformity, c_differential_uniformity, cddt_entry,
    cddt_row, cdiff_spectrum_power, differential_uniformity, Spectrum,
};

fn function_params(p: Prediction, t: &FnTable) -> Prediction {
    match t.power_exponent() {
        Some(d) => p.param("d", d),
        None => p.param("function", "lut"),
    }
}

/// `B(a, b) = (-1)-DDT(a, -b)` for every `a, b != 0`, when `t` is odd and
/// APN. For permutations the boomerang uniformity must also equal the full
/// (-1)-differential uniformity.
pub fn verify_bridge(t: &FnTable, opts: &VerifyOptions) -> VerificationReport {
    let field = t.field();
    let m1 = field.neg_one();
    let odd = t.is_odd();
    let du = differential_uniformity(t);
    if !odd || du != 2 {
        let case = if !odd { "not odd" } else { "not APN" };
        let prediction = function_params(
            Prediction::new(TheoremId::Bridge, field, case, Claim::None),
            t,
        );
        return VerificationReport::not_applicable(
            prediction,
            Claim::Record(json!({ "odd": odd, "du": du })),
            format!("requires an odd APN map; odd = {odd}, DU = {du}"),
        );
    }

    let q = field.q();
    let rows: Vec<(Vec<u32>, Vec<u32>)> = (1..q)
        .into_par_iter()
        .map(|a| (bct_row(t, Fx::new(a)), cddt_row(t, m1, Fx::new(a))))
        .collect();
    let mut mismatches = Mismatches::new(opts.counterexample_cap);
    let (mut b_max, mut d_max) = (0u32, 0u32);
    for (i, (boom, diff)) in rows.iter().enumerate() {
        let a = Fx::new(i as u32 + 1);
        for b in field.nonzero() {
            let got = boom[b.index()];
            let want = diff[field.neg(b).index()];
            b_max = b_max.max(got);
            d_max = d_max.max(want);
            if got != want {
                mismatches.push(Counterexample::new(
                    &[("a", json!(a)), ("b", json!(b))],
                    want,
                    got,
                ));
            }
        }
    }

    let prediction = function_params(
        Prediction::new(
            TheoremId::Bridge,
            field,
            "odd APN",
            Claim::Exact(d_max as u64),
        ),
        t,
    );
    let mut report = VerificationReport::decided(
        prediction,
        Claim::Exact(b_max as u64),
        d_max == b_max,
        mismatches,
    );
    if t.is_permutation() {
        let cdu = c_differential_uniformity(t, m1).value;
        if cdu != b_max {
            report.status = super::Status::Fail;
            report = report.note(format!(
                "permutation: boomerang uniformity {b_max} differs from (-1)-differential uniformity {cdu}"
            ));
        } else {
            report = report.note(format!(
                "permutation: boomerang uniformity = (-1)-differential uniformity = {cdu}"
            ));
        }
    }
    report
}

fn sums_of(s: &Spectrum) -> Claim {
    Claim::Sums {
        total: s.total(),
        weighted: s.weighted_total(),
    }
}

/// `sum_i w_i = q` and `sum_i i w_i = q` for the c-differential spectrum of
/// a power map.
pub fn verify_identity_i1(t: &FnTable, c: Fx, _opts: &VerifyOptions) -> Result<VerificationReport> {
    let field = t.field();
    let spectrum = cdiff_spectrum_power(t, c)?;
    let q = field.q() as u64;
    let predicted = Claim::Sums {
        total: q,
        weighted: q,
    };
    let prediction = function_params(
        Prediction::new(TheoremId::IdentI1, field, "power map", predicted).param("c", c),
        t,
    );
    let observed = sums_of(&spectrum);
    let agrees = prediction.predicted.accepts(&observed);
    Ok(
        VerificationReport::decided(prediction, observed, agrees, Mismatches::new(0))
            .note(format!("spectrum {spectrum}")),
    )
}

/// `sum_i v_i = q - 1` and `sum_i i v_i = q - (-1)-DDT(1, 0)` for the
/// boomerang spectrum of an odd APN power map.
pub fn verify_identity_i2(t: &FnTable, _opts: &VerifyOptions) -> Result<VerificationReport> {
    let field = t.field();
    let spectrum = boomerang_spectrum_power(t)?;
    let observed = sums_of(&spectrum);
    let odd = t.is_odd();
    let du = differential_uniformity(t);
    let q = field.q() as u64;
    if !odd || du != 2 {
        let prediction = function_params(
            Prediction::new(
                TheoremId::IdentI2,
                field,
                if odd { "not APN" } else { "not odd" },
                Claim::None,
            ),
            t,
        );
        return Ok(VerificationReport::not_applicable(
            prediction,
            observed,
            format!("requires an odd APN power map; odd = {odd}, DU = {du}; spectrum {spectrum}"),
        ));
    }
    let zero_count = cddt_entry(t, field.neg_one(), Fx::ONE, Fx::ZERO) as u64;
    let predicted = Claim::Sums {
        total: q - 1,
        weighted: q - zero_count,
    };
    let prediction = function_params(
        Prediction::new(TheoremId::IdentI2, field, "odd APN power map", predicted),
        t,
    )
    .param("m1_ddt_1_0", zero_count);
    let agrees = prediction.predicted.accepts(&observed);
    Ok(
        VerificationReport::decided(prediction, observed, agrees, Mismatches::new(0))
            .note(format!("spectrum {spectrum}")),
    )
}

/// Both identities; I2 is `NOT_APPLICABLE` unless the map is odd APN.
pub fn verify_identities(
    t: &FnTable,
    c: Fx,
    opts: &VerifyOptions,
) -> Result<Vec<VerificationReport>> {
    Ok(vec![
        verify_identity_i1(t, c, opts)?,
        verify_identity_i2(t, opts)?,
    ])
}

fn catalog_families(field: &Field) -> Vec<Family> {
    let mut out = vec![Family::F1, Family::F2, Family::F3, Family::F4];
    let two_n = 2 * field.n();
    let ks: Vec<u32> = (1..two_n).filter(|&k| gcd(two_n, k) == 1).collect();
    if field.p() == 5 && !ks.is_empty() {
        out.extend(ks.into_iter().map(|k| Family::F5 { k }));
    } else {
        out.push(Family::F5 { k: 1 });
    }
    out.push(Family::F6);
    out
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Boomerang uniformity predicted for the inverse map when it is APN: the
/// largest index of its (-1)-differential spectrum once the `b = 0` entry
/// (always 1) is removed.
fn predicted_inverse_boomerang(field: &Field) -> Option<u64> {
    let Claim::Spectrum(mut m) = predict_inverse_m1_spectrum(field).predicted else {
        return None;
    };
    if let Some(w1) = m.get_mut(&1) {
        *w1 -= 1;
    }
    m.retain(|_, v| *v > 0);
    m.keys().next_back().map(|&i| i as u64)
}

/// One report per catalog family; families whose condition fails over this
/// field are `NOT_APPLICABLE`.
pub fn verify_apn_catalog(field: &Field, opts: &VerifyOptions) -> Vec<VerificationReport> {
    catalog_families(field)
        .into_par_iter()
        .map(|family| verify_family(field, family, opts))
        .collect()
}

fn verify_family(field: &Field, family: Family, opts: &VerifyOptions) -> VerificationReport {
    let spec = match catalog(field, family) {
        Ok(spec) => spec,
        Err(e) => {
            let prediction = Prediction::new(
                TheoremId::ApnCatalog,
                field,
                "condition not met",
                Claim::None,
            )
            .param("family", family.to_string());
            let reason = match e {
                Error::ConditionViolated(s) => s,
                other => other.to_string(),
            };
            return VerificationReport::not_applicable(prediction, Claim::None, reason);
        }
    };
    let t = materialize(field, &spec).expect("catalog maps materialize");
    let (case, predicted) = match family {
        Family::F4 => ("B ≤ 5".to_string(), Claim::AtMost(5)),
        Family::F3 => match predicted_inverse_boomerang(field) {
            Some(b) => (format!("B from the (-1)-spectrum: {b}"), Claim::Exact(b)),
            None => ("no spectrum formula".to_string(), Claim::None),
        },
        _ => ("B = 3".to_string(), Claim::Exact(3)),
    };
    let prediction = Prediction::new(TheoremId::ApnCatalog, field, case, predicted)
        .param("family", family.to_string())
        .param("d", t.power_exponent());

    let mut mismatches = Mismatches::new(opts.counterexample_cap);
    let du = differential_uniformity(&t);
    if du != 2 {
        mismatches.push(Counterexample::new(&[("check", json!("du"))], 2, du));
    }
    let odd = t.is_odd();
    if !odd {
        mismatches.push(Counterexample::new(&[("check", json!("odd"))], true, odd));
    }
    if family == Family::F2 {
        let f1 = catalog(field, Family::F1)
            .and_then(|s| materialize(field, &s))
            .and_then(|t1| t1.compositional_inverse());
        let equal = f1.as_ref().map(|inv| *inv == t).unwrap_or(false);
        if !equal {
            mismatches.push(Counterexample::new(
                &[("check", json!("inverse_of_f1"))],
                true,
                equal,
            ));
        }
    }
    let b = boomerang_uniformity(&t).value as u64;
    let observed = Claim::Exact(b);
    let agrees = prediction.predicted.accepts(&observed);
    let mut report = VerificationReport::decided(prediction, observed, agrees, mismatches);
    if family == Family::F4 {
        report = report.note(format!("exact boomerang uniformity {b}"));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::FnSpec;
    use crate::theorems::Status;

    fn field(p: u64, n: u32) -> Field {
        Field::new(p, n, None).unwrap()
    }

    fn table(f: &Field, spec: FnSpec) -> FnTable {
        materialize(f, &spec).unwrap()
    }

    #[test]
    fn bridge_on_cube() {
        let opts = VerifyOptions::default();
        let f25 = field(5, 2);
        let r = verify_bridge(&table(&f25, FnSpec::power(3)), &opts);
        assert_eq!(r.status, Status::Pass, "{:?}", r.counterexamples);
        let f27 = field(3, 3);
        assert_eq!(
            verify_bridge(&table(&f27, FnSpec::power(3)), &opts).status,
            Status::NotApplicable
        );
        let f5 = field(5, 1);
        assert_eq!(
            verify_bridge(&table(&f5, FnSpec::power(2)), &opts).status,
            Status::NotApplicable
        );
    }

    #[test]
    fn identities() {
        let opts = VerifyOptions::default();
        let f7 = field(7, 1);
        let inv = table(&f7, FnSpec::inverse(&f7));
        let r = verify_identity_i1(&inv, f7.neg_one(), &opts).unwrap();
        assert!(r.passed());
        let cube = table(&f7, FnSpec::power(3));
        assert!(verify_identity_i2(&cube, &opts).unwrap().passed());

        let f27 = field(3, 3);
        let inv27 = table(&f27, FnSpec::inverse(&f27));
        let r = verify_identity_i2(&inv27, &opts).unwrap();
        assert_eq!(r.status, Status::NotApplicable);
        assert_eq!(
            r.observed,
            Claim::Sums {
                total: 26,
                weighted: 30
            }
        );

        let lut = FnTable::from_lut(&f7, cube.lut().to_vec()).unwrap();
        assert_eq!(
            verify_identity_i1(&lut, Fx::ONE, &opts).unwrap_err(),
            Error::NotAPowerMap
        );
    }

    #[test]
    fn catalog_over_f125() {
        let reports = verify_apn_catalog(&field(5, 3), &VerifyOptions::default());
        let mut seen = 0;
        for r in &reports {
            let fam = r.prediction.params["family"].as_str().unwrap().to_string();
            if fam.starts_with("f5") || fam == "f6" {
                assert!(r.passed(), "{fam}: {:?}", r);
                assert_eq!(r.observed, Claim::Exact(3));
                seen += 1;
            }
        }
        assert_eq!(seen, 3);
    }

    #[test]
    fn f3_boomerang_follows_spectrum() {
        assert_eq!(predicted_inverse_boomerang(&field(5, 1)), Some(2));
        assert_eq!(predicted_inverse_boomerang(&field(11, 1)), Some(3));
    }
}
