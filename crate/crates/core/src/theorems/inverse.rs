//! Predictions for the inverse map `X^{q-2}`: its c-differential
//! uniformity, its (-1)-differential spectrum and its boomerang spectrum.

use serde_json::json;

use super::{
    half, Claim, Counterexample, Mismatches, Prediction, TheoremId, VerificationReport,
    VerifyOptions,
};
use crate::error::{Error, Result};
use crate::field::{Chi, Field, Fx};
use crate::funcrep::{materialize, FnSpec, FnTable};
use crate::tables::{
    boomerang_spectrum_power, c_differential_uniformity, cdiff_spectrum_power, Spectrum,
    SpectrumKind,
};

fn inverse_table(field: &Field) -> FnTable {
    materialize(field, &FnSpec::inverse(field)).expect("the inverse map is always defined")
}

/// c-differential uniformity of the inverse map, for `c != 0`.
pub fn predict_inverse_cdu(field: &Field, c: Fx) -> Result<Prediction> {
    field.elem(c.value() as u64)?;
    if c.is_zero() {
        return Err(Error::ZeroC);
    }
    let (value, case) = if c != Fx::ONE {
        let four = field.from_int(4);
        // c^2 - 4c and 1 - 4c
        let disc_one = field.sub(field.mul(c, c), field.mul(four, c));
        let disc_c = field.sub(Fx::ONE, field.mul(four, c));
        let (chi_one, chi_c) = (field.chi(disc_one), field.chi(disc_c));
        if chi_one == Chi::Square || chi_c == Chi::Square {
            (
                3,
                format!("c != 1, χ(c²−4c) = {chi_one}, χ(1−4c) = {chi_c}: one is +1"),
            )
        } else {
            (
                2,
                format!("c != 1, χ(c²−4c) = {chi_one}, χ(1−4c) = {chi_c}: otherwise"),
            )
        }
    } else {
        match field.chi(field.from_int(-3)) {
            Chi::Zero => (3, "c = 1, χ(−3) = 0".to_string()),
            Chi::Square => (4, "c = 1, χ(−3) = +1".to_string()),
            Chi::NonSquare => (2, "c = 1, χ(−3) = −1: otherwise".to_string()),
        }
    };
    Ok(Prediction::new(TheoremId::InvCdu, field, case, Claim::Exact(value)).param("c", c))
}

pub fn verify_inverse_cdu(
    field: &Field,
    c: Fx,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let prediction = predict_inverse_cdu(field, c)?;
    let u = c_differential_uniformity(&inverse_table(field), c);
    let observed = Claim::Exact(u.value as u64);
    let mut mismatches = Mismatches::new(opts.counterexample_cap);
    if !prediction.predicted.accepts(&observed) {
        let (a, b) = u.witnesses[0];
        mismatches.push(Counterexample::new(
            &[("c", json!(c)), ("a", json!(a)), ("b", json!(b))],
            &prediction.predicted,
            u.value,
        ));
    }
    let agrees = prediction.predicted.accepts(&observed);
    Ok(VerificationReport::decided(
        prediction, observed, agrees, mismatches,
    ))
}

/// Checks the c-differential uniformity prediction for every `c != 0`.
pub fn verify_inverse_cdu_all(field: &Field, opts: &VerifyOptions) -> VerificationReport {
    let inverse = inverse_table(field);
    let mut predicted = serde_json::Map::new();
    let mut observed = serde_json::Map::new();
    let mut mismatches = Mismatches::new(opts.counterexample_cap);
    let mut cases = std::collections::BTreeMap::<String, usize>::new();
    for c in field.nonzero() {
        let p = predict_inverse_cdu(field, c).expect("c is nonzero");
        let Claim::Exact(want) = p.predicted else {
            unreachable!()
        };
        let got = c_differential_uniformity(&inverse, c).value as u64;
        predicted.insert(c.to_string(), json!(want));
        observed.insert(c.to_string(), json!(got));
        *cases
            .entry(p.case.split(':').next().unwrap_or("").to_string())
            .or_default() += 1;
        if want != got {
            mismatches.push(Counterexample::new(&[("c", json!(c))], want, got));
        }
    }
    let case = cases
        .iter()
        .map(|(k, n)| format!("{k} [x{n}]"))
        .collect::<Vec<_>>()
        .join("; ");
    let prediction = Prediction::new(
        TheoremId::InvCdu,
        field,
        case,
        Claim::Record(predicted.into()),
    )
    .param("c", "all nonzero");
    VerificationReport::decided(prediction, Claim::Record(observed.into()), true, mismatches)
}

/// The seven-case (-1)-differential spectrum of the inverse map.
pub fn predict_inverse_m1_spectrum(field: &Field) -> Prediction {
    let (p, n, q) = (field.p(), field.n(), field.q());
    let chi5 = field.chi(field.from_int(5));
    let (label, entries): (String, Vec<(u32, i64)>) = if p == 3 && n % 2 == 0 {
        (
            "(1) p = 3, n even".into(),
            vec![(0, half(q, -1)), (1, 3), (2, half(q, -9)), (3, 2)],
        )
    } else if p == 3 {
        (
            "(2) p = 3, n odd".into(),
            vec![(0, half(q, -3)), (1, 3), (2, half(q, -3))],
        )
    } else if p == 5 {
        (
            "(7) p = 5".into(),
            vec![(0, half(q, -1)), (1, 1), (2, half(q, -1))],
        )
    } else if q % 4 == 3 && chi5 == Chi::Square {
        (
            "(3) p^n ≡ 3 mod 4, χ(5) = +1".into(),
            vec![(0, half(q, 1)), (1, 1), (2, half(q, -7)), (3, 2)],
        )
    } else if q % 4 == 3 {
        (
            "(4) p^n ≡ 3 mod 4, χ(5) = −1".into(),
            vec![(0, half(q, -3)), (1, 3), (2, half(q, -3))],
        )
    } else if chi5 == Chi::Square {
        (
            "(5) p^n ≡ 1 mod 4, χ(5) = +1".into(),
            vec![(0, half(q, -1)), (1, 3), (2, half(q, -9)), (3, 2)],
        )
    } else {
        (
            "(6) p^n ≡ 1 mod 4, χ(5) = −1".into(),
            vec![(0, half(q, -5)), (1, 5), (2, half(q, -5))],
        )
    };
    let predicted = spectrum_claim(&entries);
    Prediction::new(TheoremId::InvM1Spectrum, field, label, predicted).param("c", field.neg_one())
}

fn spectrum_claim(entries: &[(u32, i64)]) -> Claim {
    if entries.iter().any(|&(_, m)| m < 0) {
        // formula not meaningful at this size
        return Claim::Record(json!({ "negative_multiplicity": entries }));
    }
    let s = Spectrum::from_pairs(
        SpectrumKind::Boomerang,
        entries.iter().map(|&(i, m)| (i, m as u64)),
    );
    Claim::Spectrum(s.multiplicities)
}

fn compare_spectra(predicted: &Claim, observed: &Spectrum, mismatches: &mut Mismatches) {
    let Claim::Spectrum(want) = predicted else {
        return;
    };
    let keys: std::collections::BTreeSet<u32> = want
        .keys()
        .chain(observed.multiplicities.keys())
        .copied()
        .collect();
    for i in keys {
        let w = want.get(&i).copied().unwrap_or(0);
        let o = observed.get(i);
        if w != o {
            mismatches.push(Counterexample::new(&[("i", json!(i))], w, o));
        }
    }
}

fn sums(claim: &Claim) -> Option<(u64, u64)> {
    match claim {
        Claim::Spectrum(m) => Some((
            m.values().sum(),
            m.iter().map(|(&i, &c)| i as u64 * c).sum(),
        )),
        _ => None,
    }
}

pub fn verify_inverse_m1_spectrum(field: &Field, opts: &VerifyOptions) -> VerificationReport {
    let prediction = predict_inverse_m1_spectrum(field);
    let q = field.q() as u64;
    let observed = cdiff_spectrum_power(&inverse_table(field), field.neg_one()).expect("power map");
    let mut mismatches = Mismatches::new(opts.counterexample_cap);
    // the formulas must satisfy their own count identities before comparison
    let consistent = sums(&prediction.predicted) == Some((q, q));
    compare_spectra(&prediction.predicted, &observed, &mut mismatches);
    let agrees = consistent && prediction.predicted.accepts(&Claim::spectrum(&observed));
    let report =
        VerificationReport::decided(prediction, Claim::spectrum(&observed), agrees, mismatches);
    if consistent {
        report
    } else {
        report.note("predicted spectrum violates sum ω_i = sum i·ω_i = p^n")
    }
}

/// `√−3` (smaller encoding unless `flip`), `Q1 = χ((7 − √−3)/2)` and
/// `Q2 = χ((7 + √−3)/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QValues {
    pub sqrt_minus3: Fx,
    pub q1: Chi,
    pub q2: Chi,
}

/// `None` when `−3` is not a square.
pub fn q_values(field: &Field, flip: bool) -> Option<QValues> {
    let mut r = field.sqrt(field.from_int(-3))?;
    if flip {
        r = field.neg(r);
    }
    let seven = field.from_int(7);
    let half = field.half();
    let q1 = field.chi(field.mul(field.sub(seven, r), half));
    let q2 = field.chi(field.mul(field.add(seven, r), half));
    Some(QValues {
        sqrt_minus3: r,
        q1,
        q2,
    })
}

/// Boomerang spectrum of the inverse map when `χ(−3) ∈ {0, 1}`. Returns a
/// prediction with [`Claim::None`] when `χ(−3) = −1`.
pub fn predict_inverse_boom_spectrum(field: &Field) -> Prediction {
    let (p, n, q) = (field.p(), field.n(), field.q());
    let chi_m3 = field.chi(field.from_int(-3));
    if chi_m3 == Chi::NonSquare {
        return Prediction::new(
            TheoremId::InvBoomSpectrum,
            field,
            "χ(−3) = −1: inverse is APN, the bridge theorem governs",
            Claim::None,
        );
    }
    let qv = q_values(field, false);
    let pair = qv.map(|v| (v.q1, v.q2));
    let q_label = |pair: Option<(Chi, Chi)>| match pair {
        Some((a, b)) => format!("Q1 = {a}, Q2 = {b}"),
        None => "Q undefined".into(),
    };

    use Chi::{NonSquare as M, Square as P};
    let (label, entries): (String, Option<Vec<(u32, i64)>>) = if p == 3 {
        if n % 2 == 1 {
            (
                "p = 3, n odd".into(),
                Some(vec![(0, half(q, -3)), (2, half(q, -3)), (3, 2)]),
            )
        } else {
            (
                "p = 3, n even".into(),
                Some(vec![(0, half(q, -1)), (1, 2), (2, half(q, -9)), (5, 2)]),
            )
        }
    } else if p == 13 {
        if n % 2 == 1 {
            (
                "p = 13, n odd".into(),
                Some(vec![(0, half(q, -9)), (1, 2), (2, half(q, -1)), (3, 2)]),
            )
        } else {
            (
                "p = 13, n even".into(),
                Some(vec![(0, half(q, -1)), (2, half(q, -13)), (3, 4), (4, 2)]),
            )
        }
    } else if p == 5 {
        let label = format!("χ(−3) = +1, p = 5, {}", q_label(pair));
        let entries = match pair {
            Some((P, P)) => Some(vec![(0, half(q, -1)), (2, half(q, -9)), (4, 4)]),
            Some((M, M)) => Some(vec![(0, half(q, -9)), (2, half(q, 7))]),
            _ => None,
        };
        (label, entries)
    } else {
        let chi5 = field.chi(field.from_int(5));
        let residue = q % 4;
        let label = format!(
            "χ(−3) = +1, p ≠ 13, χ(5) = {chi5}, p^n ≡ {residue} mod 4, {}",
            q_label(pair)
        );
        let both = |a: Chi| pair == Some((a, a));
        let mixed = matches!(pair, Some((a, b)) if a * b == M);
        let entries = match (chi5, residue) {
            (M, 1) if both(P) => Some(vec![(0, half(q, -5)), (1, 4), (2, half(q, -13)), (4, 4)]),
            (M, 1) if mixed => Some(vec![(0, half(q, -9)), (1, 4), (2, half(q, -5)), (4, 2)]),
            (M, 1) if both(M) => Some(vec![(0, half(q, -13)), (1, 4), (2, half(q, 3))]),
            (M, 3) if both(P) => Some(vec![(0, half(q, -3)), (1, 2), (2, half(q, -11)), (4, 4)]),
            (M, 3) if mixed => Some(vec![(0, half(q, -7)), (1, 2), (2, half(q, -3)), (4, 2)]),
            (M, 3) if both(M) => Some(vec![(0, half(q, -11)), (1, 2), (2, half(q, 5))]),
            (P, 1) if both(P) => Some(vec![
                (0, half(q, -1)),
                (1, 2),
                (2, half(q, -17)),
                (3, 2),
                (4, 4),
            ]),
            (P, 1) if mixed => Some(vec![
                (0, half(q, -5)),
                (1, 2),
                (2, half(q, -9)),
                (3, 2),
                (4, 2),
            ]),
            (P, 1) if both(M) => Some(vec![(0, half(q, -9)), (1, 2), (2, half(q, -1)), (3, 2)]),
            (P, 3) if both(P) => Some(vec![(0, half(q, 1)), (2, half(q, -15)), (3, 2), (4, 4)]),
            (P, 3) if mixed => Some(vec![(0, half(q, -3)), (2, half(q, -7)), (3, 2), (4, 2)]),
            (P, 3) if both(M) => Some(vec![(0, half(q, -7)), (2, half(q, 1)), (3, 2)]),
            _ => None,
        };
        (label, entries)
    };
    let predicted = match &entries {
        Some(e) => spectrum_claim(e),
        None => Claim::Record(json!({ "no_formula": label })),
    };
    let mut prediction = Prediction::new(TheoremId::InvBoomSpectrum, field, label, predicted);
    if let Some(v) = qv {
        prediction = prediction
            .param("sqrt_minus3", v.sqrt_minus3)
            .param("Q1", v.q1)
            .param("Q2", v.q2);
    }
    prediction
}

pub fn verify_inverse_boom_spectrum(field: &Field, opts: &VerifyOptions) -> VerificationReport {
    let prediction = predict_inverse_boom_spectrum(field);
    let observed = boomerang_spectrum_power(&inverse_table(field)).expect("power map");
    if prediction.predicted == Claim::None {
        return VerificationReport::not_applicable(
            prediction,
            Claim::spectrum(&observed),
            "χ(−3) = −1",
        );
    }
    let q = field.q() as u64;
    let consistent = sums(&prediction.predicted).map(|(total, _)| total) == Some(q - 1);
    let mut mismatches = Mismatches::new(opts.counterexample_cap);
    compare_spectra(&prediction.predicted, &observed, &mut mismatches);
    let agrees = consistent && prediction.predicted.accepts(&Claim::spectrum(&observed));
    let report =
        VerificationReport::decided(prediction, Claim::spectrum(&observed), agrees, mismatches);
    if consistent {
        report
    } else {
        report.note("predicted spectrum violates sum v_i = p^n − 1 or has no formula")
    }
}
