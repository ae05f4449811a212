//! Closed-form predictions about the inverse map, odd APN power maps and
//! modified inverse functions, each checked against the brute-force engines.
//!
//! Every verifier returns a [`VerificationReport`] carrying the prediction,
//! the observed value and any counterexamples. A report is `PASS` exactly
//! when nothing disagreed.

mod bridge;
mod inverse;
mod modified;
mod suite;
mod switching;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::Error;
use crate::field::{Field, FieldDesc};
use crate::tables::{Spectrum, DEFAULT_MAX_Q};

pub use bridge::{
    verify_apn_catalog, verify_bridge, verify_identities, verify_identity_i1, verify_identity_i2,
};
pub use inverse::{
    predict_inverse_boom_spectrum, predict_inverse_cdu, predict_inverse_m1_spectrum, q_values,
    verify_inverse_boom_spectrum, verify_inverse_cdu, verify_inverse_cdu_all,
    verify_inverse_m1_spectrum, QValues,
};
pub use modified::{verify_binomial, verify_binomial_all, verify_modified_inverse};
pub use suite::{run_suite, run_theorem};
pub use switching::{
    random_switch, reported_switch_rows, search_du_preserving_switches, verify_switch_bound,
    verify_switch_bounds_random, verify_switch_search, SearchRanges, SwitchRow,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TheoremId {
    Bridge,
    IdentI1,
    IdentI2,
    InvCdu,
    InvM1Spectrum,
    InvBoomSpectrum,
    ApnCatalog,
    ModInvDuPgt3,
    ModInvDuP3,
    BinomialDu,
    SwitchBound,
    SwitchSearch,
}

impl TheoremId {
    pub const ALL: [TheoremId; 12] = [
        TheoremId::Bridge,
        TheoremId::IdentI1,
        TheoremId::IdentI2,
        TheoremId::InvCdu,
        TheoremId::InvM1Spectrum,
        TheoremId::InvBoomSpectrum,
        TheoremId::ApnCatalog,
        TheoremId::ModInvDuPgt3,
        TheoremId::ModInvDuP3,
        TheoremId::BinomialDu,
        TheoremId::SwitchBound,
        TheoremId::SwitchSearch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Bridge => "BRIDGE",
            TheoremId::IdentI1 => "IDENT_I1",
            TheoremId::IdentI2 => "IDENT_I2",
            TheoremId::InvCdu => "INV_CDU",
            TheoremId::InvM1Spectrum => "INV_M1_SPECTRUM",
            TheoremId::InvBoomSpectrum => "INV_BOOM_SPECTRUM",
            TheoremId::ApnCatalog => "APN_CATALOG",
            TheoremId::ModInvDuPgt3 => "MOD_INV_DU_PGT3",
            TheoremId::ModInvDuP3 => "MOD_INV_DU_P3",
            TheoremId::BinomialDu => "BINOMIAL_DU",
            TheoremId::SwitchBound => "SWITCH_BOUND",
            TheoremId::SwitchSearch => "SWITCH_SEARCH",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown theorem id {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

/// A predicted or observed quantity.
#[derive(Clone, Debug, PartialEq)]
pub enum Claim {
    Exact(u64),
    AtMost(u64),
    Spectrum(BTreeMap<u32, u64>),
    /// `sum_i count_i` and `sum_i i * count_i` of a spectrum.
    Sums {
        total: u64,
        weighted: u64,
    },
    Record(Value),
    None,
}

impl Claim {
    pub fn spectrum(s: &Spectrum) -> Claim {
        Claim::Spectrum(s.multiplicities.clone())
    }

    /// Whether `observed` meets this claim. Records are compared for
    /// equality.
    pub fn accepts(&self, observed: &Claim) -> bool {
        match (self, observed) {
            (Claim::AtMost(bound), Claim::Exact(v)) => v <= bound,
            (a, b) => a == b,
        }
    }
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = match self {
            Claim::Exact(v) => serde_json::json!({ "exact": v }),
            Claim::AtMost(v) => serde_json::json!({ "at_most": v }),
            Claim::Spectrum(m) => {
                let m: BTreeMap<String, u64> = m.iter().map(|(i, c)| (i.to_string(), *c)).collect();
                serde_json::json!({ "spectrum": m })
            }
            Claim::Sums { total, weighted } => {
                serde_json::json!({ "sums": { "total": total, "weighted": weighted } })
            }
            Claim::Record(v) => serde_json::json!({ "record": v }),
            Claim::None => Value::Null,
        };
        v.serialize(s)
    }
}

/// The theorem-side half of a report.
#[derive(Clone, Debug, Serialize)]
pub struct Prediction {
    pub theorem: TheoremId,
    pub field: FieldDesc,
    pub params: BTreeMap<String, Value>,
    /// Which case of the theorem fired.
    pub case: String,
    pub predicted: Claim,
}

impl Prediction {
    pub(crate) fn new(
        theorem: TheoremId,
        field: &Field,
        case: impl Into<String>,
        predicted: Claim,
    ) -> Self {
        Prediction {
            theorem,
            field: field.describe(),
            params: BTreeMap::new(),
            case: case.into(),
            predicted,
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameters serialize"),
        );
        self
    }
}

/// One disagreement between prediction and enumeration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    #[serde(flatten)]
    pub at: BTreeMap<String, Value>,
    pub predicted: Value,
    pub observed: Value,
}

impl Counterexample {
    pub fn new(at: &[(&str, Value)], predicted: impl Serialize, observed: impl Serialize) -> Self {
        Counterexample {
            at: at.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            predicted: serde_json::to_value(predicted).expect("serializable"),
            observed: serde_json::to_value(observed).expect("serializable"),
        }
    }
}

/// Counterexample collector that keeps at most `cap` entries but counts all.
#[derive(Clone, Debug)]
pub(crate) struct Mismatches {
    cap: usize,
    list: Vec<Counterexample>,
    total: usize,
}

impl Mismatches {
    pub(crate) fn new(cap: usize) -> Self {
        Mismatches {
            cap,
            list: Vec::new(),
            total: 0,
        }
    }

    pub(crate) fn push(&mut self, c: Counterexample) {
        self.total += 1;
        if self.list.len() < self.cap {
            self.list.push(c);
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.total == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    #[serde(flatten)]
    pub prediction: Prediction,
    pub observed: Claim,
    pub status: Status,
    pub counterexamples: Vec<Counterexample>,
    /// Number of disagreements found, including any beyond the cap.
    #[serde(skip_serializing_if = "is_zero")]
    pub mismatch_count: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

impl VerificationReport {
    /// Builds a report; the status is `PASS` iff `agrees` holds and no
    /// counterexample was recorded.
    pub(crate) fn decided(
        prediction: Prediction,
        observed: Claim,
        agrees: bool,
        mismatches: Mismatches,
    ) -> Self {
        let status = if agrees && mismatches.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        VerificationReport {
            prediction,
            observed,
            status,
            counterexamples: mismatches.list,
            mismatch_count: mismatches.total,
            notes: Vec::new(),
        }
    }

    pub(crate) fn not_applicable(
        prediction: Prediction,
        observed: Claim,
        reason: impl Into<String>,
    ) -> Self {
        VerificationReport {
            prediction,
            observed,
            status: Status::NotApplicable,
            counterexamples: Vec::new(),
            mismatch_count: 0,
            notes: vec![reason.into()],
        }
    }

    pub(crate) fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn theorem(&self) -> TheoremId {
        self.prediction.theorem
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }
}

/// Knobs shared by the verifiers.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub counterexample_cap: usize,
    /// Fields above this size are refused by verifiers needing full tables.
    pub max_q: u64,
    /// Random `(alpha, h)` draws per field for the switching bound.
    pub switch_samples: usize,
    pub seed: u64,
    /// Overrides the default function for BRIDGE and the identity checks.
    pub function: Option<crate::funcrep::FnSpec>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            counterexample_cap: 32,
            max_q: DEFAULT_MAX_Q,
            switch_samples: 50,
            seed: 0x5eed,
            function: None,
        }
    }
}

/// `(q + k) / 2` as a signed count.
pub(crate) fn half(q: u32, k: i64) -> i64 {
    (q as i64 + k) / 2
}
