//! Batch runner over theorem ids and fields.

use rayon::prelude::*;

use super::{
    bridge, inverse, modified, switching, Claim, Prediction, TheoremId, VerificationReport,
    VerifyOptions,
};
use crate::error::{Error, Result};
use crate::field::{Field, Fx};
use crate::funcrep::{materialize, FnSpec};

/// Every report for one theorem over one field, using the default functions
/// unless `opts.function` overrides them.
pub fn run_theorem(
    id: TheoremId,
    field: &Field,
    opts: &VerifyOptions,
) -> Result<Vec<VerificationReport>> {
    if field.q() as u64 > opts.max_q {
        return Err(Error::SizeCapExceeded {
            q: field.q(),
            cap: opts.max_q,
        });
    }
    let table = |spec: &FnSpec| materialize(field, spec);
    let inverse = FnSpec::inverse(field);
    let cube = FnSpec::power(3);
    let m1 = field.neg_one();
    Ok(match id {
        TheoremId::Bridge => {
            let spec = opts.function.clone().unwrap_or(cube);
            vec![bridge::verify_bridge(&table(&spec)?, opts)]
        }
        TheoremId::IdentI1 => {
            let runs: Vec<(FnSpec, Fx)> = match &opts.function {
                Some(f) => vec![(f.clone(), m1), (f.clone(), Fx::ONE)],
                None => vec![(inverse.clone(), m1), (inverse, Fx::ONE), (cube, m1)],
            };
            runs.iter()
                .map(|(f, c)| bridge::verify_identity_i1(&table(f)?, *c, opts))
                .collect::<Result<_>>()?
        }
        TheoremId::IdentI2 => {
            let runs = match &opts.function {
                Some(f) => vec![f.clone()],
                None => vec![cube, inverse],
            };
            runs.iter()
                .map(|f| bridge::verify_identity_i2(&table(f)?, opts))
                .collect::<Result<_>>()?
        }
        TheoremId::InvCdu => vec![inverse::verify_inverse_cdu_all(field, opts)],
        TheoremId::InvM1Spectrum => vec![inverse::verify_inverse_m1_spectrum(field, opts)],
        TheoremId::InvBoomSpectrum => vec![inverse::verify_inverse_boom_spectrum(field, opts)],
        TheoremId::ApnCatalog => bridge::verify_apn_catalog(field, opts),
        TheoremId::ModInvDuPgt3 | TheoremId::ModInvDuP3 => {
            let wants_p3 = id == TheoremId::ModInvDuP3;
            if wants_p3 != (field.p() == 3) {
                let case = if wants_p3 {
                    "requires p = 3"
                } else {
                    "requires p > 3"
                };
                let prediction = Prediction::new(id, field, case, Claim::None);
                vec![VerificationReport::not_applicable(
                    prediction,
                    Claim::None,
                    case,
                )]
            } else {
                vec![modified::verify_modified_inverse(field, opts)]
            }
        }
        TheoremId::BinomialDu => vec![modified::verify_binomial_all(field, opts)],
        TheoremId::SwitchBound => {
            let runs = match &opts.function {
                Some(f) => vec![f.clone()],
                None => vec![inverse, cube],
            };
            runs.iter()
                .map(|f| switching::verify_switch_bounds_random(field, f, opts))
                .collect::<Result<_>>()?
        }
        TheoremId::SwitchSearch => vec![switching::verify_switch_search(field, opts)],
    })
}

/// Sort key of one batch: theorem, characteristic, degree, input position.
type BatchKey = (TheoremId, u32, u32, usize);

/// Runs every `(theorem, field)` pair concurrently; the output is ordered
/// by theorem id, then field, independent of scheduling.
pub fn run_suite(
    ids: &[TheoremId],
    fields: &[Field],
    opts: &VerifyOptions,
) -> Result<Vec<VerificationReport>> {
    let jobs: Vec<(usize, usize)> = (0..ids.len())
        .flat_map(|i| (0..fields.len()).map(move |j| (i, j)))
        .collect();
    let mut batches: Vec<(BatchKey, Vec<VerificationReport>)> = jobs
        .into_par_iter()
        .map(|(i, j)| {
            let f = &fields[j];
            run_theorem(ids[i], f, opts).map(|r| ((ids[i], f.p(), f.n(), j), r))
        })
        .collect::<Result<_>>()?;
    batches.sort_by_key(|(key, _)| *key);
    Ok(batches.into_iter().flat_map(|(_, r)| r).collect())
}
