//! Difference distribution tables, c-differential tables and boomerang
//! connectivity tables over `F_{p^n}` (`p` odd), together with verifiers
//! that check closed-form predictions about the inverse map and odd APN
//! power maps against exhaustive enumeration.

pub mod error;
pub mod field;
pub mod funcrep;
pub mod tables;
pub mod theorems;

pub use error::{Error, Result};
pub use field::{Chi, Field, FieldDesc, Fx};
pub use funcrep::{catalog, materialize, Family, FnSpec, FnTable};
pub use tables::{
    Classification, CountTable, Spectrum, SpectrumKind, TableKind, UniformityResult, DEFAULT_MAX_Q,
};

pub use theorems::{Claim, Prediction, Status, TheoremId, VerificationReport, VerifyOptions};
