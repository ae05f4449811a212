//! Exhaustive c-DDT, DDT and BCT computation, uniformities and spectra.
//!
//! Entries are counted by brute force over the whole field. Full tables are
//! dense `q x q` matrices and are refused above a size cap; uniformities and
//! spectra stream rows and need only `O(q)` memory per worker. Rows are
//! computed in parallel and always assembled in `a` order, so results do not
//! depend on the thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, Fx};
use crate::funcrep::FnTable;

/// Default ceiling on `q` for full tables.
pub const DEFAULT_MAX_Q: u64 = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    CDdt { c: Fx },
    Bct,
}

impl TableKind {
    pub fn name(&self) -> &'static str {
        match self {
            TableKind::CDdt { c } if *c == Fx::ONE => "ddt",
            TableKind::CDdt { .. } => "cddt",
            TableKind::Bct => "bct",
        }
    }

    pub fn c(&self) -> Option<Fx> {
        match self {
            TableKind::CDdt { c } => Some(*c),
            TableKind::Bct => None,
        }
    }
}

/// Dense `(a, b)`-indexed count matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    kind: TableKind,
    q: usize,
    counts: Vec<u32>,
}

impl CountTable {
    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn get(&self, a: Fx, b: Fx) -> u32 {
        self.counts[a.index() * self.q + b.index()]
    }

    pub fn row(&self, a: Fx) -> &[u32] {
        &self.counts[a.index() * self.q..(a.index() + 1) * self.q]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.counts.chunks(self.q)
    }

    /// Uniformity read off the stored table, with the same exclusions as
    /// [`c_differential_uniformity`] and [`boomerang_uniformity`].
    pub fn uniformity(&self) -> UniformityResult {
        let rows = self.rows().map(|r| r.to_vec());
        collect_uniformity(self.kind, rows)
    }

    /// CSV with header `a,b,count`, rows in `(a, b)` order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "a,b,count")?;
        for (a, row) in self.rows().enumerate() {
            for (b, count) in row.iter().enumerate() {
                writeln!(out, "{a},{b},{count}")?;
            }
        }
        Ok(())
    }

    /// JSON summary `{kind, c, q, max, witnesses, spectrum, counts}`.
    pub fn to_json(&self, spectrum: Option<&Spectrum>) -> serde_json::Value {
        let u = self.uniformity();
        let counts: Vec<&[u32]> = self.rows().collect();
        serde_json::json!({
            "kind": self.kind.name(),
            "c": self.kind.c(),
            "q": self.q,
            "max": u.value,
            "witnesses": u.witnesses,
            "spectrum": spectrum,
            "counts": counts,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Uniformity 1 (PcN).
    Perfect,
    /// Uniformity 2 (APcN; APN when `c = 1`).
    AlmostPerfect,
    Uniform(u32),
}

impl Classification {
    fn of(value: u32) -> Self {
        match value {
            1 => Classification::Perfect,
            2 => Classification::AlmostPerfect,
            v => Classification::Uniform(v),
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Perfect => f.write_str("PcN"),
            Classification::AlmostPerfect => f.write_str("APcN"),
            Classification::Uniform(v) => write!(f, "{v}-uniform"),
        }
    }
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Maximum table entry and every `(a, b)` attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformityResult {
    pub value: u32,
    pub witnesses: Vec<(Fx, Fx)>,
    pub classification: Classification,
}

impl UniformityResult {
    /// True when the maximum is attained on the `a = 0` row (only possible
    /// for `c != 1`).
    pub fn attained_at_zero_shift(&self) -> bool {
        self.witnesses.iter().any(|(a, _)| a.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumKind {
    CDifferential { c: Fx },
    Boomerang,
}

/// Multiplicity histogram `{i -> count}`; only positive counts are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    pub multiplicities: BTreeMap<u32, u64>,
}

impl Spectrum {
    pub fn from_entries(kind: SpectrumKind, entries: impl IntoIterator<Item = u32>) -> Self {
        let mut multiplicities = BTreeMap::new();
        for e in entries {
            *multiplicities.entry(e).or_insert(0) += 1;
        }
        Spectrum {
            kind,
            multiplicities,
        }
    }

    /// Builds a spectrum from explicit `(i, count)` pairs, dropping zeros.
    pub fn from_pairs(kind: SpectrumKind, pairs: impl IntoIterator<Item = (u32, u64)>) -> Self {
        let mut multiplicities = BTreeMap::new();
        for (i, m) in pairs {
            if m > 0 {
                *multiplicities.entry(i).or_insert(0) += m;
            }
        }
        Spectrum {
            kind,
            multiplicities,
        }
    }

    pub fn get(&self, i: u32) -> u64 {
        self.multiplicities.get(&i).copied().unwrap_or(0)
    }

    /// `sum_i count_i`.
    pub fn total(&self) -> u64 {
        self.multiplicities.values().sum()
    }

    /// `sum_i i * count_i`.
    pub fn weighted_total(&self) -> u64 {
        self.multiplicities
            .iter()
            .map(|(&i, &m)| i as u64 * m)
            .sum()
    }

    pub fn max_index(&self) -> u32 {
        self.multiplicities.keys().next_back().copied().unwrap_or(0)
    }

    fn symbol(&self) -> &'static str {
        match self.kind {
            SpectrumKind::CDifferential { .. } => "ω",
            SpectrumKind::Boomerang => "v",
        }
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.symbol();
        f.write_str("{")?;
        for (k, (i, m)) in self.multiplicities.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{sym}_{i} = {m}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Spectrum", 3)?;
        match self.kind {
            SpectrumKind::CDifferential { c } => {
                st.serialize_field("kind", "c-differential")?;
                st.serialize_field("c", &Some(c))?;
            }
            SpectrumKind::Boomerang => {
                st.serialize_field("kind", "boomerang")?;
                st.serialize_field("c", &None::<Fx>)?;
            }
        }
        let m: BTreeMap<String, u64> = self
            .multiplicities
            .iter()
            .map(|(i, c)| (i.to_string(), *c))
            .collect();
        st.serialize_field("multiplicities", &m)?;
        st.end()
    }
}

fn check_cap(field: &Field, cap: u64) -> Result<()> {
    if field.q() as u64 > cap {
        Err(Error::SizeCapExceeded { q: field.q(), cap })
    } else {
        Ok(())
    }
}

/// `|{X : f(X + a) - c f(X) = b}|` by direct scan.
pub fn cddt_entry(t: &FnTable, c: Fx, a: Fx, b: Fx) -> u32 {
    let field = t.field();
    field
        .elements()
        .filter(|&x| field.sub(t.eval(field.add(x, a)), field.mul(c, t.eval(x))) == b)
        .count() as u32
}

fn scaled(t: &FnTable, c: Fx) -> Vec<Fx> {
    let field = t.field();
    t.lut().iter().map(|&y| field.mul(c, y)).collect()
}

fn cddt_row_scaled(t: &FnTable, scaled: &[Fx], a: Fx) -> Vec<u32> {
    let field = t.field();
    let mut row = vec![0u32; field.q() as usize];
    for x in field.elements() {
        let b = field.sub(t.eval(field.add(x, a)), scaled[x.index()]);
        row[b.index()] += 1;
    }
    row
}

/// One row `a` of the c-DDT.
pub fn cddt_row(t: &FnTable, c: Fx, a: Fx) -> Vec<u32> {
    cddt_row_scaled(t, &scaled(t, c), a)
}

fn cddt_rows(t: &FnTable, c: Fx) -> Vec<Vec<u32>> {
    let scaled = scaled(t, c);
    let q = t.field().q();
    (0..q)
        .into_par_iter()
        .map(|a| cddt_row_scaled(t, &scaled, Fx::new(a)))
        .collect()
}

/// Full c-DDT, refused above `cap`.
pub fn cddt_capped(t: &FnTable, c: Fx, cap: u64) -> Result<CountTable> {
    check_cap(t.field(), cap)?;
    Ok(CountTable {
        kind: TableKind::CDdt { c },
        q: t.field().q() as usize,
        counts: cddt_rows(t, c).concat(),
    })
}

pub fn cddt(t: &FnTable, c: Fx) -> Result<CountTable> {
    cddt_capped(t, c, DEFAULT_MAX_Q)
}

/// The classical DDT (`c = 1`).
pub fn ddt(t: &FnTable) -> Result<CountTable> {
    cddt(t, Fx::ONE)
}

fn collect_uniformity(kind: TableKind, rows: impl Iterator<Item = Vec<u32>>) -> UniformityResult {
    let mut value = 0u32;
    let mut witnesses = Vec::new();
    for (a, row) in rows.enumerate() {
        let skip_row = match kind {
            TableKind::CDdt { c } => a == 0 && c == Fx::ONE,
            TableKind::Bct => a == 0,
        };
        if skip_row {
            continue;
        }
        for (b, &count) in row.iter().enumerate() {
            if kind == TableKind::Bct && b == 0 {
                continue;
            }
            if count > value {
                value = count;
                witnesses.clear();
            }
            if count == value {
                witnesses.push((Fx::new(a as u32), Fx::new(b as u32)));
            }
        }
    }
    UniformityResult {
        value,
        witnesses,
        classification: Classification::of(value),
    }
}

/// Maximum c-DDT entry; the `a = 0` row is excluded only when `c = 1`.
pub fn c_differential_uniformity(t: &FnTable, c: Fx) -> UniformityResult {
    collect_uniformity(TableKind::CDdt { c }, cddt_rows(t, c).into_iter())
}

/// Classical differential uniformity (max over `a != 0`).
pub fn differential_uniformity(t: &FnTable) -> u32 {
    let field = t.field();
    let unit = scaled(t, Fx::ONE);
    (1..field.q())
        .into_par_iter()
        .map(|a| {
            cddt_row_scaled(t, &unit, Fx::new(a))
                .into_iter()
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

/// c-differential spectrum of a power map: histogram of the `a = 1` row
/// over all `b`.
pub fn cdiff_spectrum_power(t: &FnTable, c: Fx) -> Result<Spectrum> {
    t.power_exponent().ok_or(Error::NotAPowerMap)?;
    Ok(Spectrum::from_entries(
        SpectrumKind::CDifferential { c },
        cddt_row(t, c, Fx::ONE),
    ))
}

/// Pairs `(X, Y)` with `f(X) - f(Y) = b` and `f(X + a) - f(Y + a) = b`,
/// counted over all `q^2` pairs.
pub fn bct_entry(t: &FnTable, a: Fx, b: Fx) -> u32 {
    let field = t.field();
    let mut count = 0;
    for x in field.elements() {
        let fx = t.eval(x);
        let fxa = t.eval(field.add(x, a));
        for y in field.elements() {
            if field.sub(fx, t.eval(y)) == b && field.sub(fxa, t.eval(field.add(y, a))) == b {
                count += 1;
            }
        }
    }
    count
}

/// One row `a` of the BCT.
///
/// `f(X) - f(Y) = f(X + a) - f(Y + a)` holds iff `X` and `Y` share the
/// derivative value `f(X + a) - f(X)`, so only pairs inside a derivative
/// class are visited; the row costs `sum_v DDT(a, v)^2`.
pub fn bct_row(t: &FnTable, a: Fx) -> Vec<u32> {
    let field = t.field();
    let q = field.q() as usize;
    let deriv: Vec<Fx> = field
        .elements()
        .map(|x| field.sub(t.eval(field.add(x, a)), t.eval(x)))
        .collect();

    // counting sort of X by derivative value
    let mut start = vec![0usize; q + 1];
    for d in &deriv {
        start[d.index() + 1] += 1;
    }
    for i in 0..q {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut order = vec![Fx::ZERO; q];
    for (x, d) in deriv.iter().enumerate() {
        order[fill[d.index()]] = Fx::new(x as u32);
        fill[d.index()] += 1;
    }

    let mut row = vec![0u32; q];
    for v in 0..q {
        let class = &order[start[v]..start[v + 1]];
        for &x in class {
            let fx = t.eval(x);
            for &y in class {
                row[field.sub(fx, t.eval(y)).index()] += 1;
            }
        }
    }
    row
}

fn bct_rows(t: &FnTable) -> Vec<Vec<u32>> {
    (0..t.field().q())
        .into_par_iter()
        .map(|a| bct_row(t, Fx::new(a)))
        .collect()
}

/// Full BCT, refused above `cap`.
pub fn bct_capped(t: &FnTable, cap: u64) -> Result<CountTable> {
    check_cap(t.field(), cap)?;
    Ok(CountTable {
        kind: TableKind::Bct,
        q: t.field().q() as usize,
        counts: bct_rows(t).concat(),
    })
}

pub fn bct(t: &FnTable) -> Result<CountTable> {
    bct_capped(t, DEFAULT_MAX_Q)
}

/// Maximum BCT entry over `a, b != 0`.
pub fn boomerang_uniformity(t: &FnTable) -> UniformityResult {
    collect_uniformity(TableKind::Bct, bct_rows(t).into_iter())
}

/// Boomerang spectrum of a power map: histogram of the `a = 1` BCT row over
/// `b != 0`.
pub fn boomerang_spectrum_power(t: &FnTable) -> Result<Spectrum> {
    t.power_exponent().ok_or(Error::NotAPowerMap)?;
    let row = bct_row(t, Fx::ONE);
    Ok(Spectrum::from_entries(
        SpectrumKind::Boomerang,
        row.into_iter().skip(1),
    ))
}
