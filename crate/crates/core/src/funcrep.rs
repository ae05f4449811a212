//! Function descriptions and their materialized lookup tables.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Fx};

/// Symbolic description of a map `F_q -> F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FnSpec {
    /// `X^d`, with `0 -> 0` for `d >= 1` and the constant `1` for `d = 0`.
    PowerMap {
        d: u64,
    },
    /// `sum c_i X^{e_i}`, with `0^0 = 1`.
    Poly {
        terms: Vec<(Fx, u64)>,
    },
    Lut {
        table: Vec<Fx>,
    },
    /// `inner(sigma(X))` where `sigma` sends `cycle[i]` to `cycle[i + 1]`.
    CycleComposed {
        inner: Box<FnSpec>,
        cycle: Vec<Fx>,
    },
    /// `inner(X) + alpha * Tr(h(X))`.
    TraceSwitched {
        inner: Box<FnSpec>,
        alpha: Fx,
        h: Box<FnSpec>,
    },
}

impl FnSpec {
    pub fn power(d: u64) -> FnSpec {
        FnSpec::PowerMap { d }
    }

    pub fn identity() -> FnSpec {
        FnSpec::PowerMap { d: 1 }
    }

    /// `X^{q-2}`, sending `0` to `0`.
    pub fn inverse(field: &Field) -> FnSpec {
        FnSpec::PowerMap {
            d: field.q() as u64 - 2,
        }
    }
}

/// The families studied: odd APN power maps `f1 .. f6`, the inverse map and
/// its modifications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    F1,
    F2,
    F3,
    F4,
    F5 {
        k: u32,
    },
    F6,
    Inverse,
    /// `X^{q-2} o (0 1 -1)`.
    ModifiedInverse,
    /// `X^{q-2} o (0 -1 1)`, the compositional inverse of [`Family::ModifiedInverse`].
    ModifiedInverseReversed,
    Binomial {
        u: Fx,
    },
    SwitchMonomial {
        d: u64,
        s: u64,
    },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::F1 => f.write_str("f1"),
            Family::F2 => f.write_str("f2"),
            Family::F3 => f.write_str("f3"),
            Family::F4 => f.write_str("f4"),
            Family::F5 { k } => write!(f, "f5(k={k})"),
            Family::F6 => f.write_str("f6"),
            Family::Inverse => f.write_str("inverse"),
            Family::ModifiedInverse => f.write_str("modified_inverse"),
            Family::ModifiedInverseReversed => f.write_str("modified_inverse_reversed"),
            Family::Binomial { u } => write!(f, "binomial(u={u})"),
            Family::SwitchMonomial { d, s } => write!(f, "switch_monomial(d={d},s={s})"),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The [`FnSpec`] of a named family over `field`, or `ConditionViolated`
/// when the family is not defined there.
pub fn catalog(field: &Field, which: Family) -> Result<FnSpec> {
    let p = field.p() as u64;
    let n = field.n();
    let q = field.q() as u64;
    let violated = |why: &str| {
        Err(Error::ConditionViolated(format!(
            "{which} over {field}: {why}"
        )))
    };
    match which {
        Family::F1 => {
            if p == 3 {
                return violated("requires p != 3");
            }
            Ok(FnSpec::power(3))
        }
        Family::F2 | Family::F3 => {
            if q % 3 != 2 {
                return violated("requires p^n = 2 mod 3");
            }
            Ok(if which == Family::F2 {
                FnSpec::power((2 * q - 1) / 3)
            } else {
                FnSpec::power(q - 2)
            })
        }
        Family::F4 => {
            if !n.is_multiple_of(2) {
                return violated("requires n even");
            }
            let half = p.pow(n / 2);
            if half % 3 != 1 {
                return violated("requires p^(n/2) = 1 mod 3");
            }
            Ok(FnSpec::power(half + 2))
        }
        Family::F5 { k } => {
            if p != 5 {
                return violated("requires p = 5");
            }
            if k == 0 || gcd(2 * n as u64, k as u64) != 1 {
                return violated("requires gcd(2n, k) = 1");
            }
            // (5^k + 1)/2 reduced mod q - 1 keeps the exponent small
            let order = q - 1;
            let mut pk = 1u64;
            for _ in 0..k {
                pk = (pk * 5) % (2 * order);
            }
            let d = pk.div_ceil(2) % order;
            Ok(FnSpec::power(if d == 0 { order } else { d }))
        }
        Family::F6 => {
            if p != 5 || n.is_multiple_of(2) {
                return violated("requires p = 5 and n odd");
            }
            Ok(FnSpec::power(
                (q - 1) / 4 + (5u64.pow(n.div_ceil(2)) - 1) / 2,
            ))
        }
        Family::Inverse => Ok(FnSpec::inverse(field)),
        Family::ModifiedInverse => Ok(FnSpec::CycleComposed {
            inner: Box::new(FnSpec::inverse(field)),
            cycle: vec![Fx::ZERO, Fx::ONE, field.neg_one()],
        }),
        Family::ModifiedInverseReversed => Ok(FnSpec::CycleComposed {
            inner: Box::new(FnSpec::inverse(field)),
            cycle: vec![Fx::ZERO, field.neg_one(), Fx::ONE],
        }),
        Family::Binomial { u } => {
            field.elem(u.value() as u64)?;
            if u.is_zero() {
                return Err(Error::ZeroU);
            }
            Ok(FnSpec::Poly {
                terms: vec![(Fx::ONE, q - 2), (u, 2)],
            })
        }
        Family::SwitchMonomial { d, s } => {
            let coeff = field.pow(field.primitive_element(), s);
            Ok(FnSpec::TraceSwitched {
                inner: Box::new(FnSpec::inverse(field)),
                alpha: Fx::ONE,
                h: Box::new(FnSpec::Poly {
                    terms: vec![(coeff, d)],
                }),
            })
        }
    }
}

/// A function materialized as a lookup table over its field.
#[derive(Clone, Debug)]
pub struct FnTable {
    field: Field,
    lut: Vec<Fx>,
    exponent: Option<u64>,
}

/// Tables compare by field and values; provenance is ignored.
impl PartialEq for FnTable {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.lut == other.lut
    }
}

impl Eq for FnTable {}

fn eval_lut(field: &Field, spec: &FnSpec) -> Result<Vec<Fx>> {
    let q = field.q() as usize;
    match spec {
        FnSpec::PowerMap { d } => Ok(field.elements().map(|x| field.pow(x, *d)).collect()),
        FnSpec::Poly { terms } => {
            for (c, _) in terms {
                field.elem(c.value() as u64)?;
            }
            Ok(field
                .elements()
                .map(|x| {
                    terms.iter().fold(Fx::ZERO, |acc, &(c, e)| {
                        field.add(acc, field.mul(c, field.pow(x, e)))
                    })
                })
                .collect())
        }
        FnSpec::Lut { table } => {
            if table.len() != q {
                return Err(Error::BadLutLength {
                    expected: q,
                    found: table.len(),
                });
            }
            for v in table {
                field.elem(v.value() as u64)?;
            }
            Ok(table.clone())
        }
        FnSpec::CycleComposed { inner, cycle } => {
            let inner = eval_lut(field, inner)?;
            let mut sigma: Vec<Fx> = field.elements().collect();
            let mut seen = BTreeSet::new();
            for (i, &from) in cycle.iter().enumerate() {
                if from.index() >= q {
                    return Err(Error::CycleEntryOutOfRange(from.value() as u64));
                }
                if !seen.insert(from) {
                    return Err(Error::CycleRepeated(from.value()));
                }
                sigma[from.index()] = cycle[(i + 1) % cycle.len()];
            }
            Ok(sigma.into_iter().map(|x| inner[x.index()]).collect())
        }
        FnSpec::TraceSwitched { inner, alpha, h } => {
            field.elem(alpha.value() as u64)?;
            let inner = eval_lut(field, inner)?;
            let h = eval_lut(field, h)?;
            Ok(inner
                .iter()
                .zip(&h)
                .map(|(&f, &hx)| field.add(f, field.mul(*alpha, field.trace(hx))))
                .collect())
        }
    }
}

/// Evaluates `spec` at every element of `field`.
pub fn materialize(field: &Field, spec: &FnSpec) -> Result<FnTable> {
    let lut = eval_lut(field, spec)?;
    let exponent = match spec {
        FnSpec::PowerMap { d } if *d >= 1 => Some(*d),
        _ => None,
    };
    Ok(FnTable {
        field: field.clone(),
        lut,
        exponent,
    })
}

impl FnTable {
    pub fn from_lut(field: &Field, lut: Vec<Fx>) -> Result<FnTable> {
        materialize(field, &FnSpec::Lut { table: lut })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn lut(&self) -> &[Fx] {
        &self.lut
    }

    #[inline]
    pub fn eval(&self, x: Fx) -> Fx {
        self.lut[x.index()]
    }

    /// The exponent `d` when this table was built from `X^d`.
    pub fn power_exponent(&self) -> Option<u64> {
        self.exponent
    }

    pub fn is_permutation(&self) -> bool {
        let mut hit = vec![false; self.lut.len()];
        for &y in &self.lut {
            if std::mem::replace(&mut hit[y.index()], true) {
                return false;
            }
        }
        true
    }

    /// `f(-x) = -f(x)` for all `x`.
    pub fn is_odd(&self) -> bool {
        let field = &self.field;
        field
            .elements()
            .all(|x| self.eval(field.neg(x)) == field.neg(self.eval(x)))
    }

    pub fn fixed_points(&self) -> BTreeSet<Fx> {
        self.field
            .elements()
            .filter(|&x| self.eval(x) == x)
            .collect()
    }

    pub fn compositional_inverse(&self) -> Result<FnTable> {
        if !self.is_permutation() {
            return Err(Error::NotAPermutation);
        }
        let mut inv = vec![Fx::ZERO; self.lut.len()];
        for (x, &y) in self.lut.iter().enumerate() {
            inv[y.index()] = Fx::new(x as u32);
        }
        Ok(FnTable {
            field: self.field.clone(),
            lut: inv,
            exponent: None,
        })
    }

    /// Writes the LUT text format: `p n`, the modulus coefficients
    /// `c_0 .. c_n`, then `q` values in index order.
    pub fn write_lut<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.field.p(), self.field.n())?;
        let modulus: Vec<String> = self.field.modulus().iter().map(|c| c.to_string()).collect();
        writeln!(out, "{}", modulus.join(" "))?;
        for v in &self.lut {
            writeln!(out, "{v}")?;
        }
        Ok(())
    }

    /// Parses the LUT text format written by [`FnTable::write_lut`].
    pub fn read_lut<R: BufRead>(input: R) -> Result<FnTable> {
        let mut lines = input
            .lines()
            .map(|l| l.map_err(|e| Error::Parse(e.to_string())))
            .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
        let parse_nums = |line: &str| -> Result<Vec<u64>> {
            line.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
                })
                .collect()
        };
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header".into()))??;
        let header = parse_nums(&header)?;
        let [p, n] = header[..] else {
            return Err(Error::Parse("header must be `p n`".into()));
        };
        let n = u32::try_from(n).map_err(|_| Error::Parse("degree too large".into()))?;
        let modulus = lines
            .next()
            .ok_or_else(|| Error::Parse("missing modulus".into()))??;
        let modulus = parse_nums(&modulus)?;
        let field = Field::new(p, n, Some(&modulus))?;
        let mut lut = Vec::with_capacity(field.q() as usize);
        for line in lines {
            for v in parse_nums(&line?)? {
                lut.push(field.elem(v)?);
            }
        }
        FnTable::from_lut(&field, lut)
    }
}
