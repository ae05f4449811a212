//! Parsing of field lists, function selectors and element values.

use std::fs::File;
use std::io::BufReader;
use std::ops::RangeInclusive;
use std::path::Path;

use oddsbox_core::{catalog, Error, Family, Field, FnSpec, FnTable, Fx, Result};

pub fn parse_modulus(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad modulus coefficient {c:?}")))
        })
        .collect()
}

pub fn build_field(p: u64, n: u32, modulus: Option<&str>) -> Result<Field> {
    let m = modulus.map(parse_modulus).transpose()?;
    Field::new(p, n, m.as_deref())
}

/// `p:n[,p:n...]`
pub fn parse_fields(s: &str) -> Result<Vec<Field>> {
    s.split(',')
        .map(|item| {
            let (p, n) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected p:n, found {item:?}")))?;
            let p = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
            let n = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree {n:?}")))?;
            Field::new(p, n, None)
        })
        .collect()
}

/// An element given as its encoding, or as a negative integer reduced
/// into the prime field.
pub fn parse_elem(field: &Field, s: &str) -> Result<Fx> {
    let v: i64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
    if v < 0 {
        Ok(field.from_int(v))
    } else {
        field.elem(v as u64)
    }
}

/// `lo..hi`, `lo-hi` or a single value, inclusive.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u64>> {
    let bad = || Error::Parse(format!("bad range {s:?}"));
    let parts: Vec<&str> = if s.contains("..") {
        s.splitn(2, "..").collect()
    } else {
        s.splitn(2, '-').collect()
    };
    let lo: u64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: u64 = match parts.get(1) {
        Some(h) => h
            .trim_start_matches('=')
            .trim()
            .parse()
            .map_err(|_| bad())?,
        None => lo,
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

/// Named functions: `identity`, `inverse`, `modified_inverse`,
/// `modified_inverse_reversed`, `f1`..`f6`, `f5:k`, `binomial:u`,
/// `switch:d:s` and `power:d` (also `x^d`).
pub fn named(field: &Field, name: &str) -> Result<FnSpec> {
    let lower = name.trim().to_ascii_lowercase();
    let mut parts = lower.split(':');
    let head = parts.next().unwrap_or("");
    let args: Vec<&str> = parts.collect();
    let num = |i: usize| -> Result<u64> {
        args.get(i)
            .ok_or_else(|| Error::Parse(format!("{name:?} needs more arguments")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad argument in {name:?}")))
    };
    if let Some(d) = head.strip_prefix("x^") {
        return d
            .parse()
            .map(FnSpec::power)
            .map_err(|_| Error::Parse(format!("bad exponent in {name:?}")));
    }
    let family = match head {
        "identity" => return Ok(FnSpec::identity()),
        "power" => return Ok(FnSpec::power(num(0)?)),
        "inverse" => Family::Inverse,
        "modified_inverse" => Family::ModifiedInverse,
        "modified_inverse_reversed" => Family::ModifiedInverseReversed,
        "f1" => Family::F1,
        "f2" => Family::F2,
        "f3" => Family::F3,
        "f4" => Family::F4,
        "f5" => Family::F5 {
            k: if args.is_empty() { 1 } else { num(0)? as u32 },
        },
        "f6" => Family::F6,
        "binomial" => Family::Binomial {
            u: parse_elem(field, args.first().copied().unwrap_or("1"))?,
        },
        "switch" => Family::SwitchMonomial {
            d: num(0)?,
            s: num(1)?,
        },
        _ => return Err(Error::Parse(format!("unknown function {name:?}"))),
    };
    catalog(field, family)
}

/// `c:e[,c:e...]`, the sum of `c X^e`.
pub fn poly(field: &Field, s: &str) -> Result<FnSpec> {
    let terms = s
        .split(',')
        .map(|t| {
            let (c, e) = t
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected coeff:exponent, found {t:?}")))?;
            let e = e
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
            Ok((parse_elem(field, c)?, e))
        })
        .collect::<Result<_>>()?;
    Ok(FnSpec::Poly { terms })
}

/// Reads a LUT file; its field must match `field` when one is given.
pub fn lut_file(path: &Path) -> Result<FnTable> {
    let file = File::open(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    FnTable::read_lut(BufReader::new(file))
}
