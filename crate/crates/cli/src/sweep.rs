//! Sweep specifications: explicit comma lists or inclusive `start:stop:step`
//! ranges, resolved to exact rationals so downstream floors stay exact.

use dki_core::codebook::parse_rational;
use num::rational::BigRational;
use num::{Signed, ToPrimitive};

pub fn parse_sweep(spec: &str) -> Result<Vec<BigRational>, String> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    let mut values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range spec must be start:stop:step, got {spec:?}"));
        }
        let start = parse_rational(parts[0])
            .ok_or_else(|| format!("bad range start {:?}", parts[0]))?;
        let stop =
            parse_rational(parts[1]).ok_or_else(|| format!("bad range stop {:?}", parts[1]))?;
        let step =
            parse_rational(parts[2]).ok_or_else(|| format!("bad range step {:?}", parts[2]))?;
        if !step.is_positive() {
            return Err(format!("range step must be positive in {spec:?}"));
        }
        if stop < start {
            return Err(format!("range stop below start in {spec:?}"));
        }
        let mut out = Vec::new();
        let mut cur = start;
        while cur <= stop {
            out.push(cur.clone());
            cur += &step;
        }
        out
    } else {
        let mut out = Vec::new();
        for item in spec.split(',') {
            out.push(parse_rational(item).ok_or_else(|| format!("bad value {item:?}"))?);
        }
        out
    };
    values.sort();
    values.dedup();
    Ok(values)
}

pub fn parse_int_sweep(spec: &str) -> Result<Vec<u64>, String> {
    let rationals = parse_sweep(spec)?;
    let mut out = Vec::with_capacity(rationals.len());
    for r in rationals {
        if !r.is_integer() || r.is_negative() {
            return Err(format!("expected nonnegative integers, got {r}"));
        }
        let v = r
            .to_integer()
            .to_u64()
            .ok_or_else(|| format!("integer {r} out of range"))?;
        out.push(v);
    }
    Ok(out)
}

pub fn sweep_to_string(values: &[BigRational]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn int_sweep_to_string(values: &[u64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}
