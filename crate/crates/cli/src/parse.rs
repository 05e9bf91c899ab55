//! Value parsers for command-line flags.

use num_rational::Rational64;

/// Exact rational from `p/q`, an integer or a finite decimal such as `-0.25`.
pub fn parse_ratio(s: &str) -> Result<Rational64, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in '{s}'"))?;
        let q: i64 = q
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in '{s}'"))?;
        if q == 0 {
            return Err(format!("zero denominator in '{s}'"));
        }
        return Ok(Rational64::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(format!("'{s}' is not a number or fraction"));
    }
    if frac.len() > 15 {
        return Err(format!("'{s}' has more than 15 decimals"));
    }
    let digits = format!("{int}{frac}");
    let numer: i64 = if digits.is_empty() {
        0
    } else {
        digits
            .parse()
            .map_err(|_| format!("'{s}' is out of range"))?
    };
    let r = Rational64::new(numer, 10i64.pow(frac.len() as u32));
    Ok(if neg { -r } else { r })
}

pub fn parse_positive_ratio(s: &str) -> Result<Rational64, String> {
    let r = parse_ratio(s)?;
    if *r.numer() <= 0 {
        return Err(format!("must be positive, got {s}"));
    }
    Ok(r)
}

pub fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Comma-separated pole parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Deltas(pub Vec<f64>);

pub fn parse_deltas(s: &str) -> Result<Deltas, String> {
    s.split(',')
        .map(|t| parse_ratio(t).map(to_f64))
        .collect::<Result<Vec<_>, _>>()
        .map(Deltas)
}

/// Comma-separated exact values.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioList(pub Vec<Rational64>);

pub fn parse_ratio_list(s: &str) -> Result<RatioList, String> {
    s.split(',')
        .map(parse_ratio)
        .collect::<Result<Vec<_>, _>>()
        .map(RatioList)
}

/// `a:b` with `a < b`.
pub fn parse_range(s: &str) -> Result<(Rational64, Rational64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected START:END, got '{s}'"))?;
    let (a, b) = (parse_ratio(a)?, parse_ratio(b)?);
    if a >= b {
        return Err(format!("empty range '{s}'"));
    }
    Ok((a, b))
}

/// `NXxNXI`, both positive.
pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NXxNXI, got '{s}'"))?;
    let a: usize = a.parse().map_err(|_| format!("bad grid size '{s}'"))?;
    let b: usize = b.parse().map_err(|_| format!("bad grid size '{s}'"))?;
    if a == 0 || b == 0 {
        return Err(format!("grid sizes must be positive, got '{s}'"));
    }
    Ok((a, b))
}
