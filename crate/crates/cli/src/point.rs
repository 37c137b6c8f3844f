//! Complex literals of the form `x+yi`.

use anyhow::{anyhow, bail, Result};
use polar_maass::geometry::UpperHalfPoint;
use polar_maass::{Cx, Real};

/// Splits `x+yi`, `x-yi`, `yi` or `x` into decimal real and imaginary parts.
pub fn split_complex(s: &str) -> Result<(String, String)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        bail!("empty complex number");
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return Ok((t, "0".into()));
    };
    // last sign that is not the leading sign and not part of an exponent
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let im = im.strip_prefix('+').unwrap_or(im);
    Ok((re.to_string(), im.to_string()))
}

/// Parses at the working precision of `R`.
pub fn parse_complex<R: Real>(s: &str) -> Result<Cx<R>> {
    let (re, im) = split_complex(s)?;
    let part = |p: &str| R::parse_decimal(p).ok_or_else(|| anyhow!("invalid number '{p}' in '{s}'"));
    Ok(Cx::new(part(&re)?, part(&im)?))
}

pub fn parse_point<R: Real>(s: &str) -> Result<UpperHalfPoint<R>> {
    Ok(UpperHalfPoint::new(parse_complex(s)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> (String, String) {
        split_complex(s).unwrap()
    }

    #[test]
    fn forms() {
        assert_eq!(sp("0.11+1.31i"), ("0.11".into(), "1.31".into()));
        assert_eq!(sp("-0.23+0.97i"), ("-0.23".into(), "0.97".into()));
        assert_eq!(sp("0.4-0.9i"), ("0.4".into(), "-0.9".into()));
        assert_eq!(sp("2i"), ("0".into(), "2".into()));
        assert_eq!(sp("i"), ("0".into(), "1".into()));
        assert_eq!(sp("1e-3+2.5e-1i"), ("1e-3".into(), "2.5e-1".into()));
        assert_eq!(sp("0.5"), ("0.5".into(), "0".into()));
    }

    #[test]
    fn lower_half_plane_is_rejected() {
        assert!(parse_point::<f64>("0.1-0.2i").is_err());
        assert!(parse_point::<f64>("0.1+0.2i").is_ok());
        assert!(parse_point::<f64>("abc").is_err());
    }
}
