//! Number and matrix text forms shared by flags, scenario files and reports.

use std::fmt::Write as _;

use crate::info::{Dense, StochasticMatrix};
use crate::{Error, Result};

/// Parses `"0.25"`, `"3"`, `"-1/4"` or `"6/7"`. Fractions divide two exactly
/// parsed numbers, so `"6/7"` becomes the float nearest 6/7.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Scenario(format!("cannot read {s:?} as a number"));
    let v = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            n / d
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Shortest fraction `p/q` (q ≤ 10⁶) whose float division reproduces `x`
/// exactly, else the shortest round-trip decimal.
pub fn format_number(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    if let Some((p, q)) = rational(x, 1_000_000) {
        return format!("{p}/{q}");
    }
    format!("{x}")
}

fn rational(x: f64, max_den: i64) -> Option<(i64, i64)> {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let a = a as i64;
        let (h2, k2) = (a.checked_mul(h1)?.checked_add(h0)?, a.checked_mul(k1)?.checked_add(k0)?);
        if k2 > max_den {
            return None;
        }
        if h2 as f64 / k2 as f64 == x {
            return Some((h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

/// Reads `"a,b;c,d"` (rows separated by `;`) or one of the keywords
/// `identity` and `uninformative` (2×2).
pub fn parse_matrix(s: &str) -> Result<StochasticMatrix> {
    match s.trim() {
        "identity" | "I" => return Ok(StochasticMatrix::identity(2)),
        "uninformative" | "babbling" => return Ok(StochasticMatrix::uninformative(2, 2)),
        _ => {}
    }
    let rows = s
        .split(';')
        .map(|row| row.split(',').map(parse_number).collect::<Result<Vec<f64>>>())
        .collect::<Result<Vec<_>>>()?;
    StochasticMatrix::new(&rows)
}

pub fn format_rows(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        for (j, &v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format_number(v));
        }
    }
    out
}

pub fn format_matrix(m: &StochasticMatrix) -> String {
    format_rows(&m.to_rows())
}

pub fn format_dense(m: &Dense) -> String {
    format_rows(&m.to_rows())
}

pub const CSV_HEADER: &str = "family,p,b1,b2,prob1,prob2";

pub fn csv_row(out: &mut String, family: &str, p: f64, b1: f64, b2: f64, prob1: f64, prob2: f64) {
    let _ = writeln!(out, "{family},{p},{b1},{b2},{prob1},{prob2}");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(parse_number("6/7").unwrap(), 6.0 / 7.0);
        assert_eq!(parse_number(" 0.25 ").unwrap(), 0.25);
        assert!(parse_number("1/0").is_err());
        assert!(parse_number("x").is_err());
        assert_eq!(format_number(6.0 / 7.0), "6/7");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(0.955414), "477707/500000");
        assert_eq!(format_number(std::f64::consts::PI), format!("{}", std::f64::consts::PI));
    }

    #[test]
    fn matrix_round_trip() {
        let s = "6/7,3/7;1/7,4/7";
        assert_eq!(format_matrix(&parse_matrix(s).unwrap()), s);
        assert_eq!(parse_matrix("identity").unwrap(), StochasticMatrix::identity(2));
        assert!(parse_matrix("1,2;3").is_err());
    }
}
