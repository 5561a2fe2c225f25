//! Exact parsing of numeric literals with `pi` fractions, and fixed-width
//! significant-digit formatting for outputs.

use std::f64::consts::PI;

/// Parse a numeric literal: a plain float, or a `pi` fraction such as
/// `pi`, `2pi/3`, `-pi/4`, `0.5*pi`, `3pi/2`. The `pi` forms are evaluated
/// as `coefficient * pi / denominator` in one rounding each, so rational
/// multiples of pi parse exactly.
pub fn parse_number(text: &str) -> Result<f64, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty number".into());
    }
    let (sign, t) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim_start()),
        None => (1.0, t),
    };
    let lower = t.to_ascii_lowercase();
    let pi_pos = lower.find("pi").map(|i| (i, 2)).or_else(|| {
        t.char_indices()
            .find(|(_, c)| *c == 'π')
            .map(|(i, c)| (i, c.len_utf8()))
    });
    let value = match pi_pos {
        None => t
            .parse::<f64>()
            .map_err(|_| format!("cannot parse number '{text}'"))?,
        Some((idx, len)) => {
            let coef_str = t[..idx].trim().trim_end_matches('*').trim();
            let coef = if coef_str.is_empty() {
                1.0
            } else {
                coef_str
                    .parse::<f64>()
                    .map_err(|_| format!("cannot parse pi coefficient in '{text}'"))?
            };
            let rest = t[idx + len..].trim();
            let denom = if rest.is_empty() {
                1.0
            } else if let Some(d) = rest.strip_prefix('/') {
                d.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("cannot parse pi denominator in '{text}'"))?
            } else {
                return Err(format!("unexpected trailing '{rest}' in '{text}'"));
            };
            if denom == 0.0 {
                return Err(format!("zero denominator in '{text}'"));
            }
            coef * PI / denom
        }
    };
    Ok(sign * value)
}

/// Parse `a,b` into a pair of numbers.
pub fn parse_pair(text: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected 'a,b', found '{text}'"));
    }
    Ok((parse_number(parts[0])?, parse_number(parts[1])?))
}

/// Parse a comma-separated list of numbers.
pub fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',').map(parse_number).collect()
}

/// Parse a comma-separated list of unsigned integers.
pub fn parse_int_list(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| format!("cannot parse integer '{s}'"))
        })
        .collect()
}

/// Format with 12 significant digits.
pub fn g12(x: f64) -> String {
    format!("{x:.11e}")
}
