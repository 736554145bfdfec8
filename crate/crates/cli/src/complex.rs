//! Complex numbers written as `a+bi`.

use num_complex::Complex64;

/// Parses `3`, `-2.5i`, `i`, `-i`, `1+2i`, `1e-3-4.5E+2i`. Whitespace around
/// the whole value is ignored; inner whitespace is not accepted.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    if s.chars().any(char::is_whitespace) {
        return Err(format!("unexpected whitespace in {s:?}"));
    }
    let z = match s.strip_suffix('i') {
        None => Complex64::new(real(s, s)?, 0.0),
        Some(body) => match split_point(body) {
            Some(k) => Complex64::new(real(&body[..k], s)?, imag(&body[k..], s)?),
            None => Complex64::new(0.0, imag(body, s)?),
        },
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("complex number {s:?} is not finite"));
    }
    Ok(z)
}

/// Index of the sign that separates the real and imaginary parts.
fn split_point(body: &str) -> Option<usize> {
    let bytes = body.as_bytes();
    (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
}

fn real(part: &str, whole: &str) -> Result<f64, String> {
    let ok = part.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'+' | b'-' | b'e' | b'E'));
    if !ok {
        return Err(format!("cannot parse {whole:?} as a+bi"));
    }
    part.parse::<f64>().map_err(|_| format!("cannot parse {whole:?} as a+bi"))
}

fn imag(part: &str, whole: &str) -> Result<f64, String> {
    match part {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(part, whole),
    }
}

/// Inverse of [`parse_complex`] for finite values.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}
