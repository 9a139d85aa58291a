//! Fixed-precision number formatting shared by every text output.
//!
//! All reals are written with 17 significant digits in scientific notation
//! (`d.dddddddddddddddde±x`), which round-trips every `f64` exactly.
//! Non-finite values are written as the strings `inf`, `-inf` and `nan`.

/// Formats a finite `f64` with 17 significant digits.
pub fn sig17(value: f64) -> String {
    if value.is_nan() {
        "nan".to_string()
    } else if value.is_infinite() {
        if value > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{value:.16e}")
    }
}

/// JSON rendering of a real: a bare number when finite, a quoted token otherwise.
pub fn json_real(value: f64) -> String {
    if value.is_finite() {
        sig17(value)
    } else {
        format!("\"{}\"", sig17(value))
    }
}

/// Inverse of [`sig17`], also accepting the quoted JSON tokens.
pub fn parse_real(text: &str) -> Option<f64> {
    match text.trim().trim_matches('"') {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        other => other.parse().ok(),
    }
}
