//! Fixed-precision number formatting shared by every export.

use serde_json::{Number, Value};

const SIG_DIGITS: usize = 6;

/// Formats `v` with six significant digits, dropping trailing zeros.
/// Plain notation is used for decimal exponents in `-5..6`.
pub fn sig6(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".to_owned();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_owned()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".to_owned()
    } else {
        t.to_owned()
    }
}

/// `v` rounded to six significant digits.
pub fn round6(v: f64) -> f64 {
    sig6(v).parse().unwrap_or(v)
}

/// Rounds every floating-point number inside a JSON tree.
pub(crate) fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|f| Number::from_f64(round6(f))) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(sig6(72.0), "72");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(-0.0), "0");
        assert_eq!(sig6(46.333333333), "46.3333");
        assert_eq!(sig6(0.76630068746), "0.766301");
        assert_eq!(sig6(1990.888888), "1990.89");
        assert_eq!(sig6(999999.7), "1e6");
        assert_eq!(sig6(123456.4), "123456");
        assert_eq!(sig6(1.5e-7), "1.5e-7");
        assert_eq!(sig6(-2.25), "-2.25");
        assert_eq!(sig6(0.00001234567), "0.0000123457");
    }

    #[test]
    fn rounding_is_stable() {
        for v in [0.1 + 0.2, 1.0 / 3.0, 1234.56789, 7.0e-9] {
            assert_eq!(round6(round6(v)), round6(v));
            assert_eq!(sig6(round6(v)), sig6(v));
        }
    }
}
