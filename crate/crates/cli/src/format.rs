//! Number formatting shared by the JSON and CSV writers: lowercase
//! scientific notation with 6 significant digits and a signed two-digit
//! exponent, e.g. `6.88200e-09`.

use serde_json::{Number, Value};

pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.5e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// JSON number carrying the [`sci`] text verbatim; non-finite values map to null.
pub fn sci_json(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(sci(x).parse::<Number>().expect("valid JSON number"))
}

pub fn sci_array(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| sci_json(x)).collect())
}
