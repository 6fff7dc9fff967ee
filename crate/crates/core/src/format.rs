//! Locale-independent number formatting for the text outputs.

/// Scientific notation with 17 significant digits and a signed exponent,
/// enough to round-trip any `f64` exactly.
pub fn sci(x: f64) -> String {
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => s,
    }
}
