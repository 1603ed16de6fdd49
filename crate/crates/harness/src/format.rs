//! Number formatting for CSV output.

/// Ten significant digits, plain notation where it stays readable,
/// trailing zeros trimmed.
pub fn sig10(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-4..10).contains(&mag) {
        let s = format!("{v:.9e}");
        let (mant, exp) = s.split_once('e').unwrap();
        return format!("{}e{exp}", trim(mant));
    }
    let decimals = (9 - mag).max(0) as usize;
    trim(&format!("{v:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(sig10).unwrap_or_default()
}
