//! Human-readable output with six significant digits.

use canonent::C64;

/// `println!` that ignores a closed stdout (e.g. piped into `head`).
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}
pub(crate) use out;

/// `%g`-style rendering with six significant digits.
pub(crate) fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        format!("{}e{e}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub(crate) fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| sig6(x)).collect::<Vec<_>>().join("  ")
}

pub(crate) fn complex(z: C64) -> String {
    if z.im == 0.0 {
        sig6(z.re)
    } else if z.re == 0.0 {
        format!("{}i", sig6(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", sig6(z.re), sig6(z.im.abs()))
    }
}

/// One `label  value` line with the label padded to a fixed column.
pub(crate) fn row(label: &str, value: impl std::fmt::Display) {
    out!("{label:<24}{value}");
}
