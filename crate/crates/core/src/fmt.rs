//! Locale-independent number formatting for command output.

/// Formats `x` like C's `%.17g`: 17 significant digits, trailing zeros
/// dropped, scientific notation only for very large or very small magnitudes.
/// Every finite `f64` survives a round trip through this representation.
pub fn format_g17(x: f64) -> String {
    const PRECISION: i32 = 17;
    if x == 0.0 {
        // Collapse -0.0 as well.
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..PRECISION).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g17() {
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(1.25), "1.25");
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(-0.0), "0");
        assert_eq!(format_g17(123456.0), "123456");
        assert_eq!(format_g17(1e-7), "9.9999999999999995e-08");
        assert_eq!(format_g17(1e20), "1e+20");
        assert_eq!(format_g17(-2.5), "-2.5");
    }

    #[test]
    fn round_trips() {
        for &x in &[0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 6.02214076e23, -7.25e-6] {
            let back: f64 = format_g17(x).parse().unwrap();
            assert_eq!(back, x);
        }
    }
}
