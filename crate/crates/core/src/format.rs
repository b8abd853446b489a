//! Number formatting for machine-readable output.

/// Formats `x` like C's `%.{digits}g`: `digits` significant digits, trailing
/// zeros removed, scientific notation for very large or small magnitudes.
pub fn sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
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

/// The CSV cell format: 12 significant digits.
pub fn csv_cell(x: f64) -> String {
    sig(x, 12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig(1.0, 12), "1");
        assert_eq!(sig(-0.0, 12), "0");
        assert_eq!(sig(0.5, 12), "0.5");
        assert_eq!(sig(std::f64::consts::PI, 12), "3.14159265359");
        assert_eq!(sig(1.2246467991473532e-16, 12), "1.22464679915e-16");
        assert_eq!(sig(123456789012345.0, 12), "1.23456789012e14");
        assert_eq!(sig(0.0001, 12), "0.0001");
        assert_eq!(sig(0.99999999999999, 12), "1");
        assert_eq!(sig(-2.5e-5, 3), "-2.5e-5");
    }
}
