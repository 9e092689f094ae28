//! Fixed CSV number formatting.

/// Formats `x` like C's `%.6g`: six significant digits, trailing zeros
/// dropped, exponent notation outside `1e-4 ≤ |x| < 1e6`.
pub fn g6(x: f64) -> String {
    if x == 0.0 {
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
    // let the formatter do the rounding, then read back the exponent
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{sign}{:02}", trim(mantissa), exp.abs());
    }
    let decimals = (5 - exp) as usize;
    trim(&format!("{x:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Joins fields into one LF-terminated CSV record.
pub fn record<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut line = String::new();
    for (k, f) in fields.into_iter().enumerate() {
        if k > 0 {
            line.push(',');
        }
        line.push_str(f.as_ref());
    }
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.250425, "0.250425"),
            (0.7450411234, "0.745041"),
            (25.0, "25"),
            (62.5, "62.5"),
            (0.5, "0.5"),
            (1.0, "1"),
            (123456.7, "123457"),
            (999999.6, "1e+06"),
            (1_000_000.0, "1e+06"),
            (0.0001234567, "0.000123457"),
            (0.00001, "1e-05"),
            (3.2e-17, "3.2e-17"),
            (-0.125, "-0.125"),
            (0.9999996, "1"),
            (0.0, "0"),
        ];
        for (x, want) in cases {
            assert_eq!(g6(x), want, "{x}");
        }
    }

    #[test]
    fn records_end_in_lf() {
        assert_eq!(record(["a", "b"]), "a,b\n");
        assert_eq!(record(Vec::<String>::new()), "\n");
    }
}
