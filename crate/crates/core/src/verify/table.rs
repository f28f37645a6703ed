use std::fmt::Write as _;

/// `log2(coarse / fine)`; zero when either error is not positive.
pub fn rate(coarse: f64, fine: f64) -> f64 {
    if coarse > 0.0 && fine > 0.0 {
        (coarse / fine).log2()
    } else {
        0.0
    }
}

/// Scientific notation with three significant digits and a two-digit
/// signed exponent, e.g. `1.58e-01`.
pub fn format_sci(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.2e}");
    let (mant, exp) = s.split_once('e').unwrap();
    let e: i32 = exp.parse().unwrap();
    format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

/// One refinement level.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub h_min: f64,
    pub e_u: f64,
    pub e_p: f64,
    pub e_lambda: f64,
    pub e_qlambda: f64,
    pub iterations: usize,
}

/// Errors per level with rates between consecutive levels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RateTable {
    pub rows: Vec<RateRow>,
}

pub const CSV_HEADER: &str = "h_min,e_u,r_u,e_p,r_p,e_lambda,r_lambda,e_Qlambda,r_Qlambda,iters";

impl RateTable {
    /// Rates `[r_u, r_p, r_lambda, r_Qlambda]` of row `i`; `None` for the first row.
    pub fn rates(&self, i: usize) -> Option<[f64; 4]> {
        if i == 0 || i >= self.rows.len() {
            return None;
        }
        let (a, b) = (&self.rows[i - 1], &self.rows[i]);
        Some([rate(a.e_u, b.e_u), rate(a.e_p, b.e_p), rate(a.e_lambda, b.e_lambda), rate(a.e_qlambda, b.e_qlambda)])
    }

    fn csv(&self, fmt: impl Fn(f64) -> String, rfmt: impl Fn(f64) -> String) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for (i, r) in self.rows.iter().enumerate() {
            let rates = self.rates(i).map(|x| x.map(&rfmt)).unwrap_or_else(|| std::array::from_fn(|_| String::new()));
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                fmt(r.h_min),
                fmt(r.e_u),
                rates[0],
                fmt(r.e_p),
                rates[1],
                fmt(r.e_lambda),
                rates[2],
                fmt(r.e_qlambda),
                rates[3],
                r.iterations
            )
            .unwrap();
        }
        s
    }

    /// Table with three significant digits and two-decimal rates.
    pub fn to_csv(&self) -> String {
        self.csv(format_sci, |r| format!("{r:.2}"))
    }

    /// Same layout at full precision.
    pub fn to_csv_full(&self) -> String {
        self.csv(|v| format!("{v:.17e}"), |v| format!("{v:.17e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_matches_table_style() {
        assert_eq!(format_sci(0.158), "1.58e-01");
        assert_eq!(format_sci(7.88e-2), "7.88e-02");
        assert_eq!(format_sci(12345.0), "1.23e+04");
        assert_eq!(format!("{:.2}", rate(1.58e-1, 7.88e-2)), "1.00");
        assert_eq!(rate(0.3, 0.3), 0.0);
    }

    #[test]
    fn first_row_rates_empty() {
        let row = |e: f64| RateRow { h_min: e, e_u: e, e_p: e, e_lambda: e, e_qlambda: e, iterations: 3 };
        let t = RateTable { rows: vec![row(0.2), row(0.1)] };
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "2.00e-01,2.00e-01,,2.00e-01,,2.00e-01,,2.00e-01,,3");
        assert!(lines[2].starts_with("1.00e-01,1.00e-01,1.00,"));
    }
}
