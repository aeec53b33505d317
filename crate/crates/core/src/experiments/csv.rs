use std::cmp::Ordering;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::sweep::SweepRow;

pub const CSV_HEADER: &str = "snr_db,scheme,metric,mode,value,std_err";

/// Formats `v` with 10 significant digits in the style of C's `%.10g`:
/// fixed notation for decimal exponents in `-4..10`, scientific otherwise,
/// trailing zeros removed.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Output order: metric, scheme name, SNR, mode.
pub fn row_order(a: &SweepRow, b: &SweepRow) -> Ordering {
    a.metric
        .cmp(&b.metric)
        .then_with(|| a.scheme.to_string().cmp(&b.scheme.to_string()))
        .then_with(|| a.snr_db.total_cmp(&b.snr_db))
        .then_with(|| a.mode.cmp(&b.mode))
}

/// Renders rows as CSV text, sorted by [`row_order`].
pub fn render_csv(rows: &[SweepRow]) -> String {
    let mut sorted: Vec<&SweepRow> = rows.iter().collect();
    sorted.sort_by(|a, b| row_order(a, b));
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in sorted {
        let std_err = r.std_err.map(format_sig).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            format_sig(r.snr_db),
            r.scheme,
            r.metric,
            r.mode,
            format_sig(r.value),
            std_err
        )
        .expect("writing to a String");
    }
    out
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    fs::write(path, render_csv(rows)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::Mode;
    use crate::model::Scheme;
    use crate::montecarlo::Metric;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(5.0), "5");
        assert_eq!(format_sig(-2.5), "-2.5");
        assert_eq!(format_sig(0.1), "0.1");
        assert_eq!(format_sig(1.0 / 3.0), "0.3333333333");
        assert_eq!(format_sig(0.027663123456789), "0.02766312346");
        assert_eq!(format_sig(4.0286e-4), "0.00040286");
        assert_eq!(format_sig(6.583e-10), "6.583e-10");
        assert_eq!(format_sig(7.20922742e-5), "7.20922742e-05");
        assert_eq!(format_sig(1.0 / 3.0 * 1e-7), "3.333333333e-08");
        assert_eq!(format_sig(12345678901.0), "1.23456789e+10");
        assert_eq!(format_sig(9.99999999999), "10");
        assert_eq!(format_sig(0.0), "0");
    }

    #[test]
    fn header_only_for_no_rows() {
        assert_eq!(render_csv(&[]), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn rows_sorted_and_std_err_blank_for_analytic() {
        let row = |snr_db, scheme, metric, mode, std_err| SweepRow {
            snr_db,
            scheme,
            metric,
            mode,
            value: 0.5,
            std_err,
        };
        let rows = vec![
            row(
                10.0,
                Scheme::ProposedDpss,
                Metric::Outage,
                Mode::Mc,
                Some(0.01),
            ),
            row(5.0, Scheme::ProposedDpss, Metric::Outage, Mode::Exact, None),
            row(
                5.0,
                Scheme::NonCooperative,
                Metric::Outage,
                Mode::Mc,
                Some(0.02),
            ),
            row(
                0.0,
                Scheme::ProposedDpss,
                Metric::Capacity,
                Mode::Mc,
                Some(0.03),
            ),
        ];
        let text = render_csv(&rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines,
            vec![
                CSV_HEADER,
                "5,noncoop,outage,mc,0.5,0.02",
                "5,proposed,outage,exact,0.5,",
                "10,proposed,outage,mc,0.5,0.01",
                "0,proposed,capacity,mc,0.5,0.03",
            ]
        );
    }

    #[test]
    fn unwritable_path_names_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("out.csv");
        let err = emit_csv(&[], &path).unwrap_err();
        assert!(err.to_string().contains("out.csv"), "{err}");
    }
}
