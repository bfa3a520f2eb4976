//! CSV rows. Numbers use C's `%.12g`, lines end in LF.

use std::fmt::Write;

use unruhchan_core::{OptResult, Rail, Receiver};

pub const SWEEP_HEADER: &str = "r,qR,alpha2,rail,measure,receiver,value,deficit,N";
pub const OPT_HEADER: &str = "r,alpha2_opt,qR_opt,value,measure,rail,evals";

/// `printf("%.*g", digits, x)`.
pub fn fmt_g(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let p = digits.max(1);
    // Round once in scientific form; the exponent decides the layout.
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -4 || exp >= p as i32 {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn g(x: f64) -> String {
    fmt_g(x, 12)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub r: f64,
    pub q_r: f64,
    pub alpha2: f64,
    pub rail: Rail,
    pub measure: &'static str,
    pub receiver: Receiver,
    pub value: f64,
    pub deficit: f64,
    pub cutoff: usize,
}

pub fn sweep_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            g(row.r),
            g(row.q_r),
            g(row.alpha2),
            row.rail,
            row.measure,
            row.receiver,
            g(row.value),
            g(row.deficit),
            row.cutoff
        )
        .unwrap();
    }
    out
}

pub fn optimize_csv(results: &[OptResult]) -> String {
    let mut out = String::from(OPT_HEADER);
    out.push('\n');
    for o in results {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            g(o.r),
            g(o.alpha2_opt),
            g(o.q_r_opt),
            g(o.value),
            o.measure,
            o.rail,
            o.evals
        )
        .unwrap();
    }
    out
}
