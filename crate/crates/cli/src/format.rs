//! Fixed-precision number formatting and the record CSV schema.

use std::io::Write;

use gsd_core::sweep::SweepRecord;

use crate::error::CliResult;

/// Significant digits of every number written to CSV.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Header of the full record table.
pub const RECORD_COLUMNS: [&str; 12] = [
    "x",
    "p",
    "r",
    "pe_pure",
    "pe_mixed",
    "pe_homodyne",
    "pe_helstrom_closed",
    "i_pure",
    "i_mixed",
    "i_gain",
    "i_levitin",
    "convergence_flag",
];

fn trim_fraction(digits: &str) -> &str {
    if digits.contains('.') {
        digits.trim_end_matches('0').trim_end_matches('.')
    } else {
        digits
    }
}

/// C-style `%.{sig}g`: shortest of fixed or scientific notation with `sig`
/// significant digits and trailing zeros removed.
pub fn format_g(value: f64, sig: usize) -> String {
    if value.is_nan() {
        return "nan".into();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if value == 0.0 {
        return if value.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{value:.decimals$}")).to_string()
    }
}

/// [`format_g`] at [`SIGNIFICANT_DIGITS`].
pub fn num(value: f64) -> String {
    format_g(value, SIGNIFICANT_DIGITS)
}

/// Missing values become empty fields.
pub fn opt_num(value: Option<f64>) -> String {
    value.map(num).unwrap_or_default()
}

pub fn record_row(rec: &SweepRecord) -> [String; 12] {
    [
        num(rec.x),
        num(rec.p),
        num(rec.r),
        num(rec.pe_pure),
        num(rec.pe_mixed),
        opt_num(rec.pe_homodyne),
        num(rec.pe_helstrom_closed),
        num(rec.i_pure),
        num(rec.i_mixed),
        num(rec.i_gain_emitted()),
        opt_num(rec.i_levitin),
        rec.convergence_flag.to_string(),
    ]
}

/// Writes a CSV table with the given header and preformatted rows.
pub fn write_table<W, I, R>(out: W, header: &[&str], rows: I) -> CliResult<()>
where
    W: Write,
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_records<W: Write>(out: W, records: &[SweepRecord]) -> CliResult<()> {
    write_table(out, &RECORD_COLUMNS, records.iter().map(record_row))
}
