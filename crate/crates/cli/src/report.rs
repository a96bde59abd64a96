//! CSV emitters. Numbers are written deterministically: exact integers in
//! decimal, constants via [`format_constant`], floats in shortest
//! round-trip scientific notation.

use markov_growth::action::{
    lp_norm, AverageSeries, ConvergenceReport, Exponent, FiniteSpace, InvarianceReport,
};
use markov_growth::regularity::{format_constant, RegularDescriptor, ResidueClass, ValidationReport};
use markov_growth::CountTable;
use num_bigint::BigUint;

use crate::CliError;

pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:e}")
    }
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, CliError> {
    w.into_inner()
        .map_err(|e| CliError::Csv(csv::Error::from(e.into_error())))
}

/// `n,sphere,<u>-><v>,...` for `n = 0..=n_max`. The sphere column is left
/// out when `spheres` is `None`.
pub fn count_csv(
    spheres: Option<&[BigUint]>,
    table: &CountTable,
    pairs: &[(usize, usize, String)],
) -> Result<Vec<u8>, CliError> {
    let mut w = writer();
    let mut header = vec!["n".to_string()];
    if spheres.is_some() {
        header.push("sphere".to_string());
    }
    header.extend(pairs.iter().map(|(_, _, name)| name.clone()));
    w.write_record(&header)?;
    for n in 0..=table.n_max() {
        let mut row = vec![n.to_string()];
        if let Some(s) = spheres {
            row.push(s[n].to_string());
        }
        for (u, v, _) in pairs {
            row.push(table.pair(*u, *v, n).to_string());
        }
        w.write_record(&row)?;
    }
    finish(w)
}

pub const ANALYZE_HEADER: [&str; 12] = [
    "target",
    "q",
    "residue",
    "kind",
    "a",
    "b",
    "c",
    "horizon",
    "max_deviation",
    "worst_n",
    "window",
    "warning",
];

pub fn write_analyze_rows(
    w: &mut csv::Writer<Vec<u8>>,
    target: &str,
    d: &RegularDescriptor,
    report: &ValidationReport,
) -> Result<(), CliError> {
    let window = format!("{}-{}", report.n_lo, report.n_hi);
    let warning = if d.is_tolerance_resolved() {
        "tolerance-resolved"
    } else {
        ""
    };
    for (r, (cls, val)) in d.classes().iter().zip(&report.classes).enumerate() {
        let (a, b, c, horizon) = match cls {
            ResidueClass::Asymptotic { a, b, c } => {
                (format_constant(a), b.to_string(), format_constant(c), String::new())
            }
            ResidueClass::EventuallyZero { horizon } => {
                (String::new(), String::new(), String::new(), horizon.to_string())
            }
        };
        w.write_record([
            target.to_string(),
            d.q().to_string(),
            r.to_string(),
            cls.kind().to_string(),
            a,
            b,
            c,
            horizon,
            format_float(val.max_deviation),
            val.worst_index.map(|n| n.to_string()).unwrap_or_default(),
            window.clone(),
            warning.to_string(),
        ])?;
    }
    Ok(())
}

pub fn analyze_csv(rows: &[(String, RegularDescriptor, ValidationReport)]) -> Result<Vec<u8>, CliError> {
    let mut w = writer();
    w.write_record(ANALYZE_HEADER)?;
    for (target, d, report) in rows {
        write_analyze_rows(&mut w, target, d, report)?;
    }
    finish(w)
}

/// `n,sphere,s_norm` with `||s_n(phi)||_p`.
pub fn series_csv(series: &AverageSeries, space: &FiniteSpace, p: Exponent) -> Result<Vec<u8>, CliError> {
    let mut w = writer();
    w.write_record(["n", "sphere", &format!("s_norm_p{p}")])?;
    for n in 0..=series.n_max() {
        let norm = lp_norm(space, series.s(n), p)?;
        w.write_record([n.to_string(), series.sphere(n).to_string(), format_float(norm)])?;
    }
    finish(w)
}

/// Ladder rows `ladder,N,N_next,||c_{N_next} - c_N||_p,oscillation`, then
/// one `invariance,N,,value,` row.
pub fn ladder_csv(report: &ConvergenceReport, probe: &InvarianceReport) -> Result<Vec<u8>, CliError> {
    let mut w = writer();
    w.write_record(["row", "N", "N_next", &format!("value_p{}", report.p), "oscillation"])?;
    for s in &report.steps {
        w.write_record([
            "ladder".to_string(),
            s.from.to_string(),
            s.to.to_string(),
            format_float(s.difference),
            format_float(s.oscillation),
        ])?;
    }
    w.write_record([
        "invariance".to_string(),
        probe.big_n.to_string(),
        String::new(),
        format_float(probe.max),
        String::new(),
    ])?;
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(f64::INFINITY), "inf");
        assert_eq!(format_float(0.25), "2.5e-1");
        assert_eq!(format_float(1.0), "1e0");
    }
}
