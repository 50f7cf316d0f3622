//! Sweep rows for the figure data files and their CSV encoding.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{evolve_omega_kraus, OmegaParams};
use crate::correlations::{analyze, CorrelationReport, TheoremBranch};
use crate::entanglement::eof_bc_koashi_winter;
use crate::error::{QcorrError, Result};
use crate::qmat::XParams;

pub const CSV_HEADER: &str = "series,value,discord,deficit,theta_star_discord,theta_star_deficit,\
classical_correlation,eof_bc,theorem_branch,relation_residual";

/// One sweep point. `series` names the curve, `value` is the swept variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub series: String,
    pub value: f64,
    pub discord: f64,
    pub deficit: f64,
    pub theta_star_discord: f64,
    pub theta_star_deficit: f64,
    pub classical_correlation: f64,
    pub eof_bc: f64,
    pub theorem_branch: TheoremBranch,
    pub relation_residual: Option<f64>,
}

impl SweepRow {
    pub fn from_report(series: &str, value: f64, report: &CorrelationReport, eof_bc: f64) -> Self {
        SweepRow {
            series: series.to_string(),
            value,
            discord: report.discord.value,
            deficit: report.deficit.value,
            theta_star_discord: report.discord.theta_star,
            theta_star_deficit: report.deficit.theta_star,
            classical_correlation: report.classical_correlation,
            eof_bc,
            theorem_branch: report.theorem_branch,
            relation_residual: report.relation_residual,
        }
    }

    pub fn for_state(series: &str, value: f64, p: &XParams) -> Result<Self> {
        let report = analyze(p)?;
        Ok(Self::from_report(
            series,
            value,
            &report,
            eof_bc_koashi_winter(p)?,
        ))
    }

    pub fn to_csv_line(&self) -> String {
        [
            self.series.clone(),
            format_sig(self.value),
            format_sig(self.discord),
            format_sig(self.deficit),
            format_sig(self.theta_star_discord),
            format_sig(self.theta_star_deficit),
            format_sig(self.classical_correlation),
            format_sig(self.eof_bc),
            self.theorem_branch.as_str().to_string(),
            format_sig(self.relation_residual.unwrap_or(f64::NAN)),
        ]
        .join(",")
    }
}

/// Formats with 12 significant digits, fixed notation for moderate exponents.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(QcorrError::InvalidInput(format!(
            "need at least 2 grid points, got {steps}"
        )));
    }
    if min.is_nan() || max.is_nan() || min > max {
        return Err(QcorrError::InvalidInput(format!(
            "empty range [{min}, {max}]"
        )));
    }
    let span = max - min;
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                max
            } else {
                min + span * i as f64 / (steps - 1) as f64
            }
        })
        .collect())
}

fn check_unit_range(name: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        Some(v) => Err(QcorrError::InvalidInput(format!(
            "{name} value {v} outside [0,1]"
        ))),
        None => Ok(()),
    }
}

/// Rows for q |psi-><psi-| + (1-q)|00><00| over the given q values.
pub fn sweep_q(qs: &[f64]) -> Result<Vec<SweepRow>> {
    check_unit_range("q", qs)?;
    qs.par_iter()
        .map(|&q| SweepRow::for_state("rho_q", q, &XParams::werner_like_q(q)?))
        .collect()
}

/// Rows for the phase-damped a = 0 family, one series per cy, gamma fastest.
pub fn sweep_gamma_rows(
    b: f64,
    cx: f64,
    cz: f64,
    cy_list: &[f64],
    gammas: &[f64],
) -> Result<Vec<SweepRow>> {
    check_unit_range("gamma", gammas)?;
    let omegas = cy_list
        .iter()
        .map(|&cy| OmegaParams::new(b, cx, cy, cz).map(|o| (format!("cy={}", format_sig(cy)), o)))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(&str, &OmegaParams, f64)> = omegas
        .iter()
        .flat_map(|(name, o)| gammas.iter().map(move |&g| (name.as_str(), o, g)))
        .collect();
    points
        .par_iter()
        .map(|&(name, o, g)| SweepRow::for_state(name, g, &evolve_omega_kraus(o, g)?))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv_line())?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(0.5), "0.5");
        assert_eq!(format_sig(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_sig(-0.000123456789012345), "-0.000123456789012");
        assert_eq!(format_sig(1.5e-9), "1.5e-9");
        assert_eq!(format_sig(f64::NAN), "NaN");
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.0, 1.0, 51).unwrap();
        assert_eq!(g.len(), 51);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[50], 1.0);
        assert!((g[1] - 0.02).abs() < 1e-16);
        assert!(linspace(0.0, 1.0, 1).is_err());
        assert!(linspace(1.0, 0.0, 5).is_err());
    }

    #[test]
    fn csv_header_matches_row_fields() {
        let row = SweepRow::for_state("rho_q", 0.0, &XParams::werner_like_q(0.0).unwrap()).unwrap();
        let json = serde_json::to_value(&row).unwrap();
        let keys: Vec<&str> = CSV_HEADER.split(',').collect();
        let obj = json.as_object().unwrap();
        assert_eq!(obj.len(), keys.len());
        for k in keys {
            assert!(obj.contains_key(k), "{k}");
        }
        assert_eq!(
            row.to_csv_line().split(',').count(),
            CSV_HEADER.split(',').count()
        );
    }

    #[test]
    fn q_sweep_endpoints() {
        let rows = sweep_q(&[0.0, 1.0]).unwrap();
        let zero = &rows[0];
        for v in [
            zero.discord,
            zero.deficit,
            zero.classical_correlation,
            zero.eof_bc,
        ] {
            assert!(v.abs() < 1e-12);
        }
        assert!((rows[1].discord - 1.0).abs() < 1e-9);
        assert!((rows[1].deficit - 1.0).abs() < 1e-9);
        assert!(sweep_q(&[1.2]).is_err());
    }

    #[test]
    fn gamma_rows_order() {
        let rows = sweep_gamma_rows(0.26, 0.13, 0.08, &[0.15, 0.55], &[0.0, 1.0]).unwrap();
        let labels: Vec<(String, f64)> = rows.iter().map(|r| (r.series.clone(), r.value)).collect();
        assert_eq!(
            labels,
            vec![
                ("cy=0.15".into(), 0.0),
                ("cy=0.15".into(), 1.0),
                ("cy=0.55".into(), 0.0),
                ("cy=0.55".into(), 1.0)
            ]
        );
        assert!((rows[1].discord - rows[3].discord).abs() < 1e-12);
    }
}
