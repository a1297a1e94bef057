//! Error tables, log-log rate fitting, and the CSV/metadata writers.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Least-squares fit of log(error) against log(param).
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    /// RMS of the log-misfit.
    pub residual: f64,
    /// indices excluded because the error was not positive
    pub excluded: Vec<usize>,
}

/// Fit a power law error ≈ C·param^slope. Nonpositive errors are excluded
/// with a flag; fewer than 3 surviving points is an error.
pub fn fit_rate(params: &[f64], errors: &[f64]) -> Result<RateFit> {
    if params.len() != errors.len() {
        return Err(Error::InvalidInput(format!(
            "mismatched lengths: {} params vs {} errors",
            params.len(),
            errors.len()
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = Vec::new();
    for (i, (&p, &e)) in params.iter().zip(errors).enumerate() {
        if e > 0.0 && e.is_finite() && p > 0.0 {
            xs.push(p.ln());
            ys.push(e.ln());
        } else {
            excluded.push(i);
        }
    }
    if xs.len() < 3 {
        return Err(Error::NoFit(format!(
            "need at least 3 positive points, have {}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(RateFit {
        slope,
        residual: (ss / n).sqrt(),
        excluded,
    })
}

/// Cumulative least-squares slope over the first i+1 points (pairwise slope
/// for the second point, blank before that).
pub fn running_slopes(params: &[f64], errors: &[f64]) -> Vec<Option<f64>> {
    (0..params.len())
        .map(|i| {
            if i == 0 {
                return None;
            }
            let xs: Vec<f64> = params[..=i].iter().map(|p| p.ln()).collect();
            let ys: Vec<f64> = errors[..=i]
                .iter()
                .map(|e| if *e > 0.0 { e.ln() } else { f64::NAN })
                .collect();
            if ys.iter().any(|y| !y.is_finite()) {
                return None;
            }
            let n = xs.len() as f64;
            let mx = xs.iter().sum::<f64>() / n;
            let my = ys.iter().sum::<f64>() / n;
            let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            Some(sxy / sxx)
        })
        .collect()
}

/// One sweep point of a model-vs-reference comparison.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub param: f64,
    pub err_linf_zeta: f64,
    pub err_linf_v: f64,
    pub err_hs: f64,
    pub failure: Option<String>,
}

/// A parameter sweep's error table with its fitted rate.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub points: Vec<PointResult>,
    pub fit: Option<RateFit>,
    pub flags: Vec<String>,
    pub meta: BTreeMap<String, String>,
}

impl ConvergenceReport {
    pub fn params(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.param).collect()
    }

    pub fn zeta_errors(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.err_linf_zeta).collect()
    }

    /// Fit the slope on the ζ sup-norm errors, skipping failed points.
    pub fn fit_on_zeta(&mut self) {
        let params: Vec<f64> = self
            .points
            .iter()
            .filter(|p| p.failure.is_none())
            .map(|p| p.param)
            .collect();
        let errs: Vec<f64> = self
            .points
            .iter()
            .filter(|p| p.failure.is_none())
            .map(|p| p.err_linf_zeta)
            .collect();
        match fit_rate(&params, &errs) {
            Ok(fit) => self.fit = Some(fit),
            Err(e) => self.flags.push(format!("no slope fit: {e}")),
        }
    }
}

fn fmt(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "nan".to_string()
    }
}

/// report.csv: `#`-prefixed metadata header, then
/// param,err_linf_zeta,err_linf_v,err_hs,slope rows.
pub fn write_report_csv(path: &Path, report: &ConvergenceReport) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    for (k, v) in &report.meta {
        writeln!(w, "# {k}={v}")?;
    }
    for flag in &report.flags {
        writeln!(w, "# flag: {flag}")?;
    }
    for p in report.points.iter().filter(|p| p.failure.is_some()) {
        writeln!(w, "# point {} failed: {}", p.param, p.failure.as_deref().unwrap_or(""))?;
    }
    writeln!(w, "param,err_linf_zeta,err_linf_v,err_hs,slope")?;
    let slope = report.fit.as_ref().map(|f| f.slope);
    for p in &report.points {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt(p.param),
            fmt(p.err_linf_zeta),
            fmt(p.err_linf_v),
            fmt(p.err_hs),
            slope.map(fmt).unwrap_or_default()
        )?;
    }
    Ok(())
}

/// report.meta: plain sorted key=value lines.
pub fn write_meta(path: &Path, meta: &BTreeMap<String, String>) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    for (k, v) in meta {
        writeln!(w, "{k}={v}")?;
    }
    Ok(())
}
