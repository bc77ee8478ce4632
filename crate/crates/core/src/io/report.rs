//! CSV, JSON and SVG report emission.
//!
//! CSV files use LF line endings, `.` as the decimal separator and a fixed
//! column order. Floats are written in shortest round-trip form, so reading a
//! report back gives the same values.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::crossmatch::CrossmatchOutcome;
use crate::error::{Error, Result};
use crate::harness::{EpeffReport, PValueStats};

pub const EPEFF_COLUMNS: [&str; 5] = ["label", "mean_p", "energy", "epeff", "cores"];
pub const TRIAL_COLUMNS: [&str; 3] = ["trial", "a_obs", "p_value"];

/// One row of an EPEff CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpeffRow {
    pub label: String,
    pub mean_p: f64,
    pub energy: f64,
    pub epeff: f64,
    pub cores: usize,
}

impl From<&EpeffReport> for EpeffRow {
    fn from(r: &EpeffReport) -> Self {
        EpeffRow {
            label: r.label.clone(),
            mean_p: r.mean_p,
            energy: r.energy,
            epeff: r.epeff,
            cores: r.resources.cores,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub a_obs: usize,
    pub p_value: f64,
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        kind => Error::Parse {
            offset: 0,
            message: format!("{kind:?}"),
        },
    }
}

fn write_csv<T: Serialize>(rows: impl IntoIterator<Item = T>, columns: &[&str]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(columns).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
}

fn read_csv<T: for<'de> Deserialize<'de>>(text: &str, columns: &[&str]) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_err)?;
    if !header.iter().eq(columns.iter().copied()) {
        return Err(Error::Parse {
            offset: 0,
            message: format!("expected columns {}", columns.join(",")),
        });
    }
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

pub fn epeff_csv(reports: &[EpeffReport]) -> Result<String> {
    write_csv(reports.iter().map(EpeffRow::from), &EPEFF_COLUMNS)
}

pub fn parse_epeff_csv(text: &str) -> Result<Vec<EpeffRow>> {
    read_csv(text, &EPEFF_COLUMNS)
}

pub fn trials_csv(outcomes: &[CrossmatchOutcome]) -> Result<String> {
    let rows = outcomes.iter().enumerate().map(|(trial, o)| TrialRow {
        trial,
        a_obs: o.a_obs,
        p_value: o.p_value,
    });
    write_csv(rows, &TRIAL_COLUMNS)
}

pub fn parse_trials_csv(text: &str) -> Result<Vec<TrialRow>> {
    read_csv(text, &TRIAL_COLUMNS)
}

/// Pretty JSON with struct fields in declaration order and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Summary written by a self-vs-self calibration run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullCheckSummary {
    pub sampler: String,
    pub n_per_trial: usize,
    pub num_trials: usize,
    pub mean_p: f64,
    pub ks_vs_uniform: f64,
    pub max_excess_over_uniform: f64,
    pub histogram: Vec<u64>,
}

impl NullCheckSummary {
    pub fn new(sampler: String, n_per_trial: usize, stats: &PValueStats) -> Self {
        NullCheckSummary {
            sampler,
            n_per_trial,
            num_trials: stats.p_values.len(),
            mean_p: stats.mean_p,
            ks_vs_uniform: stats.ks_vs_uniform,
            max_excess_over_uniform: stats.max_excess_over_uniform,
            histogram: stats.histogram.clone(),
        }
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn svg_frame(title: &str, y_label: &str, y_max: f64, body: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, y0, y1) = (MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#,
        WIDTH - MARGIN / 2.0
    );
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for k in 0..=4 {
        let y = y0 - (y0 - y1) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{:.3e}</text>"#,
            x0 - 4.0,
            y + 4.0,
            y_max * k as f64 / 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" transform="rotate(-90 14 {})" text-anchor="middle">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    s.push_str(body);
    s.push_str("</svg>\n");
    s
}

fn y_scale(values: &[f64]) -> f64 {
    let m = values.iter().copied().filter(|v| v.is_finite()).fold(0.0, f64::max);
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

/// Vertical bar chart, one bar per label.
pub fn bar_chart_svg(title: &str, y_label: &str, labels: &[String], values: &[f64]) -> Result<String> {
    Error::check_dim("bar chart values", labels.len(), values.len())?;
    let y_max = y_scale(values);
    let plot_w = WIDTH - 1.5 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let slot = plot_w / labels.len().max(1) as f64;
    let mut body = String::new();
    for (k, (label, &v)) in labels.iter().zip(values).enumerate() {
        let h = (v.max(0.0) / y_max) * plot_h;
        let x = MARGIN + k as f64 * slot + 0.15 * slot;
        let _ = writeln!(
            body,
            r#"<rect x="{x:.1}" y="{:.1}" width="{:.1}" height="{h:.1}" fill="steelblue"/>"#,
            HEIGHT - MARGIN - h,
            0.7 * slot
        );
        let _ = writeln!(
            body,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
            x + 0.35 * slot,
            HEIGHT - MARGIN + 16.0,
            escape(label)
        );
    }
    Ok(svg_frame(title, y_label, y_max, &body))
}

/// Polyline through evenly spaced points labelled along the x axis.
pub fn line_chart_svg(title: &str, y_label: &str, labels: &[String], values: &[f64]) -> Result<String> {
    Error::check_dim("line chart values", labels.len(), values.len())?;
    let y_max = y_scale(values);
    let plot_w = WIDTH - 1.5 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let step = plot_w / labels.len().max(1) as f64;
    let pts: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            (
                MARGIN + (k as f64 + 0.5) * step,
                HEIGHT - MARGIN - (v.max(0.0) / y_max) * plot_h,
            )
        })
        .collect();
    let mut body = String::new();
    let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
    let _ = writeln!(
        body,
        r#"<polyline points="{}" fill="none" stroke="darkred" stroke-width="2"/>"#,
        path.join(" ")
    );
    for ((x, y), label) in pts.iter().zip(labels) {
        let _ = writeln!(body, r#"<circle cx="{x:.1}" cy="{y:.1}" r="3.5" fill="darkred"/>"#);
        let _ = writeln!(
            body,
            r#"<text x="{x:.1}" y="{}" text-anchor="middle">{}</text>"#,
            HEIGHT - MARGIN + 16.0,
            escape(label)
        );
    }
    Ok(svg_frame(title, y_label, y_max, &body))
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossmatch::MatchingMethod;
    use crate::harness::EnergyModel;
    use crate::neuro::resource_estimate;

    fn reports() -> Vec<EpeffReport> {
        let em = EnergyModel::default();
        vec![
            EpeffReport::new("G1".into(), 0.31, resource_estimate(24, 1, 256).unwrap(), 1200, &em).unwrap(),
            EpeffReport::new("a,\"b\"".into(), 1e-9, resource_estimate(24, 4, 256).unwrap(), 77, &em).unwrap(),
        ]
    }

    #[test]
    fn epeff_csv_round_trip() {
        let r = reports();
        let text = epeff_csv(&r).unwrap();
        assert!(text.starts_with("label,mean_p,energy,epeff,cores\nG1,0.31,"), "{text}");
        assert!(!text.contains('\r'));
        let rows = parse_epeff_csv(&text).unwrap();
        assert_eq!(rows, r.iter().map(EpeffRow::from).collect::<Vec<_>>());
    }

    #[test]
    fn trials_csv_round_trip() {
        let o = CrossmatchOutcome {
            n: 5,
            a_obs: 3,
            p_value: 0.123456789,
            method: MatchingMethod::Optimal,
            null_exact: true,
        };
        let text = trials_csv(&[o.clone(), o]).unwrap();
        assert_eq!(text, "trial,a_obs,p_value\n0,3,0.123456789\n1,3,0.123456789\n");
        assert_eq!(parse_trials_csv(&text).unwrap().len(), 2);
        assert!(parse_trials_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn json_key_order_is_fixed() {
        let o = CrossmatchOutcome {
            n: 5,
            a_obs: 3,
            p_value: 0.5,
            method: MatchingMethod::Greedy,
            null_exact: false,
        };
        let j = to_json(&o).unwrap();
        let keys: Vec<usize> = ["\"n\"", "\"a_obs\"", "\"p_value\"", "\"method\"", "\"null_exact\""]
            .iter()
            .map(|k| j.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(serde_json::from_str::<CrossmatchOutcome>(&j).unwrap(), o);
    }

    #[test]
    fn svg_charts_are_well_formed() {
        let labels: Vec<String> = ["G1", "G2", "<x>"].iter().map(|s| s.to_string()).collect();
        let bar = bar_chart_svg("EPEff", "epeff", &labels, &[1.0, 2.0, 0.0]).unwrap();
        assert!(bar.starts_with("<svg") && bar.ends_with("</svg>\n"));
        assert_eq!(bar.matches("<rect").count(), 4);
        assert!(bar.contains("&lt;x&gt;"));
        let line = line_chart_svg("mean p", "p", &labels, &[0.5, 0.4, 0.1]).unwrap();
        assert_eq!(line.matches("<circle").count(), 3);
        assert!(bar_chart_svg("t", "y", &labels, &[1.0]).is_err());
    }
}
