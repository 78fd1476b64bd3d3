//! File output: per-instance CSV, histogram CSV, JSON summary, SVG chart.
//!
//! Everything written here is a pure function of its inputs (no
//! timestamps, no hostnames), so fixed seeds give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::histogram::Histogram;
use super::run::InstanceOutcome;
use super::spec::ExperimentSpec;
use super::HarnessError;

fn create(path: &Path) -> Result<BufWriter<File>, HarnessError> {
    File::create(path).map(BufWriter::new).map_err(|source| HarnessError::Io { path: path.into(), source })
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct InstanceRow {
    pub instance_id: u64,
    pub n: usize,
    pub structure: String,
    pub sign_a: String,
    pub sign_b: String,
    pub threshold_mode: String,
    /// −1 when unresolved.
    pub period: i64,
    pub transient: u64,
    pub steps_executed: u64,
}

impl InstanceRow {
    pub fn new(spec: &ExperimentSpec, o: &InstanceOutcome) -> Self {
        let (sign_a, sign_b) = spec.family.sign_labels();
        InstanceRow {
            instance_id: o.instance,
            n: o.n,
            structure: spec.family.to_string(),
            sign_a: sign_a.into(),
            sign_b: sign_b.into(),
            threshold_mode: spec.threshold_mode.to_string(),
            period: o.period.map_or(-1, |p| p as i64),
            transient: o.transient,
            steps_executed: o.steps_executed,
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct HistogramRow {
    /// −1 for the unresolved bucket.
    pub period: i64,
    pub count: u64,
    pub probability: f64,
}

pub fn histogram_rows(h: &Histogram) -> Vec<HistogramRow> {
    let trials = h.trials().max(1) as f64;
    let mut rows: Vec<HistogramRow> = h
        .counts
        .iter()
        .map(|(&p, &c)| HistogramRow { period: p as i64, count: c, probability: c as f64 / trials })
        .collect();
    if h.unresolved > 0 {
        rows.push(HistogramRow { period: -1, count: h.unresolved, probability: h.unresolved as f64 / trials });
    }
    rows
}

fn write_rows<W: Write, R: Serialize>(w: W, header: &[&str], rows: &[R]) -> Result<(), csv::Error> {
    let mut wtr = csv_writer(w);
    if rows.is_empty() {
        wtr.write_record(header)?;
    }
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

const INSTANCE_HEADER: [&str; 9] =
    ["instance_id", "n", "structure", "sign_a", "sign_b", "threshold_mode", "period", "transient", "steps_executed"];
const HISTOGRAM_HEADER: [&str; 3] = ["period", "count", "probability"];

pub fn write_instances_csv<W: Write>(
    w: W,
    spec: &ExperimentSpec,
    outcomes: &[InstanceOutcome],
) -> Result<(), csv::Error> {
    let rows: Vec<InstanceRow> = outcomes.iter().map(|o| InstanceRow::new(spec, o)).collect();
    write_rows(w, &INSTANCE_HEADER, &rows)
}

pub fn write_histogram_csv<W: Write>(w: W, h: &Histogram) -> Result<(), csv::Error> {
    write_rows(w, &HISTOGRAM_HEADER, &histogram_rows(h))
}

pub fn emit_instances_csv(
    spec: &ExperimentSpec,
    outcomes: &[InstanceOutcome],
    path: &Path,
) -> Result<(), HarnessError> {
    write_instances_csv(create(path)?, spec, outcomes).map_err(|source| HarnessError::Csv { path: path.into(), source })
}

pub fn emit_histogram_csv(h: &Histogram, path: &Path) -> Result<(), HarnessError> {
    write_histogram_csv(create(path)?, h).map_err(|source| HarnessError::Csv { path: path.into(), source })
}

pub fn read_histogram_csv<R: Read>(r: R) -> Result<Histogram, csv::Error> {
    let mut h = Histogram::default();
    for row in csv::Reader::from_reader(r).deserialize::<HistogramRow>() {
        let row = row?;
        if row.period < 0 {
            h.unresolved += row.count;
        } else {
            h.counts.insert(row.period as u64, row.count);
        }
    }
    Ok(h)
}

pub fn read_instances_csv<R: Read>(r: R) -> Result<Vec<InstanceRow>, csv::Error> {
    csv::Reader::from_reader(r).deserialize().collect()
}

/// JSON summary; field order is the serialization order.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub spec: ExperimentSpec,
    pub trials: u64,
    pub counts: BTreeMap<u64, u64>,
    pub unresolved: u64,
    pub mode_period: Option<u64>,
    pub mode_probability: f64,
    pub mean_period: Option<f64>,
    pub stddev_period: Option<f64>,
}

impl Summary {
    pub fn new(spec: &ExperimentSpec, h: &Histogram) -> Self {
        Summary {
            spec: spec.clone(),
            trials: h.trials(),
            counts: h.counts.clone(),
            unresolved: h.unresolved,
            mode_period: h.mode_period(),
            mode_probability: h.mode_probability(),
            mean_period: h.mean_period(),
            stddev_period: h.stddev_period(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

pub fn emit_json_summary(spec: &ExperimentSpec, h: &Histogram, path: &Path) -> Result<(), HarnessError> {
    let mut w = create(path)?;
    w.write_all(Summary::new(spec, h).to_json().as_bytes())
        .and_then(|_| w.flush())
        .map_err(|source| HarnessError::Io { path: path.into(), source })
}

#[derive(Clone, Copy, Debug)]
pub struct SvgOptions {
    /// Periods above this share one overflow bar.
    pub max_period: u64,
    pub width: f64,
    pub height: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { max_period: 64, width: 640.0, height: 360.0 }
    }
}

struct Bar {
    label: String,
    probability: f64,
}

fn bars(h: &Histogram, max_period: u64) -> Vec<Bar> {
    let trials = h.trials().max(1) as f64;
    let mut out: Vec<Bar> = h
        .counts
        .range(..=max_period)
        .map(|(p, &c)| Bar { label: p.to_string(), probability: c as f64 / trials })
        .collect();
    let overflow: u64 = h.counts.range(max_period + 1..).map(|(_, c)| c).sum();
    if overflow > 0 {
        out.push(Bar { label: format!(">{max_period}"), probability: overflow as f64 / trials });
    }
    if h.unresolved > 0 {
        out.push(Bar { label: "∞".into(), probability: h.unresolved as f64 / trials });
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Standalone SVG bar chart: one bar per observed period (probability on
/// the y axis), an overflow bar and an `∞` bar for unresolved runs.
pub fn render_svg(h: &Histogram, title: &str, opts: SvgOptions) -> String {
    let (w, ht) = (opts.width, opts.height);
    let (left, right, top, bottom) = (56.0, 16.0, 36.0, 44.0);
    let plot_w = w - left - right;
    let plot_h = ht - top - bottom;
    let base = top + plot_h;
    let bars = bars(h, opts.max_period);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{ht}" viewBox="0 0 {w} {ht}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{ht}" fill="white"/>"#);
    let _ =
        writeln!(s, r#"<text x="{:.2}" y="20" text-anchor="middle" font-size="14">{}</text>"#, w / 2.0, escape(title));
    for k in 0..=4 {
        let frac = k as f64 / 4.0;
        let y = base - frac * plot_h;
        let _ = writeln!(
            s,
            "<line x1=\"{left:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#ddd\"/>",
            left + plot_w
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{frac:.2}</text>"#, left - 6.0, y + 4.0);
    }
    let _ =
        writeln!(s, r#"<line x1="{left:.2}" y1="{base:.2}" x2="{:.2}" y2="{base:.2}" stroke="black"/>"#, left + plot_w);
    let _ = writeln!(s, r#"<line x1="{left:.2}" y1="{top:.2}" x2="{left:.2}" y2="{base:.2}" stroke="black"/>"#);

    if !bars.is_empty() {
        let slot = plot_w / bars.len() as f64;
        let bar_w = slot * 0.8;
        for (k, bar) in bars.iter().enumerate() {
            let x = left + k as f64 * slot + (slot - bar_w) / 2.0;
            let bh = bar.probability * plot_h;
            let _ = writeln!(
                s,
                "<rect class=\"bar\" data-label=\"{}\" data-probability=\"{}\" x=\"{x:.2}\" y=\"{:.2}\" width=\"{bar_w:.2}\" height=\"{bh:.2}\" fill=\"#4c72b0\"/>",
                escape(&bar.label),
                bar.probability,
                base - bh
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                x + bar_w / 2.0,
                base + 14.0,
                escape(&bar.label)
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">cycle length</text>"#,
        left + plot_w / 2.0,
        ht - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">probability</text>"#,
        top + plot_h / 2.0,
        top + plot_h / 2.0
    );
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg_histogram(h: &Histogram, title: &str, opts: SvgOptions, path: &Path) -> Result<(), HarnessError> {
    let mut w = create(path)?;
    w.write_all(render_svg(h, title, opts).as_bytes())
        .and_then(|_| w.flush())
        .map_err(|source| HarnessError::Io { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::spec::StructureFamily;
    use crate::structure::ThresholdMode;

    fn bar_data(svg: &str) -> Vec<(String, f64)> {
        svg.lines()
            .filter(|l| l.starts_with("<rect class=\"bar\""))
            .map(|l| {
                let attr = |name: &str| {
                    let start = l.find(&format!("{name}=\"")).unwrap() + name.len() + 2;
                    l[start..start + l[start..].find('"').unwrap()].to_string()
                };
                (attr("data-label"), attr("data-probability").parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn empty_histogram_csv_is_header_only() {
        let mut buf = Vec::new();
        write_histogram_csv(&mut buf, &Histogram::default()).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "period,count,probability\n");
        let mut buf = Vec::new();
        let spec = ExperimentSpec::new("x", StructureFamily::Hermitian, ThresholdMode::Zero);
        write_instances_csv(&mut buf, &spec, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "instance_id,n,structure,sign_a,sign_b,threshold_mode,period,transient,steps_executed\n"
        );
    }

    #[test]
    fn histogram_csv_round_trip() {
        let h = Histogram::from_periods([Some(4), Some(4), Some(8), None, Some(1)]);
        let mut buf = Vec::new();
        write_histogram_csv(&mut buf, &h).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().any(|l| l.starts_with("-1,")));
        assert!(!text.contains('\r'));
        assert_eq!(read_histogram_csv(buf.as_slice()).unwrap(), h);

        let resolved = Histogram::from_periods([Some(2)]);
        let mut buf = Vec::new();
        write_histogram_csv(&mut buf, &resolved).unwrap();
        assert!(!String::from_utf8(buf).unwrap().contains("-1,"));
    }

    #[test]
    fn instance_rows_mark_unresolved() {
        let spec = ExperimentSpec::new(
            "x",
            StructureFamily::RectGrid {
                sym_a: crate::structure::SymmetryKind::Symmetric,
                sign_a: crate::structure::SignKind::Positive,
                sym_b: crate::structure::SymmetryKind::Arbitrary,
                sign_b: crate::structure::SignKind::Negative,
            },
            ThresholdMode::Zero,
        );
        let outcomes = [
            InstanceOutcome { instance: 0, n: 7, period: Some(8), transient: 3, steps_executed: 20 },
            InstanceOutcome { instance: 1, n: 9, period: None, transient: 0, steps_executed: 100 },
        ];
        let mut buf = Vec::new();
        write_instances_csv(&mut buf, &spec, &outcomes).unwrap();
        let rows = read_instances_csv(buf.as_slice()).unwrap();
        assert_eq!(rows[0].period, 8);
        assert_eq!(rows[1].period, -1);
        assert_eq!(rows[0].sign_a, "positive");
        assert_eq!(rows[0].sign_b, "negative");
        assert_eq!(rows[0].structure, "rect:symmetric:positive:arbitrary:negative");
    }

    #[test]
    fn json_summary_shape() {
        let spec = ExperimentSpec::new("x", StructureFamily::SkewHermitian, ThresholdMode::Zero);
        let h = Histogram::from_periods([Some(4), Some(4), Some(12), None]);
        let json = Summary::new(&spec, &h).to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let p = v["mode_probability"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&p));
        for key in v["counts"].as_object().unwrap().keys() {
            assert!(key.parse::<u64>().unwrap() > 0);
        }
        let order = [
            "spec",
            "trials",
            "counts",
            "unresolved",
            "mode_period",
            "mode_probability",
            "mean_period",
            "stddev_period",
        ];
        let at: Vec<usize> = order.iter().map(|k| json.find(&format!("\n  \"{k}\":")).unwrap()).collect();
        assert!(at.windows(2).all(|w| w[0] < w[1]), "{json}");
        assert!(json.ends_with("}\n"));
    }

    #[test]
    fn svg_single_bucket() {
        let svg = render_svg(&Histogram::from_periods([Some(8), Some(8)]), "one", SvgOptions::default());
        assert_eq!(bar_data(&svg), vec![("8".to_string(), 1.0)]);
    }

    #[test]
    fn svg_bars_sum_to_one_with_overflow_and_unresolved() {
        let h = Histogram::from_periods([Some(1), Some(2), Some(100), Some(300), None]);
        let svg = render_svg(&h, "mixed <cell>", SvgOptions { max_period: 64, ..Default::default() });
        let data = bar_data(&svg);
        let labels: Vec<&str> = data.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, ["1", "2", "&gt;64", "∞"]);
        let total: f64 = data.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(svg.contains("mixed &lt;cell&gt;"));
        assert_eq!(svg, render_svg(&h, "mixed <cell>", SvgOptions { max_period: 64, ..Default::default() }));
    }
}
