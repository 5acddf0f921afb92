use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::config::Check;
use super::run::{CheckReport, ObstructionReport, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    CsvPoints,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            "csv-points" => Ok(Format::CsvPoints),
            other => Err(Error::Config(format!("unknown format `{other}` (expected json, text or csv-points)"))),
        }
    }
}

/// Serializes a report. `csv_check` selects the check whose per-point
/// magnitudes go into the CSV; by default the first check with samples.
pub fn render_report(report: &ObstructionReport, format: Format, csv_check: Option<Check>) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Config(e.to_string()))?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Text => Ok(text(report).into_bytes()),
        Format::CsvPoints => csv(report, csv_check).map(String::into_bytes),
    }
}

fn fmt_point(p: &[f64]) -> String {
    let parts: Vec<String> = p.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", parts.join(", "))
}

fn text_line(c: &CheckReport) -> String {
    let mut line = format!("{:<6} {:<14}", c.status.label(), c.check.name());
    match &c.status {
        Status::Skipped { reason } => {
            let _ = write!(line, " {reason}");
        }
        Status::Error { message, point } => {
            let _ = write!(line, " {message}");
            if let Some(p) = point {
                let _ = write!(line, " at {}", fmt_point(p));
            }
        }
        Status::Pass | Status::Fail => {
            if let Some(m) = c.max_defect {
                let _ = write!(line, " max {m:.3e} (tol {:.0e})", c.tolerance);
            }
            if let Some(p) = &c.argmax {
                let _ = write!(line, " at {}", fmt_point(p));
            }
        }
    }
    line
}

fn text(r: &ObstructionReport) -> String {
    let mut out =
        format!("{} {} [{}] digest {}\n", r.tool, r.subject, r.kind, &r.scene_digest[..16.min(r.scene_digest.len())]);
    if r.point_count > 0 {
        let _ = writeln!(out, "{} sample points", r.point_count);
    }
    for c in &r.checks {
        out.push_str(&text_line(c));
        out.push('\n');
    }
    if let Some(t) = r.wall_time_ms {
        let _ = writeln!(out, "wall time {t:.1} ms");
    }
    out
}

fn csv(r: &ObstructionReport, which: Option<Check>) -> Result<String> {
    let c = match which {
        Some(w) => {
            r.check(w).ok_or_else(|| Error::Config(format!("check `{}` is not part of this report", w.name())))?
        }
        None => match r.checks.iter().find(|c| !c.samples.is_empty()) {
            Some(c) => c,
            None => return Err(Error::Config("no check in this report has per-point samples".into())),
        },
    };
    let mut out: Vec<String> = (0..r.dimension).map(|i| format!("x{i}")).collect();
    out.push("defect".into());
    let mut s = out.join(",");
    s.push('\n');
    for p in &c.samples {
        for x in &p.point {
            let _ = write!(s, "{x},");
        }
        let _ = writeln!(s, "{}", p.defect);
    }
    Ok(s)
}
