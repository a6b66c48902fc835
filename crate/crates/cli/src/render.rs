//! JSON, CSV and human-readable output.

use std::fmt::Write as _;

use hilbert_tensor::{BoundCheck, BoundReport, PdVerdict};
use serde_json::Value;

use crate::config::OutputFormat;
use crate::run::{BoundsOutcome, Payload, ResultRecord, SweepRow};

/// Column header of `sweep --mode bounds` CSV output.
pub const BOUNDS_HEADER: &str =
    "m,n,a,h_status,h_observed,h_bound,h_margin,h_holds,z_observed,z_bound,z_margin,z_holds,holds";

/// Column header of `sweep --mode pdcheck` CSV output.
pub const PDCHECK_HEADER: &str = "m,n,a,regime,trials,min_rayleigh,consistent";

pub fn render(record: &ResultRecord, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(record).expect("record serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => csv(record),
        OutputFormat::Human => human(record),
    }
}

/// `%g`-style formatting with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // exponent after rounding to six digits, so 999999.7 becomes 1e6
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn csv(record: &ResultRecord) -> String {
    match &record.result {
        Payload::Sweep { rows } => sweep_csv(rows),
        other => {
            let value = serde_json::to_value(other).expect("payload serializes");
            let mut rows = Vec::new();
            flatten("", &value, &mut rows);
            let mut out = String::from("field,value\n");
            for (k, v) in rows {
                let _ = writeln!(out, "{k},{v}");
            }
            out
        }
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{}]", i + 1), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let header = match rows.first() {
        Some(SweepRow::Pdcheck { .. }) => PDCHECK_HEADER,
        _ => BOUNDS_HEADER,
    };
    let mut out = format!("{header}\n");
    for row in rows {
        let s = row.spec();
        match row {
            SweepRow::Bounds { outcome, .. } => {
                let h = match &outcome.h {
                    BoundCheck::Checked(r) => format!(
                        "checked,{},{},{},{}",
                        r.observed, r.bound_value, r.margin, r.holds
                    ),
                    BoundCheck::Skipped { .. } => "skipped,,,,".to_string(),
                };
                let z = &outcome.z;
                let _ = writeln!(
                    out,
                    "{},{},{},{h},{},{},{},{},{}",
                    s.m, s.n, s.a, z.observed, z.bound_value, z.margin, z.holds, outcome.holds
                );
            }
            SweepRow::Pdcheck { report, .. } => {
                let regime = serde_json::to_value(report.regime).expect("regime serializes");
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    s.m,
                    s.n,
                    s.a,
                    regime.as_str().unwrap_or_default(),
                    report.trials,
                    report.min_rayleigh,
                    report.verdict == PdVerdict::ConsistentWithPd
                );
            }
        }
    }
    out
}

fn chain_line(out: &mut String, r: &BoundReport) {
    let _ = writeln!(
        out,
        "  {}: observed {} <= bound {}  margin {}  {}",
        r.bound_name.as_str(),
        sig6(r.observed),
        sig6(r.bound_value),
        sig6(r.margin),
        if r.holds { "holds" } else { "VIOLATED" }
    );
}

fn bounds_human(out: &mut String, o: &BoundsOutcome) {
    match &o.h {
        BoundCheck::Checked(r) => chain_line(out, r),
        BoundCheck::Skipped { reason } => {
            let _ = writeln!(out, "  H bound skipped: {reason}");
        }
    }
    chain_line(out, &o.z);
}

fn human(record: &ResultRecord) -> String {
    let mut out = String::new();
    match &record.result {
        Payload::Entry { value } => {
            let _ = writeln!(out, "entry = {}", sig6(*value));
        }
        Payload::Apply {
            vector,
            scalar,
            method,
            nodes,
        } => {
            let method = serde_json::to_value(method).expect("method serializes");
            let _ = writeln!(out, "method: {}", method.as_str().unwrap_or_default());
            if let Some(k) = nodes {
                let _ = writeln!(out, "quadrature nodes: {k}");
            }
            let _ = writeln!(out, "H x^m = {}", sig6(*scalar));
            for (i, v) in vector.iter().enumerate() {
                let _ = writeln!(out, "  (H x^(m-1))_{} = {}", i + 1, sig6(*v));
            }
        }
        Payload::Eigen { mode, estimate } => {
            let label = match mode {
                crate::run::EigenMode::H => "H",
                crate::run::EigenMode::Z => "Z",
            };
            let _ = writeln!(
                out,
                "{label}-eigenvalue {}  residual {}  iterations {}  {}",
                sig6(estimate.value),
                sig6(estimate.residual),
                estimate.iterations,
                if estimate.converged {
                    "converged"
                } else {
                    "NOT converged"
                }
            );
        }
        Payload::Bounds(o) => {
            let _ = writeln!(out, "bound chain:");
            bounds_human(&mut out, o);
            let _ = writeln!(out, "all bounds hold: {}", o.holds);
        }
        Payload::Pdcheck(r) => {
            let regime = serde_json::to_value(r.regime).expect("regime serializes");
            let _ = writeln!(
                out,
                "{} trials ({}), min H x^m / ‖x‖_m^m = {}",
                r.trials,
                regime.as_str().unwrap_or_default(),
                sig6(r.min_rayleigh)
            );
            match &r.verdict {
                PdVerdict::ConsistentWithPd => {
                    let _ = writeln!(out, "all sampled values positive");
                }
                PdVerdict::Counterexample { value, .. } => {
                    let _ = writeln!(out, "non-positive sample: H x^m = {}", sig6(*value));
                }
            }
        }
        Payload::Opnorm(e) => {
            let _ = writeln!(
                out,
                "estimate {} <= bound {}  margin {}  ({} samples, series bound {})  {}",
                sig6(e.value),
                sig6(e.bound),
                sig6(e.bound - e.value),
                e.samples,
                sig6(e.series_bound),
                if e.within_bound { "holds" } else { "VIOLATED" }
            );
        }
        Payload::Sweep { rows } => {
            for row in rows {
                let s = row.spec();
                let _ = writeln!(out, "m={} n={} a={}", s.m, s.n, s.a);
                match row {
                    SweepRow::Bounds { outcome, .. } => bounds_human(&mut out, outcome),
                    SweepRow::Pdcheck { report, .. } => {
                        let _ = writeln!(
                            out,
                            "  min H x^m / ‖x‖_m^m = {}  {}",
                            sig6(report.min_rayleigh),
                            if report.verdict == PdVerdict::ConsistentWithPd {
                                "all positive"
                            } else {
                                "non-positive sample found"
                            }
                        );
                    }
                }
            }
        }
    }
    for w in &record.warnings {
        let _ = writeln!(
            out,
            "warning: {}",
            serde_json::to_string(w).expect("warning serializes")
        );
    }
    out
}
