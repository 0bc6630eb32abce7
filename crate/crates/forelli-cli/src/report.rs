//! Deterministic report assembly: versioned JSON layout and CSV flattening.
//!
//! Layout: {schema_version, header, config_echo, verdict, reports,
//! worst_offender, runtime_ms}. The header carries the timestamp and is the
//! only non-deterministic field besides runtime_ms; byte-identical configs
//! and seeds produce byte-identical bodies.

use std::time::{SystemTime, UNIX_EPOCH};

use forelli_core::moments::{BundleReport, Verdict};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1.0.0";

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Inconclusive => 3,
    }
}

pub fn assemble(
    config_echo: Value,
    verdict: &str,
    reports: Value,
    worst_offender: Value,
    runtime_ms: u128,
) -> Value {
    let ts = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    json!({
        "schema_version": SCHEMA_VERSION,
        "header": { "timestamp_unix_s": ts },
        "config_echo": config_echo,
        "verdict": verdict,
        "reports": reports,
        "worst_offender": worst_offender,
        "runtime_ms": runtime_ms,
    })
}

/// CSV flattening of a bundle report: one row per (line, m).
pub fn bundle_csv(report: &BundleReport) -> String {
    let mut out = String::from(
        "line_index,base_z1_re,base_z1_im,base_z2_re,base_z2_im,dir1_re,dir1_im,dir2_re,dir2_im,m,residual,verdict\n",
    );
    for (i, r) in report.reports.iter().enumerate() {
        let (b, d) = match &r.line {
            Some(l) => (l.base, l.dir),
            None => continue,
        };
        for (m, res) in &r.residuals {
            out.push_str(&format!(
                "{i},{},{},{},{},{},{},{},{},{m},{res:e},{}\n",
                b.z1.re, b.z1.im, b.z2.re, b.z2.im, d.0.re, d.0.im, d.1.re, d.1.im,
                verdict_str(r.verdict),
            ));
        }
    }
    out
}

/// Write a report to the given path, or stdout when absent.
pub fn emit(out: Option<&std::path::Path>, body: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| format!("cannot write output '{}': {e}", path.display())),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}
