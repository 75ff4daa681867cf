//! Plain-text output for densities, sampled signals, and their metadata.
//!
//! CSVs are written with full shortest-roundtrip float formatting so a file
//! read back in reproduces the exact f64 bits. Every writer accepts an
//! optional comment that lands as a single leading `# ...` line, which is
//! where callers put provenance (tool version, config hash) without
//! disturbing the column layout.

use super::KernelDensity;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

/// Metadata describing how a signal was generated, stored as JSON next to
/// the sample files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalSidecar {
    pub omega: f64,
    pub t_half: f64,
    /// Seed of the generating stream, when the signal was random.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Damping exponent of the random Legendre series, when applicable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothness: Option<f64>,
    /// Human-readable statement of the amplitude normalization.
    pub normalization: String,
}

fn push_comment(out: &mut String, comment: Option<&str>) {
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
}

/// Write a density as `s,w,q` rows (node, weight, value).
pub fn write_density_csv(
    path: &Path,
    density: &KernelDensity,
    comment: Option<&str>,
) -> io::Result<()> {
    let mut out = String::new();
    push_comment(&mut out, comment);
    out.push_str("s,w,q\n");
    let rule = density.rule();
    for ((&s, &w), &q) in rule.nodes.iter().zip(&rule.weights).zip(density.values()) {
        let _ = writeln!(out, "{s},{w},{q}");
    }
    fs::write(path, out)
}

/// Write sampled series as `t,<name>,<name>,...` rows. All series must be
/// sampled on the same grid as `ts`.
pub fn write_samples_csv(
    path: &Path,
    ts: &[f64],
    series: &[(&str, &[f64])],
    comment: Option<&str>,
) -> io::Result<()> {
    for (name, values) in series {
        assert_eq!(
            values.len(),
            ts.len(),
            "series {name} has {} values for {} grid points",
            values.len(),
            ts.len()
        );
    }
    let mut out = String::new();
    push_comment(&mut out, comment);
    out.push('t');
    for (name, _) in series {
        let _ = write!(out, ",{name}");
    }
    out.push('\n');
    for (i, &t) in ts.iter().enumerate() {
        let _ = write!(out, "{t}");
        for (_, values) in series {
            let _ = write!(out, ",{}", values[i]);
        }
        out.push('\n');
    }
    fs::write(path, out)
}

/// Write the sidecar as pretty-printed JSON.
pub fn write_sidecar(path: &Path, sidecar: &SignalSidecar) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(sidecar)
        .map_err(|e| io::Error::new(io::ErrorKind::Other, e))?;
    text.push('\n');
    fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gauss_legendre_rule;

    #[test]
    fn density_csv_roundtrips_bits_through_text() {
        let rule = gauss_legendre_rule(8, -1.0, 1.0).unwrap();
        let values: Vec<f64> = rule.nodes.iter().map(|&s| (3.0 * s).sin() / 7.0).collect();
        let density = KernelDensity::new(rule.clone(), values.clone()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q.csv");
        write_density_csv(&path, &density, Some("tool v1")).unwrap();

        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# tool v1"));
        assert_eq!(lines.next(), Some("s,w,q"));
        for (i, line) in lines.enumerate() {
            let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            assert_eq!(cols[0], rule.nodes[i]);
            assert_eq!(cols[1], rule.weights[i]);
            assert_eq!(cols[2], values[i]);
        }
    }

    #[test]
    fn samples_csv_has_named_columns() {
        let ts = vec![0.0, 0.5, 1.0];
        let a = vec![1.0, 2.0, 3.0];
        let b = vec![-1.0, 0.0, 0.25];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        write_samples_csv(&path, &ts, &[("f_true", &a), ("f_est", &b)], None).unwrap();

        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,f_true,f_est"));
        assert_eq!(lines.next(), Some("0,1,-1"));
        assert_eq!(lines.next(), Some("0.5,2,0"));
        assert_eq!(lines.next(), Some("1,3,0.25"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    #[should_panic(expected = "series f_est has 2 values for 3 grid points")]
    fn samples_csv_panics_on_ragged_series() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let _ = write_samples_csv(&path, &[0.0, 1.0, 2.0], &[("f_est", &[1.0, 2.0])], None);
    }

    #[test]
    fn sidecar_roundtrips_through_json() {
        let sidecar = SignalSidecar {
            omega: std::f64::consts::PI,
            t_half: 1.0,
            seed: Some(42),
            smoothness: Some(0.0),
            normalization: "max |f| = 1 on 201-point grid over [-T, T]".to_string(),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("signal.json");
        write_sidecar(&path, &sidecar).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let back: SignalSidecar = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sidecar);

        // Optional fields may be absent entirely.
        let bare: SignalSidecar = serde_json::from_str(
            r#"{"omega": 3.0, "t_half": 1.0, "normalization": "none"}"#,
        )
        .unwrap();
        assert_eq!(bare.seed, None);
        assert_eq!(bare.smoothness, None);
    }
}
