//! CSV caching of built bases.
//!
//! A bundle is two files sharing a params header so either can be sanity
//! checked on its own:
//!
//! * `<stem>_eigenvalues.csv`: the retained spectrum, one row per k.
//! * `<stem>_node_values.csv`: node abscissae, weights, and the sampled
//!   eigenfunctions, one row per quadrature node.
//!
//! Both start with the header line `omega,t_half,count,resolution` followed by
//! the four values. Floats are written in Rust's shortest round-trip decimal
//! form, so importing a bundle reproduces the exported basis bit for bit.
//! Lines starting with `#` are ignored on import (callers prepend provenance
//! comments).

use super::{BandParams, PswfBasis, PswfError};
use crate::numerics::gauss_legendre_rule;
use std::fs;
use std::path::{Path, PathBuf};

/// Write `basis` as a CSV bundle into `dir`, returning the two file paths
/// (eigenvalues, node values).
pub fn export_bundle(
    basis: &PswfBasis,
    dir: &Path,
    stem: &str,
) -> Result<(PathBuf, PathBuf), PswfError> {
    fs::create_dir_all(dir)?;
    let eig_path = dir.join(format!("{stem}_eigenvalues.csv"));
    let nodes_path = dir.join(format!("{stem}_node_values.csv"));

    let header = format!(
        "omega,t_half,count,resolution\n{},{},{},{}\n",
        basis.params.omega(),
        basis.params.t_half(),
        basis.count,
        basis.resolution()
    );

    let mut eig = header.clone();
    eig.push_str("k,lambda\n");
    for (k, lam) in basis.eigenvalues.iter().enumerate() {
        eig.push_str(&format!("{k},{lam}\n"));
    }
    fs::write(&eig_path, eig)?;

    let mut nodes = header;
    nodes.push_str("i,t,w");
    for k in 0..basis.count {
        nodes.push_str(&format!(",phi_{k}"));
    }
    nodes.push('\n');
    for i in 0..basis.resolution() {
        nodes.push_str(&format!(
            "{i},{},{}",
            basis.rule.nodes[i], basis.rule.weights[i]
        ));
        for k in 0..basis.count {
            nodes.push_str(&format!(",{}", basis.node_values[k][i]));
        }
        nodes.push('\n');
    }
    fs::write(&nodes_path, nodes)?;

    Ok((eig_path, nodes_path))
}

struct BundleHeader {
    omega: f64,
    t_half: f64,
    count: usize,
    resolution: usize,
}

fn bad(msg: impl Into<String>) -> PswfError {
    PswfError::BundleFormat(msg.into())
}

fn parse_f64(s: &str, what: &str) -> Result<f64, PswfError> {
    s.trim()
        .parse()
        .map_err(|_| bad(format!("cannot parse {what} from {s:?}")))
}

fn parse_usize(s: &str, what: &str) -> Result<usize, PswfError> {
    s.trim()
        .parse()
        .map_err(|_| bad(format!("cannot parse {what} from {s:?}")))
}

/// Non-comment lines of a bundle file.
fn data_lines(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#') && !l.trim().is_empty())
        .collect()
}

fn parse_header(lines: &[&str], file: &str) -> Result<BundleHeader, PswfError> {
    if lines.len() < 2 || lines[0].trim() != "omega,t_half,count,resolution" {
        return Err(bad(format!("{file}: missing params header")));
    }
    let fields: Vec<&str> = lines[1].split(',').collect();
    if fields.len() != 4 {
        return Err(bad(format!("{file}: params line needs 4 fields")));
    }
    Ok(BundleHeader {
        omega: parse_f64(fields[0], "omega")?,
        t_half: parse_f64(fields[1], "t_half")?,
        count: parse_usize(fields[2], "count")?,
        resolution: parse_usize(fields[3], "resolution")?,
    })
}

/// Read a bundle written by [`export_bundle`] back into a basis.
///
/// The quadrature rule is rebuilt from the recorded parameters and verified
/// against the stored abscissae, so a bundle cannot silently disagree with
/// the rule it claims to live on.
pub fn import_bundle(dir: &Path, stem: &str) -> Result<PswfBasis, PswfError> {
    let eig_text = fs::read_to_string(dir.join(format!("{stem}_eigenvalues.csv")))?;
    let nodes_text = fs::read_to_string(dir.join(format!("{stem}_node_values.csv")))?;
    let eig_lines = data_lines(&eig_text);
    let node_lines = data_lines(&nodes_text);

    let h = parse_header(&eig_lines, "eigenvalues")?;
    let h2 = parse_header(&node_lines, "node_values")?;
    if h.omega != h2.omega
        || h.t_half != h2.t_half
        || h.count != h2.count
        || h.resolution != h2.resolution
    {
        return Err(bad("bundle files disagree on parameters"));
    }

    let params = BandParams::new(h.omega, h.t_half)?;

    // Eigenvalues: skip the two header lines and the column header.
    if eig_lines.len() != 3 + h.count {
        return Err(bad(format!(
            "eigenvalues: expected {} rows, found {}",
            h.count,
            eig_lines.len().saturating_sub(3)
        )));
    }
    let mut eigenvalues = Vec::with_capacity(h.count);
    for (k, line) in eig_lines[3..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 || parse_usize(fields[0], "k")? != k {
            return Err(bad(format!("eigenvalues: malformed row {k}")));
        }
        eigenvalues.push(parse_f64(fields[1], "lambda")?);
    }

    if node_lines.len() != 3 + h.resolution {
        return Err(bad(format!(
            "node_values: expected {} rows, found {}",
            h.resolution,
            node_lines.len().saturating_sub(3)
        )));
    }
    let rule = gauss_legendre_rule(h.resolution, -h.t_half, h.t_half)?;
    let mut node_values = vec![Vec::with_capacity(h.resolution); h.count];
    for (i, line) in node_lines[3..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 + h.count {
            return Err(bad(format!("node_values: malformed row {i}")));
        }
        let t = parse_f64(fields[1], "t")?;
        if (t - rule.nodes[i]).abs() > 1e-12 {
            return Err(bad(format!(
                "node_values: abscissa {i} = {t} does not match the quadrature rule"
            )));
        }
        for k in 0..h.count {
            node_values[k].push(parse_f64(fields[3 + k], "phi")?);
        }
    }

    Ok(PswfBasis {
        params,
        count: h.count,
        eigenvalues,
        rule,
        node_values,
    })
}
