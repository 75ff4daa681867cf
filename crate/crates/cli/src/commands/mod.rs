//! Subcommand implementations. Each writes its outputs into the chosen
//! directory, prints a short deterministic summary to stdout, and reports
//! failures through [`crate::CliError`] after the outputs are on disk, so a
//! failed run still leaves its evidence behind.

pub mod basis;
pub mod extrapolate;
pub mod multiband;
pub mod sweep;

use std::fs;
use std::io;
use std::path::Path;

/// Prepend `# ...` comment lines to an existing text file (used for files
/// produced by writers that do not take a comment themselves).
pub fn prepend_comment(path: &Path, comment: &str) -> io::Result<()> {
    let body = fs::read_to_string(path)?;
    let mut out = String::new();
    for line in comment.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&body);
    fs::write(path, out)
}
