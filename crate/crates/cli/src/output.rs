//! Deterministic CSV emission: fixed 9-significant-digit decimal formatting
//! and atomic file writes (temp file + rename, never a partial output).

use std::io::Write;
use std::path::Path;

use crate::CliError;

/// Formats with 9 significant digits, plain decimal notation, `.` separator.
pub fn fmt9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (8 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Writes the full CSV text to `path` atomically, or to stdout when no path
/// is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
                .map_err(|e| CliError::Config(format!("cannot create temp file: {e}")))?;
            tmp.write_all(text.as_bytes())
                .map_err(|e| CliError::Config(format!("write failed: {e}")))?;
            tmp.persist(path)
                .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
            Ok(())
        }
    }
}
