//! Checkpoint files for long word scans.
//!
//! ```text
//! umetric-wordscan-checkpoint 1
//! fingerprint <hex>
//! points <p>
//! next_row <r>
//! <ultrametric> <nonzero>      (p lines)
//! ```
//!
//! The fingerprint hashes the input digests and every setting that changes
//! the counts; a checkpoint is only resumed when it matches.

use std::fs;
use std::path::Path;

use umetric::wordscan::ScanState;

use crate::error::{CliError, CliResult};

const MAGIC: &str = "umetric-wordscan-checkpoint 1";

pub fn format(fingerprint: &str, state: &ScanState) -> String {
    let mut out = format!(
        "{MAGIC}\nfingerprint {fingerprint}\npoints {}\nnext_row {}\n",
        state.ultrametric.len(),
        state.next_row
    );
    for (u, n) in state.ultrametric.iter().zip(&state.nonzero) {
        out.push_str(&format!("{u} {n}\n"));
    }
    out
}

fn bad(path: &Path, what: &str) -> CliError {
    CliError::Data(format!("checkpoint {}: {what}", path.display()))
}

pub fn parse(path: &Path, text: &str, fingerprint: &str, points: usize) -> CliResult<ScanState> {
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(bad(path, "not a word-scan checkpoint"));
    }
    let mut field = |name: &str| -> CliResult<String> {
        lines
            .next()
            .and_then(|l| l.strip_prefix(name))
            .and_then(|v| v.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| bad(path, &format!("missing {name}")))
    };
    if field("fingerprint")? != fingerprint {
        return Err(bad(path, "written for different inputs or settings"));
    }
    let p: usize = field("points")?.parse().map_err(|_| bad(path, "bad point count"))?;
    let next_row: usize = field("next_row")?.parse().map_err(|_| bad(path, "bad row"))?;
    if p != points || next_row > p {
        return Err(bad(path, "point count does not match the input"));
    }
    let mut state = ScanState::new(p);
    state.next_row = next_row;
    for w in 0..p {
        let line = lines.next().ok_or_else(|| bad(path, "truncated"))?;
        let mut t = line.split_whitespace().map(str::parse::<u64>);
        match (t.next(), t.next()) {
            (Some(Ok(u)), Some(Ok(n))) => {
                state.ultrametric[w] = u;
                state.nonzero[w] = n;
            }
            _ => return Err(bad(path, &format!("bad count line {}", w + 5))),
        }
    }
    Ok(state)
}

/// Load a matching checkpoint, or `None` when the file does not exist.
pub fn load(path: &Path, fingerprint: &str, points: usize) -> CliResult<Option<ScanState>> {
    match fs::read_to_string(path) {
        Ok(text) => parse(path, &text, fingerprint, points).map(Some),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(bad(path, &e.to_string())),
    }
}

/// Write through a temporary file so an interrupted write leaves the
/// previous checkpoint intact.
pub fn save(path: &Path, fingerprint: &str, state: &ScanState) -> CliResult<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, format(fingerprint, state)).map_err(|e| bad(path, &e.to_string()))?;
    fs::rename(&tmp, path).map_err(|e| bad(path, &e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut s = ScanState::new(3);
        s.next_row = 2;
        s.ultrametric = vec![1, 0, 1];
        s.nonzero = vec![1, 1, 1];
        let text = format("abc", &s);
        assert_eq!(parse(Path::new("c"), &text, "abc", 3).unwrap(), s);
    }

    #[test]
    fn mismatched_fingerprint_is_rejected() {
        let text = format("abc", &ScanState::new(3));
        assert!(parse(Path::new("c"), &text, "abd", 3).is_err());
        assert!(parse(Path::new("c"), &text, "abc", 4).is_err());
    }

    #[test]
    fn save_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.ckpt");
        assert!(load(&path, "f", 3).unwrap().is_none());
        let mut s = ScanState::new(3);
        s.next_row = 1;
        save(&path, "f", &s).unwrap();
        assert_eq!(load(&path, "f", 3).unwrap(), Some(s));
    }
}
