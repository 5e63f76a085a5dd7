use std::io::Write;
use std::process::{Command, Stdio};

use super::ComplexityEstimator;
use crate::error::{Error, Result};
use crate::util::pack_bits;

/// Delegates to a subprocess. The string is written to its standard input
/// as an 8-byte big-endian bit count followed by the packed bits (MSB
/// first); the process must print a decimal bit count. The stage is ignored.
#[derive(Debug, Clone)]
pub struct ExternalEstimator {
    program: String,
    args: Vec<String>,
}

impl ExternalEstimator {
    pub fn new(program: String, args: Vec<String>) -> Self {
        ExternalEstimator { program, args }
    }
}

impl ComplexityEstimator for ExternalEstimator {
    fn name(&self) -> String {
        format!("external:{}", self.program)
    }

    fn estimate(&self, bits: &[bool], _stage: u64) -> Result<u64> {
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Estimator(format!("cannot start {}: {e}", self.program)))?;
        let mut payload = (bits.len() as u64).to_be_bytes().to_vec();
        payload.extend(pack_bits(bits));
        {
            let mut stdin = child.stdin.take().expect("piped stdin");
            // a process that exits without reading everything is not an error by itself
            let _ = stdin.write_all(&payload);
        }
        let out = child
            .wait_with_output()
            .map_err(|e| Error::Estimator(format!("{}: {e}", self.program)))?;
        if !out.status.success() {
            return Err(Error::Estimator(format!("{} exited with {}", self.program, out.status)));
        }
        let text = String::from_utf8_lossy(&out.stdout);
        text.trim()
            .parse()
            .map_err(|_| Error::Estimator(format!("{} printed {:?}, expected a number", self.program, text.trim())))
    }
}

#[cfg(all(test, unix))]
mod tests {
    use super::*;

    #[test]
    fn byte_count_via_wc() {
        // wc -c counts the 8 header bytes plus the packed payload
        let e = ExternalEstimator::new("wc".into(), vec!["-c".into()]);
        assert_eq!(e.estimate(&[true; 20], 0).unwrap(), 8 + 3);
    }

    #[test]
    fn failures_are_reported() {
        let e = ExternalEstimator::new("false".into(), vec![]);
        assert!(matches!(e.estimate(&[true], 0), Err(Error::Estimator(_))));
        let e = ExternalEstimator::new("/nonexistent/estimator".into(), vec![]);
        assert!(matches!(e.estimate(&[true], 0), Err(Error::Estimator(_))));
    }
}
