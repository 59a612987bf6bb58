//! Command-line surface of `frale`: kernel tables, path simulation and the
//! verification suites.

pub mod checks;
pub mod commands;
pub mod svg;

use frale_core::Error;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_INCOMPLETE: u8 = 3;

/// Exit code for an error: numerical failures count as failed checks,
/// everything else as invalid input.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Accuracy { .. } => EXIT_FAIL,
                _ => EXIT_INVALID,
            };
        }
    }
    EXIT_INVALID
}

/// Installs the global worker pool, capped by `FRALE_THREADS` when set.
pub fn init_thread_pool(var: Option<&str>) -> anyhow::Result<()> {
    let Some(raw) = var else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidInput(format!("FRALE_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        let acc = anyhow::Error::new(Error::Accuracy {
            context: "x".into(),
            partial: 0.0,
            estimate: 1.0,
        });
        assert_eq!(exit_code(&acc), EXIT_FAIL);
        let bad = anyhow::Error::new(Error::Domain("h".into())).context("parsing");
        assert_eq!(exit_code(&bad), EXIT_INVALID);
        assert_eq!(exit_code(&anyhow::anyhow!("other")), EXIT_INVALID);
    }

    #[test]
    fn thread_variable_is_validated() {
        assert!(init_thread_pool(Some("zero")).is_err());
        assert!(init_thread_pool(Some("0")).is_err());
        assert!(init_thread_pool(None).is_ok());
    }
}
