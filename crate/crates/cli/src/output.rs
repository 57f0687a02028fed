//! File emission: metadata headers, curve CSV, atomic writes.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use dynperc::estimators::{CurvePoint, Estimate};
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

pub const OUT_DIR_VAR: &str = "DYNPERC_OUT_DIR";

/// Run metadata recorded with every output.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: serde_json::Value,
    pub master_seed: Option<u64>,
    /// How per-replica seeds derive from the master seed.
    pub seed_split: &'static str,
}

impl Meta {
    pub fn new<C: Serialize>(command: &'static str, config: &C, master_seed: Option<u64>) -> CliResult<Self> {
        Ok(Meta {
            tool: "dynperc",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config: serde_json::to_value(config)?,
            master_seed,
            seed_split: "replica r, stream s: splitmix64(replica_seed(master, r) ^ s * 0xA24BAED4963EE407)",
        })
    }

    pub fn csv_header(&self) -> String {
        let mut h = format!("# {} {}\n# command: {}\n# config: {}\n", self.tool, self.version, self.command, self.config);
        if let Some(seed) = self.master_seed {
            h.push_str(&format!("# master_seed: {seed}\n# seed_split: {}\n", self.seed_split));
        }
        h
    }

    pub fn json_document<T: Serialize>(&self, result: &T) -> CliResult<Vec<u8>> {
        #[derive(Serialize)]
        struct Doc<'a, T> {
            meta: &'a Meta,
            result: &'a T,
        }
        let mut bytes = serde_json::to_vec_pretty(&Doc { meta: self, result })?;
        bytes.push(b'\n');
        Ok(bytes)
    }
}

/// Resolves `--out` against `$DYNPERC_OUT_DIR` when relative.
pub fn resolve_out(out: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if out.is_relative() => Path::new(&dir).join(out),
        _ => out.to_path_buf(),
    }
}

/// Writes to a sibling temporary file and renames it into place, so a failed
/// run never leaves a partial file at `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let name = path.file_name().ok_or_else(|| CliError::Config(format!("bad output path {}", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// Sends `bytes` to the resolved output path, or stdout.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(p) => write_atomic(&resolve_out(p), bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CurveRow {
    time: f64,
    value: f64,
    stderr: f64,
    replicas: usize,
    master_seed: u64,
    censored_fraction: f64,
}

/// Curve rows as CSV (no header comments).
pub fn write_curve(points: &[CurvePoint]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in points {
        let e = &p.estimate;
        w.serialize(CurveRow {
            time: p.time,
            value: e.value,
            stderr: e.stderr,
            replicas: e.replicas,
            master_seed: e.master_seed,
            censored_fraction: e.censored_fraction,
        })?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

/// Parses a curve CSV, skipping `#` lines.
pub fn read_curve<R: Read>(reader: R) -> CliResult<Vec<CurvePoint>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    r.deserialize::<CurveRow>()
        .map(|row| {
            let row = row?;
            Ok(CurvePoint {
                time: row.time,
                estimate: Estimate {
                    value: row.value,
                    stderr: row.stderr,
                    replicas: row.replicas,
                    master_seed: row.master_seed,
                    censored_fraction: row.censored_fraction,
                },
            })
        })
        .collect()
}
