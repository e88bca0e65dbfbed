//! Writing experiment outputs: traces, summary, resolved config.

use std::fs;
use std::path::Path;

use condgrad::error::Error;

use crate::experiments::ExperimentOutput;

/// Write one experiment's outputs under `dir`:
/// `<name>__<label>__seed<seed>.csv` per trace, `<name>__summary.txt`,
/// and `<name>__config.txt` (the resolved configuration).
///
/// `with_timing` keeps wall-clock nanoseconds in the trace files; the
/// default strips them so reruns with the same seed are byte-identical.
pub fn write_outputs(
    out: &ExperimentOutput,
    dir: &Path,
    seed: u64,
    with_timing: bool,
) -> Result<Vec<String>, Error> {
    fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cannot create {dir:?}: {e}")))?;
    let mut written = Vec::new();
    for (label, trace) in &out.traces {
        let file = format!("{}__{}__seed{}.csv", out.name, label, seed);
        fs::write(dir.join(&file), trace.to_csv(!with_timing))
            .map_err(|e| Error::Config(format!("write {file}: {e}")))?;
        written.push(file);
    }
    let mut summary = String::new();
    summary.push_str(&format!("experiment = {}\nseed = {}\n", out.name, seed));
    for (k, v) in &out.summary {
        summary.push_str(&format!("{k} = {v}\n"));
    }
    if with_timing {
        for (label, trace) in &out.traces {
            if let Some(last) = trace.last() {
                summary.push_str(&format!(
                    "{label}.wall_time_ms = {:.3}\n",
                    last.wall_time_ns as f64 / 1e6
                ));
            }
        }
    }
    let sfile = format!("{}__summary.txt", out.name);
    fs::write(dir.join(&sfile), summary)
        .map_err(|e| Error::Config(format!("write {sfile}: {e}")))?;
    written.push(sfile);
    let cfile = format!("{}__config.txt", out.name);
    fs::write(dir.join(&cfile), out.resolved.dump())
        .map_err(|e| Error::Config(format!("write {cfile}: {e}")))?;
    written.push(cfile);
    Ok(written)
}
