//! Fixed-schema CSV output.
//!
//! Column order is part of the interface: downstream plotting reads these
//! files positionally. Floats are written with six decimals, flags as `0`/`1`,
//! absent optionals as an empty field.

use std::fmt::Display;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::engine::{GenerationRecord, RunTrace};
use crate::error::{Error, Result};
use crate::harness::{CellSummary, TrialResult};

pub const TRACE_HEADER: &str = "generation,host_min_ones,host_mean_ones,host_max_ones,\
par_min_ones,par_mean_ones,par_max_ones,sigma_host,sigma_par,delta,\
sf_triggered,kappa,upsilon_host,upsilon_par";

pub const TRIALS_HEADER: &str = "strategy,host_bias,parasite_bias,trial,seed,\
engaged_full_run,reached_optimum,best_host_ones,first_disengagement";

pub const CELLS_HEADER: &str =
    "strategy,host_bias,parasite_bias,trials,engaged_count,optimum_count,mean_best_ones";

fn float(value: f64) -> String {
    format!("{value:.6}")
}

fn flag(value: bool) -> &'static str {
    if value { "1" } else { "0" }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path)
        .map_err(|source| Error::io(format!("create {}", path.display()), source))?;
    Ok(BufWriter::new(file))
}

fn finish(mut out: BufWriter<File>, path: &Path) -> Result<()> {
    out.flush()
        .map_err(|source| Error::io(format!("write {}", path.display()), source))
}

fn row(out: &mut BufWriter<File>, path: &Path, line: &str) -> Result<()> {
    writeln!(out, "{line}").map_err(|source| Error::io(format!("write {}", path.display()), source))
}

/// Write a run trace, one row per generation.
pub fn write_trace(path: impl AsRef<Path>, trace: &[GenerationRecord]) -> Result<()> {
    let path = path.as_ref();
    let mut out = create(path)?;
    row(&mut out, path, TRACE_HEADER)?;
    for r in trace {
        let line = format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.generation,
            r.host_min_ones,
            float(r.host_mean_ones),
            r.host_max_ones,
            r.parasite_min_ones,
            float(r.parasite_mean_ones),
            r.parasite_max_ones,
            float(r.sigma_host),
            float(r.sigma_parasite),
            float(r.delta),
            flag(r.sf_triggered),
            r.kappa,
            float(r.upsilon_host),
            float(r.upsilon_parasite),
        );
        row(&mut out, path, &line)?;
    }
    finish(out, path)
}

/// Write per-trial sweep rows in the order the sweep produced them.
pub fn write_trials(path: impl AsRef<Path>, trials: &[TrialResult]) -> Result<()> {
    let path = path.as_ref();
    let mut out = create(path)?;
    row(&mut out, path, TRIALS_HEADER)?;
    for t in trials {
        let first = t
            .first_disengagement
            .map(|g| g.to_string())
            .unwrap_or_default();
        let line = format!(
            "{},{},{},{},{},{},{},{},{}",
            t.strategy,
            float(t.host_bias),
            float(t.parasite_bias),
            t.trial,
            t.seed,
            flag(t.engaged_full_run),
            flag(t.reached_optimum),
            t.best_host_ones,
            first,
        );
        row(&mut out, path, &line)?;
    }
    finish(out, path)
}

/// Write per-cell summaries in the order the sweep produced them.
pub fn write_cells(path: impl AsRef<Path>, cells: &[CellSummary]) -> Result<()> {
    let path = path.as_ref();
    let mut out = create(path)?;
    row(&mut out, path, CELLS_HEADER)?;
    for c in cells {
        let line = format!(
            "{},{},{},{},{},{},{}",
            c.strategy,
            float(c.host_bias),
            float(c.parasite_bias),
            c.trials,
            c.engaged_count,
            c.optimum_count,
            float(c.mean_best_ones),
        );
        row(&mut out, path, &line)?;
    }
    finish(out, path)
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        file: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn field<T: FromStr>(path: &Path, line: usize, name: &str, raw: &str) -> Result<T>
where
    T::Err: Display,
{
    raw.parse()
        .map_err(|e| parse_error(path, line, format!("{name}: {e} (got {raw:?})")))
}

fn flag_field(path: &Path, line: usize, name: &str, raw: &str) -> Result<bool> {
    match raw {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(parse_error(path, line, format!("{name}: expected 0 or 1, got {raw:?}"))),
    }
}

/// Read a trace file written by `write_trace`. Values come back at the six
/// decimals the file stores.
pub fn read_trace(path: impl AsRef<Path>) -> Result<RunTrace> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|source| Error::io(format!("read {}", path.display()), source))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == TRACE_HEADER => {}
        Some(header) => {
            return Err(parse_error(path, 1, format!("unexpected header {header:?}")));
        }
        None => return Err(parse_error(path, 1, "missing header")),
    }
    let mut trace = Vec::new();
    for (index, line) in lines.enumerate() {
        let line_no = index + 2;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 14 {
            return Err(parse_error(
                path,
                line_no,
                format!("expected 14 fields, got {}", fields.len()),
            ));
        }
        trace.push(GenerationRecord {
            generation: field(path, line_no, "generation", fields[0])?,
            host_min_ones: field(path, line_no, "host_min_ones", fields[1])?,
            host_mean_ones: field(path, line_no, "host_mean_ones", fields[2])?,
            host_max_ones: field(path, line_no, "host_max_ones", fields[3])?,
            parasite_min_ones: field(path, line_no, "par_min_ones", fields[4])?,
            parasite_mean_ones: field(path, line_no, "par_mean_ones", fields[5])?,
            parasite_max_ones: field(path, line_no, "par_max_ones", fields[6])?,
            sigma_host: field(path, line_no, "sigma_host", fields[7])?,
            sigma_parasite: field(path, line_no, "sigma_par", fields[8])?,
            delta: field(path, line_no, "delta", fields[9])?,
            sf_triggered: flag_field(path, line_no, "sf_triggered", fields[10])?,
            kappa: field(path, line_no, "kappa", fields[11])?,
            upsilon_host: field(path, line_no, "upsilon_host", fields[12])?,
            upsilon_parasite: field(path, line_no, "upsilon_par", fields[13])?,
        });
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;
    use tempfile::tempdir;

    fn sample_record() -> GenerationRecord {
        GenerationRecord {
            generation: 7,
            host_min_ones: 3,
            host_mean_ones: 12.52,
            host_max_ones: 31,
            parasite_min_ones: 40,
            parasite_mean_ones: 55.0,
            parasite_max_ones: 70,
            sigma_host: 0.26,
            sigma_parasite: 0.74,
            delta: 0.48,
            sf_triggered: true,
            kappa: 5,
            upsilon_host: 1.0,
            upsilon_parasite: 1.0,
        }
    }

    #[test]
    fn trace_bytes_are_fixed() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        write_trace(&path, &[sample_record()]).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let expected = "generation,host_min_ones,host_mean_ones,host_max_ones,\
par_min_ones,par_mean_ones,par_max_ones,sigma_host,sigma_par,delta,\
sf_triggered,kappa,upsilon_host,upsilon_par\n\
7,3,12.520000,31,40,55.000000,70,0.260000,0.740000,0.480000,1,5,1.000000,1.000000\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn trace_round_trips_at_file_precision() {
        let dir = tempdir().unwrap();
        let first = dir.path().join("a.csv");
        let second = dir.path().join("b.csv");
        let mut odd = sample_record();
        // Values that do not land on the six-decimal lattice.
        odd.sigma_host = 0.123456789;
        odd.sigma_parasite = 2.0 / 3.0;
        odd.delta = (odd.sigma_host - odd.sigma_parasite).abs();
        odd.sf_triggered = false;
        odd.kappa = 0;
        write_trace(&first, &[sample_record(), odd]).unwrap();
        let parsed = read_trace(&first).unwrap();
        assert_eq!(parsed.len(), 2);
        for (original, read) in [sample_record(), odd].iter().zip(&parsed) {
            assert_eq!(read.generation, original.generation);
            assert_eq!(read.sf_triggered, original.sf_triggered);
            assert_eq!(read.kappa, original.kappa);
            assert!((read.sigma_host - original.sigma_host).abs() <= 5e-7);
            assert!((read.delta - original.delta).abs() <= 5e-7);
        }
        // Re-writing the parsed values reproduces the file exactly: the
        // six-decimal lattice is a fixed point.
        write_trace(&second, &parsed).unwrap();
        assert_eq!(
            fs::read(&first).unwrap(),
            fs::read(&second).unwrap()
        );
    }

    #[test]
    fn read_rejects_malformed_input() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.csv");

        fs::write(&path, "nope\n").unwrap();
        assert!(matches!(read_trace(&path), Err(Error::Parse { line: 1, .. })));

        fs::write(&path, format!("{TRACE_HEADER}\n1,2,3\n")).unwrap();
        assert!(matches!(read_trace(&path), Err(Error::Parse { line: 2, .. })));

        let good = "7,3,12.520000,31,40,55.000000,70,0.260000,0.740000,0.480000,1,5,1.000000,1.000000";
        let bad_flag = good.replace(",1,5,", ",2,5,");
        fs::write(&path, format!("{TRACE_HEADER}\n{bad_flag}\n")).unwrap();
        assert!(matches!(read_trace(&path), Err(Error::Parse { line: 2, .. })));

        let bad_number = good.replace("0.480000", "x");
        fs::write(&path, format!("{TRACE_HEADER}\n{bad_number}\n")).unwrap();
        assert!(matches!(read_trace(&path), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn read_reports_missing_file_as_io() {
        let dir = tempdir().unwrap();
        let err = read_trace(dir.path().join("absent.csv")).unwrap_err();
        assert!(err.is_io());
    }

    #[test]
    fn trials_bytes_are_fixed() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("trials.csv");
        let rows = [
            TrialResult {
                strategy: "sf",
                host_bias: 0.1,
                parasite_bias: 0.3,
                trial: 0,
                seed: 42,
                engaged_full_run: true,
                reached_optimum: false,
                best_host_ones: 88,
                first_disengagement: None,
            },
            TrialResult {
                strategy: "canonical",
                host_bias: 0.5,
                parasite_bias: 1.0,
                trial: 3,
                seed: 77,
                engaged_full_run: false,
                reached_optimum: true,
                best_host_ones: 100,
                first_disengagement: Some(412),
            },
        ];
        write_trials(&path, &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let expected = "strategy,host_bias,parasite_bias,trial,seed,\
engaged_full_run,reached_optimum,best_host_ones,first_disengagement\n\
sf,0.100000,0.300000,0,42,1,0,88,\n\
canonical,0.500000,1.000000,3,77,0,1,100,412\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn cells_bytes_are_fixed() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("cells.csv");
        let rows = [CellSummary {
            strategy: "ava",
            host_bias: 0.2,
            parasite_bias: 0.9,
            trials: 20,
            engaged_count: 18,
            optimum_count: 17,
            mean_best_ones: 97.25,
        }];
        write_cells(&path, &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let expected = "strategy,host_bias,parasite_bias,trials,engaged_count,\
optimum_count,mean_best_ones\n\
ava,0.200000,0.900000,20,18,17,97.250000\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn write_into_missing_directory_is_io() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("absent").join("trace.csv");
        let err = write_trace(&path, &[]).unwrap_err();
        assert!(err.is_io());
    }
}
