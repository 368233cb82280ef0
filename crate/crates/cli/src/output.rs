//! CSV result files. Floats carry 17 significant digits, so reading them
//! back recovers the exact `f64`.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use dnls_core::experiments::{ConvergenceReport, LimitReport};
use dnls_core::{SpectralField, Trajectory};

pub const CONVERGENCE_HEADER: [&str; 4] = ["resolution", "abs_error", "rel_error", "order"];
pub const SNAPSHOT_HEADER: [&str; 6] = ["x", "re_u", "im_u", "abs_u", "t", "run_label"];
pub const LIMIT_HEADER: [&str; 2] = ["param_value", "sup_L2_distance"];

#[derive(Debug, thiserror::Error)]
#[error("{}: {source}", path.display())]
pub struct OutputError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer<W: Write>(inner: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(inner)
}

fn io_err(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

pub fn write_convergence<W: Write>(out: W, report: &ConvergenceReport) -> io::Result<()> {
    let mut w = writer(out);
    w.write_record(CONVERGENCE_HEADER).map_err(io_err)?;
    for row in &report.rows {
        let order = row.order.map(float).unwrap_or_default();
        w.write_record([float(row.resolution), float(row.abs_error), float(row.rel_error), order])
            .map_err(io_err)?;
    }
    w.flush()
}

/// One snapshot of `label` at time `t`, one row per grid node.
pub fn write_snapshot_rows<W: Write>(
    w: &mut csv::Writer<W>,
    field: &SpectralField,
    t: f64,
    label: &str,
) -> io::Result<()> {
    let grid = field.grid();
    for (j, u) in field.to_samples().iter().enumerate() {
        w.write_record([
            float(grid.node(j)),
            float(u.re),
            float(u.im),
            float(u.norm()),
            float(t),
            label.to_owned(),
        ])
        .map_err(io_err)?;
    }
    Ok(())
}

/// Snapshot CSV for labelled trajectories.
pub fn write_snapshots<W: Write>(out: W, runs: &[(String, &Trajectory)]) -> io::Result<()> {
    let mut w = writer(out);
    w.write_record(SNAPSHOT_HEADER).map_err(io_err)?;
    for (label, tr) in runs {
        for (t, u) in tr.times.iter().zip(&tr.snapshots) {
            write_snapshot_rows(&mut w, u, *t, label)?;
        }
    }
    w.flush()
}

/// Snapshot CSV for single labelled fields.
pub fn write_fields<W: Write>(out: W, fields: &[(&str, f64, &SpectralField)]) -> io::Result<()> {
    let mut w = writer(out);
    w.write_record(SNAPSHOT_HEADER).map_err(io_err)?;
    for (label, t, u) in fields {
        write_snapshot_rows(&mut w, u, *t, label)?;
    }
    w.flush()
}

pub fn write_limit<W: Write>(out: W, report: &LimitReport) -> io::Result<()> {
    let mut w = writer(out);
    w.write_record(LIMIT_HEADER).map_err(io_err)?;
    for (v, d) in report.values.iter().zip(&report.distances) {
        w.write_record([float(*v), float(*d)]).map_err(io_err)?;
    }
    w.flush()
}

/// Creates `dir/name`, fills it with `fill`, and returns the file name.
pub fn emit(
    dir: &Path,
    name: &str,
    fill: impl FnOnce(io::BufWriter<File>) -> io::Result<()>,
) -> Result<String, OutputError> {
    let path = dir.join(name);
    let wrap = |source| OutputError {
        path: path.clone(),
        source,
    };
    let file = File::create(&path).map_err(wrap)?;
    fill(io::BufWriter::new(file)).map_err(wrap)?;
    Ok(name.to_owned())
}

/// Header and rows of a CSV file; fields are returned verbatim.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), OutputError> {
    let wrap = |e: csv::Error| OutputError {
        path: path.to_owned(),
        source: io_err(e),
    };
    let mut r = csv::Reader::from_path(path).map_err(wrap)?;
    let header = r.headers().map_err(wrap)?.iter().map(str::to_owned).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(str::to_owned).collect()))
        .collect::<Result<_, _>>()
        .map_err(wrap)?;
    Ok((header, rows))
}
