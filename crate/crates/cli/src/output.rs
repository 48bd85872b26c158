//! CSV output. Floats are written in shortest round-trip form, so reading a
//! file back gives the stored values bit for bit.

use std::path::{Path, PathBuf};

use jetsplit::RunRecord;

use crate::convergence::ConvergenceTable;
use crate::error::{LabError, Result};

/// Extra per-sample columns available when an exact reference exists.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReferenceColumns {
    /// `H / H_exact − 1`.
    pub h_rel_err: Vec<f64>,
    /// `sigma_cum − λ_exact`.
    pub lambda_err: Vec<f64>,
}

/// Numeric table read back from a CSV file.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

fn block(name: &str, n: usize) -> Vec<String> {
    if n == 1 {
        vec![name.to_string()]
    } else {
        (1..=n).map(|i| format!("{name}{i}")).collect()
    }
}

pub fn trajectory_header(n: usize, with_reference: bool) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend(block("x", n));
    h.push("u".into());
    h.extend(block("p", n));
    h.extend(["H", "sigma_cum"].map(String::from));
    if with_reference {
        h.extend(["H_rel_err", "lambda_err"].map(String::from));
    }
    h
}

fn create_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            std::fs::create_dir_all(dir).map_err(|source| LabError::Io {
                path: dir.to_path_buf(),
                source,
            })
        }
        _ => Ok(()),
    }
}

/// Writes `header` and `rows` to `path`, creating parent directories.
pub fn write_table(
    path: &Path,
    header: &[String],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<()> {
    let ctx = |source| LabError::Csv {
        path: path.to_path_buf(),
        source,
    };
    create_parent(path)?;
    let mut w = csv::Writer::from_path(path).map_err(ctx)?;
    w.write_record(header).map_err(ctx)?;
    for row in rows {
        w.write_record(row.iter().map(f64::to_string))
            .map_err(ctx)?;
    }
    w.flush().map_err(|source| LabError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_trajectory_csv(
    path: &Path,
    rec: &RunRecord,
    reference: Option<&ReferenceColumns>,
) -> Result<()> {
    let n = rec.states.first().map_or(1, |z| z.dim());
    let rows = (0..rec.len()).map(|k| {
        let z = &rec.states[k];
        let mut row = vec![rec.times[k]];
        row.extend(&z.x);
        row.push(z.u);
        row.extend(&z.p);
        row.extend([rec.h_values[k], rec.sigma_cum[k]]);
        if let Some(r) = reference {
            row.extend([r.h_rel_err[k], r.lambda_err[k]]);
        }
        row
    });
    write_table(path, &trajectory_header(n, reference.is_some()), rows)
}

pub const CONVERGENCE_HEADER: [&str; 4] = ["h", "steps", "endpoint_error", "sup_error"];

pub fn write_convergence_csv(path: &Path, table: &ConvergenceTable) -> Result<()> {
    let header: Vec<String> = CONVERGENCE_HEADER.map(String::from).to_vec();
    let rows = table
        .rows
        .iter()
        .map(|r| vec![r.h, r.steps as f64, r.endpoint_error, r.sup_error]);
    write_table(path, &header, rows)
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let ctx = |source| LabError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(ctx)?;
    let header = r.headers().map_err(ctx)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(ctx)?;
        let row = rec
            .iter()
            .map(|s| {
                s.parse::<f64>().map_err(|e| {
                    LabError::config(format!("{}: bad number {s:?}: {e}", path.display()))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(CsvTable { header, rows })
}

/// File-system-friendly version of a label.
pub fn slug(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for c in label.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

pub fn join(dir: &Path, name: &str, ext: &str) -> PathBuf {
    dir.join(format!("{}.{ext}", slug(name)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs_are_plain() {
        assert_eq!(slug("Strang (S1), γ=0.3"), "strang_s1_0_3");
        assert_eq!(
            trajectory_header(2, false).join(","),
            "t,x1,x2,u,p1,p2,H,sigma_cum"
        );
    }

    #[test]
    fn io_errors_name_the_path() {
        let err = read_csv(Path::new("/nonexistent/dir/f.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/f.csv"), "{err}");
    }
}
