//! Trajectory CSV serialization, atomic file writes and value clamping at
//! the reporting boundary.

use std::path::Path;

use anyhow::{bail, Context, Result};
use qcorrsim_core::Trajectory;

pub const CSV_HEADER: &str = "t,I,C,Q,cx,cy,cz";

/// Negative values inside this margin are floating-point residue of the
/// maximization and print as zero; computation keeps them raw.
pub fn clamp_tiny_negative(v: f64) -> f64 {
    if v < 0.0 && v > -1e-9 {
        0.0
    } else {
        v
    }
}

fn fmt(v: f64) -> String {
    // 12 significant digits
    format!("{v:.11e}")
}

/// Renders a trajectory as CSV with 12-significant-digit values.
pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * (traj.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for rec in traj.records() {
        let diag = rec.bloch.corr_diagonal();
        let row = [
            rec.t,
            clamp_tiny_negative(rec.values.mutual_info),
            clamp_tiny_negative(rec.values.classical),
            clamp_tiny_negative(rec.values.quantum),
            diag[0],
            diag[1],
            diag[2],
        ];
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            out.push_str(&fmt(v));
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Parsed trajectory columns.
#[derive(Debug, Clone, Default)]
pub struct TrajectoryTable {
    pub t: Vec<f64>,
    pub mutual_info: Vec<f64>,
    pub classical: Vec<f64>,
    pub quantum: Vec<f64>,
    pub c_x: Vec<f64>,
    pub c_y: Vec<f64>,
    pub c_z: Vec<f64>,
}

impl TrajectoryTable {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn curve(&self, name: &str) -> Option<&[f64]> {
        match name {
            "classical" => Some(&self.classical),
            "quantum" => Some(&self.quantum),
            "mutual-info" => Some(&self.mutual_info),
            _ => None,
        }
    }
}

/// Parses the CSV produced by [`trajectory_to_csv`].
pub fn parse_trajectory_csv(text: &str) -> Result<TrajectoryTable> {
    let mut lines = text.lines();
    let header = lines.next().context("empty trajectory file")?;
    if header.trim() != CSV_HEADER {
        bail!("unexpected header '{header}', expected '{CSV_HEADER}'");
    }
    let mut table = TrajectoryTable::default();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            bail!("row {} has {} fields, expected 7", idx + 2, fields.len());
        }
        let mut vals = [0.0f64; 7];
        for (slot, field) in vals.iter_mut().zip(&fields) {
            *slot = field
                .trim()
                .parse()
                .with_context(|| format!("row {}: bad number '{field}'", idx + 2))?;
        }
        table.t.push(vals[0]);
        table.mutual_info.push(vals[1]);
        table.classical.push(vals[2]);
        table.quantum.push(vals[3]);
        table.c_x.push(vals[4]);
        table.c_y.push(vals[5]);
        table.c_z.push(vals[6]);
    }
    Ok(table)
}

/// Re-renders a parsed table with the same formatting.
pub fn table_to_csv(table: &TrajectoryTable) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for i in 0..table.len() {
        let row = [
            table.t[i],
            table.mutual_info[i],
            table.classical[i],
            table.quantum[i],
            table.c_x[i],
            table.c_y[i],
            table.c_z[i],
        ];
        let cells: Vec<String> = row.iter().map(|v| fmt(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Writes through a temp file in the same directory, then renames into
/// place.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    std::fs::write(&tmp, contents)
        .with_context(|| format!("cannot write {}", tmp.display()))?;
    std::fs::rename(&tmp, path)
        .with_context(|| format!("cannot move {} into place", path.display()))?;
    Ok(())
}
