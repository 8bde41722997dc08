//! Run artifacts: field snapshots, diagnostics CSV, manifest, summary.
//!
//! Snapshots are a flat binary block of little-endian 64-bit floats in
//! row-major order with ξ fastest, described by a JSON sidecar carrying the
//! grid metadata. The diagnostics CSV has a fixed column set (documented in
//! `docs/diagnostics_schema.md`); values are written with enough digits to
//! round-trip bit-exactly. All decoders validate structure and finiteness
//! and return typed errors instead of panicking on malformed input.

use crate::config::ExperimentConfig;
use crate::diagnostics::{Constants, DiagRecord};
use crate::error::{Error, Result};
use crate::flux::AdmissibilityReport;
use crate::grid::{Field, Grid};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const SNAPSHOT_SCHEMA: &str = "shocklab-snapshot-v1";
pub const MANIFEST_SCHEMA: &str = "shocklab-manifest-v1";

/// Grid metadata as persisted; reconstructed through `Grid::new` so invalid
/// sidecars are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub l: f64,
    pub n_xi: usize,
    pub n_dims: usize,
    pub n_t: usize,
}

impl GridMeta {
    pub fn of(grid: &Grid) -> GridMeta {
        GridMeta {
            l: grid.l(),
            n_xi: grid.n_xi(),
            n_dims: grid.n_dims(),
            n_t: grid.n_t(),
        }
    }

    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.l, self.n_xi, self.n_dims, self.n_t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSidecar {
    pub schema: String,
    pub t: f64,
    pub shift: f64,
    pub grid: GridMeta,
    pub values: usize,
    pub byte_order: String,
    pub layout: String,
}

/// Writes `<dir>/<tag>.bin` and `<dir>/<tag>.json`; returns the binary path.
pub fn write_snapshot(dir: &Path, tag: &str, field: &Field, t: f64, shift: f64) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let sidecar = SnapshotSidecar {
        schema: SNAPSHOT_SCHEMA.into(),
        t,
        shift,
        grid: GridMeta::of(field.grid()),
        values: field.values().len(),
        byte_order: "little_endian".into(),
        layout: "row_major_xi_fastest".into(),
    };
    let bin_path = dir.join(format!("{tag}.bin"));
    let mut bytes = Vec::with_capacity(field.values().len() * 8);
    for v in field.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(&bin_path, bytes)?;
    fs::write(
        dir.join(format!("{tag}.json")),
        serde_json::to_vec_pretty(&sidecar)?,
    )?;
    Ok(bin_path)
}

/// Decodes a snapshot from raw sidecar and payload bytes.
pub fn read_snapshot_parts(
    sidecar_json: &[u8],
    payload: &[u8],
) -> Result<(Field, SnapshotSidecar)> {
    let sidecar: SnapshotSidecar =
        serde_json::from_slice(sidecar_json).map_err(|e| Error::Format(format!("sidecar: {e}")))?;
    if sidecar.schema != SNAPSHOT_SCHEMA {
        return Err(Error::Format(format!(
            "unknown snapshot schema {:?}",
            sidecar.schema
        )));
    }
    if sidecar.byte_order != "little_endian" || sidecar.layout != "row_major_xi_fastest" {
        return Err(Error::Format("unsupported snapshot encoding".into()));
    }
    let grid = sidecar.grid.build()?;
    if sidecar.values != grid.node_count() {
        return Err(Error::Format(format!(
            "sidecar declares {} values for a {}-node grid",
            sidecar.values,
            grid.node_count()
        )));
    }
    if payload.len() != sidecar.values * 8 {
        return Err(Error::Format(format!(
            "payload has {} bytes, expected {}",
            payload.len(),
            sidecar.values * 8
        )));
    }
    let mut values = Vec::with_capacity(sidecar.values);
    for chunk in payload.chunks_exact(8) {
        values.push(f64::from_le_bytes(
            chunk.try_into().expect("chunks_exact(8)"),
        ));
    }
    let field = Field::from_values(&grid, values)?;
    Ok((field, sidecar))
}

/// Reads `<path>.bin` with its adjacent `.json` sidecar.
pub fn read_snapshot(bin_path: &Path) -> Result<(Field, SnapshotSidecar)> {
    let sidecar_path = bin_path.with_extension("json");
    let sidecar = fs::read(&sidecar_path)?;
    let payload = fs::read(bin_path)?;
    read_snapshot_parts(&sidecar, &payload)
}

/// Fixed diagnostics CSV header.
pub const DIAG_COLUMNS: [&str; 13] = [
    "t",
    "x_shift",
    "xdot",
    "l2_dist",
    "l2_dist_unshifted",
    "l1_dist",
    "l1_dist_unshifted",
    "grad_sq",
    "dissipation_residual",
    "linf",
    "mass",
    "tail_mass",
    "du_shifted_l2",
];

fn record_fields(r: &DiagRecord) -> [f64; 13] {
    [
        r.t,
        r.x_shift,
        r.xdot,
        r.l2_dist,
        r.l2_dist_unshifted,
        r.l1_dist,
        r.l1_dist_unshifted,
        r.grad_sq,
        r.dissipation_residual,
        r.linf,
        r.mass,
        r.tail_mass,
        r.du_shifted_l2,
    ]
}

pub fn diagnostics_csv_string(series: &[DiagRecord]) -> String {
    let mut out = String::with_capacity(series.len() * 200 + 200);
    out.push_str(&DIAG_COLUMNS.join(","));
    out.push('\n');
    for r in series {
        let fields = record_fields(r);
        for (i, v) in fields.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            // 17 significant digits round-trip f64 exactly.
            out.push_str(&format!("{v:.17e}"));
        }
        out.push('\n');
    }
    out
}

pub fn write_diagnostics_csv(path: &Path, series: &[DiagRecord]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(diagnostics_csv_string(series).as_bytes())?;
    Ok(())
}

pub fn parse_diagnostics_csv(text: &str) -> Result<Vec<DiagRecord>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty diagnostics CSV".into()))?;
    if header.trim_end() != DIAG_COLUMNS.join(",") {
        return Err(Error::Format(format!("unexpected CSV header {header:?}")));
    }
    let mut series = Vec::new();
    let mut prev_t = f64::NEG_INFINITY;
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut vals = [0.0f64; 13];
        let mut count = 0;
        for (slot, cell) in vals.iter_mut().zip(line.split(',')) {
            *slot = cell
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 2)))?;
            count += 1;
        }
        if count != 13 || line.split(',').count() != 13 {
            return Err(Error::Format(format!(
                "line {}: expected 13 columns, got {}",
                lineno + 2,
                line.split(',').count()
            )));
        }
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Format(format!(
                "line {}: non-finite value",
                lineno + 2
            )));
        }
        if vals[0] <= prev_t {
            return Err(Error::Format(format!(
                "line {}: time not increasing",
                lineno + 2
            )));
        }
        prev_t = vals[0];
        series.push(DiagRecord {
            t: vals[0],
            x_shift: vals[1],
            xdot: vals[2],
            l2_dist: vals[3],
            l2_dist_unshifted: vals[4],
            l1_dist: vals[5],
            l1_dist_unshifted: vals[6],
            grad_sq: vals[7],
            dissipation_residual: vals[8],
            linf: vals[9],
            mass: vals[10],
            tail_mass: vals[11],
            du_shifted_l2: vals[12],
        });
    }
    Ok(series)
}

/// Everything needed to reproduce and audit a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    /// running | completed | aborted.
    pub status: String,
    #[serde(default)]
    pub abort_detail: Option<String>,
    pub config: ExperimentConfig,
    pub grid: GridMeta,
    pub h_xi: f64,
    pub h_t: f64,
    pub dt: f64,
    pub admissibility: AdmissibilityReport,
    pub constants: Constants,
    /// Grid quadrature of ‖ũ′‖_{L²}.
    pub du_l2_grid: f64,
    pub gn_constant_empirical: f64,
    /// The interpolation constant is a corpus estimate, never a proof.
    pub gn_constant_is_empirical: bool,
    pub tol_residual: f64,
    pub tail_tol: f64,
    #[serde(default)]
    pub seed_used: Option<u64>,
    pub threads: usize,
    #[serde(default)]
    pub diagnostics_csv_sha256: Option<String>,
}

pub fn parse_manifest(bytes: &[u8]) -> Result<RunManifest> {
    let manifest: RunManifest =
        serde_json::from_slice(bytes).map_err(|e| Error::Format(format!("manifest: {e}")))?;
    if manifest.schema != MANIFEST_SCHEMA {
        return Err(Error::Format(format!(
            "unknown manifest schema {:?}",
            manifest.schema
        )));
    }
    Ok(manifest)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, serde_json::to_vec_pretty(value)?)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = fs::read(path)?;
    serde_json::from_slice(&bytes).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// Plot data: t vs l2_dist plus the log-log pair, one row per sample.
pub fn write_plot_csv(path: &Path, series: &[DiagRecord]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut out = String::from("t,l2_dist,log10_t,log10_l2_dist\n");
    for r in series {
        let (lt, ll) = if r.t > 0.0 && r.l2_dist > 0.0 {
            (r.t.log10(), r.l2_dist.log10())
        } else {
            (f64::NAN, f64::NAN)
        };
        out.push_str(&format!(
            "{:.17e},{:.17e},{lt:.12},{ll:.12}\n",
            r.t, r.l2_dist
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// CSV export of an n = 2 field: one (ξ, x₂, u) row per node.
pub fn field_csv_n2(field: &Field) -> Result<String> {
    let g = field.grid();
    if g.n_dims() != 2 {
        return Err(Error::InvalidParameter(format!(
            "n=2 slice export needs a 2-d grid, got n_dims = {}",
            g.n_dims()
        )));
    }
    let mut out = String::from("xi,x2,u\n");
    for row in 0..g.n_rows() {
        let x2 = g.torus_coords(row)[0];
        for i in 0..g.n_xi() {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e}\n",
                g.xi(i),
                x2,
                field.at(row, i)
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn test_grid() -> Grid {
        Grid::new(10.0, 33, 2, 8).unwrap()
    }

    fn sample_record(t: f64) -> DiagRecord {
        DiagRecord {
            t,
            x_shift: 0.1 * t,
            xdot: 1.0 / (1.0 + t),
            l2_dist: (1.0 + t).powf(-0.25),
            l2_dist_unshifted: (1.0 + t).powf(-0.2),
            l1_dist: 1.0,
            l1_dist_unshifted: 1.1,
            grad_sq: 0.01 * PI,
            dissipation_residual: -1e-3,
            linf: 2.0,
            mass: 1.0,
            tail_mass: 1e-9,
            du_shifted_l2: 0.2887,
        }
    }

    #[test]
    fn snapshot_round_trips_bit_exactly() {
        let g = test_grid();
        let f = Field::from_fn(&g, |xi, x| (xi * 0.37).sin() + x[0]);
        let dir = tempfile::tempdir().unwrap();
        let bin = write_snapshot(dir.path(), "snap_000_t0", &f, 0.5, 0.25).unwrap();
        let (back, sidecar) = read_snapshot(&bin).unwrap();
        assert_eq!(f.values(), back.values());
        assert_eq!(sidecar.t, 0.5);
        assert_eq!(sidecar.shift, 0.25);
        assert_eq!(sidecar.grid, GridMeta::of(&g));
    }

    #[test]
    fn snapshot_parts_reject_malformed_input() {
        let g = test_grid();
        let f = Field::from_fn(&g, |_, _| 1.0);
        let dir = tempfile::tempdir().unwrap();
        let bin = write_snapshot(dir.path(), "x", &f, 0.0, 0.0).unwrap();
        let sidecar = std::fs::read(bin.with_extension("json")).unwrap();
        let payload = std::fs::read(&bin).unwrap();

        assert!(read_snapshot_parts(b"not json", &payload).is_err());
        assert!(read_snapshot_parts(&sidecar, &payload[..payload.len() - 1]).is_err());
        let mut bad = payload.clone();
        for b in bad.iter_mut().take(8) {
            *b = 0xff; // NaN bit pattern
        }
        assert!(read_snapshot_parts(&sidecar, &bad).is_err());
        let tampered = String::from_utf8(sidecar.clone())
            .unwrap()
            .replace("\"n_t\": 8", "\"n_t\": 0");
        assert!(read_snapshot_parts(tampered.as_bytes(), &payload).is_err());
    }

    #[test]
    fn diagnostics_csv_round_trips_bit_exactly() {
        let series: Vec<DiagRecord> = (0..20)
            .map(|k| sample_record(k as f64 * 0.5 + 0.1))
            .collect();
        let text = diagnostics_csv_string(&series);
        let back = parse_diagnostics_csv(&text).unwrap();
        assert_eq!(series.len(), back.len());
        for (a, b) in series.iter().zip(&back) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn diagnostics_csv_rejects_malformed_input() {
        assert!(parse_diagnostics_csv("").is_err());
        assert!(parse_diagnostics_csv("bogus,header\n1,2\n").is_err());
        let header = DIAG_COLUMNS.join(",");
        assert!(parse_diagnostics_csv(&format!("{header}\n1,2,3\n")).is_err());
        let good_row = vec!["1.0"; 13].join(",");
        let nan_row = {
            let mut cells = vec!["1.0"; 13];
            cells[3] = "NaN";
            cells.join(",")
        };
        assert!(parse_diagnostics_csv(&format!("{header}\n{nan_row}\n")).is_err());
        // Time must strictly increase.
        assert!(parse_diagnostics_csv(&format!("{header}\n{good_row}\n{good_row}\n")).is_err());
    }

    #[test]
    fn plot_csv_has_loglog_pairs() {
        let series: Vec<DiagRecord> = (0..5).map(|k| sample_record(1.0 + k as f64)).collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plot.csv");
        write_plot_csv(&path, &series).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("t,l2_dist,log10_t,log10_l2_dist\n"));
        assert_eq!(text.lines().count(), 6);
    }

    #[test]
    fn field_csv_export_covers_all_nodes() {
        let g = test_grid();
        let f = Field::from_fn(&g, |xi, x| xi + x[0]);
        let text = field_csv_n2(&f).unwrap();
        assert_eq!(text.lines().count(), 1 + g.node_count());
        let g3 = Grid::new(5.0, 17, 3, 4).unwrap();
        assert!(field_csv_n2(&Field::zeros(&g3)).is_err());
    }
}
