use std::fs;
use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{SamplingConfig, Snapshot, SnapshotDataset, Units};
use crate::{Error, Result};

/// Sidecar metadata persisted next to the snapshot CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub plant_name: String,
    pub seed: u64,
    pub dt_s: f64,
    pub units: Units,
    pub n_x: usize,
    pub n_y: usize,
    pub n_u: usize,
    pub trajectory_lens: Vec<usize>,
    pub sampling: Option<SamplingConfig>,
    pub config_hash: String,
    pub library_version: String,
    /// Floor applied before log10 transforms.
    pub log_floor: f64,
}

impl DatasetManifest {
    pub fn for_dataset(ds: &SnapshotDataset, sampling: Option<SamplingConfig>) -> Self {
        let (n_x, n_y, n_u) = ds.dims();
        let config_hash = sampling
            .as_ref()
            .map(crate::util::hash_json)
            .unwrap_or_default();
        DatasetManifest {
            plant_name: ds.plant_name.clone(),
            seed: ds.seed,
            dt_s: ds.dt_s,
            units: ds.units,
            n_x,
            n_y,
            n_u,
            trajectory_lens: ds.trajectory_lens.clone(),
            sampling,
            config_hash,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            log_floor: super::LOG_FLOOR,
        }
    }
}

/// Write `dataset.csv` and `manifest.json` into `dir`.
pub fn save_dataset(ds: &SnapshotDataset, manifest: &DatasetManifest, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let (n_x, n_y, n_u) = ds.dims();

    let mut wtr = csv::Writer::from_path(dir.join("dataset.csv"))?;
    let mut header = vec!["traj".to_string(), "k".to_string()];
    header.extend((1..=n_x).map(|i| format!("x_{i}")));
    header.extend((1..=n_y).map(|i| format!("y_{i}")));
    header.extend((1..=n_u).map(|i| format!("u_{i}")));
    wtr.write_record(&header)?;

    let mut idx = 0usize;
    for (t, &len) in ds.trajectory_lens.iter().enumerate() {
        for k in 0..len {
            let s = &ds.snapshots[idx];
            let mut row = vec![t.to_string(), k.to_string()];
            row.extend(s.x.iter().map(|v| format!("{v}")));
            row.extend(s.y.iter().map(|v| format!("{v}")));
            row.extend(s.u.iter().map(|v| format!("{v}")));
            wtr.write_record(&row)?;
            idx += 1;
        }
    }
    wtr.flush()?;

    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(manifest)?,
    )?;
    Ok(())
}

/// Load a dataset previously written by [`save_dataset`].
pub fn load_dataset(dir: &Path) -> Result<(SnapshotDataset, DatasetManifest)> {
    let manifest: DatasetManifest =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
    let mut rdr = csv::Reader::from_path(dir.join("dataset.csv"))?;
    let mut snapshots = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let values: Vec<f64> = record
            .iter()
            .skip(2)
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Other(format!("bad float in dataset.csv: {e}")))?;
        let expected = manifest.n_x + manifest.n_y + manifest.n_u;
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "dataset.csv row".into(),
                expected,
                got: values.len(),
            });
        }
        let x = DVector::from_row_slice(&values[..manifest.n_x]);
        let y = DVector::from_row_slice(&values[manifest.n_x..manifest.n_x + manifest.n_y]);
        let u = DVector::from_row_slice(&values[manifest.n_x + manifest.n_y..]);
        snapshots.push(Snapshot { x, y, u });
    }
    let ds = SnapshotDataset {
        snapshots,
        trajectory_lens: manifest.trajectory_lens.clone(),
        dt_s: manifest.dt_s,
        units: manifest.units,
        plant_name: manifest.plant_name.clone(),
        seed: manifest.seed,
    };
    if ds.trajectory_lens.iter().sum::<usize>() != ds.snapshots.len() {
        return Err(Error::Other(
            "manifest trajectory lengths do not match dataset.csv".into(),
        ));
    }
    Ok((ds, manifest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_preserves_values_exactly() {
        let snapshots = vec![
            Snapshot {
                x: DVector::from_vec(vec![0.1234567890123456, -3.5e-11]),
                y: DVector::from_vec(vec![1.0 / 3.0]),
                u: DVector::from_vec(vec![2.0f64.sqrt()]),
            },
            Snapshot {
                x: DVector::from_vec(vec![1.0, 2.0]),
                y: DVector::from_vec(vec![-0.0]),
                u: DVector::from_vec(vec![1e300]),
            },
        ];
        let ds = SnapshotDataset {
            snapshots,
            trajectory_lens: vec![2],
            dt_s: 300.0,
            units: Units::Raw,
            plant_name: "test".into(),
            seed: 5,
        };
        let dir = std::env::temp_dir().join("koopman_mpc_io_test");
        let manifest = DatasetManifest::for_dataset(&ds, None);
        save_dataset(&ds, &manifest, &dir).unwrap();
        let (loaded, m2) = load_dataset(&dir).unwrap();
        assert_eq!(ds, loaded);
        assert_eq!(m2.trajectory_lens, manifest.trajectory_lens);
        std::fs::remove_dir_all(&dir).ok();
    }
}
