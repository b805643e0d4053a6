//! Sampling campaigns, scaling, and training-window assembly.

mod campaign;
mod io;
mod scaling;
mod windows;

pub use campaign::{run_campaign, SamplingConfig};
pub use io::{load_dataset, save_dataset, DatasetManifest};
pub use scaling::{
    fit_scaling, ChannelScale, ScalingSpec, Transform, TransformAssignment, LOG_FLOOR,
};
pub use windows::{build_windows, split_train_val, TrajectoryWindow};

use nalgebra::DVector;

/// One sampled (state, output, input) tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub u: DVector<f64>,
}

/// Units of the values stored in a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    Raw,
    Scaled,
}

/// Ordered snapshots grouped into trajectories.
///
/// Windows never straddle a trajectory boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotDataset {
    pub snapshots: Vec<Snapshot>,
    /// Length of each trajectory; lengths sum to `snapshots.len()`.
    pub trajectory_lens: Vec<usize>,
    pub dt_s: f64,
    pub units: Units,
    pub plant_name: String,
    pub seed: u64,
}

impl SnapshotDataset {
    pub fn n_trajectories(&self) -> usize {
        self.trajectory_lens.len()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Snapshot index range of trajectory `t`.
    pub fn trajectory_range(&self, t: usize) -> std::ops::Range<usize> {
        let start: usize = self.trajectory_lens[..t].iter().sum();
        start..start + self.trajectory_lens[t]
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        let s = &self.snapshots[0];
        (s.x.len(), s.y.len(), s.u.len())
    }

    /// Flat [x, y, u] channel rows, for scaling fits and persistence.
    pub fn rows(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.snapshots.iter().map(|s| {
            let mut row = Vec::with_capacity(s.x.len() + s.y.len() + s.u.len());
            row.extend(s.x.iter());
            row.extend(s.y.iter());
            row.extend(s.u.iter());
            row
        })
    }

    /// Apply a fitted scaling spec, returning the scaled dataset.
    pub fn scaled(&self, spec: &ScalingSpec) -> SnapshotDataset {
        assert_eq!(self.units, Units::Raw, "dataset already scaled");
        let snapshots = self
            .snapshots
            .iter()
            .map(|s| Snapshot {
                x: spec.scale_x(&s.x),
                y: spec.scale_y(&s.y),
                u: spec.scale_u(&s.u),
            })
            .collect();
        SnapshotDataset {
            snapshots,
            trajectory_lens: self.trajectory_lens.clone(),
            dt_s: self.dt_s,
            units: Units::Scaled,
            plant_name: self.plant_name.clone(),
            seed: self.seed,
        }
    }
}
