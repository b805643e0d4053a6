use nalgebra::DVector;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SnapshotDataset;

/// A window of `s` consecutive snapshots from one trajectory, the training
/// unit for the prediction losses.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryWindow {
    pub x: Vec<DVector<f64>>,
    pub y: Vec<DVector<f64>>,
    pub u: Vec<DVector<f64>>,
}

impl TrajectoryWindow {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Slice sliding windows of length `s` every `stride` snapshots.
///
/// Windows never cross trajectory boundaries; a trajectory of length `len`
/// contributes `floor((len - s) / stride) + 1` windows when `len >= s`.
pub fn build_windows(dataset: &SnapshotDataset, s: usize, stride: usize) -> Vec<TrajectoryWindow> {
    assert!(s >= 2, "window length must be at least 2");
    assert!(stride >= 1, "stride must be at least 1");
    let mut windows = Vec::new();
    for t in 0..dataset.n_trajectories() {
        let range = dataset.trajectory_range(t);
        let len = range.len();
        if len < s {
            continue;
        }
        let mut start = range.start;
        while start + s <= range.end {
            let slice = &dataset.snapshots[start..start + s];
            windows.push(TrajectoryWindow {
                x: slice.iter().map(|sn| sn.x.clone()).collect(),
                y: slice.iter().map(|sn| sn.y.clone()).collect(),
                u: slice.iter().map(|sn| sn.u.clone()).collect(),
            });
            start += stride;
        }
    }
    windows
}

/// Shuffle windows with a seeded rng and split into train/validation parts.
pub fn split_train_val(
    windows: Vec<TrajectoryWindow>,
    fraction: f64,
    seed: u64,
) -> (Vec<TrajectoryWindow>, Vec<TrajectoryWindow>) {
    assert!(windows.len() >= 2, "need at least 2 windows to split");
    assert!(fraction > 0.0 && fraction < 1.0);
    let mut windows = windows;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    windows.shuffle(&mut rng);
    let n_train = ((windows.len() as f64 * fraction).round() as usize)
        .clamp(1, windows.len() - 1);
    let val = windows.split_off(n_train);
    (windows, val)
}
