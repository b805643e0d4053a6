//! Per-channel scaling of snapshot data to the unit interval, with an
//! optional log10 transform for composition-like channels.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Floor applied before log10 to guard exact zeros from numerics.
pub const LOG_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Linear,
    Log10,
}

/// One channel's fitted scaling: `scaled = (t(v) - lo) / (hi - lo)` where
/// `t` is the channel transform and `lo`, `hi` are fitted on training data
/// in transformed units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelScale {
    pub transform: Transform,
    pub lo: f64,
    pub hi: f64,
}

impl ChannelScale {
    fn apply_transform(&self, v: f64) -> f64 {
        match self.transform {
            Transform::Linear => v,
            Transform::Log10 => v.max(LOG_FLOOR).log10(),
        }
    }

    fn invert_transform(&self, t: f64) -> f64 {
        match self.transform {
            Transform::Linear => t,
            Transform::Log10 => 10f64.powf(t),
        }
    }

    pub fn scale(&self, v: f64) -> f64 {
        (self.apply_transform(v) - self.lo) / (self.hi - self.lo)
    }

    pub fn unscale(&self, s: f64) -> f64 {
        self.invert_transform(self.lo + s * (self.hi - self.lo))
    }

    /// Slope of the raw value with respect to the scaled value; only defined
    /// for linear channels.
    pub fn linear_slope(&self) -> f64 {
        assert!(
            self.transform == Transform::Linear,
            "linear_slope on a log channel"
        );
        self.hi - self.lo
    }
}

/// Scaling for a full snapshot laid out as [x, y, u].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSpec {
    pub n_x: usize,
    pub n_y: usize,
    pub n_u: usize,
    /// One entry per channel, x channels first, then y, then u.
    pub channels: Vec<ChannelScale>,
}

impl ScalingSpec {
    pub fn n_channels(&self) -> usize {
        self.n_x + self.n_y + self.n_u
    }

    /// Identity spec (linear, [0, 1]) — scaled units equal raw units.
    pub fn identity(n_x: usize, n_y: usize, n_u: usize) -> Self {
        ScalingSpec {
            n_x,
            n_y,
            n_u,
            channels: vec![
                ChannelScale {
                    transform: Transform::Linear,
                    lo: 0.0,
                    hi: 1.0,
                };
                n_x + n_y + n_u
            ],
        }
    }

    pub fn x_channel(&self, i: usize) -> &ChannelScale {
        &self.channels[i]
    }

    pub fn y_channel(&self, i: usize) -> &ChannelScale {
        &self.channels[self.n_x + i]
    }

    pub fn u_channel(&self, i: usize) -> &ChannelScale {
        &self.channels[self.n_x + self.n_y + i]
    }

    pub fn scale_x(&self, x: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_fn(self.n_x, |i, _| self.x_channel(i).scale(x[i]))
    }

    pub fn scale_y(&self, y: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_fn(self.n_y, |i, _| self.y_channel(i).scale(y[i]))
    }

    pub fn scale_u(&self, u: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_fn(self.n_u, |i, _| self.u_channel(i).scale(u[i]))
    }

    pub fn unscale_x(&self, x: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_fn(self.n_x, |i, _| self.x_channel(i).unscale(x[i]))
    }

    pub fn unscale_y(&self, y: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_fn(self.n_y, |i, _| self.y_channel(i).unscale(y[i]))
    }

    pub fn unscale_u(&self, u: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_fn(self.n_u, |i, _| self.u_channel(i).unscale(u[i]))
    }
}

/// Per-channel transform assignment used when fitting a spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformAssignment {
    pub x: Vec<Transform>,
    pub y: Vec<Transform>,
    pub u: Vec<Transform>,
}

impl TransformAssignment {
    pub fn all_linear(n_x: usize, n_y: usize, n_u: usize) -> Self {
        TransformAssignment {
            x: vec![Transform::Linear; n_x],
            y: vec![Transform::Linear; n_y],
            u: vec![Transform::Linear; n_u],
        }
    }

    pub fn flat(&self) -> Vec<Transform> {
        let mut v = Vec::with_capacity(self.x.len() + self.y.len() + self.u.len());
        v.extend_from_slice(&self.x);
        v.extend_from_slice(&self.y);
        v.extend_from_slice(&self.u);
        v
    }
}

/// Fit min-max scaling over an iterator of flat [x, y, u] channel values.
///
/// Log channels must be strictly positive (the floor only guards numerical
/// zeros, not genuinely non-positive data). Constant channels are rejected.
pub fn fit_scaling<'a>(
    rows: impl Iterator<Item = Vec<f64>> + 'a,
    n_x: usize,
    n_y: usize,
    n_u: usize,
    transforms: &TransformAssignment,
) -> Result<ScalingSpec> {
    let flat = transforms.flat();
    let n_ch = n_x + n_y + n_u;
    if flat.len() != n_ch {
        return Err(Error::DimensionMismatch {
            context: "transform assignment".into(),
            expected: n_ch,
            got: flat.len(),
        });
    }
    let mut lo = vec![f64::INFINITY; n_ch];
    let mut hi = vec![f64::NEG_INFINITY; n_ch];
    let mut seen = 0usize;
    for row in rows {
        if row.len() != n_ch {
            return Err(Error::DimensionMismatch {
                context: "scaling row".into(),
                expected: n_ch,
                got: row.len(),
            });
        }
        seen += 1;
        for (c, &v) in row.iter().enumerate() {
            let t = match flat[c] {
                Transform::Linear => v,
                Transform::Log10 => {
                    if v <= 0.0 {
                        return Err(Error::NonPositiveLogChannel { channel: c, value: v });
                    }
                    v.max(LOG_FLOOR).log10()
                }
            };
            lo[c] = lo[c].min(t);
            hi[c] = hi[c].max(t);
        }
    }
    if seen == 0 {
        return Err(Error::InvalidArgument("cannot fit scaling on empty data".into()));
    }
    let mut channels = Vec::with_capacity(n_ch);
    for c in 0..n_ch {
        if hi[c] <= lo[c] {
            return Err(Error::DegenerateChannel {
                channel: c,
                value: lo[c],
            });
        }
        channels.push(ChannelScale {
            transform: flat[c],
            lo: lo[c],
            hi: hi[c],
        });
    }
    Ok(ScalingSpec {
        n_x,
        n_y,
        n_u,
        channels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn linear_midpoint_scales_to_half() {
        let spec = fit_scaling(
            vec![vec![2.0], vec![4.0]].into_iter(),
            1,
            0,
            0,
            &TransformAssignment::all_linear(1, 0, 0),
        )
        .unwrap();
        let ch = spec.x_channel(0);
        assert_eq!(ch.lo, 2.0);
        assert_eq!(ch.hi, 4.0);
        assert_eq!(ch.scale(3.0), 0.5);
    }

    #[test]
    fn log_midpoint_scales_to_half() {
        let mut transforms = TransformAssignment::all_linear(1, 0, 0);
        transforms.x[0] = Transform::Log10;
        let spec = fit_scaling(
            vec![vec![1e-4], vec![1e-2]].into_iter(),
            1,
            0,
            0,
            &transforms,
        )
        .unwrap();
        let s = spec.x_channel(0).scale(1e-3);
        assert!((s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn roundtrip_is_identity() {
        let mut transforms = TransformAssignment::all_linear(2, 0, 0);
        transforms.x[1] = Transform::Log10;
        let spec = fit_scaling(
            vec![vec![-3.0, 1e-5], vec![7.0, 0.9]].into_iter(),
            2,
            0,
            0,
            &transforms,
        )
        .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let v0 = rng.gen_range(-3.0..7.0);
            let v1 = rng.gen_range(1e-5..0.9);
            for (c, v) in [(0usize, v0), (1usize, v1)] {
                let ch = spec.x_channel(c);
                let back = ch.unscale(ch.scale(v));
                assert!(
                    (back - v).abs() <= 1e-12 * (1.0 + v.abs()),
                    "roundtrip {v} -> {back}"
                );
            }
        }
    }

    #[test]
    fn degenerate_channel_is_rejected() {
        let err = fit_scaling(
            vec![vec![5.0], vec![5.0]].into_iter(),
            1,
            0,
            0,
            &TransformAssignment::all_linear(1, 0, 0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegenerateChannel { channel: 0, .. }));
    }

    #[test]
    fn non_positive_log_channel_is_rejected() {
        let mut transforms = TransformAssignment::all_linear(1, 0, 0);
        transforms.x[0] = Transform::Log10;
        let err = fit_scaling(
            vec![vec![0.0], vec![1.0]].into_iter(),
            1,
            0,
            0,
            &transforms,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonPositiveLogChannel { .. }));
    }
}
