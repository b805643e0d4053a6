//! Input-step sampling campaign against a P-stabilized plant.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Snapshot, SnapshotDataset, Units};
use crate::plant::{integrate_step, steady_state, PControlledPlant, Plant, SteadyStateOptions};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SamplingConfig {
    /// Sampling time [s].
    pub dt_s: f64,
    /// Number of random input steps in the concatenated dynamic run.
    pub n_step_experiments: usize,
    /// Step duration range [s]; durations are drawn as multiples of `dt_s`.
    pub step_duration_range: [f64; 2],
    /// Number of steady-state trajectories.
    pub n_steady_trajectories: usize,
    /// Duration of each steady trajectory [s].
    pub steady_duration: f64,
    /// Per-input sampling range on the wrapped plant's channels (the
    /// controlled channel carries the setpoint range).
    pub input_ranges: Vec<[f64; 2]>,
    pub rng_seed: u64,
    /// RK4 substeps per sampling interval.
    pub substeps: usize,
}

impl SamplingConfig {
    /// Paper-scale defaults for the column: 5 min sampling, 800 steps of
    /// 0.5 h to 2 h, 500 steady trajectories of 2 h.
    pub fn column_default() -> Self {
        SamplingConfig {
            dt_s: 300.0,
            n_step_experiments: 800,
            step_duration_range: [1800.0, 7200.0],
            n_steady_trajectories: 500,
            steady_duration: 7200.0,
            input_ranges: vec![[36.0, 44.0], [52.0, 60.0], [78.0, 86.0], [19.0, 41.0]],
            rng_seed: 1,
            substeps: 60,
        }
    }

    pub fn validate(&self, n_u: usize) -> Result<()> {
        if self.dt_s <= 0.0 {
            return Err(Error::InvalidArgument("dt_s must be > 0".into()));
        }
        if self.input_ranges.len() != n_u {
            return Err(Error::DimensionMismatch {
                context: "sampling input_ranges".into(),
                expected: n_u,
                got: self.input_ranges.len(),
            });
        }
        for (i, [lo, hi]) in self.input_ranges.iter().enumerate() {
            if !(lo < hi) {
                return Err(Error::InvalidArgument(format!(
                    "input range {i} is empty: [{lo}, {hi}]"
                )));
            }
        }
        for d in [
            self.step_duration_range[0],
            self.step_duration_range[1],
            self.steady_duration,
        ] {
            let ratio = d / self.dt_s;
            if (ratio - ratio.round()).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "duration {d} s is not a multiple of dt_s"
                )));
            }
        }
        Ok(())
    }

    fn sample_input(&self, rng: &mut impl Rng) -> DVector<f64> {
        DVector::from_iterator(
            self.input_ranges.len(),
            self.input_ranges.iter().map(|[lo, hi]| rng.gen_range(*lo..*hi)),
        )
    }

    fn sample_duration_steps(&self, rng: &mut impl Rng) -> usize {
        let k_lo = (self.step_duration_range[0] / self.dt_s).round() as usize;
        let k_hi = (self.step_duration_range[1] / self.dt_s).round() as usize;
        rng.gen_range(k_lo..=k_hi)
    }
}

/// Run the sampling campaign: one concatenated run of random input steps,
/// then independent steady-state trajectories.
///
/// Snapshots store the inner plant's realized inputs (the biased value of
/// the P-controlled channel), in raw units.
pub fn run_campaign(
    plant: &PControlledPlant,
    x_guess: &DVector<f64>,
    cfg: &SamplingConfig,
) -> Result<SnapshotDataset> {
    let dims = plant.dims();
    cfg.validate(dims.n_u)?;

    let mut snapshots = Vec::new();
    let mut trajectory_lens = Vec::new();
    let ss_opts = SteadyStateOptions::default();

    let record = |snapshots: &mut Vec<Snapshot>, x: &DVector<f64>, u: &DVector<f64>| {
        snapshots.push(Snapshot {
            x: x.clone(),
            y: plant.output(x),
            u: plant.realize(x, u),
        });
    };

    // Dynamic part: one concatenated run starting from the mid-range steady
    // point, recorded as a single trajectory.
    if cfg.n_step_experiments > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(0);
        let u_mid = DVector::from_iterator(
            dims.n_u,
            cfg.input_ranges.iter().map(|[lo, hi]| 0.5 * (lo + hi)),
        );
        let mut x = steady_state(plant, &u_mid, x_guess, &ss_opts)?;
        let mut count = 0usize;
        let mut first = true;
        for _ in 0..cfg.n_step_experiments {
            let u = cfg.sample_input(&mut rng);
            let steps = cfg.sample_duration_steps(&mut rng);
            if first {
                record(&mut snapshots, &x, &u);
                count += 1;
                first = false;
            } else {
                // Re-record the segment head with the new input active on it.
                let last = snapshots.last_mut().expect("non-empty");
                last.u = plant.realize(&x, &u);
            }
            for k in 0..steps {
                x = integrate_step(plant, &x, &u, cfg.dt_s, cfg.substeps).map_err(|e| match e {
                    Error::IntegrationFailure { component, .. } => Error::IntegrationFailure {
                        component,
                        t: (count + k) as f64 * cfg.dt_s,
                    },
                    other => other,
                })?;
                record(&mut snapshots, &x, &u);
            }
            count += steps;
        }
        trajectory_lens.push(count);
    }

    // Steady part: independent trajectories at sampled constant inputs.
    let mut steady_guess = x_guess.clone();
    for t in 0..cfg.n_steady_trajectories {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(1 + t as u64);
        let mut failures = 0usize;
        let (u, x0) = loop {
            let u = cfg.sample_input(&mut rng);
            match steady_state(plant, &u, &steady_guess, &ss_opts) {
                Ok(x0) => break (u, x0),
                Err(_) => {
                    failures += 1;
                    log::warn!(
                        "steady trajectory {t}: no steady state for sampled input, resampling ({failures}/10)"
                    );
                    if failures >= 10 {
                        return Err(Error::SteadyStateNotFound {
                            plant: plant.name().to_string(),
                            reason: format!(
                                "10 consecutive sampled inputs without steady state (trajectory {t})"
                            ),
                        });
                    }
                }
            }
        };
        steady_guess = x0.clone();
        let steps = (cfg.steady_duration / cfg.dt_s).round() as usize;
        let mut x = x0;
        record(&mut snapshots, &x, &u);
        for _ in 0..steps {
            x = integrate_step(plant, &x, &u, cfg.dt_s, cfg.substeps)?;
            record(&mut snapshots, &x, &u);
        }
        trajectory_lens.push(steps + 1);
    }

    Ok(SnapshotDataset {
        snapshots,
        trajectory_lens,
        dt_s: cfg.dt_s,
        units: Units::Raw,
        plant_name: plant.inner().name().to_string(),
        seed: cfg.rng_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plant::{wrap_p_controller, CustomPlant, PControllerConfig, PlantDims};

    /// Two-input test plant: dx/dt = -x + u0 + u1 with the second channel
    /// P-controlled toward a setpoint; always has a steady state.
    fn wrapped_lag() -> PControlledPlant {
        let plant = CustomPlant::new(
            "lag2",
            PlantDims {
                n_x: 1,
                n_u: 2,
                n_y: 1,
            },
            Box::new(|x: &DVector<f64>| -x),
            vec![
                Box::new(|_x: &DVector<f64>| DVector::from_element(1, 1.0)),
                Box::new(|_x: &DVector<f64>| DVector::from_element(1, 1.0)),
            ],
            Box::new(|x: &DVector<f64>| x.clone()),
            vec![[0.0, 4.0], [-8.0, 8.0]],
        );
        wrap_p_controller(
            Box::new(plant),
            PControllerConfig {
                controlled_input: 1,
                measured_state: 0,
                gain: 2.0,
                setpoint_input: 1,
                setpoint_bounds: [0.5, 3.5],
            },
        )
        .unwrap()
    }

    fn small_config() -> SamplingConfig {
        SamplingConfig {
            dt_s: 1.0,
            n_step_experiments: 20,
            step_duration_range: [3.0, 8.0],
            n_steady_trajectories: 4,
            steady_duration: 6.0,
            input_ranges: vec![[0.5, 3.5], [0.5, 3.5]],
            rng_seed: 9,
            substeps: 4,
        }
    }

    #[test]
    fn steady_only_campaign_is_stationary() {
        let plant = wrapped_lag();
        let cfg = SamplingConfig {
            n_step_experiments: 0,
            n_steady_trajectories: 1,
            ..small_config()
        };
        let ds = run_campaign(&plant, &DVector::zeros(1), &cfg).unwrap();
        assert_eq!(ds.n_trajectories(), 1);
        let first = &ds.snapshots[0];
        for s in &ds.snapshots {
            assert!((s.x[0] - first.x[0]).abs() < 1e-9, "steady drifted");
        }
    }

    #[test]
    fn campaign_is_deterministic() {
        let plant = wrapped_lag();
        let cfg = small_config();
        let a = run_campaign(&plant, &DVector::zeros(1), &cfg).unwrap();
        let b = run_campaign(&plant, &DVector::zeros(1), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn recorded_inputs_cover_the_configured_ranges() {
        let plant = wrapped_lag();
        let cfg = SamplingConfig {
            n_step_experiments: 800,
            step_duration_range: [2.0, 4.0],
            n_steady_trajectories: 0,
            ..small_config()
        };
        let ds = run_campaign(&plant, &DVector::zeros(1), &cfg).unwrap();
        // Channel 0 is free (not P-controlled): its recorded values are the
        // sampled steps.
        let lo = ds.snapshots.iter().map(|s| s.u[0]).fold(f64::INFINITY, f64::min);
        let hi = ds
            .snapshots
            .iter()
            .map(|s| s.u[0])
            .fold(f64::NEG_INFINITY, f64::max);
        let [cfg_lo, cfg_hi] = cfg.input_ranges[0];
        let span = cfg_hi - cfg_lo;
        assert!((lo - cfg_lo).abs() < 0.01 * span, "min {lo} vs {cfg_lo}");
        assert!((hi - cfg_hi).abs() < 0.01 * span, "max {hi} vs {cfg_hi}");
    }

    #[test]
    fn trajectory_lengths_account_for_every_snapshot() {
        let plant = wrapped_lag();
        let cfg = small_config();
        let ds = run_campaign(&plant, &DVector::zeros(1), &cfg).unwrap();
        assert_eq!(
            ds.trajectory_lens.iter().sum::<usize>(),
            ds.snapshots.len()
        );
        assert_eq!(ds.n_trajectories(), 1 + cfg.n_steady_trajectories);
    }
}
