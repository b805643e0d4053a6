use nalgebra::DVector;

use super::Plant;
use crate::{Error, Result};

/// One zeroth-order-hold step with classical fixed-step RK4.
///
/// The interval `dt` is split into `substeps` equal RK4 steps under the
/// constant input `u`.
pub fn integrate_step(
    plant: &dyn Plant,
    x: &DVector<f64>,
    u: &DVector<f64>,
    dt: f64,
    substeps: usize,
) -> Result<DVector<f64>> {
    if dt <= 0.0 {
        return Err(Error::InvalidArgument(format!("dt must be > 0, got {dt}")));
    }
    if substeps == 0 {
        return Err(Error::InvalidArgument("substeps must be >= 1".into()));
    }
    super::check_dim("integrate_step state", plant.dims().n_x, x.len())?;
    super::check_dim("integrate_step input", plant.dims().n_u, u.len())?;

    let h = dt / substeps as f64;
    let mut state = x.clone();
    for _ in 0..substeps {
        let k1 = plant.rhs(&state, u);
        let k2 = plant.rhs(&(&state + &k1 * (h / 2.0)), u);
        let k3 = plant.rhs(&(&state + &k2 * (h / 2.0)), u);
        let k4 = plant.rhs(&(&state + &k3 * h), u);
        state += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        if let Some(component) = state.iter().position(|v| !v.is_finite()) {
            return Err(Error::IntegrationFailure { component, t: dt });
        }
    }
    Ok(state)
}

/// A piecewise-constant input segment.
#[derive(Debug, Clone)]
pub struct InputStep {
    pub duration: f64,
    pub u: DVector<f64>,
}

/// Piecewise-constant input profile made of consecutive segments.
#[derive(Debug, Clone, Default)]
pub struct InputProfile {
    steps: Vec<InputStep>,
}

impl InputProfile {
    pub fn new() -> Self {
        InputProfile { steps: Vec::new() }
    }

    pub fn constant(u: DVector<f64>, duration: f64) -> Self {
        InputProfile {
            steps: vec![InputStep { duration, u }],
        }
    }

    pub fn push(&mut self, u: DVector<f64>, duration: f64) {
        self.steps.push(InputStep { duration, u });
    }

    pub fn total_duration(&self) -> f64 {
        self.steps.iter().map(|s| s.duration).sum()
    }

    pub fn steps(&self) -> &[InputStep] {
        &self.steps
    }

    /// Input active at time `t` (right-continuous; last segment extends).
    pub fn at(&self, t: f64) -> &DVector<f64> {
        let mut acc = 0.0;
        for step in &self.steps {
            acc += step.duration;
            if t < acc - 1e-9 {
                return &step.u;
            }
        }
        &self.steps.last().expect("profile must not be empty").u
    }
}

/// A sampled trajectory: snapshots at multiples of the sampling time.
///
/// `u[k]` is the input applied on `[t[k], t[k+1])`; the final entry repeats
/// the last applied input.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub x: Vec<DVector<f64>>,
    pub y: Vec<DVector<f64>>,
    pub u: Vec<DVector<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Simulate a plant under a piecewise-constant profile, sampling every `dt_s`.
///
/// The first snapshot is `(0, x0, h(x0), u(0))`. `dt_s` must divide each
/// segment duration so that input switches align with sampling instants.
pub fn simulate_profile(
    plant: &dyn Plant,
    x0: &DVector<f64>,
    profile: &InputProfile,
    dt_s: f64,
    horizon: f64,
    substeps: usize,
) -> Result<Trajectory> {
    if dt_s <= 0.0 {
        return Err(Error::InvalidArgument("dt_s must be > 0".into()));
    }
    if horizon < 0.0 {
        return Err(Error::InvalidArgument("horizon must be >= 0".into()));
    }
    if profile.steps().is_empty() {
        return Err(Error::InvalidArgument("input profile is empty".into()));
    }
    if profile.total_duration() + 1e-9 < horizon {
        return Err(Error::InvalidArgument(format!(
            "profile covers {:.3} s but horizon is {:.3} s",
            profile.total_duration(),
            horizon
        )));
    }
    for (i, step) in profile.steps().iter().enumerate() {
        let ratio = step.duration / dt_s;
        if (ratio - ratio.round()).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "segment {i} duration {:.3} s is not a multiple of dt_s = {:.3} s",
                step.duration, dt_s
            )));
        }
    }

    let n_samples = (horizon / dt_s).round() as usize;
    let mut t = Vec::with_capacity(n_samples + 1);
    let mut xs = Vec::with_capacity(n_samples + 1);
    let mut ys = Vec::with_capacity(n_samples + 1);
    let mut us = Vec::with_capacity(n_samples + 1);

    let mut state = x0.clone();
    for k in 0..=n_samples {
        let tk = k as f64 * dt_s;
        let uk = profile.at(tk).clone();
        t.push(tk);
        xs.push(state.clone());
        ys.push(plant.output(&state));
        us.push(uk.clone());
        if k < n_samples {
            state = integrate_step(plant, &state, &uk, dt_s, substeps).map_err(|e| match e {
                Error::IntegrationFailure { component, .. } => Error::IntegrationFailure {
                    component,
                    t: tk + dt_s,
                },
                other => other,
            })?;
        }
    }

    Ok(Trajectory {
        t,
        x: xs,
        y: ys,
        u: us,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plant::CustomPlant;
    use approx::assert_relative_eq;

    fn decay_plant() -> CustomPlant {
        // dx/dt = -x, no inputs would be awkward with n_u = 0 everywhere, so
        // use g = 0 and drive with u = 0.
        CustomPlant::scalar("decay", |x| -x, 0.0, [-1.0, 1.0])
    }

    #[test]
    fn zero_drift_leaves_state_unchanged() {
        let plant = CustomPlant::scalar("still", |_| 0.0, 0.0, [-1.0, 1.0]);
        let x0 = DVector::from_element(1, 3.25);
        let x1 = integrate_step(&plant, &x0, &DVector::zeros(1), 1.0, 4).unwrap();
        assert_eq!(x1, x0);
    }

    #[test]
    fn rk4_matches_exponential_decay() {
        let plant = decay_plant();
        let x0 = DVector::from_element(1, 1.0);
        let x1 = integrate_step(&plant, &x0, &DVector::zeros(1), 0.1, 1).unwrap();
        assert_relative_eq!(x1[0], 0.9048375, epsilon = 1e-6);
        // RK4 local error for this step is far below 1e-7.
        assert!((x1[0] - (-0.1f64).exp()).abs() < 1e-7);
    }

    #[test]
    fn pure_integrator_is_exact() {
        let plant = CustomPlant::scalar("integrator", |_| 0.0, 1.0, [-10.0, 10.0]);
        let x0 = DVector::zeros(1);
        let u = DVector::from_element(1, 2.0);
        let x1 = integrate_step(&plant, &x0, &u, 0.5, 1).unwrap();
        assert_eq!(x1[0], 1.0);
    }

    #[test]
    fn non_finite_state_is_reported() {
        let plant = CustomPlant::scalar("blowup", |x| x * x, 0.0, [-1.0, 1.0]);
        let x0 = DVector::from_element(1, 1e200);
        let err = integrate_step(&plant, &x0, &DVector::zeros(1), 1.0, 1).unwrap_err();
        match err {
            crate::Error::IntegrationFailure { component, .. } => assert_eq!(component, 0),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn fourth_order_convergence() {
        // Halving the step size must cut the endpoint error by ~16x.
        let plant = decay_plant();
        let x0 = DVector::from_element(1, 1.0);
        let exact = (-1.0f64).exp();
        let mut errors = Vec::new();
        for substeps in [2usize, 4, 8, 16] {
            let x1 = integrate_step(&plant, &x0, &DVector::zeros(1), 1.0, substeps).unwrap();
            errors.push((x1[0] - exact).abs());
        }
        for w in errors.windows(2) {
            let ratio = w[0] / w[1];
            assert!(
                (ratio - 16.0).abs() < 0.2 * 16.0,
                "order ratio {ratio} not within 20% of 16"
            );
        }
    }

    #[test]
    fn zero_horizon_yields_single_snapshot() {
        let plant = decay_plant();
        let x0 = DVector::from_element(1, 2.0);
        let profile = InputProfile::constant(DVector::zeros(1), 10.0);
        let traj = simulate_profile(&plant, &x0, &profile, 1.0, 0.0, 4).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.x[0], x0);
        assert_eq!(traj.y[0], plant.output(&x0));
    }

    #[test]
    fn step_response_settles_to_gain() {
        // dx/dt = -x + u, u = 1, ten time constants.
        let plant = CustomPlant::scalar("lag", |x| -x, 1.0, [-10.0, 10.0]);
        let profile = InputProfile::constant(DVector::from_element(1, 1.0), 10.0);
        let traj = simulate_profile(&plant, &DVector::zeros(1), &profile, 0.5, 10.0, 8).unwrap();
        let last = traj.x.last().unwrap()[0];
        assert!((last - 1.0).abs() < 1e-4, "final state {last}");
    }

    #[test]
    fn profile_switches_at_sampling_instants() {
        let plant = CustomPlant::scalar("integrator", |_| 0.0, 1.0, [-10.0, 10.0]);
        let mut profile = InputProfile::new();
        profile.push(DVector::from_element(1, 1.0), 2.0);
        profile.push(DVector::from_element(1, -1.0), 2.0);
        let traj = simulate_profile(&plant, &DVector::zeros(1), &profile, 1.0, 4.0, 4).unwrap();
        assert_eq!(traj.u[0][0], 1.0);
        assert_eq!(traj.u[1][0], 1.0);
        assert_eq!(traj.u[2][0], -1.0);
        assert_eq!(traj.u[3][0], -1.0);
        assert_relative_eq!(traj.x[2][0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(traj.x[4][0], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn simulation_is_deterministic() {
        let plant = CustomPlant::scalar("lag", |x| -x, 1.0, [-10.0, 10.0]);
        let profile = InputProfile::constant(DVector::from_element(1, 0.7), 5.0);
        let a = simulate_profile(&plant, &DVector::zeros(1), &profile, 0.5, 5.0, 6).unwrap();
        let b = simulate_profile(&plant, &DVector::zeros(1), &profile, 0.5, 5.0, 6).unwrap();
        assert_eq!(a, b);
    }
}
