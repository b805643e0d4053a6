use nalgebra::DVector;

use super::{integrate_step, Plant};
use crate::{Error, Result};

/// Options for the steady-state search.
#[derive(Debug, Clone)]
pub struct SteadyStateOptions {
    /// Scaled residual tolerance: ||rhs||_inf / (1 + ||x||_inf).
    pub tol: f64,
    pub max_iter: usize,
    /// Horizon for the integration fallback, in seconds.
    pub fallback_horizon: f64,
    /// Step size used by the fallback integration.
    pub fallback_dt: f64,
    pub substeps: usize,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        SteadyStateOptions {
            tol: 1e-10,
            max_iter: 100,
            fallback_horizon: 2.0e5,
            fallback_dt: 100.0,
            substeps: 10,
        }
    }
}

fn scaled_residual(r: &DVector<f64>, x: &DVector<f64>) -> f64 {
    r.amax() / (1.0 + x.amax())
}

/// Find x with f(x) + sum g_i(x) u_i = 0 near `x_guess`.
///
/// Damped Newton with an SVD solve (rank-deficient Jacobians keep the
/// unobservable directions at the guess), falling back to long-horizon
/// integration when Newton stalls.
pub fn steady_state(
    plant: &dyn Plant,
    u: &DVector<f64>,
    x_guess: &DVector<f64>,
    opts: &SteadyStateOptions,
) -> Result<DVector<f64>> {
    super::check_dim("steady_state input", plant.dims().n_u, u.len())?;
    super::check_dim("steady_state guess", plant.dims().n_x, x_guess.len())?;

    if let Some(x) = newton(plant, u, x_guess, opts) {
        return Ok(x);
    }

    // Fallback: run the dynamics out, then polish with Newton again.
    let mut x = x_guess.clone();
    let steps = (opts.fallback_horizon / opts.fallback_dt).ceil() as usize;
    for _ in 0..steps {
        x = integrate_step(plant, &x, u, opts.fallback_dt, opts.substeps).map_err(|_| {
            Error::SteadyStateNotFound {
                plant: plant.name().to_string(),
                reason: "fallback integration diverged".into(),
            }
        })?;
    }
    if let Some(x) = newton(plant, u, &x, opts) {
        return Ok(x);
    }

    Err(Error::SteadyStateNotFound {
        plant: plant.name().to_string(),
        reason: format!(
            "residual above {} after {} Newton iterations and {:.0} s fallback",
            opts.tol, opts.max_iter, opts.fallback_horizon
        ),
    })
}

fn newton(
    plant: &dyn Plant,
    u: &DVector<f64>,
    x0: &DVector<f64>,
    opts: &SteadyStateOptions,
) -> Option<DVector<f64>> {
    let mut x = x0.clone();
    let mut r = plant.rhs(&x, u);
    for _ in 0..opts.max_iter {
        if scaled_residual(&r, &x) <= opts.tol {
            return Some(x);
        }
        let jac = plant.rhs_jacobian_x(&x, u);
        let svd = jac.svd(true, true);
        let delta = svd.solve(&(-&r), 1e-12).ok()?;
        if !delta.iter().all(|v| v.is_finite()) {
            return None;
        }

        // Damped line search on the residual norm.
        let r_norm = r.norm();
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let x_trial = &x + &delta * alpha;
            let r_trial = plant.rhs(&x_trial, u);
            if r_trial.iter().all(|v| v.is_finite()) && r_trial.norm() < r_norm {
                x = x_trial;
                r = r_trial;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    if scaled_residual(&r, &x) <= opts.tol {
        Some(x)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plant::CustomPlant;
    use approx::assert_relative_eq;

    #[test]
    fn linear_steady_state() {
        // dx/dt = -x + u, u = 2 -> x* = 2.
        let plant = CustomPlant::scalar("lag", |x| -x, 1.0, [-10.0, 10.0]);
        let x = steady_state(
            &plant,
            &DVector::from_element(1, 2.0),
            &DVector::zeros(1),
            &SteadyStateOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(x[0], 2.0, epsilon = 1e-9);
    }

    #[test]
    fn cubic_steady_state() {
        // dx/dt = -x^3 + u, u = 8 -> x* = 2.
        let plant = CustomPlant::scalar("cubic", |x| -x * x * x, 1.0, [-10.0, 10.0]);
        let u = DVector::from_element(1, 8.0);
        let x = steady_state(
            &plant,
            &u,
            &DVector::from_element(1, 1.0),
            &SteadyStateOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(x[0], 2.0, epsilon = 1e-8);
        let r = plant.rhs(&x, &u);
        assert!(r.amax() / (1.0 + x.amax()) <= 1e-10);
    }

    #[test]
    fn unbalanced_integrator_is_rejected() {
        // dx/dt = 1 has no steady state.
        let plant = CustomPlant::scalar("ramp", |_| 1.0, 0.0, [-1.0, 1.0]);
        let opts = SteadyStateOptions {
            fallback_horizon: 10.0,
            fallback_dt: 1.0,
            ..SteadyStateOptions::default()
        };
        let err = steady_state(&plant, &DVector::zeros(1), &DVector::zeros(1), &opts).unwrap_err();
        assert!(matches!(err, crate::Error::SteadyStateNotFound { .. }));
    }
}
