//! Cartesian parameter sweeps over the physical model, evaluated in parallel
//! with rows in lexicographic axis order.

use rayon::prelude::*;

use super::config::{AxisSpec, ScenarioConfig, SweepConfig};
use super::table::ResultTable;
use crate::error::{Error, Result};
use crate::model::{self, ModelParams, DEFAULT_RWA_THRESHOLD};
use crate::sensing;

pub const WORKERS_ENV: &str = "SQFOCK_WORKERS";

/// Variables a sweep axis may set, with units.
pub const SWEEP_VARIABLES: &[(&str, &str)] = &[
    ("omega_a", "rad/s"),
    ("kerr", "rad/s"),
    ("gamma0", "rad/s"),
    ("omega_p", "rad/s"),
    ("drive_amp", "rad/s"),
    ("theta", "rad"),
    ("mass", "kg"),
    // keeps the pump amplitude ratio, i.e. r
    ("delta_a", "rad/s"),
    // keeps δ_a, sets Ω_p = δ_a tanh 2r
    ("r", "1"),
];

/// Observables a sweep may report, with units (SI unless the model uses ħ = 1).
pub const OBSERVABLES: &[(&str, &str)] = &[
    ("r", "1"),
    ("omega_b", "rad/s"),
    ("u_b", "rad/s"),
    ("alpha", "rad/s"),
    ("big_gamma", "rad/s"),
    ("alpha_over_gamma", "1"),
    ("n_sq", "1"),
    ("x_zpf", "m"),
    ("delta_k_min", "N/m/sqrt(Hz)"),
    ("delta_k0", "N/m/sqrt(Hz)"),
    ("delta_k_ratio", "1"),
    ("t_opt", "s"),
    ("rwa_max_ratio", "1"),
    ("rwa_pass", "1"),
];

fn unit_of(table: &[(&str, &str)], name: &str) -> String {
    table.iter().find(|(n, _)| *n == name).map(|(_, u)| u.to_string()).unwrap_or_else(|| "1".into())
}

/// Worker count from `SQFOCK_WORKERS`, defaulting to the available cores.
pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::Config(format!("{WORKERS_ENV} must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

/// Evaluate `f(0..n)` on a pool of `workers` threads, keeping index order.
pub fn parallel_map<T, F>(n: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| (0..n).into_par_iter().map(&f).collect())
}

/// Cartesian product in lexicographic order, last axis fastest.
pub fn grid_points(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn apply_variable(params: &mut ModelParams, variable: &str, value: f64) -> Result<()> {
    match variable {
        "omega_a" => params.omega_a = value,
        "kerr" => params.kerr = value,
        "gamma0" => params.gamma0 = value,
        "omega_p" => params.omega_p = value,
        "drive_amp" => params.drive_amp = value,
        "theta" => params.theta = value,
        "mass" => params.mass = value,
        "delta_a" => {
            let ratio = params.drive_amp / params.delta_a();
            params.omega_p = params.omega_a - value;
            params.drive_amp = ratio * value;
        }
        "r" => *params = params.with_squeezing(value),
        other => return Err(Error::Config(format!("sweep axis references unknown field '{other}'"))),
    }
    Ok(())
}

/// Evaluate the named observables for one parameter set.
pub fn observe(params: &ModelParams, observables: &[String]) -> Result<Vec<f64>> {
    let eff = model::effective_params(params)?;
    let needs_sensitivity = observables.iter().any(|o| o.starts_with("delta_k") || o == "t_opt");
    let sens = if needs_sensitivity { Some(sensing::sensitivity_spring(&eff)?) } else { None };
    let needs_rwa = observables.iter().any(|o| o.starts_with("rwa"));
    let rwa = if needs_rwa { Some(model::rwa_report(params, DEFAULT_RWA_THRESHOLD)?) } else { None };
    observables
        .iter()
        .map(|o| {
            Ok(match o.as_str() {
                "r" => eff.r,
                "omega_b" => eff.omega_b,
                "u_b" => eff.u_b,
                "alpha" => eff.alpha,
                "big_gamma" => eff.big_gamma,
                "alpha_over_gamma" => eff.alpha / eff.big_gamma,
                "n_sq" => eff.n_sq,
                "x_zpf" => eff.x_zpf,
                "delta_k_min" => sens.unwrap().delta_k_min,
                "delta_k0" => sens.unwrap().baseline,
                "delta_k_ratio" => sens.unwrap().ratio(),
                "t_opt" => sens.unwrap().t_opt,
                "rwa_max_ratio" => rwa.as_ref().unwrap().max_ratio(),
                "rwa_pass" => f64::from(u8::from(rwa.as_ref().unwrap().all_pass())),
                other => return Err(Error::Config(format!("unknown observable '{other}'"))),
            })
        })
        .collect()
}

pub fn run_sweep(cfg: &ScenarioConfig, workers: usize) -> Result<ResultTable> {
    let sweep: &SweepConfig = cfg.sweep.as_ref().ok_or_else(|| Error::Config("the sweep scenario needs a [sweep] section".into()))?;
    let axis_values: Vec<Vec<f64>> = sweep.axes.iter().map(AxisSpec::values).collect();
    let points = grid_points(&axis_values);
    let rows = parallel_map(points.len(), workers, |i| {
        let mut params = cfg.model.clone();
        for (axis, &v) in sweep.axes.iter().zip(&points[i]) {
            apply_variable(&mut params, &axis.variable, v)?;
        }
        let mut row = points[i].clone();
        row.extend(observe(&params, &sweep.observables)?);
        Ok(row)
    })?;

    let mut columns: Vec<(String, String)> =
        sweep.axes.iter().map(|a| (a.variable.clone(), unit_of(SWEEP_VARIABLES, &a.variable))).collect();
    columns.extend(sweep.observables.iter().map(|o| (o.clone(), unit_of(OBSERVABLES, o))));
    let cols: Vec<(&str, &str)> = columns.iter().map(|(n, u)| (n.as_str(), u.as_str())).collect();
    let mut table = ResultTable::new("sweep", &cols);
    for row in rows {
        table.push(row)?;
    }
    table.note(format!("points: {}", points.len()));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::Spacing;

    fn axis(variable: &str, min: f64, max: f64, points: usize) -> AxisSpec {
        AxisSpec { variable: variable.into(), min, max, points, spacing: Spacing::Linear }
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let g = grid_points(&[vec![1.0, 2.0], vec![10.0, 20.0]]);
        assert_eq!(g, vec![vec![1.0, 10.0], vec![1.0, 20.0], vec![2.0, 10.0], vec![2.0, 20.0]]);
    }

    #[test]
    fn single_point_equals_direct_call() {
        let mut cfg = ScenarioConfig::default();
        cfg.sweep = Some(SweepConfig { axes: vec![axis("r", 1.2, 1.2, 1)], observables: vec!["alpha".into(), "delta_k_ratio".into()] });
        let t = run_sweep(&cfg, 1).unwrap();
        assert_eq!(t.rows.len(), 1);
        let eff = model::effective_params(&cfg.model.with_squeezing(1.2)).unwrap();
        assert_eq!(t.rows[0][1], eff.alpha);
        assert_eq!(t.rows[0][2], sensing::sensitivity_spring(&eff).unwrap().ratio());
    }

    #[test]
    fn two_by_two_rows_in_declared_order() {
        let mut cfg = ScenarioConfig::default();
        cfg.sweep = Some(SweepConfig {
            axes: vec![axis("r", 0.5, 1.0, 2), axis("gamma0", 1e3, 2e3, 2)],
            observables: vec!["big_gamma".into()],
        });
        let t = run_sweep(&cfg, 2).unwrap();
        let firsts: Vec<(f64, f64)> = t.rows.iter().map(|r| (r[0], r[1])).collect();
        assert_eq!(firsts, vec![(0.5, 1e3), (0.5, 2e3), (1.0, 1e3), (1.0, 2e3)]);
        for r in &t.rows {
            assert!((r[2] - r[1] * (2.0 * r[0]).cosh()).abs() < 1e-9 * r[2]);
        }
        assert_eq!(t.columns[2].unit, "rad/s");
    }

    #[test]
    fn worker_count_is_independent_of_result() {
        let mut cfg = ScenarioConfig::default();
        cfg.sweep = Some(SweepConfig { axes: vec![axis("r", 0.0, 2.0, 7)], observables: vec!["alpha_over_gamma".into()] });
        assert_eq!(run_sweep(&cfg, 1).unwrap(), run_sweep(&cfg, 3).unwrap());
    }

    #[test]
    fn delta_a_axis_keeps_squeezing() {
        let mut p = ModelParams::default();
        let r0 = model::effective_params(&p).unwrap().r;
        let target = 2.0 * p.delta_a();
        apply_variable(&mut p, "delta_a", target).unwrap();
        assert!((model::effective_params(&p).unwrap().r - r0).abs() < 1e-12);
        assert!(apply_variable(&mut p, "nope", 1.0).is_err());
    }
}
