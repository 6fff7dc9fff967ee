//! The five subcommands. Each returns the text to emit.

use std::fs::File;
use std::io::BufWriter;

use serde_json::{json, Value};
use wavepath::*;

use crate::config::{Format, Mode, RunConfig};
use crate::error::CliError;
use crate::report::{self, to_value};

fn header(command: &str, cfg: &RunConfig, state: &PureState64) -> Value {
    json!({
        "command": command,
        "config": to_value(cfg),
        "resolved": { "state": report::state(state) },
    })
}

fn header_with_marker(
    command: &str,
    cfg: &RunConfig,
    state: &PureState64,
    m: &MarkerConfig64,
) -> Value {
    let mut v = header(command, cfg, state);
    v["resolved"]["theta"] = json!(m.theta());
    v["resolved"]["vartheta"] = json!(m.vartheta());
    v
}

fn grid_points(cfg: &RunConfig) -> Option<usize> {
    cfg.with_grid.then_some(cfg.phi_points)
}

fn is_unmarked(m: &MarkerConfig64, cfg: &RunConfig) -> bool {
    m.theta().sin().abs() <= cfg.eps_sing
}

pub fn exact(cfg: &RunConfig) -> Result<String, CliError> {
    let s = cfg.state.to_state()?;
    let phase = exact_phase_distribution(&s);
    if cfg.format == Format::Csv {
        return Ok(report::density_csv(&phase, cfg.phi_points));
    }
    let b = s.bloch();
    let mut v = header("exact", cfg, &s);
    v["bloch"] = json!({ "x": b.ex, "y": b.ey, "z": b.ez });
    v["path"] = report::binary(&exact_path_distribution(&s));
    v["interference"] = report::binary(&exact_interference_distribution(&s));
    v["phase"] = report::density(&phase);
    if let Some(points) = grid_points(cfg) {
        v["phase_grid"] = report::density_grid(&phase, points);
    }
    report::render(v)
}

pub fn operational(cfg: &RunConfig) -> Result<String, CliError> {
    let s = cfg.state.to_state()?;
    let m = cfg.marker()?;
    let mut v = header_with_marker("operational", cfg, &s, &m);
    let g = gamma_coefficients(&m);
    v["gamma"] = json!({
        "g0": [g.g0(1), g.g0(-1)],
        "gx": [g.gx(1), g.gx(-1)],
        "gz": [g.gz(1), g.gz(-1)],
    });
    match cfg.mode {
        Mode::Discrete => {
            let j = operational_joint_discrete(&s, &m);
            if cfg.format == Format::Csv {
                return Ok(report::table_csv(&j));
            }
            v["joint"] = report::table(&j);
            v["marginal_x"] = report::binary(&marginal_x(&j));
            v["marginal_z"] = report::binary(&marginal_z(&j));
        }
        Mode::Phase => {
            let j = operational_joint_phase(&s, &m);
            if cfg.format == Format::Csv {
                return Ok(report::slices_csv(&j, cfg.phi_points));
            }
            v["joint"] = report::slices(&j, grid_points(cfg));
            v["marginal_phase"] = report::density(&marginal_phase(&j));
            v["marginal_z"] = report::binary(&marginal_z_of_phase(&j));
        }
    }
    report::render(v)
}

fn kernels(m: &MarkerConfig64, cfg: &RunConfig) -> Result<Value, CliError> {
    let eps = cfg.threshold();
    let mx = mu_x_matrix(m.theta(), eps)?;
    let mz = mu_z_matrix(m, eps)?;
    let d = delta_coefficients(m, eps)?;
    Ok(json!({
        "mu_x": mx.entries(),
        "mu_z": mz.entries(),
        "mu_x_max_abs_entry": mx.max_abs_entry(),
        "mu_z_max_abs_entry": mz.max_abs_entry(),
        "mu_phi_gain": 1.0 / m.theta().cos(),
        "delta": [d.d_plus, d.d_minus],
    }))
}

pub fn invert(cfg: &RunConfig) -> Result<String, CliError> {
    let s = cfg.state.to_state()?;
    let m = cfg.marker()?;
    let eps = cfg.threshold();
    let unmarked = is_unmarked(&m, cfg);
    let mut v = header_with_marker("invert", cfg, &s, &m);
    v["method"] = json!(if unmarked {
        "unmarked-limit"
    } else {
        "kernel-inversion"
    });
    if !unmarked {
        v["kernels"] = kernels(&m, cfg)?;
    }
    match cfg.mode {
        Mode::Discrete => {
            let q = if unmarked {
                quasi_joint_unmarked(&s)
            } else {
                invert_joint_discrete(&operational_joint_discrete(&s, &m), &m, eps)?
            };
            if cfg.format == Format::Csv {
                return Ok(report::table_csv(&q));
            }
            v["joint"] = report::table(&q);
            if !unmarked {
                let closed = quasi_joint_closed_form(&s, &m, eps)?;
                v["closed_form_max_abs_diff"] = json!(q.max_abs_diff(&closed));
            }
            v["marginal_x"] = report::binary(&marginal_x(&q));
            v["marginal_z"] = report::binary(&marginal_z(&q));
            v["exact_x"] = report::binary(&exact_interference_distribution(&s));
            v["exact_z"] = report::binary(&exact_path_distribution(&s));
            v["negativity"] = to_value(&q.negativity());
            v["p_min_unmarked"] = json!(p_min_discrete(&s));
        }
        Mode::Phase => {
            let q = if unmarked {
                quasi_phase_unmarked(&s)
            } else {
                invert_joint_phase(&operational_joint_phase(&s, &m), &m, eps)?
            };
            if cfg.format == Format::Csv {
                return Ok(report::slices_csv(&q, cfg.phi_points));
            }
            v["joint"] = report::slices(&q, grid_points(cfg));
            if !unmarked {
                let closed = quasi_phase_closed_form(&s, &m, eps)?;
                v["closed_form_max_abs_coeff_diff"] = json!(q.max_abs_coeff_diff(&closed));
            }
            v["marginal_phase"] = report::density(&marginal_phase(&q));
            v["marginal_z"] = report::binary(&marginal_z_of_phase(&q));
            v["exact_phase"] = report::density(&exact_phase_distribution(&s));
            v["exact_z"] = report::binary(&exact_path_distribution(&s));
            v["negativity"] = to_value(&q.negativity());
            v["p_min_unmarked"] = json!(p_min_phase(&s));
        }
    }
    report::render(v)
}

fn write_shots<F>(cfg: &RunConfig, write: F) -> Result<(), CliError>
where
    F: FnOnce(BufWriter<File>) -> std::io::Result<()>,
{
    if let Some(path) = &cfg.shots {
        write(BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

pub fn sample(cfg: &RunConfig) -> Result<String, CliError> {
    let s = cfg.state.to_state()?;
    let m = cfg.marker()?;
    let eps = cfg.threshold();
    let mut v = header_with_marker("sample", cfg, &s, &m);
    match cfg.mode {
        Mode::Discrete => {
            let counts = sample_discrete(&operational_joint_discrete(&s, &m), cfg.n, cfg.seed)?;
            write_shots(cfg, |w| counts.write_csv(w))?;
            if cfg.format == Format::Csv {
                let mut out = Vec::new();
                counts.write_csv(&mut out)?;
                return Ok(String::from_utf8(out).expect("CSV is ASCII"));
            }
            v["counts"] = counts
                .frequencies()
                .entries()
                .iter()
                .map(|&(x, z, _)| json!({ "x": x, "z": z, "count": counts.get(x, z) }))
                .collect();
            match estimate_quasi_joint(&counts, &m, eps) {
                Ok(est) => {
                    let rows = est.rows();
                    v["estimate"] = rows
                        .iter()
                        .map(
                            |&(x, z, q, se)| json!({ "x": x, "z": z, "value": q, "std_error": se }),
                        )
                        .collect();
                    let &(x, z, q, se) = rows
                        .iter()
                        .min_by(|a, b| a.2.total_cmp(&b.2))
                        .expect("four rows");
                    v["minimum"] = json!({ "x": x, "z": z, "value": q, "std_error": se });
                }
                Err(e) => {
                    v["estimate"] = Value::Null;
                    v["estimate_error"] = json!(e.to_string());
                }
            }
        }
        Mode::Phase => {
            let shots = sample_phase(&operational_joint_phase(&s, &m), cfg.n, cfg.seed)?;
            write_shots(cfg, |w| shots.write_csv(w))?;
            if cfg.format == Format::Csv {
                let mut out = Vec::new();
                shots.write_csv(&mut out)?;
                return Ok(String::from_utf8(out).expect("CSV is ASCII"));
            }
            let empirical = empirical_phase_joint(&shots)?;
            v["empirical"] = report::slices(&empirical, None);
            match estimate_quasi_phase(&shots, &m, eps) {
                Ok(q) => {
                    v["estimate"] = report::slices(&q, None);
                    v["negativity"] = to_value(&q.negativity());
                }
                Err(e) => {
                    v["estimate"] = Value::Null;
                    v["estimate_error"] = json!(e.to_string());
                }
            }
        }
    }
    report::render(v)
}

pub fn scan(cfg: &RunConfig) -> Result<String, CliError> {
    let s = cfg.state.to_state()?;
    let thetas = cfg.grid_radians(&cfg.theta_grid);
    let varthetas = cfg.grid_radians(&cfg.vartheta_grid);
    let grid = scan_negativity(&s, &thetas, &varthetas, cfg.threshold())?;
    if cfg.format == Format::Csv {
        let mut out = Vec::new();
        grid.write_csv(&mut out)?;
        return Ok(String::from_utf8(out).expect("CSV is ASCII"));
    }
    let mut v = header("scan", cfg, &s);
    v["cells"] = to_value(&grid.cells);
    v["global_min"] = match grid.global_min() {
        Some((value, theta, vartheta)) => {
            json!({ "value": value, "theta": theta, "vartheta": vartheta })
        }
        None => Value::Null,
    };
    report::render(v)
}
