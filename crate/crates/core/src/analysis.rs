//! Negativity of reconstructed distributions: closed-form minima, direct
//! minima of arbitrary joints, and `(θ, ϑ)` scans.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sci;
use crate::interferometer::{DiscreteJoint, MarkerConfig, PhaseJoint};
use crate::inversion::{quasi_joint_closed_form, SingularityThreshold};
use crate::scalar::{Scalar, SIGNS};
use crate::statistics::{PhaseDensity, PureState};

/// `¼(1 − |⟨Z⟩| − |⟨X⟩|)`, the minimum of the unmarked discrete quasi joint.
pub fn p_min_discrete<T: Scalar>(state: &PureState<T>) -> T {
    let b = state.bloch();
    T::lit(0.25) * (T::one() - b.ez.abs() - b.ex.abs())
}

/// `(1/4π)(1 − |⟨Z⟩| − √(⟨X⟩² + ⟨Y⟩²))`, the minimum of the unmarked phase
/// quasi joint.
pub fn p_min_phase<T: Scalar>(state: &PureState<T>) -> T {
    let b = state.bloch();
    (T::one() - b.ez.abs() - b.coherence()) / (T::lit(2.0) * T::TAU())
}

/// Where a minimum was found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Argmin<T> {
    Discrete { x: i8, z: i8 },
    Phase { phi: T, z: i8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport<T> {
    pub min_value: T,
    pub argmin: Argmin<T>,
    /// Sum (discrete) or integral (phase) of the magnitude of the negative
    /// part. A standard nonclassicality measure added on top of the minimum.
    pub total_negativity: T,
}

pub trait Negativity<T: Scalar> {
    fn negativity(&self) -> NegativityReport<T>;
}

pub fn negativity_of<T: Scalar, J: Negativity<T> + ?Sized>(j: &J) -> NegativityReport<T> {
    j.negativity()
}

impl<T: Scalar> Negativity<T> for DiscreteJoint<T> {
    fn negativity(&self) -> NegativityReport<T> {
        let mut best = (T::infinity(), 1, 1);
        let mut total = T::zero();
        for (x, z, v) in self.entries() {
            if v < best.0 {
                best = (v, x, z);
            }
            if v < T::zero() {
                total = total - v;
            }
        }
        NegativityReport {
            min_value: best.0,
            argmin: Argmin::Discrete {
                x: best.1,
                z: best.2,
            },
            total_negativity: total,
        }
    }
}

impl<T: Scalar> Negativity<T> for PhaseJoint<T> {
    fn negativity(&self) -> NegativityReport<T> {
        let mut best: Option<(T, T, i8)> = None;
        let mut total = T::zero();
        for z in SIGNS {
            let d = self.slice(z);
            let m = d.min_value();
            if best.is_none_or(|b| m < b.0) {
                best = Some((m, d.argmin(), z));
            }
            total = total + negative_part_integral(&d);
        }
        let (min_value, phi, z) = best.expect("two slices");
        NegativityReport {
            min_value,
            argmin: Argmin::Phase { phi, z },
            total_negativity: total,
        }
    }
}

/// `∫₀^{2π} max(0, −f(φ)) dφ` for `f = c0 + r cos(φ − φ₀)`, in closed form.
///
/// With `u₀ = arccos(−c0/r)` the density is negative on an arc of length
/// `2(π − u₀)` and the integral there is `2r sin u₀ − 2c0(π − u₀)`.
pub fn negative_part_integral<T: Scalar>(d: &PhaseDensity<T>) -> T {
    let a = d.c0;
    let r = d.amplitude();
    if a >= r {
        return T::zero();
    }
    if a <= -r {
        return -T::TAU() * a;
    }
    let u0 = (-a / r).acos();
    T::two() * r * u0.sin() - T::two() * a * (T::PI() - u0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellFlag {
    Ok,
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanCell<T> {
    pub theta: T,
    pub vartheta: T,
    /// Minimum entry of the reconstructed joint; `None` on singular cells.
    pub min_value: Option<T>,
    pub flag: CellFlag,
}

/// Minimum reconstructed entry over a `θ × ϑ` grid, `θ`-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid<T> {
    pub thetas: Vec<T>,
    pub varthetas: Vec<T>,
    pub cells: Vec<ScanCell<T>>,
}

impl<T: Scalar> ScanGrid<T> {
    pub fn cell(&self, i_theta: usize, i_vartheta: usize) -> &ScanCell<T> {
        &self.cells[i_theta * self.varthetas.len() + i_vartheta]
    }

    /// Smallest value over all unflagged cells.
    pub fn global_min(&self) -> Option<(T, T, T)> {
        self.cells
            .iter()
            .filter_map(|c| c.min_value.map(|m| (m, c.theta, c.vartheta)))
            .fold(None, |acc: Option<(T, T, T)>, c| match acc {
                Some(a) if a.0 <= c.0 => Some(a),
                _ => Some(c),
            })
    }

    /// Writes `theta,vartheta,min_value,flag`; singular cells leave
    /// `min_value` empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "theta,vartheta,min_value,flag")?;
        for c in &self.cells {
            let value = c
                .min_value
                .map(|v| sci(v.to_f64().unwrap()))
                .unwrap_or_default();
            let flag = match c.flag {
                CellFlag::Ok => "ok",
                CellFlag::Singular => "singular",
            };
            writeln!(
                w,
                "{},{},{},{}",
                sci(c.theta.to_f64().unwrap()),
                sci(c.vartheta.to_f64().unwrap()),
                value,
                flag
            )?;
        }
        Ok(())
    }
}

/// Evaluates the closed-form reconstructed joint on every grid cell.
/// Cells where a kernel denominator vanishes are flagged, not errors.
pub fn scan_negativity<T: Scalar>(
    state: &PureState<T>,
    theta_grid: &[T],
    vartheta_grid: &[T],
    eps: SingularityThreshold<T>,
) -> Result<ScanGrid<T>> {
    let mut configs = Vec::with_capacity(theta_grid.len() * vartheta_grid.len());
    for &t in theta_grid {
        for &v in vartheta_grid {
            configs.push((t, v, MarkerConfig::new(t, v)?));
        }
    }
    let cells = configs
        .par_iter()
        .map(
            |&(theta, vartheta, config)| match quasi_joint_closed_form(state, &config, eps) {
                Ok(q) => Ok(ScanCell {
                    theta,
                    vartheta,
                    min_value: Some(q.negativity().min_value),
                    flag: CellFlag::Ok,
                }),
                Err(Error::SingularMarking { .. } | Error::SingularAnalyzer { .. }) => {
                    Ok(ScanCell {
                        theta,
                        vartheta,
                        min_value: None,
                        flag: CellFlag::Singular,
                    })
                }
                Err(e) => Err(e),
            },
        )
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanGrid {
        thetas: theta_grid.to_vec(),
        varthetas: vartheta_grid.to_vec(),
        cells,
    })
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace<T: Scalar>(start: T, stop: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / T::from_usize(n - 1).unwrap();
            (0..n)
                .map(|k| {
                    if k == n - 1 {
                        stop
                    } else {
                        start + step * T::from_usize(k).unwrap()
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::operational_joint_discrete;
    use crate::interferometer::operational_joint_phase;
    use crate::inversion::{quasi_joint_unmarked, quasi_phase_unmarked};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_8, PI, TAU};

    fn eps() -> SingularityThreshold<f64> {
        SingularityThreshold::default()
    }

    #[test]
    fn p_min_examples() {
        let plus = PureState::from_parts(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0).unwrap();
        assert_abs_diff_eq!(p_min_discrete(&plus), 0.0, epsilon = 1e-15);
        assert_eq!(p_min_discrete(&PureState::<f64>::upper()), 0.0);
        let s = PureState::real_angle(FRAC_PI_8);
        assert_abs_diff_eq!(
            p_min_discrete(&s),
            (1.0 - 2f64.sqrt()) / 4.0,
            epsilon = 1e-15
        );

        let y = PureState::from_parts(FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2).unwrap();
        assert_abs_diff_eq!(p_min_phase(&y), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            p_min_phase(&s),
            (1.0 - 2f64.sqrt()) / (4.0 * PI),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(p_min_phase(&s), -0.0329621, epsilon = 1e-7);
        assert_eq!(p_min_phase(&PureState::<f64>::upper()), 0.0);
    }

    #[test]
    fn negativity_examples() {
        let s = PureState::real_angle(FRAC_PI_8);
        let c = MarkerConfig::new(0.7, 1.9).unwrap();
        let r = operational_joint_discrete(&s, &c).negativity();
        assert!(r.min_value >= -1e-12);
        assert_eq!(r.total_negativity, 0.0);
        let r = negativity_of(&operational_joint_phase(&s, &c));
        assert!(r.min_value >= -1e-12);
        assert_eq!(r.total_negativity, 0.0);

        let r = quasi_joint_unmarked(&s).negativity();
        assert_abs_diff_eq!(r.min_value, p_min_discrete(&s), epsilon = 1e-15);
        assert_eq!(r.argmin, Argmin::Discrete { x: -1, z: -1 });
        assert_abs_diff_eq!(r.total_negativity, -p_min_discrete(&s), epsilon = 1e-15);

        let r = quasi_phase_unmarked(&s).negativity();
        assert_abs_diff_eq!(
            r.min_value,
            (1.0 - 2f64.sqrt()) / (4.0 * PI),
            epsilon = 1e-15
        );
        let Argmin::Phase { phi, z } = r.argmin else {
            panic!()
        };
        assert_eq!(z, -1);
        // ⟨X⟩ > 0, ⟨Y⟩ = 0: minimum sits at φ = π
        assert_abs_diff_eq!(phi, PI, epsilon = 1e-15);
    }

    /// Periodic trapezoid of the negative part, independent of the closed form.
    fn trapezoid_negative(d: &PhaseDensity<f64>, points: usize) -> f64 {
        let h = TAU / points as f64;
        (0..points)
            .map(|k| (-d.evaluate(k as f64 * h)).max(0.0))
            .sum::<f64>()
            * h
    }

    #[test]
    fn negative_part_matches_quadrature() {
        for d in [
            PhaseDensity::new(0.0, 1.0, 0.0),
            PhaseDensity::new(0.1, -0.3, 0.2),
            PhaseDensity::new(-0.05, 0.02, 0.01),
            PhaseDensity::new(-0.5, 0.02, 0.01),
            PhaseDensity::new(0.5, 0.2, 0.1),
        ] {
            let exact = negative_part_integral(&d);
            let quad = trapezoid_negative(&d, 1024);
            let fine = trapezoid_negative(&d, 1 << 20);
            assert!((exact - fine).abs() < 1e-10, "{d:?}: {exact} vs {fine}");
            assert!((exact - quad).abs() < 1e-5, "{d:?}: {exact} vs {quad}");
        }
    }

    #[test]
    fn scan_examples() {
        let s = PureState::real_angle(FRAC_PI_8);
        let thetas = linspace(0.0, 0.2, 11);
        let varthetas = linspace(0.1, 3.0, 13);
        let g = scan_negativity(&s, &thetas, &varthetas, eps()).unwrap();
        assert_eq!(g.cells.len(), 11 * 13);
        let (m, ..) = g.global_min().unwrap();
        assert!(m <= (1.0 - 2f64.sqrt()) / 4.0 + 1e-12);
        assert_abs_diff_eq!(
            g.cell(0, 0).min_value.unwrap(),
            (1.0 - 2f64.sqrt()) / 4.0,
            epsilon = 1e-15
        );

        let g = scan_negativity(
            &PureState::upper(),
            &linspace(0.0, 1.5, 16),
            &linspace(0.0, 3.1, 32),
            eps(),
        )
        .unwrap();
        assert!(g.cells.iter().filter_map(|c| c.min_value).all(|m| m >= 0.0));

        // 2ϑ = θ and θ = π/2 are singular
        let g = scan_negativity(&s, &[0.6, FRAC_PI_2], &[0.3, 1.0], eps()).unwrap();
        assert_eq!(g.cell(0, 0).flag, CellFlag::Singular);
        assert_eq!(g.cell(0, 0).min_value, None);
        assert_eq!(g.cell(0, 1).flag, CellFlag::Ok);
        assert_eq!(g.cell(1, 1).flag, CellFlag::Singular);

        assert!(scan_negativity(&s, &[2.0], &[0.3], eps()).is_err());
    }

    #[test]
    fn scan_csv_layout() {
        let s = PureState::real_angle(FRAC_PI_8);
        let g = scan_negativity(&s, &[0.6], &[0.3, 1.0], eps()).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "theta,vartheta,min_value,flag");
        assert!(lines[1].ends_with(",,singular"));
        assert!(lines[2].ends_with(",ok"));
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(linspace(2.0, 1.0, 1), vec![2.0]);
        assert!(linspace::<f64>(0.0, 1.0, 0).is_empty());
    }
}
