//! Path marking, spin analysis and the operational joint statistics.
//!
//! Crossing the upper aperture rotates the spin from `|→⟩` to
//! `cos θ|→⟩ + sin θ|↑⟩`; the lower aperture leaves it alone. The spin is
//! then read out in the basis `|z̃ = +1⟩ = cos ϑ|→⟩ + sin ϑ|↑⟩`,
//! `|z̃ = −1⟩ = −sin ϑ|→⟩ + cos ϑ|↑⟩`.
//!
//! [`CompositeState`] amplitudes are always ordered
//! `(upper,→), (upper,↑), (lower,→), (lower,↑)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{sign, slot, Scalar, SIGNS};
use crate::statistics::{
    interference_vector, phase_vector, BinaryDistribution, PhaseDensity, PureState,
};

/// Marking angle `θ` and analyzer angle `ϑ`, radians.
///
/// `θ` must lie in `[0, π/2]`. `ϑ` is reduced into `[0, π)`: shifting it by
/// `π` flips the sign of both analyzer vectors and leaves every probability
/// unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkerConfig<T> {
    theta: T,
    vartheta: T,
}

impl<T: Scalar> MarkerConfig<T> {
    pub fn new(theta: T, vartheta: T) -> Result<Self> {
        if !theta.is_finite() || !vartheta.is_finite() {
            return Err(Error::InvalidConfig("angles must be finite".into()));
        }
        let tol = T::invariant_tol();
        let half_pi = T::FRAC_PI_2();
        if theta < -tol || theta > half_pi + tol {
            return Err(Error::InvalidConfig(format!(
                "marking angle θ = {theta} outside [0, π/2]"
            )));
        }
        let theta = theta.max(T::zero()).min(half_pi);
        let pi = T::PI();
        let mut vartheta = vartheta % pi;
        if vartheta < T::zero() {
            vartheta = vartheta + pi;
        }
        if vartheta >= pi {
            vartheta = T::zero();
        }
        Ok(Self { theta, vartheta })
    }

    pub fn from_degrees(theta: T, vartheta: T) -> Result<Self> {
        Self::new(theta.to_radians(), vartheta.to_radians())
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn vartheta(&self) -> T {
        self.vartheta
    }
}

/// The six `γ` coefficients, stored as `[γ(+1), γ(−1)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaCoefficients<T> {
    pub g0_plus: T,
    pub g0_minus: T,
    pub gx_plus: T,
    pub gx_minus: T,
    pub gz_plus: T,
    pub gz_minus: T,
}

impl<T: Scalar> GammaCoefficients<T> {
    pub fn g0(&self, z: i8) -> T {
        if z >= 0 {
            self.g0_plus
        } else {
            self.g0_minus
        }
    }

    pub fn gx(&self, z: i8) -> T {
        if z >= 0 {
            self.gx_plus
        } else {
            self.gx_minus
        }
    }

    pub fn gz(&self, z: i8) -> T {
        if z >= 0 {
            self.gz_plus
        } else {
            self.gz_minus
        }
    }
}

pub fn gamma_coefficients<T: Scalar>(config: &MarkerConfig<T>) -> GammaCoefficients<T> {
    let (t, v) = (config.theta, config.vartheta);
    let h = T::half();
    let d = v - t;
    GammaCoefficients {
        g0_plus: h * (d.cos().powi(2) + v.cos().powi(2)),
        g0_minus: h * (d.sin().powi(2) + v.sin().powi(2)),
        gx_plus: d.cos() * v.cos(),
        gx_minus: d.sin() * v.sin(),
        gz_plus: h * (d.cos().powi(2) - v.cos().powi(2)),
        gz_minus: h * (-d.sin().powi(2) + v.sin().powi(2)),
    }
}

/// Path ⊗ spin state after marking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeState<T> {
    pub amplitudes: [Complex<T>; 4],
}

impl<T: Scalar> CompositeState<T> {
    pub fn norm_sqr(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// `⟨spin|⟨path|ψ̃⟩` for a path bra and a real spin bra.
    pub fn project(&self, path: &[Complex<T>; 2], spin: &[T; 2]) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (p, pv) in path.iter().enumerate() {
            for (s, sv) in spin.iter().enumerate() {
                acc = acc + pv.conj() * self.amplitudes[2 * p + s] * *sv;
            }
        }
        acc
    }
}

pub fn entangled_state<T: Scalar>(state: &PureState<T>, theta: T) -> CompositeState<T> {
    let a = state.alpha();
    let zero = Complex::new(T::zero(), T::zero());
    CompositeState {
        amplitudes: [a * theta.cos(), a * theta.sin(), state.beta(), zero],
    }
}

/// Real spin vectors `|z̃ = ±1⟩` in the `(→, ↑)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerStates<T> {
    pub plus: [T; 2],
    pub minus: [T; 2],
}

impl<T: Scalar> AnalyzerStates<T> {
    pub fn get(&self, z: i8) -> [T; 2] {
        if z >= 0 {
            self.plus
        } else {
            self.minus
        }
    }
}

pub fn analyzer_states<T: Scalar>(vartheta: T) -> AnalyzerStates<T> {
    let (s, c) = vartheta.sin_cos();
    AnalyzerStates {
        plus: [c, s],
        minus: [-s, c],
    }
}

/// Whether a joint table is a measured distribution or a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JointKind {
    Operational,
    Quasi,
}

/// Table `v(x, z)` over `{+1, −1}²`, stored as `values[slot(x)][slot(z)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteJoint<T> {
    values: [[T; 2]; 2],
    kind: JointKind,
}

impl<T: Scalar> DiscreteJoint<T> {
    /// Checks unit total and, for operational tables, nonnegativity.
    pub fn new(values: [[T; 2]; 2], kind: JointKind) -> Result<Self> {
        let tol = T::invariant_tol();
        let total = values.iter().flatten().fold(T::zero(), |a, &v| a + v);
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("joint entries must be finite".into()));
        }
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!(
                "joint sums to {total}, expected 1"
            )));
        }
        if kind == JointKind::Operational && values.iter().flatten().any(|&v| v < -tol) {
            return Err(Error::InvalidState(
                "operational joint has a negative entry".into(),
            ));
        }
        Ok(Self { values, kind })
    }

    pub(crate) fn from_fn(kind: JointKind, mut f: impl FnMut(i8, i8) -> T) -> Self {
        let mut values = [[T::zero(); 2]; 2];
        for x in SIGNS {
            for z in SIGNS {
                values[slot(x)][slot(z)] = f(x, z);
            }
        }
        Self { values, kind }
    }

    pub fn get(&self, x: i8, z: i8) -> T {
        self.values[slot(x)][slot(z)]
    }

    pub fn values(&self) -> [[T; 2]; 2] {
        self.values
    }

    pub fn kind(&self) -> JointKind {
        self.kind
    }

    pub fn total(&self) -> T {
        self.values.iter().flatten().fold(T::zero(), |a, &v| a + v)
    }

    /// Entries in `(x, z)` order `(+,+), (+,−), (−,+), (−,−)`.
    pub fn entries(&self) -> [(i8, i8, T); 4] {
        [
            (1, 1, self.get(1, 1)),
            (1, -1, self.get(1, -1)),
            (-1, 1, self.get(-1, 1)),
            (-1, -1, self.get(-1, -1)),
        ]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }
}

/// Per-`z` first-harmonic densities in `φ`, stored as `[z = +1, z = −1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseJoint<T> {
    slices: [PhaseDensity<T>; 2],
    kind: JointKind,
}

impl<T: Scalar> PhaseJoint<T> {
    pub fn new(plus: PhaseDensity<T>, minus: PhaseDensity<T>, kind: JointKind) -> Result<Self> {
        let tol = T::invariant_tol();
        let total = plus.integral() + minus.integral();
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!(
                "phase joint integrates to {total}, expected 1"
            )));
        }
        if kind == JointKind::Operational
            && !(plus.is_nonnegative(tol) && minus.is_nonnegative(tol))
        {
            return Err(Error::InvalidState(
                "operational phase joint has a negative slice".into(),
            ));
        }
        Ok(Self {
            slices: [plus, minus],
            kind,
        })
    }

    pub(crate) fn from_slices(slices: [PhaseDensity<T>; 2], kind: JointKind) -> Self {
        Self { slices, kind }
    }

    pub fn slice(&self, z: i8) -> PhaseDensity<T> {
        self.slices[slot(z)]
    }

    pub fn kind(&self) -> JointKind {
        self.kind
    }

    pub fn evaluate(&self, phi: T, z: i8) -> T {
        self.slice(z).evaluate(phi)
    }

    pub fn max_abs_coeff_diff(&self, other: &Self) -> T {
        self.slices
            .iter()
            .zip(other.slices.iter())
            .flat_map(|(a, b)| {
                [
                    (a.c0 - b.c0).abs(),
                    (a.c_cos - b.c_cos).abs(),
                    (a.c_sin - b.c_sin).abs(),
                ]
            })
            .fold(T::zero(), |m, d| m.max(d))
    }
}

/// `P̃(x, z) = ½[γ0(z) + xγX(z)⟨X⟩ + zγZ(z)⟨Z⟩]`.
pub fn operational_joint_discrete<T: Scalar>(
    state: &PureState<T>,
    config: &MarkerConfig<T>,
) -> DiscreteJoint<T> {
    let g = gamma_coefficients(config);
    let b = state.bloch();
    DiscreteJoint::from_fn(JointKind::Operational, |x, z| {
        T::half() * (g.g0(z) + sign::<T>(x) * g.gx(z) * b.ex + sign::<T>(z) * g.gz(z) * b.ez)
    })
}

/// `P̃(φ, z) = (1/2π)[γ0(z) + γX(z)(cos φ⟨X⟩ + sin φ⟨Y⟩) + zγZ(z)⟨Z⟩]`.
pub fn operational_joint_phase<T: Scalar>(
    state: &PureState<T>,
    config: &MarkerConfig<T>,
) -> PhaseJoint<T> {
    let g = gamma_coefficients(config);
    let b = state.bloch();
    let k = T::one() / T::TAU();
    let slice = |z: i8| {
        PhaseDensity::new(
            (g.g0(z) + sign::<T>(z) * g.gz(z) * b.ez) * k,
            g.gx(z) * b.ex * k,
            g.gx(z) * b.ey * k,
        )
    };
    PhaseJoint::from_slices([slice(1), slice(-1)], JointKind::Operational)
}

/// Born-rule joint `|⟨z̃|⟨x|ψ̃⟩|²`, computed by projecting the composite state.
///
/// Independent of the `γ` closed forms; the slow reference path.
pub fn born_joint_discrete<T: Scalar>(
    state: &PureState<T>,
    config: &MarkerConfig<T>,
) -> DiscreteJoint<T> {
    let psi = entangled_state(state, config.theta());
    let analyzer = analyzer_states(config.vartheta());
    DiscreteJoint::from_fn(JointKind::Operational, |x, z| {
        psi.project(&interference_vector(x), &analyzer.get(z))
            .norm_sqr()
    })
}

/// Born-rule phase density `|⟨z̃|⟨φ|ψ̃⟩|²` at one point.
pub fn born_joint_phase<T: Scalar>(
    state: &PureState<T>,
    config: &MarkerConfig<T>,
    phi: T,
    z: i8,
) -> T {
    let psi = entangled_state(state, config.theta());
    let analyzer = analyzer_states(config.vartheta());
    psi.project(&phase_vector(phi), &analyzer.get(z)).norm_sqr()
}

pub fn marginal_x<T: Scalar>(j: &DiscreteJoint<T>) -> BinaryDistribution<T> {
    BinaryDistribution {
        p_plus: j.get(1, 1) + j.get(1, -1),
        p_minus: j.get(-1, 1) + j.get(-1, -1),
    }
}

pub fn marginal_z<T: Scalar>(j: &DiscreteJoint<T>) -> BinaryDistribution<T> {
    BinaryDistribution {
        p_plus: j.get(1, 1) + j.get(-1, 1),
        p_minus: j.get(1, -1) + j.get(-1, -1),
    }
}

pub fn marginal_phase<T: Scalar>(j: &PhaseJoint<T>) -> PhaseDensity<T> {
    j.slice(1).add(&j.slice(-1))
}

pub fn marginal_z_of_phase<T: Scalar>(j: &PhaseJoint<T>) -> BinaryDistribution<T> {
    BinaryDistribution {
        p_plus: j.slice(1).integral(),
        p_minus: j.slice(-1).integral(),
    }
}

/// Operational fringe marginal `½(1 + x cos θ⟨X⟩)`.
pub fn operational_marginal_x<T: Scalar>(state: &PureState<T>, theta: T) -> BinaryDistribution<T> {
    BinaryDistribution::from_mean(theta.cos() * state.bloch().ex)
}

/// Operational path marginal `γ0(z) + zγZ(z)⟨Z⟩`.
pub fn operational_marginal_z<T: Scalar>(
    state: &PureState<T>,
    config: &MarkerConfig<T>,
) -> BinaryDistribution<T> {
    let g = gamma_coefficients(config);
    let ez = state.bloch().ez;
    BinaryDistribution {
        p_plus: g.g0_plus + g.gz_plus * ez,
        p_minus: g.g0_minus - g.gz_minus * ez,
    }
}

/// Operational phase marginal `(1/2π)[1 + cos θ(cos φ⟨X⟩ + sin φ⟨Y⟩)]`.
pub fn operational_marginal_phase<T: Scalar>(state: &PureState<T>, theta: T) -> PhaseDensity<T> {
    let b = state.bloch();
    let k = T::one() / T::TAU();
    let c = theta.cos();
    PhaseDensity::new(k, c * b.ex * k, c * b.ey * k)
}
