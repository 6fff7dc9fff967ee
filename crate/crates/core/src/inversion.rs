//! Inversion kernels that undo the instrumental blurring of the joint
//! measurement, and the closed forms of the reconstructed quasi-distributions.
//!
//! Marking contracts the fringe by `cos θ` and the analyzer mixes the path
//! outcomes through the response `R_Z`. Both are 2×2 (or first-harmonic)
//! linear maps, so the exact statistics are recovered by their left
//! inverses `μ_X`, `μ_Z`, `μ_Φ`. Applied to the joint table the same
//! kernels produce a normalized distribution whose marginals are exact but
//! whose entries can be negative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interferometer::{DiscreteJoint, JointKind, MarkerConfig, PhaseJoint};
use crate::scalar::{sign, slot, Scalar, SIGNS};
use crate::statistics::{BinaryDistribution, PhaseDensity, PureState};

/// 2×2 real matrix indexed `[slot(a)][slot(a′)]`.
pub type Matrix2<T> = [[T; 2]; 2];

/// Smallest kernel denominator magnitude accepted as invertible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularityThreshold<T>(pub T);

impl<T: Scalar> Default for SingularityThreshold<T> {
    fn default() -> Self {
        Self(T::default_singular_eps())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelLabel {
    #[serde(rename = "mu_X")]
    MuX,
    #[serde(rename = "mu_Z")]
    MuZ,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionMatrix<T> {
    entries: Matrix2<T>,
    label: KernelLabel,
}

impl<T: Scalar> InversionMatrix<T> {
    pub fn get(&self, a: i8, a_prime: i8) -> T {
        self.entries[slot(a)][slot(a_prime)]
    }

    pub fn entries(&self) -> Matrix2<T> {
        self.entries
    }

    pub fn label(&self) -> KernelLabel {
        self.label
    }

    /// `Σ_a m(a, a′)` for `a′ = +1, −1`.
    pub fn column_sums(&self) -> [T; 2] {
        [
            self.entries[0][0] + self.entries[1][0],
            self.entries[0][1] + self.entries[1][1],
        ]
    }

    /// Largest entry magnitude; grows like the inverse of the vanishing
    /// denominator and serves as a conditioning diagnostic.
    pub fn max_abs_entry(&self) -> T {
        self.entries
            .iter()
            .flatten()
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn apply(&self, p: &[T; 2]) -> [T; 2] {
        mat_vec(&self.entries, p)
    }

    /// Product `self · forward`.
    pub fn compose(&self, forward: &Matrix2<T>) -> Matrix2<T> {
        mat_mul(&self.entries, forward)
    }
}

pub fn mat_mul<T: Scalar>(a: &Matrix2<T>, b: &Matrix2<T>) -> Matrix2<T> {
    let mut out = [[T::zero(); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][k] + a[i][1] * b[1][k];
        }
    }
    out
}

pub fn mat_vec<T: Scalar>(m: &Matrix2<T>, v: &[T; 2]) -> [T; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

/// Forward fringe response `R_X(x′, x) = ½(1 + x′x cos θ)`.
pub fn x_response_matrix<T: Scalar>(theta: T) -> Matrix2<T> {
    let c = theta.cos();
    let mut m = [[T::zero(); 2]; 2];
    for xp in SIGNS {
        for x in SIGNS {
            m[slot(xp)][slot(x)] = T::half() * (T::one() + sign::<T>(xp) * sign::<T>(x) * c);
        }
    }
    m
}

/// Forward path response `R_Z(z′, z)`: probability of analyzer outcome `z′`
/// for a particle that crossed aperture `z`.
pub fn z_response_matrix<T: Scalar>(config: &MarkerConfig<T>) -> Matrix2<T> {
    let (t, v) = (config.theta(), config.vartheta());
    let d = v - t;
    [
        [d.cos().powi(2), v.cos().powi(2)],
        [d.sin().powi(2), v.sin().powi(2)],
    ]
}

fn check_marking<T: Scalar>(theta: T, eps: SingularityThreshold<T>) -> Result<T> {
    let c = theta.cos();
    if c.abs() <= eps.0 {
        return Err(Error::SingularMarking {
            cos_theta: c.to_f64().unwrap_or(f64::NAN),
            threshold: eps.0.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(c)
}

fn check_analyzer<T: Scalar>(
    which: &'static str,
    value: T,
    eps: SingularityThreshold<T>,
) -> Result<T> {
    if value.abs() <= eps.0 {
        return Err(Error::SingularAnalyzer {
            which,
            value: value.to_f64().unwrap_or(f64::NAN),
            threshold: eps.0.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(value)
}

/// `μ_X(x, x′) = ½(1 + xx′/cos θ)`.
pub fn mu_x_matrix<T: Scalar>(
    theta: T,
    eps: SingularityThreshold<T>,
) -> Result<InversionMatrix<T>> {
    let c = check_marking(theta, eps)?;
    let mut entries = [[T::zero(); 2]; 2];
    for x in SIGNS {
        for xp in SIGNS {
            entries[slot(x)][slot(xp)] = T::half() * (T::one() + sign::<T>(x) * sign::<T>(xp) / c);
        }
    }
    Ok(InversionMatrix {
        entries,
        label: KernelLabel::MuX,
    })
}

/// Path kernel with common denominator `sin θ sin(2ϑ − θ)`.
pub fn mu_z_matrix<T: Scalar>(
    config: &MarkerConfig<T>,
    eps: SingularityThreshold<T>,
) -> Result<InversionMatrix<T>> {
    let (t, v) = (config.theta(), config.vartheta());
    let den = check_analyzer("sin θ·sin(2ϑ − θ)", t.sin() * (T::two() * v - t).sin(), eps)?;
    let d = v - t;
    let entries = [
        [v.sin().powi(2) / den, -v.cos().powi(2) / den],
        [-d.sin().powi(2) / den, d.cos().powi(2) / den],
    ];
    Ok(InversionMatrix {
        entries,
        label: KernelLabel::MuZ,
    })
}

/// Applies `μ_X` to a fringe marginal. Output sums to one; for inputs that
/// are not operational marginals of a state its entries may leave `[0, 1]`.
pub fn invert_marginal_x<T: Scalar>(
    p: &BinaryDistribution<T>,
    theta: T,
    eps: SingularityThreshold<T>,
) -> Result<BinaryDistribution<T>> {
    let [p_plus, p_minus] = mu_x_matrix(theta, eps)?.apply(&p.as_array());
    Ok(BinaryDistribution { p_plus, p_minus })
}

/// Applies `μ_Z` to a path marginal. Same caveat as [`invert_marginal_x`].
pub fn invert_marginal_z<T: Scalar>(
    p: &BinaryDistribution<T>,
    config: &MarkerConfig<T>,
    eps: SingularityThreshold<T>,
) -> Result<BinaryDistribution<T>> {
    let [p_plus, p_minus] = mu_z_matrix(config, eps)?.apply(&p.as_array());
    Ok(BinaryDistribution { p_plus, p_minus })
}

/// `P(x, z) = Σ μ_X(x, x′) μ_Z(z, z′) P̃(x′, z′)`.
pub fn invert_joint_discrete<T: Scalar>(
    j: &DiscreteJoint<T>,
    config: &MarkerConfig<T>,
    eps: SingularityThreshold<T>,
) -> Result<DiscreteJoint<T>> {
    let mx = mu_x_matrix(config.theta(), eps)?;
    let mz = mu_z_matrix(config, eps)?;
    Ok(DiscreteJoint::from_fn(JointKind::Quasi, |x, z| {
        let mut acc = T::zero();
        for xp in SIGNS {
            for zp in SIGNS {
                acc = acc + mx.get(x, xp) * mz.get(z, zp) * j.get(xp, zp);
            }
        }
        acc
    }))
}

/// Fringe factors `δ(±1)` of the reconstructed joint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaCoefficients<T> {
    pub d_plus: T,
    pub d_minus: T,
}

impl<T: Scalar> DeltaCoefficients<T> {
    pub fn get(&self, z: i8) -> T {
        if z >= 0 {
            self.d_plus
        } else {
            self.d_minus
        }
    }
}

/// Whether `θ` is close enough to zero to take the unmarked limit.
fn is_unmarked<T: Scalar>(theta: T, eps: SingularityThreshold<T>) -> bool {
    theta.sin().abs() <= eps.0
}

/// `δ(1) = sin 2ϑ / [cos θ sin(2ϑ − θ)]`,
/// `δ(−1) = sin(2ϑ − 2θ) / [cos θ sin(2ϑ − θ)]`; both equal one at `θ = 0`.
pub fn delta_coefficients<T: Scalar>(
    config: &MarkerConfig<T>,
    eps: SingularityThreshold<T>,
) -> Result<DeltaCoefficients<T>> {
    let (t, v) = (config.theta(), config.vartheta());
    if is_unmarked(t, eps) {
        return Ok(DeltaCoefficients {
            d_plus: T::one(),
            d_minus: T::one(),
        });
    }
    let c = check_marking(t, eps)?;
    let s = check_analyzer("sin(2ϑ − θ)", (T::two() * v - t).sin(), eps)?;
    let den = c * s;
    Ok(DeltaCoefficients {
        d_plus: (T::two() * v).sin() / den,
        d_minus: (T::two() * v - T::two() * t).sin() / den,
    })
}

/// `P(x, z) = ¼[1 + xδ(z)⟨X⟩ + z⟨Z⟩]`, falling back to the unmarked limit
/// `¼(1 + z⟨Z⟩ + x⟨X⟩)` when `sin θ` is below the threshold.
pub fn quasi_joint_closed_form<T: Scalar>(
    state: &PureState<T>,
    config: &MarkerConfig<T>,
    eps: SingularityThreshold<T>,
) -> Result<DiscreteJoint<T>> {
    let delta = delta_coefficients(config, eps)?;
    let b = state.bloch();
    let q = T::lit(0.25);
    Ok(DiscreteJoint::from_fn(JointKind::Quasi, |x, z| {
        q * (T::one() + sign::<T>(x) * delta.get(z) * b.ex + sign::<T>(z) * b.ez)
    }))
}

/// Unmarked limit `¼(1 + z⟨Z⟩ + x⟨X⟩)` on its own.
pub fn quasi_joint_unmarked<T: Scalar>(state: &PureState<T>) -> DiscreteJoint<T> {
    let b = state.bloch();
    let q = T::lit(0.25);
    DiscreteJoint::from_fn(JointKind::Quasi, |x, z| {
        q * (T::one() + sign::<T>(z) * b.ez + sign::<T>(x) * b.ex)
    })
}

/// Phase kernel `μ_Φ(φ, φ′) = (1/2π)[1 + (2/cos θ) cos(φ − φ′)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseKernel<T> {
    /// Constant term, `1/2π`.
    pub k0: T,
    /// Coefficient of `cos(φ − φ′)`, `2/(2π cos θ)`.
    pub gain: T,
}

impl<T: Scalar> PhaseKernel<T> {
    pub fn evaluate(&self, phi: T, phi_prime: T) -> T {
        self.k0 + self.gain * (phi - phi_prime).cos()
    }

    /// `∫ μ_Φ(φ, φ′) d(φ′) dφ′` evaluated on Fourier coefficients.
    ///
    /// The constant term integrates to `2π·k0·c0 = c0`; the first harmonic
    /// picks up `π·gain = 1/cos θ`.
    pub fn apply(&self, d: &PhaseDensity<T>) -> PhaseDensity<T> {
        let harmonic = T::PI() * self.gain;
        PhaseDensity::new(
            T::TAU() * self.k0 * d.c0,
            d.c_cos * harmonic,
            d.c_sin * harmonic,
        )
    }
}

pub fn mu_phi_kernel<T: Scalar>(theta: T, eps: SingularityThreshold<T>) -> Result<PhaseKernel<T>> {
    let c = check_marking(theta, eps)?;
    let k0 = T::one() / T::TAU();
    Ok(PhaseKernel {
        k0,
        gain: T::two() * k0 / c,
    })
}

pub fn invert_phase_density<T: Scalar>(
    d: &PhaseDensity<T>,
    theta: T,
    eps: SingularityThreshold<T>,
) -> Result<PhaseDensity<T>> {
    Ok(mu_phi_kernel(theta, eps)?.apply(d))
}

/// Applies `μ_Z` across the `z` slices and `μ_Φ` within each slice.
pub fn invert_joint_phase<T: Scalar>(
    j: &PhaseJoint<T>,
    config: &MarkerConfig<T>,
    eps: SingularityThreshold<T>,
) -> Result<PhaseJoint<T>> {
    let kernel = mu_phi_kernel(config.theta(), eps)?;
    let mz = mu_z_matrix(config, eps)?;
    let sharpened = [kernel.apply(&j.slice(1)), kernel.apply(&j.slice(-1))];
    let slice = |z: i8| {
        sharpened[0]
            .scale(mz.get(z, 1))
            .add(&sharpened[1].scale(mz.get(z, -1)))
    };
    Ok(PhaseJoint::from_slices(
        [slice(1), slice(-1)],
        JointKind::Quasi,
    ))
}

/// `P(φ, z) = (1/4π)[1 + δ(z)(cos φ⟨X⟩ + sin φ⟨Y⟩) + z⟨Z⟩]`, with the same
/// unmarked-limit fallback as [`quasi_joint_closed_form`].
pub fn quasi_phase_closed_form<T: Scalar>(
    state: &PureState<T>,
    config: &MarkerConfig<T>,
    eps: SingularityThreshold<T>,
) -> Result<PhaseJoint<T>> {
    let delta = delta_coefficients(config, eps)?;
    Ok(quasi_phase_with_delta(state, |z| delta.get(z)))
}

/// Unmarked phase limit `(1/4π)[1 + cos φ⟨X⟩ + sin φ⟨Y⟩ + z⟨Z⟩]`.
pub fn quasi_phase_unmarked<T: Scalar>(state: &PureState<T>) -> PhaseJoint<T> {
    quasi_phase_with_delta(state, |_| T::one())
}

fn quasi_phase_with_delta<T: Scalar>(
    state: &PureState<T>,
    delta: impl Fn(i8) -> T,
) -> PhaseJoint<T> {
    let b = state.bloch();
    let k = T::one() / (T::lit(2.0) * T::TAU());
    let slice = |z: i8| {
        PhaseDensity::new(
            k * (T::one() + sign::<T>(z) * b.ez),
            k * delta(z) * b.ex,
            k * delta(z) * b.ey,
        )
    };
    PhaseJoint::from_slices([slice(1), slice(-1)], JointKind::Quasi)
}
