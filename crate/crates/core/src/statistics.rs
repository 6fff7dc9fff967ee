//! Pure two-aperture states and their exact, unobserved statistics.
//!
//! A state `(alpha, beta)` lives in the basis `(upper aperture, lower
//! aperture)`. Path is the third Pauli observable `Z` (`z = +1` upper,
//! `z = -1` lower); discrete interference is `X`, measured by projection on
//! `(1, ±1)/√2`; continuous phase is the POVM of states
//! `(1, e^{iφ})/√(2π)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{sign, Scalar};

/// Inputs whose norm is off by at most this much are silently renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-6;

/// Complex amplitudes on the two apertures, unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState<T> {
    alpha: Complex<T>,
    beta: Complex<T>,
}

impl<T: Scalar> PureState<T> {
    /// Builds a state, renormalizing inputs within [`RENORMALIZE_TOL`] of unit
    /// norm and rejecting anything further off.
    pub fn new(alpha: Complex<T>, beta: Complex<T>) -> Result<Self> {
        let parts = [alpha.re, alpha.im, beta.re, beta.im];
        if parts.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("amplitudes must be finite".into()));
        }
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if (norm - T::one()).abs() > T::lit(RENORMALIZE_TOL) {
            return Err(Error::InvalidState(format!(
                "norm {norm} differs from 1 by more than {RENORMALIZE_TOL:e}"
            )));
        }
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    /// Builds a state from `(re α, im α, re β, im β)`.
    pub fn from_parts(re_alpha: T, im_alpha: T, re_beta: T, im_beta: T) -> Result<Self> {
        Self::new(
            Complex::new(re_alpha, im_alpha),
            Complex::new(re_beta, im_beta),
        )
    }

    /// Builds a state from magnitudes and phases given in degrees.
    pub fn from_polar_degrees(
        mag_alpha: T,
        phase_alpha: T,
        mag_beta: T,
        phase_beta: T,
    ) -> Result<Self> {
        if mag_alpha < T::zero() || mag_beta < T::zero() {
            return Err(Error::InvalidState("magnitudes must be nonnegative".into()));
        }
        Self::new(
            Complex::from_polar(mag_alpha, phase_alpha.to_radians()),
            Complex::from_polar(mag_beta, phase_beta.to_radians()),
        )
    }

    /// Real superposition `(cos a, sin a)`.
    pub fn real_angle(a: T) -> Self {
        Self {
            alpha: Complex::new(a.cos(), T::zero()),
            beta: Complex::new(a.sin(), T::zero()),
        }
    }

    /// Particle certainly in the upper aperture.
    pub fn upper() -> Self {
        Self {
            alpha: Complex::new(T::one(), T::zero()),
            beta: Complex::new(T::zero(), T::zero()),
        }
    }

    /// Particle certainly in the lower aperture.
    pub fn lower() -> Self {
        Self {
            alpha: Complex::new(T::zero(), T::zero()),
            beta: Complex::new(T::one(), T::zero()),
        }
    }

    pub fn alpha(&self) -> Complex<T> {
        self.alpha
    }

    pub fn beta(&self) -> Complex<T> {
        self.beta
    }

    pub fn bloch(&self) -> BlochExpectations<T> {
        bloch_from_state(self)
    }
}

/// Expectation values `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochExpectations<T> {
    pub ex: T,
    pub ey: T,
    pub ez: T,
}

impl<T: Scalar> BlochExpectations<T> {
    /// `ex² + ey² + ez²`; one for pure states.
    pub fn purity(&self) -> T {
        self.ex * self.ex + self.ey * self.ey + self.ez * self.ez
    }

    /// Length of the transverse component `√(ex² + ey²)`.
    pub fn coherence(&self) -> T {
        self.ex.hypot(self.ey)
    }
}

/// Probabilities of the two outcomes `+1` and `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryDistribution<T> {
    pub p_plus: T,
    pub p_minus: T,
}

impl<T: Scalar> BinaryDistribution<T> {
    pub fn new(p_plus: T, p_minus: T) -> Result<Self> {
        let tol = T::invariant_tol();
        let in_range = |p: T| p >= -tol && p <= T::one() + tol;
        if !in_range(p_plus) || !in_range(p_minus) || (p_plus + p_minus - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!(
                "({p_plus}, {p_minus}) is not a probability distribution"
            )));
        }
        Ok(Self { p_plus, p_minus })
    }

    /// `½(1 + s·mean)` for both outcomes; mean must lie in `[-1, 1]`.
    pub(crate) fn from_mean(mean: T) -> Self {
        Self {
            p_plus: T::half() * (T::one() + mean),
            p_minus: T::half() * (T::one() - mean),
        }
    }

    pub fn prob(&self, outcome: i8) -> T {
        if outcome >= 0 {
            self.p_plus
        } else {
            self.p_minus
        }
    }

    /// Mean value `p(+1) − p(−1)`.
    pub fn mean(&self) -> T {
        self.p_plus - self.p_minus
    }

    pub fn as_array(&self) -> [T; 2] {
        [self.p_plus, self.p_minus]
    }
}

/// Density `c0 + c_cos·cos φ + c_sin·sin φ` on `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseDensity<T> {
    pub c0: T,
    pub c_cos: T,
    pub c_sin: T,
}

impl<T: Scalar> PhaseDensity<T> {
    pub fn new(c0: T, c_cos: T, c_sin: T) -> Self {
        Self { c0, c_cos, c_sin }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn evaluate(&self, phi: T) -> T {
        evaluate_phase_density(self, phi)
    }

    /// Integral over one period, `2π·c0`.
    pub fn integral(&self) -> T {
        T::TAU() * self.c0
    }

    /// First-harmonic amplitude `√(c_cos² + c_sin²)`.
    pub fn amplitude(&self) -> T {
        self.c_cos.hypot(self.c_sin)
    }

    /// Minimum over `φ`, `c0 − amplitude`.
    pub fn min_value(&self) -> T {
        self.c0 - self.amplitude()
    }

    /// Location of the minimum in `[0, 2π)`; zero for flat densities.
    pub fn argmin(&self) -> T {
        if self.amplitude() == T::zero() {
            return T::zero();
        }
        wrap_phase((-self.c_sin).atan2(-self.c_cos))
    }

    pub fn is_nonnegative(&self, tol: T) -> bool {
        self.min_value() >= -tol
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(self.c0 * k, self.c_cos * k, self.c_sin * k)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.c0 + other.c0,
            self.c_cos + other.c_cos,
            self.c_sin + other.c_sin,
        )
    }

    /// Samples the density at `points` equally spaced phases `2πk/points`.
    pub fn grid(&self, points: usize) -> Vec<(T, T)> {
        phase_grid::<T>(points)
            .into_iter()
            .map(|phi| (phi, self.evaluate(phi)))
            .collect()
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_phase<T: Scalar>(phi: T) -> T {
    let tau = T::TAU();
    let r = phi % tau;
    let r = if r < T::zero() { r + tau } else { r };
    // `r + tau` can round up to exactly tau
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

/// `points` equally spaced phases `2πk/points`, `k = 0..points`.
pub fn phase_grid<T: Scalar>(points: usize) -> Vec<T> {
    let step = T::TAU() / T::from_usize(points.max(1)).unwrap();
    (0..points)
        .map(|k| T::from_usize(k).unwrap() * step)
        .collect()
}

/// `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)` with `⟨X⟩ = αβ* + α*β`, `⟨Y⟩ = i(αβ* − α*β)`,
/// `⟨Z⟩ = |α|² − |β|²`.
pub fn bloch_from_state<T: Scalar>(state: &PureState<T>) -> BlochExpectations<T> {
    let a = state.alpha;
    let b = state.beta;
    let ab = a * b.conj();
    let ex = (ab + a.conj() * b).re;
    let ey = (Complex::<T>::i() * (ab - a.conj() * b)).re;
    let ez = a.norm_sqr() - b.norm_sqr();
    BlochExpectations { ex, ey, ez }
}

/// `P_Z(z) = ½(1 + z⟨Z⟩)`.
pub fn exact_path_distribution<T: Scalar>(state: &PureState<T>) -> BinaryDistribution<T> {
    BinaryDistribution::from_mean(state.bloch().ez)
}

/// `P_X(x) = ½(1 + x⟨X⟩)`.
pub fn exact_interference_distribution<T: Scalar>(state: &PureState<T>) -> BinaryDistribution<T> {
    BinaryDistribution::from_mean(state.bloch().ex)
}

/// `P_Φ(φ) = (1/2π)(1 + cos φ⟨X⟩ + sin φ⟨Y⟩)` as a Fourier triple.
pub fn exact_phase_distribution<T: Scalar>(state: &PureState<T>) -> PhaseDensity<T> {
    let b = state.bloch();
    let k = T::one() / T::TAU();
    PhaseDensity::new(k, b.ex * k, b.ey * k)
}

pub fn evaluate_phase_density<T: Scalar>(d: &PhaseDensity<T>, phi: T) -> T {
    d.c0 + d.c_cos * phi.cos() + d.c_sin * phi.sin()
}

/// Projection vector `|x⟩ = (1, x)/√2` of the discrete interference observable.
pub fn interference_vector<T: Scalar>(x: i8) -> [Complex<T>; 2] {
    let k = T::FRAC_1_SQRT_2();
    [
        Complex::new(k, T::zero()),
        Complex::new(sign::<T>(x) * k, T::zero()),
    ]
}

/// Phase POVM vector `|φ⟩ = (1, e^{iφ})/√(2π)`.
pub fn phase_vector<T: Scalar>(phi: T) -> [Complex<T>; 2] {
    let k = T::one() / T::TAU().sqrt();
    [Complex::new(k, T::zero()), Complex::from_polar(k, phi)]
}

/// `⟨u|v⟩` for two-component vectors.
pub(crate) fn inner2<T: Scalar>(u: &[Complex<T>; 2], v: &[Complex<T>; 2]) -> Complex<T> {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

/// Born-rule probability `|⟨x|ψ⟩|²`, computed by direct projection.
pub fn born_interference<T: Scalar>(state: &PureState<T>, x: i8) -> T {
    inner2(&interference_vector(x), &[state.alpha, state.beta]).norm_sqr()
}

/// Born-rule phase density `|⟨φ|ψ⟩|²`, computed by direct projection.
pub fn born_phase<T: Scalar>(state: &PureState<T>, phi: T) -> T {
    inner2(&phase_vector(phi), &[state.alpha, state.beta]).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};

    fn st(a: (f64, f64), b: (f64, f64)) -> PureState<f64> {
        PureState::from_parts(a.0, a.1, b.0, b.1).unwrap()
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn bloch_examples() {
        let b = PureState::<f64>::upper().bloch();
        assert_eq!((b.ex, b.ey, b.ez), (0.0, 0.0, 1.0));

        let b = st((FRAC_1_SQRT_2, 0.0), (FRAC_1_SQRT_2, 0.0)).bloch();
        assert_abs_diff_eq!(b.ex, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.ey, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.ez, 0.0, epsilon = 1e-15);

        // sin(π/4), 0, cos(π/4) computed straight from the amplitudes
        let (c, s) = (FRAC_PI_8.cos(), FRAC_PI_8.sin());
        let b = PureState::<f64>::real_angle(FRAC_PI_8).bloch();
        assert_abs_diff_eq!(b.ex, 2.0 * c * s, epsilon = 1e-15);
        assert_abs_diff_eq!(b.ex, 0.70710678, epsilon = 1e-8);
        assert_abs_diff_eq!(b.ey, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.ez, c * c - s * s, epsilon = 1e-15);
    }

    #[test]
    fn y_expectation_sign() {
        let b = st((FRAC_1_SQRT_2, 0.0), (0.0, FRAC_1_SQRT_2)).bloch();
        assert_abs_diff_eq!(b.ey, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.ex, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn path_and_interference_examples() {
        let up = PureState::<f64>::upper();
        assert_eq!(exact_path_distribution(&up).as_array(), [1.0, 0.0]);
        let p = exact_interference_distribution(&up);
        assert_abs_diff_eq!(p.p_plus, 0.5, epsilon = 1e-15);

        let plus = st((FRAC_1_SQRT_2, 0.0), (FRAC_1_SQRT_2, 0.0));
        let p = exact_path_distribution(&plus);
        assert_abs_diff_eq!(p.p_plus, 0.5, epsilon = 1e-15);
        let p = exact_interference_distribution(&plus);
        assert_abs_diff_eq!(p.p_plus, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.p_minus, 0.0, epsilon = 1e-15);

        let s = PureState::<f64>::real_angle(FRAC_PI_8);
        let expect = (1.0 + 2f64.sqrt() / 2.0) / 2.0;
        assert_abs_diff_eq!(exact_path_distribution(&s).p_plus, expect, epsilon = 1e-15);
        assert_abs_diff_eq!(
            exact_path_distribution(&s).p_plus,
            FRAC_PI_8.cos().powi(2),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            exact_interference_distribution(&s).p_plus,
            born_interference(&s, 1),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            exact_interference_distribution(&s).p_plus,
            0.85355339,
            epsilon = 1e-8
        );
    }

    #[test]
    fn phase_examples() {
        let k = 1.0 / TAU;
        let d = exact_phase_distribution(&PureState::<f64>::upper());
        assert_eq!((d.c0, d.c_cos, d.c_sin), (k, 0.0, 0.0));
        let d = exact_phase_distribution(&st((FRAC_1_SQRT_2, 0.0), (FRAC_1_SQRT_2, 0.0)));
        assert_abs_diff_eq!(d.c_cos, k, epsilon = 1e-15);
        let d = exact_phase_distribution(&st((FRAC_1_SQRT_2, 0.0), (0.0, FRAC_1_SQRT_2)));
        assert_abs_diff_eq!(d.c_cos, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.c_sin, k, epsilon = 1e-15);
    }

    #[test]
    fn evaluate_examples() {
        let k = 1.0 / TAU;
        assert_eq!(
            evaluate_phase_density(&PhaseDensity::new(k, 0.0, 0.0), 1.3),
            k
        );
        let d = PhaseDensity::new(k, k, 0.0);
        assert_abs_diff_eq!(d.evaluate(0.0), 1.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(d.evaluate(PI / 3.0), 0.23873241, epsilon = 1e-8);
        assert_abs_diff_eq!(
            d.evaluate(PI / 3.0 + TAU),
            d.evaluate(PI / 3.0),
            epsilon = 1e-14
        );
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn normalization_policy() {
        // slightly off: renormalized
        let s = PureState::from_parts(0.70710678, 0.0, 0.70710678, 0.0).unwrap();
        assert_abs_diff_eq!(
            s.alpha().norm_sqr() + s.beta().norm_sqr(),
            1.0,
            epsilon = 1e-15
        );
        // far off: rejected
        assert!(matches!(
            PureState::from_parts(1.0, 0.0, 1.0, 0.0),
            Err(Error::InvalidState(_))
        ));
        assert!(PureState::from_parts(0.0, 0.0, 0.0, 0.0).is_err());
        assert!(PureState::from_parts(f64::NAN, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn polar_form_matches_cartesian() {
        let s = PureState::from_polar_degrees(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 90.0).unwrap();
        assert_abs_diff_eq!(s.bloch().ey, 1.0, epsilon = 1e-15);
        assert!(PureState::from_polar_degrees(-1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn binary_distribution_validation() {
        assert!(BinaryDistribution::new(0.3, 0.7).is_ok());
        assert!(BinaryDistribution::new(0.3, 0.6).is_err());
        assert!(BinaryDistribution::new(1.2, -0.2).is_err());
    }

    #[test]
    fn density_minimum_and_argmin() {
        let d = PhaseDensity::new(1.0, -0.5, 0.5);
        let phi = d.argmin();
        assert_abs_diff_eq!(d.evaluate(phi), d.min_value(), epsilon = 1e-15);
        assert_abs_diff_eq!(phi, 7.0 * FRAC_PI_4, epsilon = 1e-15);
        assert_eq!(PhaseDensity::new(1.0, 0.0, 0.0).argmin(), 0.0);
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(0.0f64), 0.0);
        assert_abs_diff_eq!(wrap_phase(-0.5f64), TAU - 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_phase(7.0f64), 7.0 - TAU, epsilon = 1e-15);
        assert!(wrap_phase(-1e-18f64) < TAU);
    }

    #[test]
    fn single_precision_agrees() {
        let s = PureState::<f32>::real_angle(std::f32::consts::FRAC_PI_8);
        let b = s.bloch();
        assert!((b.purity() - 1.0).abs() < 1e-6);
        assert!((exact_path_distribution(&s).p_plus - 0.853_553_4).abs() < 1e-6);
    }
}
