//! Finite-statistics simulation of the joint measurement.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with the
//! caller's 64-bit seed. Independent draws use separate ChaCha streams of
//! the same key: stream 0 for outcome counts and the `z` draws, stream 1 for
//! the `φ` rejection sampler.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::format::sci;
use crate::interferometer::{DiscreteJoint, JointKind, MarkerConfig, PhaseJoint};
use crate::inversion::{
    invert_joint_discrete, invert_joint_phase, mu_x_matrix, mu_z_matrix, SingularityThreshold,
};
use crate::scalar::{slot, SIGNS};
use crate::statistics::PhaseDensity;

const COUNT_STREAM: u64 = 0;
const PHI_STREAM: u64 = 1;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Outcome counts `n(x, z)` of `total` shots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotCounts {
    counts: [[u64; 2]; 2],
    total: u64,
    seed: u64,
}

impl ShotCounts {
    pub fn new(counts: [[u64; 2]; 2], seed: u64) -> Result<Self> {
        let total = counts.iter().flatten().sum();
        if total == 0 {
            return Err(Error::InvalidSampling("no shots recorded".into()));
        }
        Ok(Self {
            counts,
            total,
            seed,
        })
    }

    pub fn get(&self, x: i8, z: i8) -> u64 {
        self.counts[slot(x)][slot(z)]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Empirical frequencies `n(x, z)/N`.
    pub fn frequencies(&self) -> DiscreteJoint<f64> {
        let n = self.total as f64;
        DiscreteJoint::from_fn(JointKind::Operational, |x, z| self.get(x, z) as f64 / n)
    }

    /// Writes `x,z,count`, one row per outcome in `(+,+), (+,−), (−,+), (−,−)` order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,z,count")?;
        for x in SIGNS {
            for z in SIGNS {
                writeln!(w, "{x},{z},{}", self.get(x, z))?;
            }
        }
        Ok(())
    }
}

/// Multinomial draw of `n` shots from an operational joint.
pub fn sample_discrete(j: &DiscreteJoint<f64>, n: u64, seed: u64) -> Result<ShotCounts> {
    if j.kind() == JointKind::Quasi {
        return Err(Error::QuasiInput);
    }
    if n == 0 {
        return Err(Error::InvalidSampling(
            "shot count must be at least 1".into(),
        ));
    }
    let mut rng = rng_for(seed, COUNT_STREAM);
    let cells = j.entries();
    let mut counts = [[0u64; 2]; 2];
    let mut left = n;
    let mut mass = 1.0f64;
    for (i, &(x, z, p)) in cells.iter().enumerate() {
        let p = p.max(0.0);
        let k = if i == cells.len() - 1 {
            left
        } else if left == 0 || mass <= 0.0 {
            0
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(left, q)
                .map_err(|e| Error::InvalidSampling(e.to_string()))?
                .sample(&mut rng)
        };
        counts[slot(x)][slot(z)] = k;
        left -= k;
        mass -= p;
    }
    ShotCounts::new(counts, seed)
}

/// Individual `(φ, z)` outcomes, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShots {
    records: Vec<(f64, i8)>,
    seed: u64,
}

impl PhaseShots {
    pub fn records(&self) -> &[(f64, i8)] {
        &self.records
    }

    pub fn total(&self) -> usize {
        self.records.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "phi,z")?;
        for &(phi, z) in &self.records {
            writeln!(w, "{},{z}", sci(phi))?;
        }
        Ok(())
    }
}

/// Draws `z` from the slice weights `2π·c0(z)`, then `φ` by rejection under
/// the flat envelope `c0(z) + amplitude(z)`. Operational slices have
/// `amplitude ≤ c0`, so at least half of the proposals are accepted.
pub fn sample_phase(j: &PhaseJoint<f64>, n: u64, seed: u64) -> Result<PhaseShots> {
    if j.kind() == JointKind::Quasi {
        return Err(Error::QuasiInput);
    }
    if n == 0 {
        return Err(Error::InvalidSampling(
            "shot count must be at least 1".into(),
        ));
    }
    let slices = [j.slice(1), j.slice(-1)];
    let w_plus = slices[0].integral() / (slices[0].integral() + slices[1].integral());
    let mut z_rng = rng_for(seed, COUNT_STREAM);
    let mut phi_rng = rng_for(seed, PHI_STREAM);
    let records = (0..n)
        .map(|_| {
            let z: i8 = if z_rng.random::<f64>() < w_plus {
                1
            } else {
                -1
            };
            (draw_phase(&slices[slot(z)], &mut phi_rng), z)
        })
        .collect();
    Ok(PhaseShots { records, seed })
}

fn draw_phase<R: Rng>(d: &PhaseDensity<f64>, rng: &mut R) -> f64 {
    let envelope = d.c0 + d.amplitude();
    loop {
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        if rng.random::<f64>() * envelope < d.evaluate(phi) {
            return phi;
        }
    }
}

/// Reconstructed joint with first-order (delta-method) standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedQuasiJoint {
    pub estimate: DiscreteJoint<f64>,
    std_errors: [[f64; 2]; 2],
}

impl EstimatedQuasiJoint {
    pub fn value(&self, x: i8, z: i8) -> f64 {
        self.estimate.get(x, z)
    }

    pub fn std_error(&self, x: i8, z: i8) -> f64 {
        self.std_errors[slot(x)][slot(z)]
    }

    /// `(x, z, value, std_error)` in `(+,+), (+,−), (−,+), (−,−)` order.
    pub fn rows(&self) -> [(i8, i8, f64, f64); 4] {
        self.estimate
            .entries()
            .map(|(x, z, v)| (x, z, v, self.std_error(x, z)))
    }
}

/// Pushes empirical frequencies through the tensor-product kernel.
///
/// With `K = μ_X ⊗ μ_Z` and multinomial covariance `(diag f − f fᵀ)/N`, the
/// variance of entry `a` is `(Σ_b K_ab² f_b − (Σ_b K_ab f_b)²)/N`.
pub fn estimate_quasi_joint(
    counts: &ShotCounts,
    config: &MarkerConfig<f64>,
    eps: SingularityThreshold<f64>,
) -> Result<EstimatedQuasiJoint> {
    let f = counts.frequencies();
    let estimate = invert_joint_discrete(&f, config, eps)?;
    let mx = mu_x_matrix(config.theta(), eps)?;
    let mz = mu_z_matrix(config, eps)?;
    let n = counts.total() as f64;
    let mut std_errors = [[0.0; 2]; 2];
    for x in SIGNS {
        for z in SIGNS {
            let mut second = 0.0;
            for xp in SIGNS {
                for zp in SIGNS {
                    let k = mx.get(x, xp) * mz.get(z, zp);
                    second += k * k * f.get(xp, zp);
                }
            }
            let q = estimate.get(x, z);
            std_errors[slot(x)][slot(z)] = ((second - q * q).max(0.0) / n).sqrt();
        }
    }
    Ok(EstimatedQuasiJoint {
        estimate,
        std_errors,
    })
}

/// First-harmonic estimate of the phase joint from shots:
/// `c0(z) = n_z/(2πN)`, `c_cos(z) = Σ cos φ_i/(πN)`, `c_sin(z) = Σ sin φ_i/(πN)`.
pub fn empirical_phase_joint(shots: &PhaseShots) -> Result<PhaseJoint<f64>> {
    let n = shots.total() as f64;
    if n == 0.0 {
        return Err(Error::InvalidSampling("no shots recorded".into()));
    }
    let mut acc = [[0.0f64; 3]; 2];
    for &(phi, z) in shots.records() {
        let a = &mut acc[slot(z)];
        a[0] += 1.0;
        a[1] += phi.cos();
        a[2] += phi.sin();
    }
    let pi = std::f64::consts::PI;
    let slice =
        |a: [f64; 3]| PhaseDensity::new(a[0] / (2.0 * pi * n), a[1] / (pi * n), a[2] / (pi * n));
    let slices = [slice(acc[0]), slice(acc[1])];
    let kind = if slices.iter().all(|s| s.is_nonnegative(0.0)) {
        JointKind::Operational
    } else {
        JointKind::Quasi
    };
    Ok(PhaseJoint::from_slices(slices, kind))
}

/// Reconstructed phase joint from shots via the empirical Fourier triples.
pub fn estimate_quasi_phase(
    shots: &PhaseShots,
    config: &MarkerConfig<f64>,
    eps: SingularityThreshold<f64>,
) -> Result<PhaseJoint<f64>> {
    invert_joint_phase(&empirical_phase_joint(shots)?, config, eps)
}
