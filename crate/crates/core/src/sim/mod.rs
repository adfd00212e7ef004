//! Monte Carlo for Lévy processes on T1, T2 and SU(2): paths, subordinators,
//! martingale transcripts and the estimators built on them.
//!
//! Every random draw comes from a ChaCha8 stream keyed by
//! `(master seed, purpose)` with the path index as stream number, so an
//! ensemble is identical whatever the worker count or visiting order.

mod estimate;
mod transcript;

pub use estimate::{
    empirical_burkholder, empirical_char, projection_deterministic, projection_mc_estimate,
    BurkholderEstimate, CharEstimate, ProjectionEstimate,
};
pub use transcript::{
    check_differential_subordination, check_nonsymmetric_subordination, martingale_transcript,
    transcript_ensemble, MartingaleTranscript, PointValue, SpectralEvaluator, Transform,
};

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind, GroupLevyMeasure, Quaternion};
use crate::levy::BernsteinSpec;
use crate::scalar::{from_usize, lit, Scalar};

/// What a random stream is used for; part of the stream key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Path = 1,
    Start = 2,
    Subordinator = 3,
    Fixture = 4,
}

/// Independent stream for `(master, purpose, index)`.
pub fn stream_rng(master: u64, purpose: Purpose, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master.to_le_bytes());
    key[8..16].copy_from_slice(&(purpose as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

pub(crate) fn normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    let z: f64 = StandardNormal.sample(rng);
    lit(z)
}

/// Haar-distributed element: uniform angles on tori, normalized Gaussian
/// quaternion on SU(2).
pub fn sample_haar<T: Scalar, R: Rng + ?Sized>(group: GroupKind, rng: &mut R) -> GroupElement<T> {
    let two_pi = T::PI() * lit(2.0);
    match group {
        GroupKind::T1 => GroupElement::T1(lit::<T>(rng.gen::<f64>()) * two_pi),
        GroupKind::T2 => GroupElement::T2(
            lit::<T>(rng.gen::<f64>()) * two_pi,
            lit::<T>(rng.gen::<f64>()) * two_pi,
        ),
        GroupKind::Su2 => loop {
            let q = Quaternion {
                w: normal(rng),
                x: normal(rng),
                y: normal(rng),
                z: normal(rng),
            };
            if q.norm() > lit(1e-6) {
                break GroupElement::Su2(q.normalized());
            }
        },
    }
}

/// Lévy process with generator `Σ b_i X_i + c Σ X_i^2 + jumps`.
#[derive(Clone, Debug)]
pub struct GroupProcessSpec<T> {
    pub group: GroupKind,
    /// Gaussian coefficient: diffusion `a = c I`.
    pub c: T,
    pub drift: Vec<T>,
    pub nu: GroupLevyMeasure<T>,
    pub horizon: T,
    pub dt: T,
    pub seed: u64,
}

impl<T: Scalar> GroupProcessSpec<T> {
    pub fn new(
        group: GroupKind,
        c: T,
        drift: Vec<T>,
        nu: GroupLevyMeasure<T>,
        horizon: T,
        dt: T,
        seed: u64,
    ) -> Result<Self> {
        let spec = Self {
            group,
            c,
            drift,
            nu,
            horizon,
            dt,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c >= T::zero() && self.c.is_finite()) {
            return Err(Error::InvalidInput(format!("gaussian coefficient {}", self.c)));
        }
        if self.drift.len() != self.group.algebra_dim() {
            return Err(Error::InvalidInput(format!(
                "drift has {} components, {} needs {}",
                self.drift.len(),
                self.group,
                self.group.algebra_dim()
            )));
        }
        if self.nu.group != self.group {
            return Err(Error::InvalidInput("jump measure lives on another group".into()));
        }
        if !(self.dt > T::zero() && self.horizon >= self.dt && self.horizon.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "need 0 < dt <= T, got dt={} T={}",
                self.dt, self.horizon
            )));
        }
        if !self.nu.total_mass().is_finite() {
            return Err(Error::InvalidInput("infinite jump intensity".into()));
        }
        Ok(())
    }

    /// Regular grid `0, dt, 2dt, ..., T` (last step possibly shorter).
    pub fn grid(&self) -> Vec<T> {
        regular_grid(self.horizon, self.dt)
    }
}

fn regular_grid<T: Scalar>(horizon: T, dt: T) -> Vec<T> {
    let steps = (horizon / dt - lit(1e-9)).ceil().to_usize().unwrap_or(1).max(1);
    (0..=steps)
        .map(|k| (from_usize::<T>(k) * dt).min(horizon))
        .collect()
}

/// One step of a path record.
#[derive(Clone, Debug, PartialEq)]
pub enum Increment<T> {
    /// Standard Brownian increment over `[times[k], times[k+1]]`.
    Diffusion(Vec<T>),
    /// Right multiplication by atom `index` at `times[k] == times[k+1]`.
    Jump(usize),
}

#[derive(Clone, Debug)]
pub struct PathRecord<T> {
    pub stream: u64,
    /// Event times: grid points plus jump times (a jump repeats its time).
    pub times: Vec<T>,
    /// `φ` after each event; `elements[0] = e`.
    pub elements: Vec<GroupElement<T>>,
    /// `increments[k]` leads from `elements[k]` to `elements[k+1]`.
    pub increments: Vec<Increment<T>>,
    /// Indices into `times` of the regular grid points.
    pub grid_points: Vec<usize>,
    /// Largest SU(2) renormalization correction applied.
    pub max_renormalization: T,
}

impl<T: Scalar> PathRecord<T> {
    pub fn jump_count(&self) -> usize {
        self.increments
            .iter()
            .filter(|i| matches!(i, Increment::Jump(_)))
            .count()
    }

    pub fn jump_times(&self) -> Vec<T> {
        self.increments
            .iter()
            .enumerate()
            .filter(|(_, i)| matches!(i, Increment::Jump(_)))
            .map(|(k, _)| self.times[k])
            .collect()
    }

    pub fn terminal(&self) -> &GroupElement<T> {
        self.elements.last().expect("path has at least one element")
    }

    /// `φ` at grid point `k`.
    pub fn at_grid(&self, k: usize) -> &GroupElement<T> {
        &self.elements[self.grid_points[k]]
    }
}

/// Simulates path `index`: exponential Euler steps
/// `φ ← φ exp(√(2c) ΔB + b h)` between exact Poisson jump times, right
/// multiplication by the drawn atom at each jump. A jump landing on a grid
/// time is applied after the diffusion step ending there.
pub fn simulate_path<T: Scalar>(spec: &GroupProcessSpec<T>, index: u64) -> Result<PathRecord<T>> {
    spec.validate()?;
    let mut rng = stream_rng(spec.seed, Purpose::Path, index);
    let n = spec.group.algebra_dim();
    let lambda = spec.nu.total_mass();
    let picker = if spec.nu.atoms.is_empty() {
        None
    } else {
        let w: Vec<f64> = spec.nu.atoms.iter().map(|a| crate::scalar::to_f64(a.1)).collect();
        Some(WeightedIndex::new(w).map_err(|e| Error::InvalidInput(e.to_string()))?)
    };
    let sqrt2c = (spec.c * lit(2.0)).sqrt();
    let next_jump = |rng: &mut ChaCha8Rng, from: T| -> T {
        if lambda > T::zero() {
            let e: f64 = Exp1.sample(rng);
            from + lit::<T>(e) / lambda
        } else {
            T::infinity()
        }
    };

    let grid = spec.grid();
    let mut rec = PathRecord {
        stream: index,
        times: vec![T::zero()],
        elements: vec![GroupElement::identity(spec.group)],
        increments: Vec::new(),
        grid_points: vec![0],
        max_renormalization: T::zero(),
    };
    let mut phi = GroupElement::identity(spec.group);
    let mut t = T::zero();
    let mut jump_at = next_jump(&mut rng, T::zero());

    let diffuse = |rec: &mut PathRecord<T>, phi: &mut GroupElement<T>, rng: &mut ChaCha8Rng, h: T| {
        let sd = h.sqrt();
        let db: Vec<T> = (0..n).map(|_| normal::<T, _>(rng) * sd).collect();
        let v: Vec<T> = db
            .iter()
            .zip(&spec.drift)
            .map(|(w, b)| sqrt2c * *w + *b * h)
            .collect();
        *phi = phi.mul(&GroupElement::exp(spec.group, &v));
        let r = phi.renormalize();
        rec.max_renormalization = rec.max_renormalization.max(r);
        rec.increments.push(Increment::Diffusion(db));
    };

    for &t_end in &grid[1..] {
        while jump_at <= t_end {
            if jump_at > t {
                diffuse(&mut rec, &mut phi, &mut rng, jump_at - t);
                rec.times.push(jump_at);
                rec.elements.push(phi);
                t = jump_at;
            }
            let k = picker.as_ref().expect("jumps need atoms").sample(&mut rng);
            phi = phi.mul(&spec.nu.atoms[k].0);
            phi.renormalize();
            rec.increments.push(Increment::Jump(k));
            rec.times.push(t);
            rec.elements.push(phi);
            jump_at = next_jump(&mut rng, jump_at);
        }
        if t_end > t {
            diffuse(&mut rec, &mut phi, &mut rng, t_end - t);
            rec.times.push(t_end);
            rec.elements.push(phi);
            t = t_end;
        }
        rec.grid_points.push(rec.times.len() - 1);
    }
    Ok(rec)
}

/// Paths `0..count` in parallel, returned in index order.
pub fn simulate_ensemble<T: Scalar>(spec: &GroupProcessSpec<T>, count: usize) -> Result<Vec<PathRecord<T>>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| simulate_path(spec, i))
        .collect()
}

/// Subordinator paths on a regular grid.
#[derive(Clone, Debug)]
pub struct SubordinatorEnsemble<T> {
    pub times: Vec<T>,
    /// `values[path][k] = T(times[k])`.
    pub values: Vec<Vec<T>>,
}

impl<T: Scalar> SubordinatorEnsemble<T> {
    /// Sample mean and standard error of `e^{-u T(times[k])}`.
    pub fn laplace(&self, k: usize, u: T) -> (T, T) {
        let xs: Vec<T> = self.values.iter().map(|p| (-u * p[k]).exp()).collect();
        mean_stderr(&xs)
    }
}

/// `T(t) = c t + Σ jumps` with exact Poisson times; the Lévy measure must be
/// atomic (discretize densities first).
pub fn simulate_subordinator<T: Scalar>(
    h: &BernsteinSpec<T>,
    horizon: T,
    dt: T,
    seed: u64,
    paths: usize,
) -> Result<SubordinatorEnsemble<T>> {
    if h.density.is_some() {
        return Err(Error::InvalidInput(
            "subordinator simulation needs an atomic measure; discretize the density first".into(),
        ));
    }
    if !(dt > T::zero() && horizon >= dt) {
        return Err(Error::InvalidInput(format!("need 0 < dt <= T, got dt={dt} T={horizon}")));
    }
    let lambda = h.total_intensity();
    let picker = if h.atoms.is_empty() {
        None
    } else {
        let w: Vec<f64> = h.atoms.iter().map(|a| crate::scalar::to_f64(a.1)).collect();
        Some(WeightedIndex::new(w).map_err(|e| Error::InvalidInput(e.to_string()))?)
    };
    let times = regular_grid(horizon, dt);
    let values = (0..paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, Purpose::Subordinator, i);
            let mut jumps = T::zero();
            let mut jump_at = T::infinity();
            if lambda > T::zero() {
                let e: f64 = Exp1.sample(&mut rng);
                jump_at = lit::<T>(e) / lambda;
            }
            times
                .iter()
                .map(|&t| {
                    while jump_at <= t {
                        let k = picker.as_ref().expect("positive intensity has atoms").sample(&mut rng);
                        jumps += h.atoms[k].0;
                        let e: f64 = Exp1.sample(&mut rng);
                        jump_at += lit::<T>(e) / lambda;
                    }
                    h.c * t + jumps
                })
                .collect()
        })
        .collect();
    Ok(SubordinatorEnsemble { times, values })
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr<T: Scalar>(xs: &[T]) -> (T, T) {
    let n = from_usize::<T>(xs.len());
    let mean = xs.iter().fold(T::zero(), |s, x| s + *x) / n;
    if xs.len() < 2 {
        return (mean, T::zero());
    }
    let var = xs.iter().fold(T::zero(), |s, x| s + (*x - mean).powi(2)) / (n - T::one());
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(group: GroupKind, c: f64, nu: GroupLevyMeasure<f64>) -> GroupProcessSpec<f64> {
        let n = group.algebra_dim();
        GroupProcessSpec::new(group, c, vec![0.0; n], nu, 1.0, 0.1, 3).unwrap()
    }

    #[test]
    fn still_process_stays_at_identity() {
        let s = spec(GroupKind::Su2, 0.0, GroupLevyMeasure::empty(GroupKind::Su2));
        let p = simulate_path(&s, 0).unwrap();
        assert_eq!(p.grid_points.len(), 11);
        assert!(p.elements.iter().all(|g| g.is_identity(0.0)));
    }

    #[test]
    fn paths_are_reproducible_and_distinct() {
        let nu = GroupLevyMeasure::new(GroupKind::T2, vec![(GroupElement::T2(0.5, 0.0), 2.0)]).unwrap();
        let s = spec(GroupKind::T2, 0.3, nu);
        let a = simulate_path(&s, 4).unwrap();
        let b = simulate_path(&s, 4).unwrap();
        let c = simulate_path(&s, 5).unwrap();
        assert_eq!(a.elements, b.elements);
        assert_ne!(a.elements, c.elements);
        assert_eq!(a.times.len(), a.elements.len());
        assert_eq!(a.increments.len() + 1, a.elements.len());
        assert!(a.times.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn su2_paths_stay_unitary() {
        let s = spec(GroupKind::Su2, 1.0, GroupLevyMeasure::empty(GroupKind::Su2));
        let p = simulate_path(&s, 1).unwrap();
        assert!(p.max_renormalization < 1e-10);
        if let GroupElement::Su2(q) = p.terminal() {
            assert!((q.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_subordinator_is_deterministic() {
        let e = simulate_subordinator(&BernsteinSpec::linear(0.7f64), 1.0, 0.25, 1, 3).unwrap();
        for p in &e.values {
            assert!((p[4] - 0.7).abs() < 1e-15);
        }
    }

    #[test]
    fn haar_sample_is_in_group() {
        let mut rng = stream_rng(1, Purpose::Start, 0);
        for _ in 0..10 {
            if let GroupElement::Su2(q) = sample_haar::<f64, _>(GroupKind::Su2, &mut rng) {
                assert!((q.norm() - 1.0).abs() < 1e-14);
            }
        }
    }
}
