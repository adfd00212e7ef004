//! Martingale transcripts along simulated paths.
//!
//! `M(t) = (P_{T-t} f)(σ φ(t))` is evaluated exactly from the Peter-Weyl
//! coefficients. The transform accumulates left-point Brownian integrals and
//! compensated jump integrals with the same integrands, so with `A = I`,
//! `ψ = 1` it coincides bit for bit with the stochastic-integral part of `M`
//! (`m_stochastic`). The gap between `M(t) - M(0)` and `m_stochastic` is the
//! time-discretization error and is reported, not assumed zero.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use super::{sample_haar, simulate_path, stream_rng, GroupProcessSpec, Increment, PathRecord, Purpose};
use crate::error::{Error, Result};
use crate::group::{generator_block, irrep_evaluate, GroupElement, Irrep, PeterWeylCoeffs};
use crate::linalg::{CMat, Mat};
use crate::scalar::{from_usize, lit, Scalar};

struct Block<T> {
    pi: Irrep<T>,
    fhat: CMat<T>,
    generator: CMat<T>,
    /// Set when the generator block is a multiple of the identity.
    scalar: Option<Complex<T>>,
    jump_reps: Vec<CMat<T>>,
}

/// `P_s f` and its derivatives at arbitrary points, for a band-limited `f`.
pub struct SpectralEvaluator<T> {
    group: crate::group::GroupKind,
    band: u32,
    blocks: Vec<Block<T>>,
    sqrt2c: T,
    masses: Vec<T>,
}

/// Value of `u = P_s f` at a point, with `∇_Y u` and `u(gτ_k) - u(g)`.
#[derive(Clone, Debug)]
pub struct PointValue<T> {
    pub value: Complex<T>,
    pub grad: Vec<Complex<T>>,
    pub jumps: Vec<Complex<T>>,
}

impl<T: Scalar> SpectralEvaluator<T> {
    pub fn new(spec: &GroupProcessSpec<T>, f: &PeterWeylCoeffs<T>) -> Result<Self> {
        if f.group != spec.group {
            return Err(Error::InvalidInput("function and process on different groups".into()));
        }
        let mut blocks = Vec::new();
        for (l, b) in &f.blocks {
            let pi = Irrep::new(*l);
            let generator = generator_block(&spec.drift, spec.c, &spec.nu, &pi)?;
            let diag = generator.trace() / from_usize::<T>(pi.dim);
            let off = &generator - &Mat::scalar(pi.dim, diag);
            let scalar = (off.max_abs() <= lit::<T>(1e-14) * (T::one() + generator.max_abs())).then_some(diag);
            let jump_reps = spec
                .nu
                .atoms
                .iter()
                .map(|(tau, _)| irrep_evaluate(&pi, tau))
                .collect::<Result<_>>()?;
            blocks.push(Block {
                pi,
                fhat: b.clone(),
                generator,
                scalar,
                jump_reps,
            });
        }
        Ok(Self {
            group: spec.group,
            band: f.band,
            blocks,
            sqrt2c: (spec.c * lit(2.0)).sqrt(),
            masses: spec.nu.atoms.iter().map(|a| a.1).collect(),
        })
    }

    fn block_at(b: &Block<T>, s: T) -> CMat<T> {
        match b.scalar {
            Some(z) => b.fhat.scale((z * s).exp()),
            None => b.generator.scale_real(s).expm().matmul(&b.fhat),
        }
    }

    /// Coefficients of `P_s f`: `exp(s L(π)) f̂(π)`.
    pub fn coeffs_at(&self, s: T) -> PeterWeylCoeffs<T> {
        let mut out = PeterWeylCoeffs::zero(self.group, self.band);
        for b in &self.blocks {
            out.blocks.insert(b.pi.label, Self::block_at(b, s));
        }
        out
    }

    pub fn evaluate(&self, s: T, g: &GroupElement<T>) -> Result<PointValue<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        let n = self.group.algebra_dim();
        let mut value = zero;
        let mut grad = vec![zero; n];
        let mut shifted = vec![zero; self.masses.len()];
        for b in &self.blocks {
            let d = from_usize::<T>(b.pi.dim);
            let up = Self::block_at(b, s).matmul(&irrep_evaluate(&b.pi, g)?);
            value = value + up.trace() * d;
            for (gj, x) in grad.iter_mut().zip(&b.pi.generators) {
                *gj = *gj + up.trace_of_product(x) * d;
            }
            for (sk, r) in shifted.iter_mut().zip(&b.jump_reps) {
                *sk = *sk + up.trace_of_product(r) * d;
            }
        }
        grad.iter_mut().for_each(|x| *x = *x * self.sqrt2c);
        let jumps = shifted.into_iter().map(|v| v - value).collect();
        Ok(PointValue { value, grad, jumps })
    }

    pub fn value(&self, s: T, g: &GroupElement<T>) -> Result<Complex<T>> {
        let mut value = Complex::new(T::zero(), T::zero());
        for b in &self.blocks {
            let up = Self::block_at(b, s).matmul(&irrep_evaluate(&b.pi, g)?);
            value = value + up.trace() * from_usize::<T>(b.pi.dim);
        }
        Ok(value)
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }
}

type AFn<T> = dyn Fn(T, &GroupElement<T>) -> Mat<T> + Send + Sync;
type PsiFn<T> = dyn Fn(T, &GroupElement<T>, usize) -> T + Send + Sync;

/// Transform coefficients `A(T-s, φ(s-))` and `ψ(T-s, φ(s-), τ_k)`; the
/// first argument is the remaining time.
#[derive(Clone)]
pub struct Transform<T> {
    a: Arc<AFn<T>>,
    psi: Arc<PsiFn<T>>,
}

impl<T: Scalar> Transform<T> {
    pub fn new<A, P>(a: A, psi: P) -> Self
    where
        A: Fn(T, &GroupElement<T>) -> Mat<T> + Send + Sync + 'static,
        P: Fn(T, &GroupElement<T>, usize) -> T + Send + Sync + 'static,
    {
        Self {
            a: Arc::new(a),
            psi: Arc::new(psi),
        }
    }

    pub fn constant(a: Mat<T>, psi: T) -> Self {
        Self::new(move |_, _| a.clone(), move |_, _, _| psi)
    }

    /// Constant `A`, one `ψ` value per atom.
    pub fn per_atom(a: Mat<T>, psi: Vec<T>) -> Self {
        Self::new(move |_, _| a.clone(), move |_, _, k| psi[k])
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(Mat::identity(n), T::one())
    }

    pub fn zero(n: usize) -> Self {
        Self::constant(Mat::zeros(n, n), T::zero())
    }

    pub fn a(&self, remaining: T, g: &GroupElement<T>) -> Mat<T> {
        (self.a)(remaining, g)
    }

    pub fn psi(&self, remaining: T, g: &GroupElement<T>, atom: usize) -> T {
        (self.psi)(remaining, g, atom)
    }
}

impl<T> std::fmt::Debug for Transform<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Transform(..)")
    }
}

/// Arrays over the event times of one path.
#[derive(Clone, Debug)]
pub struct MartingaleTranscript<T> {
    pub sigma: GroupElement<T>,
    pub times: Vec<T>,
    /// `M(t_k) = (P_{T-t_k} f)(σ φ(t_k))`.
    pub m: Vec<Complex<T>>,
    /// Brownian plus compensated jump integrals of `M`, starting at 0.
    pub m_stochastic: Vec<Complex<T>>,
    /// `M^{A,ψ}(t_k)`.
    pub transform: Vec<Complex<T>>,
    pub qv: Vec<T>,
    pub qv_transform: Vec<T>,
    /// Per-step increments of `[M]`, `[M^{A,ψ}]` and `Re [M^{A,ψ}, M]`.
    pub dqv: Vec<T>,
    pub dqv_transform: Vec<T>,
    pub dqv_cross: Vec<T>,
    pub grid_points: Vec<usize>,
}

impl<T: Scalar> MartingaleTranscript<T> {
    pub fn terminal_m(&self) -> Complex<T> {
        *self.m.last().expect("transcript is nonempty")
    }

    pub fn terminal_transform(&self) -> Complex<T> {
        *self.transform.last().expect("transcript is nonempty")
    }

    /// `max_k |M(t_k) - M(0) - m_stochastic(t_k)|`.
    pub fn representation_gap(&self) -> T {
        let m0 = self.m[0];
        self.m
            .iter()
            .zip(&self.m_stochastic)
            .fold(T::zero(), |acc, (m, s)| acc.max((*m - m0 - *s).norm()))
    }
}

/// `Σ_i w_i db_i - h Σ_k c_k Δ_k`.
fn brownian_increment<T: Scalar>(w: &[Complex<T>], db: &[T], h: T, weights: &[T], jumps: &[Complex<T>]) -> Complex<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let bm = w.iter().zip(db).fold(zero, |acc, (x, b)| acc + *x * *b);
    let comp = weights.iter().zip(jumps).fold(zero, |acc, (c, d)| acc + *d * *c);
    bm - comp * h
}

fn apply_real<T: Scalar>(a: &Mat<T>, v: &[Complex<T>]) -> Vec<Complex<T>> {
    (0..a.rows())
        .map(|i| (0..a.cols()).fold(Complex::new(T::zero(), T::zero()), |acc, j| acc + v[j] * a[(i, j)]))
        .collect()
}

/// Transcript of `M` and its transform by `(A, ψ)` along `path`, started at
/// `σ`. Integrands are evaluated at left limits.
pub fn martingale_transcript<T: Scalar>(
    spec: &GroupProcessSpec<T>,
    eval: &SpectralEvaluator<T>,
    path: &PathRecord<T>,
    transform: &Transform<T>,
    sigma: &GroupElement<T>,
) -> Result<MartingaleTranscript<T>> {
    let horizon = spec.horizon;
    let zero = Complex::new(T::zero(), T::zero());
    let npts = path.times.len();
    let mut points = Vec::with_capacity(npts);
    for (t, phi) in path.times.iter().zip(&path.elements) {
        points.push(eval.evaluate(horizon - *t, &sigma.mul(phi))?);
    }
    let mut tr = MartingaleTranscript {
        sigma: *sigma,
        times: path.times.clone(),
        m: points.iter().map(|p| p.value).collect(),
        m_stochastic: vec![zero],
        transform: vec![zero],
        qv: vec![T::zero()],
        qv_transform: vec![T::zero()],
        dqv: Vec::with_capacity(npts),
        dqv_transform: Vec::with_capacity(npts),
        dqv_cross: Vec::with_capacity(npts),
        grid_points: path.grid_points.clone(),
    };
    for (k, inc) in path.increments.iter().enumerate() {
        let pt = &points[k];
        let remaining = horizon - path.times[k];
        let g = sigma.mul(&path.elements[k]);
        let (dm, dy, dq, dqa, dqx) = match inc {
            Increment::Diffusion(db) => {
                let h = path.times[k + 1] - path.times[k];
                let a = transform.a(remaining, &g);
                let av = apply_real(&a, &pt.grad);
                let masses = eval.masses();
                let weighted: Vec<T> = masses
                    .iter()
                    .enumerate()
                    .map(|(j, m)| *m * transform.psi(remaining, &g, j))
                    .collect();
                let dm = brownian_increment(&pt.grad, db, h, masses, &pt.jumps);
                let dy = brownian_increment(&av, db, h, &weighted, &pt.jumps);
                let nv = pt.grad.iter().fold(T::zero(), |s, x| s + x.norm_sqr());
                let nav = av.iter().fold(T::zero(), |s, x| s + x.norm_sqr());
                let cross = av
                    .iter()
                    .zip(&pt.grad)
                    .fold(T::zero(), |s, (x, y)| s + (*x * y.conj()).re);
                (dm, dy, nv * h, nav * h, cross * h)
            }
            Increment::Jump(j) => {
                let d = pt.jumps[*j];
                let psi = transform.psi(remaining, &g, *j);
                let n2 = d.norm_sqr();
                (d, d * psi, n2, psi * psi * n2, psi * n2)
            }
        };
        tr.m_stochastic.push(tr.m_stochastic[k] + dm);
        tr.transform.push(tr.transform[k] + dy);
        tr.qv.push(tr.qv[k] + dq);
        tr.qv_transform.push(tr.qv_transform[k] + dqa);
        tr.dqv.push(dq);
        tr.dqv_transform.push(dqa);
        tr.dqv_cross.push(dqx);
    }
    Ok(tr)
}

/// `max_k (ΔQV^{A,ψ}_k - ΔQV_k)`; nonpositive under differential
/// subordination.
pub fn check_differential_subordination<T: Scalar>(tr: &MartingaleTranscript<T>) -> T {
    tr.dqv
        .iter()
        .zip(&tr.dqv_transform)
        .map(|(q, qa)| *qa - *q)
        .fold(None, |acc: Option<T>, v| Some(acc.map_or(v, |a| a.max(v))))
        .unwrap_or(T::zero())
}

/// Largest decrease of `[(B-b)/2 X] - [Y - (b+B)/2 X]` over one step, with
/// `X = M`, `Y = M^{A,ψ}`.
pub fn check_nonsymmetric_subordination<T: Scalar>(tr: &MartingaleTranscript<T>, b: T, big_b: T) -> Result<T> {
    if !(b < big_b) {
        return Err(Error::InvalidInterval {
            b: crate::scalar::to_f64(b),
            big_b: crate::scalar::to_f64(big_b),
        });
    }
    let half_width = (big_b - b) / lit(2.0);
    let mid = (big_b + b) / lit(2.0);
    Ok((0..tr.dqv.len())
        .map(|k| {
            let lhs = half_width * half_width * tr.dqv[k];
            let rhs = tr.dqv_transform[k] - mid * lit(2.0) * tr.dqv_cross[k] + mid * mid * tr.dqv[k];
            rhs - lhs
        })
        .fold(None, |acc: Option<T>, v| Some(acc.map_or(v, |a| a.max(v))))
        .unwrap_or(T::zero()))
}

/// Simulates paths `0..paths` with Haar starting points and maps each
/// transcript through `reduce`, in path order.
pub fn transcript_ensemble<T, R, F>(
    spec: &GroupProcessSpec<T>,
    f: &PeterWeylCoeffs<T>,
    transform: &Transform<T>,
    paths: usize,
    reduce: F,
) -> Result<Vec<R>>
where
    T: Scalar,
    R: Send,
    F: Fn(&PathRecord<T>, &MartingaleTranscript<T>) -> Result<R> + Sync,
{
    let eval = SpectralEvaluator::new(spec, f)?;
    (0..paths as u64)
        .into_par_iter()
        .map(|i| {
            let path = simulate_path(spec, i)?;
            let sigma = sample_haar(spec.group, &mut stream_rng(spec.seed, Purpose::Start, i));
            let tr = martingale_transcript(spec, &eval, &path, transform, &sigma)?;
            reduce(&path, &tr)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupKind, GroupLevyMeasure, IrrepLabel};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn torus_setup(c: f64) -> (GroupProcessSpec<f64>, PeterWeylCoeffs<f64>) {
        let nu = GroupLevyMeasure::new(
            GroupKind::T2,
            vec![(GroupElement::T2(0.7, 0.0), 1.5), (GroupElement::T2(0.0, -1.1), 0.5)],
        )
        .unwrap();
        let spec = GroupProcessSpec::new(GroupKind::T2, c, vec![0.0, 0.0], nu, 1.0, 0.05, 11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = PeterWeylCoeffs::random_real(GroupKind::T2, 2, &mut rng);
        (spec, f)
    }

    #[test]
    fn identity_transform_matches_stochastic_part_exactly() {
        let (spec, f) = torus_setup(0.4);
        let eval = SpectralEvaluator::new(&spec, &f).unwrap();
        let path = simulate_path(&spec, 0).unwrap();
        let tr = martingale_transcript(&spec, &eval, &path, &Transform::identity(2), &GroupElement::T2(0.3, 1.0))
            .unwrap();
        assert_eq!(tr.transform, tr.m_stochastic);
        assert_eq!(tr.qv, tr.qv_transform);
        assert_eq!(check_differential_subordination(&tr), 0.0);
    }

    #[test]
    fn zero_transform_vanishes() {
        let (spec, f) = torus_setup(0.4);
        let eval = SpectralEvaluator::new(&spec, &f).unwrap();
        let path = simulate_path(&spec, 1).unwrap();
        let tr = martingale_transcript(&spec, &eval, &path, &Transform::zero(2), &GroupElement::T2(0.0, 0.0))
            .unwrap();
        assert!(tr.transform.iter().all(|z| z.norm() == 0.0));
        assert!(tr.qv_transform.iter().all(|q| *q == 0.0));
    }

    #[test]
    fn endpoints_and_monotone_qv() {
        let (spec, f) = torus_setup(0.4);
        let eval = SpectralEvaluator::new(&spec, &f).unwrap();
        let path = simulate_path(&spec, 2).unwrap();
        let sigma = GroupElement::T2(0.5, 0.25);
        let tr = martingale_transcript(&spec, &eval, &path, &Transform::constant(Mat::scalar(2, 0.5), 0.5), &sigma)
            .unwrap();
        let pt = crate::group::heat_coeffs(&f, 0.0);
        let direct = crate::group::pw_inverse(&pt, &[sigma.mul(path.terminal())]).unwrap()[0];
        assert!((tr.terminal_m() - direct).norm() < 1e-12);
        let p_t = eval.coeffs_at(1.0);
        let m0 = crate::group::pw_inverse(&p_t, &[sigma]).unwrap()[0];
        assert!((tr.m[0] - m0).norm() < 1e-12);
        assert!(tr.qv.windows(2).all(|w| w[1] >= w[0]));
        assert!(check_differential_subordination(&tr) < 0.0 || tr.dqv.iter().all(|q| *q == 0.0));
    }

    #[test]
    fn heat_evaluator_matches_heat_coeffs() {
        let spec = GroupProcessSpec::new(
            GroupKind::Su2,
            1.0,
            vec![0.0; 3],
            GroupLevyMeasure::empty(GroupKind::Su2),
            1.0,
            0.1,
            0,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = PeterWeylCoeffs::random(GroupKind::Su2, 2, &mut rng);
        let eval = SpectralEvaluator::new(&spec, &f).unwrap();
        let a = eval.coeffs_at(0.3);
        let b = crate::group::heat_coeffs(&f, 0.3);
        let label = IrrepLabel::Su2 { twice_spin: 2 };
        assert!((&a.blocks[&label] - &b.blocks[&label]).max_abs() < 1e-13);
    }
}
