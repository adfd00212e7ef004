//! Applying multiplier symbols: FFT on periodic grids, block maps on
//! Peter-Weyl coefficients, discrete L^p norms and operator-norm probes.
//!
//! Grid transforms use the forward kernel `e^{+2πi ξ·x}` and the lattice
//! `k ∈ [-N/2, N/2)` per axis, with `ξ = k / L` for period `L`.

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::{FftDirection, FftNum, FftPlanner};

use crate::error::{Error, Result};
use crate::group::{pw_inverse_grid, HaarGrid, Irrep, IrrepLabel, PeterWeylCoeffs};
use crate::linalg::{CMat, Mat};
use crate::scalar::{from_i64, from_usize, lit, to_f64, Scalar};

/// Scalar type usable on FFT grids.
pub trait GridScalar: Scalar + FftNum {}
impl<T: Scalar + FftNum> GridScalar for T {}

/// Complex samples on a uniform periodic grid over `[0, L_1) x ... x [0, L_n)`,
/// row-major with the last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    dims: Vec<usize>,
    period: Vec<T>,
    values: Vec<Complex<T>>,
}

impl<T: GridScalar> GridFunction<T> {
    pub fn new(dims: Vec<usize>, period: Vec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if dims.is_empty() || dims.len() != period.len() {
            return Err(Error::InvalidInput("grid needs one period per axis".into()));
        }
        if let Some(n) = dims.iter().find(|n| !n.is_power_of_two() || **n < 2) {
            return Err(Error::InvalidInput(format!("grid size {n} is not a power of two")));
        }
        if period.iter().any(|l| !(*l > T::zero() && l.is_finite())) {
            return Err(Error::InvalidInput("grid periods must be positive".into()));
        }
        if values.len() != dims.iter().product::<usize>() {
            return Err(Error::InvalidInput(format!(
                "{} values for a grid of shape {dims:?}",
                values.len()
            )));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("grid values".into()));
        }
        Ok(Self {
            dims,
            period,
            values,
        })
    }

    pub fn from_fn<F: Fn(&[T]) -> Complex<T>>(dims: Vec<usize>, period: Vec<T>, f: F) -> Result<Self> {
        let total: usize = dims.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut x = vec![T::zero(); dims.len()];
        for flat in 0..total {
            let idx = unflatten(flat, &dims);
            for (a, xi) in x.iter_mut().enumerate() {
                *xi = period[a] * from_usize::<T>(idx[a]) / from_usize::<T>(dims[a]);
            }
            values.push(f(&x));
        }
        Self::new(dims, period, values)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn period(&self) -> &[T] {
        &self.period
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn with_values(&self, values: Vec<Complex<T>>) -> Self {
        Self {
            dims: self.dims.clone(),
            period: self.period.clone(),
            values,
        }
    }

    /// Normalized spectrum `F(k) = N^{-1} Σ_x f(x) e^{+2πi k·x/L}` in FFT
    /// bin order.
    pub fn spectrum(&self) -> Vec<Complex<T>> {
        let mut data = self.values.clone();
        fft_nd(&mut data, &self.dims, FftDirection::Inverse);
        let scale = T::one() / from_usize::<T>(self.len());
        data.iter_mut().for_each(|z| *z = *z * scale);
        data
    }

    /// Inverse of [`spectrum`](Self::spectrum).
    pub fn from_spectrum(&self, spec: Vec<Complex<T>>) -> Self {
        let mut data = spec;
        fft_nd(&mut data, &self.dims, FftDirection::Forward);
        self.with_values(data)
    }

    /// Physical frequency of FFT bin `flat`.
    pub fn frequency(&self, flat: usize) -> Vec<T> {
        lattice_index(flat, &self.dims)
            .iter()
            .zip(&self.period)
            .map(|(&k, &l)| from_i64::<T>(k) / l)
            .collect()
    }

    /// Largest `|k_a|` over axes with a nonzero spectral coefficient.
    pub fn band(&self, tol: T) -> u32 {
        self.spectrum()
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > tol)
            .map(|(i, _)| {
                lattice_index(i, &self.dims)
                    .iter()
                    .map(|k| k.unsigned_abs() as u32)
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }
}

fn unflatten(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for a in (0..dims.len()).rev() {
        idx[a] = flat % dims[a];
        flat /= dims[a];
    }
    idx
}

/// Signed lattice coordinates `k ∈ [-N/2, N/2)` of an FFT bin.
pub fn lattice_index(flat: usize, dims: &[usize]) -> Vec<i64> {
    unflatten(flat, dims)
        .iter()
        .zip(dims)
        .map(|(&q, &n)| if q < n / 2 { q as i64 } else { q as i64 - n as i64 })
        .collect()
}

fn fft_nd<T: GridScalar>(data: &mut [Complex<T>], dims: &[usize], dir: FftDirection) {
    let mut planner = FftPlanner::<T>::new();
    let total = data.len();
    let mut stride = 1;
    for a in (0..dims.len()).rev() {
        let n = dims[a];
        let fft = planner.plan_fft(n, dir);
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        let block = stride * n;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                for (j, z) in line.iter_mut().enumerate() {
                    *z = data[outer + inner + j * stride];
                }
                fft.process(&mut line);
                for (j, z) in line.iter().enumerate() {
                    data[outer + inner + j * stride] = *z;
                }
            }
        }
        stride *= n;
    }
}

/// What a symbol does at the zero frequency (or trivial representation),
/// where Riesz-type symbols are undefined.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum ZeroMode<T> {
    /// Annihilate the mean.
    #[default]
    Zero,
    Value(Complex<T>),
    /// Call the symbol there as well.
    Evaluate,
}

/// Multiplies the spectrum of `f` by `m(ξ)` and transforms back.
pub fn apply_symbol_grid<T, F>(m: F, f: &GridFunction<T>, zero: ZeroMode<T>) -> Result<GridFunction<T>>
where
    T: GridScalar,
    F: Fn(&[T]) -> Result<Complex<T>>,
{
    let table = symbol_on_lattice(&m, f.dims(), f.period(), zero)?;
    let spec: Vec<Complex<T>> = f.spectrum().iter().zip(&table).map(|(a, b)| *a * *b).collect();
    Ok(f.from_spectrum(spec))
}

/// `m` at every lattice frequency, in FFT bin order.
pub fn symbol_on_lattice<T, F>(
    m: &F,
    dims: &[usize],
    period: &[T],
    zero: ZeroMode<T>,
) -> Result<Vec<Complex<T>>>
where
    T: GridScalar,
    F: Fn(&[T]) -> Result<Complex<T>>,
{
    let total: usize = dims.iter().product();
    (0..total)
        .map(|flat| {
            let k = lattice_index(flat, dims);
            let v = if k.iter().all(|x| *x == 0) {
                match zero {
                    ZeroMode::Zero => Complex::new(T::zero(), T::zero()),
                    ZeroMode::Value(c) => c,
                    ZeroMode::Evaluate => m(&vec![T::zero(); dims.len()])?,
                }
            } else {
                let xi: Vec<T> = k
                    .iter()
                    .zip(period)
                    .map(|(&k, &l)| from_i64::<T>(k) / l)
                    .collect();
                m(&xi)?
            };
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite(format!("symbol at lattice point {k:?}")));
            }
            Ok(v)
        })
        .collect()
}

/// `max |m|` over the lattice.
pub fn lattice_sup<T, F>(m: &F, dims: &[usize], period: &[T], zero: ZeroMode<T>) -> Result<T>
where
    T: GridScalar,
    F: Fn(&[T]) -> Result<Complex<T>>,
{
    Ok(symbol_on_lattice(m, dims, period, zero)?
        .iter()
        .fold(T::zero(), |s, z| s.max(z.norm())))
}

/// Per-irrep symbol matrices.
pub type SymbolTable<T> = BTreeMap<IrrepLabel, CMat<T>>;

/// Tabulates a symbol over the irreps of `coeffs`' band, with the trivial
/// representation handled by `zero`.
pub fn symbol_table<T, F>(
    coeffs: &PeterWeylCoeffs<T>,
    f: F,
    zero: ZeroMode<T>,
) -> Result<SymbolTable<T>>
where
    T: Scalar,
    F: Fn(&Irrep<T>) -> Result<CMat<T>>,
{
    coeffs
        .blocks
        .keys()
        .map(|l| {
            let pi = Irrep::new(*l);
            let m = if l.is_trivial() {
                match zero {
                    ZeroMode::Zero => Mat::zeros(pi.dim, pi.dim),
                    ZeroMode::Value(c) => Mat::scalar(pi.dim, c),
                    ZeroMode::Evaluate => f(&pi)?,
                }
            } else {
                f(&pi)?
            };
            Ok((*l, m))
        })
        .collect()
}

/// Blockwise `m(π) f̂(π)`.
pub fn apply_symbol_coeffs<T: Scalar>(
    symbol: &SymbolTable<T>,
    coeffs: &PeterWeylCoeffs<T>,
) -> Result<PeterWeylCoeffs<T>> {
    let mut out = coeffs.clone();
    for (l, b) in out.blocks.iter_mut() {
        let m = symbol.get(l).ok_or_else(|| Error::MissingLabel(l.to_string()))?;
        *b = m.matmul(b);
    }
    Ok(out)
}

fn check_exponent<T: Scalar>(p: T) -> Result<()> {
    if !(p > T::one() && p.is_finite()) {
        return Err(Error::InvalidExponent(to_f64(p)));
    }
    Ok(())
}

/// `(mean |f|^p)^{1/p}` over the grid (normalized measure).
pub fn lp_norm<T: GridScalar>(f: &GridFunction<T>, p: T) -> Result<T> {
    let w = T::one() / from_usize::<T>(f.len());
    let weights = vec![w; f.len()];
    lp_norm_weighted(f.values(), &weights, p)
}

/// `(Σ w |f|^p)^{1/p}`.
pub fn lp_norm_weighted<T: Scalar>(values: &[Complex<T>], weights: &[T], p: T) -> Result<T> {
    check_exponent(p)?;
    let s = values
        .iter()
        .zip(weights)
        .fold(T::zero(), |acc, (z, w)| acc + *w * z.norm().powf(p));
    Ok(s.powf(T::one() / p))
}

/// `|∫ f conj(g) - Σ d_π tr(f̂ ĝ^*)|`, the integral by exact Haar quadrature.
pub fn plancherel_residual<T: Scalar>(f: &PeterWeylCoeffs<T>, g: &PeterWeylCoeffs<T>) -> Result<T> {
    if f.group != g.group {
        return Err(Error::InvalidInput("coefficient tables on different groups".into()));
    }
    let grid = HaarGrid::new(f.group, f.band.max(g.band));
    let fv = pw_inverse_grid(f, &grid)?;
    let gv = pw_inverse_grid(g, &grid)?;
    let prod: Vec<Complex<T>> = fv.iter().zip(&gv).map(|(a, b)| *a * b.conj()).collect();
    Ok((grid.integrate(&prod) - f.plancherel_inner(g)).norm())
}

/// Grid version: `|mean(f conj g) - Σ F conj(G)|`.
pub fn plancherel_residual_grid<T: GridScalar>(f: &GridFunction<T>, g: &GridFunction<T>) -> Result<T> {
    if f.dims() != g.dims() {
        return Err(Error::InvalidInput("grids of different shape".into()));
    }
    let n = from_usize::<T>(f.len());
    let direct = f
        .values()
        .iter()
        .zip(g.values())
        .fold(Complex::new(T::zero(), T::zero()), |a, (x, y)| a + *x * y.conj())
        / n;
    let spectral = f
        .spectrum()
        .iter()
        .zip(&g.spectrum())
        .fold(Complex::new(T::zero(), T::zero()), |a, (x, y)| a + *x * y.conj());
    Ok((direct - spectral).norm())
}

/// Samples of the trigonometric polynomial `Σ f̂(k) e^{i k·θ}` on a T1 or T2
/// coefficient table, at `θ = 2π x` on an `n`-point-per-axis unit grid.
pub fn torus_coeffs_to_grid<T: GridScalar>(coeffs: &PeterWeylCoeffs<T>, n: usize) -> Result<GridFunction<T>> {
    let axes = coeffs.group.algebra_dim();
    if !coeffs.group.is_abelian() {
        return Err(Error::InvalidInput("grid sampling needs a torus".into()));
    }
    let two_pi = T::PI() * lit(2.0);
    GridFunction::from_fn(vec![n; axes], vec![T::one(); axes], |x| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (l, b) in &coeffs.blocks {
            let phase = match *l {
                IrrepLabel::T1(k) => from_i64::<T>(k) * x[0],
                IrrepLabel::T2(k1, k2) => from_i64::<T>(k1) * x[0] + from_i64::<T>(k2) * x[1],
                IrrepLabel::Su2 { .. } => T::zero(),
            } * two_pi;
            acc = acc + b[(0, 0)] * Complex::new(phase.cos(), phase.sin());
        }
        acc
    })
}

/// Settings for [`norm_lower_bound_search`].
#[derive(Clone, Debug)]
pub struct NormSearch<T> {
    /// Grid points per axis (power of two).
    pub n: usize,
    pub axes: usize,
    /// Spectral band of the trial functions, at most `n / 4`.
    pub band: u32,
    pub p: T,
    pub trials: usize,
    /// Nonlinear power-method steps per trial.
    pub power_steps: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct NormSearchResult<T> {
    /// Largest `‖Sf‖_p / ‖f‖_p` seen: a lower bound on the operator norm.
    pub best_ratio: T,
    pub witness: GridFunction<T>,
    /// Best ratio per trial, in trial order.
    pub trial_ratios: Vec<T>,
}

/// Random band-limited probes of `‖S‖_{p→p}` for the multiplier `m`, each
/// followed by power steps `f ← P J_{p'}(S^* J_p(S f))` with `J_q(g) =
/// |g|^{q-2} g` and `P` the projection onto the band.
pub fn norm_lower_bound_search<T, F>(m: F, zero: ZeroMode<T>, cfg: &NormSearch<T>) -> Result<NormSearchResult<T>>
where
    T: GridScalar,
    F: Fn(&[T]) -> Result<Complex<T>> + Sync,
{
    check_exponent(cfg.p)?;
    if cfg.trials == 0 {
        return Err(Error::InvalidInput("norm search needs at least one trial".into()));
    }
    if cfg.band as usize > cfg.n / 4 || cfg.band == 0 {
        return Err(Error::InvalidInput(format!(
            "band {} must lie in 1..={} for grid size {}",
            cfg.band,
            cfg.n / 4,
            cfg.n
        )));
    }
    let dims = vec![cfg.n; cfg.axes];
    let period = vec![T::one(); cfg.axes];
    let table = symbol_on_lattice(&m, &dims, &period, zero)?;
    let in_band: Vec<bool> = (0..table.len())
        .map(|i| {
            lattice_index(i, &dims)
                .iter()
                .all(|k| k.unsigned_abs() <= cfg.band as u64)
        })
        .collect();
    let q = cfg.p / (cfg.p - T::one());
    let trials: Vec<(T, GridFunction<T>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| -> Result<(T, GridFunction<T>)> {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(trial as u64);
            let spec: Vec<Complex<T>> = in_band
                .iter()
                .map(|&inside| {
                    if inside {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        Complex::new(lit(re), lit(im))
                    } else {
                        Complex::new(T::zero(), T::zero())
                    }
                })
                .collect();
            let zero_fn = GridFunction::new(
                dims.clone(),
                period.clone(),
                vec![Complex::new(T::zero(), T::zero()); table.len()],
            )?;
            // real part keeps the probe real-valued and inside the band
            let mut f = zero_fn.from_spectrum(spec);
            f = f.with_values(f.values.iter().map(|z| Complex::new(z.re, T::zero())).collect());
            let mut best = T::zero();
            let mut witness = f.clone();
            for step in 0..=cfg.power_steps {
                let nf = lp_norm(&f, cfg.p)?;
                if !(nf > T::epsilon()) {
                    break;
                }
                let sf = multiply(&f, &table, false);
                let ratio = lp_norm(&sf, cfg.p)? / nf;
                if ratio > best {
                    best = ratio;
                    witness = f.clone();
                }
                if step == cfg.power_steps {
                    break;
                }
                let g = duality_map(&sf, cfg.p);
                let h = multiply(&g, &table, true);
                let next = duality_map(&h, q);
                let projected: Vec<Complex<T>> = next
                    .spectrum()
                    .iter()
                    .zip(&in_band)
                    .map(|(z, &inside)| if inside { *z } else { Complex::new(T::zero(), T::zero()) })
                    .collect();
                f = next.from_spectrum(projected);
            }
            Ok((best, witness))
        })
        .collect::<Result<_>>()?;
    let (best_idx, _) = trials
        .iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |(bi, bv), (i, (r, _))| {
            if *r > bv {
                (i, *r)
            } else {
                (bi, bv)
            }
        });
    Ok(NormSearchResult {
        best_ratio: trials[best_idx].0,
        witness: trials[best_idx].1.clone(),
        trial_ratios: trials.iter().map(|t| t.0).collect(),
    })
}

fn multiply<T: GridScalar>(f: &GridFunction<T>, table: &[Complex<T>], adjoint: bool) -> GridFunction<T> {
    let spec = f
        .spectrum()
        .iter()
        .zip(table)
        .map(|(a, m)| if adjoint { *a * m.conj() } else { *a * *m })
        .collect();
    f.from_spectrum(spec)
}

fn duality_map<T: GridScalar>(f: &GridFunction<T>, p: T) -> GridFunction<T> {
    let e = p - lit(2.0);
    f.with_values(
        f.values
            .iter()
            .map(|z| {
                let r = z.norm();
                if r == T::zero() {
                    *z
                } else {
                    *z * r.powf(e)
                }
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid::riesz2_symbol_rn;

    fn cos_grid() -> GridFunction<f64> {
        GridFunction::from_fn(vec![16, 16], vec![1.0, 1.0], |x| {
            Complex::new((2.0 * std::f64::consts::PI * x[0]).cos(), 0.0)
        })
        .unwrap()
    }

    #[test]
    fn identity_and_zero_symbols() {
        let f = cos_grid();
        let one = |_: &[f64]| Ok(Complex::new(1.0, 0.0));
        let g = apply_symbol_grid(one, &f, ZeroMode::Evaluate).unwrap();
        for (a, b) in f.values().iter().zip(g.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        let zero = |_: &[f64]| Ok(Complex::new(0.0, 0.0));
        let g = apply_symbol_grid(zero, &f, ZeroMode::Zero).unwrap();
        assert!(g.values().iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn riesz_difference_fixes_first_axis_cosine() {
        let c = Mat::diag(&[Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)]);
        let f = cos_grid();
        let g = apply_symbol_grid(|xi: &[f64]| riesz2_symbol_rn(&c, xi), &f, ZeroMode::Zero).unwrap();
        for (a, b) in f.values().iter().zip(g.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn forward_kernel_sign() {
        // f = e^{-2πi x} has its coefficient at k = +1 under e^{+2πi k x}
        let f = GridFunction::from_fn(vec![8], vec![1.0], |x| {
            Complex::new(0.0, -2.0 * std::f64::consts::PI * x[0]).exp()
        })
        .unwrap();
        let s = f.spectrum();
        assert!((s[1] - Complex::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lp_norm_examples() {
        let c = GridFunction::from_fn(vec![8], vec![1.0], |_| Complex::new(-3.0, 0.0)).unwrap();
        assert!((lp_norm(&c, 3.0f64).unwrap() - 3.0).abs() < 1e-14);
        let half = GridFunction::from_fn(vec![8], vec![1.0], |x| {
            Complex::new(if x[0] < 0.5 { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        assert!((lp_norm(&half, 2.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(lp_norm(&half, 1.0).is_err());
    }

    #[test]
    fn missing_label_is_reported() {
        let coeffs = PeterWeylCoeffs::<f64>::zero(crate::group::GroupKind::T1, 2);
        let table = SymbolTable::new();
        assert!(matches!(
            apply_symbol_coeffs(&table, &coeffs),
            Err(Error::MissingLabel(_))
        ));
    }

    #[test]
    fn norm_search_on_identity_and_constant() {
        let cfg = NormSearch {
            n: 16,
            axes: 2,
            band: 3,
            p: 3.0,
            trials: 4,
            power_steps: 3,
            seed: 5,
        };
        let r = norm_lower_bound_search(|_: &[f64]| Ok(Complex::new(1.0, 0.0)), ZeroMode::Evaluate, &cfg)
            .unwrap();
        assert!((r.best_ratio - 1.0).abs() < 1e-9);
        let r = norm_lower_bound_search(|_: &[f64]| Ok(Complex::new(0.0, -2.5)), ZeroMode::Evaluate, &cfg)
            .unwrap();
        assert!((r.best_ratio - 2.5).abs() < 1e-9);
    }
}
