//! Fourier multipliers on R^n built from a Lévy triple and a transform pair
//! `(A, ψ)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::levy::{dot, eval_symbol, factor_diffusion, one_minus_cos, LevyMeasureRn, LevyTriple};
use crate::linalg::{CMat, Mat};
use crate::quadrature::{graded_unit_rule, Accumulate, GaussLegendre};
use crate::scalar::{lit, to_f64, tolerance, Scalar};
use crate::special::gamma_one_minus_i;

/// Relative gap allowed between the coarse and refined time quadratures.
const TIME_TOL: f64 = 1e-8;
const MAX_TIME_PANELS: usize = 1 << 17;

/// Scalar function of time `s >= 0`.
#[derive(Clone)]
pub enum ScalarProfile<T> {
    Constant(Complex<T>),
    /// `(2s)^{-i gamma} / Gamma(1 - i gamma)`.
    ImaginaryPower { gamma: T },
    /// `Σ c_k e^{i omega_k s}` over `(c_k, omega_k)`.
    Trigonometric(Vec<(Complex<T>, T)>),
    Custom(Arc<dyn Fn(T) -> Complex<T> + Send + Sync>),
}

impl<T: Scalar> ScalarProfile<T> {
    pub fn eval(&self, s: T) -> Complex<T> {
        match self {
            Self::Constant(c) => *c,
            Self::ImaginaryPower { gamma } => {
                let phase = -*gamma * (s * lit(2.0)).ln();
                Complex::new(phase.cos(), phase.sin()) / gamma_one_minus_i(*gamma)
            }
            Self::Trigonometric(terms) => terms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (c, w)| {
                acc + *c * Complex::new(T::zero(), *w * s).exp()
            }),
            Self::Custom(f) => f(s),
        }
    }

    /// `E p(S)` for `S ~ Exp(rate)`, when known in closed form.
    pub fn exponential_mean(&self, rate: T) -> Option<Complex<T>> {
        match self {
            Self::Constant(c) => Some(*c),
            // E (2S)^{-i gamma} = (rate/2)^{i gamma} Gamma(1 - i gamma)
            Self::ImaginaryPower { gamma } => {
                let phase = *gamma * (rate / lit(2.0)).ln();
                Some(Complex::new(phase.cos(), phase.sin()))
            }
            Self::Trigonometric(terms) => Some(terms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (c, w)| {
                acc + *c * rate / Complex::new(rate, -*w)
            })),
            Self::Custom(_) => None,
        }
    }

    /// Exact supremum over `s`, when known in closed form.
    pub fn sup_norm(&self) -> Option<T> {
        match self {
            Self::Constant(c) => Some(c.norm()),
            Self::ImaginaryPower { gamma } => Some(T::one() / gamma_one_minus_i(*gamma).norm()),
            Self::Trigonometric(terms) if terms.len() == 1 => Some(terms[0].0.norm()),
            Self::Trigonometric(_) | Self::Custom(_) => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant(_))
    }
}

impl<T: fmt::Debug> fmt::Debug for ScalarProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Self::ImaginaryPower { gamma } => {
                f.debug_struct("ImaginaryPower").field("gamma", gamma).finish()
            }
            Self::Trigonometric(terms) => f.debug_tuple("Trigonometric").field(terms).finish(),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Matrix-valued function of time.
#[derive(Clone)]
pub enum MatrixProfile<T> {
    Constant(CMat<T>),
    /// `profile(s) * matrix`.
    Scaled {
        profile: ScalarProfile<T>,
        matrix: CMat<T>,
    },
    Custom(Arc<dyn Fn(T) -> CMat<T> + Send + Sync>),
}

impl<T: Scalar> MatrixProfile<T> {
    pub fn eval(&self, s: T) -> CMat<T> {
        match self {
            Self::Constant(m) => m.clone(),
            Self::Scaled { profile, matrix } => matrix.scale(profile.eval(s)),
            Self::Custom(f) => f(s),
        }
    }

    /// `w^T A(s) w` for a real vector `w`.
    pub fn quadratic_form(&self, s: T, w: &[T]) -> Complex<T> {
        match self {
            Self::Constant(m) => real_quadratic_form(m, w),
            Self::Scaled { profile, matrix } => profile.eval(s) * real_quadratic_form(matrix, w),
            Self::Custom(f) => real_quadratic_form(&f(s), w),
        }
    }

    /// `E w^T A(S) w` for `S ~ Exp(rate)`, when known in closed form.
    fn exponential_mean_form(&self, rate: T, w: &[T]) -> Option<Complex<T>> {
        match self {
            Self::Constant(m) => Some(real_quadratic_form(m, w)),
            Self::Scaled { profile, matrix } => {
                profile.exponential_mean(rate).map(|p| p * real_quadratic_form(matrix, w))
            }
            Self::Custom(_) => None,
        }
    }

    fn as_constant(&self) -> Option<&CMat<T>> {
        match self {
            Self::Constant(m) => Some(m),
            _ => None,
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for MatrixProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(m) => f.debug_tuple("Constant").field(m).finish(),
            Self::Scaled { profile, matrix } => f
                .debug_struct("Scaled")
                .field("profile", profile)
                .field("matrix", matrix)
                .finish(),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

fn real_quadratic_form<T: Scalar>(m: &CMat<T>, w: &[T]) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (i, &wi) in w.iter().enumerate() {
        for (j, &wj) in w.iter().enumerate() {
            acc = acc + m[(i, j)] * (wi * wj);
        }
    }
    acc
}

/// `ψ` on the density part of a Lévy measure.
#[derive(Clone)]
pub enum DensityPsi<T> {
    Constant(Complex<T>),
    /// `positive` where `y[axis] > 0`, `negative` elsewhere.
    HalfSpace {
        axis: usize,
        positive: Complex<T>,
        negative: Complex<T>,
    },
    Custom(Arc<dyn Fn(&[T]) -> Complex<T> + Send + Sync>),
}

impl<T: Scalar> DensityPsi<T> {
    pub fn eval(&self, y: &[T]) -> Complex<T> {
        match self {
            Self::Constant(c) => *c,
            Self::HalfSpace {
                axis,
                positive,
                negative,
            } => {
                if y.get(*axis).is_some_and(|v| *v > T::zero()) {
                    *positive
                } else {
                    *negative
                }
            }
            Self::Custom(f) => f(y),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for DensityPsi<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Self::HalfSpace {
                axis,
                positive,
                negative,
            } => f
                .debug_struct("HalfSpace")
                .field("axis", axis)
                .field("positive", positive)
                .field("negative", negative)
                .finish(),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Jump function `ψ(y)`.
#[derive(Clone, Debug)]
pub enum JumpPsi<T> {
    Constant(Complex<T>),
    /// One value per atom of the measure, in order, plus the density rule.
    Table {
        atom_values: Vec<Complex<T>>,
        density: DensityPsi<T>,
    },
    Function(DensityPsi<T>),
}

impl<T: Scalar> JumpPsi<T> {
    pub fn zero() -> Self {
        Self::Constant(Complex::new(T::zero(), T::zero()))
    }

    pub fn one() -> Self {
        Self::Constant(Complex::new(T::one(), T::zero()))
    }

    pub fn atom_value(&self, index: usize, point: &[T]) -> Result<Complex<T>> {
        match self {
            Self::Constant(c) => Ok(*c),
            Self::Table { atom_values, .. } => atom_values.get(index).copied().ok_or_else(|| {
                Error::InvalidInput(format!("psi table has no entry for atom {index}"))
            }),
            Self::Function(f) => Ok(f.eval(point)),
        }
    }

    pub fn density_value(&self, y: &[T]) -> Complex<T> {
        match self {
            Self::Constant(c) => *c,
            Self::Table { density, .. } | Self::Function(density) => density.eval(y),
        }
    }

    /// `∫ (1 - cos(xi·y)) ψ(y) ν(dy)`.
    pub fn weighted_jump_integral(&self, nu: &LevyMeasureRn<T>, xi: &[T]) -> Result<Complex<T>> {
        if let Self::Table { atom_values, .. } = self {
            if atom_values.len() != nu.atoms().len() {
                return Err(Error::InvalidInput(format!(
                    "psi table has {} entries for {} atoms",
                    atom_values.len(),
                    nu.atoms().len()
                )));
            }
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (k, atom) in nu.atoms().iter().enumerate() {
            let w = one_minus_cos(dot(xi, &atom.point));
            acc = acc + self.atom_value(k, &atom.point)? * (w * atom.mass);
        }
        // an even integrand against a radial density sees only the even part
        // of a half-space or constant ψ
        let even_part = match self {
            Self::Constant(c) => Some(*c),
            Self::Table { density, .. } | Self::Function(density) => match density {
                DensityPsi::Constant(c) => Some(*c),
                DensityPsi::HalfSpace { positive, negative, .. } => Some((*positive + *negative) * lit::<T>(0.5)),
                DensityPsi::Custom(_) => None,
            },
        };
        if let Some(c) = even_part {
            if let Some(radial) = nu.density_one_minus_cos(xi)? {
                return Ok(acc + c * radial);
            }
        }
        let freq = dot(xi, xi).sqrt();
        let dens: Complex<T> = nu.integrate_density(freq, |y| {
            let w = one_minus_cos(dot(xi, y));
            let v = self.density_value(y) * w;
            (v, v.norm())
        })?;
        Ok(acc + dens)
    }
}

/// Transform pair `(A, ψ)` with declared norm bounds.
///
/// `psi_time`, when present, multiplies `ψ` by a function of time, giving
/// `ψ(s, y) = psi_time(s) ψ(y)`.
#[derive(Clone, Debug)]
pub struct MultiplierSpec<T> {
    pub a: MatrixProfile<T>,
    pub psi: JumpPsi<T>,
    pub psi_time: Option<ScalarProfile<T>>,
    pub bound_a: T,
    pub bound_psi: T,
}

/// Number of time samples used when a bound cannot be read off in closed form.
const BOUND_SAMPLES: usize = 200;

impl<T: Scalar> MultiplierSpec<T> {
    pub fn constant(a: CMat<T>, psi: JumpPsi<T>, bound_a: T, bound_psi: T) -> Self {
        Self {
            a: MatrixProfile::Constant(a),
            psi,
            psi_time: None,
            bound_a,
            bound_psi,
        }
    }

    /// Measured `(sup_s ‖A(s)‖, sup ψ)`: closed forms where available,
    /// otherwise a log-spaced time grid, the atoms, and the density
    /// quadrature directions at unit radius.
    pub fn measured_bounds(&self, nu: &LevyMeasureRn<T>) -> Result<(T, T)> {
        let times: Vec<T> = (0..BOUND_SAMPLES)
            .map(|k| lit::<T>(10f64.powf(-6.0 + 12.0 * k as f64 / (BOUND_SAMPLES - 1) as f64)))
            .collect();
        let a_sup = match &self.a {
            MatrixProfile::Constant(m) => m.op_norm(),
            MatrixProfile::Scaled { profile, matrix } => {
                let s = profile.sup_norm().unwrap_or_else(|| {
                    times.iter().fold(T::zero(), |m, &t| m.max(profile.eval(t).norm()))
                });
                s * matrix.op_norm()
            }
            MatrixProfile::Custom(f) => times.iter().fold(T::zero(), |m, &t| m.max(f(t).op_norm())),
        };
        let time_sup = match &self.psi_time {
            None => T::one(),
            Some(p) => p.sup_norm().unwrap_or_else(|| {
                times.iter().fold(T::zero(), |m, &t| m.max(p.eval(t).norm()))
            }),
        };
        let mut psi_sup = T::zero();
        for (k, atom) in nu.atoms().iter().enumerate() {
            psi_sup = psi_sup.max(self.psi.atom_value(k, &atom.point)?.norm());
        }
        if nu.density().is_some() || nu.atoms().is_empty() {
            psi_sup = psi_sup.max(match &self.psi {
                JumpPsi::Constant(c) => c.norm(),
                JumpPsi::Table { density, .. } | JumpPsi::Function(density) => {
                    density_psi_sup(density, nu.dim())?
                }
            });
        }
        Ok((a_sup, psi_sup * time_sup))
    }

    /// Checks the declared bounds against [`measured_bounds`](Self::measured_bounds).
    pub fn verify_bounds(&self, nu: &LevyMeasureRn<T>) -> Result<()> {
        let (a, psi) = self.measured_bounds(nu)?;
        let slack = tolerance::<T>(1e-12);
        if a > self.bound_a + slack {
            return Err(Error::InvalidInput(format!(
                "declared bound {} on A is below the measured {}",
                self.bound_a, a
            )));
        }
        if psi > self.bound_psi + slack {
            return Err(Error::InvalidInput(format!(
                "declared bound {} on psi is below the measured {}",
                self.bound_psi, psi
            )));
        }
        Ok(())
    }

    pub fn declared_bound(&self) -> T {
        self.bound_a.max(self.bound_psi)
    }
}

fn density_psi_sup<T: Scalar>(psi: &DensityPsi<T>, dim: usize) -> Result<T> {
    Ok(match psi {
        DensityPsi::Constant(c) => c.norm(),
        DensityPsi::HalfSpace {
            positive, negative, ..
        } => positive.norm().max(negative.norm()),
        DensityPsi::Custom(f) => {
            let dirs = crate::levy::angular_rule::<T>(dim.clamp(1, 3), 32)?;
            let radii = [lit::<T>(1e-3), lit(0.1), T::one(), lit(10.0), lit(1e3)];
            let mut sup = T::zero();
            for (theta, _) in &dirs {
                for &r in &radii {
                    let y: Vec<T> = theta.iter().map(|t| *t * r).collect();
                    sup = sup.max(f(&y).norm());
                }
            }
            sup
        }
    })
}

/// `a xi·xi + ∫ (1 - cos xi·y) ν(dy)`, the negated real part of the symbol.
fn symbol_denominator<T: Scalar>(a: &Mat<T>, nu: &LevyMeasureRn<T>, xi: &[T]) -> Result<T> {
    let gauss = dot(&a.mul_vec(xi), xi);
    let atoms = nu
        .atoms()
        .iter()
        .fold(T::zero(), |acc, atom| acc + one_minus_cos(dot(xi, &atom.point)) * atom.mass);
    let dens = match nu.density_one_minus_cos(xi)? {
        Some(v) => v,
        None => nu.integrate_density(dot(xi, xi).sqrt(), |y| {
            let v = one_minus_cos(dot(xi, y));
            (v, v)
        })?,
    };
    Ok(gauss + atoms + dens)
}

fn is_zero_denominator<T: Scalar>(den: T, xi: &[T]) -> bool {
    xi.iter().all(|x| *x == T::zero()) || !(den > T::min_positive_value())
}

/// Time-independent multiplier
/// `(½ (Λ^T xi)^T A (Λ^T xi) + ∫ (1 - cos xi·y) ψ dν) / (a xi·xi + ∫ (1 - cos xi·y) dν)`
/// with `Λ Λ^T = 2a`.
pub fn multiplier_autonomous<T: Scalar>(
    a_mat: &CMat<T>,
    psi: &JumpPsi<T>,
    a: &Mat<T>,
    nu: &LevyMeasureRn<T>,
    xi: &[T],
) -> Result<Complex<T>> {
    let n = xi.len();
    if a.rows() != n || nu.dim() != n || a_mat.rows() != n || a_mat.cols() != n {
        return Err(Error::InvalidInput("dimension mismatch in multiplier inputs".into()));
    }
    let den = symbol_denominator(a, nu, xi)?;
    if is_zero_denominator(den, xi) {
        return Err(Error::ZeroSymbolFrequency);
    }
    let lambda = factor_diffusion(a)?;
    let v = lambda.transpose().mul_vec(xi);
    let gauss = real_quadratic_form(a_mat, &v) * lit::<T>(0.5);
    let jumps = psi.weighted_jump_integral(nu, xi)?;
    Ok((gauss + jumps) / den)
}

/// `∫_0^∞ rate e^{-rate s} f(s) ds`, the mean of `f` under an exponential
/// law, via `u = e^{-rate s}` on a graded rule with one refinement check.
pub fn exponential_average<T, V, F>(rate: T, f: F) -> Result<V>
where
    T: Scalar,
    V: Accumulate<T>,
    F: Fn(T) -> V,
{
    if !(rate > T::zero() && rate.is_finite()) {
        return Err(Error::NonIntegrableProfile {
            re_symbol: -to_f64(rate),
        });
    }
    let pass = |levels: usize, per_panel: usize| {
        let mut acc = V::zero();
        let mut scale = T::zero();
        for node in graded_unit_rule::<T>(levels, per_panel) {
            let s = -node.ln_u() / rate;
            let v = f(s);
            acc = acc + v * node.weight;
            scale += v.magnitude() * node.weight;
        }
        (acc, scale)
    };
    let (coarse, _) = pass(40, 12);
    let (fine, scale) = pass(50, 16);
    let tol = tolerance::<T>(TIME_TOL) * scale.max(T::min_positive_value());
    if (fine - coarse).magnitude() <= tol {
        return Ok(fine);
    }
    // oscillating profiles with a slow rate: uniform panels in x = rate s,
    // doubled until two levels agree
    let rule = GaussLegendre::<T>::new(16);
    let x_max = lit::<T>(46.0);
    let level = |panels: usize| {
        let width = x_max / lit::<T>(panels as f64);
        let mut acc = V::zero();
        for k in 0..panels {
            let a = width * lit::<T>(k as f64);
            for (x, w) in rule.mapped(a, a + width) {
                acc = acc + f(x / rate) * ((-x).exp() * w);
            }
        }
        acc
    };
    let mut panels = 256;
    let mut prev = level(panels);
    let mut gap = (prev - fine).magnitude();
    while panels < MAX_TIME_PANELS {
        panels *= 2;
        let next = level(panels);
        gap = (next - prev).magnitude();
        if gap <= tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNonConvergence {
        coarse: to_f64(coarse.magnitude()),
        refined: to_f64(prev.magnitude()),
        relative_gap: to_f64(gap / scale.max(T::min_positive_value())),
    })
}

/// Time-dependent multiplier
/// `∫_0^∞ [A(s) w·w] e^{2sr} ds + 2 ∫∫ e^{2sr} (1 - cos 2π xi·y) ψ(s, y) ds ν(dy)`
/// with `w = Λ^T (2π xi)` and `r = Re rho(2π xi)`.
pub fn multiplier_time_dependent<T: Scalar>(
    spec: &MultiplierSpec<T>,
    triple: &LevyTriple<T>,
    xi: &[T],
) -> Result<Complex<T>> {
    let n = triple.dim();
    if xi.len() != n {
        return Err(Error::InvalidInput("frequency dimension mismatch".into()));
    }
    let two_pi = T::PI() * lit(2.0);
    let scaled: Vec<T> = xi.iter().map(|x| *x * two_pi).collect();
    let r = eval_symbol(triple, &scaled)?.re;
    if !(r < T::zero()) || xi.iter().all(|x| *x == T::zero()) {
        return Err(Error::NonIntegrableProfile {
            re_symbol: to_f64(r),
        });
    }
    let lambda = factor_diffusion(triple.diffusion())?;
    let w = lambda.transpose().mul_vec(&scaled);
    let jumps = spec.psi.weighted_jump_integral(triple.nu(), &scaled)? * lit::<T>(2.0);
    let rate = -r * lit(2.0);
    if spec.a.as_constant().is_some() && spec.psi_time.is_none() {
        let gauss = spec.a.quadratic_form(T::zero(), &w);
        return Ok((gauss + jumps) / rate);
    }
    let closed = spec.a.exponential_mean_form(rate, &w).zip(match &spec.psi_time {
        Some(p) => p.exponential_mean(rate),
        None => Some(Complex::new(T::one(), T::zero())),
    });
    if let Some((gauss, time)) = closed {
        return Ok((gauss + time * jumps) / rate);
    }
    let mean = exponential_average(rate, |s| {
        let jt = match &spec.psi_time {
            Some(p) => p.eval(s) * jumps,
            None => jumps,
        };
        spec.a.quadratic_form(s, &w) + jt
    })?;
    Ok(mean / rate)
}

/// `Σ C_jk xi_j xi_k / |xi|^2`.
pub fn riesz2_symbol_rn<T: Scalar>(c: &CMat<T>, xi: &[T]) -> Result<Complex<T>> {
    let norm2 = dot(xi, xi);
    if !(norm2 > T::zero()) {
        return Err(Error::ZeroSymbolFrequency);
    }
    if c.rows() != xi.len() || c.cols() != xi.len() {
        return Err(Error::InvalidInput("coefficient matrix dimension mismatch".into()));
    }
    Ok(real_quadratic_form(c, xi) / norm2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::LevyAtom;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn gaussian_first_coordinate_projection() {
        let a = Mat::<f64>::identity(2);
        let am = Mat::diag(&[c(1.0), c(0.0)]);
        let nu = LevyMeasureRn::empty(2);
        let m = multiplier_autonomous(&am, &JumpPsi::zero(), &a, &nu, &[0.6, 0.8]).unwrap();
        assert!((m - c(0.36)).norm() < 1e-14);
    }

    #[test]
    fn identity_pair_gives_one() {
        let a = Mat::from_rows(&[vec![1.0, 0.2], vec![0.2, 0.5]]).unwrap();
        let nu = LevyMeasureRn::new(
            2,
            vec![LevyAtom {
                point: vec![0.3, -1.0],
                mass: 2.0,
            }],
            None,
        )
        .unwrap();
        let m = multiplier_autonomous(&Mat::identity(2), &JumpPsi::one(), &a, &nu, &[1.1, 0.4])
            .unwrap();
        assert!((m - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn half_line_indicator_gives_one_half() {
        let nu = LevyMeasureRn::new(
            1,
            vec![
                LevyAtom {
                    point: vec![1.0],
                    mass: 1.0,
                },
                LevyAtom {
                    point: vec![-1.0],
                    mass: 1.0,
                },
            ],
            None,
        )
        .unwrap();
        let psi = JumpPsi::Table {
            atom_values: vec![c(1.0), c(0.0)],
            density: DensityPsi::Constant(c(0.0)),
        };
        for &x in &[0.5, 2.0, 7.0] {
            let m = multiplier_autonomous(&Mat::zeros(1, 1), &psi, &Mat::zeros(1, 1), &nu, &[x])
                .unwrap();
            assert!((m - c(0.5)).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_frequency_is_rejected() {
        let r = multiplier_autonomous(
            &Mat::identity(1),
            &JumpPsi::zero(),
            &Mat::identity(1),
            &LevyMeasureRn::empty(1),
            &[0.0],
        );
        assert_eq!(r, Err(Error::ZeroSymbolFrequency));
        assert_eq!(
            riesz2_symbol_rn(&Mat::<Complex<f64>>::identity(2), &[0.0, 0.0]),
            Err(Error::ZeroSymbolFrequency)
        );
    }

    #[test]
    fn riesz_difference_symbol() {
        let cm = Mat::diag(&[c(1.0), c(-1.0)]);
        let m = riesz2_symbol_rn(&cm, &[2.0, 1.0]).unwrap();
        assert!((m - c(0.6)).norm() < 1e-15);
    }

    #[test]
    fn imaginary_power_profile_on_gaussian() {
        // m(xi) = (4 pi^2 |xi|^2)^{-i gamma}
        let gamma = 0.5;
        let spec = MultiplierSpec {
            a: MatrixProfile::Scaled {
                profile: ScalarProfile::ImaginaryPower { gamma: -gamma },
                matrix: Mat::identity(2),
            },
            psi: JumpPsi::zero(),
            psi_time: None,
            bound_a: 1.0 / gamma_one_minus_i(-gamma).norm(),
            bound_psi: 0.0,
        };
        let t = LevyTriple::gaussian(Mat::identity(2)).unwrap();
        let xi = [0.3, 0.2];
        let m = multiplier_time_dependent(&spec, &t, &xi).unwrap();
        let kappa: f64 = 4.0 * std::f64::consts::PI.powi(2) * (0.09 + 0.04);
        let expected = Complex::new(0.0, -gamma * kappa.ln()).exp();
        assert!((m - expected).norm() < 1e-10, "{m} vs {expected}");
        assert!((m.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn oscillating_profile_with_slow_rate() {
        for (rate, omega) in [(1.0, 3.0), (2e-3, 5.0), (1e-2, 40.0)] {
            let v = exponential_average(rate, |s: f64| Complex::new(0.0, omega * s).exp()).unwrap();
            let exact = Complex::new(rate, 0.0) / Complex::new(rate, -omega);
            assert!((v - exact).norm() < 1e-8, "rate {rate}: {v} vs {exact}");
        }
    }

    #[test]
    fn closed_form_means_match_quadrature() {
        let profiles = [
            ScalarProfile::Trigonometric(vec![(Complex::new(0.5, 0.2), 2.5), (c(0.3), -1.0)]),
            ScalarProfile::ImaginaryPower { gamma: 0.7 },
            ScalarProfile::ImaginaryPower { gamma: -1.0 },
            ScalarProfile::Constant(Complex::new(0.1, -0.4)),
        ];
        for p in &profiles {
            for rate in [0.3, 1.0, 4.0] {
                let closed = p.exponential_mean(rate).unwrap();
                let quad = exponential_average(rate, |s| p.eval(s)).unwrap();
                assert!((closed - quad).norm() < 1e-8, "{p:?} at {rate}: {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn constant_spec_time_dependent_equals_autonomous_at_scaled_frequency() {
        let nu = LevyMeasureRn::new(
            2,
            vec![
                LevyAtom { point: vec![0.4, -0.9], mass: 1.3 },
                LevyAtom { point: vec![-1.2, 0.2], mass: 0.6 },
            ],
            None,
        )
        .unwrap();
        let a = Mat::from_fn(2, 2, |i, j| [[0.5, 0.1], [0.1, 0.2]][i][j]);
        let triple = LevyTriple::new(vec![0.3, 0.0], a.clone(), nu.clone()).unwrap();
        let am = Mat::from_fn(2, 2, |i, j| c([[0.3, -0.6], [0.2, 0.5]][i][j]));
        let psi = JumpPsi::Table {
            atom_values: vec![c(0.7), c(-0.4)],
            density: DensityPsi::Constant(c(0.0)),
        };
        let spec = MultiplierSpec::constant(am.clone(), psi.clone(), 1.0, 1.0);
        let two_pi = 2.0 * std::f64::consts::PI;
        for xi in [[0.25, -0.5], [1.0, 0.75], [-0.125, 0.0]] {
            let td = multiplier_time_dependent(&spec, &triple, &xi).unwrap();
            let aut = multiplier_autonomous(&am, &psi, &a, &nu, &[two_pi * xi[0], two_pi * xi[1]]).unwrap();
            assert!((td - aut).norm() < 1e-13 * aut.norm().max(1.0), "{td} vs {aut}");
        }
    }
}
