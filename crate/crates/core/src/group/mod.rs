//! The circle, the 2-torus and SU(2): elements, unitary duals and irreducible
//! representations.
//!
//! The Lie algebra of SU(2) carries the metric making `X_i = (i/2) σ_i`
//! orthonormal, so the Casimir eigenvalue of spin `j` is `j(j+1)`. On the
//! tori the coordinate vector fields are orthonormal and `κ = |k|^2`.

mod peter_weyl;
mod symbols;

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{CMat, Mat};
use crate::scalar::{from_i64, lit, to_f64, tolerance, Scalar};

pub use peter_weyl::{
    pw_forward_samples, pw_forward_table, pw_inverse, pw_inverse_grid, HaarGrid, PeterWeylCoeffs,
};
pub use symbols::{
    central_alpha, central_multiplier, central_multiplier_with_alpha, centrality_defect,
    generator_block, heat_coeffs, laplace_type_symbol, riesz2_symbol_group, semigroup_block,
    subordination_symbol, GroupLevyMeasure,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    T1,
    T2,
    Su2,
}

impl GroupKind {
    /// Dimension of the Lie algebra.
    pub fn algebra_dim(self) -> usize {
        match self {
            Self::T1 => 1,
            Self::T2 => 2,
            Self::Su2 => 3,
        }
    }

    pub fn is_abelian(self) -> bool {
        !matches!(self, Self::Su2)
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::T1 => "t1",
            Self::T2 => "t2",
            Self::Su2 => "su2",
        })
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Ok(Self::T1),
            "t2" => Ok(Self::T2),
            "su2" => Ok(Self::Su2),
            other => Err(Error::InvalidInput(format!("unknown group '{other}'"))),
        }
    }
}

/// Label of an irreducible unitary representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrrepLabel {
    T1(i64),
    T2(i64, i64),
    /// Spin `twice_spin / 2`.
    Su2 { twice_spin: u32 },
}

impl IrrepLabel {
    pub fn group(self) -> GroupKind {
        match self {
            Self::T1(_) => GroupKind::T1,
            Self::T2(..) => GroupKind::T2,
            Self::Su2 { .. } => GroupKind::Su2,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Self::Su2 { twice_spin } => twice_spin as usize + 1,
            _ => 1,
        }
    }

    /// Casimir eigenvalue in closed form.
    pub fn casimir<T: Scalar>(self) -> T {
        match self {
            Self::T1(k) => from_i64::<T>(k * k),
            Self::T2(a, b) => from_i64::<T>(a * a + b * b),
            Self::Su2 { twice_spin } => {
                let n = twice_spin as i64;
                from_i64::<T>(n * (n + 2)) / lit(4.0)
            }
        }
    }

    pub fn is_trivial(self) -> bool {
        matches!(self, Self::T1(0) | Self::T2(0, 0) | Self::Su2 { twice_spin: 0 })
    }

    /// Band index: `|k|`, `max(|k1|, |k2|)` or twice the spin.
    pub fn band(self) -> u32 {
        match self {
            Self::T1(k) => k.unsigned_abs() as u32,
            Self::T2(a, b) => a.unsigned_abs().max(b.unsigned_abs()) as u32,
            Self::Su2 { twice_spin } => twice_spin,
        }
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::T1(k) => write!(f, "{k}"),
            Self::T2(a, b) => write!(f, "({a},{b})"),
            Self::Su2 { twice_spin } if twice_spin % 2 == 0 => write!(f, "j={}", twice_spin / 2),
            Self::Su2 { twice_spin } => write!(f, "j={twice_spin}/2"),
        }
    }
}

/// Unit quaternion `w + x i + y j + z k`, identified with the SU(2) matrix
/// `w I + i (x σ1 + y σ2 + z σ3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Quaternion<T> {
    pub fn identity() -> Self {
        Self {
            w: T::one(),
            x: T::zero(),
            y: T::zero(),
            z: T::zero(),
        }
    }

    pub fn norm(&self) -> T {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self {
            w: self.w / n,
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        }
    }

    /// Group product matching matrix multiplication.
    pub fn mul(&self, o: &Self) -> Self {
        // (a0 + i a·σ)(b0 + i b·σ) = a0 b0 - a·b + i (a0 b + b0 a - a×b)·σ
        Self {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + o.w * self.x - (self.y * o.z - self.z * o.y),
            y: self.w * o.y + o.w * self.y - (self.z * o.x - self.x * o.z),
            z: self.w * o.z + o.w * self.z - (self.x * o.y - self.y * o.x),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// `exp(Σ v_i X_i)`.
    pub fn exp(v: &[T]) -> Self {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let half = norm * lit(0.5);
        // sin(|v|/2)/|v| with its small-argument limit
        let sinc = if norm < lit(1e-8) {
            lit::<T>(0.5) - norm * norm / lit(48.0)
        } else {
            half.sin() / norm
        };
        Self {
            w: half.cos(),
            x: v[0] * sinc,
            y: v[1] * sinc,
            z: v[2] * sinc,
        }
    }

    /// `exp(α X3) exp(β X2) exp(γ X3)`.
    pub fn from_euler(alpha: T, beta: T, gamma: T) -> Self {
        let z = |t: T| Self::exp(&[T::zero(), T::zero(), t]);
        let y = Self::exp(&[T::zero(), beta, T::zero()]);
        z(alpha).mul(&y).mul(&z(gamma))
    }

    /// Rotation angle `θ ∈ [0, 2π]` and unit axis with `self = exp(θ n·X)`.
    pub fn axis_angle(&self) -> (T, [T; 3]) {
        let s = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        let theta = lit::<T>(2.0) * s.atan2(self.w);
        if s == T::zero() {
            return (theta, [T::zero(), T::zero(), T::one()]);
        }
        (theta, [self.x / s, self.y / s, self.z / s])
    }

    /// The defining 2x2 unitary matrix.
    pub fn matrix(&self) -> CMat<T> {
        let c = Complex::new;
        let mut m = Mat::zeros(2, 2);
        m[(0, 0)] = c(self.w, self.z);
        m[(0, 1)] = c(self.y, self.x);
        m[(1, 0)] = c(-self.y, self.x);
        m[(1, 1)] = c(self.w, -self.z);
        m
    }
}

/// Element of one of the three groups. Torus angles are taken mod 2π.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GroupElement<T> {
    T1(T),
    T2(T, T),
    Su2(Quaternion<T>),
}

fn wrap<T: Scalar>(theta: T) -> T {
    let two_pi = T::PI() * lit(2.0);
    let r = theta % two_pi;
    if r < T::zero() {
        r + two_pi
    } else {
        r
    }
}

impl<T: Scalar> GroupElement<T> {
    pub fn identity(kind: GroupKind) -> Self {
        match kind {
            GroupKind::T1 => Self::T1(T::zero()),
            GroupKind::T2 => Self::T2(T::zero(), T::zero()),
            GroupKind::Su2 => Self::Su2(Quaternion::identity()),
        }
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            Self::T1(_) => GroupKind::T1,
            Self::T2(..) => GroupKind::T2,
            Self::Su2(_) => GroupKind::Su2,
        }
    }

    /// `exp(Σ v_i X_i)`; `v` has the Lie-algebra dimension of `kind`.
    pub fn exp(kind: GroupKind, v: &[T]) -> Self {
        match kind {
            GroupKind::T1 => Self::T1(wrap(v[0])),
            GroupKind::T2 => Self::T2(wrap(v[0]), wrap(v[1])),
            GroupKind::Su2 => Self::Su2(Quaternion::exp(v)),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::T1(a), Self::T1(b)) => Self::T1(wrap(*a + *b)),
            (Self::T2(a1, a2), Self::T2(b1, b2)) => Self::T2(wrap(*a1 + *b1), wrap(*a2 + *b2)),
            (Self::Su2(a), Self::Su2(b)) => Self::Su2(a.mul(b)),
            _ => panic!("product of elements from different groups"),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Self::T1(a) => Self::T1(wrap(-*a)),
            Self::T2(a, b) => Self::T2(wrap(-*a), wrap(-*b)),
            Self::Su2(q) => Self::Su2(q.inverse()),
        }
    }

    /// Projects SU(2) elements back to unit norm; returns the correction size.
    pub fn renormalize(&mut self) -> T {
        match self {
            Self::Su2(q) => {
                let n = q.norm();
                *q = q.normalized();
                (n - T::one()).abs()
            }
            _ => T::zero(),
        }
    }

    /// Distance-like test against the identity.
    pub fn is_identity(&self, tol: T) -> bool {
        let near0 = |a: T| a.min(T::PI() * lit(2.0) - a) <= tol;
        match self {
            Self::T1(a) => near0(wrap(*a)),
            Self::T2(a, b) => near0(wrap(*a)) && near0(wrap(*b)),
            Self::Su2(q) => {
                (q.w - T::one()).abs() <= tol
                    && q.x.abs() <= tol
                    && q.y.abs() <= tol
                    && q.z.abs() <= tol
            }
        }
    }
}

/// Irreducible unitary representation with its derived representation on
/// the orthonormal Lie-algebra basis.
#[derive(Clone, Debug)]
pub struct Irrep<T> {
    pub label: IrrepLabel,
    pub dim: usize,
    pub casimir: T,
    pub generators: Vec<CMat<T>>,
}

impl<T: Scalar> Irrep<T> {
    pub fn new(label: IrrepLabel) -> Self {
        let c = |re: T, im: T| Complex::new(re, im);
        let generators = match label {
            IrrepLabel::T1(k) => vec![Mat::scalar(1, c(T::zero(), from_i64(k)))],
            IrrepLabel::T2(a, b) => vec![
                Mat::scalar(1, c(T::zero(), from_i64(a))),
                Mat::scalar(1, c(T::zero(), from_i64(b))),
            ],
            IrrepLabel::Su2 { twice_spin } => su2_generators(twice_spin),
        };
        Self {
            label,
            dim: label.dim(),
            casimir: label.casimir(),
            generators,
        }
    }

    /// `Σ dπ(X_i)^2`.
    pub fn casimir_sum(&self) -> CMat<T> {
        self.generators
            .iter()
            .fold(Mat::zeros(self.dim, self.dim), |acc, g| &acc + &g.matmul(g))
    }

    /// `dπ(Σ v_i X_i)`.
    pub fn derived(&self, v: &[T]) -> CMat<T> {
        self.generators
            .iter()
            .zip(v)
            .fold(Mat::zeros(self.dim, self.dim), |acc, (g, &vi)| &acc + &g.scale_real(vi))
    }
}

/// Spin `twice_spin/2` generators `dπ(X_k) = i J_k` in the basis
/// `m = j, j-1, ..., -j`.
fn su2_generators<T: Scalar>(twice_spin: u32) -> Vec<CMat<T>> {
    let d = twice_spin as usize + 1;
    let j = lit::<T>(twice_spin as f64 * 0.5);
    let m_of = |idx: usize| j - from_i64::<T>(idx as i64);
    // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>; |m+1> sits one row up
    let mut jp = Mat::<T>::zeros(d, d);
    for col in 1..d {
        let m = m_of(col);
        jp[(col - 1, col)] = (j * (j + T::one()) - m * (m + T::one())).sqrt();
    }
    let jm = jp.transpose();
    let half = lit::<T>(0.5);
    let i = Complex::new(T::zero(), T::one());
    // i Jx = i (J+ + J-)/2, i Jy = (J+ - J-)/2, i Jz = i m
    let gx = (&jp + &jm).to_complex().scale(i * half);
    let gy = (&jp - &jm).to_complex().scale(Complex::new(half, T::zero()));
    let gz = Mat::diag(&(0..d).map(|k| i * m_of(k)).collect::<Vec<_>>());
    vec![gx, gy, gz]
}

/// Irreps of the given group with labels up to `cutoff`: `|k| <= cutoff` on
/// T1, `|k1|, |k2| <= cutoff` on T2, spins `0, 1/2, ..., cutoff` on SU(2).
pub fn dual_enumerate<T: Scalar>(group: GroupKind, cutoff: u32) -> Vec<Irrep<T>> {
    let band = match group {
        GroupKind::Su2 => 2 * cutoff,
        _ => cutoff,
    };
    dual_enumerate_band(group, band)
}

/// Irreps with [`IrrepLabel::band`] at most `band` (twice-spin units on
/// SU(2)), sorted by label.
pub fn dual_enumerate_band<T: Scalar>(group: GroupKind, band: u32) -> Vec<Irrep<T>> {
    labels_within(group, band).into_iter().map(Irrep::new).collect()
}

pub fn labels_within(group: GroupKind, band: u32) -> Vec<IrrepLabel> {
    let b = band as i64;
    let mut out: Vec<IrrepLabel> = match group {
        GroupKind::T1 => (-b..=b).map(IrrepLabel::T1).collect(),
        GroupKind::T2 => (-b..=b)
            .flat_map(|k1| (-b..=b).map(move |k2| IrrepLabel::T2(k1, k2)))
            .collect(),
        GroupKind::Su2 => (0..=band).map(|t| IrrepLabel::Su2 { twice_spin: t }).collect(),
    };
    out.sort();
    out
}

/// `π(g)`.
pub fn irrep_evaluate<T: Scalar>(pi: &Irrep<T>, g: &GroupElement<T>) -> Result<CMat<T>> {
    let phase = |t: T| Mat::scalar(1, Complex::new(t.cos(), t.sin()));
    match (pi.label, g) {
        (IrrepLabel::T1(k), GroupElement::T1(a)) => Ok(phase(from_i64::<T>(k) * *a)),
        (IrrepLabel::T2(k1, k2), GroupElement::T2(a, b)) => {
            Ok(phase(from_i64::<T>(k1) * *a + from_i64::<T>(k2) * *b))
        }
        (IrrepLabel::Su2 { twice_spin }, GroupElement::Su2(q)) => Ok(match twice_spin {
            0 => Mat::identity(1),
            1 => q.matrix(),
            _ => {
                let (theta, n) = q.axis_angle();
                pi.derived(&[n[0] * theta, n[1] * theta, n[2] * theta]).expm()
            }
        }),
        (label, g) => Err(Error::InvalidInput(format!(
            "irrep {label} of {} evaluated on an element of {}",
            label.group(),
            g.kind()
        ))),
    }
}

/// Casimir eigenvalue from the generators, with a scalarity check.
pub fn casimir_eigenvalue<T: Scalar>(pi: &Irrep<T>) -> Result<T> {
    let s = pi.casimir_sum();
    let kappa = -s.trace().re / lit::<T>(pi.dim as f64);
    let residual = (&s + &Mat::scalar(pi.dim, Complex::new(kappa, T::zero()))).max_abs();
    if residual > tolerance::<T>(1e-10) * kappa.max(T::one()) {
        return Err(Error::MetricNormalization {
            residual: to_f64(residual),
        });
    }
    Ok(kappa.max(T::zero()))
}

/// Largest `|G + G^*|` entry over the generators of `pi`.
pub fn skew_residual<T: Scalar>(pi: &Irrep<T>) -> T {
    pi.generators
        .iter()
        .fold(T::zero(), |m, g| m.max(g.skew_hermitian_residual()))
}
