//! Multiplier symbols and semigroup blocks on the unitary dual.

use num_complex::Complex;

use super::{irrep_evaluate, GroupElement, GroupKind, Irrep, PeterWeylCoeffs};
use crate::error::{Error, Result};
use crate::euclid::{exponential_average, ScalarProfile};
use crate::levy::{bernstein_eval, BernsteinSpec};
use crate::linalg::{CMat, Mat};
use crate::scalar::{from_usize, lit, tolerance, Scalar};

/// Finite Lévy measure on a group: atoms away from the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupLevyMeasure<T> {
    pub group: GroupKind,
    pub atoms: Vec<(GroupElement<T>, T)>,
}

impl<T: Scalar> GroupLevyMeasure<T> {
    pub fn new(group: GroupKind, atoms: Vec<(GroupElement<T>, T)>) -> Result<Self> {
        for (k, (tau, m)) in atoms.iter().enumerate() {
            if tau.kind() != group {
                return Err(Error::InvalidInput(format!("atom {k} is not an element of {group}")));
            }
            if tau.is_identity(tolerance::<T>(1e-12)) {
                return Err(Error::InvalidInput(format!("atom {k} sits at the identity")));
            }
            if !(*m > T::zero() && m.is_finite()) {
                return Err(Error::InvalidInput(format!("atom {k} has mass {m}")));
            }
        }
        Ok(Self { group, atoms })
    }

    pub fn empty(group: GroupKind) -> Self {
        Self {
            group,
            atoms: Vec::new(),
        }
    }

    pub fn total_mass(&self) -> T {
        self.atoms.iter().fold(T::zero(), |s, a| s + a.1)
    }

    /// `Σ mass ψ (2I - π(τ) - π(τ)^*)`.
    fn weighted_difference(&self, psi: &[Complex<T>], pi: &Irrep<T>) -> Result<CMat<T>> {
        if psi.len() != self.atoms.len() {
            return Err(Error::InvalidInput(format!(
                "psi table has {} entries for {} atoms",
                psi.len(),
                self.atoms.len()
            )));
        }
        let two = Mat::scalar(pi.dim, Complex::new(lit::<T>(2.0), T::zero()));
        let mut acc = Mat::zeros(pi.dim, pi.dim);
        for ((tau, m), p) in self.atoms.iter().zip(psi) {
            let u = irrep_evaluate(pi, tau)?;
            let diff = &(&two - &u) - &u.adjoint();
            acc = &acc + &diff.scale(*p * *m);
        }
        Ok(acc)
    }
}

fn identity_block<T: Scalar>(d: usize, s: Complex<T>) -> CMat<T> {
    Mat::scalar(d, s)
}

fn check_dims<T: Scalar>(c: &CMat<T>, pi: &Irrep<T>) -> Result<()> {
    let n = pi.generators.len();
    if c.rows() != n || c.cols() != n {
        return Err(Error::InvalidInput(format!(
            "coefficient matrix is {}x{}, the Lie algebra has dimension {n}",
            c.rows(),
            c.cols()
        )));
    }
    Ok(())
}

/// `Σ_{i,j} C_ji dπ(X_i) dπ(X_j)`.
fn second_order<T: Scalar>(c: &CMat<T>, pi: &Irrep<T>) -> CMat<T> {
    let mut acc = Mat::zeros(pi.dim, pi.dim);
    for (i, gi) in pi.generators.iter().enumerate() {
        for (j, gj) in pi.generators.iter().enumerate() {
            let coef = c[(j, i)];
            if coef != Complex::new(T::zero(), T::zero()) {
                acc = &acc + &gi.matmul(gj).scale(coef);
            }
        }
    }
    acc
}

fn is_trivial_casimir<T: Scalar>(pi: &Irrep<T>) -> bool {
    !(pi.casimir > tolerance::<T>(1e-12))
}

/// Second-order Riesz symbol `-(1/κ_π) Σ C_ji dπ(X_i) dπ(X_j)`.
pub fn riesz2_symbol_group<T: Scalar>(c: &CMat<T>, pi: &Irrep<T>) -> Result<CMat<T>> {
    check_dims(c, pi)?;
    if is_trivial_casimir(pi) {
        return Err(Error::RieszOnConstants);
    }
    Ok(second_order(c, pi).scale_real(-T::one() / pi.casimir))
}

/// Laplace-transform-type symbol `∫_0^∞ 2κ e^{-2sκ} a(s) ds · I`.
pub fn laplace_type_symbol<T: Scalar>(
    profile: &ScalarProfile<T>,
    pi: &Irrep<T>,
) -> Result<CMat<T>> {
    if is_trivial_casimir(pi) {
        return Err(Error::RieszOnConstants);
    }
    let v = exponential_average(pi.casimir * lit(2.0), |s| profile.eval(s))?;
    Ok(identity_block(pi.dim, v))
}

/// Subordination symbol `(1 / (2 h(κ))) Σ mass ψ (2I - π(τ) - π(τ)^*)`.
pub fn subordination_symbol<T: Scalar>(
    psi: &[Complex<T>],
    nu: &GroupLevyMeasure<T>,
    h: &BernsteinSpec<T>,
    pi: &Irrep<T>,
) -> Result<CMat<T>> {
    if is_trivial_casimir(pi) {
        return Err(Error::ZeroBernstein);
    }
    let hk = bernstein_eval(h, pi.casimir)?;
    if !(hk > T::zero()) {
        return Err(Error::ZeroBernstein);
    }
    Ok(nu
        .weighted_difference(psi, pi)?
        .scale_real(T::one() / (hk * lit(2.0))))
}

/// `α_π = -c κ_π + Σ mass (tr π(τ) / d_π - 1)`.
pub fn central_alpha<T: Scalar>(
    c: T,
    nu: &GroupLevyMeasure<T>,
    pi: &Irrep<T>,
) -> Result<Complex<T>> {
    let d = from_usize::<T>(pi.dim);
    let mut alpha = Complex::new(-c * pi.casimir, T::zero());
    for (tau, m) in &nu.atoms {
        let chi = irrep_evaluate(pi, tau)?.trace() / d;
        alpha = alpha + (chi - T::one()) * *m;
    }
    Ok(alpha)
}

/// How far `Σ mass π(τ)` is from a multiple of the identity; zero for
/// conjugation-invariant measures.
pub fn centrality_defect<T: Scalar>(nu: &GroupLevyMeasure<T>, pi: &Irrep<T>) -> Result<T> {
    let mut acc = Mat::zeros(pi.dim, pi.dim);
    for (tau, m) in &nu.atoms {
        acc = &acc + &irrep_evaluate(pi, tau)?.scale_real(*m);
    }
    let mean = acc.trace() / from_usize::<T>(pi.dim);
    Ok((&acc - &Mat::scalar(pi.dim, mean)).max_abs())
}

/// Central-process multiplier
/// `(1/Re α) Σ A_ji dπ(X_i) dπ(X_j) - (1/(2 Re α)) Σ mass ψ (2I - π - π^*)`.
pub fn central_multiplier<T: Scalar>(
    a: &CMat<T>,
    psi: &[Complex<T>],
    c: T,
    nu: &GroupLevyMeasure<T>,
    pi: &Irrep<T>,
) -> Result<CMat<T>> {
    let re_alpha = central_alpha(c, nu, pi)?.re;
    central_multiplier_with_alpha(a, psi, nu, pi, re_alpha)
}

/// [`central_multiplier`] with `Re α` supplied, e.g. `-h(κ_π)` for a
/// subordinated heat process.
pub fn central_multiplier_with_alpha<T: Scalar>(
    a: &CMat<T>,
    psi: &[Complex<T>],
    nu: &GroupLevyMeasure<T>,
    pi: &Irrep<T>,
    re_alpha: T,
) -> Result<CMat<T>> {
    check_dims(a, pi)?;
    if !(re_alpha < -tolerance::<T>(1e-14)) {
        return Err(Error::ZeroExponent);
    }
    let gauss = second_order(a, pi).scale_real(T::one() / re_alpha);
    let jumps = nu
        .weighted_difference(psi, pi)?
        .scale_real(-T::one() / (re_alpha * lit(2.0)));
    Ok(&gauss + &jumps)
}

/// Heat semigroup on coefficients: each block scaled by `e^{-t κ_π}`.
pub fn heat_coeffs<T: Scalar>(coeffs: &PeterWeylCoeffs<T>, t: T) -> PeterWeylCoeffs<T> {
    let mut out = coeffs.clone();
    for (l, b) in out.blocks.iter_mut() {
        let f = (-t * l.casimir::<T>()).exp();
        *b = b.scale_real(f);
    }
    out
}

/// Generator block `L(π) = Σ b_i dπ(X_i) + c Σ dπ(X_i)^2 + Σ mass (π(τ) - I)`
/// of the process with drift `b`, diffusion `c I` and jumps `nu`; then
/// `E π(φ_t) = exp(t L(π))`.
pub fn generator_block<T: Scalar>(
    drift: &[T],
    c: T,
    nu: &GroupLevyMeasure<T>,
    pi: &Irrep<T>,
) -> Result<CMat<T>> {
    let mut l = &pi.derived(drift) + &pi.casimir_sum().scale_real(c);
    let eye = Mat::identity(pi.dim);
    for (tau, m) in &nu.atoms {
        l = &l + &(&irrep_evaluate(pi, tau)? - &eye).scale_real(*m);
    }
    Ok(l)
}

/// `exp(t L(π))`.
pub fn semigroup_block<T: Scalar>(
    drift: &[T],
    c: T,
    nu: &GroupLevyMeasure<T>,
    pi: &Irrep<T>,
    t: T,
) -> Result<CMat<T>> {
    Ok(generator_block(drift, c, nu, pi)?.scale_real(t).expm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{IrrepLabel, Quaternion};

    fn cx(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn riesz_identity_and_torus_difference() {
        let pi = Irrep::<f64>::new(IrrepLabel::Su2 { twice_spin: 3 });
        let m = riesz2_symbol_group(&Mat::identity(3), &pi).unwrap();
        assert!((&m - &Mat::identity(4)).max_abs() < 1e-12);
        let pi = Irrep::<f64>::new(IrrepLabel::T2(2, 1));
        let m = riesz2_symbol_group(&Mat::diag(&[cx(1.0), cx(-1.0)]), &pi).unwrap();
        assert!((m[(0, 0)] - cx(0.6)).norm() < 1e-15);
        let triv = Irrep::<f64>::new(IrrepLabel::T2(0, 0));
        assert_eq!(
            riesz2_symbol_group(&Mat::identity(2), &triv),
            Err(Error::RieszOnConstants)
        );
    }

    #[test]
    fn riesz_first_axis_on_fundamental_is_one_third() {
        let pi = Irrep::<f64>::new(IrrepLabel::Su2 { twice_spin: 1 });
        let mut c = Mat::zeros(3, 3);
        c[(0, 0)] = cx(1.0);
        let m = riesz2_symbol_group(&c, &pi).unwrap();
        assert!((&m - &Mat::scalar(2, cx(1.0 / 3.0))).max_abs() < 1e-15);
    }

    #[test]
    fn subordination_on_circle() {
        let theta0 = 0.9;
        let nu =
            GroupLevyMeasure::new(GroupKind::T1, vec![(GroupElement::T1(theta0), 1.0)]).unwrap();
        let h = BernsteinSpec::linear(1.0);
        for k in 1..5i64 {
            let pi = Irrep::new(IrrepLabel::T1(k));
            let m = subordination_symbol(&[cx(1.0)], &nu, &h, &pi).unwrap();
            let kf = k as f64;
            let expected = (1.0 - (kf * theta0).cos()) / (kf * kf);
            assert!((m[(0, 0)] - cx(expected)).norm() < 1e-15);
        }
    }

    #[test]
    fn central_alpha_half_turn() {
        let tau = GroupElement::exp(GroupKind::Su2, &[0.0, 0.0, std::f64::consts::PI]);
        let nu = GroupLevyMeasure::new(GroupKind::Su2, vec![(tau, 1.0)]).unwrap();
        let pi = Irrep::new(IrrepLabel::Su2 { twice_spin: 1 });
        let a = central_alpha(0.0, &nu, &pi).unwrap();
        assert!((a - cx(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn central_multiplier_reduces_to_identity() {
        let nu = GroupLevyMeasure::<f64>::empty(GroupKind::Su2);
        for t in 1..5 {
            let pi = Irrep::new(IrrepLabel::Su2 { twice_spin: t });
            let m = central_multiplier(&Mat::identity(3), &[], 1.0, &nu, &pi).unwrap();
            assert!((&m - &Mat::identity(pi.dim)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn semigroup_of_pure_diffusion_is_heat() {
        let nu = GroupLevyMeasure::<f64>::empty(GroupKind::Su2);
        let pi = Irrep::new(IrrepLabel::Su2 { twice_spin: 2 });
        let p = semigroup_block(&[0.0; 3], 1.0, &nu, &pi, 0.3).unwrap();
        assert!((&p - &Mat::scalar(3, cx((-0.3f64 * 2.0).exp()))).max_abs() < 1e-13);
        let q = Quaternion::<f64>::identity();
        assert_eq!(q.norm(), 1.0);
    }
}
