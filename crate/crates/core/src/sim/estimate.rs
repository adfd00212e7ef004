//! Monte Carlo estimators over transcript ensembles and their deterministic
//! counterparts.

use num_complex::Complex;

use super::transcript::{transcript_ensemble, SpectralEvaluator, Transform};
use super::{mean_stderr, GroupProcessSpec, PathRecord};
use crate::error::{Error, Result};
use crate::group::{irrep_evaluate, pw_inverse, Irrep, PeterWeylCoeffs};
use crate::linalg::{CMat, Mat};
use crate::quadrature::GaussLegendre;
use crate::scalar::{from_usize, lit, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct BurkholderEstimate<T> {
    /// `(mean |Y|^p)^{1/p} / (mean |X|^p)^{1/p}`.
    pub ratio: T,
    /// Jackknife standard error of `ratio`.
    pub stderr: T,
    pub paths: usize,
}

/// Ratio of empirical `L^p` norms of `y` (transform) and `x` (martingale)
/// terminal values.
pub fn empirical_burkholder<T: Scalar>(y: &[Complex<T>], x: &[Complex<T>], p: T) -> Result<BurkholderEstimate<T>> {
    if !(p > T::one() && p.is_finite()) {
        return Err(Error::InvalidExponent(crate::scalar::to_f64(p)));
    }
    if y.len() != x.len() || y.len() < 100 {
        return Err(Error::InvalidInput(format!(
            "need at least 100 paired samples, got {} and {}",
            y.len(),
            x.len()
        )));
    }
    let n = y.len();
    let ya: Vec<T> = y.iter().map(|z| z.norm().powf(p)).collect();
    let xa: Vec<T> = x.iter().map(|z| z.norm().powf(p)).collect();
    let sy = ya.iter().fold(T::zero(), |s, v| s + *v);
    let sx = xa.iter().fold(T::zero(), |s, v| s + *v);
    if !(sx > T::zero()) {
        return Err(Error::ZeroDenominator("mean |M_T|^p".into()));
    }
    let inv_p = T::one() / p;
    let ratio = (sy / sx).powf(inv_p);
    let loo: Vec<T> = ya
        .iter()
        .zip(&xa)
        .map(|(a, b)| {
            let den = sx - *b;
            if den > T::zero() {
                ((sy - *a) / den).powf(inv_p)
            } else {
                ratio
            }
        })
        .collect();
    let nf = from_usize::<T>(n);
    let mean = loo.iter().fold(T::zero(), |s, v| s + *v) / nf;
    let var = loo.iter().fold(T::zero(), |s, v| s + (*v - mean).powi(2)) * (nf - T::one()) / nf;
    Ok(BurkholderEstimate {
        ratio,
        stderr: var.sqrt(),
        paths: n,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionEstimate<T> {
    pub mc: Complex<T>,
    /// Standard error, real and imaginary parts combined.
    pub stderr: T,
    pub deterministic: Complex<T>,
    pub paths: usize,
}

impl<T: Scalar> ProjectionEstimate<T> {
    /// `|MC - deterministic| / stderr`.
    pub fn z_score(&self) -> T {
        let d = (self.mc - self.deterministic).norm();
        if self.stderr > T::zero() {
            d / self.stderr
        } else if d == T::zero() {
            T::zero()
        } else {
            T::infinity()
        }
    }
}

/// Haar-σ and path average of `M_f^{(T;A,ψ)}(σ) M_g^{(T)}(σ)` with constant
/// `A` and per-atom `ψ`, next to its spectral value.
pub fn projection_mc_estimate<T: Scalar>(
    spec: &GroupProcessSpec<T>,
    f: &PeterWeylCoeffs<T>,
    g: &PeterWeylCoeffs<T>,
    a: &Mat<T>,
    psi: &[T],
    paths: usize,
) -> Result<ProjectionEstimate<T>> {
    if psi.len() != spec.nu.atoms.len() {
        return Err(Error::InvalidInput(format!(
            "{} psi values for {} atoms",
            psi.len(),
            spec.nu.atoms.len()
        )));
    }
    let transform = Transform::per_atom(a.clone(), psi.to_vec());
    let samples = transcript_ensemble(spec, f, &transform, paths, |path, tr| {
        let gv = pw_inverse(g, &[tr.sigma.mul(path.terminal())])?[0];
        Ok(tr.terminal_transform() * gv)
    })?;
    let re: Vec<T> = samples.iter().map(|z| z.re).collect();
    let im: Vec<T> = samples.iter().map(|z| z.im).collect();
    let (mr, sr) = mean_stderr(&re);
    let (mi, si) = mean_stderr(&im);
    Ok(ProjectionEstimate {
        mc: Complex::new(mr, mi),
        stderr: (sr * sr + si * si).sqrt(),
        deterministic: projection_deterministic(spec, f, g, a, psi)?,
        paths,
    })
}

fn left_multiply<T: Scalar>(c: &PeterWeylCoeffs<T>, m: impl Fn(&Irrep<T>) -> Result<CMat<T>>) -> Result<PeterWeylCoeffs<T>> {
    let mut out = c.clone();
    for (l, b) in out.blocks.iter_mut() {
        *b = m(&Irrep::new(*l))?.matmul(b);
    }
    Ok(out)
}

/// `∫ F G` for coefficient tables of (possibly complex) functions.
fn bilinear<T: Scalar>(f: &PeterWeylCoeffs<T>, g: &PeterWeylCoeffs<T>) -> Complex<T> {
    f.plancherel_inner(&g.conjugate_function())
}

/// `∫_0^T ∫_G [A ∇_Y P_s f · ∇_Y P_s g + Σ_k m_k ψ_k (R_k - I)P_s f (R_k - I)P_s g] dσ ds`
/// with `R_k u(σ) = u(σ τ_k)`, by Gauss-Legendre in time on exact
/// Peter-Weyl integrands.
pub fn projection_deterministic<T: Scalar>(
    spec: &GroupProcessSpec<T>,
    f: &PeterWeylCoeffs<T>,
    g: &PeterWeylCoeffs<T>,
    a: &Mat<T>,
    psi: &[T],
) -> Result<Complex<T>> {
    let band = f.band.max(g.band);
    let widen = |c: &PeterWeylCoeffs<T>| -> Result<PeterWeylCoeffs<T>> { PeterWeylCoeffs::zero(c.group, band).add(c) };
    let (f, g) = (widen(f)?, widen(g)?);
    let n = spec.group.algebra_dim();
    if a.rows() != n || a.cols() != n {
        return Err(Error::InvalidInput(format!("A must be {n}x{n}")));
    }
    let ef = SpectralEvaluator::new(spec, &f)?;
    let eg = SpectralEvaluator::new(spec, &g)?;
    let two_c = spec.c * lit(2.0);
    let integrand = |s: T| -> Result<Complex<T>> {
        let (u, w) = (ef.coeffs_at(s), eg.coeffs_at(s));
        let mut acc = Complex::new(T::zero(), T::zero());
        if two_c > T::zero() {
            let du: Vec<_> = (0..n)
                .map(|j| left_multiply(&u, |pi| Ok(pi.generators[j].clone())))
                .collect::<Result<_>>()?;
            let dw: Vec<_> = (0..n)
                .map(|j| left_multiply(&w, |pi| Ok(pi.generators[j].clone())))
                .collect::<Result<_>>()?;
            for i in 0..n {
                for j in 0..n {
                    if a[(i, j)] != T::zero() {
                        acc = acc + bilinear(&du[j], &dw[i]) * (a[(i, j)] * two_c);
                    }
                }
            }
        }
        for (k, (tau, m)) in spec.nu.atoms.iter().enumerate() {
            if psi[k] == T::zero() {
                continue;
            }
            let shift = |pi: &Irrep<T>| Ok(&irrep_evaluate(pi, tau)? - &Mat::identity(pi.dim));
            let du = left_multiply(&u, shift)?;
            let dw = left_multiply(&w, shift)?;
            acc = acc + bilinear(&du, &dw) * (*m * psi[k]);
        }
        Ok(acc)
    };
    let rule = GaussLegendre::<T>::new(16);
    let panels = 16usize;
    let h = spec.horizon / from_usize::<T>(panels);
    let mut total = Complex::new(T::zero(), T::zero());
    for p in 0..panels {
        let a0 = h * from_usize::<T>(p);
        for (x, wt) in rule.mapped(a0, a0 + h) {
            total = total + integrand(x)? * wt;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct CharEstimate<T> {
    /// Mean of `π(φ(t))` over the ensemble.
    pub mean: CMat<T>,
    /// Frobenius norm of the entrywise standard errors.
    pub stderr: T,
    pub paths: usize,
}

impl<T: Scalar> CharEstimate<T> {
    /// `‖mean - oracle‖_F / stderr`.
    pub fn z_score(&self, oracle: &CMat<T>) -> T {
        let d = (&self.mean - oracle).frobenius();
        if self.stderr > T::zero() {
            d / self.stderr
        } else if d == T::zero() {
            T::zero()
        } else {
            T::infinity()
        }
    }
}

/// Ensemble mean of `π(φ(t))` at grid point `k`.
pub fn empirical_char<T: Scalar>(paths: &[PathRecord<T>], pi: &Irrep<T>, k: usize) -> Result<CharEstimate<T>> {
    if paths.len() < 2 {
        return Err(Error::InvalidInput("need at least two paths".into()));
    }
    let mats: Vec<CMat<T>> = paths
        .iter()
        .map(|p| {
            if k >= p.grid_points.len() {
                return Err(Error::InvalidInput(format!("grid point {k} beyond the horizon")));
            }
            irrep_evaluate(pi, p.at_grid(k))
        })
        .collect::<Result<_>>()?;
    let n = from_usize::<T>(mats.len());
    let mean = mats
        .iter()
        .fold(Mat::zeros(pi.dim, pi.dim), |acc, m| &acc + m)
        .scale_real(T::one() / n);
    let ss = mats
        .iter()
        .fold(T::zero(), |acc, m| acc + (m - &mean).frobenius().powi(2));
    let var = ss / (n - T::one());
    Ok(CharEstimate {
        mean,
        stderr: (var / n).sqrt(),
        paths: paths.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupElement, GroupKind, GroupLevyMeasure, HaarGrid};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn burkholder_edge_cases() {
        let x: Vec<Complex<f64>> = (0..200).map(|i| Complex::new((i as f64).sin(), 0.0)).collect();
        let zero = vec![Complex::new(0.0, 0.0); 200];
        let r = empirical_burkholder(&zero, &x, 3.0).unwrap();
        assert_eq!(r.ratio, 0.0);
        let r = empirical_burkholder(&x, &x, 1.5).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-14);
        assert!(empirical_burkholder(&x, &zero, 2.0).is_err());
        assert!(empirical_burkholder(&x[..50], &x[..50], 2.0).is_err());
    }

    #[test]
    fn identity_projection_is_covariance_of_endpoints() {
        // A = I, psi = 1: the functional is ∫fg - ∫(P_T f)(P_T g)
        let nu = GroupLevyMeasure::new(GroupKind::T2, vec![(GroupElement::T2(0.9, 0.4), 1.0)]).unwrap();
        let spec = GroupProcessSpec::new(GroupKind::T2, 0.3, vec![0.0, 0.0], nu, 0.7, 0.1, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = PeterWeylCoeffs::random_real(GroupKind::T2, 2, &mut rng);
        let g = PeterWeylCoeffs::random_real(GroupKind::T2, 2, &mut rng);
        let det = projection_deterministic(&spec, &f, &g, &Mat::identity(2), &[1.0]).unwrap();
        let grid = HaarGrid::new(GroupKind::T2, 4);
        let ef = SpectralEvaluator::new(&spec, &f).unwrap();
        let eg = SpectralEvaluator::new(&spec, &g).unwrap();
        let integral = |a: &PeterWeylCoeffs<f64>, b: &PeterWeylCoeffs<f64>| {
            let va = crate::group::pw_inverse_grid(a, &grid).unwrap();
            let vb = crate::group::pw_inverse_grid(b, &grid).unwrap();
            let prod: Vec<_> = va.iter().zip(&vb).map(|(x, y)| x * y).collect();
            grid.integrate(&prod)
        };
        let expected = integral(&f, &g) - integral(&ef.coeffs_at(0.7), &eg.coeffs_at(0.7));
        assert!((det - expected).norm() < 1e-12, "{det} vs {expected}");
    }

    #[test]
    fn char_at_time_zero_is_identity() {
        let spec = GroupProcessSpec::new(
            GroupKind::Su2,
            0.5,
            vec![0.0; 3],
            GroupLevyMeasure::empty(GroupKind::Su2),
            0.2,
            0.1,
            1,
        )
        .unwrap();
        let paths = super::super::simulate_ensemble(&spec, 10).unwrap();
        let pi = Irrep::new(crate::group::IrrepLabel::Su2 { twice_spin: 2 });
        let est = empirical_char(&paths, &pi, 0).unwrap();
        assert!((&est.mean - &Mat::identity(3)).max_abs() < 1e-14);
    }
}
