//! Peter-Weyl transform on band-limited functions.

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{irrep_evaluate, labels_within, GroupElement, GroupKind, Irrep, IrrepLabel, Quaternion};
use crate::error::{Error, Result};
use crate::linalg::{CMat, Mat};
use crate::quadrature::GaussLegendre;
use crate::scalar::{from_usize, lit, Scalar};

/// Peter-Weyl coefficients `f̂(π)` of a band-limited function.
#[derive(Clone, Debug, PartialEq)]
pub struct PeterWeylCoeffs<T> {
    pub group: GroupKind,
    pub band: u32,
    pub blocks: BTreeMap<IrrepLabel, CMat<T>>,
}

impl<T: Scalar> PeterWeylCoeffs<T> {
    pub fn zero(group: GroupKind, band: u32) -> Self {
        let blocks = labels_within(group, band)
            .into_iter()
            .map(|l| (l, Mat::zeros(l.dim(), l.dim())))
            .collect();
        Self {
            group,
            band,
            blocks,
        }
    }

    /// Coefficients with independent standard complex Gaussian entries.
    pub fn random<R: Rng + ?Sized>(group: GroupKind, band: u32, rng: &mut R) -> Self {
        let mut out = Self::zero(group, band);
        for block in out.blocks.values_mut() {
            *block = Mat::from_fn(block.rows(), block.cols(), |_, _| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(lit(re), lit(im))
            });
        }
        out
    }

    /// Coefficients of a real-valued function: the random table is
    /// symmetrized so that `f = conj(f)`.
    pub fn random_real<R: Rng + ?Sized>(group: GroupKind, band: u32, rng: &mut R) -> Self {
        let f = Self::random(group, band, rng);
        f.real_part()
    }

    /// Coefficients of `Re f`.
    pub fn real_part(&self) -> Self {
        let conj = self.conjugate_function();
        let mut out = self.clone();
        for (l, b) in out.blocks.iter_mut() {
            *b = (&*b + &conj.blocks[l]).scale_real(lit(0.5));
        }
        out
    }

    /// Coefficients of `σ -> conj(f(σ))`.
    ///
    /// On the tori `conj(f)^(k) = conj(f̂(-k))`. On SU(2) each irrep is
    /// self-conjugate, `conj(π(σ)) = C π(σ) C^{-1}` with `C_{m,m'} =
    /// (-1)^{j-m} δ_{m,-m'}`, so `conj(f)^(π) = C^{-1} conj(f̂(π)) C`.
    pub fn conjugate_function(&self) -> Self {
        let mut out = self.clone();
        for (l, b) in out.blocks.iter_mut() {
            *b = match *l {
                IrrepLabel::T1(k) => self.blocks[&IrrepLabel::T1(-k)].conj(),
                IrrepLabel::T2(a, c) => self.blocks[&IrrepLabel::T2(-a, -c)].conj(),
                IrrepLabel::Su2 { twice_spin } => {
                    let c = su2_conjugator::<T>(twice_spin);
                    let ci = c.adjoint();
                    ci.matmul(&self.blocks[l].conj()).matmul(&c)
                }
            };
        }
        out
    }

    pub fn get(&self, label: &IrrepLabel) -> Option<&CMat<T>> {
        self.blocks.get(label)
    }

    /// `Σ_π d_π tr(f̂(π) ĝ(π)^*)`.
    pub fn plancherel_inner(&self, other: &Self) -> Complex<T> {
        self.blocks.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (l, b)| {
            match other.blocks.get(l) {
                Some(o) => acc + b.trace_with_adjoint(o) * from_usize::<T>(l.dim()),
                None => acc,
            }
        })
    }

    pub fn l2_norm_sq(&self) -> T {
        self.plancherel_inner(self).re
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = self.clone();
        for b in out.blocks.values_mut() {
            *b = b.scale(s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::InvalidInput("coefficient tables on different groups".into()));
        }
        let band = self.band.max(other.band);
        let mut out = Self::zero(self.group, band);
        for (l, b) in out.blocks.iter_mut() {
            if let Some(x) = self.blocks.get(l) {
                *b = &*b + x;
            }
            if let Some(x) = other.blocks.get(l) {
                *b = &*b + x;
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> T {
        self.blocks.values().fold(T::zero(), |m, b| m.max(b.max_abs()))
    }
}

/// `C` with `conj(π(σ)) = C π(σ) C^{-1}` in the `m = j..-j` basis.
fn su2_conjugator<T: Scalar>(twice_spin: u32) -> CMat<T> {
    let d = twice_spin as usize + 1;
    Mat::from_fn(d, d, |r, c| {
        // row r has m = j - r, column c has m' = j - c; nonzero when m = -m'
        if r + c == d - 1 {
            let sign = if r % 2 == 0 { T::one() } else { -T::one() };
            Complex::new(sign, T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

/// Product quadrature that integrates products of two functions of band at
/// most `band` exactly against Haar measure.
///
/// Tori: `2 band + 1` uniform angles per axis. SU(2): Euler angles
/// `exp(α X3) exp(β X2) exp(γ X3)` with `2 band + 1` uniform nodes for `α`
/// and `γ` on `[0, 4π)` and `band + 1` Gauss-Legendre nodes in `cos β`.
#[derive(Clone, Debug)]
pub struct HaarGrid<T> {
    pub group: GroupKind,
    pub band: u32,
    pub points: Vec<GroupElement<T>>,
    pub weights: Vec<T>,
    euler: Option<EulerLayout<T>>,
}

#[derive(Clone, Debug)]
struct EulerLayout<T> {
    alphas: Vec<T>,
    betas: Vec<T>,
    gammas: Vec<T>,
}

impl<T: Scalar> HaarGrid<T> {
    pub fn new(group: GroupKind, band: u32) -> Self {
        let n = 2 * band as usize + 1;
        let two_pi = T::PI() * lit(2.0);
        let uniform = |count: usize, period: T| -> Vec<T> {
            (0..count)
                .map(|k| period * from_usize::<T>(k) / from_usize::<T>(count))
                .collect()
        };
        match group {
            GroupKind::T1 => {
                let th = uniform(n, two_pi);
                Self {
                    group,
                    band,
                    points: th.iter().map(|&t| GroupElement::T1(t)).collect(),
                    weights: vec![T::one() / from_usize::<T>(n); n],
                    euler: None,
                }
            }
            GroupKind::T2 => {
                let th = uniform(n, two_pi);
                let mut points = Vec::with_capacity(n * n);
                for &a in &th {
                    for &b in &th {
                        points.push(GroupElement::T2(a, b));
                    }
                }
                Self {
                    group,
                    band,
                    points,
                    weights: vec![T::one() / from_usize::<T>(n * n); n * n],
                    euler: None,
                }
            }
            GroupKind::Su2 => {
                let alphas = uniform(n, two_pi * lit(2.0));
                let gl = GaussLegendre::<T>::new(band as usize + 1);
                let betas: Vec<T> = gl.nodes.iter().map(|x| x.acos()).collect();
                let mut points = Vec::with_capacity(n * n * betas.len());
                let mut weights = Vec::with_capacity(points.capacity());
                let wa = T::one() / from_usize::<T>(n * n);
                for &a in &alphas {
                    for (ib, &b) in betas.iter().enumerate() {
                        for &g in &alphas {
                            points.push(GroupElement::Su2(Quaternion::from_euler(a, b, g)));
                            weights.push(wa * gl.weights[ib] * lit(0.5));
                        }
                    }
                }
                Self {
                    group,
                    band,
                    points,
                    weights,
                    euler: Some(EulerLayout {
                        gammas: alphas.clone(),
                        alphas,
                        betas,
                    }),
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sample<F: Fn(&GroupElement<T>) -> Complex<T>>(&self, f: F) -> Vec<Complex<T>> {
        self.points.iter().map(f).collect()
    }

    /// `Σ w_k v_k`.
    pub fn integrate(&self, values: &[Complex<T>]) -> Complex<T> {
        self.weights
            .iter()
            .zip(values)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (w, v)| acc + *v * *w)
    }

    /// `π` at every grid point, in point order.
    pub fn irrep_values(&self, pi: &Irrep<T>) -> Result<Vec<CMat<T>>> {
        let Some(e) = &self.euler else {
            return self.points.iter().map(|g| irrep_evaluate(pi, g)).collect();
        };
        let zrot = |t: T| {
            let d = pi.dim;
            Mat::diag(
                &(0..d)
                    .map(|k| {
                        let m = lit::<T>((d as f64 - 1.0) * 0.5 - k as f64);
                        Complex::new((m * t).cos(), (m * t).sin())
                    })
                    .collect::<Vec<_>>(),
            )
        };
        let za: Vec<CMat<T>> = e.alphas.iter().map(|&a| zrot(a)).collect();
        let zg: Vec<CMat<T>> = e.gammas.iter().map(|&g| zrot(g)).collect();
        let yb: Vec<CMat<T>> = e
            .betas
            .iter()
            .map(|&b| pi.generators[1].scale_real(b).expm())
            .collect();
        let mut out = Vec::with_capacity(self.points.len());
        for a in &za {
            for b in &yb {
                let ab = a.matmul(b);
                for g in &zg {
                    out.push(ab.matmul(g));
                }
            }
        }
        Ok(out)
    }
}

/// Validates a coefficient table against the dual truncated at `band`.
pub fn pw_forward_table<T: Scalar>(
    group: GroupKind,
    band: u32,
    blocks: BTreeMap<IrrepLabel, CMat<T>>,
) -> Result<PeterWeylCoeffs<T>> {
    let mut out = PeterWeylCoeffs::zero(group, band);
    for (l, b) in blocks {
        if l.group() != group {
            return Err(Error::InvalidInput(format!("label {l} does not belong to {group}")));
        }
        if l.band() > band {
            return Err(Error::Aliasing {
                band: l.band(),
                resolvable: band,
            });
        }
        if b.rows() != l.dim() || b.cols() != l.dim() {
            return Err(Error::InvalidInput(format!(
                "block for {l} is {}x{}, expected {}x{}",
                b.rows(),
                b.cols(),
                l.dim(),
                l.dim()
            )));
        }
        out.blocks.insert(l, b);
    }
    Ok(out)
}

/// `f̂(π) = ∫ f(σ) π(σ)^* dσ` from samples on a Haar grid.
pub fn pw_forward_samples<T: Scalar>(
    grid: &HaarGrid<T>,
    values: &[Complex<T>],
    band: u32,
) -> Result<PeterWeylCoeffs<T>> {
    if band > grid.band {
        return Err(Error::Aliasing {
            band,
            resolvable: grid.band,
        });
    }
    if values.len() != grid.len() {
        return Err(Error::InvalidInput(format!(
            "{} samples for a grid of {} points",
            values.len(),
            grid.len()
        )));
    }
    let mut out = PeterWeylCoeffs::zero(grid.group, band);
    for (l, block) in out.blocks.iter_mut() {
        let pi = Irrep::new(*l);
        let mats = grid.irrep_values(&pi)?;
        let mut acc = Mat::zeros(pi.dim, pi.dim);
        for ((m, v), w) in mats.iter().zip(values).zip(&grid.weights) {
            acc = &acc + &m.adjoint().scale(*v * *w);
        }
        *block = acc;
    }
    Ok(out)
}

/// `f(σ) = Σ_π d_π tr(f̂(π) π(σ))` at each point.
pub fn pw_inverse<T: Scalar>(
    coeffs: &PeterWeylCoeffs<T>,
    points: &[GroupElement<T>],
) -> Result<Vec<Complex<T>>> {
    let irreps: Vec<(Irrep<T>, &CMat<T>)> = coeffs
        .blocks
        .iter()
        .filter(|(_, b)| b.max_abs() > T::zero())
        .map(|(l, b)| (Irrep::new(*l), b))
        .collect();
    points
        .iter()
        .map(|g| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (pi, b) in &irreps {
                let m = irrep_evaluate(pi, g)?;
                acc = acc + b.trace_of_product(&m) * from_usize::<T>(pi.dim);
            }
            Ok(acc)
        })
        .collect()
}

/// `pw_inverse` on a whole Haar grid, reusing the grid's fast irrep tables.
pub fn pw_inverse_grid<T: Scalar>(
    coeffs: &PeterWeylCoeffs<T>,
    grid: &HaarGrid<T>,
) -> Result<Vec<Complex<T>>> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); grid.len()];
    for (l, b) in &coeffs.blocks {
        if b.max_abs() == T::zero() {
            continue;
        }
        let pi = Irrep::new(*l);
        let d = from_usize::<T>(pi.dim);
        for (o, m) in out.iter_mut().zip(grid.irrep_values(&pi)?) {
            *o = *o + b.trace_of_product(&m) * d;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_weights_sum_to_one() {
        for g in [GroupKind::T1, GroupKind::T2, GroupKind::Su2] {
            let grid = HaarGrid::<f64>::new(g, 3);
            let s: f64 = grid.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn fast_irrep_tables_match_direct_evaluation() {
        let grid = HaarGrid::<f64>::new(GroupKind::Su2, 3);
        for t in 0..4 {
            let pi = Irrep::new(IrrepLabel::Su2 { twice_spin: t });
            let fast = grid.irrep_values(&pi).unwrap();
            for (m, g) in fast.iter().zip(&grid.points).step_by(7) {
                let direct = irrep_evaluate(&pi, g).unwrap();
                assert!((m - &direct).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn conjugate_function_matches_pointwise_conjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in [GroupKind::T1, GroupKind::T2, GroupKind::Su2] {
            let f = PeterWeylCoeffs::<f64>::random(g, 2, &mut rng);
            let grid = HaarGrid::new(g, 2);
            let a = pw_inverse_grid(&f, &grid).unwrap();
            let b = pw_inverse_grid(&f.conjugate_function(), &grid).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x.conj() - y).norm() < 1e-11);
            }
            let r = pw_inverse_grid(&f.real_part(), &grid).unwrap();
            assert!(r.iter().all(|z| z.im.abs() < 1e-11));
        }
    }

    #[test]
    fn round_trip_su2() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = PeterWeylCoeffs::<f64>::random(GroupKind::Su2, 3, &mut rng);
        let grid = HaarGrid::new(GroupKind::Su2, 3);
        let v = pw_inverse_grid(&f, &grid).unwrap();
        let back = pw_forward_samples(&grid, &v, 3).unwrap();
        for (l, b) in &f.blocks {
            assert!((b - &back.blocks[l]).max_abs() < 1e-11, "{l}");
        }
    }

    #[test]
    fn aliasing_is_reported() {
        let grid = HaarGrid::<f64>::new(GroupKind::T1, 2);
        let v = vec![Complex::new(1.0, 0.0); grid.len()];
        assert_eq!(
            pw_forward_samples(&grid, &v, 3),
            Err(Error::Aliasing {
                band: 3,
                resolvable: 2
            })
        );
    }
}
