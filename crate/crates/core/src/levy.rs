//! Lévy characteristics on R^n: symbols, Lévy-measure checks, the diffusion
//! factor and Bernstein functions.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::quadrature::{log_panels, Accumulate, GaussLegendre};
use crate::scalar::{from_usize, lit, to_f64, tolerance, Scalar};

/// Radial panels per decade on the coarse pass; the refined pass doubles it.
const PANELS_PER_DECADE: usize = 3;
/// Relative disagreement allowed between the coarse and refined passes.
const REFINEMENT_TOL: f64 = 1e-8;
/// Eigenvalue floor for positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-12;

/// Density of a Lévy measure with respect to Lebesgue measure, as a function
/// of radius `r = |y|` and direction `y / |y|`.
#[derive(Clone)]
pub enum DensityProfile<T> {
    /// `scale * r^(-exponent)`.
    PowerLaw { scale: T, exponent: T },
    /// `scale * r^(-exponent) * exp(-decay * r)`.
    Tempered { scale: T, exponent: T, decay: T },
    Custom(Arc<dyn Fn(T, &[T]) -> T + Send + Sync>),
}

impl<T: Scalar> DensityProfile<T> {
    pub fn eval(&self, r: T, direction: &[T]) -> T {
        match self {
            Self::PowerLaw { scale, exponent } => *scale * r.powf(-*exponent),
            Self::Tempered {
                scale,
                exponent,
                decay,
            } => *scale * r.powf(-*exponent) * (-*decay * r).exp(),
            Self::Custom(f) => f(r, direction),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for DensityProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PowerLaw { scale, exponent } => f
                .debug_struct("PowerLaw")
                .field("scale", scale)
                .field("exponent", exponent)
                .finish(),
            Self::Tempered {
                scale,
                exponent,
                decay,
            } => f
                .debug_struct("Tempered")
                .field("scale", scale)
                .field("exponent", exponent)
                .field("decay", decay)
                .finish(),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Density supported on the shell `inner_cutoff <= |y| <= outer_cutoff`.
#[derive(Clone, Debug)]
pub struct LevyDensity<T> {
    pub profile: DensityProfile<T>,
    pub inner_cutoff: T,
    pub outer_cutoff: T,
    /// Gauss-Legendre nodes per radial panel.
    pub quadrature_nodes: usize,
    /// Angular resolution (ignored in one dimension and on the half-line).
    pub angular_nodes: usize,
}

impl<T: Scalar> LevyDensity<T> {
    pub fn new(profile: DensityProfile<T>, inner_cutoff: T, outer_cutoff: T) -> Self {
        Self {
            profile,
            inner_cutoff,
            outer_cutoff,
            quadrature_nodes: 16,
            angular_nodes: 64,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.inner_cutoff > T::zero() && self.outer_cutoff > self.inner_cutoff) {
            return Err(Error::InvalidInput(format!(
                "density cutoffs must satisfy 0 < eps < R, got eps={}, R={}",
                self.inner_cutoff, self.outer_cutoff
            )));
        }
        if self.quadrature_nodes == 0 || self.angular_nodes == 0 {
            return Err(Error::InvalidInput("quadrature node counts must be positive".into()));
        }
        Ok(())
    }

    /// Same density on a different shell.
    pub fn with_cutoffs(&self, inner: T, outer: T) -> Self {
        Self {
            inner_cutoff: inner,
            outer_cutoff: outer,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevyAtom<T> {
    pub point: Vec<T>,
    pub mass: T,
}

/// Lévy measure on R^n: finitely many atoms plus an optional truncated
/// density.
#[derive(Clone, Debug)]
pub struct LevyMeasureRn<T> {
    dim: usize,
    atoms: Vec<LevyAtom<T>>,
    density: Option<LevyDensity<T>>,
}

impl<T: Scalar> LevyMeasureRn<T> {
    pub fn new(
        dim: usize,
        atoms: Vec<LevyAtom<T>>,
        density: Option<LevyDensity<T>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for (k, atom) in atoms.iter().enumerate() {
            if atom.point.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "atom {k} has dimension {}, expected {dim}",
                    atom.point.len()
                )));
            }
            if atom.point.iter().all(|x| *x == T::zero()) {
                return Err(Error::InvalidInput(format!("atom {k} sits at the origin")));
            }
            if !(atom.mass > T::zero() && atom.mass.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "atom {k} has mass {}, must be positive and finite",
                    atom.mass
                )));
            }
        }
        if let Some(d) = &density {
            d.check()?;
            if dim > 3 {
                return Err(Error::InvalidInput(
                    "density quadrature is implemented for dimensions 1 to 3".into(),
                ));
            }
        }
        Ok(Self {
            dim,
            atoms,
            density,
        })
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            atoms: Vec::new(),
            density: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[LevyAtom<T>] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&LevyDensity<T>> {
        self.density.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.density.is_none()
    }

    /// True when the atom set is closed under `y -> -y` with equal masses and
    /// the density is absent or an even power law.
    pub fn is_symmetric(&self) -> bool {
        let tol = tolerance::<T>(1e-12);
        let atoms_ok = self.atoms.iter().all(|a| {
            self.atoms.iter().any(|b| {
                (a.mass - b.mass).abs() <= tol
                    && a.point.iter().zip(&b.point).all(|(x, y)| (*x + *y).abs() <= tol)
            })
        });
        let density_ok = match &self.density {
            None => true,
            Some(d) => !matches!(d.profile, DensityProfile::Custom(_)),
        };
        atoms_ok && density_ok
    }

    /// `∫ f dν`, atoms summed exactly and the density by panel quadrature.
    ///
    /// `f` returns the integrand value and its magnitude (the latter sets the
    /// scale of the refinement check). `freq` bounds the oscillation rate of
    /// the integrand in the radius and caps the radial panel width at
    /// `pi / freq`.
    pub fn integrate<V, F>(&self, freq: T, f: F) -> Result<V>
    where
        V: Accumulate<T>,
        F: Fn(&[T]) -> (V, T),
    {
        let mut acc = V::zero();
        for atom in &self.atoms {
            acc = acc + f(&atom.point).0 * atom.mass;
        }
        Ok(acc + self.integrate_density(freq, f)?)
    }

    /// `∫ (1 - cos xi·y)` against the density, `None` when the profile is not
    /// radial. The angular average is done in closed form (`cos`, `J0`,
    /// `sinc` in dimensions 1, 2, 3), leaving a radial integral.
    pub fn density_one_minus_cos(&self, xi: &[T]) -> Result<Option<T>> {
        let Some(d) = &self.density else {
            return Ok(Some(T::zero()));
        };
        if matches!(d.profile, DensityProfile::Custom(_)) {
            return Ok(None);
        }
        let freq = dot(xi, xi).sqrt();
        let dim = self.dim;
        let surface = match dim {
            1 => lit::<T>(2.0),
            2 => T::PI() * lit(2.0),
            _ => T::PI() * lit(4.0),
        };
        let direction = {
            let mut e = vec![T::zero(); dim];
            e[0] = T::one();
            e
        };
        let average = |x: T| match dim {
            1 => x.cos(),
            2 => lit(libm::j0(to_f64(x))),
            _ if x.abs() < lit(1e-4) => T::one() - x * x / lit(6.0),
            _ => x.sin() / x,
        };
        let pass = |per_decade: usize, max_width: Option<T>| {
            let gl = GaussLegendre::<T>::new(d.quadrature_nodes);
            let breaks = log_panels(d.inner_cutoff, d.outer_cutoff, per_decade, max_width);
            let mut acc = T::zero();
            for w in breaks.windows(2) {
                for (r, wr) in gl.mapped(w[0], w[1]) {
                    let g = d.profile.eval(r, &direction) * r.powi(dim as i32 - 1);
                    acc += (T::one() - average(freq * r)) * g * wr;
                }
            }
            acc * surface
        };
        let width = (freq > T::zero()).then(|| T::PI() / freq);
        let coarse = pass(PANELS_PER_DECADE, width);
        let fine = pass(2 * PANELS_PER_DECADE, width.map(|w| w * lit(0.5)));
        let gap = (fine - coarse).abs();
        if !(gap <= tolerance::<T>(REFINEMENT_TOL) * fine.abs().max(T::min_positive_value())) {
            return Err(Error::QuadratureNonConvergence {
                coarse: to_f64(coarse),
                refined: to_f64(fine),
                relative_gap: to_f64(gap / fine.abs().max(T::min_positive_value())),
            });
        }
        Ok(Some(fine))
    }

    /// Density part of [`integrate`](Self::integrate) alone; zero without a
    /// density.
    pub fn integrate_density<V, F>(&self, freq: T, f: F) -> Result<V>
    where
        V: Accumulate<T>,
        F: Fn(&[T]) -> (V, T),
    {
        match &self.density {
            Some(d) => refined_density_integral(d, self.dim, freq, &f),
            None => Ok(V::zero()),
        }
    }
}

/// Direction nodes and weights on the unit sphere of R^dim.
pub(crate) fn angular_rule<T: Scalar>(dim: usize, m: usize) -> Result<Vec<(Vec<T>, T)>> {
    let two_pi = T::PI() * lit(2.0);
    match dim {
        1 => Ok(vec![(vec![T::one()], T::one()), (vec![-T::one()], T::one())]),
        2 => Ok((0..m)
            .map(|k| {
                let phi = two_pi * from_usize::<T>(k) / from_usize::<T>(m);
                (vec![phi.cos(), phi.sin()], two_pi / from_usize::<T>(m))
            })
            .collect()),
        3 => {
            let gl = GaussLegendre::<T>::new(m);
            let n_phi = 2 * m;
            let mut out = Vec::with_capacity(m * n_phi);
            for (&z, &wz) in gl.nodes.iter().zip(&gl.weights) {
                let rho = (T::one() - z * z).max(T::zero()).sqrt();
                for k in 0..n_phi {
                    let phi = two_pi * from_usize::<T>(k) / from_usize::<T>(n_phi);
                    out.push((
                        vec![rho * phi.cos(), rho * phi.sin(), z],
                        wz * two_pi / from_usize::<T>(n_phi),
                    ));
                }
            }
            Ok(out)
        }
        _ => Err(Error::InvalidInput(format!(
            "no angular rule for dimension {dim}"
        ))),
    }
}

fn density_pass<T, V, F>(
    d: &LevyDensity<T>,
    dim: usize,
    per_decade: usize,
    max_width: Option<T>,
    angular: usize,
    f: &F,
) -> Result<(V, T)>
where
    T: Scalar,
    V: Accumulate<T>,
    F: Fn(&[T]) -> (V, T),
{
    // dim 0 encodes the positive half-line
    let dirs = if dim == 0 {
        vec![(vec![T::one()], T::one())]
    } else {
        angular_rule::<T>(dim, angular)?
    };
    let dim = dim.max(1);
    let gl = GaussLegendre::<T>::new(d.quadrature_nodes);
    let breaks = log_panels(d.inner_cutoff, d.outer_cutoff, per_decade, max_width);
    let mut acc = V::zero();
    let mut scale = T::zero();
    let mut y = vec![T::zero(); dim];
    for (theta, wt) in &dirs {
        for w in breaks.windows(2) {
            for (r, wr) in gl.mapped(w[0], w[1]) {
                for (yi, ti) in y.iter_mut().zip(theta) {
                    *yi = r * *ti;
                }
                let g = d.profile.eval(r, theta) * r.powi(dim as i32 - 1);
                let (v, mag) = f(&y);
                let weight = g * wr * *wt;
                acc = acc + v * weight;
                scale += mag * weight.abs();
            }
        }
    }
    Ok((acc, scale))
}

fn refined_density_integral<T, V, F>(d: &LevyDensity<T>, dim: usize, freq: T, f: &F) -> Result<V>
where
    T: Scalar,
    V: Accumulate<T>,
    F: Fn(&[T]) -> (V, T),
{
    let width = (freq > T::zero()).then(|| T::PI() / freq);
    let (coarse, _) = density_pass(d, dim, PANELS_PER_DECADE, width, d.angular_nodes, f)?;
    let (fine, scale) = density_pass(
        d,
        dim,
        2 * PANELS_PER_DECADE,
        width.map(|w| w * lit(0.5)),
        2 * d.angular_nodes,
        f,
    )?;
    let gap = (fine - coarse).magnitude();
    let allowed = tolerance::<T>(REFINEMENT_TOL) * scale.max(T::min_positive_value());
    if !(gap <= allowed) {
        return Err(Error::QuadratureNonConvergence {
            coarse: to_f64(coarse.magnitude()),
            refined: to_f64(fine.magnitude()),
            relative_gap: to_f64(gap / scale.max(T::min_positive_value())),
        });
    }
    Ok(fine)
}

/// Lévy characteristics `(b, a, ν)` on R^n.
#[derive(Clone, Debug)]
pub struct LevyTriple<T> {
    drift: Vec<T>,
    diffusion: Mat<T>,
    nu: LevyMeasureRn<T>,
}

impl<T: Scalar> LevyTriple<T> {
    pub fn new(drift: Vec<T>, diffusion: Mat<T>, nu: LevyMeasureRn<T>) -> Result<Self> {
        let n = drift.len();
        if diffusion.rows() != n || diffusion.cols() != n || nu.dim() != n {
            return Err(Error::InvalidInput(format!(
                "dimension mismatch: drift {n}, diffusion {}x{}, measure {}",
                diffusion.rows(),
                diffusion.cols(),
                nu.dim()
            )));
        }
        check_psd(&diffusion)?;
        Ok(Self {
            drift,
            diffusion,
            nu,
        })
    }

    /// Pure Gaussian triple `(0, a, 0)`.
    pub fn gaussian(diffusion: Mat<T>) -> Result<Self> {
        let n = diffusion.rows();
        Self::new(vec![T::zero(); n], diffusion, LevyMeasureRn::empty(n))
    }

    pub fn dim(&self) -> usize {
        self.drift.len()
    }

    pub fn drift(&self) -> &[T] {
        &self.drift
    }

    pub fn diffusion(&self) -> &Mat<T> {
        &self.diffusion
    }

    pub fn nu(&self) -> &LevyMeasureRn<T> {
        &self.nu
    }
}

fn check_psd<T: Scalar>(a: &Mat<T>) -> Result<()> {
    let scale = T::one() + a.max_abs();
    let asym = a.asymmetry();
    if asym > tolerance::<T>(PSD_TOL) * scale {
        return Err(Error::NotSymmetric {
            asymmetry: to_f64(asym),
        });
    }
    if let Some(&min) = a.symmetric_eigenvalues().first() {
        if min < -tolerance::<T>(PSD_TOL) * scale.max(T::one()) {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: to_f64(min),
            });
        }
    }
    Ok(())
}

#[inline]
pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (x, y)| s + *x * *y)
}

/// `1 - cos x` without cancellation for small `x`.
#[inline]
pub(crate) fn one_minus_cos<T: Scalar>(x: T) -> T {
    let s = (x * lit(0.5)).sin();
    lit::<T>(2.0) * s * s
}

/// Lévy-Khintchine symbol `rho(xi)`, returned as `re + i im`.
pub fn eval_symbol<T: Scalar>(triple: &LevyTriple<T>, xi: &[T]) -> Result<Complex<T>> {
    if xi.len() != triple.dim() {
        return Err(Error::InvalidInput(format!(
            "frequency has dimension {}, triple has {}",
            xi.len(),
            triple.dim()
        )));
    }
    let a_xi = triple.diffusion.mul_vec(xi);
    let gauss = dot(&a_xi, xi);
    let integrand = |y: &[T]| {
        let phase = dot(xi, y);
        let r2 = dot(y, y);
        let comp = if r2 < T::one() { phase } else { T::zero() };
        let v = Complex::new(-one_minus_cos(phase), phase.sin() - comp);
        let mag = one_minus_cos(phase) + (phase.sin() - comp).abs();
        (v, mag)
    };
    let mut jumps = Complex::new(T::zero(), T::zero());
    for atom in triple.nu.atoms() {
        jumps = jumps + integrand(&atom.point).0 * atom.mass;
    }
    // a radial density is even, so its odd part integrates to zero
    jumps = jumps
        + match triple.nu.density_one_minus_cos(xi)? {
            Some(v) => Complex::new(-v, T::zero()),
            None => triple.nu.integrate_density(dot(xi, xi).sqrt(), integrand)?,
        };
    Ok(Complex::new(-gauss + jumps.re, dot(&triple.drift, xi) + jumps.im))
}

/// Outcome of the numerical Lévy-measure integrability check.
#[derive(Clone, Debug, PartialEq)]
pub struct LevyMeasureReport {
    /// Final estimate of `∫ |y|^2 / (1 + |y|^2) ν(dy)`.
    pub estimate: f64,
    /// Estimates along the cutoff schedule (density only; atoms included).
    pub refinements: Vec<f64>,
    pub passed: bool,
    pub warnings: Vec<String>,
}

/// Cap above which the moment estimate is treated as infinite.
pub const MOMENT_CAP: f64 = 1e12;
const SCHEDULE_STEPS: usize = 4;

/// Checks `∫ |y|^2 / (1 + |y|^2) ν(dy) < ∞` numerically.
///
/// The density shell is widened by a decade at both ends per step; the
/// estimate passes when the increments shrink geometrically and the last one
/// is negligible against the total.
pub fn validate_levy_measure<T: Scalar>(nu: &LevyMeasureRn<T>) -> LevyMeasureReport {
    let moment = |y: &[T]| {
        let r2 = dot(y, y);
        let v = r2 / (T::one() + r2);
        (v, v)
    };
    let atom_part: T = nu
        .atoms
        .iter()
        .fold(T::zero(), |s, a| s + moment(&a.point).0 * a.mass);
    let mut warnings = Vec::new();
    let Some(d) = &nu.density else {
        let est = to_f64(atom_part);
        return LevyMeasureReport {
            estimate: est,
            refinements: vec![est],
            passed: est.is_finite() && est <= MOMENT_CAP,
            warnings,
        };
    };
    let ten = lit::<T>(10.0);
    let mut estimates = Vec::with_capacity(SCHEDULE_STEPS + 1);
    let mut inner = d.inner_cutoff;
    let mut outer = d.outer_cutoff;
    for _ in 0..=SCHEDULE_STEPS {
        let shell = d.with_cutoffs(inner, outer);
        match refined_density_integral(&shell, nu.dim, T::zero(), &moment) {
            Ok(v) => estimates.push(to_f64(atom_part + v)),
            Err(e) => {
                warnings.push(format!("quadrature at eps={inner}, R={outer}: {e}"));
                estimates.push(f64::INFINITY);
            }
        }
        inner = inner / ten;
        outer = outer * ten;
    }
    let est = *estimates.last().unwrap();
    let incs: Vec<f64> = estimates.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let last = *incs.last().unwrap();
    let shrinking = incs
        .windows(2)
        .all(|w| w[1] <= 0.9 * w[0] || w[1] <= 1e-12 * est.abs().max(1.0));
    if !shrinking {
        warnings.push("moment increments do not shrink as the cutoffs widen".into());
    }
    let small = last <= 1e-3 * est.abs().max(1.0);
    if !small {
        warnings.push(format!("last cutoff step still changed the moment by {last:e}"));
    }
    if !(est <= MOMENT_CAP) {
        warnings.push(format!("moment estimate {est:e} exceeds the cap"));
    }
    LevyMeasureReport {
        estimate: est,
        refinements: estimates,
        passed: shrinking && small && est.is_finite() && est <= MOMENT_CAP,
        warnings,
    }
}

/// `Λ` with `Λ Λ^T = 2a`, by diagonally pivoted Cholesky.
pub fn factor_diffusion<T: Scalar>(a: &Mat<T>) -> Result<Mat<T>> {
    if !a.is_square() {
        return Err(Error::InvalidInput("diffusion matrix must be square".into()));
    }
    check_psd(a)?;
    let two_a = a.scale(lit(2.0));
    let tol = tolerance::<T>(PSD_TOL) * (T::one() + two_a.max_abs());
    two_a.pivoted_cholesky(tol)
}

/// Bernstein function `h(u) = c u + ∫ (1 - e^{-uy}) λ(dy)`.
#[derive(Clone, Debug)]
pub struct BernsteinSpec<T> {
    pub c: T,
    /// `(y, mass)` pairs with `y > 0`.
    pub atoms: Vec<(T, T)>,
    /// Density on `(0, ∞)`; the profile is evaluated with direction `[1]`.
    pub density: Option<LevyDensity<T>>,
}

impl<T: Scalar> BernsteinSpec<T> {
    pub fn new(c: T, atoms: Vec<(T, T)>, density: Option<LevyDensity<T>>) -> Result<Self> {
        if !(c >= T::zero() && c.is_finite()) {
            return Err(Error::InvalidInput(format!("linear coefficient {c} must be >= 0")));
        }
        for (k, &(y, m)) in atoms.iter().enumerate() {
            if !(y > T::zero() && m > T::zero() && y.is_finite() && m.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "Bernstein atom {k} = ({y}, {m}) needs positive location and mass"
                )));
            }
        }
        if let Some(d) = &density {
            d.check()?;
        }
        Ok(Self { c, atoms, density })
    }

    pub fn linear(c: T) -> Self {
        Self {
            c,
            atoms: Vec::new(),
            density: None,
        }
    }

    /// Total jump intensity; infinite if a density is present.
    pub fn total_intensity(&self) -> T {
        if self.density.is_some() {
            return T::infinity();
        }
        self.atoms.iter().fold(T::zero(), |s, a| s + a.1)
    }
}

fn half_line_integral<T, F>(d: &LevyDensity<T>, f: F) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let g = |y: &[T]| {
        let v = f(y[0]);
        (v, v.abs())
    };
    refined_density_integral(d, 0, T::zero(), &g)
}

/// Evaluates `h(u)`.
pub fn bernstein_eval<T: Scalar>(h: &BernsteinSpec<T>, u: T) -> Result<T> {
    if !(u > T::zero()) {
        return Err(Error::InvalidInput(format!("Bernstein argument {u} must be > 0")));
    }
    let mut total = h.c * u;
    for &(y, m) in &h.atoms {
        total += -(-u * y).exp_m1() * m;
    }
    if let Some(d) = &h.density {
        total += half_line_integral(d, |y| -(-u * y).exp_m1())?;
    }
    Ok(total)
}

/// Checks `∫ (1 ∧ y) λ(dy) < ∞` on the configured shell.
pub fn bernstein_mass<T: Scalar>(h: &BernsteinSpec<T>) -> Result<T> {
    let mut total = h
        .atoms
        .iter()
        .fold(T::zero(), |s, &(y, m)| s + y.min(T::one()) * m);
    if let Some(d) = &h.density {
        total += half_line_integral(d, |y| y.min(T::one()))?;
    }
    Ok(total)
}

/// Finite-activity approximation of `h` for simulation.
///
/// Jumps below `cutoff` are folded into the drift through `1 - e^{-uy} ≈ uy`;
/// the rest of the density becomes `bins` atoms on logarithmic bins, each at
/// the bin's mean jump size. The result's own [`bernstein_eval`] is the exact
/// Laplace exponent of the simulated subordinator.
pub fn discretize<T: Scalar>(h: &BernsteinSpec<T>, cutoff: T, bins: usize) -> Result<BernsteinSpec<T>> {
    let Some(d) = &h.density else {
        return Ok(h.clone());
    };
    if bins == 0 {
        return Err(Error::InvalidInput("discretization needs at least one bin".into()));
    }
    let lo = d.inner_cutoff;
    let hi = d.outer_cutoff;
    let cut = cutoff.max(lo).min(hi);
    let mut c = h.c;
    if cut > lo {
        c += half_line_integral(&d.with_cutoffs(lo, cut), |y| y)?;
    }
    let mut atoms = h.atoms.clone();
    if hi > cut {
        let ratio = (hi / cut).powf(T::one() / from_usize::<T>(bins));
        let mut a = cut;
        for k in 0..bins {
            let b = if k + 1 == bins { hi } else { a * ratio };
            let shell = d.with_cutoffs(a, b);
            let mass = half_line_integral(&shell, |_| T::one())?;
            if mass > T::zero() {
                let first = half_line_integral(&shell, |y| y)?;
                atoms.push((first / mass, mass));
            }
            a = b;
        }
    }
    BernsteinSpec::new(c, atoms, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(point: Vec<f64>, mass: f64) -> LevyAtom<f64> {
        LevyAtom { point, mass }
    }

    #[test]
    fn gaussian_symbol() {
        let t = LevyTriple::gaussian(Mat::<f64>::identity(2)).unwrap();
        let s = eval_symbol(&t, &[1.5, -2.0]).unwrap();
        assert!((s.re + 6.25).abs() < 1e-14);
        assert_eq!(s.im, 0.0);
    }

    #[test]
    fn symmetric_atoms_cancel_sines() {
        let nu = LevyMeasureRn::new(1, vec![atom(vec![1.0], 1.0), atom(vec![-1.0], 1.0)], None)
            .unwrap();
        let t = LevyTriple::new(vec![0.0], Mat::zeros(1, 1), nu).unwrap();
        for &x in &[0.3, 1.0, 4.2] {
            let s = eval_symbol(&t, &[x]).unwrap();
            assert!((s.re - 2.0 * (x.cos() - 1.0)).abs() < 1e-14);
            assert!(s.im.abs() < 1e-15);
        }
    }

    #[test]
    fn measure_validation_trivial_cases() {
        let r = validate_levy_measure(&LevyMeasureRn::<f64>::empty(1));
        assert!(r.passed);
        assert_eq!(r.estimate, 0.0);
        let nu = LevyMeasureRn::new(1, vec![atom(vec![1.0], 5.0)], None).unwrap();
        let r = validate_levy_measure(&nu);
        assert!(r.passed);
        assert!((r.estimate - 2.5).abs() < 1e-15);
    }

    #[test]
    fn cubic_density_diverges() {
        let d = LevyDensity::new(
            DensityProfile::PowerLaw {
                scale: 1.0,
                exponent: 3.0,
            },
            1e-2,
            1e2,
        );
        let nu = LevyMeasureRn::new(1, vec![], Some(d)).unwrap();
        let r = validate_levy_measure(&nu);
        assert!(!r.passed);
        // each decade toward zero adds 2 ln 10
        let incs: Vec<f64> = r.refinements.windows(2).map(|w| w[1] - w[0]).collect();
        for inc in incs {
            assert!((inc - 2.0 * 10f64.ln()).abs() < 1e-2, "{inc}");
        }
    }

    #[test]
    fn factor_examples() {
        let l = factor_diffusion(&Mat::<f64>::identity(2)).unwrap();
        assert!((&l - &Mat::scalar(2, 2f64.sqrt())).max_abs() < 1e-15);
        let l = factor_diffusion(&Mat::<f64>::zeros(3, 3)).unwrap();
        assert_eq!(l.max_abs(), 0.0);
        let a = Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let l = factor_diffusion(&a).unwrap();
        let back = l.matmul(&l.transpose());
        let target = Mat::from_rows(&[vec![4.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!((&back - &target).max_abs() < 1e-14);
    }

    #[test]
    fn factor_rejects_bad_input() {
        let a = Mat::from_rows(&[vec![1.0, 0.0], vec![0.5, 1.0]]).unwrap();
        assert!(matches!(factor_diffusion(&a), Err(Error::NotSymmetric { .. })));
        let a = Mat::from_rows(&[vec![1.0, 0.0], vec![0.0, -1e-6]]).unwrap();
        assert!(matches!(
            factor_diffusion(&a),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn bernstein_trivial_cases() {
        let h = BernsteinSpec::linear(1.0);
        assert_eq!(bernstein_eval(&h, 3.0).unwrap(), 3.0);
        let h = BernsteinSpec::new(0.0, vec![(1.0, 1.0)], None).unwrap();
        for &u in &[0.1f64, 1.0, 5.0] {
            let v = bernstein_eval(&h, u).unwrap();
            assert!((v - (1.0 - (-u).exp())).abs() < 1e-15);
        }
    }

    #[test]
    fn discretized_bernstein_keeps_atoms_only() {
        let d = LevyDensity::new(
            DensityProfile::PowerLaw {
                scale: 1.0,
                exponent: 1.5,
            },
            1e-8,
            1e4,
        );
        let h = BernsteinSpec::new(0.0, vec![], Some(d)).unwrap();
        let disc = discretize(&h, 1e-2f64, 40).unwrap();
        assert!(disc.density.is_none());
        assert_eq!(disc.atoms.len(), 40);
        assert!(disc.c > 0.0);
        let exact = bernstein_eval(&h, 1.0).unwrap();
        let approx = bernstein_eval(&disc, 1.0).unwrap();
        assert!((exact - approx).abs() < 2e-2 * exact);
    }

    #[test]
    fn radial_reduction_matches_angular_quadrature() {
        for dim in 1..=3 {
            let mut d = LevyDensity::new(
                DensityProfile::Tempered {
                    scale: 0.7,
                    exponent: dim as f64 + 0.8,
                    decay: 0.5,
                },
                1e-3,
                3.0,
            );
            d.angular_nodes = 96;
            let nu = LevyMeasureRn::new(dim, vec![], Some(d)).unwrap();
            let xi: Vec<f64> = [1.3, -0.4, 0.9][..dim].to_vec();
            let radial = nu.density_one_minus_cos(&xi).unwrap().unwrap();
            let brute: f64 = nu
                .integrate_density(dot(&xi, &xi).sqrt(), |y| {
                    let v = one_minus_cos(dot(&xi, y));
                    (v, v)
                })
                .unwrap();
            assert!((radial - brute).abs() < 1e-9 * brute, "dim {dim}: {radial} vs {brute}");
        }
    }
}
