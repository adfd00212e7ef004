//! The acceptance suite: twelve property checks with fixed tolerances, each
//! returning a pass/fail outcome and the metrics it was judged on.
//!
//! Everything here is `f64`. Fixtures are drawn from seeded streams, so an
//! outcome depends only on [`VerifyOptions`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use crate::apply::{
    apply_symbol_coeffs, apply_symbol_grid, lattice_sup, norm_lower_bound_search, plancherel_residual,
    symbol_table, torus_coeffs_to_grid, NormSearch, ZeroMode,
};
use crate::constants::{burkholder_constant, cpbb_bounds};
use crate::error::{Error, Result};
use crate::euclid::{
    multiplier_autonomous, multiplier_time_dependent, riesz2_symbol_rn, DensityPsi, JumpPsi, MatrixProfile,
    MultiplierSpec, ScalarProfile,
};
use crate::group::{
    casimir_eigenvalue, central_alpha, central_multiplier_with_alpha, centrality_defect, dual_enumerate,
    laplace_type_symbol, riesz2_symbol_group, semigroup_block, subordination_symbol, GroupElement, GroupKind,
    GroupLevyMeasure, Irrep, IrrepLabel, PeterWeylCoeffs,
};
use crate::levy::{
    bernstein_eval, discretize, BernsteinSpec, DensityProfile, LevyAtom, LevyDensity, LevyMeasureRn, LevyTriple,
};
use crate::linalg::{CMat, Mat};
use crate::sim::{
    check_differential_subordination, check_nonsymmetric_subordination, empirical_burkholder, empirical_char,
    projection_mc_estimate, simulate_ensemble, simulate_subordinator, stream_rng, transcript_ensemble,
    GroupProcessSpec, Purpose, Transform,
};
use crate::special::gamma_one_minus_i;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    MultiplierBound,
    RieszOracle,
    NormNonExceedance,
    Plancherel,
    Casimir,
    ImaginaryPower,
    DifferentialSubordination,
    Burkholder,
    Projection,
    LevyKhintchine,
    Subordination,
    Constants,
}

impl Criterion {
    pub const ALL: [Criterion; 12] = [
        Self::MultiplierBound,
        Self::RieszOracle,
        Self::NormNonExceedance,
        Self::Plancherel,
        Self::Casimir,
        Self::ImaginaryPower,
        Self::DifferentialSubordination,
        Self::Burkholder,
        Self::Projection,
        Self::LevyKhintchine,
        Self::Subordination,
        Self::Constants,
    ];

    pub fn id(self) -> u8 {
        Self::ALL.iter().position(|c| *c == self).expect("listed") as u8 + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::MultiplierBound => "multiplier-bound",
            Self::RieszOracle => "riesz",
            Self::NormNonExceedance => "norm",
            Self::Plancherel => "plancherel",
            Self::Casimir => "casimir",
            Self::ImaginaryPower => "imaginary-power",
            Self::DifferentialSubordination => "differential-subordination",
            Self::Burkholder => "burkholder",
            Self::Projection => "projection",
            Self::LevyKhintchine => "levy-khintchine",
            Self::Subordination => "subordination",
            Self::Constants => "constants",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(n) = s.parse::<usize>() {
            if (1..=12).contains(&n) {
                return Ok(Self::ALL[n - 1]);
            }
        }
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown criterion '{s}'")))
    }
}

/// Sizes and seed of a verification run. The defaults are the full
/// acceptance sizes.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Monte Carlo paths per ensemble.
    pub paths: usize,
    pub multiplier_specs: usize,
    pub frequency_grid: usize,
    pub norm_specs: usize,
    pub plancherel_pairs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            paths: 10_000,
            multiplier_specs: 1000,
            frequency_grid: 64,
            norm_specs: 200,
            plancherel_pairs: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionOutcome {
    pub criterion: Criterion,
    pub passed: bool,
    pub summary: String,
    pub metrics: Vec<(String, f64)>,
}

impl CriterionOutcome {
    fn new(criterion: Criterion) -> Self {
        Self {
            criterion,
            passed: true,
            summary: String::new(),
            metrics: Vec::new(),
        }
    }

    fn metric(&mut self, name: impl Into<String>, v: f64) {
        self.metrics.push((name.into(), v));
    }

    /// Records `value <= bound` as a metric and folds it into `passed`.
    fn require_le(&mut self, name: &str, value: f64, bound: f64) {
        self.metric(name, value);
        self.metric(format!("{name}.bound"), bound);
        if !(value <= bound) {
            self.passed = false;
            self.summary.push_str(&format!("{name}={value:.3e} > {bound:.3e}; "));
        }
    }

    /// One line: `[PASS] 7 differential-subordination: ...`.
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let metrics: Vec<String> = self
            .metrics
            .iter()
            .filter(|(n, _)| !n.ends_with(".bound"))
            .map(|(n, v)| format!("{n}={v:.4e}"))
            .collect();
        format!(
            "[{status}] {:>2} {}: {}{}",
            self.criterion.id(),
            self.criterion.name(),
            self.summary,
            metrics.join(" ")
        )
    }
}

pub fn run_criterion(c: Criterion, opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let mut out = match c {
        Criterion::MultiplierBound => multiplier_bound(opts),
        Criterion::RieszOracle => riesz_oracle(opts),
        Criterion::NormNonExceedance => norm_non_exceedance(opts),
        Criterion::Plancherel => plancherel(opts),
        Criterion::Casimir => casimir(),
        Criterion::ImaginaryPower => imaginary_power(),
        Criterion::DifferentialSubordination => differential_subordination(opts),
        Criterion::Burkholder => burkholder(opts),
        Criterion::Projection => projection(opts),
        Criterion::LevyKhintchine => levy_khintchine(opts),
        Criterion::Subordination => subordination(opts),
        Criterion::Constants => constants(opts),
    }?;
    if out.summary.is_empty() {
        out.summary = "ok; ".into();
    }
    Ok(out)
}

pub fn run_all(opts: &VerifyOptions) -> Result<Vec<CriterionOutcome>> {
    Criterion::ALL.iter().map(|c| run_criterion(*c, opts)).collect()
}

fn fixture_rng(opts: &VerifyOptions, c: Criterion, index: u64) -> rand_chacha::ChaCha8Rng {
    stream_rng(opts.seed, Purpose::Fixture, ((c.id() as u64) << 32) | index)
}

fn cx(re: f64) -> Complex<f64> {
    Complex::new(re, 0.0)
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    crate::sim::normal::<f64, _>(rng)
}

/// Random real `n x n` matrix with operator norm `bound * u`, `u ~ U(0, 1]`;
/// every fifth draw is scaled to norm exactly `bound`.
pub fn random_contraction<R: Rng>(n: usize, bound: f64, rng: &mut R) -> Mat<f64> {
    let m = Mat::from_fn(n, n, |_, _| normal(rng));
    let norm = m.op_norm();
    let target = if rng.gen_bool(0.2) { bound } else { bound * (1.0 - rng.gen::<f64>()) };
    m.scale(target / norm.max(1e-300))
}

fn rotation2(theta: f64) -> Mat<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) | (1, 1) => c,
        (0, 1) => -s,
        _ => s,
    })
}

/// Random Lévy triple on R^2: optional degenerate Gaussian part, up to four
/// atoms, and (if `density`) a truncated power-law density.
pub fn random_triple<R: Rng>(rng: &mut R, density: bool) -> Result<LevyTriple<f64>> {
    let rank = rng.gen_range(0..=2usize);
    let b = Mat::from_fn(2, rank.max(1), |_, _| if rank == 0 { 0.0 } else { normal(rng) * 0.7 });
    let a = b.matmul(&b.transpose());
    let atoms = (0..rng.gen_range(if rank == 0 && !density { 2 } else { 0 }..=4usize))
        .map(|_| LevyAtom {
            point: vec![normal(rng) * 1.5, normal(rng) * 1.5],
            mass: 0.1 + 2.0 * rng.gen::<f64>(),
        })
        .collect();
    let dens = density.then(|| {
        let alpha = 0.3 + 1.4 * rng.gen::<f64>();
        let mut d = LevyDensity::new(
            DensityProfile::PowerLaw {
                scale: 0.05 + 0.5 * rng.gen::<f64>(),
                exponent: 2.0 + alpha,
            },
            1e-3,
            3.0,
        );
        d.angular_nodes = 24;
        d.quadrature_nodes = 12;
        d
    });
    let drift = vec![normal(rng), normal(rng)];
    LevyTriple::new(drift, a, LevyMeasureRn::new(2, atoms, dens)?)
}

/// Random transform pair with `‖A‖ ∨ ‖ψ‖ <= 1`; time dependence when
/// `time_dependent`.
pub fn random_multiplier_spec<R: Rng>(rng: &mut R, triple: &LevyTriple<f64>, time_dependent: bool) -> MultiplierSpec<f64> {
    let a = random_contraction(2, 1.0, rng).to_complex();
    let atoms = triple.nu().atoms().len();
    let psi = JumpPsi::Table {
        atom_values: (0..atoms).map(|_| cx(rng.gen_range(-1.0..=1.0))).collect(),
        density: DensityPsi::HalfSpace {
            axis: rng.gen_range(0..2),
            positive: cx(rng.gen_range(-1.0..=1.0)),
            negative: cx(rng.gen_range(-1.0..=1.0)),
        },
    };
    if !time_dependent {
        return MultiplierSpec::constant(a, psi, 1.0, 1.0);
    }
    let w1 = rng.gen_range(0.1..5.0);
    let w2 = rng.gen_range(0.1..5.0);
    MultiplierSpec {
        a: MatrixProfile::Scaled {
            profile: ScalarProfile::Trigonometric(vec![(cx(1.0), w1)]),
            matrix: a,
        },
        psi,
        psi_time: Some(ScalarProfile::Trigonometric(vec![(cx(0.5), w2), (cx(0.5), -w2)])),
        bound_a: 1.0,
        bound_psi: 1.0,
    }
}

fn multiplier_bound(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let c = Criterion::MultiplierBound;
    let n = opts.frequency_grid as i64;
    let freqs: Vec<[f64; 2]> = (-n / 2..n / 2)
        .flat_map(|a| (-n / 2..n / 2).map(move |b| [a as f64 * 0.25, b as f64 * 0.25]))
        .filter(|x| x[0] != 0.0 || x[1] != 0.0)
        .collect();
    let results: Vec<(f64, usize)> = (0..opts.multiplier_specs as u64)
        .into_par_iter()
        .map(|i| -> Result<(f64, usize)> {
            let mut rng = fixture_rng(opts, c, i);
            let triple = random_triple(&mut rng, i % 50 == 7)?;
            let spec = random_multiplier_spec(&mut rng, &triple, i % 2 == 1);
            spec.verify_bounds(triple.nu())?;
            let a_const = match &spec.a {
                MatrixProfile::Constant(m) => Some(m.clone()),
                _ => None,
            };
            let mut sup = 0f64;
            let mut skipped = 0;
            for xi in &freqs {
                match multiplier_time_dependent(&spec, &triple, xi) {
                    Ok(m) => sup = sup.max(m.norm()),
                    Err(Error::NonIntegrableProfile { .. }) => skipped += 1,
                    Err(e) => return Err(e),
                }
                if let Some(am) = &a_const {
                    match multiplier_autonomous(am, &spec.psi, triple.diffusion(), triple.nu(), xi) {
                        Ok(m) => sup = sup.max(m.norm()),
                        Err(Error::ZeroSymbolFrequency) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
            Ok((sup, skipped))
        })
        .collect::<Result<_>>()?;
    let mut out = CriterionOutcome::new(c);
    let sup = results.iter().fold(0f64, |m, r| m.max(r.0));
    out.metric("specs", results.len() as f64);
    out.metric("frequencies", freqs.len() as f64);
    out.metric("zero_symbol_skips", results.iter().map(|r| r.1).sum::<usize>() as f64);
    out.require_le("max_abs_m", sup, 1.0 + 1e-9);
    Ok(out)
}

fn riesz_oracle(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let c = Criterion::RieszOracle;
    let mut out = CriterionOutcome::new(c);
    let mut worst = 0f64;
    for i in 0..20 {
        let mut rng = fixture_rng(opts, c, i);
        let cm = Mat::from_fn(2, 2, |_, _| normal(&mut rng)).to_complex();
        let coeffs = if i % 2 == 0 {
            PeterWeylCoeffs::random_real(GroupKind::T2, 5, &mut rng)
        } else {
            PeterWeylCoeffs::random(GroupKind::T2, 5, &mut rng)
        };
        let table = symbol_table(&coeffs, |pi: &Irrep<f64>| riesz2_symbol_group(&cm, pi), ZeroMode::Zero)?;
        let via_coeffs = torus_coeffs_to_grid(&apply_symbol_coeffs(&table, &coeffs)?, 16)?;
        let via_grid = apply_symbol_grid(
            |xi: &[f64]| riesz2_symbol_rn(&cm, xi),
            &torus_coeffs_to_grid(&coeffs, 16)?,
            ZeroMode::Zero,
        )?;
        let scale = via_grid.values().iter().fold(0f64, |m, z| m.max(z.norm()));
        let diff = via_coeffs
            .values()
            .iter()
            .zip(via_grid.values())
            .fold(0f64, |m, (a, b)| m.max((a - b).norm()));
        worst = worst.max(diff / scale.max(1e-300));
    }
    out.require_le("max_rel_error", worst, 1e-10);
    let diff_c = Mat::diag(&[cx(1.0), cx(-1.0)]);
    let mut lattice_err = 0f64;
    for k1 in -8i64..8 {
        for k2 in -8i64..8 {
            if k1 == 0 && k2 == 0 {
                continue;
            }
            let exact = ((k1 * k1 - k2 * k2) as f64) / ((k1 * k1 + k2 * k2) as f64);
            let rn = riesz2_symbol_rn(&diff_c, &[k1 as f64, k2 as f64])?;
            let grp = riesz2_symbol_group(&diff_c, &Irrep::new(IrrepLabel::T2(k1, k2)))?[(0, 0)];
            lattice_err = lattice_err.max((rn - exact).norm()).max((grp - exact).norm());
        }
    }
    out.require_le("difference_symbol_error", lattice_err, 1e-12);
    Ok(out)
}

fn norm_non_exceedance(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let c = Criterion::NormNonExceedance;
    let ps = [1.5, 2.0, 3.0, 4.0];
    let dims = [32usize, 32];
    let period = [1.0, 1.0];
    let cfg = |p: f64, seed: u64| NormSearch {
        n: 32,
        axes: 2,
        band: 8,
        p,
        trials: 3,
        power_steps: 8,
        seed,
    };
    // (excess over p*-1, excess over the p = 2 lattice bound)
    let general: Vec<(f64, f64)> = (0..opts.norm_specs as u64)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let mut rng = fixture_rng(opts, c, i);
            let triple = random_triple(&mut rng, false)?;
            let spec = random_multiplier_spec(&mut rng, &triple, i % 4 == 3);
            let m = |xi: &[f64]| match multiplier_time_dependent(&spec, &triple, xi) {
                Err(Error::NonIntegrableProfile { .. }) => Ok(cx(0.0)),
                r => r,
            };
            let sup = lattice_sup(&m, &dims, &period, ZeroMode::Zero)?;
            let mut excess = f64::NEG_INFINITY;
            let mut excess2 = f64::NEG_INFINITY;
            for (j, &p) in ps.iter().enumerate() {
                let r = norm_lower_bound_search(m, ZeroMode::Zero, &cfg(p, opts.seed ^ (i << 3 | j as u64)))?;
                excess = excess.max(r.best_ratio - burkholder_constant(p)?);
                if p == 2.0 {
                    excess2 = r.best_ratio - sup;
                }
            }
            Ok((excess, excess2))
        })
        .collect::<Result<_>>()?;
    let nonsym_specs = (opts.norm_specs / 4).max(1) as u64;
    let nonsym: Vec<f64> = (0..nonsym_specs)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut rng = fixture_rng(opts, c, 1_000_000 + i);
            let triple = random_triple(&mut rng, false)?;
            let b = rng.gen_range(-2.0..1.5);
            let big_b = rng.gen_range(b + 0.1..2.0);
            let q = rotation2(rng.gen_range(0.0..std::f64::consts::PI));
            let lam = Mat::diag(&[rng.gen_range(b..=big_b), rng.gen_range(b..=big_b)]);
            let a = q.matmul(&lam).matmul(&q.transpose()).to_complex();
            let psi = JumpPsi::zero();
            let m = |xi: &[f64]| match multiplier_autonomous(&a, &psi, triple.diffusion(), triple.nu(), xi) {
                Err(Error::ZeroSymbolFrequency) => Ok(cx(0.0)),
                r => r,
            };
            let mut excess = f64::NEG_INFINITY;
            for (j, &p) in ps.iter().enumerate() {
                let r = norm_lower_bound_search(m, ZeroMode::Zero, &cfg(p, opts.seed ^ (i << 3 | j as u64) ^ 0x5a5a))?;
                excess = excess.max(r.best_ratio - cpbb_bounds(p, b, big_b)?.upper);
            }
            Ok(excess)
        })
        .collect::<Result<_>>()?;
    let mut out = CriterionOutcome::new(c);
    out.metric("specs", general.len() as f64);
    out.require_le("max_ratio_minus_burkholder", general.iter().fold(f64::NEG_INFINITY, |m, r| m.max(r.0)), 3e-2);
    out.require_le("max_p2_ratio_minus_lattice_sup", general.iter().fold(f64::NEG_INFINITY, |m, r| m.max(r.1)), 1e-9);
    out.metric("nonsymmetric_specs", nonsym.len() as f64);
    out.require_le("max_ratio_minus_cpbb_upper", nonsym.iter().fold(f64::NEG_INFINITY, |m, r| m.max(*r)), 0.0);
    Ok(out)
}

fn plancherel(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let c = Criterion::Plancherel;
    let mut out = CriterionOutcome::new(c);
    for (g, band) in [(GroupKind::T1, 16), (GroupKind::T2, 6), (GroupKind::Su2, 8)] {
        let worst = (0..opts.plancherel_pairs as u64)
            .into_par_iter()
            .map(|i| -> Result<f64> {
                let mut rng = fixture_rng(opts, c, i + 1000 * g.algebra_dim() as u64);
                let b1 = rng.gen_range(0..=band);
                let b2 = rng.gen_range(0..=band);
                let f = PeterWeylCoeffs::<f64>::random(g, b1, &mut rng);
                let h = PeterWeylCoeffs::random(g, b2, &mut rng);
                let r = plancherel_residual(&f, &h)?;
                Ok(r / (f.l2_norm_sq() * h.l2_norm_sq()).sqrt())
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0f64, f64::max);
        out.require_le(&format!("{g}.relative_residual"), worst, 1e-6);
    }
    Ok(out)
}

fn casimir() -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(Criterion::Casimir);
    for (g, cutoff) in [(GroupKind::T1, 16), (GroupKind::T2, 16), (GroupKind::Su2, 8)] {
        let mut worst = 0f64;
        let irreps = dual_enumerate::<f64>(g, cutoff);
        for pi in &irreps {
            casimir_eigenvalue(pi)?;
            let r = &pi.casimir_sum() + &Mat::scalar(pi.dim, cx(pi.casimir));
            worst = worst.max(r.op_norm());
        }
        out.metric(format!("{g}.irreps"), irreps.len() as f64);
        out.require_le(&format!("{g}.scalarity_residual"), worst, 1e-10);
    }
    let fundamental = Irrep::<f64>::new(IrrepLabel::Su2 { twice_spin: 1 });
    out.require_le("su2.fundamental_casimir_error", (casimir_eigenvalue(&fundamental)? - 0.75).abs(), 1e-14);
    Ok(out)
}

fn imaginary_power() -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(Criterion::ImaginaryPower);
    let mut worst = 0f64;
    for gamma in [0.5, 1.0] {
        // profile with parameter -γ integrates to κ^{-iγ}
        let profile = ScalarProfile::ImaginaryPower { gamma: -gamma };
        for k in [1i64, 2, 3] {
            let pi = Irrep::<f64>::new(IrrepLabel::T1(k));
            let kappa = pi.casimir;
            let m = laplace_type_symbol(&profile, &pi)?[(0, 0)];
            let exact = Complex::new(0.0, -gamma * kappa.ln()).exp();
            worst = worst.max((m - exact).norm());
        }
    }
    out.require_le("max_symbol_error", worst, 1e-6);
    let mut prefactor = 0f64;
    for gamma in [0.5, 1.0] {
        for p in [1.5, 2.0, 3.0, 4.0] {
            let via_gamma = burkholder_constant(p)? / gamma_one_minus_i(gamma).norm();
            let x = std::f64::consts::PI * gamma;
            let closed = burkholder_constant(p)? * (x.sinh() / x).sqrt();
            prefactor = prefactor.max((via_gamma - closed).abs() / closed);
            let sup = ScalarProfile::ImaginaryPower { gamma }.sup_norm().unwrap_or(f64::NAN);
            prefactor = prefactor.max((sup - (x.sinh() / x).sqrt()).abs());
        }
    }
    out.require_le("prefactor_error", prefactor, 1e-10);
    Ok(out)
}

fn octahedral_measure(theta: f64, mass: f64) -> Result<GroupLevyMeasure<f64>> {
    let mut atoms = Vec::new();
    for axis in 0..3 {
        for sign in [1.0, -1.0] {
            let mut v = [0.0; 3];
            v[axis] = sign * theta;
            atoms.push((GroupElement::exp(GroupKind::Su2, &v), mass));
        }
    }
    GroupLevyMeasure::new(GroupKind::Su2, atoms)
}

fn random_group_measure<R: Rng>(g: GroupKind, rng: &mut R) -> Result<GroupLevyMeasure<f64>> {
    let count = rng.gen_range(1..=3);
    let atoms = (0..count)
        .map(|_| {
            let v: Vec<f64> = (0..g.algebra_dim()).map(|_| rng.gen_range(0.2..2.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
            (GroupElement::exp(g, &v), rng.gen_range(0.2..1.5))
        })
        .collect();
    GroupLevyMeasure::new(g, atoms)
}

fn differential_subordination(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let c = Criterion::DifferentialSubordination;
    let specs = 20usize;
    let per_spec = opts.paths.div_ceil(specs);
    let groups = [GroupKind::T1, GroupKind::T2, GroupKind::Su2];
    let mut worst = f64::NEG_INFINITY;
    let mut worst_nonsym = f64::NEG_INFINITY;
    let mut transcripts = 0usize;
    for i in 0..specs as u64 {
        let mut rng = fixture_rng(opts, c, i);
        let g = groups[i as usize % 3];
        let n = g.algebra_dim();
        let nu = random_group_measure(g, &mut rng)?;
        let cgauss = rng.gen_range(0.0..1.0);
        let drift = if g.is_abelian() { (0..n).map(|_| normal(&mut rng) * 0.3).collect() } else { vec![0.0; n] };
        let spec = GroupProcessSpec::new(g, cgauss, drift, nu, 1.0, 0.02, opts.seed.wrapping_add(i))?;
        let band = if g == GroupKind::Su2 { 2 } else { 2 };
        let f = PeterWeylCoeffs::random_real(g, band, &mut rng);
        let base = random_contraction(n, 1.0, &mut rng);
        let psi: Vec<f64> = spec.nu.atoms.iter().map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let w = rng.gen_range(0.5..4.0);
        let psi_c = psi.clone();
        // state- and time-dependent: ‖A‖ <= ‖base‖ |cos| <= 1, |ψ| <= 1
        let transform = Transform::new(
            move |r: f64, x: &GroupElement<f64>| {
                let phase = match x {
                    GroupElement::T1(a) => *a,
                    GroupElement::T2(a, b) => *a - *b,
                    GroupElement::Su2(q) => q.w,
                };
                base.scale((w * r + phase).cos())
            },
            move |r: f64, _x: &GroupElement<f64>, k: usize| psi_c[k] * (w * r).sin(),
        );
        let v = transcript_ensemble(&spec, &f, &transform, per_spec, |_, tr| Ok(check_differential_subordination(tr)))?;
        transcripts += v.len();
        worst = v.into_iter().fold(worst, f64::max);

        // non-symmetric form: symmetric A with spectrum in [b, B], ψ at the midpoint
        let b = rng.gen_range(-1.5..1.0);
        let big_b = rng.gen_range(b + 0.1..1.8);
        let lam: Vec<f64> = (0..n).map(|_| rng.gen_range(b..=big_b)).collect();
        let q = random_orthogonal(n, &mut rng);
        let a = q.matmul(&Mat::diag(&lam)).matmul(&q.transpose());
        let t2 = Transform::constant(a, 0.5 * (b + big_b));
        let v = transcript_ensemble(&spec, &f, &t2, per_spec / 4, |_, tr| check_nonsymmetric_subordination(tr, b, big_b))?;
        worst_nonsym = v.into_iter().fold(worst_nonsym, f64::max);
    }
    let mut out = CriterionOutcome::new(c);
    out.metric("transcripts", transcripts as f64);
    out.require_le("max_increment_violation", worst, 1e-12);
    out.require_le("max_nonsymmetric_violation", worst_nonsym, 1e-12);
    Ok(out)
}

fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> Mat<f64> {
    let m = Mat::from_fn(n, n, |_, _| normal(rng));
    let s = m.transpose().matmul(&m);
    let (_, vecs) = s.symmetric_eigen();
    vecs
}

fn burkholder_fixture(opts: &VerifyOptions, horizon: f64, dt: f64) -> Result<(GroupProcessSpec<f64>, PeterWeylCoeffs<f64>)> {
    let mut rng = fixture_rng(opts, Criterion::Burkholder, 0);
    let nu = GroupLevyMeasure::new(
        GroupKind::T2,
        vec![(GroupElement::T2(1.3, 0.4), 0.8), (GroupElement::T2(-0.5, 2.2), 0.6)],
    )?;
    let spec = GroupProcessSpec::new(GroupKind::T2, 0.5, vec![0.0, 0.0], nu, horizon, dt, opts.seed)?;
    Ok((spec, PeterWeylCoeffs::random_real(GroupKind::T2, 2, &mut rng)))
}

fn burkholder(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(Criterion::Burkholder);
    let transform = Transform::per_atom(rotation2(1.1), vec![-1.0, 0.6]);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_p2 = f64::NEG_INFINITY;
    for horizon in [0.5, 1.0, 2.0] {
        let (spec, f) = burkholder_fixture(opts, horizon, 0.01)?;
        let pairs = transcript_ensemble(&spec, &f, &transform, opts.paths, |_, tr| {
            Ok((tr.terminal_transform(), tr.terminal_m()))
        })?;
        let (y, x): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        for p in [1.5, 2.0, 3.0] {
            let est = empirical_burkholder(&y, &x, p)?;
            let bound = burkholder_constant(p)? * (1.0 + 3.0 * est.stderr / est.ratio);
            out.metric(format!("ratio[T={horizon},p={p}]"), est.ratio);
            worst_excess = worst_excess.max(est.ratio - bound);
            if p == 2.0 {
                worst_p2 = worst_p2.max(est.ratio - (1.0 + 3.0 * est.stderr));
            }
        }
    }
    out.require_le("max_excess_over_bound", worst_excess, 0.0);
    out.require_le("max_p2_excess", worst_p2, 0.0);
    Ok(out)
}

fn projection(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let c = Criterion::Projection;
    let mut out = CriterionOutcome::new(c);
    let nu = GroupLevyMeasure::new(
        GroupKind::T2,
        vec![
            (GroupElement::T2(0.9, 0.0), 0.7),
            (GroupElement::T2(0.0, -1.6), 0.5),
            (GroupElement::T2(2.1, 1.2), 0.4),
        ],
    )?;
    let spec = GroupProcessSpec::new(GroupKind::T2, 0.4, vec![0.0, 0.0], nu, 1.0, 0.005, opts.seed)?;
    let mut rng = fixture_rng(opts, c, 0);
    let f = PeterWeylCoeffs::random_real(GroupKind::T2, 2, &mut rng);
    let g = PeterWeylCoeffs::random_real(GroupKind::T2, 2, &mut rng);
    // f and g supported on disjoint irreps
    let split = |keep: &dyn Fn(&IrrepLabel) -> bool| {
        let mut h = PeterWeylCoeffs::random_real(GroupKind::T2, 2, &mut fixture_rng(opts, c, 1));
        for (l, b) in h.blocks.iter_mut() {
            if !keep(l) {
                *b = Mat::zeros(1, 1);
            }
        }
        h
    };
    let f_low = split(&|l| matches!(l, IrrepLabel::T2(a, b) if a.abs() + b.abs() <= 1));
    let g_high = split(&|l| matches!(l, IrrepLabel::T2(a, b) if a.abs() + b.abs() > 1));
    let fixtures: Vec<(&str, &PeterWeylCoeffs<f64>, &PeterWeylCoeffs<f64>, Mat<f64>, Vec<f64>)> = vec![
        ("identity", &f, &g, Mat::identity(2), vec![1.0; 3]),
        ("zero", &f, &g, Mat::zeros(2, 2), vec![0.0; 3]),
        ("rotation", &f, &g, rotation2(0.8), vec![-1.0, 0.5, 1.0]),
        ("diagonal", &f, &f, Mat::diag(&[0.5, -0.3]), vec![0.7, -0.2, 0.0]),
        ("disjoint", &f_low, &g_high, random_contraction(2, 1.0, &mut rng), vec![0.3, -0.9, 0.6]),
    ];
    let mut worst = 0f64;
    for (name, fa, gb, a, psi) in fixtures {
        let est = projection_mc_estimate(&spec, fa, gb, &a, &psi, opts.paths)?;
        out.metric(format!("{name}.mc"), est.mc.re);
        out.metric(format!("{name}.deterministic"), est.deterministic.re);
        out.metric(format!("{name}.z"), est.z_score());
        worst = worst.max(est.z_score());
    }
    out.require_le("max_z", worst, 3.0);
    Ok(out)
}

fn levy_khintchine(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(Criterion::LevyKhintchine);
    let nu = octahedral_measure(0.8, 0.5)?;
    let cgauss = 0.5;
    let t = 0.5;
    let spec = GroupProcessSpec::new(GroupKind::Su2, cgauss, vec![0.0; 3], nu.clone(), t, 0.005, opts.seed)?;
    let paths = simulate_ensemble(&spec, opts.paths)?;
    let k = paths[0].grid_points.len() - 1;
    let mut worst_oracle = 0f64;
    let mut worst_z = 0f64;
    let mut worst_defect = 0f64;
    for twice_spin in 1..=3 {
        let pi = Irrep::<f64>::new(IrrepLabel::Su2 { twice_spin });
        let alpha = central_alpha(cgauss, &nu, &pi)?;
        let scalar: CMat<f64> = Mat::scalar(pi.dim, (alpha * t).exp());
        let expm = semigroup_block(&[0.0; 3], cgauss, &nu, &pi, t)?;
        worst_oracle = worst_oracle.max((&scalar - &expm).max_abs());
        worst_defect = worst_defect.max(centrality_defect(&nu, &pi)?);
        let est = empirical_char(&paths, &pi, k)?;
        let z = est.z_score(&scalar).max(est.z_score(&expm));
        out.metric(format!("{}.z", pi.label), z);
        worst_z = worst_z.max(z);
    }
    out.metric("centrality_defect", worst_defect);
    out.require_le("oracle_disagreement", worst_oracle, 1e-8);
    out.require_le("max_z", worst_z, 3.0);
    Ok(out)
}

/// One-sided stable-1/2 Bernstein function `h(u) = √u` on a truncated shell.
pub fn stable_half_bernstein() -> Result<BernsteinSpec<f64>> {
    let scale = 0.5 / std::f64::consts::PI.sqrt();
    BernsteinSpec::new(
        0.0,
        Vec::new(),
        Some(LevyDensity::new(DensityProfile::PowerLaw { scale, exponent: 1.5 }, 1e-12, 1e12)),
    )
}

fn subordination(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let c = Criterion::Subordination;
    let mut out = CriterionOutcome::new(c);
    let h = stable_half_bernstein()?;
    let disc = discretize(&h, 1e-3, 24)?;
    let ens = simulate_subordinator(&disc, 1.0, 0.25, opts.seed, opts.paths)?;
    let mut worst_z = 0f64;
    let us = [1.0, 2.0, 4.0, 0.75, 3.75];
    for k in [2usize, 4] {
        let t = ens.times[k];
        for u in us {
            let (mean, se) = ens.laplace(k, u);
            let exact = (-t * bernstein_eval(&disc, u)?).exp();
            let z = (mean - exact).abs() / se.max(1e-300);
            worst_z = worst_z.max(z);
        }
    }
    out.metric("intensity", disc.total_intensity());
    out.metric("discretization_gap_at_u4", (bernstein_eval(&disc, 4.0)? - 2.0).abs());
    out.require_le("max_z", worst_z, 3.0);

    let nu = octahedral_measure(0.6, 0.7)?;
    let mut rng = fixture_rng(opts, c, 0);
    let psi: Vec<Complex<f64>> = nu.atoms.iter().map(|_| cx(rng.gen_range(-1.0..=1.0))).collect();
    let mut worst = 0f64;
    for twice_spin in 1..=4 {
        let pi = Irrep::<f64>::new(IrrepLabel::Su2 { twice_spin });
        let s = subordination_symbol(&psi, &nu, &disc, &pi)?;
        let hk = bernstein_eval(&disc, pi.casimir)?;
        let m = central_multiplier_with_alpha(&Mat::zeros(3, 3), &psi, &nu, &pi, -hk)?;
        worst = worst.max((&s - &m).max_abs());
    }
    out.require_le("symbol_cross_check", worst, 1e-10);
    Ok(out)
}

fn constants(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let c = Criterion::Constants;
    let mut out = CriterionOutcome::new(c);
    let mut err = 0f64;
    for (p, v) in [(1.5f64, 2.0f64), (2.0, 1.0), (3.0, 2.0), (4.0, 3.0)] {
        err = err.max((burkholder_constant(p)? - v).abs());
    }
    out.require_le("burkholder_value_error", err, 0.0);
    let mut collapse = 0f64;
    for p in [1.5f64, 2.0, 3.0, 4.0, 7.5] {
        let r = cpbb_bounds(p, -1.0, 1.0)?;
        let k = burkholder_constant(p)?;
        collapse = collapse.max((r.lower - k).abs()).max((r.upper - k).abs());
    }
    out.require_le("symmetric_collapse_error", collapse, 0.0);
    let mut rng = fixture_rng(opts, c, 0);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let p = 1.0 + 10f64.powf(rng.gen_range(-2.0..1.5));
        let b = rng.gen_range(-5.0..5.0);
        let big_b = b + 10f64.powf(rng.gen_range(-3.0..1.0));
        let r = cpbb_bounds(p, b, big_b)?;
        worst = worst.max(r.lower - r.upper);
    }
    out.require_le("max_lower_minus_upper", worst, 0.0);
    Ok(out)
}
