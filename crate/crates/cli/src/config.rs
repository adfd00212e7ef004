//! JSON configuration schemas and their conversion into core types.

use std::path::Path;

use levy_mart::euclid::{DensityPsi, JumpPsi, MatrixProfile, MultiplierSpec, ScalarProfile};
use levy_mart::group::{GroupElement, GroupLevyMeasure};
use levy_mart::levy::{BernsteinSpec, DensityProfile, LevyAtom, LevyDensity, LevyMeasureRn, LevyTriple};
use levy_mart::linalg::{CMat, Mat};
use levy_mart::GroupKind;
use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Reads and parses `path`, reporting the offending key on failure.
pub fn load<C: DeserializeOwned>(path: &Path) -> Result<C, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse<C: DeserializeOwned>(text: &str) -> Result<C, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let key = e.path().to_string();
        CliError::Config(format!("at `{key}`: {}", e.into_inner()))
    })
}

/// A complex number: a plain number or `[re, im]`.
#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Cx {
    Real(f64),
    Pair([f64; 2]),
}

impl Cx {
    pub fn get(self) -> Complex<f64> {
        match self {
            Cx::Real(x) => Complex::new(x, 0.0),
            Cx::Pair([re, im]) => Complex::new(re, im),
        }
    }
}

pub fn real_matrix(rows: &[Vec<f64>], what: &str) -> Result<Mat<f64>, CliError> {
    Mat::from_rows(rows).map_err(|e| CliError::Config(format!("{what}: {e}")))
}

pub fn complex_matrix(rows: &[Vec<Cx>], what: &str) -> Result<CMat<f64>, CliError> {
    let rows: Vec<Vec<Complex<f64>>> = rows.iter().map(|r| r.iter().map(|c| c.get()).collect()).collect();
    Mat::from_rows(&rows).map_err(|e| CliError::Config(format!("{what}: {e}")))
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AtomCfg {
    pub point: Vec<f64>,
    pub mass: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum ProfileCfg {
    PowerLaw { scale: f64, exponent: f64 },
    Tempered { scale: f64, exponent: f64, decay: f64 },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DensityCfg {
    pub profile: ProfileCfg,
    pub inner_cutoff: f64,
    pub outer_cutoff: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular_nodes: Option<usize>,
}

impl DensityCfg {
    pub fn build(&self) -> LevyDensity<f64> {
        let profile = match self.profile {
            ProfileCfg::PowerLaw { scale, exponent } => DensityProfile::PowerLaw { scale, exponent },
            ProfileCfg::Tempered { scale, exponent, decay } => DensityProfile::Tempered { scale, exponent, decay },
        };
        let mut d = LevyDensity::new(profile, self.inner_cutoff, self.outer_cutoff);
        if let Some(n) = self.quadrature_nodes {
            d.quadrature_nodes = n;
        }
        if let Some(n) = self.angular_nodes {
            d.angular_nodes = n;
        }
        d
    }
}

/// Lévy triple on R^n.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TripleCfg {
    pub drift: Vec<f64>,
    pub diffusion: Vec<Vec<f64>>,
    #[serde(default)]
    pub atoms: Vec<AtomCfg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityCfg>,
}

impl TripleCfg {
    pub fn build(&self) -> Result<LevyTriple<f64>, CliError> {
        let n = self.drift.len();
        let atoms = self
            .atoms
            .iter()
            .map(|a| LevyAtom { point: a.point.clone(), mass: a.mass })
            .collect();
        let nu = LevyMeasureRn::new(n, atoms, self.density.as_ref().map(DensityCfg::build))?;
        let a = real_matrix(&self.diffusion, "diffusion")?;
        Ok(LevyTriple::new(self.drift.clone(), a, nu)?)
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BernsteinAtomCfg {
    pub point: f64,
    pub mass: f64,
}

/// Bernstein function `h(u) = c u + ∫ (1 - e^{-uy}) λ(dy)`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BernsteinCfg {
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub atoms: Vec<BernsteinAtomCfg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityCfg>,
}

impl BernsteinCfg {
    pub fn build(&self) -> Result<BernsteinSpec<f64>, CliError> {
        Ok(BernsteinSpec::new(
            self.c,
            self.atoms.iter().map(|a| (a.point, a.mass)).collect(),
            self.density.as_ref().map(DensityCfg::build),
        )?)
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TermCfg {
    pub coeff: Cx,
    pub omega: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum ScalarProfileCfg {
    Constant { value: Cx },
    ImaginaryPower { gamma: f64 },
    Trigonometric { terms: Vec<TermCfg> },
}

impl ScalarProfileCfg {
    pub fn build(&self) -> ScalarProfile<f64> {
        match self {
            Self::Constant { value } => ScalarProfile::Constant(value.get()),
            Self::ImaginaryPower { gamma } => ScalarProfile::ImaginaryPower { gamma: *gamma },
            Self::Trigonometric { terms } => {
                ScalarProfile::Trigonometric(terms.iter().map(|t| (t.coeff.get(), t.omega)).collect())
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum DensityPsiCfg {
    Constant { value: Cx },
    HalfSpace { axis: usize, positive: Cx, negative: Cx },
}

impl DensityPsiCfg {
    fn build(&self) -> DensityPsi<f64> {
        match self {
            Self::Constant { value } => DensityPsi::Constant(value.get()),
            Self::HalfSpace { axis, positive, negative } => DensityPsi::HalfSpace {
                axis: *axis,
                positive: positive.get(),
                negative: negative.get(),
            },
        }
    }
}

/// `ψ` on R^n: one value everywhere, or per-atom values plus a density rule.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum PsiCfg {
    Constant { value: Cx },
    Table { atoms: Vec<Cx>, density: DensityPsiCfg },
}

impl PsiCfg {
    fn build(&self) -> JumpPsi<f64> {
        match self {
            Self::Constant { value } => JumpPsi::Constant(value.get()),
            Self::Table { atoms, density } => JumpPsi::Table {
                atom_values: atoms.iter().map(|c| c.get()).collect(),
                density: density.build(),
            },
        }
    }
}

/// `A(s) = profile(s) * matrix`, constant when `profile` is absent.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixProfileCfg {
    pub matrix: Vec<Vec<Cx>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ScalarProfileCfg>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplierCfg {
    pub triple: TripleCfg,
    pub a: MatrixProfileCfg,
    pub psi: PsiCfg,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_time: Option<ScalarProfileCfg>,
    #[serde(default = "one")]
    pub bound_a: f64,
    #[serde(default = "one")]
    pub bound_psi: f64,
}

fn one() -> f64 {
    1.0
}

impl MultiplierCfg {
    /// Builds and checks the declared bounds against the measured ones.
    pub fn build(&self) -> Result<(LevyTriple<f64>, MultiplierSpec<f64>), CliError> {
        let triple = self.triple.build()?;
        let matrix = complex_matrix(&self.a.matrix, "a.matrix")?;
        let a = match &self.a.profile {
            None => MatrixProfile::Constant(matrix),
            Some(p) => MatrixProfile::Scaled { profile: p.build(), matrix },
        };
        let spec = MultiplierSpec {
            a,
            psi: self.psi.build(),
            psi_time: self.psi_time.as_ref().map(ScalarProfileCfg::build),
            bound_a: self.bound_a,
            bound_psi: self.bound_psi,
        };
        spec.verify_bounds(triple.nu())?;
        Ok((triple, spec))
    }
}

/// Explicit frequencies, or the square grid `spacing * k`, `k ∈ [-n/2, n/2)^d`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FrequenciesCfg {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridCfg>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridCfg {
    pub n: usize,
    pub spacing: f64,
}

impl FrequenciesCfg {
    pub fn list(&self, dim: usize) -> Result<Vec<Vec<f64>>, CliError> {
        let pts = match (&self.points, &self.grid) {
            (Some(p), None) => p.clone(),
            (None, Some(g)) => {
                if g.n == 0 || dim == 0 {
                    return Err(CliError::Config("at `frequencies.grid.n`: must be positive".into()));
                }
                let half = (g.n / 2) as i64;
                let total = g.n.pow(dim as u32);
                (0..total)
                    .map(|mut flat| {
                        let mut xi = vec![0.0; dim];
                        for x in xi.iter_mut().rev() {
                            *x = ((flat % g.n) as i64 - half) as f64 * g.spacing;
                            flat /= g.n;
                        }
                        xi
                    })
                    .collect()
            }
            _ => {
                return Err(CliError::Config(
                    "at `frequencies`: give exactly one of `points` and `grid`".into(),
                ))
            }
        };
        if let Some(bad) = pts.iter().position(|p| p.len() != dim) {
            return Err(CliError::Config(format!("at `frequencies.points[{bad}]`: expected {dim} coordinates")));
        }
        Ok(pts)
    }
}

/// Group atom `exp(Σ v_i X_i)` with its mass.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupAtomCfg {
    pub algebra: Vec<f64>,
    pub mass: f64,
}

pub fn group_measure(group: GroupKind, atoms: &[GroupAtomCfg]) -> Result<GroupLevyMeasure<f64>, CliError> {
    let n = group.algebra_dim();
    if let Some(k) = atoms.iter().position(|a| a.algebra.len() != n) {
        return Err(CliError::Config(format!("at `atoms[{k}].algebra`: {group} needs {n} coordinates")));
    }
    Ok(GroupLevyMeasure::new(
        group,
        atoms.iter().map(|a| (GroupElement::exp(group, &a.algebra), a.mass)).collect(),
    )?)
}

pub fn parse_group(s: &str) -> Result<GroupKind, CliError> {
    s.parse().map_err(|_| CliError::Config(format!("unknown group `{s}` (expected t1, t2 or su2)")))
}
