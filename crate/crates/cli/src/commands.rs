//! One function per subcommand: parse the config, run, build a [`Report`].

use std::io::Write;
use std::path::Path;

use flate2::write::GzEncoder;
use flate2::Compression;
use levy_mart::apply::{
    apply_symbol_grid, lp_norm, lattice_sup, norm_lower_bound_search, torus_coeffs_to_grid, GridFunction,
    NormSearch,
};
use levy_mart::constants::{burkholder_constant, constant_report, IntervalCase};
use levy_mart::euclid::{multiplier_autonomous, multiplier_time_dependent, riesz2_symbol_rn, MatrixProfile};
use levy_mart::group::{
    central_multiplier, centrality_defect, dual_enumerate, laplace_type_symbol, riesz2_symbol_group, semigroup_block,
    subordination_symbol, Irrep, PeterWeylCoeffs,
};
use levy_mart::levy::eval_symbol;
use levy_mart::linalg::CMat;
use levy_mart::sim::{
    check_differential_subordination, check_nonsymmetric_subordination, empirical_burkholder,
    transcript_ensemble, GroupProcessSpec, Transform,
};
use levy_mart::verify::{run_criterion, Criterion, VerifyOptions};
use levy_mart::{Error, GroupKind, IrrepLabel, ZeroMode};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{
    complex_matrix, group_measure, load, parse_group, real_matrix, BernsteinCfg, Cx, FrequenciesCfg,
    GroupAtomCfg, MultiplierCfg, ScalarProfileCfg, TripleCfg,
};
use crate::output::{cmat, config_hash, cx, Provenance, Report};
use crate::{CliError, Global};

type Outcome = Result<(Report, Provenance<'static>), CliError>;

fn read_config<C: for<'de> Deserialize<'de> + Serialize>(g: &Global, command: &str) -> Result<(C, String), CliError> {
    let path = g
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config(format!("`{command}` needs --config PATH")))?;
    let cfg: C = load(path)?;
    let value = serde_json::to_value(&cfg).expect("configs serialize");
    Ok((cfg, config_hash(command, &value)))
}

fn prov(command: &'static str, config_hash: String, seed: Option<u64>) -> Provenance<'static> {
    Provenance { command, config_hash, seed }
}

fn num(x: f64) -> Value {
    // non-finite values become null in JSON and empty CSV cells
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn xi_columns(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("xi{i}")).collect()
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SymbolConfig {
    triple: TripleCfg,
    frequencies: FrequenciesCfg,
}

pub fn symbol(g: &Global) -> Outcome {
    let (cfg, hash) = read_config::<SymbolConfig>(g, "symbol")?;
    let triple = cfg.triple.build()?;
    let dim = triple.dim();
    let mut rows = Vec::new();
    for xi in cfg.frequencies.list(dim)? {
        let rho = eval_symbol(&triple, &xi)?;
        let mut row: Vec<Value> = xi.iter().map(|x| num(*x)).collect();
        row.extend([num(rho.re), num(rho.im)]);
        rows.push(row);
    }
    let mut cols = xi_columns(dim);
    cols.extend(["re".into(), "im".into()]);
    let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
    Ok((Report::table(&cols, rows), prov("symbol", hash, None)))
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct MultiplierConfig {
    spec: MultiplierCfg,
    frequencies: FrequenciesCfg,
}

pub fn multiplier(g: &Global) -> Outcome {
    let (cfg, hash) = read_config::<MultiplierConfig>(g, "multiplier")?;
    let (triple, spec) = cfg.spec.build()?;
    let dim = triple.dim();
    let two_pi = 2.0 * std::f64::consts::PI;
    let constant = match (&spec.a, &spec.psi_time) {
        (MatrixProfile::Constant(m), None) => Some(m.clone()),
        _ => None,
    };
    let mut rows = Vec::new();
    for xi in cfg.frequencies.list(dim)? {
        // frequencies are symbol variables; the time-dependent form takes
        // grid frequencies xi / 2π
        let m = match &constant {
            Some(am) => multiplier_autonomous(am, &spec.psi, triple.diffusion(), triple.nu(), &xi),
            None => {
                let grid: Vec<f64> = xi.iter().map(|x| x / two_pi).collect();
                multiplier_time_dependent(&spec, &triple, &grid)
            }
        };
        let (re, im) = match m {
            Ok(z) => (num(z.re), num(z.im)),
            Err(Error::ZeroSymbolFrequency | Error::NonIntegrableProfile { .. }) => (Value::Null, Value::Null),
            Err(e) => return Err(e.into()),
        };
        let mut row: Vec<Value> = xi.iter().map(|x| num(*x)).collect();
        row.extend([re, im]);
        rows.push(row);
    }
    let mut cols = xi_columns(dim);
    cols.extend(["re".into(), "im".into()]);
    let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
    Ok((Report::table(&cols, rows), prov("multiplier", hash, None)))
}

pub fn dual(group: &str, cutoff: u32) -> Outcome {
    let kind = parse_group(group)?;
    let hash = config_hash("dual", &json!({ "group": kind.to_string(), "cutoff": cutoff }));
    let rows = dual_enumerate::<f64>(kind, cutoff)
        .iter()
        .map(|pi| vec![json!(pi.label.to_string()), json!(pi.dim), num(pi.casimir)])
        .collect();
    Ok((Report::table(&["label", "dim", "casimir"], rows), prov("dual", hash, None)))
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
enum GroupSymbolCfg {
    Riesz2 { c: Vec<Vec<Cx>> },
    Laplace { profile: ScalarProfileCfg },
    Subordination { bernstein: BernsteinCfg, atoms: Vec<GroupAtomCfg>, psi: Vec<Cx> },
    Central { c: f64, a: Vec<Vec<Cx>>, atoms: Vec<GroupAtomCfg>, psi: Vec<Cx> },
    Semigroup { drift: Vec<f64>, c: f64, atoms: Vec<GroupAtomCfg>, t: f64 },
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SymbolGroupConfig {
    group: String,
    cutoff: u32,
    symbol: GroupSymbolCfg,
}

fn cxs(v: &[Cx]) -> Vec<Complex<f64>> {
    v.iter().map(|c| c.get()).collect()
}

pub fn symbol_group(g: &Global) -> Outcome {
    let (cfg, hash) = read_config::<SymbolGroupConfig>(g, "symbol-group")?;
    let group = parse_group(&cfg.group)?;
    let eval: Box<dyn Fn(&Irrep<f64>) -> levy_mart::Result<CMat<f64>>> = match &cfg.symbol {
        GroupSymbolCfg::Riesz2 { c } => {
            let c = complex_matrix(c, "symbol.c")?;
            Box::new(move |pi| riesz2_symbol_group(&c, pi))
        }
        GroupSymbolCfg::Laplace { profile } => {
            let p = profile.build();
            Box::new(move |pi| laplace_type_symbol(&p, pi))
        }
        GroupSymbolCfg::Subordination { bernstein, atoms, psi } => {
            let h = bernstein.build()?;
            let nu = group_measure(group, atoms)?;
            let psi = cxs(psi);
            Box::new(move |pi| subordination_symbol(&psi, &nu, &h, pi))
        }
        GroupSymbolCfg::Central { c, a, atoms, psi } => {
            let a = complex_matrix(a, "symbol.a")?;
            let nu = group_measure(group, atoms)?;
            let (c, psi) = (*c, cxs(psi));
            Box::new(move |pi| central_multiplier(&a, &psi, c, &nu, pi))
        }
        GroupSymbolCfg::Semigroup { drift, c, atoms, t } => {
            let nu = group_measure(group, atoms)?;
            let (drift, c, t) = (drift.clone(), *c, *t);
            Box::new(move |pi| semigroup_block(&drift, c, &nu, pi, t))
        }
    };
    // central symbols assume a conjugation-invariant measure; report how far
    // the given atoms are from one instead of symmetrizing them
    let central_nu = match &cfg.symbol {
        GroupSymbolCfg::Central { atoms, .. } => Some(group_measure(group, atoms)?),
        _ => None,
    };
    let mut rows = Vec::new();
    let mut blocks = Vec::new();
    for pi in dual_enumerate::<f64>(group, cfg.cutoff) {
        let label = pi.label.to_string();
        let defect = match &central_nu {
            Some(nu) => num(centrality_defect(nu, &pi)?),
            None => Value::Null,
        };
        match eval(&pi) {
            Ok(m) => {
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        rows.push(vec![json!(label), json!(i), json!(j), num(m[(i, j)].re), num(m[(i, j)].im)]);
                    }
                }
                let mut block = json!({ "label": label, "dim": pi.dim, "casimir": pi.casimir, "matrix": cmat(&m) });
                if central_nu.is_some() {
                    block["centrality_defect"] = defect;
                }
                blocks.push(block);
            }
            Err(e @ (Error::RieszOnConstants | Error::ZeroBernstein | Error::ZeroExponent)) => {
                blocks.push(json!({
                    "label": label, "dim": pi.dim, "casimir": pi.casimir,
                    "matrix": Value::Null, "undefined": e.to_string(),
                }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let report = Report::table(&["label", "row", "col", "re", "im"], rows).with_json(Value::Array(blocks));
    Ok((report, prov("symbol-group", hash, None)))
}

/// Symbol on a periodic grid, as a function of the lattice frequency `k / L`.
#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
enum GridSymbolCfg {
    /// `Σ C_jk ξ_j ξ_k / |ξ|^2`.
    Riesz2 { c: Vec<Vec<Cx>> },
    /// `e^{-t |ξ|^2}`, the torus heat flow `e^{-t κ}`.
    Heat { t: f64 },
    /// `e^{t ρ(-2π ξ)}`.
    Semigroup { triple: TripleCfg, t: f64 },
    /// Time-dependent multiplier; frequencies with `Re ρ = 0` take the
    /// zero-mode value.
    Multiplier { spec: MultiplierCfg },
}

type GridSymbol = Box<dyn Fn(&[f64]) -> levy_mart::Result<Complex<f64>> + Sync>;

fn grid_symbol(cfg: &GridSymbolCfg, axes: usize, zero: Complex<f64>) -> Result<GridSymbol, CliError> {
    let check_dim = |n: usize, what: &str| {
        if n == axes {
            Ok(())
        } else {
            Err(CliError::Config(format!("at `symbol.{what}`: dimension {n}, grid has {axes} axes")))
        }
    };
    Ok(match cfg {
        GridSymbolCfg::Riesz2 { c } => {
            let c = complex_matrix(c, "symbol.c")?;
            check_dim(c.rows(), "c")?;
            Box::new(move |xi| riesz2_symbol_rn(&c, xi))
        }
        GridSymbolCfg::Heat { t } => {
            let t = *t;
            Box::new(move |xi| Ok(Complex::new((-t * xi.iter().map(|x| x * x).sum::<f64>()).exp(), 0.0)))
        }
        GridSymbolCfg::Semigroup { triple, t } => {
            let triple = triple.build()?;
            check_dim(triple.dim(), "triple.drift")?;
            let t = *t;
            Box::new(move |xi| {
                let scaled: Vec<f64> = xi.iter().map(|x| -2.0 * std::f64::consts::PI * x).collect();
                Ok((eval_symbol(&triple, &scaled)? * t).exp())
            })
        }
        GridSymbolCfg::Multiplier { spec } => {
            let (triple, spec) = spec.build()?;
            check_dim(triple.dim(), "spec.triple.drift")?;
            Box::new(move |xi| match multiplier_time_dependent(&spec, &triple, xi) {
                Err(Error::NonIntegrableProfile { .. } | Error::ZeroSymbolFrequency) => Ok(zero),
                r => r,
            })
        }
    })
}

fn zero_mode(zero: Option<Cx>) -> (ZeroMode<f64>, Complex<f64>) {
    match zero {
        Some(c) => (ZeroMode::Value(c.get()), c.get()),
        None => (ZeroMode::Zero, Complex::new(0.0, 0.0)),
    }
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct TermKCfg {
    k: Vec<i64>,
    coeff: Cx,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ApplyConfig {
    group: String,
    n: usize,
    terms: Vec<TermKCfg>,
    symbol: GridSymbolCfg,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zero: Option<Cx>,
    #[serde(default = "default_ps")]
    p: Vec<f64>,
}

fn default_ps() -> Vec<f64> {
    vec![2.0]
}

fn torus_polynomial(group: GroupKind, terms: &[TermKCfg]) -> Result<PeterWeylCoeffs<f64>, CliError> {
    let axes = group.algebra_dim();
    if !group.is_abelian() {
        return Err(CliError::Config("at `group`: grid operations need t1 or t2".into()));
    }
    if let Some(bad) = terms.iter().position(|t| t.k.len() != axes) {
        return Err(CliError::Config(format!("at `terms[{bad}].k`: expected {axes} entries")));
    }
    let band = terms.iter().flat_map(|t| t.k.iter()).map(|k| k.unsigned_abs() as u32).max().unwrap_or(0);
    let mut coeffs = PeterWeylCoeffs::zero(group, band);
    for t in terms {
        let label = match group {
            GroupKind::T1 => IrrepLabel::T1(t.k[0]),
            _ => IrrepLabel::T2(t.k[0], t.k[1]),
        };
        let block = coeffs.blocks.get_mut(&label).expect("label within band");
        block[(0, 0)] = block[(0, 0)] + t.coeff.get();
    }
    Ok(coeffs)
}

fn grid_points(f: &GridFunction<f64>) -> Vec<Vec<f64>> {
    let dims = f.dims();
    (0..f.len())
        .map(|mut flat| {
            let mut x = vec![0.0; dims.len()];
            for a in (0..dims.len()).rev() {
                x[a] = (flat % dims[a]) as f64 * f.period()[a] / dims[a] as f64;
                flat /= dims[a];
            }
            x
        })
        .collect()
}

pub fn apply(g: &Global) -> Outcome {
    let (cfg, hash) = read_config::<ApplyConfig>(g, "apply")?;
    let group = parse_group(&cfg.group)?;
    let coeffs = torus_polynomial(group, &cfg.terms)?;
    let f = torus_coeffs_to_grid(&coeffs, cfg.n)?;
    let (zero, zero_value) = zero_mode(cfg.zero);
    let m = grid_symbol(&cfg.symbol, group.algebra_dim(), zero_value)?;
    let out = apply_symbol_grid(&m, &f, zero)?;
    let mut norms = Vec::new();
    for &p in &cfg.p {
        norms.push(json!({ "p": p, "input": num(lp_norm(&f, p)?), "output": num(lp_norm(&out, p)?) }));
    }
    let pts = grid_points(&out);
    let rows: Vec<Vec<Value>> = pts
        .iter()
        .zip(out.values())
        .map(|(x, v)| {
            let mut row: Vec<Value> = x.iter().map(|c| num(*c)).collect();
            row.extend([num(v.re), num(v.im)]);
            row
        })
        .collect();
    let mut cols: Vec<String> = (1..=pts[0].len()).map(|i| format!("x{i}")).collect();
    cols.extend(["re".into(), "im".into()]);
    let json = json!({
        "dims": out.dims(),
        "period": out.period(),
        "values": out.values().iter().map(|v| cx(*v)).collect::<Vec<_>>(),
        "norms": norms,
    });
    let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
    Ok((Report::table(&cols, rows).with_json(json), prov("apply", hash, None)))
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct NormSearchConfig {
    symbol: GridSymbolCfg,
    n: usize,
    #[serde(default = "two_axes")]
    axes: usize,
    band: u32,
    p: Vec<f64>,
    trials: usize,
    power_steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zero: Option<Cx>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// Include the best witness function per exponent in JSON output.
    #[serde(default)]
    dump_witness: bool,
}

fn two_axes() -> usize {
    2
}

pub fn norm_search(g: &Global) -> Outcome {
    let (cfg, hash) = read_config::<NormSearchConfig>(g, "norm-search")?;
    let seed = g.seed.or(cfg.seed).unwrap_or(0);
    let (zero, zero_value) = zero_mode(cfg.zero);
    let m = grid_symbol(&cfg.symbol, cfg.axes, zero_value)?;
    let sup = lattice_sup(&m, &vec![cfg.n; cfg.axes], &vec![1.0; cfg.axes], zero)?;
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for &p in &cfg.p {
        let search = NormSearch {
            n: cfg.n,
            axes: cfg.axes,
            band: cfg.band,
            p,
            trials: cfg.trials,
            power_steps: cfg.power_steps,
            seed,
        };
        let r = norm_lower_bound_search(&m, zero, &search)?;
        let bound = burkholder_constant(p)?;
        rows.push(vec![num(p), num(r.best_ratio), num(bound), num(sup)]);
        let mut entry = json!({
            "p": p,
            "best_ratio": num(r.best_ratio),
            "burkholder": num(bound),
            "lattice_sup": num(sup),
            "trial_ratios": r.trial_ratios,
        });
        if cfg.dump_witness {
            entry["witness"] = Value::Array(r.witness.values().iter().map(|v| cx(*v)).collect());
        }
        entries.push(entry);
    }
    let report = Report::table(&["p", "best_ratio", "burkholder", "lattice_sup"], rows).with_json(Value::Array(entries));
    Ok((report, prov("norm-search", hash, Some(seed))))
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct FunctionCfg {
    band: u32,
    #[serde(default)]
    seed: u64,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum PsiValues {
    One(f64),
    PerAtom(Vec<f64>),
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct TransformCfg {
    a: Vec<Vec<f64>>,
    psi: PsiValues,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SimulateConfig {
    group: String,
    c: f64,
    drift: Vec<f64>,
    #[serde(default)]
    atoms: Vec<GroupAtomCfg>,
    horizon: f64,
    dt: f64,
    paths: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    function: FunctionCfg,
    transform: TransformCfg,
    #[serde(default = "default_ps")]
    p: Vec<f64>,
    /// `[b, B]` for the non-symmetric subordination check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interval: Option<[f64; 2]>,
}

struct PathSummary {
    y: Complex<f64>,
    x: Complex<f64>,
    violation: f64,
    nonsymmetric: Option<f64>,
    gap: f64,
    line: Option<String>,
}

fn transcript_line(index: usize, tr: &levy_mart::sim::MartingaleTranscript<f64>) -> String {
    let pairs = |v: &[Complex<f64>]| v.iter().map(|z| cx(*z)).collect::<Vec<_>>();
    json!({
        "path": index,
        "times": tr.times,
        "m": pairs(&tr.m),
        "transform": pairs(&tr.transform),
        "qv": tr.qv,
        "qv_transform": tr.qv_transform,
    })
    .to_string()
}

pub fn simulate(g: &Global, transcripts: Option<&Path>) -> Outcome {
    let (cfg, hash) = read_config::<SimulateConfig>(g, "simulate")?;
    let seed = g.seed.or(cfg.seed).unwrap_or(0);
    let group = parse_group(&cfg.group)?;
    let nu = group_measure(group, &cfg.atoms)?;
    let spec = GroupProcessSpec::new(group, cfg.c, cfg.drift.clone(), nu, cfg.horizon, cfg.dt, seed)?;
    let f = PeterWeylCoeffs::random_real(
        group,
        cfg.function.band,
        &mut levy_mart::sim::stream_rng(cfg.function.seed, levy_mart::sim::Purpose::Fixture, 0),
    );
    let a = real_matrix(&cfg.transform.a, "transform.a")?;
    if a.rows() != group.algebra_dim() || a.cols() != group.algebra_dim() {
        return Err(CliError::Config(format!(
            "at `transform.a`: {group} needs a {0}x{0} matrix",
            group.algebra_dim()
        )));
    }
    let transform = match &cfg.transform.psi {
        PsiValues::One(v) => Transform::constant(a, *v),
        PsiValues::PerAtom(v) if v.len() == cfg.atoms.len() => Transform::per_atom(a, v.clone()),
        PsiValues::PerAtom(v) => {
            return Err(CliError::Config(format!(
                "at `transform.psi`: {} values for {} atoms",
                v.len(),
                cfg.atoms.len()
            )))
        }
    };
    let keep_lines = transcripts.is_some();
    let interval = cfg.interval;
    let rows = transcript_ensemble(&spec, &f, &transform, cfg.paths, |path, tr| {
        Ok(PathSummary {
            y: tr.terminal_transform(),
            x: tr.terminal_m(),
            violation: check_differential_subordination(tr),
            nonsymmetric: interval
                .map(|[b, big_b]| check_nonsymmetric_subordination(tr, b, big_b))
                .transpose()?,
            gap: tr.representation_gap(),
            line: keep_lines.then(|| transcript_line(path.stream as usize, tr)),
        })
    })?;
    if let Some(path) = transcripts {
        let file = std::fs::File::create(path)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        let mut gz = GzEncoder::new(file, Compression::default());
        for r in &rows {
            let line = r.line.as_deref().expect("lines were requested");
            writeln!(gz, "{line}").map_err(|e| CliError::Io(e.to_string()))?;
        }
        gz.finish().map_err(|e| CliError::Io(e.to_string()))?;
    }
    let y: Vec<_> = rows.iter().map(|r| r.y).collect();
    let x: Vec<_> = rows.iter().map(|r| r.x).collect();
    let fold_max = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::NEG_INFINITY, f64::max);
    let mut table = vec![
        vec![json!("paths"), Value::Null, json!(cfg.paths)],
        vec![
            json!("max_subordination_violation"),
            Value::Null,
            num(fold_max(&mut rows.iter().map(|r| r.violation))),
        ],
        vec![
            json!("max_representation_gap"),
            Value::Null,
            num(fold_max(&mut rows.iter().map(|r| r.gap))),
        ],
    ];
    if interval.is_some() {
        table.push(vec![
            json!("max_nonsymmetric_violation"),
            Value::Null,
            num(fold_max(&mut rows.iter().filter_map(|r| r.nonsymmetric))),
        ]);
    }
    for &p in &cfg.p {
        let est = empirical_burkholder(&y, &x, p)?;
        table.push(vec![json!("ratio"), num(p), num(est.ratio)]);
        table.push(vec![json!("stderr"), num(p), num(est.stderr)]);
        table.push(vec![json!("burkholder"), num(p), num(burkholder_constant(p)?)]);
    }
    Ok((Report::table(&["quantity", "p", "value"], table), prov("simulate", hash, Some(seed))))
}

#[derive(Deserialize, Serialize, Default)]
#[serde(deny_unknown_fields)]
struct VerifyConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    paths: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multiplier_specs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    frequency_grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    norm_specs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    plancherel_pairs: Option<usize>,
}

pub fn verify(
    g: &Global,
    names: &[String],
    paths: Option<usize>,
) -> Result<(Report, Provenance<'static>, Vec<String>), CliError> {
    let cfg: VerifyConfig = match &g.config {
        Some(p) => load(p)?,
        None => VerifyConfig::default(),
    };
    let mut opts = VerifyOptions::default();
    opts.seed = g.seed.or(cfg.seed).unwrap_or(opts.seed);
    opts.paths = paths.or(cfg.paths).unwrap_or(opts.paths);
    opts.multiplier_specs = cfg.multiplier_specs.unwrap_or(opts.multiplier_specs);
    opts.frequency_grid = cfg.frequency_grid.unwrap_or(opts.frequency_grid);
    opts.norm_specs = cfg.norm_specs.unwrap_or(opts.norm_specs);
    opts.plancherel_pairs = cfg.plancherel_pairs.unwrap_or(opts.plancherel_pairs);
    let criteria: Vec<Criterion> = if names.is_empty() {
        Criterion::ALL.to_vec()
    } else {
        names
            .iter()
            .map(|n| n.parse().map_err(|_| CliError::Config(format!("unknown criterion `{n}`"))))
            .collect::<Result<_, _>>()?
    };
    let effective = json!({
        "criteria": criteria.iter().map(|c| c.id()).collect::<Vec<_>>(),
        "paths": opts.paths,
        "multiplier_specs": opts.multiplier_specs,
        "frequency_grid": opts.frequency_grid,
        "norm_specs": opts.norm_specs,
        "plancherel_pairs": opts.plancherel_pairs,
    });
    let hash = config_hash("verify", &effective);
    let mut rows = Vec::new();
    let mut outcomes = Vec::new();
    let mut failed = Vec::new();
    for c in criteria {
        match run_criterion(c, &opts) {
            Ok(out) => {
                eprintln!("{}", out.line());
                if !out.passed {
                    failed.push(c.name().to_string());
                }
                for (k, v) in &out.metrics {
                    rows.push(vec![json!(c.id()), json!(c.name()), json!(out.passed), json!(k), num(*v)]);
                }
                outcomes.push(json!({
                    "id": c.id(),
                    "name": c.name(),
                    "passed": out.passed,
                    "summary": out.summary,
                    "metrics": out.metrics.iter().map(|(k, v)| json!({ "name": k, "value": num(*v) })).collect::<Vec<_>>(),
                }));
            }
            Err(e) => {
                eprintln!("[FAIL] {:>2} {}: error: {e}", c.id(), c.name());
                failed.push(c.name().to_string());
                rows.push(vec![json!(c.id()), json!(c.name()), json!(false), json!("error"), Value::Null]);
                outcomes.push(json!({ "id": c.id(), "name": c.name(), "passed": false, "error": e.to_string() }));
            }
        }
    }
    let report = Report::table(&["id", "name", "passed", "metric", "value"], rows).with_json(Value::Array(outcomes));
    Ok((report, prov("verify", hash, Some(opts.seed)), failed))
}

pub fn constants(p: f64, b: Option<f64>, big_b: Option<f64>) -> Outcome {
    let interval = match (b, big_b) {
        (Some(b), Some(big_b)) => Some((b, big_b)),
        (None, None) => None,
        _ => return Err(CliError::Config("--b and --B go together".into())),
    };
    let hash = config_hash("constants", &json!({ "p": p, "b": b, "B": big_b }));
    let r = constant_report(p, interval)?;
    let mut rows = vec![
        vec![json!("p"), num(r.p)],
        vec![json!("p_star"), num(r.p_star)],
        vec![json!("burkholder"), num(r.burkholder)],
        vec![json!("choi"), num(r.choi.value)],
    ];
    let mut body = json!({
        "p": r.p,
        "p_star": r.p_star,
        "burkholder": r.burkholder,
        "choi": {
            "value": r.choi.value,
            "leading": r.choi.leading,
            "constant": r.choi.constant,
            "alpha2": r.choi.alpha2,
            "correction": r.choi.correction,
            "asymptotic": r.choi.asymptotic,
        },
    });
    if let Some((b, big_b, bounds)) = &r.interval {
        let case = match bounds.case {
            IntervalCase::Symmetric => "symmetric",
            IntervalCase::OneSided => "one_sided",
            IntervalCase::Open => "open",
        };
        rows.push(vec![json!("cpbb_lower"), num(bounds.lower)]);
        rows.push(vec![json!("cpbb_upper"), num(bounds.upper)]);
        if let Some(v) = bounds.value {
            rows.push(vec![json!("cpbb_value"), num(v)]);
        }
        body["interval"] = json!({
            "b": b,
            "B": big_b,
            "lower": bounds.lower,
            "upper": bounds.upper,
            "case": case,
            "value": bounds.value,
        });
    }
    let report = Report::table(&["quantity", "value"], rows).with_json(body);
    Ok((report, prov("constants", hash, None)))
}
