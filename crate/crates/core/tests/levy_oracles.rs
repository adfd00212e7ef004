use levy_mart::levy::{
    bernstein_eval, eval_symbol, BernsteinSpec, DensityProfile, LevyDensity, LevyMeasureRn,
    LevyTriple,
};
use levy_mart::linalg::Mat;

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    adapt(f, a, b, fa, fb, fc, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let (d, e) = (0.5 * (a + c), 0.5 * (c + b));
    let (fd, fe) = (f(d), f(e));
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adapt(f, a, c, fa, fc, fd, left, 0.5 * tol, depth - 1)
        + adapt(f, c, b, fc, fb, fe, right, 0.5 * tol, depth - 1)
}

fn stable_like_triple() -> LevyTriple<f64> {
    let d = LevyDensity::new(
        DensityProfile::PowerLaw {
            scale: 1.0,
            exponent: 2.2,
        },
        1e-4,
        1e3,
    );
    let nu = LevyMeasureRn::new(1, vec![], Some(d)).unwrap();
    LevyTriple::new(vec![0.0], Mat::zeros(1, 1), nu).unwrap()
}

#[test]
fn power_law_symbol_matches_adaptive_oracle() {
    let s = eval_symbol(&stable_like_triple(), &[1.0]).unwrap();
    // both half-lines, in the variable t = ln y
    let integrand = |t: f64| {
        let y = t.exp();
        -2.0 * (0.5 * y).sin().powi(2) * y.powf(-2.2) * y * 2.0
    };
    let oracle = simpson(&integrand, 1e-4f64.ln(), 1e3f64.ln(), 1e-12, 40);
    assert!((s.re - oracle).abs() < 1e-6, "{} vs {}", s.re, oracle);
    assert!(s.im.abs() < 1e-12);
    // 30-digit reference
    assert!((s.re + 2.996_848_631_611_633).abs() < 1e-9);
}

#[test]
fn symbol_real_part_is_even_with_density() {
    let t = stable_like_triple();
    for &x in &[0.2, 0.9, 3.7] {
        let p = eval_symbol(&t, &[x]).unwrap();
        let m = eval_symbol(&t, &[-x]).unwrap();
        assert!(p.re <= 0.0);
        assert!((p.re - m.re).abs() < 1e-12 * p.re.abs().max(1.0));
    }
}

#[test]
fn half_stable_bernstein_is_square_root() {
    let d = LevyDensity::new(
        DensityProfile::PowerLaw {
            scale: 0.5 / std::f64::consts::PI.sqrt(),
            exponent: 1.5,
        },
        1e-12,
        1e12,
    );
    let h = BernsteinSpec::new(0.0, vec![], Some(d)).unwrap();
    // 30-digit references for the truncated measure
    let frozen = [
        (1.0, 0.999_998_871_620_832_9),
        (4.0, 1.999_997_179_052_082_3),
        (9.0, 2.999_994_358_104_164_5),
    ];
    for (u, reference) in frozen {
        let v = bernstein_eval(&h, u).unwrap();
        assert!((v - reference).abs() < 1e-10, "u={u}: {v}");
        assert!((v - f64::sqrt(u)).abs() < 1e-4);
    }
}
