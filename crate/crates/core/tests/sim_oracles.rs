use levy_mart::group::PeterWeylCoeffs as Coeffs;
use levy_mart::BernsteinSpec;
use levy_mart::linalg::Mat;
use levy_mart::sim::{
    mean_stderr, simulate_ensemble, simulate_subordinator, transcript_ensemble, Transform,
};
use levy_mart::{GroupElement, GroupKind, GroupLevyMeasure, GroupProcessSpec, IrrepLabel};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn circle_spec(c: f64, drift: f64, atoms: Vec<(f64, f64)>, horizon: f64, seed: u64) -> GroupProcessSpec {
    let nu = GroupLevyMeasure::new(
        GroupKind::T1,
        atoms.into_iter().map(|(x, m)| (GroupElement::T1(x), m)).collect(),
    )
    .unwrap();
    GroupProcessSpec::new(GroupKind::T1, c, vec![drift], nu, horizon, 0.05, seed).unwrap()
}

fn angle(g: &GroupElement) -> f64 {
    match g {
        GroupElement::T1(x) => *x,
        _ => unreachable!(),
    }
}

/// Mean of `e^{ikφ(T)}` with the standard error of its real and imaginary
/// parts, taken together.
fn character_mean(spec: &GroupProcessSpec, k: f64, paths: usize) -> (Complex<f64>, f64) {
    let ens = simulate_ensemble(spec, paths).unwrap();
    let re: Vec<f64> = ens.iter().map(|p| (k * angle(p.terminal())).cos()).collect();
    let im: Vec<f64> = ens.iter().map(|p| (k * angle(p.terminal())).sin()).collect();
    let (mr, sr) = mean_stderr(&re);
    let (mi, si) = mean_stderr(&im);
    (Complex::new(mr, mi), sr.hypot(si))
}

#[test]
fn poisson_jump_counts() {
    let spec = circle_spec(0.0, 0.0, vec![(0.4, 1.5), (-1.2, 1.0)], 2.0, 5);
    let ens = simulate_ensemble(&spec, 10_000).unwrap();
    let counts: Vec<f64> = ens.iter().map(|p| p.jump_count() as f64).collect();
    let (mean, _) = mean_stderr(&counts);
    // Poisson(λT) with λT = 5
    let sd = (5.0f64 / 10_000.0).sqrt();
    assert!((mean - 5.0).abs() < 3.0 * sd, "mean jump count {mean}");
    for p in &ens {
        assert!(p.jump_times().iter().all(|t| *t > 0.0 && *t <= 2.0));
        assert!(p.times.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn circle_heat_kernel_characters() {
    let (c, b, t) = (0.6, 0.3, 1.0);
    let spec = circle_spec(c, b, vec![], t, 9);
    for k in [1.0, 2.0] {
        let (mean, se) = character_mean(&spec, k, 10_000);
        let exact = Complex::new(-c * k * k * t, k * b * t).exp();
        assert!((mean - exact).norm() < 4.0 * se, "k={k}: {mean} vs {exact} (se {se})");
    }
}

#[test]
fn compound_poisson_characters() {
    let (tau, lambda, t) = (0.9, 1.3, 1.5);
    let spec = circle_spec(0.0, 0.0, vec![(tau, lambda)], t, 21);
    for k in [1.0, 3.0] {
        let (mean, se) = character_mean(&spec, k, 10_000);
        let exact = (Complex::new(0.0, k * tau).exp() - 1.0).scale(lambda * t).exp();
        assert!((mean - exact).norm() < 4.0 * se, "k={k}: {mean} vs {exact} (se {se})");
    }
}

#[test]
fn poisson_subordinator_laplace_transform() {
    let h = BernsteinSpec::new(0.0, vec![(1.0, 1.0)], None).unwrap();
    let ens = simulate_subordinator(&h, 1.0, 0.25, 3, 10_000).unwrap();
    let k = ens.times.len() - 1;
    let (mean, se) = ens.laplace(k, 1.0);
    let exact = (-(1.0 - (-1.0f64).exp())).exp();
    assert!((mean - exact).abs() < 3.0 * se, "{mean} vs {exact} (se {se})");
    // drift only: deterministic
    let lin = simulate_subordinator(&BernsteinSpec::linear(0.7), 2.0, 0.5, 3, 4).unwrap();
    for path in &lin.values {
        for (v, t) in path.iter().zip(&lin.times) {
            assert!((*v - 0.7 * *t).abs() < 1e-15);
        }
    }
}

fn torus_jump_spec(c: f64, dt: f64, seed: u64) -> GroupProcessSpec {
    let nu = GroupLevyMeasure::new(
        GroupKind::T2,
        vec![(GroupElement::T2(0.8, 0.1), 1.2), (GroupElement::T2(-0.3, 1.4), 0.7)],
    )
    .unwrap();
    GroupProcessSpec::new(GroupKind::T2, c, vec![0.1, -0.2], nu, 1.0, dt, seed).unwrap()
}

fn test_function() -> Coeffs<f64> {
    Coeffs::random_real(GroupKind::T2, 2, &mut ChaCha8Rng::seed_from_u64(44))
}

#[test]
fn pure_jump_transform_scales_quadratic_variation() {
    let spec = torus_jump_spec(0.0, 0.05, 2);
    let psi = -0.65;
    let a = Mat::from_fn(2, 2, |i, j| if i == j { 0.3 } else { -0.1 });
    let rows = transcript_ensemble(&spec, &test_function(), &Transform::constant(a, psi), 200, |_, tr| {
        Ok((tr.dqv.clone(), tr.dqv_transform.clone()))
    })
    .unwrap();
    for (dqv, dqva) in rows {
        for (x, y) in dqv.iter().zip(&dqva) {
            assert!((y - psi * psi * x).abs() <= 1e-13 * (1.0 + x), "{y} vs {}", psi * psi * x);
        }
    }
}

#[test]
fn martingale_increments_and_l2_identity() {
    let spec = torus_jump_spec(0.35, 0.004, 8);
    let rows = transcript_ensemble(&spec, &test_function(), &Transform::identity(2), 10_000, |_, tr| {
        let d = tr.terminal_m() - tr.m[0];
        Ok((d, tr.qv.last().copied().unwrap()))
    })
    .unwrap();
    let re: Vec<f64> = rows.iter().map(|r| r.0.re).collect();
    let im: Vec<f64> = rows.iter().map(|r| r.0.im).collect();
    let (mr, sr) = mean_stderr(&re);
    let (mi, si) = mean_stderr(&im);
    assert!(mr.abs() < 4.0 * sr && mi.abs() < 4.0 * si.max(1e-300), "mean increment {mr} {mi}");
    // E|M_T - M_0|^2 = E[M]_T; the left-point [M] carries an O(dt) bias
    let diff: Vec<f64> = rows.iter().map(|r| r.0.norm_sqr() - r.1).collect();
    let (md, sd) = mean_stderr(&diff);
    assert!(md.abs() < 4.0 * sd, "L2 identity off by {md} (se {sd})");
}

#[test]
fn quadratic_variation_is_nondecreasing() {
    let spec = torus_jump_spec(0.5, 0.05, 13);
    let a = Mat::from_fn(2, 2, |i, j| [[0.2, 0.5], [-0.4, 0.1]][i][j]);
    transcript_ensemble(&spec, &test_function(), &Transform::constant(a, 0.4), 100, |_, tr| {
        assert_eq!(tr.qv[0], 0.0);
        assert!(tr.qv.windows(2).all(|w| w[1] >= w[0]));
        assert!(tr.qv_transform.windows(2).all(|w| w[1] >= w[0]));
        assert!(tr.dqv.iter().all(|x| *x >= 0.0));
        Ok(())
    })
    .unwrap();
}

#[test]
fn ensembles_do_not_depend_on_thread_count() {
    let spec = torus_jump_spec(0.4, 0.05, 99);
    let f = test_function();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                transcript_ensemble(&spec, &f, &Transform::constant(Mat::identity(2), 0.5), 64, |p, tr| {
                    Ok((p.times.clone(), tr.transform.clone()))
                })
                .unwrap()
            })
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn fundamental_su2_character_under_heat_flow() {
    // E π(φ_t) = e^{-c κ t} I with κ = 3/4 for the fundamental representation
    let nu = GroupLevyMeasure::new(GroupKind::Su2, vec![]).unwrap();
    let (c, t) = (0.5, 0.8);
    let spec = GroupProcessSpec::new(GroupKind::Su2, c, vec![0.0; 3], nu, t, 0.01, 4).unwrap();
    let ens = simulate_ensemble(&spec, 4_000).unwrap();
    let pi = levy_mart::Irrep::new(IrrepLabel::Su2 { twice_spin: 1 });
    let est = levy_mart::sim::empirical_char(&ens, &pi, ens[0].grid_points.len() - 1).unwrap();
    let oracle = Mat::scalar(2, Complex::new((-c * 0.75 * t).exp(), 0.0));
    assert!(est.z_score(&oracle) < 4.0, "z = {}", est.z_score(&oracle));
}
