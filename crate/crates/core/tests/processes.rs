use frale_core::analyze::{charfn, cumulants, dyadic_qv, kstat_jackknife, mean_se, sample_at_times};
use frale_core::kernels::{mvn_kernel, KernelKind, MgKernel, MomentValue};
use frale_core::levy::{sample_compound_poisson, Atom, LevyMeasureSpec};
use frale_core::quad::{EndBehavior, Integrator};
use frale_core::rng::ensemble_map;
use frale_core::simulate::{
    flpmg_at, mvn_tail_sd, simulate_fbm_with, simulate_mixed, FbmWeights, MixedParams, MvnOptions, TailTreatment,
    TimeGrid,
};
use frale_core::specfun::HurstParameter;

fn hp(h: f64) -> HurstParameter {
    HurstParameter::new(h).unwrap()
}

fn rademacher() -> LevyMeasureSpec {
    LevyMeasureSpec::rademacher(1.0).unwrap()
}

#[test]
fn increments_are_not_stationary() {
    // Y_h = 0 iff no jump in (0, h); Y_{1+h} − Y_1 = 0 iff no jump in (0, 1+h).
    let h = hp(0.75);
    let spec = rademacher();
    let kernel = MgKernel::new(h);
    let n = 20_000;
    let step = 0.1;
    let flags: Vec<(bool, bool)> = ensemble_map(5, n, |_, seed| {
        let d = sample_compound_poisson(&spec, 1.0 + step, seed).unwrap();
        let y = flpmg_at(&kernel, &d.times, &d.sizes, &[step, 1.0, 1.0 + step]).unwrap();
        (y[0] == 0.0, y[2] - y[1] == 0.0)
    });
    let early = flags.iter().filter(|f| f.0).count() as f64 / n as f64;
    let late = flags.iter().filter(|f| f.1).count() as f64 / n as f64;
    let se = (early * (1.0 - early) / n as f64).sqrt() + (late * (1.0 - late) / n as f64).sqrt();
    assert!((early - (-step).exp()).abs() < 4.0 * se, "{early}");
    assert!((late - (-(1.0 + step)).exp()).abs() < 4.0 * se, "{late}");
    assert!(early - late > 10.0 * se);
}

#[test]
fn rough_kernels_blow_up_after_each_jump() {
    let h = hp(0.3);
    let kernel = MgKernel::new(h);
    let tau = 0.4;
    let deltas = [1e-2, 1e-4, 1e-6];
    let y = flpmg_at(&kernel, &[tau], &[1.0], &deltas.map(|d| tau + d)).unwrap();
    // z_H(τ+δ, τ) ≈ c_H δ^{H−1/2}
    for (v, d) in y.iter().zip(deltas) {
        let lead = h.mg_constant() * d.powf(h.offset());
        assert!((v / lead - 1.0).abs() < 0.05, "{v} vs {lead}");
    }
    assert!(y[2] > 6.0 * y[0]);
}

#[test]
fn fbm_variance_matches_power_law() {
    let h = hp(0.7);
    let grid = TimeGrid::uniform(1.0, 128).unwrap();
    let weights = FbmWeights::new(h, &grid).unwrap();
    let n = 8000;
    let last: Vec<f64> = ensemble_map(8, n, |_, seed| {
        *simulate_fbm_with(&weights, h, seed).unwrap().values.last().unwrap()
    });
    let mid: Vec<f64> = ensemble_map(8, n, |_, seed| simulate_fbm_with(&weights, h, seed).unwrap().values[64]);
    for (xs, t) in [(last, 1.0f64), (mid, 0.5)] {
        let (var, se) = kstat_jackknife(&xs, 2).unwrap();
        assert!((var - t.powf(1.4)).abs() < 4.0 * se, "t={t}: {var} ± {se}");
    }
}

#[test]
fn mixed_model_variation_approaches_brownian_part() {
    let h = hp(0.75);
    let spec = rademacher();
    let finest = 14;
    let grid = TimeGrid::dyadic(1.0, finest).unwrap();
    let params = MixedParams {
        sigma: 1.0,
        epsilon: 0.5,
        kind: KernelKind::MolchanGolosov,
        mvn: MvnOptions::for_horizon(1.0),
    };
    let paths: Vec<Vec<f64>> = ensemble_map(14, 200, |_, seed| {
        simulate_mixed(h, &spec, params, &grid, seed).unwrap().values
    });
    let report = dyadic_qv(&paths, (0.0, 1.0), finest, &[finest], h, 1.0).unwrap();
    let expected = report.expected[0] + params.epsilon * params.epsilon;
    let z = (report.mean[0] - expected) / report.stderr[0];
    assert!(z.abs() < 4.0, "{} vs {expected} (z = {z})", report.mean[0]);
}

#[test]
fn characteristic_function_matches_simulation() {
    let spec = rademacher();
    for kind in [KernelKind::MolchanGolosov, KernelKind::MandelbrotVanNess] {
        for h in [0.35, 0.8] {
            let p = charfn(
                kind,
                hp(h),
                &spec,
                &[0.3, 1.0],
                &[1.5, -0.5],
                20_000,
                21,
                MvnOptions::for_horizon(1.0),
            )
            .unwrap();
            assert!(p.max_abs_z() < 4.0, "{kind:?} H={h}: {p:?}");
        }
    }
}

#[test]
fn third_cumulant_follows_asymmetric_jumps() {
    // ν = δ_2/2 + δ_{−1}: zero mean, m3 = 8/2 − 1 = 3
    let spec = LevyMeasureSpec::new(vec![Atom { x: 2.0, rate: 0.5 }, Atom { x: -1.0, rate: 1.0 }]).unwrap();
    assert!((spec.moments().m3 - 3.0).abs() < 1e-12);
    for kind in [KernelKind::MolchanGolosov, KernelKind::MandelbrotVanNess] {
        let reps = cumulants(kind, hp(0.6), &spec, 1.0, 100_000, 33, MvnOptions::for_horizon(1.0)).unwrap();
        for r in &reps {
            assert!(matches!(r.analytic, MomentValue::Finite(_)));
            let z = r.z().unwrap();
            assert!(z.abs() < 4.0, "{kind:?} k={}: {r:?}", r.k);
        }
        assert!(reps[1].empirical > 0.0);
    }
}

#[test]
fn truncated_mvn_loses_variance_that_the_tail_restores() {
    let h = hp(0.75);
    let spec = rademacher();
    let n = 40_000;
    let var = |opts: MvnOptions| {
        let xs: Vec<f64> = sample_at_times(KernelKind::MandelbrotVanNess, h, &spec, &[1.0], n, 17, opts)
            .unwrap()
            .into_iter()
            .map(|v| v[0])
            .collect();
        kstat_jackknife(&xs, 2).unwrap()
    };
    for s in [10.0, 20.0] {
        let (v, se) = var(MvnOptions {
            s_trunc: s,
            tail: TailTreatment::GaussianLinear,
        });
        assert!((v - 1.0).abs() < 4.0 * se, "S={s}: {v} ± {se}");
    }
    let (short, _) = var(MvnOptions::truncated(1.0));
    let (long, _) = var(MvnOptions::truncated(8.0));
    assert!(short < long && long < 1.0, "{short} {long}");
}

#[test]
fn gaussian_tail_variance_matches_discarded_kernel_mass() {
    // ∫_{−∞}^{−S} f_H(1,s)² ds against the variance of the linear stand-in; relative error O(1/S)
    let h = hp(0.75);
    let p = h.offset();
    let quad = Integrator::default();
    let mut errors = Vec::new();
    for s_trunc in [25.0, 50.0, 100.0, 200.0] {
        // s = −S/y maps (−∞, −S] onto (0, 1]
        let exact = quad
            .integrate(
                |y| {
                    if y <= 0.0 {
                        return 0.0;
                    }
                    let f = mvn_kernel(h, 1.0, -s_trunc / y);
                    f * f * s_trunc / (y * y)
                },
                0.0,
                1.0,
                EndBehavior::Power(-2.0 * p),
                EndBehavior::Regular,
            )
            .unwrap()
            .value;
        let model = mvn_tail_sd(h, 1.0, s_trunc).powi(2);
        errors.push((model / exact - 1.0).abs());
    }
    assert!(errors[1] < 0.02, "{errors:?}");
    for w in errors.windows(2) {
        assert!((w[1] / w[0] - 0.5).abs() < 0.1, "{errors:?}");
    }
}

#[test]
fn mvn_ensemble_mean_is_zero() {
    let xs: Vec<f64> = sample_at_times(
        KernelKind::MandelbrotVanNess,
        hp(0.3),
        &rademacher(),
        &[1.0],
        20_000,
        2,
        MvnOptions::for_horizon(1.0),
    )
    .unwrap()
    .into_iter()
    .map(|v| v[0])
    .collect();
    let (m, se) = mean_se(&xs);
    assert!(m.abs() < 4.0 * se);
}
