//! Acceptance suite. Runs every criterion, prints one `[PASS]`/`[FAIL]` line
//! each, and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use dfg_shaper::dfg::{map_pump_to_output, output_center, pump_envelope, DfgScheme};
use dfg_shaper::experiments::{
    sweep_bandwidth, sweep_phasematching, OverlapRecord, SigmaRange, DEFAULT_ORDERS,
    DEFAULT_PM_FWHMS,
};
use dfg_shaper::modes::{hermite, overlap, HgTarget};
use dfg_shaper::pipeline::{run_pipeline, PipelineConfig, Preset};
use dfg_shaper::spectral::{
    convolve, convolve_direct, convolve_fft, ghz_to_nm, make_grid, GaussianKernel, LineShape,
    SincSquaredKernel, SpectralGrid, Spectrum, FWHM_PER_SIGMA,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn scheme() -> DfgScheme {
    DfgScheme::default()
}

fn default_sweep(preset: Preset) -> Vec<OverlapRecord> {
    let out = sweep_bandwidth(
        &DEFAULT_ORDERS,
        SigmaRange::default(),
        &scheme(),
        &PipelineConfig::preset(preset),
    )
    .expect("sweep configuration is valid");
    assert!(out.failures.is_empty(), "{:?}", out.failures);
    out.records
}

fn find(records: &[OverlapRecord], order: u32, sigma: f64) -> f64 {
    records
        .iter()
        .find(|r| r.order == order && (r.sigma_nm - sigma).abs() < 1e-12)
        .map(|r| r.overlap)
        .unwrap_or_else(|| panic!("no record for order {order} sigma {sigma}"))
}

fn identity_fidelity() -> Outcome {
    let t = Instant::now();
    let records = default_sweep(Preset::Ideal);
    let elapsed = t.elapsed().as_secs_f64();
    let worst = records
        .iter()
        .map(|r| (r.overlap - 1.0).abs())
        .fold(0.0, f64::max);
    outcome(
        records.len() == 200 && worst <= 1e-9 && elapsed < 10.0,
        format!("{} points, max |overlap - 1| = {worst:.2e}, {elapsed:.2} s", records.len()),
    )
}

fn spectrometer_kernel() -> Outcome {
    let w = ghz_to_nm(20.0, 870.0);
    let rel = (w - 0.0505).abs() / 0.0505;
    let rel_stated = (w - 0.05).abs() / 0.05;
    outcome(
        rel <= 0.02 && rel_stated <= 0.02,
        format!("20 GHz at 870 nm = {w:.5} nm (off 0.0505 by {:.2}%, off 0.05 by {:.2}%)", rel * 100.0, rel_stated * 100.0),
    )
}

fn output_wavelength() -> Outcome {
    let c = output_center(557.0, 1550.0).expect("valid scheme");
    outcome(
        (c - 869.44).abs() <= 0.01,
        format!("output center {c:.4} nm"),
    )
}

fn current_experiment_curves() -> Outcome {
    let records = default_sweep(Preset::CurrentExperiment);
    let band: Vec<f64> = (0..7).map(|k| 3.5 + 0.25 * k as f64).collect();
    let mut worst_band = (f64::INFINITY, 0, 0.0);
    for n in 0..=4 {
        for &s in &band {
            let v = find(&records, n, s);
            if v < worst_band.0 {
                worst_band = (v, n, s);
            }
        }
    }
    let a = worst_band.0 >= 0.95;

    let at10: Vec<f64> = (2..=4).map(|n| find(&records, n, 10.0)).collect();
    let b = at10[0] > at10[1] && at10[1] > at10[2];

    let mut c = true;
    let mut penalties = Vec::new();
    for n in 0..=4 {
        let best = records
            .iter()
            .filter(|r| r.order == n)
            .map(|r| r.overlap)
            .fold(f64::NEG_INFINITY, f64::max);
        let penalty = best - find(&records, n, 0.25);
        c &= penalty >= 0.01;
        penalties.push(format!("{penalty:.3}"));
    }

    outcome(
        a && b && c,
        format!(
            "(a) {} min over sigma in [3.5, 5] = {:.4} at n={} sigma={}; \
             (b) {} overlap at sigma=10 for n=2,3,4 = {:.4}, {:.4}, {:.4}; \
             (c) {} small-sigma penalty per order = [{}]",
            if a { "ok" } else { "FAIL" },
            worst_band.0,
            worst_band.1,
            worst_band.2,
            if b { "ok" } else { "FAIL" },
            at10[0],
            at10[1],
            at10[2],
            if c { "ok" } else { "FAIL" },
            penalties.join(", ")
        ),
    )
}

fn outlook_curves() -> Outcome {
    let config = PipelineConfig::preset(Preset::PulsedOutlook);
    let t = Instant::now();
    let sweep = sweep_phasematching(4, &DEFAULT_PM_FWHMS, SigmaRange::default(), &scheme(), &config)
        .expect("outlook preset models phasematching");
    let elapsed = t.elapsed().as_secs_f64();
    let complete = sweep.failures.is_empty() && sweep.records.len() == DEFAULT_PM_FWHMS.len() * 40;

    let single = |sigma: f64| {
        let target = HgTarget::new(4, 1550.0, sigma).unwrap();
        let mut c = config;
        c.phasematching = dfg_shaper::pipeline::PhasematchingModel::Kernel(
            dfg_shaper::dfg::PhasematchingSpec::gaussian(0.2),
        );
        run_pipeline(&target, &scheme(), &c).unwrap().overlap
    };
    let (o18, o4) = (single(1.8), single(4.0));
    let rises = o18 < o4;

    let pms = [0.2, 0.5, 1.0, 2.0];
    let mut monotone = true;
    let mut worst = f64::NEG_INFINITY;
    for s in SigmaRange::default().values().unwrap().into_iter().filter(|&s| s <= 3.0) {
        let curve: Vec<f64> = pms
            .iter()
            .map(|&pm| {
                sweep
                    .records
                    .iter()
                    .find(|r| r.pm_fwhm_nm == Some(pm) && r.sigma_nm == s)
                    .expect("sweep point present")
                    .overlap
            })
            .collect();
        for w in curve.windows(2) {
            worst = worst.max(w[1] - w[0]);
            monotone &= w[1] <= w[0];
        }
    }
    outcome(
        complete && rises && monotone && elapsed < 30.0,
        format!(
            "pm 0.2 nm: overlap {o18:.4} at sigma=1.8 vs {o4:.4} at sigma=4; \
             largest increase with pm width for sigma <= 3 = {worst:.2e}; \
             {} records in {elapsed:.2} s",
            sweep.records.len()
        ),
    )
}

fn gaussian(grid: SpectralGrid, center: f64, fwhm: f64) -> Spectrum {
    let s = fwhm / FWHM_PER_SIGMA;
    Spectrum::from_fn(grid, |l| (-0.5 * ((l - center) / s).powi(2)).exp()).unwrap()
}

fn moment_fwhm(s: &Spectrum) -> f64 {
    let g = s.grid();
    let v = s.intensity();
    let total: f64 = v.iter().sum();
    let mean = v.iter().enumerate().map(|(i, x)| x * g.wavelength(i)).sum::<f64>() / total;
    let var = v
        .iter()
        .enumerate()
        .map(|(i, x)| x * (g.wavelength(i) - mean).powi(2))
        .sum::<f64>()
        / total;
    var.sqrt() * FWHM_PER_SIGMA
}

fn hermite_closed_form(n: u32, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0 * x,
        2 => 4.0 * x * x - 2.0,
        3 => 8.0 * x.powi(3) - 12.0 * x,
        4 => 16.0 * x.powi(4) - 48.0 * x * x + 12.0,
        5 => 32.0 * x.powi(5) - 160.0 * x.powi(3) + 120.0 * x,
        _ => unreachable!(),
    }
}

fn numerical_oracles() -> Outcome {
    let mut notes = Vec::new();

    // FFT against direct convolution on grids up to 4096 points.
    let mut fft_worst = 0.0f64;
    for n in [257usize, 1024, 4096] {
        let g = make_grid(1550.0, 40.0, n).unwrap();
        let s = gaussian(g, 1546.0, 3.0);
        let kernels: [&dyn LineShape; 3] = [
            &GaussianKernel::new(0.5).unwrap(),
            &GaussianKernel::new(4.0).unwrap(),
            &SincSquaredKernel::new(1.0).unwrap(),
        ];
        for k in kernels {
            let taps = k.taps(g.spacing());
            let d = convolve_direct(s.intensity(), &taps);
            let f = convolve_fft(s.intensity(), &taps);
            let scale = d.iter().copied().fold(0.0, f64::max);
            for (x, y) in d.iter().zip(&f) {
                fft_worst = fft_worst.max((x - y).abs() / scale);
            }
        }
    }
    let fft_ok = fft_worst <= 1e-10;
    notes.push(format!("fft vs direct {fft_worst:.1e}"));

    // Gaussian ⊛ Gaussian: widths add in quadrature. Width is measured from
    // the second moment, which is exact for Gaussians.
    let g = make_grid(1550.0, 80.0, 8001).unwrap();
    let mut width_worst = 0.0f64;
    for (a, b) in [(3.0, 4.0), (1.0, 2.0), (5.0, 0.5)] {
        let out = convolve(&gaussian(g, 1550.0, a), &GaussianKernel::new(b).unwrap()).unwrap();
        let expected = (a * a + b * b).sqrt();
        width_worst = width_worst.max((moment_fwhm(&out) - expected).abs() / expected);
    }
    let width_ok = width_worst <= 1e-6;
    notes.push(format!("width identity {width_worst:.1e}"));

    // Hermite recurrence against closed forms.
    let mut runner = TestRunner::new(Config {
        cases: 100,
        failure_persistence: None,
        ..Config::default()
    });
    let hermite_ok = runner
        .run(&(0u32..=5, -5.0f64..5.0), |(n, x)| {
            let (r, c) = (hermite(n, x), hermite_closed_form(n, x));
            prop_assert!((r - c).abs() <= 1e-10 * c.abs().max(1.0), "n={n} x={x}: {r} vs {c}");
            Ok(())
        })
        .is_ok();
    notes.push(format!("hermite {}", if hermite_ok { "ok" } else { "violated" }));

    // Overlap symmetry, scale invariance and bounds.
    let grid = make_grid(1550.0, 10.0, 64).unwrap();
    let spectrum = proptest::collection::vec(0.0f64..1.0, 64).prop_filter("nonzero", |v| {
        v.iter().any(|&x| x > 1e-3)
    });
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let overlap_ok = runner
        .run(&(spectrum.clone(), spectrum, 1e-3f64..1e3), |(a, b, k)| {
            let sa = Spectrum::new(grid, a).unwrap();
            let sb = Spectrum::new(grid, b).unwrap();
            let ab = overlap(&sa, &sb).unwrap();
            let ba = overlap(&sb, &sa).unwrap();
            prop_assert!((ab - ba).abs() <= 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
            let scaled = overlap(&sa.scaled(k).unwrap(), &sb).unwrap();
            prop_assert!((scaled - ab).abs() <= 1e-12);
            let self_ol = overlap(&sa, &sa).unwrap();
            if (self_ol - 1.0).abs() > 1e-12 {
                return Err(TestCaseError::fail(format!("self overlap {self_ol}")));
            }
            Ok(())
        })
        .is_ok();
    notes.push(format!("overlap properties x1000 {}", if overlap_ok { "ok" } else { "violated" }));

    outcome(fft_ok && width_ok && hermite_ok && overlap_ok, notes.join("; "))
}

fn grid_convergence() -> Outcome {
    let mut worst = (0.0f64, String::new());
    let mut count = 0;
    let mut check = |coarse: &[OverlapRecord], fine: &[OverlapRecord]| {
        assert_eq!(coarse.len(), fine.len());
        for (c, f) in coarse.iter().zip(fine) {
            assert_eq!((c.order, c.sigma_nm, c.pm_fwhm_nm), (f.order, f.sigma_nm, f.pm_fwhm_nm));
            let d = (c.overlap - f.overlap).abs();
            count += 1;
            if d > worst.0 {
                worst = (
                    d,
                    format!("{} n={} sigma={} pm={:?}", c.preset, c.order, c.sigma_nm, c.pm_fwhm_nm),
                );
            }
        }
    };

    for preset in [Preset::CurrentExperiment, Preset::Ideal] {
        let config = PipelineConfig::preset(preset);
        let mut fine = config;
        fine.grid = config.grid.refined(2.0);
        let run = |c: &PipelineConfig| {
            sweep_bandwidth(&DEFAULT_ORDERS, SigmaRange::default(), &scheme(), c)
                .unwrap()
                .records
        };
        check(&run(&config), &run(&fine));
    }
    let config = PipelineConfig::preset(Preset::PulsedOutlook);
    let mut fine = config;
    fine.grid = config.grid.refined(2.0);
    let run = |c: &PipelineConfig| {
        sweep_phasematching(4, &DEFAULT_PM_FWHMS, SigmaRange::default(), &scheme(), c)
            .unwrap()
            .records
    };
    check(&run(&config), &run(&fine));

    outcome(
        worst.0 < 1e-4,
        format!("{count} points, max change {:.2e} at {}", worst.0, worst.1),
    )
}

fn width_compression() -> Outcome {
    let s = scheme();
    let pump_grid = make_grid(1550.0, 100.0, 20_001).unwrap();
    let out_grid = make_grid(869.436, 40.0, 16_001).unwrap();
    let exact = (output_center(557.0, 1550.0).unwrap() / 1550.0).powi(2);
    let mut pass = true;
    let mut ratios = Vec::new();
    for w in [1.0, 5.0, 10.0] {
        let pump = pump_envelope(1550.0, w, &pump_grid).unwrap();
        let out = map_pump_to_output(&pump, &s, &out_grid).unwrap();
        let ratio = out.fwhm().unwrap() / w;
        pass &= ((ratio - 0.3148) / 0.3148).abs() <= 0.01;
        pass &= ((ratio - exact) / exact).abs() <= 0.01;
        ratios.push(format!("{w} nm -> {ratio:.5}"));
    }
    outcome(pass, format!("(869.436/1550)^2 = {exact:.5}; {}", ratios.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("identity fidelity", identity_fidelity),
        ("spectrometer kernel width", spectrometer_kernel),
        ("output wavelength", output_wavelength),
        ("current-experiment overlap curves", current_experiment_curves),
        ("pulsed-outlook overlap curves", outlook_curves),
        ("numerical oracles", numerical_oracles),
        ("grid convergence", grid_convergence),
        ("width compression", width_compression),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] AC-{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
