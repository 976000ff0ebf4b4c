use dfg_shaper::dfg::{map_pump_to_output, pump_envelope, DfgScheme};
use dfg_shaper::modes::{hermite, hg_spectrum, overlap, HgTarget};
use dfg_shaper::spectral::{
    convolve, integrate, make_grid, multiply, shift, window, GaussianKernel, SincSquaredKernel,
    SpectralGrid, Spectrum,
};
use proptest::prelude::*;

const N: usize = 96;

fn grid() -> SpectralGrid {
    make_grid(1550.0, 9.5, N).unwrap()
}

fn nonneg(len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0f64..1.0, len)
}

fn nonzero(len: usize) -> impl Strategy<Value = Vec<f64>> {
    nonneg(len).prop_filter("not all zero", |v| v.iter().any(|&x| x > 1e-3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn overlap_is_symmetric_scale_invariant_and_bounded(
        a in nonzero(N),
        b in nonzero(N),
        k in 1e-3f64..1e3,
    ) {
        let (sa, sb) = (Spectrum::new(grid(), a).unwrap(), Spectrum::new(grid(), b).unwrap());
        let ab = overlap(&sa, &sb).unwrap();
        prop_assert!((ab - overlap(&sb, &sa).unwrap()).abs() <= 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!((overlap(&sa.scaled(k).unwrap(), &sb).unwrap() - ab).abs() <= 1e-12);
        prop_assert!((overlap(&sa, &sa).unwrap() - 1.0).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn convolution_is_linear(
        a in nonneg(N),
        b in nonneg(N),
        (wa, wb) in (0.0f64..5.0, 0.0f64..5.0),
        fwhm in 0.2f64..3.0,
    ) {
        let g = grid();
        let k = GaussianKernel::new(fwhm).unwrap();
        let (sa, sb) = (Spectrum::new(g, a).unwrap(), Spectrum::new(g, b).unwrap());
        let lhs = convolve(&sa.weighted_sum(wa, &sb, wb).unwrap(), &k).unwrap();
        let rhs = convolve(&sa, &k).unwrap().weighted_sum(wa, &convolve(&sb, &k).unwrap(), wb).unwrap();
        let scale = lhs.peak().max(1.0);
        for (x, y) in lhs.intensity().iter().zip(rhs.intensity()) {
            prop_assert!((x - y).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn operations_preserve_nonnegativity(
        a in nonneg(N),
        b in nonneg(N),
        fwhm in 0.2f64..3.0,
        delta in -3.0f64..3.0,
        (low, width) in (1545.0f64..1555.0, 0.1f64..5.0),
    ) {
        let g = grid();
        let (sa, sb) = (Spectrum::new(g, a).unwrap(), Spectrum::new(g, b).unwrap());
        let outs = [
            convolve(&sa, &GaussianKernel::new(fwhm).unwrap()).unwrap(),
            convolve(&sa, &SincSquaredKernel::new(fwhm).unwrap()).unwrap(),
            multiply(&sa, &sb).unwrap(),
            window(&sa, low, low + width).unwrap(),
            shift(&sa, delta),
        ];
        for o in &outs {
            prop_assert!(o.intensity().iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn mapping_conserves_integral_and_transports_pointwise(
        center in 1540.0f64..1560.0,
        fwhm in 0.5f64..10.0,
        probe in 0usize..32_001,
    ) {
        // Default pipeline sampling on both axes.
        let scheme = DfgScheme::default();
        let pump_grid = make_grid(1550.0, 100.0, 40_001).unwrap();
        let out_grid = make_grid(869.436, 40.0, 32_001).unwrap();
        let pump = pump_envelope(center, fwhm, &pump_grid).unwrap();
        let out = map_pump_to_output(&pump, &scheme, &out_grid).unwrap();
        // Intensity per unit frequency is carried over, so the wavelength
        // integral is unchanged on both axes.
        let (p, o) = (integrate(&pump), integrate(&out));
        prop_assert!(((p - o) / p).abs() < 1e-6, "{} vs {}", p, o);

        let lo = out_grid.wavelength(probe);
        let lp = 1.0 / (1.0 / 557.0 - 1.0 / lo);
        let analytic = (-4.0 * std::f64::consts::LN_2 * ((lp - center) / fwhm).powi(2)).exp()
            * (lp / lo).powi(2);
        prop_assert!((out.intensity()[probe] - analytic).abs() <= 1e-3 * (lp / lo).powi(2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mapping_preserves_overlap_of_cocentered_spectra(
        center in 1545.0f64..1555.0,
        (wa, wb) in (1.0f64..10.0, 1.0f64..10.0),
    ) {
        // Offset pairs are not covered: the Jacobian weights the overlap
        // integrand once more than the measure, which shifts OL by ~1e-3.
        let (ca, cb) = (center, center);
        let scheme = DfgScheme::default();
        let pump_grid = make_grid(1550.0, 100.0, 20_001).unwrap();
        let out_grid = make_grid(869.436, 40.0, 16_001).unwrap();
        let a = pump_envelope(ca, wa, &pump_grid).unwrap();
        let b = pump_envelope(cb, wb, &pump_grid).unwrap();
        let pump_ol = overlap(&a, &b).unwrap();
        let out_ol = overlap(
            &map_pump_to_output(&a, &scheme, &out_grid).unwrap(),
            &map_pump_to_output(&b, &scheme, &out_grid).unwrap(),
        )
        .unwrap();
        prop_assert!((pump_ol - out_ol).abs() < 1e-4, "{} vs {}", pump_ol, out_ol);
    }
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

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hermite_matches_closed_forms(n in 0u32..=5, x in -6.0f64..6.0) {
        let (r, c) = (hermite(n, x), hermite_closed_form(n, x));
        prop_assert!((r - c).abs() <= 1e-10 * c.abs().max(1.0), "n={} x={}: {} vs {}", n, x, r, c);
    }
}

#[test]
fn gaussian_against_first_order_overlap() {
    // Independent midpoint quadrature of exp(-x²) against 4x²·exp(-x²) on a
    // million points; the closed form is 1/3.
    let m = 1_000_000;
    let (a, b) = (-12.0, 12.0);
    let h = (b - a) / m as f64;
    let (mut st, mut ss, mut tt) = (0.0, 0.0, 0.0);
    for i in 0..m {
        let x: f64 = a + (i as f64 + 0.5) * h;
        let s = (-x * x).exp();
        let t = 4.0 * x * x * (-x * x).exp();
        st += s * t;
        ss += s * s;
        tt += t * t;
    }
    let quadrature = st * st / (ss * tt);
    assert!((quadrature - 1.0 / 3.0).abs() < 1e-12, "{quadrature}");

    let g = make_grid(1550.0, 60.0, 6001).unwrap();
    let s0 = hg_spectrum(&HgTarget::new(0, 1550.0, 2.0).unwrap(), &g).unwrap();
    let s1 = hg_spectrum(&HgTarget::new(1, 1550.0, 2.0).unwrap(), &g).unwrap();
    let model = overlap(&s0, &s1).unwrap();
    assert!((model - quadrature).abs() < 1e-9, "{model} vs {quadrature}");
}
