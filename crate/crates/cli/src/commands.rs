use std::fmt::Write as _;

use anyhow::anyhow;
use dfg_shaper::dfg::DfgScheme;
use dfg_shaper::experiments::io::{write_csv, write_json};
use dfg_shaper::experiments::{
    sweep_bandwidth, sweep_phasematching, SigmaRange, SweepError, SweepOutcome,
};
use dfg_shaper::pipeline::{
    dual_mode_separation_on_output, PhasematchingModel, StageWidths,
};
use dfg_shaper::spectral::ghz_to_nm;
use dfg_shaper::{run_pipeline, HgTarget, ModelConfig, PipelineError, Preset};
use serde_json::json;

use crate::args::{Format, InfoArgs, PmSweepArgs, ShapeArgs, SigmaArgs, SweepArgs};
use crate::config::resolve;
use crate::output::{ensure_dir, write_file, write_spectrum, RunManifest, SpectrumDocument};
use crate::Failure;

pub fn shape(args: &ShapeArgs) -> Result<(), Failure> {
    let config = resolve(&args.common, Preset::CurrentExperiment)?;
    let scheme = config.scheme;
    let target = HgTarget::new(args.order, scheme.pump_center_nm, args.sigma)
        .map_err(|e| anyhow!("invalid target: {e}"))?;
    let result = run_pipeline(&target, &scheme, &config.pipeline).map_err(pipeline_failure)?;

    let out = &args.common.out;
    ensure_dir(out)?;
    let parameters = json!({
        "order": args.order,
        "sigma_nm": args.sigma,
        "format": format_name(args.common.format),
    });
    let mut manifest = RunManifest::new("shape", parameters, config);
    let summary = format!(
        "order = {}, sigma_nm = {}, preset = {}, overlap = {}",
        args.order, args.sigma, config.pipeline.preset, result.overlap
    );
    match args.common.format {
        Format::Csv => {
            for (name, label, spectrum) in [
                ("programmed.txt", "programmed", &result.programmed),
                ("modeled.txt", "modeled", &result.modeled),
            ] {
                let path = out.join(name);
                let header = [format!("{label} spectrum on the output axis"), summary.clone()];
                write_spectrum(&path, &header, spectrum)?;
                manifest.outputs.push(path);
            }
        }
        Format::Structured => {
            let path = out.join("shape.json");
            let doc = json!({
                "order": args.order,
                "sigma_nm": args.sigma,
                "preset": config.pipeline.preset,
                "overlap": result.overlap,
                "programmed": SpectrumDocument::new(&result.programmed),
                "modeled": SpectrumDocument::new(&result.modeled),
            });
            write_file(&path, |w| {
                serde_json::to_writer_pretty(&mut *w, &doc)?;
                writeln!(w)?;
                Ok(())
            })?;
            manifest.outputs.push(path);
        }
    }
    manifest.write(out)?;
    println!("overlap {}", result.overlap);
    Ok(())
}

fn sigma_range(args: &SigmaArgs) -> Result<SigmaRange, Failure> {
    Ok(SigmaRange::new(args.sigma_start, args.sigma_stop, args.sigma_step)
        .map_err(anyhow::Error::from)?)
}

fn pipeline_failure(e: PipelineError) -> Failure {
    match e.stage() {
        Some(_) => Failure::Pipeline(e),
        None => Failure::Input(e.into()),
    }
}

fn sweep_failure(e: SweepError) -> Failure {
    match e {
        SweepError::Pipeline(p) => pipeline_failure(p),
        other => Failure::Input(other.into()),
    }
}

fn write_records(
    command: &str,
    parameters: serde_json::Value,
    config: ModelConfig,
    format: Format,
    out: &std::path::Path,
    outcome: &SweepOutcome,
) -> Result<(), Failure> {
    ensure_dir(out)?;
    let mut manifest = RunManifest::new(command, parameters, config);
    let path = match format {
        Format::Csv => {
            let path = out.join("records.csv");
            write_file(&path, |w| Ok(write_csv(&outcome.records, w)?))?;
            path
        }
        Format::Structured => {
            let path = out.join("records.json");
            write_file(&path, |w| Ok(write_json(&outcome.records, w)?))?;
            path
        }
    };
    manifest.outputs.push(path);
    manifest.write(out)?;
    for f in &outcome.failures {
        eprintln!(
            "skipped order {} sigma {} nm{}: {}",
            f.order,
            f.sigma_nm,
            f.pm_fwhm_nm.map(|w| format!(" pm {w} nm")).unwrap_or_default(),
            f.message
        );
    }
    println!(
        "{} records written, {} points failed",
        outcome.records.len(),
        outcome.failures.len()
    );
    Ok(())
}

pub fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let config = resolve(&args.common, Preset::CurrentExperiment)?;
    let range = sigma_range(&args.sigma)?;
    let outcome = sweep_bandwidth(&args.orders, range, &config.scheme, &config.pipeline)
        .map_err(sweep_failure)?;
    let parameters = json!({
        "orders": args.orders,
        "sigma_range": range,
        "format": format_name(args.common.format),
    });
    write_records("sweep", parameters, config, args.common.format, &args.common.out, &outcome)
}

pub fn pm_sweep(args: &PmSweepArgs) -> Result<(), Failure> {
    let config = resolve(&args.common, Preset::PulsedOutlook)?;
    let range = sigma_range(&args.sigma)?;
    let outcome = sweep_phasematching(
        args.order,
        &args.pm_fwhms,
        range,
        &config.scheme,
        &config.pipeline,
    )
    .map_err(sweep_failure)?;
    let parameters = json!({
        "order": args.order,
        "pm_fwhms_nm": args.pm_fwhms,
        "sigma_range": range,
        "format": format_name(args.common.format),
    });
    write_records("pm-sweep", parameters, config, args.common.format, &args.common.out, &outcome)
}

pub fn info(args: &InfoArgs) -> Result<(), Failure> {
    let config = resolve(&args.common, Preset::CurrentExperiment)?;
    print!("{}", info_report(&config).map_err(|e| Failure::Input(anyhow!(e)))?);
    Ok(())
}

const DISABLED: &str = "disabled";

fn info_report(config: &ModelConfig) -> Result<String, dfg_shaper::dfg::DfgError> {
    let scheme: DfgScheme = config.scheme;
    let p = &config.pipeline;
    let s = &p.stages;
    let out = scheme.output_center()?;
    let pump = scheme.pump_center_nm;
    let input = scheme.input_wavelength_nm;
    let widths = StageWidths::new(&scheme, p)?;

    let mut r = String::new();
    let mut line = |label: &str, value: String| {
        let _ = writeln!(r, "{label:<22}{value}");
    };
    line("preset", p.preset.to_string());
    line("input wavelength", format!("{input} nm"));
    line("pump center", format!("{pump} nm"));
    line("output center", format!("{out:.2} nm"));
    line(
        "compression factor",
        format!("{:.3} (output/pump wavelength squared)", scheme.compression_factor()?),
    );
    line(
        "pump envelope",
        if s.envelope {
            format!("{} nm FWHM (pump axis)", p.envelope_fwhm_nm)
        } else {
            DISABLED.into()
        },
    );
    line(
        "shaper window",
        if s.window {
            format!("{} to {} nm (pump axis)", p.shaper_window_nm[0], p.shaper_window_nm[1])
        } else {
            DISABLED.into()
        },
    );
    line(
        "shaper resolution",
        if s.shaper_resolution {
            format!(
                "{} GHz = {:.5} nm at {pump} nm (pump axis)",
                p.shaper_resolution_ghz, widths.shaper_resolution
            )
        } else {
            DISABLED.into()
        },
    );
    line(
        "phasematching",
        match (p.phasematching_spec(), p.phasematching) {
            (Some(spec), _) => format!(
                "{} nm FWHM pump axis = {:.5} nm (output axis)",
                spec.fwhm_nm, widths.phasematching
            ),
            (None, PhasematchingModel::FoldedIntoEnvelope) if s.envelope => {
                "folded into the pump envelope".into()
            }
            (None, _) => DISABLED.into(),
        },
    );
    line(
        "input linewidth",
        if s.dye_linewidth {
            format!(
                "{} GHz = {:.5} nm at {input} nm = {:.5} nm at {out:.2} nm (output axis)",
                p.dye_linewidth_ghz,
                ghz_to_nm(p.dye_linewidth_ghz, input),
                widths.dye_linewidth
            )
        } else {
            DISABLED.into()
        },
    );
    line(
        "dual-mode shift",
        if s.dual_mode {
            format!(
                "{} nm at {input} nm = {:.5} nm (output axis), ratio {}:{}",
                p.dual_mode_separation_nm,
                dual_mode_separation_on_output(p.dual_mode_separation_nm, &scheme)?,
                p.dual_mode_ratio[0],
                p.dual_mode_ratio[1]
            )
        } else {
            DISABLED.into()
        },
    );
    line(
        "spectrometer",
        if s.spectrometer {
            format!(
                "{} GHz = {:.5} nm at {out:.2} nm (output axis)",
                p.spectrometer_resolution_ghz, widths.spectrometer
            )
        } else {
            DISABLED.into()
        },
    );
    line(
        "grid spacing",
        format!(
            "{} nm (pump axis), {} nm (output axis)",
            p.grid.pump_spacing_nm, p.grid.output_spacing_nm
        ),
    );
    Ok(r)
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Structured => "structured",
    }
}
