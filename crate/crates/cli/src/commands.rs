use geomsub::io::{
    read_pyramid, read_sequence, write_pyramid, write_sequence, write_sequence_with_params, PyramidWriteOptions,
};
use geomsub::multiscale::{estimate_regularity, stability_experiment, StabilityConfig};
use geomsub::{
    contractivity_report, decompose as build_pyramid, distance, reconstruct as rebuild, subdivide as refine, threshold,
    Sequence, ThresholdPolicy,
};
use serde_json::json;

use crate::schemes::{mask_from, pyramid_scheme, rule_for};
use crate::{read_text, stdout, write_text, CliError, SchemeArgs};

const DEFAULT_PYRAMID_SCHEME: &str = "fourpoint:0.0625";

fn print_json(value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    stdout(&text)
}

pub fn subdivide(
    input: &str,
    scheme: &SchemeArgs,
    variant: Option<&str>,
    rounds: usize,
    output: Option<&str>,
    emit_params: bool,
) -> Result<(), CliError> {
    let seq = read_sequence(&read_text(input)?)?;
    let rule = rule_for(&seq, scheme.mask.as_deref(), scheme.scheme.as_deref(), variant)?;
    let out = refine(&seq, &rule, rounds)?;
    let text = if emit_params {
        let h = (rule.dilation() as f64).powi(rounds as i32);
        let params: Vec<f64> = (out.first_index()..=out.last_index()).map(|i| i as f64 / h).collect();
        write_sequence_with_params(&out, &params)
    } else {
        write_sequence(&out)
    };
    write_text(output, &text)
}

pub fn analyze(scheme: &SchemeArgs, max_power: usize) -> Result<(), CliError> {
    let mask = mask_from(scheme.mask.as_deref(), scheme.scheme.as_deref())?;
    let report = contractivity_report(&mask, max_power)?;
    print_json(&serde_json::to_value(&report).expect("reports serialize"))
}

pub fn decompose(
    input: &str,
    scheme: &SchemeArgs,
    variant: Option<&str>,
    levels: usize,
    output: Option<&str>,
    compact: bool,
) -> Result<(), CliError> {
    let seq = read_sequence(&read_text(input)?)?;
    if scheme.mask.is_none() && scheme.scheme.is_none() {
        return Err(CliError::Input(
            "one of --mask or --scheme (haar, ...) is required".into(),
        ));
    }
    let ps = pyramid_scheme(&seq, scheme.mask.as_deref(), scheme.scheme.as_deref(), variant)?;
    let pyr = build_pyramid(&seq, &ps, levels)?;
    let opts = PyramidWriteOptions {
        include_bases: !compact,
        compact,
    };
    write_text(output, &write_pyramid(&pyr, opts))
}

fn max_distance(a: &Sequence, b: &Sequence) -> Result<f64, CliError> {
    if a.len() != b.len() || a.first_index() != b.first_index() {
        return Err(CliError::Input(format!(
            "reference covers indices {}..={}, reconstruction {}..={}",
            b.first_index(),
            b.last_index(),
            a.first_index(),
            a.last_index()
        )));
    }
    let mut worst = 0.0f64;
    for (p, q) in a.points().iter().zip(b.points()) {
        worst = worst.max(distance(p, q)?);
    }
    Ok(worst)
}

pub fn reconstruct(input: &str, output: Option<&str>, reference: Option<&str>) -> Result<(), CliError> {
    let seq = rebuild(&read_pyramid(&read_text(input)?)?)?;
    match reference {
        Some(r) => {
            let d = max_distance(&seq, &read_sequence(&read_text(r)?)?)?;
            if let Some(path) = output {
                write_text(Some(path), &write_sequence(&seq))?;
            }
            print_json(&json!({ "max_distance": d }))
        }
        None => write_text(output, &write_sequence(&seq)),
    }
}

pub fn compress(
    input: &str,
    tau: Option<f64>,
    keep_top: Option<f64>,
    scale: f64,
    output: Option<&str>,
) -> Result<(), CliError> {
    let pyr = read_pyramid(&read_text(input)?)?;
    let policy = match (tau, keep_top) {
        (Some(t), None) => ThresholdPolicy::hard(t),
        (None, Some(f)) => ThresholdPolicy::keep_top(f),
        _ => {
            return Err(CliError::Input(
                "exactly one of --threshold or --keep-top is required".into(),
            ))
        }
    }
    .with_scale(scale);
    let (out, stats) = threshold(&pyr, &policy)?;
    eprintln!("{}", serde_json::to_string(&stats).expect("stats serialize"));
    write_text(output, &write_pyramid(&out, PyramidWriteOptions::default()))
}

fn scheme_or_default(scheme: &SchemeArgs) -> SchemeArgs {
    let mut s = scheme.clone();
    if s.mask.is_none() && s.scheme.is_none() {
        s.scheme = Some(DEFAULT_PYRAMID_SCHEME.into());
    }
    s
}

pub fn regularity(input: &str, scheme: &SchemeArgs, variant: Option<&str>, levels: usize) -> Result<(), CliError> {
    let seq = read_sequence(&read_text(input)?)?;
    let s = scheme_or_default(scheme);
    let ps = pyramid_scheme(&seq, s.mask.as_deref(), s.scheme.as_deref(), variant)?;
    let est = estimate_regularity(&build_pyramid(&seq, &ps, levels)?)?;
    print_json(&serde_json::to_value(&est).expect("reports serialize"))
}

pub fn stability(
    input: &str,
    scheme: &SchemeArgs,
    variant: Option<&str>,
    cfg: &StabilityConfig,
) -> Result<(), CliError> {
    let seq = read_sequence(&read_text(input)?)?;
    let s = scheme_or_default(scheme);
    let ps = pyramid_scheme(&seq, s.mask.as_deref(), s.scheme.as_deref(), variant)?;
    let report = stability_experiment(&seq, &ps, cfg)?;
    print_json(&json!({
        "seed": cfg.seed,
        "constant": report.constant,
        "budget": report.budget,
        "ratios": report.ratios,
    }))
}
