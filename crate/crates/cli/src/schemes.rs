use geomsub::io::{parse_variant, read_mask};
use geomsub::{ManifoldKind, Mask, PyramidScheme, Rule, SchemeVariant, Sequence};

use crate::CliError;

/// `chaikin`, `midpoint`, `fourpoint:ω`, `lane-riesenfeld:k`.
pub fn named_mask(name: &str) -> Result<Mask, CliError> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let mask = match (head, arg) {
        ("chaikin", None) => Mask::chaikin(),
        ("midpoint", None) => Mask::midpoint(),
        ("fourpoint" | "four-point", None) => Mask::four_point(1.0 / 16.0)?,
        ("fourpoint" | "four-point", Some(w)) => Mask::four_point(parse_num(w, name)?)?,
        ("lane-riesenfeld", Some(k)) => {
            let k = k.parse::<usize>().map_err(|_| bad_scheme(name))?;
            Mask::lane_riesenfeld(k)?
        }
        _ => return Err(bad_scheme(name)),
    };
    Ok(mask)
}

fn parse_num(s: &str, name: &str) -> Result<f64, CliError> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(bad_scheme(name)),
    }
}

fn bad_scheme(name: &str) -> CliError {
    CliError::Input(format!(
        "unknown scheme '{name}' (expected chaikin, midpoint, fourpoint:<omega> or lane-riesenfeld:<k>)"
    ))
}

/// Mask from `--mask FILE` or `--scheme NAME`; exactly one must be given.
pub fn mask_from(mask: Option<&str>, scheme: Option<&str>) -> Result<Mask, CliError> {
    match (mask, scheme) {
        (Some(path), None) => Ok(read_mask(&crate::read_text(path)?)?),
        (None, Some(name)) => named_mask(name),
        (None, None) => Err(CliError::Input("one of --mask or --scheme is required".into())),
        (Some(_), Some(_)) => Err(CliError::Input("--mask and --scheme are mutually exclusive".into())),
    }
}

fn default_variant(seq: &Sequence) -> &'static str {
    if matches!(seq.kind(), ManifoldKind::Euclidean(_)) {
        "linear"
    } else {
        "logexp"
    }
}

/// The refinement rule for `subdivide`. `geodesic` selects the
/// midpoint-insertion-plus-averaging pipeline of a Lane-Riesenfeld scheme.
pub fn rule_for(
    seq: &Sequence,
    mask: Option<&str>,
    scheme: Option<&str>,
    variant: Option<&str>,
) -> Result<Rule, CliError> {
    if variant == Some("geodesic") {
        let rounds = match scheme {
            Some("midpoint") => 0,
            Some("chaikin") => 1,
            Some(s) if s.starts_with("lane-riesenfeld:") => s["lane-riesenfeld:".len()..]
                .parse::<usize>()
                .map_err(|_| bad_scheme(s))?,
            _ => {
                return Err(CliError::Input(
                    "--variant geodesic needs --scheme midpoint, chaikin or lane-riesenfeld:<k>".into(),
                ))
            }
        };
        return Ok(Rule::lane_riesenfeld_pipeline(rounds));
    }
    let mask = mask_from(mask, scheme)?;
    let v = parse_variant(variant.unwrap_or(default_variant(seq)), Some(&mask))?;
    Ok(Rule::masked(mask, v)?)
}

/// `haar`, or an interpolatory mask given by name or file.
pub fn pyramid_scheme(
    seq: &Sequence,
    mask: Option<&str>,
    scheme: Option<&str>,
    variant: Option<&str>,
) -> Result<PyramidScheme, CliError> {
    if scheme == Some("haar") {
        if mask.is_some() {
            return Err(CliError::Input("--mask and --scheme are mutually exclusive".into()));
        }
        return Ok(PyramidScheme::Haar);
    }
    let mask = mask_from(mask, scheme)?;
    let variant: SchemeVariant = parse_variant(variant.unwrap_or(default_variant(seq)), Some(&mask))?;
    Ok(PyramidScheme::Interpolatory { mask, variant })
}
