//! JSON file formats for sequences, masks and pyramids.
//!
//! Numbers are written in shortest round-trip form, so reading a written
//! file reproduces the data bit for bit.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix_from_row_major;
use crate::manifold::{ManifoldKind, ManifoldPoint, TangentVector};
use crate::mask::Mask;
use crate::multiscale::{predict, reconstruct, Pyramid, PyramidScheme};
use crate::sequence::{Boundary, Sequence};
use crate::subdivision::{BasePointRule, SchemeVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifoldName {
    Euclidean,
    Sphere,
    So3,
    Spd,
}

impl ManifoldName {
    pub fn kind(self, dim: usize) -> Result<ManifoldKind> {
        Ok(match self {
            ManifoldName::Euclidean if dim >= 1 => ManifoldKind::Euclidean(dim),
            ManifoldName::Sphere if dim >= 1 => ManifoldKind::Sphere(dim),
            ManifoldName::So3 if dim == 3 => ManifoldKind::Rotation3,
            ManifoldName::Spd if dim >= 1 => ManifoldKind::Spd(dim),
            _ => return Err(Error::Parse(format!("dimension {dim} is not valid for {self:?}"))),
        })
    }

    /// Name and `dim` field for a kind.
    pub fn of(kind: ManifoldKind) -> (Self, usize) {
        match kind {
            ManifoldKind::Euclidean(d) => (ManifoldName::Euclidean, d),
            ManifoldKind::Sphere(d) => (ManifoldName::Sphere, d),
            ManifoldKind::Rotation3 => (ManifoldName::So3, 3),
            ManifoldKind::Spd(n) => (ManifoldName::Spd, n),
        }
    }
}

/// Number of values per point in files: ambient coordinates, quaternions,
/// or full row-major matrices.
pub fn external_len(kind: ManifoldKind) -> usize {
    match kind {
        ManifoldKind::Spd(n) => n * n,
        other => other.coord_len(),
    }
}

/// Point from its file representation.
pub fn point_from_external(kind: ManifoldKind, values: &[f64]) -> Result<ManifoldPoint> {
    if values.len() != external_len(kind) {
        return Err(Error::InvalidPoint(format!(
            "{kind} points need {} numbers, got {}",
            external_len(kind),
            values.len()
        )));
    }
    match kind {
        ManifoldKind::Spd(n) => {
            let m: DMatrix<f64> = matrix_from_row_major(n, values);
            ManifoldPoint::spd(&m)
        }
        _ => ManifoldPoint::new(kind, values.to_vec()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    pub manifold: ManifoldName,
    pub dim: usize,
    pub boundary: Boundary,
    pub points: Vec<Vec<f64>>,
    /// Index of the first point; omitted when zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<i64>,
    /// Parameters `i / N^k` of the points, written on request.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
}

impl SequenceFile {
    pub fn from_sequence(seq: &Sequence) -> Self {
        let (manifold, dim) = ManifoldName::of(seq.kind());
        SequenceFile {
            manifold,
            dim,
            boundary: seq.boundary(),
            points: seq.points().iter().map(ManifoldPoint::external_coords).collect(),
            start: (seq.first_index() != 0).then_some(seq.first_index()),
            params: None,
        }
    }

    pub fn kind(&self) -> Result<ManifoldKind> {
        self.manifold.kind(self.dim)
    }

    pub fn to_sequence(&self) -> Result<Sequence> {
        let kind = self.kind()?;
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, v)| point_from_external(kind, v).map_err(|e| e.at_index(i as i64)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Sequence::new(points, self.boundary)?.with_first_index(self.start.unwrap_or(0)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskFile {
    pub dilation: usize,
    pub offset: i64,
    pub coefficients: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl MaskFile {
    pub fn from_mask(mask: &Mask) -> Self {
        MaskFile {
            dilation: mask.dilation(),
            offset: mask.offset(),
            coefficients: mask.coeffs().to_vec(),
            name: mask.name().map(str::to_owned),
        }
    }

    /// Affine invariance is checked here.
    pub fn to_mask(&self) -> Result<Mask> {
        let m = Mask::new(self.dilation, self.offset, self.coefficients.clone())?;
        Ok(match &self.name {
            Some(n) => m.with_name(n.clone()),
            None => m,
        })
    }
}

/// Textual names of scheme variants, as used in files and on the command line.
pub fn variant_name(v: SchemeVariant) -> &'static str {
    match v {
        SchemeVariant::Linear => "linear",
        SchemeVariant::Frechet => "frechet",
        SchemeVariant::LogExp(BasePointRule::FloorPoint) => "logexp-floor",
        SchemeVariant::LogExp(BasePointRule::EdgeMidpoint) => "logexp-edge",
        SchemeVariant::Projection => "projection",
    }
}

/// Parses a variant name; plain `logexp` picks the canonical base points of `mask`.
pub fn parse_variant(name: &str, mask: Option<&Mask>) -> Result<SchemeVariant> {
    Ok(match name {
        "linear" => SchemeVariant::Linear,
        "frechet" => SchemeVariant::Frechet,
        "logexp" => SchemeVariant::LogExp(mask.map_or(BasePointRule::FloorPoint, BasePointRule::canonical_for)),
        "logexp-floor" => SchemeVariant::LogExp(BasePointRule::FloorPoint),
        "logexp-edge" => SchemeVariant::LogExp(BasePointRule::EdgeMidpoint),
        "projection" => SchemeVariant::Projection,
        other => return Err(Error::Parse(format!("unknown variant '{other}'"))),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SchemeFile {
    Haar,
    Interpolatory { mask: MaskFile, variant: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetailEntry {
    pub base_index: usize,
    pub vec: Vec<f64>,
    /// File coordinates of the base point; recomputed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PyramidFile {
    pub scheme: SchemeFile,
    pub coarse: SequenceFile,
    /// Levels `1..=M`, coarsest first. Missing entries are zero vectors.
    pub details: Vec<Vec<DetailEntry>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PyramidWriteOptions {
    /// Store base points; without them they are recomputed on reading.
    pub include_bases: bool,
    /// Leave out zero detail vectors.
    pub compact: bool,
}

impl Default for PyramidWriteOptions {
    fn default() -> Self {
        PyramidWriteOptions {
            include_bases: true,
            compact: false,
        }
    }
}

impl PyramidFile {
    pub fn from_pyramid(pyr: &Pyramid, opts: PyramidWriteOptions) -> Self {
        let scheme = match pyr.scheme() {
            PyramidScheme::Haar => SchemeFile::Haar,
            PyramidScheme::Interpolatory { mask, variant } => SchemeFile::Interpolatory {
                mask: MaskFile::from_mask(mask),
                variant: variant_name(*variant).to_owned(),
            },
        };
        let details = pyr
            .details()
            .iter()
            .map(|level| {
                level
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| !(opts.compact && q.is_zero()))
                    .map(|(i, q)| DetailEntry {
                        base_index: i,
                        vec: q.vec().to_vec(),
                        base: opts.include_bases.then(|| q.base().external_coords()),
                    })
                    .collect()
            })
            .collect();
        PyramidFile {
            scheme,
            coarse: SequenceFile::from_sequence(pyr.coarse()),
            details,
        }
    }

    pub fn to_pyramid(&self) -> Result<Pyramid> {
        let scheme = match &self.scheme {
            SchemeFile::Haar => PyramidScheme::Haar,
            SchemeFile::Interpolatory { mask, variant } => {
                let mask = mask.to_mask()?;
                let variant = parse_variant(variant, Some(&mask))?;
                PyramidScheme::Interpolatory { mask, variant }
            }
        };
        let coarse = self.coarse.to_sequence()?;
        let kind = coarse.kind();
        let mut cur = coarse.clone();
        let mut details = Vec::with_capacity(self.details.len());
        for (j, entries) in self.details.iter().enumerate() {
            let level = j + 1;
            let count = scheme.level_len(cur.len(), cur.boundary());
            let mut slots: Vec<Option<&DetailEntry>> = vec![None; count];
            for e in entries {
                match slots.get_mut(e.base_index) {
                    Some(slot @ None) => *slot = Some(e),
                    Some(Some(_)) => {
                        return Err(Error::Parse(format!(
                            "duplicate detail {} at level {level}",
                            e.base_index
                        )))
                    }
                    None => {
                        return Err(Error::ShapeMismatch(format!(
                            "detail index {} out of range at level {level} ({count} details)",
                            e.base_index
                        )))
                    }
                }
            }
            let needs_bases = slots.iter().any(|s| s.is_none_or(|e| e.base.is_none()));
            let computed = if needs_bases {
                Some(match &scheme {
                    PyramidScheme::Haar => cur.points().to_vec(),
                    PyramidScheme::Interpolatory { mask, variant } => predict(&cur, mask, *variant)?.into_points(),
                })
            } else {
                None
            };
            let level_details = slots
                .iter()
                .enumerate()
                .map(|(i, slot)| {
                    let base = match slot.and_then(|e| e.base.as_ref()) {
                        Some(b) => point_from_external(kind, b)?,
                        None => computed.as_ref().expect("computed bases")[i].clone(),
                    };
                    match slot {
                        Some(e) => TangentVector::new(base, e.vec.clone()),
                        None => Ok(TangentVector::zero(base)),
                    }
                    .map_err(|err| err.at_index(i as i64).at_level(level))
                })
                .collect::<Result<Vec<_>>>()?;
            let step = Pyramid::new(scheme.clone(), cur.clone(), vec![level_details.clone()])?;
            if j + 1 < self.details.len() {
                cur = reconstruct(&step)?;
            }
            details.push(level_details);
        }
        Pyramid::new(scheme, coarse, details)
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn emit<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}

pub fn read_sequence(text: &str) -> Result<Sequence> {
    parse::<SequenceFile>(text)?.to_sequence()
}

pub fn write_sequence(seq: &Sequence) -> String {
    emit(&SequenceFile::from_sequence(seq))
}

/// Sequence file carrying the parameter of each point.
pub fn write_sequence_with_params(seq: &Sequence, params: &[f64]) -> String {
    let mut file = SequenceFile::from_sequence(seq);
    file.params = Some(params.to_vec());
    emit(&file)
}

pub fn read_mask(text: &str) -> Result<Mask> {
    parse::<MaskFile>(text)?.to_mask()
}

pub fn write_mask(mask: &Mask) -> String {
    emit(&MaskFile::from_mask(mask))
}

pub fn read_pyramid(text: &str) -> Result<Pyramid> {
    parse::<PyramidFile>(text)?.to_pyramid()
}

pub fn write_pyramid(pyr: &Pyramid, opts: PyramidWriteOptions) -> String {
    emit(&PyramidFile::from_pyramid(pyr, opts))
}
