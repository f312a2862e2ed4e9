//! JSON coefficient files shared by zonal functions and kernels:
//! `{"family": ..., "m": ..., "coeffs": [...]}` with an optional `per_j`
//! array of per-degree coefficient lists for kernels.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::mercer::MercerKernel;
use crate::space::{catalog, Family, SpaceId};
use crate::zonal::ZonalFunction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffFile {
    pub family: String,
    pub m: u32,
    #[serde(default)]
    pub coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_j: Option<Vec<Vec<f64>>>,
}

impl CoeffFile {
    pub fn new(id: SpaceId, coeffs: Vec<f64>) -> Self {
        Self {
            family: id.family.name().to_string(),
            m: id.m,
            coeffs,
            per_j: None,
        }
    }

    pub fn space_id(&self) -> Result<SpaceId> {
        SpaceId::new(self.family.parse::<Family>()?, self.m)
    }
}

pub fn parse_coeff_file(text: &str) -> Result<CoeffFile> {
    serde_json::from_str(text).map_err(|e| invalid("json", e.to_string()))
}

pub fn zonal_from_file(file: &CoeffFile) -> Result<ZonalFunction<f64>> {
    if file.per_j.is_some() {
        return Err(invalid("per_j", "zonal functions take degree coefficients only"));
    }
    ZonalFunction::new(catalog(file.space_id()?), file.coeffs.clone())
}

/// Builds a kernel; per-degree lists are collapsed to their maximum, which is
/// reported in the returned warnings.
pub fn kernel_from_file(file: &CoeffFile) -> Result<(MercerKernel<f64>, Vec<String>)> {
    let space = catalog(file.space_id()?);
    let mut warnings = Vec::new();
    let coeffs = match &file.per_j {
        None => file.coeffs.clone(),
        Some(per_j) => {
            warnings.push(format!(
                "per_j coefficients collapsed to their per-degree maximum over {} degrees",
                per_j.len()
            ));
            if !file.coeffs.is_empty() {
                warnings.push("coeffs ignored in favour of per_j".into());
            }
            per_j
                .iter()
                .enumerate()
                .map(|(k, row)| {
                    row.iter()
                        .copied()
                        .reduce(f64::max)
                        .ok_or_else(|| invalid("per_j", format!("degree {k} has no entries")))
                })
                .collect::<Result<Vec<f64>>>()?
        }
    };
    let mut kernel = MercerKernel::new(space, coeffs)?;
    kernel.notes.extend(warnings.iter().cloned());
    Ok((kernel, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_collapse() {
        let id = SpaceId::new(Family::ComplexProjective, 4).unwrap();
        let f = CoeffFile::new(id, vec![1.0, 0.5]);
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"complex-projective\""));
        let back = parse_coeff_file(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(zonal_from_file(&back).unwrap().coeffs, vec![1.0, 0.5]);

        let k = parse_coeff_file(r#"{"family":"sphere","m":2,"per_j":[[1.0],[0.2,0.5,0.1]]}"#).unwrap();
        let (kernel, warnings) = kernel_from_file(&k).unwrap();
        assert_eq!(kernel.coeffs, vec![1.0, 0.5]);
        assert_eq!(warnings.len(), 1);
        assert!(zonal_from_file(&k).is_err());
        assert!(parse_coeff_file(r#"{"family":"torus","m":2,"coeffs":[1]}"#)
            .unwrap()
            .space_id()
            .is_err());
    }
}
