//! JSON model files.

use std::fs;
use std::path::Path;

use maxtile_core::maxent::{Convergence, FixedLine};
use maxtile_core::{AxisGroups, Family, Group, MaxEntModel};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("unsupported model format version {0}, expected {FORMAT_VERSION}")]
    Version(u32),
    #[error("unknown family `{0}`")]
    Family(String),
    #[error("{0} groups do not partition the free lines")]
    Groups(&'static str),
    #[error(transparent)]
    Model(#[from] maxtile_core::ModelError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    /// Target marginal shared by the members.
    pub value: f64,
    pub multiplicity: usize,
    pub multiplier: f64,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedRecord {
    pub index: usize,
    pub value: u8,
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub iterations: usize,
    /// Squared gradient norm over the number of multipliers; absent if not finite.
    pub gradient_norm: Option<f64>,
    pub dual_value: Option<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub family: String,
    pub n_rows: usize,
    pub n_cols: usize,
    pub row_groups: Vec<GroupRecord>,
    pub col_groups: Vec<GroupRecord>,
    pub fixed_rows: Vec<FixedRecord>,
    pub fixed_cols: Vec<FixedRecord>,
    pub convergence: ConvergenceRecord,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn records(groups: &AxisGroups, lambdas: &[f64]) -> Vec<GroupRecord> {
    groups
        .groups()
        .iter()
        .zip(lambdas)
        .map(|(g, &l)| GroupRecord {
            value: g.value,
            multiplicity: g.multiplicity(),
            multiplier: l,
            members: g.members.clone(),
        })
        .collect()
}

fn fixed(lines: &[FixedLine]) -> Vec<FixedRecord> {
    lines
        .iter()
        .map(|f| FixedRecord {
            index: f.index,
            value: u8::from(f.value),
            order: f.order,
        })
        .collect()
}

impl ModelFile {
    pub fn from_model(model: &MaxEntModel) -> Self {
        let (m, n) = model.shape();
        let c = model.convergence();
        ModelFile {
            format_version: FORMAT_VERSION,
            family: model.family().name().to_string(),
            n_rows: m,
            n_cols: n,
            row_groups: records(model.row_groups(), model.row_lambdas()),
            col_groups: records(model.col_groups(), model.col_lambdas()),
            fixed_rows: fixed(model.fixed_rows()),
            fixed_cols: fixed(model.fixed_cols()),
            convergence: ConvergenceRecord {
                iterations: c.iterations,
                gradient_norm: finite(c.gradient_norm),
                dual_value: finite(c.dual_value),
                converged: c.converged,
            },
        }
    }

    pub fn to_model(&self) -> Result<MaxEntModel, ModelFileError> {
        if self.format_version != FORMAT_VERSION {
            return Err(ModelFileError::Version(self.format_version));
        }
        let family = Family::from_name(&self.family)
            .ok_or_else(|| ModelFileError::Family(self.family.clone()))?;
        let axis = |n: usize, recs: &[GroupRecord], what| {
            let groups = recs
                .iter()
                .map(|r| {
                    if r.members.len() != r.multiplicity {
                        return Err(ModelFileError::Groups(what));
                    }
                    Ok(Group {
                        value: r.value,
                        members: r.members.clone(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            AxisGroups::from_groups(n, groups).ok_or(ModelFileError::Groups(what))
        };
        let lines = |recs: &[FixedRecord]| -> Vec<FixedLine> {
            recs.iter()
                .map(|r| FixedLine {
                    index: r.index,
                    value: r.value != 0,
                    order: r.order,
                })
                .collect()
        };
        let c = &self.convergence;
        Ok(MaxEntModel::from_parts(
            family,
            axis(self.n_rows, &self.row_groups, "row")?,
            axis(self.n_cols, &self.col_groups, "column")?,
            self.row_groups.iter().map(|r| r.multiplier).collect(),
            self.col_groups.iter().map(|r| r.multiplier).collect(),
            lines(&self.fixed_rows),
            lines(&self.fixed_cols),
            Convergence {
                iterations: c.iterations,
                gradient_norm: c.gradient_norm.unwrap_or(f64::NAN),
                dual_value: c.dual_value.unwrap_or(f64::NAN),
                converged: c.converged,
            },
        )?)
    }
}

pub fn save_model(model: &MaxEntModel, path: &Path) -> Result<(), ModelFileError> {
    let mut text = serde_json::to_string_pretty(&ModelFile::from_model(model))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<MaxEntModel, ModelFileError> {
    let file: ModelFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    file.to_model()
}
