//! `{"matrix": [[...]], "n_plus": k}` input files.

use std::path::Path;

use gapminmax_core::linop::{assemble_block, BlockOperator};
use gapminmax_core::matrix::Matrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub matrix: Vec<Vec<f64>>,
    pub n_plus: usize,
}

impl MatrixFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(&e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
        Self::from_json(&text)
    }

    pub fn operator(&self) -> Result<BlockOperator> {
        let full = Matrix::from_rows(&self.matrix)?;
        Ok(assemble_block(&full, self.n_plus)?)
    }
}
