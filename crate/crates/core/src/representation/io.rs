use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Representation;
use crate::error::{Error, Result};
use crate::linalg::{c, CMat};
use crate::presentation::{Gen, PresentationKind};

pub const REP_SCHEMA_VERSION: u32 = 1;

/// On-disk form: complex entries as `[re, im]`, matrices as row lists,
/// keyed by generator name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    pub schema_version: u32,
    pub presentation: PresentationKind,
    pub r: usize,
    pub tol: f64,
    pub images: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
}

impl RepFile {
    pub fn from_rep(rep: &Representation) -> RepFile {
        let g = rep.genus();
        let images = rep
            .images
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let rows = (0..m.nrows())
                    .map(|row| (0..m.ncols()).map(|col| [m[(row, col)].re, m[(row, col)].im]).collect())
                    .collect();
                (Gen::from_index(i, g).to_string(), rows)
            })
            .collect();
        RepFile { schema_version: REP_SCHEMA_VERSION, presentation: rep.target, r: rep.r, tol: rep.tol, images }
    }

    pub fn to_rep(&self) -> Result<Representation> {
        if self.schema_version != REP_SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "representation schema version {} is not supported (expected {REP_SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let g = self.presentation.genus();
        crate::presentation::check_genus(g)?;
        let n = match self.presentation {
            PresentationKind::Surface(_) => 2 * g,
            PresentationKind::UnitTangent(_) => 2 * g + 1,
        };
        if self.images.len() != n {
            return Err(Error::Parse(format!("expected {n} generator images, found {}", self.images.len())));
        }
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let name = Gen::from_index(i, g).to_string();
            let rows = self.images.get(&name).ok_or_else(|| Error::Parse(format!("missing image for {name}")))?;
            if rows.len() != self.r || rows.iter().any(|row| row.len() != self.r) {
                return Err(Error::Parse(format!("image for {name} is not {0}x{0}", self.r)));
            }
            images.push(CMat::from_fn(self.r, self.r, |i, j| c(rows[i][j][0], rows[i][j][1])));
        }
        Representation::new(self.presentation, images, self.tol)
    }
}

impl Representation {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&RepFile::from_rep(self))?)
    }

    pub fn from_json(s: &str) -> Result<Representation> {
        let f: RepFile = serde_json::from_str(s)?;
        f.to_rep()
    }
}
