use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arg::{Arg, Edge, LabelId, MatchParams, Vertex};
use crate::error::{Error, Result};
use crate::raster::Rgb;

use super::strokes::Rect;

pub const MODEL_PACK_VERSION: u32 = 1;

/// A reusable model: the labelled model graph in the frame of the stroke
/// rectangle, plus everything needed to apply it to another image.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPack {
    pub model_arg: Arg,
    /// Stroke rectangle in source-image pixels.
    pub rect: Rect,
    pub label_table: BTreeMap<LabelId, Rgb>,
    pub params_default: MatchParams,
    pub format_version: u32,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct LabelEntry {
    pub id: LabelId,
    pub color: Rgb,
}

#[derive(Serialize, Deserialize)]
struct ModelPackFile {
    version: u32,
    rect: Rect,
    d_max: f64,
    label_table: Vec<LabelEntry>,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    params_default: MatchParams,
}

impl ModelPack {
    /// Checks the cross-field invariants: every vertex labelled with a label
    /// from the table, and `d_max` equal to the rectangle diagonal.
    pub fn validate(&self) -> Result<()> {
        if self.format_version != MODEL_PACK_VERSION {
            return Err(Error::Format(format!("unsupported model pack version {}", self.format_version)));
        }
        if self.model_arg.is_empty() {
            return Err(Error::Format("model pack has no vertices".into()));
        }
        for v in self.model_arg.vertices() {
            match v.label {
                None => return Err(Error::Format(format!("model vertex {} has no label", v.id))),
                Some(l) if !self.label_table.contains_key(&l) => {
                    return Err(Error::Format(format!("model vertex {} has unknown label {l}", v.id)))
                }
                Some(_) => {}
            }
        }
        if (self.model_arg.d_max() - self.rect.diagonal()).abs() > 1e-9 * self.rect.diagonal() {
            return Err(Error::Format(format!(
                "d_max {} does not match the rect diagonal {}",
                self.model_arg.d_max(),
                self.rect.diagonal()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ModelPackFile {
            version: self.format_version,
            rect: self.rect,
            d_max: self.model_arg.d_max(),
            label_table: self.label_table.iter().map(|(&id, &color)| LabelEntry { id, color }).collect(),
            vertices: self.model_arg.vertices().to_vec(),
            edges: self.model_arg.edges().to_vec(),
            params_default: self.params_default,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<ModelPack> {
        let file: ModelPackFile = serde_json::from_str(text)?;
        Self::from_file(file)
    }

    pub fn from_value(value: serde_json::Value) -> Result<ModelPack> {
        Self::from_file(serde_json::from_value(value)?)
    }

    pub fn to_value(&self) -> Result<serde_json::Value> {
        Ok(serde_json::from_str(&self.to_json()?)?)
    }

    fn from_file(file: ModelPackFile) -> Result<ModelPack> {
        let arity = file.vertices.first().map_or(3, |v| v.mu.len());
        let mut label_table = BTreeMap::new();
        for e in file.label_table {
            if label_table.insert(e.id, e.color).is_some() {
                return Err(Error::Format(format!("duplicate label {} in label_table", e.id)));
            }
        }
        let rect = Rect::new(file.rect.x, file.rect.y, file.rect.width, file.rect.height)?;
        let pack = ModelPack {
            model_arg: Arg::new(file.d_max, arity, file.vertices, file.edges)?,
            rect,
            label_table,
            params_default: file.params_default,
            format_version: file.version,
        };
        pack.validate()?;
        Ok(pack)
    }
}
