//! JSON file formats for geographies and decorated nerves.
//!
//! Output is pretty-printed with keys sorted and a trailing newline, so
//! `serialize(parse(f))` is a fixed point.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_rat, parse_rat, GeomError, QVector};
use crate::geography::{ChamberRecord, FaceRecord, Geography, GeographyError, ModelLabel};
use crate::program::{DecoratedNerve, LinkType, MfsVertex, ProgramError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format_version {0}")]
    Version(u32),
    #[error("cannot tell the file kind: expected a \"rays\" or a \"vertices\" key")]
    UnknownKind,
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Geography(#[from] GeographyError),
    #[error(transparent)]
    Program(#[from] ProgramError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // strip serde_json's own " at line L column C" suffix
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelEntry {
    pub id: String,
    pub name: String,
    pub picard_rank: u32,
    pub is_point: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChamberEntry {
    pub rays: Vec<usize>,
    pub model: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceEntry {
    pub rays: Vec<usize>,
    pub model: String,
    pub big: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeographyFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub ambient_dim: usize,
    pub rays: Vec<Vec<String>>,
    pub models: Vec<ModelEntry>,
    pub chambers: Vec<ChamberEntry>,
    pub faces: Vec<FaceEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apex_model: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: String,
    #[serde(rename = "X_model")]
    pub x_model: String,
    #[serde(rename = "S_model")]
    pub s_model: String,
    #[serde(rename = "rho_S")]
    pub rho_s: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub a: String,
    pub b: String,
    #[serde(rename = "T_model")]
    pub t_model: String,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub link_type: Option<LinkType>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopEntry {
    pub face: String,
    pub cycle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NerveFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
    pub two_simplices: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_loops: Option<Vec<LoopEntry>>,
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("file types serialize");
    let mut s = serde_json::to_string_pretty(&sort_keys(v)).expect("values serialize");
    s.push('\n');
    s
}

fn sort_keys(v: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match v {
        Value::Object(m) => {
            let mut entries: Vec<_> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sort_keys(v))).collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

fn check_version(v: u32) -> Result<(), FormatError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(FormatError::Version(v))
    }
}

impl GeographyFile {
    pub fn parse(text: &str) -> Result<GeographyFile, FormatError> {
        let f: GeographyFile = serde_json::from_str(text)?;
        check_version(f.format_version)?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn to_geography(&self) -> Result<Geography, FormatError> {
        let rays = self
            .rays
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_rat(s))
                    .collect::<Result<Vec<_>, _>>()
                    .map(QVector::new)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let models = self
            .models
            .iter()
            .map(|m| ModelLabel {
                id: m.id.clone(),
                display_name: m.name.clone(),
                picard_rank: m.picard_rank,
                is_point: m.is_point,
            })
            .collect();
        let chambers = self
            .chambers
            .iter()
            .map(|c| ChamberRecord {
                rays: c.rays.clone(),
                model: c.model.clone(),
            })
            .collect();
        let faces = self
            .faces
            .iter()
            .map(|f| FaceRecord {
                rays: f.rays.clone(),
                model: f.model.clone(),
                big: f.big,
            })
            .collect();
        Ok(Geography::new(
            self.ambient_dim,
            rays,
            models,
            chambers,
            faces,
            self.apex_model.clone(),
        )?)
    }

    pub fn from_geography(g: &Geography, provenance: Option<String>) -> GeographyFile {
        GeographyFile {
            format_version: FORMAT_VERSION,
            provenance,
            ambient_dim: g.ambient_dim(),
            rays: g
                .rays()
                .iter()
                .map(|r| r.coords().iter().map(format_rat).collect())
                .collect(),
            models: g
                .models()
                .iter()
                .map(|m| ModelEntry {
                    id: m.id.clone(),
                    name: m.display_name.clone(),
                    picard_rank: m.picard_rank,
                    is_point: m.is_point,
                })
                .collect(),
            chambers: g
                .chambers()
                .iter()
                .map(|c| ChamberEntry {
                    rays: c.rays.clone(),
                    model: c.model.clone(),
                })
                .collect(),
            faces: g
                .faces()
                .iter()
                .map(|f| FaceEntry {
                    rays: f.rays.clone(),
                    model: f.model.clone(),
                    big: f.big,
                })
                .collect(),
            apex_model: g.apex_model().map(str::to_string),
        }
    }
}

impl NerveFile {
    pub fn parse(text: &str) -> Result<NerveFile, FormatError> {
        let f: NerveFile = serde_json::from_str(text)?;
        check_version(f.format_version)?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn to_nerve(&self) -> Result<DecoratedNerve, FormatError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| MfsVertex {
                id: v.id.clone(),
                chamber: None,
                x_model: v.x_model.clone(),
                s_model: v.s_model.clone(),
                rho_s: v.rho_s,
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| (e.a.clone(), e.b.clone(), e.t_model.clone(), e.link_type))
            .collect();
        let loops = self
            .residual_loops
            .iter()
            .flatten()
            .map(|l| (l.face.clone(), l.cycle.clone()))
            .collect();
        Ok(DecoratedNerve::from_parts(
            vertices,
            edges,
            self.two_simplices.clone(),
            loops,
        )?)
    }

    /// Nerve file of a decorated nerve, edges in nerve order with types.
    pub fn from_nerve(n: &DecoratedNerve, provenance: Option<String>) -> NerveFile {
        let id = |v: usize| n.vertices[v].id.clone();
        NerveFile {
            format_version: FORMAT_VERSION,
            provenance,
            vertices: n
                .vertices
                .iter()
                .map(|v| VertexEntry {
                    id: v.id.clone(),
                    x_model: v.x_model.clone(),
                    s_model: v.s_model.clone(),
                    rho_s: v.rho_s,
                })
                .collect(),
            edges: n
                .edges
                .iter()
                .map(|e| EdgeEntry {
                    a: id(e.a),
                    b: id(e.b),
                    t_model: e.t_model.clone(),
                    link_type: Some(e.link_type),
                })
                .collect(),
            two_simplices: n
                .two_simplices()
                .iter()
                .map(|t| [id(t[0]), id(t[1]), id(t[2])])
                .collect(),
            residual_loops: if n.residual_loops.is_empty() {
                None
            } else {
                Some(
                    n.residual_loops
                        .iter()
                        .map(|l| LoopEntry {
                            face: l.face.clone(),
                            cycle: l.cycle.iter().map(|&v| id(v)).collect(),
                        })
                        .collect(),
                )
            },
        }
    }
}

/// Either file kind, told apart by its keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputFile {
    Geography(GeographyFile),
    Nerve(NerveFile),
}

impl InputFile {
    pub fn parse(text: &str) -> Result<InputFile, FormatError> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let obj = v.as_object();
        if obj.is_some_and(|o| o.contains_key("vertices")) {
            Ok(InputFile::Nerve(NerveFile::parse(text)?))
        } else if obj.is_some_and(|o| o.contains_key("rays")) {
            Ok(InputFile::Geography(GeographyFile::parse(text)?))
        } else {
            Err(FormatError::UnknownKind)
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            InputFile::Geography(g) => g.to_json(),
            InputFile::Nerve(n) => n.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{
  "ambient_dim": 2,
  "chambers": [
    {
      "model": "X",
      "rays": [0, 1]
    }
  ],
  "faces": [],
  "format_version": 1,
  "models": [
    {
      "id": "X",
      "is_point": false,
      "name": "X",
      "picard_rank": 2
    }
  ],
  "rays": [["1", "0"], ["2/4", "1"]]
}"#;

    #[test]
    fn geography_round_trip() {
        let f = GeographyFile::parse(TINY).unwrap();
        let g = f.to_geography().unwrap();
        assert_eq!(g.rays().len(), 2);
        let again = GeographyFile::from_geography(&g, None);
        assert_eq!(again.rays[1], vec!["1/2".to_string(), "1".to_string()]);
        let text = again.to_json();
        assert!(text.ends_with("}\n"));
        assert_eq!(GeographyFile::parse(&text).unwrap().to_json(), text);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = TINY.replacen("\"faces\"", "\"extra\": 1, \"faces\"", 1);
        match GeographyFile::parse(&bad) {
            Err(FormatError::Syntax { message, .. }) => assert!(message.contains("extra")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn truncated_input_has_location() {
        let cut = &TINY[..TINY.len() / 2];
        match InputFile::parse(cut) {
            Err(FormatError::Syntax { line, column, .. }) => assert!(line > 1 && column > 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn version_checked() {
        let bad = TINY.replace("\"format_version\": 1", "\"format_version\": 2");
        assert!(matches!(GeographyFile::parse(&bad), Err(FormatError::Version(2))));
    }

    #[test]
    fn nerve_file_types() {
        let text = r#"{"format_version":1,"vertices":[
            {"id":"a","X_model":"X","S_model":"pt","rho_S":0},
            {"id":"b","X_model":"Y","S_model":"P1","rho_S":1}],
            "edges":[{"a":"b","b":"a","T_model":"pt","type":"III"}],
            "two_simplices":[]}"#;
        let n = NerveFile::parse(text).unwrap().to_nerve().unwrap();
        assert_eq!(n.edges[0].link_type, LinkType::I);
        let wrong = text.replace("\"III\"", "\"I\"");
        assert!(matches!(
            NerveFile::parse(&wrong).unwrap().to_nerve(),
            Err(FormatError::Program(ProgramError::TypeMismatch(..)))
        ));
        let bad = text.replace("\"III\"", "\"V\"");
        assert!(NerveFile::parse(&bad).is_err());
        let f = NerveFile::from_nerve(&n, None);
        assert_eq!(f.edges[0].a, "a");
    }
}
